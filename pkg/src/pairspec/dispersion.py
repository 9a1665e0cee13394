"""Refractive index, wavenumber and inverse group velocity of the nonlinear crystals.

Sellmeier coefficient sets are shipped as JSON data files (one per crystal)
and evaluated here.  Three formula variants cover the shipped crystals; the
registry keys them by algebraic structure so a coefficient file is
self-describing.  All formulas take the vacuum wavelength in micrometres.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

import numpy as np

from .constants import SPEED_OF_LIGHT, UM
from .errors import OutOfValidityRange, StencilOutOfRange, UnknownPolarizationAxis

__all__ = [
    "FORMULAS",
    "SellmeierSet",
    "CrystalModel",
    "Polarization",
    "WaveSpec",
    "refractive_index",
    "wavenumber",
    "inverse_group_velocity",
]


def _two_pole(c: Sequence[float], l2):
    a, b, c1, d, e = c
    return a + b / (l2 - c1) + d / (l2 - e)


def _pole_plus_ir_pole(c: Sequence[float], l2):
    a, b, c1, d, e = c
    return a + b / (l2 - c1) + d * l2 / (l2 - e)


def _pole_plus_quadratic(c: Sequence[float], l2):
    a, b, c1, d = c
    return a + b / (l2 - c1) + d * l2


#: formula_id -> (arity, n^2(coefficients, lambda_um^2))
FORMULAS: Mapping[str, tuple[int, Callable]] = {
    "two_pole": (5, _two_pole),
    "pole_plus_ir_pole": (5, _pole_plus_ir_pole),
    "pole_plus_quadratic": (4, _pole_plus_quadratic),
}


class Polarization(str, Enum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"

    @classmethod
    def parse(cls, value) -> "Polarization":
        if isinstance(value, cls):
            return value
        aliases = {"o": cls.ORDINARY, "e": cls.EXTRAORDINARY}
        v = str(value).strip().lower()
        if v in aliases:
            return aliases[v]
        return cls(v)


@dataclass(frozen=True)
class SellmeierSet:
    """One polarization axis: formula variant, coefficients, validity window (um)."""

    formula_id: str
    coefficients: tuple
    validity_um: tuple
    crystal: str = ""
    axis: str = ""

    def __post_init__(self):
        if self.formula_id not in FORMULAS:
            raise ValueError(f"unknown formula_id {self.formula_id!r}")
        arity = FORMULAS[self.formula_id][0]
        if len(self.coefficients) != arity:
            raise ValueError(
                f"{self.formula_id} takes {arity} coefficients, got {len(self.coefficients)}"
            )
        lo, hi = self.validity_um
        if not (0 < lo < hi):
            raise ValueError("validity_um must be an increasing positive pair")

    def check_wavelength(self, lam_um) -> None:
        lo, hi = self.validity_um
        lam = np.asarray(lam_um, dtype=float)
        bad = (lam < lo) | (lam > hi) | ~np.isfinite(lam)
        if np.any(bad):
            offending = float(np.atleast_1d(lam[np.atleast_1d(bad)])[0]) if lam.shape else float(lam)
            raise OutOfValidityRange(offending, lo, hi, self.crystal, self.axis)

    def index(self, lam_um):
        """Refractive index n(lambda); raises OutOfValidityRange outside the window."""
        self.check_wavelength(lam_um)
        l2 = np.asarray(lam_um, dtype=float) ** 2
        n2 = FORMULAS[self.formula_id][1](self.coefficients, l2)
        return np.sqrt(n2)


@dataclass(frozen=True)
class CrystalModel:
    """Immutable dispersion model: Sellmeier sets keyed by polarization axis."""

    name: str
    axes: Mapping[str, SellmeierSet]
    source: str = ""

    @classmethod
    def from_dict(cls, payload: Mapping) -> "CrystalModel":
        name = payload["name"]
        axes = {}
        for axis, entry in payload["axes"].items():
            axes[axis] = SellmeierSet(
                formula_id=entry["formula_id"],
                coefficients=tuple(entry["coefficients"]),
                validity_um=tuple(entry["validity_um"]),
                crystal=name,
                axis=axis,
            )
        return cls(name=name, axes=axes, source=payload.get("source", ""))

    @property
    def uniaxial(self) -> bool:
        """True when both principal axes are present (angle tuning possible)."""
        return "ordinary" in self.axes and "extraordinary" in self.axes

    def axis_set(self, axis: str) -> SellmeierSet:
        try:
            return self.axes[axis]
        except KeyError:
            raise UnknownPolarizationAxis(
                f"crystal {self.name!r} has no {axis!r} Sellmeier set "
                f"(available: {sorted(self.axes)})"
            ) from None

    def index_ordinary(self, lam_um):
        return self.axis_set("ordinary").index(lam_um)

    def index_extraordinary(self, lam_um, theta_rad=None):
        """Principal e index, or the angle-tuned index when theta is given.

        The angle-tuned index for propagation at angle theta to the optic axis,

            n_e(theta) = [cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2]^(-1/2),

        needs both principal axes.  A single-axis crystal model (KTP shipped
        with its z axis only) returns the principal index and rejects any
        mixing request other than theta = pi/2, where the formula collapses
        to the principal value anyway.
        """
        e_set = self.axis_set("extraordinary")
        if theta_rad is None:
            return e_set.index(lam_um)
        theta = np.asarray(theta_rad, dtype=float)
        if np.any((theta < 0.0) | (theta > np.pi / 2 + 1e-12)):
            raise ValueError("tuning angle must lie in [0, pi/2]")
        if "ordinary" not in self.axes:
            if np.all(np.abs(theta - np.pi / 2) < 1e-12):
                return e_set.index(lam_um)
            raise UnknownPolarizationAxis(
                f"crystal {self.name!r} has no ordinary axis: the angle-tuned "
                f"index at theta != pi/2 is undefined"
            )
        n_o = self.index_ordinary(lam_um)
        n_e = e_set.index(lam_um)
        return 1.0 / np.sqrt(np.cos(theta) ** 2 / n_o**2 + np.sin(theta) ** 2 / n_e**2)


@dataclass(frozen=True)
class WaveSpec:
    """A single interacting wave: role, polarization and tuning angle."""

    role: str
    polarization: Polarization
    tuning_angle: float | None = None  # radians; ignored for ordinary waves

    def __post_init__(self):
        if self.role not in ("pump", "signal", "idler"):
            raise ValueError(f"unknown wave role {self.role!r}")
        object.__setattr__(self, "polarization", Polarization.parse(self.polarization))


def refractive_index(crystal: CrystalModel, wave: WaveSpec, wavelength_m):
    """Index seen by `wave` at vacuum wavelength `wavelength_m` (SI metres)."""
    lam_um = np.asarray(wavelength_m, dtype=float) / UM
    if wave.polarization is Polarization.ORDINARY:
        return crystal.index_ordinary(lam_um)
    return crystal.index_extraordinary(lam_um, wave.tuning_angle)


def wavenumber(crystal: CrystalModel, wave: WaveSpec, omega):
    """k(omega) = omega * n(omega) / c, propagating dispersion errors."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    wavelength_m = 2.0 * np.pi * SPEED_OF_LIGHT / omega
    return omega / SPEED_OF_LIGHT * refractive_index(crystal, wave, wavelength_m)


def inverse_group_velocity(crystal: CrystalModel, wave: WaveSpec, omega: float,
                           rel_step: float = 1e-5) -> float:
    """k'(omega) = dk/domega by 5-point central difference.

    The relative step is 1e-5 by default; the stencil must stay inside the
    Sellmeier validity window, otherwise StencilOutOfRange is raised.
    """
    w = float(omega)
    h = rel_step * w
    stencil = np.array([w - 2 * h, w - h, w + h, w + 2 * h])
    try:
        k = wavenumber(crystal, wave, stencil)
    except OutOfValidityRange as exc:
        raise StencilOutOfRange(
            f"finite-difference stencil around omega={w:.6g} rad/s leaves the "
            f"validity range: {exc}"
        ) from exc
    return float((k[0] - 8.0 * k[1] + 8.0 * k[2] - k[3]) / (12.0 * h))
