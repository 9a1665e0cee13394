"""Joint spectral amplitude of the photon pair, exact and Gaussian forms.

The exact amplitude on a frequency-offset grid is

    psi(Os, Oi) = (g/sqrt(2 pi)) * ap(Os + Oi) * exp(-i D lc/2) * sinc(D lc/2),

with ap the Gaussian pump spectrum and D the full-dispersion mismatch.
Replacing sinc(x) by exp(-gamma x^2) (gamma = 0.193 matches the widths at
half maximum) and the mismatch by its linearization gives the Gaussian form

    psi_g(Os, Oi) = (g tau_p/sqrt(2 pi)) * exp(i [tau_ps Os + tau_pi Oi])
                    * exp(-(c11 Os^2 + c22 Oi^2 + 2 c12 Os Oi)),

whose real coefficients c_ij make every downstream quantity closed-form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import GAMMA_SINC_FIT
from .errors import DegenerateGroupVelocities, EmptyGrid
from .phasematch import PhaseMatchSolution, mismatch_full

__all__ = [
    "sinc",
    "PumpPulse",
    "GaussCoeffs",
    "JsaGrid",
    "trapezoid_weights",
    "default_axes",
    "jsa_exact",
    "jsa_gauss",
]

_SINC_GUARD = 1e-4


def sinc(x):
    """sin(x)/x with a guarded series below |x| < 1e-4 (exactly 1 at 0)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_GUARD
    x_safe = np.where(small, 1.0, x)
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return np.where(small, series, np.sin(x_safe) / x_safe)


@dataclass(frozen=True)
class PumpPulse:
    """Gaussian pump pulse of duration tau_p; amplitude constant g is kept at 1.

    The Schmidt number and all normalized spectra are invariant under scaling
    of the amplitude, so g only matters if absolute pair rates were needed
    (they are not, here).
    """

    tau_p: float  # s
    g: float = 1.0

    def __post_init__(self):
        if self.tau_p <= 0:
            raise ValueError("tau_p must be positive")

    @property
    def spectral_bandwidth(self) -> float:
        return 1.0 / self.tau_p

    def spectrum(self, omega_offset):
        """Pump spectral amplitude ap(O) = tau_p * exp(-O^2 tau_p^2 / 2)."""
        omega = np.asarray(omega_offset, dtype=float)
        return self.tau_p * np.exp(-0.5 * (omega * self.tau_p) ** 2)


@dataclass(frozen=True)
class GaussCoeffs:
    """Quadratic-form coefficients of the Gaussian amplitude (SI seconds^2)."""

    c11: float
    c22: float
    c12: float
    gamma: float
    tau_p: float
    tau_ps: float
    tau_pi: float

    @classmethod
    def from_times(cls, tau_ps: float, tau_pi: float, tau_p: float,
                   gamma: float = GAMMA_SINC_FIT) -> "GaussCoeffs":
        if tau_p <= 0 or gamma <= 0:
            raise ValueError("tau_p and gamma must be positive")
        half = 0.5 * tau_p * tau_p
        return cls(
            c11=half + gamma * tau_ps * tau_ps,
            c22=half + gamma * tau_pi * tau_pi,
            c12=half + gamma * tau_ps * tau_pi,
            gamma=gamma,
            tau_p=tau_p,
            tau_ps=tau_ps,
            tau_pi=tau_pi,
        )

    @property
    def det(self) -> float:
        """c11*c22 - c12^2; equals gamma*tau_p^2*(tau_ps - tau_pi)^2/2 identically."""
        return self.c11 * self.c22 - self.c12 * self.c12

    def marginal_sigmas(self) -> tuple:
        """Std deviations (sigma_s, sigma_i) of the marginal intensities (rad/s).

        These are the closed-form bandwidths: sigma_s^2 = c22/(4 det),
        sigma_i^2 = c11/(4 det).
        """
        det = self.det
        if det <= 0:
            raise DegenerateGroupVelocities(
                "tau_ps = tau_pi: the Gaussian amplitude does not factorize into "
                "normalizable marginals"
            )
        return float(np.sqrt(self.c22 / (4.0 * det))), float(np.sqrt(self.c11 / (4.0 * det)))


@dataclass
class JsaGrid:
    """Discretized complex amplitude with its two frequency-offset axes (rad/s)."""

    axis_s: np.ndarray
    axis_i: np.ndarray
    values: np.ndarray  # complex, shape (len(axis_s), len(axis_i))
    model_tag: str  # "exact_sinc" or "gaussian"

    def __post_init__(self):
        if self.axis_s.size < 2 or self.axis_i.size < 2:
            raise EmptyGrid("JSA grid needs at least 2 points per axis")
        if self.values.shape != (self.axis_s.size, self.axis_i.size):
            raise ValueError("values shape does not match axes")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("JSA contains non-finite values")

    @property
    def weights_s(self) -> np.ndarray:
        return trapezoid_weights(self.axis_s)

    @property
    def weights_i(self) -> np.ndarray:
        return trapezoid_weights(self.axis_i)

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    """Trapezoidal quadrature weights for a uniform axis."""
    axis = np.asarray(axis, dtype=float)
    if axis.size < 2:
        raise EmptyGrid("quadrature needs at least 2 samples")
    h = axis[1] - axis[0]
    w = np.full(axis.size, h)
    w[0] = w[-1] = 0.5 * h
    return w


def default_axes(coeffs: GaussCoeffs, n: int = 512, extent_sigmas: float = 5.0) -> tuple:
    """Symmetric uniform axes spanning +/- extent_sigmas marginal std devs.

    The per-axis extents come from the Gaussian closed-form bandwidths, so the
    counter-propagating idler axis is automatically ~100x tighter than the
    signal axis rather than wasting points on an empty square.
    """
    if n < 2:
        raise EmptyGrid("grid needs at least 2 points per axis")
    sigma_s, sigma_i = coeffs.marginal_sigmas()
    axis_s = np.linspace(-extent_sigmas * sigma_s, extent_sigmas * sigma_s, n)
    axis_i = np.linspace(-extent_sigmas * sigma_i, extent_sigmas * sigma_i, n)
    return axis_s, axis_i


def jsa_exact(solution: PhaseMatchSolution, pulse: PumpPulse,
              axis_s: np.ndarray, axis_i: np.ndarray) -> JsaGrid:
    """Exact-sinc amplitude: full Sellmeier dispersion, sidelobes included."""
    axis_s = np.asarray(axis_s, dtype=float)
    axis_i = np.asarray(axis_i, dtype=float)
    if axis_s.size < 2 or axis_i.size < 2:
        raise EmptyGrid("JSA grid needs at least 2 points per axis")
    phase = mismatch_full(solution, axis_s[:, None], axis_i[None, :])
    pump = pulse.spectrum(axis_s[:, None] + axis_i[None, :])
    values = (pulse.g / np.sqrt(2.0 * np.pi)) * pump \
        * np.exp(-1j * phase) * sinc(phase)
    return JsaGrid(axis_s=axis_s, axis_i=axis_i, values=values, model_tag="exact_sinc")


def jsa_gauss(coeffs: GaussCoeffs, pulse: Optional[PumpPulse],
              axis_s: np.ndarray, axis_i: np.ndarray) -> JsaGrid:
    """Gaussian-approximation amplitude from the c_ij quadratic form."""
    axis_s = np.asarray(axis_s, dtype=float)
    axis_i = np.asarray(axis_i, dtype=float)
    if axis_s.size < 2 or axis_i.size < 2:
        raise EmptyGrid("JSA grid needs at least 2 points per axis")
    if pulse is None:
        pulse = PumpPulse(tau_p=coeffs.tau_p)
    os = axis_s[:, None]
    oi = axis_i[None, :]
    quad = coeffs.c11 * os**2 + coeffs.c22 * oi**2 + 2.0 * coeffs.c12 * os * oi
    phase = coeffs.tau_ps * os + coeffs.tau_pi * oi
    values = (pulse.g * coeffs.tau_p / np.sqrt(2.0 * np.pi)) \
        * np.exp(1j * phase) * np.exp(-quad)
    return JsaGrid(axis_s=axis_s, axis_i=axis_i, values=values, model_tag="gaussian")
