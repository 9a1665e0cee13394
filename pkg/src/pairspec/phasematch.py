"""Central-frequency phase matching, characteristic times and mismatch functions.

Two collinear geometries are supported.  In the counter-propagating one the
idler travels backward and a first-order grating of period Lambda supplies
the momentum k_G = 2*pi/Lambda, so the matching condition reads

    k_s(w_s) - k_i(w_i) - k_p(w_p) + k_G = 0,

while the co-propagating one (bulk or poled) uses

    k_s(w_s) + k_i(w_i) - k_p(w_p) + k_G = 0.

The characteristic times are half-crystal walk-off scales,

    tau_ps = (lc/2) (k'_p - k'_s),
    tau_pi = (lc/2) (k'_p + k'_i)   [counter]
           = (lc/2) (k'_p - k'_i)   [co],

and eta = tau_ps / tau_pi.  Everything is SI internally.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .constants import MM, NM, PS, SPEED_OF_LIGHT, UM
from .dispersion import CrystalModel, Polarization, WaveSpec, inverse_group_velocity, wavenumber
from .errors import MultipleRoots, NoRootInBracket, OutOfValidityRange, StencilOutOfRange

__all__ = [
    "ScenarioConfig",
    "PhaseMatchSolution",
    "ScanPoint",
    "solve_central_frequencies",
    "mismatch_full",
    "linearized_mismatch",
    "poling_period_for",
    "tuning_angle_for",
    "scan_signal_wavelengths",
]

COUNTER = "counter_propagating"
CO = "co_propagating"

_PRESCAN_POINTS = 2000
_RESIDUAL_TOL = 1e-6  # on |F| * lc


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully specified interaction: geometry, crystal, pump and polarizations."""

    name: str
    geometry: str
    crystal: str
    crystal_length: float  # m
    pump_wavelength: float  # m
    pump_duration: float  # s
    poling_period: Optional[float] = None  # m; None means bulk, k_G = 0
    tuning_angle: float = np.pi / 2  # radians
    polarizations: dict = field(default_factory=lambda: {
        "pump": Polarization.EXTRAORDINARY,
        "signal": Polarization.EXTRAORDINARY,
        "idler": Polarization.EXTRAORDINARY,
    })
    signal_window: Optional[tuple] = None  # (lo, hi) in m
    notes: str = ""

    def __post_init__(self):
        if self.geometry not in (COUNTER, CO):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.crystal_length <= 0 or self.pump_wavelength <= 0 or self.pump_duration <= 0:
            raise ValueError("lengths and durations must be positive")
        if self.geometry == COUNTER and not self.poling_period:
            raise ValueError("counter-propagating geometry requires a poling period")
        pols = {role: Polarization.parse(p) for role, p in self.polarizations.items()}
        if set(pols) != {"pump", "signal", "idler"}:
            raise ValueError("polarizations must name pump, signal and idler")
        object.__setattr__(self, "polarizations", pols)

    @classmethod
    def from_dict(cls, payload: dict) -> "ScenarioConfig":
        """Build from the boundary-unit JSON representation (nm, ps, degrees)."""
        window = payload.get("signal_window_nm")
        return cls(
            name=payload["name"],
            geometry=payload["geometry"],
            crystal=payload["crystal"],
            crystal_length=payload["crystal_length_mm"] * MM,
            pump_wavelength=payload["pump_wavelength_nm"] * NM,
            pump_duration=payload["pump_duration_ps"] * PS,
            poling_period=(payload.get("poling_period_nm") * NM
                           if payload.get("poling_period_nm") else None),
            tuning_angle=np.radians(payload.get("tuning_angle_deg", 90.0)),
            polarizations=payload["polarizations"],
            signal_window=tuple(w * NM for w in window) if window else None,
            notes=payload.get("notes", ""),
        )

    def wave(self, role: str) -> WaveSpec:
        pol = self.polarizations[role]
        angle = self.tuning_angle if pol is Polarization.EXTRAORDINARY else None
        return WaveSpec(role=role, polarization=pol, tuning_angle=angle)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    @property
    def grating_wavenumber(self) -> float:
        return 2.0 * np.pi / self.poling_period if self.poling_period else 0.0


@dataclass
class PhaseMatchSolution:
    """Solved centers, characteristic times and the dispersion closures behind them."""

    geometry: str
    crystal_length: float  # m
    omega_p: float  # rad/s
    omega_s: float
    omega_i: float
    tau_ps: float  # s, signed
    tau_pi: float  # s, signed
    residual: float  # |F| * lc at the solution
    k_grating: float  # 1/m
    swapped: bool = False
    k_pump: Callable = field(default=None, repr=False)
    k_signal: Callable = field(default=None, repr=False)
    k_idler: Callable = field(default=None, repr=False)

    @property
    def lambda_s(self) -> float:
        return 2.0 * np.pi * SPEED_OF_LIGHT / self.omega_s

    @property
    def lambda_i(self) -> float:
        return 2.0 * np.pi * SPEED_OF_LIGHT / self.omega_i

    @property
    def eta(self) -> float:
        return self.tau_ps / self.tau_pi

    @property
    def lambda_s_nm(self) -> float:
        return self.lambda_s / NM

    @property
    def lambda_i_nm(self) -> float:
        return self.lambda_i / NM

    @property
    def tau_ps_ps(self) -> float:
        return self.tau_ps / PS

    @property
    def tau_pi_ps(self) -> float:
        return self.tau_pi / PS


def _k_closure(crystal: CrystalModel, wave: WaveSpec) -> Callable:
    def k_of_omega(omega):
        return wavenumber(crystal, wave, omega)
    return k_of_omega


def _omega_bounds(crystal: CrystalModel, wave: WaveSpec) -> tuple:
    """Angular-frequency interval corresponding to the wave's validity window."""
    if wave.polarization is Polarization.ORDINARY:
        lo_um, hi_um = crystal.axis_set("ordinary").validity_um
    else:
        lo_um, hi_um = crystal.axis_set("extraordinary").validity_um
        if (wave.tuning_angle is not None and "ordinary" in crystal.axes):
            o_lo, o_hi = crystal.axis_set("ordinary").validity_um
            lo_um, hi_um = max(lo_um, o_lo), min(hi_um, o_hi)
    w_hi = 2.0 * np.pi * SPEED_OF_LIGHT / (lo_um * 1e-6)
    w_lo = 2.0 * np.pi * SPEED_OF_LIGHT / (hi_um * 1e-6)
    return w_lo, w_hi


def _signal_bracket(config: ScenarioConfig, crystal: CrystalModel) -> tuple:
    """Search interval for omega_s keeping both daughters inside validity."""
    omega_p = 2.0 * np.pi * SPEED_OF_LIGHT / config.pump_wavelength
    s_lo, s_hi = _omega_bounds(crystal, config.wave("signal"))
    i_lo, i_hi = _omega_bounds(crystal, config.wave("idler"))
    lo = max(s_lo, omega_p - i_hi)
    hi = min(s_hi, omega_p - i_lo)
    if config.signal_window is not None:
        w_lo, w_hi = sorted(config.signal_window)
        lo = max(lo, 2.0 * np.pi * SPEED_OF_LIGHT / w_hi)
        hi = min(hi, 2.0 * np.pi * SPEED_OF_LIGHT / w_lo)
    # stay strictly inside the validity edges
    pad = 1e-9 * omega_p
    lo, hi = lo + pad, hi - pad
    if not (lo < hi):
        raise NoRootInBracket(
            f"empty signal search window for scenario {config.name!r}: "
            "validity ranges and signal_window_nm do not overlap"
        )
    return lo, hi


def _mismatch_sign(geometry: str) -> float:
    """Sign of the idler wavenumber in the matching condition."""
    return -1.0 if geometry == COUNTER else 1.0


def solve_central_frequencies(config: ScenarioConfig, crystal: CrystalModel) -> PhaseMatchSolution:
    """Solve the phase-matching condition for the central signal frequency.

    A coarse 2000-point pre-scan brackets sign changes of the residual
    F(omega_s); each bracket is refined by bisection and polished with secant
    steps until |F|*lc < 1e-6 (typically far below).  Zero brackets raise
    NoRootInBracket; more than one raises MultipleRoots so the caller can
    narrow `signal_window`.

    Energy conservation fixes omega_i = omega_p - omega_s exactly.  After the
    characteristic times are computed, co-propagating solutions are
    canonically ordered so that |tau_ps| <= |tau_pi| (labels swap if needed);
    the counter-propagating labels are fixed by propagation direction.
    """
    omega_p = 2.0 * np.pi * SPEED_OF_LIGHT / config.pump_wavelength
    k_p = _k_closure(crystal, config.wave("pump"))
    k_s = _k_closure(crystal, config.wave("signal"))
    k_i = _k_closure(crystal, config.wave("idler"))
    sign_i = _mismatch_sign(config.geometry)
    k_g = config.grating_wavenumber
    lc = config.crystal_length
    kp0 = float(k_p(omega_p))

    def residual(omega_s):
        return k_s(omega_s) + sign_i * k_i(omega_p - omega_s) - kp0 + k_g

    lo, hi = _signal_bracket(config, crystal)
    grid = np.linspace(lo, hi, _PRESCAN_POINTS)
    values = residual(grid)
    sign = np.sign(values)
    crossings = np.nonzero((sign[:-1] * sign[1:] < 0) | (sign[:-1] == 0))[0]

    if len(crossings) == 0:
        raise NoRootInBracket(
            f"no phase-matched signal frequency for scenario {config.name!r} in "
            f"[{2*np.pi*SPEED_OF_LIGHT/hi/NM:.1f}, {2*np.pi*SPEED_OF_LIGHT/lo/NM:.1f}] nm"
        )

    roots = [_refine_root(residual, grid[j], grid[j + 1], lc) for j in crossings]
    if len(roots) > 1:
        raise MultipleRoots([2.0 * np.pi * SPEED_OF_LIGHT / w / NM for w in roots])

    omega_s = roots[0]
    omega_i = omega_p - omega_s

    kp_prime = inverse_group_velocity(crystal, config.wave("pump"), omega_p)
    ks_prime = inverse_group_velocity(crystal, config.wave("signal"), omega_s)
    ki_prime = inverse_group_velocity(crystal, config.wave("idler"), omega_i)
    tau_ps = 0.5 * lc * (kp_prime - ks_prime)
    tau_pi = 0.5 * lc * (kp_prime + ki_prime) if config.geometry == COUNTER \
        else 0.5 * lc * (kp_prime - ki_prime)

    solution = PhaseMatchSolution(
        geometry=config.geometry,
        crystal_length=lc,
        omega_p=omega_p,
        omega_s=omega_s,
        omega_i=omega_i,
        tau_ps=tau_ps,
        tau_pi=tau_pi,
        residual=abs(float(residual(omega_s))) * lc,
        k_grating=k_g,
        k_pump=k_p,
        k_signal=k_s,
        k_idler=k_i,
    )
    if config.geometry == CO and abs(solution.tau_ps) > abs(solution.tau_pi):
        solution = PhaseMatchSolution(
            geometry=solution.geometry,
            crystal_length=lc,
            omega_p=omega_p,
            omega_s=omega_i,
            omega_i=omega_s,
            tau_ps=solution.tau_pi,
            tau_pi=solution.tau_ps,
            residual=solution.residual,
            k_grating=k_g,
            swapped=True,
            k_pump=k_p,
            k_signal=k_i,
            k_idler=k_s,
        )
    return solution


def _refine_root(f: Callable, a: float, b: float, lc: float) -> float:
    """Bisection to a tight bracket, then guarded secant polish."""
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    for _ in range(60):
        m = 0.5 * (a + b)
        fm = float(f(m))
        if fm == 0.0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    x0, x1, f0, f1 = a, b, fa, fb
    for _ in range(12):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (min(a, b) <= x2 <= max(a, b)):
            x2 = 0.5 * (a + b)
        f2 = float(f(x2))
        if abs(f2) * lc < _RESIDUAL_TOL * 1e-4 or x2 in (x0, x1):
            return x2
        x0, f0, x1, f1 = x1, f1, x2, f2
    return x1


def mismatch_full(solution: PhaseMatchSolution, omega_s_offset, omega_i_offset):
    """Full-dispersion phase mismatch D(Omega_s, Omega_i) * lc / 2 (dimensionless).

    Offsets are angular frequencies (rad/s) relative to the solved centers;
    the pump argument follows from energy conservation.  Raises
    OutOfValidityRange when an offset pushes a wave outside its Sellmeier
    window.  Vectorized over broadcastable offset arrays.
    """
    sign_i = _mismatch_sign(solution.geometry)
    omega_s = solution.omega_s + np.asarray(omega_s_offset, dtype=float)
    omega_i = solution.omega_i + np.asarray(omega_i_offset, dtype=float)
    omega_p = solution.omega_p + np.asarray(omega_s_offset, dtype=float) \
        + np.asarray(omega_i_offset, dtype=float)
    d = (solution.k_signal(omega_s) + sign_i * solution.k_idler(omega_i)
         - solution.k_pump(omega_p) + solution.k_grating)
    return 0.5 * solution.crystal_length * d


def linearized_mismatch(solution: PhaseMatchSolution, omega_s_offset, omega_i_offset):
    """First-order mismatch -(tau_ps*Omega_s + tau_pi*Omega_i), same scaling as mismatch_full."""
    return -(solution.tau_ps * np.asarray(omega_s_offset, dtype=float)
             + solution.tau_pi * np.asarray(omega_i_offset, dtype=float))


def poling_period_for(config: ScenarioConfig, crystal: CrystalModel, lambda_s: float) -> float:
    """Grating period that phase-matches the counter-propagating pair at lambda_s."""
    if config.geometry != COUNTER:
        raise ValueError("poling_period_for applies to the counter-propagating geometry")
    omega_p = 2.0 * np.pi * SPEED_OF_LIGHT / config.pump_wavelength
    omega_s = 2.0 * np.pi * SPEED_OF_LIGHT / lambda_s
    omega_i = omega_p - omega_s
    if omega_i <= 0:
        raise NoRootInBracket("signal wavelength must exceed the pump wavelength")
    k_g = (float(wavenumber(crystal, config.wave("pump"), omega_p))
           - float(wavenumber(crystal, config.wave("signal"), omega_s))
           + float(wavenumber(crystal, config.wave("idler"), omega_i)))
    if k_g <= 0:
        raise NoRootInBracket(
            f"no positive grating momentum phase-matches lambda_s = {lambda_s/NM:.1f} nm"
        )
    return 2.0 * np.pi / k_g


def tuning_angle_for(config: ScenarioConfig, crystal: CrystalModel, lambda_s: float,
                     n_scan: int = 720) -> float:
    """Tuning angle (radians) that phase-matches the co-propagating pair at lambda_s."""
    if config.geometry != CO:
        raise ValueError("tuning_angle_for applies to the co-propagating geometry")
    omega_p = 2.0 * np.pi * SPEED_OF_LIGHT / config.pump_wavelength
    omega_s = 2.0 * np.pi * SPEED_OF_LIGHT / lambda_s
    omega_i = omega_p - omega_s
    if omega_i <= 0:
        raise NoRootInBracket("signal wavelength must exceed the pump wavelength")
    k_g = config.grating_wavenumber

    def residual(theta):
        cfg = config.replace(tuning_angle=float(theta))
        return (float(wavenumber(crystal, cfg.wave("signal"), omega_s))
                + float(wavenumber(crystal, cfg.wave("idler"), omega_i))
                - float(wavenumber(crystal, cfg.wave("pump"), omega_p)) + k_g)

    def k_curve(role: str, omega: float, thetas: np.ndarray) -> np.ndarray:
        """k(theta) at fixed omega, vectorized over the scan angles."""
        lam_um = 2.0 * np.pi * SPEED_OF_LIGHT / omega / UM
        if config.polarizations[role] is Polarization.ORDINARY:
            return np.full_like(thetas, omega / SPEED_OF_LIGHT
                                * float(crystal.index_ordinary(lam_um)))
        return omega / SPEED_OF_LIGHT * crystal.index_extraordinary(lam_um, thetas)

    thetas = np.linspace(1e-6, np.pi / 2 - 1e-9, n_scan)
    values = (k_curve("signal", omega_s, thetas) + k_curve("idler", omega_i, thetas)
              - k_curve("pump", omega_p, thetas) + k_g)
    sign = np.sign(values)
    crossings = np.nonzero((sign[:-1] * sign[1:] < 0) | (sign[:-1] == 0))[0]
    if len(crossings) == 0:
        raise NoRootInBracket(
            f"no tuning angle in (0, 90) deg phase-matches lambda_s = {lambda_s/NM:.1f} nm"
        )
    if len(crossings) > 1:
        raise MultipleRoots([np.degrees(0.5 * (thetas[j] + thetas[j + 1])) for j in crossings])
    j = crossings[0]
    return _refine_root(residual, thetas[j], thetas[j + 1], config.crystal_length)


@dataclass
class ScanPoint:
    """One row of a signal-wavelength scan (SI units; eta as labeled, no reordering)."""

    lambda_s: float
    lambda_i: float = np.nan
    lambda_or_theta: float = np.nan  # poling period (m) or tuning angle (rad)
    tau_ps: float = np.nan
    tau_pi: float = np.nan
    eta: float = np.nan
    error: Optional[str] = None


def scan_signal_wavelengths(config: ScenarioConfig, crystal: CrystalModel,
                            lambda_s_values: Sequence[float]) -> list:
    """Re-solve the matching parameter (Lambda or theta) per signal wavelength.

    Counter-propagating scans vary the grating period; co-propagating scans
    vary the tuning angle.  Characteristic times and eta are evaluated at each
    point.  Per-point failures are recorded on the ScanPoint and the scan
    continues; the input wavelength ordering is preserved.
    """
    omega_p = 2.0 * np.pi * SPEED_OF_LIGHT / config.pump_wavelength
    kp_prime_fixed = None
    if config.geometry == COUNTER:
        kp_prime_fixed = inverse_group_velocity(crystal, config.wave("pump"), omega_p)

    points = []
    for lambda_s in lambda_s_values:
        point = ScanPoint(lambda_s=float(lambda_s))
        try:
            omega_s = 2.0 * np.pi * SPEED_OF_LIGHT / lambda_s
            omega_i = omega_p - omega_s
            if omega_i <= 0:
                raise NoRootInBracket("signal wavelength must exceed the pump wavelength")
            point.lambda_i = 2.0 * np.pi * SPEED_OF_LIGHT / omega_i
            if config.geometry == COUNTER:
                point.lambda_or_theta = poling_period_for(config, crystal, lambda_s)
                cfg = config
                kp_prime = kp_prime_fixed
            else:
                theta = tuning_angle_for(config, crystal, lambda_s)
                point.lambda_or_theta = theta
                cfg = config.replace(tuning_angle=theta)
                kp_prime = inverse_group_velocity(crystal, cfg.wave("pump"), omega_p)
            ks_prime = inverse_group_velocity(crystal, cfg.wave("signal"), omega_s)
            ki_prime = inverse_group_velocity(crystal, cfg.wave("idler"), omega_i)
            lc = config.crystal_length
            point.tau_ps = 0.5 * lc * (kp_prime - ks_prime)
            point.tau_pi = 0.5 * lc * (kp_prime + ki_prime) if config.geometry == COUNTER \
                else 0.5 * lc * (kp_prime - ki_prime)
            with np.errstate(divide="ignore", invalid="ignore"):
                point.eta = point.tau_ps / point.tau_pi
        except (OutOfValidityRange, StencilOutOfRange, NoRootInBracket, MultipleRoots) as exc:
            point.error = f"{type(exc).__name__}: {exc}"
        points.append(point)
    return points
