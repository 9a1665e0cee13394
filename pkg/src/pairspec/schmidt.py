"""Schmidt number of the photon pair by three routes.

* `schmidt_gauss` — closed form of the Gaussian model, K = sqrt(c11 c22 / det).
* `schmidt_integral` — the coherence-function route K = N^2/B built from
  G^(1)(O, O') quadratures on the grid.
* `schmidt_svd` — singular values of the quadrature-weighted amplitude matrix.

The last two act on the same discretized object (the trapezoid weights enter
both), so they agree to roundoff by construction; shipping both keeps an
independent cross-check on the implementation, and the SVD also yields the
mode weights.  K is scale-invariant, so the overall amplitude constant never
matters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .constants import GAMMA_SINC_FIT
from .biphoton import GaussCoeffs, JsaGrid, PumpPulse, default_axes, jsa_exact, jsa_gauss
from .errors import DegenerateGroupVelocities, EmptyGrid, SvdFailure
from .phasematch import PhaseMatchSolution

__all__ = [
    "schmidt_gauss",
    "schmidt_gauss_eta_form",
    "optimal_pump",
    "OptimalPump",
    "coherence_matrix",
    "schmidt_integral",
    "schmidt_svd",
    "SvdResult",
    "sweep_pump_duration",
    "SweepPoint",
]


def schmidt_gauss(tau_ps: float, tau_pi: float, tau_p: float,
                  gamma: float = GAMMA_SINC_FIT) -> float:
    """Gaussian-model Schmidt number K = sqrt(c11 c22 / (c11 c22 - c12^2))."""
    if tau_ps == tau_pi:
        raise DegenerateGroupVelocities(
            "tau_ps = tau_pi makes the Gaussian quadratic form singular (K diverges)"
        )
    c = GaussCoeffs.from_times(tau_ps, tau_pi, tau_p, gamma)
    return float(np.sqrt(c.c11 * c.c22 / c.det))


def schmidt_gauss_eta_form(tau_ps: float, tau_pi: float, tau_p: float,
                           gamma: float = GAMMA_SINC_FIT) -> float:
    """Equivalent closed form written in terms of eta = tau_ps/tau_pi.

    K = (1/(1-eta)) * sqrt(1 + eta^2 + (1/2 gamma)(tau_p/tau_pi)^2
                           + 2 gamma (tau_ps/tau_p)^2)

    Kept as an independent algebraic route for cross-checking; requires
    tau_pi != 0.
    """
    if tau_pi == 0:
        raise ValueError("eta form needs tau_pi != 0")
    eta = tau_ps / tau_pi
    if eta == 1.0:
        raise DegenerateGroupVelocities("eta = 1 (tau_ps = tau_pi)")
    bracket = (1.0 + eta * eta
               + (tau_p / tau_pi) ** 2 / (2.0 * gamma)
               + 2.0 * gamma * (tau_ps / tau_p) ** 2)
    return float(np.sqrt(bracket) / abs(1.0 - eta))


@dataclass(frozen=True)
class OptimalPump:
    """Pump duration minimizing the Gaussian K, and the minimum value."""

    tau_p_min: float  # s; 0 when the minimum is only asymptotic
    k_min: float
    asymptotic_only: bool  # tau_ps = 0: K decreases monotonically toward 1 as tau_p -> 0


def optimal_pump(tau_ps: float, tau_pi: float, gamma: float = GAMMA_SINC_FIT) -> OptimalPump:
    """tau_p_min = sqrt(2 gamma |tau_ps tau_pi|) and the corresponding K minimum.

    For tau_ps = 0 the Gaussian K has no interior minimum (it decreases
    monotonically to 1 as tau_p -> 0); this is reported with the
    `asymptotic_only` flag rather than a spurious finite optimum.
    """
    if tau_pi == 0:
        raise ValueError("tau_pi must be nonzero")
    if tau_ps == 0:
        return OptimalPump(tau_p_min=0.0, k_min=1.0, asymptotic_only=True)
    eta = tau_ps / tau_pi
    tau_p_min = float(np.sqrt(2.0 * gamma * abs(tau_ps * tau_pi)))
    k_min = (1.0 + eta) / (1.0 - eta) if eta > 0 else 1.0
    return OptimalPump(tau_p_min=tau_p_min, k_min=float(k_min), asymptotic_only=False)


def _weighted_matrix(grid: JsaGrid) -> np.ndarray:
    ws = np.sqrt(grid.weights_s)
    wi = np.sqrt(grid.weights_i)
    return ws[:, None] * grid.values * wi[None, :]


def coherence_matrix(grid: JsaGrid, which: str = "signal") -> np.ndarray:
    """First-order coherence G^(1)(O, O') of one photon, by grid quadrature.

    signal: G(O, O') = sum_i psi*(O, Oi) psi(O', Oi) dOi
    idler:  G(O, O') = sum_s psi*(Os, O) psi(Os, O') dOs
    """
    psi = grid.values
    if which == "signal":
        return (psi.conj() * grid.weights_i[None, :]) @ psi.T
    if which == "idler":
        return (psi.conj() * grid.weights_s[:, None]).T @ psi
    raise ValueError("which must be 'signal' or 'idler'")


def schmidt_integral(grid: JsaGrid, which: str = "signal") -> float:
    """Coherence-integral Schmidt number K = N^2 / B.

    N = sum_O w(O) G(O, O)  and  B = sum_{O,O'} w(O) w(O') |G(O, O')|^2,
    with G the signal (default) or idler coherence matrix.  Raises EmptyGrid
    for an identically-zero amplitude.
    """
    g = coherence_matrix(grid, which)
    w = grid.weights_s if which == "signal" else grid.weights_i
    n = float(np.sum(w * np.real(np.diag(g))))
    if n <= 0:
        raise EmptyGrid("amplitude integrates to zero; K is undefined")
    b = float(np.sum(w[:, None] * w[None, :] * np.abs(g) ** 2))
    return n * n / b


@dataclass
class SvdResult:
    k: float
    mode_weights: np.ndarray  # descending, sums to 1
    singular_values: np.ndarray


def schmidt_svd(grid: JsaGrid) -> SvdResult:
    """Schmidt decomposition via dense SVD of the weighted amplitude matrix.

    The amplitude is scaled by the square roots of the quadrature weights so
    that the squared singular values discretize the same Schmidt coefficients
    the integral route integrates; K = (sum s^2)^2 / sum s^4.
    """
    m = _weighted_matrix(grid)
    try:
        sv = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(f"SVD did not converge on a {m.shape} grid") from exc
    s2 = sv * sv
    total = float(s2.sum())
    if total == 0.0:
        raise EmptyGrid("amplitude integrates to zero; K is undefined")
    weights = s2 / total
    k = 1.0 / float(np.sum(weights * weights))
    return SvdResult(k=k, mode_weights=weights, singular_values=sv)


@dataclass
class SweepPoint:
    tau_p: float  # s
    k: float = np.nan
    error: Optional[str] = None


def sweep_pump_duration(solution: PhaseMatchSolution, tau_p_values: Sequence[float],
                        model: str = "gauss", n: int = 512,
                        extent_sigmas: float = 5.0,
                        gamma: float = GAMMA_SINC_FIT) -> list:
    """K as a function of pump duration, Gaussian closed form or exact grids.

    `tau_p_values` must be sorted ascending.  The exact model rebuilds the
    grid at every tau_p (extents re-estimated from the Gaussian bandwidths)
    and takes K from the SVD route.  Per-point failures are recorded on the
    returned SweepPoint rather than aborting the sweep.
    """
    taus = [float(t) for t in tau_p_values]
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau_p_values must be sorted strictly ascending")
    if model not in ("gauss", "exact"):
        raise ValueError("model must be 'gauss' or 'exact'")

    points = []
    for tau_p in taus:
        point = SweepPoint(tau_p=tau_p)
        try:
            if model == "gauss":
                point.k = schmidt_gauss(solution.tau_ps, solution.tau_pi, tau_p, gamma)
            else:
                coeffs = GaussCoeffs.from_times(solution.tau_ps, solution.tau_pi, tau_p, gamma)
                axis_s, axis_i = default_axes(coeffs, n=n, extent_sigmas=extent_sigmas)
                grid = jsa_exact(solution, PumpPulse(tau_p=tau_p), axis_s, axis_i)
                point.k = schmidt_svd(grid).k
        except Exception as exc:  # per-point failure, recorded
            point.error = f"{type(exc).__name__}: {exc}"
        points.append(point)
    return points
