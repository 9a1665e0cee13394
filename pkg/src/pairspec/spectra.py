"""Marginal spectra, closed-form bandwidths and the correlation-ellipse geometry.

The Gaussian model makes each photon's spectrum Gaussian with

    sigma_s = (1/(sqrt(2)(1-eta))) * sqrt(1/(2 gamma tau_pi^2) + 1/tau_p^2)
    sigma_i = (1/(sqrt(2)(1-eta))) * sqrt(1/(2 gamma tau_pi^2) + eta^2/tau_p^2)

(equivalently sigma_s^2 = c22/(4 det), sigma_i^2 = c11/(4 det)), and the
1/e^2 intensity contour is the ellipse c11 Os^2 + c22 Oi^2 + 2 c12 Os Oi = 1
whose major axis sits at

    theta = -(1/2) arctan[((tau_p/tau_pi)^2 + 2 gamma eta) / (gamma (1 - eta^2))]

measured from the Os axis (atan2 branch, so the eta -> +/-1 limits land on
the +/- pi/4 diagonals correctly).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import GAMMA_SINC_FIT
from .biphoton import GaussCoeffs, JsaGrid
from .errors import DegenerateGroupVelocities, EmptyGrid

__all__ = [
    "SpectrumCurve",
    "EllipseGeometry",
    "marginal_spectrum",
    "fwhm_interpolated",
    "gauss_bandwidths",
    "coherence_gauss",
    "ellipse_geometry",
]

_FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))


@dataclass
class SpectrumCurve:
    """A single-photon spectrum, normalized to unit peak."""

    axis: np.ndarray  # rad/s offsets
    values: np.ndarray
    fwhm: float  # rad/s
    sigma: float  # Gaussian-equivalent std dev, fwhm / (2 sqrt(2 ln 2))


@dataclass
class EllipseGeometry:
    """1/e^2 intensity contour of the Gaussian model."""

    theta: float  # radians in (-pi/2, pi/2], major axis to the Os axis
    semi_axes: tuple  # (major, minor), rad/s


def fwhm_interpolated(axis: np.ndarray, values: np.ndarray) -> float:
    """Full width at half maximum by bracketing + linear interpolation.

    Walks outward from the peak to the first half-maximum crossing on each
    side, which keeps the measure robust when the curve has sidelobes.  The
    peak must be interior to the axis.
    """
    axis = np.asarray(axis, dtype=float)
    values = np.asarray(values, dtype=float)
    if axis.size < 3:
        raise EmptyGrid("need at least 3 samples for a width")
    j = int(np.argmax(values))
    if j == 0 or j == axis.size - 1:
        raise ValueError("peak sits on the axis edge; widen the grid")
    half = 0.5 * values[j]

    def crossing(idx_range):
        prev = j
        for idx in idx_range:
            if values[idx] <= half:
                f = (values[prev] - half) / (values[prev] - values[idx])
                return axis[prev] + f * (axis[idx] - axis[prev])
            prev = idx
        raise ValueError("half maximum not reached inside the grid; widen the extent")

    right = crossing(range(j + 1, axis.size))
    left = crossing(range(j - 1, -1, -1))
    return float(right - left)


def marginal_spectrum(grid: JsaGrid, which: str = "signal") -> SpectrumCurve:
    """Marginal intensity S(O) = integral of |psi|^2 over the other photon.

    Equals the diagonal of that photon's first-order coherence function.
    Returned normalized to unit peak, with the interpolated FWHM and its
    Gaussian-equivalent sigma.
    """
    if which == "signal":
        axis = grid.axis_s
        values = grid.intensity() @ grid.weights_i
    elif which == "idler":
        axis = grid.axis_i
        values = grid.weights_s @ grid.intensity()
    else:
        raise ValueError("which must be 'signal' or 'idler'")
    peak = float(values.max())
    if peak <= 0:
        raise EmptyGrid("marginal spectrum is identically zero")
    values = values / peak
    width = fwhm_interpolated(axis, values)
    return SpectrumCurve(axis=axis, values=values, fwhm=width,
                         sigma=width / _FWHM_PER_SIGMA)


def gauss_bandwidths(tau_ps: float, tau_pi: float, tau_p: float,
                     gamma: float = GAMMA_SINC_FIT) -> tuple:
    """Closed-form spectral std devs (sigma_s, sigma_i) of the Gaussian model."""
    if tau_pi == 0:
        raise ValueError("tau_pi must be nonzero")
    eta = tau_ps / tau_pi
    if eta == 1.0:
        raise DegenerateGroupVelocities("eta = 1: bandwidth closed forms diverge")
    common = 1.0 / (2.0 * gamma * tau_pi * tau_pi)
    pref = 1.0 / (np.sqrt(2.0) * (1.0 - eta))
    sigma_s = pref * np.sqrt(common + 1.0 / tau_p**2)
    sigma_i = pref * np.sqrt(common + eta * eta / tau_p**2)
    return float(abs(sigma_s)), float(abs(sigma_i))


def coherence_gauss(coeffs: GaussCoeffs, omega, omega_prime, which: str = "signal"):
    """Closed-form first-order coherence G^(1)(O, O') of the Gaussian model.

    signal: (g^2 tau_p^2 / sqrt(8 pi c22)) * exp(-i tau_ps (O - O'))
            * exp(-((2 c11 c22 - c12^2)/(2 c22)) (O^2 + O'^2) + (c12^2/c22) O O')

    and the idler form swaps c11 <-> c22 and tau_ps -> tau_pi.  The g = 1
    convention of the amplitude is kept.
    """
    o = np.asarray(omega, dtype=float)
    op = np.asarray(omega_prime, dtype=float)
    if which == "signal":
        c_own, tau = coeffs.c22, coeffs.tau_ps
    elif which == "idler":
        c_own, tau = coeffs.c11, coeffs.tau_pi
    else:
        raise ValueError("which must be 'signal' or 'idler'")
    c11, c22, c12 = coeffs.c11, coeffs.c22, coeffs.c12
    quad = (2.0 * c11 * c22 - c12 * c12) / (2.0 * c_own)
    cross = c12 * c12 / c_own
    prefactor = coeffs.tau_p**2 / np.sqrt(8.0 * np.pi * c_own)
    return prefactor * np.exp(-1j * tau * (o - op)) \
        * np.exp(-quad * (o * o + op * op) + cross * o * op)


def ellipse_geometry(coeffs: GaussCoeffs) -> EllipseGeometry:
    """Orientation and semi-axes of the 1/e^2 ellipse of the Gaussian model.

    The angle follows the closed form in the module docstring, evaluated with
    atan2 so the degenerate eta = +/-1 cases fall onto the correct +/- pi/4
    branch; the semi-axes are the inverse square roots of the quadratic-form
    eigenvalues.
    """
    eta = coeffs.tau_ps / coeffs.tau_pi
    num = (coeffs.tau_p / coeffs.tau_pi) ** 2 + 2.0 * coeffs.gamma * eta
    den = coeffs.gamma * (1.0 - eta * eta)
    theta = -0.5 * np.arctan2(num, den)
    if theta <= -np.pi / 2:  # fold onto (-pi/2, pi/2]
        theta += np.pi
    form = np.array([[coeffs.c11, coeffs.c12], [coeffs.c12, coeffs.c22]])
    eigenvalues = np.linalg.eigvalsh(form)
    if eigenvalues[0] <= 0:
        raise DegenerateGroupVelocities("quadratic form is singular: no ellipse")
    major = 1.0 / np.sqrt(eigenvalues[0])
    minor = 1.0 / np.sqrt(eigenvalues[1])
    return EllipseGeometry(theta=float(theta), semi_axes=(float(major), float(minor)))
