"""PNG renderers for the report-style CLI outputs.

Everything here draws from already-computed data structures and saves to a
file; no interactive backends, no computation. Each function returns the
path it wrote.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .constants import NM, PS
from .phasematch import COUNTER

_DPI = 150


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def save_scan_plot(points, geometry: str, path, title: str = "") -> Path:
    """Tuning curves: phase-matched wavelengths and eta along the scan."""
    good = [p for p in points if p.error is None]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 7.2), sharex=True)
    lam_s = np.array([p.lambda_s for p in good]) / NM
    lam_i = np.array([p.lambda_i for p in good]) / NM
    if geometry == COUNTER:
        param = np.array([p.lambda_or_theta for p in good]) / NM
        label = "poling period (nm)"
    else:
        param = np.degrees([p.lambda_or_theta for p in good])
        label = r"tuning angle $\theta_p$ (deg)"
    ax1.plot(lam_s, lam_s, label=r"$\lambda_s$")
    ax1.plot(lam_s, lam_i, label=r"$\lambda_i$")
    ax1.set_ylabel("wavelength (nm)")
    ax1.legend(frameon=False)
    ax1b = ax1.twinx()
    ax1b.plot(lam_s, param, color="tab:green", linestyle="--")
    ax1b.set_ylabel(label, color="tab:green")
    ax2.plot(lam_s, [p.eta for p in good], color="tab:red")
    ax2.axhline(0.0, color="0.7", linewidth=0.8)
    ax2.set_xlabel(r"$\lambda_s$ (nm)")
    ax2.set_ylabel(r"$\eta = \tau_{ps}/\tau_{pi}$")
    if title:
        fig.suptitle(title)
    return _finish(fig, path)


def save_sweep_plot(curves: dict, path, title: str = "", marks: dict = None) -> Path:
    """Schmidt number against pump duration, one line per labeled sweep."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, points in curves.items():
        good = [p for p in points if p.error is None and np.isfinite(p.k)]
        ax.plot([p.tau_p / PS for p in good], [p.k for p in good],
                marker=".", markersize=4, label=label)
    for label, (tau, k) in (marks or {}).items():
        ax.plot([tau / PS], [k], "r*", markersize=10)
        ax.annotate(label, (tau / PS, k), textcoords="offset points", xytext=(6, 6))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"pump duration $\tau_p$ (ps)")
    ax.set_ylabel("Schmidt number K")
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def save_jsa_panels(grids, labels, path, title: str = "") -> Path:
    """Joint intensity heat maps, one panel per grid."""
    n = len(grids)
    fig, axes = plt.subplots(1, n, figsize=(4.0 * n, 3.6), squeeze=False)
    for ax, grid, label in zip(axes[0], grids, labels):
        intensity = grid.intensity().T  # rows = idler, columns = signal
        peak = intensity.max()
        if peak > 0:
            intensity = intensity / peak
        mesh = ax.pcolormesh(grid.axis_s * PS, grid.axis_i * PS, intensity,
                             shading="auto", cmap="inferno")
        fig.colorbar(mesh, ax=ax, fraction=0.046)
        ax.set_xlabel(r"$\Omega_s$ (rad/ps)")
        ax.set_ylabel(r"$\Omega_i$ (rad/ps)")
        ax.set_title(label, fontsize=10)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _finish(fig, path)


def save_spectrum_plot(curves: dict, path, title: str = "", overlays: dict = None) -> Path:
    """Marginal spectra; optional dashed overlays (e.g. Gaussian closed forms)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label, curve in curves.items():
        ax.plot(curve.axis * PS, curve.values, label=label)
    for label, (axis, values) in (overlays or {}).items():
        ax.plot(np.asarray(axis) * PS, values, linestyle="--", linewidth=1.2, label=label)
    ax.set_xlabel(r"$\Omega$ (rad/ps)")
    ax.set_ylabel("normalized intensity")
    ax.legend(frameon=False, fontsize=9)
    if title:
        ax.set_title(title)
    return _finish(fig, path)
