"""Schmidt-number routes: closed form, coherence integral, SVD.

The integral and SVD routes share the quadrature weights, so their agreement
is algebraic; the tests therefore also pit them against grids with *known*
Schmidt content (hand-built two-mode kernels, rank-1 products) where the
answer does not depend on this package's own formulas.
"""
import math

import numpy as np
import pytest

import pairspec as ps
from pairspec.biphoton import GaussCoeffs, JsaGrid, default_axes, jsa_gauss
from pairspec.constants import GAMMA_SINC_FIT, PS
from pairspec.errors import DegenerateGroupVelocities, EmptyGrid, SvdFailure
from pairspec.phasematch import solve_central_frequencies
from pairspec.schmidt import (coherence_matrix, optimal_pump, schmidt_gauss,
                              schmidt_gauss_eta_form, schmidt_integral,
                              schmidt_svd, sweep_pump_duration)

RNG_SEED = 77130


@pytest.fixture(scope="module")
def ppktp_solution():
    config = ps.load_scenario("ppktp")
    return solve_central_frequencies(config, ps.load_crystal(config.crystal))


def _random_grid(rng, n=24):
    axis = np.linspace(-1.0, 1.0, n)
    values = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    # taper to zero at the edges so the grid resembles a localized amplitude
    taper = np.exp(-2.0 * axis**2)
    values = values * taper[:, None] * taper[None, :]
    return JsaGrid(axis_s=axis, axis_i=axis, values=values, model_tag="gaussian")


# --- kernels with known Schmidt content ----------------------------------------

def test_two_mode_kernel_recovers_known_k():
    """0.6*u0(x)u0(y) + 0.8*e^{i phi} u1(x)u1(y) has weights 0.36/0.64 and
    K = 1/(0.36^2 + 0.64^2)."""
    x = np.linspace(-8.0, 8.0, 401)
    u0 = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    u1 = math.sqrt(2.0) * x * u0
    values = (0.6 * np.outer(u0, u0)
              + 0.8 * np.exp(1j * np.pi / 3) * np.outer(u1, u1))
    grid = JsaGrid(axis_s=x, axis_i=x, values=values, model_tag="gaussian")
    k_expected = 1.0 / (0.36**2 + 0.64**2)
    svd = schmidt_svd(grid)
    assert math.isclose(svd.k, k_expected, rel_tol=1e-10)
    assert math.isclose(schmidt_integral(grid), k_expected, rel_tol=1e-10)
    assert math.isclose(schmidt_integral(grid, which="idler"), k_expected,
                        rel_tol=1e-10)
    assert np.allclose(svd.mode_weights[:2], [0.64, 0.36], atol=1e-10)
    assert svd.mode_weights[2] < 1e-12


def test_rank_one_product_gives_unit_k():
    x = np.linspace(-6.0, 6.0, 257)
    f = np.exp(-0.5 * x * x) * np.exp(0.3j * x)
    g = np.exp(-2.0 * x * x)
    grid = JsaGrid(axis_s=x, axis_i=x, values=np.outer(f, g), model_tag="gaussian")
    assert abs(schmidt_svd(grid).k - 1.0) < 1e-12
    assert abs(schmidt_integral(grid) - 1.0) < 1e-12


def test_empty_amplitude_raises():
    x = np.linspace(-1, 1, 8)
    grid = JsaGrid(axis_s=x, axis_i=x, values=np.zeros((8, 8), dtype=complex),
                   model_tag="gaussian")
    with pytest.raises(EmptyGrid):
        schmidt_svd(grid)
    with pytest.raises(EmptyGrid):
        schmidt_integral(grid)


# --- estimator identities ------------------------------------------------------

def test_scale_invariance_randomized():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(25):
        grid = _random_grid(rng)
        scale = 10.0 ** rng.uniform(-6, 6) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        scaled = JsaGrid(axis_s=grid.axis_s, axis_i=grid.axis_i,
                         values=scale * grid.values, model_tag=grid.model_tag)
        assert math.isclose(schmidt_svd(grid).k, schmidt_svd(scaled).k,
                            rel_tol=1e-12)
        assert math.isclose(schmidt_integral(grid), schmidt_integral(scaled),
                            rel_tol=1e-12)


def test_svd_and_integral_agree_on_arbitrary_grids():
    """The identity K_svd = K_int holds for any amplitude, not just physical
    ones, because both reduce to sums of the same weighted singular values."""
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(25):
        grid = _random_grid(rng, n=16)
        k_svd = schmidt_svd(grid).k
        assert math.isclose(schmidt_integral(grid, "signal"), k_svd, rel_tol=1e-11)
        assert math.isclose(schmidt_integral(grid, "idler"), k_svd, rel_tol=1e-11)


def test_coherence_matrix_is_hermitian_with_real_diagonal():
    rng = np.random.default_rng(RNG_SEED + 2)
    grid = _random_grid(rng)
    for which in ("signal", "idler"):
        g = coherence_matrix(grid, which)
        assert np.allclose(g, g.conj().T, rtol=0, atol=1e-12 * np.abs(g).max())
        assert np.all(np.real(np.diag(g)) >= 0)
    with pytest.raises(ValueError):
        coherence_matrix(grid, "pump")
    with pytest.raises(ValueError):
        schmidt_integral(grid, "pump")


def test_weighted_coherence_eigenvalues_reproduce_mode_weights():
    """Third route: eigenvalues of W^1/2 G W^1/2 are the squared singular
    values of the weighted amplitude."""
    rng = np.random.default_rng(RNG_SEED + 3)
    grid = _random_grid(rng, n=20)
    w_root = np.sqrt(grid.weights_s)
    g = coherence_matrix(grid, "signal")
    eig = np.linalg.eigvalsh(w_root[:, None] * g * w_root[None, :])[::-1]
    sv = schmidt_svd(grid).singular_values
    assert np.allclose(eig[: sv.size], sv * sv, rtol=1e-9,
                       atol=1e-12 * float(sv[0] ** 2))


def test_svd_failure_is_reported(monkeypatch):
    def exploding_svd(*args, **kwargs):
        raise np.linalg.LinAlgError("SVD did not converge")

    rng = np.random.default_rng(RNG_SEED + 4)
    grid = _random_grid(rng, n=8)
    monkeypatch.setattr(np.linalg, "svd", exploding_svd)
    with pytest.raises(SvdFailure):
        schmidt_svd(grid)


# --- Gaussian closed forms -------------------------------------------------------

def test_eta_form_matches_coefficient_form():
    rng = np.random.default_rng(RNG_SEED + 5)
    for _ in range(200):
        tau_pi = rng.uniform(0.05, 80) * PS * rng.choice([-1.0, 1.0])
        tau_ps = rng.uniform(-0.999, 0.999) * tau_pi
        tau_p = rng.uniform(0.01, 50) * PS
        k_c = schmidt_gauss(tau_ps, tau_pi, tau_p)
        k_eta = schmidt_gauss_eta_form(tau_ps, tau_pi, tau_p)
        assert math.isclose(k_c, k_eta, rel_tol=1e-9)


def test_degenerate_walkoff_raises():
    with pytest.raises(DegenerateGroupVelocities):
        schmidt_gauss(2.0 * PS, 2.0 * PS, 1.0 * PS)
    with pytest.raises(DegenerateGroupVelocities):
        schmidt_gauss_eta_form(2.0 * PS, 2.0 * PS, 1.0 * PS)
    with pytest.raises(ValueError):
        schmidt_gauss_eta_form(1.0 * PS, 0.0, 1.0 * PS)


def test_optimal_pump_positive_eta():
    tau_ps, tau_pi = 0.67 * PS, 63.0 * PS
    opt = optimal_pump(tau_ps, tau_pi)
    expected_tau = math.sqrt(2.0 * GAMMA_SINC_FIT * tau_ps * tau_pi)
    eta = tau_ps / tau_pi
    assert math.isclose(opt.tau_p_min, expected_tau, rel_tol=1e-12)
    assert math.isclose(opt.k_min, (1 + eta) / (1 - eta), rel_tol=1e-12)
    assert not opt.asymptotic_only
    # the closed-form K at tau_p_min equals the predicted minimum ...
    assert math.isclose(schmidt_gauss(tau_ps, tau_pi, opt.tau_p_min), opt.k_min,
                        rel_tol=1e-12)
    # ... and it is a genuine interior minimum
    assert schmidt_gauss(tau_ps, tau_pi, 1.05 * opt.tau_p_min) > opt.k_min
    assert schmidt_gauss(tau_ps, tau_pi, 0.95 * opt.tau_p_min) > opt.k_min


def test_optimal_pump_negative_eta_reaches_exact_unity():
    """Opposite-sign walk-offs: c12 vanishes exactly at tau_p_min, so the
    Gaussian amplitude factorizes and K = 1 with no approximation."""
    tau_ps, tau_pi = -0.2365 * PS, 0.2375 * PS
    opt = optimal_pump(tau_ps, tau_pi)
    assert opt.k_min == 1.0
    assert not opt.asymptotic_only
    coeffs = GaussCoeffs.from_times(tau_ps, tau_pi, opt.tau_p_min)
    assert abs(coeffs.c12) < 1e-12 * coeffs.c11
    assert math.isclose(schmidt_gauss(tau_ps, tau_pi, opt.tau_p_min), 1.0,
                        rel_tol=1e-12)


def test_optimal_pump_zero_walkoff_is_asymptotic():
    opt = optimal_pump(0.0, 0.72 * PS)
    assert opt.asymptotic_only
    assert opt.tau_p_min == 0.0
    assert opt.k_min == 1.0
    # K decreases monotonically toward 1 as the pump shortens
    k_short = schmidt_gauss(0.0, 0.72 * PS, 0.001 * PS)
    k_long = schmidt_gauss(0.0, 0.72 * PS, 1.0 * PS)
    assert 1.0 < k_short < 1.0001 < k_long
    with pytest.raises(ValueError):
        optimal_pump(1.0 * PS, 0.0)


def test_gauss_grid_estimate_converges_to_closed_form():
    tau_ps, tau_pi, tau_p = 0.67 * PS, 63.0 * PS, 4.05 * PS
    coeffs = GaussCoeffs.from_times(tau_ps, tau_pi, tau_p)
    axis_s, axis_i = default_axes(coeffs, n=256, extent_sigmas=5.0)
    grid = jsa_gauss(coeffs, None, axis_s, axis_i)
    k_closed = schmidt_gauss(tau_ps, tau_pi, tau_p)
    assert math.isclose(schmidt_svd(grid).k, k_closed, rel_tol=1e-4)
    assert math.isclose(schmidt_integral(grid), k_closed, rel_tol=1e-4)


# --- pump-duration sweeps --------------------------------------------------------

def test_sweep_gauss_matches_closed_form(ppktp_solution):
    taus = np.geomspace(0.5, 50.0, 7) * PS
    points = sweep_pump_duration(ppktp_solution, taus, model="gauss")
    assert [p.error for p in points] == [None] * 7
    for p in points:
        expected = schmidt_gauss(ppktp_solution.tau_ps, ppktp_solution.tau_pi, p.tau_p)
        assert math.isclose(p.k, expected, rel_tol=1e-14)


def test_sweep_input_validation(ppktp_solution):
    with pytest.raises(ValueError):
        sweep_pump_duration(ppktp_solution, [2.0 * PS, 1.0 * PS])
    with pytest.raises(ValueError):
        sweep_pump_duration(ppktp_solution, [1.0 * PS, 1.0 * PS])
    with pytest.raises(ValueError):
        sweep_pump_duration(ppktp_solution, [1.0 * PS], model="hybrid")


def test_sweep_exact_runs_and_records_failures(ppktp_solution):
    """A femtosecond pump needs a bandwidth beyond the dispersion validity
    window; that point fails and is recorded, later points still compute."""
    taus = [2.8e-15, 4.05 * PS]
    points = sweep_pump_duration(ppktp_solution, taus, model="exact", n=48)
    assert points[0].error is not None
    assert "OutOfValidityRange" in points[0].error
    assert math.isnan(points[0].k)
    assert points[1].error is None
    assert 1.0 < points[1].k < 1.2
