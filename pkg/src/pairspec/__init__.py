"""Joint spectra and Schmidt-mode structure of parametric down-conversion pairs.

The library models collinear pair generation in counter-propagating
(backward-wave, quasi-phase-matched) and co-propagating (birefringent or
poled) geometries: it solves the phase-matching problem from Sellmeier
dispersion data, builds joint spectral amplitudes on dense grids, and
quantifies the entanglement of the pair (equivalently, the heralded-photon
purity) through the Schmidt number computed by two independent routes.
"""

__version__ = "0.1.0"

from .biphoton import (GaussCoeffs, JsaGrid, PumpPulse, default_axes, jsa_exact,
                       jsa_gauss, trapezoid_weights)
from .constants import GAMMA_SINC_FIT
from .dispersion import (CrystalModel, Polarization, SellmeierSet, WaveSpec,
                         inverse_group_velocity, refractive_index, wavenumber)
from .errors import (ConfigError, DegenerateGroupVelocities, EmptyGrid,
                     MultipleRoots, NoRootInBracket, OutOfValidityRange,
                     PairspecError, SvdFailure)
from .io import (bundled_crystals, bundled_scenarios, load_crystal, load_scenario,
                 scenario_payload)
from .phasematch import (CO, COUNTER, PhaseMatchSolution, ScanPoint, ScenarioConfig,
                         linearized_mismatch, mismatch_full, poling_period_for,
                         scan_signal_wavelengths, solve_central_frequencies,
                         tuning_angle_for)
from .schmidt import (OptimalPump, SvdResult, SweepPoint, coherence_matrix,
                      optimal_pump, schmidt_gauss, schmidt_gauss_eta_form,
                      schmidt_integral, schmidt_svd, sweep_pump_duration)
from .spectra import (EllipseGeometry, SpectrumCurve, coherence_gauss,
                      ellipse_geometry, fwhm_interpolated, gauss_bandwidths,
                      marginal_spectrum)
from .validation import CheckResult, format_report, run_all_checks

__all__ = [
    "__version__",
    "GAMMA_SINC_FIT",
    # dispersion
    "CrystalModel", "Polarization", "SellmeierSet", "WaveSpec",
    "refractive_index", "wavenumber", "inverse_group_velocity",
    # phase matching
    "CO", "COUNTER", "ScenarioConfig", "PhaseMatchSolution", "ScanPoint",
    "solve_central_frequencies", "mismatch_full", "linearized_mismatch",
    "poling_period_for", "tuning_angle_for", "scan_signal_wavelengths",
    # amplitudes
    "PumpPulse", "GaussCoeffs", "JsaGrid", "trapezoid_weights", "default_axes",
    "jsa_exact", "jsa_gauss",
    # Schmidt analysis
    "schmidt_gauss", "schmidt_gauss_eta_form", "optimal_pump", "OptimalPump",
    "coherence_matrix", "schmidt_integral", "schmidt_svd", "SvdResult",
    "sweep_pump_duration", "SweepPoint",
    # spectra
    "SpectrumCurve", "EllipseGeometry", "marginal_spectrum", "fwhm_interpolated",
    "gauss_bandwidths", "coherence_gauss", "ellipse_geometry",
    # config + checks
    "load_crystal", "load_scenario", "scenario_payload",
    "bundled_crystals", "bundled_scenarios",
    "CheckResult", "run_all_checks", "format_report",
    # errors
    "PairspecError", "ConfigError", "OutOfValidityRange", "NoRootInBracket",
    "MultipleRoots", "DegenerateGroupVelocities", "EmptyGrid", "SvdFailure",
]
