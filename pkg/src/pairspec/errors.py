"""Exception types raised by the physics and I/O layers."""


class PairspecError(Exception):
    """Base class for all library errors."""


class OutOfValidityRange(PairspecError):
    """A Sellmeier formula was asked for a wavelength outside its validity range."""

    def __init__(self, wavelength_um: float, lo_um: float, hi_um: float, crystal: str = "", axis: str = ""):
        self.wavelength_um = wavelength_um
        self.lo_um = lo_um
        self.hi_um = hi_um
        where = f" [{crystal}/{axis}]" if crystal else ""
        super().__init__(
            f"wavelength {wavelength_um:.6g} um outside validity range "
            f"[{lo_um:g}, {hi_um:g}] um{where}"
        )


class UnknownPolarizationAxis(PairspecError):
    """The crystal model has no Sellmeier set for the requested polarization axis."""


class StencilOutOfRange(PairspecError):
    """A finite-difference stencil point fell outside the Sellmeier validity range."""


class NoRootInBracket(PairspecError):
    """The phase-matching residual has no sign change inside the search bracket."""


class MultipleRoots(PairspecError):
    """More than one phase-matched signal wavelength was found in the search window."""

    def __init__(self, roots_nm):
        self.roots_nm = list(roots_nm)
        pretty = ", ".join(f"{r:.2f}" for r in self.roots_nm)
        super().__init__(
            f"{len(self.roots_nm)} phase-matched signal wavelengths in window: "
            f"{pretty} nm; narrow the signal window to select one"
        )


class DegenerateGroupVelocities(PairspecError):
    """tau_ps = tau_pi: the Gaussian model degenerates (K diverges)."""


class EmptyGrid(PairspecError):
    """A grid operation received an empty or identically-zero amplitude."""


class SvdFailure(PairspecError):
    """The dense SVD of the amplitude matrix failed to converge."""


class ConfigError(PairspecError):
    """A scenario or crystal file failed JSON parsing or schema validation."""
