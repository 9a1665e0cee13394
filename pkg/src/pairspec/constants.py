"""Physical constants and unit helpers.

Internally everything is SI (m, s, rad/s).  Human-facing I/O uses nm, ps
and rad/ps; the converters below are the only place the factors live.
"""

SPEED_OF_LIGHT = 299792458.0  # m/s

#: Gaussian fit constant for sinc(x) ~ exp(-gamma x^2), matched at half maximum.
GAMMA_SINC_FIT = 0.193

NM = 1e-9
UM = 1e-6
MM = 1e-3
PS = 1e-12


def nm_to_m(value_nm: float) -> float:
    return value_nm * NM


def m_to_nm(value_m: float) -> float:
    return value_m / NM


def ps_to_s(value_ps: float) -> float:
    return value_ps * PS


def s_to_ps(value_s: float) -> float:
    return value_s / PS


def rad_per_s_to_rad_per_ps(value: float) -> float:
    return value * PS


def rad_per_ps_to_rad_per_s(value: float) -> float:
    return value / PS
