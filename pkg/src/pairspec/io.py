"""Config loading (bundled or user-supplied JSON) and delimited output writers.

Scenario files are validated against the bundled JSON schema before any
physics runs, so malformed input fails with a pointed message instead of a
traceback from deep inside a solver.  All writers emit plain CSV with a
one-line header; floats are rendered with "%.9g" so files round-trip through
spreadsheet tools without silent precision loss.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import jsonschema

from .constants import NM, PS
from .dispersion import CrystalModel
from .errors import ConfigError
from .phasematch import COUNTER, ScanPoint, ScenarioConfig

__all__ = [
    "bundled_crystals",
    "bundled_scenarios",
    "load_crystal",
    "load_scenario",
    "scenario_payload",
    "config_digest",
    "write_table_csv",
    "write_scan_csv",
    "write_sweep_csv",
    "write_jsa_csv",
    "write_spectrum_csv",
    "write_modes_csv",
    "write_sidecar",
]

_FLOAT_FMT = "%.9g"


def _data_root():
    return resources.files("pairspec") / "data"


def bundled_crystals() -> list:
    """Names of the crystal models shipped with the package."""
    return sorted(p.name[:-5] for p in _data_root().iterdir()
                  if p.name.endswith(".json") and p.name != "scenario.schema.json")


def bundled_scenarios() -> list:
    """Names of the scenario configs shipped with the package."""
    return sorted(p.name[:-5] for p in (_data_root() / "scenarios").iterdir()
                  if p.name.endswith(".json"))


def _read_json(source, what: str) -> dict:
    try:
        text = source.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"{what} not found: {source}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{what} {source} is not valid JSON "
            f"(line {exc.lineno}, column {exc.colno}): {exc.msg}"
        ) from None


def _resolve(name_or_path, subdir: str, what: str):
    """Bundled name -> packaged resource; anything path-like -> filesystem path."""
    text = str(name_or_path)
    if text.endswith(".json") or "/" in text or "\\" in text:
        return Path(text)
    candidate = _data_root() / subdir / f"{text}.json" if subdir \
        else _data_root() / f"{text}.json"
    if candidate.is_file():
        return candidate
    known = bundled_scenarios() if subdir else bundled_crystals()
    raise ConfigError(f"unknown {what} {text!r}; bundled: {', '.join(known)} "
                      "(or pass a path to a JSON file)")


def load_crystal(name_or_path) -> CrystalModel:
    """Load a crystal model by bundled name ('ktp', 'kdp', 'bbo') or file path."""
    payload = _read_json(_resolve(name_or_path, "", "crystal"), "crystal file")
    try:
        return CrystalModel.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad crystal file {name_or_path}: {exc}") from None


def _schema() -> dict:
    return json.loads((_data_root() / "scenario.schema.json").read_text(encoding="utf-8"))


def scenario_payload(name_or_path) -> dict:
    """Raw, schema-validated scenario dictionary (boundary units: nm, ps, deg)."""
    source = _resolve(name_or_path, "scenarios", "scenario")
    payload = _read_json(source, "scenario file")
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "(top level)"
        raise ConfigError(f"scenario file {source} failed validation at {where}: "
                          f"{first.message}")
    return payload


def load_scenario(name_or_path) -> ScenarioConfig:
    """Load and validate a scenario by bundled name ('ppktp', 'kdp', 'bbo') or path."""
    payload = scenario_payload(name_or_path)
    try:
        return ScenarioConfig.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad scenario {name_or_path}: {exc}") from None


def config_digest(payload: dict) -> str:
    """sha256 over the canonical (sorted-key, compact) JSON form of a config."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return _FLOAT_FMT % x


def _write_rows(path, header: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    return path


def write_table_csv(path, header: Sequence[str], rows) -> Path:
    """Generic delimited table with the canonical float format."""
    return _write_rows(path, header, rows)


def write_scan_csv(path, points: Sequence[ScanPoint], geometry: str) -> Path:
    """Tuning-curve rows; the matching parameter is a grating period or an angle."""
    if geometry == COUNTER:
        param = "poling_period_nm"
        convert = lambda v: v / NM
    else:
        param = "theta_deg"
        convert = math.degrees
    header = ["lambda_s_nm", "lambda_i_nm", param, "tau_ps_ps", "tau_pi_ps", "eta", "error"]
    rows = [
        (p.lambda_s / NM, p.lambda_i / NM,
         convert(p.lambda_or_theta) if p.error is None else None,
         p.tau_ps / PS, p.tau_pi / PS, p.eta, p.error or "")
        for p in points
    ]
    return _write_rows(path, header, rows)


def write_sweep_csv(path, points) -> Path:
    """Schmidt number against pump duration."""
    header = ["tau_p_ps", "k", "error"]
    rows = [(p.tau_p / PS, p.k, p.error or "") for p in points]
    return _write_rows(path, header, rows)


def write_jsa_csv(path, grid) -> Path:
    """Long-format joint amplitude: one row per (Omega_s, Omega_i) node, rad/ps units."""
    header = ["omega_s_rad_per_ps", "omega_i_rad_per_ps", "re", "im", "intensity"]

    def rows():
        for j, os_ in enumerate(grid.axis_s):
            for m, oi in enumerate(grid.axis_i):
                v = grid.values[j, m]
                yield (os_ * PS, oi * PS, v.real, v.imag, abs(v) ** 2)

    return _write_rows(path, header, rows())


def write_spectrum_csv(path, curves: dict) -> Path:
    """Marginal spectra keyed by photon label, stacked in one long-format file."""
    header = ["photon", "omega_rad_per_ps", "intensity"]

    def rows():
        for label, curve in curves.items():
            for omega, value in zip(curve.axis, curve.values):
                yield (label, omega * PS, value)

    return _write_rows(path, header, rows())


def write_modes_csv(path, mode_weights, limit: int = 16) -> Path:
    """Leading Schmidt-mode weights, largest first."""
    header = ["mode", "weight"]
    rows = [(str(j), w) for j, w in enumerate(mode_weights[:limit])]
    return _write_rows(path, header, rows)


def write_sidecar(path, payload: dict, scenario_payload_dict: Optional[dict] = None) -> Path:
    """JSON sidecar with run metadata; embeds the config digest when given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = dict(payload)
    if scenario_payload_dict is not None:
        body["config_sha256"] = config_digest(scenario_payload_dict)
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
