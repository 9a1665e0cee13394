"""Config loading, CSV writers and the command-line front end."""
import csv
import json
import math

import numpy as np
import pytest

from pairspec.biphoton import GaussCoeffs, default_axes, jsa_gauss
from pairspec.cli import main
from pairspec.constants import PS
from pairspec.errors import ConfigError
from pairspec.io import (bundled_crystals, bundled_scenarios, config_digest,
                         load_crystal, load_scenario, scenario_payload,
                         write_jsa_csv, write_modes_csv, write_scan_csv,
                         write_sidecar, write_sweep_csv)
from pairspec.phasematch import CO, COUNTER, ScanPoint
from pairspec.schmidt import SweepPoint


def read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


# --- loaders --------------------------------------------------------------------

def test_bundled_listings():
    assert bundled_crystals() == ["bbo", "kdp", "ktp"]
    assert bundled_scenarios() == ["bbo", "kdp", "ppktp"]


def test_load_by_name_and_by_path(tmp_path):
    by_name = load_scenario("ppktp")
    copy = tmp_path / "my_scenario.json"
    copy.write_text(json.dumps(scenario_payload("ppktp")))
    by_path = load_scenario(copy)
    assert by_path == by_name
    crystal = load_crystal("ktp")
    assert crystal.name.lower() == "ktp"


def test_unknown_names_list_the_bundled_ones():
    with pytest.raises(ConfigError, match="bundled: bbo, kdp, ppktp"):
        load_scenario("pptkp")  # typo'd name
    with pytest.raises(ConfigError, match="bundled: bbo, kdp, ktp"):
        load_crystal("quartz")


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_scenario(tmp_path / "nope.json")
    broken = tmp_path / "broken.json"
    broken.write_text('{"name": "x",\n  "geometry": }')
    with pytest.raises(ConfigError, match=r"line 2, column 15"):
        load_scenario(broken)


def test_schema_violations_are_pinpointed(tmp_path):
    payload = scenario_payload("ppktp")

    missing = dict(payload)
    del missing["crystal"]
    path = tmp_path / "missing.json"
    path.write_text(json.dumps(missing))
    with pytest.raises(ConfigError, match="failed validation"):
        load_scenario(path)

    negative = dict(payload, pump_duration_ps=-2.0)
    path = tmp_path / "negative.json"
    path.write_text(json.dumps(negative))
    with pytest.raises(ConfigError, match="pump_duration_ps"):
        load_scenario(path)

    bad_geometry = dict(payload, geometry="sideways")
    path = tmp_path / "geometry.json"
    path.write_text(json.dumps(bad_geometry))
    with pytest.raises(ConfigError, match="geometry"):
        load_scenario(path)


def test_bad_crystal_payload(tmp_path):
    path = tmp_path / "crystal.json"
    path.write_text(json.dumps({"name": "mystery"}))
    with pytest.raises(ConfigError, match="bad crystal file"):
        load_crystal(path)


def test_config_digest_is_order_invariant():
    a = {"name": "x", "pump_wavelength_nm": 821.4, "tags": [1, 2]}
    b = {"tags": [1, 2], "pump_wavelength_nm": 821.4, "name": "x"}
    assert config_digest(a) == config_digest(b)
    assert len(config_digest(a)) == 64
    assert config_digest(a) != config_digest(dict(a, name="y"))


# --- writers --------------------------------------------------------------------

def test_scan_csv_layout(tmp_path):
    good = ScanPoint(lambda_s=1141e-9, lambda_i=2932.29e-9, lambda_or_theta=800.05e-9,
                     tau_ps=0.6729e-12, tau_pi=63.05e-12, eta=0.0107)
    failed = ScanPoint(lambda_s=400e-9, error="NoRootInBracket: below the pump")
    path = write_scan_csv(tmp_path / "scan.csv", [good, failed], COUNTER)
    rows = read_rows(path)
    assert rows[0] == ["lambda_s_nm", "lambda_i_nm", "poling_period_nm",
                       "tau_ps_ps", "tau_pi_ps", "eta", "error"]
    assert rows[1][0] == "1141"
    assert rows[1][2] == "800.05"
    assert rows[1][6] == ""
    assert rows[2][2] == ""  # no matching parameter on the failed row
    assert rows[2][6].startswith("NoRootInBracket")

    angle = ScanPoint(lambda_s=830e-9, lambda_i=830e-9,
                      lambda_or_theta=math.radians(67.764), tau_ps=3e-16,
                      tau_pi=0.722e-12, eta=4e-4)
    rows = read_rows(write_scan_csv(tmp_path / "scan_co.csv", [angle], CO))
    assert rows[0][2] == "theta_deg"
    assert rows[1][2] == "67.764"


def test_sweep_and_modes_csv(tmp_path):
    points = [SweepPoint(tau_p=1e-12, k=1.5), SweepPoint(tau_p=2e-12, error="boom")]
    rows = read_rows(write_sweep_csv(tmp_path / "sweep.csv", points))
    assert rows[0] == ["tau_p_ps", "k", "error"]
    assert rows[1] == ["1", "1.5", ""]
    assert rows[2][0] == "2" and rows[2][2] == "boom"

    weights = np.array([0.9, 0.08, 0.02] + [1e-5] * 20)
    rows = read_rows(write_modes_csv(tmp_path / "modes.csv", weights))
    assert rows[0] == ["mode", "weight"]
    assert len(rows) == 1 + 16  # truncated to the leading modes
    assert rows[1] == ["0", "0.9"]


def test_jsa_csv_is_long_format_and_deterministic(tmp_path):
    coeffs = GaussCoeffs.from_times(0.3 * PS, 1.7 * PS, 0.9 * PS)
    grid = jsa_gauss(coeffs, None, *default_axes(coeffs, n=12))
    first = write_jsa_csv(tmp_path / "a.csv", grid)
    second = write_jsa_csv(tmp_path / "b.csv", grid)
    assert first.read_bytes() == second.read_bytes()
    rows = read_rows(first)
    assert rows[0] == ["omega_s_rad_per_ps", "omega_i_rad_per_ps", "re", "im",
                       "intensity"]
    assert len(rows) == 1 + 12 * 12
    # spot-check one node against the grid contents
    row = rows[1 + 3 * 12 + 5]
    assert math.isclose(float(row[0]), grid.axis_s[3] * PS, rel_tol=1e-8)
    value = complex(float(row[2]), float(row[3]))
    assert np.isclose(value, grid.values[3, 5], rtol=1e-8)


def test_sidecar_embeds_config_digest(tmp_path):
    payload = scenario_payload("kdp")
    path = write_sidecar(tmp_path / "run.meta.json", {"command": "solve"}, payload)
    body = json.loads(path.read_text())
    assert body["command"] == "solve"
    assert body["config_sha256"] == config_digest(payload)


# --- command-line front end --------------------------------------------------------

def test_cli_solve_writes_table_and_sidecar(tmp_path, capsys):
    assert main(["solve", "ppktp", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "lambda_s" in out and "1141" in out
    assert "tau_p_min" in out
    table = tmp_path / "solution_ppktp.csv"
    assert table.is_file()
    rows = read_rows(table)
    assert rows[0][0] == "name" and rows[1][0] == "ppktp"
    meta = json.loads((tmp_path / "solution_ppktp.meta.json").read_text())
    assert meta["config_sha256"] == config_digest(scenario_payload("ppktp"))
    assert meta["outputs"] == ["solution_ppktp.csv"]


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["solve", "pptkp", "--out-dir", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err

    assert main(["figure", "5", "--out-dir", str(tmp_path)]) == 4
    assert "unsupported figure" in capsys.readouterr().err

    assert main(["sweep", "ppktp", "--taup", "abc",
                 "--out-dir", str(tmp_path)]) == 2
    assert main(["sweep", "ppktp", "--taup", "5:1:10",
                 "--out-dir", str(tmp_path)]) == 2


def test_cli_no_solution_paths(tmp_path, capsys):
    narrowed = dict(scenario_payload("ppktp"), signal_window_nm=[1300.0, 1310.0])
    narrow_file = tmp_path / "narrow.json"
    narrow_file.write_text(json.dumps(narrowed))
    assert main(["solve", str(narrow_file), "--out-dir", str(tmp_path)]) == 3
    assert "phase matching failed" in capsys.readouterr().err

    ambiguous = dict(scenario_payload("kdp"),
                     polarizations={"pump": "e", "signal": "o", "idler": "o"},
                     tuning_angle_deg=43.693834172593195)
    ambiguous_file = tmp_path / "ambiguous.json"
    ambiguous_file.write_text(json.dumps(ambiguous))
    assert main(["solve", str(ambiguous_file), "--out-dir", str(tmp_path)]) == 3
    assert "narrow the signal window" in capsys.readouterr().err


def test_cli_computation_error_path(tmp_path, capsys):
    # a 2.8 fs pump needs bandwidth outside the dispersion validity window
    code = main(["spectrum", "ppktp", "--taup", "0.0028", "--grid", "32",
                 "--no-plot", "--out-dir", str(tmp_path)])
    assert code == 5
    assert "error:" in capsys.readouterr().err


def test_cli_jsa_gauss_no_plot(tmp_path, capsys):
    code = main(["jsa", "kdp", "--model", "gauss", "--grid", "24", "--taup", "0.1",
                 "--no-plot", "--out-dir", str(tmp_path)])
    assert code == 0
    assert "K (gauss" in capsys.readouterr().out
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["jsa_kdp_gauss_taup_0.1ps.csv",
                     "jsa_kdp_gauss_taup_0.1ps.meta.json",
                     "jsa_kdp_gauss_taup_0.1ps_modes.csv"]


def test_cli_spectrum_exact(tmp_path, capsys):
    code = main(["spectrum", "bbo", "--grid", "48", "--no-plot",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "signal_exact" in out and "idler_gauss" in out
    rows = read_rows(tmp_path / "spectrum_bbo.csv")
    labels = {row[0] for row in rows[1:]}
    assert labels == {"signal_exact", "idler_exact", "signal_gauss", "idler_gauss"}


def test_cli_figure_scan_counter(tmp_path):
    code = main(["figure", "2", "--crystal", "ppktp", "--no-plot",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    rows = read_rows(tmp_path / "fig2_ppktp.csv")
    assert rows[0][2] == "poling_period_nm"
    assert len(rows) == 1 + 161
    meta = json.loads((tmp_path / "fig2_ppktp.meta.json").read_text())
    assert meta["scan_window_nm"] == [1085.0, 1600.0]


def test_cli_sweep_renders_png(tmp_path):
    code = main(["sweep", "ppktp", "--taup", "1:10:5", "--model", "gauss",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "sweep_ppktp_gauss.csv").is_file()
    png = tmp_path / "sweep_ppktp_gauss.png"
    assert png.is_file()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    meta = json.loads((tmp_path / "sweep_ppktp_gauss.meta.json").read_text())
    assert meta["outputs"] == ["sweep_ppktp_gauss.csv", "sweep_ppktp_gauss.png"]


def test_cli_validate_passes(tmp_path, capsys):
    assert main(["validate", "--grid", "96"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out
    assert "[FAIL]" not in out
    assert "checks passed" in out
