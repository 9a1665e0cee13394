"""Command-line front end.

Subcommands
    solve CONFIG              central wavelengths, characteristic times, optimum
    figure {2,3,4,6} [...]    report datasets (CSV + sidecar) with rendered PNGs
    sweep CONFIG --taup ...   K versus pump duration
    jsa CONFIG [--taup X]     joint spectral amplitude on a grid
    spectrum CONFIG [...]     marginal spectra with Gaussian-model overlays
    validate                  golden self-checks; exit 0 iff all pass

Figures are emitted as CSV data plus a PNG rendering next to it; pass
--no-plot for the data-only behavior.  Exit codes: 0 success, 1 failed
validation, 2 bad config/usage, 3 no (or ambiguous) phase-matched solution,
4 unsupported figure number, 5 other computation errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .biphoton import GaussCoeffs, PumpPulse, default_axes, jsa_exact, jsa_gauss
from .constants import GAMMA_SINC_FIT, NM, PS
from .errors import ConfigError, MultipleRoots, NoRootInBracket, PairspecError
from .io import (bundled_scenarios, config_digest, load_crystal, load_scenario,
                 scenario_payload, write_jsa_csv, write_modes_csv, write_scan_csv,
                 write_spectrum_csv, write_sweep_csv, write_table_csv, write_sidecar)
from .phasematch import COUNTER, scan_signal_wavelengths, solve_central_frequencies
from .schmidt import optimal_pump, schmidt_gauss, schmidt_svd, sweep_pump_duration
from .spectra import SpectrumCurve, gauss_bandwidths, marginal_spectrum
from .validation import format_report, run_all_checks

# Signal-wavelength windows (nm) and point counts for the tuning-curve figure.
_SCAN_WINDOWS = {"ppktp": (1085.0, 1600.0, 161), "kdp": (772.0, 898.0, 127),
                 "bbo": (1020.0, 1900.0, 161)}
# Pump-duration ranges (ps) for the K(tau_p) figure.
_SWEEP_RANGES = {"ppktp": (0.05, 500.0, 29), "kdp": (0.01, 20.0, 25),
                 "bbo": (0.01, 20.0, 25)}
# Long / near-optimal / short pump durations (ps) for the joint-intensity figure.
_JSA_TRIPLES = {"ppktp": (100.0, 4.05, 0.067), "kdp": (10.0, 0.1, 0.02),
                "bbo": (10.0, 0.147, 0.0237)}

_FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))


def _add_common(parser):
    parser.add_argument("--gamma", type=float, default=GAMMA_SINC_FIT,
                        help="Gaussian-model fit constant (default %(default)s)")
    parser.add_argument("--grid", type=int, default=None, metavar="N",
                        help="points per grid axis (default depends on the command)")
    parser.add_argument("--extent-sigmas", type=float, default=5.0, metavar="S",
                        help="grid half-extent in marginal std devs (default %(default)s)")
    parser.add_argument("--out-dir", type=Path, default=Path("pairspec_out"),
                        help="output directory (default %(default)s)")
    parser.add_argument("--no-plot", action="store_true",
                        help="emit CSV data only, skip PNG rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairspec",
        description="Photon-pair joint spectra, Schmidt numbers and tuning curves "
                    "for counter- and co-propagating parametric down-conversion.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="central wavelengths and characteristic times")
    p.add_argument("config", help="bundled scenario name or path to a scenario JSON")
    _add_common(p)
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("figure", help="report datasets with rendered figures")
    p.add_argument("which", type=int, help="figure number: 2, 3, 4 or 6")
    p.add_argument("--crystal", default=None,
                   help="restrict to one scenario (default: all bundled)")
    _add_common(p)
    p.set_defaults(handler=_cmd_figure)

    p = sub.add_parser("sweep", help="Schmidt number against pump duration")
    p.add_argument("config")
    p.add_argument("--taup", required=True, metavar="LO:HI:STEPS",
                   help="log-spaced pump durations in ps, e.g. 0.4:40:25")
    p.add_argument("--model", choices=("gauss", "exact"), default="gauss")
    _add_common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("jsa", help="joint spectral amplitude on a grid")
    p.add_argument("config")
    p.add_argument("--taup", type=float, default=None, metavar="PS",
                   help="pump duration in ps (default: the scenario's)")
    p.add_argument("--model", choices=("gauss", "exact"), default="exact")
    _add_common(p)
    p.set_defaults(handler=_cmd_jsa)

    p = sub.add_parser("spectrum", help="marginal spectra and bandwidths")
    p.add_argument("config")
    p.add_argument("--taup", type=float, default=None, metavar="PS")
    p.add_argument("--model", choices=("gauss", "exact"), default="exact")
    _add_common(p)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("validate", help="recompute golden values, exit 0 iff all pass")
    p.add_argument("--gamma", type=float, default=GAMMA_SINC_FIT)
    p.add_argument("--grid", type=int, default=256)
    p.set_defaults(handler=_cmd_validate)

    return parser


def _load(config_arg):
    payload = scenario_payload(config_arg)
    config = load_scenario(config_arg)
    crystal = load_crystal(config.crystal)
    return payload, config, crystal


def _meta(args, command: str, outputs, payload, **extra):
    body = {"command": command, "package_version": __version__,
            "gamma": args.gamma, "outputs": [str(Path(o).name) for o in outputs]}
    body.update(extra)
    return body, payload


def _sidecar(stem: Path, args, command, outputs, payload, **extra):
    body, payload = _meta(args, command, outputs, payload, **extra)
    return write_sidecar(stem.with_suffix(".meta.json"), body, payload)


def _announce(*paths):
    for path in paths:
        print(f"wrote {path}")


def _cmd_solve(args) -> int:
    payload, config, crystal = _load(args.config)
    solution = solve_central_frequencies(config, crystal)
    best = optimal_pump(solution.tau_ps, solution.tau_pi, args.gamma)
    k_default = schmidt_gauss(solution.tau_ps, solution.tau_pi,
                              config.pump_duration, args.gamma)

    print(f"scenario           {config.name} ({config.geometry})")
    print(f"lambda_s           {solution.lambda_s_nm:.3f} nm")
    print(f"lambda_i           {solution.lambda_i_nm:.3f} nm")
    print(f"tau_ps             {solution.tau_ps_ps:.6g} ps")
    print(f"tau_pi             {solution.tau_pi_ps:.6g} ps")
    print(f"eta                {solution.eta:.6g}")
    if solution.swapped:
        print("note               signal/idler labels swapped into |tau_ps| <= |tau_pi| order")
    if best.asymptotic_only:
        print("tau_p_min          none (K -> 1 asymptotically as tau_p -> 0)")
    else:
        print(f"tau_p_min          {best.tau_p_min / PS:.6g} ps (Gaussian K_min {best.k_min:.6g})")
    print(f"K (gauss, tau_p={config.pump_duration / PS:g} ps)  {k_default:.6g}")

    out = args.out_dir / f"solution_{config.name}.csv"
    header = ["name", "geometry", "lambda_s_nm", "lambda_i_nm", "tau_ps_ps",
              "tau_pi_ps", "eta", "tau_p_min_ps", "k_min_gauss", "k_gauss_at_default"]
    row = [config.name, config.geometry, solution.lambda_s_nm, solution.lambda_i_nm,
           solution.tau_ps_ps, solution.tau_pi_ps, solution.eta,
           best.tau_p_min / PS, best.k_min, k_default]
    write_table_csv(out, header, [row])
    meta = _sidecar(out, args, "solve", [out], payload, residual=solution.residual)
    _announce(out, meta)
    return 0


def _scenario_names(args):
    if args.crystal:
        return [args.crystal]
    return bundled_scenarios()


def _cmd_figure(args) -> int:
    handlers = {2: _figure_scan, 3: _figure_sweep, 4: _figure_jsa, 6: _figure_spectra}
    if args.which not in handlers:
        print(f"unsupported figure {args.which!r}; available: 2, 3, 4, 6", file=sys.stderr)
        return 4
    return handlers[args.which](args)


def _figure_scan(args) -> int:
    for name in _scenario_names(args):
        payload, config, crystal = _load(name)
        lo, hi, count = _SCAN_WINDOWS.get(config.name, (None, None, 161))
        if lo is None:
            if config.signal_window is None:
                raise ConfigError(f"no scan window known for scenario {config.name!r}; "
                                  "add signal_window_nm to the config")
            lo, hi = (w / NM for w in config.signal_window)
        lam = np.linspace(lo * NM, hi * NM, count)
        points = scan_signal_wavelengths(config, crystal, lam)
        out = args.out_dir / f"fig2_{config.name}.csv"
        write_scan_csv(out, points, config.geometry)
        outputs = [out]
        if not args.no_plot:
            png = _plots().save_scan_plot(
                points, config.geometry, out.with_suffix(".png"),
                title=f"{config.name}: phase-matched wavelengths")
            outputs.append(png)
        meta = _sidecar(out, args, "figure 2", outputs, payload,
                        scan_window_nm=[lo, hi], points=count)
        _announce(*outputs, meta)
    return 0


def _figure_sweep(args) -> int:
    n = args.grid or 512
    for name in _scenario_names(args):
        payload, config, crystal = _load(name)
        solution = solve_central_frequencies(config, crystal)
        lo, hi, count = _SWEEP_RANGES.get(config.name, (0.01, 100.0, 25))
        taus = np.geomspace(lo * PS, hi * PS, count)
        gauss = sweep_pump_duration(solution, taus, model="gauss", gamma=args.gamma)
        exact = sweep_pump_duration(solution, taus, model="exact", n=n,
                                    extent_sigmas=args.extent_sigmas, gamma=args.gamma)
        out = args.out_dir / f"fig3_{config.name}.csv"
        header = ["tau_p_ps", "k_gauss", "k_exact", "error"]
        rows = [(g.tau_p / PS, g.k, e.k, e.error or g.error or "")
                for g, e in zip(gauss, exact)]
        write_table_csv(out, header, rows)
        outputs = [out]
        if not args.no_plot:
            best = optimal_pump(solution.tau_ps, solution.tau_pi, args.gamma)
            marks = {}
            if not best.asymptotic_only:
                marks["min"] = (best.tau_p_min, best.k_min)
            png = _plots().save_sweep_plot(
                {"Gaussian model": gauss, "exact (SVD)": exact},
                out.with_suffix(".png"), title=f"{config.name}: K vs pump duration",
                marks=marks)
            outputs.append(png)
        meta = _sidecar(out, args, "figure 3", outputs, payload,
                        grid=n, taup_range_ps=[lo, hi], points=count)
        _announce(*outputs, meta)
    return 0


def _figure_jsa(args) -> int:
    n = args.grid or 201
    for name in _scenario_names(args):
        payload, config, crystal = _load(name)
        solution = solve_central_frequencies(config, crystal)
        grids, labels, outputs = [], [], []
        for tau_ps_value in _JSA_TRIPLES.get(config.name, (10.0, 1.0, 0.1)):
            tau_p = tau_ps_value * PS
            coeffs = GaussCoeffs.from_times(solution.tau_ps, solution.tau_pi,
                                            tau_p, args.gamma)
            axes = default_axes(coeffs, n=n, extent_sigmas=args.extent_sigmas)
            grid = jsa_exact(solution, PumpPulse(tau_p=tau_p), *axes)
            grids.append(grid)
            labels.append(f"tau_p = {tau_ps_value:g} ps")
            out = args.out_dir / f"fig4_{config.name}_taup_{tau_ps_value:g}ps.csv"
            write_jsa_csv(out, grid)
            outputs.append(out)
        if not args.no_plot:
            png = _plots().save_jsa_panels(
                grids, labels, args.out_dir / f"fig4_{config.name}.png",
                title=f"{config.name}: joint intensity")
            outputs.append(png)
        meta = _sidecar(args.out_dir / f"fig4_{config.name}.csv", args, "figure 4",
                        outputs, payload, grid=n,
                        taup_values_ps=list(_JSA_TRIPLES.get(config.name, ())))
        _announce(*outputs, meta)
    return 0


def _spectra_for(config, solution, args, n):
    """Exact marginals plus Gaussian closed-form overlays at one pump duration."""
    tau_p = config.pump_duration
    coeffs = GaussCoeffs.from_times(solution.tau_ps, solution.tau_pi, tau_p, args.gamma)
    axes = default_axes(coeffs, n=n, extent_sigmas=args.extent_sigmas)
    grid = jsa_exact(solution, PumpPulse(tau_p=tau_p), *axes)
    curves = {"signal_exact": marginal_spectrum(grid, "signal"),
              "idler_exact": marginal_spectrum(grid, "idler")}
    sigma_s, sigma_i = gauss_bandwidths(solution.tau_ps, solution.tau_pi,
                                        tau_p, args.gamma)
    for label, sigma, axis in (("signal_gauss", sigma_s, grid.axis_s),
                               ("idler_gauss", sigma_i, grid.axis_i)):
        curves[label] = SpectrumCurve(axis=axis,
                                      values=np.exp(-axis**2 / (2.0 * sigma**2)),
                                      fwhm=_FWHM_PER_SIGMA * sigma, sigma=sigma)
    return curves


def _figure_spectra(args) -> int:
    n = args.grid or 512
    for name in _scenario_names(args):
        payload, config, crystal = _load(name)
        solution = solve_central_frequencies(config, crystal)
        curves = _spectra_for(config, solution, args, n)
        out = args.out_dir / f"fig6_{config.name}.csv"
        write_spectrum_csv(out, curves)
        outputs = [out]
        if not args.no_plot:
            png = _plots().save_spectrum_plot(
                {k: v for k, v in curves.items() if k.endswith("exact")},
                out.with_suffix(".png"),
                title=f"{config.name}: marginal spectra (tau_p = "
                      f"{config.pump_duration / PS:g} ps)",
                overlays={k: (v.axis, v.values) for k, v in curves.items()
                          if k.endswith("gauss")})
            outputs.append(png)
        fwhms = {label: curve.fwhm * PS for label, curve in curves.items()}
        meta = _sidecar(out, args, "figure 6", outputs, payload,
                        grid=n, fwhm_rad_per_ps=fwhms)
        _announce(*outputs, meta)
        for label, curve in curves.items():
            print(f"  {label}: FWHM {curve.fwhm * PS:.6g} rad/ps")
    return 0


def _parse_taup_range(text: str):
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise ConfigError(f"--taup expects LO:HI:STEPS, got {text!r}") from None
    if not (0 < lo < hi) or steps < 2:
        raise ConfigError("--taup needs 0 < LO < HI and STEPS >= 2")
    return np.geomspace(lo * PS, hi * PS, steps)


def _cmd_sweep(args) -> int:
    payload, config, crystal = _load(args.config)
    solution = solve_central_frequencies(config, crystal)
    taus = _parse_taup_range(args.taup)
    n = args.grid or 512
    points = sweep_pump_duration(solution, taus, model=args.model, n=n,
                                 extent_sigmas=args.extent_sigmas, gamma=args.gamma)
    out = args.out_dir / f"sweep_{config.name}_{args.model}.csv"
    write_sweep_csv(out, points)
    outputs = [out]
    if not args.no_plot:
        png = _plots().save_sweep_plot({args.model: points}, out.with_suffix(".png"),
                                       title=f"{config.name}: K vs pump duration")
        outputs.append(png)
    meta = _sidecar(out, args, "sweep", outputs, payload,
                    model=args.model, grid=n, taup=args.taup)
    _announce(*outputs, meta)
    return 0


def _cmd_jsa(args) -> int:
    payload, config, crystal = _load(args.config)
    solution = solve_central_frequencies(config, crystal)
    tau_p = (args.taup * PS) if args.taup else config.pump_duration
    n = args.grid or 512
    coeffs = GaussCoeffs.from_times(solution.tau_ps, solution.tau_pi, tau_p, args.gamma)
    axes = default_axes(coeffs, n=n, extent_sigmas=args.extent_sigmas)
    if args.model == "exact":
        grid = jsa_exact(solution, PumpPulse(tau_p=tau_p), *axes)
    else:
        grid = jsa_gauss(coeffs, PumpPulse(tau_p=tau_p), *axes)
    result = schmidt_svd(grid)
    print(f"K ({args.model}, tau_p = {tau_p / PS:g} ps): {result.k:.6f}")
    stem = f"jsa_{config.name}_{args.model}_taup_{tau_p / PS:g}ps"
    out = args.out_dir / f"{stem}.csv"
    write_jsa_csv(out, grid)
    modes = write_modes_csv(args.out_dir / f"{stem}_modes.csv", result.mode_weights)
    outputs = [out, modes]
    if not args.no_plot:
        png = _plots().save_jsa_panels([grid], [f"tau_p = {tau_p / PS:g} ps"],
                                       out.with_suffix(".png"),
                                       title=f"{config.name}: joint intensity")
        outputs.append(png)
    meta = _sidecar(out, args, "jsa", outputs, payload, model=args.model,
                    grid=n, taup_ps=tau_p / PS, k=result.k)
    _announce(*outputs, meta)
    return 0


def _cmd_spectrum(args) -> int:
    payload, config, crystal = _load(args.config)
    if args.taup:
        config = config.replace(pump_duration=args.taup * PS)
    solution = solve_central_frequencies(config, crystal)
    n = args.grid or 512
    curves = _spectra_for(config, solution, args, n)
    for label, curve in curves.items():
        print(f"{label}: FWHM {curve.fwhm * PS:.6g} rad/ps "
              f"(sigma {curve.sigma * PS:.6g} rad/ps)")
    out = args.out_dir / f"spectrum_{config.name}.csv"
    write_spectrum_csv(out, curves)
    outputs = [out]
    if not args.no_plot:
        png = _plots().save_spectrum_plot(
            {k: v for k, v in curves.items() if k.endswith("exact")},
            out.with_suffix(".png"), title=f"{config.name}: marginal spectra",
            overlays={k: (v.axis, v.values) for k, v in curves.items()
                      if k.endswith("gauss")})
        outputs.append(png)
    meta = _sidecar(out, args, "spectrum", outputs, payload, grid=n,
                    taup_ps=config.pump_duration / PS,
                    fwhm_rad_per_ps={k: v.fwhm * PS for k, v in curves.items()})
    _announce(*outputs, meta)
    return 0


def _cmd_validate(args) -> int:
    results = run_all_checks(gamma=args.gamma, grid_n=args.grid)
    print(format_report(results))
    return 0 if all(r.passed or r.info for r in results) else 1


def _plots():
    """Import the renderers lazily so data-only runs never touch matplotlib."""
    from . import plotting
    return plotting


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NoRootInBracket, MultipleRoots) as exc:
        print(f"phase matching failed: {exc}", file=sys.stderr)
        return 3
    except PairspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
