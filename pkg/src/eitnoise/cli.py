"""Command-line interface.

Commands
--------
spectrum   noise spectra over the scenario's frequency grid -> CSV + figure
extrema    located spectrum extrema with approximations -> CSV + summary
dgcz       separability scan over a parameter grid file -> summary
validate   scenario validation, steady state, stability, covariance oracle

Every command takes --scenario (a file path or a bundled scenario name),
--out (output directory), optional --threads and --dump-matrices.  Exit
codes: 0 success, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import dgcz_scan, find_extrema
from .errors import (EitNoiseError, NoExtrema, ScenarioError)
from .linearize import FluctuationSystem, lyapunov_covariance, stability_check
from .model import solve_steady_state, validate_params
from .reporting import (dgcz_figure, dump_matrix_csv, eigenvalue_figure,
                        extrema_figure, extrema_summary, fmt,
                        spectrum_figure, write_dgcz_summary,
                        write_extrema_csv, write_manifest, write_spectrum_csv)
from .scenarios import (load_dgcz_grid, load_scenario, resolve_scenario_path,
                        _load_json)
from .spectra import (SpectrumRequest, evaluate_spectra,
                      quadrature_covariance, spectrum_matrix)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitnoise",
        description="Quadrature-noise spectra of a two-mode cavity with "
                    "three-level atoms under EIT",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("spectrum", "noise spectra over the frequency grid"),
            ("extrema", "locate spectrum extrema and compare approximations"),
            ("dgcz", "separability scan over a parameter grid"),
            ("validate", "validate a scenario and run consistency oracles")):
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--scenario", required=True,
                         help="scenario file or bundled scenario name")
        cmd.add_argument("--out", default=".",
                         help="output directory (created if missing)")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads for grid evaluation")
        cmd.add_argument("--dump-matrices", action="store_true",
                         help="dump drift and diffusion matrices as CSV")
        cmd.add_argument("--no-figures", action="store_true",
                         help="skip figure rendering")
    sub.choices["extrema"].add_argument(
        "--mode", choices=("probe", "pump", "both"), default="both",
        help="which output channel to scan")
    return parser


def _prepare(args) -> tuple[Path, Path]:
    scenario_path = resolve_scenario_path(args.scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return scenario_path, out_dir


def _build_system(scenario):
    report = validate_params(scenario.params)
    if not report.ok:
        raise ScenarioError(
            "invalid scenario parameters: " + "; ".join(report.violations))
    steady = solve_steady_state(scenario.params)
    fs = FluctuationSystem.from_steady_state(
        scenario.params, steady, scenario.stationarity_tol)
    return report, steady, fs


def _maybe_dump_matrices(args, fs, out_dir: Path, outputs: list[Path]):
    if args.dump_matrices:
        outputs.append(dump_matrix_csv(out_dir / "drift_matrix.csv",
                                       fs.drift))
        outputs.append(dump_matrix_csv(out_dir / "diffusion_matrix.csv",
                                       fs.diffusion))


def _cmd_spectrum(args) -> int:
    scenario_path, out_dir = _prepare(args)
    scenario = load_scenario(scenario_path)
    report, steady, fs = _build_system(scenario)
    request = SpectrumRequest(
        omegas=scenario.omega_grid(),
        theta_probe=scenario.theta_probe,
        theta_pump=scenario.pump_theta,
    )
    result = evaluate_spectra(fs, scenario.params, request,
                              threads=args.threads)
    outputs = [write_spectrum_csv(out_dir / "spectrum.csv", result)]
    _maybe_dump_matrices(args, fs, out_dir, outputs)
    if not args.no_figures:
        outputs.append(spectrum_figure(
            out_dir / "spectrum.png", result,
            f"{scenario.name}: output noise spectra"))
    outputs.append(write_manifest(out_dir, "spectrum", scenario.raw or {},
                                  outputs))
    if not report.closed_forms_applicable:
        print("note: closed forms not applicable; numeric-only mode")
    print(f"wrote {out_dir / 'spectrum.csv'}")
    return EXIT_OK


def _cmd_extrema(args) -> int:
    scenario_path, out_dir = _prepare(args)
    scenario = load_scenario(scenario_path)
    report, steady, fs = _build_system(scenario)
    modes = {"probe": [2], "pump": [1], "both": [2, 1]}[args.mode]
    reports = []
    empty_modes = []
    for mode in modes:
        try:
            reports.append(find_extrema(
                scenario.params, scenario.theta, mode,
                omega_range=(scenario.omega_min, scenario.omega_max)))
        except NoExtrema:
            empty_modes.append(mode)
    outputs = [write_extrema_csv(out_dir / "extrema.csv", reports)]
    summary = extrema_summary(reports, empty_modes)
    summary_path = out_dir / "extrema_summary.txt"
    summary_path.write_text(summary, encoding="utf-8")
    outputs.append(summary_path)
    _maybe_dump_matrices(args, fs, out_dir, outputs)
    if not args.no_figures:
        request = SpectrumRequest(
            omegas=scenario.omega_grid(), theta_probe=scenario.theta,
            theta_pump=scenario.pump_theta, closed_form=False)
        result = evaluate_spectra(fs, scenario.params, request,
                                  threads=args.threads)
        outputs.append(extrema_figure(
            out_dir / "extrema.png", result, reports,
            f"{scenario.name}: spectrum extrema"))
    outputs.append(write_manifest(out_dir, "extrema", scenario.raw or {},
                                  outputs))
    sys.stdout.write(summary)
    return EXIT_OK


def _cmd_dgcz(args) -> int:
    scenario_path, out_dir = _prepare(args)
    grid = load_dgcz_grid(scenario_path)
    report = dgcz_scan(grid)
    outputs = [write_dgcz_summary(out_dir / "dgcz_summary.txt", report,
                              grid)]
    if not args.no_figures:
        outputs.append(dgcz_figure(out_dir / "dgcz.png", report,
                                   "sum-variance separability scan"))
    outputs.append(write_manifest(out_dir, "dgcz",
                                  _load_json(scenario_path), outputs))
    print(f"grid minimum {fmt(report.minimum)} vs bound "
          f"{fmt(report.bound)}; violation={report.violation}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    scenario_path, out_dir = _prepare(args)
    scenario = load_scenario(scenario_path)
    report = validate_params(scenario.params)
    lines = [f"scenario            : {scenario.name}"]
    coop = report.cooperativity
    lines.append(f"cooperativity       : "
                 f"{'undefined (asymmetric)' if coop is None else f'{coop:.6g}'}")
    lines.append(f"symmetric regime    : {report.symmetric}")
    lines.append(f"closed forms        : "
                 + ("applicable" if report.closed_forms_applicable
                    else "not applicable (numeric-only mode)"))
    if not report.ok:
        for v in report.violations:
            lines.append(f"violation           : {v}")
        print("\n".join(lines))
        raise ScenarioError("; ".join(report.violations))

    steady = solve_steady_state(scenario.params)
    lines.append(f"steady-state residual: {steady.residual:.3e}")
    fs = FluctuationSystem.from_steady_state(
        scenario.params, steady, scenario.stationarity_tol)
    stab = stability_check(fs)
    lines.append(f"stable              : {stab.stable} "
                 f"(max Re eigenvalue {stab.max_real_part:.3e}, "
                 f"{stab.soft_modes} soft modes)")

    # covariance oracle: trapezoidal quadrature of the spectrum matrix
    # against the Lyapunov solution; 20001 samples per half axis resolve
    # the narrow ground-state resonance
    cov = lyapunov_covariance(fs)
    acc = quadrature_covariance(fs, np.linspace(-50.0, 50.0, 40001))
    rel = (np.linalg.norm(acc - cov) /
           max(np.linalg.norm(cov), 1e-300))
    lines.append(f"covariance oracle   : quadrature vs Lyapunov relative "
                 f"deviation {rel:.3e}")

    outputs: list[Path] = []
    _maybe_dump_matrices(args, fs, out_dir, outputs)
    if not args.no_figures:
        outputs.append(eigenvalue_figure(
            out_dir / "eigenvalues.png", stab.eigenvalues,
            f"{scenario.name}: drift-matrix eigenvalues"))
    text = "\n".join(lines) + "\n"
    report_path = out_dir / "validate.txt"
    report_path.write_text(text, encoding="utf-8")
    outputs.append(report_path)
    outputs.append(write_manifest(out_dir, "validate", scenario.raw or {},
                                  outputs))
    sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "extrema": _cmd_extrema,
    "dgcz": _cmd_dgcz,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EitNoiseError as exc:
        op = type(exc).__name__
        print(f"numeric failure in {op}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception:
        traceback.print_exc()
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
