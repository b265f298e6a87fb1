"""CSV emission, run manifests, matrix dumps and figure rendering.

All numeric CSV output uses a fixed %.12e format so identical scenario
files produce byte-identical tables, and every emitted value survives a
parse -> format -> parse round trip unchanged.
"""

from __future__ import annotations

import csv
import datetime
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from .analysis import DgczReport, ExtremaReport, TransferReport  # noqa: E402
from .scenarios import scenario_hash  # noqa: E402
from .spectra import SpectrumResult  # noqa: E402


def fmt(x: float) -> str:
    return "%.12e" % float(x)


def _write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


SPECTRUM_HEADER = ["omega_over_Gamma", "dY2_num", "dY2_cf", "dY1_num",
                   "dY1_cf", "dC_num", "dC_cf"]


def write_spectrum_csv(path: Path, result: SpectrumResult) -> Path:
    rows = (
        [fmt(w), fmt(y2), fmt(y2c), fmt(y1), fmt(y1c), fmt(dc), fmt(dcc)]
        for w, y2, y2c, y1, y1c, dc, dcc in zip(
            result.omegas, result.probe_numeric, result.probe_closed,
            result.pump_numeric, result.pump_closed, result.cross_numeric,
            result.cross_closed)
    )
    _write_rows(path, SPECTRUM_HEADER, rows)
    return path


EXTREMA_HEADER = ["mode", "kind", "sense", "omega", "value", "approx_omega",
                  "approx_value", "position_error", "value_error"]


def write_extrema_csv(path: Path, reports: list[ExtremaReport]) -> Path:
    rows = []
    for report in reports:
        for e in report.extrema:
            rows.append([
                report.mode, e.kind, e.sense, fmt(e.omega), fmt(e.value),
                "" if e.approx_omega is None else fmt(e.approx_omega),
                "" if e.approx_value is None else fmt(e.approx_value),
                "" if e.position_error is None else fmt(e.position_error),
                "" if e.value_error is None else fmt(e.value_error),
            ])
    _write_rows(path, EXTREMA_HEADER, rows)
    return path


def extrema_summary(reports: list[ExtremaReport],
                    empty_modes: list[int]) -> str:
    lines = []
    for report in reports:
        label = "probe" if report.mode == 2 else "pump"
        lines.append(f"{label} channel, theta = {report.theta:g}:")
        for e in report.extrema:
            if e.omega < 0:
                continue
            approx = ""
            if e.approx_omega is not None:
                approx = (f"  approx |omega| = {e.approx_omega:.6g} "
                          f"({100 * e.position_error:.2f}% off), "
                          f"approx value = {e.approx_value:.6g}")
            lines.append(
                f"  {e.kind} {e.sense} at |omega| = {e.omega:.6g}, "
                f"value = {e.value:.6g}{approx}")
    for mode in empty_modes:
        label = "probe" if mode == 2 else "pump"
        lines.append(f"{label} channel: no extrema (spectrum is flat or "
                     "monotone on the scanned range)")
    return "\n".join(lines) + "\n"


def write_dgcz_summary(path: Path, report: DgczReport,
                       grid=None) -> Path:
    lines = []
    if grid is not None:
        lines += [
            "scanned grid:",
            f"  cooperativity           : {grid.c_values.min():g} .. "
            f"{grid.c_values.max():g} ({grid.c_values.size} values)",
            f"  pump Rabi frequency     : {grid.omega1_values.min():g} .. "
            f"{grid.omega1_values.max():g} ({grid.omega1_values.size} values)",
            f"  probe Rabi frequency    : {grid.omega2_values.min():g} .. "
            f"{grid.omega2_values.max():g} ({grid.omega2_values.size} values)",
            f"  spectrum frequencies    : {grid.omegas.min():g} .. "
            f"{grid.omegas.max():g} ({grid.omegas.size} samples)",
            f"  cavity loss / squeeze r : {grid.gamma_cavity:g} / {grid.r2:g}",
            f"  quadrature angles       : {grid.theta_count}",
        ]
    lines += [
        f"separability bound           : {fmt(report.bound)}",
        f"grid minimum of the functional: {fmt(report.minimum)}",
        f"violation                    : {report.violation}",
        f"parameter points             : {report.n_points}",
        f"functional evaluations       : {report.n_evaluations}",
        "argmin: " + json.dumps(report.argmin, sort_keys=True),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_manifest(out_dir: Path, command: str, scenario_obj: dict,
                   outputs: list[Path]) -> Path:
    manifest = {
        "tool": "eitnoise",
        "version": __version__,
        "command": command,
        "scenario_sha256": scenario_hash(scenario_obj),
        "timestamp_utc": datetime.datetime.now(
            datetime.timezone.utc).isoformat(),
        "outputs": sorted(p.name for p in outputs),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def dump_matrix_csv(path: Path, matrix: np.ndarray) -> Path:
    """Row-major dump of a complex matrix; each cell is a quoted "re,im"
    pair in %.12e format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_ALL)
        for row in matrix:
            writer.writerow([f"{fmt(z.real)},{fmt(z.imag)}" for z in row])
    return path


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------

def spectrum_figure(path: Path, result: SpectrumResult, title: str) -> Path:
    fig, axes = plt.subplots(3, 1, figsize=(7.0, 9.0), sharex=True)
    w = result.omegas
    have_cf = np.isfinite(result.probe_closed).all()

    axes[0].plot(w, result.probe_numeric, "b-", lw=1.0, label="numeric")
    if have_cf:
        axes[0].plot(w, result.probe_closed, "r--", lw=0.8,
                     label="closed form")
    axes[0].set_ylabel(r"$\Delta Y_2$ (probe)")
    axes[0].set_yscale("log")
    axes[0].legend(fontsize="small")

    axes[1].plot(w, result.pump_numeric, "b-", lw=1.0)
    if have_cf:
        axes[1].plot(w, result.pump_closed, "r--", lw=0.8)
    axes[1].set_ylabel(r"$\Delta Y_1$ (pump)")
    axes[1].set_yscale("log")

    axes[2].plot(w, result.cross_numeric, "b-", lw=1.0)
    if have_cf:
        axes[2].plot(w, result.cross_closed, "r--", lw=0.8)
    axes[2].set_ylabel(r"$\Delta C$")
    axes[2].set_xlabel(r"$\omega / \Gamma$")

    axes[0].set_title(title)
    for ax in axes:
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def extrema_figure(path: Path, result: SpectrumResult,
                   reports: list[ExtremaReport], title: str) -> Path:
    fig, axes = plt.subplots(2, 1, figsize=(7.0, 6.5), sharex=True)
    w = result.omegas
    series = {2: (axes[0], result.probe_numeric, r"$\Delta Y_2$"),
              1: (axes[1], result.pump_numeric, r"$\Delta Y_1$")}
    for mode, (ax, y, label) in series.items():
        ax.plot(w, y, "b-", lw=1.0)
        ax.set_ylabel(label)
        ax.set_yscale("log")
        ax.grid(True, alpha=0.3)
    for report in reports:
        ax = series[report.mode][0]
        for e in report.extrema:
            marker = "^" if e.sense == "max" else "v"
            ax.plot([e.omega], [e.value], marker, color="r", ms=6)
    axes[0].set_title(title)
    axes[1].set_xlabel(r"$\omega / \Gamma$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def dgcz_figure(path: Path, report: DgczReport, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(["grid minimum"], [report.minimum], color="steelblue", width=0.4)
    ax.axhline(report.bound, color="r", ls="--",
               label=f"separability bound = {report.bound:g}")
    ax.set_ylabel("sum-variance functional")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def eigenvalue_figure(path: Path, eigenvalues: np.ndarray,
                      title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(eigenvalues.real, eigenvalues.imag, "o", ms=5)
    ax.axvline(0.0, color="r", ls="--", lw=0.8)
    ax.set_xlabel("Re eigenvalue")
    ax.set_ylabel("Im eigenvalue")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
