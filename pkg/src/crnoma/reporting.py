"""Output formatting: CSV files, run manifests, tables and plot bundles.

CSV columns are a stable contract:

* simulation: ``scheme,power_dbm,rho,p_outage,ci95,mean_gamma_s_db,mean_b,trials``
* analytic:   ``power_dbm,rho,p_outage_asymptotic,p_outage_highsnr,regime_flag,diversity``

Floats are written with ``repr`` (shortest round-trip form) so reruns with
the same plan produce byte-identical files.  A linear mean of zero renders
as ``-inf`` in the dB column.  Every data file is accompanied by a JSON
manifest recording the resolved configuration, seed and conventions; only
the manifest carries a timestamp, so data files stay reproducible.

Row inputs are duck-typed on the service response models so the command-line
client can write files straight from either transport.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

__all__ = [
    "SIMULATE_HEADER",
    "ANALYTIC_HEADER",
    "GAMMA_S_CONVENTION",
    "mean_gamma_s_db",
    "build_manifest",
    "write_manifest",
    "manifest_path_for",
    "simulate_csv",
    "analytic_csv",
    "table1_csv",
    "format_table1",
    "PlotInputError",
    "plot_bundle",
]

SIMULATE_HEADER = [
    "scheme", "power_dbm", "rho", "p_outage", "ci95", "mean_gamma_s_db", "mean_b", "trials",
]
ANALYTIC_HEADER = [
    "power_dbm", "rho", "p_outage_asymptotic", "p_outage_highsnr", "regime_flag", "diversity",
]

# Declared averaging convention for the received-SNR column: the linear-scale
# mean over all trials (zeros included for infeasible ones), converted to dB
# once at this layer.
GAMMA_S_CONVENTION = "linear_mean_all_trials_incl_zeros_reported_in_db"

SCHEME_LABELS = {
    "random": "Random AS",
    "maxmin": "Max-min AS",
    "es": "ES AS",
    "sjas": "SJ-AS",
}


def mean_gamma_s_db(mean_linear: float) -> float | None:
    """dB value of a linear mean; ``None`` encodes the -infinity of a zero mean."""
    return 10.0 * math.log10(mean_linear) if mean_linear > 0 else None


def _fmt(value: float | int | bool | None) -> str:
    if value is None:
        return "-inf"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def build_manifest(
    command: str,
    config_echo: dict[str, object],
    master_seed: int | None = None,
    **extra: object,
) -> dict[str, object]:
    manifest: dict[str, object] = {
        "tool": "crnoma",
        "tool_version": __version__,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "command": command,
        "config": dict(config_echo),
        "master_seed": master_seed,
        "conventions": {"mean_gamma_s": GAMMA_S_CONVENTION},
    }
    manifest.update(extra)
    return manifest


def manifest_path_for(out_path: str | Path) -> Path:
    return Path(str(out_path) + ".manifest.json")


def write_manifest(out_path: str | Path, manifest: dict[str, object]) -> Path:
    path = manifest_path_for(out_path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def simulate_csv(rows: Iterable[object]) -> str:
    """Render estimate rows (attributes per ``SIMULATE_HEADER``) as CSV text."""
    return _csv_text(
        SIMULATE_HEADER,
        [
            [
                r.scheme,
                _fmt(r.power_dbm),
                _fmt(r.rho),
                _fmt(r.p_outage),
                _fmt(r.ci95),
                _fmt(r.mean_gamma_s_db),
                _fmt(r.mean_b),
                str(r.trials),
            ]
            for r in rows
        ],
    )


def analytic_csv(rows: Iterable[object]) -> str:
    """Render analytic rows as CSV text (clamped outage value only)."""
    return _csv_text(
        ANALYTIC_HEADER,
        [
            [
                _fmt(r.power_dbm),
                _fmt(r.rho),
                _fmt(r.p_outage_asymptotic),
                _fmt(r.p_outage_highsnr),
                _fmt(r.regime_flag),
                str(r.diversity),
            ]
            for r in rows
        ],
    )


def table1_csv(power_grid_dbm: Sequence[float], rows: Iterable[object]) -> str:
    header = ["scheme"] + [f"mean_b_{_fmt(p)}_dbm" for p in power_grid_dbm]
    return _csv_text(
        header, [[r.scheme] + [_fmt(v) for v in r.mean_b] for r in rows]
    )


def format_table1(power_grid_dbm: Sequence[float], rows: Iterable[object]) -> str:
    """Human-readable mean power-coefficient table, one scheme per row."""
    label_width = max(len(label) for label in SCHEME_LABELS.values()) + 2
    cols = "".join(f"{_fmt(p) + ' dBm':>10}" for p in power_grid_dbm)
    lines = [
        "Average power allocation coefficient b",
        f"{'Transmit power':<{label_width}}" + cols,
    ]
    for r in rows:
        body = "".join(f"{v:>10.4f}" for v in r.mean_b)
        lines.append(f"{SCHEME_LABELS.get(r.scheme, r.scheme):<{label_width}}" + body)
    return "\n".join(lines) + "\n"


# --- plot bundle (gnuplot script + whitespace-delimited data) --------------

class PlotInputError(ValueError):
    """Input CSVs missing, empty, or without the expected columns."""


@dataclass
class _Series:
    label: str
    rows: list[tuple[float, float]]


_SERIES_ORDER = ("random", "maxmin", "es", "sjas")


def _read_csv(path: Path) -> tuple[list[str], list[dict[str, str]]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise PlotInputError(f"{path}: empty input")
            return list(reader.fieldnames), list(reader)
    except OSError as exc:
        raise PlotInputError(f"{path}: {exc.strerror or exc}") from exc


def _classify(
    paths: Sequence[str | Path],
) -> tuple[list[dict[str, str]], list[dict[str, str]]]:
    if not paths:
        raise PlotInputError("no input CSV files given")
    sim_rows: list[dict[str, str]] = []
    analytic_rows: list[dict[str, str]] = []
    for raw in paths:
        path = Path(raw)
        header, rows = _read_csv(path)
        if header == SIMULATE_HEADER:
            sim_rows.extend(rows)
        elif header == ANALYTIC_HEADER:
            analytic_rows.extend(rows)
        else:
            raise PlotInputError(
                f"{path}: unrecognized columns {header}; expected "
                f"{SIMULATE_HEADER} or {ANALYTIC_HEADER}"
            )
        if not rows:
            raise PlotInputError(f"{path}: no data rows")
    return sim_rows, analytic_rows


def _series_blocks(series: Sequence[_Series]) -> str:
    blocks = []
    for s in series:
        lines = [f"# series: {s.label}"]
        lines += [f"{_fmt(x)} {_fmt(y)}" for x, y in sorted(s.rows)]
        blocks.append("\n".join(lines))
    # double blank line separates gnuplot index blocks
    return "\n\n\n".join(blocks) + "\n"


def _sim_series(rows: list[dict[str, str]], column: str) -> list[_Series]:
    grouped: dict[str, _Series] = {}
    for row in rows:
        scheme = row["scheme"]
        grouped.setdefault(scheme, _Series(label=scheme, rows=[]))
        grouped[scheme].rows.append((float(row["power_dbm"]), float(row[column])))
    ordered = [grouped[s] for s in _SERIES_ORDER if s in grouped]
    ordered += [s for key, s in grouped.items() if key not in _SERIES_ORDER]
    return ordered


def plot_bundle(input_paths: Sequence[str | Path], out_prefix: str | Path) -> list[Path]:
    """Emit gnuplot data and script reproducing the two comparison figures.

    Figure 1: outage probability (log scale) vs transmit power; one series
    per scheme plus the closed-form curve when an analytic CSV is supplied.
    Figure 2: mean received secondary SNR in dB vs transmit power.
    Returns the list of files written.
    """
    sim_rows, analytic_rows = _classify(input_paths)
    prefix = Path(out_prefix)

    outage_series = _sim_series(sim_rows, "p_outage") if sim_rows else []
    if analytic_rows:
        outage_series.append(
            _Series(
                label="analytic",
                rows=[
                    (float(r["power_dbm"]), float(r["p_outage_asymptotic"]))
                    for r in analytic_rows
                ],
            )
        )
    snr_series = _sim_series(sim_rows, "mean_gamma_s_db") if sim_rows else []

    written: list[Path] = []

    def emit(path: Path, text: str) -> None:
        path.write_text(text)
        written.append(path)

    outage_dat = Path(f"{prefix}_outage.dat")
    emit(outage_dat, _series_blocks(outage_series))
    script = [
        f"# gnuplot script; run: gnuplot {prefix}.gp",
        "set terminal svg size 640,480",
        "set key bottom left",
        "set xlabel 'Transmit power (dBm)'",
        "",
        f"set output '{prefix}_outage.svg'",
        "set ylabel 'System outage probability'",
        "set logscale y",
        "plot " + ", \\\n     ".join(
            f"'{outage_dat}' index {i} using 1:2 with linespoints title '{s.label}'"
            for i, s in enumerate(outage_series)
        ),
    ]
    if snr_series:
        snr_dat = Path(f"{prefix}_rxsnr.dat")
        emit(snr_dat, _series_blocks(snr_series))
        script += [
            "",
            f"set output '{prefix}_rxsnr.svg'",
            "set ylabel 'Mean received SU SNR (dB)'",
            "unset logscale y",
            "plot " + ", \\\n     ".join(
                f"'{snr_dat}' index {i} using 1:2 with linespoints title '{s.label}'"
                for i, s in enumerate(snr_series)
            ),
        ]
    emit(Path(f"{prefix}.gp"), "\n".join(script) + "\n")
    return written
