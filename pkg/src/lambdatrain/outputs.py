"""Serialization of trains, time series and summaries."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import IO

from .integrator import extract_p2_max
from .model import TimeSeries, TrainSpec

CSV_HEADER = ("t", "omega_p", "omega_s", "P1", "P2", "P3", "norm2")


def train_to_json(train: TrainSpec) -> str:
    return json.dumps(train.to_json(), indent=2)


def train_from_json(text: str) -> TrainSpec:
    return TrainSpec.from_json(json.loads(text))


def write_series_csv(series: TimeSeries, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for t, op, os_, p1, p2, p3, n2 in series.rows():
        writer.writerow(
            [f"{t:.6f}", f"{op:.8g}", f"{os_:.8g}", f"{p1:.6f}", f"{p2:.6f}", f"{p3:.6f}", f"{n2:.6f}"]
        )


def summarize(series: TimeSeries, train: TrainSpec) -> dict:
    peak = extract_p2_max(series)
    final = series.populations[-1]
    norm2 = float(series.norm2[-1])
    return {
        "n_pairs": len(train.pairs),
        "gamma": train.gamma,
        "final_populations": {"P1": float(final[0]), "P2": float(final[1]), "P3": float(final[2])},
        "norm2": norm2,
        "lost_population": 1.0 - norm2,
        "p2_max": peak.value,
        "p2_max_per_pair": peak.per_pair,
        "p2_max_times": peak.times,
        "boundary_populations": series.boundary_populations().tolist(),
    }


def gnuplot_script(csv_path: str | Path, title: str = "") -> str:
    """Two stacked panels: Rabi frequencies on top, populations below."""
    csv_path = str(csv_path)
    return f"""# generated by lambdatrain
set datafile separator ','
set key autotitle columnhead
set multiplot layout 2,1 title "{title}"
set ylabel "Rabi frequency (1/T)"
unset xlabel
plot '{csv_path}' using 1:2 with lines lw 2 title 'pump', \\
     '{csv_path}' using 1:3 with lines lw 2 title 'Stokes'
set xlabel "time (T)"
set ylabel "population"
set yrange [0:1.05]
plot '{csv_path}' using 1:4 with lines lw 2 title 'P1', \\
     '{csv_path}' using 1:5 with lines lw 2 title 'P2', \\
     '{csv_path}' using 1:6 with lines lw 2 title 'P3'
unset multiplot
"""
