from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from app.domain.errors import EmptySweep
from app.services.sweep import SweepRow

_l = logging.getLogger(__name__)
export_logger = logging.LoggerAdapter(_l, extra={"tag": "Export"})

CSV_COLUMNS = (
    "param",
    "concurrence",
    "discord",
    "mutual_information",
    "lhs",
    "berta_bound",
    "adabi_bound",
    "delta",
)

# Columns drawn by the plot script, 1-based as gnuplot counts them.
_PLOTTED = {"concurrence": 2, "discord": 3, "lhs": 5, "berta_bound": 6, "adabi_bound": 7}


def rows_to_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    if not rows:
        raise EmptySweep("Sweep produced no rows")
    return pd.DataFrame([row.as_tuple() for row in rows], columns=list(CSV_COLUMNS))


def emit_csv(rows: Sequence[SweepRow]) -> str:
    """Header plus one line per row, 12 significant digits, LF endings."""
    return rows_to_frame(rows).to_csv(index=False, float_format="%.12g", lineterminator="\n")


def emit_plot_script(rows: Sequence[SweepRow], csv_path: str, xlabel: str = "param", title: Optional[str] = None) -> str:
    """
    Self-contained gnuplot script drawing the sweep from `csv_path` (kept as given, so pass a
    path relative to where the script will be run). Renders to a PNG named after the CSV.
    """
    if not rows:
        raise EmptySweep("Sweep produced no rows")

    png = Path(csv_path).with_suffix(".png").as_posix()
    lines = [
        "# gnuplot script; run from the directory that holds the CSV",
        'set datafile separator ","',
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,600",
        f'set output "{png}"',
        f'set xlabel "{xlabel}"',
        'set ylabel "bits"',
        f"set xrange [{rows[0].param:.12g}:{rows[-1].param:.12g}]",
        "set grid",
    ]
    if title:
        lines.append(f'set title "{title}"')

    plots = []
    for index, column in enumerate(_PLOTTED.values()):
        source = f'"{csv_path}"' if index == 0 else '""'
        plots.append(f"{source} using 1:{column} with lines lw 2")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def write_table(rows: Sequence[SweepRow], path: str) -> None:
    """CSV by default; `.parquet` paths are written through pyarrow."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    if target.suffix.lower() == ".parquet":
        rows_to_frame(rows).to_parquet(target, engine="pyarrow", index=False)
    else:
        with open(target, "w", encoding="utf-8", newline="") as handle:
            handle.write(emit_csv(rows))
    export_logger.info("Wrote %d rows to %s", len(rows), target)


def write_plot_script(rows: Sequence[SweepRow], csv_path: str, script_path: str, xlabel: str = "param", title: Optional[str] = None) -> None:
    script = Path(script_path)
    relative = os.path.relpath(Path(csv_path).resolve(), script.resolve().parent)
    with open(script, "w", encoding="utf-8", newline="") as handle:
        handle.write(emit_plot_script(rows, Path(relative).as_posix(), xlabel=xlabel, title=title))
    export_logger.info("Wrote plot script %s", script)
