from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from pydantic import ValidationError

from app.config.settings import Settings
from app.domain.correlations import discord_numeric_oracle
from app.domain.dot_model import DotParams, thermal_state
from app.domain.errors import QDotError
from app.services.export import emit_csv, write_plot_script, write_table
from app.services.sweep import SweepRow, SweepService, SweepSpec, SweptParameter, figure_panels, verify_rows

_l = logging.getLogger(__name__)
cli_logger = logging.LoggerAdapter(_l, extra={"tag": "Cli"})

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_XLABELS = {SweptParameter.TEMPERATURE: "T", SweptParameter.K0: "k0", SweptParameter.B0: "B0"}


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t", type=float, default=1.0, help="Temperature (default: 1).")
    parser.add_argument("--k0", type=float, default=10.0, help="Singlet-triplet splitting k0 (default: 10).")
    parser.add_argument("--gamma", type=float, default=None, help="Gyromagnetic ratio (default: from settings, 1).")
    parser.add_argument("--b0", type=float, default=1.0, help="Magnetic field B0 (default: 1).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdot",
        description="Quantum correlations and memory-assisted entropic uncertainty of a two-spin quantum dot.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    point = commands.add_parser("point", help="Evaluate every quantity at one parameter point.")
    _add_model_flags(point)
    point.add_argument("--oracle", action="store_true", help="Also run the numeric discord minimisation.")

    sweep = commands.add_parser("sweep", help="Sweep one parameter and write CSV rows.")
    _add_model_flags(sweep)
    sweep.add_argument("--param", required=True, choices=[p.value for p in SweptParameter])
    sweep.add_argument("--start", type=float, required=True)
    sweep.add_argument("--stop", type=float, required=True)
    sweep.add_argument("--steps", type=int, default=101)
    sweep.add_argument("--out", default=None, help="Output path (.csv or .parquet). Default: stdout.")
    sweep.add_argument("--plot-script", default=None, help="Write a gnuplot script that plots --out.")
    sweep.add_argument("--verify", action="store_true", help="Exit 1 if berta <= adabi <= lhs fails on any row.")
    sweep.add_argument("--workers", type=int, default=None, help="Worker processes (default: from settings).")

    figure = commands.add_parser("figure", help="Regenerate every panel of one parameter study.")
    figure.add_argument("--id", type=int, required=True, choices=[1, 2, 3])
    figure.add_argument("--out-dir", required=True)
    figure.add_argument("--steps", type=int, default=101)
    figure.add_argument("--gamma", type=float, default=None)
    figure.add_argument("--verify", action="store_true")
    figure.add_argument("--workers", type=int, default=None)

    return parser


def _model_params(args: argparse.Namespace, settings: Settings) -> DotParams:
    gamma = settings.gamma if args.gamma is None else args.gamma
    return DotParams(k0=args.k0, gamma=gamma, b0=args.b0, temperature=args.t)


def _report_violations(violations: List[SweepRow], slack: float) -> int:
    if not violations:
        return EXIT_OK
    for row in violations:
        cli_logger.error(
            "Bound ordering violated at param=%.12g: berta=%.12g adabi=%.12g lhs=%.12g (slack %g)",
            row.param,
            row.berta_bound,
            row.adabi_bound,
            row.lhs,
            slack,
        )
    return EXIT_FAILURE


def _run_point(args: argparse.Namespace, settings: Settings, stdout: TextIO) -> int:
    params = _model_params(args, settings)
    report = SweepService().evaluate_point(params)

    lines = [
        ("k0", params.k0),
        ("gamma", params.gamma),
        ("b0", params.b0),
        ("temperature", params.temperature),
        ("regime", report.regime.value),
        ("concurrence", report.correlations.concurrence),
        ("discord", report.correlations.discord),
        ("discord_branch", report.correlations.discord_branch.value),
        ("mutual_information", report.correlations.mutual_information),
        ("conditional_entropy", report.uncertainty.conditional_entropy),
        ("holevo_x", report.uncertainty.holevo_x),
        ("holevo_z", report.uncertainty.holevo_z),
        ("complementarity_term", report.uncertainty.complementarity_term),
        ("delta", report.uncertainty.delta),
        ("berta_bound", report.uncertainty.berta_bound),
        ("adabi_bound", report.uncertainty.adabi_bound),
        ("lhs", report.uncertainty.lhs),
    ]
    if args.oracle:
        oracle = discord_numeric_oracle(thermal_state(params), settings.discord_grid_resolution)
        lines.append(("discord_oracle", oracle))

    for key, value in lines:
        text = f"{value:.12g}" if isinstance(value, float) else str(value)
        stdout.write(f"{key:<22}{text}\n")
    return EXIT_OK


def _run_sweep(args: argparse.Namespace, settings: Settings, parser: argparse.ArgumentParser, stdout: TextIO) -> int:
    if args.plot_script and not args.out:
        parser.error("--plot-script needs --out so the script has a CSV to read")
    if args.plot_script and args.out.lower().endswith(".parquet"):
        parser.error("--plot-script needs a CSV --out, not Parquet")

    swept = SweptParameter(args.param)
    spec = SweepSpec(
        swept_parameter=swept,
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        fixed=_model_params(args, settings),
    )
    service = SweepService(workers=args.workers or settings.sweep_workers)
    rows = service.run_sweep(spec)

    if args.out:
        write_table(rows, args.out)
    else:
        stdout.write(emit_csv(rows))
    if args.plot_script:
        write_plot_script(rows, args.out, args.plot_script, xlabel=_XLABELS[swept])

    if args.verify:
        return _report_violations(verify_rows(rows, settings.verify_slack), settings.verify_slack)
    return EXIT_OK


def _run_figure(args: argparse.Namespace, settings: Settings) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    service = SweepService(workers=args.workers or settings.sweep_workers)
    gamma = settings.gamma if args.gamma is None else args.gamma

    status = EXIT_OK
    for panel in figure_panels(args.id, steps=args.steps, gamma=gamma):
        rows = service.run_sweep(panel.spec)
        csv_path = out_dir / f"{panel.name}.csv"
        write_table(rows, str(csv_path))
        write_plot_script(rows, str(csv_path), str(out_dir / f"{panel.name}.gp"), xlabel=panel.xlabel, title=panel.name)
        if args.verify and _report_violations(verify_rows(rows, settings.verify_slack), settings.verify_slack):
            status = EXIT_FAILURE
    return status


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse `argv` and run one subcommand. Returns the process exit code."""
    settings = settings or Settings.model_validate({})
    stdout = stdout or sys.stdout
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
        if args.command == "point":
            return _run_point(args, settings, stdout)
        if args.command == "sweep":
            return _run_sweep(args, settings, parser, stdout)
        return _run_figure(args, settings)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (None, 0) else EXIT_USAGE
    except ValidationError as exc:
        cli_logger.error("Invalid parameters: %s", exc)
        return EXIT_USAGE
    except QDotError as exc:
        cli_logger.error("Computation failed: %s", exc)
        return EXIT_FAILURE
