from __future__ import annotations

import logging
import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import Callable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, ValidationError, model_validator

from app.domain.correlations import CorrelationReport, correlation_report
from app.domain.dot_model import DotParams, GroundRegime, ground_regime, thermal_state
from app.domain.errors import NumericalFailure, QDotError, SweepPointError
from app.domain.uncertainty import UncertaintyReport, uncertainty_report

_l = logging.getLogger(__name__)
sweep_logger = logging.LoggerAdapter(_l, extra={"tag": "Sweep"})


class SweptParameter(str, Enum):
    TEMPERATURE = "temperature"
    K0 = "k0"
    B0 = "b0"


class SweepSpec(BaseModel):
    """
    One-dimensional sweep over a single DotParams field.

    Attributes:
        swept_parameter (SweptParameter): Field that varies along the grid.
        start, stop (float)             : Inclusive range, start <= stop.
        steps (int)                     : Number of grid points, >= 2.
        fixed (DotParams)               : Values for the other fields; the swept field is overridden.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    swept_parameter: SweptParameter
    start: FiniteFloat
    stop: FiniteFloat
    steps: int = Field(101, ge=2)
    fixed: DotParams

    @model_validator(mode="after")
    def _check_range(self) -> SweepSpec:
        if self.start > self.stop:
            raise ValueError(f"start ({self.start}) must not exceed stop ({self.stop})")
        if self.swept_parameter is SweptParameter.TEMPERATURE and self.start < 0.0:
            raise ValueError(f"temperature sweep cannot start below 0, got {self.start}")
        return self

    def grid(self) -> List[float]:
        """start + i (stop - start)/(steps - 1) for i = 0..steps-1."""
        return [float(x) for x in np.linspace(self.start, self.stop, self.steps)]

    def params_at(self, value: float) -> DotParams:
        return DotParams(**{**self.fixed.model_dump(), self.swept_parameter.value: value})


@dataclass(frozen=True)
class PointReport:
    params: DotParams
    regime: GroundRegime
    correlations: CorrelationReport
    uncertainty: UncertaintyReport


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a sweep. All entries are finite."""

    param: float
    concurrence: float
    discord: float
    mutual_information: float
    lhs: float
    berta_bound: float
    adabi_bound: float
    delta: float

    @staticmethod
    def from_report(value: float, report: PointReport) -> SweepRow:
        row = SweepRow(
            param=value,
            concurrence=report.correlations.concurrence,
            discord=report.correlations.discord,
            mutual_information=report.correlations.mutual_information,
            lhs=report.uncertainty.lhs,
            berta_bound=report.uncertainty.berta_bound,
            adabi_bound=report.uncertainty.adabi_bound,
            delta=report.uncertainty.delta,
        )
        if not all(math.isfinite(x) for x in row.as_tuple()):
            raise NumericalFailure(f"Non-finite entry in sweep row {row}")
        return row

    def as_tuple(self) -> Tuple[float, ...]:
        return (
            self.param,
            self.concurrence,
            self.discord,
            self.mutual_information,
            self.lhs,
            self.berta_bound,
            self.adabi_bound,
            self.delta,
        )


@dataclass
class SweepService:
    """
    Evaluates the dot model at single points and along one-dimensional grids.

    Attributes:
        workers (int)                        : Worker processes for sweeps; 1 evaluates in-process.
        executor (Callable[..., Executor])   : Pool factory called with max_workers when workers > 1.
    """

    workers: int = 1
    executor: Callable[..., Executor] = ProcessPoolExecutor

    def evaluate_point(self, params: DotParams) -> PointReport:
        state = thermal_state(params)
        return PointReport(
            params=params,
            regime=ground_regime(params),
            correlations=correlation_report(state),
            uncertainty=uncertainty_report(state),
        )

    def run_sweep(self, spec: SweepSpec) -> List[SweepRow]:
        """
        Rows in ascending grid order. With workers > 1 the points are spread over a
        process pool; the output order never depends on scheduling.

        Raises:
            SweepPointError: the first failing grid point, naming its parameter value.
        """
        grid = spec.grid()
        sweep_logger.info(
            "Sweeping %s over [%g, %g] in %d steps (workers=%d)",
            spec.swept_parameter.value,
            spec.start,
            spec.stop,
            spec.steps,
            self.workers,
        )

        if self.workers > 1:
            chunksize = max(1, len(grid) // (4 * self.workers))
            with self.executor(max_workers=self.workers) as pool:
                rows = list(pool.map(partial(_evaluate_row, spec), grid, chunksize=chunksize))
        else:
            rows = [_evaluate_row(spec, value) for value in grid]

        sweep_logger.info("Sweep complete: %d rows", len(rows))
        return rows


def _evaluate_row(spec: SweepSpec, value: float) -> SweepRow:
    # Module level so process pools can pickle it.
    try:
        return SweepRow.from_report(value, SweepService().evaluate_point(spec.params_at(value)))
    except (QDotError, ValidationError, ArithmeticError) as exc:
        raise SweepPointError(spec.swept_parameter.value, value, str(exc)) from exc


def verify_rows(rows: Sequence[SweepRow], slack: float = 1e-9) -> List[SweepRow]:
    """Rows that break berta_bound <= adabi_bound <= lhs by more than `slack`."""
    return [
        row
        for row in rows
        if row.berta_bound > row.adabi_bound + slack or row.adabi_bound > row.lhs + slack
    ]


@dataclass(frozen=True)
class FigurePanel:
    name: str
    xlabel: str
    spec: SweepSpec


def figure_panels(figure_id: int, steps: int = 101, gamma: float = 1.0) -> List[FigurePanel]:
    """
    Sweeps behind each parameter study:
    1: temperature in [0, 5] at k0 in {10, 5, 3};
    2: k0 in [0, 20] at T in {0, 1, 2};
    3: B0 in [0, 5] at T in {0.05, 1, 2} with k0 = 10.
    B0 = 1 wherever it is not swept.
    """
    if figure_id == 1:
        return [
            FigurePanel(
                name=f"fig1_k0_{k0:g}",
                xlabel="T",
                spec=SweepSpec(
                    swept_parameter=SweptParameter.TEMPERATURE,
                    start=0.0,
                    stop=5.0,
                    steps=steps,
                    fixed=DotParams(k0=k0, gamma=gamma, b0=1.0, temperature=0.0),
                ),
            )
            for k0 in (10.0, 5.0, 3.0)
        ]
    if figure_id == 2:
        return [
            FigurePanel(
                name=f"fig2_t_{t:g}",
                xlabel="k0",
                spec=SweepSpec(
                    swept_parameter=SweptParameter.K0,
                    start=0.0,
                    stop=20.0,
                    steps=steps,
                    fixed=DotParams(k0=0.0, gamma=gamma, b0=1.0, temperature=t),
                ),
            )
            for t in (0.0, 1.0, 2.0)
        ]
    if figure_id == 3:
        return [
            FigurePanel(
                name=f"fig3_t_{t:g}",
                xlabel="B0",
                spec=SweepSpec(
                    swept_parameter=SweptParameter.B0,
                    start=0.0,
                    stop=5.0,
                    steps=steps,
                    fixed=DotParams(k0=10.0, gamma=gamma, b0=0.0, temperature=t),
                ),
            )
            for t in (0.05, 1.0, 2.0)
        ]
    raise ValueError(f"Unknown figure id {figure_id}; expected 1, 2 or 3")
