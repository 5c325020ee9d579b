from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from app.domain.errors import BlockNotPSD, DomainError, NegativeDiagonal, NumericalFailure, StateValidationError, TraceError

# Slack accepted at the physical boundary (unit trace, nonnegative diagonal, PSD blocks).
VALIDATION_SLACK = 1e-12


@dataclass(frozen=True)
class XState:
    """
    Two-qubit density matrix with X structure in the basis {|00>, |01>, |10>, |11>},
    where |0> is spin up and |1> is spin down. Off-diagonal coherences are real, so
    rho41 == rho14 and rho32 == rho23.

    Instances are only produced by `validate`, which enforces unit trace, a nonnegative
    diagonal and positive semidefinite 2x2 blocks.

    Attributes:
        rho11, rho22, rho33, rho44 (float): Populations.
        rho14 (float)                   : Coherence between |00> and |11>.
        rho23 (float)                   : Coherence between |01> and |10>.
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: float
    rho23: float

    @property
    def rho41(self) -> float:
        return self.rho14

    @property
    def rho32(self) -> float:
        return self.rho23

    @property
    def diagonal(self) -> Tuple[float, float, float, float]:
        return (self.rho11, self.rho22, self.rho33, self.rho44)

    def as_matrix(self) -> np.ndarray:
        """Dense 4x4 real symmetric embedding."""
        return np.array(
            [
                [self.rho11, 0.0, 0.0, self.rho14],
                [0.0, self.rho22, self.rho23, 0.0],
                [0.0, self.rho23, self.rho33, 0.0],
                [self.rho14, 0.0, 0.0, self.rho44],
            ],
            dtype=float,
        )


@dataclass(frozen=True)
class Spectrum4:
    """Eigenvalues of an X-state in nonincreasing order."""

    eta1: float
    eta2: float
    eta3: float
    eta4: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.eta1, self.eta2, self.eta3, self.eta4)

    @property
    def largest(self) -> float:
        return self.eta1


def validate(rho11: float, rho22: float, rho33: float, rho44: float, rho14: float, rho23: float) -> XState:
    """
    Build an XState from six raw element values.

    Values within 1e-12 of a boundary are accepted and clamped: slightly negative
    populations become 0, a trace within 1e-12 of 1 is renormalised, and coherences
    exceeding their PSD limit by at most 1e-12 are pulled back onto it.

    Raises:
        StateValidationError: an element is not finite.
        NegativeDiagonal    : a population is below -1e-12.
        TraceError          : the trace deviates from 1 by more than 1e-12.
        BlockNotPSD         : |rho14| > sqrt(rho11 rho44) or |rho23| > sqrt(rho22 rho33) beyond slack.
    """
    raw = (rho11, rho22, rho33, rho44, rho14, rho23)
    if not all(math.isfinite(float(x)) for x in raw):
        raise StateValidationError(f"X-state elements must be finite, got {raw}")

    diagonal = []
    for index, value in enumerate((rho11, rho22, rho33, rho44), start=1):
        value = float(value)
        if value < -VALIDATION_SLACK:
            raise NegativeDiagonal(f"rho{index}{index}={value!r} is negative")
        diagonal.append(max(value, 0.0))

    trace = math.fsum(diagonal)
    if abs(trace - 1.0) > VALIDATION_SLACK:
        raise TraceError(f"Trace must be 1, got {trace!r}")

    d11, d22, d33, d44 = (d / trace for d in diagonal)
    c14 = _clamp_coherence(float(rho14) / trace, d11, d44, "rho14")
    c23 = _clamp_coherence(float(rho23) / trace, d22, d33, "rho23")

    return XState(rho11=d11, rho22=d22, rho33=d33, rho44=d44, rho14=c14, rho23=c23)


def _clamp_coherence(value: float, a: float, b: float, name: str) -> float:
    limit = math.sqrt(a * b)
    magnitude = abs(value)
    if magnitude <= limit:
        return value
    if magnitude - limit > VALIDATION_SLACK:
        raise BlockNotPSD(f"|{name}|={magnitude!r} exceeds sqrt of the block populations ({limit!r})")
    return math.copysign(limit, value)


def binary_entropy(x: float) -> float:
    """
    H(x) = -x log2 x - (1-x) log2 (1-x) in bits, with 0 log 0 = 0.

    The larger of x and 1-x is used as the pivot so that H(x) == H(1-x) bit for bit.
    """
    if not math.isfinite(x) or x < -VALIDATION_SLACK or x > 1.0 + VALIDATION_SLACK:
        raise DomainError(f"Binary entropy needs a probability in [0, 1], got {x!r}")

    p = x if x >= 0.5 else 1.0 - x
    p = min(p, 1.0)
    q = 1.0 - p
    if q <= 0.0:
        return 0.0
    return -p * math.log2(p) - q * math.log2(q)


def shannon_entropy(probabilities: Iterable[float]) -> float:
    """-sum p log2 p over the strictly positive entries."""
    return -math.fsum(p * math.log2(p) for p in probabilities if p > 0.0)


def eigenvalues(state: XState) -> Spectrum4:
    """
    Closed-form spectrum from the two 2x2 blocks {|00>,|11>} and {|01>,|10>}:
    m +- sqrt(((a-b)/2)^2 + c^2) with m = (a+b)/2.
    """
    values = [
        *_block_eigenvalues(state.rho11, state.rho44, state.rho14),
        *_block_eigenvalues(state.rho22, state.rho33, state.rho23),
    ]

    clamped = []
    for eta in values:
        if eta < -VALIDATION_SLACK or eta > 1.0 + VALIDATION_SLACK:
            raise NumericalFailure(f"Eigenvalue {eta!r} outside [0, 1] for {state}")
        clamped.append(min(max(eta, 0.0), 1.0))

    clamped.sort(reverse=True)
    return Spectrum4(*clamped)


def _block_eigenvalues(a: float, b: float, c: float) -> Tuple[float, float]:
    mean = 0.5 * (a + b)
    radius = math.hypot(0.5 * (a - b), c)
    return mean + radius, mean - radius


def von_neumann_entropy(state: XState) -> float:
    """S(rho) = -sum eta log2 eta in bits."""
    return shannon_entropy(eigenvalues(state).as_tuple())


def marginal_entropies(state: XState) -> Tuple[float, float]:
    """(S_A, S_B) = (H(rho11 + rho22), H(rho11 + rho33)); both marginals are diagonal."""
    return binary_entropy(state.rho11 + state.rho22), binary_entropy(state.rho11 + state.rho33)


def diagonal_entropy(state: XState) -> float:
    """Shannon entropy of the populations, i.e. S of the fully dephased state."""
    return shannon_entropy(state.diagonal)
