from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.domain.errors import DomainError, NumericalFailure
from app.domain.oracle import (
    Dense4,
    entropy_bits,
    jacobi_eigenvalues,
    measured_conditional_entropy,
    partial_trace_a,
    qubit_eigenvalues,
    wootters_lambdas,
)
from app.domain.xstate import (
    XState,
    binary_entropy,
    diagonal_entropy,
    marginal_entropies,
    shannon_entropy,
    von_neumann_entropy,
)

_l = logging.getLogger(__name__)
correlations_logger = logging.LoggerAdapter(_l, extra={"tag": "Correlations"})

# Entropy differences in [-ROUNDING_CLAMP, 0) are rounding noise and reported as 0.
ROUNDING_CLAMP = 1e-9
MIN_GRID_RESOLUTION = 90
REFINE_ITERATIONS = 20


class DiscordBranch(str, Enum):
    """Which closed-form candidate attained the discord minimum."""

    Q1 = "Q1"  # transverse measurement on B
    Q2 = "Q2"  # sigma_z measurement on B


@dataclass(frozen=True)
class DiscordBranches:
    """
    Both candidate discord values and the winner.

    Attributes:
        q1 (float)             : S_B - S(rho) + H((1 + tau)/2).
        q2 (float)             : S_B - S(rho) + D2, with D2 the z-measured conditional entropy.
        winner (DiscordBranch) : Q1 on ties.
    """

    q1: float
    q2: float
    winner: DiscordBranch

    @property
    def minimum(self) -> float:
        return self.q1 if self.winner is DiscordBranch.Q1 else self.q2


@dataclass(frozen=True)
class CorrelationReport:
    """
    Correlation summary of a single X-state.

    Attributes:
        concurrence (float)          : Entanglement, in [0, 1].
        discord (float)              : Quantum discord in bits, >= 0.
        mutual_information (float)   : I(A;B) in bits, in [0, 2].
        discord_branch (DiscordBranch): Branch that attained the discord minimum.
    """

    concurrence: float
    discord: float
    mutual_information: float
    discord_branch: DiscordBranch


def clamp_rounding(value: float, what: str) -> float:
    if value >= 0.0:
        return value
    if value >= -ROUNDING_CLAMP:
        return 0.0
    raise NumericalFailure(f"{what} is negative beyond rounding: {value!r}")


def concurrence(state: XState) -> float:
    """C = 2 max{0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33)}."""
    c1 = abs(state.rho23) - math.sqrt(state.rho11 * state.rho44)
    c2 = abs(state.rho14) - math.sqrt(state.rho22 * state.rho33)
    return min(2.0 * max(0.0, c1, c2), 1.0)


def wootters_concurrence_oracle(matrix: np.ndarray | Dense4) -> float:
    """
    General two-qubit concurrence max{0, l1 - l2 - l3 - l4}, where l_i are the square
    roots of the eigenvalues of rho * rho_tilde in decreasing order.

    Raises:
        NoConvergence: a Jacobi iteration failed or rho is not positive semidefinite.
    """
    dense = matrix if isinstance(matrix, Dense4) else Dense4.from_array(matrix)
    lambdas = wootters_lambdas(dense)
    return max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])


def _tau(state: XState) -> float:
    population_gap = 1.0 - 2.0 * (state.rho33 + state.rho44)
    coherence = abs(state.rho14) + abs(state.rho23)
    return min(math.sqrt(population_gap**2 + 4.0 * coherence**2), 1.0)


def discord_branches(state: XState) -> DiscordBranches:
    """
    Q_j = H(rho11 + rho33) - S(rho) + D_j with
    D1 = H((1 + tau)/2), tau = sqrt((1 - 2(rho33 + rho44))^2 + 4(|rho14| + |rho23|)^2), and
    D2 = -sum_i rho_ii log2 rho_ii - H(rho11 + rho33).

    D2 is the conditional entropy left after measuring sigma_z on B, so Q2 reduces to
    the diagonal entropy minus S(rho) and vanishes on states without coherences.
    """
    s_b = binary_entropy(state.rho11 + state.rho33)
    s_ab = von_neumann_entropy(state)

    d1 = binary_entropy(0.5 * (1.0 + _tau(state)))
    d2 = diagonal_entropy(state) - s_b

    q1 = s_b - s_ab + d1
    q2 = s_b - s_ab + d2
    winner = DiscordBranch.Q1 if q1 <= q2 else DiscordBranch.Q2
    return DiscordBranches(q1=q1, q2=q2, winner=winner)


def quantum_discord(state: XState) -> float:
    """QD = min(Q1, Q2) in bits."""
    return clamp_rounding(discord_branches(state).minimum, "Discord")


def mutual_information(state: XState) -> float:
    """I(A;B) = S_A + S_B - S(rho)."""
    s_a, s_b = marginal_entropies(state)
    return clamp_rounding(s_a + s_b - von_neumann_entropy(state), "Mutual information")


def correlation_report(state: XState) -> CorrelationReport:
    branches = discord_branches(state)
    return CorrelationReport(
        concurrence=concurrence(state),
        discord=clamp_rounding(branches.minimum, "Discord"),
        mutual_information=mutual_information(state),
        discord_branch=branches.winner,
    )


def discord_numeric_oracle(state: XState, grid_resolution: int = MIN_GRID_RESOLUTION) -> float:
    """
    Discord by explicit minimisation over projective measurements on B.

    QD = S_B - S(rho) + min_{theta, phi} sum_k p_k S(rho_A|k). The minimum is searched on
    the grid theta_i = i pi/N (i = 0..N), phi_j = j pi/N (j = 0..N-1), then refined by
    coordinate descent (20 iterations, step halved whenever no neighbour improves).
    For even N the z, x and y measurements lie on the grid, so the result never exceeds
    the better of the two closed-form branches. Grid ties resolve to the lowest
    (theta, phi) lexicographically.

    Raises:
        DomainError: grid_resolution < 90.
    """
    if grid_resolution < MIN_GRID_RESOLUTION:
        raise DomainError(f"grid_resolution must be >= {MIN_GRID_RESOLUTION}, got {grid_resolution}")

    rho = state.as_matrix()
    s_b = float(entropy_bits(np.clip(qubit_eigenvalues(partial_trace_a(rho)), 0.0, 1.0)))
    spectrum = [max(x, 0.0) for x in jacobi_eigenvalues(Dense4.from_array(rho))]
    s_ab = shannon_entropy(spectrum)

    step = math.pi / grid_resolution
    thetas = np.arange(grid_resolution + 1) * step
    phis = np.arange(grid_resolution) * step
    landscape = measured_conditional_entropy(rho, thetas[:, None], phis[None, :])

    i, j = np.unravel_index(int(np.argmin(landscape)), landscape.shape)
    theta, phi, best = float(thetas[i]), float(phis[j]), float(landscape[i, j])

    step_theta = step_phi = step
    for _ in range(REFINE_ITERATIONS):
        candidate_theta = np.array([theta - step_theta, theta + step_theta, theta, theta])
        candidate_phi = np.array([phi, phi, phi - step_phi, phi + step_phi])
        trial = measured_conditional_entropy(rho, candidate_theta, candidate_phi)
        k = int(np.argmin(trial))
        if trial[k] < best:
            theta, phi, best = float(candidate_theta[k]), float(candidate_phi[k]), float(trial[k])
        else:
            step_theta *= 0.5
            step_phi *= 0.5

    correlations_logger.debug("Discord oracle minimum at theta=%.6f phi=%.6f", theta, phi)
    return clamp_rounding(s_b - s_ab + best, "Numeric discord")
