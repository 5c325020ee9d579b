"""
Memory-assisted entropic uncertainty for the observable pair Q = sigma_x, R = sigma_z
measured on subsystem A, with B kept as quantum memory.

The left-hand side S(Q|B) + S(R|B) is evaluated from explicit post-measurement states.
The lower bounds are log2(1/c) + S(A|B) and its tightened form that adds
max{0, I(A;B) - I(Q;B) - I(R;B)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from app.domain.correlations import mutual_information
from app.domain.errors import BasisNotOrthonormal
from app.domain.oracle import Dense4, entropy_bits, jacobi_eigenvalues, partial_trace_a, qubit_eigenvalues
from app.domain.xstate import XState, diagonal_entropy, marginal_entropies, shannon_entropy, von_neumann_entropy

ORTHONORMAL_SLACK = 1e-12

_ROOT_HALF = math.sqrt(0.5)
SIGMA_Z_BASIS: Tuple[np.ndarray, np.ndarray] = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
SIGMA_X_BASIS: Tuple[np.ndarray, np.ndarray] = (np.array([_ROOT_HALF, _ROOT_HALF]), np.array([_ROOT_HALF, -_ROOT_HALF]))


class Observable(str, Enum):
    SIGMA_X = "sigma_x"
    SIGMA_Z = "sigma_z"

    @property
    def basis(self) -> Tuple[np.ndarray, np.ndarray]:
        return SIGMA_X_BASIS if self is Observable.SIGMA_X else SIGMA_Z_BASIS


@dataclass(frozen=True)
class MeasuredState:
    """
    Joint state after a projective measurement on A.

    Attributes:
        joint (np.ndarray)                   : Dephased 4x4 state sum_x (P_x (x) I) rho (P_x (x) I).
        probabilities (Tuple[float, float])  : Outcome probabilities p_x.
        memory_states (Tuple[np.ndarray, ...]): Normalised conditional states of B (2x2); zero matrix when p_x == 0.
    """

    joint: np.ndarray = field(compare=False)
    probabilities: Tuple[float, float]
    memory_states: Tuple[np.ndarray, np.ndarray] = field(compare=False)


@dataclass(frozen=True)
class UncertaintyReport:
    """
    Attributes:
        lhs (float)                  : S(Q|B) + S(R|B).
        berta_bound (float)          : log2(1/c) + S(A|B).
        adabi_bound (float)          : berta_bound + max{0, delta}.
        delta (float)                : I(A;B) - I(Q;B) - I(R;B), signed.
        holevo_x (float)             : I(X;B).
        holevo_z (float)             : I(Z;B).
        conditional_entropy (float)  : S(A|B).
        complementarity_term (float) : log2(1/c).
    """

    lhs: float
    berta_bound: float
    adabi_bound: float
    delta: float
    holevo_x: float
    holevo_z: float
    conditional_entropy: float
    complementarity_term: float


def _check_orthonormal(basis: Sequence[np.ndarray], name: str) -> None:
    if len(basis) != 2:
        raise BasisNotOrthonormal(f"{name} basis needs two vectors, got {len(basis)}")
    for i, left in enumerate(basis):
        for j, right in enumerate(basis):
            overlap = np.vdot(np.asarray(left), np.asarray(right))
            expected = 1.0 if i == j else 0.0
            if abs(overlap - expected) > ORTHONORMAL_SLACK:
                raise BasisNotOrthonormal(f"{name} basis vectors {i},{j} have overlap {overlap!r}")


def complementarity(q_basis: Sequence[np.ndarray], r_basis: Sequence[np.ndarray]) -> float:
    """
    c = max_{i,j} |<q_i|r_j>|^2.

    Raises:
        BasisNotOrthonormal: either basis fails orthonormality by more than 1e-12.
    """
    _check_orthonormal(q_basis, "Q")
    _check_orthonormal(r_basis, "R")
    return max(abs(np.vdot(np.asarray(q), np.asarray(r))) ** 2 for q in q_basis for r in r_basis)


COMPLEMENTARITY_TERM = -math.log2(complementarity(SIGMA_X_BASIS, SIGMA_Z_BASIS))


def post_measurement(state: XState, observable: Observable) -> MeasuredState:
    rho = state.as_matrix()
    identity = np.eye(2)
    joint = np.zeros((4, 4))
    probabilities = []
    memory_states = []
    for vector in observable.basis:
        projector = np.kron(np.outer(vector, vector), identity)
        branch = projector @ rho @ projector
        joint += branch
        p = float(np.trace(branch))
        probabilities.append(p)
        memory_states.append(partial_trace_a(branch) / p if p > 0.0 else np.zeros((2, 2)))

    joint = 0.5 * (joint + joint.T)
    return MeasuredState(joint=joint, probabilities=tuple(probabilities), memory_states=tuple(memory_states))


def _qubit_entropy(m: np.ndarray) -> float:
    return float(entropy_bits(np.clip(qubit_eigenvalues(m), 0.0, 1.0)))


def _dense_entropy(m: np.ndarray) -> float:
    return shannon_entropy(max(x, 0.0) for x in jacobi_eigenvalues(Dense4.from_array(m)))


def holevo_quantity(measured: MeasuredState) -> float:
    """Generic I(X;B) = S(rho_B) - sum_x p_x S(rho_x^B) from a post-measurement state."""
    s_b = _qubit_entropy(partial_trace_a(measured.joint))
    conditional = math.fsum(p * _qubit_entropy(m) for p, m in zip(measured.probabilities, measured.memory_states) if p > 0.0)
    return s_b - conditional


def conditional_entropy(state: XState) -> float:
    """S(A|B) = S(rho_AB) - S(rho_B)."""
    _, s_b = marginal_entropies(state)
    return von_neumann_entropy(state) - s_b


def holevo_z(state: XState) -> float:
    """I(Z;B) = H(rho11 + rho22) + H(rho11 + rho33) + sum_i rho_ii log2 rho_ii."""
    s_a, s_b = marginal_entropies(state)
    return max(s_a + s_b - diagonal_entropy(state), 0.0)


def holevo_x(state: XState) -> float:
    """
    I(X;B) = 1 + S_B - S(xi), where xi = ((1-k)/4, (1-k)/4, (1+k)/4, (1+k)/4) is the spectrum of
    the sigma_x-dephased state and k = sqrt(4(rho14 + rho23)^2 + (1 - 2(rho22 + rho44))^2).
    """
    _, s_b = marginal_entropies(state)
    k = math.sqrt(4.0 * (state.rho14 + state.rho23) ** 2 + (1.0 - 2.0 * (state.rho22 + state.rho44)) ** 2)
    k = min(k, 1.0)
    low, high = 0.25 * (1.0 - k), 0.25 * (1.0 + k)
    return max(1.0 + s_b - shannon_entropy((low, low, high, high)), 0.0)


def berta_bound(state: XState) -> float:
    return COMPLEMENTARITY_TERM + conditional_entropy(state)


def uncertainty_delta(state: XState) -> float:
    """delta = I(A;B) - (I(X;B) + I(Z;B)); may be negative."""
    return mutual_information(state) - (holevo_x(state) + holevo_z(state))


def adabi_bound(state: XState) -> float:
    return berta_bound(state) + max(0.0, uncertainty_delta(state))


def uncertainty_lhs(state: XState) -> float:
    """S(Q|B) + S(R|B) = S(rho^{XB}) + S(rho^{ZB}) - 2 S(rho_B), from dense post-measurement states."""
    total = 0.0
    for observable in (Observable.SIGMA_X, Observable.SIGMA_Z):
        joint = post_measurement(state, observable).joint
        total += _dense_entropy(joint) - _qubit_entropy(partial_trace_a(joint))
    return total


def uncertainty_report(state: XState) -> UncertaintyReport:
    h_x = holevo_x(state)
    h_z = holevo_z(state)
    delta = mutual_information(state) - (h_x + h_z)
    s_cond = conditional_entropy(state)
    berta = COMPLEMENTARITY_TERM + s_cond
    return UncertaintyReport(
        lhs=uncertainty_lhs(state),
        berta_bound=berta,
        adabi_bound=berta + max(0.0, delta),
        delta=delta,
        holevo_x=h_x,
        holevo_z=h_z,
        conditional_entropy=s_cond,
        complementarity_term=COMPLEMENTARITY_TERM,
    )
