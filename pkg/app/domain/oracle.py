"""
Dense brute-force engines used to cross-check the closed forms.

Everything here works on explicit 4x4 (or 2x2) matrices and knows nothing about the
X structure: a cyclic Jacobi eigen-solver for real symmetric matrices, the spectrum of
rho * rho_tilde from a square-root factorisation of rho, Gibbs-state assembly from an
eigensystem, and the measurement algebra of projective measurements on subsystem B.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from app.domain.errors import NoConvergence

_l = logging.getLogger(__name__)
oracle_logger = logging.LoggerAdapter(_l, extra={"tag": "Oracle"})

JACOBI_TOLERANCE = 1e-14
JACOBI_MAX_SWEEPS = 100
PRODUCT_CLAMP = 1e-10
# Eigenvalues of rho at or below this are rounding residue of a zero.
RANK_CUTOFF = 1e-14

# sigma_y (x) sigma_y is real: it maps index i to 3 - i with sign _SPIN_FLIP_SIGN[i].
_SPIN_FLIP_INDEX = np.array([3, 2, 1, 0])
_SPIN_FLIP_SIGN = np.array([-1.0, 1.0, 1.0, -1.0])

# Qubit swap as a permutation of {|00>, |01>, |10>, |11>}.
SWAP_PERMUTATION = np.array([0, 2, 1, 3])


@dataclass(frozen=True)
class Dense4:
    """
    Row-major 4x4 real matrix.

    Attributes:
        entries (Tuple[float, ...]): 16 entries, row-major.
        symmetric (bool)           : True only when a_ij == a_ji exactly.
    """

    entries: Tuple[float, ...]
    symmetric: bool

    @staticmethod
    def from_array(matrix: np.ndarray) -> Dense4:
        array = np.asarray(matrix, dtype=float)
        if array.shape != (4, 4):
            raise ValueError(f"Dense4 needs a 4x4 matrix, got shape {array.shape}")
        return Dense4(entries=tuple(float(x) for x in array.ravel()), symmetric=bool(np.array_equal(array, array.T)))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(4, 4)


def jacobi_eigenvalues(matrix: Dense4) -> Tuple[float, float, float, float]:
    """
    Eigenvalues of a symmetric Dense4 in nonincreasing order.

    Cyclic-by-rows Jacobi: each sweep visits (p, q) for p < q in row order and zeroes
    a_pq with a plane rotation. Stops once the off-diagonal Frobenius norm is below 1e-14.

    Raises:
        ValueError   : the matrix is not flagged symmetric.
        NoConvergence: still not diagonal after 100 sweeps.
    """
    values, _ = jacobi_eigensystem(matrix)
    return values


def jacobi_eigensystem(matrix: Dense4) -> Tuple[Tuple[float, float, float, float], np.ndarray]:
    """
    Eigenvalues in nonincreasing order and the matching orthonormal eigenvectors as columns.

    Raises:
        ValueError   : the matrix is not flagged symmetric.
        NoConvergence: still not diagonal after 100 sweeps.
    """
    if not matrix.symmetric:
        raise ValueError("Jacobi eigen-solver needs a symmetric matrix")
    values, vectors = _jacobi(matrix.to_array())
    order = np.argsort(-values, kind="stable")
    return tuple(float(x) for x in values[order]), vectors[:, order]  # type: ignore[return-value]


def _jacobi(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off < JACOBI_TOLERANCE:
            oracle_logger.debug("Jacobi converged after %d sweeps", sweep)
            return np.diag(a).copy(), v
        if sweep == JACOBI_MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
    raise NoConvergence(f"Jacobi eigen-solver did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply A <- J^T A J and V <- V J with the rotation that annihilates a[p, q]."""
    theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    rotation = np.eye(a.shape[0])
    rotation[p, p] = c
    rotation[q, q] = c
    rotation[p, q] = s
    rotation[q, p] = -s

    a[:] = rotation.T @ a @ rotation
    a[p, q] = 0.0
    a[q, p] = 0.0
    v[:] = v @ rotation


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho_tilde = (sigma_y x sigma_y) rho* (sigma_y x sigma_y) for a real rho, via an index/sign table."""
    rho = np.asarray(rho, dtype=float)
    signs = np.outer(_SPIN_FLIP_SIGN, _SPIN_FLIP_SIGN)
    return signs * rho[np.ix_(_SPIN_FLIP_INDEX, _SPIN_FLIP_INDEX)]


def wootters_lambdas(matrix: Dense4) -> Tuple[float, float, float, float]:
    """
    Square roots of the eigenvalues of rho * rho_tilde, in nonincreasing order.

    With rho = R R^T, R = V diag(sqrt(mu)) from the Jacobi eigensystem, rho * rho_tilde is
    similar to (R^T Y R)^2 for Y = sigma_y (x) sigma_y. R^T Y R is real symmetric, so the
    lambdas are the absolute values of its Jacobi eigenvalues. Eigenvalues of rho up to
    1e-14 count as zero, so pure states give exactly one nonzero lambda.

    Raises:
        ValueError   : the matrix is not flagged symmetric.
        NoConvergence: a Jacobi iteration failed, or rho has an eigenvalue below -1e-10.
    """
    mu, vectors = jacobi_eigensystem(matrix)
    if mu[-1] < -PRODUCT_CLAMP:
        raise NoConvergence(f"rho eigenvalue {mu[-1]!r} is negative; rho*rho_tilde has no real square root")
    weights = np.sqrt(np.where(np.array(mu) > RANK_CUTOFF, mu, 0.0))
    root = vectors * weights
    flipped = _SPIN_FLIP_SIGN[:, None] * root[_SPIN_FLIP_INDEX]
    overlap = root.T @ flipped
    overlap = 0.5 * (overlap + overlap.T)
    values = sorted((abs(x) for x in jacobi_eigenvalues(Dense4.from_array(overlap))), reverse=True)
    return tuple(values)  # type: ignore[return-value]


def product_eigenvalues(matrix: Dense4) -> Tuple[float, float, float, float]:
    """
    The four eigenvalues of rho * rho_tilde in nonincreasing order, nonnegative by construction.

    Raises:
        ValueError   : the matrix is not flagged symmetric.
        NoConvergence: see `wootters_lambdas`.
    """
    return tuple(x * x for x in wootters_lambdas(matrix))  # type: ignore[return-value]


def swap_qubits(rho: np.ndarray) -> np.ndarray:
    """S rho S with S the two-qubit swap."""
    return np.asarray(rho)[np.ix_(SWAP_PERMUTATION, SWAP_PERMUTATION)]


def gibbs_state(levels: Iterable[Tuple[float, Sequence[float]]], temperature: float) -> np.ndarray:
    """
    (1/Z) sum_i exp(-E_i/T) |psi_i><psi_i| from (energy, state vector) pairs.
    Boltzmann factors are not shifted; keep T moderate.
    """
    if temperature <= 0.0:
        raise ValueError("Gibbs assembly needs a positive temperature")
    rho = np.zeros((4, 4))
    for energy, vector in levels:
        ket = np.asarray(vector, dtype=float)
        rho += math.exp(-energy / temperature) * np.outer(ket, ket)
    return rho / np.trace(rho)


def partial_trace_a(rho: np.ndarray) -> np.ndarray:
    """tr_A of a two-qubit operator; A is the first tensor factor."""
    return np.einsum("abac->bc", np.asarray(rho).reshape(2, 2, 2, 2))


def qubit_eigenvalues(m: np.ndarray) -> np.ndarray:
    """
    Eigenvalues (larger first) of 2x2 Hermitian matrices; works on stacks (..., 2, 2).
    """
    m = np.asarray(m)
    half_trace = 0.5 * np.real(m[..., 0, 0] + m[..., 1, 1])
    half_gap = 0.5 * np.real(m[..., 0, 0] - m[..., 1, 1])
    radius = np.sqrt(half_gap**2 + np.abs(m[..., 0, 1]) ** 2)
    return np.stack([half_trace + radius, half_trace - radius], axis=-1)


def entropy_bits(probabilities: np.ndarray) -> np.ndarray:
    """-sum p log2 p along the last axis, ignoring nonpositive entries."""
    p = np.asarray(probabilities, dtype=float)
    safe = np.where(p > 0.0, p, 1.0)
    return -np.sum(np.where(p > 0.0, p * np.log2(safe), 0.0), axis=-1)


def measurement_basis(theta: np.ndarray, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal qubit basis for Bloch angles (theta, phi):
    |b> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, |b_perp> = -e^{-i phi} sin(theta/2)|0> + cos(theta/2)|1>.
    Arrays broadcast; the result has shape (..., 2).
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    cos_half = np.cos(theta / 2.0)
    sin_half = np.sin(theta / 2.0)
    phase = np.exp(1j * phi)
    b = np.stack([cos_half + 0j, phase * sin_half], axis=-1)
    b_perp = np.stack([-np.conj(phase) * sin_half, cos_half + 0j], axis=-1)
    return b, b_perp


def conditional_states_on_a(rho: np.ndarray, vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    For B-outcome vectors |b> (shape (..., 2)) return (p_b, unnormalised A states (..., 2, 2)),
    where the A state is <b|_B rho |b>_B and p_b its trace.
    """
    blocks = np.asarray(rho).reshape(2, 2, 2, 2)  # [a, beta, a', beta']
    states = np.einsum("...i,aicj,...j->...ac", np.conj(vectors), blocks, vectors)
    probabilities = np.real(states[..., 0, 0] + states[..., 1, 1])
    return probabilities, states


def measured_conditional_entropy(rho: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """
    sum_k p_k S(rho_A|k) after a projective measurement on B along (theta, phi).
    Vectorised over the broadcast shape of theta and phi.
    """
    total = np.zeros(np.broadcast(np.asarray(theta), np.asarray(phi)).shape)
    for vectors in measurement_basis(theta, phi):
        probabilities, states = conditional_states_on_a(rho, vectors)
        eigen = np.real(qubit_eigenvalues(states))
        positive = probabilities > 1e-15
        normalised = np.clip(eigen / np.where(positive, probabilities, 1.0)[..., None], 0.0, 1.0)
        total = total + np.where(positive, probabilities * entropy_bits(normalised), 0.0)
    return total
