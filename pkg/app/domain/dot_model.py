"""
Reduced two-spin quantum-dot model H = (k0/4) S1.S2 - gamma B0 S^z and its thermal X-state.

Basis convention: |0> is spin up, so |00> = |up up> and |11> = |down down>.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat

from app.domain.correlations import DiscordBranch, clamp_rounding
from app.domain.errors import NumericalFailure, TemperatureTooSmall
from app.domain.xstate import XState, binary_entropy, shannon_entropy, validate

_l = logging.getLogger(__name__)
dot_logger = logging.LoggerAdapter(_l, extra={"tag": "Dot"})

# Below this temperature Boltzmann weights are replaced by the ground-space projector.
MIN_TEMPERATURE = 1e-8
DEGENERACY_SLACK = 1e-12

_ROOT_HALF = math.sqrt(0.5)


class DotParams(BaseModel):
    """
    Physical parameters of the reduced dot model (hbar = k_B = 1).

    Attributes:
        k0 (float)         : Singlet-triplet splitting parameter.
        gamma (float)      : Gyromagnetic ratio.
        b0 (float)         : Magnetic field; gamma * b0 is an energy.
        temperature (float): Temperature, >= 0.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    k0: FiniteFloat = Field(..., description="Singlet-triplet splitting parameter k0.")
    gamma: FiniteFloat = Field(1.0, description="Gyromagnetic ratio.")
    b0: FiniteFloat = Field(..., description="Magnetic field B0.")
    temperature: FiniteFloat = Field(..., ge=0.0, description="Temperature (k_B = 1).")


class GroundRegime(str, Enum):
    SINGLET = "Singlet"
    PRODUCT_UP = "ProductUp"
    PRODUCT_DOWN = "ProductDown"
    DEGENERATE_BOUNDARY = "DegenerateBoundary"


@dataclass(frozen=True)
class Level:
    """
    Attributes:
        name (str)                     : psi1..psi4.
        label (str)                    : Ket in spin notation.
        energy (float)                 : Eigenvalue.
        vector (Tuple[float, ...])     : Components in {|00>, |01>, |10>, |11>}.
        maximally_entangled (bool)     : True for the two Bell-type levels.
    """

    name: str
    label: str
    energy: float
    vector: Tuple[float, float, float, float]
    maximally_entangled: bool


@dataclass(frozen=True)
class Eigensystem:
    psi1: Level
    psi2: Level
    psi3: Level
    psi4: Level

    @property
    def levels(self) -> Tuple[Level, Level, Level, Level]:
        return (self.psi1, self.psi2, self.psi3, self.psi4)

    @property
    def ground_energy(self) -> float:
        return min(level.energy for level in self.levels)

    def ground_levels(self) -> Tuple[Level, ...]:
        e_min = self.ground_energy
        return tuple(level for level in self.levels if level.energy - e_min <= DEGENERACY_SLACK)


@dataclass(frozen=True)
class ThermalElements:
    """
    Unnormalised Gibbs weights of the thermal X-state.

    Attributes:
        u (float)    : |up up> weight (rho11 slot).
        w (float)    : Diagonal weight of the |01>, |10> block.
        y (float)    : Coherence of the |01>, |10> block.
        v (float)    : |down down> weight (rho44 slot).
        z (float)    : Partition function u + v + 2w.
        shift (float): Exponent added to every weight; raw weights are these times exp(shift).
    """

    u: float
    w: float
    y: float
    v: float
    z: float
    shift: float


def eigensystem(params: DotParams) -> Eigensystem:
    base = params.k0 / 16.0
    zeeman = params.gamma * params.b0
    return Eigensystem(
        psi1=Level("psi1", "|down down>", base + zeeman, (0.0, 0.0, 0.0, 1.0), False),
        psi2=Level("psi2", "|up up>", base - zeeman, (1.0, 0.0, 0.0, 0.0), False),
        psi3=Level("psi3", "|1,0>", base, (0.0, _ROOT_HALF, _ROOT_HALF, 0.0), True),
        psi4=Level("psi4", "|0,0>", -3.0 * params.k0 / 16.0, (0.0, _ROOT_HALF, -_ROOT_HALF, 0.0), True),
    )


def ground_regime(params: DotParams) -> GroundRegime:
    """
    Zero-temperature ground state: the singlet psi4 while gamma |B0| < k0/4, otherwise the
    field-aligned product state. Ties within 1e-12 are reported as a degenerate boundary.
    """
    ground = eigensystem(params).ground_levels()
    if len(ground) != 1:
        return GroundRegime.DEGENERATE_BOUNDARY
    return {
        "psi4": GroundRegime.SINGLET,
        "psi2": GroundRegime.PRODUCT_UP,
        "psi1": GroundRegime.PRODUCT_DOWN,
    }.get(ground[0].name, GroundRegime.DEGENERATE_BOUNDARY)


def thermal_elements(params: DotParams, shifted: bool = True) -> ThermalElements:
    """
    u = exp(-E2/T), v = exp(-E1/T), w = (exp(-E3/T) + exp(-E4/T))/2, y = (exp(-E3/T) - exp(-E4/T))/2.

    With `shifted` every exponent is offset by the ground energy, so the largest weight
    is 1 and nothing overflows; the normalised state is unchanged.

    Raises:
        TemperatureTooSmall: T < 1e-8 (use the zero-temperature path in `thermal_state`).
        NumericalFailure   : an unshifted weight overflows.
    """
    t = params.temperature
    if t < MIN_TEMPERATURE:
        raise TemperatureTooSmall(f"T={t!r} is below {MIN_TEMPERATURE}; use the ground-state path")

    system = eigensystem(params)
    offset = system.ground_energy if shifted else 0.0

    try:
        boltzmann = [math.exp(-(level.energy - offset) / t) for level in system.levels]
    except OverflowError as exc:
        raise NumericalFailure(f"Boltzmann weight overflow at T={t!r}; use shifted weights") from exc

    b1, b2, b3, b4 = boltzmann
    u, v = b2, b1
    w = 0.5 * (b3 + b4)
    y = 0.5 * (b3 - b4)
    return ThermalElements(u=u, w=w, y=y, v=v, z=u + v + 2.0 * w, shift=-offset / t)


def _populations_to_state(p1: float, p2: float, p3: float, p4: float) -> XState:
    """Level populations (psi1..psi4) to X-state elements."""
    block = 0.5 * (p3 + p4)
    return validate(p2, block, block, p1, 0.0, 0.5 * (p3 - p4))


def ground_state(params: DotParams) -> XState:
    """Equal mixture of the (possibly degenerate) ground levels."""
    ground = {level.name for level in eigensystem(params).ground_levels()}
    weight = 1.0 / len(ground)
    p1, p2, p3, p4 = (weight if name in ground else 0.0 for name in ("psi1", "psi2", "psi3", "psi4"))
    return _populations_to_state(p1, p2, p3, p4)


def thermal_state(params: DotParams) -> XState:
    if params.temperature < MIN_TEMPERATURE:
        dot_logger.debug("T=%r below cutoff, using the ground-space projector", params.temperature)
        return ground_state(params)

    e = thermal_elements(params)
    return validate(e.u / e.z, e.w / e.z, e.w / e.z, e.v / e.z, 0.0, e.y / e.z)


def _normalised_elements(params: DotParams) -> Tuple[float, float, float, float]:
    """(u, w, y, v) divided by the partition function."""
    if params.temperature < MIN_TEMPERATURE:
        state = ground_state(params)
        return state.rho11, state.rho22, state.rho23, state.rho44
    e = thermal_elements(params)
    return e.u / e.z, e.w / e.z, e.y / e.z, e.v / e.z


def dot_concurrence(params: DotParams) -> float:
    """C = (2/Z) max{0, |y| - sqrt(uv)}."""
    u, _, y, v = _normalised_elements(params)
    return min(2.0 * max(0.0, abs(y) - math.sqrt(u * v)), 1.0)


def dot_discord_branches(params: DotParams) -> Tuple[float, float, DiscordBranch]:
    """
    Q_j = H(u + w) - S(rho_T) + D_j on normalised elements, with spectrum {u, v, w + |y|, w - |y|},
    D1 = H((1 + sqrt((1 - 2(w + v))^2 + 4y^2))/2) and D2 = -u log2 u - 2w log2 w - v log2 v - H(u + w).
    """
    u, w, y, v = _normalised_elements(params)
    s_b = binary_entropy(u + w)
    s_total = shannon_entropy((u, v, w + abs(y), w - abs(y)))

    tau = min(math.sqrt((1.0 - 2.0 * (w + v)) ** 2 + 4.0 * y * y), 1.0)
    d1 = binary_entropy(0.5 * (1.0 + tau))
    d2 = shannon_entropy((u, w, w, v)) - s_b

    q1 = s_b - s_total + d1
    q2 = s_b - s_total + d2
    return q1, q2, DiscordBranch.Q1 if q1 <= q2 else DiscordBranch.Q2


def dot_discord(params: DotParams) -> float:
    q1, q2, _ = dot_discord_branches(params)
    return clamp_rounding(min(q1, q2), "Dot discord")
