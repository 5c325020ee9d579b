import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.domain.correlations import concurrence, quantum_discord
from app.domain.dot_model import (
    DotParams,
    GroundRegime,
    dot_concurrence,
    dot_discord,
    eigensystem,
    ground_regime,
    thermal_elements,
    thermal_state,
)
from app.domain.errors import NumericalFailure, TemperatureTooSmall
from app.domain.oracle import gibbs_state

GOLDEN = dict(k0=10.0, gamma=1.0, b0=1.0, temperature=1.0)


def _params(**overrides) -> DotParams:
    return DotParams(**{**GOLDEN, **overrides})


def test_dot_params_validation():
    """Tests rejection of negative and non-finite parameters."""
    with pytest.raises(ValidationError):
        _params(temperature=-0.1)
    with pytest.raises(ValidationError):
        _params(k0=float("nan"))
    with pytest.raises(ValidationError):
        _params(b0=float("inf"))
    assert _params(b0=-2.0).b0 == -2.0


def test_dot_params_are_frozen():
    """Tests that parameter records cannot be mutated."""
    params = _params()
    with pytest.raises(ValidationError):
        params.k0 = 3.0


def test_eigensystem_energies():
    """Tests the four energies and the level-spacing invariants."""
    system = eigensystem(_params())
    assert system.psi1.energy == pytest.approx(10 / 16 + 1)
    assert system.psi2.energy == pytest.approx(10 / 16 - 1)
    assert system.psi3.energy == pytest.approx(10 / 16)
    assert system.psi4.energy == pytest.approx(-1.875)
    assert system.psi3.energy - system.psi4.energy == pytest.approx(10 / 4)
    assert system.psi1.energy - system.psi2.energy == pytest.approx(2.0)
    assert [level.name for level in system.ground_levels()] == ["psi4"]


def test_eigensystem_labels_and_entanglement():
    """Tests that only the two Bell-type levels are flagged entangled."""
    system = eigensystem(_params())
    assert [level.maximally_entangled for level in system.levels] == [False, False, True, True]
    for level in system.levels:
        assert math.fsum(x * x for x in level.vector) == pytest.approx(1.0)


def test_eigensystem_degenerate_at_zero_field_and_splitting():
    """Tests that all levels collapse to 0 when k0 = B0 = 0."""
    system = eigensystem(_params(k0=0.0, b0=0.0))
    assert [level.energy for level in system.levels] == [0.0, 0.0, 0.0, 0.0]


def test_low_splitting_ground_state_is_polarised():
    """Tests that psi2 is the ground level for k0 = 3."""
    system = eigensystem(_params(k0=3.0))
    assert system.psi2.energy == pytest.approx(-0.8125)
    assert system.psi4.energy == pytest.approx(-0.5625)
    assert [level.name for level in system.ground_levels()] == ["psi2"]


@pytest.mark.parametrize(
    "k0, b0, regime",
    [
        (10.0, 1.0, GroundRegime.SINGLET),
        (3.0, 1.0, GroundRegime.PRODUCT_UP),
        (3.0, -1.0, GroundRegime.PRODUCT_DOWN),
        (4.0, 1.0, GroundRegime.DEGENERATE_BOUNDARY),
        (0.0, 0.0, GroundRegime.DEGENERATE_BOUNDARY),
    ],
)
def test_ground_regime(k0, b0, regime):
    """Tests the zero-temperature regime classification."""
    assert ground_regime(_params(k0=k0, b0=b0)) is regime


def test_thermal_elements_golden_fixture():
    """Tests the raw Boltzmann weights at T = 1, k0 = 10, gamma = 1, B0 = 1."""
    elements = thermal_elements(_params(), shifted=False)
    assert elements.u == pytest.approx(1.454991, abs=1e-5)
    assert elements.v == pytest.approx(0.196912, abs=1e-5)
    assert elements.w == pytest.approx(3.528040, abs=1e-5)
    assert elements.y == pytest.approx(-2.992779, abs=1e-5)
    assert elements.z == pytest.approx(8.707984, abs=1e-5)
    assert elements.shift == 0.0


def test_thermal_elements_high_temperature_limit():
    """Tests that every weight tends to 1 and Z to 4 as T grows."""
    elements = thermal_elements(_params(temperature=1e9))
    assert elements.u == pytest.approx(1.0, abs=1e-6)
    assert elements.v == pytest.approx(1.0, abs=1e-6)
    assert elements.w == pytest.approx(1.0, abs=1e-6)
    assert elements.y == pytest.approx(0.0, abs=1e-6)
    assert elements.z == pytest.approx(4.0, abs=1e-6)


def test_thermal_elements_zero_field_symmetry():
    """Tests u == v when B0 = 0."""
    elements = thermal_elements(_params(b0=0.0))
    assert elements.u == elements.v


@pytest.mark.parametrize("temperature", [0.0, 1e-9])
def test_thermal_elements_reject_tiny_temperature(temperature):
    """Tests that temperatures below 1e-8 are routed away."""
    with pytest.raises(TemperatureTooSmall):
        thermal_elements(_params(temperature=temperature))


def test_unshifted_weights_overflow_but_shifted_do_not():
    """Tests overflow protection by the ground-energy shift."""
    params = _params(temperature=1e-3)
    with pytest.raises(NumericalFailure, match="overflow"):
        thermal_elements(params, shifted=False)
    elements = thermal_elements(params)
    assert max(elements.u, elements.v, elements.w) <= 1.0
    assert math.isfinite(elements.z)


@pytest.mark.parametrize("temperature", [0.5, 1.0, 2.0, 5.0])
def test_shift_invariance(temperature):
    """Tests that shifted and raw weights give the same normalised state."""
    params = _params(temperature=temperature)
    shifted = thermal_elements(params)
    raw = thermal_elements(params, shifted=False)
    for a, b in ((shifted.u, raw.u), (shifted.w, raw.w), (shifted.y, raw.y), (shifted.v, raw.v)):
        assert a / shifted.z == pytest.approx(b / raw.z, abs=1e-14)
    assert shifted.u * math.exp(shifted.shift) == pytest.approx(raw.u, rel=1e-12)


def test_coherence_never_exceeds_block_weight():
    """Tests |y| <= w across a parameter grid."""
    for t in (0.01, 0.1, 1.0, 10.0):
        for k0 in (0.0, 5.0, 20.0):
            for b0 in (0.0, 2.5, 5.0):
                elements = thermal_elements(_params(temperature=t, k0=k0, b0=b0))
                assert abs(elements.y) <= elements.w
                assert elements.z == elements.u + elements.v + 2.0 * elements.w


def test_thermal_state_zero_temperature_singlet():
    """Tests the pure singlet at T = 0 for k0 = 10."""
    state = thermal_state(_params(temperature=0.0))
    assert state.diagonal == pytest.approx((0.0, 0.5, 0.5, 0.0))
    assert state.rho23 == pytest.approx(-0.5)
    assert state.rho14 == 0.0


def test_thermal_state_zero_temperature_polarised():
    """Tests the pure |up up> state at T = 0 for k0 = 3."""
    state = thermal_state(_params(k0=3.0, temperature=0.0))
    assert state.diagonal == pytest.approx((1.0, 0.0, 0.0, 0.0))
    assert state.rho23 == 0.0


def test_thermal_state_zero_temperature_degenerate_mixture():
    """Tests the equal mixture of singlet and |up up> at the level crossing."""
    state = thermal_state(_params(k0=4.0, temperature=0.0))
    assert state.diagonal == pytest.approx((0.5, 0.25, 0.25, 0.0))
    assert state.rho23 == pytest.approx(-0.25)


def test_thermal_state_high_temperature_is_maximally_mixed():
    """Tests convergence to I/4."""
    for k0, b0 in ((10.0, 1.0), (3.0, 5.0), (20.0, 0.0)):
        state = thermal_state(_params(k0=k0, b0=b0, temperature=1e9))
        np.testing.assert_allclose(state.as_matrix(), np.eye(4) / 4, atol=1e-6)


def test_thermal_state_matches_dense_gibbs_assembly():
    """Tests the X-state against (1/Z) sum exp(-E/T)|psi><psi| built from the eigensystem."""
    for t in (0.3, 1.0, 2.0, 7.5):
        for k0, b0 in ((10.0, 1.0), (3.0, 1.0), (5.0, 0.0), (20.0, 4.0)):
            params = _params(k0=k0, b0=b0, temperature=t)
            levels = [(level.energy, level.vector) for level in eigensystem(params).levels]
            np.testing.assert_allclose(thermal_state(params).as_matrix(), gibbs_state(levels, t), atol=1e-12)


def test_thermal_state_is_swap_symmetric():
    """Tests rho22 == rho33 everywhere."""
    for t in (0.0, 0.05, 1.0, 3.0):
        for b0 in (0.0, 1.0, 2.5, 5.0):
            state = thermal_state(_params(temperature=t, b0=b0))
            assert state.rho22 == state.rho33


@pytest.mark.parametrize("k0, b0", [(10.0, 1.0), (3.0, 1.0), (5.0, 0.0), (4.0, 0.9)])
def test_thermal_state_is_continuous_at_zero_temperature(k0, b0):
    """Tests that T = 1e-6 agrees with the ground-space projector away from level crossings."""
    cold = thermal_state(_params(k0=k0, b0=b0, temperature=1e-6)).as_matrix()
    frozen = thermal_state(_params(k0=k0, b0=b0, temperature=0.0)).as_matrix()
    np.testing.assert_allclose(cold, frozen, atol=1e-6)


def test_dot_concurrence_examples():
    """Tests the dot concurrence at the reference points."""
    assert dot_concurrence(_params(temperature=0.0)) == pytest.approx(1.0, abs=1e-12)
    assert dot_concurrence(_params()) == pytest.approx(0.564429, abs=1e-5)
    assert dot_concurrence(_params(k0=3.0, temperature=0.0)) == 0.0


def test_dot_discord_examples():
    """Tests the dot discord at the reference points."""
    assert dot_discord(_params(temperature=0.0)) == pytest.approx(1.0, abs=1e-12)
    assert dot_discord(_params(temperature=1e9)) == pytest.approx(0.0, abs=1e-6)
    assert dot_discord(_params(k0=3.0, temperature=0.0)) == pytest.approx(0.0, abs=1e-12)


def test_dot_closed_forms_match_generic_correlations():
    """Tests the dot formulas against the X-state formulas on the same states."""
    for t in (0.0, 0.05, 0.5, 1.0, 3.0):
        for k0 in (0.0, 3.0, 10.0, 20.0):
            for b0 in (0.0, 1.0, 2.5, 5.0):
                params = _params(temperature=t, k0=k0, b0=b0)
                state = thermal_state(params)
                assert dot_concurrence(params) == pytest.approx(concurrence(state), abs=1e-12)
                assert dot_discord(params) == pytest.approx(quantum_discord(state), abs=1e-12)
