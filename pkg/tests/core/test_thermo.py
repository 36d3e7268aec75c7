import math

import numpy as np
import pytest
from hofflab.core.gas import GasParams
from hofflab.core.operators import deriv
from hofflab.core.state import LagState
from hofflab.core.thermo import entropy_h, relative_entropy_density, stress, thermo
from hofflab.errors import DomainError, HoffLabError, PositivityError


def test_constant_state(constant_state, gas):
    fields = thermo(constant_state, gas)
    np.testing.assert_array_equal(fields.p, 1.0)
    np.testing.assert_array_equal(fields.sigma, -1.0)
    np.testing.assert_array_equal(fields.s, 0.0)
    np.testing.assert_array_equal(fields.e, 1.0)
    np.testing.assert_array_equal(fields.Etot, 1.0)


def test_compressed_cold_state(gas):
    n = 16
    state = LagState(
        rho=2 * np.ones(n),
        u=np.zeros(n),
        theta=0.5 * np.ones(n),
        x_pos=(np.arange(n) + 0.5) / n,
        rho0=np.ones(n),
    )
    fields = thermo(state, gas)
    np.testing.assert_array_equal(fields.p, 1.0)
    np.testing.assert_allclose(fields.s, -2 * math.log(2))


def test_sigma_matches_pointwise_formula(smooth_state, gas):
    fields = thermo(smooth_state, gas)
    grid = smooth_state.grid
    du = deriv(smooth_state.u, grid)
    for j in range(grid.n):
        expected = (
            gas.mu * smooth_state.rho[j] / smooth_state.rho0[j] * du[j]
            - gas.R * smooth_state.rho[j] * smooth_state.theta[j]
        )
        assert fields.sigma[j] == pytest.approx(expected, rel=1e-14, abs=1e-14)


def test_sigma_plus_pressure_is_viscous_stress(smooth_state, gas):
    fields = thermo(smooth_state, gas)
    viscous = gas.mu * smooth_state.rho / smooth_state.rho0 * deriv(smooth_state.u, smooth_state.grid)
    np.testing.assert_allclose(fields.sigma + fields.p - viscous, 0.0, atol=1e-13)


def test_stress_accepts_stacks(smooth_state, gas):
    s = smooth_state
    stack = stress(
        np.stack([s.rho, s.rho]), np.stack([s.u, s.u]), np.stack([s.theta, s.theta]),
        s.rho0, gas, s.grid,
    )
    np.testing.assert_array_equal(stack[1], thermo(s, gas).sigma)


@pytest.mark.parametrize("name", ["rho", "theta"])
def test_nonpositive_fields_never_reach_thermo(constant_state, name):
    with pytest.raises(PositivityError) as exc:
        constant_state.evolve(**{name: np.zeros(constant_state.grid.n)})
    assert exc.value.context["field"] == name


def test_thermo_is_deterministic(smooth_state, gas):
    a = thermo(smooth_state, gas)
    b = thermo(smooth_state, gas)
    for name in ("p", "e", "Etot", "s", "sigma"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))


class TestEntropyH:
    def test_values(self):
        assert entropy_h(1.0) == 0.0
        assert entropy_h(math.e) == pytest.approx(math.e - 2, rel=1e-15)
        assert entropy_h(0.5) == pytest.approx(0.1931471805599453, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_outside_domain(self, x):
        with pytest.raises(DomainError):
            entropy_h(x)

    def test_domain_error_is_a_hofflab_error(self):
        with pytest.raises(HoffLabError):
            entropy_h(np.array([1.0, 0.0]))

    def test_nonnegative(self):
        x = np.random.default_rng(3).uniform(1e-3, 10, size=1000)
        assert np.all(entropy_h(x) >= 0)

    def test_array_in_array_out(self):
        out = entropy_h(np.array([1.0, 2.0]))
        assert isinstance(out, np.ndarray)
        assert out[0] == 0.0


def test_relative_entropy_vanishes_at_rest(constant_state, gas):
    np.testing.assert_array_equal(relative_entropy_density(constant_state, gas), 0.0)


def test_relative_entropy_is_positive_away_from_rest(smooth_state):
    density = relative_entropy_density(smooth_state, GasParams(mu=1.0))
    assert np.all(density >= 0)
    assert np.sum(density) > 0
