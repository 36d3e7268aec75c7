import numpy as np
import pytest
from hofflab.core.state import InitialFields, LagState
from hofflab.errors import PositivityError
from pydantic import ValidationError

from tests.fixtures.states import constant_fields, smooth_fields


def test_initial_state_is_the_identity_map():
    fields = smooth_fields(32)
    state = fields.to_state()
    assert state.t == 0.0
    np.testing.assert_array_equal(state.x_pos, state.grid.cell_centers)
    np.testing.assert_array_equal(state.rho, fields.rho0)
    np.testing.assert_array_equal(state.rho0, fields.rho0)
    np.testing.assert_array_equal(state.specific_volume, 1.0)


def test_fields_are_read_only_copies():
    rho0 = np.ones(16)
    state = LagState.initial(rho0, np.zeros(16), np.ones(16))
    rho0[0] = 5.0
    assert state.rho0[0] == 1.0
    assert not state.rho.flags.writeable
    with pytest.raises(ValueError):
        state.u[0] = 1.0


@pytest.mark.parametrize("field", ["rho", "theta"])
@pytest.mark.parametrize("value", [0.0, -0.1])
def test_nonpositive_fields_are_rejected(field, value):
    values = constant_fields(16).to_state().model_dump()
    values[field] = np.where(np.arange(16) == 3, value, 1.0)
    with pytest.raises(PositivityError) as exc:
        LagState(**values)
    assert exc.value.context["cell"] == 3
    assert exc.value.context["field"] == field


def test_nonfinite_velocity_is_rejected():
    with pytest.raises(PositivityError):
        constant_fields(16).to_state().evolve(u=np.full(16, np.nan))


def test_mismatched_lengths():
    with pytest.raises(ValidationError, match="cells"):
        LagState.initial(np.ones(16), np.zeros(8), np.ones(16))


def test_two_dimensional_field_is_rejected():
    with pytest.raises(ValidationError, match="one-dimensional"):
        LagState(
            rho=np.ones((2, 8)),
            u=np.zeros(8),
            theta=np.ones(8),
            x_pos=np.linspace(0, 1, 8, endpoint=False),
            rho0=np.ones(8),
        )


def test_evolve_validates():
    state = constant_fields(16).to_state()
    later = state.evolve(t=0.5, theta=2 * np.ones(16))
    assert later.t == 0.5
    np.testing.assert_array_equal(later.theta, 2.0)
    np.testing.assert_array_equal(state.theta, 1.0)
    with pytest.raises(PositivityError):
        state.evolve(theta=-np.ones(16))


def test_boosted_shifts_velocity_only():
    state = smooth_fields(32).to_state()
    moved = state.boosted(2.0)
    np.testing.assert_allclose(moved.u, state.u + 2.0)
    np.testing.assert_array_equal(moved.rho, state.rho)
    np.testing.assert_array_equal(moved.theta, state.theta)
    np.testing.assert_array_equal(moved.x_pos, state.x_pos)


class TestInitialFields:
    def test_grid(self):
        assert smooth_fields(32).grid.n == 32

    def test_defaults_to_well_prepared(self):
        assert constant_fields(16).ill_prepared is False

    def test_nonpositive_density(self):
        with pytest.raises(PositivityError):
            InitialFields(rho0=np.zeros(16), u0=np.zeros(16), theta0=np.ones(16))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            InitialFields(rho0=np.ones(16), u0=np.zeros(16), theta0=np.ones(32))
