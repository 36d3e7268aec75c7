import numpy as np
import pytest
from hofflab.core.grid import Grid
from hofflab.core.operators import (
    antideriv,
    deriv,
    face_average,
    face_diffusion,
    face_heating,
    flow_jacobian,
    forward_deriv,
)
from hofflab.utilities.convergence import EOCRecorder


@pytest.fixture()
def random_field():
    return np.random.default_rng(7).normal(size=64)


class TestDeriv:
    def test_constant_has_zero_derivative(self, grid):
        np.testing.assert_array_equal(deriv(3.5 * np.ones(grid.n), grid), 0.0)

    def test_second_order_on_sine(self):
        eoc = EOCRecorder()
        for n in (32, 64, 128, 256):
            grid = Grid(n=n)
            x = grid.cell_centers
            error = np.max(np.abs(deriv(np.sin(2 * np.pi * x), grid) - 2 * np.pi * np.cos(2 * np.pi * x)))
            eoc.add_data_point(grid.dx, error)
        assert eoc.order_estimate() >= 1.9

    def test_sawtooth_spikes_at_the_wrap(self):
        grid = Grid(n=64)
        d = deriv(grid.cell_centers, grid)
        np.testing.assert_allclose(d[1:-1], 1.0, rtol=1e-12)
        assert abs(d[0]) > grid.n / 4
        assert abs(d[-1]) > grid.n / 4

    def test_discrete_integral_vanishes(self, grid, random_field):
        assert abs(np.sum(deriv(random_field, grid)) * grid.dx) < 1e-12

    def test_acts_on_stacks(self, grid, random_field):
        stack = np.stack([random_field, 2 * random_field])
        d = deriv(stack, grid)
        np.testing.assert_array_equal(d[0], deriv(random_field, grid))
        np.testing.assert_allclose(d[1], 2 * d[0])


class TestAntideriv:
    def test_zero_field(self, grid):
        np.testing.assert_array_equal(antideriv(np.zeros(grid.n), grid), 0.0)

    def test_constant_field(self, grid):
        np.testing.assert_allclose(antideriv(4.0 * np.ones(grid.n), grid), 0.0, atol=1e-15)

    def test_mean_zero(self, grid, random_field):
        assert abs(np.mean(antideriv(random_field, grid))) < 1e-15

    def test_inverts_forward_difference(self, grid, random_field):
        h = random_field
        np.testing.assert_allclose(
            antideriv(forward_deriv(h, grid), grid), h - np.mean(h), atol=1e-13
        )

    def test_forward_difference_inverts_it(self, grid, random_field):
        f = random_field
        np.testing.assert_allclose(
            forward_deriv(antideriv(f, grid), grid), f - np.mean(f), atol=1e-12
        )

    def test_sup_bounded_by_l1(self, grid, random_field):
        f = random_field
        assert np.max(np.abs(antideriv(f, grid))) <= np.sum(np.abs(f)) * grid.dx


def test_flow_jacobian_of_identity(grid):
    np.testing.assert_array_equal(flow_jacobian(grid.cell_centers, grid), 1.0)


def test_flow_jacobian_of_shifted_identity(grid):
    np.testing.assert_allclose(flow_jacobian(grid.cell_centers + 0.3, grid), 1.0, atol=1e-12)


def test_face_average():
    np.testing.assert_array_equal(face_average(np.array([1.0, 3.0, 5.0, 7.0])), [2.0, 4.0, 6.0, 4.0])


class TestFaceOperators:
    @pytest.fixture()
    def coef(self, grid):
        return 1.0 + 0.5 * np.cos(2 * np.pi * grid.cell_centers)

    def test_diffusion_conserves(self, grid, coef, random_field):
        assert abs(np.sum(face_diffusion(random_field, coef, grid)) * grid.dx) < 1e-9

    def test_diffusion_is_dissipative(self, grid, coef, random_field):
        w = random_field
        lhs = -np.sum(w * face_diffusion(w, coef, grid)) * grid.dx
        rhs = np.sum(coef * (np.roll(w, -1) - w) ** 2) / grid.dx
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_heating_matches_dissipation(self, grid, coef, random_field):
        u = random_field
        heating = np.sum(face_heating(u, coef, grid)) * grid.dx
        work = -np.sum(u * face_diffusion(u, coef, grid)) * grid.dx
        assert heating == pytest.approx(work, rel=1e-12)

    def test_constant_is_in_the_kernel(self, grid, coef):
        np.testing.assert_array_equal(face_diffusion(2.0 * np.ones(grid.n), coef, grid), 0.0)
        np.testing.assert_array_equal(face_heating(2.0 * np.ones(grid.n), coef, grid), 0.0)
