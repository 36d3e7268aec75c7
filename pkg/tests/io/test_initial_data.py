import numpy as np
import pandas as pd
import pytest
from hofflab.core.grid import Grid
from hofflab.errors import ConfigValidationError, FormatError
from hofflab.io.initial_data import InitialDataSpec
from pydantic import ValidationError

GRID = Grid(n=64)


def test_constant():
    data = InitialDataSpec(rho_mean=2.0, theta_mean=0.5).generate(GRID)
    np.testing.assert_array_equal(data.rho0, 2.0)
    np.testing.assert_array_equal(data.u0, 0.0)
    np.testing.assert_array_equal(data.theta0, 0.5)
    assert not data.ill_prepared


def test_sine_density():
    data = InitialDataSpec(generator="sine_density", rho_amplitude=0.5, wavenumber=2).generate(GRID)
    x = GRID.cell_centers
    np.testing.assert_allclose(data.rho0, 1.0 + 0.5 * np.sin(4 * np.pi * x))
    np.testing.assert_array_equal(data.theta0, 1.0)


def test_sampled_jump_is_ill_prepared():
    data = InitialDataSpec(generator="sampled_jump").generate(GRID)
    assert data.ill_prepared
    assert set(np.unique(data.rho0)) == {0.7, 1.3}
    assert data.rho0[GRID.n // 2] == 1.3


def test_presmoothing_prepares_the_jump():
    data = InitialDataSpec(generator="sampled_jump", presmooth_width=0.1).generate(GRID)
    assert not data.ill_prepared
    assert data.rho0.min() > 0.7 - 1e-12
    assert data.rho0.max() < 1.3 + 1e-12
    assert np.max(np.abs(np.diff(data.rho0))) < 0.2
    assert GRID.integrate(data.rho0) == pytest.approx(1.0, rel=1e-12)


def test_galilean_normalization():
    spec = InitialDataSpec(
        generator="sine_all", rho_amplitude=0.3, u_mean=2.0, u_amplitude=0.1, galilean_normalize=True
    )
    data = spec.generate(GRID)
    assert GRID.integrate(data.rho0 * data.u0) == pytest.approx(0.0, abs=1e-14)


class TestDataConditions:
    def test_density_lower_bound(self):
        with pytest.raises(ConfigValidationError, match=r"\(16\) violated: min ρ₀"):
            InitialDataSpec(generator="sine_density", rho_amplitude=0.5, rho_lower=0.8).generate(GRID)

    def test_temperature_upper_bound(self):
        with pytest.raises(ConfigValidationError, match=r"\(17\) violated: max θ₀"):
            InitialDataSpec(theta_mean=2.0, theta_upper=1.5).generate(GRID)

    def test_nonpositive_density(self):
        with pytest.raises(ConfigValidationError) as exc:
            InitialDataSpec(rho_mean=-1.0).generate(GRID)
        assert exc.value.errors == ["(16) violated: ρ̲₀ ≤ 0"]

    def test_energy_bound(self):
        spec = InitialDataSpec(generator="sine_all", u_amplitude=1.0, C0=1e-3)
        with pytest.raises(ConfigValidationError, match=r"\(18\) violated"):
            spec.generate(GRID)

    def test_nonpositive_lower_bound_is_rejected_early(self):
        with pytest.raises(ValidationError, match=r"\(16\) violated"):
            InitialDataSpec(rho_lower=0.0)

    def test_file_needs_a_path(self):
        with pytest.raises(ValidationError, match="needs a path"):
            InitialDataSpec(generator="file")


class TestFile:
    def test_read(self, tmp_path):
        x = GRID.cell_centers
        path = tmp_path / "data.csv"
        pd.DataFrame({"rho": 1 + 0.1 * np.cos(2 * np.pi * x), "u": 0 * x, "theta": 1 + x}).to_csv(
            path, index=False
        )
        data = InitialDataSpec(generator="file", path=path).generate(GRID)
        np.testing.assert_allclose(data.theta0, 1 + x)

    def test_wrong_length(self, tmp_path):
        path = tmp_path / "data.csv"
        pd.DataFrame({"rho": [1.0] * 8, "u": [0.0] * 8, "theta": [1.0] * 8}).to_csv(path, index=False)
        with pytest.raises(FormatError, match="8 rows"):
            InitialDataSpec(generator="file", path=path).generate(GRID)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "data.csv"
        pd.DataFrame({"rho": [1.0] * 64, "u": [0.0] * 64}).to_csv(path, index=False)
        with pytest.raises(FormatError, match="theta"):
            InitialDataSpec(generator="file", path=path).generate(GRID)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError, match="cannot read"):
            InitialDataSpec(generator="file", path=tmp_path / "nope.csv").generate(GRID)
