import numpy as np
import pandas as pd
import pytest
from hofflab.core.gas import GasParams
from hofflab.core.grid import Grid
from hofflab.errors import NonMonotoneDistances, PositivityError, SweepRunError
from hofflab.io.initial_data import InitialDataSpec
from hofflab.settings import temporary_settings
from hofflab.solver.config import SolverConfig
from hofflab.sweep import study
from hofflab.sweep.study import (
    DEGENERATE_MARKER,
    SweepConfig,
    kappa_limit_study,
    perturbation,
    perturbed,
    stability_probe,
    uniformity_check,
)
from pydantic import ValidationError

from tests.fixtures.states import smooth_fields

SOLVER = SolverConfig(dt_initial=1e-3, t_end=0.05, snapshot_every=0.01)
WAVY = InitialDataSpec(
    generator="sine_all",
    rho_amplitude=0.3,
    u_amplitude=0.1,
    theta_amplitude=0.2,
    galilean_normalize=True,
)


def _config(**changes) -> SweepConfig:
    values = dict(kappas=[1e-2, 3e-3, 0.0], base_initial=WAVY, grid=Grid(n=64), solver=SOLVER)
    values.update(changes)
    return SweepConfig(**values)


@pytest.fixture(scope="module")
def wavy_sweep():
    return kappa_limit_study(_config())


class TestSweepConfig:
    @pytest.mark.parametrize(
        "kappas, message",
        [
            ([], "must not be empty"),
            ([1e-2, -1e-3, 0.0], "≥ 0"),
            ([1e-3, 1e-2, 0.0], "strictly decreasing"),
            ([1e-2, 1e-3], "end in 0"),
        ],
    )
    def test_kappa_list(self, kappas, message):
        with pytest.raises(ValidationError, match=message):
            _config(kappas=kappas)

    def test_snapshot_cadence_is_required(self):
        with pytest.raises(ValidationError, match="snapshot_every"):
            _config(solver=SolverConfig(dt_initial=1e-3, t_end=0.05))

    def test_defaults(self):
        config = SweepConfig(kappas=[0.0], solver=SOLVER)
        assert config.grid.n == 256
        assert config.mollify is True
        assert config.gas == GasParams(mu=1.0)
        assert "lagrangian_composed" in config.distance_norms


class TestDegenerateSweep:
    @pytest.fixture(scope="class")
    def result(self):
        return kappa_limit_study(
            _config(base_initial=InitialDataSpec(), kappas=[0.1, 0.01, 0.0], mollify=False)
        )

    def test_marker(self, result):
        assert result.rate_marker == DEGENERATE_MARKER
        assert result.rate_lines() == [f"# rate {DEGENERATE_MARKER}"]

    def test_all_distances_vanish(self, result):
        for norm in result.norms:
            np.testing.assert_array_equal(result.distances(norm), 0.0)

    def test_flags(self, result):
        assert result.monotone
        assert not result.regularity_blowup


class TestKappaLimit:
    def test_rows_follow_the_kappa_list(self, wavy_sweep):
        assert wavy_sweep.kappas == [1e-2, 3e-3, 0.0]
        assert [run.kappa for run in wavy_sweep.runs] == [1e-2, 3e-3, 0.0]

    def test_reference_row_has_zero_distance(self, wavy_sweep):
        for norm in wavy_sweep.norms:
            assert wavy_sweep.distances(norm)[-1] == 0.0

    def test_distances_decrease_with_kappa(self, wavy_sweep):
        assert wavy_sweep.rate_marker is None
        assert wavy_sweep.monotone
        for norm in wavy_sweep.norms:
            d = wavy_sweep.distances(norm)
            assert d[0] > d[1] > 0

    def test_rates(self, wavy_sweep):
        assert set(wavy_sweep.rates) == set(wavy_sweep.norms)
        assert all(rate is not None and rate > 0 for rate in wavy_sweep.rates.values())
        lines = wavy_sweep.rate_lines()
        assert lines[0].startswith("# rate L2L2_rho ")

    def test_data_is_prepared_per_kappa(self, wavy_sweep):
        preparations = [row.preparation for row in wavy_sweep.rows]
        assert preparations[0].eta_rho_theta == pytest.approx(1e-2**0.25)
        assert preparations[-1].eta_rho_theta is None

    def test_frame(self, wavy_sweep):
        frame = wavy_sweep.to_frame()
        assert list(frame["kappa"]) == [1e-2, 3e-3, 0.0]
        for column in (
            "d_lagrangian_composed",
            "hoff1.sup_int_sigma_sq",
            "hoff2.int_w_int_dtsigma_sq",
            "sup_theta",
            "inv_min_rho",
            "weighted_reg.initial_D0",
            "D0_envelope",
            "dtinv_sigma_max",
            "pairing.margin",
        ):
            assert column in frame.columns
        assert "weighted_reg.alpha" not in frame.columns

    def test_uniform_bounds(self, wavy_sweep):
        check = uniformity_check(wavy_sweep)
        assert check.passed
        assert check.ratios["sup_theta"][-1] == 1.0

    def test_tight_factor_fails(self, wavy_sweep):
        check = uniformity_check(wavy_sweep, factor=1e-6)
        assert not check.passed
        assert any(failure.startswith("sup_theta") for failure in check.failures)


def test_result_does_not_depend_on_workers(wavy_sweep):
    with temporary_settings(sweep_max_workers=1):
        serial = kappa_limit_study(_config())
    pd.testing.assert_frame_equal(serial.to_frame(), wavy_sweep.to_frame())


def test_failing_run_names_its_kappa(monkeypatch):
    real_run = study.run

    def failing_run(initial, params, config):
        if params.kappa == 3e-3:
            raise PositivityError("forced failure")
        return real_run(initial, params, config)

    monkeypatch.setattr(study, "run", failing_run)
    with pytest.raises(SweepRunError) as exc:
        kappa_limit_study(_config())
    assert exc.value.kappa == 3e-3
    assert exc.value.context["cause"]["error"] == "PositivityError"


@pytest.fixture
def inflated_distances(monkeypatch):
    """Make the κ = 3e-3 run look farther from κ = 0 than the κ = 1e-2 run."""
    real = study.distance_components

    def inflated(a, b):
        distances = real(a, b)
        if a.params.kappa == 3e-3:
            return distances.model_copy(update={"L2L2_rho": 1.0})
        return distances

    monkeypatch.setattr(study, "distance_components", inflated)


def test_non_monotone_distances_fail_the_study(inflated_distances):
    with pytest.raises(NonMonotoneDistances) as exc:
        kappa_limit_study(_config())
    assert exc.value.norm == "L2L2_rho"
    assert exc.value.kappas == [1e-2, 3e-3, 0.0]
    assert exc.value.distances[1] == 1.0
    assert exc.value.to_record()["error"] == "NonMonotoneDistances"


def test_non_monotone_distances_can_be_flagged_only(inflated_distances):
    result = kappa_limit_study(_config(), require_monotone=False)
    assert not result.monotone
    with pytest.raises(NonMonotoneDistances):
        result.require_monotone()


class TestStability:
    def test_perturbation_shape(self):
        grid = Grid(n=64)
        bump = perturbation(grid)
        assert bump.max() == pytest.approx(1.0, abs=2e-3)
        assert np.all(bump[grid.cell_centers <= 0.25] == 0)
        assert np.all(bump[grid.cell_centers >= 0.75] == 0)

    def test_perturbed_fields(self):
        base = smooth_fields(64)
        moved = perturbed(base, 1e-2, "u")
        np.testing.assert_array_equal(moved.rho0, base.rho0)
        assert np.max(np.abs(moved.u0 - base.u0)) == pytest.approx(1e-2, abs=1e-4)

    def test_negative_density_is_rejected(self):
        with pytest.raises(PositivityError):
            perturbed(smooth_fields(64), -2.0, "rho")

    def test_probe(self):
        result = stability_probe(
            smooth_fields(64),
            sizes=[1e-2, 1e-3, 0.0],
            kappa=1e-2,
            gas=GasParams(mu=1.0),
            solver=SOLVER,
            field="u",
        )
        assert [row.epsilon for row in result.rows] == [1e-2, 1e-3, 0.0]
        assert result.rows[-1].distance == 0.0
        assert result.rows[0].distance > result.rows[1].distance > 0
        assert result.threshold == pytest.approx(0.95)
        assert result.exponent == pytest.approx(1.0, abs=0.1)
        assert result.passed
        assert list(result.to_frame().columns) == ["epsilon", "d_lagrangian_composed"]
