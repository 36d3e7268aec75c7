import json
import textwrap

import hofflab
import pytest
from hofflab.cli import main
from hofflab.io.tables import read_csv
from hofflab.sweep import study

EXPERIMENT = """
[gas]
mu = 1.0
kappa = 0.01

[grid]
n = 32

[solver]
dt_initial = 0.001
t_end = 0.04
snapshot_every = 0.01

[initial]
generator = "sine_all"
rho_amplitude = 0.2
u_amplitude = 0.05
theta_amplitude = 0.1
galilean_normalize = true
"""


@pytest.fixture
def experiment(tmp_path):
    def write(extra: str = "", text: str = EXPERIMENT):
        path = tmp_path / "experiment.toml"
        path.write_text(textwrap.dedent(text) + textwrap.dedent(extra))
        return str(path)

    return write


def error_record(capsys) -> dict:
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


class TestRun:
    def test_outputs(self, experiment, tmp_path):
        out = tmp_path / "run"
        assert main(["run", experiment(), "--out", str(out)]) == 0
        for name in ("trajectory.txt", "diagnostics.csv", "summary.csv", "manifest.json"):
            assert (out / name).is_file()
        assert len(read_csv(out / "diagnostics.csv")) == 5
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "run"
        assert [o["path"] for o in manifest["outputs"]] == [
            "trajectory.txt",
            "diagnostics.csv",
            "summary.csv",
        ]

    def test_default_output_dir(self, experiment):
        assert main(["run", experiment()]) == 0
        assert (hofflab.settings.output_dir / "summary.csv").is_file()

    def test_refine(self, experiment, tmp_path):
        out = tmp_path / "run"
        assert main(["run", experiment(), "--out", str(out), "--refine", "1"]) == 0
        assert list(read_csv(out / "resolution.csv")["n"]) == [32, 64]

    def test_invalid_config(self, experiment, capsys):
        path = experiment(text=EXPERIMENT.replace("mu = 1.0", "mu = 0.0"))
        assert main(["run", path]) == 1
        record = error_record(capsys)
        assert record["error"] == "ConfigValidationError"
        assert "μ > 0" in record["message"]

    def test_missing_config(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "none.toml")]) == 1
        assert error_record(capsys)["error"] == "ParseError"


class TestSweep:
    def test_degenerate(self, experiment, tmp_path):
        constant = EXPERIMENT.split("[initial]")[0]
        path = experiment("\n[sweep]\nkappas = [0.1, 0.01, 0.0]\nmollify = false\n", text=constant)
        out = tmp_path / "sweep"
        assert main(["sweep", path, "--out", str(out)]) == 0
        text = (out / "sweep.csv").read_text()
        assert "# rate degenerate: zero distances\n" in text
        assert "# monotone true\n" in text
        assert list(read_csv(out / "sweep.csv")["kappa"]) == [0.1, 0.01, 0.0]
        assert (out / "uniformity.csv").is_file()

    def test_with_stability(self, experiment, tmp_path):
        path = experiment(
            "\n[sweep]\nkappas = [0.01, 0.0]\nmollify = false\n"
            "\n[sweep.stability]\nsizes = [0.01, 0.001]\nfield = 'u'\n"
        )
        out = tmp_path / "sweep"
        assert main(["sweep", path, "--out", str(out)]) == 0
        lines = (out / "stability.csv").read_text().splitlines()
        assert lines[0] == "epsilon,d_lagrangian_composed"
        assert lines[-1].startswith("# threshold ")

    def test_non_monotone_distances_exit_1(self, experiment, tmp_path, capsys, monkeypatch):
        real = study.distance_components

        def inflated(a, b):
            distances = real(a, b)
            if a.params.kappa == 0.001:
                return distances.model_copy(update={"L2L2_rho": 1.0})
            return distances

        monkeypatch.setattr(study, "distance_components", inflated)
        path = experiment("\n[sweep]\nkappas = [0.01, 0.001, 0.0]\nmollify = false\n")
        out = tmp_path / "sweep"
        assert main(["sweep", path, "--out", str(out)]) == 1
        record = error_record(capsys)
        assert record["error"] == "NonMonotoneDistances"
        assert record["norm"] == "L2L2_rho"
        assert "# monotone false\n" in (out / "sweep.csv").read_text()
        assert (out / "manifest.json").is_file()

    def test_without_section(self, experiment, capsys):
        assert main(["sweep", experiment()]) == 1
        assert "[sweep]" in error_record(capsys)["message"]


class TestLemma:
    def test_threshold(self, experiment, tmp_path):
        out = tmp_path / "lemma"
        path = experiment("\n[lemma17]\nkappas = [1.1]\nn_below = 3\n")
        assert main(["lemma17", path, "--out", str(out)]) == 0
        text = (out / "lemma17.csv").read_text()
        assert "# kappa0 " in text
        frame = read_csv(out / "lemma17.csv")
        assert len(frame) == 4
        assert frame["error"].fillna("").tolist()[-1] == "IntegrationBlowup"

    def test_without_section(self, experiment, capsys):
        assert main(["lemma17", experiment()]) == 1
        assert error_record(capsys)["error"] == "ConfigValidationError"


class TestVerify:
    @pytest.fixture
    def stored(self, experiment, tmp_path):
        out = tmp_path / "run"
        assert main(["run", experiment(), "--out", str(out)]) == 0
        return out / "trajectory.txt"

    def test_passes(self, stored, tmp_path):
        thresholds = tmp_path / "thresholds.toml"
        thresholds.write_text("[thresholds]\nenergy_drift = 1e-6\n")
        assert main(["verify", str(stored), str(thresholds)]) == 0

    def test_fails(self, stored, tmp_path, capsys):
        thresholds = tmp_path / "thresholds.toml"
        thresholds.write_text("[thresholds]\nenergy_drift = -1.0\n")
        assert main(["verify", str(stored), str(thresholds)]) == 1
        record = error_record(capsys)
        assert record["error"] == "VerificationFailure"
        assert record["invariant"] == "energy_drift"
        assert record["threshold"] == -1.0

    def test_unknown_threshold(self, stored, tmp_path, capsys):
        thresholds = tmp_path / "thresholds.toml"
        thresholds.write_text("[thresholds]\nwobble = 1.0\n")
        assert main(["verify", str(stored), str(thresholds)]) == 1
        assert error_record(capsys)["error"] == "ConfigValidationError"

    def test_corrupt_trajectory(self, stored, tmp_path, capsys):
        stored.write_text("not a trajectory\n")
        thresholds = tmp_path / "thresholds.toml"
        thresholds.write_text("[thresholds]\n")
        assert main(["verify", str(stored), str(thresholds)]) == 1
        assert error_record(capsys)["error"] == "FormatError"


def test_plots(tmp_path, experiment):
    out = tmp_path / "run"
    assert main(["run", experiment(), "--out", str(out)]) == 0
    assert main(["plots", str(out / "diagnostics.csv"), str(out / "summary.csv")]) == 0
    assert "extrema" in (out / "diagnostics.gp").read_text()
    assert (out / "summary.gp").is_file()


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["run"]])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert hofflab.__version__ in capsys.readouterr().out
