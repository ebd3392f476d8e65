"""End-to-end tests of the command-line surface."""

import json

import pytest
from pydantic import ValidationError

from src.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main, parse_run_config
from src.models.run_config import RunConfig
from src.repositories.artifact_repository import ArtifactRepository, config_hash


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    lines = captured.out.strip().splitlines()
    summary = json.loads(lines[-1]) if code == EXIT_OK else None
    return code, summary, captured.err


class TestParsing:

    def test_profile_fills_mc_sizes(self, tmp_path):
        config = parse_run_config(["mc", "2", "2", "4", "--u", "1", "--out", str(tmp_path)])
        assert (config.n, config.warmup, config.sweeps) == (100, 1_000, 10_000)

    def test_explicit_sizes_win(self):
        config = parse_run_config(["mc", "2", "2", "4", "--u", "1", "--n", "10", "--profile", "paper"])
        assert config.n == 10
        assert config.sweeps == 1_000_000

    def test_u_grid_for_invariants(self):
        config = parse_run_config(["invariants", "2", "2", "4", "--u", "0.5", "1"])
        assert config.u_grid == (0.5, 1.0)
        assert config.u is None

    def test_single_u_elsewhere(self):
        with pytest.raises(ValueError):
            parse_run_config(["curve", "2", "2", "4", "--u", "0.5", "1"])

    def test_extra_fields_forbidden(self):
        with pytest.raises(ValidationError):
            RunConfig(command="analyze", orders=(2, 3, 5), colour="red")

    def test_hash_ignores_output_directory(self):
        a = RunConfig(command="analyze", orders=(2, 3, 5), out="x")
        b = RunConfig(command="analyze", orders=(2, 3, 5), out="y")
        assert config_hash(a.hash_payload()) == config_hash(b.hash_payload())

    def test_family_checked_per_command(self):
        with pytest.raises(ValidationError):
            RunConfig(command="curve", orders=(2, 2, 4), family="A")
        assert RunConfig(command="mc", orders=(2, 2, 4), family="B").family == "B"


class TestExitCodes:

    def test_order_below_two(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "1", "3", "--out", str(tmp_path))
        assert code == EXIT_USAGE
        assert "invalid-fiber-order" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "analyze", "2", "3", "5", "--bogus")
        assert code == EXIT_USAGE

    def test_unknown_command(self, capsys):
        code, _, _ = run(capsys, "sing", "2", "3", "5")
        assert code == EXIT_USAGE

    def test_out_of_range_value(self, capsys, tmp_path):
        code, _, _ = run(capsys, "mc", "2", "2", "4", "--u", "1", "--n", "1", "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_missing_coupling(self, capsys, tmp_path):
        code, _, err = run(capsys, "curve", "2", "2", "4", "--out", str(tmp_path))
        assert code == EXIT_FAILURE
        assert "domain-error" in err

    def test_bad_torus_label(self, capsys, tmp_path):
        code, _, _ = run(capsys, "curve", "2", "4", "--u", "1", "--out", str(tmp_path))
        assert code == EXIT_USAGE


class TestAnalyze:

    def test_e8(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "analyze", "2", "3", "5", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["type"] == "E8"
        assert summary["roots"] == 240
        assert summary["weyl_order"] == 696729600
        assert summary["d"] == 240
        assert summary["chi"] == "1/30"
        document = ArtifactRepository.read_json(tmp_path / "analyze.json")
        assert document["data"]["orbit"]["size"] == 240
        assert document["meta"]["config_hash"] == summary["config_hash"]
        assert (tmp_path / "skeleton.txt").exists()
        assert (tmp_path / "run_config.json").exists()

    def test_hyperbolic(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "analyze", "2", "3", "7", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["type"] == "Infinite"
        assert summary["roots"] is None
        document = ArtifactRepository.read_json(tmp_path / "analyze.json")
        assert document["data"]["orbit"] is None
        assert document["data"]["convexity"]["kind"] == "NegativeAt"

    def test_affine(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "analyze", "2", "4", "4", "--out", str(tmp_path), "--format", "json")
        assert code == EXIT_OK
        assert summary["affine"] == "A3-hat"
        assert summary["d"] == 4


class TestCurve:

    def test_even_mass(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "curve", "2", "2", "4", "--u", "1", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["family"] == "even"
        assert summary["mass"] == pytest.approx(1.0, abs=1e-6)
        meta, header, rows = ArtifactRepository.read_csv(tmp_path / "density.csv")
        assert header == ["t", "rho"]
        assert len(rows) == 201
        assert meta["command"] == "curve"

    def test_torus(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "curve", "2", "3", "--u", "0.5", "--out", str(tmp_path), "--format", "csv")
        assert code == EXIT_OK
        assert summary["family"] == "torus"
        assert summary["mass"] == pytest.approx(1.0, abs=1e-4)
        assert not (tmp_path / "curve.json").exists()


class TestMonteCarlo:

    ARGS = ("mc", "2", "2", "4", "--u", "1", "--n", "4", "--warmup", "5", "--sweeps", "20", "--bins", "10")

    def test_bit_identical_reruns(self, capsys, tmp_path):
        first, summary, _ = run(capsys, *self.ARGS, "--seed", "3", "--out", str(tmp_path / "a"))
        second, again, _ = run(capsys, *self.ARGS, "--seed", "3", "--out", str(tmp_path / "b"))
        assert first == second == EXIT_OK
        assert (tmp_path / "a" / "histogram.csv").read_bytes() == (tmp_path / "b" / "histogram.csv").read_bytes()
        assert summary["config_hash"] == again["config_hash"]
        assert summary["model"] == "A(2,2,4)"

    def test_manifest(self, capsys, tmp_path):
        code, _, _ = run(capsys, *self.ARGS, "--out", str(tmp_path))
        assert code == EXIT_OK
        manifest = ArtifactRepository.read_json(tmp_path / "manifest.json")["data"]
        assert manifest["chains"] == 1
        assert manifest["model"]["orders"] == [2, 2, 4]
        assert manifest["config"]["sweeps"] == 20


class TestOtherCommands:

    def test_invariants_grid(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "invariants", "2", "2", "4", "--u", "0.5", "1", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["rows"] == 6
        _, header, rows = ArtifactRepository.read_csv(tmp_path / "moments.csv")
        assert header == ["p", "u", "g", "k", "value"]
        assert [row[3] for row in rows[:3]] == [2.0, 6.0, 10.0]
        locus = ArtifactRepository.read_json(tmp_path / "invariants.json")["data"]["singularity_locus"]
        assert locus["note"] == "u = 0 removed"

    def test_twopoint(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "twopoint", "2", "2", "4", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["orbit"] == 5
        document = ArtifactRepository.read_json(tmp_path / "twopoint.json")["data"]
        plain = document["sparse_decomposition"]["plain"]
        assert len(plain) == 4
        assert {entry.lstrip("-") for entry in plain} == {"1/5"}

    def test_recursion(self, capsys, tmp_path):
        code, summary, _ = run(capsys, "recursion", "2", "2", "2", "--u", "1", "--g", "1", "--out", str(tmp_path))
        assert code == EXIT_OK
        assert summary["genus"] == 1
        _, header, rows = ArtifactRepository.read_csv(tmp_path / "moments.csv")
        assert header == ["g", "k", "re", "im"]
        assert len(rows) == 2
