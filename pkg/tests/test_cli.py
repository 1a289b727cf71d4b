import json

import pytest

from unireg.cli import main


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestTraj:
    def test_emits_csv_with_header(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert run_cli("traj", "--kind", "rectangular", "--period", 100,
                       "--steps", 10, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "k,t,r"
        assert len(lines) == 11
        assert lines[1].startswith("0,0,0")

    def test_arbitrary_from_inline_samples(self, tmp_path):
        out = tmp_path / "arb.csv"
        assert run_cli("traj", "--kind", "arbitrary", "--samples", "0.1,0.2",
                       "--steps", 4, "--out", out) == 0
        values = [line.split(",")[2] for line in out.read_text().splitlines()[1:]]
        assert values == ["0.10000000000000001", "0.20000000000000001",
                          "0.20000000000000001", "0.20000000000000001"]

    def test_arbitrary_from_file(self, tmp_path):
        samples = tmp_path / "samples.txt"
        samples.write_text("0.5\n0.25\n")
        out = tmp_path / "arb.csv"
        assert run_cli("traj", "--kind", "arbitrary", "--samples", f"@{samples}",
                       "--steps", 2, "--out", out) == 0

    def test_bad_kind_exits_two(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            run_cli("traj", "--kind", "sawtooth", "--out", tmp_path / "x.csv")
        assert info.value.code == 2


class TestSimulate:
    def test_writes_csv(self, tmp_path):
        out = tmp_path / "fixed.csv"
        assert run_cli("simulate", "--k0", 50, "--n0", 92.626, "--episodes", 2,
                       "--episode-length", 100, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "episode,k,t,r,x,u,e,K,N"
        assert len(lines) == 201

    def test_config_error_exits_two(self, tmp_path):
        assert run_cli("simulate", "--episodes", 0, "--out", tmp_path / "x.csv") == 2

    def test_plots_rendered(self, tmp_path):
        out = tmp_path / "fixed.csv"
        assert run_cli("simulate", "--episodes", 1, "--episode-length", 50,
                       "--out", out, "--plots") == 0
        for suffix in ("response", "control", "gains"):
            assert (tmp_path / f"fixed_{suffix}.svg").exists()


class TestTune:
    def test_ase_csv_has_diagnostic_columns(self, tmp_path):
        out = tmp_path / "ase.csv"
        assert run_cli("tune", "--method", "shc-ase", "--episodes", 2,
                       "--episode-length", 200, "--seed", 4, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "episode,k,t,r,x,u,e,K,N,branch_tag,omega,xi,omega_draw"
        assert any(",raise-n-priority," in line for line in lines)

    def test_seeded_runs_are_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            assert run_cli("tune", "--method", "shc-ase", "--episodes", 3,
                           "--seed", 11, "--out", out) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_gss_method(self, tmp_path):
        out = tmp_path / "gss.csv"
        assert run_cli("tune", "--method", "gss", "--episodes", 2,
                       "--episode-length", 250, "--out", out) == 0
        assert out.exists()


class TestCompare:
    def test_all_methods_side_by_side(self, tmp_path):
        out_dir = tmp_path / "cmp"
        assert run_cli("compare", "--methods", "fixed,shc,shc-ase",
                       "--episodes", 2, "--episode-length", 100,
                       "--out-dir", out_dir) == 0
        for method in ("fixed", "shc", "shc-ase"):
            assert (out_dir / f"{method}.csv").exists()

    def test_unknown_method_rejected(self, tmp_path):
        assert run_cli("compare", "--methods", "fixed,annealing",
                       "--out-dir", tmp_path) == 2


class TestConfigFile:
    def test_json_defaults_with_flag_override(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"episodes": 2, "episode_length": 50, "k0": 10.0}))
        out = tmp_path / "out.csv"
        assert run_cli("simulate", "--config", config, "--k0", 20, "--n0", 30,
                       "--out", out) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 101  # episodes/length from config
        assert lines[1].split(",")[7] == "20"  # flag overrides config k0

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"episodess": 2}))
        assert run_cli("simulate", "--config", config, "--out", tmp_path / "x.csv") == 2

    def test_missing_config_file_exits_two(self, tmp_path):
        assert run_cli("simulate", "--config", tmp_path / "none.json",
                       "--out", tmp_path / "x.csv") == 2


class TestDivergenceExit:
    def test_divergent_session_exits_one_with_partial_csv(self, tmp_path, monkeypatch):
        # Force a tiny divergence ceiling so the driven plant trips it.
        import unireg.session as session_mod

        monkeypatch.setattr(session_mod, "DIVERGENCE_FACTOR", 1e-3)
        out = tmp_path / "div.csv"
        assert run_cli("simulate", "--k0", 50, "--n0", 100, "--episodes", 1,
                       "--episode-length", 500, "--out", out) == 1
        lines = out.read_text().splitlines()
        assert lines[0].startswith("episode,k,t")
        assert 1 < len(lines) < 502
