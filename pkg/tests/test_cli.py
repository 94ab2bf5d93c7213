import json

import numpy as np
import pytest

from mfrisk import cli
from mfrisk.config import ConfigError, config_from_dict, load_config


def base_config(**sim_overrides):
    sim = {"n_paths": 400, "h": 0.25, "h_op": 1e-3, "horizon": 1.0,
           "master_seed": 99, "workers": 1}
    sim.update(sim_overrides)
    return {
        "params": {"alpha1": 0.9, "alpha2": 0.5, "c1": 0.5, "c2": 0.5,
                   "lambda": 1.0},
        "claims": {"kind": "exponential", "rate": 1.0},
        "risk": {"u": 5.0, "rho": 0.2, "mu": 1.0, "variant": "MFRP"},
        "sim": sim,
    }


def write_config(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


class TestConfigParsing:
    def test_round_trip(self):
        cfg = config_from_dict(base_config())
        assert cfg.params.alpha1 == 0.9
        assert cfg.sim.n_paths == 400
        assert cfg.claims.kind == "exponential"
        assert cfg.risk.rho == 0.2

    def test_missing_params(self):
        with pytest.raises(ConfigError):
            config_from_dict({"sim": {}})

    def test_missing_field(self):
        doc = base_config()
        del doc["params"]["alpha1"]
        with pytest.raises(ConfigError):
            config_from_dict(doc)

    def test_bad_claims_kind(self):
        doc = base_config()
        doc["claims"] = {"kind": "lognormal"}
        with pytest.raises(ConfigError):
            config_from_dict(doc)

    def test_bad_sim_values(self):
        doc = base_config(n_paths=0)
        with pytest.raises(ConfigError):
            config_from_dict(doc)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")

    def test_discrete_claims(self):
        doc = base_config()
        doc["claims"] = {"kind": "discrete", "probabilities": [0.5, 0.5]}
        cfg = config_from_dict(doc)
        assert cfg.claims.law.mean() == 1.5


class TestExitCodes:
    def test_missing_config_flag(self, capsys):
        assert cli.main(["simulate"]) == 2
        assert "config" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert cli.main(["simulate", "--config", str(p)]) == 2

    def test_missing_field_no_partial_files(self, tmp_path, capsys):
        doc = base_config()
        del doc["params"]["c1"]
        p = write_config(tmp_path, doc)
        out = tmp_path / "out"
        assert cli.main(["simulate", "--config", str(p),
                         "--out-dir", str(out)]) == 2
        assert not out.exists()

    def test_unknown_criteria(self, tmp_path):
        assert cli.main(["acceptance", "--criteria", "99"]) == 2


class TestSimulateCommand:
    def test_writes_artifacts(self, tmp_path):
        p = write_config(tmp_path, base_config())
        out = tmp_path / "out"
        assert cli.main(["simulate", "--config", str(p),
                         "--out-dir", str(out)]) == 0
        lines = (out / "paths.csv").read_text().splitlines()
        assert lines[0].startswith("# config_hash=")
        assert lines[1] == "path_id,t,Y,N,C_or_R"
        assert len(lines) == 2 + 400 * 4
        summary = json.loads((out / "summary.json").read_text())
        assert len(summary["per_time"]) == 4

    def test_worker_determinism(self, tmp_path):
        p = write_config(tmp_path, base_config())
        blobs = []
        for w in (1, 3):
            out = tmp_path / f"out-w{w}"
            assert cli.main(["simulate", "--config", str(p),
                             "--out-dir", str(out), "--workers",
                             str(w)]) == 0
            blobs.append((out / "paths.csv").read_bytes())
        assert blobs[0] == blobs[1]

    def test_seed_override_changes_output(self, tmp_path):
        p = write_config(tmp_path, base_config())
        out1, out2 = tmp_path / "a", tmp_path / "b"
        cli.main(["simulate", "--config", str(p), "--out-dir", str(out1)])
        cli.main(["simulate", "--config", str(p), "--out-dir", str(out2),
                  "--seed", "12345"])
        assert (out1 / "paths.csv").read_bytes() != \
            (out2 / "paths.csv").read_bytes()


class TestOtherCommands:
    def test_moments(self, tmp_path):
        p = write_config(tmp_path, base_config())
        out = tmp_path / "out"
        assert cli.main(["moments", "--config", str(p),
                         "--out-dir", str(out)]) == 0
        header = (out / "moments.csv").read_text().splitlines()[1]
        assert header.split(",")[0] == "t"

    def test_distribution_normalization(self, tmp_path):
        doc = base_config()
        doc["claims"] = {"kind": "discrete", "probabilities": [0.5, 0.5]}
        p = write_config(tmp_path, doc)
        out = tmp_path / "out"
        assert cli.main(["distribution", "--config", str(p),
                         "--out-dir", str(out)]) == 0
        summary = json.loads((out / "distribution_summary.json").read_text())
        assert abs(summary["sum_pn"] - 1.0) <= 1e-4

    def test_ruin_command(self, tmp_path):
        doc = base_config(n_paths=5000, horizon=5.0)
        doc["risk"] = {"u": 2.0, "rho": 0.0, "mu": 1.0, "variant": "MFRP2",
                       "c": 1.5}
        p = write_config(tmp_path, doc)
        out = tmp_path / "out"
        assert cli.main(["ruin", "--config", str(p),
                         "--out-dir", str(out)]) == 0
        doc = json.loads((out / "ruin.json").read_text())
        methods = {e["method"] for e in doc["estimates"]}
        assert {"monte_carlo", "laplace_inversion",
                "density_integral"} <= methods

    def test_ruin_needs_mfrp2(self, tmp_path, capsys):
        doc = base_config()
        p = write_config(tmp_path, doc)
        assert cli.main(["ruin", "--config", str(p),
                         "--out-dir", str(tmp_path / "o")]) == 2

    def test_dependence(self, tmp_path):
        doc = base_config()
        doc["risk"]["rho"] = 1.0
        doc["params"]["lambda"] = 10.0
        p = write_config(tmp_path, doc)
        out = tmp_path / "out"
        assert cli.main(["dependence", "--config", str(p),
                         "--out-dir", str(out)]) == 0
        dep = json.loads((out / "dependence.json").read_text())
        assert abs(dep["lrd_exponent"] - 0.5) <= 0.05
        assert abs(dep["srd_exponent"] - 1.25) <= 0.05

    def test_acceptance_single_criterion(self, tmp_path):
        out = tmp_path / "out"
        assert cli.main(["acceptance", "--criteria", "1",
                         "--out-dir", str(out)]) == 0
        doc = json.loads((out / "acceptance.json").read_text())
        assert doc["all_passed"]
        assert doc["criteria"][0]["index"] == 1
