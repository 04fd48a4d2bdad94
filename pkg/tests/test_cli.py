import json
import re

import pytest

from honest_credible import cli
from honest_credible.radius import radius_bounds


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def test_radius_line(self, capsys):
        code, out, _ = run(capsys, "radius", "--alpha", "1", "--n", "10000", "--gamma", "0.05")
        assert code == 0
        m = re.fullmatch(r"r=(\S+) lower=(\S+) upper=(\S+)\n", out)
        assert m
        r, lo, hi = map(float, m.groups())
        assert (lo, hi) == radius_bounds(1.0, 1.0, 1e4, 0.05)[:2]
        assert lo <= r <= hi

    def test_radius_domain_error(self, capsys):
        assert run(capsys, "radius", "--alpha", "1", "--n", "1e4", "--gamma", "1.5")[0] == 2

    def test_usage(self, capsys):
        assert run(capsys)[0] == 2
        with pytest.raises(SystemExit) as e:
            cli.main(["radius"])
        assert e.value.code == 2

    def test_estimate(self, capsys, tmp_path):
        code, out, _ = run(capsys, "estimate", "--n", "1e4", "--C0", "0",
                           "--diagnostics", str(tmp_path / "d"))
        assert code == 0 and out.startswith("alpha_mle=")
        assert (tmp_path / "d_risk.csv").read_text().startswith("alpha,value,threshold\n")
        assert (tmp_path / "d_mle.csv").exists()

    def test_estimate_from_file(self, capsys, tmp_path):
        p = tmp_path / "x.txt"
        p.write_text("# n=10000\n" + "\n".join(["0.0"] * 100) + "\n")
        code, out, _ = run(capsys, "estimate", "--observation", str(p))
        assert code == 0 and "alpha_mle=2.0" in out

    def test_estimate_bad_file(self, capsys, tmp_path):
        p = tmp_path / "x.txt"
        p.write_text("0.1\n")
        assert run(capsys, "estimate", "--observation", str(p))[0] == 2

    def test_coverage_byte_identical(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"truth_spec": {"builder": "sim_truth"}, "method": "eb_risk",
                                   "n_list": [1e4], "replicates": 5, "master_seed": 3,
                                   "mc_draws": 2000}))
        for d in ("a", "b"):
            assert run(capsys, "coverage", "--config", str(cfg),
                       "--output-dir", str(tmp_path / d))[0] == 0
        assert (tmp_path / "a" / "coverage.csv").read_bytes() == \
            (tmp_path / "b" / "coverage.csv").read_bytes()

    def test_coverage_config_error(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"truth_spec": {"builder": "sim_truth"}, "speed": 1}))
        assert run(capsys, "coverage", "--config", str(cfg), "--output-dir", str(tmp_path))[0] == 2

    def test_coverage_resource_error(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"truth_spec": {"builder": "sim_truth"}, "n_list": [1e12],
                                   "max_coordinates": 1000}))
        assert run(capsys, "coverage", "--config", str(cfg), "--output-dir", str(tmp_path))[0] == 3

    def test_figures(self, capsys, tmp_path):
        cfg = tmp_path / "f.json"
        cfg.write_text(json.dumps({"n_list": [1e4], "methods": ["eb_risk"], "draws": 100,
                                   "t_points": 32}))
        code, out, _ = run(capsys, "figures", "--config", str(cfg), "--output-dir", str(tmp_path))
        assert code == 0 and "eb_risk n=10000" in out
        assert (tmp_path / "figure_eb_risk.svg").exists()

    def test_figures_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "f.json"
        cfg.write_text(json.dumps({"dpi": 300}))
        assert run(capsys, "figures", "--config", str(cfg))[0] == 2

    def test_check_bounds(self, capsys):
        code, out, _ = run(capsys, "check-bounds")
        assert code == 0
        assert out.count("PASS") == 2
