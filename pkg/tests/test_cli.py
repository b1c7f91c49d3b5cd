import json
import os

import pytest

from contacthj.cli import main


def run_cli(args):
    return main(args)


def test_aubry_writes_table(tmp_path):
    out = str(tmp_path / "out")
    assert run_cli(["--out", out, "--n", "256", "--quiet", "aubry"]) == 0
    lines = open(os.path.join(out, "aubry.csv")).read().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any(ln.startswith("# mu=1") for ln in header)
    assert any(ln.startswith("# eps0=0.125") for ln in header)
    cols = lines[len(header)].split(",")
    assert cols == ["x", "B", "rho", "drho", "f"]
    assert len(lines) - len(header) - 1 == 257


def test_certify_pass_and_residual_csv(tmp_path):
    out = str(tmp_path / "out")
    code = run_cli(
        ["--out", out, "--n", "256", "--quiet", "certify",
         "--kind", "EvolSub", "--theta", "0.5", "--nt", "64"]
    )
    assert code == 0
    lines = open(os.path.join(out, "residuals.csv")).read().splitlines()
    assert lines[0] == "t,min_residual,max_residual"
    assert len(lines) == 65


def test_certify_bad_eps_exits_1(tmp_path):
    out = str(tmp_path / "out")
    code = run_cli(
        ["--out", out, "--n", "256", "--quiet", "certify",
         "--kind", "StationarySub", "--eps", "0.5"]
    )
    assert code == 1


def test_evolve_trace(tmp_path):
    out = str(tmp_path / "out")
    code = run_cli(
        ["--out", out, "--n", "128", "--quiet", "evolve", "--initial", "constant:0.05"]
    )
    assert code == 0
    lines = open(os.path.join(out, "trace_evolve.csv")).read().splitlines()
    assert lines[0] == "t,sup_dist,min,max"
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(0.05)


def test_config_file_and_stability(tmp_path):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text(
        "model = example1\nlambda.a0 = -1\nn = 256\ntrials = 3\ndelta = 1e-3\n"
    )
    out = str(tmp_path / "out")
    code = run_cli(["--config", str(cfgfile), "--out", out, "--quiet", "stability"])
    assert code == 0
    rows = [json.loads(ln) for ln in open(os.path.join(out, "verdicts.jsonl"))]
    assert all(r["verdict"] == "Unstable" for r in rows)
    assert any(r["escape_time"] is not None for r in rows)


def test_periodic_subcommand(tmp_path):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text("model = example1\nlambda.a0 = -1\nn = 256\nanchors = 0.0, 0.5\n")
    out = str(tmp_path / "out")
    code = run_cli(["--config", str(cfgfile), "--out", out, "--quiet", "periodic"])
    assert code == 0
    rows = [json.loads(ln) for ln in open(os.path.join(out, "verdicts.jsonl"))]
    assert len(rows) == 2
    assert all(r["nontrivial"] for r in rows)


def test_bad_config_exits_2(tmp_path):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text("model = example9\n")
    assert run_cli(["--config", str(cfgfile), "--quiet", "aubry"]) == 2


def test_missing_config_exits_2(tmp_path):
    assert run_cli(["--config", str(tmp_path / "nope.cfg"), "--quiet", "aubry"]) == 2


def test_example1_stable_report(tmp_path):
    out = str(tmp_path / "out")
    code = run_cli(["--out", out, "--n", "256", "--quiet", "example1"])
    assert code == 0
    report = open(os.path.join(out, "report.txt")).read()
    assert "PASS asymptotic stability" in report
    assert "PASS delta0 closed form" in report
    assert "FAIL" not in report


def test_example1_unstable_report(tmp_path):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text(
        "model = example1\nlambda.a0 = -1\nn = 256\ntrials = 3\ndelta = 1e-3\n"
        "anchors = 0.0, 0.37\n"
    )
    out = str(tmp_path / "out")
    code = run_cli(["--config", str(cfgfile), "--out", out, "--quiet", "example1"])
    assert code == 0
    report = open(os.path.join(out, "report.txt")).read()
    assert "PASS Lyapunov instability" in report
    assert "PASS nontrivial periodic solution" in report
    assert "PASS distinct anchors give distinct solutions" in report


def test_example2_requires_matching_model(tmp_path):
    out = str(tmp_path / "out")
    assert run_cli(["--out", out, "--quiet", "example2"]) == 2
