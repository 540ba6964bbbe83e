import csv
import io
import json
import math
import shutil
import subprocess

import pytest

from semichaos import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text.split("\n\n", 1)[0])))


# ------------------------------------------------------------- specfun

def test_specfun_closed_form(capsys):
    code, out, _ = run(capsys, "specfun", "--fn", "K", "--nu", "0.5", "--x", "2")
    assert code == 0
    assert float(out) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-15)
    assert len(out.strip()) >= 17


def test_specfun_tilde_k_at_zero(capsys):
    code, out, _ = run(capsys, "specfun", "--fn", "tildeK", "--nu", "1", "--x", "0")
    assert code == 0 and out.strip() == "1"


def test_specfun_malformed_order(capsys):
    code, _, err = run(capsys, "specfun", "--fn", "K", "--nu", "abc", "--x", "2")
    assert code == 2 and "abc" in err


def test_specfun_domain_and_envelope(capsys):
    assert run(capsys, "specfun", "--fn", "K", "--nu", "-2", "--x", "1")[0] == 2
    assert run(capsys, "specfun", "--fn", "K", "--nu", "0.5", "--x", "1e6")[0] == 3


def test_specfun_grid_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "specfun", "--fn", "I", "--nu", "1", "--x", "0:4:5")
    assert code == 0
    path = tmp_path / "x.csv"
    path.write_text(out)
    code, again, _ = run(capsys, "specfun", "--fn", "I", "--nu", "1", "--from-file", str(path))
    assert code == 0 and again == out
    assert [float(r["x"]) for r in rows(out)] == [0.0, 1.0, 2.0, 3.0, 4.0]


# -------------------------------------------------------------- evolve

def test_evolve_defaults_decrease(capsys):
    code, out, _ = run(capsys, "evolve")
    assert code == 0
    norms = [float(r["norm"]) for r in rows(out)]
    assert all(b < a for a, b in zip(norms, norms[1:]))


def test_evolve_eigen_column(capsys):
    code, out, _ = run(capsys, "evolve", "--f", "eigen", "--lambda-re", "0", "--lambda-im", "0",
                       "--t-grid", "0.5:4:4")
    assert code == 0
    data = rows(out)
    base = float(data[0]["norm"]) / math.exp(-0.5)
    for r in data:
        assert float(r["norm"]) == pytest.approx(base * math.exp(-float(r["t"])), rel=1e-3)


def test_evolve_dunkl_l2_and_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "evolve", "--p", "2", "--kappa", "0.5,0.5", "--t-grid", "0.5,1,2")
    assert code == 0
    path = tmp_path / "t.csv"
    path.write_text(out)
    code, again, _ = run(capsys, "evolve", "--p", "2", "--kappa", "0.5,0.5", "--from-file", str(path))
    assert code == 0 and again == out


def test_evolve_is_deterministic(capsys):
    a = run(capsys, "evolve", "--t-grid", "1,2")[1]
    b = run(capsys, "evolve", "--t-grid", "1,2")[1]
    assert a == b


def test_evolve_bad_space(capsys):
    assert run(capsys, "evolve", "--p", "0.5")[0] == 2
    assert run(capsys, "evolve", "--t-grid", "2,1")[0] == 2


def test_config_file_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\np = 4/3\nt-grid = 1,2\nc = 0.5\n")
    code, out, _ = run(capsys, "--config", str(cfg), "evolve", "--c", "0")
    flags = run(capsys, "evolve", "--p", "4/3", "--t-grid", "1,2", "--c", "0")[1]
    assert code == 0 and out == flags
    cfg.write_text("nonsense = 1\n")
    assert run(capsys, "--config", str(cfg), "evolve")[0] == 2


# ------------------------------------------------------------ spectrum

def test_spectrum_vertex_and_intersection(capsys):
    code, out, _ = run(capsys, "spectrum", "--p", "4", "--rho", "1", "--c", "1", "--samples", "5")
    assert code == 0
    assert "0,0.75" in out.splitlines()
    info = json.loads(out.split("\n\n", 1)[1])
    assert info["count"] == "infinite" and info["v_max"] == pytest.approx(0.5)


def test_spectrum_degenerate_ray(capsys):
    code, out, _ = run(capsys, "spectrum", "--p", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["degenerate"] is True


def test_spectrum_needs_finite_p(capsys):
    assert run(capsys, "spectrum", "--p", "inf")[0] == 2


# ----------------------------------------------- witness, verdict, verify

def test_witness_periodic(capsys):
    code, out, _ = run(capsys, "witness", "periodic", "--p", "4", "--rho", "1", "--c", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["residuals"]["return"] <= 1e-6 and doc["theorem_tag"] == "Prop2.9"


def test_witness_refused_at_critical_shift(capsys):
    assert run(capsys, "witness", "binf", "--p", "4", "--c", "0.75")[0] == 2


def test_verdict_and_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "verdict", "--p", "4", "--rho", "1", "--c", "1", "--kappa", "0,0")
    doc = json.loads(out)
    assert code == 0
    assert (doc["verdict"], doc["theorem_tag"]) == ("Chaotic", "Thm1.4(1)")
    path = tmp_path / "v.json"
    path.write_text(out)
    assert run(capsys, "verdict", "--from-file", str(path))[1] == out


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--only", "lemma31_2", "--mass-scale", "1.01")
    assert code == 4
    assert json.loads(out)["results"][0]["passed"] is False


def test_verify_quick_profile_passes(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "--profile", "quick", "--out", str(report))
    doc = json.loads(report.read_text())
    failed = [r["check_id"] for r in doc["results"] if not r["passed"]]
    assert code == 0, failed


def test_plot_outputs(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    fig = tmp_path / "e.png"
    code, out, _ = run(capsys, "evolve", "--t-grid", "1,2", "--plot", str(fig))
    assert code == 0 and fig.stat().st_size > 0 and out.startswith("t,norm,log_norm")
    fig2 = tmp_path / "s.png"
    assert run(capsys, "spectrum", "--plot", str(fig2))[0] == 0 and fig2.stat().st_size > 0


def test_console_script():
    exe = shutil.which("semichaos")
    if exe is None:
        pytest.skip("console script not installed")
    res = subprocess.run([exe, "verdict", "--p", "4", "--c", "0.4", "--kappa", "0.5,0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["theorem_tag"] == "Thm1.6(2)"
