import json
import subprocess
import sys

import pytest

from bindet.arith import AffineMu
from bindet.cli import _mu, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,const,slope", [
    ("mu", 0, 1), ("mu+3", 3, 1), ("1-mu-12", -11, -1), ("2*mu+1/2", "1/2", 2), ("-mu", 0, -1), ("5", 5, 0)])
def test_mu_parser(text, const, slope):
    from fractions import Fraction
    assert _mu(text) == AffineMu(Fraction(const), Fraction(slope))


def test_det_at_point(capsys):
    code, out, _ = run(capsys, "det", "--family", "E", "--s", "2", "--t", "1", "--n", "2", "--at", "2")
    assert code == 0 and out.strip() == "10"


def test_det_matrix_and_canonical(capsys):
    code, out, _ = run(capsys, "det", "--family", "D", "--s", "0", "--t", "0", "--n", "2", "--matrix", "--canonical")
    assert code == 0
    assert out.strip().splitlines()[-1] == "[3, 1]"


def test_det_shifted_mu(capsys):
    code, out, _ = run(capsys, "det", "--family", "D", "--s", "0", "--t", "0", "--n", "2", "--mu", "mu+3")
    assert out.strip() == "mu + 6"


def test_closed_form_list_and_check(capsys):
    code, out, _ = run(capsys, "closed-form", "--list")
    assert code == 0 and "Krat37nice(m, r)" in out
    code, out, _ = run(capsys, "closed-form", "--id", "Krat37nice", "--m", "2", "--r", "1", "--check")
    assert code == 0 and out.strip().endswith("equal")


def test_closed_form_errors(capsys):
    code, _, err = run(capsys, "closed-form", "--id", "bogus")
    assert code == 2 and "unknown formula" in err
    code, _, err = run(capsys, "closed-form", "--id", "Krat37nice", "--m", "1", "--r", "3")
    assert code == 2 and "error" in err


def test_verify_writes_report(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "verify", "--suite", "figures", "--report", str(path), "--jobs", "1")
    assert code == 0 and "7/7 checks passed" in out
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1 and len(doc["checks"]) == 7


def test_verify_empty_suite_list(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "verify", "--suite", "--report", str(path), "--jobs", "1")
    assert code == 0 and "0/0" in out
    assert json.loads(path.read_text()) == {"schema": 1, "checks": []}


def test_verify_failure_exit(capsys, monkeypatch):
    from bindet import verify
    monkeypatch.setitem(verify.CHECKS, "figures.determinant", lambda: (1, 2))
    code, out, _ = run(capsys, "verify", "--suite", "figures", "--jobs", "1")
    assert code == 1 and "FAIL figures.determinant" in out


def test_ansatz_commands(capsys):
    code, out, _ = run(capsys, "ansatz", "solve", "--s", "2", "--n", "2")
    assert code == 0 and "c[2,2] = (-1) / (mu + 2)" in out
    code, out, _ = run(capsys, "ansatz", "verify", "--identity", "biglemma1", "--s", "2", "--n", "4")
    assert code == 0 and "holds" in out
    code, out, _ = run(capsys, "ansatz", "verify", "--identity", "biglemma1", "--s", "2", "--n", "3")
    assert code == 1 and "FAILS" in out


def test_ansatz_guess_with_fixed_ansatz(capsys):
    code, out, _ = run(capsys, "ansatz", "guess", "--s", "2", "--max-n", "20", "--holdout", "21",
                       "--parity", "odd", "--support", "1x3", "--degree", "2,3,3")
    assert code == 0 and "step 2" in out and "held-out" in out


def test_eps_limit(capsys):
    code, out, _ = run(capsys, "eps-limit", "--target", "quoED1", "--m", "1", "--check")
    assert code == 0 and out.strip().endswith("equal")
    code, _, err = run(capsys, "eps-limit", "--target", "biglemma2_a", "--m", "1", "--r", "1")
    assert code == 2


def test_tilings_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "tilings", "count", "--family", "E", "--s", "2", "--t", "1", "--n", "2", "--mu", "2")
    assert out.strip() == "10 (unweighted)"
    code, out, _ = run(capsys, "tilings", "enumerate", "--s", "2", "--t", "1", "--n", "2", "--mu", "2",
                       "--rows", "1", "--cols", "2")
    assert out.strip().endswith("4 path tuples (LGV 4)")
    svg = tmp_path / "r.svg"
    code, out, _ = run(capsys, "tilings", "svg", "--s", "2", "--t", "1", "--n", "2", "--mu", "2",
                       "--out", str(svg), "--with-paths")
    assert code == 0 and svg.read_text().startswith("<?xml")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bindet", "det", "--family", "E", "--s", "1", "--t", "1",
                           "--n", "1"], capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "mu - 1"
