import json
import subprocess
import sys
from pathlib import Path

import pytest

from hypertel.cli import main

TERMS = Path(__file__).resolve().parent.parent / "terms"
BINOM = str(TERMS / "binomial.json")
CBR = str(TERMS / "central_binomial_ratio.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_shape(capsys):
    code, out, _ = run(capsys, "shape", "--term", BINOM)
    assert code == 0 and out.strip() == "nu=1 theta=1 delta=0 lambda=1 mu=0 omega=1"
    code, out, _ = run(capsys, "shape", "--term", BINOM, "--json")
    assert json.loads(out)["nu"] == "1"


def test_telescope_and_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "telescope", "min", "--term", BINOM)
    assert code == 0 and "L = S_n - 2" in out
    code, out, _ = run(capsys, "telescope", "min", "--term", BINOM, "--json")
    rel = tmp_path / "rel.json"
    rel.write_text(out)
    code, out, _ = run(capsys, "verify", "--term", BINOM, "--relation", str(rel), "--json")
    obj = json.loads(out)
    assert code == 0 and obj["verified"] is True and obj["telescoping"]["fail"] == 0


def test_verify_rejects_bad_relation(capsys, tmp_path):
    _, out, _ = run(capsys, "telescope", "min", "--term", BINOM, "--json")
    data = json.loads(out)
    data["ell"][0] = ["-3"]
    rel = tmp_path / "bad.json"
    rel.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--term", BINOM, "--relation", str(rel))
    assert code == 1 and "FAILS" in out


def test_nonmin(capsys):
    code, out, _ = run(capsys, "telescope", "nonmin", "--term", BINOM)
    assert code == 0 and "S_n^2" in out and "ansatz d = 4" in out


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--term", BINOM)
    assert code == 0 and json.loads(out)["height_bound"] == "8192"
    code, out, _ = run(capsys, "bounds", "--term", BINOM, "--variant", "derivation")
    assert json.loads(out)["height_bound"] == "16384"


def test_modular(capsys):
    code, out, _ = run(capsys, "modular", "--term", BINOM, "--prime-bits", "30")
    obj = json.loads(out)
    assert code == 0 and obj["relation"]["operator"] == "S_n - 2" and obj["report"]["within_budget"]


def test_prove(capsys):
    code, out, _ = run(capsys, "prove", "--term", CBR, "--klo", "0", "--khi", "n")
    assert code == 0 and out.startswith("PROVEN")
    code, out, _ = run(capsys, "prove", "--term", BINOM, "--klo", "0", "--khi", "n", "--json")
    assert json.loads(out)["verdict"] == "disproven"


def test_experiment_and_fit(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "--max", "3", "--out", str(tmp_path), "--threads", "1")
    assert code == 0 and (tmp_path / "heights.png").exists() and "Omega=3 r=4" in out
    code, out, _ = run(capsys, "fit", "--in", str(tmp_path / "heights.csv"), "--model", "M2")
    assert code == 0 and len(json.loads(out)["coefficients"]) == 3
    code, _, err = run(capsys, "fit", "--in", str(tmp_path / "heights.csv"), "--model", "M1")
    assert code == 1 and json.loads(err)["error"] == "RankDeficient"


def test_experiment_no_plot(capsys, tmp_path):
    code, _, _ = run(capsys, "experiment", "--max", "2", "--out", str(tmp_path), "--no-plot")
    assert code == 0 and not (tmp_path / "heights.png").exists()


def test_domain_error_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "shape", "--term", str(tmp_path / "missing.json"))
    assert code == 1 and "error" in json.loads(err)
    code, _, err = run(capsys, "experiment", "--max", "0", "--out", str(tmp_path))
    assert code == 1 and json.loads(err)["error"] == "InvalidOmega"


@pytest.mark.parametrize("argv", [
    ["shape", "--term", BINOM, "--bogus"],
    ["modular", "--term", BINOM, "--prime-bits", "2"],
    ["verify", "--term", BINOM, "--relation", "x", "--grid", "0"],
    ["telescope", "maybe", "--term", BINOM],
])
def test_usage_error_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hypertel.cli", "telescope", "min", "--term", BINOM],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "L = S_n - 2" in proc.stdout
