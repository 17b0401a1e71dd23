import json
import subprocess
import sys

import pytest

from drazinkit import campaign
from drazinkit.campaign import VerifyReport, strip_elapsed
from drazinkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def matfile(tmp_path):
    def write(text):
        path = tmp_path / "a.txt"
        path.write_text(text)
        return str(path)

    return write


def test_drazin_file(capsys, matfile):
    code, out, _ = run(capsys, "drazin", matfile("GF 7\n2 2\n2 0\n0 0\n"))
    assert code == 0
    assert out == (
        "# drazin inverse\nGF 7\n2 2\n4 0\n0 0\n"
        "# index 1\n"
        "# spectral idempotent\nGF 7\n2 2\n0 0\n0 1\n"
    )


def test_drazin_integer_not_invertible(capsys, matfile):
    code, out, _ = run(capsys, "drazin", matfile("Z\n1 1\n2\n"))
    assert (code, out.strip()) == (1, "NotDrazinInvertible")


def test_drazin_modular_scalar(capsys, matfile):
    code, out, _ = run(capsys, "drazin", matfile("Zn 12\n1 1\n2\n"))
    assert code == 0
    assert out.splitlines()[3] == "8"


@pytest.mark.parametrize(
    "text",
    ["Q\n2 two\n1 0\n0 1\n", "Q\n2 3\n1 0 0\n0 1 0\n", "Zn 12\n2 2\n1 0\n0 1\n", "X\n1 1\n1\n"],
)
def test_drazin_input_errors(capsys, matfile, text):
    code, _, err = run(capsys, "drazin", matfile(text))
    assert code == 2 and err.startswith("error:")


def test_drazin_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "drazin", str(tmp_path / "nope.txt"))
    assert code == 2


def test_verify_single(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "T3.5", "--domain", "GF:7", "--dim", "4", "--trials", "100", "--seed", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["pass"] and rep["failures"] == [] and rep["checked"] == 100
    assert VerifyReport.from_dict(rep).to_dict() == rep


def test_verify_projectors_need_rationals(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "T3.9", "--domain", "GF:2", "--dim", "2")
    assert code == 2 and "requires rationals" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--theorem", "T9.9"],
        ["verify", "--theorem", "T3.2", "--domain", "Zn:12", "--dim", "2"],
        ["verify", "--theorem", "T3.2", "--domain", "GF:4", "--dim", "2"],
    ],
)
def test_verify_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_all_aggregate(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--domain", "Q", "--dim", "3", "--trials", "50", "--seed", "7")
    agg = json.loads(out)
    assert [r["theorem"] for r in agg["reports"]] == list(campaign.THEOREM_IDS)
    assert code == (0 if agg["pass"] else 1)
    assert agg["failures"] == sum(len(r["failures"]) for r in agg["reports"])
    for r in agg["reports"]:
        assert r["pass"] == (r["failures"] == [])
        assert VerifyReport.from_dict(r).to_dict() == r


def test_verify_failure_exit_code(capsys):
    # T3.7(1) converse counterexamples are common in small characteristic
    code, out, _ = run(capsys, "verify", "--theorem", "T3.7", "--domain", "GF:2", "--dim", "2", "--trials", "40")
    rep = json.loads(out)
    assert code == 1
    f = rep["failures"][0]
    assert f["equation"] == "T3.7(1)"
    assert set(f) == {"seed", "trial", "trial_seed", "inputs", "equation", "detail"}


def test_verify_scalar_lemmas(capsys):
    for dom in ("Zn:12", "Z"):
        code, out, _ = run(capsys, "verify", "--theorem", "L2.1", "--domain", dom, "--dim", "1", "--trials", "30")
        assert code == 0 and json.loads(out)["pass"]


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--theorem", "T3.10", "--domain", "GF:3", "--dim", "3", "--trials", "60", "--seed", "5")
    a = json.loads(run(capsys, *argv)[1])
    b = json.loads(run(capsys, *argv)[1])
    assert strip_elapsed(a) == strip_elapsed(b)


def test_oracle_small(capsys):
    code, out, _ = run(capsys, "oracle", "--domain", "GF:2", "--dim", "1", "--exhaustive")
    rep = json.loads(out)
    assert code == 0 and rep["elements"] == 2 and rep["mismatches"] == 0


def test_oracle_too_large(capsys):
    code, _, err = run(capsys, "oracle", "--domain", "GF:7", "--dim", "3", "--exhaustive")
    assert code == 2 and "error" in err


def test_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample")
    assert code == 0 and json.loads(out)["pass"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "drazinkit.cli", "counterexample"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"]


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


@pytest.mark.parametrize(
    "argv, name",
    [
        (["verify", "--theorem", "T3.7", "--domain", "GF:2", "--dim", "2", "--trials", "22"], "verify_T3.7_GF2_dim2.json"),
        (["counterexample"], "counterexample.json"),
    ],
)
def test_golden_reports(capsys, argv, name):
    _, out, _ = run(capsys, *argv)
    golden = json.loads((FIXTURES / name).read_text())
    assert strip_elapsed(json.loads(out)) == golden
