import io
import subprocess
import sys
from pathlib import Path

import pytest

from transalg.cli import run

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def ta(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_sat_uls_holds():
    code, out, _ = ta("sat", FIX / "uls.ta", "--model", "M", "--sentence", "all")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["schema=ta-report/1", "verb=sat", "verdict=holds"]


def test_entails_plain_finds_counterexample():
    code, out, _ = ta("entails", FIX / "list.ta", "--phi", "PHI", "--goal", "GOAL", "--flavor", "plain",
                      "--bound", "List=6,Elt=1")
    assert code == 1
    assert kv(out)["verdict"] == "counterexample"
    code, out, _ = ta("entails", FIX / "list.ta", "--flavor", "plain", "--goal", "assoc", "--bound", "List=6,Elt=1")
    assert code == 1 and kv(out)["phi"] == "PHI"


def test_entails_ctor_holds_up_to_bound():
    code, out, _ = ta("entails", FIX / "list.ta", "--phi", "PHI", "--goal", "GOAL", "--flavor", "ctor",
                      "--bound", "List=3,Elt=1")
    assert code == 0
    assert kv(out)["verdict"] == "holds-up-to-bound"


def test_saturated_model_falsifies_assoc():
    code, out, _ = ta("sat", FIX / "list.ta", "--model", "B", "--sentence", "GOAL")
    assert code == 1


def test_check_empty_file(tmp_path):
    empty = tmp_path / "empty.ta"
    empty.write_text("")
    code, out, _ = ta("check", empty)
    assert code == 0 and kv(out)["verdict"] == "ok"


def test_check_reports_parse_errors(tmp_path):
    bad = tmp_path / "bad.ta"
    bad.write_text("sig S {\n  sorts\n")
    code, out, err = ta("check", bad)
    assert code == 1 and kv(out)["verdict"] == "invalid"
    assert err.startswith(f"{bad}:")
    code, _, _ = ta("sat", bad, "--model", "M")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("no-such-verb",),
    ("sat", FIX / "uls.ta", "--bogus"),
    ("sat", FIX / "uls.ta", "--model", "NOPE", "--sentence", "all"),
    ("entails", FIX / "list.ta", "--phi", "PHI", "--goal", "GOAL", "--bound", "Nope=2"),
    ("sat", ROOT / "missing.ta", "--model", "M"),
    ("fixtures", "nope"),
])
def test_usage_errors_exit_2(argv):
    code, _, err = ta(*argv)
    assert code == 2


def test_budget_exhaustion_is_exit_2():
    code, _, err = ta("entails", FIX / "list.ta", "--phi", "PHI", "--goal", "GOAL", "--flavor", "ctor",
                      "--bound", "List=4,Elt=1", "--budget", "50")
    assert code == 2 and "resource limit" in err


def test_human_and_kv_agree_on_verdict():
    for argv in (("sat", FIX / "uls.ta", "--model", "M", "--sentence", "all"),
                 ("realize", FIX / "list.ta", "--model", "B", "--type", "Tc"),
                 ("force", FIX / "forcing.ta", "--forcing", "F", "--condition", "p2")):
        c1, o1, _ = ta(*argv)
        c2, o2, _ = ta(*argv, "--format", "human")
        assert c1 == c2
        verb, verdict = kv(o1)["verb"], kv(o1)["verdict"]
        assert o2.splitlines()[0] == f"{verb}: {verdict}"


def test_seed_override(monkeypatch):
    _, a, _ = ta("fuzz-satcond", "--cases", "30", "--seed", "1")
    monkeypatch.setenv("TA_SEED", "1")
    _, b, _ = ta("fuzz-satcond", "--cases", "30", "--seed", "99")
    assert a == b and kv(b)["seed"] == "1"
    monkeypatch.setenv("TA_SEED", "x")
    assert ta("fuzz-satcond", "--cases", "1")[0] == 2


def test_forcing_verbs():
    code, out, _ = ta("force", FIX / "forcing.ta", "--forcing", "F", "--condition", "p2")
    r = kv(out)
    assert code == 1 and r["verdict"] == "not-forced"
    assert (r["sentence.POOL.reach"], r["sentence.POOL.step"], r["sentence.POOL.neq"]) == ("true", "false", "true")
    code, out, _ = ta("force", FIX / "forcing.ta", "--forcing", "F", "--condition", "p2", "--sentence", "reach")
    assert code == 0 and kv(out)["verdict"] == "forced"
    assert ta("wforce", FIX / "forcing.ta", "--forcing", "F", "--condition", "p0", "--sentence", "reach")[0] == 0
    code, out, _ = ta("generic-model", FIX / "forcing.ta", "--forcing", "F", "--pool", "POOL")
    assert code == 0


def test_proof_and_types():
    code, out, _ = ta("check-proof", FIX / "list.ta", "--proof", "P")
    assert code == 0 and kv(out)["verdict"] == "valid-up-to-bound"
    assert ta("realize", FIX / "list.ta", "--model", "C", "--type", "Tc")[0] == 0
    code, out, _ = ta("isolate", FIX / "inf.ta", "--phi", "PHI", "--type", "T", "--pool", "POOL", "--bound", "3")
    assert code == 0 and kv(out)["verdict"] == "locally-omits-up-to-bound"


def test_fixture_loader_matches_shipped_files():
    code, out, _ = ta("fixtures", "uls")
    assert code == 0 and out == (FIX / "uls.ta").read_text()
    code, out, _ = ta("check", "fixture:uls:2")
    assert code == 0 and kv(out)["verdict"] == "ok"


def test_repeated_runs_are_byte_identical():
    argv = [sys.executable, "-m", "transalg.cli", "fuzz-satcond", "--cases", "50", "--seed", "7"]
    runs = [subprocess.run(argv, capture_output=True, check=False, cwd=ROOT).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
