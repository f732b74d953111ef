"""End-to-end acceptance gate.

Criteria 1-7 run through the selftest library (the same code the CLI
selftest command executes) with one printed pass/fail line each; the
eighth drives the installed command-line interface itself.  Every check
is exact; runtime ceilings are asserted as stated.
"""

import json
import subprocess
import sys
import time
from importlib import resources

import pytest

from courant_vpa.fileformat import parse, print_file
from courant_vpa.selftest import CRITERIA, run_criterion

TIME_LIMITS = {1: 1.0, 2: 1.0, 3: 10.0, 4: 30.0, 5: 5.0, 6: 30.0, 7: 30.0}


@pytest.mark.parametrize("number,name", [(n, name) for n, name, _ in CRITERIA])
def test_criterion(number, name, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print()
        print(result.line())
    assert result.passed, result.detail
    assert result.seconds < TIME_LIMITS[number], (
        "criterion %d took %.2f s, limit %.1f s" % (number, result.seconds, TIME_LIMITS[number])
    )


def _fixture(name: str) -> str:
    return str(resources.files("courant_vpa") / "fixtures" / name)


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "courant_vpa", *argv],
        capture_output=True, text=True, timeout=300,
    )


def test_criterion_8_cli_contract(capsys):
    t0 = time.perf_counter()
    st = _cli("selftest", "--json")
    assert st.returncode == 0, st.stdout + st.stderr
    doc = json.loads(st.stdout)
    assert doc["passed"] is True
    assert [c["number"] for c in doc["criteria"]] == [1, 2, 3, 4, 5, 6, 7]
    assert all(c["passed"] for c in doc["criteria"])

    broken = _cli("check", "courant", _fixture("broken.cvpa"))
    assert broken.returncode == 1
    assert "c5" in broken.stdout

    for name in ("sl2.cvpa", "exact2.cvpa", "trivial2.cvpa", "heisenberg.cvpa", "broken.cvpa"):
        text = open(_fixture(name)).read()
        assert print_file(parse(text)) == text, name

    rt = _cli("roundtrip", _fixture("sl2.cvpa"), "--max-degree", "3")
    assert rt.returncode == 0
    assert "A: 1/1 tables equal; B: 4/4 tables equal" in rt.stdout

    elapsed = time.perf_counter() - t0
    with capsys.disabled():
        print()
        print("criterion 8 [PASS] command-line contract (%.2f s): selftest exit 0;"
              " broken fixture exit 1 naming c5; fixtures are print/parse fixpoints" % elapsed)
    assert elapsed < 120.0
