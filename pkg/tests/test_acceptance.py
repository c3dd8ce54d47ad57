"""The eight acceptance criteria, one test each; a pass/fail line is printed per criterion."""

import pytest

from gl1harmonic.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, *_ in CRITERIA], ids=[f"criterion_{n}" for n, *_ in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line)
    assert res.runtime < res.limit, f"runtime {res.runtime:.2f}s over the {res.limit:.0f}s budget"
    assert res.passed, res.line
