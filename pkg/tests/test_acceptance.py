"""One test per acceptance criterion; each prints a PASS/FAIL line (run with -s to see them)."""

from __future__ import annotations

import pytest

from alphadim.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number)
    print(res.line())
    for check in res.checks:
        if not check.ok:
            print("   ", check.line())
    assert res.passed, res.line()
