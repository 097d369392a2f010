"""Runs every acceptance criterion and prints one pass/fail line each (use -s to see them live)."""
import pytest

from etrforge.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, record_property):
    result = run_criterion(number, seed=0)
    print(result.line())
    record_property("result", result.line())
    assert result.passed, result.line()
