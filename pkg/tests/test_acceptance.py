"""One test per acceptance criterion; every check is exact (tolerance 0)."""
import pytest

from phl.acceptance import CRITERIA, run_criterion

import conftest


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = run_criterion(number)
    line = result.line()
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    for c in result.checks:
        print(f"    [{'ok' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
    assert result.passed, line
