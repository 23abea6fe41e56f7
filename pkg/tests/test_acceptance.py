"""Acceptance gate: one test per exit criterion.

Each test runs the shared implementation from ``aztec.acceptance`` and
prints its PASS/FAIL line (``pytest -s`` to watch them stream).  These
are the same checks as ``aztec verify``.
"""

import pytest

from aztec import acceptance

_BY_NUMBER = {num: (name, fn) for num, name, fn in acceptance.CRITERIA}


def _run(number):
    results = acceptance.run_criteria([number], report=print)
    result = results[0]
    assert result.passed, result.detail
    return result


@pytest.mark.parametrize(
    "number",
    [num for num, _, _ in acceptance.CRITERIA],
    ids=[f"c{num:02d}_{name.replace(' ', '_')}" for num, name, _ in acceptance.CRITERIA],
)
def test_criterion(number):
    _run(number)


def test_suites_cover_all_criteria():
    covered = sorted(set().union(*(v for k, v in acceptance.SUITES.items() if k != "all")))
    assert covered == acceptance.SUITES["all"]
