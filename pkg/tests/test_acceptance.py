"""Exit criteria, one test each, with a PASS/FAIL line printed per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import time

import pytest

from symtoep import acceptance

_START = time.perf_counter()


def _report(label, ok, detail):
    print(f"\n{'PASS' if ok else 'FAIL'}  {label}: {detail}")


@pytest.mark.slow
@pytest.mark.parametrize("label,fn,sized", acceptance.CRITERIA, ids=[c[0] for c in acceptance.CRITERIA])
def test_criterion(label, fn, sized):
    ok, detail = fn()
    _report(label, ok, detail)
    assert ok, detail


@pytest.mark.slow
def test_criterion_10_runtime():
    # runs after the nine criteria above, so this times the whole module
    ok, detail = acceptance.criterion_runtime(time.perf_counter() - _START)
    _report("10 end-to-end runtime", ok, detail)
    assert ok, detail
