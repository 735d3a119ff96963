"""The seventeen acceptance criteria, one test each.

Each test prints its one-line verdict (visible in ``pytest -v`` output even
with capture on).  Running this file directly prints the same lines:

    python3 tests/test_acceptance.py
"""

import sys

import pytest

from ringdensity import acceptance


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    res = acceptance.run_criterion(number)
    with capsys.disabled():
        print("\n" + acceptance.format_line(res))
    assert res.passed, res.detail


if __name__ == "__main__":
    results = acceptance.run_all(on_result=lambda r: print(acceptance.format_line(r), flush=True))
    sys.exit(0 if all(r.passed for r in results) else 1)
