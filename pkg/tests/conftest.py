import math
from fractions import Fraction

import pytest

SQRT2_20 = "1.41421356237309504880"
PHI_FRAC_19 = "0.6180339887498948482"


def totient_sieve(n: int) -> list[int]:
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:
            for m in range(p, n + 1, p):
                phi[m] -= phi[m] // p
    return phi


def brute_neighbors(x: Fraction, Q: int) -> tuple[Fraction, Fraction]:
    """Closest fractions with denominator < Q on each side of x, by scanning."""
    lo, hi = Fraction(0), Fraction(1)
    for q in range(1, Q):
        a = math.floor(x * q)
        if Fraction(a, q) < x:
            lo = max(lo, Fraction(a, q))
        if Fraction(a + 1, q) > x:
            hi = min(hi, Fraction(a + 1, q))
    return lo, hi


@pytest.fixture
def sqrt2():
    return SQRT2_20


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion, echoed in the summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def report(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(line)
        lines.append(line)
        assert passed, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
