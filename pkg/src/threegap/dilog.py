"""Real dilogarithm Li2(x) = sum_{n>=1} x^n / n^2."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["DilogValue", "li2", "li2_value"]

PI2_6 = math.pi**2 / 6.0

# Bernoulli-number coefficients B_{2n}/(2n+1)! for the series
#   Li2(x) = sum_{n>=0} B_n u^{n+1}/(n+1)!,  u = -log(1 - x)
# which converges for |u| < 2 pi and is fast on |x| <= 1/2.
_B = [
    1.0, -0.25, 1.0 / 36, -1.0 / 3600, 1.0 / 211680, -1.0 / 10886400,
    1.0 / 526901760, -4.064761645144226e-11, 8.921691020456453e-13,
    -1.993929586072108e-14, 4.518980029619918e-16, -1.035651761218125e-17,
    2.395218621026186e-19, -5.581785874325962e-21, 1.309150755418321e-22,
]


@dataclass(frozen=True)
class DilogValue:
    """Li2 at a real argument; ``continued`` marks the real part taken for x > 1."""

    value: float
    argument: float
    continued: bool = False


def _li2_small(x: float) -> float:
    # |x| <= 1/2
    u = -math.log1p(-x)
    u2 = u * u
    s = _B[0] * u + _B[1] * u2
    p = u
    for n in range(2, len(_B)):
        p *= u2
        s += _B[n] * p
    return s


def li2(x: float) -> float:
    """Li2 for real x; for x > 1 the real part of the principal branch."""
    x = float(x)
    if math.isnan(x):
        raise ValueError("Li2 of NaN")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return PI2_6
    if x == -1.0:
        return -PI2_6 / 2
    if x > 2.0:
        # inversion: Re Li2(x) = pi^2/3 - log^2(x)/2 - Li2(1/x)
        lx = math.log(x)
        return 2 * PI2_6 - 0.5 * lx * lx - li2(1.0 / x)
    if x > 1.0:
        # Re Li2(x) = pi^2/6 - log(x) log(x - 1) - Li2(1 - x) ... via 1 - x in (-1, 0)
        return PI2_6 - math.log(x) * math.log(x - 1.0) - li2(1.0 - x)
    if x > 0.5:
        return PI2_6 - math.log(x) * math.log1p(-x) - _li2_small(1.0 - x)
    if x >= -0.5:
        return _li2_small(x)
    if x >= -1.0:
        # Landen: Li2(x) = -Li2(x/(x-1)) - log^2(1-x)/2, x/(x-1) in (1/3, 1/2]
        l1 = math.log1p(-x)
        return -_li2_small(x / (x - 1.0)) - 0.5 * l1 * l1
    # x < -1: Li2(x) = -pi^2/6 - log^2(-x)/2 - Li2(1/x)
    lx = math.log(-x)
    return -PI2_6 - 0.5 * lx * lx - li2(1.0 / x)


def li2_value(x: float) -> DilogValue:
    return DilogValue(li2(x), float(x), continued=float(x) > 1.0)
