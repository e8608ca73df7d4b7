"""Closed-form limiting gap distributions g1(lambda) and g2(lambda1, lambda2).

g1(lambda) is the limiting proportion of gaps at least lambda times the mean
gap 1/Q, averaged over alpha; g2 is the same for two consecutive gaps with
separate thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, log, pi
from typing import Iterable

from .dilog import li2

__all__ = [
    "SIX_OVER_PI2",
    "LambdaVector",
    "RegionLabel",
    "REGION_TAGS",
    "g1",
    "g1_piece_A",
    "g1_piece_C",
    "g1_density",
    "g1_derivative",
    "classify_region",
    "g2",
    "g2_region_formula",
]

SIX_OVER_PI2 = 6.0 / pi**2
LOG2 = log(2.0)


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam >= 0.0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return lam


def _g1_middle(lam: float) -> float:
    # 1 < lam < 2
    return (LOG2**2 - 2 * pi**2 / 3 - 1
            + (lam / 2 - 2 / lam) * log((2 - lam) / (lam - 1))
            + 1.5 * lam * log(lam / (lam - 1))
            - log(4 / lam) * log(lam)
            + 4 * li2(1 / lam) + 2 * li2(lam / 2))


def _g1_tail(lam: float) -> float:
    # lam > 2
    return (-1 + (lam / 2 - 2 / lam) * log((lam - 2) / (lam - 1))
            + 1.5 * lam * log(lam / (lam - 1))
            + 4 * li2(1 / lam) - 2 * li2(2 / lam))


def g1(lam: float) -> float:
    """Limiting proportion of gaps >= lam/Q."""
    lam = _check_lambda(lam)
    if lam <= 1.0:
        return 1.0 - SIX_OVER_PI2 * lam
    if lam < 2.0:
        return SIX_OVER_PI2 * _g1_middle(lam)
    if lam == 2.0:
        return 2.0 * (g1_piece_A(2.0) + g1_piece_C(2.0))
    return SIX_OVER_PI2 * _g1_tail(lam)


def g1_piece_A(lam: float) -> float:
    """Contribution of the A gaps (equal to that of the B gaps) to g1."""
    lam = _check_lambda(lam)
    if lam <= 1.0:
        return SIX_OVER_PI2 * (pi**2 / 6 - 1 - lam / 2)
    return SIX_OVER_PI2 * (-1 - 1 / (2 * lam) + (1 - lam) * log(1 - 1 / lam) + li2(1 / lam))


def g1_piece_C(lam: float) -> float:
    """Half the contribution of the C gaps to g1 (the q2 < q1 half)."""
    lam = _check_lambda(lam)
    if lam <= 1.0:
        return SIX_OVER_PI2 * (1 - pi**2 / 12)
    if lam < 2.0:
        return SIX_OVER_PI2 * (
            0.5 - pi**2 / 3 + LOG2**2 / 2 + 1 / (2 * lam)
            + _log_near_two(lam)
            - log((lam - 1) / lam)
            + 0.5 * log(lam / 4) * log(lam)
            + li2(1 / lam) + li2(lam / 2))
    if lam == 2.0:
        return SIX_OVER_PI2 * (0.75 - pi**2 / 12 - LOG2**2 / 2 + LOG2 / 2)
    return SIX_OVER_PI2 * (
        0.5 + 1 / (2 * lam) + _log_near_two(lam)
        - log(1 - 1 / lam)
        + li2(1 / lam) - li2(2 / lam))


def _log_near_two(lam: float) -> float:
    # lam/4 log|2/lam - 1| + log((lam-1)/|2-lam|)/lam, with the log|2-lam| terms merged
    # so that the coefficient (lam-2)(lam+2)/(4 lam) stays exact as lam -> 2
    d = lam - 2.0
    return d * (lam + 2) / (4 * lam) * log(abs(d)) - lam / 4 * log(lam) + log(lam - 1) / lam


def g1_density(x: float) -> float:
    """-g1'(1/x): the integrand in g1(lam) = int_0^{1/lam} -g1'(1/x) dx / x^2."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if x >= 1.0:
        return SIX_OVER_PI2
    # log(|1-x|^(2(1-x)^2) / |1-2x|^((1-2x)^2/2)); the second term vanishes at x = 1/2
    t = 2 * (1 - x) ** 2 * log(1 - x)
    if x != 0.5:
        t -= 0.5 * (1 - 2 * x) ** 2 * log(abs(1 - 2 * x))
    return SIX_OVER_PI2 * (x + t)


def g1_derivative(lam: float) -> float:
    """g1'(lam) for lam > 0."""
    lam = _check_lambda(lam)
    if lam == 0.0:
        return -SIX_OVER_PI2
    return -g1_density(1.0 / lam)


@dataclass(frozen=True)
class LambdaVector:
    """Thresholds (lambda_1, ..., lambda_k), k >= 1, all non-negative."""

    components: tuple[float, ...]

    def __post_init__(self) -> None:
        comps = tuple(float(c) for c in self.components)
        if not comps:
            raise ValueError("need at least one threshold")
        for c in comps:
            if not c >= 0.0:
                raise ValueError(f"thresholds must be non-negative, got {c}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, values: Iterable[float] | float) -> "LambdaVector":
        if isinstance(values, LambdaVector):
            return values
        if isinstance(values, (int, float)):
            return cls((values,))
        return cls(tuple(values))

    @property
    def k(self) -> int:
        return len(self.components)

    def reversed(self) -> "LambdaVector":
        return LambdaVector(self.components[::-1])

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


# ---------------------------------------------------------------------------
# g2 on the regions of the (lambda1, lambda2) quadrant.
#
# With a = lambda1 >= b = lambda2 the unprimed regions are
#   A: a + b < 1            B: a + b > 1, a < 1
#   C: a > 1, a + b < 2     D: a + b > 2, a < 2, b < 1
#   E: 1 < b, a < 2         F: a > 2, b < 1
#   G: a > 2, b > 1
# and the primed regions are their mirror images in the diagonal.

REGION_TAGS = ("A", "B", "C", "D", "E", "F", "G")
_BOUNDARY_EPS = 1e-9
_NUDGE = 4e-9
# below this the 1/lambda2 terms of several formulas cancel badly
_SMALL_LAMBDA2 = 1e-5


@dataclass(frozen=True)
class RegionLabel:
    tag: str

    def __post_init__(self) -> None:
        base = self.tag.rstrip("'")
        if self.tag != "boundary" and (base not in REGION_TAGS or len(self.tag) > 2):
            raise ValueError(f"unknown region tag {self.tag!r}")

    @property
    def is_boundary(self) -> bool:
        return self.tag == "boundary"

    @property
    def primed(self) -> bool:
        return self.tag.endswith("'")

    @property
    def base(self) -> str:
        return self.tag.rstrip("'")

    def mirror(self) -> "RegionLabel":
        if self.is_boundary:
            return self
        return RegionLabel(self.base if self.primed else self.base + "'")

    def __str__(self) -> str:
        return self.tag


def _base_region(a: float, b: float) -> str:
    # a >= b >= 0
    if a + b < 1:
        return "A"
    if a < 1:
        return "B"
    if a + b < 2:
        return "C"
    if a < 2:
        return "E" if b > 1 else "D"
    return "G" if b > 1 else "F"


def _nearby_regions(a: float, b: float) -> set[str]:
    # unprimed regions met within the boundary tolerance of (a, b); the
    # diagonal only separates a region from its own mirror image
    e = _BOUNDARY_EPS
    out = set()
    for da in (-e, 0.0, e):
        for db in (-e, 0.0, e):
            p, r = a + da, b + db
            if p >= 0.0 and r >= 0.0:
                out.add(_base_region(max(p, r), min(p, r)))
    return out


def classify_region(lambda1: float, lambda2: float) -> RegionLabel:
    """Region of the g2 partition containing (lambda1, lambda2).

    Points within 1e-9 of a line separating two regions, or of the edges
    lambda1 = 0 and lambda2 = 0 of the quadrant, are tagged "boundary".
    Points on the diagonal get the unprimed tag.
    """
    a, b = _check_lambda(lambda1), _check_lambda(lambda2)
    if min(a, b) < _BOUNDARY_EPS:
        return RegionLabel("boundary")
    tags = _nearby_regions(a, b)
    if len(tags) > 1:
        return RegionLabel("boundary")
    tag = tags.pop()
    return RegionLabel(tag + "'" if b > a else tag)


def _g2_A(a: float, b: float) -> float:
    return pi**2 / 6 - a - b / 2


def _g2_B(a: float, b: float) -> float:
    return (pi**2 / 6 - 2 + a + 1.5 * b - 2 * li2(a) + 2 * li2(1 - b)
            + (1 / b + 1 / a) * log(a + b) + (1 / a - a) * log((1 - a) / b)
            + log((1 - b) / a) * (-b + 1 / b + 2 * log(b)))


def _g2_C(a: float, b: float) -> float:
    return (1.5 * b - pi**2 / 3 - 1 + LOG2**2
            + (2 / a - 2 * a) * log(a - 1) + (a / 2 - 2 / a) * log(2 - a)
            + (a / 2 - 2 / b) * log(a) + (1 / b + 1 / a) * log(a + b)
            + (a - b + 1 / b - 1 / a) * log(a - b)
            + log(a)**2 + (b - 2 * log(2 * b)) * log(a)
            + (2 * log(a - b) - 2 * log(1 - b)) * log(b)
            + 2 * li2(1 / a) + 2 * li2(a / 2) - 2 * li2(b)
            + 2 * li2((b - 1) / (b - a)) - 2 * li2(a * (b - 1) / (b - a)))


def _g2_D(a: float, b: float) -> float:
    return (-5 * pi**2 / 6 - a / 2 + b + (-a + b + 2 / a) * LOG2
            + (3 / a - 3 * a) * log(a - 1) + (2 / a - a / 2 - 2 * LOG2) * log(b)
            + (a - 4 / a) * log(2 - a) + 2 * (a - b + 1 / b - 1 / a) * log(a - b)
            + (a / 2 + b - 2 / b) * log(a) + (b - 1 / b) * log(1 - b)
            + log(a)**2 - 2 * log(2 - a + b) * log(a)
            + 2 * log(a - b) * log(b) + 2 * LOG2 * log(2 - a + b)
            + 4 * li2(1 / a) + 2 * li2(a / 2) + 2 * li2(1 - b) + 2 * li2(b)
            - 2 * li2(2 * b / (a * (2 - a + b))) + 2 * li2((b - 1) / (b - a))
            + 2 * li2(b / (2 - a + b)) - 2 * li2((2 - a + b) / 2)
            - 2 * li2((a - a * b) / (a - b)))


def _g2_E(a: float, b: float) -> float:
    return ((6 - 3 * a - 2 * pi**2) / 6 + (-a + b + 2 / a) * LOG2 - LOG2**2
            + log(a)**2 + (a / 2 - b + 1 / b - 2 / a + 2 * LOG2) * log(2 * b - a)
            + (1 / a - a) * log(a - 1) + (a / 2 - 2 / a) * log(2 - a)
            + (a / 2 - 1 / b) * log(a) + (b - 1 / b) * log(b - 1)
            + 2 * LOG2 * (log(2 - a + b) - log(1 - a + b))
            + log(b) * (-a / 2 + 2 / a - 2 * LOG2)
            + (2 * log(b) + 2 * log(1 - a + b)) * log(a)
            - (2 * log(2 - a + b) + 2 * log(2 * b - a)) * log(a)
            + 2 * li2(1 / a) + 2 * li2(a / 2)
            - 2 * li2((a - 2 * b) / (2 * (a - b - 1)))
            + 2 * li2((a - 2 * b) / (a * (a - b - 1)))
            - 2 * li2((a - b - 1) / (a - 2 * b))
            - 2 * li2(-2 * b / (a * (a - b - 2)))
            + 2 * li2((a - b - 1) * b / (a - 2 * b))
            + 2 * li2(b / (2 - a + b)) - 2 * li2((2 - a + b) / 2))


def _xlog_antiderivative(n: int, p: float, q: float, x: float) -> float:
    """An antiderivative of x**n * log|p x + q| for n in {-1, 0, 1, 2}, q != 0."""
    if n == -1:
        return log(abs(q)) * log(x) - li2(-p * x / q)
    u = p * x + q
    lu = log(abs(u)) if u != 0.0 else 0.0
    total = 0.0
    for m in range(n + 1):
        total += comb(n, m) * (-q) ** (n - m) * u ** (m + 1) * (lu / (m + 1) - 1 / (m + 1) ** 2)
    return total / p ** (n + 1)


def _laurent_log_integral(coeffs: dict[int, float], p: float, q: float,
                          lo: float, hi: float) -> float:
    """Integral over [lo, hi] of (sum c_n x^n) * log|p x + q|, 0 < lo < hi."""
    if abs(p) * hi < 0.05 * abs(q):
        # log(q + p x) = log|q| + log1p(z x), expanded as a series in z = p/q
        # to avoid dividing by a tiny p
        z = p / q
        total = 0.0
        for n, c in coeffs.items():
            if c == 0.0:
                continue
            s = log(abs(q)) * (log(hi / lo) if n == -1 else (hi ** (n + 1) - lo ** (n + 1)) / (n + 1))
            for j in range(1, 40):
                e = n + j + 1
                s += (-1) ** (j + 1) * z**j / j * (hi**e - lo**e) / e
            total += c * s
        return total
    return math.fsum(c * (_xlog_antiderivative(n, p, q, hi) - _xlog_antiderivative(n, p, q, lo))
                     for n, c in coeffs.items() if c != 0.0)


def _laurent_integral(coeffs: dict[int, float], lo: float, hi: float) -> float:
    return math.fsum(c * (log(hi / lo) if n == -1 else (hi ** (n + 1) - lo ** (n + 1)) / (n + 1))
                     for n, c in coeffs.items())


def _g2_F(a: float, b: float) -> float:
    """pi^2/6 g2 on a > 2, b < 1.

    Only the words AB, BA, CA and CB contribute here. AB and BA give equal
    amounts, as do CA and CB, so the value is 2 (I_A + I_CB) with
      I_A  = int (1-x)(1 - b x - a y)/(x y) over 1-x < y < (1-b x)/a,
      I_CB = int (x+y-1)(1 - b x - y(a x - 1)/(x - y))/(x y)
             over 1-x < y < (1-b x)/(a-b).
    After the y integration both are Laurent polynomials in x times logs of
    linear forms, integrated in closed form.
    """
    xa = (a - 1) / (a - b)
    x0 = (a - b - 1) / (a - 2 * b)
    # (1-x)(1-bx)/x and (2x-1)(ax-1)/x
    P = {-1: 1.0, 0: -(1 + b), 1: b}
    R = {-1: 1.0, 0: -(a + 2), 1: 2 * a}
    i_a = (_laurent_log_integral(P, -b, 1.0, xa, 1.0)
           - _laurent_log_integral(P, -1.0, 1.0, xa, 1.0)
           - log(a) * _laurent_integral(P, xa, 1.0)
           + _laurent_integral({-1: a - 1, 0: 1 - 2 * a + b, 1: a - b}, xa, 1.0))
    i_cb = (-_laurent_log_integral(P, -b, 1.0, x0, 1.0)
            + _laurent_log_integral(P, -1.0, 1.0, x0, 1.0)
            + _laurent_log_integral(R, a, -1.0, x0, 1.0)
            - _laurent_log_integral(R, 2.0, -1.0, x0, 1.0)
            + log(a - b) * _laurent_integral({0: 1 + a - b, 1: b - 2 * a}, x0, 1.0)
            + _laurent_integral({0: 1 - a + b, 1: a - 2 * b}, x0, 1.0))
    return 2 * (i_a + i_cb)


def _g2_G(a: float, b: float) -> float:
    return 0.0


_FORMULAS = {"A": _g2_A, "B": _g2_B, "C": _g2_C, "D": _g2_D,
             "E": _g2_E, "F": _g2_F, "G": _g2_G}


def g2_region_formula(tag: str, lambda1: float, lambda2: float) -> float:
    """Evaluate the g2 formula of region `tag` (primed tags swap arguments).

    No check is made that the point lies in the region.
    """
    label = RegionLabel(tag)
    if label.is_boundary:
        raise ValueError("boundary is not a region")
    a, b = float(lambda1), float(lambda2)
    if label.primed:
        a, b = b, a
    return SIX_OVER_PI2 * _FORMULAS[label.base](a, b)


def g2(lambda1: float, lambda2: float) -> float:
    """Limiting proportion of consecutive gap pairs (g, g') with g >= lambda1/Q, g' >= lambda2/Q."""
    a, b = _check_lambda(lambda1), _check_lambda(lambda2)
    if b > a:
        a, b = b, a
    if b == 0.0:
        return g1(a)
    if b < _SMALL_LAMBDA2:
        # g2(a, .) is smooth at 0 with g2(a, 0) = g1(a); interpolate linearly
        g0 = g1(a)
        return g0 + (b / _SMALL_LAMBDA2) * (_g2_positive(a, _SMALL_LAMBDA2) - g0)
    return _g2_positive(a, b)


def _g2_positive(a: float, b: float) -> float:
    # a >= b > 0
    tags = _nearby_regions(a, b)
    if len(tags) == 1:
        try:
            v = SIX_OVER_PI2 * _FORMULAS[tags.pop()](a, b)
        except (ValueError, ZeroDivisionError):
            # some formulas have removable singularities on the diagonal
            v = math.nan
        if math.isfinite(v):
            return min(1.0, max(0.0, v))
    # Near a boundary the formulas lose accuracy (log(0) times 0 and the like).
    # Average the neighbouring formulas a short step inside each region;
    # g2 is continuous, so the error is of order the step.
    h = _NUDGE
    values = []
    for da in (-h, h):
        for db in (-h, h):
            p, r = a + da, b + db
            if r < 0.0:
                continue
            if r > p:
                p, r = r, p
            tag = _base_region(p, r)
            if tag == "G":
                values.append(0.0)
            else:
                values.append(SIX_OVER_PI2 * _FORMULAS[tag](p, r))
    return min(1.0, max(0.0, math.fsum(values) / len(values)))
