"""Exact Farey-fraction arithmetic.

Throughout, the Farey fractions "of order Q" are the reduced fractions
a/q in [0, 1] with denominator q strictly less than Q.  Consecutive pairs
a1/q1 < a2/q2 of that set are the arcs over which gap statistics are
averaged.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from math import gcd
from typing import Iterator

import numpy as np

__all__ = [
    "FareyError",
    "DegenerateAlphaError",
    "PrecisionError",
    "FareyFraction",
    "FareyPair",
    "AlphaValue",
    "make_fraction",
    "parse_alpha",
    "parse_rational",
    "farey_neighbors",
    "next_farey",
    "enumerate_farey_arcs",
    "farey_arc_arrays",
    "farey_sequence",
]


class FareyError(ValueError):
    """Invalid input to a Farey operation."""


class DegenerateAlphaError(FareyError):
    """alpha coincides with a Farey fraction of denominator < Q."""


class PrecisionError(FareyError):
    """alpha is not known precisely enough to separate Farey neighbours."""


@dataclass(frozen=True, order=False)
class FareyFraction:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise FareyError(f"denominator must be positive, got {self.denominator}")
        if not 0 <= self.numerator <= self.denominator:
            raise FareyError(f"{self.numerator}/{self.denominator} is outside [0, 1]")
        if gcd(self.numerator, self.denominator) != 1:
            raise FareyError(f"{self.numerator}/{self.denominator} is not reduced")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __lt__(self, other: FareyFraction) -> bool:
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __le__(self, other: FareyFraction) -> bool:
        return self.numerator * other.denominator <= other.numerator * self.denominator

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class FareyPair:
    """Two consecutive Farey fractions of order ``order``."""

    left: FareyFraction
    right: FareyFraction
    order: int

    def __post_init__(self):
        a1, q1 = self.left.numerator, self.left.denominator
        a2, q2 = self.right.numerator, self.right.denominator
        if a2 * q1 - a1 * q2 != 1:
            raise FareyError(f"{self.left}, {self.right} are not unimodular neighbours")
        if not (q1 < self.order and q2 < self.order and q1 + q2 >= self.order):
            raise FareyError(f"{self.left}, {self.right} are not consecutive of order {self.order}")

    @property
    def a1(self) -> int:
        return self.left.numerator

    @property
    def q1(self) -> int:
        return self.left.denominator

    @property
    def a2(self) -> int:
        return self.right.numerator

    @property
    def q2(self) -> int:
        return self.right.denominator

    @property
    def length(self) -> Fraction:
        return Fraction(1, self.q1 * self.q2)

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


@dataclass(frozen=True)
class AlphaValue:
    """A real alpha in (0, 1), held as an exact rational.

    ``precision`` is the denominator scale to which the value is known:
    ``None`` means the rational is exact; a decimal string with d fractional
    digits gives ``10**d``.
    """

    value: Fraction
    precision: int | None = None

    def __post_init__(self):
        if not 0 < self.value < 1:
            raise FareyError(f"alpha must lie strictly inside (0, 1) after reduction, got {self.value}")

    @classmethod
    def exact(cls, value) -> AlphaValue:
        v = Fraction(value)
        return cls(v - (v.numerator // v.denominator))

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def resolves(self, Q: int) -> bool:
        """True when the value separates all Farey fractions of order Q."""
        return self.precision is None or self.precision > Q * Q

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return str(float(self.value)) if self.precision else str(self.value)


def make_fraction(numerator: int, denominator: int) -> FareyFraction:
    if denominator == 0:
        raise FareyError("zero denominator")
    if denominator < 0 or not 0 <= numerator <= denominator:
        raise FareyError(f"{numerator}/{denominator} is outside [0, 1]")
    g = gcd(numerator, denominator)
    return FareyFraction(numerator // g, denominator // g)


def parse_alpha(text: str) -> AlphaValue:
    """Parse a decimal string (``"1.4142..."``) or a rational ``"p/q"``.

    Decimal input is reduced modulo 1 and remembers how many digits were
    supplied; rational input is treated as exact.
    """
    text = text.strip()
    if "/" in text:
        try:
            return AlphaValue.exact(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise FareyError(f"cannot parse alpha {text!r}") from exc
    try:
        dec = Decimal(text)
    except InvalidOperation as exc:
        raise FareyError(f"cannot parse alpha {text!r}") from exc
    if not dec.is_finite():
        raise FareyError(f"alpha must be finite, got {text!r}")
    exponent = dec.as_tuple().exponent
    digits = max(0, -exponent)
    v = Fraction(dec)
    v -= v.numerator // v.denominator
    return AlphaValue(v, 10**digits)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, an integer or a finite decimal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FareyError(f"cannot parse rational {text!r}") from exc


def _as_alpha(alpha) -> AlphaValue:
    if isinstance(alpha, AlphaValue):
        return alpha
    if isinstance(alpha, str):
        return parse_alpha(alpha)
    if isinstance(alpha, float):
        raise FareyError("pass alpha as a string or an exact rational, not a float")
    return AlphaValue.exact(alpha)


def farey_neighbors(alpha, Q: int) -> FareyPair:
    """Consecutive Farey fractions a1/q1 < alpha < a2/q2 with q1, q2 < Q.

    Walks the Stern-Brocot tree by continued-fraction blocks, so the cost is
    logarithmic in Q.
    """
    if Q < 2:
        raise FareyError(f"Q must be at least 2, got {Q}")
    alpha = _as_alpha(alpha)
    x = alpha.value
    p, r = x.numerator, x.denominator
    if r < Q:
        raise DegenerateAlphaError(
            f"alpha = {x} is a Farey fraction of denominator {r} < Q = {Q}")
    if not alpha.resolves(Q):
        raise PrecisionError(
            f"alpha given to precision 1/{alpha.precision}, need better than 1/Q^2 = 1/{Q * Q}")
    n = Q - 1
    # left = a/b, right = c/d, always unimodular and bracketing x strictly
    a, b, c, d = 0, 1, 1, 1
    while True:
        # mediant steps towards the side x lies on, taken in bulk
        if p * (b + d) < r * (a + c):
            # x < mediant: move right endpoint left, right <- (c + j a)/(d + j b)
            # largest j with (c + j a)/(d + j b) > x, limited by d + j b <= n
            num, den = r * c - p * d, p * b - r * a
            j = (num - 1) // den
            j = min(j, (n - d) // b)
            if j <= 0:
                break
            c, d = c + j * a, d + j * b
        else:
            num, den = p * b - r * a, r * c - p * d
            j = (num - 1) // den
            j = min(j, (n - b) // d)
            if j <= 0:
                break
            a, b = a + j * c, b + j * d
    return FareyPair(FareyFraction(a, b), FareyFraction(c, d), Q)


def next_farey(current: FareyFraction, previous: FareyFraction, Q: int) -> FareyFraction:
    """Successor of ``current`` in the Farey sequence of order Q."""
    if current.numerator == current.denominator:
        raise FareyError("1/1 has no successor")
    a, b = previous.numerator, previous.denominator
    c, d = current.numerator, current.denominator
    if c * b - a * d != 1 or b >= Q or d >= Q or b + d < Q:
        raise FareyError(f"{previous}, {current} are not consecutive of order {Q}")
    j = (Q - 1 + b) // d
    return FareyFraction(j * c - a, j * d - b)


def _successor(p: int, r: int, n: int) -> tuple[int, int]:
    """Right neighbour of p/r among reduced fractions with denominator <= n."""
    if r == 1:
        return 1, n
    d = (-pow(p, -1, r)) % r
    d += ((n - d) // r) * r
    return (1 + p * d) // r, d


def enumerate_farey_arcs(beta, eta, Q: int) -> Iterator[FareyPair]:
    """Consecutive pairs of order Q lying inside [beta, beta + eta], in order.

    Pairs straddling either endpoint are skipped.
    """
    for a1, q1, a2, q2 in _arc_tuples(beta, eta, Q):
        yield FareyPair(FareyFraction(a1, q1), FareyFraction(a2, q2), Q)


def _check_interval(beta, eta, Q):
    beta, eta = Fraction(beta), Fraction(eta)
    if Q < 2:
        raise FareyError(f"Q must be at least 2, got {Q}")
    if eta <= 0:
        raise FareyError(f"eta must be positive, got {eta}")
    if not (0 <= beta < 1 and beta + eta <= 1):
        raise FareyError(f"[{beta}, {beta + eta}] is not inside [0, 1]")
    return beta, eta


def _arc_tuples(beta, eta, Q: int) -> Iterator[tuple[int, int, int, int]]:
    beta, eta = _check_interval(beta, eta, Q)
    end = beta + eta
    e_num, e_den = end.numerator, end.denominator
    n = Q - 1
    if beta.denominator <= n:
        a, b = beta.numerator, beta.denominator
    else:
        # the arc around beta straddles it; start from its right end
        pair = farey_neighbors(AlphaValue.exact(beta), Q)
        a, b = pair.a2, pair.q2
    if a == b:
        return
    c, d = _successor(a, b, n)
    if e_num == e_den:
        # window runs to 1: the walk stops at 1/1 without end-point checks
        while True:
            yield a, b, c, d
            if c == d:
                return
            j = (n + b) // d
            a, b, c, d = c, d, j * c - a, j * d - b
    while c * e_den <= e_num * d:
        yield a, b, c, d
        if c == d:
            return
        j = (n + b) // d
        a, b, c, d = c, d, j * c - a, j * d - b


def farey_arc_arrays(beta, eta, Q: int) -> tuple[np.ndarray, np.ndarray]:
    """Denominator arrays (q1, q2) of every arc enumerated over [beta, beta+eta].

    Only the denominators matter for gap statistics, so the numerators are
    dropped.  Falls back to object arrays when Q*Q would overflow int64.
    """
    dtype = np.int64 if Q < 2**31 else object
    q1s: list[int] = []
    q2s: list[int] = []
    push1, push2 = q1s.append, q2s.append
    for _, q1, _, q2 in _arc_tuples(beta, eta, Q):
        push1(q1)
        push2(q2)
    return np.array(q1s, dtype=dtype), np.array(q2s, dtype=dtype)


def farey_sequence(Q: int) -> tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators of all fractions of order Q in [0, 1], in order.

    Consecutive entries are the arcs of order Q; cheaper than the arc
    enumeration when every arc of the circle is wanted.
    """
    if Q < 2:
        raise FareyError(f"Q must be at least 2, got {Q}")
    n = Q - 1
    a, b, c, d = 0, 1, 1, n
    num, den = [0, 1], [1, n]
    push_num, push_den = num.append, den.append
    while c != d:
        j = (n + b) // d
        a, b, c, d = c, d, j * c - a, j * d - b
        push_num(c)
        push_den(d)
    return np.array(num, dtype=np.int64), np.array(den, dtype=np.int64)
