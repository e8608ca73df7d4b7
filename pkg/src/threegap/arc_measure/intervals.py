"""Gap-word frequencies and threshold intervals on the triangle T.

Coordinates: x = q1/Q, y = q2/Q with (x, y) in T = {x <= 1, y <= 1, x+y >= 1}.
The sorted position sigma/Q of a point is a number s in [0, 1); the gap to
its right has type

    A  if s in [0, 1-x)   and the next position is s + x
    C  if s in [1-x, y)   and the next position is s + x - y
    B  if s in [y, 1)     and the next position is s - y

so a word g1...gk occurs at exactly those s lying in an intersection of k
translated intervals, all with endpoints affine in (x, y).

On an arc, alpha = a1/q1 + t/(q1 q2) with t in [0, 1].  A gap exceeds
lambda/Q on a t-interval (the "chi" interval) that depends on (x, y, lambda)
only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "SYMBOLS",
    "UnitInterval1D",
    "chi_interval",
    "word_intervals",
    "gap_word_frequency",
    "all_words",
    "in_triangle",
    "WordTable",
    "word_term",
]

SYMBOLS = "ABC"
INF = math.inf

# affine forms c0 + cx*x + cy*y stored as integer triples
_SYMBOL_RANGE = {
    "A": ((0, 0, 0), (1, -1, 0)),
    "C": ((1, -1, 0), (0, 0, 1)),
    "B": ((0, 0, 1), (1, 0, 0)),
}
_SYMBOL_STEP = {"A": (0, 1, 0), "C": (0, 1, -1), "B": (0, 0, -1)}


@dataclass(frozen=True)
class UnitInterval1D:
    """An interval of the real line, measured only inside [0, 1]."""

    lower: object = -INF
    upper: object = INF

    @property
    def measure(self):
        lo = max(self.lower, 0)
        hi = min(self.upper, 1)
        return hi - lo if hi > lo else 0

    def __and__(self, other: UnitInterval1D) -> UnitInterval1D:
        return UnitInterval1D(max(self.lower, other.lower), min(self.upper, other.upper))


def in_triangle(x, y) -> bool:
    return 0 < x <= 1 and 0 < y <= 1 and x + y >= 1


def chi_interval(symbol: str, x, y, lam) -> UnitInterval1D:
    """t-range on which a gap of type ``symbol`` is at least lam/Q."""
    if lam < 0:
        raise ValueError(f"threshold must be non-negative, got {lam}")
    if symbol == "A":
        return UnitInterval1D(lam * y, INF)
    if symbol == "B":
        return UnitInterval1D(-INF, 1 - lam * x)
    if symbol == "C":
        if x == y:
            raise ValueError("chi_C is undefined on the diagonal x = y")
        edge = y * (lam * x - 1) / (x - y)
        return UnitInterval1D(edge, INF) if y < x else UnitInterval1D(-INF, edge)
    raise ValueError(f"unknown gap symbol {symbol!r}")


def _chi_interval_total(symbol: str, x, y, lam) -> UnitInterval1D:
    # chi_interval extended to x = y by integrating the C condition directly
    if symbol == "C" and x == y:
        return UnitInterval1D(-INF, INF) if lam * x <= 1 else UnitInterval1D(INF, -INF)
    return chi_interval(symbol, x, y, lam)


@lru_cache(maxsize=None)
def word_intervals(word: str) -> tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]:
    """Affine (lower, upper) bounds on s for each letter of ``word``."""
    if not word or any(ch not in SYMBOLS for ch in word):
        raise ValueError(f"not a gap word: {word!r}")
    offset = (0, 0, 0)
    out = []
    for ch in word:
        lo, hi = _SYMBOL_RANGE[ch]
        out.append((tuple(a - b for a, b in zip(lo, offset)),
                    tuple(a - b for a, b in zip(hi, offset))))
        offset = tuple(a + b for a, b in zip(offset, _SYMBOL_STEP[ch]))
    return tuple(out)


def _affine(c, x, y):
    return c[0] + c[1] * x + c[2] * y


def gap_word_frequency(word: str, x, y):
    """Fraction of the Q positions at which ``word`` starts, as a function on T.

    Exact when x and y are Fractions: at (q1/Q, q2/Q) it equals the count
    of occurrences divided by Q.
    """
    if not in_triangle(x, y):
        raise ValueError(f"({x}, {y}) is outside the triangle T")
    lo = max(_affine(c, x, y) for c, _ in word_intervals(word))
    hi = min(_affine(c, x, y) for _, c in word_intervals(word))
    return hi - lo if hi > lo else 0


@lru_cache(maxsize=None)
def all_words(k: int) -> tuple[str, ...]:
    if k < 1:
        raise ValueError(f"word length must be positive, got {k}")
    return tuple("".join(w) for w in itertools.product(SYMBOLS, repeat=k))


def word_term(word: str, x, y, lambdas):
    """f_word(x, y) times the measure of the joint threshold interval (scalar path)."""
    f = gap_word_frequency(word, x, y)
    if f == 0:
        return 0
    iv = UnitInterval1D()
    for ch, lam in zip(word, lambdas):
        iv = iv & _chi_interval_total(ch, x, y, lam)
    return f * iv.measure


class WordTable:
    """Vectorised evaluation of sum_w f_w(x, y) * ||chi_w(x, y, lambdas)||."""

    def __init__(self, k: int):
        self.k = k
        self.words = all_words(k)
        self.lo = np.array([[c for c, _ in word_intervals(w)] for w in self.words], dtype=float)
        self.hi = np.array([[c for _, c in word_intervals(w)] for w in self.words], dtype=float)
        self.codes = np.array([[SYMBOLS.index(ch) for ch in w] for w in self.words], dtype=np.intp)

    def frequencies(self, x, y) -> np.ndarray:
        """f_w at arrays x, y; shape (n_words,) + x.shape."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        lo = self.lo[..., 0, None] + self.lo[..., 1, None] * x.ravel() + self.lo[..., 2, None] * y.ravel()
        hi = self.hi[..., 0, None] + self.hi[..., 1, None] * x.ravel() + self.hi[..., 2, None] * y.ravel()
        f = np.clip(hi.min(axis=1) - lo.max(axis=1), 0.0, None)
        return f.reshape((len(self.words),) + x.shape)

    def chi_bounds(self, x, y, lambdas) -> tuple[np.ndarray, np.ndarray]:
        """Clipped t-bounds per (position, symbol); shapes (k, 3, n)."""
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        k = self.k
        lo = np.zeros((k, 3, x.size))
        hi = np.ones((k, 3, x.size))
        below = y < x
        above = y > x
        diag = ~(below | above)
        with np.errstate(divide="ignore", invalid="ignore"):
            for i, lam in enumerate(lambdas):
                lo[i, 0] = np.maximum(lam * y, 0.0)
                hi[i, 1] = np.minimum(1.0 - lam * x, 1.0)
                edge = y * (lam * x - 1.0) / (x - y)
                lo[i, 2] = np.where(below, np.maximum(edge, 0.0), 0.0)
                hi[i, 2] = np.where(above, np.minimum(edge, 1.0), 1.0)
                if diag.any():
                    hi[i, 2] = np.where(diag & (lam * x > 1.0), 0.0, hi[i, 2])
        return lo, hi

    def density(self, x, y, lambdas) -> np.ndarray:
        """sum_w f_w * ||chi|| at arrays x, y (same shape)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if len(lambdas) != self.k:
            raise ValueError(f"expected {self.k} thresholds, got {len(lambdas)}")
        f = self.frequencies(x, y).reshape(len(self.words), -1)
        return self.density_given(f, x, y, lambdas)

    def density_given(self, f: np.ndarray, x, y, lambdas) -> np.ndarray:
        """density() with the word frequencies f (n_words, n) precomputed."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        clo, chi = self.chi_bounds(x, y, lambdas)
        pos = np.arange(self.k)
        # (n_words, k, n)
        wlo = clo[pos, self.codes]
        whi = chi[pos, self.codes]
        m = np.clip(whi.min(axis=1) - wlo.max(axis=1), 0.0, None)
        return (f * m).sum(axis=0).reshape(x.shape)

