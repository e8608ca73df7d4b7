"""Finite-Q averages g_k^{beta,eta}(lambda; Q) as sums over Farey arcs.

On the arc between consecutive fractions a1/q1 < a2/q2 of order Q write
alpha = a1/q1 + t/(q1 q2), t in [0, 1].  The gap pattern depends only on
(q1, q2), and each gap exceeds lambda/Q on a t-interval, so the arc adds

    sum_w f_w(q1/Q, q2/Q) * ||chi_w|| / (q1 q2)

to the integral over alpha.  Arcs cut by beta or beta + eta contribute the
part of their t-range inside the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from scipy.integrate import quad

from ..farey import (
    AlphaValue,
    FareyFraction,
    FareyPair,
    _arc_tuples,
    _check_interval,
    farey_arc_arrays,
    farey_neighbors,
)
from .intervals import (
    UnitInterval1D,
    WordTable,
    _chi_interval_total,
    all_words,
    gap_word_frequency,
    word_term,
)

__all__ = [
    "LAMBDA_DENOMINATOR",
    "ArcContribution",
    "quantize_lambda",
    "arc_contribution",
    "edge_arcs",
    "empirical_gk",
    "empirical_gk_grid",
    "TEST_FUNCTIONS",
    "lemma2_discrepancy",
]

LAMBDA_DENOMINATOR = 10**6


def quantize_lambda(lam) -> Fraction:
    """Round a threshold to the nearest multiple of 1e-6, as an exact Fraction."""
    q = Fraction(round(Fraction(lam) * LAMBDA_DENOMINATOR), LAMBDA_DENOMINATOR)
    if q < 0:
        raise ValueError(f"thresholds must be non-negative, got {lam}")
    return q


def _lambdas(lambdas) -> tuple:
    if isinstance(lambdas, (int, float, Fraction)):
        lambdas = (lambdas,)
    lambdas = tuple(lambdas)
    if not lambdas:
        raise ValueError("need at least one threshold")
    for lam in lambdas:
        if not lam >= 0:
            raise ValueError(f"thresholds must be non-negative, got {lam}")
    return lambdas


@dataclass(frozen=True)
class ArcContribution:
    pair: FareyPair
    value: Fraction | float
    t_range: tuple = (0, 1)


def arc_contribution(pair: FareyPair, Q: int, lambdas, t_range=(0, 1)) -> ArcContribution:
    """Integral over the arc of the proportion of k-tuples of consecutive gaps
    with the i-th gap >= lambda_i / Q.

    Exact when the thresholds are exact rationals; ``t_range`` restricts the
    arc to a sub-interval of t in [0, 1].
    """
    lambdas = _lambdas(lambdas)
    if pair.order != Q:
        raise ValueError(f"pair has order {pair.order}, not {Q}")
    exact = all(isinstance(lam, (int, Fraction)) for lam in lambdas)
    q1, q2 = pair.q1, pair.q2
    if exact:
        x, y = Fraction(q1, Q), Fraction(q2, Q)
    else:
        x, y = q1 / Q, q2 / Q
    window = UnitInterval1D(*t_range)
    total = 0
    for w in all_words(len(lambdas)):
        total += _word_term_window(w, x, y, lambdas, window)
    if exact:
        value = Fraction(total) / (q1 * q2)
    else:
        value = total / (q1 * q2)
    return ArcContribution(pair, value, tuple(t_range))


def _word_term_window(word, x, y, lambdas, window: UnitInterval1D):
    if window.lower <= 0 and window.upper >= 1:
        return word_term(word, x, y, lambdas)
    # word_term with the chi intersection further cut down to the window
    f = gap_word_frequency(word, x, y)
    if f == 0:
        return 0
    iv = window
    for ch, lam in zip(word, lambdas):
        iv = iv & _chi_interval_total(ch, x, y, lam)
    return f * iv.measure


def edge_arcs(beta, eta, Q: int) -> Iterator[tuple[FareyPair, tuple[Fraction, Fraction]]]:
    """Arcs cut by the window ends, with the t-range lying inside the window.

    These are exactly the arcs skipped by the Farey enumeration.
    """
    beta, eta = _check_interval(beta, eta, Q)
    end = beta + eta
    cut = {}
    for point in (beta, end):
        if point.denominator >= Q:
            pair = farey_neighbors(AlphaValue.exact(point), Q)
            cut.setdefault((pair.a1, pair.q1), [pair, Fraction(0), Fraction(1)])
            t = (point - pair.left.value) * pair.q1 * pair.q2
            cut[(pair.a1, pair.q1)][1 if point == beta else 2] = t
    for pair, lo, hi in cut.values():
        yield pair, (lo, hi)


def empirical_gk(beta, eta, Q: int, lambdas, exact: bool = False) -> float | Fraction:
    """(1/eta) * integral over alpha in [beta, beta+eta] of the proportion of
    the Q circular k-tuples of consecutive gaps of {n alpha} with the i-th
    gap at least lambda_i / Q.

    The float path is vectorised over arcs and summed with math.fsum in arc
    order, so it is bit-reproducible.  ``exact=True`` returns an exact
    Fraction (slow; meant for small Q); float thresholds are first quantized
    to multiples of 1e-6, int and Fraction thresholds are used as given.
    """
    lambdas = _lambdas(lambdas)
    beta, eta = _check_interval(beta, eta, Q)
    if exact:
        lams = tuple(lam if isinstance(lam, (int, Fraction)) else quantize_lambda(lam)
                     for lam in lambdas)
        total = Fraction(0)
        for a1, q1, a2, q2 in _arc_tuples(beta, eta, Q):
            pair = FareyPair(FareyFraction(a1, q1), FareyFraction(a2, q2), Q)
            total += arc_contribution(pair, Q, lams).value
        for pair, tr in edge_arcs(beta, eta, Q):
            total += arc_contribution(pair, Q, lams, tr).value
        return total / eta
    return empirical_gk_grid(beta, eta, Q, [lambdas])[0]


def empirical_gk_grid(beta, eta, Q: int, points) -> list[float]:
    """Float empirical_gk at each threshold tuple in ``points`` (same k),
    enumerating the arcs once."""
    beta, eta = _check_interval(beta, eta, Q)
    points = [tuple(float(lam) for lam in _lambdas(p)) for p in points]
    if len({len(p) for p in points}) > 1:
        raise ValueError("all threshold tuples must have the same length")
    q1, q2 = farey_arc_arrays(beta, eta, Q)
    edges = [(pair, (float(tr[0]), float(tr[1]))) for pair, tr in edge_arcs(beta, eta, Q)]
    arcs = _ArcBatch(q1, q2, Q, len(points[0])) if points else None
    out = []
    for lams in points:
        parts = [arcs.total(lams)]
        for pair, tr in edges:
            parts.append(float(arc_contribution(pair, Q, lams, tr).value))
        out.append(math.fsum(parts) / float(eta))
    return out


class _ArcBatch:
    """Whole arcs given by denominator arrays, with the lambda-free parts cached."""

    def __init__(self, q1: np.ndarray, q2: np.ndarray, Q: int, k: int):
        self.table = _table(k)
        q1f = np.asarray(q1, dtype=float)
        q2f = np.asarray(q2, dtype=float)
        self.x = q1f / Q
        self.y = q2f / Q
        self.weight = 1.0 / (q1f * q2f)
        if k == 1:
            # single gaps: f_A = 1-x, f_B = 1-y, f_C = x+y-1, weighted per arc
            self.fa = (1.0 - self.x) * self.weight
            self.fb = (1.0 - self.y) * self.weight
            self.fc = (self.x + self.y - 1.0) * self.weight
            self.below = self.y < self.x
            with np.errstate(divide="ignore", invalid="ignore"):
                self.ratio = self.y / (self.x - self.y)
        f = self.table.frequencies(self.x, self.y)
        # drop words that never occur on these arcs
        used = f.any(axis=1)
        self.words = np.flatnonzero(used)
        self.f = f[used]

    def total(self, lambdas: Sequence[float]) -> float:
        if self.x.size == 0:
            return 0.0
        if self.table.k == 1:
            return self._total_single(float(lambdas[0]))
        t = self.table
        clo, chi = t.chi_bounds(self.x, self.y, lambdas)
        pos = np.arange(t.k)
        codes = t.codes[self.words]
        m = np.clip(chi[pos, codes].min(axis=1) - clo[pos, codes].max(axis=1), 0.0, None)
        dens = (self.f * m).sum(axis=0)
        return math.fsum((dens * self.weight).tolist())


    def _total_single(self, lam: float) -> float:
        x, y = self.x, self.y
        ma = np.clip(1.0 - lam * y, 0.0, 1.0)
        mb = np.clip(1.0 - lam * x, 0.0, 1.0)
        # chi_C: t >= edge if y < x, t <= edge if y > x, edge = y(lam x - 1)/(x - y)
        with np.errstate(invalid="ignore"):
            edge = self.ratio * (lam * x - 1.0)
            mc = np.where(self.below, 1.0 - np.clip(edge, 0.0, 1.0), np.clip(edge, 0.0, 1.0))
        diag = x == y
        if diag.any():
            mc = np.where(diag, (lam * x <= 1.0).astype(float), mc)
        terms = self.fa * ma + self.fb * mb + self.fc * mc
        return math.fsum(terms.tolist())


def arc_sum(q1: np.ndarray, q2: np.ndarray, Q: int, lambdas: Sequence[float]) -> float:
    """Sum of whole-arc contributions for denominator arrays q1, q2 (float)."""
    return _ArcBatch(q1, q2, Q, len(lambdas)).total(lambdas)


_TABLES: dict[int, WordTable] = {}


def _table(k: int) -> WordTable:
    if k not in _TABLES:
        _TABLES[k] = WordTable(k)
    return _TABLES[k]


# ---------------------------------------------------------------------------
# Farey sums against integrals over T (or T_delta)

def _piece(inner, d):
    # integrate over the half y < x - d of T_delta: x in [(1+2d)/2, 1],
    # y in [1 + d - x, x - d]
    return quad(inner, (1 + 2 * d) / 2, 1, epsabs=1e-15, epsrel=1e-13, limit=200)[0]


def _poly_int(x, d, px, py):
    # integral over y in [1+d-x, x-d] of x^px y^py (py >= 0 or py = -1)
    lo, hi = 1 + d - x, x - d
    if py == -1:
        return x**px * math.log(hi / lo)
    return x**px * (hi ** (py + 1) - lo ** (py + 1)) / (py + 1)


# id -> (f(x, y) on arrays, exponents (px, py) of the monomial)
TEST_FUNCTIONS = {
    "1": ((lambda x, y: np.ones_like(x)), (0, 0)),
    "x": ((lambda x, y: x), (1, 0)),
    "xy": ((lambda x, y: x * y), (1, 1)),
    "1/(xy)": ((lambda x, y: 1.0 / (x * y)), (-1, -1)),
}


def _test_integral(fid: str, d: float) -> float:
    px, py = TEST_FUNCTIONS[fid][1]
    if d == 0 and fid == "1/(xy)":
        return math.pi**2 / 6
    if d == 0:
        exact = {"1": 0.5, "x": 1 / 3, "xy": 5 / 24}
        return exact[fid]
    if fid == "x":
        # x is not symmetric: integrate x over both halves, i.e. (x + y) over one
        return _piece(lambda x: _poly_int(x, d, 1, 0) + _poly_int(x, d, 0, 1), d)
    return 2 * _piece(lambda x: _poly_int(x, d, px, py), d)


def lemma2_discrepancy(test_function_id: str, beta, eta, Q: int, delta: float | None = None) -> float:
    """|(1/eta) sum_arcs f(q1/Q, q2/Q)/Q^2 - (6/pi^2) * integral of f over Omega|.

    Omega is T, or T_delta = {x+y >= 1+delta, |x-y| > delta} inside T when
    ``delta`` is given.  The sum runs over the arcs lying inside
    [beta, beta+eta] with (q1/Q, q2/Q) in Omega.
    """
    if test_function_id not in TEST_FUNCTIONS:
        raise KeyError(f"unknown test function {test_function_id!r}; "
                       f"choose from {sorted(TEST_FUNCTIONS)}")
    beta, eta = _check_interval(beta, eta, Q)
    d = 0.0 if delta is None else float(delta)
    if not 0 <= d < 0.5:
        raise ValueError(f"delta must lie in [0, 1/2), got {delta}")
    q1, q2 = farey_arc_arrays(beta, eta, Q)
    q1 = q1.astype(np.int64)
    q2 = q2.astype(np.int64)
    if d > 0:
        # exact membership in T_delta using integers where possible
        keep = (q1 + q2 >= Q * (1 + d)) & (np.abs(q1 - q2) > d * Q)
        q1, q2 = q1[keep], q2[keep]
    f = TEST_FUNCTIONS[test_function_id][0]
    vals = f(q1 / Q, q2 / Q)
    s = math.fsum(vals.tolist()) / (Q * Q) / float(eta)
    return abs(s - 6 / math.pi**2 * _test_integral(test_function_id, d))
