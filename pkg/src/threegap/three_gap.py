"""Three-gap structure of {n alpha}, 0 <= n < Q.

The Farey neighbours a1/q1 < alpha < a2/q2 of order Q determine everything:
the gap lengths A = q1*alpha - a1, B = a2 - q2*alpha, C = A + B, how many of
each occur, and the permutation sigma that sorts the points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .farey import AlphaValue, FareyError, FareyPair, _as_alpha, farey_neighbors

__all__ = [
    "GapTriple",
    "gap_triple",
    "sigma_permutation",
    "gap_types",
    "gap_word_list",
    "direct_gaps",
    "distinct_gap_lengths",
]


@dataclass(frozen=True)
class GapTriple:
    lengthA: Fraction
    lengthB: Fraction
    lengthC: Fraction
    countA: int
    countB: int
    countC: int
    pair: FareyPair

    @property
    def Q(self) -> int:
        return self.pair.order

    def length(self, symbol: str) -> Fraction:
        return {"A": self.lengthA, "B": self.lengthB, "C": self.lengthC}[symbol]

    def count(self, symbol: str) -> int:
        return {"A": self.countA, "B": self.countB, "C": self.countC}[symbol]


def gap_triple(alpha, Q: int) -> GapTriple:
    alpha = _as_alpha(alpha)
    pair = farey_neighbors(alpha, Q)
    x = alpha.value
    A = pair.q1 * x - pair.a1
    B = pair.a2 - pair.q2 * x
    return GapTriple(A, B, A + B, Q - pair.q1, Q - pair.q2, pair.q1 + pair.q2 - Q, pair)


def _sigma_from_pair(q1: int, q2: int, Q: int) -> list[int]:
    sigma = [0] * Q
    s = 0
    for i in range(1, Q):
        if s < Q - q1:
            s += q1
        elif s < q2:
            s += q1 - q2
        else:
            s -= q2
        sigma[i] = s
    return sigma


def sigma_permutation(alpha, Q: int) -> list[int]:
    """Permutation sigma with {sigma_0 alpha} < {sigma_1 alpha} < ... ."""
    pair = farey_neighbors(_as_alpha(alpha), Q)
    return _sigma_from_pair(pair.q1, pair.q2, Q)


def gap_types(q1: int, q2: int, Q: int) -> str:
    """Type of the gap to the right of each sorted point, as a string over ABC."""
    out = []
    for s in _sigma_from_pair(q1, q2, Q):
        out.append("A" if s < Q - q1 else ("C" if s < q2 else "B"))
    return "".join(out)


def gap_word_list(alpha, Q: int, k: int) -> list[str]:
    """The Q circular k-words of consecutive gap types, starting at 0."""
    if k < 1:
        raise FareyError(f"word length must be positive, got {k}")
    if Q < k:
        raise FareyError(f"need Q >= k, got Q={Q}, k={k}")
    pair = farey_neighbors(_as_alpha(alpha), Q)
    types = gap_types(pair.q1, pair.q2, Q)
    ring = types + types[: k - 1]
    return [ring[i:i + k] for i in range(Q)]


def direct_gaps(alpha, Q: int):
    """Sort {n alpha : 0 <= n < Q} and return (points, circular gaps).

    Exact for rational alpha (integer residues), float otherwise; accepts
    any alpha, including the rational lattice cases rejected by gap_triple.
    """
    if Q < 1:
        raise FareyError(f"Q must be positive, got {Q}")
    if isinstance(alpha, (float, np.floating)):
        pts = np.sort(np.mod(np.arange(Q) * float(alpha), 1.0))
        gaps = np.diff(np.append(pts, 1.0))
        return pts, gaps
    if isinstance(alpha, str):
        alpha = _as_alpha(alpha)
    if isinstance(alpha, AlphaValue):
        alpha = alpha.value
    alpha = Fraction(alpha)
    p, r = alpha.numerator, alpha.denominator
    res = sorted({(n * p) % r for n in range(Q)})
    if len(res) < Q:
        # coincident points give zero-length gaps
        res = sorted((n * p) % r for n in range(Q))
    pts = [Fraction(v, r) for v in res]
    gaps = [Fraction(res[i + 1] - res[i], r) for i in range(Q - 1)]
    gaps.append(Fraction(r - res[-1], r))
    return pts, gaps


def distinct_gap_lengths(gaps, tol: float = 0.0) -> list:
    """Distinct values in ``gaps``; float values closer than ``tol`` are merged."""
    vals = sorted(gaps)
    out = [vals[0]]
    for v in vals[1:]:
        if v - out[-1] > tol:
            out.append(v)
    return out
