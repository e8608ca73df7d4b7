"""Limiting distribution g_k as an integral over the triangle T.

    g_k(lambdas) = (6/pi^2) * iint_T sum_w f_w(x,y) ||chi_w(x,y,lambdas)|| dx dy / (x y)

The integrand is smooth on every cell of an arrangement of straight lines:
each kink comes from two interval endpoints coinciding, and for this
problem every such coincidence set is a line in the (x, y) plane.  So the
integral is done as an iterated one, outer in x and inner in y, with the
exact kink locations as panel breaks and adaptive Gauss-Legendre on each
panel to absorb the remaining endpoint singularities (1/y near the corner
(1, 0) and the pole of the C-threshold edge at y = x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .intervals import WordTable, word_intervals

__all__ = ["QuadratureError", "QuadratureResult", "quadrature_gk", "integrate_T", "adaptive_gauss"]

SIX_OVER_PI2 = 6.0 / math.pi**2

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(12)
# panels whose error estimate is at rounding level are never split
_NOISE = 64 * np.finfo(float).eps


def _estimate(whole, left, right):
    err = np.abs(whole - left - right)
    return np.where(err <= _NOISE * (np.abs(left) + np.abs(right)), 0.0, err)


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error bound {achieved:.3g})")
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float


def _gauss(func, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre on [a, m] and [m, b] for every interval at once."""
    m = 0.5 * (a + b)
    h = 0.25 * (b - a)
    c_left = 0.5 * (a + m)
    c_right = 0.5 * (m + b)
    pts = np.concatenate([(c_left[:, None] + h[:, None] * _NODES).ravel(),
                          (c_right[:, None] + h[:, None] * _NODES).ravel()])
    vals = func(pts).reshape(2, a.size, _NODES.size)
    left = h * (vals[0] @ _WEIGHTS)
    right = h * (vals[1] @ _WEIGHTS)
    return left, right


def adaptive_gauss(func, breaks, tol: float, max_panels: int = 20000) -> QuadratureResult:
    """Integrate a vectorised ``func`` over [breaks[0], breaks[-1]].

    Every panel is compared against its two halves; panels are bisected,
    largest error first, until the summed error estimate is below ``tol``.
    """
    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    if a.size == 0:
        return QuadratureResult(0.0, 0.0)
    # the "whole" estimate of a fresh panel is the sum of its two halves at
    # half the resolution: evaluate once at full panel, once split
    m = 0.5 * (a + b)
    h = 0.5 * (b - a)
    whole = h * (func(((m[:, None] + h[:, None] * _NODES)).ravel()).reshape(a.size, -1) @ _WEIGHTS)
    left, right = _gauss(func, a, b)
    err = _estimate(whole, left, right)
    while True:
        total = err.sum()
        if not np.isfinite(total):
            raise QuadratureError("non-finite integrand", float(total))
        if total <= tol:
            break
        if a.size >= max_panels:
            raise QuadratureError("panel budget exhausted", float(total))
        split = err > 0.5 * tol / a.size
        sa, sb = a[split], b[split]
        sm = 0.5 * (sa + sb)
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        nwhole = np.concatenate([left[split], right[split]])
        nl, nr = _gauss(func, na, nb)
        a = np.concatenate([a[~split], na])
        b = np.concatenate([b[~split], nb])
        left = np.concatenate([left[~split], nl])
        right = np.concatenate([right[~split], nr])
        err = np.concatenate([err[~split], _estimate(nwhole, nl, nr)])
    return QuadratureResult(float(math.fsum(left + right)), float(total))


@lru_cache(maxsize=None)
def _word_affines(k: int) -> tuple[tuple[int, int, int], ...]:
    forms = {(0, 0, 0), (1, 0, 0)}
    table = WordTable(k)
    for w in table.words:
        for lo, hi in word_intervals(w):
            forms.add(lo)
            forms.add(hi)
    return tuple(sorted(forms))


def _kink_lines(k: int, lambdas) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lines y = a + b x and verticals x = c carrying every kink of the integrand."""
    lines = {(1.0, -1.0), (1.0, 0.0), (0.0, 1.0)}
    verticals = set()
    forms = _word_affines(k)
    for i, p in enumerate(forms):
        for q in forms[i + 1:]:
            d0, dx, dy = (u - v for u, v in zip(p, q))
            if dy:
                lines.add((-d0 / dy, -dx / dy))
            elif dx:
                verticals.add(-d0 / dx)
    lams = [float(v) for v in lambdas]
    for li in lams:
        if li <= 0:
            continue
        verticals.add(1.0 / li)
        lines.add((1.0 / li, 0.0))
        for lj in lams:
            lines.add((1.0 / li, -lj / li))              # lam_i y = 1 - lam_j x
            if lj > 0:
                lines.add((1.0 / lj, 1.0 - li / lj))     # C edge(lam_i) = lam_j y
            if lj != li:
                lines.add((1.0 / (li - lj), -lj / (li - lj)))  # C edge(lam_i) = 1 - lam_j x
    ab = np.array(sorted(lines))
    return ab[:, 0], ab[:, 1], np.array(sorted(verticals))


def _x_breaks(la, lb, verticals) -> np.ndarray:
    da = la[:, None] - la[None, :]
    db = lb[None, :] - lb[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = da / db
    xs = xs[np.isfinite(xs)]
    xs = np.concatenate([xs, verticals, [0.0, 1.0]])
    xs = np.unique(xs[(xs > 1e-13) & (xs < 1.0 - 1e-13)])
    # near-coincident breaks only create panels too thin to hold distinct nodes
    xs = xs[np.diff(xs, prepend=0.0) > 1e-13]
    return np.concatenate([[0.0], xs, [1.0]])


def _inner_batch(density, xs: np.ndarray, la, lb, tol: float, max_panels: int = 2_000_000):
    """inner(x) = int_{1-x}^{1} density(x, y) / (x y) dy for every x in ``xs``.

    Uses y = (1 - x) + x v, v in [0, 1]: this removes the 1/x factor, keeps
    the short y-range near x = 0 free of cancellation, and resolves the 1/y
    singularity near (1, 0) to full relative precision.  All panels of all x
    are refined together as one flat array; each x gets its own error
    budget ``tol``.
    """
    nx = xs.size
    us = np.clip((la[None, :] - 1.0) / xs[:, None] + lb[None, :] + 1.0, 0.0, 1.0)
    us = np.sort(np.concatenate([np.zeros((nx, 1)), us, np.ones((nx, 1))], axis=1), axis=1)
    a, b = us[:, :-1].ravel(), us[:, 1:].ravel()
    owner = np.repeat(np.arange(nx), us.shape[1] - 1)
    keep = b > a
    a, b, owner = a[keep], b[keep], owner[keep]

    def func(px, pv):
        py = (1.0 - px) + px * pv
        return density(px, py) / py

    def halves(a, b, owner):
        m = 0.5 * (a + b)
        h = 0.25 * (b - a)
        yl = (0.5 * (a + m))[:, None] + h[:, None] * _NODES
        yr = (0.5 * (m + b))[:, None] + h[:, None] * _NODES
        xx = np.broadcast_to(xs[owner][:, None], yl.shape)
        vals = func(np.concatenate([xx, xx]).ravel(), np.concatenate([yl, yr]).ravel())
        vals = vals.reshape(2, a.size, _NODES.size)
        return h * (vals[0] @ _WEIGHTS), h * (vals[1] @ _WEIGHTS)

    m = 0.5 * (a + b)
    h = 0.5 * (b - a)
    yw = m[:, None] + h[:, None] * _NODES
    whole = h * (func(np.broadcast_to(xs[owner][:, None], yw.shape).ravel(), yw.ravel())
                 .reshape(a.size, -1) @ _WEIGHTS)
    left, right = halves(a, b, owner)
    err = _estimate(whole, left, right)
    while True:
        per_x = np.bincount(owner, weights=err, minlength=nx)
        count = np.bincount(owner, minlength=nx)
        bad = per_x > tol
        if not bad.any():
            break
        if a.size >= max_panels:
            raise QuadratureError("inner panel budget exhausted", float(per_x.max()))
        split = bad[owner] & (err > 0.5 * tol / count[owner])
        sa, sb, so = a[split], b[split], owner[split]
        sm = 0.5 * (sa + sb)
        na, nb, no = np.concatenate([sa, sm]), np.concatenate([sm, sb]), np.concatenate([so, so])
        nwhole = np.concatenate([left[split], right[split]])
        nl, nr = halves(na, nb, no)
        a = np.concatenate([a[~split], na])
        b = np.concatenate([b[~split], nb])
        owner = np.concatenate([owner[~split], no])
        left = np.concatenate([left[~split], nl])
        right = np.concatenate([right[~split], nr])
        err = np.concatenate([err[~split], _estimate(nwhole, nl, nr)])
    values = np.bincount(owner, weights=left + right, minlength=nx)
    return values, float(per_x.max(initial=0.0))


def integrate_T(density, k: int, lambdas, inner_tol: float = 1e-12,
                outer_tol: float = 1e-10) -> QuadratureResult:
    """iint_T density(x, y) / (x y) dx dy, with the kink lines of g_k(lambdas)."""
    la, lb, verticals = _kink_lines(k, lambdas)
    inner_err = [0.0]

    def outer(xs: np.ndarray) -> np.ndarray:
        vals, err = _inner_batch(density, xs, la, lb, inner_tol)
        inner_err[0] = max(inner_err[0], err)
        return vals

    res = adaptive_gauss(outer, _x_breaks(la, lb, verticals), outer_tol)
    return QuadratureResult(res.value, res.error + inner_err[0])


def quadrature_gk(lambdas, tol: float = 1e-7, full: bool = False):
    """Limit g_k(lambdas) as Q -> oo by quadrature over T.

    Raises QuadratureError if the error bound exceeds ``tol``.
    """
    lambdas = tuple(float(v) for v in np.atleast_1d(lambdas))
    if any(v < 0 for v in lambdas):
        raise ValueError(f"thresholds must be non-negative, got {lambdas}")
    table = WordTable(len(lambdas))
    res = integrate_T(lambda x, y: table.density(x, y, lambdas), table.k, lambdas)
    out = QuadratureResult(SIX_OVER_PI2 * res.value, SIX_OVER_PI2 * res.error)
    if out.error > tol:
        raise QuadratureError(f"g_{table.k}{lambdas} missed tolerance {tol:g}", out.error)
    return out if full else out.value
