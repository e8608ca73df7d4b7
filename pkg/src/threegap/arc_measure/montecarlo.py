"""Monte Carlo estimate of g_k^{beta,eta}(lambda; Q) by direct simulation.

Independent of the Farey machinery: alpha is drawn uniformly from the
window, the points {n alpha}, n < Q, are sorted and the circular gaps are
compared with the thresholds directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["MonteCarloResult", "monte_carlo_gk"]

# points per batch (samples * Q), keeps memory use around 100 MB
_BATCH_POINTS = 2_000_000


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    stderr: float
    samples: int
    seed: int


def _batch_values(alphas: np.ndarray, Q: int, lambdas) -> np.ndarray:
    n = np.arange(Q, dtype=float)
    pts = np.sort(np.mod(alphas[:, None] * n[None, :], 1.0), axis=1)
    gaps = np.diff(np.concatenate([pts, np.ones((len(alphas), 1))], axis=1), axis=1)
    ok = np.ones_like(gaps, dtype=bool)
    for i, lam in enumerate(lambdas):
        # word starting at gap j needs gap j+i >= lam/Q (indices mod Q)
        ok &= np.roll(gaps, -i, axis=1) >= lam / Q
    return ok.mean(axis=1)


def monte_carlo_gk(beta, eta, Q: int, lambdas, samples: int, seed: int = 0) -> MonteCarloResult:
    """Mean over alpha ~ U[beta, beta+eta] of the proportion of circular k-tuples
    of consecutive gaps of {n alpha}, n < Q, with the i-th gap >= lambda_i/Q.

    Batches draw from independent streams spawned from ``seed``, so the
    result depends only on the arguments.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if Q < 1:
        raise ValueError(f"Q must be positive, got {Q}")
    if isinstance(lambdas, (int, float, Fraction)):
        lambdas = (lambdas,)
    lambdas = tuple(float(lam) for lam in lambdas)
    if not lambdas or any(not lam >= 0 for lam in lambdas):
        raise ValueError(f"thresholds must be non-negative, got {lambdas}")
    lo = float(Fraction(beta))
    width = float(Fraction(eta))
    per_batch = max(1, _BATCH_POINTS // Q)
    n_batches = -(-samples // per_batch)
    streams = np.random.SeedSequence(seed).spawn(n_batches)
    values = []
    for b, ss in enumerate(streams):
        size = min(per_batch, samples - b * per_batch)
        rng = np.random.default_rng(ss)
        alphas = lo + width * rng.random(size)
        # a float alpha is a dyadic rational of height far above Q, so the
        # low-height rationals of the three-gap degenerations are never hit
        values.append(_batch_values(alphas, Q, lambdas))
    v = np.concatenate(values)
    mean = math.fsum(v.tolist()) / samples
    if samples > 1:
        var = math.fsum(((v - mean) ** 2).tolist()) / (samples - 1)
        stderr = math.sqrt(var / samples)
    else:
        stderr = math.inf
    return MonteCarloResult(mean, stderr, samples, seed)
