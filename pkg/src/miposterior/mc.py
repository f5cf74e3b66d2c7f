"""Monte Carlo oracle: Dirichlet sampling via gamma variates and empirical
moments of the mutual information with batch-means standard errors.

Determinism contract: samples are generated in fixed-size blocks, each block
from its own generator keyed by (seed, block index). Results therefore do not
depend on how blocks would be distributed over workers, and a fixed
(seed, N, counts) triple fully determines every output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, ZeroCellError
from .moments import i_max as _i_max
from .tables import PosteriorCounts

_BLOCK = 1 << 15
_N_BATCHES = 32
_N_BINS = 128


@dataclass(frozen=True)
class McEstimate:
    """Empirical posterior moments of I with batch-means standard errors."""

    sample_count: int
    seed: int
    mean: float
    variance: float
    skewness: float
    kurtosis: float
    se_mean: float
    se_variance: float
    se_skewness: float
    se_kurtosis: float
    tail: dict  # threshold -> empirical p(I > threshold)
    hist_edges: np.ndarray
    hist_counts: np.ndarray


def _check_positive(c: PosteriorCounts) -> None:
    if not c.all_positive:
        raise ZeroCellError(
            c.zero_cells(),
            "Dirichlet sampling requires every cell > 0 (gamma shape must be "
            "positive); zero cells at %s" % (c.zero_cells(),),
        )


def sample_dirichlet(c: PosteriorCounts, rng: np.random.Generator) -> np.ndarray:
    """One draw from the posterior Dirichlet over the r x s cell probabilities."""
    _check_positive(c)
    x = rng.gamma(shape=c.counts)
    return x / x.sum()


def _mi_of_samples(x: np.ndarray, r: int, s: int) -> np.ndarray:
    """I(pi) for a batch of gamma draws, shape (m, r*s) -> (m,)."""
    p = x / x.sum(axis=1, keepdims=True)
    p = p.reshape(-1, r, s)
    pi = p.sum(axis=2)
    pj = p.sum(axis=1)
    lr = np.log(p) - np.log(pi)[:, :, None] - np.log(pj)[:, None, :]
    out = (p * lr).sum(axis=(1, 2))
    # I >= 0 analytically; floor tiny negative rounding residue.
    return np.maximum(out, 0.0)


def _moments(x: np.ndarray) -> tuple[float, float, float, float]:
    mean = float(x.mean())
    d = x - mean
    m2 = float((d * d).mean())
    m3 = float((d**3).mean())
    m4 = float((d**4).mean())
    n = x.size
    var = m2 * n / (n - 1)
    skew = m3 / m2**1.5 if m2 > 0 else math.nan
    kurt = m4 / (m2 * m2) if m2 > 0 else math.nan
    return mean, var, skew, kurt


def mc_estimate(
    c: PosteriorCounts,
    n_samples: int,
    seed: int = 0,
    thresholds: tuple[float, ...] = (),
) -> McEstimate:
    """Monte Carlo moments of I from n_samples posterior draws.

    Standard errors come from 32 batch means; the histogram has 128
    equal-width bins on [0, I_max].
    """
    if n_samples < 100:
        raise ValidationError("mc_estimate needs at least 100 samples")
    _check_positive(c)
    shapes = c.counts.reshape(-1)
    values = np.empty(n_samples)
    pos = 0
    block = 0
    while pos < n_samples:
        m = min(_BLOCK, n_samples - pos)
        rng = np.random.default_rng([seed, block])
        x = rng.gamma(shape=shapes, size=(m, shapes.size))
        values[pos:pos + m] = _mi_of_samples(x, c.r, c.s)
        pos += m
        block += 1

    mean, var, skew, kurt = _moments(values)
    per_batch = n_samples // _N_BATCHES
    batch_stats = np.array([
        _moments(values[b * per_batch:(b + 1) * per_batch])
        for b in range(_N_BATCHES)
    ])
    ses = batch_stats.std(axis=0, ddof=1) / math.sqrt(_N_BATCHES)

    im = _i_max(c)
    hi = im if im > 0 else 1.0
    counts, edges = np.histogram(np.clip(values, 0.0, hi), bins=_N_BINS,
                                 range=(0.0, hi))
    tail = {float(t): float(np.mean(values > t)) for t in thresholds}
    return McEstimate(
        sample_count=n_samples,
        seed=seed,
        mean=mean,
        variance=var,
        skewness=skew,
        kurtosis=kurt,
        se_mean=float(ses[0]),
        se_variance=float(ses[1]),
        se_skewness=float(ses[2]),
        se_kurtosis=float(ses[3]),
        tail=tail,
        hist_edges=edges,
        hist_counts=counts,
    )
