"""Posterior moments of mutual information under a Dirichlet posterior.

All closed forms run in O(r*s): the point statistics J, K, L, M, P, Q are
single passes over the table, the exact mean is a digamma sum, and the
variance / third / fourth central-moment expansions combine the point
statistics with shifted denominators (n+1) and (n+1)(n+2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, ValidationError, ZeroCellError
from .special import psi
from .tables import PosteriorCounts


@dataclass(frozen=True)
class PointStats:
    """Scalar statistics of the plug-in distribution pi_hat = n_ij / n.

    j is the plug-in mutual information; k and l its second and third moments
    under pi_hat; m, p, q feed the second-order variance and third central
    moment. m and p are NaN when the table has zero cells.
    """

    j: float
    k: float
    l: float
    m: float
    p: float
    q: float
    row_j: np.ndarray
    col_j: np.ndarray


@dataclass(frozen=True)
class MomentSummary:
    """Aggregated posterior moments with validity diagnostics."""

    mean_exact: float
    mean_o2: float
    var_o1: float
    var_o2: float  # NaN when zero cells block the second-order term
    central3: float
    central4: float
    skewness: float  # NaN when degenerate
    kurtosis: float  # NaN when degenerate
    i_max: float
    validity_ratio: float  # r*s / n, small means the expansions are trustworthy
    flags: dict = field(default_factory=dict)


def _degenerate(c: PosteriorCounts) -> bool:
    # MI of a constant variable is identically zero.
    return c.r == 1 or c.s == 1


def i_max(c: PosteriorCounts) -> float:
    return min(math.log(c.r), math.log(c.s))


def point_mi(q: np.ndarray) -> float:
    """Plug-in mutual information of a probability matrix, in nats.

    Zero cells contribute 0 (the x log x limit).
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2:
        raise ValidationError("probability matrix must be 2-d")
    if np.any(q < 0):
        raise ValidationError("probabilities must be non-negative")
    total = q.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError("probabilities must sum to 1, got %.12g" % total)
    if q.shape[0] == 1 or q.shape[1] == 1:
        return 0.0
    qi = q.sum(axis=1, keepdims=True)
    qj = q.sum(axis=0, keepdims=True)
    pos = q > 0
    ratio = np.ones_like(q)
    ratio[pos] = q[pos] / (np.broadcast_to(qi * qj, q.shape)[pos])
    return float(np.sum(q[pos] * np.log(ratio[pos])))


def _log_ratio(c: PosteriorCounts) -> np.ndarray:
    """log(n_ij * n / (n_i+ n_+j)) with 0 at zero cells."""
    n = c.counts
    outer = np.outer(c.row_sums, c.col_sums)
    lr = np.zeros_like(n)
    pos = n > 0
    lr[pos] = np.log(n[pos] * c.total / outer[pos])
    return lr


def point_stats(c: PosteriorCounts) -> PointStats:
    """Compute J, K, L, M, P, Q and the row/column J vectors."""
    if _degenerate(c):
        return PointStats(
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            np.zeros(c.r), np.zeros(c.s),
        )
    n = c.counts
    w = n / c.total
    lr = _log_ratio(c)
    wl = w * lr
    j = float(wl.sum())
    k = float((wl * lr).sum())
    l = float((wl * lr * lr).sum())
    row_j = wl.sum(axis=1)
    col_j = wl.sum(axis=0)
    q = 1.0 - float((n * n / np.outer(c.row_sums, c.col_sums)).sum())
    if c.all_positive:
        inv = 1.0 / n - (1.0 / c.row_sums)[:, None] - (1.0 / c.col_sums)[None, :] \
            + 1.0 / c.total
        m = float((inv * n * lr).sum())
        p = float(c.total * ((row_j**2 / c.row_sums).sum()
                             + (col_j**2 / c.col_sums).sum()))
    else:
        m = math.nan
        p = math.nan
    return PointStats(j, k, l, m, p, q, row_j, col_j)


def mean_exact(c: PosteriorCounts) -> float:
    """Exact posterior mean of I: a digamma sum over cells and marginals."""
    if _degenerate(c):
        return 0.0
    n = c.counts
    psi_total = psi(c.total + 1.0)
    psi_rows = np.array([psi(v + 1.0) for v in c.row_sums])
    psi_cols = np.array([psi(v + 1.0) for v in c.col_sums])
    terms = []
    for i in range(c.r):
        for jx in range(c.s):
            nij = n[i, jx]
            if nij > 0:
                terms.append(
                    nij * (psi(nij + 1.0) - psi_rows[i] - psi_cols[jx] + psi_total)
                )
    return math.fsum(terms) / c.total


def mean_o2(c: PosteriorCounts) -> float:
    """Second-order mean: J + (r-1)(s-1) / (2(n+1))."""
    if _degenerate(c):
        return 0.0
    st = point_stats(c)
    return st.j + (c.r - 1) * (c.s - 1) / (2.0 * (c.total + 1.0))


def var_o1(c: PosteriorCounts) -> float:
    """Leading-order variance (K - J^2) / (n+1)."""
    if _degenerate(c):
        return 0.0
    st = point_stats(c)
    return max(0.0, st.k - st.j**2) / (c.total + 1.0)


def _require_all_positive(c: PosteriorCounts, what: str) -> None:
    if not c.all_positive:
        raise ZeroCellError(
            c.zero_cells(),
            "%s requires strictly positive posterior cells; zero cells at %s "
            "(consider a positive prior such as jeffreys)" % (what, c.zero_cells()),
        )


def var_o2(c: PosteriorCounts) -> float:
    """Variance through second order.

    May go negative outside the validity regime (rs/n not small); returned
    unclamped so the breakdown is visible.
    """
    if _degenerate(c):
        return 0.0
    _require_all_positive(c, "second-order variance")
    st = point_stats(c)
    n = c.total
    lead = max(0.0, st.k - st.j**2) / (n + 1.0)
    corr = (st.m + (c.r - 1) * (c.s - 1) * (0.5 - st.j) - st.q) / ((n + 1.0) * (n + 2.0))
    return lead + corr


def central3(c: PosteriorCounts) -> float:
    """Leading-order third central moment of I."""
    if _degenerate(c):
        return 0.0
    _require_all_positive(c, "third central moment")
    st = point_stats(c)
    n2 = c.total**2
    return (2.0 / n2) * (2.0 * st.j**3 - 3.0 * st.k * st.j + st.l) \
        + (3.0 / n2) * (st.k + st.j**2 - st.p)


def central4(c: PosteriorCounts) -> float:
    """Leading-order fourth central moment: 3 (K - J^2)^2 / n^2."""
    if _degenerate(c):
        return 0.0
    st = point_stats(c)
    return 3.0 * max(0.0, st.k - st.j**2) ** 2 / c.total**2


def skew_kurt(c: PosteriorCounts) -> tuple[float, float]:
    """Skewness and kurtosis of the posterior of I.

    Divides by the best available variance (second order when the table is
    strictly positive, else leading order). Raises DegenerateError when the
    leading-order variance vanishes (independence-degenerate tables).
    """
    if _degenerate(c):
        raise DegenerateError("constant variable: I is identically 0")
    if not (var_o1(c) > 0):
        # The leading-order moments all vanish together; dividing the
        # (vanishing) third and fourth moments by a purely second-order
        # variance would produce meaningless shape values.
        raise DegenerateError(
            "leading-order variance is 0 (independence-degenerate table); "
            "skewness and kurtosis are undefined at this order"
        )
    if c.all_positive:
        var = var_o2(c)
        if not (var > 0):
            var = var_o1(c)
        mu3 = central3(c)
    else:
        var = var_o1(c)
        mu3 = math.nan
    return mu3 / var**1.5, central4(c) / var**2


def dirichlet_covariance(c: PosteriorCounts) -> np.ndarray:
    """Covariance tensor of the cell probabilities, shape (r, s, r, s):
    Cov(pi_ij, pi_kl) = (pi_hat_ij d_ik d_jl - pi_hat_ij pi_hat_kl) / (n+1).
    """
    q = c.counts / c.total
    r, s = q.shape
    cov = -np.multiply.outer(q, q)
    idx = np.arange(r)[:, None], np.arange(s)[None, :]
    cov[idx[0], idx[1], idx[0], idx[1]] += q
    return cov / (c.total + 1.0)


def mean_var_from_cov(qhat: np.ndarray, cov: np.ndarray) -> tuple[float, float]:
    """Second-order mean and leading-order variance of I from an arbitrary
    posterior covariance of the cell probabilities.

    This is the generic path: the mean adds the quadratic-curvature
    correction 1/2 sum (d d / q_ij - d/q_i+ - d/q_+j) Cov, the variance is the
    quadratic form of the log-ratios with the covariance.
    """
    qhat = np.asarray(qhat, dtype=float)
    cov = np.asarray(cov, dtype=float)
    if np.any(qhat <= 0):
        raise ValidationError("generic path requires strictly positive probabilities")
    qi = qhat.sum(axis=1)
    qj = qhat.sum(axis=0)
    r, s = qhat.shape
    # diag(ij),(ij) term
    ii = np.arange(r)[:, None], np.arange(s)[None, :]
    diag = cov[ii[0], ii[1], ii[0], ii[1]]
    term_cell = (diag / qhat).sum()
    # sum over j,l of Cov(ij, il) for each row i (delta_ik)
    row_block = np.einsum("ijil->i", cov)
    term_row = (row_block / qi).sum()
    col_block = np.einsum("ijkj->j", cov)
    term_col = (col_block / qj).sum()
    mean = point_mi(qhat) + 0.5 * (term_cell - term_row - term_col)
    lr = np.log(qhat / np.outer(qi, qj))
    var = float(np.einsum("ij,ijkl,kl->", lr, cov, lr))
    return float(mean), var


def summarize(c: PosteriorCounts) -> MomentSummary:
    """All moments with flags instead of exceptions for degenerate regimes."""
    flags: dict = {}
    im = i_max(c)
    ratio = c.r * c.s / c.total
    if _degenerate(c):
        flags["constant_variable"] = True
        return MomentSummary(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, math.nan, math.nan,
                             im, ratio, flags)
    me = mean_exact(c)
    mo2 = mean_o2(c)
    v1 = var_o1(c)
    mu4 = central4(c)
    if c.all_positive:
        v2 = var_o2(c)
        mu3 = central3(c)
        if v2 < 0:
            flags["validity_warning"] = (
                "second-order variance is negative: rs/n = %.3g is outside "
                "the expansion's validity regime" % ratio
            )
    else:
        flags["zero_cells"] = c.zero_cells()
        v2 = math.nan
        mu3 = math.nan
    try:
        skew, kurt = skew_kurt(c)
    except DegenerateError as exc:
        flags["shape_degenerate"] = str(exc)
        skew = kurt = math.nan
    return MomentSummary(me, mo2, v1, v2, mu3, mu4, skew, kurt, im, ratio, flags)
