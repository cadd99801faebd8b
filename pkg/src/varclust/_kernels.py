"""Numeric hot loops, JIT-compiled with numba when available.

Every kernel is written in the numpy subset numba supports, so the same
source runs in two modes:

* JIT mode (default): each kernel is wrapped with ``numba.njit``.
* Fallback mode: plain numpy, selected by setting the environment
  variable ``VARCLUST_NO_JIT=1`` before import, or automatically when
  numba is not importable.

``JIT_ACTIVE`` reports which path is live.  ``benchmarks/bench_kernels.py``
compares the two.
"""

import os

import numpy as np


def _jit_requested() -> bool:
    return os.environ.get("VARCLUST_NO_JIT", "").strip().lower() not in (
        "1",
        "true",
        "yes",
        "on",
    )


def _gather(table, cols):
    """Contiguous copy of the selected columns of the recoded table."""
    n = table.shape[0]
    m = cols.shape[0]
    sub = np.empty((n, m))
    for j in range(m):
        for i in range(n):
            sub[i, j] = table[i, cols[j]]
    return sub


def _singular_values(sub):
    # singular values are invariant under transposition; decomposing the
    # tall orientation keeps LAPACK on the small Gram side
    if sub.shape[1] <= sub.shape[0]:
        u, s, vt = np.linalg.svd(sub, full_matrices=False)
    else:
        u, s, vt = np.linalg.svd(sub.T.copy(), full_matrices=False)
    return s


def _lam1_cols(table, cols):
    """Leading eigenvalue of (1/n) M'M where M = table[:, cols]."""
    sub = _gather(table, cols)
    s = _singular_values(sub)
    return s[0] * s[0] / table.shape[0]


def _spectrum_cols(table, cols):
    """All eigenvalues of (1/n) M'M, descending."""
    sub = _gather(table, cols)
    s = _singular_values(sub)
    return s * s / table.shape[0]


def _svd_scores_cols(table, cols):
    """Eigenvalues plus first-component scores for M = table[:, cols].

    Scores are sqrt(n) times the first left singular vector of M/sqrt(n)
    scaled by its singular value, i.e. the first principal component with
    biased variance equal to the leading eigenvalue.
    """
    sub = _gather(table, cols)
    n = sub.shape[0]
    if sub.shape[1] <= n:
        u, s, vt = np.linalg.svd(sub, full_matrices=False)
        scores = u[:, 0] * s[0]
    else:
        u, s, vt = np.linalg.svd(sub.T.copy(), full_matrices=False)
        scores = vt[0, :] * s[0]
    return s * s / n, scores.copy()


def _r_sq(x, y):
    """Squared Pearson correlation of two vectors."""
    n = x.shape[0]
    mx = x.mean()
    my = y.mean()
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for i in range(n):
        dx = x[i] - mx
        dy = y[i] - my
        sxy += dx * dy
        sxx += dx * dx
        syy += dy * dy
    return sxy * sxy / (sxx * syy)


def _eta_sq(u, codes, n_levels):
    """Correlation ratio of u given integer level codes (-1 = missing).

    Share of the total variance of u carried by the per-level means;
    missing rows contribute to the total variance only.
    """
    n = u.shape[0]
    ubar = u.mean()
    counts = np.zeros(n_levels)
    sums = np.zeros(n_levels)
    for i in range(n):
        c = codes[i]
        if c >= 0:
            counts[c] += 1.0
            sums[c] += u[i]
    num = 0.0
    for s in range(n_levels):
        if counts[s] > 0.0:
            d = sums[s] / counts[s] - ubar
            num += counts[s] * d * d
    den = 0.0
    for i in range(n):
        d = u[i] - ubar
        den += d * d
    return num / den


def _pair_counts(a, b, ka, kb):
    """Pair-concordance counts between two label vectors.

    Returns (sum_ij C(n_ij,2), sum_i C(a_i,2), sum_j C(b_j,2)) from the
    contingency table of the two partitions, the sufficient statistics
    for the Rand and adjusted Rand indices.
    """
    cont = np.zeros((ka, kb))
    n = a.shape[0]
    for i in range(n):
        cont[a[i], b[i]] += 1.0
    sum_cells = 0.0
    for i in range(ka):
        for j in range(kb):
            c = cont[i, j]
            sum_cells += c * (c - 1.0) / 2.0
    sum_rows = 0.0
    for i in range(ka):
        r = cont[i, :].sum()
        sum_rows += r * (r - 1.0) / 2.0
    sum_cols = 0.0
    for j in range(kb):
        c = cont[:, j].sum()
        sum_cols += c * (c - 1.0) / 2.0
    return sum_cells, sum_rows, sum_cols


JIT_ACTIVE = False
if _jit_requested():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        _gather = njit(cache=True)(_gather)
        _singular_values = njit(cache=True)(_singular_values)
        _lam1_cols = njit(cache=True)(_lam1_cols)
        _spectrum_cols = njit(cache=True)(_spectrum_cols)
        _svd_scores_cols = njit(cache=True)(_svd_scores_cols)
        _r_sq = njit(cache=True)(_r_sq)
        _eta_sq = njit(cache=True)(_eta_sq)
        _pair_counts = njit(cache=True)(_pair_counts)
        JIT_ACTIVE = True


def lam1_cols(table: np.ndarray, cols: np.ndarray) -> float:
    return float(_lam1_cols(table, cols))


def spectrum_cols(table: np.ndarray, cols: np.ndarray) -> np.ndarray:
    return np.asarray(_spectrum_cols(table, cols))


def svd_scores_cols(table: np.ndarray, cols: np.ndarray):
    lams, scores = _svd_scores_cols(table, cols)
    return np.asarray(lams), np.asarray(scores)


def r_sq(x: np.ndarray, y: np.ndarray) -> float:
    return float(_r_sq(np.ascontiguousarray(x), np.ascontiguousarray(y)))


def eta_sq(u: np.ndarray, codes: np.ndarray, n_levels: int) -> float:
    return float(
        _eta_sq(np.ascontiguousarray(u), np.ascontiguousarray(codes), n_levels)
    )


def pair_counts(a: np.ndarray, b: np.ndarray, ka: int, kb: int):
    return _pair_counts(
        np.ascontiguousarray(a, dtype=np.int64),
        np.ascontiguousarray(b, dtype=np.int64),
        ka,
        kb,
    )
