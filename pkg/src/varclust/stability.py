"""Bootstrap evaluation of the stability of the nested variable partitions.

B bootstrap samples of the observations are drawn; each yields a new
hierarchy of the variables, whose K-cluster cuts are compared with the
original hierarchy's cuts through the adjusted Rand index, for every
K in {2, ..., p-1}.  The mean index per K, over replicates, is the
stability curve; a high, locally maximal value flags a partition size
that survives resampling of the observations.

A replicate can fail when a rare category vanishes from the resample
(its indicator column would be constant).  By default such a replicate
is redrawn a bounded number of times and then recorded as failed and
excluded from the means; ``strict_rare`` reproduces the hard error
instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data_model import VariableSet
from .errors import DataError, RareCategoryError
from .hierarchy import Hierarchy, _agglomerate, cut_assignments, hclustvar
from .pcamix import build_table

MAX_REDRAWS = 10


def rand_indices(p_labels, q_labels) -> tuple[float, float]:
    """Rand and adjusted Rand agreement between two partitions.

    Partitions are given as label sequences over the same objects; labels
    themselves are arbitrary (both indices are relabeling-invariant).
    The adjusted index applies the permutation-model correction
    (index - expected) / (max - expected); it is 1 only for identical
    partitions and can be negative.
    """
    p_labels = list(p_labels)
    q_labels = list(q_labels)
    if len(p_labels) != len(q_labels):
        raise DataError("partitions must cover the same objects")
    n = len(p_labels)
    if n < 2:
        raise DataError("need at least 2 objects to compare partitions")

    def codes(labels):
        lookup = {}
        out = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            if lab not in lookup:
                lookup[lab] = len(lookup)
            out[i] = lookup[lab]
        return out, len(lookup)

    a, ka = codes(p_labels)
    b, kb = codes(q_labels)
    together, rows, cols = _kernels.pair_counts(a, b, ka, kb)
    total = n * (n - 1) / 2.0
    rand = 1.0 - (rows + cols - 2.0 * together) / total
    expected = rows * cols / total
    maximum = 0.5 * (rows + cols)
    if maximum == expected:
        # both partitions all-singletons or all-one-cluster: identical
        adjusted = 1.0
    else:
        adjusted = (together - expected) / (maximum - expected)
    return float(rand), float(adjusted)


@dataclass(frozen=True, eq=False)
class StabilityResult:
    """Adjusted Rand indices of bootstrap cuts against the original cuts.

    ``mat_cr`` is the B x (p-2) replicate-by-K table (NaN rows for failed
    replicates); ``mean_adjusted_rand`` its column means over successful
    replicates.
    """

    k_values: tuple[int, ...]
    mean_adjusted_rand: tuple[float, ...]
    mat_cr: np.ndarray
    failed_replicates: tuple[tuple[int, str], ...]
    b: int
    seed: int
    curve: tuple[tuple[int, float], ...] | None = None

    def mean_for(self, k: int) -> float:
        return self.mean_adjusted_rand[self.k_values.index(k)]


def bootstrap_stability(
    vs: VariableSet,
    b: int,
    seed: int = 0,
    graphics_data: bool = True,
    strict_rare: bool = False,
    index_sampler=None,
) -> StabilityResult:
    """Stability of the hierarchy's nested partitions under resampling.

    Parameters
    ----------
    vs : VariableSet
        Data with p >= 3 variables.
    b : int
        Number of bootstrap replicates (>= 1).
    seed : int
        Each replicate draws from PCG64 seeded with
        ``SeedSequence([seed, replicate])``, so results are reproducible
        and independent of any execution order.
    graphics_data : bool
        Attach the plot-ready ``curve`` field (list of (K, mean) pairs).
    strict_rare : bool
        Re-raise the rare-category error of a failing replicate instead
        of redrawing it.
    index_sampler : callable, optional
        ``f(rng, n) -> array of n row indices``; replaces the bootstrap
        draw (used by tests, e.g. identity resampling).
    """
    if b < 1:
        raise DataError(f"B must be >= 1, got {b}")
    if vs.p < 3:
        raise DataError("stability needs at least 3 variables")

    original = hclustvar(vs)
    k_values = tuple(range(2, vs.p))
    original_cuts = {k: cut_assignments(original, k) for k in k_values}

    mat = np.full((b, len(k_values)), np.nan)
    failed: list[tuple[int, str]] = []
    for rep in range(b):
        rng = np.random.default_rng(np.random.SeedSequence([seed, rep]))
        boot: Hierarchy | None = None
        reason = ""
        for _ in range(1 + MAX_REDRAWS):
            if index_sampler is not None:
                idx = np.asarray(index_sampler(rng, vs.n_obs), dtype=np.int64)
            else:
                idx = rng.integers(0, vs.n_obs, size=vs.n_obs)
            sample = vs.take_rows(idx)
            try:
                table = build_table(sample)
                merges, inversions = _agglomerate(table)
            except RareCategoryError as err:
                if strict_rare:
                    raise
                reason = str(err)
                continue
            boot = Hierarchy(sample.names, tuple(merges), tuple(inversions))
            break
        if boot is None:
            failed.append((rep, reason))
            continue
        for col, k in enumerate(k_values):
            _, ari = rand_indices(original_cuts[k], cut_assignments(boot, k))
            mat[rep, col] = ari

    ok = ~np.isnan(mat).any(axis=1)
    if not ok.any():
        raise RareCategoryError(
            "bootstrap",
            f"all {b} replicates failed on rare categories; last: {failed[-1][1]}",
        )
    means = tuple(float(m) for m in mat[ok].mean(axis=0))
    curve = tuple(zip(k_values, means)) if graphics_data else None
    return StabilityResult(
        k_values=k_values,
        mean_adjusted_rand=means,
        mat_cr=mat,
        failed_replicates=tuple(failed),
        b=b,
        seed=seed,
        curve=curve,
    )
