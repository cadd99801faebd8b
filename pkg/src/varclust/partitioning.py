"""k-means-type partitioning of variables around synthetic components.

The algorithm alternates a representation step (recompute each cluster's
synthetic variable as its first principal component) and an allocation
step (move each variable to the cluster whose synthetic variable it is
most similar to: squared correlation for a quantitative variable,
correlation ratio for a qualitative one).  Both steps can only increase
the partition homogeneity, so the criterion climbs monotonically to a
local optimum that depends on the initial partition; multiple random
starts keep the best run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data_model import VariableSet
from .errors import DataError
from .partition import ClusterPartition, build_partition
from .pcamix import RecodedTable, build_table, check_partition, resolve_members
from .similarity import canonical_corr

DEFAULT_MAX_ITER = 150


@dataclass(frozen=True)
class RandomInit:
    """Seeded random-center initialization, best of ``n_starts`` runs.

    Randomness is numpy PCG64 seeded per start with
    ``SeedSequence([seed, start_index])``, so a given seed reproduces the
    same result on any platform and starts may run in any order.
    """

    n_starts: int = 1
    seed: int = 0


@dataclass(frozen=True)
class GivenPartition:
    """Start from an explicit partition (e.g. a dendrogram cut)."""

    clusters: tuple

    def resolved(self, vs: VariableSet):
        return check_partition(vs, self.clusters)


@dataclass(frozen=True)
class GivenCenters:
    """Start from explicit center variables (indices or names)."""

    centers: tuple


@dataclass(frozen=True)
class KmeansConfig:
    k: int
    init: RandomInit | GivenPartition | GivenCenters
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.k < 1:
            raise DataError(f"K must be >= 1, got {self.k}")
        if self.max_iter < 1:
            raise DataError(f"max_iter must be >= 1, got {self.max_iter}")
        if isinstance(self.init, RandomInit) and self.init.n_starts < 1:
            raise DataError(f"n_starts must be >= 1, got {self.init.n_starts}")


def _center_similarities(table: RecodedTable, centers: list[int]) -> np.ndarray:
    """Similarity of every variable to each center variable."""
    n = table.n_obs
    blocks = [table.matrix[:, table.var_cols[i]] / np.sqrt(n) for i in range(table.p)]
    sims = np.empty((table.p, len(centers)))
    for j in range(table.p):
        for c, center in enumerate(centers):
            sims[j, c] = (
                1.0 if j == center else canonical_corr(blocks[j], blocks[center])
            )
    return sims


def _allocate_to_centers(table: RecodedTable, centers: list[int]) -> list[int]:
    """Initial memberships: each variable joins its most similar center.

    Center variables always hold themselves; ties go to the center with
    the lowest variable index.
    """
    by_index = sorted(range(len(centers)), key=lambda c: centers[c])
    sims = _center_similarities(table, centers)
    memberships = []
    for j in range(table.p):
        if j in centers:
            memberships.append(centers.index(j))
            continue
        best = max(by_index, key=lambda c: sims[j, c])
        # max() keeps the earliest of equal keys, so scanning centers in
        # variable-index order sends ties to the lowest-index center
        memberships.append(best)
    return memberships


def init_random(vs: VariableSet, k: int, seed: int = 0) -> tuple[tuple[int, ...], ...]:
    """Random initial partition: k center variables drawn without replacement."""
    if not 1 <= k <= vs.p:
        raise DataError(f"K must be in [1, {vs.p}], got {k}")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    table = build_table(vs)
    return _random_partition(table, k, rng)


def _random_partition(table: RecodedTable, k: int, rng) -> tuple[tuple[int, ...], ...]:
    centers = sorted(int(c) for c in rng.choice(table.p, size=k, replace=False))
    memberships = _allocate_to_centers(table, centers)
    clusters = [[] for _ in range(k)]
    for j, c in enumerate(memberships):
        clusters[c].append(j)
    return tuple(tuple(c) for c in clusters)


def _variable_sim_to_scores(table: RecodedTable, j: int, scores: np.ndarray) -> float:
    v = table.vs.variables[j]
    if v.is_qualitative:
        return _kernels.eta_sq(scores, v.codes, len(v.levels))
    return _kernels.r_sq(v.values, scores)


def _run_once(table: RecodedTable, clusters, max_iter: int):
    """Alternate representation and allocation from an initial partition."""
    p = table.p
    k = len(clusters)
    memberships = [0] * p
    for c, cl in enumerate(clusters):
        for j in cl:
            memberships[j] = c

    h_history = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        member_lists = [[j for j in range(p) if memberships[j] == c] for c in range(k)]
        scores = [table.component(tuple(cl)).scores for cl in member_lists]
        h_history.append(sum(table.lam1(tuple(cl)) for cl in member_lists))

        sims = np.empty((p, k))
        for j in range(p):
            for c in range(k):
                sims[j, c] = _variable_sim_to_scores(table, j, scores[c])

        new_memberships = []
        for j in range(p):
            best = float(sims[j].max())
            current = memberships[j]
            if sims[j, current] == best:
                new_memberships.append(current)  # keep the cluster on ties
            else:
                new_memberships.append(int(np.nonzero(sims[j] == best)[0][0]))

        # re-seed emptied clusters with the globally worst-fitting variable
        for c in range(k):
            if c in new_memberships:
                continue
            worst = None
            for j in range(p):
                owner = new_memberships[j]
                if new_memberships.count(owner) < 2:
                    continue
                fit = sims[j, owner]
                if worst is None or fit < sims[worst, new_memberships[worst]]:
                    worst = j
            new_memberships[worst] = c

        if new_memberships == memberships:
            converged = True
            break
        memberships = new_memberships

    final = [
        tuple(j for j in range(p) if memberships[j] == c) for c in range(k)
    ]
    h_final = sum(table.lam1(cl) for cl in final)
    h_history.append(h_final)
    return final, h_final, h_history, iterations, converged


def kmeansvar(vs: VariableSet, config: KmeansConfig) -> ClusterPartition:
    """Partition the variables into K clusters, maximizing homogeneity.

    With ``RandomInit(n_starts=m)`` the m runs are seeded independently
    and the partition with the highest homogeneity is returned (ties go
    to the lowest start index).  The result's ``meta`` records the seed,
    iteration count, convergence flag and the homogeneity trajectory of
    the winning run.
    """
    if not 1 <= config.k <= vs.p:
        raise DataError(f"K must be in [1, {vs.p}], got {config.k}")
    table = build_table(vs)

    starts: list[tuple] = []
    if isinstance(config.init, RandomInit):
        for s in range(config.init.n_starts):
            rng = np.random.default_rng(
                np.random.SeedSequence([config.init.seed, s])
            )
            starts.append((s, _random_partition(table, config.k, rng)))
    elif isinstance(config.init, GivenPartition):
        clusters = config.init.resolved(vs)
        if len(clusters) != config.k:
            raise DataError(
                f"initial partition has {len(clusters)} clusters, expected {config.k}"
            )
        starts.append((0, clusters))
    elif isinstance(config.init, GivenCenters):
        centers = list(resolve_members(vs, config.init.centers))
        if len(centers) != config.k:
            raise DataError(
                f"{len(centers)} centers given, expected {config.k}"
            )
        memberships = _allocate_to_centers(table, centers)
        clusters = tuple(
            tuple(j for j in range(table.p) if memberships[j] == c)
            for c in range(config.k)
        )
        starts.append((0, clusters))
    else:
        raise DataError(f"unsupported init: {config.init!r}")

    best = None
    for start_idx, clusters in starts:
        final, h_final, h_history, iterations, converged = _run_once(
            table, clusters, config.max_iter
        )
        if best is None or h_final > best[0]:
            best = (h_final, start_idx, final, h_history, iterations, converged)

    h_final, start_idx, final, h_history, iterations, converged = best
    meta = {
        "method": "kmeans",
        "k": config.k,
        "iterations": iterations,
        "converged": converged,
        "h_history": [float(h) for h in h_history],
    }
    if isinstance(config.init, RandomInit):
        meta["seed"] = config.init.seed
        meta["n_starts"] = config.init.n_starts
        meta["best_start"] = start_idx
    return build_partition(vs, final, with_sim=False, meta=meta)
