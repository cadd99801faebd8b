"""ClusterPartition: K clusters of variables with their synthetic variables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data_model import VariableSet
from .errors import NumericalError
from .pcamix import SyntheticVariable, build_table, check_partition
from .similarity import SimilarityMatrix, cluster_sim_matrix


@dataclass(frozen=True, eq=False)
class ClusterPartition:
    """A partition of the variables with per-cluster synthetic variables.

    Clusters are numbered 1..K by their smallest member variable index.
    ``wss`` is the partition homogeneity (sum of the leading eigenvalues)
    and ``gain`` the percentage of reachable homogeneity it captures.
    """

    variable_names: tuple[str, ...]
    assignments: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...]
    synthetic: tuple[SyntheticVariable, ...]
    wss: float
    gain: float
    scores: np.ndarray
    sim: tuple[SimilarityMatrix, ...] | None
    obs_labels: tuple[str, ...] | None
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.clusters)

    def members_of(self, k: int) -> tuple[str, ...]:
        """Names of the variables in cluster k (1-based)."""
        return tuple(self.variable_names[i] for i in self.clusters[k - 1])

    def cluster_containing(self, name: str) -> int:
        return self.assignments[self.variable_names.index(name)]


def build_partition(
    vs: VariableSet, clusters, with_sim: bool = False, meta: dict | None = None
) -> ClusterPartition:
    """Assemble a ClusterPartition from explicit member sets."""
    clusters = check_partition(vs, clusters)
    clusters = tuple(sorted((tuple(sorted(c)) for c in clusters), key=min))
    table = build_table(vs)

    synthetic = tuple(table.component(c) for c in clusters)
    wss = float(sum(s.eigenvalue for s in synthetic))
    h_1 = table.lam1(tuple(range(vs.p))) if vs.p > 1 else 1.0
    denom = vs.p - h_1
    if denom <= 1e-9 * vs.p:
        raise NumericalError(
            "gain in cohesion undefined: all variables carry identical information"
        )
    gain = 100.0 * (wss - h_1) / denom

    assignments = [0] * vs.p
    for k, c in enumerate(clusters, start=1):
        for i in c:
            assignments[i] = k
    scores = np.column_stack([s.scores for s in synthetic])

    sim = None
    if with_sim:
        sim = tuple(
            cluster_sim_matrix(vs, [vs.variables[i].name for i in c]) for c in clusters
        )

    return ClusterPartition(
        variable_names=vs.names,
        assignments=tuple(assignments),
        clusters=clusters,
        synthetic=synthetic,
        wss=wss,
        gain=gain,
        scores=scores,
        sim=sim,
        obs_labels=vs.obs_labels,
        meta=dict(meta or {}),
    )
