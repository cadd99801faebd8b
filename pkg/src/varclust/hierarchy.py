"""Bottom-up clustering of variables maximizing cluster homogeneity.

Starting from singletons, the pair of clusters with the smallest merge
dissimilarity d(A, B) = H(A) + H(B) - H(A u B) is aggregated at each
step; d is the homogeneity lost by the merge and becomes the dendrogram
height of the new node.  There is no shortcut update for d, so each
candidate costs one eigensolve; the pairwise table is cached and only the
entries involving the newly formed cluster are recomputed after a merge.

Heights are nonnegative up to rounding (clamped at zero within 1e-10).
Monotonicity of the heights along the tree is not guaranteed in general;
inversions are detected and reported in the result rather than repaired.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data_model import VariableSet
from .errors import DataError, NumericalError
from .partition import ClusterPartition, build_partition
from .pcamix import RecodedTable, build_table, resolve_members

HEIGHT_TOL = 1e-10


@dataclass(frozen=True)
class Merge:
    """One aggregation step: node ids of the merged clusters and the height."""

    left: int
    right: int
    height: float


@dataclass(frozen=True, eq=False)
class Hierarchy:
    """Sequence of p-1 merges over p leaves.

    Node ids 0..p-1 are the leaves (variables, in dataset order); merge t
    creates node p+t.  ``inversions`` lists the merge indices whose height
    is below a child's height.
    """

    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]
    inversions: tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.leaves)


def merge_dissimilarity(vs: VariableSet, a, b) -> float:
    """Homogeneity lost by merging two disjoint member sets."""
    a = resolve_members(vs, a)
    b = resolve_members(vs, b)
    if set(a) & set(b):
        raise DataError("member sets must be disjoint")
    table = build_table(vs)
    return _dissim(table, a, b, table.lam1(a), table.lam1(b))


def _dissim(table: RecodedTable, a, b, lam_a: float, lam_b: float) -> float:
    d = lam_a + lam_b - table.lam1(tuple(a) + tuple(b))
    if d < 0.0:
        if d < -HEIGHT_TOL:
            raise NumericalError(f"negative merge dissimilarity {d!r}")
        d = 0.0
    return d


def _agglomerate(table: RecodedTable) -> tuple[list[Merge], list[int]]:
    p = table.p
    members = {i: (i,) for i in range(p)}
    lam = {i: table.lam1((i,)) for i in range(p)}
    node_height = {i: 0.0 for i in range(p)}
    active = list(range(p))
    pair_d = {}
    for ia, a in enumerate(active):
        for b in active[ia + 1 :]:
            pair_d[(a, b)] = _dissim(table, members[a], members[b], lam[a], lam[b])

    merges: list[Merge] = []
    inversions: list[int] = []
    for t in range(p - 1):
        best = None
        best_pair = None
        for ia, a in enumerate(active):
            for b in active[ia + 1 :]:
                d = pair_d[(a, b) if a < b else (b, a)]
                m1 = min(members[a][0], members[b][0])
                m2 = max(members[a][0], members[b][0])
                # ties resolved by the smallest member index, then the
                # other cluster's smallest member index
                key = (d, m1, m2)
                if best is None or key < best:
                    best = key
                    best_pair = (a, b)
        a, b = best_pair
        if members[b][0] < members[a][0]:
            a, b = b, a
        new = p + t
        members[new] = tuple(sorted(members[a] + members[b]))
        lam[new] = table.lam1(members[new])
        height = best[0]
        if height < max(node_height[a], node_height[b]) - HEIGHT_TOL:
            inversions.append(t)
        node_height[new] = height
        merges.append(Merge(a, b, height))
        active = [x for x in active if x not in (a, b)]
        for x in active:
            pair_d[(min(x, new), max(x, new))] = _dissim(
                table, members[x], members[new], lam[x], lam[new]
            )
        active.append(new)
    return merges, inversions


def hclustvar(vs: VariableSet) -> Hierarchy:
    """Hierarchy of the variables by greedy homogeneity-preserving merges."""
    if vs.p < 2:
        raise DataError("clustering needs at least 2 variables")
    table = build_table(vs)
    merges, inversions = _agglomerate(table)
    return Hierarchy(
        leaves=vs.names, merges=tuple(merges), inversions=tuple(inversions)
    )


def _replay(h: Hierarchy, n_merges: int):
    """Member sets of the active nodes after the first n_merges merges."""
    p = h.p
    members = {i: (i,) for i in range(p)}
    active = list(range(p))
    for t in range(n_merges):
        m = h.merges[t]
        new = p + t
        members[new] = tuple(sorted(members[m.left] + members[m.right]))
        active = [x for x in active if x not in (m.left, m.right)]
        active.append(new)
    return [members[x] for x in active]


def cut_assignments(h: Hierarchy, k: int) -> tuple[int, ...]:
    """Cluster label (1..k) per variable for the k-cluster cut."""
    if not 1 <= k <= h.p:
        raise DataError(f"K must be in [1, {h.p}], got {k}")
    clusters = sorted(_replay(h, h.p - k), key=min)
    labels = [0] * h.p
    for num, c in enumerate(clusters, start=1):
        for i in c:
            labels[i] = num
    return tuple(labels)


def cut(h: Hierarchy, vs: VariableSet, k: int, with_sim: bool = False) -> ClusterPartition:
    """Cut the dendrogram into k clusters and assemble the partition.

    Similarity matrices are quadratic in cluster size and are only
    computed when ``with_sim`` is set.
    """
    if vs.names != h.leaves:
        raise DataError("variable set does not match the hierarchy leaves")
    if not 1 <= k <= h.p:
        raise DataError(f"K must be in [1, {h.p}], got {k}")
    clusters = sorted(_replay(h, h.p - k), key=min)
    meta = {"method": "hierarchical", "k": k}
    if h.inversions:
        meta["inversions"] = list(h.inversions)
    return build_partition(vs, clusters, with_sim=with_sim, meta=meta)


def aggregation_levels(h: Hierarchy) -> tuple[tuple[int, float], ...]:
    """(partition size before the merge, merge height), in merge order."""
    p = h.p
    return tuple((p - t, m.height) for t, m in enumerate(h.merges))


def _newick_label(name: str) -> str:
    if any(c in name for c in " \t()[]':;,"):
        return "'" + name.replace("'", "''") + "'"
    return name


def to_newick(h: Hierarchy) -> str:
    """Newick serialization with branch lengths derived from the heights.

    A leaf branch spans its parent's height; an internal branch spans the
    height difference to its parent, floored at zero when the tree has
    inversions.  The root carries no branch length.
    """
    p = h.p
    height = {i: 0.0 for i in range(p)}
    for t, m in enumerate(h.merges):
        height[p + t] = m.height

    def render(node: int) -> str:
        if node < p:
            return _newick_label(h.leaves[node])
        m = h.merges[node - p]
        parts = []
        for child in (m.left, m.right):
            branch = max(height[node] - height[child], 0.0)
            parts.append(f"{render(child)}:{branch:.10g}")
        return "(" + ",".join(parts) + ")"

    root = p + len(h.merges) - 1 if h.merges else 0
    return render(root) + ";"


def to_merge_records(h: Hierarchy) -> list[dict]:
    """JSON-ready merge list [{left, right, height}]."""
    return [
        {"left": m.left, "right": m.right, "height": m.height} for m in h.merges
    ]
