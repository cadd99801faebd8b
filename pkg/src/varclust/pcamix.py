"""Recoding of mixed variables and extraction of cluster synthetic variables.

A set of variables is recoded into a single numeric matrix: quantitative
columns are centered and reduced by the biased (1/n) standard deviation;
each qualitative variable contributes its centered indicator columns
scaled by sqrt(n / n_s), with n_s the observed count of level s
(equivalently J G D^-1/2 with D the diagonal of relative frequencies).

The synthetic variable of a variable cluster is the first principal
component of that matrix: the SVD of M/sqrt(n) = U L V' gives eigenvalues
l_i = L_ii^2 and scores sqrt(n) U L.  Under the 1/n conventions the biased
variance of the scores equals the leading eigenvalue, which also equals
the sum of the squared loadings (squared correlation for a quantitative
member, correlation ratio for a qualitative member).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data_model import QualitativeVariable, Variable, VariableSet, impute_missing
from .errors import DataError, NumericalError, RareCategoryError

MEAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class RecodedMatrix:
    """Centered/standardized numeric matrix for a set of variables.

    Columns hold the quantitative members first, then the qualitative
    indicator blocks, both in member order.  ``column_owner[j]`` is the
    index (within ``members``) of the variable owning column j.
    """

    matrix: np.ndarray
    column_owner: tuple[int, ...]
    members: tuple[int, ...]
    variables: tuple[Variable, ...]
    n_obs: int


@dataclass(frozen=True, eq=False)
class SyntheticVariable:
    """First principal component of a cluster's recoded matrix."""

    scores: np.ndarray
    eigenvalue: float
    member_names: tuple[str, ...]
    squared_loadings: tuple[float, ...]
    spectrum: np.ndarray

    def loading(self, name: str) -> float:
        return self.squared_loadings[self.member_names.index(name)]


def _standardized(values: np.ndarray, name: str) -> np.ndarray:
    sd = values.std()  # biased, 1/n
    if sd == 0.0:
        raise RareCategoryError(name, "zero variance")
    return (values - values.mean()) / sd


def _indicator_block(v: QualitativeVariable) -> np.ndarray:
    n = v.n_obs
    counts = np.zeros(len(v.levels))
    observed = v.codes >= 0
    np.add.at(counts, v.codes[observed], 1.0)
    zero = np.nonzero(counts == 0.0)[0]
    if zero.size:
        raise RareCategoryError(
            v.name, f"level {v.levels[zero[0]]!r} has no observations on these rows"
        )
    g = np.zeros((n, len(v.levels)))
    g[np.nonzero(observed)[0], v.codes[observed]] = 1.0
    return (g - counts / n) * np.sqrt(n / counts)


def _variable_block(v: Variable) -> np.ndarray:
    if v.is_qualitative:
        return _indicator_block(v)
    return _standardized(v.values, v.name)[:, None]


def resolve_members(vs: VariableSet, members) -> tuple[int, ...]:
    """Normalize a member collection (indices or names) to indices."""
    out = []
    for m in members:
        if isinstance(m, str):
            out.append(vs.index_of(m))
        else:
            i = int(m)
            if not 0 <= i < vs.p:
                raise DataError(f"variable index {i} out of range")
            out.append(i)
    if not out:
        raise DataError("member set is empty")
    if len(set(out)) != len(out):
        raise DataError("member set has duplicates")
    return tuple(out)


def recode(vs: VariableSet, members) -> RecodedMatrix:
    """Build the recoded matrix M for the given member variables.

    Missing entries are imputed first (column means / all-zero indicator
    rows).  Raises RareCategoryError for a zero-variance member or a
    qualitative level with no observations on the current rows, which can
    arise on bootstrap resamples.
    """
    members = resolve_members(vs, members)
    vs = impute_missing(vs)
    ordered = [i for i in members if not vs.variables[i].is_qualitative]
    ordered += [i for i in members if vs.variables[i].is_qualitative]
    blocks = []
    owner = []
    for i in ordered:
        block = _variable_block(vs.variables[i])
        blocks.append(block)
        owner.extend([members.index(i)] * block.shape[1])
    return RecodedMatrix(
        matrix=np.ascontiguousarray(np.hstack(blocks)),
        column_owner=tuple(owner),
        members=members,
        variables=tuple(vs.variables[i] for i in members),
        n_obs=vs.n_obs,
    )


def _oriented_scores(scores: np.ndarray, variables, loadings) -> np.ndarray:
    """Fix the sign of a score vector.

    The scores are flipped so that the quantitative member with the
    largest squared loading (ties: earliest member) correlates positively
    with them.  A cluster with no quantitative member has no natural
    orientation; the largest-magnitude score entry (ties: earliest
    observation) is made positive instead.
    """
    best = -1
    for i, v in enumerate(variables):
        if v.is_qualitative:
            continue
        if best < 0 or loadings[i] > loadings[best]:
            best = i
    if best >= 0:
        x = variables[best].values
        cov = float((x - x.mean()) @ (scores - scores.mean()))
        return -scores if cov < 0 else scores
    anchor = int(np.argmax(np.abs(scores)))
    return -scores if scores[anchor] < 0 else scores


def leading_component(m: RecodedMatrix) -> SyntheticVariable:
    """First principal component of a recoded matrix.

    Returns the scores, the full eigenvalue spectrum, and the squared
    loading of each member against the scores (squared Pearson
    correlation for quantitative members, correlation ratio for
    qualitative members).
    """
    if m.matrix.shape[1] == 0:
        raise DataError("empty recoded matrix")
    cols = np.arange(m.matrix.shape[1], dtype=np.int64)
    spectrum, scores = _kernels.svd_scores_cols(m.matrix, cols)
    loadings = []
    for v in m.variables:
        if v.is_qualitative:
            loadings.append(_kernels.eta_sq(scores, v.codes, len(v.levels)))
        else:
            loadings.append(_kernels.r_sq(v.values, scores))
    scores = _oriented_scores(scores, m.variables, loadings)
    return SyntheticVariable(
        scores=scores,
        eigenvalue=float(spectrum[0]),
        member_names=tuple(v.name for v in m.variables),
        squared_loadings=tuple(loadings),
        spectrum=spectrum,
    )


@dataclass(frozen=True, eq=False)
class RecodedTable:
    """Whole-dataset recoding with per-variable column ranges.

    The recoded block of a variable does not depend on which cluster it
    sits in, so the clustering algorithms recode every variable once and
    assemble cluster matrices by column selection.
    """

    matrix: np.ndarray
    var_cols: tuple[np.ndarray, ...]
    vs: VariableSet

    @property
    def p(self) -> int:
        return len(self.var_cols)

    @property
    def n_obs(self) -> int:
        return self.matrix.shape[0]

    def cols_for(self, members) -> np.ndarray:
        return np.concatenate([self.var_cols[i] for i in members])

    def lam1(self, members) -> float:
        return _kernels.lam1_cols(self.matrix, self.cols_for(members))

    def component(self, members) -> SyntheticVariable:
        """Synthetic variable for a member set, with oriented scores."""
        spectrum, scores = _kernels.svd_scores_cols(self.matrix, self.cols_for(members))
        variables = [self.vs.variables[i] for i in members]
        loadings = []
        for v in variables:
            if v.is_qualitative:
                loadings.append(_kernels.eta_sq(scores, v.codes, len(v.levels)))
            else:
                loadings.append(_kernels.r_sq(v.values, scores))
        scores = _oriented_scores(scores, variables, loadings)
        return SyntheticVariable(
            scores=scores,
            eigenvalue=float(spectrum[0]),
            member_names=tuple(v.name for v in variables),
            squared_loadings=tuple(loadings),
            spectrum=spectrum,
        )


def build_table(vs: VariableSet) -> RecodedTable:
    """Recode every variable of the set (imputing missing entries first)."""
    vs = impute_missing(vs)
    blocks = []
    ranges = []
    start = 0
    for v in vs.variables:
        block = _variable_block(v)
        blocks.append(block)
        ranges.append(np.arange(start, start + block.shape[1], dtype=np.int64))
        start += block.shape[1]
    return RecodedTable(
        matrix=np.ascontiguousarray(np.hstack(blocks)), var_cols=tuple(ranges), vs=vs
    )


def correlation_ratio(u: np.ndarray, z: QualitativeVariable) -> float:
    """Share of the variance of u explained by the categories of z.

    sum_s n_s (mean_s(u) - mean(u))^2 / sum_i (u_i - mean(u))^2, with n_s
    the observed count of level s.  Raises for constant u (0/0).
    """
    u = np.asarray(u, dtype=np.float64)
    if u.shape[0] != z.n_obs:
        raise DataError("u and z must have the same number of observations")
    if np.ptp(u) == 0.0:
        raise NumericalError("correlation ratio undefined for a constant vector")
    return _kernels.eta_sq(u, z.codes, len(z.levels))


def cluster_homogeneity(vs: VariableSet, members) -> float:
    """Leading eigenvalue of the cluster's recoded matrix."""
    m = recode(vs, members)
    cols = np.arange(m.matrix.shape[1], dtype=np.int64)
    return _kernels.lam1_cols(m.matrix, cols)


def check_partition(vs: VariableSet, partition) -> tuple[tuple[int, ...], ...]:
    """Validate that clusters are nonempty, disjoint and cover all variables."""
    clusters = tuple(resolve_members(vs, c) for c in partition)
    if not clusters:
        raise DataError("partition has no clusters")
    seen: list[int] = []
    for c in clusters:
        seen.extend(c)
    if len(seen) != len(set(seen)):
        raise DataError("clusters are not disjoint")
    if set(seen) != set(range(vs.p)):
        raise DataError("clusters do not cover all variables")
    return clusters


def partition_homogeneity(vs: VariableSet, partition) -> float:
    """Sum of the cluster homogeneities (the within-cluster criterion)."""
    clusters = check_partition(vs, partition)
    return float(sum(cluster_homogeneity(vs, c) for c in clusters))


def gain_in_cohesion(vs: VariableSet, partition) -> float:
    """Percentage of the reachable homogeneity captured by a partition.

    100 * (H(P_K) - H(P_1)) / (p - H(P_1)) where H(P_1) is the one-cluster
    homogeneity.  Undefined when all variables carry identical information
    (p = H(P_1)).
    """
    clusters = check_partition(vs, partition)
    h_k = float(sum(cluster_homogeneity(vs, c) for c in clusters))
    h_1 = cluster_homogeneity(vs, range(vs.p))
    denom = vs.p - h_1
    if denom <= 1e-9 * vs.p:
        raise NumericalError(
            "gain in cohesion undefined: all variables carry identical information"
        )
    return 100.0 * (h_k - h_1) / denom
