"""Squared canonical correlation between variables of any type.

The similarity between two variables is the first eigenvalue of the
smallest of the three cross-product matrices built from their recoded
blocks (each divided by sqrt(n)).  It specializes to the squared Pearson
correlation for two quantitative variables and to the correlation ratio
for a quantitative/qualitative pair; for two qualitative variables it
measures the closeness of the subspaces spanned by the indicator blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import VariableSet
from .errors import DataError, NumericalError
from .pcamix import RecodedTable, build_table, recode, resolve_members


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric matrix of pairwise similarities with unit diagonal."""

    names: tuple[str, ...]
    values: np.ndarray

    def entry(self, a: str, b: str) -> float:
        return float(self.values[self.names.index(a), self.names.index(b)])


def _clamp01(x: float) -> float:
    # eigensolves can land a hair outside [0, 1]
    return min(1.0, max(0.0, x))


def canonical_corr(e: np.ndarray, f: np.ndarray) -> float:
    """Squared canonical correlation of two recoded blocks.

    Blocks must be centered/standardized and divided by sqrt(n), as
    produced by the recoding step.  The eigensolve runs on the smallest
    of E E'F F' (n x n), E'F F'E (r1 x r1) and F'E E'F (r2 x r2); the
    three share their nonzero spectrum.
    """
    e = np.atleast_2d(np.asarray(e, dtype=np.float64))
    f = np.atleast_2d(np.asarray(f, dtype=np.float64))
    if e.shape[0] == 1:
        e = e.T
    if f.shape[0] == 1:
        f = f.T
    if e.shape[0] != f.shape[0]:
        raise DataError("blocks must have the same number of rows")
    if not e.any() or not f.any():
        raise NumericalError("canonical correlation undefined for a zero block")
    n, r1 = e.shape
    r2 = f.shape[1]
    if r1 == 1 and r2 == 1:
        return _clamp01(float(e[:, 0] @ f[:, 0]) ** 2)
    smallest = min(n, r1, r2)
    if smallest == n:
        # product of the two n x n Gram matrices; not symmetric, but its
        # nonzero spectrum is real and matches the two block-side cases
        mat = (e @ e.T) @ (f @ f.T)
        return _clamp01(float(np.max(np.linalg.eigvals(mat).real)))
    if smallest == r1:
        cross = e.T @ f
    else:
        cross = f.T @ e
    return _clamp01(float(np.linalg.eigvalsh(cross @ cross.T)[-1]))


def _scaled_block(table: RecodedTable, i: int) -> np.ndarray:
    cols = table.var_cols[i]
    return table.matrix[:, cols] / np.sqrt(table.n_obs)


def mixed_var_sim(vs: VariableSet, i, j) -> float:
    """Similarity between two variables of any type, in [0, 1].

    Dispatches to :func:`canonical_corr` on the single-variable recoded
    blocks: r^2 for two quantitative variables, the correlation ratio for
    a mixed pair, subspace closeness for two qualitative variables.
    """
    (i,) = resolve_members(vs, [i])
    (j,) = resolve_members(vs, [j])
    if i == j:
        return 1.0
    ei = recode(vs, [i])
    ej = recode(vs, [j])
    n = float(vs.n_obs)
    return canonical_corr(ei.matrix / np.sqrt(n), ej.matrix / np.sqrt(n))


def cluster_sim_matrix(vs: VariableSet, members) -> SimilarityMatrix:
    """Pairwise similarity matrix of the member variables.

    Quadratic in the cluster size; callers expose it behind an explicit
    flag rather than computing it by default.
    """
    members = resolve_members(vs, members)
    table = build_table(vs.subset([vs.variables[i].name for i in members]))
    k = len(members)
    blocks = [_scaled_block(table, t) for t in range(k)]
    out = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            s = canonical_corr(blocks[a], blocks[b])
            out[a, b] = s
            out[b, a] = s
    return SimilarityMatrix(
        names=tuple(vs.variables[i].name for i in members), values=out
    )
