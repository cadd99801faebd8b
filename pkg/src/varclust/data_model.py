"""Typed mixed-variable table: CSV ingestion, missing values, indicators.

A dataset is a :class:`VariableSet` holding quantitative and qualitative
variables over the same observations.  Missing entries are imputed by the
column mean (quantitative) or carried as an all-zero indicator row
(qualitative); the missing mask is retained so reports can state how much
was imputed.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True, eq=False)
class QuantitativeVariable:
    """A real-valued column; missing entries are NaN until imputation."""

    name: str
    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).copy()
        missing = np.asarray(self.missing, dtype=bool).copy()
        if values.ndim != 1 or missing.shape != values.shape:
            raise DataError(f"variable {self.name!r}: values and mask must be 1-d and aligned")
        values.flags.writeable = False
        missing.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "missing", missing)

    @property
    def is_qualitative(self) -> bool:
        return False

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    def take_rows(self, idx: np.ndarray) -> "QuantitativeVariable":
        return QuantitativeVariable(self.name, self.values[idx], self.missing[idx])

    def __eq__(self, other):
        return (
            isinstance(other, QuantitativeVariable)
            and self.name == other.name
            and np.array_equal(self.values, other.values, equal_nan=True)
            and np.array_equal(self.missing, other.missing)
        )


@dataclass(frozen=True, eq=False)
class QualitativeVariable:
    """A categorical column stored as level codes; -1 marks missing.

    ``levels`` keeps first-appearance order and lists observed levels only,
    so every level has a nonzero count on the full data.
    """

    name: str
    codes: np.ndarray
    levels: tuple[str, ...]

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64).copy()
        if codes.ndim != 1:
            raise DataError(f"variable {self.name!r}: codes must be 1-d")
        if codes.max(initial=-1) >= len(self.levels):
            raise DataError(f"variable {self.name!r}: code out of range")
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "levels", tuple(self.levels))

    @property
    def is_qualitative(self) -> bool:
        return True

    @property
    def n_obs(self) -> int:
        return self.codes.shape[0]

    @property
    def missing(self) -> np.ndarray:
        return self.codes < 0

    def take_rows(self, idx: np.ndarray) -> "QualitativeVariable":
        # the level list is kept as-is: a level can lose all its rows on a
        # bootstrap resample, which downstream recoding reports as a rare
        # category failure
        return QualitativeVariable(self.name, self.codes[idx], self.levels)

    def __eq__(self, other):
        return (
            isinstance(other, QualitativeVariable)
            and self.name == other.name
            and self.levels == other.levels
            and np.array_equal(self.codes, other.codes)
        )


Variable = QuantitativeVariable | QualitativeVariable


@dataclass(frozen=True, eq=False)
class VariableSet:
    """An ordered collection of variables over common observations."""

    n_obs: int
    variables: tuple[Variable, ...]
    obs_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if any(not n for n in names):
            raise DataError("variable names must be non-empty")
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise DataError(f"duplicate column names: {sorted(dupes)}")
        for v in self.variables:
            if v.n_obs != self.n_obs:
                raise DataError(
                    f"variable {v.name!r} has {v.n_obs} entries, expected {self.n_obs}"
                )
        if self.obs_labels is not None:
            labels = tuple(self.obs_labels)
            if len(labels) != self.n_obs:
                raise DataError("obs_labels length does not match n_obs")
            object.__setattr__(self, "obs_labels", labels)

    @property
    def p(self) -> int:
        return len(self.variables)

    @property
    def p_quantitative(self) -> int:
        return sum(not v.is_qualitative for v in self.variables)

    @property
    def p_qualitative(self) -> int:
        return sum(v.is_qualitative for v in self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise DataError(f"unknown variable {name!r}")

    def subset(self, names) -> "VariableSet":
        """New VariableSet with the named variables, in the given order."""
        picked = tuple(self.variables[self.index_of(n)] for n in names)
        return VariableSet(self.n_obs, picked, self.obs_labels)

    def take_rows(self, idx) -> "VariableSet":
        """Row-resampled copy (used by the bootstrap); labels are dropped."""
        idx = np.asarray(idx, dtype=np.int64)
        return VariableSet(
            int(idx.shape[0]), tuple(v.take_rows(idx) for v in self.variables)
        )

    def __eq__(self, other):
        return (
            isinstance(other, VariableSet)
            and self.n_obs == other.n_obs
            and self.obs_labels == other.obs_labels
            and self.variables == other.variables
        )


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    """0/1 membership matrix of a qualitative variable.

    Fully-observed rows sum to one, rows for missing entries are all-zero,
    and the level counts are the observed counts.
    """

    matrix: np.ndarray
    level_counts: tuple[int, ...]
    level_names: tuple[str, ...]


def _parse_float(token: str) -> float | None:
    try:
        v = float(token)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def load_csv(
    path,
    quali_columns="infer",
    na_token: str = "NA",
    schema_path=None,
) -> VariableSet:
    """Read a header-first CSV file into a :class:`VariableSet`.

    Parameters
    ----------
    path : str or Path
        CSV file, UTF-8, RFC-4180 style, header row required.  A leading
        column with an empty header cell is taken as observation labels.
    quali_columns : list of str or "infer"
        Names of qualitative columns.  With ``"infer"``, any column
        containing a non-numeric, non-missing token is qualitative.
    na_token : str
        Token marking a missing entry (empty cells count as missing too).
    schema_path : str or Path, optional
        JSON sidecar ``{column: "quanti" | "quali"}`` overriding the
        inference for the listed columns.

    Raises
    ------
    DataError
        On duplicate column names, a qualitative column with fewer than
        two observed levels, or a constant quantitative column (which
        could not be standardized later).
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file, header row required")
    header = rows[0]
    body = rows[1:]

    has_labels = len(header) > 0 and header[0] == ""
    col_names = header[1:] if has_labels else header
    if not col_names:
        raise DataError(f"{path}: no data columns")
    dupes = {n for n in col_names if col_names.count(n) > 1}
    if dupes:
        raise DataError(f"{path}: duplicate column names: {sorted(dupes)}")

    for i, row in enumerate(body):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i + 2} has {len(row)} fields, expected {len(header)}")

    labels = tuple(r[0] for r in body) if has_labels else None
    columns = {
        name: [r[j + (1 if has_labels else 0)] for r in body]
        for j, name in enumerate(col_names)
    }

    schema = {}
    if schema_path is not None:
        with open(schema_path, encoding="utf-8") as fh:
            schema = json.load(fh)
        bad = {k: v for k, v in schema.items() if v not in ("quanti", "quali")}
        if bad:
            raise DataError(f"schema values must be 'quanti' or 'quali', got {bad}")
        unknown = sorted(set(schema) - set(col_names))
        if unknown:
            raise DataError(f"schema names columns not in the file: {unknown}")

    infer = isinstance(quali_columns, str) and quali_columns == "infer"
    if not infer:
        quali_columns = list(quali_columns)
        unknown = sorted(set(quali_columns) - set(col_names))
        if unknown:
            raise DataError(f"qualitative columns not in the header: {unknown}")

    def is_missing(tok: str) -> bool:
        return tok == na_token or tok == ""

    def column_kind(name: str) -> str:
        if name in schema:
            return schema[name]
        if infer:
            for tok in columns[name]:
                if not is_missing(tok) and _parse_float(tok) is None:
                    return "quali"
            return "quanti"
        return "quali" if name in quali_columns else "quanti"

    variables: list[Variable] = []
    for name in col_names:
        raw = columns[name]
        if column_kind(name) == "quali":
            levels: list[str] = []
            lookup: dict[str, int] = {}
            codes = np.empty(len(raw), dtype=np.int64)
            for i, tok in enumerate(raw):
                if is_missing(tok):
                    codes[i] = -1
                else:
                    if tok not in lookup:
                        lookup[tok] = len(levels)
                        levels.append(tok)
                    codes[i] = lookup[tok]
            if len(levels) < 2:
                raise DataError(
                    f"qualitative column {name!r} has {len(levels)} observed level(s), need >= 2"
                )
            variables.append(QualitativeVariable(name, codes, tuple(levels)))
        else:
            values = np.full(len(raw), np.nan)
            missing = np.zeros(len(raw), dtype=bool)
            for i, tok in enumerate(raw):
                v = None if is_missing(tok) else _parse_float(tok)
                if v is None:
                    missing[i] = True
                else:
                    values[i] = v
            observed = values[~missing]
            if observed.size == 0:
                raise DataError(f"quantitative column {name!r} has no observed entries")
            if observed.std() == 0.0:
                raise DataError(f"quantitative column {name!r} is constant and cannot be standardized")
            variables.append(QuantitativeVariable(name, values, missing))

    return VariableSet(len(body), tuple(variables), labels)


def write_csv(vs: VariableSet, path, na_token: str = "NA") -> None:
    """Serialize a VariableSet back to CSV (inverse of :func:`load_csv`)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = ([""] if vs.obs_labels is not None else []) + list(vs.names)
        writer.writerow(header)
        for i in range(vs.n_obs):
            row = [vs.obs_labels[i]] if vs.obs_labels is not None else []
            for v in vs.variables:
                if v.is_qualitative:
                    code = v.codes[i]
                    row.append(na_token if code < 0 else v.levels[code])
                else:
                    row.append(na_token if v.missing[i] else repr(float(v.values[i])))
            writer.writerow(row)


def impute_missing(vs: VariableSet) -> VariableSet:
    """Fill missing entries: column mean for quantitative variables.

    Qualitative missing entries stay coded -1, which recoding turns into
    an all-zero indicator row.  The missing masks are retained.  Complete
    datasets are returned unchanged; the operation is idempotent.
    """
    changed = False
    out: list[Variable] = []
    for v in vs.variables:
        if not v.is_qualitative and v.missing.any():
            observed = v.values[~v.missing]
            if observed.size == 0:
                raise DataError(f"variable {v.name!r} has all entries missing")
            filled = v.values.copy()
            filled[v.missing] = observed.mean()
            out.append(QuantitativeVariable(v.name, filled, v.missing))
            changed = True
        else:
            if v.n_obs > 0 and np.all(v.missing):
                raise DataError(f"variable {v.name!r} has all entries missing")
            out.append(v)
    if not changed:
        return vs
    return VariableSet(vs.n_obs, tuple(out), vs.obs_labels)


def build_indicator(z: QualitativeVariable) -> IndicatorMatrix:
    """Indicator matrix of a qualitative variable, columns in level order."""
    if len(z.levels) < 2 or len(set(z.codes[z.codes >= 0])) < 2:
        raise DataError(f"variable {z.name!r} needs >= 2 observed levels")
    n = z.n_obs
    m = len(z.levels)
    g = np.zeros((n, m))
    observed = z.codes >= 0
    g[np.nonzero(observed)[0], z.codes[observed]] = 1.0
    counts = tuple(int(c) for c in g.sum(axis=0))
    return IndicatorMatrix(g, counts, z.levels)
