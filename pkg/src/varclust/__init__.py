"""Clustering of mixed quantitative/qualitative variables.

Variables are grouped so that each cluster is well summarized by a single
quantitative synthetic variable (its first principal component); cluster
quality is the sum of squared correlations and correlation ratios between
the members and that component.  The package provides a hierarchical
algorithm, a k-means-type algorithm, pairwise mixed-type similarities and
a bootstrap stability diagnostic, plus a CLI (``varclust``).
"""

from .data_model import (
    IndicatorMatrix,
    QualitativeVariable,
    QuantitativeVariable,
    VariableSet,
    build_indicator,
    impute_missing,
    load_csv,
    write_csv,
)
from .errors import DataError, NumericalError, RareCategoryError, VarclustError
from .hierarchy import (
    Hierarchy,
    aggregation_levels,
    cut,
    cut_assignments,
    hclustvar,
    merge_dissimilarity,
    to_newick,
)
from .partition import ClusterPartition, build_partition
from .partitioning import (
    GivenCenters,
    GivenPartition,
    KmeansConfig,
    RandomInit,
    init_random,
    kmeansvar,
)
from .pcamix import (
    RecodedMatrix,
    SyntheticVariable,
    cluster_homogeneity,
    correlation_ratio,
    gain_in_cohesion,
    leading_component,
    partition_homogeneity,
    recode,
)
from .similarity import SimilarityMatrix, canonical_corr, cluster_sim_matrix, mixed_var_sim
from .stability import StabilityResult, bootstrap_stability, rand_indices

__version__ = "0.1.0"

__all__ = [
    "ClusterPartition",
    "DataError",
    "GivenCenters",
    "GivenPartition",
    "Hierarchy",
    "IndicatorMatrix",
    "KmeansConfig",
    "NumericalError",
    "QualitativeVariable",
    "QuantitativeVariable",
    "RandomInit",
    "RareCategoryError",
    "RecodedMatrix",
    "SimilarityMatrix",
    "StabilityResult",
    "SyntheticVariable",
    "VariableSet",
    "VarclustError",
    "aggregation_levels",
    "bootstrap_stability",
    "build_indicator",
    "build_partition",
    "canonical_corr",
    "cluster_homogeneity",
    "cluster_sim_matrix",
    "correlation_ratio",
    "cut",
    "cut_assignments",
    "gain_in_cohesion",
    "hclustvar",
    "impute_missing",
    "init_random",
    "kmeansvar",
    "leading_component",
    "load_csv",
    "merge_dissimilarity",
    "mixed_var_sim",
    "partition_homogeneity",
    "rand_indices",
    "recode",
    "to_newick",
    "write_csv",
]
