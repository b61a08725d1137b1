"""Shapelet-based source selection and super-dataset construction for
time series transfer learning.

The toolkit discovers class-discriminative shapelets with matrix profiles,
compares them across datasets to rank candidate pre-training sources, and
assembles the selected sources into one balanced, resampled, label-offset
super dataset ready for multi-source pre-training.
"""

from .dataset_io import (
    SIGMA_EPSILON,
    DatasetFormatError,
    LabeledDataset,
    LabeledSeries,
    ResampleSpec,
    dataset_metadata,
    dataset_name_from_path,
    load_ucr_tsv,
    resample,
    resample_dataset,
    resample_spec_for,
    save_metadata,
    save_tsv,
)
from .matrix_profile import (
    ConcatenatedClassSeries,
    MatrixProfile,
    ab_join,
    brute_force_join,
    concatenate_rest,
    cross_class_profiles,
    subsequences,
)
from .shapelets import (
    Shapelet,
    ShapeletSet,
    difference_profile,
    discover,
    load_shapelet_set,
    save_shapelet_set,
    select_top_positions,
    shapelet_set_from_json_dict,
    shapelet_set_to_json_dict,
)
from .distances import (
    MEASURES,
    DatasetDistance,
    DbaPrototype,
    avg_shapelet_distance,
    class_prototypes,
    dba,
    dba_dtw_distance,
    dtw,
    medoid_index,
    min_shapelet_distance,
    shapelet_l2,
)
from .transferability import (
    LeepScore,
    PredictionMatrix,
    empirical_conditional,
    leep,
    leep_report,
    load_prediction_csv,
)
from .pipeline import (
    DEFAULT_NUM_SOURCES,
    DEFAULT_TOP_K,
    DEFAULT_WINDOW,
    MANIFEST_SCHEMA,
    RankEntry,
    RankFailure,
    SourceManifestEntry,
    SourceRanking,
    SuperDatasetManifest,
    balanced_class_counts,
    build_super_dataset,
    pairwise_distance,
    rank_sources,
    write_super_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "SIGMA_EPSILON",
    "DatasetFormatError",
    "LabeledDataset",
    "LabeledSeries",
    "ResampleSpec",
    "dataset_metadata",
    "dataset_name_from_path",
    "load_ucr_tsv",
    "resample",
    "resample_dataset",
    "resample_spec_for",
    "save_metadata",
    "save_tsv",
    "ConcatenatedClassSeries",
    "MatrixProfile",
    "ab_join",
    "brute_force_join",
    "concatenate_rest",
    "cross_class_profiles",
    "subsequences",
    "Shapelet",
    "ShapeletSet",
    "difference_profile",
    "discover",
    "load_shapelet_set",
    "save_shapelet_set",
    "select_top_positions",
    "shapelet_set_from_json_dict",
    "shapelet_set_to_json_dict",
    "MEASURES",
    "DatasetDistance",
    "DbaPrototype",
    "avg_shapelet_distance",
    "class_prototypes",
    "dba",
    "dba_dtw_distance",
    "dtw",
    "medoid_index",
    "min_shapelet_distance",
    "shapelet_l2",
    "LeepScore",
    "PredictionMatrix",
    "empirical_conditional",
    "leep",
    "leep_report",
    "load_prediction_csv",
    "DEFAULT_NUM_SOURCES",
    "DEFAULT_TOP_K",
    "DEFAULT_WINDOW",
    "MANIFEST_SCHEMA",
    "RankEntry",
    "RankFailure",
    "SourceManifestEntry",
    "SourceRanking",
    "SuperDatasetManifest",
    "balanced_class_counts",
    "build_super_dataset",
    "pairwise_distance",
    "rank_sources",
    "write_super_dataset",
]
