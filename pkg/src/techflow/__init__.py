"""Assess relative technology advancement from bibliographic records.

The package turns field-tagged bibliographic export files into technology
corpora, filters them with a linear text classifier, counts cross-citations
between technologies, and scores each technology by how much the others
build on its literature. Baseline indicators (h-index, g-index, degree
centralities), year-by-year assessment, ranking evaluation against a known
order, and a synthetic study generator round out the toolkit. Everything is
deterministic for a fixed seed.
"""

from .advancement import (
    AdvancementResult,
    Dominance,
    ModelParams,
    advancement_index,
    pairwise_dominance,
    rank,
)
from .baselines import (
    CitationProfile,
    CentralityResult,
    baselines_table,
    degree_centrality,
    g_index,
    h_index,
    profile_from_corpus,
)
from .errors import (
    AllZeroMatrix,
    DuplicateDoi,
    EmptyCorpus,
    EmptySeries,
    EncodingError,
    IndexOutOfRange,
    InvalidParams,
    InvalidRange,
    InvalidSpec,
    MalformedRecord,
    NoAssessableYear,
    NoEvaluableYear,
    PoolTooSmall,
    SameIndex,
    SameLabel,
    SchemaError,
    SingleClass,
    TechflowError,
    TooFewExamples,
    TooFewLabels,
    TooFewTechnologies,
    UnknownLabel,
)
from .evaluation import (
    EvaluationReport,
    GroundTruth,
    evaluate_methods,
    pairwise_accuracy,
    top1_accuracy,
)
from .filtering import (
    ClassifierModel,
    LabeledExample,
    StabilityCurve,
    StabilityPoint,
    classify,
    stability_curve,
    stable_sample_size,
    train,
)
from .graph import (
    CrossCitationMatrix,
    DegreeSummary,
    build_matrix,
    cross_citations,
    degree_summary,
    in_degree,
    intra_citations,
    out_degree,
    read_matrix,
    write_matrix,
)
from .records import (
    BiblioRecord,
    TechCorpus,
    load_canonical,
    normalize_doi,
    parse_export,
    save_canonical,
    write_export,
)
from .synthetic import SyntheticSpec, SyntheticStudy, generate
from .timeseries import (
    VolumeSeries,
    YearScores,
    cumulative_slice,
    method_scores,
    onset_year,
    score_series,
    volume_series,
)

__version__ = "0.1.0"

__all__ = [
    "AdvancementResult",
    "AllZeroMatrix",
    "BiblioRecord",
    "CentralityResult",
    "CitationProfile",
    "ClassifierModel",
    "CrossCitationMatrix",
    "DegreeSummary",
    "Dominance",
    "DuplicateDoi",
    "EmptyCorpus",
    "EmptySeries",
    "EncodingError",
    "EvaluationReport",
    "GroundTruth",
    "IndexOutOfRange",
    "InvalidParams",
    "InvalidRange",
    "InvalidSpec",
    "LabeledExample",
    "MalformedRecord",
    "ModelParams",
    "NoAssessableYear",
    "NoEvaluableYear",
    "PoolTooSmall",
    "SameIndex",
    "SameLabel",
    "SchemaError",
    "SingleClass",
    "StabilityCurve",
    "StabilityPoint",
    "SyntheticSpec",
    "SyntheticStudy",
    "TechCorpus",
    "TechflowError",
    "TooFewExamples",
    "TooFewLabels",
    "TooFewTechnologies",
    "UnknownLabel",
    "advancement_index",
    "baselines_table",
    "build_matrix",
    "classify",
    "cross_citations",
    "cumulative_slice",
    "degree_centrality",
    "degree_summary",
    "evaluate_methods",
    "g_index",
    "generate",
    "h_index",
    "in_degree",
    "intra_citations",
    "load_canonical",
    "method_scores",
    "normalize_doi",
    "onset_year",
    "out_degree",
    "pairwise_accuracy",
    "pairwise_dominance",
    "parse_export",
    "profile_from_corpus",
    "rank",
    "read_matrix",
    "save_canonical",
    "score_series",
    "stability_curve",
    "stable_sample_size",
    "top1_accuracy",
    "train",
    "volume_series",
    "write_export",
    "write_matrix",
    "YearScores",
    "VolumeSeries",
    "__version__",
]
