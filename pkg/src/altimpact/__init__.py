"""Scholarly impact indicator toolkit.

altimpact harvests citation counts and alternative impact indicators for a
literature sample, stores them in a small knowledge graph, and offers the
statistics used to analyse them: z-scores, kernel density estimates,
Pearson correlation with significance, quantile thresholds, geometric and
composite-score paper selection, and quality cross-tabulation against
expert checklist scores.
"""

from .assess import (
    CHECKLIST_ITEMS,
    QualityVerdict,
    StrobeChecklist,
    consensus_verdicts,
    merge_reviews,
    quality_report,
    quality_threshold,
    read_checklists,
    strobe_score,
)
from .errors import (
    AltimpactError,
    BackendError,
    ConstantVector,
    DegenerateDistribution,
    DoiMismatch,
    DuplicateLocalId,
    DuplicateObservation,
    EmptyIndicatorSet,
    EmptyInput,
    InvalidBandwidth,
    LengthMismatch,
    MalformedCsv,
    MissingChecklists,
    MissingKg,
    MissingSelections,
    ResolutionFailed,
    ResolverUnavailable,
    UnknownArticle,
    UnknownCategory,
    WrongItemCount,
)
from .harvest import (
    FixtureAltmetricsBackend,
    FixtureCitationBackend,
    FixtureResolver,
    FixtureStore,
    IndicatorObservation,
    LiveIndicatorBackend,
    LiveResolver,
    PipelineFailure,
    harvest_indicators,
    resolve_doi,
    run_pipeline,
    validate_doi,
)
from .hierarchy import (
    CAPTURES,
    CATEGORY_ORDER,
    CITATIONS,
    KNOWN_HIERARCHY,
    MENTIONS,
    SOCIAL_MEDIA,
    USAGE,
    HierarchyEntry,
    is_category,
    is_known,
    metrics_of,
    sources_of,
)
from .ingest import (
    PaperRecord,
    SampleSet,
    ValidationWarning,
    normalize_doi,
    parse_sample,
    serialize_sample,
    validate_sample,
)
from .kgraph import (
    KnowledgeGraph,
    Triple,
    article_node,
    category_value,
    indicator_node,
    metric_value,
    parse_triples,
    populate,
    serialize,
    to_matrix,
    zero_filtered_subgraph,
)
from .selection import (
    SET_A,
    SET_A_PRIME,
    SET_C,
    SET_I,
    SET_I_PRIME,
    STANDARD_PAIRS,
    STANDARD_SETS,
    IndicatorSet,
    SelectionResult,
    cis,
    cis_select,
    geometric_select,
    pair_label,
    select_by_set,
    selection_matrix,
)
from .stats import (
    CorrelationResult,
    KdeCurve,
    ZScoreSet,
    kde,
    kde_grid,
    minmax_normalize,
    pearson,
    quantile_lower_bound,
    silverman_bandwidth,
    summary,
    zscores,
)

__version__ = "0.1.0"

__all__ = [
    "AltimpactError",
    "BackendError",
    "CAPTURES",
    "CATEGORY_ORDER",
    "CHECKLIST_ITEMS",
    "CITATIONS",
    "ConstantVector",
    "CorrelationResult",
    "DegenerateDistribution",
    "DoiMismatch",
    "DuplicateLocalId",
    "DuplicateObservation",
    "EmptyIndicatorSet",
    "EmptyInput",
    "FixtureAltmetricsBackend",
    "FixtureCitationBackend",
    "FixtureResolver",
    "FixtureStore",
    "HierarchyEntry",
    "IndicatorObservation",
    "IndicatorSet",
    "InvalidBandwidth",
    "KNOWN_HIERARCHY",
    "KdeCurve",
    "KnowledgeGraph",
    "LengthMismatch",
    "LiveIndicatorBackend",
    "LiveResolver",
    "MENTIONS",
    "MalformedCsv",
    "MissingChecklists",
    "MissingKg",
    "MissingSelections",
    "PaperRecord",
    "PipelineFailure",
    "QualityVerdict",
    "ResolutionFailed",
    "ResolverUnavailable",
    "SET_A",
    "SET_A_PRIME",
    "SET_C",
    "SET_I",
    "SET_I_PRIME",
    "SOCIAL_MEDIA",
    "STANDARD_PAIRS",
    "STANDARD_SETS",
    "SampleSet",
    "SelectionResult",
    "StrobeChecklist",
    "Triple",
    "USAGE",
    "UnknownArticle",
    "UnknownCategory",
    "ValidationWarning",
    "WrongItemCount",
    "ZScoreSet",
    "article_node",
    "category_value",
    "cis",
    "cis_select",
    "consensus_verdicts",
    "geometric_select",
    "harvest_indicators",
    "indicator_node",
    "is_category",
    "is_known",
    "kde",
    "kde_grid",
    "merge_reviews",
    "metric_value",
    "metrics_of",
    "minmax_normalize",
    "normalize_doi",
    "pair_label",
    "parse_sample",
    "parse_triples",
    "pearson",
    "populate",
    "quality_report",
    "quality_threshold",
    "quantile_lower_bound",
    "read_checklists",
    "resolve_doi",
    "run_pipeline",
    "select_by_set",
    "selection_matrix",
    "serialize",
    "serialize_sample",
    "silverman_bandwidth",
    "sources_of",
    "strobe_score",
    "summary",
    "to_matrix",
    "validate_doi",
    "validate_sample",
    "zero_filtered_subgraph",
    "zscores",
]
