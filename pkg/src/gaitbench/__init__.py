"""Gait analysis workbench: GRF processing, a clinical knowledge store, and
category matching, exposed through a library, an HTTP service, and a CLI."""

from .config import G0, EngineConfig, ServiceConfig
from .stps import Foot, StpVector, STP_DEFINITIONS, STP_IDS
from .trial import Gender, PatientMeta, RawTrial, load_trial, parse_trial
from .grf import (
    ConsistencyGraph,
    NormalizedStepCurve,
    StepSegment,
    amplitude_normalize,
    build_consistency_graph,
    compute_stps,
    process_trial,
    segment_steps,
    time_normalize,
)
from .eks import (
    DemographicFilter,
    DistributionStats,
    GaitCategory,
    KnowledgeStore,
    ParameterRange,
    PatientRecord,
    apply_patient,
    default_store,
    distribution_stats,
    filtered_members,
    load_store,
    override_range,
    reset_category,
    save_store,
)
from .analysis import (
    CategoryDifference,
    ItbpData,
    MatchResult,
    ParamState,
    category_difference,
    graphical_summary,
    itbp_data,
    match_score,
    rank_categories,
)

__version__ = "0.1.0"

__all__ = [
    "G0",
    "EngineConfig",
    "ServiceConfig",
    "Foot",
    "StpVector",
    "STP_DEFINITIONS",
    "STP_IDS",
    "Gender",
    "PatientMeta",
    "RawTrial",
    "load_trial",
    "parse_trial",
    "ConsistencyGraph",
    "NormalizedStepCurve",
    "StepSegment",
    "amplitude_normalize",
    "build_consistency_graph",
    "compute_stps",
    "process_trial",
    "segment_steps",
    "time_normalize",
    "DemographicFilter",
    "DistributionStats",
    "GaitCategory",
    "KnowledgeStore",
    "ParameterRange",
    "PatientRecord",
    "apply_patient",
    "default_store",
    "distribution_stats",
    "filtered_members",
    "load_store",
    "override_range",
    "reset_category",
    "save_store",
    "CategoryDifference",
    "ItbpData",
    "MatchResult",
    "ParamState",
    "category_difference",
    "graphical_summary",
    "itbp_data",
    "match_score",
    "rank_categories",
]
