"""Evidence combination for mass functions whose weights may leave [0, 1].

Frames and focal sets live in :mod:`overmass.frame`, mass functions and
their diagnostics in :mod:`overmass.mass`, combination rules in
:mod:`overmass.rules`, dispatch advisories in :mod:`overmass.regime`, and
the document format plus CLI in :mod:`overmass.cli`.
"""

from .errors import EvidenceError, ParseError, RuleGuardError, ValidationError
from .frame import (
    EMPTY_SYMBOL,
    MAX_FRAME_SIZE,
    SEPARATOR,
    FocalSet,
    Frame,
    enumerate_powerset,
    intersect,
    make_frame,
    parse_focal,
    unite,
)
from .mass import (
    CLASSICAL_RANGE,
    SUM_EPSILON,
    BeliefInterval,
    MassFunction,
    MassRange,
    RangeClass,
    SumClass,
    belief,
    belief_interval,
    best_focal,
    best_singleton,
    classify_range,
    classify_sum,
    interval_union,
    make_mass,
    plausibility,
    union_of_ranges,
)
from .rules import (
    ORDER_NORMALIZE_FIRST,
    ORDER_REDISTRIBUTE_FIRST,
    ORDERS,
    FusionReport,
    RuleId,
    TraceRecord,
    average,
    conflict_mass,
    conjunctive,
    dempster,
    fuse,
    over_normalize,
    pcr5,
    total_proportional,
)
from .regime import (
    CONFLICT_WARNING_THRESHOLD,
    Advisory,
    AdvisoryKind,
    assess,
    assess_fusion,
)
from .cli import (
    GoldenExample,
    GoldenRow,
    PipelineSpec,
    ScenarioDocument,
    Source,
    load_document,
    main,
    paper_examples,
    render_csv,
    render_document,
    render_table,
    run_golden_examples,
    run_pipeline,
)

__version__ = "0.1.0"

__all__ = [
    "Advisory",
    "AdvisoryKind",
    "BeliefInterval",
    "CLASSICAL_RANGE",
    "CONFLICT_WARNING_THRESHOLD",
    "EMPTY_SYMBOL",
    "EvidenceError",
    "FocalSet",
    "Frame",
    "FusionReport",
    "GoldenExample",
    "GoldenRow",
    "MAX_FRAME_SIZE",
    "MassFunction",
    "MassRange",
    "ORDERS",
    "ORDER_NORMALIZE_FIRST",
    "ORDER_REDISTRIBUTE_FIRST",
    "ParseError",
    "PipelineSpec",
    "RangeClass",
    "RuleGuardError",
    "RuleId",
    "SEPARATOR",
    "SUM_EPSILON",
    "ScenarioDocument",
    "Source",
    "SumClass",
    "TraceRecord",
    "ValidationError",
    "assess",
    "assess_fusion",
    "average",
    "belief",
    "belief_interval",
    "best_focal",
    "best_singleton",
    "classify_range",
    "classify_sum",
    "conflict_mass",
    "conjunctive",
    "dempster",
    "enumerate_powerset",
    "fuse",
    "intersect",
    "interval_union",
    "load_document",
    "main",
    "make_frame",
    "make_mass",
    "over_normalize",
    "paper_examples",
    "parse_focal",
    "pcr5",
    "plausibility",
    "render_csv",
    "render_document",
    "render_table",
    "run_golden_examples",
    "run_pipeline",
    "total_proportional",
    "unite",
    "union_of_ranges",
]
