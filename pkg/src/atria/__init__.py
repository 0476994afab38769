"""Expression-tree exploration, rendering, and two-run diffing for
task-runtime execution traces."""

from .compare import ComparisonResult, MatchedPair, diff, report, slower_run
from .errors import (
    AtriaError,
    BadParams,
    DuplicateRun,
    EmptyInput,
    EmptyView,
    HiddenNode,
    InvariantViolation,
    LineOutOfRange,
    MalformedDocument,
    NoSource,
    SchemaViolation,
    UnknownNode,
)
from .gentrace import (
    PolicyConfig,
    ProgramSkeleton,
    SkeletonNode,
    assemble_skeleton,
    generate_program,
    generate_run,
    make_comparison_pair,
    simulate,
)
from .metrics import Metric, TimeView, exclusive_times, hotspots, inclusive_times, time_view
from .model import (
    DependencyEdge,
    EdgeKind,
    ExecutionMode,
    PrimitiveNode,
    Run,
    SourceText,
    Violation,
    parse_trace,
    path_string,
    serialize_trace,
    validate,
)
from .render import render_run, render_svg
from .tree import (
    UNINTERESTING_NAMES,
    ExpressionTree,
    ViewTree,
    build_expression_tree,
    collapse_default,
    elided_edges_for,
    toggle,
)
from .view import ENCODING, build_tree_payload, elided_payload

__all__ = [
    "AtriaError",
    "BadParams",
    "ComparisonResult",
    "DependencyEdge",
    "DuplicateRun",
    "ENCODING",
    "EdgeKind",
    "EmptyInput",
    "EmptyView",
    "ExecutionMode",
    "ExpressionTree",
    "HiddenNode",
    "InvariantViolation",
    "LineOutOfRange",
    "MalformedDocument",
    "MatchedPair",
    "Metric",
    "NoSource",
    "PolicyConfig",
    "PrimitiveNode",
    "ProgramSkeleton",
    "Run",
    "SchemaViolation",
    "SkeletonNode",
    "SourceText",
    "TimeView",
    "UNINTERESTING_NAMES",
    "UnknownNode",
    "ViewTree",
    "Violation",
    "assemble_skeleton",
    "build_expression_tree",
    "build_tree_payload",
    "collapse_default",
    "diff",
    "elided_edges_for",
    "elided_payload",
    "exclusive_times",
    "generate_program",
    "generate_run",
    "hotspots",
    "inclusive_times",
    "make_comparison_pair",
    "parse_trace",
    "path_string",
    "render_run",
    "render_svg",
    "report",
    "serialize_trace",
    "simulate",
    "slower_run",
    "time_view",
    "toggle",
    "validate",
]
