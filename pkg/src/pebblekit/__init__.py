"""pebblekit: exact pebbling-game engine for balanced d-ary trees.

Library surface: tree/configuration model, game rules for the black, bw, half
and fractional variants, trace validation and transforms, strategy generators
with machine-checkable certificates, an exact bottleneck-optimal search
oracle, tightness verification against closed-form bounds, a CLI, and a
playground HTTP service.
"""

from __future__ import annotations

from .core import (
    MetricsReport,
    PebbleConfig,
    RationalFormatError,
    TreeShape,
    build_tree,
    format_rational,
    metrics,
    parse_rational,
    peak,
)
from .rules import (
    BlackPlaceOrSlide,
    DecreaseBlack,
    GameVariant,
    IllegalMoveError,
    Move,
    PlaceLeafBlack,
    PlaceWhite,
    Violation,
    apply_move,
    legal_moves,
    move_from_json,
    move_to_json,
    validate_config,
    validate_move,
)
from .trace import (
    NormalizeError,
    Trace,
    TraceReport,
    TraceValidationError,
    desugar_sliding,
    dump_trace,
    load_trace,
    normalize_initial_whites,
    trace_from_json,
    trace_to_json,
    validate_trace,
)
from .bounds import (
    GATED_TIGHTNESS_GRID,
    STRETCH_TIGHTNESS_GRID,
    TightnessReport,
    UnsupportedBoundError,
    theorem_min,
    verify_tightness,
)
from .strategies import (
    CertificateCheck,
    GeneratedStrategy,
    StrategyCertificate,
    StrategyError,
    black_strategy,
    bw_strategy,
    check_certificate,
    clear_white_root,
    fractional_strategy,
    fractional_subroot,
    half_strategy,
    leave_black_on_root,
    strategy_for,
)
from .oracle import (
    OracleError,
    PeakReport,
    ReachabilityResult,
    ResourceCapError,
    candidate_budgets,
    optimal_peak,
    reachable_within_budget,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
