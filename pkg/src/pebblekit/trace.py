"""Traces: move sequences with validation, classification, transforms, JSON io.

A trace is an initial configuration plus a move list; its history is the
derived configuration sequence c_0..c_T.  Validation replays the moves,
failing on the first illegal one with the violated rule, and classifies the
trace:

* root-pebbling          -- starts and ends empty, root fully pebbled at some t.
* sub-pebbling           -- may start with black/white weight and end with
                            black weight, but ends with no white weight.
* root sub-pebbling      -- sub-pebbling whose root is fully pebbled at some t.
* sub-root sub-pebbling  -- sub-pebbling where at some single time every
                            principal subtree root is fully pebbled.

Two validity-preserving rewrites are provided: normalize_initial_whites trades
initial white weight for leading white-placement moves, and desugar_sliding
splits sliding moves into a placement followed by plain decreases (raising the
peak by at most one pebble).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .core import (
    ONE,
    ZERO,
    MetricsReport,
    PebbleConfig,
    TreeShape,
    format_rational,
    parse_rational,
)
from .rules import (
    BlackPlaceOrSlide,
    DecreaseBlack,
    GameVariant,
    Move,
    PlaceLeafBlack,
    PlaceWhite,
    Violation,
    move_from_json,
    move_to_json,
    validate_config,
    validate_move,
)


class TraceValidationError(ValueError):
    """A trace failed to replay: carries the failing move index and violation."""

    def __init__(self, index: Optional[int], violation: Violation, move: Optional[Move] = None):
        where = "initial configuration" if index is None else f"move at index {index}"
        super().__init__(f"illegal {where}: {violation}")
        self.index = index
        self.violation = violation
        self.move = move


@dataclass(frozen=True)
class Trace:
    """An initial configuration and a move sequence under one game variant."""

    variant: GameVariant
    shape: TreeShape
    initial: PebbleConfig
    moves: Tuple[Move, ...]

    def __post_init__(self) -> None:
        if self.initial.shape != self.shape:
            raise ValueError("initial configuration shape does not match the trace shape")
        object.__setattr__(self, "moves", tuple(self.moves))

    def replay(self) -> Iterator[PebbleConfig]:
        """Yield the configuration history c_0..c_T (validating every move)."""
        state = _MutableConfig(self.initial)
        yield state.snapshot()
        for index, move in enumerate(self.moves):
            violation = validate_move(self.variant, state, move)
            if violation is not None:
                raise TraceValidationError(index, violation, move)
            state.apply(move)
            yield state.snapshot()

    def history(self) -> List[PebbleConfig]:
        return list(self.replay())

    def final_config(self) -> PebbleConfig:
        state = _MutableConfig(self.initial)
        for index, move in enumerate(self.moves):
            violation = validate_move(self.variant, state, move)
            if violation is not None:
                raise TraceValidationError(index, violation, move)
            state.apply(move)
        return state.snapshot()


class _MutableConfig:
    """Mutable replay state duck-typed to the read API validate_move needs."""

    __slots__ = ("shape", "_entries")

    def __init__(self, config: PebbleConfig):
        self.shape = config.shape
        self._entries: Dict[int, Tuple[Fraction, Fraction]] = config.entries()

    def b(self, node: int) -> Fraction:
        return self._entries.get(node, (ZERO, ZERO))[0]

    def w(self, node: int) -> Fraction:
        return self._entries.get(node, (ZERO, ZERO))[1]

    def value(self, node: int) -> Fraction:
        b, w = self._entries.get(node, (ZERO, ZERO))
        return b + w

    def entries(self) -> Dict[int, Tuple[Fraction, Fraction]]:
        return dict(self._entries)

    def _set(self, node: int, b: Fraction, w: Fraction) -> None:
        if b or w:
            self._entries[node] = (b, w)
        else:
            self._entries.pop(node, None)

    def apply(self, move: Move) -> None:
        """Apply an already-validated move in place."""
        if isinstance(move, PlaceLeafBlack):
            b, w = self._entries.get(move.node, (ZERO, ZERO))
            self._set(move.node, b + move.amount, w)
        elif isinstance(move, DecreaseBlack):
            b, w = self._entries.get(move.node, (ZERO, ZERO))
            self._set(move.node, b - move.amount, w)
        elif isinstance(move, PlaceWhite):
            b, _ = self._entries.get(move.node, (ZERO, ZERO))
            self._set(move.node, b, ONE - b)
        else:
            assert isinstance(move, BlackPlaceOrSlide)
            b, _ = self._entries.get(move.node, (ZERO, ZERO))
            self._set(move.node, b + move.amount, ZERO)
            for child, amount in move.child_decreases:
                cb, cw = self._entries.get(child, (ZERO, ZERO))
                self._set(child, cb - amount, cw)

    def snapshot(self) -> PebbleConfig:
        return PebbleConfig(self.shape, dict(self._entries))

    def totals(self) -> Tuple[Fraction, Fraction]:
        b_total = ZERO
        w_total = ZERO
        for b, w in self._entries.values():
            b_total += b
            w_total += w
        return b_total, w_total


@dataclass(frozen=True)
class TraceReport:
    """Validation outcome: peak, per-step whole-tree metrics, classification."""

    peak: Fraction
    length: int
    step_metrics: Tuple[MetricsReport, ...]
    root_full_times: Tuple[int, ...]
    subtree_roots_full_times: Tuple[int, ...]
    initial_weight: Fraction
    final_weight: Fraction
    final_white_weight: Fraction
    is_root_pebbling: bool
    is_sub_pebbling: bool
    is_root_sub_pebbling: bool
    is_sub_root_sub_pebbling: bool

    def classifications(self) -> Dict[str, bool]:
        return {
            "root-pebbling": self.is_root_pebbling,
            "sub-pebbling": self.is_sub_pebbling,
            "root-sub-pebbling": self.is_root_sub_pebbling,
            "sub-root-sub-pebbling": self.is_sub_root_sub_pebbling,
        }

    def to_json(self, include_steps: bool = False) -> Dict[str, object]:
        data: Dict[str, object] = {
            "peak": format_rational(self.peak),
            "moves": self.length,
            "rootFullTimes": list(self.root_full_times),
            "subtreeRootsFullTimes": list(self.subtree_roots_full_times),
            "initialWeight": format_rational(self.initial_weight),
            "finalWeight": format_rational(self.final_weight),
            "finalWhiteWeight": format_rational(self.final_white_weight),
            "classifications": self.classifications(),
        }
        if include_steps:
            data["stepMetrics"] = [m.to_json() for m in self.step_metrics]
        return data


def validate_trace(trace: Trace, collect_step_metrics: bool = True) -> TraceReport:
    """Replay a trace, failing on the first illegal move, and report on it.

    The per-step metrics are whole-tree MetricsReports (one per configuration,
    including the initial one); pass collect_step_metrics=False to skip them
    for very long traces.
    """
    violation = validate_config(trace.variant, trace.initial)
    if violation is not None:
        raise TraceValidationError(None, violation)
    shape = trace.shape
    principals = shape.principal_subtree_roots()
    state = _MutableConfig(trace.initial)
    b_total, w_total = state.totals()

    step_metrics: List[MetricsReport] = []
    root_full: List[int] = []
    roots_full: List[int] = []
    peak_weight = b_total + w_total
    initial_weight = peak_weight

    def record(t: int) -> None:
        nonlocal peak_weight
        weight = b_total + w_total
        if weight > peak_weight:
            peak_weight = weight
        if state.value(0) == 1:
            root_full.append(t)
        if all(state.value(p) == 1 for p in principals):
            roots_full.append(t)
        if collect_step_metrics:
            b0, w0 = state.b(0), state.w(0)
            step_metrics.append(
                MetricsReport(
                    scope_node=0,
                    w=weight,
                    sw=weight - b0 - w0,
                    b_sw=b_total - b0,
                    w_sw=w_total - w0,
                    rw=b0 + w0,
                    b_rw=b0,
                    w_rw=w0,
                )
            )

    record(0)
    for index, move in enumerate(trace.moves):
        violation = validate_move(trace.variant, state, move)
        if violation is not None:
            raise TraceValidationError(index, violation, move)
        if isinstance(move, PlaceLeafBlack):
            b_total += move.amount
        elif isinstance(move, DecreaseBlack):
            b_total -= move.amount
        elif isinstance(move, PlaceWhite):
            w_total += ONE - state.value(move.node)
        else:
            assert isinstance(move, BlackPlaceOrSlide)
            w_total -= state.w(move.node)
            b_total += move.amount
            for _, amount in move.child_decreases:
                b_total -= amount
        state.apply(move)
        record(index + 1)

    final_b, final_w = state.totals()
    final_weight = final_b + final_w
    is_sub = final_w == 0
    return TraceReport(
        peak=peak_weight,
        length=len(trace.moves),
        step_metrics=tuple(step_metrics),
        root_full_times=tuple(root_full),
        subtree_roots_full_times=tuple(roots_full),
        initial_weight=initial_weight,
        final_weight=final_weight,
        final_white_weight=final_w,
        is_root_pebbling=initial_weight == 0 and final_weight == 0 and bool(root_full),
        is_sub_pebbling=is_sub,
        is_root_sub_pebbling=is_sub and bool(root_full),
        is_sub_root_sub_pebbling=is_sub and bool(roots_full),
    )


class NormalizeError(ValueError):
    """Initial white weight that white top-up moves cannot reproduce."""


def normalize_initial_whites(trace: Trace) -> Trace:
    """Replace initial white weight with leading white-placement moves.

    The output starts with the same black weight only, places the original
    whites first (node order), then replays the original moves.  Because white
    placement tops a node up to pebble value 1, a node carrying initial white
    must be fully pebbled (b + w = 1); otherwise no move sequence can recreate
    it and NormalizeError is raised.  The prefix configurations never weigh
    more than the original initial configuration, so the peak cannot increase.
    """
    whites = sorted(n for n, (_, w) in trace.initial.entries().items() if w > 0)
    if not whites:
        return trace
    for node in whites:
        if trace.initial.value(node) != 1:
            raise NormalizeError(
                f"initial white weight on node {node} is not reproducible: white placement "
                f"tops up to pebble value 1 but the node has value "
                f"{format_rational(trace.initial.value(node))}"
            )
    blacks_only = PebbleConfig(
        trace.shape, {n: (b, ZERO) for n, (b, _) in trace.initial.entries().items() if b > 0}
    )
    prefix: Tuple[Move, ...] = tuple(PlaceWhite(n) for n in whites)
    return Trace(trace.variant, trace.shape, blacks_only, prefix + trace.moves)


def desugar_sliding(trace: Trace) -> Trace:
    """Split sliding moves into a placement followed by per-child decreases.

    The output contains no rule-(ii) move with child decreases, so it is valid
    under the no-sliding reading of rule (ii); splitting defers the child
    decreases by a step, which can raise the peak by at most the black weight
    the sliding move placed (at most one pebble).
    """
    state = _MutableConfig(trace.initial)
    new_moves: List[Move] = []
    for index, move in enumerate(trace.moves):
        violation = validate_move(trace.variant, state, move)
        if violation is not None:
            raise TraceValidationError(index, violation, move)
        if isinstance(move, BlackPlaceOrSlide) and move.child_decreases:
            # Emit the placement only when it does something once the
            # decreases are stripped (it always does in whole-pebble games).
            if move.amount > 0 or state.w(move.node) > 0:
                new_moves.append(BlackPlaceOrSlide(move.node, move.amount, ()))
            for child, amount in move.child_decreases:
                new_moves.append(DecreaseBlack(child, amount))
        else:
            new_moves.append(move)
        state.apply(move)
    return Trace(trace.variant, trace.shape, trace.initial, tuple(new_moves))


def trace_to_json(trace: Trace, certificate: Optional[Mapping[str, object]] = None) -> Dict[str, object]:
    data: Dict[str, object] = {
        "variant": trace.variant.kind,
        "granularity": format_rational(trace.variant.granularity),
        "d": trace.shape.d,
        "h": trace.shape.h,
        "initial": [
            {"node": n, "b": format_rational(b), "w": format_rational(w)}
            for n, (b, w) in sorted(trace.initial.entries().items())
        ],
        "moves": [move_to_json(m) for m in trace.moves],
    }
    if certificate is not None:
        data["certificate"] = dict(certificate)
    return data


def trace_from_json(data: Mapping[str, object]) -> Trace:
    variant = GameVariant.from_name(str(data["variant"]), data.get("granularity"))
    shape = TreeShape(int(data["d"]), int(data["h"]))
    entries: Dict[int, Tuple[Fraction, Fraction]] = {}
    for item in data.get("initial", []):
        entries[int(item["node"])] = (parse_rational(item.get("b", "0")), parse_rational(item.get("w", "0")))
    initial = PebbleConfig(shape, entries)
    moves = tuple(move_from_json(m) for m in data.get("moves", []))
    return Trace(variant, shape, initial, moves)


def dump_trace(trace: Trace, certificate: Optional[Mapping[str, object]] = None) -> str:
    return json.dumps(trace_to_json(trace, certificate), indent=2)


def load_trace(text: str) -> Trace:
    return trace_from_json(json.loads(text))
