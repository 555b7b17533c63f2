"""Exact bottleneck-optimal search over the grid of pebbling configurations.

The oracle answers: what is the smallest budget B such that a root-pebbling
exists whose every intermediate configuration weighs at most B?  Amounts are
restricted to the game's granularity grid, so the state space is finite:
each node's pair (b, w) is encoded in one byte of granularity units, plus one
byte of phase (0 before the root has ever been full, 1 after).  The phase bit
makes "the root was pebbled at some point" part of the search state, so the
goal is the empty configuration in phase 1.

Budgets are scanned in ascending grid order.  The reachable-set computation
is incremental: states whose weight exceeds the current budget are parked in
weight-keyed buckets and unlocked when the scan reaches them, so the whole
scan does the work of a single bucketed bottleneck-first search.  Feasibility
at a budget equal to a known valid strategy's peak can be settled by that
strategy itself; infeasibility below it is always proven by exhaustion, which
is what makes the reported optimum exact on the grid.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import PebbleConfig, TreeShape, format_rational, parse_rational
from .rules import (
    BlackPlaceOrSlide,
    DecreaseBlack,
    GameVariant,
    Move,
    PlaceLeafBlack,
    PlaceWhite,
)
from .trace import Trace, trace_from_json, trace_to_json, validate_trace

DEFAULT_STATE_CAP = 50_000_000


class OracleError(RuntimeError):
    """The search could not produce an answer."""


class ResourceCapError(OracleError):
    """The search refused to continue past its state cap.

    The oracle never approximates: when the reachable set grows past the cap
    it raises instead of guessing."""

    def __init__(self, states_explored: int, cap: int, budget: Fraction):
        self.states_explored = states_explored
        self.cap = cap
        self.budget = budget
        super().__init__(
            f"state cap exceeded while testing budget {format_rational(budget)} "
            f"({states_explored} states, cap {cap})"
        )


@dataclass(frozen=True)
class ReachabilityResult:
    feasible: bool
    witness: Optional[Trace]
    states_explored: int


@dataclass(frozen=True)
class PeakReport:
    """Result of an exact minimum-peak search."""

    game: str
    granularity: Fraction
    d: int
    h: int
    optimum: Fraction
    witness: Trace
    witness_source: str  # "search" | "strategy"
    budgets_tested: Tuple[Fraction, ...]
    states_explored: int
    wall_time_s: float
    algorithm: str = "ascending budget scan over memoized grid reachability"
    exactness: str = (
        "exact minimum over traces whose amounts lie on the granularity grid; "
        "finer grids are a separate search"
    )
    from_cache: bool = False

    def to_json(self, include_witness: bool = True) -> Dict[str, object]:
        return {
            "game": self.game,
            "granularity": format_rational(self.granularity),
            "d": self.d,
            "h": self.h,
            "optimum": format_rational(self.optimum),
            **({"witness": trace_to_json(self.witness)} if include_witness else {}),
            "witnessSource": self.witness_source,
            "budgetsTested": [format_rational(b) for b in self.budgets_tested],
            "statesExplored": self.states_explored,
            "wallTimeSeconds": round(self.wall_time_s, 3),
            "algorithm": self.algorithm,
            "exactness": self.exactness,
            "fromCache": self.from_cache,
        }

    @staticmethod
    def from_json(data: Dict[str, object]) -> "PeakReport":
        return PeakReport(
            game=str(data["game"]),
            granularity=parse_rational(data["granularity"]),
            d=int(data["d"]),
            h=int(data["h"]),
            optimum=parse_rational(data["optimum"]),
            witness=trace_from_json(data["witness"]),
            witness_source=str(data["witnessSource"]),
            budgets_tested=tuple(parse_rational(b) for b in data["budgetsTested"]),
            states_explored=int(data["statesExplored"]),
            wall_time_s=float(data["wallTimeSeconds"]),
            algorithm=str(data["algorithm"]),
            exactness=str(data["exactness"]),
            from_cache=bool(data.get("fromCache", False)),
        )


def candidate_budgets(variant: GameVariant, shape: TreeShape) -> List[Fraction]:
    """All grid multiples from one granularity step up to the node count."""
    g = variant.granularity
    return [g * j for j in range(1, shape.node_count * variant.units + 1)]


# ---------------------------------------------------------------------------
# Successor generation over byte-encoded configurations


class _Rules:
    """Precomputed move tables for one (variant, shape) pair, in grid units."""

    def __init__(self, variant: GameVariant, shape: TreeShape):
        self.variant = variant
        self.shape = shape
        self.k = variant.units
        self.width = self.k + 1
        self.n = shape.node_count
        self.children: List[Tuple[int, ...]] = [
            tuple(shape.children(i)) for i in range(self.n)
        ]
        self.leaves: List[bool] = [shape.is_leaf(i) for i in range(self.n)]
        self.whole = variant.whole_pebbles
        self.has_white = variant.has_white

    def decode(self, key: bytes) -> Tuple[int, List[int], List[int], int]:
        phase = key[0]
        b = [0] * self.n
        w = [0] * self.n
        weight = 0
        for i in range(self.n):
            bu, wu = divmod(key[i + 1], self.width)
            b[i] = bu
            w[i] = wu
            weight += bu + wu
        return phase, b, w, weight

    def successors(self, key: bytes, cap_units: int):
        """Yield (successor_key, weight_units, move_tuple) pairs with weight at
        most cap_units.  Move tuples are compact encodings used for witness
        reconstruction."""
        k = self.k
        width = self.width
        phase, b, w, weight = self.decode(key)
        body = bytearray(key)

        def emit(changes: Sequence[Tuple[int, int, int]], move):
            # changes: (node, new_b, new_w)
            for node, nb, nw in changes:
                body[node + 1] = nb * width + nw
            new_weight = weight + sum(
                (nb + nw) - (b[node] + w[node]) for node, nb, nw in changes
            )
            new_phase = phase
            if not new_phase:
                root_code = body[1]
                if root_code // width + root_code % width == k:
                    new_phase = 1
            body[0] = new_phase
            result = (bytes(body), new_weight, move)
            for node, _, _ in changes:
                body[node + 1] = b[node] * width + w[node]
            body[0] = phase
            return result

        for i in range(self.n):
            bi, wi = b[i], w[i]
            # decrease black
            if bi:
                amounts = (bi,) if self.whole else range(1, bi + 1)
                for a in amounts:
                    yield emit([(i, bi - a, wi)], ("dec", i, a))
            # leaf placement
            if self.leaves[i]:
                free = k - bi - wi
                if free:
                    amounts = (k,) if self.whole else range(1, free + 1)
                    for a in amounts:
                        if a <= free and weight + a <= cap_units:
                            yield emit([(i, bi + a, wi)], ("leaf", i, a))
            # white placement (top-up)
            if self.has_white:
                free = k - bi - wi
                allowed = (bi == 0 and wi == 0) if self.whole else free > 0
                if allowed and free and weight + free <= cap_units:
                    yield emit([(i, bi, k - bi)], ("white", i))
            # black placement or slide
            kids = self.children[i]
            if not kids:
                # A leaf qualifies for the slide rule only while it carries
                # white (a bare-leaf increase is the leaf rule's job).
                if wi:
                    if self.whole:
                        if weight - wi + k <= cap_units:
                            yield emit([(i, k, 0)], ("slide", i, k, ()))
                    else:
                        for a in range(0, k - bi + 1):
                            if weight - wi + a <= cap_units:
                                yield emit([(i, bi + a, 0)], ("slide", i, a, ()))
                continue
            if any(b[c] + w[c] != k for c in kids):
                continue
            if self.whole:
                if bi == 0:
                    dec_options = [
                        [(c, a) for a in ((0, b[c]) if b[c] else (0,))] for c in kids
                    ]
                    for decs in product(*dec_options):
                        removed = sum(a for _, a in decs)
                        new_weight = weight - wi + k - removed
                        if new_weight > cap_units:
                            continue
                        changes = [(i, k, 0)]
                        changes += [(c, b[c] - a, w[c]) for c, a in decs if a]
                        yield emit(
                            changes, ("slide", i, k, tuple((c, a) for c, a in decs if a))
                        )
                continue
            max_amount = k - bi
            per_child = [[(c, a) for a in range(0, b[c] + 1)] for c in kids]
            for amount in range(0, max_amount + 1):
                for decs in product(*per_child):
                    removed = sum(a for _, a in decs)
                    if amount == 0 and wi == 0 and removed == 0:
                        continue  # no effect
                    new_weight = weight - wi + amount - removed
                    if new_weight > cap_units:
                        continue
                    changes = [(i, bi + amount, 0)]
                    changes += [(c, b[c] - a, w[c]) for c, a in decs if a]
                    yield emit(
                        changes,
                        ("slide", i, amount, tuple((c, a) for c, a in decs if a)),
                    )

    def move_from_tuple(self, mt: Tuple) -> Move:
        k = self.k
        kind = mt[0]
        if kind == "dec":
            return DecreaseBlack(mt[1], Fraction(mt[2], k))
        if kind == "leaf":
            return PlaceLeafBlack(mt[1], Fraction(mt[2], k))
        if kind == "white":
            return PlaceWhite(mt[1])
        if kind == "slide":
            decs = {c: Fraction(a, k) for c, a in mt[3]}
            return BlackPlaceOrSlide(mt[1], Fraction(mt[2], k), decs)
        raise OracleError(f"unknown move tuple {mt!r}")


class _ScanEngine:
    """Incremental reachable-set engine shared across ascending budgets."""

    def __init__(self, rules: _Rules, hard_cap_units: int, state_cap: int):
        self.rules = rules
        self.hard_cap = hard_cap_units
        self.state_cap = state_cap
        n = rules.n
        self.start = bytes([0]) + bytes(n)
        self.goal = bytes([1]) + bytes(n)
        self.visited = {self.start}
        self.parked: Dict[int, List[bytes]] = {}
        self.frontier: deque = deque([self.start])
        self.goal_found = False
        self.states = 1

    def run_to(self, budget_units: int, current_budget: Fraction) -> bool:
        for wu in sorted(u for u in self.parked if u <= budget_units):
            self.frontier.extend(self.parked.pop(wu))
        while self.frontier:
            key = self.frontier.popleft()
            for succ, wu, _move in self.rules.successors(key, self.hard_cap):
                if succ in self.visited:
                    continue
                self.visited.add(succ)
                self.states += 1
                if self.states > self.state_cap:
                    raise ResourceCapError(self.states, self.state_cap, current_budget)
                if wu <= budget_units:
                    if succ == self.goal:
                        self.goal_found = True
                        return True
                    self.frontier.append(succ)
                else:
                    self.parked.setdefault(wu, []).append(succ)
        return self.goal_found


def _witness_search(
    rules: _Rules, budget_units: int, state_cap: int, budget: Fraction
) -> Tuple[Optional[List[Move]], int]:
    """Parent-tracked breadth-first search at one budget, for reconstruction.

    Returns (move list, states explored); the move list is None when the whole
    budget-bounded reachable set was exhausted without hitting the goal."""
    n = rules.n
    start = bytes([0]) + bytes(n)
    goal = bytes([1]) + bytes(n)
    parents: Dict[bytes, Optional[Tuple[bytes, Tuple]]] = {start: None}
    frontier = deque([start])
    states = 1
    while frontier:
        key = frontier.popleft()
        for succ, wu, move in rules.successors(key, budget_units):
            if wu > budget_units or succ in parents:
                continue
            parents[succ] = (key, move)
            states += 1
            if states > state_cap:
                raise ResourceCapError(states, state_cap, budget)
            if succ == goal:
                moves: List[Move] = []
                cursor: Optional[bytes] = succ
                while parents[cursor] is not None:
                    prev, mt = parents[cursor]  # type: ignore[misc]
                    moves.append(rules.move_from_tuple(mt))
                    cursor = prev
                moves.reverse()
                return moves, states
            frontier.append(succ)
    return None, states


def reachable_within_budget(
    game: Union[GameVariant, str],
    d: int,
    h: int,
    budget: Union[Fraction, int, str],
    granularity: Optional[Fraction] = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> ReachabilityResult:
    """Decide whether a root-pebbling exists whose peak never exceeds budget."""
    variant = _resolve_variant(game, granularity)
    shape = TreeShape(d, h)
    budget = parse_rational(budget)
    units = budget / variant.granularity
    if units.denominator != 1:
        raise OracleError(
            f"budget {format_rational(budget)} is not a multiple of the "
            f"granularity {format_rational(variant.granularity)}"
        )
    rules = _Rules(variant, shape)
    moves, states = _witness_search(rules, int(units), state_cap, budget)
    if moves is None:
        return ReachabilityResult(False, None, states)
    trace = Trace(
        variant=variant, shape=shape, initial=PebbleConfig.empty(shape), moves=tuple(moves)
    )
    validate_trace(trace)
    return ReachabilityResult(True, trace, states)


def _resolve_variant(game: Union[GameVariant, str], granularity: Optional[Fraction]) -> GameVariant:
    if isinstance(game, GameVariant):
        if granularity is not None and granularity != game.granularity:
            return GameVariant.from_name(game.kind, granularity)
        return game
    return GameVariant.from_name(str(game), granularity)


def _auto_seed(variant: GameVariant, shape: TreeShape) -> Optional[Tuple[Trace, Fraction, str]]:
    """Best generated strategy that is valid under the search variant, if any.

    Candidates are re-validated under the search variant itself, so a seed can
    never smuggle in an off-grid move; candidates that fail validation are
    simply skipped."""
    from . import strategies

    d, h = shape.d, shape.h
    factories = []
    if variant.kind == "black":
        factories = [("black_strategy", lambda: strategies.black_strategy(d, h))]
    elif variant.kind == "bw":
        if d == 2:
            factories.append(("bw_strategy", lambda: strategies.bw_strategy(h)))
        factories.append(("black_strategy", lambda: strategies.black_strategy(d, h)))
    elif variant.kind in ("half", "fractional"):
        factories.append(("fractional_strategy", lambda: strategies.fractional_strategy(d, h)))
        if d == 2:
            factories.append(("half_strategy", lambda: strategies.half_strategy(h)))
            factories.append(("bw_strategy", lambda: strategies.bw_strategy(h)))
        factories.append(("black_strategy", lambda: strategies.black_strategy(d, h)))
    best: Optional[Tuple[Trace, Fraction, str]] = None
    for label, factory in factories:
        try:
            generated = factory()
            regrid = Trace(
                variant=variant,
                shape=shape,
                initial=generated.trace.initial,
                moves=generated.trace.moves,
            )
            report = validate_trace(regrid)
            if not report.is_root_pebbling:
                continue
        except Exception:
            continue
        if best is None or report.peak < best[1]:
            best = (regrid, report.peak, label)
    return best


def _cache_path(cache_dir: str, variant: GameVariant, shape: TreeShape) -> str:
    name = (
        f"optimal-{variant.kind}-d{shape.d}-h{shape.h}-"
        f"g{variant.granularity.denominator}.json"
    )
    return os.path.join(cache_dir, name)


def optimal_peak(
    game: Union[GameVariant, str],
    d: int,
    h: int,
    granularity: Optional[Fraction] = None,
    cache_dir: Optional[str] = None,
    state_cap: int = DEFAULT_STATE_CAP,
    seed_trace: Optional[Trace] = None,
    use_seed: bool = True,
) -> PeakReport:
    """Exact minimum peak for root-pebbling, scanned in ascending grid budgets.

    Every budget below the reported optimum is exhausted (proving
    infeasibility); the optimum itself carries a witness trace, either found
    by search or supplied by a validated generated strategy."""
    variant = _resolve_variant(game, granularity)
    shape = TreeShape(d, h)
    started = time.monotonic()

    cache_file = None
    if cache_dir:
        cache_file = _cache_path(cache_dir, variant, shape)
        if os.path.exists(cache_file):
            with open(cache_file, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            report = PeakReport.from_json(data)
            report = _verified_cached(report)
            return report

    rules = _Rules(variant, shape)
    k = variant.units

    seed: Optional[Tuple[Trace, Fraction, str]] = None
    if seed_trace is not None:
        regrid = Trace(
            variant=variant, shape=shape, initial=seed_trace.initial, moves=seed_trace.moves
        )
        seed_report = validate_trace(regrid)
        if not seed_report.is_root_pebbling:
            raise OracleError("the supplied seed trace is not a root-pebbling")
        seed = (regrid, seed_report.peak, "supplied")
    elif use_seed:
        seed = _auto_seed(variant, shape)

    hard_cap = shape.node_count * k
    if seed is not None:
        hard_cap = int(seed[1] / variant.granularity)
    engine = _ScanEngine(rules, hard_cap, state_cap)

    budgets_tested: List[Fraction] = []
    optimum: Optional[Fraction] = None
    witness: Optional[Trace] = None
    witness_source = "search"
    for budget in candidate_budgets(variant, shape):
        units = int(budget / variant.granularity)
        if units > hard_cap:
            break
        budgets_tested.append(budget)
        if seed is not None and budget == seed[1]:
            optimum = budget
            witness = seed[0]
            witness_source = f"strategy ({seed[2]})"
            break
        if engine.run_to(units, budget):
            optimum = budget
            moves, _ = _witness_search(rules, units, state_cap, budget)
            if moves is None:
                raise OracleError(
                    "internal inconsistency: goal reached but witness search failed"
                )
            witness = Trace(
                variant=variant,
                shape=shape,
                initial=PebbleConfig.empty(shape),
                moves=tuple(moves),
            )
            validate_trace(witness)
            break
    if optimum is None or witness is None:
        raise OracleError(
            f"no root-pebbling found within {shape.node_count} pebbles; "
            "this should be impossible for a valid game"
        )
    report = PeakReport(
        game=variant.kind,
        granularity=variant.granularity,
        d=d,
        h=h,
        optimum=optimum,
        witness=witness,
        witness_source=witness_source,
        budgets_tested=tuple(budgets_tested),
        states_explored=engine.states,
        wall_time_s=time.monotonic() - started,
    )
    if cache_file:
        key = {
            "game": variant.kind,
            "granularity": format_rational(variant.granularity),
            "d": d,
            "h": h,
        }
        _atomic_write_json(cache_file, {"key": key, **report.to_json()})
    return report


def _verified_cached(report: PeakReport) -> PeakReport:
    """Re-validate a cached witness before trusting the cached optimum."""
    validation = validate_trace(report.witness)
    if not validation.is_root_pebbling or validation.peak != report.optimum:
        raise OracleError(
            "cached oracle result failed re-validation; delete the cache entry"
        )
    return PeakReport(
        game=report.game,
        granularity=report.granularity,
        d=report.d,
        h=report.h,
        optimum=report.optimum,
        witness=report.witness,
        witness_source=report.witness_source,
        budgets_tested=report.budgets_tested,
        states_explored=report.states_explored,
        wall_time_s=report.wall_time_s,
        algorithm=report.algorithm,
        exactness=report.exactness,
        from_cache=True,
    )


def _atomic_write_json(path: str, data: Dict[str, object]) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
