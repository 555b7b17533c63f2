"""Strategy generators that achieve the closed-form peaks, with certificates.

Every generator returns a GeneratedStrategy holding a fully validated trace, a
validation report, and a StrategyCertificate.  The certificate records the
target bound, the certified time index, and a set of named conditions;
check_certificate recomputes every condition independently from the trace
history alone, so a certificate can be re-verified without trusting the
generator.

The recursive constructions share a phase structure.  A plan for a subtree
consists of an approach (moves that end with the subtree root carrying a black
pebble, possibly leaving white pebbles and stray blacks behind), an inventory
of the blacks and whites present at that moment, and a white-cleanup move list
that erases the leftover whites starting from a state in which all blacks have
already been removed by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .bounds import theorem_min
from .core import (
    ONE,
    ZERO,
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
)
from .trace import Trace, TraceReport, validate_trace

HALF = Fraction(1, 2)

RationalLike = Union[Fraction, int, str]


class StrategyError(ValueError):
    """A strategy generator was asked for an unsupported instance, or its
    self-check failed."""


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class StrategyCertificate:
    """Checkable claims about a generated trace.

    `kind` selects the condition set:

    * "black" / "fractional" / "bw" / "half" -- root-pebbling certificates;
      bw/half additionally certify the certified time `t_star` (the moment the
      root holds a whole black pebble), the white-weight budget at that moment,
      and the weight bound afterwards.
    * "subroot" -- sub-root sub-pebbling certificate with an epsilon-shifted
      weight budget before/after the certified time.
    * "leave-black" -- ends with exactly 2E of black on the root, nothing else.
    * "clear-white" -- starts with exactly 2E of white on the root, ends empty.

    `t_star` is a configuration index: configuration t is the state after t
    moves.  `conditions` maps condition names to their checked truth values;
    `values` carries the measured quantities behind them as exact rationals.
    """

    kind: str
    game: str
    granularity: Fraction
    d: int
    h: int
    target: Fraction
    achieved_peak: Fraction
    t_star: Optional[int] = None
    epsilon: Optional[Fraction] = None
    e: Optional[Fraction] = None
    conditions: Mapping[str, bool] = None  # type: ignore[assignment]
    values: Mapping[str, str] = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "conditions", dict(self.conditions or {}))
        object.__setattr__(self, "values", dict(self.values or {}))

    def to_json(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "kind": self.kind,
            "game": self.game,
            "granularity": format_rational(self.granularity),
            "d": self.d,
            "h": self.h,
            "target": format_rational(self.target),
            "achievedPeak": format_rational(self.achieved_peak),
            "conditions": dict(self.conditions),
            "values": dict(self.values),
        }
        if self.t_star is not None:
            data["tStar"] = self.t_star
        if self.epsilon is not None:
            data["epsilon"] = format_rational(self.epsilon)
        if self.e is not None:
            data["E"] = format_rational(self.e)
        return data

    @staticmethod
    def from_json(data: Mapping[str, object]) -> "StrategyCertificate":
        return StrategyCertificate(
            kind=str(data["kind"]),
            game=str(data["game"]),
            granularity=parse_rational(data["granularity"]),
            d=int(data["d"]),
            h=int(data["h"]),
            target=parse_rational(data["target"]),
            achieved_peak=parse_rational(data["achievedPeak"]),
            t_star=int(data["tStar"]) if "tStar" in data else None,
            epsilon=parse_rational(data["epsilon"]) if "epsilon" in data else None,
            e=parse_rational(data["E"]) if "E" in data else None,
            conditions={str(k): bool(v) for k, v in dict(data.get("conditions", {})).items()},
            values={str(k): str(v) for k, v in dict(data.get("values", {})).items()},
        )


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failures: Tuple[str, ...]
    conditions: Dict[str, bool]
    values: Dict[str, str]


@dataclass(frozen=True)
class GeneratedStrategy:
    trace: Trace
    certificate: StrategyCertificate
    report: TraceReport

    @property
    def peak(self) -> Fraction:
        return self.report.peak

    def to_json(self) -> Dict[str, object]:
        from .trace import trace_to_json

        return trace_to_json(self.trace, certificate=self.certificate.to_json())


def _principal_history(trace: Trace) -> List[Tuple[Tuple[Fraction, Fraction], ...]]:
    """Per-configuration (b, w) snapshots of the root's children."""
    principals = trace.shape.principal_subtree_roots()
    index = {node: i for i, node in enumerate(principals)}
    state: List[Tuple[Fraction, Fraction]] = [
        (trace.initial.b(node), trace.initial.w(node)) for node in principals
    ]
    out = [tuple(state)]
    for move in trace.moves:
        if isinstance(move, PlaceLeafBlack):
            if move.node in index:
                i = index[move.node]
                b, w = state[i]
                state[i] = (b + move.amount, w)
        elif isinstance(move, DecreaseBlack):
            if move.node in index:
                i = index[move.node]
                b, w = state[i]
                state[i] = (b - move.amount, w)
        elif isinstance(move, PlaceWhite):
            if move.node in index:
                i = index[move.node]
                b, _ = state[i]
                state[i] = (b, ONE - b)
        elif isinstance(move, BlackPlaceOrSlide):
            if move.node in index:
                i = index[move.node]
                b, _ = state[i]
                state[i] = (b + move.amount, ZERO)
            for child, amount in move.child_decreases:
                if child in index:
                    i = index[child]
                    b, w = state[i]
                    state[i] = (b - amount, w)
        out.append(tuple(state))
    return out


def check_certificate(
    trace: Trace, certificate: Union[StrategyCertificate, Mapping[str, object]]
) -> CertificateCheck:
    """Re-verify a certificate from the trace history alone.

    Replays and validates the trace, recomputes every condition named by the
    certificate kind, and reports the per-condition outcomes.  The generator's
    own recorded condition values are ignored.
    """
    cert = (
        certificate
        if isinstance(certificate, StrategyCertificate)
        else StrategyCertificate.from_json(certificate)
    )
    report = validate_trace(trace)
    sm = report.step_metrics
    target = cert.target
    conds: Dict[str, bool] = {}
    vals: Dict[str, str] = {"peak": format_rational(report.peak), "target": format_rational(target)}

    def need_t() -> Optional[int]:
        t = cert.t_star
        if t is None or not (0 <= t < len(sm)):
            conds["certified_time_in_range"] = False
            return None
        conds["certified_time_in_range"] = True
        return t

    if cert.kind in ("black", "fractional"):
        conds["is_root_pebbling"] = report.is_root_pebbling
        conds["peak_within_target"] = report.peak <= target
    elif cert.kind in ("bw", "half"):
        t = need_t()
        if t is not None:
            white_at_t = sm[t].w_sw + sm[t].w_rw
            vals["whiteWeightAtTStar"] = format_rational(white_at_t)
            conds["root_black_full_at_t_star"] = sm[t].b_rw == 1 and sm[t].w_rw == 0
            conds["white_weight_at_t_star_within_target_minus_2"] = white_at_t <= target - 2
            conds["post_t_star_weight_within_target"] = all(m.w <= target for m in sm[t + 1 :])
        conds["is_root_pebbling"] = report.is_root_pebbling
        conds["peak_within_target"] = report.peak <= target
    elif cert.kind == "subroot":
        eps = cert.epsilon if cert.epsilon is not None else ZERO
        t = need_t()
        if t is not None:
            children = _principal_history(trace)
            star = children[t]
            white_at_t = sm[t].w_sw + sm[t].w_rw
            vals["whiteWeightAtTStar"] = format_rational(white_at_t)
            vals["epsilon"] = format_rational(eps)
            conds["all_subtree_roots_full_at_t_star"] = all(b + w == 1 for b, w in star)
            conds["pre_t_star_subtree_weight_bound"] = all(
                m.sw <= target - eps for m in sm[: t + 1]
            )
            conds["white_weight_at_t_star_bound"] = white_at_t <= target + eps - trace.shape.d
            conds["some_subtree_root_fully_black_at_t_star"] = any(b == 1 for b, _ in star)
            conds["post_t_star_subtree_weight_bound"] = all(
                m.sw <= target + eps for m in sm[t + 1 :]
            )
            conds["is_sub_root_sub_pebbling"] = (
                report.is_sub_root_sub_pebbling and t in report.subtree_roots_full_times
            )
        conds["whites_cleared_by_end"] = report.final_white_weight == 0
    elif cert.kind == "leave-black":
        e = cert.e if cert.e is not None else ZERO
        last = sm[-1]
        vals["E"] = format_rational(e)
        vals["finalRootBlack"] = format_rational(last.b_rw)
        conds["starts_empty"] = sm[0].w == 0
        conds["ends_with_black_root_2E"] = last.b_rw == 2 * e and last.w == 2 * e
        conds["peak_within_target_plus_E"] = report.peak <= target + e
    elif cert.kind == "clear-white":
        e = cert.e if cert.e is not None else ZERO
        vals["E"] = format_rational(e)
        conds["starts_with_white_root_2E"] = sm[0].w_rw == 2 * e and sm[0].w == 2 * e
        conds["ends_empty"] = sm[-1].w == 0
        conds["peak_within_target_plus_E"] = report.peak <= target + e
    else:
        conds["known_certificate_kind"] = False

    failures = tuple(f"condition failed: {name}" for name, ok in conds.items() if not ok)
    return CertificateCheck(ok=not failures, failures=failures, conditions=conds, values=vals)


# ---------------------------------------------------------------------------
# Shared plan machinery


@dataclass
class _Plan:
    """Recursive plan for pebbling one subtree root black.

    prefix + [final_slide] is the approach; after the final slide the subtree
    holds exactly star_blacks and star_whites.  white_cleanup erases
    star_whites from a state in which the caller already removed every black.
    """

    prefix: List[Move]
    final_slide: BlackPlaceOrSlide
    star_blacks: Dict[int, Fraction]
    star_whites: Dict[int, Fraction]
    white_cleanup: List[Move]

    @property
    def root(self) -> int:
        return self.final_slide.node

    def approach(self) -> List[Move]:
        return self.prefix + [self.final_slide]

    def stray_decreases(self) -> List[Move]:
        return [
            DecreaseBlack(node, amount)
            for node, amount in sorted(self.star_blacks.items())
            if node != self.root and amount > 0
        ]


def _base_plan(shape: TreeShape, node: int) -> _Plan:
    children = shape.children(node)
    prefix: List[Move] = [PlaceLeafBlack(child, ONE) for child in children]
    final = BlackPlaceOrSlide(node, ONE, {child: ONE for child in children})
    return _Plan(prefix, final, {node: ONE}, {}, [])


def _pebble_and_clear(plan: _Plan, keep: Fraction) -> List[Move]:
    """Run the approach, then strip the subtree down to `keep` black on its
    root (whites cleaned last)."""
    moves = plan.approach()
    drop = plan.star_blacks[plan.root] - keep
    if drop > 0:
        moves.append(DecreaseBlack(plan.root, drop))
    moves += plan.stray_decreases()
    moves += plan.white_cleanup
    return moves


def _clear_white_root(plan: _Plan, whole_pebbles: bool) -> List[Move]:
    """Erase a white pebble sitting on the plan's root (subtree otherwise
    empty) by replaying the approach with its final slide repurposed."""
    moves = list(plan.prefix)
    if whole_pebbles:
        # Whole-pebble slides must place a full pebble; doing so clears the
        # white, after which the new black is removed.
        moves.append(plan.final_slide)
        moves.append(DecreaseBlack(plan.root, ONE))
    else:
        moves.append(BlackPlaceOrSlide(plan.root, ZERO, plan.final_slide.child_decreases))
    moves += plan.stray_decreases()
    moves += plan.white_cleanup
    return moves


# ---------------------------------------------------------------------------
# Black game


def black_strategy(d: int, h: int) -> GeneratedStrategy:
    """Root-pebbling with black pebbles only; peak (d-1)(h-1)+1."""
    shape = TreeShape(d, h)
    target = theorem_min("black", d, h)

    def rec(node: int, height: int) -> List[Move]:
        if height == 1:
            return [PlaceLeafBlack(node, ONE)]
        moves: List[Move] = []
        children = shape.children(node)
        for child in children:
            moves += rec(child, height - 1)
        moves.append(BlackPlaceOrSlide(node, ONE, {child: ONE for child in children}))
        return moves

    moves = rec(0, h) + [DecreaseBlack(0, ONE)]
    return _finish(
        GameVariant.black(), shape, moves, kind="black", target=target, t_star=len(moves) - 1
    )


# ---------------------------------------------------------------------------
# Whole black-white game (d = 2)


def _bw_plan(shape: TreeShape, node: int, height: int) -> _Plan:
    if height == 2:
        return _base_plan(shape, node)
    # height is even and >= 4: recurse two levels down.
    p2, p3 = shape.children(node)
    v1, v2 = shape.children(p2)
    v3, v4 = shape.children(p3)
    q1 = _bw_plan(shape, v1, height - 2)
    q2 = _bw_plan(shape, v2, height - 2)
    q3 = _bw_plan(shape, v3, height - 2)
    q4 = _bw_plan(shape, v4, height - 2)

    prefix = _pebble_and_clear(q1, ONE)
    prefix += q2.approach()
    prefix += q2.stray_decreases()
    prefix.append(BlackPlaceOrSlide(p2, ONE, {v1: ONE, v2: ONE}))
    prefix.append(PlaceWhite(p3))
    final = BlackPlaceOrSlide(node, ONE, {p2: ONE})

    cleanup: List[Move] = list(q2.white_cleanup)
    cleanup += q3.approach()
    cleanup += q3.stray_decreases()
    cleanup.append(PlaceWhite(v4))
    cleanup.append(BlackPlaceOrSlide(p3, ONE, {v3: ONE}))
    cleanup.append(DecreaseBlack(p3, ONE))
    cleanup += q3.white_cleanup
    cleanup += _clear_white_root(q4, whole_pebbles=True)

    star_whites = {p3: ONE, **q2.star_whites}
    return _Plan(prefix, final, {node: ONE}, star_whites, cleanup)


def bw_strategy(h: int) -> GeneratedStrategy:
    """Root-pebbling of the binary tree with whole black and white pebbles;
    peak ceil(h/2)+1."""
    if h < 2:
        raise StrategyError("the bw strategy needs height >= 2")
    shape = TreeShape(2, h)
    target = theorem_min("bw", 2, h)
    if h % 2 == 0:
        plan = _bw_plan(shape, 0, h)
        moves = _pebble_and_clear(plan, ZERO)
        t_star = len(plan.prefix) + 1
    else:
        # Odd heights compose two even-height subtree plans one level down.
        p2, p3 = shape.children(0)
        q2 = _bw_plan(shape, p2, h - 1)
        q3 = _bw_plan(shape, p3, h - 1)
        moves = _pebble_and_clear(q2, ONE)
        moves += q3.approach()
        moves += q3.stray_decreases()
        moves.append(BlackPlaceOrSlide(0, ONE, {p2: ONE, p3: ONE}))
        t_star = len(moves)
        moves.append(DecreaseBlack(0, ONE))
        moves += q3.white_cleanup
    return _finish(GameVariant.bw(), shape, moves, kind="bw", target=target, t_star=t_star)


# ---------------------------------------------------------------------------
# Half game (d = 2)


def _half_plan(shape: TreeShape, node: int, height: int) -> _Plan:
    if height == 2:
        return _base_plan(shape, node)
    c1, c2 = shape.children(node)
    q1 = _half_plan(shape, c1, height - 1)
    q2 = _half_plan(shape, c2, height - 1)

    prefix = _pebble_and_clear(q1, HALF)
    prefix += q2.approach()
    prefix += q2.stray_decreases()
    prefix.append(PlaceWhite(c1))
    final = BlackPlaceOrSlide(node, ONE, {c2: ONE})

    cleanup: List[Move] = list(q2.white_cleanup)
    cleanup += _clear_white_root(q1, whole_pebbles=False)

    star_blacks = {node: ONE, c1: HALF}
    star_whites = {c1: HALF, **q2.star_whites}
    return _Plan(prefix, final, star_blacks, star_whites, cleanup)


def half_strategy(h: int) -> GeneratedStrategy:
    """Root-pebbling of the binary tree on the 1/2 grid; peak h/2+1."""
    if h < 2:
        raise StrategyError("the half strategy needs height >= 2")
    shape = TreeShape(2, h)
    target = theorem_min("half", 2, h)
    plan = _half_plan(shape, 0, h)
    moves = _pebble_and_clear(plan, ZERO)
    t_star = len(plan.prefix) + 1
    return _finish(GameVariant.half(), shape, moves, kind="half", target=target, t_star=t_star)


# ---------------------------------------------------------------------------
# Fractional game


@dataclass
class _SubrootPlan:
    """Plan whose approach ends with every child of `node` at value 1, at
    least one of them (cond4_node) fully black."""

    approach: List[Move]
    star_blacks: Dict[int, Fraction]
    star_whites: Dict[int, Fraction]
    cond4_node: int
    white_cleanup: List[Move]


def _parked_amounts(amount_total: Fraction, slots: Sequence[int], priority: int) -> Dict[int, Fraction]:
    """Distribute amount_total over slots, filling `priority` first, then the
    remaining slots in order, capping each at 1."""
    amounts: Dict[int, Fraction] = {slot: ZERO for slot in slots}
    remaining = amount_total
    take = min(ONE, remaining)
    amounts[priority] = take
    remaining -= take
    for slot in slots:
        if slot == priority:
            continue
        take = min(ONE, remaining)
        amounts[slot] = take
        remaining -= take
    if remaining > 0:
        raise StrategyError(f"cannot park weight {amount_total} over {len(slots)} nodes")
    return amounts


def _subroot_plan(shape: TreeShape, node: int, height: int, eps: Fraction) -> _SubrootPlan:
    if height < 3:
        raise StrategyError("subroot plans need height >= 3")
    d = shape.d
    children = shape.children(node)
    parked_total = Fraction(d - 1, 2) - eps
    first, last = children[:-1], children[-1]
    approach: List[Move] = []
    star_blacks: Dict[int, Fraction] = {}
    star_whites: Dict[int, Fraction] = {}
    cleanup: List[Move] = []

    if height == 3:
        # Children are parents of leaves: pebble each tree fully, slide the
        # parked amount up, and let the remainder wash out with the leaves.
        amounts = _parked_amounts(parked_total, first, priority=first[0]) if first else {}
        order = first
        for v in order:
            amount = amounts[v]
            if amount == 0:
                continue
            leaves = shape.children(v)
            for leaf in leaves:
                approach.append(PlaceLeafBlack(leaf, ONE))
            approach.append(BlackPlaceOrSlide(v, amount, {leaf: ONE for leaf in leaves}))
            star_blacks[v] = amount
        leaves = shape.children(last)
        for leaf in leaves:
            approach.append(PlaceLeafBlack(leaf, ONE))
        approach.append(BlackPlaceOrSlide(last, ONE, {leaf: ONE for leaf in leaves}))
        star_blacks[last] = ONE
        for v in first:
            if amounts.get(v, ZERO) < 1:
                approach.append(PlaceWhite(v))
                star_whites[v] = ONE - amounts.get(v, ZERO)
        for v in first:
            white = star_whites.get(v)
            if not white:
                continue
            leaves = shape.children(v)
            cleanup += [PlaceLeafBlack(leaf, ONE) for leaf in leaves]
            cleanup.append(BlackPlaceOrSlide(v, ZERO, {leaf: ONE for leaf in leaves}))
        return _SubrootPlan(approach, star_blacks, star_whites, last, cleanup)

    # height >= 4: the parked weight prefers the child executed last among the
    # first d-1, so the heaviest partial ride coincides with the smallest
    # remaining work.
    amounts = _parked_amounts(parked_total, first, priority=first[-1])
    for r in first:
        amount = amounts[r]
        if amount > 0:
            approach += _fup1_moves(shape, r, height - 1, amount / 2)
            star_blacks[r] = amount
    sub = _subroot_plan(shape, last, height - 1, ZERO)
    approach += sub.approach
    approach.append(BlackPlaceOrSlide(last, ONE, {sub.cond4_node: ONE}))
    for n, a in sorted(sub.star_blacks.items()):
        remaining = a - (ONE if n == sub.cond4_node else ZERO)
        if remaining > 0:
            approach.append(DecreaseBlack(n, remaining))
    star_blacks[last] = ONE
    star_whites.update(sub.star_whites)
    for r in first:
        if amounts[r] < 1:
            approach.append(PlaceWhite(r))
            star_whites[r] = ONE - amounts[r]
    cleanup = list(sub.white_cleanup)
    for r in first:
        white = star_whites.get(r, ZERO)
        if white > 0:
            cleanup += _fup2_moves(shape, r, height - 1, white / 2)
    return _SubrootPlan(approach, star_blacks, star_whites, last, cleanup)


def _fup1_moves(shape: TreeShape, node: int, height: int, e: Fraction) -> List[Move]:
    """From an empty subtree, end with exactly 2e of black on `node` (subtree
    otherwise empty), peaking at most theorem_min + e."""
    plan = _subroot_plan(shape, node, height, -e)
    moves = list(plan.approach)
    moves.append(BlackPlaceOrSlide(node, 2 * e, {plan.cond4_node: 2 * e}))
    blacks = dict(plan.star_blacks)
    blacks[plan.cond4_node] = blacks[plan.cond4_node] - 2 * e
    for n, a in sorted(blacks.items()):
        if a > 0:
            moves.append(DecreaseBlack(n, a))
    moves += plan.white_cleanup
    return moves


def _fup2_moves(shape: TreeShape, node: int, height: int, e: Fraction) -> List[Move]:
    """With exactly 2e of white on `node` (subtree otherwise empty), end with
    the subtree empty, peaking at most theorem_min + e beyond the rider."""
    plan = _subroot_plan(shape, node, height, e)
    moves = list(plan.approach)
    moves.append(BlackPlaceOrSlide(node, ZERO, {}))
    for n, a in sorted(plan.star_blacks.items()):
        if a > 0:
            moves.append(DecreaseBlack(n, a))
    moves += plan.white_cleanup
    return moves


def _check_eps(eps: Fraction, what: str) -> None:
    if not (-HALF <= eps <= HALF):
        raise StrategyError(f"{what} must lie in [-1/2, 1/2], got {eps}")


def fractional_subroot(d: int, h: int, epsilon: RationalLike = ZERO) -> GeneratedStrategy:
    """Sub-root sub-pebbling on the fractional grid: every child of the root
    reaches value 1 simultaneously, with an epsilon-shifted weight budget."""
    eps = parse_rational(epsilon)
    _check_eps(eps, "epsilon")
    if h < 3:
        raise StrategyError("fractional_subroot needs height >= 3")
    shape = TreeShape(d, h)
    plan = _subroot_plan(shape, 0, h, eps)
    moves = list(plan.approach)
    t_star = len(moves)
    for n, a in sorted(plan.star_blacks.items()):
        if a > 0:
            moves.append(DecreaseBlack(n, a))
    moves += plan.white_cleanup
    variant = _stamp_fractional(moves, extra=(eps,))
    return _finish(
        variant,
        shape,
        moves,
        kind="subroot",
        target=theorem_min("fractional", d, h),
        t_star=t_star,
        epsilon=eps,
    )


def fractional_strategy(d: int, h: int) -> GeneratedStrategy:
    """Root-pebbling on the fractional grid; peak (d-1)h/2+1."""
    if h < 2:
        raise StrategyError("the fractional strategy needs height >= 2")
    shape = TreeShape(d, h)
    target = theorem_min("fractional", d, h)
    if h == 2:
        # At height 2 the black construction already meets the bound of d.
        moves = list(black_strategy(d, h).trace.moves)
        t_star = len(moves) - 1
    else:
        plan = _subroot_plan(shape, 0, h, ZERO)
        moves = list(plan.approach)
        moves.append(BlackPlaceOrSlide(0, ONE, {plan.cond4_node: ONE}))
        t_star = len(moves)
        moves.append(DecreaseBlack(0, ONE))
        for n, a in sorted(plan.star_blacks.items()):
            remaining = a - (ONE if n == plan.cond4_node else ZERO)
            if remaining > 0:
                moves.append(DecreaseBlack(n, remaining))
        moves += plan.white_cleanup
    variant = _stamp_fractional(moves)
    return _finish(
        variant, shape, moves, kind="fractional", target=target, t_star=t_star
    )


def leave_black_on_root(d: int, h: int, e: RationalLike) -> GeneratedStrategy:
    """From empty, end with exactly 2E of black on the root; peak at most
    theorem_min + E."""
    amount = parse_rational(e)
    if not (0 < amount <= HALF):
        raise StrategyError(f"E must lie in (0, 1/2], got {amount}")
    if h < 3:
        raise StrategyError("leave_black_on_root needs height >= 3")
    shape = TreeShape(d, h)
    moves = _fup1_moves(shape, 0, h, amount)
    variant = _stamp_fractional(moves, extra=(amount,))
    return _finish(
        variant,
        shape,
        moves,
        kind="leave-black",
        target=theorem_min("fractional", d, h),
        e=amount,
    )


def clear_white_root(d: int, h: int, e: RationalLike) -> GeneratedStrategy:
    """With exactly 2E of white on the root and nothing else, end empty; peak
    at most theorem_min + E."""
    amount = parse_rational(e)
    if not (0 < amount <= HALF):
        raise StrategyError(f"E must lie in (0, 1/2], got {amount}")
    if h < 3:
        raise StrategyError("clear_white_root needs height >= 3")
    shape = TreeShape(d, h)
    moves = _fup2_moves(shape, 0, h, amount)
    variant = _stamp_fractional(moves, extra=(amount,))
    initial = PebbleConfig(shape, {0: (ZERO, 2 * amount)})
    return _finish(
        variant,
        shape,
        moves,
        kind="clear-white",
        target=theorem_min("fractional", d, h),
        e=amount,
        initial=initial,
    )


def strategy_for(
    game: Union[GameVariant, str], d: int, h: int, epsilon: Optional[RationalLike] = None
) -> GeneratedStrategy:
    """Dispatch to the generator for a game kind.  An epsilon selects the
    sub-root construction for the fractional game."""
    kind = game.kind if isinstance(game, GameVariant) else str(game)
    if kind == "black":
        if epsilon is not None:
            raise StrategyError("epsilon applies to the fractional game only")
        return black_strategy(d, h)
    if kind in ("bw", "half"):
        if epsilon is not None:
            raise StrategyError("epsilon applies to the fractional game only")
        if d != 2:
            raise StrategyError(f"the {kind} strategy is defined for binary trees (d=2) only")
        return bw_strategy(h) if kind == "bw" else half_strategy(h)
    if kind == "fractional":
        if epsilon is not None:
            return fractional_subroot(d, h, epsilon)
        return fractional_strategy(d, h)
    raise StrategyError(f"unknown game {kind!r}")


# ---------------------------------------------------------------------------
# Assembly helpers


def _stamp_fractional(moves: Sequence[Move], extra: Sequence[Fraction] = ()) -> GameVariant:
    """Choose the coarsest fractional grid containing every amount used."""
    denominators = [1]
    for move in moves:
        if isinstance(move, (PlaceLeafBlack, DecreaseBlack)):
            denominators.append(move.amount.denominator)
        elif isinstance(move, BlackPlaceOrSlide):
            denominators.append(move.amount.denominator)
            for _, amount in move.child_decreases:
                denominators.append(amount.denominator)
    for x in extra:
        denominators.append(Fraction(x).denominator)
    return GameVariant.fractional(Fraction(1, lcm(*denominators)))


def _finish(
    variant: GameVariant,
    shape: TreeShape,
    moves: Sequence[Move],
    *,
    kind: str,
    target: Fraction,
    t_star: Optional[int] = None,
    epsilon: Optional[Fraction] = None,
    e: Optional[Fraction] = None,
    initial: Optional[PebbleConfig] = None,
) -> GeneratedStrategy:
    trace = Trace(
        variant=variant,
        shape=shape,
        initial=initial if initial is not None else PebbleConfig.empty(shape),
        moves=tuple(moves),
    )
    report = validate_trace(trace)
    cert = StrategyCertificate(
        kind=kind,
        game=variant.kind,
        granularity=variant.granularity,
        d=shape.d,
        h=shape.h,
        target=target,
        achieved_peak=report.peak,
        t_star=t_star,
        epsilon=epsilon,
        e=e,
    )
    check = check_certificate(trace, cert)
    if not check.ok:
        raise StrategyError(
            f"generated {kind} strategy failed its own certificate: "
            + "; ".join(check.failures)
        )
    cert = replace(cert, conditions=check.conditions, values=check.values)
    return GeneratedStrategy(trace=trace, certificate=cert, report=report)
