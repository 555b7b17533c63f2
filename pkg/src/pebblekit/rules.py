"""Game variants, moves, move validation/application, and legal-move enumeration.

Four rule systems share one move algebra:

* black       -- whole black pebbles only.
* bw          -- whole black and white pebbles.
* half        -- half-pebble game: fractional rules on the 1/2 grid.
* fractional  -- fractional pebbles on a 1/k grid.

Moves (with their rule citations per variant):

* DecreaseBlack(node, amount)      -- rule (i): remove black weight.
* BlackPlaceOrSlide(node, amount, child_decreases)
                                   -- rule (ii): if every child has pebble
                                      value 1, clear the node's white weight,
                                      add black weight, and optionally decrease
                                      children's black weight simultaneously.
* PlaceWhite(node)                 -- rule (iii): add white weight topping the
                                      node up to pebble value 1.
* PlaceLeafBlack(node, amount)     -- leaf rule: add black weight on a leaf.

In the whole-pebble games amounts are forced to 1 by the granularity grid.  A
rule-(ii) move on a bare leaf (no white to clear, no children) would duplicate
PlaceLeafBlack, so the canonical encoding rejects it; every reachable effect is
still reachable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .core import ONE, ZERO, PebbleConfig, format_rational, parse_rational

_VARIANT_NAMES = ("black", "bw", "half", "fractional")


@dataclass(frozen=True)
class GameVariant:
    """A rule system plus its weight granularity (1/k for integer k >= 1)."""

    kind: str
    granularity: Fraction

    def __post_init__(self) -> None:
        if self.kind not in _VARIANT_NAMES:
            raise ValueError(f"unknown game variant {self.kind!r}; expected one of {_VARIANT_NAMES}")
        g = parse_rational(self.granularity)
        object.__setattr__(self, "granularity", g)
        if g.numerator != 1 or g.denominator < 1:
            raise ValueError(f"granularity must be 1/k for a positive integer k, got {g}")
        if self.kind in ("black", "bw") and g != 1:
            raise ValueError(f"{self.kind} games use whole pebbles (granularity 1), got {g}")
        if self.kind == "half" and g != Fraction(1, 2):
            raise ValueError(f"the half game has granularity 1/2, got {g}")

    @classmethod
    def black(cls) -> "GameVariant":
        return cls("black", Fraction(1))

    @classmethod
    def bw(cls) -> "GameVariant":
        return cls("bw", Fraction(1))

    @classmethod
    def half(cls) -> "GameVariant":
        return cls("half", Fraction(1, 2))

    @classmethod
    def fractional(cls, granularity=Fraction(1, 2)) -> "GameVariant":
        return cls("fractional", parse_rational(granularity))

    @classmethod
    def from_name(cls, name: str, granularity=None) -> "GameVariant":
        if name == "fractional":
            return cls.fractional(granularity if granularity is not None else Fraction(1, 2))
        variant = {"black": cls.black, "bw": cls.bw, "half": cls.half}.get(name)
        if variant is None:
            raise ValueError(f"unknown game variant {name!r}; expected one of {_VARIANT_NAMES}")
        built = variant()
        if granularity is not None and parse_rational(granularity) != built.granularity:
            raise ValueError(f"game {name!r} has fixed granularity {built.granularity}, got {granularity}")
        return built

    @property
    def whole_pebbles(self) -> bool:
        """True for the games whose moves act on whole pebbles only."""
        return self.kind in ("black", "bw")

    @property
    def has_white(self) -> bool:
        return self.kind != "black"

    @property
    def units(self) -> int:
        """Grid steps per full pebble (the k of granularity 1/k)."""
        return self.granularity.denominator

    def on_grid(self, amount: Fraction) -> bool:
        return (amount / self.granularity).denominator == 1

    def leaf_rule(self) -> str:
        return "rule (iii)" if self.kind == "black" else "rule (iiii)"

    def to_json(self) -> Dict[str, str]:
        return {"variant": self.kind, "granularity": format_rational(self.granularity)}


@dataclass(frozen=True)
class PlaceLeafBlack:
    """Add `amount` black weight to a leaf."""

    node: int
    amount: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "amount", parse_rational(self.amount))


@dataclass(frozen=True)
class DecreaseBlack:
    """Remove `amount` black weight from a node."""

    node: int
    amount: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "amount", parse_rational(self.amount))


@dataclass(frozen=True)
class PlaceWhite:
    """Top a node's white weight up so its pebble value becomes 1."""

    node: int


@dataclass(frozen=True)
class BlackPlaceOrSlide:
    """Clear the node's white weight, add `amount` black weight, and decrease
    children's black weight per `child_decreases` -- all in one step.

    Requires every child of the node to have pebble value 1.
    """

    node: int
    amount: Fraction
    child_decreases: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "amount", parse_rational(self.amount))
        raw = self.child_decreases
        if isinstance(raw, Mapping):
            raw = tuple(raw.items())
        normalized = tuple(sorted((int(c), parse_rational(a)) for c, a in raw))
        nodes = [c for c, _ in normalized]
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate child in child_decreases")
        object.__setattr__(self, "child_decreases", normalized)

    def decreases(self) -> Dict[int, Fraction]:
        return dict(self.child_decreases)


Move = Union[PlaceLeafBlack, DecreaseBlack, PlaceWhite, BlackPlaceOrSlide]

_MOVE_TYPE_NAMES = {
    PlaceLeafBlack: "placeLeafBlack",
    DecreaseBlack: "decreaseBlack",
    PlaceWhite: "placeWhite",
    BlackPlaceOrSlide: "blackPlaceOrSlide",
}


@dataclass(frozen=True)
class Violation:
    """Why a move is illegal, citing the violated rule."""

    rule: str
    reason: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.reason}"


class IllegalMoveError(ValueError):
    def __init__(self, move: Move, violation: Violation):
        super().__init__(f"illegal move {move!r} -- {violation}")
        self.move = move
        self.violation = violation


def validate_config(variant: GameVariant, config: PebbleConfig) -> Optional[Violation]:
    """Check that a configuration is valid for the variant (colors and grid)."""
    for node, (b, w) in config.entries().items():
        if not variant.on_grid(b) or not variant.on_grid(w):
            return Violation(
                "granularity",
                f"node {node} weight (b={format_rational(b)}, w={format_rational(w)}) "
                f"is not a multiple of {format_rational(variant.granularity)}",
            )
        if not variant.has_white and w != 0:
            return Violation("variant", f"node {node} has white weight in the black game")
    return None


def validate_move(variant: GameVariant, config: PebbleConfig, move: Move) -> Optional[Violation]:
    """Return None if the move is legal in `config`, else a Violation with the rule citation."""
    shape = config.shape
    try:
        shape.check_node(move.node)
    except ValueError as exc:
        return Violation("parameters", str(exc))

    if isinstance(move, DecreaseBlack):
        return _validate_decrease(variant, config, move)
    if isinstance(move, PlaceLeafBlack):
        return _validate_leaf_place(variant, config, move)
    if isinstance(move, PlaceWhite):
        return _validate_place_white(variant, config, move)
    if isinstance(move, BlackPlaceOrSlide):
        return _validate_place_or_slide(variant, config, move)
    return Violation("parameters", f"unknown move type {type(move).__name__}")


def _check_amount(variant: GameVariant, amount: Fraction, rule: str, allow_zero: bool = False) -> Optional[Violation]:
    if amount < 0 or (amount == 0 and not allow_zero):
        return Violation(rule, f"amount must be positive, got {format_rational(amount)}")
    if not variant.on_grid(amount):
        return Violation(
            rule,
            f"amount {format_rational(amount)} is not a multiple of the granularity "
            f"{format_rational(variant.granularity)}",
        )
    return None


def _validate_decrease(variant: GameVariant, config: PebbleConfig, move: DecreaseBlack) -> Optional[Violation]:
    bad = _check_amount(variant, move.amount, "rule (i)")
    if bad:
        return bad
    b = config.b(move.node)
    if move.amount > b:
        return Violation(
            "rule (i)",
            f"node {move.node} has black weight {format_rational(b)}, cannot decrease by "
            f"{format_rational(move.amount)}",
        )
    return None


def _validate_leaf_place(variant: GameVariant, config: PebbleConfig, move: PlaceLeafBlack) -> Optional[Violation]:
    rule = variant.leaf_rule()
    if not config.shape.is_leaf(move.node):
        return Violation(rule, f"node {move.node} is not a leaf")
    bad = _check_amount(variant, move.amount, rule)
    if bad:
        return bad
    room = ONE - config.value(move.node)
    if move.amount > room:
        return Violation(
            rule,
            f"leaf {move.node} has pebble value {format_rational(config.value(move.node))}; "
            f"adding {format_rational(move.amount)} would exceed 1",
        )
    return None


def _validate_place_white(variant: GameVariant, config: PebbleConfig, move: PlaceWhite) -> Optional[Violation]:
    if not variant.has_white:
        return Violation("variant", "the black game has no white pebbles")
    b = config.b(move.node)
    w = config.w(move.node)
    if variant.kind == "bw":
        if b != 0:
            return Violation(
                "rule (iii)",
                f"node {move.node} has black weight {format_rational(b)}; a full white pebble "
                f"would raise its pebble value above 1",
            )
        if w != 0:
            return Violation("rule (iii)", f"node {move.node} already has a white pebble")
        return None
    if b + w >= 1:
        return Violation("rule (iii)", f"node {move.node} is already fully pebbled; no white weight to add")
    return None


def _validate_place_or_slide(variant: GameVariant, config: PebbleConfig, move: BlackPlaceOrSlide) -> Optional[Violation]:
    shape = config.shape
    children = shape.children(move.node)
    for child in children:
        value = config.value(child)
        if value != 1:
            return Violation(
                "rule (ii)",
                f"child {child} has pebble value {format_rational(value)} < 1",
            )
    decreases = move.decreases()
    for child in decreases:
        if child not in children:
            return Violation("rule (ii)", f"node {child} is not a child of node {move.node}")
    if not children:
        # A leaf trivially has every child pebbled, but with no white weight to
        # clear the move would duplicate PlaceLeafBlack; the canonical encoding
        # for a bare-leaf black increase is the leaf placement move.
        if config.w(move.node) == 0:
            return Violation(
                "rule (ii)",
                f"leaf {move.node} has no white weight to clear and no children to decrease; "
                f"use a leaf placement for a plain black increase",
            )
    bad = _check_amount(variant, move.amount, "rule (ii)", allow_zero=not variant.whole_pebbles)
    if bad:
        return bad
    b = config.b(move.node)
    if variant.whole_pebbles:
        if move.amount != 1:
            return Violation("rule (ii)", "whole-pebble games place exactly 1 black weight")
        if b != 0:
            return Violation("rule (ii)", f"node {move.node} already has black weight {format_rational(b)}")
    elif b + move.amount > 1:
        return Violation(
            "rule (ii)",
            f"black weight {format_rational(b)} + {format_rational(move.amount)} would exceed 1",
        )
    for child, amount in decreases.items():
        bad = _check_amount(variant, amount, "rule (ii)")
        if bad:
            return bad
        child_b = config.b(child)
        if amount > child_b:
            return Violation(
                "rule (ii)",
                f"child {child} has black weight {format_rational(child_b)}, cannot decrease by "
                f"{format_rational(amount)}",
            )
    if not variant.whole_pebbles and move.amount == 0 and config.w(move.node) == 0 and not decreases:
        return Violation(
            "rule (ii)",
            "move has no effect (no black added, no white cleared, no child decreased)",
        )
    return None


def apply_move(variant: GameVariant, config: PebbleConfig, move: Move) -> PebbleConfig:
    """Apply a move, raising IllegalMoveError (with the violation) if it is illegal."""
    violation = validate_move(variant, config, move)
    if violation is not None:
        raise IllegalMoveError(move, violation)
    if isinstance(move, PlaceLeafBlack):
        return config.with_node(move.node, config.b(move.node) + move.amount, config.w(move.node))
    if isinstance(move, DecreaseBlack):
        return config.with_node(move.node, config.b(move.node) - move.amount, config.w(move.node))
    if isinstance(move, PlaceWhite):
        return config.with_node(move.node, config.b(move.node), ONE - config.b(move.node))
    assert isinstance(move, BlackPlaceOrSlide)
    entries = config.entries()
    b, _ = entries.pop(move.node, (ZERO, ZERO))
    new_b = b + move.amount
    if new_b:
        entries[move.node] = (new_b, ZERO)
    for child, amount in move.decreases().items():
        child_b, child_w = entries.pop(child, (ZERO, ZERO))
        child_b -= amount
        if child_b or child_w:
            entries[child] = (child_b, child_w)
    return PebbleConfig(config.shape, entries)


def legal_moves(variant: GameVariant, config: PebbleConfig) -> List[Move]:
    """Enumerate every legal move, quantified over granularity-multiple amounts.

    The list is deterministic (ordered by node, then move type, then amounts)
    and is dual to validate_move: a move is listed iff validate_move accepts it.
    """
    shape = config.shape
    g = variant.granularity
    moves: List[Move] = []
    for node in range(shape.node_count):
        b = config.b(node)
        w = config.w(node)
        value = b + w
        # rule (i): decreases
        if b > 0:
            if variant.whole_pebbles:
                moves.append(DecreaseBlack(node, ONE))
            else:
                step = g
                while step <= b:
                    moves.append(DecreaseBlack(node, step))
                    step += g
        # leaf placements
        if shape.is_leaf(node) and value < 1:
            if variant.whole_pebbles:
                moves.append(PlaceLeafBlack(node, ONE))
            else:
                step = g
                while step <= ONE - value:
                    moves.append(PlaceLeafBlack(node, step))
                    step += g
        # rule (iii): white top-up
        if variant.has_white:
            if variant.kind == "bw":
                if b == 0 and w == 0:
                    moves.append(PlaceWhite(node))
            elif value < 1:
                moves.append(PlaceWhite(node))
        # rule (ii): place-or-slide
        moves.extend(_place_or_slide_moves(variant, config, node))
    return moves


def _place_or_slide_moves(variant: GameVariant, config: PebbleConfig, node: int) -> List[Move]:
    shape = config.shape
    children = shape.children(node)
    if any(config.value(child) != 1 for child in children):
        return []
    b = config.b(node)
    w = config.w(node)
    if not children and w == 0:
        return []  # bare leaf: canonical form is PlaceLeafBlack
    g = variant.granularity
    moves: List[Move] = []
    if variant.whole_pebbles:
        if b != 0:
            return []
        amounts = [ONE]
    else:
        amounts = []
        step = ZERO
        while b + step <= 1:
            amounts.append(step)
            step += g
    decrease_options: List[List[Tuple[int, Fraction]]] = []
    for child in children:
        child_b = config.b(child)
        options: List[Tuple[int, Fraction]] = [(child, ZERO)]
        if child_b > 0:
            if variant.whole_pebbles:
                options.append((child, ONE))
            else:
                step = g
                while step <= child_b:
                    options.append((child, step))
                    step += g
        decrease_options.append(options)
    for amount in amounts:
        for combo in itertools.product(*decrease_options):
            decreases = tuple((c, a) for c, a in combo if a > 0)
            if amount == 0 and w == 0 and not decreases:
                continue  # no effect
            moves.append(BlackPlaceOrSlide(node, amount, decreases))
    return moves


def move_to_json(move: Move) -> Dict[str, object]:
    data: Dict[str, object] = {"type": _MOVE_TYPE_NAMES[type(move)], "node": move.node}
    if isinstance(move, (PlaceLeafBlack, DecreaseBlack, BlackPlaceOrSlide)):
        data["amount"] = format_rational(move.amount)
    if isinstance(move, BlackPlaceOrSlide) and move.child_decreases:
        data["childDecreases"] = {str(c): format_rational(a) for c, a in move.child_decreases}
    return data


def move_from_json(data: Mapping[str, object]) -> Move:
    kind = data.get("type")
    node = data.get("node")
    if not isinstance(node, int) or isinstance(node, bool):
        raise ValueError(f"move is missing an integer 'node', got {node!r}")
    if kind == "placeWhite":
        return PlaceWhite(node)
    amount = parse_rational(data["amount"]) if "amount" in data else None
    if kind == "placeLeafBlack":
        if amount is None:
            raise ValueError("placeLeafBlack requires an 'amount'")
        return PlaceLeafBlack(node, amount)
    if kind == "decreaseBlack":
        if amount is None:
            raise ValueError("decreaseBlack requires an 'amount'")
        return DecreaseBlack(node, amount)
    if kind == "blackPlaceOrSlide":
        raw = data.get("childDecreases", {})
        if not isinstance(raw, Mapping):
            raise ValueError("childDecreases must be an object of node -> amount")
        decreases = {int(c): parse_rational(a) for c, a in raw.items()}
        return BlackPlaceOrSlide(node, amount if amount is not None else ZERO, decreases)
    raise ValueError(f"unknown move type {kind!r}")
