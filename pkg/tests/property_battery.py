"""Bulk randomized checks shared by the property suite and the acceptance gate.

run_battery drives seeded random walks on one variant and tree and asserts,
per walk: closure (every reached configuration is valid), duality (the chosen
enumerated move passes validate_move), and full-replay consistency.  On a
fixed subsample of walks it additionally asserts the JSON round trip, the
desugaring peak-delta bound, the normalization peak bound, and whole-grid
variant containment (black/bw traces revalidate under the fractional game on
the whole-pebble grid).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from pebblekit import (
    BlackPlaceOrSlide,
    GameVariant,
    PebbleConfig,
    Trace,
    TreeShape,
    apply_move,
    desugar_sliding,
    legal_moves,
    normalize_initial_whites,
    trace_from_json,
    trace_to_json,
    validate_config,
    validate_move,
    validate_trace,
)

ONE = Fraction(1)


@dataclass
class BatteryStats:
    walks: int = 0
    moves: int = 0
    transforms: int = 0
    desugared_slides: int = 0
    normalized_whites: int = 0


def _topped_random_config(
    rng: random.Random, variant: GameVariant, shape: TreeShape
) -> PebbleConfig:
    """A valid random configuration whose white-carrying nodes are fully
    pebbled, so that white placement can reproduce it."""
    k = variant.units
    entries = {}
    for node in range(shape.node_count):
        if rng.random() < 0.5:
            continue
        b_units = rng.randint(0, k)
        w_units = 0
        if variant.has_white and rng.random() < 0.5:
            w_units = k - b_units
            if variant.whole_pebbles and b_units and w_units:
                w_units = 0
        if b_units or w_units:
            entries[node] = (Fraction(b_units, k), Fraction(w_units, k))
    config = PebbleConfig(shape, entries)
    assert validate_config(variant, config) is None
    return config


def _check_transforms(variant: GameVariant, trace: Trace, stats: BatteryStats) -> None:
    report = validate_trace(trace, collect_step_metrics=False)

    # JSON round trip is the identity
    assert trace_from_json(trace_to_json(trace)) == trace

    # splitting sliding moves keeps the trace valid, reaches the same final
    # configuration, and raises the peak by at most one pebble (an exact grid
    # step count; a whole step on whole-pebble grids)
    desugared = desugar_sliding(trace)
    dreport = validate_trace(desugared, collect_step_metrics=False)
    for move in desugared.moves:
        if isinstance(move, BlackPlaceOrSlide):
            assert not move.child_decreases
    final = trace.initial
    for move in trace.moves:
        final = apply_move(variant, final, move)
    dfinal = desugared.initial
    for move in desugared.moves:
        dfinal = apply_move(variant, dfinal, move)
    assert final == dfinal
    delta = dreport.peak - report.peak
    assert 0 <= delta <= 1
    assert (delta / variant.granularity).denominator == 1
    if variant.whole_pebbles or variant.granularity == 1:
        assert delta in (Fraction(0), ONE)
    stats.desugared_slides += sum(
        1
        for m in trace.moves
        if isinstance(m, BlackPlaceOrSlide) and m.child_decreases
    )

    # replacing initial whites with placement moves never raises the peak and
    # reaches the same final configuration
    if variant.has_white:
        normalized = normalize_initial_whites(trace)
        nreport = validate_trace(normalized, collect_step_metrics=False)
        assert nreport.peak <= report.peak
        assert all(w == 0 for _, w in normalized.initial.entries().values())
        nfinal = normalized.initial
        for move in normalized.moves:
            nfinal = apply_move(variant, nfinal, move)
        assert nfinal == final
        stats.normalized_whites += 1

    # whole-grid containment: black and bw traces replay under the fractional
    # game at granularity 1
    if variant.kind in ("black", "bw") :
        relaxed = Trace(
            GameVariant.fractional(ONE), trace.shape, trace.initial, trace.moves
        )
        validate_trace(relaxed, collect_step_metrics=False)
        if variant.kind == "black":
            bw = Trace(GameVariant.bw(), trace.shape, trace.initial, trace.moves)
            validate_trace(bw, collect_step_metrics=False)


def run_battery(
    variant: GameVariant,
    shape: TreeShape,
    walks: int,
    seed: int,
    steps: int = 10,
    transform_every: int = 10,
) -> BatteryStats:
    rng = random.Random(seed)
    stats = BatteryStats()
    for i in range(walks):
        from_whites = variant.has_white and i % 3 == 2
        config = (
            _topped_random_config(rng, variant, shape)
            if from_whites
            else PebbleConfig.empty(shape)
        )
        initial = config
        moves = []
        for _ in range(steps):
            options = legal_moves(variant, config)
            if not options:
                break
            move = rng.choice(options)
            assert validate_move(variant, config, move) is None
            config = apply_move(variant, config, move)
            assert validate_config(variant, config) is None
            moves.append(move)
        trace = Trace(variant=variant, shape=shape, initial=initial, moves=tuple(moves))
        report = validate_trace(trace, collect_step_metrics=False)
        assert report.length == len(moves)
        stats.walks += 1
        stats.moves += len(moves)
        if i % transform_every == 0:
            _check_transforms(variant, trace, stats)
            stats.transforms += 1
    assert stats.walks == walks
    return stats
