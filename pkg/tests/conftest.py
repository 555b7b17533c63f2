"""Shared fixtures and random generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Tuple

import pytest

from pebblekit import (
    GameVariant,
    PebbleConfig,
    Trace,
    TreeShape,
    legal_moves,
    validate_config,
)

ALL_VARIANTS = [
    GameVariant.black(),
    GameVariant.bw(),
    GameVariant.half(),
    GameVariant.fractional(Fraction(1, 2)),
    GameVariant.fractional(Fraction(1, 4)),
    GameVariant.fractional(Fraction(1)),
]


def random_config(rng: random.Random, variant: GameVariant, shape: TreeShape) -> PebbleConfig:
    """A uniform-ish valid configuration for the variant."""
    k = variant.units
    entries = {}
    for node in range(shape.node_count):
        if rng.random() < 0.45:
            continue
        b_units = rng.randint(0, k)
        w_units = 0
        if variant.has_white:
            w_units = rng.randint(0, k - b_units)
            if variant.whole_pebbles and b_units and w_units:
                w_units = 0
        if b_units or w_units:
            entries[node] = (Fraction(b_units, k), Fraction(w_units, k))
    config = PebbleConfig(shape, entries)
    assert validate_config(variant, config) is None
    return config


def random_walk(
    rng: random.Random,
    variant: GameVariant,
    shape: TreeShape,
    steps: int,
    initial: Optional[PebbleConfig] = None,
) -> Trace:
    """A valid trace built by choosing uniformly among legal moves."""
    from pebblekit import apply_move

    config = initial if initial is not None else PebbleConfig.empty(shape)
    moves = []
    current = config
    for _ in range(steps):
        options = legal_moves(variant, current)
        if not options:
            break
        move = rng.choice(options)
        moves.append(move)
        current = apply_move(variant, current, move)
    return Trace(variant=variant, shape=shape, initial=config, moves=tuple(moves))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
