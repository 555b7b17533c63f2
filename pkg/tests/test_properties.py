"""Seeded randomized suite: a thousand valid traces per variant on the 7- and
15-node binary trees, with closure, duality, transform, and containment checks,
plus cross-variant dominance of exact optima on small searched instances."""

from fractions import Fraction

import pytest

from pebblekit import GameVariant, TreeShape, optimal_peak, theorem_min, strategy_for

from property_battery import run_battery

VARIANTS = [
    GameVariant.black(),
    GameVariant.bw(),
    GameVariant.half(),
    GameVariant.fractional(Fraction(1, 2)),
    GameVariant.fractional(Fraction(1, 4)),
    GameVariant.fractional(Fraction(1)),
]
SHAPES = [TreeShape(2, 3), TreeShape(2, 4)]


@pytest.mark.parametrize(
    "variant", VARIANTS, ids=lambda v: f"{v.kind}-g{v.granularity}"
)
@pytest.mark.parametrize("shape", SHAPES, ids=lambda s: f"d{s.d}h{s.h}")
def test_thousand_random_traces(variant, shape):
    stats = run_battery(variant, shape, walks=1000, seed=0xA11CE + shape.h)
    assert stats.walks == 1000
    assert stats.moves > 5000
    assert stats.transforms == 100
    if variant.has_white:
        assert stats.normalized_whites > 0


class TestDominance:
    """Allowing white or fractional pebbles never raises the cost."""

    @pytest.mark.parametrize("h", range(2, 9))
    def test_formula_dominance_on_binary_trees(self, h):
        assert (
            theorem_min("black", 2, h)
            >= theorem_min("bw", 2, h)
            >= theorem_min("half", 2, h)
            == theorem_min("fractional", 2, h)
        )

    @pytest.mark.parametrize("h", range(2, 7))
    def test_strategy_peak_dominance(self, h):
        peaks = {
            kind: strategy_for(kind, 2, h).peak
            for kind in ("black", "bw", "half", "fractional")
        }
        assert peaks["black"] >= peaks["bw"] >= peaks["half"] == peaks["fractional"]

    @pytest.mark.parametrize("h", [2, 3])
    def test_oracle_optimum_dominance(self, h, tmp_path):
        cache = str(tmp_path)
        black = optimal_peak("black", 2, h, cache_dir=cache).optimum
        bw = optimal_peak("bw", 2, h, cache_dir=cache).optimum
        half = optimal_peak("half", 2, h, cache_dir=cache).optimum
        fractional = optimal_peak(
            "fractional", 2, h, granularity=Fraction(1, 2), cache_dir=cache
        ).optimum
        assert black >= bw >= half == fractional
