"""Delimited summaries and figures for bounds and strategy weight profiles.

The report pipeline writes a CSV of per-instance tightness rows next to two
PNG figures: peak-versus-height curves per game, and weight-over-time profiles
of the generated strategies with the closed-form bound marked.
"""

from __future__ import annotations

import csv
import os
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bounds import TightnessReport, verify_tightness
from .core import format_rational
from .strategies import strategy_for

DEFAULT_GAMES: Tuple[str, ...] = ("black", "bw", "half", "fractional")


def write_tightness_csv(reports: Sequence[TightnessReport], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["game", "d", "h", "formula", "strategyPeak", "oracleOptimum", "verdict"]
        )
        for r in reports:
            writer.writerow(
                [
                    r.game,
                    r.d,
                    r.h,
                    format_rational(r.formula) if r.formula is not None else "",
                    format_rational(r.strategy_peak) if r.strategy_peak is not None else "",
                    format_rational(r.oracle_optimum) if r.oracle_optimum is not None else "",
                    r.verdict,
                ]
            )


def bounds_figure(reports: Sequence[TightnessReport], path: str) -> None:
    """Peak versus height, one curve per game (formula lines, strategy dots)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_game: Dict[str, List[TightnessReport]] = {}
    for r in reports:
        by_game.setdefault(r.game, []).append(r)
    for game, rows in sorted(by_game.items()):
        rows = sorted(rows, key=lambda r: r.h)
        heights = [r.h for r in rows if r.formula is not None]
        formulas = [float(r.formula) for r in rows if r.formula is not None]
        ax.plot(heights, formulas, marker="", label=f"{game} bound")
        sh = [r.h for r in rows if r.strategy_peak is not None]
        sp = [float(r.strategy_peak) for r in rows if r.strategy_peak is not None]
        ax.plot(sh, sp, linestyle="none", marker="o", markersize=4)
    ax.set_xlabel("tree height h")
    ax.set_ylabel("minimum peak weight")
    ax.set_title("Root-pebbling cost by game (lines: formulas, dots: strategies)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def weight_profile_figure(
    path: str, d: int = 2, h: int = 6, games: Sequence[str] = DEFAULT_GAMES
) -> None:
    """Total weight after each move for every game's generated strategy."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    from .bounds import theorem_min

    for game in games:
        try:
            generated = strategy_for(game, d, h)
        except Exception:
            continue
        weights = [float(m.w) for m in generated.report.step_metrics]
        steps = [i / max(1, len(weights) - 1) for i in range(len(weights))]
        line = ax.plot(steps, weights, label=f"{game} (peak {generated.report.peak})")
        bound = float(theorem_min(game, d, h))
        ax.axhline(bound, color=line[0].get_color(), linestyle=":", alpha=0.5)
    ax.set_xlabel("progress through the strategy (fraction of moves)")
    ax.set_ylabel("total weight")
    ax.set_title(f"Strategy weight profiles on the d={d}, h={h} tree")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def generate_report(
    out_dir: str,
    d: int = 2,
    heights: Sequence[int] = tuple(range(2, 9)),
    games: Sequence[str] = DEFAULT_GAMES,
    with_oracle: bool = False,
    cache_dir: Optional[str] = None,
    profile_height: int = 6,
) -> List[str]:
    """Write tightness.csv, bounds.png, and weight-profile.png into out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    reports: List[TightnessReport] = []
    for game in games:
        for h in heights:
            reports.append(
                verify_tightness(game, d, h, with_oracle=with_oracle, cache_dir=cache_dir)
            )
    paths = []
    csv_path = os.path.join(out_dir, "tightness.csv")
    write_tightness_csv(reports, csv_path)
    paths.append(csv_path)
    bounds_path = os.path.join(out_dir, "bounds.png")
    bounds_figure(reports, bounds_path)
    paths.append(bounds_path)
    profile_path = os.path.join(out_dir, "weight-profile.png")
    weight_profile_figure(profile_path, d=d, h=profile_height, games=games)
    paths.append(profile_path)
    return paths
