"""Core model: balanced d-ary trees, exact pebble configurations, weight metrics.

Everything is exact rational arithmetic (`fractions.Fraction`); floats are
rejected at the boundary so no rounding can creep into weight accounting.
Node weights are serialized as "p/q" strings ("p" when the denominator is 1).

Tree indexing is breadth-first: the root is node 0 and the children of node i
are d*i+1 .. d*i+d.  A tree of height h has (d^h - 1)/(d - 1) nodes; height
counts levels, so h=2 is a root plus d leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class RationalFormatError(ValueError):
    """Raised for malformed or inexact (float) rational inputs."""


def parse_rational(value) -> Fraction:
    """Coerce a value to an exact Fraction.

    Accepts Fraction, int, and strings of the form "p/q" or "p".  Floats and
    decimal strings are rejected: weights must stay exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise RationalFormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value.strip()):
            raise RationalFormatError(f"malformed rational string: {value!r}")
        return Fraction(value.strip())
    raise RationalFormatError(f"not an exact rational: {value!r} ({type(value).__name__})")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    return str(Fraction(value))


@dataclass(frozen=True)
class TreeShape:
    """A balanced d-ary tree of height h with breadth-first node ids."""

    d: int
    h: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 2:
            raise ValueError(f"arity d must be an integer >= 2, got {self.d!r}")
        if not isinstance(self.h, int) or self.h < 1:
            raise ValueError(f"height h must be an integer >= 1, got {self.h!r}")

    @property
    def node_count(self) -> int:
        return (self.d ** self.h - 1) // (self.d - 1)

    def check_node(self, node: int) -> None:
        if not isinstance(node, int) or isinstance(node, bool) or not (0 <= node < self.node_count):
            raise ValueError(f"node {node!r} out of range for tree with {self.node_count} nodes")

    def parent(self, node: int) -> Optional[int]:
        self.check_node(node)
        if node == 0:
            return None
        return (node - 1) // self.d

    def children(self, node: int) -> List[int]:
        self.check_node(node)
        first = self.d * node + 1
        if first >= self.node_count:
            return []
        return list(range(first, first + self.d))

    def is_leaf(self, node: int) -> bool:
        self.check_node(node)
        return self.d * node + 1 >= self.node_count

    def depth(self, node: int) -> int:
        """Edges from the root; the root has depth 0, leaves depth h-1."""
        self.check_node(node)
        depth = 0
        while node != 0:
            node = (node - 1) // self.d
            depth += 1
        return depth

    def subtree_height(self, node: int) -> int:
        return self.h - self.depth(node)

    def principal_subtree_roots(self) -> List[int]:
        """The children of the root (empty for a single-node tree)."""
        return self.children(0)

    def subtree_nodes(self, node: int) -> Iterator[int]:
        """All nodes of the subtree rooted at `node`, in BFS order."""
        self.check_node(node)
        pending = [node]
        while pending:
            current = pending.pop(0)
            yield current
            pending.extend(self.children(current))

    def in_subtree(self, node: int, subtree_root: int) -> bool:
        self.check_node(node)
        self.check_node(subtree_root)
        while node > subtree_root:
            node = (node - 1) // self.d
        return node == subtree_root


def build_tree(d: int, h: int) -> TreeShape:
    """Build a balanced d-ary tree shape of height h (h=2 is root plus d leaves)."""
    return TreeShape(d, h)


class PebbleConfig:
    """An immutable assignment of black/white pebble weight to tree nodes.

    Per node, b(i) >= 0, w(i) >= 0 and b(i) + w(i) <= 1; the constructor
    enforces this, so every reachable instance is a valid configuration.
    Only nonzero entries are stored (configurations in play are sparse).
    """

    __slots__ = ("shape", "_entries", "_key", "_total")

    def __init__(self, shape: TreeShape, entries: Mapping[int, Tuple[Fraction, Fraction]] = ()):
        object.__setattr__(self, "shape", shape)
        cleaned: Dict[int, Tuple[Fraction, Fraction]] = {}
        total = ZERO
        items = entries.items() if isinstance(entries, Mapping) else entries
        for node, (b, w) in items:
            shape.check_node(node)
            b = parse_rational(b)
            w = parse_rational(w)
            if b < 0 or w < 0:
                raise ValueError(f"node {node}: negative pebble weight (b={b}, w={w})")
            if b + w > 1:
                raise ValueError(f"node {node}: pebble value {b + w} exceeds 1 (b={b}, w={w})")
            if node in cleaned:
                raise ValueError(f"node {node}: duplicate entry")
            if b or w:
                cleaned[node] = (b, w)
                total += b + w
        object.__setattr__(self, "_entries", cleaned)
        object.__setattr__(self, "_key", tuple(sorted((n, bw[0], bw[1]) for n, bw in cleaned.items())))
        object.__setattr__(self, "_total", total)

    def __setattr__(self, name, value):
        raise AttributeError("PebbleConfig is immutable")

    @classmethod
    def empty(cls, shape: TreeShape) -> "PebbleConfig":
        return cls(shape, {})

    def b(self, node: int) -> Fraction:
        self.shape.check_node(node)
        return self._entries.get(node, (ZERO, ZERO))[0]

    def w(self, node: int) -> Fraction:
        self.shape.check_node(node)
        return self._entries.get(node, (ZERO, ZERO))[1]

    def value(self, node: int) -> Fraction:
        """The pebble value b(i) + w(i) of a node."""
        b, w = self._entries.get(node, (ZERO, ZERO))
        return b + w

    def nonzero_nodes(self) -> List[int]:
        return sorted(self._entries)

    def entries(self) -> Dict[int, Tuple[Fraction, Fraction]]:
        return dict(self._entries)

    def total_weight(self) -> Fraction:
        return self._total

    def with_node(self, node: int, b, w) -> "PebbleConfig":
        """Return a new configuration with node set to (b, w)."""
        updated = dict(self._entries)
        updated.pop(node, None)
        b = parse_rational(b)
        w = parse_rational(w)
        if b or w:
            updated[node] = (b, w)
        return PebbleConfig(self.shape, updated)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PebbleConfig):
            return NotImplemented
        return self.shape == other.shape and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.shape, self._key))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{n}:({format_rational(b)},{format_rational(w)})" for n, (b, w) in sorted(self._entries.items())
        )
        return f"PebbleConfig(d={self.shape.d}, h={self.shape.h}, {{{parts}}})"


@dataclass(frozen=True)
class MetricsReport:
    """Weight measures of a configuration over a scope (whole tree or a subtree).

    w is the total weight in scope, rw the weight on the scope root and sw the
    rest; the b./w. variants split each by color.  Invariants: w = sw + rw,
    sw = b.sw + w.sw, rw = b.rw + w.rw.
    """

    scope_node: int
    w: Fraction
    sw: Fraction
    b_sw: Fraction
    w_sw: Fraction
    rw: Fraction
    b_rw: Fraction
    w_rw: Fraction

    def to_json(self) -> Dict[str, object]:
        return {
            "scope": self.scope_node,
            "w": format_rational(self.w),
            "sw": format_rational(self.sw),
            "b.sw": format_rational(self.b_sw),
            "w.sw": format_rational(self.w_sw),
            "rw": format_rational(self.rw),
            "b.rw": format_rational(self.b_rw),
            "w.rw": format_rational(self.w_rw),
        }


def metrics(config: PebbleConfig, scope_node: int = 0) -> MetricsReport:
    """Compute the weight measures of `config` restricted to the subtree at `scope_node`.

    The default scope is the whole tree (scope root 0).  The scope root's own
    weight is reported as rw and excluded from sw.
    """
    shape = config.shape
    shape.check_node(scope_node)
    b_total = ZERO
    w_total = ZERO
    for node, (b, w) in config.entries().items():
        if shape.in_subtree(node, scope_node):
            b_total += b
            w_total += w
    b_root = config.b(scope_node)
    w_root = config.w(scope_node)
    return MetricsReport(
        scope_node=scope_node,
        w=b_total + w_total,
        sw=(b_total - b_root) + (w_total - w_root),
        b_sw=b_total - b_root,
        w_sw=w_total - w_root,
        rw=b_root + w_root,
        b_rw=b_root,
        w_rw=w_root,
    )


def peak(history: Iterable[PebbleConfig]) -> Fraction:
    """The bottleneck of a configuration history: the maximum total weight."""
    best: Optional[Fraction] = None
    for config in history:
        weight = config.total_weight()
        if best is None or weight > best:
            best = weight
    if best is None:
        raise ValueError("peak of an empty history is undefined")
    return best
