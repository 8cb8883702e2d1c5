"""Lower-semicontinuous N̄-valued step functions on one-dimensional spaces.

Every supported space is stored as a finite graph whose edges are copies of
the open unit interval:

* closed interval: vertices {0, 1}, one edge 0 -> 1
* open interval: no vertices, one edge with both ends missing
* circle: one vertex (the point 0), one self-loop
* finite graph: as given, self-loops and isolated vertices allowed

A step function keeps, per edge, its interior breakpoints, one value per open
cell and one per breakpoint, plus one value per vertex. Values are ExtNat.
"""
from __future__ import annotations

import random as _random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .extnat import INF, ExtNat, check_ext, parse_ext, to_json_ext

CLOSED, OPEN, CIRCLE, GRAPH = "closed", "open", "circle", "graph"


class SpaceError(ValueError):
    pass


class NotLscError(ValueError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Space:
    kind: str
    n_vertices: int
    edges: tuple  # (u, v) per edge; None marks a missing endpoint

    def __post_init__(self):
        for u, v in self.edges:
            for w in (u, v):
                if w is not None and not 0 <= w < self.n_vertices:
                    raise SpaceError(f"edge endpoint {w} out of range")
        inc = [[] for _ in range(self.n_vertices)]
        for e, (u, v) in enumerate(self.edges):
            if u is not None:
                inc[u].append((e, 0))
            if v is not None:
                inc[v].append((e, 1))
        object.__setattr__(self, "_incidence", tuple(tuple(x) for x in inc))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incidence(self, v: int) -> tuple:
        """(edge, end) pairs meeting vertex v; end 0 is the t -> 0 side."""
        return self._incidence[v]

    @property
    def compact(self) -> bool:
        return all(u is not None and v is not None for u, v in self.edges)

    def to_json(self) -> dict:
        if self.kind == GRAPH:
            return {"kind": GRAPH, "vertices": self.n_vertices,
                    "edges": [list(e) for e in self.edges]}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, data) -> "Space":
        if isinstance(data, str):
            data = {"kind": data}
        kind = data.get("kind")
        if kind == CLOSED:
            return closed_interval()
        if kind == OPEN:
            return open_interval()
        if kind == CIRCLE:
            return circle()
        if kind == GRAPH:
            return graph(data["vertices"], [tuple(e) for e in data["edges"]])
        raise SpaceError(f"unknown space kind {kind!r}")

    def __repr__(self):
        if self.kind == GRAPH:
            return f"Space(graph, {self.n_vertices} vertices, edges={list(self.edges)})"
        return f"Space({self.kind})"


def closed_interval() -> Space:
    return Space(CLOSED, 2, ((0, 1),))


def open_interval() -> Space:
    return Space(OPEN, 0, ((None, None),))


def circle() -> Space:
    return Space(CIRCLE, 1, ((0, 0),))


def graph(n_vertices: int, edges: Sequence) -> Space:
    return Space(GRAPH, n_vertices, tuple((int(u), int(v)) for u, v in edges))


def theta_graph() -> Space:
    return graph(2, [(0, 1), (0, 1), (0, 1)])


def space_by_name(name: str) -> Space:
    table = {"closed": closed_interval, "interval": closed_interval,
             "open": open_interval, "open-interval": open_interval,
             "circle": circle, "theta": theta_graph}
    if name not in table:
        raise SpaceError(f"unknown space {name!r}")
    return table[name]()


@dataclass(frozen=True)
class EdgeData:
    bps: tuple    # interior breakpoints, strictly increasing in (0, 1)
    cells: tuple  # len(bps) + 1 values
    points: tuple  # len(bps) values

    def cell_at(self, t: Fraction) -> int:
        """Index of the cell containing t, t not a breakpoint."""
        return bisect_left(self.bps, t)

    def value(self, t: Fraction) -> ExtNat:
        i = bisect_left(self.bps, t)
        if i < len(self.bps) and self.bps[i] == t:
            return self.points[i]
        return self.cells[i]

    def refine(self, grid: Sequence[Fraction]):
        """Cells and point values on a finer breakpoint list."""
        cells = []
        for i in range(len(grid) + 1):
            left = grid[i - 1] if i else Fraction(0)
            cells.append(self.cells[bisect_right(self.bps, left)] if i else self.cells[0])
        points = [self.value(p) for p in grid]
        return cells, points


def _canon_edge(bps, cells, points) -> EdgeData:
    nb, nc, npt = [], [cells[0]], []
    for j, p in enumerate(bps):
        right = cells[j + 1]
        if nc[-1] == right == points[j]:
            continue
        nb.append(p)
        npt.append(points[j])
        nc.append(right)
    return EdgeData(tuple(nb), tuple(nc), tuple(npt))


@dataclass(frozen=True)
class StepFunction:
    """Canonical LSC step function. Build through ``StepFunction.build``."""

    space: Space
    edges: tuple
    vertices: tuple

    @classmethod
    def build(cls, space: Space, edges: Sequence, vertices: Sequence = None,
              check: bool = True) -> "StepFunction":
        """``edges`` holds one ``(bps, cells, points)`` triple per edge."""
        if len(edges) != space.n_edges:
            raise SpaceError(f"expected {space.n_edges} edges, got {len(edges)}")
        if vertices is None:
            vertices = [0] * space.n_vertices
        if len(vertices) != space.n_vertices:
            raise SpaceError(f"expected {space.n_vertices} vertex values")
        eds = []
        for bps, cells, points in edges:
            bps = [frac(b) for b in bps]
            cells = [check_ext(parse_ext(c)) for c in cells]
            points = [check_ext(parse_ext(p)) for p in points]
            if len(cells) != len(bps) + 1 or len(points) != len(bps):
                raise SpaceError("edge data has inconsistent lengths")
            for a, b in zip([Fraction(0)] + bps, bps + [Fraction(1)]):
                if not a < b:
                    raise SpaceError(f"breakpoints must increase strictly inside (0,1): {bps}")
            if check:
                for j, p in enumerate(points):
                    if p > min(cells[j], cells[j + 1]):
                        raise NotLscError(f"value {p} at breakpoint {bps[j]} exceeds a neighbouring cell")
            eds.append(_canon_edge(bps, cells, points))
        verts = tuple(check_ext(parse_ext(v)) for v in vertices)
        f = cls(space, tuple(eds), verts)
        if check:
            for v in range(space.n_vertices):
                if verts[v] > f.vertex_cap(v):
                    raise NotLscError(f"value {verts[v]} at vertex {v} exceeds an incident cell")
        return f

    # constructors
    @classmethod
    def zero(cls, space: Space) -> "StepFunction":
        return cls.constant(space, 0)

    @classmethod
    def constant(cls, space: Space, value: ExtNat) -> "StepFunction":
        return cls.build(space, [((), (value,), ())] * space.n_edges,
                         [value] * space.n_vertices)

    @classmethod
    def on_edge(cls, space: Space, bps, cells, points=None, vertices=None) -> "StepFunction":
        """Single-edge shortcut; missing point values default to 0."""
        if space.n_edges != 1:
            raise SpaceError("on_edge needs a single-edge space")
        if points is None:
            points = [0] * len(bps)
        return cls.build(space, [(bps, cells, points)], vertices)

    # queries
    def vertex_cap(self, v: int) -> ExtNat:
        """Largest LSC-admissible value at vertex v."""
        cap = INF
        for e, end in self.space.incidence(v):
            ed = self.edges[e]
            cap = min(cap, ed.cells[0] if end == 0 else ed.cells[-1])
        return cap

    def value(self, edge: int, t) -> ExtNat:
        """Value at coordinate t of an edge; t = 0 or 1 means the endpoint vertex."""
        t = frac(t)
        u, v = self.space.edges[edge]
        if t == 0 or t == 1:
            w = u if t == 0 else v
            if w is None:
                raise SpaceError("point not in the space")
            return self.vertices[w]
        if not 0 < t < 1:
            raise SpaceError(f"coordinate {t} outside [0,1]")
        return self.edges[edge].value(t)

    def __call__(self, t) -> ExtNat:
        """Evaluate on a single-edge space; circle coordinates are taken mod 1."""
        t = frac(t)
        if self.space.kind == CIRCLE:
            t = t % 1
        return self.value(0, t)

    def values(self) -> set:
        out = set(self.vertices)
        for ed in self.edges:
            out.update(ed.cells)
            out.update(ed.points)
        return out

    def max_value(self) -> ExtNat:
        return max(self.values(), default=0)

    def is_bounded(self) -> bool:
        return INF not in self.values()

    def is_zero(self) -> bool:
        return self.values() <= {0}

    def sample_points(self, extra: Iterable = ()) -> list:
        """Every breakpoint, one point per cell and every vertex, as (edge, t)."""
        pts = []
        extra = list(extra)
        for e, ed in enumerate(self.edges):
            grid = sorted(set(ed.bps) | {frac(x) for x in extra if 0 < frac(x) < 1})
            edges = [Fraction(0)] + grid + [Fraction(1)]
            for a, b in zip(edges, edges[1:]):
                pts.append((e, (a + b) / 2))
            pts.extend((e, p) for p in grid)
        pts.extend(("v", v) for v in range(self.space.n_vertices))
        return pts

    # arithmetic
    def _same_space(self, other: "StepFunction"):
        if self.space != other.space:
            raise SpaceError("functions live on different spaces")

    def combine(self, other: "StepFunction", op: Callable) -> "StepFunction":
        self._same_space(other)
        eds = []
        for a, b in zip(self.edges, other.edges):
            grid = sorted(set(a.bps) | set(b.bps))
            ca, pa = a.refine(grid)
            cb, pb = b.refine(grid)
            eds.append((grid, [op(x, y) for x, y in zip(ca, cb)],
                        [op(x, y) for x, y in zip(pa, pb)]))
        verts = [op(x, y) for x, y in zip(self.vertices, other.vertices)]
        return StepFunction.build(self.space, eds, verts, check=False)

    def map_values(self, fn: Callable) -> "StepFunction":
        """Apply a monotone map to every value; LSC is preserved."""
        eds = [(ed.bps, [fn(c) for c in ed.cells], [fn(p) for p in ed.points])
               for ed in self.edges]
        return StepFunction.build(self.space, eds, [fn(v) for v in self.vertices], check=False)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return step_add(self, other)

    def __le__(self, other: "StepFunction") -> bool:
        return step_leq(self, other)

    def scale(self, k: int) -> "StepFunction":
        return self.map_values(lambda x: 0 if k == 0 else k * x)

    # serialization
    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "edges": [{"breakpoints": [_fmt_q(p) for p in ed.bps],
                       "cells": [to_json_ext(c) for c in ed.cells],
                       "points": [to_json_ext(p) for p in ed.points]}
                      for ed in self.edges],
            "vertices": [to_json_ext(v) for v in self.vertices],
        }

    @classmethod
    def from_json(cls, data) -> "StepFunction":
        space = Space.from_json(data["space"])
        edges = []
        for ed in data["edges"]:
            bps = [_parse_q(p) for p in ed["breakpoints"]]
            points = ed.get("points", [0] * len(bps))
            edges.append((bps, ed["cells"], points))
        return cls.build(space, edges, data.get("vertices"))

    def __repr__(self):
        parts = []
        for e, ed in enumerate(self.edges):
            s = []
            for j, c in enumerate(ed.cells):
                s.append(_fmt_v(c))
                if j < len(ed.bps):
                    s.append(f"|{_fmt_q(ed.bps[j])}:{_fmt_v(ed.points[j])}|")
            parts.append(f"e{e}[" + " ".join(s) + "]")
        if self.vertices:
            parts.append("v" + str([_fmt_v(v) for v in self.vertices]))
        return "Step(" + ", ".join(parts) + ")"


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_q(s) -> Fraction:
    return Fraction(s) if isinstance(s, str) else frac(s)


def _fmt_v(v) -> str:
    return "oo" if v == INF else str(v)


def step_leq(f: StepFunction, g: StepFunction) -> bool:
    f._same_space(g)
    if any(a > b for a, b in zip(f.vertices, g.vertices)):
        return False
    for a, b in zip(f.edges, g.edges):
        grid = sorted(set(a.bps) | set(b.bps))
        ca, pa = a.refine(grid)
        cb, pb = b.refine(grid)
        if any(x > y for x, y in zip(ca, cb)) or any(x > y for x, y in zip(pa, pb)):
            return False
    return True


def step_add(f: StepFunction, g: StepFunction) -> StepFunction:
    return f.combine(g, lambda x, y: x + y)


def step_max(f: StepFunction, g: StepFunction) -> StepFunction:
    return f.combine(g, max)


def step_min(f: StepFunction, g: StepFunction) -> StepFunction:
    return f.combine(g, min)


def step_sum(fs: Iterable[StepFunction], space: Space) -> StepFunction:
    acc = StepFunction.zero(space)
    for f in fs:
        acc = acc + f
    return acc


@dataclass(frozen=True)
class OpenSet:
    """Open subset, stored as its {0,1}-valued indicator."""

    ind: StepFunction

    def __post_init__(self):
        if not self.ind.values() <= {0, 1}:
            raise ValueError("indicator must be {0,1}-valued")

    @property
    def space(self) -> Space:
        return self.ind.space

    @classmethod
    def empty(cls, space: Space) -> "OpenSet":
        return cls(StepFunction.zero(space))

    @classmethod
    def whole(cls, space: Space) -> "OpenSet":
        return cls(StepFunction.constant(space, 1))

    @classmethod
    def build(cls, space: Space, intervals: dict, points: dict = None,
              vertices: Iterable[int] = ()) -> "OpenSet":
        """intervals: edge -> [(a, b)]; points: edge -> [t] included breakpoints.

        Raises NotLscError when an included point lacks an incident cell.
        """
        points = points or {}
        edges = []
        for e in range(space.n_edges):
            ivs = sorted((frac(a), frac(b)) for a, b in intervals.get(e, ()))
            pts = {frac(t) for t in points.get(e, ())}
            grid = sorted({x for iv in ivs for x in iv if 0 < x < 1} | pts)
            cells = []
            for i in range(len(grid) + 1):
                lo = grid[i - 1] if i else Fraction(0)
                hi = grid[i] if i < len(grid) else Fraction(1)
                mid = (lo + hi) / 2
                cells.append(int(any(a < mid < b for a, b in ivs)))
            pv = [int(p in pts or any(a < p < b for a, b in ivs)) for p in grid]
            edges.append((grid, cells, pv))
        verts = [0] * space.n_vertices
        for v in vertices:
            verts[v] = 1
        return cls(StepFunction.build(space, edges, verts))

    @classmethod
    def interval(cls, space: Space, *ivs, points: Iterable = (), vertices: Iterable[int] = ()) -> "OpenSet":
        """Single-edge shortcut: OpenSet.interval(X, (a, b), (c, d), points=[...])."""
        return cls.build(space, {0: ivs}, {0: list(points)}, vertices)

    def intervals(self, edge: int) -> list:
        ed = self.ind.edges[edge]
        bounds = [Fraction(0)] + list(ed.bps) + [Fraction(1)]
        return [(bounds[i], bounds[i + 1]) for i, c in enumerate(ed.cells) if c]

    def included_points(self, edge: int) -> list:
        ed = self.ind.edges[edge]
        return [p for p, v in zip(ed.bps, ed.points) if v]

    def included_vertices(self) -> list:
        return [v for v, x in enumerate(self.ind.vertices) if x]

    def is_empty(self) -> bool:
        return self.ind.is_zero()

    def __le__(self, other: "OpenSet") -> bool:
        return step_leq(self.ind, other.ind)

    def __or__(self, other: "OpenSet") -> "OpenSet":
        return OpenSet(step_max(self.ind, other.ind))

    def __and__(self, other: "OpenSet") -> "OpenSet":
        return OpenSet(step_min(self.ind, other.ind))

    def __repr__(self):
        parts = []
        for e in range(self.space.n_edges):
            ivs = " u ".join(f"({_fmt_q(a)},{_fmt_q(b)})" for a, b in self.intervals(e))
            pts = self.included_points(e)
            if ivs or pts:
                s = f"e{e}:{ivs or '{}'}"
                if pts:
                    s += " +pts{" + ",".join(_fmt_q(p) for p in pts) + "}"
                parts.append(s)
        if self.included_vertices():
            parts.append(f"v{self.included_vertices()}")
        return "Open(" + "; ".join(parts) + ")"


def open_way_below(U: OpenSet, V: OpenSet) -> bool:
    """closure(U) compact and inside V.

    Closure is taken in the compactified edge: a cell of U touching a missing
    endpoint has non-compact closure, so U is then below nothing.
    """
    if U.space != V.space:
        raise SpaceError("open sets live on different spaces")
    space = U.space
    fu, fv = U.ind, V.ind
    for e, (a, b) in enumerate(zip(fu.edges, fv.edges)):
        grid = sorted(set(a.bps) | set(b.bps))
        cu, _ = a.refine(grid)
        cv, pv = b.refine(grid)
        lo_v, hi_v = space.edges[e]
        last = len(cu) - 1
        for i, inside in enumerate(cu):
            if not inside:
                continue
            if not cv[i]:
                return False
            if i == 0:
                if lo_v is None or not fv.vertices[lo_v]:
                    return False
            elif not pv[i - 1]:
                return False
            if i == last:
                if hi_v is None or not fv.vertices[hi_v]:
                    return False
            elif not pv[i]:
                return False
    # isolated vertices are clopen; vertices with edges were covered above
    for v in range(space.n_vertices):
        if fu.vertices[v] and not fv.vertices[v]:
            return False
    return True


@dataclass(frozen=True)
class Chain:
    levels: tuple  # OpenSets V_0 ⊇ V_1 ⊇ ...
    infinite: bool = False

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


def superlevel(f: StepFunction, n: int) -> OpenSet:
    """f^{-1}((n, oo])."""
    return OpenSet(f.map_values(lambda x: 1 if x > n else 0))


def chain_decompose(f: StepFunction, level_cap: int = 32) -> Chain:
    if f.is_bounded():
        return Chain(tuple(superlevel(f, n) for n in range(int(f.max_value()))))
    finite_max = max((x for x in f.values() if x != INF), default=0)
    top = max(level_cap, int(finite_max))
    return Chain(tuple(superlevel(f, n) for n in range(top)), infinite=True)


def chain_sum(sets: Iterable[OpenSet], space: Space) -> StepFunction:
    return step_sum((U.ind for U in sets), space)


def step_way_below(f: StepFunction, g: StepFunction) -> bool:
    f._same_space(g)
    if not f.is_bounded():
        return False
    for n in range(int(f.max_value())):
        if not open_way_below(superlevel(f, n), superlevel(g, n)):
            return False
    return True


def _arc_indicator_circle(space: Space, a: Fraction, b: Fraction) -> OpenSet:
    """Open arc {x : a < x < b mod 1}, with b - a <= 1."""
    length = b - a
    a = a % 1
    b = a + length
    if b <= 1:
        return OpenSet.build(space, {0: [(a, b)]})
    return OpenSet.build(space, {0: [(a, 1), (0, b - 1)]}, vertices=[0])


def r_neighborhood(V: OpenSet, r) -> OpenSet:
    """Union of open r-balls around points of V (arc length on the circle)."""
    r = frac(r)
    space = V.space
    if r <= 0:
        raise ValueError("radius must be positive")
    if space.kind == CIRCLE:
        out = OpenSet.empty(space)
        for a, b in V.intervals(0):
            lo, hi = a - r, b + r
            if hi - lo > 1:
                return OpenSet.whole(space)
            out = out | _arc_indicator_circle(space, lo, hi)
        return out
    if space.kind == CLOSED:
        out = OpenSet.empty(space)
        for a, b in V.intervals(0):
            lo, hi = a - r, b + r
            verts = [w for w, inside in ((0, lo < 0), (1, hi > 1)) if inside]
            piece = OpenSet.build(space, {0: [(max(lo, 0), min(hi, 1))]}, vertices=verts)
            out = out | piece
        return out
    raise SpaceError(f"r-neighbourhoods need a circle or closed interval, not {space.kind}")


def random_step(space: Space, rng: _random.Random, max_value: int = 3,
                max_breaks: int = 4, denominators: Sequence[int] = (2, 3, 4, 5, 6, 8, 12, 16)) -> StepFunction:
    """Random bounded LSC step function with rational breakpoints."""
    edges = []
    for _ in range(space.n_edges):
        k = rng.randint(0, max_breaks)
        bps = set()
        while len(bps) < k:
            d = rng.choice(denominators)
            bps.add(Fraction(rng.randint(1, d - 1), d))
        bps = sorted(bps)
        cells = [rng.randint(0, max_value) for _ in range(len(bps) + 1)]
        points = [rng.randint(0, min(cells[j], cells[j + 1])) for j in range(len(bps))]
        edges.append((bps, cells, points))
    f = StepFunction.build(space, edges, [0] * space.n_vertices)
    verts = []
    for v in range(space.n_vertices):
        cap = f.vertex_cap(v)
        cap = max_value if cap == INF else cap
        verts.append(rng.randint(0, cap))
    return StepFunction.build(space, edges, verts)


def random_open_set(space: Space, rng: _random.Random, **kw) -> OpenSet:
    return superlevel(random_step(space, rng, max_value=1, **kw), 0)
