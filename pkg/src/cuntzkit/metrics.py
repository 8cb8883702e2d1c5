"""Cu-morphisms out of step-function semigroups, comparison on basis levels,
the discrete semimetric dd and the metric d_Cu."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .basis import Supernatural, grid_function, lambda_enumerate
from .extnat import INF, ext_way_below
from .lsc import CIRCLE, CLOSED, OpenSet, Space, StepFunction, circle, closed_interval, frac, step_way_below
from .matching import BipartiteGraph, bottleneck_assignment, hall_check


class MetricError(ValueError):
    pass


# ---------------------------------------------------------------- morphisms

def arc_distance(x: Fraction, y: Fraction) -> Fraction:
    d = (x - y) % 1
    return min(d, 1 - d)


def chordal(arc) -> float:
    """Chord length |e^{2 pi i x} - e^{2 pi i y}| for an arc distance."""
    return 2 * math.sin(math.pi * float(arc))


@dataclass(frozen=True)
class SpectralMorphism:
    """f -> sum of f(x) over the points, with multiplicity."""

    points: tuple
    kind: str = CIRCLE

    def __post_init__(self):
        pts = [frac(p) for p in self.points]
        if self.kind == CIRCLE:
            pts = [p % 1 for p in pts]
        elif self.kind == CLOSED:
            if any(not 0 <= p <= 1 for p in pts):
                raise MetricError("interval spectra must lie in [0,1]")
        else:
            raise MetricError(f"spectral morphisms live on the circle or interval, not {self.kind}")
        object.__setattr__(self, "points", tuple(sorted(pts)))

    @property
    def space(self) -> Space:
        return circle() if self.kind == CIRCLE else closed_interval()

    def __len__(self):
        return len(self.points)

    def __call__(self, f: StepFunction):
        return sum((f(x) for x in self.points), 0)

    def distance(self, x, y) -> Fraction:
        return arc_distance(x, y) if self.kind == CIRCLE else abs(x - y)

    def to_json(self) -> list:
        out = {}
        for p in self.points:
            out[p] = out.get(p, 0) + 1
        return [[f"{p.numerator}/{p.denominator}", m] for p, m in out.items()]

    @classmethod
    def from_json(cls, data, kind: str = CIRCLE) -> "SpectralMorphism":
        """Accepts ["1/8", ...], [["1/8", 2], ...] or {"points": ..., "kind": ...}."""
        if isinstance(data, dict):
            kind = data.get("kind", kind)
            data = data["points"]
        pts = []
        for item in data:
            if isinstance(item, (list, tuple)):
                p, m = item
                pts.extend([Fraction(p) if isinstance(p, str) else frac(p)] * int(m))
            else:
                pts.append(Fraction(item) if isinstance(item, str) else frac(item))
        return cls(tuple(pts), kind)


@dataclass(frozen=True)
class MorphismHandle:
    """Evaluation procedure plus the target order oracle."""

    evaluate: Callable
    leq: Callable = lambda a, b: a <= b
    way_below: Callable = ext_way_below
    name: str = ""

    def __call__(self, f):
        return self.evaluate(f)


def handle(sm: SpectralMorphism) -> MorphismHandle:
    return MorphismHandle(sm, name=f"spec{[str(p) for p in sm.points]}")


def self_check(h: MorphismHandle, elements: Sequence[StepFunction]) -> Optional[tuple]:
    """First pair on which h fails additivity or monotonicity, else None."""
    for f, g in itertools.product(elements, repeat=2):
        if h(f + g) != h(f) + h(g):
            return ("additive", f, g)
        if f <= g and not h.leq(h(f), h(g)):
            return ("monotone", f, g)
    return None


# ---------------------------------------------------------------- comparison

@dataclass(frozen=True)
class Comparison:
    verdict: str  # strict | plain | none
    counterexample: Optional[tuple] = None

    @property
    def holds(self) -> bool:
        return self.verdict in ("strict", "plain")


def compare_on(a: MorphismHandle, b: MorphismHandle, level: Sequence[StepFunction]) -> Comparison:
    """Crosswise domination of a and b on all pairs g' << g of the level."""
    av = [a(g) for g in level]
    bv = [b(g) for g in level]
    strict = True
    plain_fail = None
    for i, gp in enumerate(level):
        for j, g in enumerate(level):
            s_ok = a.way_below(av[i], bv[j]) and b.way_below(bv[i], av[j])
            p_ok = a.leq(av[i], bv[j]) and b.leq(bv[i], av[j])
            if s_ok:
                continue
            if not step_way_below(gp, g):
                continue
            strict = False
            if not p_ok:
                plain_fail = (gp, g)
                return Comparison("none", plain_fail)
    return Comparison("strict" if strict else "plain")


def _hull_arc(x: Fraction, Q: int) -> tuple:
    """Open arc (lo, hi): the smallest level-Q open set way above the point's star."""
    k = x * Q
    if k.denominator == 1:
        k = int(k)
        return Fraction(k - 2, Q), Fraction(k + 2, Q)
    k = math.floor(k)
    return Fraction(k - 1, Q), Fraction(k + 2, Q)


def _star_arc(x: Fraction, Q: int) -> tuple:
    k = x * Q
    if k.denominator == 1:
        return Fraction(int(k) - 1, Q), Fraction(int(k) + 1, Q)
    k = math.floor(k)
    return Fraction(k, Q), Fraction(k + 1, Q)


def _in_arc(y: Fraction, arc: tuple, kind: str) -> bool:
    lo, hi = arc
    if kind == CIRCLE:
        if hi - lo > 1:
            return True
        return 0 < (y - lo) % 1 < hi - lo
    return lo < y < hi


def hull_graph(X: SpectralMorphism, Y: SpectralMorphism, Q: int) -> BipartiteGraph:
    """x -- y iff y lies in the level-Q hull of the star of x."""
    adj = []
    for x in X.points:
        arc = _hull_arc(x, Q)
        adj.append(tuple(j for j, y in enumerate(Y.points) if _in_arc(y, arc, X.kind)))
    return BipartiteGraph(X.points, Y.points, tuple(adj))


def _arcs_to_openset(arcs, kind: str, Q: int) -> OpenSet:
    space = circle() if kind == CIRCLE else closed_interval()
    out = OpenSet.empty(space)
    for lo, hi in arcs:
        if kind == CIRCLE:
            if hi - lo > 1:
                return OpenSet.whole(space)
            lo_m = lo % 1
            hi_m = lo_m + (hi - lo)
            if hi_m <= 1:
                piece = OpenSet.build(space, {0: [(lo_m, hi_m)]},
                                      {0: [Fraction(k, Q) for k in range(1, Q) if lo_m < Fraction(k, Q) < hi_m]})
            else:
                piece = OpenSet.build(space, {0: [(lo_m, 1), (0, hi_m - 1)]},
                                      {0: [Fraction(k, Q) for k in range(1, Q)
                                           if Fraction(k, Q) > lo_m or Fraction(k, Q) < hi_m - 1]},
                                      vertices=[0])
        else:
            verts = [w for w, inside in ((0, lo < 0), (1, hi > 1)) if inside]
            a, b = max(lo, Fraction(0)), min(hi, Fraction(1))
            piece = OpenSet.build(space, {0: [(a, b)]},
                                  {0: [Fraction(k, Q) for k in range(1, Q) if a < Fraction(k, Q) < b]},
                                  vertices=verts)
        out = out | piece
    return out


def compare_spectral(a: SpectralMorphism, b: SpectralMorphism, q: Supernatural, n: int) -> Comparison:
    """compare_on over Lambda_n(q) for counting morphisms, decided by Hall's condition.

    For W a set of points of a, the smallest level element containing W is
    the union of the points' stars, and the smallest element way above that
    is the union of the hulls. So the comparison holds iff both hull graphs
    satisfy Hall's condition. Values are finite, so plain and strict agree.
    """
    if a.kind != b.kind:
        raise MetricError("spectra on different spaces")
    if n == 0:
        return Comparison("strict")
    Q = q.q(n)
    for X, Y, swap in ((a, b, False), (b, a, True)):
        res = hall_check(hull_graph(X, Y, Q), exhaustive_limit=12)
        if not res.ok:
            W = [X.points[i] for i in res.violating_set]
            gp = _arcs_to_openset([_star_arc(x, Q) for x in W], X.kind, Q)
            g = _arcs_to_openset([_hull_arc(x, Q) for x in W], X.kind, Q)
            return Comparison("none", (gp.ind, g.ind, "b<a" if swap else "a<b"))
    return Comparison("strict")


# ---------------------------------------------------------------- dd

@dataclass(frozen=True)
class DdResult:
    value: object  # Fraction, 0 or INF
    flag: str      # exact | indistinguishable-to-horizon | infinite
    level: int     # largest level on which the comparison held

    def to_json(self) -> dict:
        v = "oo" if self.value == INF else f"{Fraction(self.value).numerator}/{Fraction(self.value).denominator}"
        return {"value": v, "flag": self.flag, "level": self.level}


def dd_from_levels(holds: Callable[[int], bool], q: Supernatural, n_max: int) -> DdResult:
    for n in range(1, n_max + 1):
        if not holds(n):
            if n == 1:
                return DdResult(INF, "infinite", 0)
            return DdResult(Fraction(1, q.q(n - 1)), "exact", n - 1)
    return DdResult(Fraction(0), "indistinguishable-to-horizon", n_max)


def dd_distance(a, b, q: Supernatural, n_max: int = 12, space: Space = None) -> DdResult:
    """Discrete semimetric: 1/q_n for the finest level n <= n_max still comparing.

    Spectral morphisms use the Hall reduction; generic handles enumerate
    Lambda_n(q) of ``space``.
    """
    if isinstance(a, SpectralMorphism) and isinstance(b, SpectralMorphism):
        return dd_from_levels(lambda n: compare_spectral(a, b, q, n).holds, q, n_max)
    if space is None:
        raise MetricError("generic morphisms need an explicit space")
    return dd_from_levels(lambda n: compare_on(a, b, lambda_enumerate(q, n, space)).holds, q, n_max)


# ---------------------------------------------------------------- d_Cu

def dcu_distance(a: SpectralMorphism, b: SpectralMorphism):
    """Bottleneck matching value: min over bijections of the max displacement.

    It equals the defining infimum over r: for r above the value a matching
    with displacements < r exists, below it Hall's condition fails. The
    infimum is not attained.
    """
    if a.kind != b.kind:
        raise MetricError("spectra on different spaces")
    if len(a) != len(b):
        return INF
    if not len(a):
        return Fraction(0)
    n = len(a)
    w = lambda i, j: a.distance(a.points[i], b.points[j])
    cands = sorted({w(i, j) for i in range(n) for j in range(n)})
    t, _ = bottleneck_assignment(n, w, cands)
    return t


def bottleneck_matching(a: SpectralMorphism, b: SpectralMorphism) -> list:
    n = len(a)
    w = lambda i, j: a.distance(a.points[i], b.points[j])
    cands = sorted({w(i, j) for i in range(n) for j in range(n)})
    _, m = bottleneck_assignment(n, w, cands)
    return [(a.points[i], b.points[j]) for i, j in m]


def _dist_to_arcs(y: Fraction, arcs, kind: str) -> Fraction:
    best = None
    for lo, hi in arcs:
        if kind == CIRCLE:
            if hi - lo >= 1:
                d = Fraction(0)
            else:
                off = (y - lo) % 1
                if 0 <= off <= hi - lo:
                    d = Fraction(0)
                else:
                    d = min(off - (hi - lo), 1 - off)
        else:
            d = max(lo - y, y - hi, Fraction(0))
        best = d if best is None else min(best, d)
    return math.inf if best is None else best


def _count_in(points, arcs, kind, r) -> int:
    """Points within distance < r of the arc union; r = 0 means the closure."""
    c = 0
    for y in points:
        d = _dist_to_arcs(y, arcs, kind)
        if (d == 0) if r == 0 else (d < r):
            c += 1
    return c


def _open_count(points, arcs, kind) -> int:
    return sum(1 for y in points if any(_in_arc(y, arc, kind) for arc in arcs))


def dcu_definition_oracle(a: SpectralMorphism, b: SpectralMorphism, grid_resolution,
                          max_candidates: int = 10_000):
    """Least candidate r in {0, h, 2h, ...} satisfying the defining condition
    a(1_V) <= b(1_{V_r}) and b(1_V) <= a(1_{V_r}) for every open V made of
    grid arcs (h = grid_resolution). r = 0 stands for "every small r > 0".

    For a fixed set of captured points the smallest such V is a union of
    stars of those points, so the family is searched through subsets of
    each spectrum.
    """
    h = frac(grid_resolution)
    if len(a) != len(b):
        return INF
    Q = 1 / h
    if Q.denominator != 1:
        raise MetricError("grid resolution must be 1/N")
    Q = int(Q)
    kind = a.kind

    families = []
    for X, Y in ((a, b), (b, a)):
        subs = []
        pts = sorted(set(X.points))
        for k in range(1, len(pts) + 1):
            for W in itertools.combinations(pts, k):
                arcs = [_star_arc(x, Q) for x in W]
                arcs_clip = [(max(lo, Fraction(0)), min(hi, Fraction(1))) for lo, hi in arcs] \
                    if kind == CLOSED else arcs
                subs.append((_open_count(X.points, arcs, kind), arcs_clip))
        families.append((subs, Y))
    for k in range(max_candidates):
        r = k * h
        if all(cnt <= _count_in(Y.points, arcs, kind, r) for subs, Y in families for cnt, arcs in subs):
            return r
    raise MetricError("no feasible candidate found")


def dcu_definition_exhaustive(a: SpectralMorphism, b: SpectralMorphism, grid_resolution):
    """Same as the oracle but literally over every open union of grid arcs
    (only for coarse grids)."""
    h = frac(grid_resolution)
    Q = int(1 / h)
    if len(a) != len(b):
        return INF
    space = a.space
    from .basis import _lambda_level
    level = _lambda_level(space, Q)
    kind = a.kind
    data = []
    for V in level:
        # closure of V is the union of its closed cells
        arcs = OpenSet(V).intervals(0)
        data.append((a(V), b(V), arcs))
    for k in range(10_000):
        r = k * h
        ok = True
        for av, bv, arcs in data:
            if av > _count_in(b.points, arcs, kind, r) or bv > _count_in(a.points, arcs, kind, r):
                ok = False
                break
        if ok:
            return r
    raise MetricError("no feasible candidate found")


# ---------------------------------------------------------------- probes

@dataclass
class ProbeReport:
    dd: DdResult
    d: object
    bound: int
    ok: Optional[bool]          # level form: (i) and (ii) below, for every n <= n_max
    literal_ok: Optional[bool]  # dd <= d <= p dd read literally
    asserted: bool
    witness: Optional[str] = None

    def to_json(self) -> dict:
        d = "oo" if self.d == INF else f"{self.d.numerator}/{self.d.denominator}"
        return {"dd": self.dd.to_json(), "dcu": d, "factor": self.bound, "holds": self.ok,
                "literal_holds": self.literal_ok, "theorem_backed": self.asserted, "witness": self.witness}


def equivalence_probe(a: SpectralMorphism, b: SpectralMorphism, q: Supernatural,
                      n_max: int = 14) -> ProbeReport:
    """Compare dd and d_Cu level by level.

    Level form, for every n <= n_max: (i) d <= 1/q_n implies comparison on
    Lambda_n; (ii) comparison on Lambda_n implies d <= p/q_n. The literal
    chain dd <= d <= p dd is recorded separately: it can fail on the left
    because dd only takes the values 1/q_n (e.g. {0} vs {3/16}: d = 3/16,
    dd = 1/4). Asserted only for q = 2^oo, recorded otherwise.
    """
    dd = dd_distance(a, b, q, n_max)
    d = dcu_distance(a, b)
    asserted = q.primes == (2,)
    p = max(q.primes)
    if dd.value == INF or d == INF:
        ok = literal = dd.value == INF and d == INF
        return ProbeReport(dd, d, p, ok, literal, asserted)
    holds = [True] + [n <= dd.level for n in range(1, n_max + 1)]
    witness = None
    for n in range(n_max + 1):
        r = Fraction(1, q.q(n))
        if d <= r and not holds[n]:
            witness = f"(i) fails at n={n}"
            break
        if holds[n] and not d <= p * r:
            witness = f"(ii) fails at n={n}"
            break
    ok = witness is None
    if dd.flag == "indistinguishable-to-horizon":
        literal = d <= p * Fraction(1, q.q(n_max))
    else:
        literal = dd.value <= d <= p * dd.value
    return ProbeReport(dd, d, p, ok, literal, asserted, witness)
