"""Uniform bases of size q: partitions, the levels (M_n, eps_n), finite levels
Lambda_n, the UHF semigroup Cu(M_q), endpoint-constrained (NCCW) profiles and
basis-translation maps."""
from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .extnat import INF
from .lsc import (CLOSED, NotLscError, OpenSet, Space, StepFunction, chain_decompose,
                  closed_interval, frac, open_way_below, step_add, step_leq, step_way_below,
                  superlevel)


class BasisError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class Supernatural:
    """q = p_1 p_2 ...; the prime list is cycled, q_0 = 1."""

    primes: tuple

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if not ps or not all(_is_prime(p) for p in ps):
            raise BasisError(f"need a nonempty list of primes, got {self.primes!r}")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, *primes) -> "Supernatural":
        return cls(tuple(primes))

    def prime(self, i: int) -> int:
        """i-th factor, 1-based."""
        return self.primes[(i - 1) % len(self.primes)]

    def q(self, n: int) -> int:
        out = 1
        for i in range(1, n + 1):
            out *= self.prime(i)
        return out

    def to_json(self) -> dict:
        return {"primes": list(self.primes), "rule": "cycle"}

    @classmethod
    def from_json(cls, data) -> "Supernatural":
        if isinstance(data, (int, str)):
            return cls((int(data),))
        if isinstance(data, list):
            return cls(tuple(data))
        if data.get("rule", "cycle") != "cycle":
            raise BasisError(f"unknown rule {data.get('rule')!r}")
        return cls(tuple(data["primes"]))

    def __str__(self):
        if len(self.primes) == 1:
            return f"{self.primes[0]}^oo"
        return "(" + "*".join(map(str, self.primes)) + ")^oo"


# ---------------------------------------------------------------- grid level

def grid(Q: int) -> list:
    return [Fraction(k, Q) for k in range(1, Q)]


def grid_function(space: Space, Q: int, cells: Sequence, points: Sequence,
                  vertices: Sequence) -> StepFunction:
    """cells[e][k] on (k/Q, (k+1)/Q); points[e][j] at (j+1)/Q."""
    g = grid(Q)
    return StepFunction.build(space, [(g, cells[e], points[e]) for e in range(space.n_edges)],
                              vertices)


def in_M(f: StepFunction, q: Supernatural, n: int) -> bool:
    """f finite-valued and constant on every open cell of the q_n-partition."""
    if n == 0:
        return f.is_zero()
    if not f.is_bounded():
        return False
    Q = q.q(n)
    return all((b * Q).denominator == 1 for ed in f.edges for b in ed.bps)


def closed_cell_min(f: StepFunction, e: int, a: Fraction, b: Fraction):
    """min of f over the closed segment [a, b] of edge e; 0 if the segment
    reaches a missing endpoint (its closure is then not compact)."""
    ed = f.edges[e]
    u, v = f.space.edges[e]
    lo, hi = bisect_right(ed.bps, a), bisect_left(ed.bps, b)
    vals = list(ed.cells[lo:hi + 1])
    vals.extend(ed.points[lo:hi])
    for t, w in ((a, u), (b, v)):
        if t == 0 or t == 1:
            if w is None:
                return 0
            vals.append(f.vertices[w])
        else:
            vals.append(ed.value(t))
    return min(vals)


def epsilon_n(f: StepFunction, q: Supernatural, n: int) -> StepFunction:
    """Largest g in M_n with g << f.

    A cell is counted at level m iff its closure lies in f^{-1}((m, oo]), so
    summing levels gives the minimum of f over the closed cell. Grid points and
    vertices take the minimum of their incident cells; isolated vertices keep f.
    """
    if not f.is_bounded():
        raise BasisError("not in S_<<: epsilon_n needs a bounded function")
    space = f.space
    if n == 0:
        return StepFunction.zero(space)
    Q = q.q(n)
    cells, points = [], []
    for e in range(space.n_edges):
        cs = [closed_cell_min(f, e, Fraction(k, Q), Fraction(k + 1, Q)) for k in range(Q)]
        cells.append(cs)
        points.append([min(cs[j], cs[j + 1]) for j in range(Q - 1)])
    verts = []
    for v in range(space.n_vertices):
        inc = space.incidence(v)
        if not inc:
            verts.append(f.vertices[v])
        else:
            verts.append(min(cells[e][0] if end == 0 else cells[e][-1] for e, end in inc))
    return grid_function(space, Q, cells, points, verts)


def epsilon_levelwise(f: StepFunction, q: Supernatural, n: int) -> StepFunction:
    """The recipe read literally: cut down each level set, then sum."""
    if not f.is_bounded():
        raise BasisError("not in S_<<: epsilon_n needs a bounded function")
    space = f.space
    acc = StepFunction.zero(space)
    if n == 0:
        return acc
    Q = q.q(n)
    for V in chain_decompose(f):
        ind = V.ind
        cells = [[int(closed_cell_min(ind, e, Fraction(k, Q), Fraction(k + 1, Q)) == 1)
                  for k in range(Q)] for e in range(space.n_edges)]
        points = [[cs[j] & cs[j + 1] for j in range(Q - 1)] for cs in cells]
        verts = []
        for v in range(space.n_vertices):
            inc = space.incidence(v)
            if inc:
                verts.append(int(all(cells[e][0 if end == 0 else -1] for e, end in inc)))
            else:
                verts.append(ind.vertices[v])
        acc = acc + grid_function(space, Q, cells, points, verts)
    return acc


def lambda_size_bound(space: Space, Q: int) -> int:
    """Upper bound on |Lambda_n|: 2^(cells + points)."""
    return 2 ** (space.n_edges * (2 * Q - 1) + space.n_vertices)


def lambda_enumerate(q: Supernatural, n: int, space: Space, limit: int = 200_000) -> list:
    """All {0,1}-valued elements of M_n, canonical and duplicate free."""
    if n == 0:
        return [StepFunction.zero(space)]
    return list(_lambda_cached(q, n, space, limit))


def _lambda_cached(q: Supernatural, n: int, space: Space, limit: int) -> tuple:
    return _lambda_level(space, q.q(n), limit)


@lru_cache(maxsize=64)
def _lambda_level(space: Space, Q: int, limit: int = 200_000) -> tuple:
    E = space.n_edges
    out = []
    for mask in itertools.product((0, 1), repeat=E * Q):
        cells = [list(mask[e * Q:(e + 1) * Q]) for e in range(E)]
        free = []  # ("p", e, j) or ("v", v)
        for e in range(E):
            for j in range(Q - 1):
                if cells[e][j] and cells[e][j + 1]:
                    free.append(("p", e, j))
        for v in range(space.n_vertices):
            inc = space.incidence(v)
            if all(cells[e][0 if end == 0 else -1] for e, end in inc):
                free.append(("v", v))
        for choice in itertools.product((0, 1), repeat=len(free)):
            points = [[0] * (Q - 1) for _ in range(E)]
            verts = [0] * space.n_vertices
            for c, slot in zip(choice, free):
                if slot[0] == "p":
                    points[slot[1]][slot[2]] = c
                else:
                    verts[slot[1]] = c
            out.append(grid_function(space, Q, cells, points, verts))
            if len(out) > limit:
                raise BasisError(f"level with {Q} cells per edge exceeds the enumeration limit {limit}")
    return tuple(out)


def _closure_contains_point(U: StepFunction, e: int, t: Fraction) -> bool:
    ed = U.edges[e]
    i = bisect_left(ed.bps, t)
    if i < len(ed.bps) and ed.bps[i] == t:
        return bool(ed.points[i] or ed.cells[i] or ed.cells[i + 1])
    return bool(ed.cells[i])


def _closure_contains_vertex(U: StepFunction, v: int) -> bool:
    if U.vertices[v]:
        return True
    return any(U.edges[e].cells[0 if end == 0 else -1] for e, end in U.space.incidence(v))


def lambda_hull(U: OpenSet, q: Supernatural, m: int) -> Optional[OpenSet]:
    """Smallest element W of Lambda_m with U << W, or None if there is none."""
    ind = U.ind
    space = U.space
    if U.is_empty():
        return U
    if m == 0:
        return None
    for e, (u, v) in enumerate(space.edges):
        ed = ind.edges[e]
        if (u is None and ed.cells[0]) or (v is None and ed.cells[-1]):
            return None
    Q = q.q(m)
    cells, points = [], []
    for e, (u, v) in enumerate(space.edges):
        ed = ind.edges[e]
        pin = [_closure_contains_point(ind, e, Fraction(j, Q)) for j in range(1, Q)]
        lo_in = u is not None and _closure_contains_vertex(ind, u)
        hi_in = v is not None and _closure_contains_vertex(ind, v)
        ends = [lo_in] + pin + [hi_in]
        cs = []
        for k in range(Q):
            a, b = Fraction(k, Q), Fraction(k + 1, Q)
            meets = any(ed.cells[i] for i in range(bisect_right(ed.bps, a), bisect_left(ed.bps, b) + 1))
            meets = meets or any(ed.points[i] for i in range(bisect_right(ed.bps, a), bisect_left(ed.bps, b)))
            cs.append(int(meets or ends[k] or ends[k + 1]))
        cells.append(cs)
        points.append([int(x) for x in pin])
    verts = [int(_closure_contains_vertex(ind, v)) for v in range(space.n_vertices)]
    return OpenSet(grid_function(space, Q, cells, points, verts))


def interpolate(g1: StepFunction, g2: StepFunction, q: Supernatural, n: int) -> StepFunction:
    """h in M_{n+1} with g1 << h << g2.

    Levelwise this keeps the level-(n+1) sub-cells whose closure stays inside
    the level set of g2, i.e. shaves one sub-cell off each open end of each
    component. That is exactly eps_{n+1}(g2).
    """
    if not (in_M(g1, q, n) and in_M(g2, q, n)):
        raise BasisError(f"interpolate needs g1, g2 in M_{n}")
    if not step_way_below(g1, g2):
        raise BasisError("interpolate needs g1 << g2")
    h = epsilon_n(g2, q, n + 1)
    if not (step_way_below(g1, h) and step_way_below(h, g2)):
        raise AssertionError("interpolation failed; construction bug")
    return h


# ---------------------------------------------------------------- axioms

def _local_min_lower_bound(f: StepFunction, e, t: Fraction, r: Fraction):
    """min of f over the closed r-ball around a point of an edge (r < 1/2).

    Reaching a missing endpoint gives 0.
    """
    space = f.space
    u, v = space.edges[e]
    vals = [closed_cell_min(f, e, max(t - r, Fraction(0)), min(t + r, Fraction(1)))
            if t - r != t + r else f.edges[e].value(t)]
    for reach, w in ((r - t, u), (r - (1 - t), v)):
        if reach >= 0:
            if w is None:
                return 0
            vals.append(f.vertices[w])
            if reach > 0:
                vals.extend(_germ_min(f, w, reach))
    return min(vals)


def _germ_min(f: StepFunction, w: int, reach: Fraction):
    out = []
    for e2, end in f.space.incidence(w):
        if end == 0:
            out.append(closed_cell_min(f, e2, Fraction(0), reach))
        else:
            out.append(closed_cell_min(f, e2, 1 - reach, Fraction(1)))
    return out


def local_min(f: StepFunction, pt, r: Fraction):
    if pt[0] == "v":
        w = pt[1]
        if not f.space.incidence(w):
            return f.vertices[w]
        return min([f.vertices[w]] + _germ_min(f, w, r))
    return _local_min_lower_bound(f, pt[0], pt[1], r)


@dataclass
class AxiomReport:
    q: str
    space: str
    n_max: int
    samples: int
    checks: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness=None):
        self.checks[name] = self.checks.get(name, 0) + 1
        if not ok:
            self.failures.setdefault(name, []).append(witness)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {name: {"checked": c, "failed": len(self.failures.get(name, ()))}
                for name, c in sorted(self.checks.items())}


AXIOMS = ("U1", "U2", "U3-increasing", "U3-way-below", "U3-sup", "U4",
          "super-additive", "monotone", "density", "in-M")


def verify_axioms(q: Supernatural, space: Space, samples: Sequence[StepFunction], n_max: int,
                  pairs: Optional[Sequence] = None) -> AxiomReport:
    """Check (U1)-(U4), density, super-additivity and monotonicity on samples.

    ``pairs`` defaults to every unordered pair of samples.
    """
    rep = AxiomReport(str(q), repr(space), n_max, len(samples))
    for name in AXIOMS:
        rep.checks.setdefault(name, 0)
    eps = {}

    def E(i, n):
        if (i, n) not in eps:
            eps[i, n] = epsilon_n(samples[i], q, n)
        return eps[i, n]

    for i, s in enumerate(samples):
        pts = s.sample_points(grid(q.q(n_max)))
        prev = None
        for n in range(n_max + 1):
            g = E(i, n)
            rep.record("in-M", in_M(g, q, n), (i, n))
            # U1: M_n inside M_{n+1}
            rep.record("U1", in_M(g, q, n + 1), (i, n))
            rep.record("U3-way-below", step_way_below(g, s), (i, n))
            if prev is not None:
                rep.record("U3-increasing", step_leq(prev, g), (i, n))
            prev = g
            if n >= 1:
                r = Fraction(1, q.q(n))
                ok = all(_value(g, pt) >= local_min(s, pt, r) for pt in pts)
                rep.record("U3-sup", ok, (i, n))
        # U4 and density on members of M_l
        for l in range(1, n_max):
            m = E(i, l)
            chain = [epsilon_n(m, q, k) for k in range(l + 1, n_max + 1)]
            for a, b in zip(chain, chain[1:]):
                rep.record("U4", step_way_below(a, b), (i, l))
            if chain:
                rep.record("density", step_leq(chain[-1], m) and all(
                    _value(chain[-1], pt) >= local_min(m, pt, Fraction(1, q.q(n_max)))
                    for pt in m.sample_points(grid(q.q(n_max)))), (i, l))
    if pairs is None:
        pairs = itertools.combinations(range(len(samples)), 2)
    for i, j in pairs:
        s, t = samples[i], samples[j]
        st = step_add(s, t)
        lo = s.combine(t, min)
        for n in range(1, n_max + 1):
            rep.record("super-additive", step_leq(step_add(E(i, n), E(j, n)), epsilon_n(st, q, n)), (i, j, n))
            rep.record("monotone", step_leq(epsilon_n(lo, q, n), E(i, n)), (i, j, n))
            # U2: additivity on M_l, l < n - 1
            for l in range(1, n - 1):
                a, b = E(i, l), E(j, l)
                rep.record("U2", epsilon_n(step_add(a, b), q, n) == step_add(epsilon_n(a, q, n), epsilon_n(b, q, n)),
                           (i, j, l, n))
    return rep


def _value(f: StepFunction, pt):
    if pt[0] == "v":
        return f.vertices[pt[1]]
    return f.value(pt[0], pt[1])


def superadditivity_witness(q: Supernatural, n: int, space: Space):
    """Search two interval indicators on edge 0 with eps_n(f) + eps_n(g) < eps_n(f + g)."""
    Q = q.q(n)
    ticks = [Fraction(k, 4 * Q) for k in range(4 * Q + 1)]
    ivs = [(a, b) for a, b in itertools.combinations(ticks, 2)]
    sets = [OpenSet.build(space, {0: [iv]}).ind for iv in ivs]
    eps = [epsilon_n(f, q, n) for f in sets]
    for i, j in itertools.combinations(range(len(sets)), 2):
        lhs = step_add(eps[i], eps[j])
        rhs = epsilon_n(step_add(sets[i], sets[j]), q, n)
        if lhs != rhs:
            return sets[i], sets[j]
    return None


# ---------------------------------------------------------------- UHF

@dataclass(frozen=True)
class UhfElement:
    """x_c (compact, kind 'c') or x_s (soft, kind 's') in Cu(M_q)."""

    value: object
    kind: str = "c"

    def __post_init__(self):
        if self.kind not in ("c", "s"):
            raise BasisError("kind must be 'c' or 's'")
        v = self.value if self.value == INF else frac(self.value)
        if self.kind == "c" and (v == INF or v < 0):
            raise BasisError("compact elements are finite and nonnegative")
        if self.kind == "s" and not v > 0:
            raise BasisError("soft elements are positive")
        object.__setattr__(self, "value", v)

    def __add__(self, other: "UhfElement") -> "UhfElement":
        return uhf_add(self, other)

    def __str__(self):
        v = "oo" if self.value == INF else str(self.value)
        return f"{v}_{self.kind}"


def Compact(x) -> UhfElement:
    return UhfElement(x, "c")


def Soft(x) -> UhfElement:
    return UhfElement(x, "s")


def uhf_add(a: UhfElement, b: UhfElement) -> UhfElement:
    s = a.value + b.value
    if a.kind == b.kind == "c":
        return Compact(s)
    # mixed sum: x_c + y_s = (x + y)_s; the zero compact is neutral
    if a.kind == "c" and a.value == 0:
        return b
    if b.kind == "c" and b.value == 0:
        return a
    return Soft(s)


def uhf_leq(a: UhfElement, b: UhfElement) -> bool:
    if a.kind == "c" and b.kind == "s":
        return a.value < b.value
    return a.value <= b.value


def uhf_way_below(a: UhfElement, b: UhfElement) -> bool:
    if a.kind == "c" and a.value == 0:
        return True
    # a compact target is way below itself, so anything below it is too
    if b.kind == "c":
        return a.value <= b.value
    return a.value < b.value


def uhf_in_M(x: UhfElement, q: Supernatural, n: int) -> bool:
    return x.kind == "c" and (x.value * q.q(n)).denominator == 1


def uhf_epsilon_n(s: UhfElement, q: Supernatural, n: int) -> UhfElement:
    """Largest x in (1/q_n)N with x << s."""
    if s.value == INF:
        raise BasisError("no maximum: every compact is way below oo_s")
    Q = q.q(n)
    k = (s.value * Q).__floor__()
    if s.kind == "s" and Fraction(k, Q) == s.value:
        k -= 1
    return Compact(Fraction(max(k, 0), Q))


# ---------------------------------------------------------------- NCCW

class StabilityViolation(BasisError):
    pass


@dataclass(frozen=True)
class NccwProfile:
    """{f in Lsc([0,1], (1/r^l)N̄) : f(0), f(1) in (r/r^l)N̄}.

    Functions are stored rescaled by r^l, so values are plain ExtNat and the
    endpoint condition reads f(0), f(1) in rN̄.
    """

    r: int
    l: int = 1

    def __post_init__(self):
        if self.r < 1 or self.l < 1:
            raise BasisError("r and l must be positive")

    @property
    def scale(self) -> int:
        return self.r ** self.l

    def endpoint_ok(self, x) -> bool:
        return x == INF or x % self.r == 0

    def member(self, f: StepFunction) -> bool:
        return f.space.kind == CLOSED and all(self.endpoint_ok(x) for x in f.vertices)

    def in_M(self, f: StepFunction, q: Supernatural, n: int) -> bool:
        return self.member(f) and in_M(f, q, n)


def nccw_epsilon(f: StepFunction, profile: NccwProfile, q: Supernatural, n: int,
                 raw: bool = False) -> StepFunction:
    """eps'_n(f) = max{g in M'_n : g << f} for a rescaled profile member f.

    Levelwise eps_n can leave an endpoint value outside rN̄ when f has more than
    one level on the first cell (the raw stability claim fails there), so the
    endpoint values are rounded down to rN̄, which is the maximum inside M'_n.
    With ``raw=True`` the plain eps_n is returned and an endpoint off the
    lattice raises StabilityViolation.
    """
    if not profile.member(f):
        raise BasisError("f does not satisfy the profile's endpoint condition")
    g = epsilon_n(f, q, n)
    if raw:
        if not profile.member(g):
            raise StabilityViolation(f"eps_{n}(f) leaves the profile: endpoints {g.vertices}")
        return g
    r = profile.r
    h = StepFunction.build(g.space, [(ed.bps, ed.cells, ed.points) for ed in g.edges],
                           [x - x % r for x in g.vertices])
    if not (profile.in_M(h, q, n) and step_way_below(h, f)):
        raise StabilityViolation(f"eps'_{n}(f) = {h} is not a profile member below f")
    return h


def random_profile_member(profile: NccwProfile, rng, max_value: int = 6, **kw) -> StepFunction:
    from .lsc import random_step
    space = closed_interval()
    for _ in range(1000):
        f = random_step(space, rng, max_value=max_value, **kw)
        caps = [f.vertex_cap(v) for v in range(2)]
        verts = []
        for c in caps:
            c = max_value if c == INF else c
            choices = [x for x in range(0, c + 1, profile.r)]
            verts.append(rng.choice(choices))
        g = StepFunction.build(space, [(ed.bps, ed.cells, ed.points) for ed in f.edges], verts)
        if profile.member(g):
            return g
    raise BasisError("could not sample a profile member")


# ---------------------------------------------------------------- translation

def way_below_pairs(level: Sequence[StepFunction]):
    for gp in level:
        for g in level:
            if step_way_below(gp, g):
                yield gp, g


def basis_translation(q: Supernatural, q2: Supernatural, n: int, space: Space,
                      cap: int = 32, method: str = "pairs") -> int:
    """Minimal p(n) with: every g' << g in Lambda_n(q) admits h', h in
    Lambda_{p(n)}(q2) with g' << h' << h << g.

    Given a level m the best choice is h' = hull_m(g'), h = hull_m(h'), hull
    being the smallest Lambda_m element way above a set, so each candidate m is
    decided exactly. ``method="atoms"`` checks only single cells and point
    stars of level n, which suffices because hulls commute with unions.
    """
    if n == 0:
        return 0

    def ok(gp, g, m):
        h1 = lambda_hull(OpenSet(gp), q2, m)
        if h1 is None:
            return False
        h2 = lambda_hull(h1, q2, m)
        return h2 is not None and open_way_below(h2, OpenSet(g))

    if method == "pairs":
        tests = list(way_below_pairs(lambda_enumerate(q, n, space)))
    elif method == "atoms":
        tests = []
        for a in _atoms(q, n, space):
            hull = lambda_hull(OpenSet(a), q, n)
            if hull is not None:
                tests.append((a, hull.ind))
    else:
        raise BasisError(f"unknown method {method!r}")
    for m in range(cap + 1):
        if all(ok(gp, g, m) for gp, g in tests):
            return m
    raise BasisError(f"cap exceeded: no level <= {cap} works for n = {n}")


def _atoms(q: Supernatural, n: int, space: Space):
    Q = q.q(n)
    E = space.n_edges
    zero_c = [[0] * Q for _ in range(E)]
    zero_p = [[0] * (Q - 1) for _ in range(E)]
    zero_v = [0] * space.n_vertices
    for e in range(E):
        for k in range(Q):
            c = [row[:] for row in zero_c]
            c[e][k] = 1
            yield grid_function(space, Q, c, zero_p, zero_v)
        for j in range(Q - 1):
            c = [row[:] for row in zero_c]
            p = [row[:] for row in zero_p]
            c[e][j] = c[e][j + 1] = 1
            p[e][j] = 1
            yield grid_function(space, Q, c, p, zero_v)
    for v in range(space.n_vertices):
        c = [row[:] for row in zero_c]
        for e, end in space.incidence(v):
            c[e][0 if end == 0 else -1] = 1
        vv = zero_v[:]
        vv[v] = 1
        yield grid_function(space, Q, c, zero_p, vv)


def q_map(p_values: Sequence[int], m: int) -> int:
    """q_{B'B}(m) = max{n : p(n) <= m}, over the tabulated p(0), p(1), ..."""
    ns = [n for n, p in enumerate(p_values) if p <= m]
    return max(ns) if ns else 0
