"""Inductive systems of uniformly based semigroups, horizon-bounded limit
order, approximate intertwinings and the limit morphisms they induce."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .basis import Compact, Supernatural, UhfElement, uhf_add, uhf_epsilon_n, uhf_in_M, uhf_leq, uhf_way_below
from .extnat import INF, ExtNatVec, NatMatrix, SupResult, bounded_sup, vec_way_below


class IntertwiningError(ValueError):
    pass


# ---------------------------------------------------------------- stages

@dataclass(frozen=True)
class SimplicialStage:
    """N̄^r with the trivial uniform basis (N^r, id)."""

    dim: int

    def zero(self):
        return ExtNatVec.zeros(self.dim)

    def leq(self, x, y) -> bool:
        return x <= y

    def way_below(self, x, y) -> bool:
        return vec_way_below(x, y)

    def add(self, x, y):
        return x + y

    def in_M(self, x, n: int) -> bool:
        return x.is_finite()

    def epsilon(self, x, n: int):
        if not x.is_finite():
            raise IntertwiningError("not in S_<<")
        return x

    def level(self, n: int, bound: int = 1) -> list:
        """Finite test set of M_n: the box {0..bound}^r."""
        return [ExtNatVec(t) for t in itertools.product(range(bound + 1), repeat=self.dim)]

    def truncations(self, x) -> Callable[[int], ExtNatVec]:
        """A <<-increasing chain in N^r with supremum x."""
        return lambda k: ExtNatVec(tuple(min(a, k) for a in x))

    def parse(self, data):
        return ExtNatVec.from_json(data)

    def dump(self, x):
        return x.to_json()


@dataclass(frozen=True)
class UhfStage:
    """Cu(M_q) with the basis ((1/q_n)N, eps_n)."""

    q: Supernatural

    def zero(self):
        return Compact(0)

    def leq(self, x, y) -> bool:
        return uhf_leq(x, y)

    def way_below(self, x, y) -> bool:
        return uhf_way_below(x, y)

    def add(self, x, y):
        return uhf_add(x, y)

    def in_M(self, x, n: int) -> bool:
        return uhf_in_M(x, self.q, n)

    def epsilon(self, x, n: int):
        return uhf_epsilon_n(x, self.q, n)

    def level(self, n: int, bound: int = 2) -> list:
        Q = self.q.q(n)
        return [Compact(Fraction(k, Q)) for k in range(bound * Q + 1)]

    def truncations(self, x):
        return lambda k: uhf_epsilon_n(x, self.q, k)

    def parse(self, data):
        from .extnat import parse_ext
        if isinstance(data, dict):
            v = data["value"]
            v = INF if v == "oo" else Fraction(v)
            return UhfElement(v, data.get("kind", "c"))
        return Compact(Fraction(data))

    def dump(self, x):
        v = "oo" if x.value == INF else f"{x.value.numerator}/{x.value.denominator}"
        return {"value": v, "kind": x.kind}


@dataclass(frozen=True)
class ScalarLink:
    """x -> k x on Cu(M_q)."""

    k: int

    def __call__(self, x: UhfElement) -> UhfElement:
        if self.k == 0:
            return Compact(0)
        return UhfElement(x.value * self.k, x.kind)

    def __matmul__(self, other: "ScalarLink") -> "ScalarLink":
        return ScalarLink(self.k * other.k)

    def to_json(self):
        return self.k


def compose(f, g):
    """f after g."""
    if isinstance(f, NatMatrix) and isinstance(g, NatMatrix):
        return f @ g
    if isinstance(f, ScalarLink) and isinstance(g, ScalarLink):
        return f @ g
    return lambda x: f(g(x))


def _same_map(f, g) -> bool:
    return type(f) is type(g) and f == g


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class InductiveSystem:
    """Stages and links, both cycled: link i maps stage i to stage i + 1."""

    stages: tuple
    links: tuple

    def __post_init__(self):
        if not self.stages or not self.links:
            raise IntertwiningError("need at least one stage and one link")
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "_memo", {})
        for i in range(max(len(self.stages), len(self.links)) * 2):
            self._check_link(i)

    def _check_link(self, i):
        A, s, t = self.link(i), self.stage(i), self.stage(i + 1)
        if isinstance(A, NatMatrix):
            if not (isinstance(s, SimplicialStage) and A.cols == s.dim and A.rows == t.dim):
                raise IntertwiningError(f"link {i} does not map stage {i} to stage {i + 1}")

    def stage(self, i: int):
        return self.stages[i % len(self.stages)]

    def link(self, i: int):
        return self.links[i % len(self.links)]

    def sigma(self, i: int, j: int):
        """sigma_ij = link_{j-1} o ... o link_i (identity when i = j)."""
        if j < i:
            raise IntertwiningError("sigma_ij needs i <= j")
        key = (i % self.period, j - i)
        if key not in self._memo:
            if j == i:
                st = self.stage(i)
                m = NatMatrix.identity(st.dim) if isinstance(st, SimplicialStage) else ScalarLink(1)
            else:
                m = compose(self.link(j - 1), self.sigma(i, j - 1))
            self._memo[key] = m
        return self._memo[key]

    @property
    def period(self) -> int:
        a, b = len(self.stages), len(self.links)
        from math import lcm
        return lcm(a, b)

    def push(self, i: int, j: int, x):
        return self.sigma(i, j)(x)

    def to_json(self) -> dict:
        st = self.stages[0]
        if isinstance(st, SimplicialStage):
            return {"kind": "simplicial", "dims": [s.dim for s in self.stages],
                    "links": [A.to_json() for A in self.links]}
        return {"kind": "uhf", "q": st.q.to_json(), "links": [L.to_json() for L in self.links]}

    @classmethod
    def from_json(cls, data) -> "InductiveSystem":
        kind = data.get("kind", "simplicial")
        if kind == "simplicial":
            links = tuple(NatMatrix.from_json(A) for A in data["links"])
            dims = data.get("dims") or [links[0].cols]
            return cls(tuple(SimplicialStage(d) for d in dims), links)
        if kind == "uhf":
            q = Supernatural.from_json(data["q"])
            return cls((UhfStage(q),), tuple(ScalarLink(int(k)) for k in data["links"]))
        raise IntertwiningError(f"unknown system kind {kind!r}")


def fibonacci_system() -> InductiveSystem:
    return InductiveSystem((SimplicialStage(2),), (NatMatrix(((1, 1), (1, 0))),))


def doubling_system() -> InductiveSystem:
    return InductiveSystem((SimplicialStage(1),), (NatMatrix(((2,),)),))


# ---------------------------------------------------------------- limit order

@dataclass(frozen=True)
class Eventual:
    stage: int
    value: object


@dataclass(frozen=True)
class Chain:
    """sup of sigma_{k oo}(x_k); entries (stage, x) with images <<-increasing."""

    entries: tuple
    exact: bool = False


LimitElement = object  # Eventual | Chain


def _never_leq_certificate(system: InductiveSystem, j: int, x, y) -> bool:
    """True when sigma_{jk}(x) <= sigma_{jk}(y) fails for every k >= j.

    Simplicial: if x - y is >= 0 and nonzero, and no link in a full period
    has a zero column, the difference stays >= 0 and nonzero forever.
    Scalar UHF links are order embeddings, so x not <= y is final.
    """
    st = system.stage(j)
    if isinstance(st, UhfStage):
        return all(system.link(k).k > 0 for k in range(j, j + system.period)) and not st.leq(x, y)
    if not (x.is_finite() and y.is_finite()):
        return False
    diff = [a - b for a, b in zip(x, y)]
    if not (all(d >= 0 for d in diff) and any(d > 0 for d in diff)):
        return False
    for k in range(j, j + system.period):
        A = system.link(k)
        for c in range(A.cols):
            if all(A.entries[r][c] == 0 for r in range(A.rows)):
                return False
    return True


def _compact_leq(system, i, x, i2, y, horizon) -> str:
    j0 = max(i, i2)
    for j in range(j0, j0 + horizon + 1):
        a, b = system.push(i, j, x), system.push(i2, j, y)
        st = system.stage(j)
        if st.leq(a, b):
            return "true"
        if _never_leq_certificate(system, j, a, b):
            return "false"
    return "unknown"


def limit_leq(system: InductiveSystem, s, t, horizon: int = 20) -> str:
    """Three-valued test of s <= t in the limit: 'true', 'false' or 'unknown'."""
    if isinstance(s, Chain):
        results = [limit_leq(system, Eventual(k, x), t, horizon) for k, x in s.entries]
        if all(r == "true" for r in results):
            return "true"
        return "false" if "false" in results else "unknown"
    if isinstance(t, Chain):
        results = [limit_leq(system, s, Eventual(k, y), horizon) for k, y in t.entries]
        if "true" in results:
            return "true"
        return "false" if t.exact and all(r == "false" for r in results) else "unknown"
    return _compact_leq(system, s.stage, s.value, t.stage, t.value, horizon)


def limit_equal(system, s, t, horizon: int = 20) -> str:
    a, b = limit_leq(system, s, t, horizon), limit_leq(system, t, s, horizon)
    if a == b == "true":
        return "true"
    return "false" if "false" in (a, b) else "unknown"


def limit_epsilon(system: InductiveSystem, s: Eventual, n: int, bound: int = 4,
                  horizon: int = 20):
    """eps_n of the limit basis M_n = sigma_{n oo}((S_n)_<<), for simplicial systems.

    Searches the box {0..bound}^r at stage n for x with sigma_{n oo}(x) <= s;
    returns the unique maximal candidate, or raises if the maximum is not
    unique or some comparison stays unknown.
    """
    st = system.stage(n)
    if not isinstance(st, SimplicialStage):
        raise IntertwiningError("limit_epsilon is implemented for simplicial systems")
    if s.stage <= n:
        return Eventual(n, system.push(s.stage, n, s.value))
    good = []
    for x in st.level(n, bound):
        r = limit_leq(system, Eventual(n, x), s, horizon)
        if r == "unknown":
            raise IntertwiningError(f"undecided comparison for {x} at horizon {horizon}")
        if r == "true":
            good.append(x)
    # a maximum in the limit order must dominate every candidate
    for x in good:
        verdicts = [limit_leq(system, Eventual(n, y), Eventual(n, x), horizon) for y in good]
        if all(r == "true" for r in verdicts):
            return Eventual(n, x)
    raise IntertwiningError(f"no certified maximum in the search box among {len(good)} candidates")


# ---------------------------------------------------------------- intertwinings

@dataclass(frozen=True)
class IntertwiningData:
    S: InductiveSystem
    T: InductiveSystem
    c: tuple           # c_i : S_i -> T_i, cycled
    d: tuple = ()      # d_i : T_i -> S_{i+1}, cycled; empty for one-sided data
    n_seq: tuple = ()  # n_i; default i + 1
    m_seq: tuple = ()  # m_i; default i + 1

    def c_at(self, i):
        return self.c[i % len(self.c)]

    def d_at(self, i):
        if not self.d:
            raise IntertwiningError("no down maps: data is one-sided")
        return self.d[i % len(self.d)]

    def n(self, i) -> int:
        return self.n_seq[i] if i < len(self.n_seq) else i + 1

    def m(self, i) -> int:
        return self.m_seq[i] if i < len(self.m_seq) else i + 1

    def to_json(self) -> dict:
        return {"format": 1, "S": self.S.to_json(), "T": self.T.to_json(),
                "c": [x.to_json() for x in self.c], "d": [x.to_json() for x in self.d],
                "n": list(self.n_seq), "m": list(self.m_seq)}

    @classmethod
    def from_json(cls, data) -> "IntertwiningData":
        S = InductiveSystem.from_json(data["S"])
        T = InductiveSystem.from_json(data["T"])
        conv = (lambda x: NatMatrix.from_json(x)) if isinstance(S.stage(0), SimplicialStage) \
            else (lambda x: ScalarLink(int(x)))
        n_seq = tuple(data.get("n", ()))
        m_seq = tuple(data.get("m", ()))
        for seq in (n_seq, m_seq):
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise IntertwiningError("level sequences must be strictly increasing")
        return cls(S, T, tuple(conv(x) for x in data["c"]), tuple(conv(x) for x in data.get("d", ())),
                   n_seq, m_seq)


def shifted_data(S: InductiveSystem) -> IntertwiningData:
    """T_i := S_{i+1}, c_i := sigma_{i,i+1}, d_i := id."""
    T = InductiveSystem(S.stages[1:] + S.stages[:1], S.links[1:] + S.links[:1])
    ident = [NatMatrix.identity(S.stage(i + 1).dim) if isinstance(S.stage(0), SimplicialStage)
             else ScalarLink(1) for i in range(len(S.stages))]
    return IntertwiningData(S, T, tuple(S.links), tuple(ident))


def identity_data(S: InductiveSystem) -> IntertwiningData:
    ident = [NatMatrix.identity(S.stage(i).dim) if isinstance(S.stage(0), SimplicialStage)
             else ScalarLink(1) for i in range(len(S.stages))]
    shifted = [NatMatrix.identity(S.stage(i + 1).dim) if isinstance(S.stage(0), SimplicialStage)
               else ScalarLink(1) for i in range(len(S.stages))]
    # d_i : S_i -> S_{i+1} must be sigma_{i,i+1} for identity data
    return IntertwiningData(S, S, tuple(ident), tuple(S.links))


@dataclass
class Report:
    passed: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)

    def fail(self, what):
        self.passed = False
        self.violations.append(what)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked,
                "violations": [str(v) for v in self.violations[:10]]}


def strictly_compare(alpha, beta, level, dom, cod) -> Optional[tuple]:
    """First pair g' << g of ``level`` where alpha(g') << beta(g) or
    beta(g') << alpha(g) fails, else None."""
    av = [alpha(g) for g in level]
    bv = [beta(g) for g in level]
    for i, gp in enumerate(level):
        for j, g in enumerate(level):
            if cod.way_below(av[i], bv[j]) and cod.way_below(bv[i], av[j]):
                continue
            if dom.way_below(gp, g):
                return gp, g
    return None


def _check_stability(rep: Report, sys_: InductiveSystem, seq: Callable, stages: int, tag: str):
    # (i): sigma_ij(M_{n_j}) inside M_{n_j}, tested on finite level sets
    for i in range(stages):
        for j in range(i, stages + 1):
            nj = seq(j)
            for g in sys_.stage(i).level(nj):
                if not sys_.stage(i).in_M(g, nj):
                    continue
                rep.checked += 1
                if not sys_.stage(j).in_M(sys_.push(i, j, g), nj):
                    rep.fail((tag, "stability", i, j, g))


def check_one_sided(data: IntertwiningData, stages: int) -> Report:
    rep = Report()
    S, T = data.S, data.T
    _check_stability(rep, S, data.n, stages, "S")
    for i in range(stages):
        lhs = compose(data.c_at(i + 1), S.link(i))
        rhs = compose(T.link(i), data.c_at(i))
        rep.checked += 1
        bad = strictly_compare(lhs, rhs, S.stage(i).level(data.n(i)), S.stage(i), T.stage(i + 1))
        if bad:
            rep.fail(("c o sigma ~ tau o c", i, bad))
    return rep


def check_two_sided(data: IntertwiningData, stages: int) -> Report:
    rep = Report()
    S, T = data.S, data.T
    _check_stability(rep, S, data.n, stages, "S")
    _check_stability(rep, T, data.m, stages, "T")
    for i in range(stages):
        c, d = data.c_at(i), data.d_at(i)
        # (ii) d_i c_i ~ sigma_{i,i+1} on M_{n_i};  c_{i+1} d_i ~ tau_{i,i+1} on M_{m_i}
        rep.checked += 2
        bad = strictly_compare(compose(d, c), S.link(i), S.stage(i).level(data.n(i)), S.stage(i), S.stage(i + 1))
        if bad:
            rep.fail(("d o c ~ sigma", i, bad))
        bad = strictly_compare(compose(data.c_at(i + 1), d), T.link(i), T.stage(i).level(data.m(i)),
                               T.stage(i), T.stage(i + 1))
        if bad:
            rep.fail(("c o d ~ tau", i, bad))
        # (iii) c_i(M_{n_i}) in M_{m_i}, d_i(M_{m_i}) in M_{n_{i+1}}
        for g in S.stage(i).level(data.n(i)):
            rep.checked += 1
            if S.stage(i).in_M(g, data.n(i)) and not T.stage(i).in_M(c(g), data.m(i)):
                rep.fail(("c(M) in M", i, g))
        for g in T.stage(i).level(data.m(i)):
            rep.checked += 1
            if T.stage(i).in_M(g, data.m(i)) and not S.stage(i + 1).in_M(d(g), data.n(i + 1)):
                rep.fail(("d(M) in M", i, g))
    return rep


def exact_intertwining(data: IntertwiningData, stages: int) -> bool:
    """d_i c_i = sigma_{i,i+1} and c_{i+1} d_i = tau_{i,i+1} as maps."""
    for i in range(stages):
        if not _same_map(compose(data.d_at(i), data.c_at(i)), data.S.link(i)):
            return False
        if not _same_map(compose(data.c_at(i + 1), data.d_at(i)), data.T.link(i)):
            return False
    return True


# ---------------------------------------------------------------- gamma

def gamma_eval(data: IntertwiningData, i: int, s, horizon: int = 20) -> Chain:
    """Chain (j+1, c_{j+1} sigma_{i,j+1} eps_{n_j}(s)) for i <= j < i + horizon,
    checked <<-increasing stage by stage."""
    S, T = data.S, data.T
    entries = []
    for j in range(i, i + horizon):
        e = S.stage(i).epsilon(s, data.n(j))
        entries.append((j + 1, data.c_at(j + 1)(S.push(i, j + 1, e))))
    for (k, x), (k2, y) in zip(entries, entries[1:]):
        if not T.stage(k2).way_below(T.push(k, k2, x), y):
            raise IntertwiningError(f"intertwining hypothesis violated at j = {k - 1}")
    return Chain(tuple(entries))


def delta_eval(data: IntertwiningData, i: int, t, horizon: int = 20) -> Chain:
    """The reverse construction with d_j : T_j -> S_{j+1}."""
    S, T = data.S, data.T
    entries = []
    for j in range(i, i + horizon):
        e = T.stage(i).epsilon(t, data.m(j))
        entries.append((j + 1, data.d_at(j)(T.push(i, j, e))))
    for (k, x), (k2, y) in zip(entries, entries[1:]):
        if not S.stage(k2).way_below(S.push(k, k2, x), y):
            raise IntertwiningError(f"intertwining hypothesis violated at j = {k - 1}")
    return Chain(tuple(entries))


def chain_limit(system: InductiveSystem, chain: Chain, horizon: int = 20) -> SupResult:
    """Horizon-sup of a chain, pushed to the last entry's stage."""
    last = chain.entries[-1][0]
    pushed = [system.push(k, last, x) for k, x in chain.entries]
    if isinstance(system.stage(last), SimplicialStage):
        return bounded_sup(iter(pushed), horizon)
    best = pushed[-1]
    return SupResult(best, len(pushed) < horizon)


def extend_from_basis(evaluate: Callable, stage, s, horizon: int = 20,
                      chain: Optional[Callable[[int], object]] = None,
                      target_leq: Callable = None) -> tuple:
    """Extension of a basis evaluation along a <<-increasing chain with sup s.

    Returns (value, exact). The chain defaults to the stage's truncations;
    monotonicity of ``evaluate`` along the chain is checked, not assumed.
    """
    chain = chain or stage.truncations(s)
    target_leq = target_leq or (lambda a, b: a <= b)
    vals = []
    prev = None
    for k in range(horizon):
        b = chain(k)
        if prev is not None:
            if not stage.leq(prev, b):
                raise IntertwiningError(f"approximating chain not increasing at {k}")
        if not stage.leq(b, s):
            raise IntertwiningError(f"chain term {k} is not below s")
        v = evaluate(b)
        if vals and not target_leq(vals[-1], v):
            raise IntertwiningError(f"evaluation not monotone along the chain at {k}")
        vals.append(v)
        prev = b
    if not vals:
        raise IntertwiningError("no approximating chain found within horizon")
    exact = len(vals) > 1 and vals[-1] == vals[-2]
    return vals[-1], exact


@dataclass
class IsoReport:
    verified: int = 0
    unknown: int = 0
    failed: int = 0
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.unknown == 0

    def to_json(self) -> dict:
        return {"verified": self.verified, "unknown": self.unknown, "failed": self.failed,
                "details": self.details[:20]}


def verify_iso(data: IntertwiningData, samples_S: Sequence[Eventual], samples_T: Sequence[Eventual],
               horizon: int = 20, stages: int = 8) -> IsoReport:
    """delta(gamma(s)) = s and gamma(delta(t)) = t to the horizon, per sample."""
    pre = check_two_sided(data, stages)
    if not pre.passed:
        raise IntertwiningError(f"precondition failed: data is not a two-sided intertwining: {pre.violations[:1]}")
    rep = IsoReport()
    S, T = data.S, data.T
    for s in samples_S:
        g = gamma_eval(data, s.stage, s.value, horizon)
        k, y = g.entries[-1]
        back = delta_eval(data, k, y, horizon)
        k2, z = back.entries[-1]
        verdict = limit_equal(S, Eventual(k2, z), s, horizon)
        _tally(rep, verdict, ("S", s.stage, str(s.value)))
    for t in samples_T:
        dl = delta_eval(data, t.stage, t.value, horizon)
        k, y = dl.entries[-1]
        fwd = gamma_eval(data, k, y, horizon)
        k2, z = fwd.entries[-1]
        verdict = limit_equal(T, Eventual(k2, z), t, horizon)
        _tally(rep, verdict, ("T", t.stage, str(t.value)))
    return rep


def _tally(rep: IsoReport, verdict: str, tag):
    if verdict == "true":
        rep.verified += 1
    elif verdict == "false":
        rep.failed += 1
    else:
        rep.unknown += 1
    rep.details.append({"sample": list(map(str, tag)), "verdict": verdict})
