"""Spectra of unitaries, the counting morphisms they induce, Hall matching
at resolution n and the diagonal AF stage-lifting pipeline."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from .basis import Supernatural
from .lsc import CIRCLE, frac
from .matching import BipartiteGraph, HallResult, hall_check, max_matching, saturates_left
from .metrics import SpectralMorphism, arc_distance, chordal, compare_spectral, dd_distance

TWO = Supernatural((2,))


class ClassifyError(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumMultiset:
    """Eigenvalues e^{2 pi i x} stored as x in [0, 1), with multiplicity."""

    entries: tuple

    def __post_init__(self):
        if not self.entries:
            raise ClassifyError("a spectrum has at least one point")
        object.__setattr__(self, "entries", tuple(sorted(frac(x) % 1 for x in self.entries)))

    def __len__(self):
        return len(self.entries)

    @classmethod
    def of(cls, *xs) -> "SpectrumMultiset":
        return cls(tuple(xs))

    def to_json(self) -> list:
        return SpectralMorphism(self.entries).to_json()

    @classmethod
    def from_json(cls, data) -> "SpectrumMultiset":
        return cls(SpectralMorphism.from_json(data).points)


def _points(X) -> tuple:
    return X.entries if isinstance(X, SpectrumMultiset) else tuple(X.points)


def induced_morphism(spec: SpectrumMultiset) -> SpectralMorphism:
    return SpectralMorphism(spec.entries, CIRCLE)


def build_graph(X, Y, n: int) -> BipartiteGraph:
    """x -- y iff the arc distance is < 2/2^n (strict)."""
    xs, ys = _points(X), _points(Y)
    thr = Fraction(2, 2 ** n)
    adj = tuple(tuple(j for j, y in enumerate(ys) if arc_distance(x, y) < thr) for x in xs)
    return BipartiteGraph(xs, ys, adj)


@dataclass(frozen=True)
class Classification:
    pairs: tuple           # (x, sigma(x))
    max_displacement: Fraction
    bound: Fraction        # 2/2^n, arc length
    chordal_bound: float   # 2 sin(pi * bound)
    level: int

    def to_json(self) -> dict:
        s = lambda x: f"{x.numerator}/{x.denominator}"
        return {"level": self.level, "matching": [[s(x), s(y)] for x, y in self.pairs],
                "max_displacement": s(self.max_displacement), "bound": s(self.bound),
                "chordal_bound": self.chordal_bound,
                "max_chordal_displacement": chordal(self.max_displacement)}


def classify_step(X, Y, n: int) -> Classification:
    """Bijection sigma: X -> Y moving every point by less than 2/2^n."""
    xs, ys = _points(X), _points(Y)
    if len(xs) != len(ys):
        raise ClassifyError("spectra of different sizes")
    cmp = compare_spectral(SpectralMorphism(xs), SpectralMorphism(ys), TWO, n)
    if not cmp.holds:
        raise ClassifyError(f"hypothesis not satisfied at level {n}")
    G = build_graph(SpectrumMultiset(xs), SpectrumMultiset(ys), n)
    if not hall_check(G).ok:
        raise ClassifyError(f"theorem violation at level {n}")
    m = max_matching(G)
    if not saturates_left(G, m):
        raise ClassifyError(f"theorem violation at level {n}: matching not saturating")
    pairs = tuple((xs[i], ys[j]) for i, j in m)
    disp = max((arc_distance(x, y) for x, y in pairs), default=Fraction(0))
    bound = Fraction(2, 2 ** n)
    if not disp < bound:
        raise ClassifyError("displacement bound violated")
    return Classification(pairs, disp, bound, chordal(bound), n)


# ---------------------------------------------------------------- AF model

@dataclass(frozen=True)
class AfUnitaryModel:
    """Diagonal model of a unital AF inductive system.

    ``sizes[k]`` are the block sizes at stage k and ``embeddings[k][r][c]``
    the multiplicity of block c of stage k in block r of stage k + 1. Past
    the given lists the last embedding repeats.
    """

    sizes: tuple
    embeddings: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(tuple(s) for s in self.sizes))
        object.__setattr__(self, "embeddings", tuple(tuple(tuple(r) for r in M) for M in self.embeddings))
        if not self.embeddings:
            raise ClassifyError("need at least one embedding")
        for k in range(len(self.sizes) - 1):
            self._check(k, self.sizes[k], self.sizes[k + 1])

    def _check(self, k, src, dst):
        M = self.embedding(k)
        if len(M) != len(dst) or any(len(r) != len(src) for r in M):
            raise ClassifyError(f"embedding {k} has the wrong shape")
        for r, row in enumerate(M):
            if sum(m * s for m, s in zip(row, src)) != dst[r]:
                raise ClassifyError(f"embedding {k} is not unital into block {r}")

    def embedding(self, k: int):
        return self.embeddings[min(k, len(self.embeddings) - 1)]

    def size(self, k: int) -> tuple:
        if k < len(self.sizes):
            return self.sizes[k]
        prev = self.size(k - 1)
        return tuple(sum(m * s for m, s in zip(row, prev)) for row in self.embedding(k - 1))

    def push(self, spectra: Sequence[Counter], k: int) -> list:
        """Block spectra at stage k + 1 from those at stage k."""
        out = []
        for row in self.embedding(k):
            c = Counter()
            for m, sp in zip(row, spectra):
                for x, mult in sp.items():
                    c[x] += m * mult
            out.append(c)
        return out

    def to_json(self) -> dict:
        return {"format": 1, "sizes": [list(s) for s in self.sizes],
                "embeddings": [[list(r) for r in M] for M in self.embeddings]}

    @classmethod
    def from_json(cls, data) -> "AfUnitaryModel":
        return cls(tuple(data["sizes"]), tuple(data["embeddings"]))


def car_model(l0: int = 1) -> AfUnitaryModel:
    """Single block of size l0, doubled at each step."""
    return AfUnitaryModel(((l0,),), (((2,),),))


def merge_model(a: int, b: int) -> AfUnitaryModel:
    """Blocks (a, b) merged into one block, then doubled at each step."""
    return AfUnitaryModel(((a, b), (a + b,)), (((1, 1),), ((2,),)))


def _reduce_pair(cx: Counter, cy: Counter) -> tuple:
    """Divide multiplicities by their common gcd; Hall's condition and the
    existence of a displacement-bounded bijection are invariant under it."""
    g = reduce(math.gcd, list(cx.values()) + list(cy.values()), 0) or 1
    xs = tuple(sorted(x for x, m in cx.items() for _ in range(m // g)))
    ys = tuple(sorted(y for y, m in cy.items() for _ in range(m // g)))
    return xs, ys


def _as_counters(spec, blocks: int) -> list:
    if isinstance(spec, SpectrumMultiset):
        spec = [spec]
    spec = list(spec)
    if len(spec) != blocks:
        raise ClassifyError(f"expected {blocks} block spectra, got {len(spec)}")
    return [Counter(s.entries) for s in spec]


def _blocks_compare(U, V, level) -> Optional[int]:
    """Index of the first block where level comparison fails, else None."""
    for b, (cu, cv) in enumerate(zip(U, V)):
        xs, ys = _reduce_pair(cu, cv)
        if len(xs) != len(ys) or not compare_spectral(SpectralMorphism(xs), SpectralMorphism(ys), TWO, level).holds:
            return b
    return None


@dataclass
class Transcript:
    status: str                      # ok | unknown | hypothesis-failed
    stage: Optional[int] = None
    level: Optional[int] = None
    blocks: list = field(default_factory=list)
    displacement: Optional[Fraction] = None
    bound: Optional[Fraction] = None
    distinguishing_level: Optional[int] = None

    def to_json(self) -> dict:
        s = lambda x: None if x is None else f"{x.numerator}/{x.denominator}"
        return {"format": 1, "status": self.status, "stage": self.stage, "level": self.level,
                "blocks": [b.to_json() for b in self.blocks], "displacement": s(self.displacement),
                "bound": s(self.bound), "distinguishing_level": self.distinguishing_level}


def af_uniqueness_demo(model: AfUnitaryModel, u_stage0, v_stage0, n: int, horizon: int = 30) -> Transcript:
    """Lift Lambda_n-comparable limit morphisms to a finite stage.

    The limit hypothesis is tested at stage ``horizon`` and level n. Then
    stages are advanced until every block compares at level n - 1, and each
    block is matched with classify_step, so points move by < 1/2^(n-2).
    """
    if n < 2:
        raise ClassifyError("need n >= 2")
    U = _as_counters(u_stage0, len(model.size(0)))
    V = _as_counters(v_stage0, len(model.size(0)))
    stages_U, stages_V = [U], [V]
    for k in range(horizon):
        stages_U.append(model.push(stages_U[-1], k))
        stages_V.append(model.push(stages_V[-1], k))
    bad = _blocks_compare(stages_U[-1], stages_V[-1], n)
    if bad is not None:
        xs, ys = _reduce_pair(stages_U[-1][bad], stages_V[-1][bad])
        dd = dd_distance(SpectralMorphism(xs), SpectralMorphism(ys), TWO, n) if len(xs) == len(ys) else None
        return Transcript("hypothesis-failed", horizon, n,
                          distinguishing_level=None if dd is None else dd.level + 1)
    for k in range(horizon + 1):
        if _blocks_compare(stages_U[k], stages_V[k], n - 1) is None:
            blocks = []
            for cu, cv in zip(stages_U[k], stages_V[k]):
                xs, ys = _reduce_pair(cu, cv)
                blocks.append(classify_step(SpectrumMultiset(xs), SpectrumMultiset(ys), n - 1))
            disp = max(b.max_displacement for b in blocks)
            bound = Fraction(1, 2 ** (n - 2))
            if not disp <= bound:
                raise ClassifyError("theorem violation: displacement above 1/2^(n-2)")
            return Transcript("ok", k, n - 1, blocks, disp, bound)
    return Transcript("unknown", horizon, n - 1)
