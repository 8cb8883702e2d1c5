"""Extended naturals, vectors over them, and N-matrix morphisms.

An ExtNat is a plain ``int >= 0`` or the float ``INF``. Python already orders
these correctly and ``k + INF == INF``, so the only special case is the
product, where ``0 * INF`` must be 0 rather than NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

INF = math.inf
ExtNat = Union[int, float]


class ExtNatError(ValueError):
    pass


def is_finite(a: ExtNat) -> bool:
    return a != INF


def check_ext(a) -> ExtNat:
    if a == INF:
        return INF
    if isinstance(a, bool) or not isinstance(a, int) or a < 0:
        raise ExtNatError(f"not an extended natural: {a!r}")
    return a


def ext_mul(k: ExtNat, a: ExtNat) -> ExtNat:
    # 0 * oo = 0 keeps N-matrices additive on the zero vector
    if k == 0 or a == 0:
        return 0
    return k * a


def ext_way_below(a: ExtNat, b: ExtNat) -> bool:
    return a != INF and a <= b


def parse_ext(tok) -> ExtNat:
    if tok == "oo":
        return INF
    if isinstance(tok, str):
        if not tok.isdigit():
            raise ExtNatError(f"bad extended natural token: {tok!r}")
        return int(tok)
    return check_ext(tok)


def format_ext(a: ExtNat) -> str:
    return "oo" if a == INF else str(int(a))


def to_json_ext(a: ExtNat):
    return "oo" if a == INF else int(a)


@dataclass(frozen=True)
class ExtNatVec:
    entries: tuple

    def __post_init__(self):
        ents = tuple(check_ext(x) for x in self.entries)
        if not ents:
            raise ExtNatError("vectors must have positive dimension")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def of(cls, *xs) -> "ExtNatVec":
        return cls(tuple(xs))

    @classmethod
    def zeros(cls, dim: int) -> "ExtNatVec":
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ExtNat]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _same_dim(self, other: "ExtNatVec"):
        if self.dim != other.dim:
            raise ExtNatError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "ExtNatVec") -> "ExtNatVec":
        self._same_dim(other)
        return ExtNatVec(tuple(a + b for a, b in zip(self, other)))

    def __le__(self, other: "ExtNatVec") -> bool:
        self._same_dim(other)
        return all(a <= b for a, b in zip(self, other))

    def __ge__(self, other: "ExtNatVec") -> bool:
        return other <= self

    def join(self, other: "ExtNatVec") -> "ExtNatVec":
        self._same_dim(other)
        return ExtNatVec(tuple(max(a, b) for a, b in zip(self, other)))

    def is_finite(self) -> bool:
        return all(a != INF for a in self)

    def to_json(self) -> list:
        return [to_json_ext(a) for a in self]

    @classmethod
    def from_json(cls, data) -> "ExtNatVec":
        return cls(tuple(parse_ext(x) for x in data))

    def __str__(self):
        return "[" + ",".join(format_ext(a) for a in self) + "]"


def vec_way_below(u: ExtNatVec, v: ExtNatVec) -> bool:
    u._same_dim(v)
    return all(ext_way_below(a, b) for a, b in zip(u, v))


@dataclass(frozen=True)
class NatMatrix:
    """Cu-morphism N̄^cols -> N̄^rows. Entries must be finite."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if not rows or not rows[0]:
            raise ExtNatError("matrix must be non-empty")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ExtNatError("ragged matrix")
            for x in r:
                if x == INF or isinstance(x, bool) or not isinstance(x, int) or x < 0:
                    raise ExtNatError(f"matrix entries must be finite naturals, got {x!r}")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @classmethod
    def identity(cls, n: int) -> "NatMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "NatMatrix") -> "NatMatrix":
        if self.cols != other.rows:
            raise ExtNatError("dimension mismatch in composition")
        return NatMatrix(tuple(
            tuple(sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                  for j in range(other.cols))
            for i in range(self.rows)))

    def __call__(self, v: ExtNatVec) -> ExtNatVec:
        return matrix_apply(self, v)

    def to_json(self) -> list:
        return [list(r) for r in self.entries]

    @classmethod
    def from_json(cls, data) -> "NatMatrix":
        return cls(tuple(tuple(r) for r in data))


def matrix_apply(A: NatMatrix, v: ExtNatVec) -> ExtNatVec:
    if A.cols != v.dim:
        raise ExtNatError(f"dimension mismatch: matrix has {A.cols} columns, vector {v.dim}")
    out = []
    for row in A.entries:
        s = 0
        for k, a in zip(row, v):
            s = s + ext_mul(k, a)
        out.append(s)
    return ExtNatVec(tuple(out))


@dataclass(frozen=True)
class SupResult:
    value: ExtNatVec
    exact: bool

    @property
    def flag(self) -> str:
        return "exact" if self.exact else "lower-bound"


def bounded_sup(seq: Iterable[ExtNatVec], horizon: int) -> SupResult:
    """Supremum of an increasing sequence, read off its first ``horizon`` terms.

    ``exact`` means the last term seen equals its predecessor, i.e. the
    sequence has visibly stabilized (or was exhausted) before the horizon.
    """
    prev = None
    stable = False
    exhausted = True
    it = iter(seq)
    for k in range(horizon):
        try:
            cur = next(it)
        except StopIteration:
            break
        if prev is not None:
            if not prev <= cur:
                raise ExtNatError(f"sequence not increasing at term {k}: {prev} then {cur}")
            stable = cur == prev
        prev = cur
    else:
        exhausted = False
    if prev is None:
        raise ExtNatError("empty sequence")
    return SupResult(prev, exhausted or stable)
