"""Brute-force oracles, written independently of the package's closed forms."""
import itertools
from fractions import Fraction

from cuntzkit.basis import grid_function
from cuntzkit.lsc import OpenSet, StepFunction, step_way_below


def atoms(space, Q):
    """(slot, open set) for every open cell, interior grid point star and vertex star."""
    out = []
    for e in range(space.n_edges):
        for k in range(Q):
            out.append((("c", e, k), OpenSet.build(space, {e: [(Fraction(k, Q), Fraction(k + 1, Q))]})))
        for j in range(1, Q):
            out.append((("p", e, j - 1), OpenSet.build(space, {e: [(Fraction(j - 1, Q), Fraction(j + 1, Q))]},
                                                      {e: [Fraction(j, Q)]})))
    for v in range(space.n_vertices):
        ivs = {}
        for e, end in space.incidence(v):
            ivs.setdefault(e, []).append((0, Fraction(1, Q)) if end == 0 else (1 - Fraction(1, Q), 1))
        out.append((("v", v), OpenSet.build(space, ivs, vertices=[v])))
    return out


def atom_maximum(f: StepFunction, Q: int) -> StepFunction:
    """Pointwise supremum of all v * 1_A << f over atoms A of the level-Q grid.

    Every g in M_n with g << f is the maximum of the atoms v * 1_A below it,
    so this supremum dominates every candidate; it is the maximum exactly
    when it is itself way below f, which the caller checks.
    """
    space = f.space
    top = int(f.max_value()) + 1
    cells = [[0] * Q for _ in range(space.n_edges)]
    points = [[0] * (Q - 1) for _ in range(space.n_edges)]
    verts = [0] * space.n_vertices
    for slot, A in atoms(space, Q):
        best = 0
        for v in range(1, top + 1):
            if step_way_below(A.ind.scale(v), f):
                best = v
            else:
                break
        if slot[0] == "c":
            cells[slot[1]][slot[2]] = best
        elif slot[0] == "p":
            points[slot[1]][slot[2]] = best
        else:
            verts[slot[1]] = best
    # point and vertex values must respect lower semicontinuity; an atom star
    # contains its cells, so the star value never exceeds the cell values
    return grid_function(space, Q, cells, points, verts)


def independent_open_sets(space, Q):
    """All level-Q open sets by brute force over cells, grid points and vertices."""
    E = space.n_edges
    slots = [("c", e, k) for e in range(E) for k in range(Q)]
    slots += [("p", e, j) for e in range(E) for j in range(Q - 1)]
    slots += [("v", v) for v in range(space.n_vertices)]
    out = set()
    for mask in itertools.product((0, 1), repeat=len(slots)):
        chosen = {s for s, m in zip(slots, mask) if m}
        ok = True
        for s in chosen:
            if s[0] == "p" and not {("c", s[1], s[2]), ("c", s[1], s[2] + 1)} <= chosen:
                ok = False
            if s[0] == "v":
                for e, end in space.incidence(s[1]):
                    if ("c", e, 0 if end == 0 else Q - 1) not in chosen:
                        ok = False
        if ok:
            cells = [[int(("c", e, k) in chosen) for k in range(Q)] for e in range(E)]
            pts = [[int(("p", e, j) in chosen) for j in range(Q - 1)] for e in range(E)]
            verts = [int(("v", v) in chosen) for v in range(space.n_vertices)]
            out.add(grid_function(space, Q, cells, pts, verts))
    return out


def lambda_maximum(f: StepFunction, level) -> StepFunction:
    """Sum over the levels of f of the union of all Lambda elements way below
    that level set; the caller checks that the union is itself way below."""
    from cuntzkit.lsc import chain_decompose, step_max, step_sum
    parts = []
    for V in chain_decompose(f):
        acc = StepFunction.zero(f.space)
        for g in level:
            if step_way_below(g, V.ind):
                acc = step_max(acc, g)
        parts.append(acc)
    return step_sum(parts, f.space)
