"""Shared strategies and brute-force oracles for the test suite."""
import random
from fractions import Fraction

from hypothesis import strategies as st

from cuntzkit.extnat import NatMatrix
from cuntzkit.intertwining import InductiveSystem, IntertwiningData, SimplicialStage
from cuntzkit.lsc import StepFunction, random_step, space_by_name

SPACES = ("open", "closed", "circle", "theta")


def grid_points(space, N=48):
    """(edge, t) for t = k/N, plus vertices: a rational evaluation grid."""
    pts = [(e, Fraction(k, N)) for e in range(space.n_edges) for k in range(1, N)]
    pts += [("v", v) for v in range(space.n_vertices)]
    return pts


def at(f: StepFunction, pt):
    e, t = pt
    return f.vertices[t] if e == "v" else f.value(e, t)


def steps(space_names=SPACES, max_value=3):
    return st.tuples(st.sampled_from(space_names), st.integers(0, 10 ** 6)).map(
        lambda a: random_step(space_by_name(a[0]), random.Random(a[1]), max_value=max_value))


def random_system_data(rng, exact):
    """One-stage periodic systems S, T with c: S -> T, d: T -> S; exact means
    both triangles commute, otherwise one link is perturbed by one entry."""
    dims = [rng.randint(1, 2), rng.randint(1, 2)]
    rand = lambda r, c: NatMatrix(tuple(tuple(rng.randint(0, 2) for _ in range(c)) for _ in range(r)))
    c = rand(dims[1], dims[0])   # S -> T
    d = rand(dims[0], dims[1])   # T -> S
    sig, tau = d @ c, c @ d
    if not exact:
        which = rng.choice(["sig", "tau"])
        M = sig if which == "sig" else tau
        rows = [list(r) for r in M.entries]
        i, j = rng.randrange(len(rows)), rng.randrange(len(rows[0]))
        rows[i][j] += rng.choice([1, 2]) if rows[i][j] == 0 or rng.random() < 0.5 else -1
        M = NatMatrix(tuple(map(tuple, rows)))
        sig, tau = (M, tau) if which == "sig" else (sig, M)
    S = InductiveSystem((SimplicialStage(dims[0]),), (sig,))
    T = InductiveSystem((SimplicialStage(dims[1]),), (tau,))
    return IntertwiningData(S, T, (c,), (d,))
