import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from cuntzkit.basis import (BasisError, Compact, NccwProfile, Soft, StabilityViolation, Supernatural,
                            basis_translation, epsilon_levelwise, epsilon_n, in_M, interpolate, lambda_enumerate,
                            lambda_hull, nccw_epsilon, q_map, random_profile_member, superadditivity_witness,
                            uhf_add, uhf_epsilon_n, uhf_leq, uhf_way_below, verify_axioms)
from cuntzkit.extnat import INF
from cuntzkit.lsc import (OpenSet, StepFunction, circle, closed_interval, open_interval, random_step, space_by_name,
                          step_add, step_leq, step_way_below, theta_graph)

from helpers import SPACES, steps
from oracles import atom_maximum, independent_open_sets, lambda_maximum

TWO, THREE, SIX = Supernatural.of(2), Supernatural.of(3), Supernatural.of(2, 3)
O, I, T = open_interval(), closed_interval(), circle()


def ind(space, *ivs, **kw):
    return OpenSet.interval(space, *ivs, **kw).ind


def test_supernatural():
    assert [SIX.q(n) for n in range(5)] == [1, 2, 6, 12, 36]
    assert Supernatural.from_json(SIX.to_json()) == SIX
    with pytest.raises(BasisError):
        Supernatural.of(4)


def test_epsilon_examples():
    assert epsilon_n(StepFunction.zero(O), TWO, 2).is_zero()
    assert epsilon_n(ind(O, (0.3, 0.9)), TWO, 2) == ind(O, (F(1, 2), F(3, 4)))
    assert epsilon_n(ind(O, (0.25, 0.75)), TWO, 3) == ind(O, (F(3, 8), F(5, 8)))
    with pytest.raises(BasisError):
        epsilon_n(StepFunction.constant(I, INF), TWO, 1)


@pytest.mark.parametrize("space", [O, I, T])
def test_epsilon_matches_lambda_enumeration_oracle(space):
    rng = random.Random(3)
    for n in (1, 2):
        level = lambda_enumerate(TWO, n, space)
        for _ in range(15):
            f = random_step(space, rng)
            best = lambda_maximum(f, level)
            assert step_way_below(best, f)
            assert epsilon_n(f, TWO, n) == best


@given(steps(), st.sampled_from([TWO, THREE, SIX]), st.integers(1, 2))
def test_epsilon_matches_atom_oracle(f, q, n):
    best = atom_maximum(f, q.q(n))
    assert step_way_below(best, f)
    assert epsilon_n(f, q, n) == best


@given(steps(), st.sampled_from([TWO, THREE, SIX]), st.integers(0, 3))
def test_epsilon_levelwise_agrees(f, q, n):
    assert epsilon_levelwise(f, q, n) == epsilon_n(f, q, n)


def test_lambda_sizes_against_independent_enumerator():
    assert lambda_enumerate(TWO, 0, T) == [StepFunction.zero(T)]
    assert len(lambda_enumerate(TWO, 1, T)) == 7
    for space in (O, I, T, theta_graph()):
        for Q in (2, 3):
            got = set(lambda_enumerate(Supernatural.of(Q), 1, space))
            assert got == independent_open_sets(space, Q)


def test_interpolate_examples():
    z = StepFunction.zero(I)
    assert interpolate(z, z, TWO, 2) == z
    h = interpolate(ind(I, (0.25, 0.5)), ind(I, (0, 0.75), vertices=[0]), TWO, 2)
    assert h == ind(I, (F(0), F(5, 8)), vertices=[0])
    whole = StepFunction.constant(T, 1)
    assert interpolate(whole, whole, TWO, 1) == whole
    with pytest.raises(BasisError):
        interpolate(ind(I, (0.25, 0.5)), ind(I, (0.25, 0.75)), TWO, 2)


def test_interpolate_open_interval_regression():
    h = interpolate(ind(O, (0.25, 0.5)), ind(O, (0, 0.75)), TWO, 2)
    assert h == ind(O, (F(1, 8), F(5, 8)))


@given(steps(), st.integers(1, 3))
def test_interpolate_between_basis_levels(f, n):
    g2 = epsilon_n(f, TWO, n)
    g1 = epsilon_n(g2, TWO, n)
    if step_way_below(g1, g2):
        h = interpolate(g1, g2, TWO, n)
        assert step_way_below(g1, h) and step_way_below(h, g2) and in_M(h, TWO, n + 1)


def test_lambda_hull_is_smallest():
    level = lambda_enumerate(TWO, 2, I)
    for U in [OpenSet(g) for g in lambda_enumerate(TWO, 1, I)]:
        hull = lambda_hull(U, TWO, 2)
        above = [g for g in level if step_way_below(U.ind, g)]
        if hull is None:
            assert not above
        else:
            assert hull.ind in above and all(step_leq(hull.ind, g) for g in above)


def test_verify_axioms_trivial_and_random():
    assert verify_axioms(TWO, O, [StepFunction.zero(O)], 3).passed
    rng = random.Random(5)
    samples = [random_step(O, rng) for _ in range(50)]
    rep = verify_axioms(TWO, O, samples, 5, pairs=[(i, i + 1) for i in range(49)])
    assert rep.passed, rep.failures


def test_verify_axioms_catches_a_broken_sample():
    # a non-LSC function cannot even be built
    with pytest.raises(ValueError):
        StepFunction.on_edge(I, [F(1, 2)], [0, 0], [1])


@pytest.mark.parametrize("name", SPACES[:3])
def test_superadditivity_is_strict_somewhere(name):
    w = superadditivity_witness(TWO, 2, space_by_name(name))
    assert w is not None
    f, g = w
    assert step_add(epsilon_n(f, TWO, 2), epsilon_n(g, TWO, 2)) != epsilon_n(step_add(f, g), TWO, 2)


# ---------------------------------------------------------------- UHF

def uhf_elements(Q=8, top=2):
    out = [Compact(F(k, Q)) for k in range(top * Q + 1)]
    out += [Soft(F(k, Q)) for k in range(1, top * Q + 1)] + [Soft(INF)]
    return out


def test_uhf_order_table():
    assert uhf_leq(Soft(F(1, 2)), Compact(F(1, 2)))
    assert not uhf_leq(Compact(F(1, 2)), Soft(F(1, 2)))
    assert uhf_way_below(Compact(F(1, 2)), Compact(F(1, 2)))
    assert not uhf_way_below(Soft(F(1, 2)), Soft(F(1, 2)))
    # x_s <= x_c << x_c forces x_s << x_c
    assert uhf_way_below(Soft(F(1, 2)), Compact(F(1, 2)))
    assert not uhf_way_below(Soft(F(5, 8)), Compact(F(1, 2)))
    assert uhf_way_below(Compact(0), Soft(F(1, 8)))
    assert uhf_add(Compact(F(1, 4)), Soft(F(1, 4))) == Soft(F(1, 2))


def test_uhf_order_is_partial_order():
    E = uhf_elements()
    for a, b, c in itertools.product(E, repeat=3):
        if uhf_leq(a, b) and uhf_leq(b, c):
            assert uhf_leq(a, c)
        if uhf_way_below(a, b):
            assert uhf_leq(a, b)
            if uhf_leq(b, c):
                assert uhf_way_below(a, c)
        if uhf_leq(a, b) and uhf_way_below(b, c):
            assert uhf_way_below(a, c)
    for a, b in itertools.product(E, repeat=2):
        if uhf_leq(a, b) and uhf_leq(b, a):
            assert a == b


def test_uhf_epsilon_against_enumeration():
    for s in uhf_elements(16, 2)[:-1]:
        for n in range(0, 4):
            Q = TWO.q(n)
            cands = [Compact(F(k, Q)) for k in range(4 * Q) if uhf_way_below(Compact(F(k, Q)), s)]
            best = max(cands, key=lambda x: x.value)
            assert uhf_epsilon_n(s, TWO, n) == best
    assert uhf_epsilon_n(Compact(0), TWO, 3) == Compact(0)
    assert uhf_epsilon_n(Compact(F(5, 8)), TWO, 2) == Compact(F(1, 2))
    assert uhf_epsilon_n(Soft(F(5, 8)), TWO, 3) == Compact(F(1, 2))
    with pytest.raises(BasisError):
        uhf_epsilon_n(Soft(INF), TWO, 1)


# ---------------------------------------------------------------- NCCW

def test_nccw_examples():
    p = NccwProfile(2, 1)
    assert nccw_epsilon(StepFunction.zero(I), p, TWO, 2).is_zero()
    f = ind(I, (0.3, 0.9))
    assert nccw_epsilon(f, p, TWO, 2) == epsilon_n(f, TWO, 2)
    c = StepFunction.constant(I, 2)
    assert nccw_epsilon(c, p, TWO, 1) == c


def test_nccw_raw_violation_witness():
    # f(0) = 2, f = 2 on (0, 1/10), f = 1 on [1/10, 1), f(1) = 0: the closed cell
    # [0, 1/2] sees the value 1, so plain eps_1 puts 1 at the endpoint
    f = StepFunction.on_edge(I, [F(1, 10)], [2, 1], [1], vertices=[2, 0])
    p = NccwProfile(2, 1)
    assert p.member(f)
    with pytest.raises(StabilityViolation):
        nccw_epsilon(f, p, TWO, 1, raw=True)
    g = nccw_epsilon(f, p, TWO, 1)
    assert g.vertices == (0, 0) and p.in_M(g, TWO, 1)


def test_nccw_is_profile_maximum():
    # eps'_n(f) dominates every profile member of M_n way below f
    rng = random.Random(2)
    p = NccwProfile(2, 1)
    level = lambda_enumerate(TWO, 1, I)
    sums = {StepFunction.zero(I)}
    for _ in range(3):
        sums |= {step_add(a, b) for a in sums for b in level}
    cands = [g for g in sums if p.in_M(g, TWO, 1)]
    for _ in range(30):
        f = random_profile_member(p, rng, max_value=3)
        e = nccw_epsilon(f, p, TWO, 1)
        below = [g for g in cands if step_way_below(g, f)]
        assert e in below and all(step_leq(g, e) for g in below)


# ---------------------------------------------------------------- translation

def test_basis_translation_values():
    assert basis_translation(TWO, TWO, 0, I) == 0
    assert [basis_translation(TWO, TWO, n, I) for n in (1, 2)] == [3, 4]
    assert basis_translation(TWO, TWO, 3, I, method="atoms") == 5
    assert basis_translation(TWO, THREE, 1, I) == 2


def test_basis_translation_atoms_agree_with_pairs():
    for space in (I, T, O):
        for n in (1, 2):
            assert basis_translation(TWO, TWO, n, space) == basis_translation(TWO, TWO, n, space, method="atoms")


def test_q_map_increasing_unbounded():
    p = [0] + [basis_translation(TWO, TWO, n, I, method="atoms") for n in range(1, 5)]
    qs = [q_map(p, m) for m in range(0, 8)]
    assert all(a <= b for a, b in zip(qs, qs[1:]))
    assert qs[-1] >= 4 and all(q_map(p, m) >= 1 for m in range(p[1], 8))
