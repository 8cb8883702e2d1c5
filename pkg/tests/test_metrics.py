import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from cuntzkit.basis import Supernatural, lambda_enumerate
from cuntzkit.extnat import INF
from cuntzkit.lsc import OpenSet, circle, closed_interval, step_way_below
from cuntzkit.metrics import (MetricError, MorphismHandle, SpectralMorphism, compare_on, compare_spectral,
                              dcu_definition_exhaustive, dcu_definition_oracle, dcu_distance, dd_distance,
                              equivalence_probe, handle, self_check)

TWO = Supernatural.of(2)
T = circle()


def spec(*xs, kind="circle"):
    return SpectralMorphism(tuple(xs), kind)


def spectra(max_size=4, den=16, kind="circle"):
    hi = den - 1 if kind == "circle" else den
    return st.lists(st.integers(0, hi), min_size=1, max_size=max_size).map(
        lambda ks: SpectralMorphism(tuple(F(k, den) for k in ks), kind))


def test_spectral_evaluation():
    s = spec(F(1, 10), F(1, 10))
    assert s(OpenSet.interval(T, (0, F(1, 4))).ind) == 2
    assert spec(0)(OpenSet.whole(T).ind) == 1
    assert spec(F(1, 10), F(6, 10))(OpenSet.interval(T, (F(1, 2), F(3, 4))).ind) == 1
    assert SpectralMorphism.from_json(s.to_json()) == s
    assert SpectralMorphism.from_json(["1/10", "1/10"]) == s


def test_self_check_finds_broken_morphism():
    level = lambda_enumerate(TWO, 1, T)
    assert self_check(handle(spec(F(1, 8))), level) is None
    broken = MorphismHandle(lambda f: min(spec(F(1, 8), F(5, 8))(f), 1))
    assert self_check(broken, level)[0] == "additive"


def test_compare_examples():
    X, Y = spec(F(1, 8)), spec(F(5, 8))
    lv1 = lambda_enumerate(TWO, 1, T)
    assert compare_on(handle(X), handle(Y), lv1).holds
    res = compare_on(handle(X), handle(Y), lambda_enumerate(TWO, 2, T))
    assert res.verdict == "none"
    gp, g = res.counterexample
    assert step_way_below(gp, g)
    assert not (X(gp) <= Y(g) and Y(gp) <= X(g))
    assert compare_on(handle(X), handle(X), lv1).verdict == "strict"
    assert compare_on(handle(X), handle(Y), []).verdict == "strict"
    assert compare_spectral(X, Y, TWO, 1).holds and not compare_spectral(X, Y, TWO, 2).holds


@given(spectra(3), spectra(3), st.integers(1, 2))
def test_hall_reduction_matches_brute_force(X, Y, n):
    brute = compare_on(handle(X), handle(Y), lambda_enumerate(TWO, n, T)).holds
    assert compare_spectral(X, Y, TWO, n).holds == brute


@given(spectra(3, kind="closed"), spectra(3, kind="closed"), st.integers(1, 2))
def test_hall_reduction_matches_brute_force_interval(X, Y, n):
    brute = compare_on(handle(X), handle(Y), lambda_enumerate(TWO, n, closed_interval())).holds
    assert compare_spectral(X, Y, TWO, n).holds == brute


@given(spectra(), spectra())
def test_compare_downward_closed(X, Y):
    holds = [compare_spectral(X, Y, TWO, n).holds for n in range(1, 7)]
    assert holds == sorted(holds, reverse=True)


def test_dd_examples():
    X = spec(F(1, 8))
    r = dd_distance(X, X, TWO)
    assert r.value == 0 and r.flag == "indistinguishable-to-horizon"
    assert dd_distance(X, spec(F(5, 8)), TWO).value == F(1, 2)
    r = dd_distance(spec(F(1, 10)), spec(F(1, 10), F(6, 10)), TWO)
    assert r.value == INF and r.flag == "infinite"


@given(spectra(), spectra())
def test_dd_symmetric(X, Y):
    assert dd_distance(X, Y, TWO, 8) == dd_distance(Y, X, TWO, 8)


def test_dcu_examples():
    X = spec(F(1, 8))
    assert dcu_distance(X, X) == 0
    assert dcu_distance(X, spec(F(5, 8))) == F(1, 2)
    assert dcu_distance(spec(F(1, 10), F(3, 10)), spec(F(15, 100), F(35, 100))) == F(1, 20)
    assert dcu_distance(X, spec(F(1, 8), F(1, 4))) == INF


def test_dcu_oracle_examples():
    X, Y = spec(F(1, 8)), spec(F(5, 8))
    assert dcu_definition_oracle(X, X, F(1, 8)) == 0
    assert dcu_definition_oracle(X, Y, F(1, 8)) == F(1, 2)
    assert dcu_definition_exhaustive(X, Y, F(1, 8)) == F(1, 2)
    A, B = spec(F(1, 10), F(3, 10)), spec(F(15, 100), F(35, 100))
    assert abs(dcu_definition_oracle(A, B, F(1, 20)) - F(1, 20)) <= F(1, 20)


@given(spectra(3, 8), spectra(3, 8))
def test_dcu_oracle_variants_agree(X, Y):
    if len(X) == len(Y):
        assert dcu_definition_oracle(X, Y, F(1, 8)) == dcu_definition_exhaustive(X, Y, F(1, 8))


@given(spectra(5), spectra(5))
def test_probe_level_form(X, Y):
    rep = equivalence_probe(X, Y, TWO)
    assert rep.ok and rep.asserted, rep.witness


def test_literal_lower_bound_counterexample():
    # dd is quantized to powers of 1/2, so dd <= d_Cu fails between levels
    X, Y = spec(0), spec(F(3, 16))
    rep = equivalence_probe(X, Y, TWO)
    assert rep.d == F(3, 16) and rep.dd.value == F(1, 4)
    assert rep.ok and not rep.literal_ok
    # the failing comparison at level 3, checked literally on Lambda_3
    res = compare_on(handle(X), handle(Y), lambda_enumerate(TWO, 3, T))
    assert res.verdict == "none"


def test_probe_example():
    rep = equivalence_probe(spec(F(1, 8)), spec(F(5, 8)), TWO)
    assert rep.dd.value == F(1, 2) and rep.d == F(1, 2) and rep.literal_ok and rep.ok


def test_probe_other_q_is_recorded_not_asserted():
    rep = equivalence_probe(spec(F(1, 8)), spec(F(5, 8)), Supernatural.of(3))
    assert not rep.asserted and rep.ok in (True, False)


def test_spectra_on_different_spaces_rejected():
    with pytest.raises(MetricError):
        dcu_distance(spec(F(1, 8)), spec(F(1, 8), kind="closed"))
