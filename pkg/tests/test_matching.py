import itertools

from hypothesis import given, strategies as st

from cuntzkit.matching import BipartiteGraph, bottleneck_assignment, hall_check, max_matching, saturates_left


def graphs(max_l=6, max_r=6):
    return st.tuples(st.integers(0, max_l), st.integers(0, max_r)).flatmap(
        lambda lr: st.lists(st.tuples(st.integers(0, max(lr[0] - 1, 0)), st.integers(0, max(lr[1] - 1, 0))),
                            max_size=lr[0] * lr[1]).map(
            lambda es: BipartiteGraph.from_edges(lr[0], lr[1], es if lr[0] and lr[1] else [])))


def brute_hall(G):
    L = len(G.left)
    for k in range(1, L + 1):
        for W in itertools.combinations(range(L), k):
            if len(G.neighbourhood(W)) < k:
                return False
    return True


def test_examples():
    K = BipartiteGraph.from_edges(3, 3, [(i, j) for i in range(3) for j in range(3)])
    assert hall_check(K).ok
    # X = {0.1, 0.1}, Y = {0.1, 0.6}: both left vertices see only the first right vertex
    G = BipartiteGraph.from_edges(2, 2, [(0, 0), (1, 0)])
    res = hall_check(G)
    assert not res.ok and set(res.violating_set) == {0, 1}
    E = BipartiteGraph.from_edges(2, 2, [])
    assert len(hall_check(E).violating_set) == 1
    assert max_matching(E) == []
    star = BipartiteGraph.from_edges(1, 3, [(0, 0), (0, 1), (0, 2)])
    assert len(max_matching(star)) == 1


def test_matching_of_spectra_example():
    G = BipartiteGraph.from_edges(2, 2, [(0, 0), (1, 0), (1, 1)])
    assert max_matching(G) == [(0, 0), (1, 1)]


@given(graphs())
def test_hall_matches_brute_force(G):
    res = hall_check(G)
    assert res.ok == brute_hall(G)
    assert res.ok == saturates_left(G, max_matching(G))
    if not res.ok:
        W = res.violating_set
        assert len(G.neighbourhood(W)) < len(W)


@given(graphs(25, 25))
def test_koenig_path_for_large_graphs(G):
    res = hall_check(G, exhaustive_limit=0)
    m = max_matching(G)
    assert res.ok == saturates_left(G, m)
    if not res.ok:
        assert len(G.neighbourhood(res.violating_set)) < len(res.violating_set)


@given(graphs())
def test_matching_is_valid(G):
    m = max_matching(G)
    assert len({i for i, _ in m}) == len(m) == len({j for _, j in m})
    assert all(j in G.adj[i] for i, j in m)


@given(st.lists(st.integers(0, 9), min_size=4, max_size=16).filter(lambda x: int(len(x) ** .5) ** 2 == len(x)))
def test_bottleneck_against_permutations(ws):
    n = int(len(ws) ** .5)
    w = lambda i, j: ws[i * n + j]
    t, m = bottleneck_assignment(n, w, sorted(set(ws)))
    best = min(max(w(i, p[i]) for i in range(n)) for p in itertools.permutations(range(n)))
    assert t == best and max(w(i, j) for i, j in m) == t
