"""Bipartite graphs, Hall's condition and Hopcroft-Karp maximum matching."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

INF_DIST = float("inf")


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple
    right: tuple
    adj: tuple  # adj[i] = sorted tuple of right indices adjacent to left i

    def __post_init__(self):
        if len(self.adj) != len(self.left):
            raise ValueError("one adjacency list per left vertex")
        for nbrs in self.adj:
            for j in nbrs:
                if not 0 <= j < len(self.right):
                    raise ValueError(f"edge to missing right vertex {j}")
        object.__setattr__(self, "adj", tuple(tuple(sorted(set(a))) for a in self.adj))

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges) -> "BipartiteGraph":
        adj = [[] for _ in range(n_left)]
        for i, j in edges:
            adj[i].append(j)
        return cls(tuple(range(n_left)), tuple(range(n_right)), tuple(tuple(a) for a in adj))

    @property
    def edges(self) -> list:
        return [(i, j) for i, nbrs in enumerate(self.adj) for j in nbrs]

    def neighbourhood(self, W) -> set:
        out = set()
        for i in W:
            out.update(self.adj[i])
        return out


@dataclass(frozen=True)
class HallResult:
    ok: bool
    violating_set: Optional[tuple] = None  # left indices


def hall_check(G: BipartiteGraph, exhaustive_limit: int = 20) -> HallResult:
    """Hall's condition |N(W)| >= |W| for every left subset W.

    Up to ``exhaustive_limit`` left vertices every subset is tried and a
    smallest violator returned; beyond that the deficiency of a maximum
    matching decides, and the violator is the alternating-path closure of an
    unmatched left vertex.
    """
    L = len(G.left)
    if L <= exhaustive_limit:
        masks = [0] * L
        for i, nbrs in enumerate(G.adj):
            for j in nbrs:
                masks[i] |= 1 << j
        nb = [0] * (1 << L)
        best = None
        for W in range(1, 1 << L):
            low = W & -W
            i = low.bit_length() - 1
            nb[W] = nb[W ^ low] | masks[i]
            size = bin(W).count("1")
            if bin(nb[W]).count("1") < size and (best is None or size < best[0]):
                best = (size, W)
        if best is None:
            return HallResult(True)
        W = best[1]
        return HallResult(False, tuple(i for i in range(L) if W >> i & 1))
    match_l, match_r = _hopcroft_karp(G)
    free = [i for i in range(L) if match_l[i] is None]
    if not free:
        return HallResult(True)
    return HallResult(False, tuple(sorted(_alternating_closure(G, free[0], match_r))))


def _alternating_closure(G: BipartiteGraph, root: int, match_r) -> set:
    seen_l, seen_r = {root}, set()
    queue = deque([root])
    while queue:
        i = queue.popleft()
        for j in G.adj[i]:
            if j in seen_r:
                continue
            seen_r.add(j)
            k = match_r[j]
            if k is not None and k not in seen_l:
                seen_l.add(k)
                queue.append(k)
    return seen_l


def _hopcroft_karp(G: BipartiteGraph):
    L, R = len(G.left), len(G.right)
    match_l: list = [None] * L
    match_r: list = [None] * R
    dist = [0] * L

    def bfs() -> bool:
        q = deque()
        for i in range(L):
            if match_l[i] is None:
                dist[i] = 0
                q.append(i)
            else:
                dist[i] = INF_DIST
        found = False
        while q:
            i = q.popleft()
            for j in G.adj[i]:
                k = match_r[j]
                if k is None:
                    found = True
                elif dist[k] == INF_DIST:
                    dist[k] = dist[i] + 1
                    q.append(k)
        return found

    def dfs(i) -> bool:
        for j in G.adj[i]:
            k = match_r[j]
            if k is None or (dist[k] == dist[i] + 1 and dfs(k)):
                match_l[i] = j
                match_r[j] = i
                return True
        dist[i] = INF_DIST
        return False

    while bfs():
        for i in range(L):
            if match_l[i] is None:
                dfs(i)
    return match_l, match_r


def max_matching(G: BipartiteGraph) -> list:
    """Maximum matching as a sorted list of (left, right) index pairs."""
    match_l, _ = _hopcroft_karp(G)
    return [(i, j) for i, j in enumerate(match_l) if j is not None]


def saturates_left(G: BipartiteGraph, matching: Sequence) -> bool:
    return len(matching) == len(G.left)


def bottleneck_assignment(n: int, weight, candidates: Sequence) -> tuple:
    """Smallest threshold t in sorted ``candidates`` such that the graph
    {(i, j) : weight(i, j) <= t} has a perfect matching; returns (t, matching)."""
    lo, hi = 0, len(candidates) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        t = candidates[mid]
        G = BipartiteGraph.from_edges(n, n, [(i, j) for i in range(n) for j in range(n)
                                             if weight(i, j) <= t])
        m = max_matching(G)
        if len(m) == n:
            best = (t, m)
            hi = mid - 1
        else:
            lo = mid + 1
    if best is None:
        raise ValueError("no perfect matching even at the largest threshold")
    return best
