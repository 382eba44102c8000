"""Brute-force reference implementations used only by the test suite."""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import numpy as np


def _solve_square(M, rhs):
    """Gauss-Jordan over Fractions; returns None when singular."""
    k = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(M, rhs)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][k] for r in range(k)]


def _feasible(A, senses, rhs, x):
    for row, s, b in zip(A, senses, rhs):
        lhs = sum(int(a) * v for a, v in zip(row, x))
        if (s == "<=" and lhs > b) or (s == ">=" and lhs < b) or (s == "=" and lhs != b):
            return False
    return all(v >= 0 for v in x)


def _best_vertex(A, senses, rhs, obj):
    """Max of obj over the vertices of {A x (sense) rhs, x >= 0}; None if empty."""
    n = len(obj)
    # each candidate active set picks n hyperplanes among rows and x_j = 0
    planes = [(list(map(int, row)), b) for row, b in zip(A, rhs)]
    planes += [([int(i == j) for i in range(n)], 0) for j in range(n)]
    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        x = _solve_square([planes[i][0] for i in combo], [planes[i][1] for i in combo])
        if x is None or not _feasible(A, senses, rhs, x):
            continue
        val = sum(int(c) * v for c, v in zip(obj, x))
        if best is None or val > best:
            best = val
    return best


def lp_vertex_oracle(A, senses, rhs, obj):
    """Return (status, optimum) by enumerating basic solutions.

    Unboundedness is decided on the recession cone truncated by sum(x) <= 1:
    the LP is unbounded iff it is feasible and that polytope has a vertex with
    positive objective.
    """
    A = [list(map(int, r)) for r in np.asarray(A)]
    rhs = [Fraction(b) for b in rhs]
    best = _best_vertex(A, list(senses), rhs, obj)
    if best is None:
        return "infeasible", None
    n = len(obj)
    coneA = A + [[1] * n]
    cone_s = list(senses) + ["<="]
    cone_b = [Fraction(0)] * len(A) + [Fraction(1)]
    ray = _best_vertex(coneA, cone_s, cone_b, obj)
    if ray is not None and ray > 0:
        return "unbounded", None
    return "optimal", best


def bfs_distances(adj: dict[int, set[int]], src: int) -> dict[int, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def articulation_points_by_removal(n: int, edges) -> set[int]:
    """Vertices whose removal increases the number of connected components."""
    def components(skip):
        adj = {v: set() for v in range(n) if v != skip}
        for u, v in edges:
            if skip not in (u, v):
                adj[u].add(v)
                adj[v].add(u)
        seen, count = set(), 0
        for v in adj:
            if v not in seen:
                count += 1
                seen |= set(bfs_distances(adj, v))
        return count

    base = components(None)
    return {v for v in range(n) if components(v) > base}


def realized_delta(c, orientation, actor, deleted, chord, d):
    """Distance change for a vertex with outer vector d, measured by BFS.

    Builds the cycle a_0..a_{c-1} and one extra vertex joined to every a_j by
    an internally disjoint path of length d_j + 1 (the shift keeps d_j = 0
    realizable and cancels in the difference).  Returns new - old distance
    from the actor to the extra vertex.
    """
    adj: dict[int, set[int]] = {i: set() for i in range(c)}

    def add(u, v):
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    nxt = c
    target = nxt
    nxt += 1
    adj[target] = set()
    for j, dj in enumerate(d):
        prev = j
        for _ in range(dj):
            adj[nxt] = set()
            add(prev, nxt)
            prev = nxt
            nxt += 1
        add(prev, target)
    cycle_edges = [frozenset((i, (i + 1) % c)) for i in range(c)]
    for e in cycle_edges:
        u, v = tuple(e)
        add(u, v)
    old = bfs_distances(adj, actor)[target]
    for e in deleted:
        u, v = tuple(e)
        adj[u].discard(v)
        adj[v].discard(u)
    if chord is not None:
        add(actor, chord)
    new = bfs_distances(adj, actor)[target]
    return new - old
