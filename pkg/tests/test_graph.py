from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from conftest import owned_graphs
from hypothesis import given
from hypothesis import strategies as st
from oracles import articulation_points_by_removal, bfs_distances

from ncg.graph import (
    UNREACHABLE,
    GameConfig,
    GraphFormatError,
    OwnedGraph,
    all_distances,
    as_rational,
    biconnected,
    girth,
    loads_graph,
    player_cost,
    shortest_cycle,
    social_cost,
    theorem1_min_girth,
)


def path(n):
    return OwnedGraph(n, [(v, v + 1, v) for v in range(n - 1)])


def cycle(n):
    return OwnedGraph(n, [(v, (v + 1) % n, v) for v in range(n)])


def star(n, center_owns=True):
    return OwnedGraph(n, [(0, v, 0 if center_owns else v) for v in range(1, n)])


# -- construction and parsing ------------------------------------------------


@pytest.mark.parametrize(
    "edges, msg",
    [
        ([(0, 0, 0)], "self-loop"),
        ([(0, 1, 0), (1, 0, 1)], "twice"),
        ([(0, 1, 2)], "not an endpoint"),
        ([(0, 5, 0)], "outside"),
    ],
)
def test_rejects_invalid_edges(edges, msg):
    with pytest.raises(ValueError, match=msg):
        OwnedGraph(3, edges)


def test_strategy_is_owned_edges():
    g = OwnedGraph(4, [(0, 1, 0), (1, 2, 2), (2, 3, 2)])
    assert g.strategy(0) == {1}
    assert g.strategy(1) == frozenset()
    assert g.strategy(2) == {1, 3}


def test_json_round_trip(tmp_path):
    g = OwnedGraph(4, [(0, 1, 1), (1, 2, 1), (0, 3, 0)])
    assert loads_graph(json.dumps(g.to_json())) == g


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"n": 3, "edges": [[0, 1, 0]', "line 1"),
        ('{"edges": []}', "field 'n'"),
        ('{"n": 3, "edges": [[0, 1]]}', "edges[0]"),
        ('{"n": 3, "edges": [[0, 1, "a"]]}', "edges[0][2]"),
        ('{"n": 3, "edges": [[0, 1, 2]]}', "field 'edges'"),
        ("[1, 2]", "top level"),
    ],
)
def test_graph_file_diagnostics(text, where):
    with pytest.raises(GraphFormatError, match=where.replace("[", r"\[")):
        loads_graph(text)


def test_alpha_parsing_is_exact():
    assert as_rational("1.1") == Fraction(11, 10)
    assert as_rational("191/185") == Fraction(191, 185)
    with pytest.raises(ValueError):
        as_rational(1.1)
    with pytest.raises(ValueError):
        as_rational("1/0")
    with pytest.raises(ValueError):
        GameConfig(0, 3)


# -- distances and costs ----------------------------------------------------------


def test_distance_examples():
    assert all_distances(path(3))[0, 2] == 2
    assert all_distances(cycle(5))[0, 2] == 2
    assert all_distances(OwnedGraph(2))[0, 1] == UNREACHABLE


def test_cost_examples():
    g = star(5)
    cfg = GameConfig(2, 5)
    assert player_cost(g, 0, cfg) == 12
    assert player_cost(g, 1, cfg) == 7
    assert player_cost(OwnedGraph(2), 0, GameConfig(1, 2)) == math.inf
    assert social_cost(path(3), GameConfig(1, 3)) == 10
    assert social_cost(OwnedGraph(1), GameConfig(1, 1)) == 0
    assert social_cost(cycle(3), GameConfig(1, 3)) == 9
    with pytest.raises(ValueError, match="invalid vertex"):
        player_cost(g, 7, cfg)


def test_min_girth_formula():
    n = 12
    assert theorem1_min_girth(GameConfig(n, n)) == 4
    assert theorem1_min_girth(GameConfig(Fraction(3 * n, 2), n)) == 5
    assert theorem1_min_girth(GameConfig(Fraction(n, 2), n)) == 3


@given(owned_graphs(connected=True), st.fractions(min_value=Fraction(1, 10), max_value=20))
def test_social_cost_is_sum_of_player_costs(g, alpha):
    cfg = GameConfig(alpha, g.n)
    assert social_cost(g, cfg) == sum(player_cost(g, i, cfg) for i in range(g.n))


@given(owned_graphs(connected=True))
def test_social_cost_ignores_ownership(g):
    cfg = GameConfig(Fraction(7, 3), g.n)
    flipped = OwnedGraph(g.n, [(u, v, v if o == u else u) for u, v, o in g.edges])
    assert social_cost(g, cfg) == social_cost(flipped, cfg)


@given(owned_graphs(connected=True))
def test_distances_metric(g):
    D = all_distances(g)
    assert (D == D.T).all()
    assert (np.diag(D) == 0).all()
    for i, j, k in itertools.product(range(g.n), repeat=3):
        assert D[i, k] <= D[i, j] + D[j, k]


@given(owned_graphs())
def test_distances_match_bfs_oracle(g):
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    D = all_distances(g)
    for s in range(g.n):
        ref = bfs_distances(adj, s)
        for t in range(g.n):
            assert D[s, t] == ref.get(t, UNREACHABLE)


# -- cycles -------------------------------------------------------------------------


def test_shortest_cycle_examples():
    assert shortest_cycle(path(6)) is None
    assert shortest_cycle(cycle(5))[0] == 5
    chorded = OwnedGraph(5, cycle(5).edges + [(0, 2, 0)])
    c, verts = shortest_cycle(chorded)
    assert c == 3 and set(verts) == {0, 1, 2}


@given(owned_graphs(max_n=10))
def test_shortest_cycle_matches_networkx(g):
    found = shortest_cycle(g)
    expected = nx.girth(g.to_networkx())
    if found is None:
        assert expected == math.inf
        return
    c, verts = found
    assert c == expected == girth(g)
    assert len(set(verts)) == c
    for a in range(c):
        assert g.has_edge(verts[a], verts[(a + 1) % c])
    # the returned cycle is isometric
    D = all_distances(g)
    for a, b in itertools.combinations(range(c), 2):
        assert D[verts[a], verts[b]] == min(b - a, c - (b - a))


# -- biconnected components -----------------------------------------------------------


def test_tree_has_no_nontrivial_component():
    assert biconnected(path(5)).nontrivial == []


def test_cycle_with_pendant_path():
    g = OwnedGraph(8, cycle(6).edges + [(0, 6, 6), (6, 7, 7)])
    (H,) = biconnected(g).nontrivial
    assert H.vertices == frozenset(range(6))
    assert H.satellites[0] == {6, 7}
    assert all(not H.satellites[v] for v in range(1, 6))
    assert all(H.deg[v] == 2 for v in H.vertices)


def test_bowtie():
    g = OwnedGraph(5, [(0, 1, 0), (1, 2, 1), (0, 2, 2), (2, 3, 2), (3, 4, 3), (2, 4, 4)])
    dec = biconnected(g)
    assert len(dec.nontrivial) == 2
    assert dec.articulation_points == articulation_points_by_removal(5, [(u, v) for u, v, _ in g.edges])


@given(owned_graphs(max_n=10))
def test_biconnected_partition_and_articulation_oracle(g):
    dec = biconnected(g)
    covered = [e for comp in dec.components for e in comp.edges]
    assert sorted(covered) == sorted((u, v) for u, v, _ in g.edges)
    assert dec.articulation_points == articulation_points_by_removal(
        g.n, [(u, v) for u, v, _ in g.edges])
    for comp in dec.nontrivial:
        # no bridges inside a non-trivial block
        sub = nx.Graph(list(comp.edges))
        assert not list(nx.bridges(sub))
        # satellites partition the vertices of H's connected component outside H
        reach = nx.node_connected_component(g.to_networkx(), next(iter(comp.vertices)))
        sats = [w for s in comp.satellites.values() for w in s]
        assert len(sats) == len(set(sats))
        assert set(sats) == set(reach) - comp.vertices
