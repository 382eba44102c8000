from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import owned_graphs
from hypothesis import given, settings
from hypothesis import strategies as st

from ncg.equilibrium import (
    EXHAUSTIVE,
    LOCAL,
    DeviationMode,
    DisconnectedGraph,
    Verdict,
    best_response,
    fig1_fixture,
    is_2coalition_stable,
    is_nash,
    replay_delta,
    run_dynamics,
)
from ncg.graph import GameConfig, OwnedGraph, girth, player_cost


def brute_best_cost(g: OwnedGraph, i: int, cfg: GameConfig):
    """Cheapest cost of player i over every subset of the other vertices."""
    others = [v for v in range(g.n) if v != i]
    best = math.inf
    for r in range(len(others) + 1):
        for targets in itertools.combinations(others, r):
            h = g.with_strategy(i, targets)
            best = min(best, player_cost(h, i, cfg))
    return best


def star(n, center_owns=True):
    return OwnedGraph(n, [(0, v, 0 if center_owns else v) for v in range(1, n)])


# -- best response ------------------------------------------------------------------------


def test_leaf_of_star_keeps_empty_strategy():
    strat, cost = best_response(star(4), 1, GameConfig(3, 4))
    assert strat == frozenset() and cost == 5


def test_never_rebuys_an_opponent_edge():
    g = OwnedGraph(3, [(0, 1, 1), (1, 2, 1)])
    strat, _ = best_response(g, 0, GameConfig(1, 3))
    assert 1 not in strat
    # buying a target the other endpoint already pays for is dropped from the profile
    assert g.with_strategy(0, [1]) == g


def test_isolated_player_connects():
    g = OwnedGraph(3, [(0, 1, 0)])
    strat, cost = best_response(g, 2, GameConfig(5, 3))
    assert strat and cost < math.inf
    assert g.with_strategy(2, strat).is_connected()


def test_exhaustive_ceiling():
    g = OwnedGraph(16, [(v, v + 1, v) for v in range(15)])
    with pytest.raises(ValueError, match="n <= 15"):
        best_response(g, 0, GameConfig(1, 16))
    best_response(g, 0, GameConfig(1, 16), LOCAL)


@settings(max_examples=60)
@given(owned_graphs(min_n=2, max_n=7, connected=True),
       st.fractions(min_value=Fraction(1, 4), max_value=12), st.data())
def test_best_response_matches_subset_enumeration(g, alpha, data):
    cfg = GameConfig(alpha, g.n)
    i = data.draw(st.integers(0, g.n - 1))
    strat, cost = best_response(g, i, cfg)
    assert cost == brute_best_cost(g, i, cfg)
    assert player_cost(g.with_strategy(i, strat), i, cfg) == cost


# -- Nash -----------------------------------------------------------------------------------


def test_star_is_nash():
    assert is_nash(star(3), GameConfig(Fraction(3, 2), 3)).stable


def test_triangle_at_high_price():
    g = OwnedGraph(3, [(0, 1, 0), (1, 2, 1), (2, 0, 2)])
    cfg = GameConfig(5, 3)
    v = is_nash(g, cfg)
    assert not v.stable
    assert v.players == (0,) and v.delta == -4
    assert replay_delta(g, cfg, v) == v.delta


def test_disconnected_input_rejected():
    with pytest.raises(DisconnectedGraph):
        is_nash(OwnedGraph(3, [(0, 1, 0)]), GameConfig(1, 3))


def test_local_labels():
    v = is_nash(star(5), GameConfig(2, 5), LOCAL)
    assert v.stable and v.label == "locally stable"
    assert is_nash(star(5), GameConfig(2, 5)).label == "stable"


@settings(max_examples=40)
@given(owned_graphs(min_n=2, max_n=7, connected=True),
       st.fractions(min_value=Fraction(1, 4), max_value=16))
def test_local_witness_is_found_exhaustively(g, alpha):
    cfg = GameConfig(alpha, g.n)
    local = is_nash(g, cfg, LOCAL)
    full = is_nash(g, cfg, EXHAUSTIVE)
    if not local.stable:
        assert not full.stable
        i = local.players[0]
        # the exhaustive best response of the same player is at least as good
        _, best = best_response(g, i, cfg)
        assert best - player_cost(g, i, cfg) <= local.delta
    for v in (local, full):
        if not v.stable:
            assert v.delta < 0
            assert replay_delta(g, cfg, v) == v.delta


# -- coalitions -----------------------------------------------------------------------------


def test_star_leaves_coalition():
    # the two leaves gain together if one of them buys the edge between them:
    # costs go from 3 + 3 to (3/2 + 2) + 2
    g = star(3)
    cfg = GameConfig(Fraction(3, 2), 3)
    v = is_2coalition_stable(g, cfg)
    assert not v.stable
    assert v.players == (1, 2) and v.delta == Fraction(-1, 2)
    assert replay_delta(g, cfg, v) == v.delta


def test_star_center_pays_at_low_price_is_coalition_stable():
    cfg = GameConfig(Fraction(1, 2), 3)
    triangle = OwnedGraph(3, [(0, 1, 0), (0, 2, 0), (1, 2, 1)])
    assert is_2coalition_stable(triangle, cfg).stable


def test_not_nash_implies_not_coalition_stable():
    g = OwnedGraph(3, [(0, 1, 0), (1, 2, 1), (2, 0, 2)])
    cfg = GameConfig(5, 3)
    assert not is_2coalition_stable(g, cfg).stable


@settings(max_examples=40)
@given(owned_graphs(min_n=2, max_n=6, connected=True),
       st.fractions(min_value=Fraction(1, 4), max_value=10))
def test_coalition_stability_implies_nash(g, alpha):
    cfg = GameConfig(alpha, g.n)
    v = is_2coalition_stable(g, cfg)
    if v.stable:
        assert is_nash(g, cfg).stable
    else:
        assert v.delta < 0 and replay_delta(g, cfg, v) == v.delta


def brute_pair_best(g, i, j, cfg):
    others_i = [v for v in range(g.n) if v != i]
    others_j = [v for v in range(g.n) if v != j]
    best = math.inf
    for ri in range(len(others_i) + 1):
        for Si in itertools.combinations(others_i, ri):
            for rj in range(len(others_j) + 1):
                for Sj in itertools.combinations(others_j, rj):
                    v = Verdict(False, "exhaustive", (i, j), {i: Si, j: Sj})
                    total = replay_delta(g, cfg, v)
                    best = min(best, total)
    return best


@settings(max_examples=15)
@given(owned_graphs(min_n=3, max_n=5, connected=True),
       st.fractions(min_value=Fraction(1, 2), max_value=6))
def test_pair_search_matches_enumeration(g, alpha):
    cfg = GameConfig(alpha, g.n)
    from ncg.equilibrium import _pair_best

    for i, j in itertools.combinations(range(g.n), 2):
        scaled, Si, Sj = _pair_best(g, i, j, cfg, EXHAUSTIVE)
        before = player_cost(g, i, cfg) + player_cost(g, j, cfg)
        found = Fraction(scaled, cfg.alpha.denominator) - before
        assert found == brute_pair_best(g, i, j, cfg)


def swap_pattern_host():
    """8-cycle 0..7, every vertex buying the edge to its successor, with two
    leaves on 0 and two on 1.  In the notation of the swap pattern, u = 0 and
    the path continues 1, 2, 3, 4."""
    edges = [(i, (i + 1) % 8, i) for i in range(8)]
    edges += [(1, 8, 1), (1, 9, 1), (0, 10, 0), (0, 11, 0)]
    return OwnedGraph(12, edges)


def test_two_player_swap_breaks_coalition_stability():
    from ncg.equilibrium import _pair_best

    g = swap_pattern_host()
    cfg = GameConfig(6, 12)
    # 1 trades (1,2) for (1,4); 3 trades (3,4) for (3,1); no change in edges bought
    swap = Verdict(False, "exhaustive", (1, 3),
                   {1: (4, 8, 9), 3: (1,)})
    delta = replay_delta(g, cfg, swap)
    assert delta < 0
    scaled, _, _ = _pair_best(g, 1, 3, cfg, EXHAUSTIVE)
    best = Fraction(scaled, cfg.alpha.denominator) - player_cost(g, 1, cfg) - player_cost(g, 3, cfg)
    assert best <= delta
    assert not is_2coalition_stable(g, cfg).stable
    local = _pair_best(g, 1, 3, cfg, DeviationMode("local", budget=2))
    assert Fraction(local[0], 1) - player_cost(g, 1, cfg) - player_cost(g, 3, cfg) <= delta


def test_local_coalition_budget_covers_swaps():
    mode = DeviationMode("local", budget=2)
    g = star(4)
    v = is_2coalition_stable(g, GameConfig(Fraction(3, 2), 4), mode)
    assert not v.stable and replay_delta(g, GameConfig(Fraction(3, 2), 4), v) == v.delta


# -- fixture ------------------------------------------------------------------------------------


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_fig1_fixture(s):
    g, cfg = fig1_fixture(s)
    assert g.n == 2 * s + 3 and cfg.alpha == g.n - 3
    assert g.m >= g.n and g.is_connected() and girth(g) < math.inf
    assert is_nash(g, cfg).stable
    # at alpha = n a middle vertex saves by dropping an edge
    assert not is_nash(g, GameConfig(g.n, g.n)).stable


def test_fig1_rejects_bad_size():
    with pytest.raises(ValueError):
        fig1_fixture(0)


# -- dynamics --------------------------------------------------------------------------------------


def test_dynamics_high_price_path():
    cfg = GameConfig(10, 4)
    g, converged, rounds = run_dynamics(cfg, "path", seed=0, mode=LOCAL)
    assert converged and g.m == 3 and g.is_connected()
    assert is_nash(g, cfg, LOCAL).stable
    assert is_nash(g, cfg).stable


def test_dynamics_zero_rounds():
    cfg = GameConfig(2, 5)
    g, converged, rounds = run_dynamics(cfg, "cycle", max_rounds=0)
    assert not converged and rounds == 0
    assert g == OwnedGraph(5, [(v, (v + 1) % 5, v) for v in range(5)])


def test_dynamics_deterministic():
    cfg = GameConfig(Fraction(7, 2), 8)
    a = run_dynamics(cfg, "random", seed=42)
    b = run_dynamics(cfg, "random", seed=42)
    assert a == b


def test_girth_lower_bound_over_dynamics():
    rng = np.random.default_rng(5)
    for run in range(30):
        n = int(rng.integers(3, 9))
        alpha = Fraction(int(rng.integers(1, 3 * n * 4 + 1)), 4)
        cfg = GameConfig(alpha, n)
        g, converged, _ = run_dynamics(cfg, "random", seed=run, max_rounds=50)
        if converged and is_nash(g, cfg).stable and girth(g) < math.inf:
            assert girth(g) >= 2 * alpha / n + 2
