"""Best responses, Nash and 2-coalition stability, and best-response dynamics.

Exhaustive mode scores every strategy of a player at once.  With the player
removed, let ``D`` be the distance matrix of the rest of the graph.  If the
player ends up adjacent to the set ``N`` then its distance to ``v`` is
``1 + min_{u in N} D[u, v]``, and the row-wise minima for all subsets of the
candidate targets are filled in by doubling, one candidate at a time.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import INF, GameConfig, OwnedGraph, as_rational, player_cost

log = logging.getLogger(__name__)

EXHAUSTIVE_CEILING = 15


class DisconnectedGraph(ValueError):
    pass


@dataclass(frozen=True)
class DeviationMode:
    """``kind="exhaustive"`` tries every strategy; ``kind="local"`` only those
    within ``budget`` single-edge additions plus removals of the current one.
    """

    kind: str = "exhaustive"
    budget: int = 2
    ceiling: int = EXHAUSTIVE_CEILING

    def __post_init__(self):
        if self.kind not in ("exhaustive", "local"):
            raise ValueError(f"unknown deviation mode {self.kind!r}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")

    def check(self, n: int) -> None:
        if self.kind == "exhaustive" and n > self.ceiling:
            raise ValueError(
                f"exhaustive deviations limited to n <= {self.ceiling} (got n={n}); use local mode"
            )


EXHAUSTIVE = DeviationMode("exhaustive")
LOCAL = DeviationMode("local")


@dataclass
class Verdict:
    stable: bool
    mode: str
    players: tuple[int, ...] = ()
    strategies: dict[int, tuple[int, ...]] = field(default_factory=dict)
    delta: Fraction | None = None

    @property
    def label(self) -> str:
        if not self.stable:
            return "not stable"
        return "stable" if self.mode == "exhaustive" else "locally stable"

    def to_json(self) -> dict:
        out: dict = {"stable": self.stable, "label": self.label, "mode": self.mode}
        if not self.stable:
            out["witness"] = {
                "players": list(self.players),
                "strategies": {str(i): list(s) for i, s in self.strategies.items()},
                "delta": str(self.delta),
            }
        return out


# ---------------------------------------------------------------------------
# distance helpers


def _big(n: int) -> int:
    return 4 * n + 4


def _apsp(n: int, adj: list[set[int]], skip: int | None = None) -> np.ndarray:
    """All-pairs hop counts with ``_big(n)`` for unreachable pairs; ``skip`` is deleted."""
    big = _big(n)
    D = np.full((n, n), big, dtype=np.int32)
    for s in range(n):
        if s == skip:
            continue
        D[s, s] = 0
        frontier = [s]
        d = 0
        seen = {s}
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w != skip and w not in seen:
                        seen.add(w)
                        D[s, w] = d
                        nxt.append(w)
            frontier = nxt
    return D


def _subset_minima(D: np.ndarray, base: np.ndarray, cand: list[int]) -> np.ndarray:
    """Row ``mask`` holds ``min(base, min_{b in mask} D[cand[b]])``."""
    k = len(cand)
    M = np.empty((1 << k, D.shape[1]), dtype=D.dtype)
    M[0] = base
    for b, u in enumerate(cand):
        lo = 1 << b
        np.minimum(M[:lo], D[u], out=M[lo:2 * lo])
    return M


def _popcounts(k: int) -> np.ndarray:
    pc = np.zeros(1 << k, dtype=np.int64)
    for b in range(k):
        pc[1 << b: 2 << b] = pc[: 1 << b] + 1
    return pc


def _mask_to_set(mask: int, cand: list[int]) -> frozenset[int]:
    return frozenset(u for b, u in enumerate(cand) if mask >> b & 1)


def _scaled(alpha: Fraction, edges, distsum):
    """``q * (alpha * edges + distsum)`` as integers, alpha = p / q.

    Stays in int64 for ordinary prices and switches to Python integers when
    the numerator or denominator is large enough to overflow.
    """
    p, q = alpha.numerator, alpha.denominator
    if max(p, q) < 2**40:
        return p * edges + q * distsum
    return p * np.asarray(edges).astype(object) + q * np.asarray(distsum).astype(object)


# ---------------------------------------------------------------------------
# single players


def _others_adjacency(g: OwnedGraph, players: tuple[int, ...]) -> list[set[int]]:
    """Adjacency after dropping every edge bought by ``players``."""
    adj = [set(nb) for nb in (g.neighbors(v) for v in range(g.n))]
    for i in players:
        for j in g.strategy(i):
            adj[i].discard(j)
            adj[j].discard(i)
    return adj


def _local_strategies(current: frozenset[int], cand: list[int], budget: int):
    """Strategies reachable by at most ``budget`` single-edge additions and removals."""
    cur = sorted(current)
    others = [u for u in cand if u not in current]
    for n_drop in range(min(budget, len(cur)) + 1):
        for drop in itertools.combinations(cur, n_drop):
            for n_add in range(min(budget - n_drop, len(others)) + 1):
                for add in itertools.combinations(others, n_add):
                    yield (current - set(drop)) | set(add)


def best_response(
    g: OwnedGraph, i: int, cfg: GameConfig, mode: DeviationMode = EXHAUSTIVE
) -> tuple[frozenset[int], Fraction | float]:
    """Cheapest strategy for player ``i`` with everyone else fixed.

    Ties keep the current strategy.  Targets already joined to ``i`` by an
    edge someone else paid for are never bought again.
    """
    g._check_vertex(i)
    mode.check(g.n)
    n = g.n
    adj = _others_adjacency(g, (i,))
    fixed = sorted(adj[i])
    cand = [u for u in range(n) if u != i and u not in adj[i]]
    current = g.strategy(i)
    D = _apsp(n, adj, skip=i)
    big = _big(n)
    base = D[fixed].min(axis=0) if fixed else np.full(n, big, dtype=D.dtype)
    keep = np.arange(n) != i

    if mode.kind == "exhaustive":
        M = _subset_minima(D, base, cand)[:, keep]
        sizes = _popcounts(len(cand))
        cur_mask = sum(1 << b for b, u in enumerate(cand) if u in current)
        strategies = None
    else:
        strategies = list(_local_strategies(current, cand, mode.budget))
        M = np.array([np.minimum(base, D[sorted(s)].min(axis=0)) if s else base
                      for s in strategies])[:, keep]
        sizes = np.array([len(s) for s in strategies], dtype=np.int64)
        cur_mask = strategies.index(current)

    reach = (M < big).all(axis=1)
    distsum = M.sum(axis=1, dtype=np.int64) + (n - 1)
    scaled = _scaled(cfg.alpha, sizes, distsum)
    if not reach.any():
        return current, INF
    scaled = np.where(reach, scaled, scaled.max() + 1)
    best = scaled.min()
    pick = cur_mask if scaled[cur_mask] == best else int(np.argmin(scaled))
    chosen = _mask_to_set(pick, cand) if strategies is None else strategies[pick]
    cost = cfg.alpha * int(sizes[pick]) + int(distsum[pick])
    return chosen, cost


def _require_connected(g: OwnedGraph) -> None:
    if not g.is_connected():
        raise DisconnectedGraph("equilibrium checks need a connected graph")


def is_nash(g: OwnedGraph, cfg: GameConfig, mode: DeviationMode = EXHAUSTIVE) -> Verdict:
    """Stable iff no single player strictly lowers its own cost.

    The witness is the lowest-numbered player that can improve, with its
    best deviation and the exact cost change.
    """
    _require_connected(g)
    mode.check(g.n)
    for i in range(g.n):
        before = player_cost(g, i, cfg)
        strat, after = best_response(g, i, cfg, mode)
        if after < before:
            return Verdict(False, mode.kind, (i,), {i: tuple(sorted(strat))}, after - before)
    return Verdict(True, mode.kind)


# ---------------------------------------------------------------------------
# pairs


def _pair_best(g: OwnedGraph, i: int, j: int, cfg: GameConfig, mode: DeviationMode):
    """Minimum of ``cost_i + cost_j`` over joint deviations, as (scaled, S_i, S_j)."""
    n = g.n
    big = _big(n)
    alpha = cfg.alpha
    B = _others_adjacency(g, (i, j))
    cand_i = [u for u in range(n) if u != i and u not in B[i]]
    cand_j = [u for u in range(n) if u != j and u not in B[j]]
    cur_i, cur_j = g.strategy(i), g.strategy(j)

    if mode.kind == "exhaustive":
        options_j = [_mask_to_set(m, cand_j) for m in range(1 << len(cand_j))]
        sizes_i = _popcounts(len(cand_i))
    else:
        options_j = list(_local_strategies(cur_j, cand_j, mode.budget))
        options_i = list(_local_strategies(cur_i, cand_i, mode.budget))
        sizes_i = np.array([len(s) for s in options_i], dtype=np.int64)

    not_i = np.arange(n) != i
    not_ij = not_i & (np.arange(n) != j)
    best = None
    for Sj in options_j:
        H = [set(nb) for nb in B]
        for u in Sj:
            H[j].add(u)
            H[u].add(j)
        D = _apsp(n, H, skip=i)
        fixed = sorted(H[i])
        base = D[fixed].min(axis=0) if fixed else np.full(n, big, dtype=D.dtype)
        if mode.kind == "exhaustive":
            M = _subset_minima(D, base, cand_i)
        else:
            M = np.array([np.minimum(base, D[sorted(s)].min(axis=0)) if s else base
                          for s in options_i])
        # player i: one hop to a neighbour, then the rest of the graph
        Mi = M[:, not_i]
        reach_i = (Mi < big).all(axis=1)
        dist_i = Mi.sum(axis=1, dtype=np.int64) + (n - 1)
        # player j: either avoid i, or walk to i's neighbourhood, through i, and out
        to_i = M[:, j].astype(np.int64)
        via_i = to_i[:, None] + 2 + M[:, not_ij]
        dj = np.minimum(D[j, not_ij][None, :], via_i)
        reach_j = (dj < big).all(axis=1) & (to_i < big)
        dist_j = dj.sum(axis=1, dtype=np.int64) + to_i + 1
        total = _scaled(alpha, sizes_i + len(Sj), dist_i + dist_j)
        ok = reach_i & reach_j
        if not ok.any():
            continue
        total = np.where(ok, total, total.max() + 1)
        k = int(np.argmin(total))
        if best is None or total[k] < best[0]:
            Si = _mask_to_set(k, cand_i) if mode.kind == "exhaustive" else options_i[k]
            best = (int(total[k]), Si, Sj)
    return best


def is_2coalition_stable(
    g: OwnedGraph, cfg: GameConfig, mode: DeviationMode = EXHAUSTIVE
) -> Verdict:
    """Stable iff no single player and no pair of players can strictly lower
    their summed cost by jointly changing what they buy.
    """
    _require_connected(g)
    mode.check(g.n)
    single = is_nash(g, cfg, mode)
    if not single.stable:
        return single
    q = cfg.alpha.denominator
    for i, j in itertools.combinations(range(g.n), 2):
        before = player_cost(g, i, cfg) + player_cost(g, j, cfg)
        scaled, Si, Sj = _pair_best(g, i, j, cfg, mode)
        after = Fraction(scaled, q)
        if after < before:
            return Verdict(False, mode.kind, (i, j),
                           {i: tuple(sorted(Si)), j: tuple(sorted(Sj))}, after - before)
    return Verdict(True, mode.kind)


def apply_witness(g: OwnedGraph, verdict: Verdict) -> OwnedGraph:
    """Profile after the witnessing players switch to their reported strategies.

    A target that the partner also buys in the same deviation is kept once,
    owned by the lower-numbered player.
    """
    edges = [(u, v, o) for u, v, o in g.edges if o not in verdict.players]
    present = {(min(u, v), max(u, v)) for u, v, _ in edges}
    for i in verdict.players:
        for t in verdict.strategies[i]:
            key = (min(i, t), max(i, t))
            if key not in present:
                present.add(key)
                edges.append((i, t, i))
    return OwnedGraph(g.n, edges)


def replay_delta(g: OwnedGraph, cfg: GameConfig, verdict: Verdict) -> Fraction:
    """Recompute the witness's cost change from scratch with plain BFS."""
    after = apply_witness(g, verdict)
    total = Fraction(0)
    for i in verdict.players:
        bought = len(verdict.strategies[i])
        before_i = player_cost(g, i, cfg)
        dist_after = player_cost(after, i, cfg) - cfg.alpha * len(after.strategy(i))
        total += cfg.alpha * bought + dist_after - before_i
    return total


# ---------------------------------------------------------------------------
# dynamics


def initial_graph(n: int, init: str, rng: np.random.Generator | None = None) -> OwnedGraph:
    if init == "star":
        return OwnedGraph(n, [(0, v, 0) for v in range(1, n)])
    if init == "path":
        return OwnedGraph(n, [(v, v + 1, v) for v in range(n - 1)])
    if init == "cycle":
        if n < 3:
            return initial_graph(n, "path")
        return OwnedGraph(n, [(v, (v + 1) % n, v) for v in range(n)])
    if init == "random":
        rng = rng if rng is not None else np.random.default_rng(0)
        edges = {}
        order = rng.permutation(n)
        for k in range(1, n):
            u, v = int(order[k]), int(order[rng.integers(0, k)])
            edges[(min(u, v), max(u, v))] = u if rng.random() < 0.5 else v
        for _ in range(int(rng.integers(0, n + 1))):
            u, v = map(int, rng.choice(n, size=2, replace=False))
            key = (min(u, v), max(u, v))
            if key not in edges:
                edges[key] = u if rng.random() < 0.5 else v
        return OwnedGraph(n, [(u, v, o) for (u, v), o in sorted(edges.items())])
    raise ValueError(f"unknown initial graph {init!r}")


def run_dynamics(
    cfg: GameConfig,
    init: str = "path",
    seed: int = 0,
    max_rounds: int = 100,
    mode: DeviationMode = EXHAUSTIVE,
    start: OwnedGraph | None = None,
) -> tuple[OwnedGraph, bool, int]:
    """Round-robin best-response updates in vertex order.

    Returns ``(graph, converged, rounds)``; converged means a whole round
    went by without any player strictly improving.
    """
    rng = np.random.default_rng(seed)
    g = start if start is not None else initial_graph(cfg.n, init, rng)
    mode.check(g.n)
    for rnd in range(1, max_rounds + 1):
        changed = False
        for i in range(g.n):
            before = player_cost(g, i, cfg)
            strat, after = best_response(g, i, cfg, mode)
            if after < before:
                g = g.with_strategy(i, strat)
                changed = True
        if not changed:
            return g, True, rnd
    return g, False, max_rounds


def parse_alpha(text) -> Fraction:
    return as_rational(text)


# ---------------------------------------------------------------------------
# fixtures


def fig1_fixture(s: int) -> tuple[OwnedGraph, GameConfig]:
    """Non-tree equilibrium on n = 2s + 3 vertices at alpha = n - 3.

    Hubs 0 and 1 are joined through the middle vertices 2, 3, 4, each of
    which buys both of its edges; hub 0 buys edges to leaves 5..s+3 and hub 1
    to leaves s+4..2s+2.  A middle vertex dropping an edge saves alpha = 2s
    and walks 2 steps further to the far hub and its s - 1 leaves, so it
    breaks even and stays.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    n = 2 * s + 3
    edges = []
    for m in (2, 3, 4):
        edges += [(m, 0, m), (m, 1, m)]
    v = 5
    for hub in (0, 1):
        for _ in range(s - 1):
            edges.append((hub, v, hub))
            v += 1
    return OwnedGraph(n, edges), GameConfig(Fraction(n - 3), n)
