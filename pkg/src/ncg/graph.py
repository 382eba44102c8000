"""Strategy profiles of the network creation game and their costs.

A profile is an undirected simple graph on vertices ``0..n-1`` in which every
edge records the endpoint that bought it.  Player ``i``'s strategy is the set
of edges it owns; its cost is ``alpha * |owned| + sum of distances to all
vertices``.  A player that cannot reach some vertex has infinite cost.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import networkx as nx
import numpy as np

UNREACHABLE = -1
INF = math.inf


class GraphFormatError(ValueError):
    pass


def as_rational(value) -> Fraction:
    """Parse ``"p/q"``, a decimal string, an int or a Fraction exactly.

    Floats are refused: a binary float rarely equals the intended price.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("not a rational: bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError(f"refusing float {value!r}; pass a string such as '3/2' or '1.5'")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid rational {value!r}") from exc
    raise ValueError(f"invalid rational {value!r}")


@dataclass(frozen=True)
class GameConfig:
    alpha: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.alpha <= 0:
            raise ValueError("edge price alpha must be positive")
        if self.n < 1:
            raise ValueError("need at least one player")


class OwnedGraph:
    """Simple undirected graph with an owner recorded for every edge."""

    __slots__ = ("n", "_owner", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        owner: dict[tuple[int, int], int] = {}
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v, o in edges:
            u, v, o = int(u), int(v), int(o)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if o not in (u, v):
                raise ValueError(f"owner {o} of edge ({u}, {v}) is not an endpoint")
            key = (min(u, v), max(u, v))
            if key in owner:
                raise ValueError(f"edge {key} appears twice")
            owner[key] = o
            adj[u].add(v)
            adj[v].add(u)
        self._owner = owner
        self._adj = adj

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_strategies(cls, n: int, strategies: Mapping[int, Iterable[int]]) -> "OwnedGraph":
        """Build from ``{player: targets it buys}``."""
        return cls(n, [(i, j, i) for i, targets in strategies.items() for j in targets])

    def with_strategy(self, i: int, targets: Iterable[int]) -> "OwnedGraph":
        """Profile in which player ``i`` buys exactly ``targets``.

        Targets already connected to ``i`` by an edge the other endpoint owns
        are skipped (buying them again changes nothing but the bill).
        """
        edges = [(u, v, o) for (u, v), o in self._owner.items() if o != i]
        bought_by_others = self._adj[i] - set(self.strategy(i))
        edges += [(i, j, i) for j in targets if j not in bought_by_others]
        return OwnedGraph(self.n, edges)

    # -- queries ---------------------------------------------------------------
    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, o) for (u, v), o in sorted(self._owner.items())]

    @property
    def m(self) -> int:
        return len(self._owner)

    def owner(self, u: int, v: int) -> int:
        return self._owner[(min(u, v), max(u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._owner

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def strategy(self, i: int) -> frozenset[int]:
        """Vertices that ``i`` has bought an edge to."""
        self._check_vertex(i)
        return frozenset(j for j in self._adj[i] if self._owner[(min(i, j), max(i, j))] == i)

    def _check_vertex(self, i: int) -> None:
        if not (isinstance(i, (int, np.integer)) and 0 <= i < self.n):
            raise ValueError(f"invalid vertex id {i!r} for n={self.n}")

    def adjacency_masks(self) -> list[int]:
        return [sum(1 << w for w in nb) for nb in self._adj]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for (u, v), o in self._owner.items():
            g.add_edge(u, v, owner=o)
        return g

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(bfs(self, 0)) == self.n

    def __eq__(self, other):
        return isinstance(other, OwnedGraph) and self.n == other.n and self._owner == other._owner

    def __hash__(self):
        return hash((self.n, frozenset(self._owner.items())))

    def __repr__(self):
        return f"OwnedGraph(n={self.n}, edges={self.edges})"

    # -- JSON ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u, v, o] for u, v, o in self.edges]}

    @classmethod
    def from_json(cls, data) -> "OwnedGraph":
        if not isinstance(data, dict):
            raise GraphFormatError("top level: expected an object with keys 'n' and 'edges'")
        if "n" not in data:
            raise GraphFormatError("field 'n': missing")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise GraphFormatError(f"field 'n': expected a nonnegative integer, got {n!r}")
        edges = data.get("edges")
        if not isinstance(edges, list):
            raise GraphFormatError("field 'edges': expected a list of [u, v, owner] triples")
        parsed = []
        for k, e in enumerate(edges):
            if not (isinstance(e, list) and len(e) == 3):
                raise GraphFormatError(f"field 'edges[{k}]': expected [u, v, owner], got {e!r}")
            for pos, x in enumerate(e):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise GraphFormatError(f"field 'edges[{k}][{pos}]': expected an integer, got {x!r}")
            parsed.append(tuple(e))
        try:
            return cls(n, parsed)
        except ValueError as exc:
            raise GraphFormatError(f"field 'edges': {exc}") from exc


def loads_graph(text: str) -> OwnedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return OwnedGraph.from_json(data)


def load_graph(path) -> OwnedGraph:
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())


def save_graph(g: OwnedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(g.to_json(), fh)
        fh.write("\n")


# ---------------------------------------------------------------------------
# distances and costs


def bfs(g: OwnedGraph, src: int) -> dict[int, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def all_distances(g: OwnedGraph) -> np.ndarray:
    """``n x n`` hop counts with ``UNREACHABLE`` (-1) for disconnected pairs."""
    out = np.full((g.n, g.n), UNREACHABLE, dtype=np.int64)
    for s in range(g.n):
        for t, d in bfs(g, s).items():
            out[s, t] = d
    return out


def player_cost(g: OwnedGraph, i: int, cfg: GameConfig) -> Fraction | float:
    g._check_vertex(i)
    dist = bfs(g, i)
    if len(dist) < g.n:
        return INF
    return cfg.alpha * len(g.strategy(i)) + sum(dist.values())


def social_cost(g: OwnedGraph, cfg: GameConfig) -> Fraction | float:
    """``alpha * |E| + sum over ordered pairs of distances``."""
    D = all_distances(g)
    if (D == UNREACHABLE).any():
        return INF
    return cfg.alpha * g.m + int(D.sum())


def theorem1_min_girth(cfg: GameConfig) -> Fraction:
    """Lower bound ``2 alpha / n + 2`` on the girth of any cyclic equilibrium."""
    return 2 * cfg.alpha / cfg.n + 2


# ---------------------------------------------------------------------------
# cycles


def shortest_cycle(g: OwnedGraph) -> tuple[int, list[int]] | None:
    """A minimum-length cycle as ``(length, [a_0, ..., a_{c-1}])``, or None for forests."""
    best: tuple[int, list[int]] | None = None
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
        for u in dist:
            for w in g.neighbors(u):
                if u > w or parent[u] == w or parent[w] == u:
                    continue
                length = dist[u] + dist[w] + 1
                if best is not None and length >= best[0]:
                    continue
                left, right = _tree_path(parent, u), _tree_path(parent, w)
                if set(left[1:]) & set(right[1:]):
                    continue
                best = (length, left + right[:0:-1])
    if best is not None:
        _check_isometric(g, best[1])
    return best


def _tree_path(parent: dict[int, int], v: int) -> list[int]:
    path = []
    while v != -1:
        path.append(v)
        v = parent[v]
    return path[::-1]


def _check_isometric(g: OwnedGraph, cycle: list[int]) -> None:
    c = len(cycle)
    for a, u in enumerate(cycle):
        dist = bfs(g, u)
        for b, v in enumerate(cycle):
            k = abs(a - b)
            if dist[v] != min(k, c - k):
                raise AssertionError(f"cycle {cycle} is not isometric at ({u}, {v})")


def girth(g: OwnedGraph) -> int | float:
    found = shortest_cycle(g)
    return INF if found is None else found[0]


# ---------------------------------------------------------------------------
# biconnected components


@dataclass
class Component:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    deg: dict[int, int]
    satellites: dict[int, frozenset[int]]

    @property
    def nontrivial(self) -> bool:
        return len(self.vertices) >= 3

    @property
    def average_degree(self) -> Fraction:
        return Fraction(2 * len(self.edges), len(self.vertices))


@dataclass
class BiconnectedDecomposition:
    components: list[Component]
    articulation_points: frozenset[int]

    @property
    def nontrivial(self) -> list[Component]:
        return [h for h in self.components if h.nontrivial]


def biconnected(g: OwnedGraph) -> BiconnectedDecomposition:
    """Blocks of ``g``; blocks with at least three vertices are the non-trivial ones.

    For a block H, ``satellites[v]`` is S(v): vertices outside H whose
    closest vertex of H is v.
    """
    G = g.to_networkx()
    comps = []
    for edge_set in nx.biconnected_component_edges(G):
        es = frozenset((min(u, v), max(u, v)) for u, v in edge_set)
        verts = frozenset(x for e in es for x in e)
        deg = {v: 0 for v in verts}
        for u, v in es:
            deg[u] += 1
            deg[v] += 1
        comps.append(Component(verts, es, deg, _satellites(g, verts)))
    comps.sort(key=lambda h: (min(h.vertices), len(h.vertices)))
    return BiconnectedDecomposition(comps, frozenset(nx.articulation_points(G)))


def _satellites(g: OwnedGraph, H: frozenset[int]) -> dict[int, frozenset[int]]:
    label = {v: v for v in H}
    q = deque(sorted(H))
    while q:
        u = q.popleft()
        for w in sorted(g.neighbors(u)):
            if w not in label:
                label[w] = label[u]
                q.append(w)
    out: dict[int, set[int]] = {v: set() for v in H}
    for w, v in label.items():
        if w not in H:
            out[v].add(w)
    return {v: frozenset(s) for v, s in out.items()}
