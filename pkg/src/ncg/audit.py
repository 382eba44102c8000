"""Structural consequence checks for candidate equilibria.

Every non-trivial biconnected component is checked against necessary
conditions that a (2-coalitional) Nash equilibrium must meet.  A failed check
means the graph cannot be an equilibrium at this alpha whenever the condition
applies; passing every check proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np

from .graph import GameConfig, OwnedGraph, all_distances, biconnected, theorem1_min_girth

__all__ = ["ComponentAudit", "AuditReport", "audit"]


@dataclass
class ComponentAudit:
    vertices: tuple[int, ...]
    average_degree: Fraction
    girth: int
    opposite_edges: dict
    neighborhood: dict
    degree_lower: dict
    degree_upper: dict
    girth_check: dict

    @property
    def passed(self) -> bool:
        return all(
            part["pass"]
            for part in (self.opposite_edges, self.neighborhood, self.degree_lower,
                         self.degree_upper, self.girth_check)
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "average_degree": str(self.average_degree),
            "girth": self.girth,
            "opposite_edges": self.opposite_edges,
            "neighborhood": self.neighborhood,
            "degree_lower_bound": self.degree_lower,
            "degree_upper_bound": self.degree_upper,
            "girth_bound": self.girth_check,
            "pass": self.passed,
        }


@dataclass
class AuditReport:
    alpha: Fraction
    n: int
    coalition: bool
    radius: int
    components: list[ComponentAudit] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.components)

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "n": self.n,
            "coalition": self.coalition,
            "radius": self.radius,
            "components": [c.to_json() for c in self.components],
            "pass": self.passed,
        }


def _opposite_edges(g: OwnedGraph, H: frozenset[int], deg: dict[int, int], D: np.ndarray) -> dict:
    """Pairs u, v at distance >= 3 that each buy the first edge of a common
    shortest u-v path, where both inner endpoints have degree 2 in H.
    """
    hits = []
    verts = sorted(H)
    for u in verts:
        xs = [x for x in g.strategy(u) if x in H]
        if not xs:
            continue
        for v in verts:
            if v <= u or D[u, v] < 3:
                continue
            d = D[u, v]
            for x in xs:
                if D[x, v] != d - 1 or deg[x] >= 3:
                    continue
                for y in g.strategy(v):
                    if y in H and deg[y] < 3 and D[u, y] == d - 1 and D[x, y] == d - 2:
                        hits.append({"u": u, "v": v, "x": x, "y": y, "distance": int(d)})
    return {"pass": not hits, "violations": hits}


def _neighborhood(H: frozenset[int], deg: dict[int, int], D: np.ndarray, radius: int) -> dict:
    """Every radius-ball in H must contain a vertex of H-degree at least 3."""
    verts = sorted(H)
    missing = []
    witnesses = {}
    for u in verts:
        ball = [w for w in verts if D[u, w] <= radius and deg[w] >= 3]
        if ball:
            witnesses[str(u)] = min(ball, key=lambda w: (D[u, w], w))
        else:
            missing.append(u)
    return {"radius": radius, "pass": not missing, "vertices_without": missing,
            "witnesses": witnesses}


def _component_girth(g: OwnedGraph, H: frozenset[int], edges) -> int:
    sub = nx.Graph()
    sub.add_nodes_from(H)
    sub.add_edges_from((u, v) for u, v in edges)
    return int(nx.girth(sub))


def audit(g: OwnedGraph, cfg: GameConfig, coalition: bool = False,
          radius: int | None = None) -> AuditReport:
    """Run every consequence check on every non-trivial biconnected component.

    ``radius`` is the neighbourhood radius used both for the degree-3 ball
    check and the average-degree lower bound 2 + 1/(3t+1); it defaults to 5,
    or 3 for coalitions.
    """
    if radius is None:
        radius = 3 if coalition else 5
    if radius < 1:
        raise ValueError("radius must be positive")
    alpha, n = cfg.alpha, cfg.n
    D = all_distances(g)
    report = AuditReport(alpha=alpha, n=n, coalition=coalition, radius=radius)
    for comp in biconnected(g).nontrivial:
        H = comp.vertices
        deg = comp.deg
        avg = comp.average_degree
        gir = _component_girth(g, H, comp.edges)

        hood = _neighborhood(H, deg, D, radius)
        lower = 2 + Fraction(1, 3 * radius + 1)
        # the lower bound is only a consequence when every ball has a degree-3 vertex
        lower_check = {
            "bound": str(lower),
            "hypothesis_holds": hood["pass"],
            "pass": (not hood["pass"]) or avg >= lower,
        }
        if alpha > n:
            upper = 2 + Fraction(4 * n) / (alpha - n)
            upper_check = {"bound": str(upper), "applies": True, "pass": avg <= upper}
        else:
            upper_check = {"bound": None, "applies": False, "pass": True}
        need = theorem1_min_girth(cfg)
        girth_check = {"bound": str(need), "girth": gir, "pass": gir >= need}

        report.components.append(ComponentAudit(
            vertices=tuple(sorted(H)),
            average_degree=avg,
            girth=gir,
            opposite_edges=_opposite_edges(g, H, deg, D),
            neighborhood=hood,
            degree_lower=lower_check,
            degree_upper=upper_check,
            girth_check=girth_check,
        ))
    return report
