"""Network creation games: equilibrium checks and per-girth edge-price bounds."""

from __future__ import annotations

__version__ = "0.1.0"

from .audit import AuditReport, audit
from .cycle_lp import (
    BoundReport,
    CycleSpec,
    Deviation,
    build_lp,
    canonical_orientations,
    coefficient,
    compress_columns,
    enumerate_groups,
    girth_bound,
    modified_cycle_distances,
    normalize,
)
from .equilibrium import (
    DeviationMode,
    Verdict,
    best_response,
    fig1_fixture,
    is_2coalition_stable,
    is_nash,
    run_dynamics,
)
from .graph import (
    GameConfig,
    OwnedGraph,
    all_distances,
    biconnected,
    girth,
    load_graph,
    player_cost,
    save_graph,
    shortest_cycle,
    social_cost,
    theorem1_min_girth,
)
from .lp import LPInstance, SolveResult, check_certificate, solve_max
from .unicyclic import one_cycle_feasibility

__all__ = [
    "AuditReport", "BoundReport", "CycleSpec", "Deviation", "DeviationMode", "GameConfig",
    "LPInstance", "OwnedGraph", "SolveResult", "Verdict", "all_distances", "audit",
    "best_response", "biconnected", "build_lp", "canonical_orientations", "check_certificate",
    "coefficient", "compress_columns", "enumerate_groups", "fig1_fixture", "girth",
    "girth_bound", "is_2coalition_stable", "is_nash", "load_graph", "modified_cycle_distances",
    "normalize", "one_cycle_feasibility", "player_cost", "run_dynamics", "save_graph",
    "shortest_cycle", "social_cost", "solve_max", "theorem1_min_girth",
]
