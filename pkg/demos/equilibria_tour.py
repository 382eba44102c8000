"""A walk through the game layer: costs, Nash and coalition checks, dynamics
and the structural audit.

    python demos/equilibria_tour.py
"""

from __future__ import annotations

from fractions import Fraction

from ncg import GameConfig, OwnedGraph
from ncg.audit import audit
from ncg.equilibrium import fig1_fixture, is_2coalition_stable, is_nash, run_dynamics
from ncg.graph import girth, player_cost, social_cost


def main() -> None:
    # a star where the center pays for everything
    star = OwnedGraph(5, [(0, v, 0) for v in range(1, 5)])
    cfg = GameConfig(2, 5)
    print("star, alpha=2:")
    print("  center cost", player_cost(star, 0, cfg), " leaf cost", player_cost(star, 1, cfg))
    print("  social cost", social_cost(star, cfg))
    print("  Nash:", is_nash(star, cfg).label)

    # two leaves can profit together although neither can alone
    small = OwnedGraph(3, [(0, 1, 0), (0, 2, 0)])
    cfg = GameConfig(Fraction(3, 2), 3)
    v = is_2coalition_stable(small, cfg)
    print("\nstar on 3 vertices, alpha=3/2: Nash", is_nash(small, cfg).stable,
          "/ 2-coalition stable", v.stable)
    print("  deviating pair", v.players, "joint change", v.delta)

    # a non-tree equilibrium
    for s in (1, 2, 3):
        g, cfg = fig1_fixture(s)
        rep = audit(g, cfg)
        print(f"\nfixture s={s}: n={g.n}, alpha={cfg.alpha}, edges={g.m}, girth={girth(g)}")
        print("  Nash:", is_nash(g, cfg).label, " audit passes:", rep.passed)

    # best-response dynamics from a random start
    cfg = GameConfig(Fraction(9, 2), 9)
    g, converged, rounds = run_dynamics(cfg, "random", seed=3)
    print(f"\ndynamics n=9 alpha=9/2: converged={converged} after {rounds} rounds,"
          f" {g.m} edges, girth {girth(g)}")


if __name__ == "__main__":
    main()
