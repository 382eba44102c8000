"""Which cycle lengths can appear in an equilibrium with a single cycle.

    python demos/one_cycle.py
"""

from __future__ import annotations

from ncg.unicyclic import brute_force, one_cycle_feasibility


def main() -> None:
    for k in range(3, 10):
        res = one_cycle_feasibility(k)
        if res.feasible:
            print(f"k={k}: feasible, tree sizes {res.sizes}, ownership {res.orientation}")
        else:
            print(f"k={k}: infeasible ({res.method})")
            for line in res.trace:
                print("    " + line)
    print("\ncross-check k=6 over sizes 1..8:",
          "feasible" if brute_force(6, 8).feasible else "infeasible")


if __name__ == "__main__":
    main()
