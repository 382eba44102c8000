"""Command-line entry point: ``ncg <subcommand> ...``.

Reports are JSON on stdout (or in ``--out``).  Exit status is 0 on success,
1 when the input is well-formed but the computation refuses it (unreadable or
malformed graph, disconnected graph, size ceilings) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .audit import audit
from .cycle_lp import (
    EnumerationTooLarge,
    canonical_orientations,
    girth_bound,
    lp_for_orientation,
    universal_columns,
)
from .equilibrium import (
    DeviationMode,
    DisconnectedGraph,
    fig1_fixture,
    is_2coalition_stable,
    is_nash,
    run_dynamics,
)
from .graph import (
    GameConfig,
    GraphFormatError,
    as_rational,
    girth,
    load_graph,
    player_cost,
    save_graph,
    social_cost,
)
from .lp import dump_rows
from .unicyclic import one_cycle_feasibility

log = logging.getLogger("ncg")


class DomainError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        value = as_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if value <= 0:
        raise argparse.ArgumentTypeError("alpha must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {value}")
    return value


def _fmt_cost(x) -> str:
    return "inf" if x == float("inf") else str(x)


def _mode(args) -> DeviationMode:
    return DeviationMode(args.deviations, budget=args.budget)


def _load(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise DomainError(f"{path}: {exc}") from None


def _config(g, alpha: Fraction) -> GameConfig:
    return GameConfig(alpha, g.n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_cost(args) -> dict:
    g = _load(args.file)
    cfg = _config(g, args.alpha)
    return {
        "players": [
            {"player": i, "edges": len(g.strategy(i)), "cost": _fmt_cost(player_cost(g, i, cfg))}
            for i in range(g.n)
        ],
        "social_cost": _fmt_cost(social_cost(g, cfg)),
    }


def cmd_verify(args) -> dict:
    g = _load(args.file)
    cfg = _config(g, args.alpha)
    mode = _mode(args)
    if args.coalitions == 2:
        verdict = is_2coalition_stable(g, cfg, mode)
    else:
        verdict = is_nash(g, cfg, mode)
    out = verdict.to_json()
    out["coalitions"] = args.coalitions
    return out


def cmd_audit(args) -> dict:
    g = _load(args.file)
    return audit(g, _config(g, args.alpha), coalition=args.coalition, radius=args.radius).to_json()


def cmd_dynamics(args) -> dict:
    cfg = GameConfig(args.alpha, args.n)
    g, converged, rounds = run_dynamics(cfg, args.init, args.seed, args.max_rounds, _mode(args))
    gi = girth(g)
    return {
        "graph": g.to_json(),
        "converged": converged,
        "rounds": rounds,
        "girth": None if gi == float("inf") else gi,
    }


def cmd_bound(args) -> dict:
    if args.dump_lp:
        _dump_lps(args)
    report = girth_bound(
        args.girth,
        mode=args.mode,
        solver=args.solver,
        seed=args.seed,
        extra_random=args.random_extra,
        threads=args.threads,
    )
    return report.to_json()


def _dump_lps(args) -> None:
    from .cycle_lp import enumerate_groups

    groups = None
    if args.mode == "sampled":
        groups = enumerate_groups(args.girth, "sampled", seed=args.seed,
                                  extra_random=args.random_extra)
    gc = universal_columns(args.girth, groups=groups, mode=args.mode, threads=args.threads)
    out = Path(args.dump_lp)
    out.mkdir(parents=True, exist_ok=True)
    for spec in canonical_orientations(args.girth):
        clp = lp_for_orientation(gc, spec)
        (out / f"girth{args.girth}_{spec.bits}.lp.txt").write_text(dump_rows(clp.lp))


def cmd_fixture(args) -> dict:
    g, cfg = fig1_fixture(args.s)
    if args.out:
        save_graph(g, args.out)
        return {}
    return g.to_json()


def cmd_onecycle(args) -> dict:
    return one_cycle_feasibility(args.k, args.cap, method=args.method).to_json()


# ---------------------------------------------------------------------------
# parser


def _add_alpha(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_rational_arg, required=True,
                   help='edge price as "p/q" or a decimal such as 1.5')


def _add_deviations(p: argparse.ArgumentParser) -> None:
    p.add_argument("--deviations", choices=("exhaustive", "local"), default="exhaustive")
    p.add_argument("--budget", type=_nonneg_int, default=2,
                   help="edges added plus dropped per player in local mode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ncg {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cost", help="player and social costs of a graph file")
    p.add_argument("file")
    _add_alpha(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("verify", help="Nash or 2-coalition stability")
    p.add_argument("file")
    _add_alpha(p)
    _add_deviations(p)
    p.add_argument("--coalitions", type=int, choices=(0, 2), default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="structural consequence checks")
    p.add_argument("file")
    _add_alpha(p)
    p.add_argument("--coalition", action="store_true")
    p.add_argument("--radius", type=_positive_int, default=None,
                   help="neighbourhood radius (default 5, or 3 with --coalition)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("dynamics", help="round-robin best-response dynamics")
    p.add_argument("--n", type=_positive_int, required=True)
    _add_alpha(p)
    p.add_argument("--init", choices=("star", "path", "cycle", "random"), default="path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=_nonneg_int, default=100)
    _add_deviations(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("bound", help="per-girth LP bound on alpha/n")
    p.add_argument("--girth", type=int, required=True)
    p.add_argument("--mode", choices=("full", "sampled"), default="full")
    p.add_argument("--random-extra", type=_nonneg_int, default=None,
                   help="extra random groups in sampled mode (default 2^girth)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=("exact", "float"), default="exact")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--dump-lp", metavar="DIR", help="write every class LP as plain text rows")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fixture", help="emit a fixture graph")
    fx = p.add_subparsers(dest="fixture", required=True)
    q = fx.add_parser("fig1", help="non-tree equilibrium on 2s+3 vertices at alpha = n-3")
    q.add_argument("--s", type=_positive_int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_fixture)

    p = sub.add_parser("onecycle", help="unicyclic equilibrium feasibility for a cycle length")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cap", type=_positive_int, default=8)
    p.add_argument("--method", choices=("auto", "chain", "brute"), default="auto")
    p.add_argument("--out")
    p.set_defaults(func=cmd_onecycle)
    return parser


def _normalized_flags(args) -> dict:
    """Every option that shapes the result; the worker count is left out
    because it never changes the output."""
    skip = {"func", "out", "verbose", "threads", "dump_lp"}
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        flags[key] = str(value) if isinstance(value, Fraction) else value
    return flags


def _check_usage(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "bound":
        if args.random_extra is not None and args.mode != "sampled":
            parser.error("--random-extra only applies with --mode sampled")
        if args.girth < 3:
            parser.error("--girth must be at least 3")
    if args.command == "onecycle" and args.k < 3:
        parser.error("--k must be at least 3")
    if args.command == "verify" and args.deviations == "exhaustive" and args.budget != 2:
        parser.error("--budget only applies with --deviations local")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_usage(parser, args)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        result = args.func(args)
    except (DomainError, DisconnectedGraph, EnumerationTooLarge, ValueError) as exc:
        print(f"ncg {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.command == "fixture" and args.out:
        return 0
    report = {
        "tool": "ncg",
        "version": __version__,
        "command": args.command,
        "flags": _normalized_flags(args),
        "result": result,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
