"""Command-line front end.

Usage:
    plcrn analyze network.crn            network invariants
    plcrn decompose network.crn          finest independent decomposition + T-hat ranks
    plcrn check network.crn              rank conditions and existence verdict
    plcrn solve network.crn              per-block and whole-network steady-state search
    plcrn chain --f 1,1 --k 2 --kp 6     closed-form steady state of a reversible chain

Exit codes: 0 success, 1 invalid input, 2 I/O error, 3 (check only) the
rank conditions do not hold.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Sequence

from .chain import ChainSpec, chain_parametrization, make_chain
from .linalg import as_fraction
from .model import NotReactantDetermined, is_plrdk
from .parser import CrnParseError, load_network
from .report import build_report
from .steady_state import SolverConfig, existence_verdict, relative_residual, solve_reactions

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_CONDITIONS = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _solver_config(args) -> SolverConfig:
    cfg = SolverConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                overrides = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}", EXIT_IO)
        except json.JSONDecodeError as exc:
            raise CliError(f"bad config file: {exc}")
        unknown = set(overrides) - {f.name for f in dataclasses.fields(SolverConfig)}
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        cfg = dataclasses.replace(cfg, **overrides)
    for name in ("tol", "starts", "seed", "max_iter"):
        value = getattr(args, name)
        if value is not None:
            cfg = dataclasses.replace(cfg, **{name: value})
    return cfg


def _load(args):
    try:
        system = load_network(args.path)
    except OSError as exc:
        raise CliError(f"{args.path}: {exc.strerror or exc}", EXIT_IO)
    except CrnParseError as exc:
        raise CliError(f"{args.path}: {exc}")
    if args.rates:
        try:
            system = system.with_rates(_floats(args.rates))
        except ValueError as exc:
            raise CliError(f"--rates: {exc}")
    return system


def _print_network(rep: dict) -> None:
    net = rep["network"]
    print(f"species (m)       {net['m']}  [{' '.join(net['species'])}]")
    print(f"complexes (n)     {net['n']}")
    print(f"reactions (r)     {net['r']}")
    print(f"linkage classes   {net['ell']}")
    print(f"rank N            {net['rank_N']}")
    print(f"deficiency        {net['deficiency']}")
    print(f"PL-RDK            {'yes' if rep['plrdk'] else 'no'}")


def _print_decomposition(rep: dict) -> None:
    dec = rep["decomposition"]
    blocks = " | ".join("{" + ", ".join(b) + "}" for b in dec["blocks"])
    print(f"blocks            {dec['num_blocks']}: {blocks}")
    print(f"stoich. ranks     {dec['ranks']} -> {'independent' if dec['independent'] else 'not independent'}")
    th = rep["t_hat"]
    if th is None:
        print("T-hat             unavailable (kinetics not reactant-determined)")
    else:
        total = " + ".join(str(v) for v in th["sub_ranks"])
        verdict = "independent" if th["independent"] else "not independent"
        print(f"T-hat rank        {th['rank']} vs {total} -> {verdict}")
        if th["shared_reactants"]:
            print(f"shared reactants  {', '.join(th['shared_reactants'])}")


def _print_states(rep: dict) -> None:
    for s in rep["steady_states"]:
        where = f"block {s['block']}" if s["scope"] == "block" else "whole"
        res = "n/a" if s["residual"] is None else f"{s['residual']:.3e}"
        if s["found"]:
            x = ", ".join(f"{v:.10g}" for v in s["x"])
            print(f"{where:<17} found      residual {res}  x = ({x})")
        else:
            print(f"{where:<17} not found  best residual {res}")
    print(f"verdict           {rep['verdict']}")
    for note in rep.get("notes", []):
        print(f"note              {note}")


def cmd_analyze(args) -> int:
    system = _load(args)
    rep = build_report(system)
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        _print_network(rep)
    return EXIT_OK


def cmd_decompose(args) -> int:
    system = _load(args)
    if not is_plrdk(system):
        raise CliError("T-hat matrix undefined: kinetics is not reactant-determined")
    rep = build_report(system)
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        _print_decomposition(rep)
    return EXIT_OK


def cmd_check(args) -> int:
    system = _load(args)
    verdict = existence_verdict(system, _solver_config(args))
    rep = build_report(system, verdict)
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        _print_network(rep)
        _print_decomposition(rep)
        print(f"conditions hold   {'yes' if verdict.conditions_hold else 'no'}")
        _print_states(rep)
    return EXIT_OK if verdict.conditions_hold else EXIT_CONDITIONS


def cmd_solve(args) -> int:
    system = _load(args)
    cfg = _solver_config(args)
    verdict = existence_verdict(system, cfg)
    if verdict.witness is None and verdict.direct is None:
        verdict = dataclasses.replace(verdict, direct=solve_reactions(system, None, cfg))
    rep = build_report(system, verdict)
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        _print_states(rep)
    return EXIT_OK


def cmd_chain(args) -> int:
    try:
        f = [as_fraction(v) for v in args.f.split(",")]
        k, kp = _floats(args.k), _floats(args.kp)
        n = args.n if args.n is not None else len(k)
        spec = ChainSpec(n, tuple(f), tuple(k), tuple(kp))
        x = chain_parametrization(spec, args.tau)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"invalid chain: {exc}")
    residual = relative_residual(make_chain(spec), x)
    if args.json:
        print(json.dumps({"n": n, "tau": args.tau, "x": [float(v) for v in x],
                          "residual": residual}, indent=2))
    else:
        for i, v in enumerate(x):
            print(f"x{i} = {v:.12g}")
        print(f"relative SFRF residual {residual:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plcrn", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")

    net = argparse.ArgumentParser(add_help=False, parents=[common])
    net.add_argument("path", help=".crn network file")
    net.add_argument("--rates", help="comma-separated rate constants overriding the file")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float)
    solver.add_argument("--starts", type=int)
    solver.add_argument("--seed", type=int)
    solver.add_argument("--max-iter", dest="max_iter", type=int)
    solver.add_argument("--config", help="JSON file with tol/starts/seed/max_iter/box")

    sub.add_parser("analyze", parents=[net], help="network invariants").set_defaults(func=cmd_analyze)
    sub.add_parser("decompose", parents=[net], help="independent decomposition").set_defaults(func=cmd_decompose)
    sub.add_parser("check", parents=[net, solver], help="existence verdict").set_defaults(func=cmd_check)
    sub.add_parser("solve", parents=[net, solver], help="steady-state search").set_defaults(func=cmd_solve)

    ch = sub.add_parser("chain", parents=[common], help="reversible chain closed form")
    ch.add_argument("--n", type=int, help="number of reversible pairs (default: len(k))")
    ch.add_argument("--f", required=True, help="kinetic orders f0..fn, e.g. 1,1/2,2")
    ch.add_argument("--k", required=True, help="forward rate constants k0..k(n-1)")
    ch.add_argument("--kp", required=True, help="backward rate constants")
    ch.add_argument("--tau", type=float, default=1.0)
    ch.set_defaults(func=cmd_chain)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotReactantDetermined as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
