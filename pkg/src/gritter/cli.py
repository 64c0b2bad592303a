"""Command line front end.

Subcommands cover the whole workflow: generate an instance, solve it,
certify lower bounds, check a solution document, print a car's tour,
or export GeoJSON for a map viewer.

Exit codes: 0 success, 1 usage or data error, 2 no feasible solution
(solve), 3 infeasible solution document (check).
"""

from __future__ import annotations

import argparse
import sys
import time

from gritter.bounds import (
    connectivity_cut_bound,
    joint_cut_bound,
    multi_car_bound,
    trivial_car_bound,
)
from gritter.construct import NoFeasibleSolutionError
from gritter.generator import GeneratorParams, case_study_params, generate_instance
from gritter.io import (
    bound_to_dict,
    export_geojson,
    parse_instance,
    parse_solution,
    write_instance,
    write_solution,
)
from gritter.model import GritterError, Method
from gritter.plans import check_feasible, plan_to_tour
from gritter.waves import SolverConfig, solve

import json


def _write_out(data: bytes, path):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _read(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _limit_m(args, defaults) -> int:
    km = args.limit if args.limit is not None else defaults["limit_km"]
    if km <= 0:
        raise GritterError(f"limit must be positive, got {km}")
    return round(km * 1000)


def _cmd_solve(args) -> int:
    net, defaults = parse_instance(_read(args.instance))
    limit_m = _limit_m(args, defaults)
    cfg = SolverConfig(
        limit_m=limit_m,
        combo_cap=args.combo_cap,
        stall_limit=args.stall,
        seed=args.seed,
    )
    try:
        sol, stats = solve(net, cfg)
    except NoFeasibleSolutionError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    doc = write_solution(
        net,
        sol,
        limit_m,
        include_tours=args.tours,
        timing=stats.wall_time,
    )
    _write_out(doc, args.out)
    return 0


def _cmd_bound(args) -> int:
    net, defaults = parse_instance(_read(args.instance))
    limit_m = _limit_m(args, defaults)
    entries = []
    if args.model == "trivial":
        t0 = time.perf_counter()
        cars = trivial_car_bound(net, limit_m)
        entries.append(
            {
                "kind": "trivial",
                "cars": cars,
                "status": "optimal",
                "seconds": round(time.perf_counter() - t0, 3),
            }
        )
    elif args.model == "separate":
        for target in (Method.CHEMICAL, Method.INERT):
            entries.append(bound_to_dict(connectivity_cut_bound(net, target)))
    elif args.model == "joint":
        entries.append(bound_to_dict(joint_cut_bound(net)))
    else:  # multicar
        if args.chem is None or args.inert is None:
            raise GritterError("--model multicar requires --chem and --inert")
        report = multi_car_bound(net, args.chem, args.inert, limit_m)
        if report is None:
            print(
                "variable cap exceeded: instance too large for the multicar model",
                file=sys.stderr,
            )
            return 1
        entries.append(bound_to_dict(report))
    doc = (json.dumps({"bounds": entries}, sort_keys=True, indent=2) + "\n").encode()
    _write_out(doc, args.out)
    return 0


def _cmd_check(args) -> int:
    net, defaults = parse_instance(_read(args.instance))
    limit_m = _limit_m(args, defaults)
    sol = parse_solution(_read(args.solution), net)
    violations = check_feasible(net, sol, limit_m)
    for v in violations:
        print(v)
    if violations:
        return 3
    print(f"feasible: {len(sol.plans)} plans cover all roads within limit")
    return 0


def _cmd_generate(args) -> int:
    if args.preset == "case-study":
        params = case_study_params(seed=args.seed)
    else:
        params = GeneratorParams(
            vertices=args.vertices, edges=args.edges, seed=args.seed
        )
    net = generate_instance(params)
    _write_out(write_instance(net), args.out)
    return 0


def _cmd_tour(args) -> int:
    net, _ = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution), net)
    for plan in sol.plans:
        if plan.car == args.car:
            break
    else:
        raise GritterError(f"unknown car {args.car!r}")
    for step in plan_to_tour(net, plan):
        print(f"{step.action:9s} {step.road}  {step.frm} -> {step.to}")
    return 0


def _cmd_geojson(args) -> int:
    net, _ = parse_instance(_read(args.instance))
    sol = None
    if args.solution:
        sol = parse_solution(_read(args.solution), net)
    _write_out(export_geojson(net, sol), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gritter",
        description="winter road maintenance routing: solve, bound, check",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a maintenance solution")
    p.add_argument("instance")
    p.add_argument("--limit", type=float, default=None, help="per-car km limit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stall", type=int, default=4, help="waves without improvement before stopping")
    p.add_argument("--combo-cap", type=int, default=1000, dest="combo_cap")
    p.add_argument("--tours", action="store_true", help="include tours in the output")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bound", help="certified lower bounds")
    p.add_argument("instance")
    p.add_argument(
        "--model",
        choices=["trivial", "separate", "joint", "multicar"],
        default="separate",
    )
    p.add_argument("--chem", type=int, default=None)
    p.add_argument("--inert", type=int, default=None)
    p.add_argument("--limit", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("check", help="verify a solution document")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--limit", type=float, default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("generate", help="generate a synthetic instance")
    p.add_argument("--vertices", type=int, default=100)
    p.add_argument("--edges", type=int, default=150)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--preset", choices=["case-study"], default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("tour", help="print one car's traversal order")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--car", required=True)
    p.set_defaults(func=_cmd_tour)

    p = sub.add_parser("geojson", help="export network and plans for map viewers")
    p.add_argument("instance")
    p.add_argument("solution", nargs="?", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_geojson)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GritterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
