"""Command-line driver: solve, downsize, reduce, pof, gen, check.

Every run that writes an output file also writes a ``<out>.manifest.json``
sidecar recording the command line, input-file hashes, tool version, seed,
and wall time; data files themselves contain nothing nondeterministic, so
rerunning a manifest's command reproduces the bytes. ``--verify`` recomputes
the output in-process (and diffs against a pre-existing file) before
writing. Exit codes: 0 success, 1 I/O failure, 2 precondition or input
error; errors print a single ``error: <kind>: <reason>`` line to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .core import (
    CLASSIFY_CAP,
    ContractsError,
    InputError,
    ceil_tol,
    classify,
    floor_tol,
    mask_of,
    payment,
)
from .corpora import (
    random_additive_instance,
    random_submodular_instance,
    random_xos_instance,
)
from .downsizing import DownsizeParams, downsize_submodular, downsize_xos
from .frugality import (
    PofQuery,
    gen_additive_lb,
    gen_profit_lb_k,
    gen_profit_lb_two,
    gen_subadditive_lb,
    gen_xos_separation,
    pof,
    value_payment_curve,
)
from .objectives import PROFIT, REWARD, WELFARE, check_best_conditions
from .reductions import SOLVERS, equivalence_pipeline
from .serialize import (
    RunManifest,
    file_sha256,
    instance_to_dict,
    jsonable,
    load_instance,
    objective_from_name,
    parse_objective_at_budget,
    team_to_list,
    write_manifest,
)
from .solvers import brute_force_max, fptas_additive_profit, knapsack_fptas


def _fmt(x) -> str:
    if x is None:
        return "undefined"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--instance", help="instance JSON file")
    sub.add_argument("--out", help="output file (stdout when omitted)")
    sub.add_argument("--seed", type=int, default=None, help="seed for random families")
    sub.add_argument("--threads", type=int, default=1, help="parallel grid cells")
    sub.add_argument(
        "--verify",
        action="store_true",
        help="recompute the output and diff before writing",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgeted-contracts",
        description="budget-feasible multi-agent contract design toolkit",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("solve", help="maximize an objective under a budget")
    p.add_argument("--objective", default="profit", choices=["reward", "profit", "welfare"])
    p.add_argument("--budget", type=float, required=True)
    p.add_argument("--method", default="brute", choices=["brute", "fptas"])
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--light-only", action="store_true")
    _add_common(p)

    p = subs.add_parser("downsize", help="shrink a team's payment, keep value")
    p.add_argument("--set", required=True, help="comma-separated agent indices")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", default="submodular", choices=["submodular", "xos"])
    _add_common(p)

    p = subs.add_parser("reduce", help="solve one objective/budget via another")
    p.add_argument("--from", dest="from_spec", required=True, metavar="OBJ@B")
    p.add_argument("--to", dest="to_spec", required=True, metavar="OBJ@B")
    p.add_argument("--solver", default="brute", choices=sorted(SOLVERS))
    p.add_argument("--path", default="xos", choices=["xos", "submodular"])
    _add_common(p)

    p = subs.add_parser("pof", help="price-of-frugality sweep over a family")
    p.add_argument(
        "--family",
        required=True,
        choices=["additive-lb", "xos-sep", "subadd-lb", "profit-2", "profit-k"],
    )
    p.add_argument("--grid", help="b-grid, e.g. b=0.1:0.9:0.1")
    p.add_argument("--b", type=float, help="single small budget")
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--k", type=int, default=None, help="team size for profit-k")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--objective", default="reward", choices=["reward", "profit", "welfare"])
    p.add_argument("--emit-curve", action="store_true")
    _add_common(p)

    p = subs.add_parser("gen", help="write a generator instance to JSON")
    p.add_argument(
        "--family",
        required=True,
        choices=[
            "additive-lb",
            "xos-sep",
            "subadd-lb",
            "profit-2",
            "profit-k",
            "random-additive",
            "random-submodular",
            "random-xos",
        ],
    )
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--b", type=float, default=0.4)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--clauses", type=int, default=3)
    _add_common(p)

    p = subs.add_parser("check", help="classify a reward and verify objectives")
    _add_common(p)

    return parser


# ---------------------------------------------------------------------------
# subcommands; each returns {relative output name: text body}
# ---------------------------------------------------------------------------


def _require_instance(args) -> str:
    if not args.instance:
        raise InputError("this command needs --instance")
    return args.instance


def cmd_solve(args) -> dict[str, str]:
    inst = load_instance(_require_instance(args))
    obj = objective_from_name(args.objective)
    if args.light_only and args.method != "brute":
        raise InputError("--light-only is only supported with --method brute")
    if args.method == "brute":
        res = brute_force_max(obj, inst, args.budget, light_only=args.light_only)
    elif args.objective == "profit":
        res = fptas_additive_profit(inst, args.budget, args.epsilon)
    else:
        res = knapsack_fptas(inst, args.budget, args.epsilon, obj)
    body = jsonable(res)
    body["optimum"] = team_to_list(res.optimum)
    body["objective"] = args.objective
    body["method"] = args.method
    return {"": json.dumps(body, indent=2) + "\n"}


def cmd_downsize(args) -> dict[str, str]:
    inst = load_instance(_require_instance(args))
    try:
        team = mask_of(int(tok) for tok in args.set.split(",") if tok != "")
    except ValueError as exc:
        raise InputError(f"bad --set {args.set!r}") from exc
    check = inst.n <= CLASSIFY_CAP  # enforce class preconditions at desk scale
    if args.mode == "submodular":
        res = downsize_submodular(inst, team, DownsizeParams(args.m), check=check)
    else:
        res = downsize_xos(inst, team, args.m, check=check)
    body = jsonable(res)
    body["subset"] = team_to_list(res.subset)
    body["mode"] = args.mode
    body["m"] = args.m
    return {"": json.dumps(body, indent=2) + "\n"}


def cmd_reduce(args) -> dict[str, str]:
    inst = load_instance(_require_instance(args))
    obj_from, b_from = parse_objective_at_budget(args.from_spec)
    obj_to, b_to = parse_objective_at_budget(args.to_spec)
    outcome = equivalence_pipeline(
        inst, obj_from, b_from, obj_to, b_to, SOLVERS[args.solver], path=args.path
    )
    body = jsonable(outcome)
    body["candidate"] = team_to_list(outcome.candidate)
    body["from"] = args.from_spec
    body["to"] = args.to_spec
    return {"": json.dumps(body, indent=2) + "\n"}


def _parse_grid(spec: str) -> list[float]:
    try:
        name, _, rng = spec.partition("=")
        if name != "b":
            raise ValueError("grid variable must be b")
        start_s, stop_s, step_s = rng.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as exc:
        raise InputError(f"bad --grid {spec!r}, expected b=start:stop:step") from exc
    if step <= 0:
        raise InputError("grid step must be positive")
    out = []
    k = 0
    while start + k * step <= stop + 1e-12:
        out.append(round(start + k * step, 10))
        k += 1
    return out


def _pof_instance(args, b: float):
    fam = args.family
    if fam == "additive-lb":
        return gen_additive_lb(args.n, b, args.B)
    if fam == "xos-sep":
        return gen_xos_separation(b, args.B)
    if fam == "subadd-lb":
        return gen_subadditive_lb(args.n, b, args.B)
    if fam == "profit-2":
        eps = args.eps if args.eps is not None else min(0.01, (args.B - b) / 2)
        return gen_profit_lb_two(b, args.B, eps)
    k = args.k
    if k is None:
        k = min(floor_tol(1 / b + 0.5), ceil_tol(2 * args.B / b) - 1, args.n)
    eps = args.eps if args.eps is not None else min(0.01, (2 * args.B / k - b) / 2)
    return gen_profit_lb_k(b, args.B, k, eps)


def cmd_pof(args) -> dict[str, str]:
    if args.grid:
        grid = _parse_grid(args.grid)
    elif args.b is not None:
        grid = [args.b]
    else:
        raise InputError("pof needs --grid or --b")
    obj = objective_from_name(args.objective)

    def cell(b: float):
        try:
            inst = _pof_instance(args, b)
        except InputError:
            return None  # cell outside the family's validity range
        report = pof(inst, PofQuery(b=b, B=args.B, objective=obj))
        return inst, report

    workers = max(1, args.threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(cell, grid))
    else:
        cells = [cell(b) for b in grid]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["family", "n", "b", "B", "objective", "max_b", "max_B", "ratio", "bound", "tight"]
    )
    curves: list[tuple[float, str, float, float]] = []
    for b, got in zip(grid, cells):
        if got is None:
            continue
        inst, rep = got
        tight = rep.ratio is not None and abs(rep.ratio - rep.theoretical_bound) <= 1e-9
        writer.writerow(
            [
                args.family,
                inst.n,
                _fmt(rep.b),
                _fmt(rep.B),
                rep.objective,
                _fmt(rep.max_at_b),
                _fmt(rep.max_at_B),
                _fmt(rep.ratio),
                _fmt(rep.theoretical_bound),
                str(tight).lower(),
            ]
        )
        if args.emit_curve:
            for series, series_obj in (
                ("reward", REWARD),
                ("welfare", WELFARE),
            ):
                for pay, val in value_payment_curve(inst, series_obj):
                    curves.append((b, series, pay, val))
            for pay, val in value_payment_curve(inst, REWARD):
                curves.append((b, "profit_envelope", pay, (1 - pay) * val))

    out = {"": buf.getvalue()}
    if args.emit_curve:
        cbuf = io.StringIO()
        cwriter = csv.writer(cbuf, lineterminator="\n")
        cwriter.writerow(["family", "b", "B", "series", "payment", "value"])
        for b, series, pay, val in curves:
            cwriter.writerow([args.family, _fmt(b), _fmt(args.B), series, _fmt(pay), _fmt(val)])
        out["curve"] = cbuf.getvalue()
    return out


def cmd_gen(args) -> dict[str, str]:
    fam = args.family
    if fam in ("additive-lb", "xos-sep", "subadd-lb", "profit-2", "profit-k"):
        inst = _pof_instance(args, args.b)
    else:
        rng = random.Random(args.seed if args.seed is not None else 0)
        if fam == "random-additive":
            inst = random_additive_instance(rng, args.n)
        elif fam == "random-submodular":
            inst = random_submodular_instance(rng, args.n)
        else:
            inst = random_xos_instance(rng, args.n, args.clauses)
    return {"": json.dumps(instance_to_dict(inst), indent=2) + "\n"}


def cmd_check(args) -> dict[str, str]:
    inst = load_instance(_require_instance(args))
    classes = classify(inst.reward)
    body = {
        "n": inst.n,
        "monotone": classes.is_monotone,
        "submodular": classes.is_submodular,
        "subadditive": classes.is_subadditive,
        "best_conditions": {
            "reward": check_best_conditions(REWARD, inst),
            "profit": check_best_conditions(PROFIT, inst),
            "welfare": check_best_conditions(WELFARE, inst),
        },
        "empty_team_payment": payment(inst, 0),
    }
    return {"": json.dumps(body, indent=2) + "\n"}


_COMMANDS = {
    "solve": cmd_solve,
    "downsize": cmd_downsize,
    "reduce": cmd_reduce,
    "pof": cmd_pof,
    "gen": cmd_gen,
    "check": cmd_check,
}


def _out_path_for(args, key: str) -> str | None:
    if not args.out:
        return None
    if key == "":
        return args.out
    stem, dot, ext = args.out.rpartition(".")
    if not dot:
        return f"{args.out}.{key}"
    return f"{stem}.{key}.{ext}"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        outputs = _COMMANDS[args.command](args)
        if args.verify:
            if _COMMANDS[args.command](args) != outputs:
                raise InputError("verification failed: recomputation differs")
            for key, body in outputs.items():
                path = _out_path_for(args, key)
                if path is None:
                    continue
                try:
                    with open(path, "r", encoding="utf-8") as fh:
                        existing = fh.read()
                except FileNotFoundError:
                    continue
                if existing != body:
                    raise InputError(f"verification failed: {path} differs")
        hashes = {}
        if args.instance:
            hashes[args.instance] = file_sha256(args.instance)
        for key, body in outputs.items():
            path = _out_path_for(args, key)
            if path is None:
                sys.stdout.write(body)
                continue
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
            manifest = RunManifest(
                command=argv,
                instance_hashes=hashes,
                tool_version=__version__,
                seed=args.seed,
                wall_time_s=time.perf_counter() - start,
            )
            write_manifest(manifest, path)
        return 0
    except ContractsError as exc:
        kind = type(exc).__name__.removesuffix("Error").lower()
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
