#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 16:52:38 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/cli.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/cli.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""jadm-bcd command line: generate, solve, check and bench.

Settings resolve as command-line flags > config file (key = value) > defaults.
"""

import argparse
import asyncio
import configparser
import copy
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .BcdSolver import BcdConfig, run_bcd
from .JacobiSolver import (
    SELECTIONS,
    STATUSES,
    RotationFamily,
    RunResult,
    StopRule,
    run_jacobi,
)
from .LineSearch import LineSearchParams
from .cost import JadmProblem, JointPoint
from .instances import InstanceSpec, generate_instance, initial_point
from .oracles import run_checks
from .storage import load_point, load_problem, save_point, save_problem, write_json
from .utils import JadmError, format_response

logger = logging.getLogger(__name__)

ALGORITHMS = (
    "bcd-glu",
    "bcd-glq",
    "bcd-clu",
    "bcd-clq",
    "jacobi-glu",
    "jacobi-glq",
    "jacobi-clu",
    "jacobi-clq",
)

# Default configuration
DEFAULT_CONFIG = {
    "solver": {
        "algo": "bcd-glu",
        "init": "identity",
        "upsilon": 0.5,
    },
    "rotation": {
        "epsilon": None,  # 0.5 * sqrt(bound) for the family and m
        "sigma_var": 0.1,
        "epsilon_inner": 0.1,
        "selection": "decrease",
    },
    "linesearch": {
        "delta_s": 0.5,
        "delta_w": 1e-4,
        "tau": 0.5,
        "t_init": 1.0,
        "max_backtracks": 50,
        "warm_start": False,
    },
    "stop": {
        "max_iters": 5000,
        "grad_tol": None,  # 1e-10 * (1 + f0)
        "norm_cap": 1e6,
    },
    "instance": {
        "n": 6,
        "m": 4,
        "L": 5,
        "dagger": "H",
        "noise": 0.0,
        "seed": 0,
        "spread": 0.1,
        "real": False,
    },
    "bench": {
        "trials": 10,
        "jobs": 4,
    },
}


def _coerce(value: str) -> Any:
    text = value.strip()
    lowered = text.lower()
    if lowered in ("none", "null", ""):
        return None
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text.strip("'\"")


def parse_config_text(text: str) -> Dict[str, Any]:
    """Flat {key: value} from `key = value` lines, optional [section] headers."""
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#",), comment_prefixes=("#", ";"), interpolation=None
    )
    parser.optionxform = str
    parser.read_string("[DEFAULT]\n" + text)
    flat: Dict[str, Any] = {}
    for key, value in parser.defaults().items():
        flat[key.split(".")[-1].replace("-", "_")] = _coerce(value)
    for section in parser.sections():
        for key in parser[section]:
            if key in parser.defaults():
                continue
            flat[key.split(".")[-1].replace("-", "_")] = _coerce(parser[section][key])
    return flat


def load_config(config_path: Optional[str] = None) -> Dict[str, Dict[str, Any]]:
    """Load configuration from file or use defaults."""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if config_path and Path(config_path).exists():
        try:
            user = parse_config_text(Path(config_path).read_text())
            for key, value in user.items():
                section = next((s for s, v in config.items() if key in v), None)
                if section is None:
                    logger.warning(f"Unknown config key {key!r} in {config_path}; ignored")
                    continue
                config[section][key] = value
            logger.info(f"Loaded configuration from {config_path}")
        except (OSError, configparser.Error) as e:
            logger.warning(f"Failed to load config from {config_path}: {e}, using defaults")
    elif config_path:
        logger.warning(f"Config file {config_path} not found, using defaults")
    else:
        logger.debug("Using default configuration")
    return config


def flatten(config: Dict[str, Dict[str, Any]]) -> Dict[str, Any]:
    return {k: v for section in config.values() for k, v in section.items()}


# ---------------------------------------------------------------- solving


def _opt_float(text: str) -> Optional[float]:
    return None if text.lower() == "none" else float(text)


def solver_options(args: argparse.Namespace) -> Dict[str, Any]:
    keys = [k for section in DEFAULT_CONFIG for k in DEFAULT_CONFIG[section]]
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def solve_problem(problem: JadmProblem, omega0: JointPoint, opts: Dict[str, Any]) -> RunResult:
    algo = opts.get("algo", "bcd-glu")
    if algo not in ALGORITHMS:
        raise JadmError(f"Unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
    driver, family_name = algo.split("-")
    family = RotationFamily(
        family_name.upper(),
        epsilon=opts.get("epsilon"),
        sigma_var=opts.get("sigma_var", 0.1),
        epsilon_inner=opts.get("epsilon_inner", 0.1),
        selection=opts.get("selection", "decrease"),
    )
    stop = StopRule(
        grad_tol=opts.get("grad_tol"),
        max_iters=int(opts.get("max_iters", 5000)),
        norm_cap=opts.get("norm_cap", 1e6),
    )
    if driver == "jacobi":
        result = run_jacobi(problem, omega0, family, stop)
    else:
        params = LineSearchParams(
            delta_s=opts.get("delta_s", 0.5),
            delta_w=opts.get("delta_w", 1e-4),
            tau=opts.get("tau", 0.5),
            t_init=opts.get("t_init", 1.0),
            max_backtracks=int(opts.get("max_backtracks", 50)),
            warm_start=bool(opts.get("warm_start", False)),
        )
        config = BcdConfig(opts.get("upsilon", 0.5), family, stop, params)
        result = run_bcd(problem, omega0, config)
    result.config.update({k: v for k, v in opts.items() if k not in result.config})
    return result


def starting_point(problem: JadmProblem, init: str, seed: int, init_file: Optional[str]) -> JointPoint:
    if init == "file":
        if not init_file:
            raise JadmError("--init file requires --init-file")
        return load_point(init_file)
    return initial_point(init, problem.n, problem.m, seed)


# ---------------------------------------------------------------- commands


def cmd_generate(args: argparse.Namespace) -> int:
    spec = InstanceSpec(
        n=args.n, m=args.m, L=args.L, dagger=args.dagger,
        structured=not args.unstructured, noise=args.noise, seed=args.seed,
        spread=args.spread, real=args.real,
    )
    problem, truth = generate_instance(spec)
    save_problem(problem, args.out)
    if args.truth:
        save_point(truth, args.truth)
    print(json.dumps({"problem": str(args.out), "spec": spec.to_dict()}))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    problem = load_problem(args.problem)
    omega0 = starting_point(problem, args.init, args.seed, args.init_file)
    result = solve_problem(problem, omega0, solver_options(args))
    if args.trace:
        result.trace.save_csv(args.trace)
    if args.report:
        write_json(result.report(), args.report)
    if args.point_out:
        save_point(result.omega, args.point_out)
    print(json.dumps({
        "status": result.status,
        "iterations": result.iterations,
        "final_cost": result.final_cost,
        "final_grad": result.final_grad["grad_f"],
    }))
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    problem = load_problem(args.problem)
    if args.point:
        omega = load_point(args.point)
    else:
        omega = starting_point(problem, args.init, args.seed, None)
    results = run_checks(
        problem, omega, seed=args.seed, n_directions=args.directions, step=args.step
    )
    if args.out:
        write_json(results, args.out)
    print(json.dumps(results, indent=2, default=float))
    return 0 if results["passed"] else 1


def run_trial(bench_spec: Dict[str, Any], trial: int) -> Dict[str, Any]:
    """Generate, solve and summarize one seeded trial."""
    try:
        inst = dict(bench_spec.get("instance", {}))
        inst["seed"] = int(inst.get("seed", 0)) + trial
        spec = InstanceSpec.from_dict(inst)
        problem, _ = generate_instance(spec)
        opts = flatten(copy.deepcopy(DEFAULT_CONFIG))
        opts.update(bench_spec.get("solver", {}))
        omega0 = initial_point(opts.get("init", "identity"), spec.n, spec.m, spec.seed, spec.real)
        result = solve_problem(problem, omega0, opts)
        return format_response(True, {
            "trial": trial,
            "seed": spec.seed,
            "status": result.status,
            "iterations": result.iterations,
            "initial_cost": result.trace.rows[0].f,
            "final_cost": result.final_cost,
            "final_grad": result.final_grad["grad_f"],
            "tail_movement": result.trace.tail_movement(0.1),
            "violations": result.trace.violations(),
            "wall_time": result.wall_time,
        })
    except Exception as e:
        logger.error(f"Trial {trial} failed: {e}")
        return format_response(False, error=f"trial {trial}: {e}")


async def run_bench(bench_spec: Dict[str, Any], trials: int, jobs: int) -> Dict[str, Any]:
    """Run trials concurrently in worker threads, at most `jobs` at a time."""
    semaphore = asyncio.Semaphore(max(1, jobs))

    async def one(trial: int) -> Dict[str, Any]:
        async with semaphore:
            return await asyncio.to_thread(run_trial, bench_spec, trial)

    responses = await asyncio.gather(*(one(k) for k in range(trials)))
    return aggregate(responses)


def aggregate(responses: List[Dict[str, Any]]) -> Dict[str, Any]:
    done = [r["result"] for r in responses if r["success"]]
    failed = [r["error"] for r in responses if not r["success"]]
    counts = {s: sum(1 for d in done if d["status"] == s) for s in STATUSES}
    summary: Dict[str, Any] = {"trials": len(responses), "failed": failed, "status_counts": counts}
    if done:
        summary.update(
            median_iterations=float(np.median([d["iterations"] for d in done])),
            max_final_cost=max(d["final_cost"] for d in done),
            max_final_grad=max(d["final_grad"] for d in done),
            max_tail_movement=max(d["tail_movement"] for d in done),
            violations={
                k: sum(d["violations"][k] for d in done) for k in done[0]["violations"]
            },
        )
    summary["results"] = done
    return summary


def cmd_bench(args: argparse.Namespace) -> int:
    bench_spec: Dict[str, Any] = {"instance": {}, "solver": {}}
    if args.spec:
        with open(args.spec, "r") as f:
            bench_spec.update(json.load(f))
    summary = asyncio.run(run_bench(bench_spec, args.trials, args.jobs))
    if args.out:
        write_json(summary, args.out)
    printable = {k: v for k, v in summary.items() if k != "results"}
    print(json.dumps(printable, indent=2))
    return 0 if not summary["failed"] else 1


# ---------------------------------------------------------------- parser


def _add_solver_args(p: argparse.ArgumentParser, d: Dict[str, Any]) -> None:
    p.add_argument("--algo", choices=ALGORITHMS, default=d["algo"], help="Solver")
    p.add_argument("--init", choices=("random", "identity", "file"), default=d["init"],
                   help="Starting point")
    p.add_argument("--init-file", default=None, help="JSON point for --init file")
    p.add_argument("--seed", type=int, default=d["seed"], help="Seed of the init stream")
    p.add_argument("--max-iters", type=int, default=d["max_iters"], help="Iteration cap")
    p.add_argument("--grad-tol", type=_opt_float, default=d["grad_tol"],
                   help="Stationarity tolerance (None: 1e-10 * (1 + f0))")
    p.add_argument("--norm-cap", type=float, default=d["norm_cap"],
                   help="Divergence monitor on ||omega||")
    p.add_argument("--upsilon", type=float, default=d["upsilon"], help="Block threshold")
    p.add_argument("--epsilon", type=_opt_float, default=d["epsilon"],
                   help="Selection threshold (None: half the guaranteed bound)")
    p.add_argument("--sigma-var", type=float, default=d["sigma_var"],
                   help="Diagonal-rotation clamp parameter, in (0, 1/4)")
    p.add_argument("--epsilon-inner", type=float, default=d["epsilon_inner"],
                   help="Plane-rotation eigenvector acceptance threshold")
    p.add_argument("--selection", choices=SELECTIONS, default=d["selection"],
                   help="Greedy rule among admissible rotations")
    p.add_argument("--delta-s", type=float, default=d["delta_s"], help="Direction quality")
    p.add_argument("--delta-w", type=float, default=d["delta_w"], help="Armijo constant")
    p.add_argument("--tau", type=float, default=d["tau"], help="Backtracking factor")
    p.add_argument("--t-init", type=float, default=d["t_init"], help="Initial step")
    p.add_argument("--max-backtracks", type=int, default=d["max_backtracks"],
                   help="Backtracking limit")
    p.add_argument("--warm-start", action="store_true", default=d["warm_start"],
                   help="Start each search at min(t_init, t_prev / tau)")


def build_parser(defaults: Optional[Dict[str, Any]] = None) -> argparse.ArgumentParser:
    d = defaults or flatten(DEFAULT_CONFIG)
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="jadm-bcd",
        description="Joint approximate diagonalization by BCD and Jacobi-type solvers",
        formatter_class=fmt,
    )
    parser.add_argument("--config", "-c", help="Configuration file (key = value)")
    parser.add_argument("--debug", "-d", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write a random instance", formatter_class=fmt)
    gen.add_argument("--n", type=int, default=d["n"], help="Ambient dimension")
    gen.add_argument("--m", type=int, default=d["m"], help="Number of columns")
    gen.add_argument("--L", type=int, default=d["L"], help="Number of matrices")
    gen.add_argument("--dagger", choices=("H", "T"), default=d["dagger"], help="Dagger mode")
    gen.add_argument("--noise", type=float, default=d["noise"], help="Noise level")
    gen.add_argument("--seed", type=int, default=d["seed"], help="Instance seed")
    gen.add_argument("--spread", type=float, default=d["spread"],
                     help="Lower bound of |D| entries")
    gen.add_argument("--real", action="store_true", default=d["real"], help="Real data")
    gen.add_argument("--unstructured", action="store_true",
                     help="Skip Hermitian/complex-symmetric structure")
    gen.add_argument("--out", required=True, help="Problem JSON to write")
    gen.add_argument("--truth", default=None, help="Also write the ground-truth point")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="Run a solver on a problem file", formatter_class=fmt)
    solve.add_argument("--problem", required=True, help="Problem JSON")
    _add_solver_args(solve, d)
    solve.add_argument("--trace", default=None, help="Trace CSV to write")
    solve.add_argument("--report", default=None, help="Report JSON to write")
    solve.add_argument("--point-out", default=None, help="Final point JSON to write")
    solve.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="Run the oracle suite at a point", formatter_class=fmt)
    check.add_argument("--problem", required=True, help="Problem JSON")
    check.add_argument("--point", default=None, help="Point JSON (default: --init)")
    check.add_argument("--init", choices=("random", "identity"), default=d["init"],
                       help="Point used when --point is absent")
    check.add_argument("--seed", type=int, default=d["seed"], help="Seed for directions")
    check.add_argument("--directions", type=int, default=20, help="Random directions")
    check.add_argument("--step", type=float, default=1e-5, help="Finite-difference step")
    check.add_argument("--out", default=None, help="Results JSON to write")
    check.set_defaults(func=cmd_check)

    bench = sub.add_parser("bench", help="Run seeded trials in parallel", formatter_class=fmt)
    bench.add_argument("--spec", default=None,
                       help='JSON {"instance": {...}, "solver": {...}}')
    bench.add_argument("--trials", type=int, default=d["trials"], help="Number of trials")
    bench.add_argument("--jobs", type=int, default=d["jobs"], help="Concurrent workers")
    bench.add_argument("--out", default=None, help="Summary JSON to write")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for jadm-bcd."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", "-c")
    pre.add_argument("--debug", "-d", action="store_true")
    known, _ = pre.parse_known_args(argv)

    # Setup logging
    level = logging.DEBUG if known.debug else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    config = load_config(known.config)
    args = build_parser(flatten(config)).parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return 130
    except (JadmError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

# python -m jadm_bcd.cli solve --problem problem.json --algo bcd-glq --trace trace.csv

# EOF
