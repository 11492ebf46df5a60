"""Command-line front end.

Subcommands: solve (average-cost MDP), evaluate (closed-form metrics at a
given threshold pair), optimize (grid/descent search over thresholds),
simulate (Monte Carlo), sweep (energy-grid study with CSV + SVG output) and
verify (cross-route consistency report).

Parameters may come from a JSON config file (--params) and/or individual
flags; flags win over the file. Exit codes: 0 success, 1 failed verification
checks, 2 invalid parameters or malformed config, 3 solver non-convergence,
4 policy structure violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .model import ModelParams, ParameterError, ThresholdPolicy
from .optimize import (
    BoundaryOptimum,
    find_optimum,
    grid_values,
    optimize_descent,
)
from .simulate import SimConfig, simulate
from .solver import (
    NoConvergence,
    NotThreshold,
    SolverConfig,
    check_monotone,
    extract_thresholds,
    rvi_solve,
)
from .steady_state import evaluate_policy
from .sweep import OUTPUT_KINDS, SweepSpec, fmt_num, run_sweep
from .verify import run_verification

__all__ = ["create_parser", "main"]

PARAM_KEYS = ("r0", "r1", "rho", "p", "q", "lambda1", "lambda2")

# Config-file keys that mirror command-line flags (flags win over the file).
SETTING_KEYS = ("f_mode", "n1", "n2", "s_max", "tol", "max_iter", "horizon",
                "burn_in", "seed", "n_max", "jobs", "lambda1_grid",
                "lambda2_grid", "outputs")


def _threshold(text: str):
    """Parse one threshold flag: a non-negative integer or the string inf."""
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold {text!r} is not an "
                                         "integer or 'inf'") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"threshold {value} is negative")
    return value


def _grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected "
                                         "comma-separated numbers") from None


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--params", metavar="FILE",
                     help="JSON config file; flags override its entries")
    for key in PARAM_KEYS:
        sub.add_argument(f"--{key}", type=float, default=None)
    sub.add_argument("--f-mode", choices=("kernel", "paper-literal"),
                     default=None, dest="f_mode",
                     help="which state-0 growth constant the closed forms use")


def _add_threshold_flags(sub: argparse.ArgumentParser, required: bool) -> None:
    sub.add_argument("--n1", type=_threshold, default=None, required=required,
                     help="compressed-transmission threshold (int or inf)")
    sub.add_argument("--n2", type=_threshold, default=None, required=required,
                     help="uncompressed-transmission threshold (int or inf)")


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aosisched",
        description="Threshold scheduling for the age of system instability: "
                    "MDP solver, closed forms, optimizer, simulator.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("solve", help="relative value iteration")
    _add_param_flags(sp)
    sp.add_argument("--s-max", type=int, default=None, dest="s_max")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    sp.add_argument("--out", metavar="DIR",
                    help="write solve.json and value_function.csv here")

    sp = subs.add_parser("evaluate", help="closed-form metrics at (n1, n2)")
    _add_param_flags(sp)
    _add_threshold_flags(sp, required=False)
    sp.add_argument("--out", metavar="DIR", help="write evaluate.json here")

    sp = subs.add_parser("optimize", help="minimize F over threshold pairs")
    _add_param_flags(sp)
    sp.add_argument("--n-max", type=int, default=None, dest="n_max")
    sp.add_argument("--method", choices=("exhaustive", "descent"),
                    default="exhaustive")
    sp.add_argument("--out", metavar="DIR", help="write f_grid.csv here")

    sp = subs.add_parser("simulate", help="Monte Carlo estimate at (n1, n2)")
    _add_param_flags(sp)
    _add_threshold_flags(sp, required=False)
    sp.add_argument("--horizon", type=int, default=None)
    sp.add_argument("--burn-in", type=int, default=None, dest="burn_in")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", metavar="DIR", help="write simulate.json here")

    sp = subs.add_parser("sweep", help="optimize over an energy grid")
    _add_param_flags(sp)
    sp.add_argument("--lambda1-grid", type=_grid, default=None,
                    dest="lambda1_grid", metavar="A,B,...")
    sp.add_argument("--lambda2-grid", type=_grid, default=None,
                    dest="lambda2_grid", metavar="A,B,...")
    sp.add_argument("--outputs", default=None,
                    help="comma list from: " + ",".join(OUTPUT_KINDS))
    sp.add_argument("--n-max", type=int, default=None, dest="n_max")
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--no-svg", action="store_true")
    sp.add_argument("--out", metavar="DIR", required=True)

    sp = subs.add_parser("verify", help="cross-route consistency checks")
    _add_param_flags(sp)
    sp.add_argument("--horizon", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--s-max", type=int, default=None, dest="s_max")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--n-max", type=int, default=None, dest="n_max")
    sp.add_argument("--out", metavar="DIR", help="write verify.json here")

    return parser


def _load_config(args: argparse.Namespace) -> dict:
    """Read the --params JSON document and fold it under the flags."""
    config: dict = {}
    if args.params:
        with open(args.params, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ParameterError("config file must hold a JSON object")
    for key in SETTING_KEYS:
        if getattr(args, key, None) is None and key in config:
            value = config[key]
            if key in ("n1", "n2") and isinstance(value, str):
                value = _threshold(value)
            setattr(args, key, value)
    return config


def _build_params(args: argparse.Namespace, config: dict,
                  default_lambdas: bool = False) -> ModelParams:
    fields = {}
    for key in PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            fields[key] = flag
        elif key in config:
            fields[key] = config[key]
        elif default_lambdas and key in ("lambda1", "lambda2"):
            fields[key] = 0.0
    missing = [k for k in PARAM_KEYS if k not in fields]
    if missing:
        raise ParameterError("missing parameters: " + ", ".join(missing))
    f_mode = getattr(args, "f_mode", None)
    if f_mode is not None:
        fields["f_mode"] = str(f_mode).replace("-", "_")
    return ModelParams(**fields)


def _policy_from_args(args: argparse.Namespace) -> ThresholdPolicy:
    if args.n1 is None or args.n2 is None:
        raise ParameterError("both --n1 and --n2 are required (int or inf)")
    return ThresholdPolicy(args.n1, args.n2)


def _print_kv(key: str, value) -> None:
    if isinstance(value, float):
        print(f"{key} = {fmt_num(value)}")
    else:
        print(f"{key} = {value}")


def _write_json(out_dir: str, name: str, payload: dict) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    kwargs = {}
    if getattr(args, "s_max", None) is not None:
        kwargs["s_max"] = int(args.s_max)
    if getattr(args, "tol", None) is not None:
        kwargs["tol"] = float(args.tol)
    if getattr(args, "max_iter", None) is not None:
        kwargs["max_iter"] = int(args.max_iter)
    return SolverConfig(**kwargs)


def cmd_solve(args: argparse.Namespace) -> int:
    params = _build_params(args, _load_config(args))
    result = rvi_solve(params, _solver_config(args))
    n = extract_thresholds(result)
    monotone, first_bad = check_monotone(result)
    _print_kv("theta", result.theta)
    _print_kv("n1", fmt_num(float(n.n1)))
    _print_kv("n2", fmt_num(float(n.n2)))
    _print_kv("monotone", "true" if monotone else f"false (state {first_bad})")
    _print_kv("iterations", result.iterations)
    _print_kv("span_residual", result.span_residual)
    if args.out:
        payload = result.to_json_dict()
        payload["monotone"] = bool(monotone)
        _write_json(args.out, "solve.json", payload)
        path = os.path.join(args.out, "value_function.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("s,V,action\n")
            for s, (value, act) in enumerate(zip(result.v, result.policy)):
                fh.write(f"{s},{fmt_num(float(value))},{int(act)}\n")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    params = _build_params(args, _load_config(args))
    policy = _policy_from_args(args)
    report = evaluate_policy(params, policy)
    _print_kv("n1", fmt_num(float(policy.n1)))
    _print_kv("n2", fmt_num(float(policy.n2)))
    _print_kv("avg_aosi", report.avg_aosi)
    _print_kv("frac_compressed", report.frac_compressed)
    _print_kv("frac_uncompressed", report.frac_uncompressed)
    _print_kv("objective", report.objective)
    if args.out:
        _write_json(args.out, "evaluate.json", {
            "n1": "inf" if math.isinf(policy.n1) else policy.n1,
            "n2": "inf" if math.isinf(policy.n2) else policy.n2,
            "avg_aosi": report.avg_aosi,
            "frac_compressed": report.frac_compressed,
            "frac_uncompressed": report.frac_uncompressed,
            "objective": report.objective,
        })
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    params = _build_params(args, _load_config(args))
    n_max = int(args.n_max) if args.n_max is not None else 200
    if args.method == "descent":
        result = optimize_descent(params, n_max=n_max)
    else:
        result = find_optimum(params, n_max=n_max)
    _print_kv("n1", fmt_num(float(result.best.n1)))
    _print_kv("n2", fmt_num(float(result.best.n2)))
    _print_kv("F_star", result.f_value)
    _print_kv("evaluations", result.evaluations)
    _print_kv("method", result.method)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "f_grid.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("n1,n2,F\n")
            for n1, n2, f in grid_values(params, n_max):
                fh.write(f"{fmt_num(n1)},{fmt_num(n2)},{fmt_num(f)}\n")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _build_params(args, _load_config(args))
    policy = _policy_from_args(args)
    kwargs = {"horizon": int(args.horizon) if args.horizon else 1_000_000}
    if args.burn_in is not None:
        kwargs["burn_in"] = int(args.burn_in)
    if args.seed is not None:
        kwargs["seed"] = int(args.seed)
    est = simulate(params, policy, SimConfig(**kwargs))
    _print_kv("avg_cost", est.avg_cost)
    _print_kv("avg_aosi", est.avg_aosi)
    _print_kv("frac_compressed", est.frac_compressed)
    _print_kv("frac_uncompressed", est.frac_uncompressed)
    _print_kv("se_cost", est.se_cost)
    _print_kv("se_aosi", est.se_aosi)
    if args.out:
        _write_json(args.out, "simulate.json", est.to_json_dict())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    params = _build_params(args, config, default_lambdas=True)
    outputs = args.outputs
    if isinstance(outputs, str):
        outputs = [tok.strip() for tok in outputs.split(",") if tok.strip()]
    spec_kwargs = {"base": params}
    if args.lambda1_grid is not None:
        spec_kwargs["lambda1_grid"] = args.lambda1_grid
    if args.lambda2_grid is not None:
        spec_kwargs["lambda2_grid"] = args.lambda2_grid
    if outputs:
        spec_kwargs["outputs"] = outputs
    if args.n_max is not None:
        spec_kwargs["n_max"] = int(args.n_max)
    spec = SweepSpec(**spec_kwargs)
    jobs = int(args.jobs) if args.jobs is not None else 1
    result = run_sweep(spec, args.out, jobs=jobs, svg=not args.no_svg)
    print(f"cells = {len(result.rows)}")
    print(f"failures = {len(result.failures)}")
    for path in result.files:
        print(f"wrote {path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    params = _build_params(args, _load_config(args))
    kwargs = {}
    if args.horizon is not None:
        kwargs["horizon"] = int(args.horizon)
    if args.seed is not None:
        kwargs["seed"] = int(args.seed)
    if args.s_max is not None:
        kwargs["s_max"] = int(args.s_max)
    if args.tol is not None:
        kwargs["tol"] = float(args.tol)
    if args.n_max is not None:
        kwargs["n_max"] = int(args.n_max)
    report = run_verification(params, **kwargs)
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        _write_json(args.out, "verify.json", report)
    return 0 if report["passed"] else 1


COMMANDS = {
    "solve": cmd_solve,
    "evaluate": cmd_evaluate,
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParameterError, json.JSONDecodeError, FileNotFoundError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BoundaryOptimum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NotThreshold as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
