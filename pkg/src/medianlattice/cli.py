"""Experiment command line: plan inspection, runs, sweeps, failure studies.

Subcommands
-----------
plan           Derive and print the plan for a config (optionally export the
               frequency index set as CSV).
run            Execute one seeded run and emit an error-report CSV row plus,
               optionally, the approximant as JSON.
sweep          Run a grid of (N, seed) pairs, emit all CSV rows and a
               log-log rate-fit summary.
failure-study  Estimate the empirical failure rate of the aggregation
               success event against the certificate eps2.

All subcommands read a JSON config (--config).  Exit codes: 0 on success,
2 on a config/validation error, 3 when an internal work budget is exceeded.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .algorithm import (
    _finite_or_none,
    alias_free_majority,
    approximant_to_json,
    build_plan,
    draw_rules,
    plan_to_dict,
    run,
    search_guaranteed_plan,
)
from .error_analysis import csv_header, csv_row, error_report, fit_rate
from .korobov import KorobovParams, WeightSequence
from .validation import BudgetExceededError
from .testfunctions import ProductDecay, SparsePolynomial

__all__ = ["main", "ConfigError"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3

# exhaustive failure studies enumerate all (N-1)^(d R) draw combinations;
# beyond this budget the study must be Monte Carlo
EXHAUSTIVE_STUDY_BUDGET = 10 ** 6


class ConfigError(Exception):
    """A config file failed validation; the message names the offending field."""


def _require(cfg: dict, key: str, types, what: str):
    if key not in cfg:
        raise ConfigError(f"config is missing required field '{key}' ({what})")
    val = cfg[key]
    if not isinstance(val, types):
        raise ConfigError(f"config field '{key}' must be {what}, got {val!r}")
    return val


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def build_params(cfg: dict) -> KorobovParams:
    d = _require(cfg, "d", int, "a positive integer dimension")
    alpha = _require(cfg, "alpha", (int, float), "a smoothness exponent > 1/2")
    gspec = cfg.get("gamma", {"kind": "explicit", "values": [1.0] * d})
    if not isinstance(gspec, dict) or "kind" not in gspec:
        raise ConfigError("config field 'gamma' must be an object with a 'kind'")
    kind = gspec["kind"]
    try:
        if kind == "explicit":
            gamma = WeightSequence.explicit(gspec["values"])
        elif kind == "polynomial":
            gamma = WeightSequence.polynomial(gspec["s"], d)
        elif kind == "geometric":
            gamma = WeightSequence.geometric(gspec["c"], d)
        else:
            raise ConfigError(f"unknown gamma kind {kind!r}")
        return KorobovParams(d, alpha, gamma)
    except KeyError as exc:
        raise ConfigError(f"gamma spec of kind {kind!r} is missing field {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_test_function(cfg: dict, params: KorobovParams):
    spec = cfg.get("test_function")
    if spec is None:
        raise ConfigError("config is missing required field 'test_function'")
    kind = spec.get("kind")
    try:
        if kind == "sparse":
            entries = spec["spectrum"]
            spectrum = {}
            for entry in entries:
                h, re, im = entry[0], float(entry[1]), float(entry[2])
                spectrum[tuple(int(v) for v in h)] = complex(re, im)
            return SparsePolynomial(params, spectrum, normalize=bool(spec.get("normalize", False)))
        if kind == "product-decay":
            return ProductDecay(
                params,
                s=float(spec["s"]),
                theta=float(spec.get("theta", 0.5)),
                normalize=bool(spec.get("normalize", True)),
            )
        if kind == "synthetic":
            # harness self-test: no function, sweep rows are injected directly
            return ("synthetic", float(spec.get("exponent", 1.0)))
        raise ConfigError(f"unknown test_function kind {kind!r}")
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad test_function spec: {exc}") from exc


def _plan_from_config(cfg: dict, params: KorobovParams, N=None):
    tau = _require(cfg, "tau", (int, float), "a positive number")
    R = _require(cfg, "R", int, "an odd integer > 1")
    if N is None:
        N = _require(cfg, "N", int, "an odd prime")
    try:
        return build_plan(params, tau, R, N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _seed_list(cfg: dict, override):
    if override is not None:
        return [int(override)]
    if "seeds" in cfg:
        seeds = cfg["seeds"]
        if isinstance(seeds, int):
            return list(range(seeds))
        if isinstance(seeds, list) and all(isinstance(s, int) for s in seeds):
            return [int(s) for s in seeds]
        raise ConfigError("config field 'seeds' must be an integer count or a list of integers")
    return [int(cfg.get("seed", 0))]


def _shifted(cfg: dict, args) -> bool:
    return bool(args.shifted or cfg.get("shifted", False))


def _p_list(cfg: dict) -> tuple:
    raw = cfg.get("p_list", [])
    if not isinstance(raw, list):
        raise ConfigError("config field 'p_list' must be a list of numbers > 2")
    out = []
    for p in raw:
        p = float(p)
        if not p > 2.0:
            raise ConfigError(f"p_list entries must exceed 2, got {p}")
        out.append(p)
    return tuple(out)


def _write_rows(rows, p_list, out_path):
    target = open(out_path, "w", newline="") if out_path else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(csv_header(p_list))
        writer.writerows(rows)
    finally:
        if out_path:
            target.close()


def cmd_plan(args) -> int:
    cfg = load_config(args.config)
    params = build_params(cfg)
    plan = _plan_from_config(cfg, params)
    doc = plan_to_dict(plan)
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.index_csv:
        plan.index_set.to_csv(args.index_csv)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    params = build_params(cfg)
    plan = _plan_from_config(cfg, params)
    f = build_test_function(cfg, params)
    if isinstance(f, tuple):
        raise ConfigError("the synthetic test function only applies to 'sweep'")
    seed = _seed_list(cfg, args.seed)[0]
    shifted = _shifted(cfg, args)
    p_list = _p_list(cfg)
    report = error_report(f, plan, seed, shifted, p_list, cfg.get("grid"))
    _write_rows([csv_row(report, p_list)], p_list, args.out)
    approx_path = args.approximant or cfg.get("output")
    if approx_path:
        approx = run(f, plan, seed, shifted)
        with open(approx_path, "w") as fh:
            fh.write(approximant_to_json(approx) + "\n")
    return EXIT_OK


def _sweep_one(cfg: dict, N: int, seed: int, shifted: bool):
    """Worker for one (N, seed) cell; rebuilt from the config dict so it can
    cross a process boundary."""
    params = build_params(cfg)
    plan = _plan_from_config(cfg, params, N=N)
    f = build_test_function(cfg, params)
    p_list = _p_list(cfg)
    report = error_report(f, plan, seed, shifted, p_list, cfg.get("grid"))
    return N, seed, report.l2, report.linf_grid, csv_row(report, p_list)


def _fit_summary(by_N: dict) -> dict:
    """Median-over-seeds errors per N, then log-log fits.

    Sweeps with at least six sizes drop the two smallest from the fit (the
    pre-asymptotic regime); the dropped sizes are echoed in the summary.
    """
    Ns = sorted(by_N)
    med_l2 = [float(np.median(by_N[N]["l2"])) for N in Ns]
    med_linf = [float(np.median(by_N[N]["linf"])) for N in Ns]
    excluded = Ns[:2] if len(Ns) >= 6 else []
    keep = [i for i, N in enumerate(Ns) if N not in excluded]
    summary = {
        "sizes": Ns,
        "median_l2": med_l2,
        "median_linf": med_linf,
        "excluded_sizes": excluded,
    }
    if len(keep) >= 4:
        fit2 = fit_rate([Ns[i] for i in keep], [med_l2[i] for i in keep])
        fitI = fit_rate([Ns[i] for i in keep], [med_linf[i] for i in keep])
        summary["l2_slope"] = fit2.slope
        summary["l2_r_squared"] = fit2.r_squared
        summary["linf_slope"] = fitI.slope
        summary["linf_r_squared"] = fitI.r_squared
    return summary


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    params = build_params(cfg)
    N_list = cfg.get("N_list")
    if not isinstance(N_list, list) or not N_list:
        raise ConfigError("sweep needs a non-empty 'N_list'")
    seeds = _seed_list(cfg, args.seed)
    shifted = _shifted(cfg, args)
    p_list = _p_list(cfg)
    f = build_test_function(cfg, params)

    rows = []
    by_N = {}
    if isinstance(f, tuple):
        # synthetic self-test of the harness: inject error = N^(-exponent)
        _, exponent = f
        for N in N_list:
            err = float(N) ** (-exponent)
            by_N.setdefault(int(N), {"l2": [], "linf": []})
            by_N[int(N)]["l2"].append(err)
            by_N[int(N)]["linf"].append(err)
    else:
        cells = [(int(N), int(seed)) for N in N_list for seed in seeds]
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                results = list(
                    pool.map(_sweep_one, *zip(*[(cfg, N, s, shifted) for N, s in cells]))
                )
        else:
            results = [_sweep_one(cfg, N, s, shifted) for N, s in cells]
        results.sort(key=lambda item: (item[0], item[1]))
        for N, seed, l2, linf, row in results:
            rows.append(row)
            by_N.setdefault(N, {"l2": [], "linf": []})
            by_N[N]["l2"].append(l2)
            by_N[N]["linf"].append(linf)
        _write_rows(rows, p_list, args.out)

    summary = _fit_summary(by_N)
    text = json.dumps(summary, indent=2)
    if args.out or isinstance(f, tuple):
        print(text)
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


def cmd_failure_study(args) -> int:
    cfg = load_config(args.config)
    params = build_params(cfg)
    search = cfg.get("search")
    if search is not None:
        plan = search_guaranteed_plan(
            params,
            float(search.get("target_eps2", 0.2)),
            search.get("tau_grid", [1.0]),
            search.get("R_grid", [3]),
            search.get("N_grid", []),
        )
        if plan is None:
            raise ConfigError("plan search found no plan meeting target_eps2 on the given grids")
    else:
        plan = _plan_from_config(cfg, params)
    shifted = _shifted(cfg, args)

    n_combos = (plan.N - 1) ** (params.d * plan.R)
    exhaustive = n_combos <= EXHAUSTIVE_STUDY_BUDGET
    failures = 0
    trials = 0
    if exhaustive:
        import itertools

        from .lattice import LatticeRule

        per_rep = [
            np.array(z) for z in itertools.product(range(1, plan.N), repeat=params.d)
        ]
        for combo in itertools.product(per_rep, repeat=plan.R):
            rules = [LatticeRule(plan.N, tuple(int(v) for v in z)) for z in combo]
            trials += 1
            if not alias_free_majority(plan, rules):
                failures += 1
    else:
        n_seeds = int(cfg.get("n_seeds", 500))
        if n_seeds < 1:
            raise ConfigError("'n_seeds' must be positive")
        for seed in range(n_seeds):
            rules = draw_rules(plan, seed, shifted)
            trials += 1
            if not alias_free_majority(plan, rules):
                failures += 1

    frac = failures / trials
    eps2 = plan.eps2
    half_width = (
        3.0 * math.sqrt(eps2 * (1.0 - eps2) / trials) if 0.0 <= eps2 <= 1.0 else math.inf
    )
    summary = {
        "plan": plan_to_dict(plan),
        "mode": "exhaustive" if exhaustive else "monte-carlo",
        "trials": trials,
        "failures": failures,
        "empirical_failure": frac,
        "eps2": _finite_or_none(eps2),
        "confidence_half_width": _finite_or_none(half_width),
        "within_certificate": bool(frac <= eps2 + half_width) if eps2 <= 1.0 else True,
    }
    text = json.dumps(summary, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medianlattice",
        description="Median-of-lattice-rules approximation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in [
        ("plan", cmd_plan),
        ("run", cmd_run),
        ("sweep", cmd_sweep),
        ("failure-study", cmd_failure_study),
    ]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--shifted", action="store_true", help="use random shifts")
        p.add_argument("--workers", type=int, default=1, help="parallel workers (sweep)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.set_defaults(func=fn)
    sub.choices["plan"].add_argument("--index-csv", default=None,
                                     help="also export the index set as CSV")
    sub.choices["run"].add_argument("--approximant", default=None,
                                    help="write the approximant JSON here")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
