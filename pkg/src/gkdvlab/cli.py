"""Command-line entry point.

    gkdv simulate         --config run.json [--out DIR]
    gkdv virial-check     --config run.json [--out DIR]
    gkdv decay-experiment --config run.json [--out DIR]
    gkdv classify         --config run.json | --nonlinearity '{"2": 1.0}'
    gkdv validate-exact   --solution soliton --params c=1,p=2 --grid 60,2048

Exit codes: 0 pass, 1 criterion failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .exact import (BreatherParams, DeltaNotPositiveError, gardner_breather,
                    mkdv_breather, pde_residual, soliton)
from .grid import Grid, field_to_csv, norms
from .nonlinearity import PolyNonlinearity
from .solver import NonFiniteError
from . import experiments

EXIT_PASS = 0
EXIT_CRITERION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_config(args, forced_scenario=None) -> experiments.ExperimentConfig:
    with open(args.config) as fh:
        raw = json.load(fh)
    if forced_scenario is not None:
        raw["scenario"] = forced_scenario
    if getattr(args, "out", None):
        raw["output_dir"] = args.out
    return experiments.ExperimentConfig.from_dict(raw)


def _run_scenario(args, forced_scenario=None) -> int:
    try:
        cfg = _load_config(args, forced_scenario)
    except (OSError, json.JSONDecodeError, experiments.ConfigInvalidError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = experiments.run(cfg)
    except experiments.ConfigInvalidError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonFiniteError, DeltaNotPositiveError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    for crit in report.criteria:
        mark = "PASS" if crit.passed else "FAIL"
        print(f"[{mark}] {crit.name}: measured {crit.measured:.6g} "
              f"{crit.comparison} {crit.threshold:.6g}  ({crit.description})")
    print(f"scenario {report.scenario}: {'pass' if report.passed else 'FAIL'}")
    return EXIT_PASS if report.passed else EXIT_CRITERION


def _parse_params(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        out[key.strip()] = float(value)
    return out


def _cmd_validate_exact(args) -> int:
    try:
        L_str, n_str = args.grid.split(",")
        grid = Grid(L=float(L_str), N=int(n_str))
        params = _parse_params(args.params)
        if args.solution == "soliton":
            p = int(params.get("p", 2))
            c = params.get("c", 1.0)
            u = soliton(c, p, grid)
            f = PolyNonlinearity.pure_power(p)
            provider = lambda t: soliton(c, p, grid, center=c * t)
        elif args.solution == "mkdv-breather":
            bp = BreatherParams(alpha=params["alpha"], beta=params["beta"])
            f = PolyNonlinearity.pure_power(3)
            provider = lambda t: mkdv_breather(bp, t, grid)
            u = provider(args.t)
        elif args.solution == "gardner-breather":
            bp = BreatherParams(alpha=params["alpha"], beta=params["beta"],
                                mu=params["mu"])
            f = PolyNonlinearity({2: 1.0, 3: params["mu"]})
            provider = lambda t: gardner_breather(bp, t, grid)
            u = provider(args.t)
        else:
            raise ValueError(f"unknown solution kind {args.solution!r}")
    except DeltaNotPositiveError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (KeyError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    res = pde_residual(provider, f, args.t, args.dt_fd, grid)
    nm = norms(res)
    print(f"residual max {nm.Linf:.6e}  L2 {nm.L2:.6e}  (t={args.t}, dt_fd={args.dt_fd})")
    if args.out:
        from pathlib import Path
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        field_to_csv(u, out / "profile.csv")
        field_to_csv(res, out / "residual.csv")
        print(f"wrote {out / 'profile.csv'} and {out / 'residual.csv'}")
    return EXIT_PASS


def _cmd_classify(args) -> int:
    if args.config:
        return _run_scenario(args, "classify")
    if not args.nonlinearity:
        print("config error: provide --config or --nonlinearity", file=sys.stderr)
        return EXIT_CONFIG
    try:
        f = PolyNonlinearity.from_config(json.loads(args.nonlinearity))
    except (json.JSONDecodeError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = experiments.ExperimentConfig(
        scenario="classify", nonlinearity=f, initial_data={}, grid=None, solver=None)
    report = experiments.run(cfg)
    print(json.dumps(report.to_dict()["info"], indent=2, sort_keys=True))
    return EXIT_PASS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gkdv",
        description="Numerical experiments for generalized KdV equations")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, scenario in (("simulate", None),
                           ("virial-check", "identity-closure"),
                           ("decay-experiment", "decay-small-data")):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.set_defaults(fn=lambda a, s=scenario: _run_scenario(a, s))

    p = sub.add_parser("classify")
    p.add_argument("--config", default=None)
    p.add_argument("--nonlinearity", default=None,
                   help='JSON map of power to coefficient, e.g. \'{"2": 1.0}\'')
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("validate-exact")
    p.add_argument("--solution", required=True,
                   choices=["soliton", "mkdv-breather", "gardner-breather"])
    p.add_argument("--params", required=True,
                   help="comma-separated key=value, e.g. c=1,p=2 or alpha=1,beta=1")
    p.add_argument("--grid", default="60,2048", help="L,N")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--dt-fd", type=float, default=1e-4, dest="dt_fd")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_validate_exact)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
