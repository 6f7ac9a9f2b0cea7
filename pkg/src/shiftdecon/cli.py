"""Command-line front end.

Every subcommand is a thin shell over the library: parse flags into an
:class:`ExperimentConfig`, call the matching library function, write CSVs.
Failures print a single machine-readable JSON line to stderr and exit 2.

    shiftdecon simulate --out curves.csv
    shiftdecon select --criterion u_tilde
    shiftdecon estimate --out coeffs.csv --grid-out fit.csv
    shiftdecon risk --out risk.csv
    shiftdecon replication-study --out study_out/
    shiftdecon rate-study --n-grid 200,400,800,1600 --out rates.csv
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__
from .config import (ExperimentConfig, build_density, build_template, load_config,
                     resolve_log_base, save_config)
from .csvio import (write_csv, write_curves_csv, write_rate_study_csv,
                    write_risk_report_csv, write_selection_csv)
from .errors import ShiftDeconError
from .risk import rate_study, risk_report
from .selection import compute_m0, estimate, select_cutoff
from .simulate import render_curves, render_grid, simulate
from .spectral import synthesize
from .study import run_replication_study

__all__ = ["main", "build_parser"]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="INI config file; flags override it")
    parser.add_argument("--template", help="catalog template name or coefficient CSV path")
    parser.add_argument("--density", dest="density_kind",
                        choices=["laplace", "gaussian", "uniform", "point_mass"],
                        help="shift density kind")
    parser.add_argument("--sigma", type=float, dest="density_sigma",
                        help="laplace/gaussian scale")
    parser.add_argument("--half-width", type=float, dest="density_half_width",
                        help="uniform density half width")
    parser.add_argument("--n", type=int, help="curves per dataset")
    parser.add_argument("--epsilon", type=float, help="noise level")
    parser.add_argument("--k-max", type=int, dest="k_max", help="frequency band half-width")
    parser.add_argument("--criterion", choices=["u", "u_bar", "u_tilde"],
                        help="selection criterion for single-selection commands")
    parser.add_argument("--replications", type=int, help="Monte Carlo replications")
    parser.add_argument("--seed", type=int, help="base seed")
    parser.add_argument("--m0-override", dest="m0_override", metavar="N|none",
                        help="fix the selection cap (integer), or 'none' for the computed cap")
    parser.add_argument("--log-base", dest="log_base", choices=["natural", "decimal"],
                        help="logarithm base in threshold and penalty")
    parser.add_argument("--penalty-variant", dest="penalty_variant",
                        choices=["proof_form", "printed_form"],
                        help="penalty summand variant for the penalized criterion")


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    for key in ("template", "density_kind", "density_sigma", "density_half_width",
                "n", "epsilon", "k_max", "criterion", "replications", "seed",
                "log_base", "penalty_variant"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    raw_m0 = getattr(args, "m0_override", None)
    if raw_m0 is not None:
        overrides["m0_override"] = None if raw_m0.lower() in ("none", "formula") \
            else int(raw_m0)
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _resolve_m0(cfg: ExperimentConfig, template, density) -> int:
    if cfg.m0_override is not None:
        return cfg.m0_override
    return compute_m0(density, cfg.n, template.k_max,
                      log_base=resolve_log_base(cfg)).value


def _selection_options(cfg: ExperimentConfig) -> dict:
    return dict(log_base=resolve_log_base(cfg), penalty_variant=cfg.penalty_variant)


def cmd_simulate(args) -> int:
    cfg = _resolve_config(args)
    template = build_template(cfg)
    density = build_density(cfg)
    obs = simulate(template, density, cfg.n, cfg.epsilon, cfg.seed)
    curves = render_curves(obs, args.grid_size)
    out = write_curves_csv(args.out, render_grid(args.grid_size), curves)
    print(f"wrote {obs.n} rendered curves ({args.grid_size} points) to {out}")
    return 0


def cmd_select(args) -> int:
    cfg = _resolve_config(args)
    template = build_template(cfg)
    density = build_density(cfg)
    obs = simulate(template, density, cfg.n, cfg.epsilon, cfg.seed)
    m0 = _resolve_m0(cfg, template, density)
    sel = select_cutoff(obs, density, cfg.criterion, m0=m0,
                        **_selection_options(cfg))
    if args.out:
        write_selection_csv(args.out, sel)
        print(f"wrote criterion trace to {args.out}")
    print(f"criterion={sel.criterion_kind} chosen_n={sel.chosen_n} m0={sel.m0}")
    return 0


def cmd_estimate(args) -> int:
    cfg = _resolve_config(args)
    template = build_template(cfg)
    density = build_density(cfg)
    obs = simulate(template, density, cfg.n, cfg.epsilon, cfg.seed)
    if args.cutoff is not None:
        cutoff, kind = args.cutoff, "fixed_n"
    else:
        m0 = _resolve_m0(cfg, template, density)
        sel = select_cutoff(obs, density, cfg.criterion, m0=m0,
                            **_selection_options(cfg))
        cutoff = sel.chosen_n
        kind = "theta_star" if cfg.criterion == "u_bar" else (
            "theta_tilde" if cfg.criterion == "u_tilde" else "fixed_n")
    est = estimate(obs, density, cutoff, kind)
    if args.out:
        write_csv(args.out, ["k", "re", "im"],
                  ((int(k), float(c.real), float(c.imag))
                   for k, c in zip(est.k_values, est.coeffs)))
        print(f"wrote estimated coefficients to {args.out}")
    if args.grid_out:
        grid = render_grid(args.grid_size)
        write_csv(args.grid_out, ["x", "estimate", "truth"],
                  ((float(x), float(e), float(t)) for x, e, t in
                   zip(grid, est.render(args.grid_size),
                       synthesize(template, args.grid_size))))
        print(f"wrote rendered estimate to {args.grid_out}")
    print(f"cutoff={est.cutoff} kind={est.kind}")
    return 0


def cmd_risk(args) -> int:
    cfg = _resolve_config(args)
    template = build_template(cfg)
    density = build_density(cfg)
    n_max = args.n_max if args.n_max is not None else _resolve_m0(cfg, template, density)
    report = risk_report(template, density, cfg.n, cfg.epsilon, n_max,
                         log_base=resolve_log_base(cfg))
    if args.out:
        write_risk_report_csv(args.out, report)
        print(f"wrote risk curves to {args.out}")
    print(f"oracle_r={report.oracle_r} oracle_r_bar={report.oracle_r_bar} "
          f"oracle_r_tilde={report.oracle_r_tilde}")
    return 0


def cmd_replication_study(args) -> int:
    cfg = _resolve_config(args)
    study = run_replication_study(cfg, args.out, grid_size=args.grid_size,
                                  workers=args.workers)
    print(f"study bundle written to {study.out_dir}")
    print(f"m0_used={study.m0_used} (formula value {study.m0_formula}"
          f"{', saturated' if study.m0_saturated else ''})")
    print(f"median n_star={int(np.median(study.n_star))} "
          f"median n_tilde={int(np.median(study.n_tilde))}")
    print(f"mean loss theta_star={study.mean_loss_star!r} "
          f"theta_tilde={study.mean_loss_tilde!r}")
    return 0


def cmd_rate_study(args) -> int:
    cfg = _resolve_config(args)
    try:
        n_grid = [int(part) for part in args.n_grid.split(",") if part.strip()]
    except ValueError:
        raise ShiftDeconError(f"--n-grid must be a comma list of integers, got {args.n_grid!r}")
    study = rate_study(args.smoothness, args.beta, args.radius, n_grid,
                       cfg.epsilon, cfg.replications, cfg.seed,
                       k_max=cfg.k_max, workers=args.workers)
    if args.out:
        write_rate_study_csv(args.out, study)
        print(f"wrote rate table to {args.out}")
    print(f"fitted_slope={study.fitted_slope!r} "
          f"theoretical_slope={study.theoretical_slope!r}")
    return 0


def cmd_write_config(args) -> int:
    cfg = _resolve_config(args)
    save_config(cfg, args.out)
    print(f"wrote config to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftdecon",
        description="Template estimation for randomly shifted noisy curves.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one dataset and render its curves")
    _add_config_flags(p)
    p.add_argument("--grid-size", type=int, default=256, dest="grid_size")
    p.add_argument("--out", default="curves.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("select", help="run one cutoff selection")
    _add_config_flags(p)
    p.add_argument("--out", default=None, help="write the criterion trace CSV here")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("estimate", help="estimate the template from one dataset")
    _add_config_flags(p)
    p.add_argument("--cutoff", type=int, default=None,
                   help="fixed cutoff (default: select adaptively per --criterion)")
    p.add_argument("--grid-size", type=int, default=256, dest="grid_size")
    p.add_argument("--out", default=None, help="write estimated coefficients here")
    p.add_argument("--grid-out", dest="grid_out", default=None,
                   help="write (x, estimate, truth) curve CSV here")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("risk", help="exact risk curves for the configured problem")
    _add_config_flags(p)
    p.add_argument("--n-max", type=int, default=None, dest="n_max",
                   help="largest cutoff to tabulate (default: the m0 cap)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("replication-study", help="full replication study as a CSV bundle")
    _add_config_flags(p)
    p.add_argument("--grid-size", type=int, default=256, dest="grid_size")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="study_out")
    p.set_defaults(func=cmd_replication_study)

    p = sub.add_parser("rate-study", help="risk decay against sample size")
    _add_config_flags(p)
    p.add_argument("--smoothness", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--radius", type=float, default=5.0)
    p.add_argument("--n-grid", dest="n_grid", default="200,400,800,1600,3200,6400")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rate_study)

    p = sub.add_parser("write-config", help="write the resolved configuration to a file")
    _add_config_flags(p)
    p.add_argument("--out", default="experiment.ini")
    p.set_defaults(func=cmd_write_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShiftDeconError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
