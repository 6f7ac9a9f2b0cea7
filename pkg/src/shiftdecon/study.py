"""Reproduction of the reference simulation study as a CSV bundle.

One call simulates ``replications`` independent datasets, runs both adaptive
cutoff selections (penalized and plain) on each, and writes plot-ready CSVs:

* ``template_curve.csv``   — the true pattern on a display grid;
* ``sample_curves.csv``    — a few rendered noisy shifted curves (first dataset);
* ``traces.csv``           — both criterion traces for the first dataset;
* ``selections.csv``       — per-replicate cutoffs and losses for both estimators;
* ``histograms.csv``       — cutoff histograms over all replicates;
* ``risk_summary.csv``     — Monte Carlo risk of both estimators next to the
  best theoretical risks and the resulting oracle ratios;
* ``risk_curves.csv``      — the exact risk decomposition over the scan band;
* ``meta.csv``             — every parameter actually used, including the cap.

Output bytes depend only on the configuration (not on worker count), so a
bundle can be diffed run-to-run as a regression check.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .config import ExperimentConfig, build_density, build_template, resolve_log_base
from .csvio import write_csv, write_curves_csv, write_risk_report_csv
from .errors import InvalidParameterError
from .risk import RiskReport, risk_report
from .selection import compute_m0, criterion_trace, fraction_negative_theta_hat, select_cutoff
from .simulate import render_curves, render_grid, simulate
from .spectral import synthesize

__all__ = ["ReplicationStudy", "run_replication_study"]

_SAMPLE_CURVE_COUNT = 10


@dataclass(frozen=True)
class ReplicationStudy:
    """Summary of one study run; the CSVs under ``out_dir`` hold the details."""

    out_dir: Path
    m0_used: int
    m0_formula: int
    m0_saturated: bool
    n_star: np.ndarray
    n_tilde: np.ndarray
    loss_star: np.ndarray
    loss_tilde: np.ndarray
    report: RiskReport

    @property
    def mean_loss_star(self) -> float:
        return float(np.mean(self.loss_star))

    @property
    def mean_loss_tilde(self) -> float:
        return float(np.mean(self.loss_tilde))


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return float("nan")
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


def run_replication_study(cfg: ExperimentConfig, out_dir, *, grid_size: int = 256,
                       workers: int = 1) -> ReplicationStudy:
    """Run the study described by ``cfg`` and write the CSV bundle to ``out_dir``.

    Both adaptive estimators are always evaluated side by side on shared
    datasets (``cfg.criterion`` only steers the single-selection commands).
    ``workers`` parallelizes replicates without changing any output byte.
    """
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    if cfg.replications < 1:
        raise InvalidParameterError("study needs at least 1 replication")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    template = build_template(cfg)
    density = build_density(cfg)
    log_base = resolve_log_base(cfg)
    k_max = template.k_max
    if grid_size < 2 * k_max + 1:
        raise InvalidParameterError(
            f"grid_size={grid_size} cannot render the band |k| <= {k_max}"
        )

    m0_res = compute_m0(density, cfg.n, k_max, log_base=log_base)
    m0_used = cfg.m0_override if cfg.m0_override is not None else m0_res.value
    if m0_used > k_max:
        raise InvalidParameterError(f"m0={m0_used} exceeds the band k_max={k_max}")

    gamma_band = density.gamma(np.arange(-k_max, k_max + 1))
    theta2_tail = _tail_table(template)
    sel_options = dict(log_base=log_base, penalty_variant=cfg.penalty_variant)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)

    def job(i: int):
        obs = simulate(template, density, cfg.n, cfg.epsilon, seeds[i],
                       keep_shifts=False)
        star = select_cutoff(obs, density, "u_bar", m0=m0_used, **sel_options)
        tilde = select_cutoff(obs, density, "u_tilde", m0=m0_used, **sel_options)
        losses = tuple(
            _band_loss(obs, template, gamma_band, theta2_tail, sel.chosen_n)
            for sel in (star, tilde)
        )
        neg_frac = fraction_negative_theta_hat(obs, density, m0_used)
        return star.chosen_n, tilde.chosen_n, losses[0], losses[1], neg_frac

    if workers == 1:
        rows = [job(i) for i in range(cfg.replications)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, range(cfg.replications)))

    n_star = np.array([r[0] for r in rows], dtype=int)
    n_tilde = np.array([r[1] for r in rows], dtype=int)
    loss_star = np.array([r[2] for r in rows], dtype=float)
    loss_tilde = np.array([r[3] for r in rows], dtype=float)
    neg_fracs = np.array([r[4] for r in rows], dtype=float)

    # Theoretical risk curves over the scan band, for the summary ratios.
    report = risk_report(template, density, cfg.n, cfg.epsilon, m0_used,
                         log_base=log_base)
    inf_r = float(np.min(report.r))
    inf_r_bar = float(np.min(report.r_bar))
    inf_r_tilde = float(np.min(report.r_tilde))

    # --- CSV bundle -------------------------------------------------------
    grid = render_grid(grid_size)
    write_curves_csv(out_dir / "template_curve.csv", grid,
                     synthesize(template, grid_size))

    first = simulate(template, density, cfg.n, cfg.epsilon, seeds[0],
                     keep_shifts=False)
    shown = min(_SAMPLE_CURVE_COUNT, cfg.n)
    write_curves_csv(out_dir / "sample_curves.csv", grid,
                     render_curves(first, grid_size)[:shown])

    trace_star = criterion_trace(first, density, "u_bar", m0_used, **sel_options)
    trace_tilde = criterion_trace(first, density, "u_tilde", m0_used, **sel_options)
    write_csv(out_dir / "traces.csv", ["n", "u_bar", "u_tilde"],
              ((n, float(trace_star[n]), float(trace_tilde[n]))
               for n in range(m0_used + 1)))

    write_csv(out_dir / "selections.csv",
              ["replicate", "n_star", "loss_star", "n_tilde", "loss_tilde",
               "negative_energy_fraction"],
              ((i, int(n_star[i]), float(loss_star[i]), int(n_tilde[i]),
                float(loss_tilde[i]), float(neg_fracs[i]))
               for i in range(cfg.replications)))

    counts_star = np.bincount(n_star, minlength=m0_used + 1)
    counts_tilde = np.bincount(n_tilde, minlength=m0_used + 1)
    write_csv(out_dir / "histograms.csv", ["n", "count_n_star", "count_n_tilde"],
              ((n, int(counts_star[n]), int(counts_tilde[n]))
               for n in range(m0_used + 1)))

    write_risk_report_csv(out_dir / "risk_curves.csv", report)

    mean_star, mean_tilde = float(np.mean(loss_star)), float(np.mean(loss_tilde))
    summary_rows = []
    for name, crit, mean, err in (
        ("theta_star", "u_bar", mean_star, _stderr(loss_star)),
        ("theta_tilde", "u_tilde", mean_tilde, _stderr(loss_tilde)),
    ):
        summary_rows.append((
            name, crit, mean, err, inf_r, inf_r_bar, inf_r_tilde,
            mean / inf_r if inf_r > 0 else float("nan"),
            mean / inf_r_bar if inf_r_bar > 0 else float("nan"),
            mean / inf_r_tilde if inf_r_tilde > 0 else float("nan"),
        ))
    write_csv(out_dir / "risk_summary.csv",
              ["estimator", "criterion", "mc_mean", "mc_stderr", "inf_r",
               "inf_r_bar", "inf_r_tilde", "ratio_vs_r", "ratio_vs_r_bar",
               "ratio_vs_r_tilde"],
              summary_rows)

    meta = [
        ("template", template.label),
        ("density", density.label),
        ("n", cfg.n),
        ("epsilon", cfg.epsilon),
        ("k_max", k_max),
        ("criterion", cfg.criterion),
        ("replications", cfg.replications),
        ("seed", cfg.seed),
        ("grid_size", grid_size),
        ("m0_used", m0_used),
        ("m0_formula", m0_res.value),
        ("m0_formula_saturated", m0_res.saturated),
        ("m0_threshold", m0_res.threshold),
        ("log_base", cfg.log_base),
        ("penalty_variant", cfg.penalty_variant),
        ("mean_negative_energy_fraction", float(np.mean(neg_fracs))),
    ]
    write_csv(out_dir / "meta.csv", ["key", "value"], meta)

    return ReplicationStudy(out_dir=out_dir, m0_used=int(m0_used),
                         m0_formula=m0_res.value, m0_saturated=m0_res.saturated,
                         n_star=n_star, n_tilde=n_tilde,
                         loss_star=loss_star, loss_tilde=loss_tilde,
                         report=report)


def _tail_table(template) -> np.ndarray:
    """``tail[N] = sum_{|k| > N} |theta_k|^2`` for ``N = 0..k_max``."""
    k_max = template.k_max
    theta2 = np.abs(template.coeffs) ** 2
    steps = np.empty(k_max + 1, dtype=float)
    steps[0] = theta2[k_max]
    steps[1:] = theta2[k_max + 1 :] + theta2[k_max - 1 :: -1]
    tail = np.empty(k_max + 2, dtype=float)
    tail[k_max + 1] = 0.0
    for m in range(k_max, -1, -1):
        tail[m] = tail[m + 1] + steps[m]
    return tail[1:]


def _band_loss(obs, template, gamma_band, theta2_tail, cutoff: int) -> float:
    k_max = obs.k_max
    sl = slice(k_max - cutoff, k_max + cutoff + 1)
    diff = obs.c_tilde[sl] / gamma_band[sl] - template.coeffs[sl]
    return float(np.sum(np.abs(diff) ** 2) + theta2_tail[cutoff])
