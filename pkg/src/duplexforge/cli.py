"""Command-line entry point running reproducible experiments.

Every command reads a scenario file, runs one experiment, and writes CSV
result tables plus a ``manifest.json`` describing the run. Result tables are
byte-identical across runs of the same (scenario, seed), including under
``--threads``; the manifest carries wall-clock time and is the one
intentionally non-reproducible file.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import analog_sic, codebook_design, link_math, scenario as scn, steer as steer_mod
from .arrays import Direction
from .errors import ConfigError, ScenarioError
from .link_math import DB_FLOOR, LinkInrs, LinkSnrs, db_to_linear

__all__ = ["main"]


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _write_csv(out_dir: Path, name: str, header: str, rows: list[str]) -> str:
    (out_dir / name).write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
    return name


def _write_manifest(
    out_dir: Path,
    command: str,
    scenario_path: Path,
    sc: scn.Scenario,
    outputs: list[str],
    started: float,
    extra: dict | None = None,
) -> None:
    manifest = {
        "command": command,
        "scenario_sha256": hashlib.sha256(scenario_path.read_bytes()).hexdigest(),
        "master_seed": sc.master_seed,
        "version": __version__,
        "wall_clock_s": round(time.perf_counter() - started, 6),
        "outputs": outputs,
        "extra": extra or {},
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _require_block(sc: scn.Scenario, name: str):
    block = getattr(sc, name)
    if block is None:
        raise ConfigError(f"scenario has no {name} block; add {name}.* keys")
    return block


def cmd_rate_region(sc: scn.Scenario, out_dir: Path) -> tuple[list[str], dict]:
    region = _require_block(sc, "region")
    snrs = LinkSnrs(db_to_linear(region.snr_tx_db), db_to_linear(region.snr_rx_db))
    rows = []
    for strategy in ("tdd", "fdd"):
        for bp in link_math.rate_region_boundary(strategy, snrs, n_points=region.n_points):
            rows.append(
                f"{strategy},{_fmt(bp.alpha)},{_fmt(bp.point.r_tx)},"
                f"{_fmt(bp.point.r_rx)},{int(bp.is_star)}"
            )
    for tx_db, rx_db in zip(region.inr_tx_levels_db, region.inr_rx_levels_db):
        label = f"fd({_fmt(tx_db)};{_fmt(rx_db)})"
        inrs = LinkInrs(db_to_linear(tx_db), db_to_linear(rx_db))
        for bp in link_math.rate_region_boundary("fd", snrs, inrs):
            rows.append(
                f"{label},,{_fmt(bp.point.r_tx)},{_fmt(bp.point.r_rx)},{int(bp.is_star)}"
            )
    outputs = [_write_csv(out_dir, "rate_region.csv", "strategy,alpha,r_tx,r_rx,is_star", rows)]
    return outputs, {"n_points": region.n_points, "n_fd_levels": len(region.inr_tx_levels_db)}


def cmd_sic_fit(sc: scn.Scenario, out_dir: Path) -> tuple[list[str], dict]:
    cfg = _require_block(sc, "sic")
    true_taps = cfg.true_n_taps or cfg.n_taps
    a_true = analog_sic.ideal_tap_matrix(
        analog_sic.FirFilterSpec(true_taps, cfg.tap_delay_s), cfg.sample_period_s, cfg.n_samples
    )
    rng = np.random.default_rng(scn.derive_seed(sc.master_seed, "sic-channel"))
    gains = (rng.standard_normal(true_taps) + 1j * rng.standard_normal(true_taps)) / math.sqrt(2.0)
    y = a_true.columns @ gains
    if cfg.noise_db != -math.inf:
        noise_power = float(np.mean(np.abs(y) ** 2)) * db_to_linear(cfg.noise_db)
        noise_rng = np.random.default_rng(scn.derive_seed(sc.master_seed, "sic-noise"))
        y = y + math.sqrt(noise_power / 2.0) * (
            noise_rng.standard_normal(y.size) + 1j * noise_rng.standard_normal(y.size)
        )

    a_fit = analog_sic.ideal_tap_matrix(
        analog_sic.FirFilterSpec(cfg.n_taps, cfg.tap_delay_s), cfg.sample_period_s, cfg.n_samples
    )
    fit = analog_sic.ls_tap_weights(y, a_fit)

    tap_rows = [
        f"{i},{_fmt(w.real)},{_fmt(w.imag)}" for i, w in enumerate(fit.weights)
    ]
    summary = (
        f"{cfg.n_taps},{cfg.n_samples},{_fmt(fit.residual_power_db)},{_fmt(fit.cancellation_db)}"
    )
    outputs = [
        _write_csv(out_dir, "sic_fit.csv", "tap_index,weight_re,weight_im", tap_rows),
        _write_csv(
            out_dir,
            "sic_summary.csv",
            "n_taps,n_samples,residual_power_db,cancellation_db",
            [summary],
        ),
    ]
    return outputs, {"n_taps": cfg.n_taps, "true_n_taps": true_taps, "n_samples": cfg.n_samples}


def _codebook_matrix_rows(mat: np.ndarray) -> list[str]:
    return [
        ",".join(f"{_fmt(v.real)};{_fmt(v.imag)}" for v in mat[m, :]) for m in range(mat.shape[0])
    ]


def cmd_codebook(sc: scn.Scenario, out_dir: Path) -> tuple[list[str], dict]:
    cfg = _require_block(sc, "codebook")
    h = scn.build_si_channel(sc)

    def span(n_beams: int) -> list[Direction]:
        az = np.linspace(cfg.az_min_deg, cfg.az_max_deg, n_beams)
        return [Direction(float(a), 0.0) for a in az]

    cov_tx = codebook_design.coverage_spec(scn.build_tx_geometry(sc), span(cfg.n_beams_tx))
    cov_rx = codebook_design.coverage_spec(scn.build_rx_geometry(sc), span(cfg.n_beams_rx))
    design_cfg = codebook_design.CodebookDesignConfig(
        sigma2_tx=cfg.sigma2_tx,
        sigma2_rx=cfg.sigma2_rx,
        max_iters=cfg.max_iters,
        tolerance=cfg.tolerance,
        spec=scn.build_phase_spec(sc) if cfg.quantize else None,
    )
    result = codebook_design.design_codebooks(h, cov_tx, cov_rx, design_cfg)

    n_pairs = cfg.n_beams_tx * cfg.n_beams_rx
    initial_db = (
        10.0 * math.log10(result.objective_trace[0] / n_pairs)
        if result.objective_trace[0] > 0.0
        else DB_FLOOR
    )
    final_db = codebook_design.average_coupling_db(result.F, result.W, h)
    trace_rows = [f"{i},{_fmt(v)}" for i, v in enumerate(result.objective_trace)]
    summary_row = ",".join(
        [
            _fmt(max(initial_db, DB_FLOOR)),
            _fmt(final_db),
            _fmt(result.coverage_tx),
            _fmt(result.coverage_rx),
            _fmt(cfg.sigma2_tx),
            _fmt(cfg.sigma2_rx),
            str(int(result.feasible)),
            str(int(result.fell_back_to_baseline)),
        ]
    )
    outputs = [
        _write_matrix(out_dir, "F.csv", result.F.matrix()),
        _write_matrix(out_dir, "W.csv", result.W.matrix()),
        _write_csv(out_dir, "codebook_trace.csv", "iteration,objective", trace_rows),
        _write_csv(
            out_dir,
            "codebook_summary.csv",
            "initial_coupling_db,final_coupling_db,coverage_tx,coverage_rx,"
            "sigma2_tx,sigma2_rx,feasible,fell_back",
            [summary_row],
        ),
    ]
    return outputs, {
        "n_beams_tx": cfg.n_beams_tx,
        "n_beams_rx": cfg.n_beams_rx,
        "iterations": result.iterations,
        "quantized": cfg.quantize,
    }


def _write_matrix(out_dir: Path, name: str, mat: np.ndarray) -> str:
    rows = _codebook_matrix_rows(mat)
    (out_dir / name).write_text("\n".join(rows) + "\n", encoding="utf-8")
    return name


def _steer_trial(args) -> tuple[int, float, float, tuple[float, float], int]:
    sc, spec, base, trial = args
    st = sc.steer
    init_tx = Direction(*st.initial_tx_deg)
    init_rx = Direction(*st.initial_rx_deg)
    measurer = steer_mod.simulated_measurer(
        init_tx,
        init_rx,
        spec,
        base,
        st.small_scale_sigma_db,
        scn.derive_seed(sc.master_seed, f"trial-{trial}"),
    )
    inr_initial = measurer.measure(init_tx, init_rx)
    result = steer_mod.steer_select(init_tx, init_rx, spec, st.target_inr_db, measurer)
    return trial, inr_initial, result.inr_db, result.deviation, result.measurements_used


def cmd_steer(sc: scn.Scenario, out_dir: Path, trials: int | None, threads: int) -> tuple[list[str], dict]:
    st = _require_block(sc, "steer")
    n_trials = trials if trials is not None else st.trials
    if n_trials < 1:
        raise ConfigError(f"trials must be >= 1, got {n_trials}")
    spec = steer_mod.NeighborhoodSpec(
        st.delta_theta_deg, st.delta_phi_deg, st.res_theta_deg, st.res_phi_deg
    )
    if st.base_model == "flat":
        base: float | object = st.flat_base_inr_db
    else:
        base = steer_mod.fd_link_inr_surface(
            scn.build_link_context(sc),
            scn.build_tx_geometry(sc),
            scn.build_rx_geometry(sc),
            scn.build_phase_spec(sc),
        )

    jobs = [(sc, spec, base, t) for t in range(n_trials)]
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_steer_trial, jobs))
    else:
        results = [_steer_trial(j) for j in jobs]

    rows = [
        f"{t},{_fmt(ini)},{_fmt(fin)},{_fmt(dev[0])};{_fmt(dev[1])},{used}"
        for t, ini, fin, dev, used in results
    ]
    initial = np.array([r[1] for r in results])
    final = np.array([r[2] for r in results])
    reduction = initial - final
    cdf_rows = [
        f"{q},{_fmt(np.percentile(initial, q))},{_fmt(np.percentile(final, q))},"
        f"{_fmt(np.percentile(reduction, q))}"
        for q in range(1, 100)
    ]
    summary = ",".join(
        [
            str(n_trials),
            _fmt(np.median(initial)),
            _fmt(np.median(final)),
            _fmt(np.median(reduction)),
            _fmt(np.mean([r[4] for r in results])),
            _fmt(st.target_inr_db),
        ]
    )
    outputs = [
        _write_csv(
            out_dir,
            "steer_trials.csv",
            "trial,inr_initial_db,inr_final_db,deviation,measurements",
            rows,
        ),
        _write_csv(
            out_dir,
            "steer_cdf.csv",
            "quantile,inr_initial_db,inr_final_db,reduction_db",
            cdf_rows,
        ),
        _write_csv(
            out_dir,
            "steer_summary.csv",
            "trials,median_initial_db,median_final_db,median_reduction_db,"
            "mean_measurements,target_inr_db",
            [summary],
        ),
    ]
    return outputs, {"trials": n_trials, "base_model": st.base_model}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duplexforge",
        description="Reproducible full-duplex mmWave experiments: rate regions, "
        "analog SIC fitting, SI-aware codebook design, and beam selection.",
    )
    parser.add_argument("--version", action="version", version=f"duplexforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rate-region", "duplexing rate-region boundaries (TDD/FDD/full-duplex)"),
        ("sic-fit", "least-squares analog SIC tap fitting on a synthetic SI capture"),
        ("codebook", "SI-aware transmit/receive codebook design"),
        ("steer", "neighborhood beam-selection Monte-Carlo trials"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, type=Path, help="scenario file")
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--trials", type=int, default=None, help="override trial count (steer)")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker threads for Monte-Carlo trials "
            "(default: DUPLEXFORGE_THREADS or 1); never changes output bytes",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("DUPLEXFORGE_THREADS", "1"))
    if threads < 1:
        print(f"error: threads must be >= 1, got {threads}", file=sys.stderr)
        return 2

    started = time.perf_counter()
    try:
        sc = scn.load_scenario_file(args.scenario)
        if args.seed is not None:
            sc = dataclasses.replace(sc, master_seed=args.seed)
        out_dir = args.out
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "rate-region":
            outputs, extra = cmd_rate_region(sc, out_dir)
        elif args.command == "sic-fit":
            outputs, extra = cmd_sic_fit(sc, out_dir)
        elif args.command == "codebook":
            outputs, extra = cmd_codebook(sc, out_dir)
        else:
            outputs, extra = cmd_steer(sc, out_dir, args.trials, threads)
    except ScenarioError as exc:
        for err in exc.errors:
            print(f"scenario error: {err}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numerical failures map to exit code 3
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    _write_manifest(out_dir, args.command, args.scenario, sc, outputs, started, extra)
    return 0


if __name__ == "__main__":
    sys.exit(main())
