"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report. Tolerances are fixed here, not calibrated elsewhere.
"""

import math
import time

import numpy as np
import pytest

from duplexforge import analog_sic, beam_design, channels, codebook_design, link_math
from duplexforge.arrays import (
    Direction,
    PhaseShifterSpec,
    conjugate_codebook,
    project_weights,
    uniform_linear_array,
)
from duplexforge.channels import (
    ArrayPose,
    CrossLinkChannel,
    LogNormalInrModel,
    SiChannel,
    los_user_channel,
    rotation_zyx_deg,
    sample_inr_db,
    spherical_wave_si_channel,
)
from duplexforge.cli import main
from duplexforge.fd_link import FdScenarioLink
from duplexforge.seeding import derive_seed
from duplexforge.steer import (
    MapInrMeasurer,
    NeighborhoodSpec,
    brute_force_steer,
    neighborhood_offsets,
    simulated_measurer,
    steer_select,
)


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_rate_region_closed_forms():
    started = time.perf_counter()
    snrs = link_math.LinkSnrs(10.0, 10.0)
    cap = link_math.capacity_fd(snrs).sum_rate
    tdd = link_math.rate_tdd(snrs, link_math.DuplexShare(0.5)).sum_rate
    fdd = link_math.rate_fdd(snrs, link_math.DuplexShare(0.5)).sum_rate
    fd0 = link_math.rate_fd(snrs, link_math.LinkInrs(1.0, 1.0)).sum_rate
    elapsed = time.perf_counter() - started
    ok = (
        abs(cap - 6.918863237) < 1e-9
        and abs(tdd - 3.459431619) < 1e-9
        and abs(fdd - 4.392317423) < 1e-9
        and abs(fd0 - 5.169925001) < 1e-9
        and fd0 > fdd > tdd
        and elapsed < 1.0
    )
    _report(
        1,
        ok,
        f"capacity {cap:.9f}, TDD {tdd:.9f}, FDD {fdd:.9f}, FD(INR=0dB) {fd0:.9f}, "
        f"ordering FD>FDD>TDD, {elapsed:.3f}s",
    )


def test_criterion_2_residual_si_budget():
    inr = link_math.residual_si_inr(link_math.LinkBudget(20.0, -90.0, 110.0))
    ok = abs(inr) <= 1e-12
    _report(2, ok, f"20 dBm, -90 dBm noise, L=110 dB -> INR {inr:.3e} dB")


def test_criterion_3_analog_sic_ls():
    started = time.perf_counter()
    rng = np.random.default_rng(303)
    ok = True
    for i in range(50):
        k = int(rng.integers(1, 9))
        a = (rng.standard_normal((64, k)) + 1j * rng.standard_normal((64, k))) / math.sqrt(2)
        x_true = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        noiseless = i % 2 == 0
        y = -a @ x_true
        if not noiseless:
            y = y + 0.1 * (rng.standard_normal(64) + 1j * rng.standard_normal(64))
        fit = analog_sic.ls_tap_weights(y, a)
        r = y + a @ fit.weights
        ok &= np.linalg.norm(a.conj().T @ r) <= 1e-9 * np.linalg.norm(y)
        ok &= fit.cancellation_db >= 0.0
        if noiseless:
            # y = -A x_true, so the inverted reconstruction recovers +x_true
            ok &= np.max(np.abs(fit.weights - x_true)) <= 1e-10
    # adversarial: capture orthogonal to the span, and duplicated columns
    a = np.eye(4, 2, dtype=complex)
    fit = analog_sic.ls_tap_weights(np.array([0, 0, 1.0, 1j]), a)
    ok &= fit.cancellation_db >= 0.0
    with pytest.warns(UserWarning):
        dup = analog_sic.ls_tap_weights(
            np.array([1.0, 2.0, 3.0, 4.0], dtype=complex), np.ones((4, 3), dtype=complex)
        )
    ok &= dup.cancellation_db >= 0.0
    elapsed = time.perf_counter() - started
    ok &= elapsed < 5.0
    _report(3, ok, f"50 instances: orthogonality <= 1e-9, exact recovery, {elapsed:.2f}s")


def test_criterion_4_quantization_bound():
    ok = True
    for bits in (2, 4, 6):
        rng = np.random.default_rng(400 + bits)
        raw = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
        raw[raw == 0] = 1.0
        spec = PhaseShifterSpec(bits)
        proj = project_weights(raw, spec)
        err = np.abs(np.angle(raw * np.conj(proj.weights)))
        ok &= float(np.max(err)) <= math.pi / 2**bits + 1e-12
        ok &= np.array_equal(project_weights(proj.weights, spec).weights, proj.weights)
    _report(4, ok, "max phase error <= pi/2^b for b in {2,4,6}; projection idempotent")


def test_criterion_5_beam_design_oracle_equivalence():
    started = time.perf_counter()
    g = uniform_linear_array(4)
    spec = PhaseShifterSpec(2)
    ok = True
    for k in range(100):
        rng = np.random.default_rng(500 + k)
        n_beams = int(rng.integers(8, 65))
        dirs_t = [Direction(float(a), 0.0) for a in rng.uniform(-60, 60, n_beams)]
        dirs_r = [Direction(float(a), 0.0) for a in rng.uniform(-60, 60, n_beams)]
        space = beam_design.BeamSearchSpace(
            conjugate_codebook(g, dirs_t, spec), conjugate_codebook(g, dirs_r, spec)
        )
        h = channels.rayleigh_si_channel(4, 4, seed=5500 + k)
        h = SiChannel(h.matrix * 10 ** (rng.uniform(-10, 20) / 20), "custom")
        link = FdScenarioLink(
            f=None,
            w=None,
            h_tx=los_user_channel(g, dirs_t[int(rng.integers(n_beams))], 0.0),
            h_rx=los_user_channel(g, dirs_r[int(rng.integers(n_beams))], 0.0),
            h_cl=CrossLinkChannel(0.1 + 0j),
            si=h,
            p_bs_dbm=10.0,
            p_ue_dbm=10.0,
            n_bs_dbm=0.0,
            n_ue_dbm=0.0,
        )
        ex = beam_design.exhaustive_beam_search(space, link)
        alt = beam_design.alternating_beam_search(space, link)
        ok &= alt.sum_se <= ex.sum_se + 1e-9
        tr = alt.trace
        ok &= all(tr[i + 1] >= tr[i] - 1e-12 for i in range(len(tr) - 1))
    elapsed = time.perf_counter() - started
    ok &= elapsed < 60.0
    _report(5, ok, f"100 channels: alternating <= exhaustive, monotone; {elapsed:.2f}s")


def test_criterion_6_codebook_design():
    span = [Direction(float(a), 0.0) for a in np.linspace(-60, 60, 4)]
    ok = True
    for k in range(20):
        rng = np.random.default_rng(600 + k)
        g = uniform_linear_array(8)
        pose = ArrayPose(
            np.array([8.0 + rng.uniform(0, 6), rng.uniform(-2, 2), rng.uniform(-1, 1)]),
            rotation_zyx_deg(*rng.uniform(-30, 30, 3)),
        )
        h = spherical_wave_si_channel(g, g, pose)
        cov = codebook_design.coverage_spec(g, span)
        res = codebook_design.design_codebooks(
            h, cov, cov, codebook_design.CodebookDesignConfig(0.1, 0.1)
        )
        tr = res.objective_trace
        ok &= all(tr[i + 1] <= tr[i] * (1 + 1e-9) + 1e-300 for i in range(len(tr) - 1))
        base_db = codebook_design.average_coupling_db(cov.matrix, cov.matrix, h)
        ok &= codebook_design.average_coupling_db(res.F, res.W, h) <= base_db + 1e-9

    # sigma2 = 0, unquantized: exact conjugate codebooks
    g = uniform_linear_array(8)
    h = spherical_wave_si_channel(g, g, ArrayPose())
    cov = codebook_design.coverage_spec(g, span)
    res0 = codebook_design.design_codebooks(
        h, cov, cov, codebook_design.CodebookDesignConfig(0.0, 0.0)
    )
    ok &= float(np.max(np.abs(res0.F.matrix() - cov.matrix))) <= 1e-9
    ok &= float(np.max(np.abs(res0.W.matrix() - cov.matrix))) <= 1e-9

    # frozen 16-antenna regression fixture
    g16 = uniform_linear_array(16)
    h16 = spherical_wave_si_channel(g16, g16, ArrayPose())
    cov16 = codebook_design.coverage_spec(
        g16, [Direction(float(a), 0.0) for a in np.linspace(-60, 60, 8)]
    )
    res16 = codebook_design.design_codebooks(
        h16, cov16, cov16, codebook_design.CodebookDesignConfig(0.1, 0.1)
    )
    tr16 = res16.objective_trace
    ok &= abs(tr16[0] - 24.139356308047443) <= 1e-6 * tr16[0]
    ok &= tr16[-1] <= tr16[0] * 1e-10
    _report(
        6,
        ok,
        "20 instances monotone and dominate conjugate baseline; sigma2=0 exact; "
        f"16-antenna fixture init {tr16[0]:.6f} -> final {tr16[-1]:.3e}",
    )


def test_criterion_7_steer_oracle_equivalence():
    started = time.perf_counter()
    spec = NeighborhoodSpec(2.0, 2.0, 1.0, 1.0)
    init_tx, init_rx = Direction(30.0, 0.0), Direction(-40.0, 0.0)
    offsets = neighborhood_offsets(spec)
    ok = True
    initial_feasible_seen = 0
    for k in range(200):
        mu = 20.0 if k % 4 else 45.0
        rng = np.random.default_rng(5000 + k)
        table = {
            (*t, *r): float(mu + 10.0 * rng.standard_normal()) for t in offsets for r in offsets
        }
        res = steer_select(init_tx, init_rx, spec, 0.0, MapInrMeasurer(init_tx, init_rx, table))
        oracle = brute_force_steer(
            init_tx, init_rx, spec, 0.0, MapInrMeasurer(init_tx, init_rx, table)
        )
        ok &= (res.tx_dir, res.rx_dir, res.deviation, res.met_target) == (
            oracle.tx_dir,
            oracle.rx_dir,
            oracle.deviation,
            oracle.met_target,
        )
        ok &= res.inr_db <= max(0.0, min(table.values())) + 1e-12
        ok &= res.measurements_used <= oracle.measurements_used
        if table[(0.0, 0.0, 0.0, 0.0)] <= 0.0:
            initial_feasible_seen += 1
            ok &= res.measurements_used == 1 < oracle.measurements_used
    elapsed = time.perf_counter() - started
    ok &= initial_feasible_seen >= 2 and elapsed < 30.0
    _report(
        7,
        ok,
        f"200 maps: selections match oracle, constraint holds, "
        f"{initial_feasible_seen} early exits; {elapsed:.2f}s",
    )


def test_criterion_8_steer_statistics():
    spec = NeighborhoodSpec(2.0, 2.0, 1.0, 1.0)
    init = Direction(0.0, 0.0)
    reductions = []
    for t in range(1000):
        m = simulated_measurer(init, init, spec, 20.0, 10.0, seed=derive_seed(3, f"trial-{t}"))
        initial = m.measure(init, init)
        res = steer_select(init, init, spec, -math.inf, m)
        reductions.append(initial - res.inr_db)
    median = float(np.median(reductions))
    draws = np.random.default_rng(99).standard_normal((20000, 625))
    oracle = float(np.median(10.0 * (draws[:, 0] - draws.min(axis=1))))
    gap = abs(median - oracle)
    ok = gap <= 1.0 and median >= 20.0
    _report(
        8,
        ok,
        f"median reduction {median:.2f} dB vs order-statistic oracle {oracle:.2f} dB "
        f"(gap {gap:.2f} dB); at or above the 20 dB scale",
    )


def test_criterion_9_log_normal_sampler():
    draws = sample_inr_db(LogNormalInrModel(20.0, 10.0), 10**6, seed=900)
    frac = float(np.mean(draws <= 0.0))
    phi = 0.5 * math.erfc(2.0 / math.sqrt(2.0))
    ok = abs(frac - phi) <= 3e-3
    _report(9, ok, f"P(INR <= 0 dB) = {100 * frac:.3f}% vs normal-CDF {100 * phi:.3f}%")


def test_criterion_10_cli_determinism(tmp_path):
    scenarios = {
        "rate-region": "region.snr_tx_db = 10\nregion.snr_rx_db = 10\nregion.n_points = 11\n"
        "region.inr_tx_levels_db = -inf, 0\nregion.inr_rx_levels_db = -inf, 0\n",
        "sic-fit": "master_seed = 5\nsic.n_taps = 4\nsic.tap_delay_s = 1e-9\n"
        "sic.sample_period_s = 1e-9\nsic.n_samples = 64\n",
        "codebook": "master_seed = 2\narrays.tx.n_rows = 1\narrays.tx.n_cols = 8\n"
        "arrays.rx.n_rows = 1\narrays.rx.n_cols = 8\n"
        "codebook.n_beams_tx = 4\ncodebook.n_beams_rx = 4\n",
        "steer": "master_seed = 3\nsteer.trials = 25\nsteer.small_scale_sigma_db = 10\n"
        "steer.target_inr_db = 0\nsteer.base_model = flat\nsteer.flat_base_inr_db = 20\n",
    }
    ok = True
    for command, text in scenarios.items():
        scenario = tmp_path / f"{command}.txt"
        scenario.write_text(text)
        outputs = []
        for run, threads in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"{command}_{run}"
            code = main(
                [
                    command,
                    "--scenario",
                    str(scenario),
                    "--out",
                    str(out),
                    "--threads",
                    threads,
                ]
            )
            ok &= code == 0
            outputs.append(
                {
                    p.name: p.read_bytes()
                    for p in sorted(out.iterdir())
                    if p.name != "manifest.json"
                }
            )
        ok &= outputs[0] == outputs[1] == outputs[2]
    _report(10, ok, "all four commands byte-identical across reruns and --threads 4")
