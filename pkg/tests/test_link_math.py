"""Scalar duplexing math: worked examples, closed forms, and ordering properties."""

import math

import numpy as np
import pytest

from duplexforge.errors import ConfigError
from duplexforge.link_math import (
    DuplexShare,
    LinkBudget,
    LinkInrs,
    LinkSnrs,
    RatePoint,
    capacity_fd,
    db_to_linear,
    linear_to_db,
    rate_fd,
    rate_fdd,
    rate_region_boundary,
    rate_tdd,
    residual_si_inr,
    sinr,
)

LOG2_11 = math.log2(11.0)


class TestSinr:
    def test_inr_at_noise_floor_halves_snr(self):
        assert sinr(10.0, 1.0) == pytest.approx(5.0, abs=1e-12)

    def test_zero_interference_is_identity(self):
        assert sinr(7.3, 0.0) == 7.3

    def test_direct_evaluation(self):
        assert sinr(10.0, 9.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("snr,inr", [(-1.0, 0.0), (1.0, -0.5)])
    def test_negative_inputs_rejected(self, snr, inr):
        with pytest.raises(ValueError):
            sinr(snr, inr)

    def test_monotone_in_snr_and_inr(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            snr, inr = rng.uniform(0, 100, 2)
            eps = rng.uniform(0.01, 1.0)
            assert sinr(snr + eps, inr) > sinr(snr, inr)
            assert sinr(snr, inr + eps) < sinr(snr, inr)


class TestResidualSiInr:
    def test_worked_budget_example(self):
        # 20 dBm transmit, -90 dBm noise: 110 dB of mitigation puts SI at the floor.
        assert residual_si_inr(LinkBudget(20.0, -90.0, 110.0)) == pytest.approx(0.0, abs=1e-12)

    def test_no_cancellation(self):
        assert residual_si_inr(LinkBudget(20.0, -90.0, 0.0)) == pytest.approx(110.0, abs=1e-12)

    def test_db_arithmetic(self):
        assert residual_si_inr(LinkBudget(10.0, -85.0, 100.0)) == pytest.approx(-5.0, abs=1e-12)

    def test_negative_cancellation_rejected(self):
        with pytest.raises(ValueError):
            LinkBudget(20.0, -90.0, -1.0)


class TestRates:
    def test_capacity(self):
        c = capacity_fd(LinkSnrs(10.0, 10.0))
        assert c.r_tx == pytest.approx(3.459431619, abs=1e-9)
        assert c.sum_rate == pytest.approx(6.918863237, abs=1e-9)
        assert capacity_fd(LinkSnrs(0.0, 0.0)) == RatePoint(0.0, 0.0)
        c13 = capacity_fd(LinkSnrs(1.0, 3.0))
        assert c13.r_tx == pytest.approx(1.0, abs=1e-12)
        assert c13.r_rx == pytest.approx(2.0, abs=1e-12)

    def test_fd_collapses_to_capacity_without_interference(self):
        snrs = LinkSnrs(10.0, 10.0)
        p = rate_fd(snrs, LinkInrs(0.0, 0.0))
        c = capacity_fd(snrs)
        assert p.r_tx == c.r_tx and p.r_rx == c.r_rx

    def test_fd_with_unit_inrs(self):
        p = rate_fd(LinkSnrs(10.0, 10.0), LinkInrs(1.0, 1.0))
        assert p.r_tx == pytest.approx(2.584962501, abs=1e-9)  # log2(6)
        assert p.r_rx == pytest.approx(2.584962501, abs=1e-9)

    def test_fd_infinite_interference_kills_the_link(self):
        p = rate_fd(LinkSnrs(10.0, 10.0), LinkInrs(0.0, 1e100))
        assert p.r_tx == pytest.approx(LOG2_11, abs=1e-9)
        assert p.r_rx == pytest.approx(0.0, abs=1e-12)

    def test_tdd(self):
        snrs = LinkSnrs(10.0, 10.0)
        half = rate_tdd(snrs, DuplexShare(0.5))
        assert half.r_tx == pytest.approx(1.729715809, abs=1e-9)
        greedy = rate_tdd(snrs, DuplexShare(1.0))
        assert greedy.r_tx == pytest.approx(3.459431619, abs=1e-9)
        assert greedy.r_rx == 0.0
        rx_only = rate_tdd(LinkSnrs(3.0, 15.0), DuplexShare(0.0))
        assert rx_only.r_tx == 0.0
        assert rx_only.r_rx == pytest.approx(4.0, abs=1e-12)

    def test_fdd(self):
        snrs = LinkSnrs(10.0, 10.0)
        half = rate_fdd(snrs, DuplexShare(0.5))
        assert half.r_tx == pytest.approx(2.196158711, abs=1e-9)  # 0.5*log2(21)
        limit = rate_fdd(snrs, DuplexShare(1.0))
        assert limit.r_tx == pytest.approx(3.459431619, abs=1e-9)
        assert limit.r_rx == 0.0

    def test_fdd_dominates_tdd(self):
        # Bandwidth shrinkage boosts per-link SNR, so FDD never loses to TDD.
        snrs = LinkSnrs(10.0, 10.0)
        quarter = DuplexShare(0.25)
        assert rate_fdd(snrs, quarter).sum_rate >= rate_tdd(snrs, quarter).sum_rate
        rng = np.random.default_rng(7)
        for _ in range(100):
            s = LinkSnrs(*rng.uniform(0.0, 50.0, 2))
            a = DuplexShare(float(rng.uniform(0.0, 1.0)))
            assert rate_fdd(s, a).sum_rate >= rate_tdd(s, a).sum_rate - 1e-12
        for edge in (0.0, 1.0):
            s = LinkSnrs(5.0, 9.0)
            assert rate_fdd(s, DuplexShare(edge)).sum_rate == pytest.approx(
                rate_tdd(s, DuplexShare(edge)).sum_rate, abs=1e-12
            )

    def test_capacity_bounds_fd_rates(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            snrs = LinkSnrs(*rng.uniform(0.0, 100.0, 2))
            inrs = LinkInrs(*rng.uniform(0.0, 100.0, 2))
            fd = rate_fd(snrs, inrs)
            assert 0.0 <= fd.sum_rate <= capacity_fd(snrs).sum_rate + 1e-12

    def test_alpha_range_enforced(self):
        with pytest.raises(ValueError):
            DuplexShare(1.5)


class TestRateRegionBoundary:
    def test_tdd_three_point_sweep(self):
        pts = rate_region_boundary("tdd", LinkSnrs(10.0, 10.0), n_points=3)
        expected = [(3.4594, 0.0), (1.7297, 1.7297), (0.0, 3.4594)]
        for bp, (r_tx, r_rx) in zip(pts, expected):
            assert bp.point.r_tx == pytest.approx(r_tx, abs=1e-4)
            assert bp.point.r_rx == pytest.approx(r_rx, abs=1e-4)
        # All sums tie; the star resolves toward the smaller alpha.
        stars = [bp for bp in pts if bp.is_star]
        assert len(stars) == 1 and stars[0].alpha == 0.0

    def test_fd_rectangle(self):
        pts = rate_region_boundary("fd", LinkSnrs(10.0, 10.0), LinkInrs(0.0, 0.0))
        assert len(pts) == 3
        corner = pts[1]
        assert corner.is_star
        assert corner.point.sum_rate == pytest.approx(6.9189, abs=1e-4)
        assert pts[0].point.r_rx == 0.0 and pts[2].point.r_tx == 0.0

    def test_fd_corner_with_noise_floor_interference(self):
        pts = rate_region_boundary("fd", LinkSnrs(10.0, 10.0), LinkInrs(1.0, 1.0))
        assert pts[1].point.sum_rate == pytest.approx(5.169925, abs=1e-6)

    def test_tdd_endpoints_match_capacity_intercepts(self):
        snrs = LinkSnrs(4.0, 17.0)
        pts = rate_region_boundary("tdd", snrs, n_points=5)
        c = capacity_fd(snrs)
        assert pts[0].point.r_tx == pytest.approx(c.r_tx, abs=1e-12)
        assert pts[-1].point.r_rx == pytest.approx(c.r_rx, abs=1e-12)

    def test_bad_inputs(self):
        with pytest.raises(ConfigError):
            rate_region_boundary("tdd", LinkSnrs(1.0, 1.0), n_points=1)
        with pytest.raises(ConfigError):
            rate_region_boundary("cdma", LinkSnrs(1.0, 1.0))


def test_db_conversions_round_trip():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(-math.inf) == 0.0
    assert linear_to_db(0.0) == -300.0
    rng = np.random.default_rng(3)
    for x in rng.uniform(-50, 50, 50):
        assert linear_to_db(db_to_linear(x)) == pytest.approx(x, abs=1e-10)
