"""Channel generation: LOS rays, spherical-wave SI, samplers, determinism."""

import math

import numpy as np
import pytest

from duplexforge.arrays import Direction, uniform_linear_array, uniform_planar_array
from duplexforge.arrays import conjugate_beam, steering_vector
from duplexforge.channels import (
    ArrayGeometry,
    ArrayPose,
    LogNormalInrModel,
    cross_link_channel,
    los_user_channel,
    rayleigh_si_channel,
    rotation_zyx_deg,
    sample_inr_db,
    spherical_wave_si_channel,
)


def _point(x=0.0, y=0.0, z=0.0):
    return ArrayGeometry(np.array([[x, y, z]]))


class TestLosUserChannel:
    def test_unit_gain_norm(self):
        h = los_user_channel(uniform_linear_array(4), Direction(12.0, 0.0), 0.0)
        assert np.linalg.norm(h.coefficients) ** 2 == pytest.approx(4.0, abs=1e-9)

    def test_matched_beam_gain_factor(self):
        g = uniform_linear_array(8)
        d = Direction(-28.0, 4.0)
        gain_db = -7.0
        h = los_user_channel(g, d, gain_db)
        f = conjugate_beam(g, d)
        power = abs(np.vdot(h.coefficients, f.weights)) ** 2
        assert power == pytest.approx(8**2 * 10 ** (gain_db / 10), rel=1e-9)

    def test_gain_scales_amplitude(self):
        g = uniform_linear_array(4)
        d = Direction(0.0, 0.0)
        h0 = los_user_channel(g, d, 0.0).coefficients
        h10 = los_user_channel(g, d, -10.0).coefficients
        np.testing.assert_allclose(h10, h0 * 10**-0.5, atol=1e-12)


class TestSphericalWave:
    def test_one_wavelength_separation(self):
        h = spherical_wave_si_channel(_point(), _point(), ArrayPose(np.array([1.0, 0, 0])))
        np.testing.assert_allclose(h.matrix, [[1.0]], atol=1e-12)

    def test_two_and_a_half_wavelengths(self):
        h = spherical_wave_si_channel(_point(), _point(), ArrayPose(np.array([2.5, 0, 0])))
        np.testing.assert_allclose(h.matrix, [[-0.4]], atol=1e-12)

    def test_rho_scales_linearly(self):
        tx = uniform_linear_array(4)
        rx = uniform_linear_array(3)
        h1 = spherical_wave_si_channel(tx, rx, ArrayPose(), rho=1.0)
        h2 = spherical_wave_si_channel(tx, rx, ArrayPose(), rho=2.0)
        np.testing.assert_array_equal(h2.matrix, 2.0 * h1.matrix)

    def test_amplitude_times_distance_is_rho(self):
        tx = uniform_planar_array(2, 2)
        rx = uniform_planar_array(3, 2)
        pose = ArrayPose(np.array([7.0, 1.0, -2.0]), rotation_zyx_deg(30.0, 10.0, -20.0))
        rho = 1.7
        h = spherical_wave_si_channel(tx, rx, pose, rho)
        rx_world = rx.element_positions @ pose.rotation.T + pose.translation
        r = np.linalg.norm(rx_world[:, None, :] - tx.element_positions[None, :, :], axis=2)
        np.testing.assert_allclose(np.abs(h.matrix) * r, rho, atol=1e-12)

    def test_reciprocity_under_pose_inversion(self):
        tx = uniform_planar_array(2, 3)
        rx = uniform_linear_array(4)
        pose = ArrayPose(np.array([6.0, -3.0, 1.5]), rotation_zyx_deg(25.0, -40.0, 5.0))
        h = spherical_wave_si_channel(tx, rx, pose)
        h_swapped = spherical_wave_si_channel(rx, tx, pose.inverse())
        np.testing.assert_allclose(h_swapped.matrix, h.matrix.T, atol=1e-9)

    def test_coincident_elements_rejected(self):
        with pytest.raises(ValueError):
            spherical_wave_si_channel(_point(), _point(), ArrayPose(np.zeros(3)))

    def test_rotation_must_be_orthonormal(self):
        with pytest.raises(ValueError):
            ArrayPose(np.zeros(3), np.ones((3, 3)))


class TestRayleigh:
    def test_deterministic_given_seed(self):
        a = rayleigh_si_channel(3, 2, seed=123)
        b = rayleigh_si_channel(3, 2, seed=123)
        np.testing.assert_array_equal(a.matrix, b.matrix)
        c = rayleigh_si_channel(3, 2, seed=124)
        assert not np.array_equal(a.matrix, c.matrix)

    def test_unit_entry_power(self):
        h = rayleigh_si_channel(1000, 1000, seed=9)
        assert np.mean(np.abs(h.matrix) ** 2) == pytest.approx(1.0, abs=5e-3)


class TestLogNormalInr:
    def test_zero_sigma_is_constant(self):
        draws = sample_inr_db(LogNormalInrModel(20.0, 0.0), 100, seed=1)
        np.testing.assert_array_equal(draws, 20.0)

    def test_below_noise_floor_fraction_matches_normal_cdf(self):
        draws = sample_inr_db(LogNormalInrModel(20.0, 10.0), 10**6, seed=2)
        frac = np.mean(draws <= 0.0)
        phi_minus_2 = 0.5 * math.erfc(2.0 / math.sqrt(2.0))
        assert frac == pytest.approx(phi_minus_2, abs=3e-3)

    def test_median_near_mu(self):
        draws = sample_inr_db(LogNormalInrModel(20.0, 10.0), 10**6, seed=3)
        assert np.median(draws) == pytest.approx(20.0, abs=0.05)

    def test_seed_sensitivity(self):
        a = sample_inr_db(LogNormalInrModel(), 100, seed=1)
        np.testing.assert_array_equal(a, sample_inr_db(LogNormalInrModel(), 100, seed=1))
        assert not np.array_equal(a, sample_inr_db(LogNormalInrModel(), 100, seed=2))

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            LogNormalInrModel(0.0, -1.0)


class TestCrossLink:
    def test_isolated_link_is_zero(self):
        assert cross_link_channel(-math.inf, seed=0).coefficient == 0.0

    def test_unit_gain_magnitude(self):
        h = cross_link_channel(0.0, seed=5)
        assert abs(h.coefficient) == pytest.approx(1.0, abs=1e-12)

    def test_seed_reproducibility(self):
        assert cross_link_channel(-3.0, seed=7) == cross_link_channel(-3.0, seed=7)


def test_steering_and_los_share_phase_convention():
    g = uniform_linear_array(5)
    d = Direction(33.0, 0.0)
    np.testing.assert_allclose(
        los_user_channel(g, d, 0.0).coefficients, steering_vector(g, d), atol=1e-12
    )
