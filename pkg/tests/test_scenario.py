"""Scenario grammar, strict validation, round-trip, and seed derivation."""


import numpy as np
import pytest

from duplexforge.errors import ScenarioError
from duplexforge.scenario import (
    Scenario,
    build_link_context,
    build_si_channel,
    build_tx_geometry,
    derive_seed,
    dumps,
    load_scenario,
)

MINIMAL = """
# two-element arrays, one user each side
master_seed = 1
arrays.tx.n_rows = 1
arrays.tx.n_cols = 2
arrays.rx.n_rows = 1
arrays.rx.n_cols = 2
channels.si.model = rayleigh
channels.users.tx_direction_deg = 20, 0
channels.users.rx_direction_deg = -15, 0
region.snr_tx_db = 10
region.snr_rx_db = 10
region.n_points = 3
"""


class TestLoadScenario:
    def test_minimal_scenario_parses_and_validates(self):
        sc = load_scenario(MINIMAL)
        assert sc.master_seed == 1
        assert sc.tx_array.n_elements == 2
        assert sc.region is not None and sc.region.n_points == 3
        assert sc.sic is None and sc.codebook is None and sc.steer is None

    def test_misspelled_key_rejected_by_name(self):
        with pytest.raises(ScenarioError) as err:
            load_scenario("antenas = 4\n")
        assert any("antenas" in e for e in err.value.errors)

    def test_codebook_dimension_mismatch_reported_with_path(self):
        text = MINIMAL + "codebook.n_beams_tx = 4\ncodebook.n_beams_rx = 4\ncodebook.n_rx = 16\n"
        with pytest.raises(ScenarioError) as err:
            load_scenario(text)
        assert any("codebook.n_rx" in e and "2" in e for e in err.value.errors)

    def test_all_errors_reported_not_just_first(self):
        bad = "antenas = 4\nregion.n_points = 1\nsteer.res_theta_deg = -1\n"
        with pytest.raises(ScenarioError) as err:
            load_scenario(bad)
        assert len(err.value.errors) >= 3

    def test_duplicate_key_rejected(self):
        with pytest.raises(ScenarioError) as err:
            load_scenario("master_seed = 1\nmaster_seed = 2\n")
        assert any("duplicate" in e for e in err.value.errors)

    def test_missing_required_block_key(self):
        with pytest.raises(ScenarioError) as err:
            load_scenario("region.n_points = 5\n")
        assert any("region.snr_tx_db" in e for e in err.value.errors)

    def test_stochastic_blocks_demand_master_seed(self):
        with pytest.raises(ScenarioError) as err:
            load_scenario("steer.trials = 10\n")
        assert any("master_seed" in e for e in err.value.errors)

    def test_comments_and_blank_lines_ignored(self):
        sc = load_scenario("# only a comment\n\nmaster_seed = 7   # trailing\n")
        assert sc.master_seed == 7

    def test_inr_level_lists_must_pair(self):
        text = MINIMAL + "region.inr_tx_levels_db = 0, 10\nregion.inr_rx_levels_db = 0\n"
        # region.* duplicates are fine: the added keys are new ones
        with pytest.raises(ScenarioError) as err:
            load_scenario(text)
        assert any("pair up" in e for e in err.value.errors)


class TestRoundTrip:
    def test_serialize_parse_round_trip(self):
        sc = load_scenario(MINIMAL)
        assert load_scenario(dumps(sc)) == sc

    def test_round_trip_with_every_block(self):
        text = MINIMAL + (
            "sic.n_taps = 4\n"
            "sic.tap_delay_s = 1e-9\n"
            "sic.sample_period_s = 1e-9\n"
            "sic.n_samples = 64\n"
            "codebook.n_beams_tx = 4\n"
            "codebook.n_beams_rx = 4\n"
            "codebook.quantize = true\n"
            "steer.trials = 12\n"
            "steer.target_inr_db = -inf\n"
            "phase_shifters.amplitude_bits = 1\n"
            "phase_shifters.amplitude_levels_db = 0, -6\n"
        )
        sc = load_scenario(text)
        assert load_scenario(dumps(sc)) == sc

    def test_defaults_round_trip(self):
        sc = Scenario()
        assert load_scenario(dumps(sc)) == sc


class TestDeriveSeed:
    def test_documented_fixture(self):
        # frozen on first computation; guards the cross-platform hash
        assert derive_seed(1, "si") == 5087524480294174466

    def test_reproducible_and_label_sensitive(self):
        assert derive_seed(42, "a") == derive_seed(42, "a")
        assert derive_seed(42, "a") != derive_seed(42, "b")
        assert derive_seed(42, "a") != derive_seed(43, "a")

    def test_no_collisions_over_many_labels(self):
        seeds = {derive_seed(1, f"label-{i}") for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_master_seed_range_checked(self):
        with pytest.raises(ValueError):
            derive_seed(-1, "x")


class TestBuilders:
    def test_geometry_matches_config(self):
        sc = load_scenario(MINIMAL)
        g = build_tx_geometry(sc)
        assert g.n_elements == 2

    def test_si_channel_models(self):
        sc = load_scenario(MINIMAL)
        h = build_si_channel(sc)
        assert h.model_tag == "rayleigh" and h.matrix.shape == (2, 2)
        again = build_si_channel(sc)
        np.testing.assert_array_equal(h.matrix, again.matrix)

        sc2 = load_scenario(MINIMAL.replace("rayleigh", "none"))
        assert not np.any(build_si_channel(sc2).matrix)

        sc3 = load_scenario(MINIMAL.replace("rayleigh", "spherical_wave"))
        h3 = build_si_channel(sc3)
        assert h3.model_tag == "spherical_wave"

    def test_link_context_is_consistent(self):
        sc = load_scenario(MINIMAL)
        link = build_link_context(sc)
        assert link.f is None and link.w is None
        assert link.h_tx.coefficients.size == 2
        assert link.h_cl.coefficient == 0.0  # isolated cross-link by default

    def test_cross_link_gain_sets_magnitude(self):
        sc = load_scenario(MINIMAL + "channels.cross_link_gain_db = -20\n")
        link = build_link_context(sc)
        assert abs(link.h_cl.coefficient) == pytest.approx(0.1, abs=1e-12)
