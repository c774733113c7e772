"""Configuration defaults, validation rules, and the key = value format."""

import pytest

from antwsn.config import (ConfigError, SimConfig, config_from_mapping,
                           load_config, parse_kv_text)


class TestDefaults:
    def test_reference_setup(self):
        cfg = SimConfig()
        assert cfg.protocol == "ieeabr"
        assert cfg.nodes == 49
        assert cfg.layout == "random-square"
        assert cfg.scenario == "static"
        assert cfg.duration == 100.0
        assert cfg.traffic_rate == 0.5
        assert cfg.ant_interval == 2.0
        assert cfg.cache_timeout == 3.0
        assert cfg.bitrate == 40_000.0

    def test_frame_sizes_in_bits(self):
        cfg = SimConfig()
        assert cfg.ant_bits == 160
        assert cfg.data_bits == 400

    def test_energy_budget_tracks_scenario(self):
        assert SimConfig(scenario="static").energy_budget == 30.0
        assert SimConfig(scenario="dynamic").energy_budget == 60.0
        assert SimConfig(initial_energy=7.5).energy_budget == 7.5
        assert SimConfig(scenario="dynamic", initial_energy=7.5).energy_budget == 7.5

    def test_protocol_name_is_case_insensitive(self):
        assert SimConfig(protocol="IEEABR").protocol == "ieeabr"

    def test_stream_overrides_collects_only_set_seeds(self):
        cfg = SimConfig(seed_radio=11, seed_protocol=12)
        assert cfg.stream_overrides() == {"radio": 11, "protocol": 12}
        assert SimConfig().stream_overrides() == {}

    def test_replace_returns_validated_copy(self):
        cfg = SimConfig()
        other = cfg.replace(nodes=16, layout="grid")
        assert other.nodes == 16
        assert cfg.nodes == 49
        with pytest.raises(ConfigError):
            cfg.replace(nodes=15, layout="grid")


class TestValidation:
    @pytest.mark.parametrize("bad", [
        dict(protocol="dsr"),
        dict(layout="ring"),
        dict(scenario="hybrid"),
        dict(nodes=1),
        dict(nodes=12, layout="grid"),     # not a perfect square
        dict(duration=0.0),
        dict(traffic_rate=0.0),
        dict(traffic_rate=-1.0),
        dict(initial_energy=0.0),
        dict(gamma=1.5),
        dict(gamma=4.5),
        dict(sigma_alpha=-0.1),
        dict(sigma_beta=-1e-6),
        dict(c1=0.7, c2=0.2),              # weights must sum to one
        dict(eta=0.0),
        dict(eta=1.0),
        dict(rho=0.0),
        dict(rho=1.0),
        dict(phi=0.0),
        dict(tau0=0.0),
        dict(tau0=-0.5),
        dict(ant_cap_multiplier=0),
        dict(conf_gamma=0.0),
        dict(conf_gamma=1.0),
        dict(ant_interval=0.0),
        dict(cache_timeout=0.0),
        dict(trip_window=0),
    ])
    def test_rejected(self, bad):
        with pytest.raises(ConfigError):
            SimConfig(**bad)

    @pytest.mark.parametrize("ok", [
        dict(gamma=2.0),
        dict(gamma=4.0),
        dict(nodes=2),
        dict(nodes=16, layout="grid"),
        dict(sigma_alpha=0.0, sigma_beta=0.0),
        dict(c1=0.0, c2=1.0),
        dict(tau0=0.02),
        dict(trip_window=1),
    ])
    def test_boundaries_accepted(self, ok):
        SimConfig(**ok)


class TestKvFormat:
    def test_parse_with_comments_and_blanks(self):
        text = """
        # reference run
        protocol = babr
        nodes = 49   # a 7x7-ish field
        traffic_rate = 0.25
        """
        assert parse_kv_text(text) == {
            "protocol": "babr", "nodes": "49", "traffic_rate": "0.25"}

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_kv_text("protocol babr")

    def test_empty_value_rejected(self):
        with pytest.raises(ConfigError):
            parse_kv_text("protocol =")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_kv_text("nodes = 9\nnodes = 16")

    def test_mapping_types_are_converted(self):
        cfg = config_from_mapping({
            "protocol": "eeabr", "nodes": "25", "traffic_rate": "0.1",
            "tau0": "0.05", "seed_radio": "9"})
        assert cfg.nodes == 25
        assert cfg.traffic_rate == 0.1
        assert cfg.tau0 == 0.05
        assert cfg.seed_radio == 9

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            config_from_mapping({"nodess": "49"})

    def test_bad_int_rejected(self):
        with pytest.raises(ConfigError, match="expects an integer"):
            config_from_mapping({"nodes": "many"})

    def test_bad_float_rejected(self):
        with pytest.raises(ConfigError, match="expects a number"):
            config_from_mapping({"traffic_rate": "fast"})

    def test_non_string_values_pass_through(self):
        cfg = config_from_mapping({"nodes": 25, "traffic_rate": 0.1})
        assert cfg.nodes == 25

    def test_load_config_round_trip(self, tmp_path):
        p = tmp_path / "run.conf"
        p.write_text("protocol = fp\nnodes = 9\nlayout = grid\nseed = 3\n")
        cfg = load_config(str(p))
        assert (cfg.protocol, cfg.nodes, cfg.layout, cfg.seed) == ("fp", 9, "grid", 3)
