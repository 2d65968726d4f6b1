import pytest

from ris_sim.config import (
    ScenarioConfig,
    config_digest,
    parse_config,
    validate_config,
)
from ris_sim.errors import InvalidConfigError
from ris_sim.geometry import ScenarioKind


class TestDefaults:
    def test_empty_file_gives_full_default_config(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        cfg = parse_config(path)
        assert cfg.layout.isd_m == 500.0
        assert cfg.layout.bs_height_m == 25.0
        assert cfg.layout.ris_height_m == 15.0
        assert cfg.layout.ue_height_m == 1.5
        assert cfg.layout.bs_downtilt_deg == 0.0
        assert cfg.layout.ris_downtilt_deg == 10.0
        assert cfg.carrier.frequency_hz == 2.6e9
        assert cfg.ris.spacing_h_wl == 0.5
        assert cfg.ris.spacing_v_wl == 0.8
        assert cfg.ris.rows == 16 and cfg.ris.cols == 16
        assert cfg.ris.per_sector == 8
        assert cfg.drop.scenario is ScenarioKind.UE_RANDOM_RIS_EDGE

    def test_best_case_configuration(self, tmp_path):
        path = tmp_path / "best.yaml"
        path.write_text("ris:\n  per_sector: 16\n  rows: 40\n  cols: 40\n")
        cfg = parse_config(path)
        assert cfg.ris.per_sector == 16
        assert cfg.ris.rows == 40 and cfg.ris.cols == 40

    def test_json_is_accepted_too(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"drop": {"seed": 9, "drops": 3}}')
        cfg = parse_config(path)
        assert cfg.drop.seed == 9 and cfg.drop.drops == 3


class TestValidation:
    def test_unknown_key_is_an_error_with_path(self):
        with pytest.raises(InvalidConfigError) as err:
            validate_config({"ris": {"rows": 16, "pitch": 0.5}})
        assert "ris.pitch" in str(err.value)

    def test_bad_value_reports_key_path(self):
        with pytest.raises(InvalidConfigError) as err:
            validate_config({"carrier": {"frequency_hz": -1.0}})
        assert "carrier.frequency_hz" in str(err.value)

    def test_negative_spacing_rejected(self):
        with pytest.raises(InvalidConfigError):
            validate_config({"ris": {"spacing_h_wl": -0.5}})

    def test_wide_spacing_accepted_without_complaint(self):
        cfg = validate_config({"ris": {"spacing_h_wl": 0.9}})
        assert cfg.ris.spacing_h_wl == 0.9

    def test_unknown_scenario_rejected(self):
        with pytest.raises(InvalidConfigError):
            validate_config({"drop": {"scenario": "ue_in_orbit"}})

    def test_non_mapping_file_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("- just\n- a\n- list\n")
        with pytest.raises(InvalidConfigError):
            parse_config(path)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(InvalidConfigError):
            parse_config(tmp_path / "nope.yaml")

    def test_malformed_yaml_rejected(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("ris: {rows: [unclosed\n")
        with pytest.raises(InvalidConfigError):
            parse_config(path)


class TestDigestAndRoundTrip:
    def test_digest_stable_and_sensitive(self):
        a = validate_config({})
        b = validate_config({})
        assert config_digest(a) == config_digest(b)
        c = validate_config({"drop": {"seed": 2}})
        assert config_digest(c) != config_digest(a)

    def test_round_trip_through_dump(self):
        cfg = validate_config(
            {"ris": {"per_sector": 16, "rows": 40, "cols": 40},
             "drop": {"seed": 123, "scenario": "ue_edge_ris_edge"}}
        )
        again = validate_config(cfg.model_dump(mode="json"))
        assert again == cfg
        assert config_digest(again) == config_digest(cfg)

    def test_with_overrides(self):
        cfg = validate_config({})
        out = cfg.with_overrides(seed=77, drops=3, ris_per_sector=0)
        assert out.drop.seed == 77
        assert out.drop.drops == 3
        assert out.ris.per_sector == 0
        # untouched sections stay equal
        assert out.carrier == cfg.carrier
