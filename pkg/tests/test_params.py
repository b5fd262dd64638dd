"""Parameter profiles: defaults, validation, and file round trips."""

import json

import pytest

from retroplan.errors import ConfigError
from retroplan.params import (ConversionFactors, CostModel, DEFAULT_PARAMS, FractionParams,
                              ThermalParams, dump_params, load_params, params_from_dict,
                              params_to_dict)
from retroplan.records import Fuel


class TestDefaults:
    def test_reference_values(self):
        t, f, c, cm = (DEFAULT_PARAMS.thermal, DEFAULT_PARAMS.fractions,
                       DEFAULT_PARAMS.conversions, DEFAULT_PARAMS.costs)
        assert (t.kr_over_lr, t.kappa_i) == (1.06, 0.03)
        assert (t.u_single, t.u_double, t.u_triple) == (5.74, 2.7, 0.7)
        assert (f.alpha_insulation, f.alpha_windows, f.alpha_lighting, f.alpha_heating) == \
            (0.06, 0.12, 0.03, 0.6)
        assert (f.led_power_ratio, f.hp_electricity_fraction) == (0.25, 0.25)
        assert (c.co2_gas, c.co2_grid, c.gbp_gas, c.gbp_elec) == (0.184, 0.20, 0.08, 0.30)
        assert (cm.loft_material, cm.loft_install, cm.hp_base) == (1.5, 15.0, 11000.0)

    def test_fuel_selection(self):
        c = DEFAULT_PARAMS.conversions
        assert c.co2(Fuel.GAS) == 0.184
        assert c.co2(Fuel.ELECTRICITY) == 0.20
        assert c.gbp(Fuel.ELECTRICITY) == 0.30

    def test_calibrated_fields_flagged(self):
        assert "install_days_per_m2" in CostModel.CALIBRATED
        assert "hp_area_threshold" in CostModel.CALIBRATED


class TestValidation:
    def test_u_ordering_enforced(self):
        with pytest.raises(ConfigError):
            ThermalParams(u_single=2.0, u_double=3.0)

    def test_fraction_bounds(self):
        with pytest.raises(ConfigError):
            FractionParams(alpha_heating=1.5)

    def test_conversions_positive(self):
        with pytest.raises(ConfigError):
            ConversionFactors(gbp_gas=0.0)

    def test_costs_non_negative(self):
        with pytest.raises(ConfigError):
            CostModel(loft_install=-1.0)


class TestProfiles:
    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "profile.json"
        dump_params(DEFAULT_PARAMS, path)
        assert load_params(path) == DEFAULT_PARAMS

    def test_partial_profile_overrides_section(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"conversions": {"gbp_gas": 0.10}}))
        params = load_params(path)
        assert params.conversions.gbp_gas == 0.10
        assert params.thermal == DEFAULT_PARAMS.thermal

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"thermal": {"u_quadruple": 0.1}}))
        with pytest.raises(ConfigError, match="u_quadruple"):
            load_params(path)

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigError):
            params_from_dict({"fractions": {"alpha_windows": 2.0}})

    def test_toml_profile(self, tmp_path):
        tomllib = pytest.importorskip("tomli")
        path = tmp_path / "profile.toml"
        path.write_text('[conversions]\ngbp_gas = 0.09\n')
        params = load_params(path)
        assert params.conversions.gbp_gas == 0.09

    def test_replace_is_pure(self):
        updated = DEFAULT_PARAMS.replace(thermal={"delta_t": 8.0})
        assert updated.thermal.delta_t == 8.0
        assert DEFAULT_PARAMS.thermal.delta_t == 10.0
        assert params_to_dict(updated)["thermal"]["delta_t"] == 8.0
