import numpy as np
import pytest

from retroplan.records import (AgeBand, BuiltForm, DwellingRecord, Fuel, PropertyType)


def make_record(**overrides) -> DwellingRecord:
    base = dict(
        id="r1", borough="Camden", property_type=PropertyType.HOUSE,
        built_form=BuiltForm.SEMI_DETACHED, age_band=AgeBand.B1930_1949,
        floor_area=109.0, floor_height=2.5, annual_consumption=29530.0,
        multi_glaze_proportion=0.0, low_energy_lighting=0.0,
        loft_insulation_cm=0.0, main_fuel=Fuel.GAS, has_heat_pump=False,
    )
    base.update(overrides)
    return DwellingRecord(**base)


@pytest.fixture
def record():
    return make_record()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
