import dataclasses

import pytest

from caresim.core import (CARE_SUPPLY_HOURS, CareLevel, Status, care_hours,
                          supply_hours)
from caresim.params import ScenarioConfig, validate_config


def test_care_hours_table_exact():
    assert care_hours(CareLevel.NONE) == 0
    assert care_hours(CareLevel.LOW) == 8
    assert care_hours(CareLevel.MODERATE) == 16
    assert care_hours(CareLevel.SUBSTANTIAL) == 32
    assert care_hours(CareLevel.CRITICAL) == 80


def test_care_hours_total_over_domain():
    for level in CareLevel:
        assert care_hours(level) >= 0


def test_supply_table_rows():
    assert CARE_SUPPLY_HOURS[Status.TEENAGER] == (16, 0, 0, 0)
    assert CARE_SUPPLY_HOURS[Status.STUDENT] == (24, 16, 8, 4)
    assert CARE_SUPPLY_HOURS[Status.EMPLOYED] == (28, 20, 12, 8)
    assert CARE_SUPPLY_HOURS[Status.UNEMPLOYED] == (32, 24, 16, 8)
    assert CARE_SUPPLY_HOURS[Status.RETIRED] == (48, 36, 20, 10)


def test_supply_rows_weakly_decreasing_in_distance():
    for row in CARE_SUPPLY_HOURS.values():
        assert all(a >= b for a, b in zip(row, row[1:]))


def test_supply_hours_zero_for_children_and_any_distance():
    for d in range(4):
        assert supply_hours(Status.CHILD, d) == 0
    assert supply_hours(Status.RETIRED, 3) == 10


def test_default_config_valid():
    assert validate_config(ScenarioConfig()).ok


def test_quantum_must_divide_care_hours():
    report = validate_config(ScenarioConfig(quantum_hours=3))
    assert not report.ok
    assert any("quantum" in v for v in report.violations)


def test_year_ordering_violation():
    report = validate_config(ScenarioConfig(end_year=2019))
    assert not report.ok
    assert any("year ordering" in v for v in report.violations)


def test_validation_never_mutates():
    cfg = ScenarioConfig(quantum_hours=3, end_year=1900)
    before = dataclasses.asdict(cfg)
    validate_config(cfg)
    assert dataclasses.asdict(cfg) == before


def test_ses_share_and_wage_ordering_checks():
    bad = ScenarioConfig(ses_shares=(0.5, 0.5, 0.0, 0.0, 0.1))
    assert not validate_config(bad).ok
    bad = ScenarioConfig(initial_wages=(7.0, 8.5, 10.0, 12.0, 11.0))
    rep = validate_config(bad)
    assert any("weakly increasing" in v for v in rep.violations)
    bad = ScenarioConfig(max_wages=(6.0, 18.0, 25.0, 35.0, 50.0))
    rep = validate_config(bad)
    assert any("initial must be < max" in v for v in rep.violations)


@pytest.mark.parametrize("field,value", [
    ("relocation_cost_exponent", 1.5),
    ("gov_care_share", 1.2),
    ("tax_rate", 1.0),
    ("policy", "subsidy"),
])
def test_misc_violations(field, value):
    cfg = ScenarioConfig(**{field: value})
    assert not validate_config(cfg).ok
