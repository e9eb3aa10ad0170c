import math

import numpy as np
import pytest

from caresim.core import CareLevel, Sex, Status
from caresim.economy import (SalaryCurve, care_budget_share, collect_taxes,
                             education_continue_probability, enter_workforce,
                             hourly_wage, ill_health_pension_factor,
                             job_market_step, pension_weekly, social_transitions,
                             update_experience)
from caresim.params import ScenarioConfig

from conftest import add_agent, add_household, grid_state, short_config

# frozen: 40 * exp(ln(10/40) * e^-1), 50-digit evaluation
WAGE_I10_F40_R025_T4 = 24.02008269125482321808
# frozen: 1 - e^-1
SHARE_BETA001_X100 = 0.6321205588285576784045


def test_wage_starts_at_initial():
    curve = SalaryCurve(10.0, 40.0, 0.25)
    assert hourly_wage(curve, 0.0) == pytest.approx(10.0, rel=1e-12)


def test_wage_saturates_at_max():
    curve = SalaryCurve(10.0, 40.0, 0.25)
    assert hourly_wage(curve, 200.0) == pytest.approx(40.0, abs=1e-9)


def test_wage_pinned_value():
    curve = SalaryCurve(10.0, 40.0, 0.25)
    assert hourly_wage(curve, 4.0) == pytest.approx(WAGE_I10_F40_R025_T4, abs=1e-12)


def test_wage_monotone_and_bounded_random_tuples():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        i = rng.uniform(1.0, 30.0)
        f = i + rng.uniform(0.5, 60.0)
        r = rng.uniform(0.01, 1.0)
        t1 = rng.uniform(0.0, 40.0)
        t2 = t1 + rng.uniform(0.01, 10.0)
        curve = SalaryCurve(i, f, r)
        w1, w2 = hourly_wage(curve, t1), hourly_wage(curve, t2)
        assert w2 >= w1
        if r * t2 < 20.0:  # below float64 saturation of the double exponential
            assert w2 > w1
        assert i - 1e-12 <= w1 <= f + 1e-12


def test_experience_update():
    assert update_experience(0.0, 1.0, 0.0) == 1.0
    assert update_experience(10.0, 0.0, 0.05) == pytest.approx(9.5)
    t = 3.0
    for _ in range(5):
        t = update_experience(t, 0.0, 0.1)
    assert t == pytest.approx(3.0 * 0.9 ** 5)


def test_less_work_means_lower_wage_after_ten_years():
    curve = SalaryCurve(8.0, 30.0, 0.2)
    full, half = 0.0, 0.0
    for _ in range(10):
        full = update_experience(full, 1.0, 0.05)
        half = update_experience(half, 0.5, 0.05)
    assert hourly_wage(curve, half) < hourly_wage(curve, full)


def test_care_budget_share():
    assert care_budget_share(0.0, 0.01) == 0.0
    assert care_budget_share(1e9, 0.01) == pytest.approx(1.0)
    assert care_budget_share(100.0, 0.01) == pytest.approx(SHARE_BETA001_X100, abs=1e-12)
    assert 0.0 <= care_budget_share(350.0, 0.002) < 1.0


# -- pensions -----------------------------------------------------------------


def test_pension_normal_retirement():
    cfg = short_config(pension_ratio=0.5, pension_floor_weekly=0.0)
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=65, status=Status.UNEMPLOYED, wage=10.0)
    assert pension_weekly(state, agent, 65) == pytest.approx(0.5 * 10.0 * 40.0)


def test_pension_ill_health_low_need():
    # span 16..65 -> 49 working years; retiring at 40 loses 25
    cfg = short_config(pension_ratio=0.5, pension_floor_weekly=0.0)
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=40, sex=Sex.MALE, status=Status.UNEMPLOYED,
                      wage=10.0, care=CareLevel.LOW)
    expected = 0.5 * 10.0 * 40.0 * (1.0 - 25.0 / 49.0)
    assert pension_weekly(state, agent, 40) == pytest.approx(expected, abs=1e-12)


def test_pension_ill_health_critical_halves_lost_years():
    cfg = short_config(pension_ratio=0.5, pension_floor_weekly=0.0)
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=40, sex=Sex.MALE, status=Status.UNEMPLOYED,
                      wage=10.0, care=CareLevel.CRITICAL)
    expected = 0.5 * 10.0 * 40.0 * (1.0 - 12.5 / 49.0)
    assert pension_weekly(state, agent, 40) == pytest.approx(expected, abs=1e-12)


def test_pension_factor_pinned():
    assert ill_health_pension_factor(CareLevel.LOW, 25, 49) == pytest.approx(
        0.4897959183673469387755, abs=1e-12)
    assert ill_health_pension_factor(CareLevel.CRITICAL, 25, 49) == pytest.approx(
        0.7448979591836734693878, abs=1e-12)


def test_pension_floor_applies():
    cfg = short_config(pension_ratio=0.5, pension_floor_weekly=100.0)
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=65, sex=Sex.MALE, status=Status.UNEMPLOYED, wage=1.0)
    assert pension_weekly(state, agent, 65) == 100.0


# -- education ----------------------------------------------------------------


def test_forced_workforce_entry_at_24():
    cfg = short_config()
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=24, status=Status.STUDENT, ses=0)
    agent.hourly_wage = 0.0
    agent.worked_fraction = 0.0
    social_transitions(state, state.year, state.rng["economy"], {})
    assert agent.status == Status.UNEMPLOYED
    assert agent.education_level == 4
    assert agent.ses == 4


def test_exit_age_to_ses_mapping():
    # leaving at 20 means two completed stages -> C1 (index 2)
    cfg = short_config(education_theta0=-50.0)  # forces EnterWorkforce
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=20, status=Status.STUDENT, ses=0)
    agent.hourly_wage = 0.0
    agent.worked_fraction = 0.0
    social_transitions(state, state.year, state.rng["economy"], {})
    assert agent.status == Status.UNEMPLOYED
    assert agent.ses == 2


def test_continuation_probability_floor_and_monotonicity():
    cfg = short_config()
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=16, status=Status.TEENAGER, ses=0)
    agent.hourly_wage = 0.0
    agent.worked_fraction = 0.0
    agent.parent_max_education = 0
    # all drivers at their minimum: probability is the configured floor
    floor = 1.0 / (1.0 + math.exp(-cfg.education_theta0))
    assert education_continue_probability(state, agent, 0.0) == pytest.approx(floor)
    # adding parental headroom raises it; care hours lower it
    agent.parent_max_education = 3
    higher = education_continue_probability(state, agent, 0.0)
    assert higher > floor
    assert education_continue_probability(state, agent, 20.0) < higher
    # income channel
    add_agent(state, hh, age=45, status=Status.EMPLOYED, wage=30.0)
    agent.parent_max_education = 0
    assert education_continue_probability(state, agent, 0.0) > floor


def test_enter_workforce_sets_ses_from_education():
    cfg = short_config()
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=18, status=Status.TEENAGER, ses=0)
    agent.hourly_wage = 0.0
    agent.education_level = 1
    enter_workforce(agent)
    assert agent.ses == 1
    assert agent.status == Status.UNEMPLOYED


# -- job market -----------------------------------------------------------------


def _unemployment_csv(tmp_path, rate):
    path = tmp_path / "u.csv"
    path.write_text(f"year,age_band,ses,rate\n,,,{rate}\n")
    return str(path)


def test_no_hires_at_full_unemployment(tmp_path):
    cfg = short_config(unemployment_csv=_unemployment_csv(tmp_path, 1.0))
    state = grid_state(cfg)
    hh = add_household(state)
    for _ in range(30):
        add_agent(state, hh, age=30, status=Status.UNEMPLOYED)
    pending, _ = job_market_step(state, state.year, state.rng["economy"])
    assert not pending
    assert all(a.status == Status.UNEMPLOYED for a in state.agents.values())


def test_hire_probability_increases_with_ses():
    cfg = ScenarioConfig()
    state = grid_state(cfg)
    hh = add_household(state)
    a_low = add_agent(state, hh, age=40, sex=Sex.MALE, status=Status.UNEMPLOYED, ses=0)
    a_high = add_agent(state, hh, age=40, sex=Sex.MALE, status=Status.UNEMPLOYED, ses=4)
    u_low = state.tables.unemployment_rate(2000, 40, 0)
    u_high = state.tables.unemployment_rate(2000, 40, 4)
    assert cfg.job_turnover * (1 - u_high) > cfg.job_turnover * (1 - u_low)


def test_hires_set_wage_from_curve(tmp_path):
    cfg = short_config(unemployment_csv=_unemployment_csv(tmp_path, 0.0))
    state = grid_state(cfg)
    hh = add_household(state)
    agent = add_agent(state, hh, age=30, sex=Sex.MALE, status=Status.UNEMPLOYED, ses=2)
    agent.work_experience = 5.0
    job_market_step(state, state.year, state.rng["economy"])
    assert agent.status == Status.EMPLOYED
    assert agent.hourly_wage == pytest.approx(
        hourly_wage(SalaryCurve(*cfg.ses_curve(2)), 5.0))


# -- taxes -----------------------------------------------------------------------


def test_zero_rate_zero_revenue():
    cfg = short_config(tax_rate=0.0)
    state = grid_state(cfg)
    hh = add_household(state)
    add_agent(state, hh, age=40, status=Status.EMPLOYED, wage=20.0)
    assert collect_taxes(state, state.year)[0] == 0.0


def test_tax_deduction_arithmetic():
    # weekly income 500, care spend 100, rate 20%
    cfg = short_config(tax_rate=0.2, policy="tax", weekly_work_hours=40.0)
    state = grid_state(cfg)
    state.year = cfg.policy_year
    hh = add_household(state)
    add_agent(state, hh, age=40, status=Status.EMPLOYED, wage=12.5)  # 500/week
    hh.formal_spend_weekly = 100.0
    revenue, cost = collect_taxes(state, cfg.policy_year)
    assert revenue == pytest.approx(0.2 * 400.0 * 52.0)
    assert cost == pytest.approx(0.2 * 100.0 * 52.0)


def test_no_policy_full_tax():
    cfg = short_config(tax_rate=0.2)
    state = grid_state(cfg)
    hh = add_household(state)
    add_agent(state, hh, age=40, status=Status.EMPLOYED, wage=12.5)
    hh.formal_spend_weekly = 100.0
    revenue, cost = collect_taxes(state, state.year)
    assert revenue == pytest.approx(0.2 * 500.0 * 52.0)
    assert cost == 0.0


def test_deduction_never_increases_tax():
    cfg_off = short_config(tax_rate=0.25)
    cfg_on = short_config(tax_rate=0.25, policy="tax")
    for spend in (0.0, 50.0, 1000.0):
        s_off, s_on = grid_state(cfg_off), grid_state(cfg_on)
        for st in (s_off, s_on):
            st.year = st.config.policy_year
            hh = add_household(st)
            add_agent(st, hh, age=40, status=Status.EMPLOYED, wage=15.0)
            hh.formal_spend_weekly = spend
        assert collect_taxes(s_on, s_on.year)[0] <= collect_taxes(s_off, s_off.year)[0]
