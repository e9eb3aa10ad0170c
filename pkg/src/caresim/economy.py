"""Economic processes: the Gompertz salary curve, work-experience
accounting, education choices that drive social mobility, the job market,
pensions and taxation.

Wages follow w = F * exp(c * exp(-r t)) with c = ln(I/F), so pay starts at
I, rises monotonically with discounted cumulative experience t and
saturates at F. Time taken off work for care or newborns reduces t and
therefore future pay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Agent, CareLevel, Household, Sex, Status
from .state import SimulationState


@dataclass(frozen=True)
class SalaryCurve:
    initial_wage: float   # I
    max_wage: float       # F
    growth_rate: float    # r


def hourly_wage(curve: SalaryCurve, experience: float) -> float:
    """w = F e^{c e^{-rt}}, c = ln(I/F): strictly increasing from I to F."""
    c = math.log(curve.initial_wage / curve.max_wage)
    return curve.max_wage * math.exp(c * math.exp(-curve.growth_rate * experience))


def update_experience(experience: float, worked_fraction: float, discount: float) -> float:
    """Discounted cumulative fraction-years worked."""
    return experience * (1.0 - discount) + worked_fraction


def care_budget_share(per_capita_income: float, beta: float) -> float:
    """Share of household income set aside for care: 1 - e^{-beta x}."""
    return 1.0 - math.exp(-beta * per_capita_income)


def weekly_income(state: SimulationState, agent: Agent) -> float:
    if agent.status == Status.EMPLOYED:
        return agent.hourly_wage * state.config.weekly_work_hours * agent.worked_fraction
    if agent.status == Status.RETIRED:
        return agent.pension_weekly
    return 0.0


def household_weekly_income(state: SimulationState, household: Household) -> float:
    return sum(weekly_income(state, state.agents[m]) for m in household.member_ids)


# -- pensions -------------------------------------------------------------------


def statutory_retirement_age(state: SimulationState, agent: Agent) -> int:
    """Male age is fixed; the female age follows the configured historical
    schedule (60 until 2010, equalized by 2020 under defaults)."""
    from .core import Sex
    from .params import interp_series

    if agent.sex == Sex.FEMALE:
        return int(round(interp_series(state.config.female_retirement_points,
                                       state.year)))
    return state.config.retirement_age


def ill_health_pension_factor(level: CareLevel, lost_years: float, max_years: float) -> float:
    """Pension reduction for retiring early through care need: lost working
    years count in full at Low/Moderate need and at half weight above."""
    if max_years <= 0:
        return 1.0
    lost = max(0.0, lost_years)
    if level in (CareLevel.SUBSTANTIAL, CareLevel.CRITICAL):
        lost *= 0.5
    return max(0.0, 1.0 - lost / max_years)


def pension_weekly(state: SimulationState, agent: Agent, retirement_age_actual: int) -> float:
    cfg = state.config
    base = cfg.pension_ratio * agent.last_wage * cfg.weekly_work_hours
    statutory = statutory_retirement_age(state, agent)
    lost = statutory - retirement_age_actual
    max_years = statutory - 16
    if lost > 0:
        base *= ill_health_pension_factor(agent.care_level, lost, max_years)
    # flat basic-pension floor under the earnings-related amount
    return max(cfg.pension_floor_weekly, base)


def retire(state: SimulationState, agent: Agent) -> None:
    if agent.status == Status.EMPLOYED:
        agent.last_wage = agent.hourly_wage
    agent.hourly_wage = 0.0
    agent.status = Status.RETIRED
    agent.pension_weekly = pension_weekly(state, agent, agent.age)


# -- education and social mobility ------------------------------------------------


def education_continue_probability(state: SimulationState, agent: Agent,
                                   informal_care_hours: float) -> float:
    """Probability of staying in education: rises with per-capita household
    income net of care spending and with the parents' education headroom,
    falls with the agent's own care duties."""
    cfg = state.config
    hh = state.household_of(agent)
    income = household_weekly_income(state, hh) - hh.formal_spend_weekly
    income_pc = max(0.0, income) / max(1, len(hh.member_ids))
    edu_gap = agent.parent_max_education - agent.education_level
    z = (cfg.education_theta0
         + cfg.education_income_weight * math.log1p(income_pc / cfg.education_income_scale)
         + cfg.education_parent_weight * edu_gap
         - cfg.education_care_weight * informal_care_hours / cfg.education_care_scale)
    return 1.0 / (1.0 + math.exp(-z))


def enter_workforce(agent: Agent) -> None:
    """Leaving education fixes the SES group: exit at 16/18/20/22/24 maps to
    D/C2/C1/B/A."""
    agent.ses = agent.education_level
    agent.status = Status.UNEMPLOYED
    agent.hourly_wage = 0.0


def social_transitions(state: SimulationState, year: int, rng: np.random.Generator,
                       informal_supplied: dict[int, float]) -> None:
    """Step 8: two-yearly study-or-work decisions at ages 16-22, forced
    workforce entry at 24."""
    students = [a for a in state.agents.values()
                if a.status in (Status.TEENAGER, Status.STUDENT)
                and a.age in (16, 18, 20, 22, 24)]
    for agent in students:
        agent.education_level = (agent.age - 16) // 2
        if agent.age >= 24:
            enter_workforce(agent)
            continue
        p = education_continue_probability(state, agent,
                                           informal_supplied.get(agent.id, 0.0))
        if rng.random() < p:
            agent.status = Status.TEENAGER if agent.age < 18 else Status.STUDENT
        else:
            enter_workforce(agent)
    state.log_event("social_transitions", decisions=len(students))


# -- job market --------------------------------------------------------------------


@dataclass
class JobOffer:
    agent_id: int
    town_id: int
    is_hire: bool  # True: unemployed -> employed on move; False: job change


def commit_hire(state: SimulationState, agent: Agent) -> None:
    cfg = state.config
    curve = SalaryCurve(*cfg.ses_curve(agent.ses))
    agent.status = Status.EMPLOYED
    agent.hourly_wage = hourly_wage(curve, agent.work_experience)
    agent.last_wage = agent.hourly_wage
    if agent.worked_fraction == 0.0 and state.year >= agent.maternity_until:
        agent.worked_fraction = 1.0


def job_market_step(state: SimulationState, year: int, rng: np.random.Generator
                    ) -> tuple[list[JobOffer], list[int]]:
    """Step 9: firings, hirings and job offers. Cross-town acceptances are
    returned as pending offers for the relocation phase to confirm; in-town
    hires of agents still living with their parents are returned as
    independence candidates."""
    cfg = state.config
    tables = state.tables
    densities = np.asarray([t.density for t in state.grid.towns])
    cum_density = np.cumsum(densities / densities.sum())
    pending: list[JobOffer] = []
    independence: list[int] = []

    def offer_town(current: int) -> int:
        if rng.random() < cfg.job_same_town_prob:
            return current
        return int(np.searchsorted(cum_density, rng.random(), side="right"))

    for agent in list(state.agents.values()):
        if agent.status == Status.EMPLOYED:
            u = tables.unemployment_rate(year, agent.age, agent.ses)
            if rng.random() < min(0.95, cfg.job_turnover * u):
                agent.last_wage = agent.hourly_wage
                agent.hourly_wage = 0.0
                agent.status = Status.UNEMPLOYED
                agent.worked_fraction = 0.0
                continue
            if rng.random() < cfg.job_offer_rate:
                town = offer_town(state.household_of(agent).town_id)
                if town != state.household_of(agent).town_id \
                        and rng.random() < cfg.job_cross_accept[agent.ses]:
                    pending.append(JobOffer(agent.id, town, is_hire=False))
        elif agent.status == Status.UNEMPLOYED:
            if year < agent.maternity_until:
                continue  # caring for a newborn, not searching
            u = tables.unemployment_rate(year, agent.age, agent.ses)
            p_hire = min(0.95, cfg.job_turnover * (1.0 - u))
            if agent.sex == Sex.FEMALE:
                p_hire *= tables.female_hire_mult(year)
            if rng.random() >= p_hire:
                continue
            town = offer_town(state.household_of(agent).town_id)
            home_town = state.household_of(agent).town_id
            if town == home_town:
                commit_hire(state, agent)
                parents = {agent.mother_id, agent.father_id}
                if any(m in parents for m in state.household_of(agent).member_ids):
                    independence.append(agent.id)
            elif rng.random() < cfg.job_cross_accept[agent.ses]:
                pending.append(JobOffer(agent.id, town, is_hire=True))
    state.log_event("job_market", pending=len(pending))
    return pending, independence


# -- taxes ----------------------------------------------------------------------


def collect_taxes(state: SimulationState, year: int) -> tuple[float, float]:
    """Annual flat tax on employment income. Under the tax-deduction policy
    each household deducts its formal-care spending from the tax base.
    Returns (revenue, revenue forgone to the policy)."""
    cfg = state.config
    rate = cfg.tax_rate
    deduct_on = cfg.policy == "tax" and year >= cfg.policy_year
    revenue = 0.0
    policy_cost = 0.0
    for hh in state.households.values():
        base = sum(state.agents[m].hourly_wage * cfg.weekly_work_hours
                   * state.agents[m].worked_fraction
                   for m in hh.member_ids
                   if state.agents[m].status == Status.EMPLOYED) * 52.0
        if base <= 0.0:
            continue
        if deduct_on:
            deduction = min(base, hh.formal_spend_weekly * 52.0)
            revenue += rate * (base - deduction)
            policy_cost += rate * deduction
        else:
            revenue += rate * base
    return revenue, policy_cost
