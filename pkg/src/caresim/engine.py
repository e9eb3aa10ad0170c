"""World construction and the annual simulation loop.

Every year runs the same eleven phases in a fixed order: deaths, adoptions,
births, divorces, marriages, care allocation, age transitions, social
transitions, job market, relocations, care transitions. Metrics are
snapshotted after the last phase. Each module draws from its own named RNG
stream, so runs are reproducible and two scenarios sharing a master seed
stay identical until a policy first changes behaviour.
"""

from __future__ import annotations

import numpy as np

from . import care, demography, economy, metrics, migration
from .core import CareLevel, Sex, Status
from .economy import SalaryCurve, hourly_wage
from .params import ScenarioConfig, validate_config
from .state import (SimulationState, SimulationError, build_grid, check_state_invariants,
                    create_household, make_rng_streams, spawn_agent)

PHASES = ("deaths", "adoptions", "births", "divorces", "marriages",
          "care_allocation", "age_transitions", "social_transitions",
          "job_market", "relocations", "care_transitions")


def initialize(config: ScenarioConfig) -> SimulationState:
    """Build the town grid and the starting population of settled adults;
    everything else emerges during burn-in."""
    report = validate_config(config)
    if not report.ok:
        raise SimulationError("invalid config: " + "; ".join(report.violations))

    streams = make_rng_streams(config.seed)
    rng = streams["init"]
    grid = build_grid(config, rng)
    state = SimulationState(config=config, tables=_make_tables(config), grid=grid,
                            year=config.start_year, rng=streams)
    if config.event_log:
        state.events = []

    n = config.initial_population
    n_couples = int(n * config.initial_couple_fraction) // 2
    ages = rng.integers(config.initial_age_min, config.initial_age_max + 1, size=n)
    ses = rng.choice(len(config.ses_shares), size=n, p=np.asarray(config.ses_shares))

    vacant = [h.id for h in grid.houses.values()]
    order = rng.permutation(len(vacant))
    vacant = [vacant[i] for i in order]
    if len(vacant) < n:
        raise SimulationError("not enough houses for the initial population")

    def settle(house_id: int, members: list[tuple[int, Sex]]) -> None:
        hh = create_household(state, house_id)
        for idx, sex in members:
            agent = spawn_agent(
                state, hh, sex=sex, age=int(ages[idx]),
                ses=int(ses[idx]), education_level=int(ses[idx]),
                parent_max_education=int(ses[idx]))
            agent.years_in_town = float(max(0, agent.age - 16))
            u = state.tables.stationary_nonwork(config.start_year, agent.age,
                                                agent.ses, agent.sex)
            worked_years = max(0, agent.age - 16)
            d = config.experience_discount_rate
            agent.work_experience = ((1.0 - (1.0 - d) ** worked_years) / d
                                     if d > 0 else float(worked_years))
            if rng.random() >= u:
                agent.status = Status.EMPLOYED
                agent.hourly_wage = hourly_wage(SalaryCurve(*config.ses_curve(agent.ses)),
                                                agent.work_experience)
                agent.last_wage = agent.hourly_wage
                agent.worked_fraction = 1.0
            else:
                agent.status = Status.UNEMPLOYED

    house_i = 0
    for k in range(n_couples):
        settle(vacant[house_i], [(2 * k, Sex.MALE), (2 * k + 1, Sex.FEMALE)])
        hh = state.households[state.grid.houses[vacant[house_i]].household_id]
        male, female = (state.agents[m] for m in hh.member_ids)
        male.partner_id = female.id
        female.partner_id = male.id
        house_i += 1
    for idx in range(2 * n_couples, n):
        sex = Sex.MALE if rng.random() < 0.5 else Sex.FEMALE
        settle(vacant[house_i], [(idx, sex)])
        house_i += 1
    return state


def _make_tables(config: ScenarioConfig):
    from .rates import RateTables
    return RateTables(config)


def _reset_worked_fractions(state: SimulationState) -> None:
    year = state.year
    for agent in state.agents.values():
        if agent.status == Status.EMPLOYED and year >= agent.maternity_until:
            agent.worked_fraction = 1.0
        else:
            agent.worked_fraction = 0.0


def age_transitions(state: SimulationState) -> None:
    """Step 7: bank this year's work experience, refresh wages, increment
    ages and tenure, move 16-year-olds into the education pipeline, retire
    at the statutory age."""
    cfg = state.config
    d = cfg.experience_discount_rate
    for agent in state.agents.values():
        agent.work_experience = economy.update_experience(
            agent.work_experience, agent.worked_fraction, d)
        if agent.status == Status.EMPLOYED:
            agent.hourly_wage = hourly_wage(SalaryCurve(*cfg.ses_curve(agent.ses)),
                                            agent.work_experience)
            agent.last_wage = agent.hourly_wage
        agent.age += 1
        agent.years_in_town += 1.0
        if agent.age == 16 and agent.status == Status.CHILD:
            if agent.care_level != CareLevel.NONE:
                economy.retire(state, agent)
            else:
                agent.status = Status.TEENAGER
        if agent.status in (Status.EMPLOYED, Status.UNEMPLOYED) \
                and agent.age >= economy.statutory_retirement_age(state, agent):
            economy.retire(state, agent)
    state.log_event("age_transitions")


def step_year(state: SimulationState):
    """Run the eleven phases for state.year, collect the metrics row and
    advance the clock."""
    if state.year >= state.config.end_year + 1:
        raise SimulationError("simulation already past end_year")
    cfg = state.config
    year = state.year
    rng = state.rng
    check = cfg.check_invariants

    def checked(phase: str) -> None:
        if check:
            try:
                check_state_invariants(state, phase)
            except SimulationError:
                raise

    _reset_worked_fractions(state)
    demography.apply_deaths(state, year, rng["demography"])
    checked("deaths")
    demography.apply_adoptions(state, rng["demography"])
    checked("adoptions")
    demography.apply_births(state, year, rng["demography"])
    checked("births")
    demography.apply_divorces(state, year, rng["demography"])
    checked("divorces")
    demography.form_partnerships(state, year, rng["demography"])
    checked("marriages")
    ledger = care.allocate_care(state, year, rng["care"])
    checked("care_allocation")
    age_transitions(state)
    checked("age_transitions")
    economy.social_transitions(state, year, rng["economy"], ledger.informal_by_agent)
    checked("social_transitions")
    pending, independence = economy.job_market_step(state, year, rng["economy"])
    checked("job_market")
    migration.relocations_phase(state, pending, independence, rng["migration"])
    checked("relocations")
    care.care_transitions(state, year, rng["care"])
    checked("care_transitions")

    tax_revenue, tax_policy_cost = economy.collect_taxes(state, year)
    direct_cost = ledger.state_funded_cost_weekly * 52.0
    state.treasury += tax_revenue - direct_cost
    row = metrics.collect_metrics(state, ledger, tax_revenue,
                                  tax_policy_cost + direct_cost)
    state.year += 1
    return row


def run(config: ScenarioConfig) -> tuple[SimulationState, list[dict]]:
    """Full run from start_year through end_year; returns the final state
    and the metrics rows from the reporting start year on."""
    state = initialize(config)
    rows = []
    for _ in range(config.start_year, config.end_year + 1):
        row = step_year(state)
        if row["year"] >= config.reporting_start_year:
            rows.append(row)
    return state, rows
