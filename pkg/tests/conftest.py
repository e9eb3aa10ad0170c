"""Shared helpers: small hand-built worlds for exercising single processes
without running the full simulation."""

from __future__ import annotations

import pytest

from caresim.core import Agent, CareLevel, House, Sex, Status, Town, WorldGrid
from caresim.params import ScenarioConfig
from caresim.rates import RateTables
from caresim.state import SimulationState, make_rng_streams, register_parentage


def short_config(**overrides) -> ScenarioConfig:
    """A config with a compressed but valid timeline for fast tests."""
    base = dict(
        start_year=1860, census_year=1875, projection_year=1885,
        policy_year=1890, end_year=1900, reporting_start_year=1860,
        initial_population=200, check_invariants=True,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def neutral_config(**overrides) -> ScenarioConfig:
    """Modifiers switched off so rate formulas can be pinned exactly."""
    base = dict(
        mortality_ses_mult=(1.0,) * 5,
        mortality_care_mult=(1.0,) * 5,
        mortality_male_points=((1860.0, 1.0), (2040.0, 1.0)),
        care_ses_mult=(1.0,) * 5,
        care_male_mult=1.0,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def grid_state(config: ScenarioConfig, n_towns: int = 2,
               houses_per_town: int = 30) -> SimulationState:
    """An empty state over a hand-built grid (ignores config densities)."""
    towns = []
    houses = {}
    hid = 0
    for t in range(96):
        town = Town(id=t, x=t % 12, y=t // 12, density=1.0 if t < n_towns else 0.0)
        if t < n_towns:
            for _ in range(houses_per_town):
                houses[hid] = House(id=hid, town_id=t, bedrooms=4)
                town.house_ids.append(hid)
                hid += 1
        towns.append(town)
    grid = WorldGrid(towns=towns, houses=houses)
    return SimulationState(config=config, tables=RateTables(config), grid=grid,
                           year=config.start_year, rng=make_rng_streams(config.seed))


def add_household(state: SimulationState, town_id: int = 0):
    from caresim.state import create_household
    for h in state.grid.towns[town_id].house_ids:
        if state.grid.houses[h].household_id is None:
            return create_household(state, h)
    raise RuntimeError("no vacant house in test town")


def add_agent(state: SimulationState, household, *, age=40, sex=Sex.FEMALE,
              status=Status.EMPLOYED, ses=2, wage=None, care=CareLevel.NONE,
              mother=None, father=None, partner=None, pension=0.0) -> Agent:
    agent = Agent(
        id=state.new_agent_id(), sex=sex, age=age, household_id=household.id,
        ses=ses, education_level=ses, status=status,
        care_level=care, mother_id=mother, father_id=father,
    )
    if status == Status.EMPLOYED:
        agent.hourly_wage = wage if wage is not None else 10.0
        agent.last_wage = agent.hourly_wage
        agent.worked_fraction = 1.0
    elif wage is not None:
        agent.last_wage = wage
    if status == Status.RETIRED:
        agent.pension_weekly = pension
    if partner is not None:
        agent.partner_id = partner.id
        partner.partner_id = agent.id
    household.member_ids.append(agent.id)
    state.agents[agent.id] = agent
    register_parentage(state, agent)
    return agent


@pytest.fixture
def small_state():
    cfg = short_config()
    return grid_state(cfg)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance checklist after the run, one line per criterion."""
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:  # acceptance module not collected this run
        return
    if CRITERION_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
