"""Mutable simulation state and the household/house bookkeeping helpers
every annual process uses.

One state belongs to one run; nothing here is shared between runs. All
randomness flows through named per-module generator streams spawned from
the master seed, so extra draws in one process never shift another
process's sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Agent, House, Household, Status, Town, WorldGrid
from .params import ScenarioConfig
from .rates import RateTables

RNG_STREAMS = ("init", "demography", "economy", "care", "migration", "policy")


class SimulationError(RuntimeError):
    """Unrecoverable inconsistency; carries phase and year context."""


def make_rng_streams(seed: int) -> dict[str, np.random.Generator]:
    seqs = np.random.SeedSequence(seed).spawn(len(RNG_STREAMS))
    return {name: np.random.Generator(np.random.PCG64(sq))
            for name, sq in zip(RNG_STREAMS, seqs)}


@dataclass
class SimulationState:
    config: ScenarioConfig
    tables: RateTables
    grid: WorldGrid
    year: int
    agents: dict[int, Agent] = field(default_factory=dict)
    households: dict[int, Household] = field(default_factory=dict)
    rng: dict[str, np.random.Generator] = field(default_factory=dict)
    treasury: float = 0.0
    next_agent_id: int = 1
    next_household_id: int = 1
    # prior-year weekly informal+formal hours per (receiver, supplier household)
    prior_care_by_receiver: dict[int, dict[int, float]] = field(default_factory=dict)
    # genealogy registries: keyed by ids that are never reused, entries kept
    # after death so kinship (siblings via a dead parent, etc.) stays derivable
    parents_of: dict[int, tuple[int | None, int | None]] = field(default_factory=dict)
    offspring: dict[int, list[int]] = field(default_factory=dict)
    events: list | None = None

    # -- id allocation ------------------------------------------------------

    def new_agent_id(self) -> int:
        i = self.next_agent_id
        self.next_agent_id += 1
        return i

    def new_household_id(self) -> int:
        i = self.next_household_id
        self.next_household_id += 1
        return i

    # -- lookups ------------------------------------------------------------

    def household_of(self, agent: Agent) -> Household:
        return self.households[agent.household_id]

    def living(self, agent_id: int | None) -> Agent | None:
        if agent_id is None:
            return None
        return self.agents.get(agent_id)

    def living_children(self, agent: Agent) -> list[Agent]:
        out = []
        for cid in self.offspring.get(agent.id, ()):
            child = self.agents.get(cid)
            if child is not None:
                out.append(child)
        return out

    def adults_in(self, household: Household) -> list[Agent]:
        return [self.agents[m] for m in household.member_ids if self.agents[m].age >= 16]

    def log_event(self, kind: str, **data) -> None:
        if self.events is not None:
            self.events.append({"year": self.year, "event": kind, **data})


# -- household / house mechanics ---------------------------------------------


def create_household(state: SimulationState, house_id: int) -> Household:
    house = state.grid.houses[house_id]
    if house.household_id is not None:
        raise SimulationError(f"house {house_id} already occupied")
    hh = Household(id=state.new_household_id(), house_id=house_id, town_id=house.town_id)
    state.households[hh.id] = hh
    house.household_id = hh.id
    return hh


def dissolve_if_empty(state: SimulationState, household: Household) -> None:
    if household.member_ids:
        return
    state.grid.houses[household.house_id].household_id = None
    del state.households[household.id]


def detach_agent(state: SimulationState, agent: Agent) -> None:
    """Remove the agent from its household, dissolving it when emptied."""
    hh = state.households[agent.household_id]
    hh.member_ids.remove(agent.id)
    dissolve_if_empty(state, hh)


def attach_agent(state: SimulationState, agent: Agent, household: Household) -> None:
    old_town = state.households[agent.household_id].town_id \
        if agent.household_id in state.households else None
    household.member_ids.append(agent.id)
    agent.household_id = household.id
    if old_town != household.town_id:
        agent.years_in_town = 0.0


def move_agent(state: SimulationState, agent: Agent, household: Household) -> None:
    detach_agent(state, agent)
    attach_agent(state, agent, household)


def relocate_household(state: SimulationState, household: Household, house_id: int) -> None:
    """Move a whole household into a (vacant) house, possibly changing town."""
    house = state.grid.houses[house_id]
    if house.household_id is not None:
        raise SimulationError(f"house {house_id} already occupied")
    state.grid.houses[household.house_id].household_id = None
    house.household_id = household.id
    moved_town = house.town_id != household.town_id
    household.house_id = house_id
    household.town_id = house.town_id
    if moved_town:
        for mid in household.member_ids:
            state.agents[mid].years_in_town = 0.0


def remove_agent(state: SimulationState, agent: Agent) -> None:
    """Death: drop the agent, clear the partner link, vacate emptied homes."""
    partner = state.living(agent.partner_id)
    if partner is not None and partner.partner_id == agent.id:
        partner.partner_id = None
    detach_agent(state, agent)
    del state.agents[agent.id]


def spawn_agent(state: SimulationState, household: Household, **kwargs) -> Agent:
    agent = Agent(id=state.new_agent_id(), household_id=household.id, **kwargs)
    household.member_ids.append(agent.id)
    state.agents[agent.id] = agent
    register_parentage(state, agent)
    return agent


def register_parentage(state: SimulationState, agent: Agent) -> None:
    state.parents_of[agent.id] = (agent.mother_id, agent.father_id)
    for pid in (agent.mother_id, agent.father_id):
        if pid is not None:
            state.offspring.setdefault(pid, []).append(agent.id)


# -- world construction --------------------------------------------------------


def build_grid(config: ScenarioConfig, rng: np.random.Generator) -> WorldGrid:
    """8x12 town grid; per-town house counts proportional to the density
    weights, bedrooms drawn from the configured distribution."""
    from .core import GRID_COLS, GRID_ROWS, MAX_HOUSES_PER_TOWN

    densities = np.asarray(config.town_densities, dtype=float)
    densities = densities / densities.sum()
    total_houses = int(round(config.initial_population * config.houses_per_initial_agent))
    towns: list[Town] = []
    houses: dict[int, House] = {}
    next_house = 0
    for idx in range(GRID_ROWS * GRID_COLS):
        y, x = divmod(idx, GRID_COLS)
        n = min(MAX_HOUSES_PER_TOWN, int(round(densities[idx] * total_houses)))
        town = Town(id=idx, x=x, y=y, density=float(densities[idx]))
        if n > 0:
            bedrooms = rng.choice(np.asarray(config.bedroom_counts),
                                  size=n, p=np.asarray(config.bedroom_shares))
            for b in bedrooms:
                houses[next_house] = House(id=next_house, town_id=idx, bedrooms=int(b))
                town.house_ids.append(next_house)
                next_house += 1
        towns.append(town)
    return WorldGrid(towns=towns, houses=houses)


def check_state_invariants(state: SimulationState, phase: str) -> None:
    """Fail-fast structural checks used in tests (config.check_invariants)."""
    seen: set[int] = set()
    for hh in state.households.values():
        if not hh.member_ids:
            raise SimulationError(f"{phase} y{state.year}: empty household {hh.id}")
        house = state.grid.houses[hh.house_id]
        if house.household_id != hh.id or house.town_id != hh.town_id:
            raise SimulationError(f"{phase} y{state.year}: household {hh.id} house link broken")
        for mid in hh.member_ids:
            if mid in seen:
                raise SimulationError(f"{phase} y{state.year}: agent {mid} in two households")
            seen.add(mid)
            agent = state.agents.get(mid)
            if agent is None or agent.household_id != hh.id:
                raise SimulationError(f"{phase} y{state.year}: stale member {mid} in {hh.id}")
    if seen != set(state.agents):
        raise SimulationError(f"{phase} y{state.year}: household partition != living agents")
    for agent in state.agents.values():
        if agent.partner_id is not None:
            partner = state.agents.get(agent.partner_id)
            if partner is None or partner.partner_id != agent.id:
                raise SimulationError(f"{phase} y{state.year}: asymmetric partner link {agent.id}")
        if (agent.hourly_wage > 0) != (agent.status == Status.EMPLOYED):
            raise SimulationError(f"{phase} y{state.year}: wage/status mismatch agent {agent.id}")
    if not state.grid.occupancy_ok():
        raise SimulationError(f"{phase} y{state.year}: duplicate house occupancy")
