"""Relocation decisions: job moves, divorce moves, independence from the
parental home, retirees moving in with their children, and family moves
driven by house size.

Whether a household takes a cross-town job is gated by a logistic choice
over three pulls: the relocation cost (social capital accumulated as years
in town), the change in expected informal-care attraction, and SES
homophily with the destination. Destination houses come from the vacancy
pool; towns with more vacant houses attract more incoming moves.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Agent, Household, Status
from .kinship import household_kinship
from .state import (SimulationState, create_household, move_agent,
                    relocate_household)


def relocation_cost(state: SimulationState, household: Household,
                    scale: float, exponent: float) -> float:
    """R = K * sum of members' years-in-town^p, the social capital lost by
    leaving town."""
    return scale * sum(state.agents[m].years_in_town ** exponent
                       for m in household.member_ids)


def care_attraction(household: Household, town_id: int, state: SimulationState,
                    gov_care_share: float) -> float:
    """Expected informal-care pull of a town: kin household members living
    there, discounted by kinship distance and by the share of care the
    government provides."""
    alpha = state.config.kinship_decay_alpha
    total = 0.0
    for hh_id, dist in household_kinship(household, state).items():
        kin = state.households.get(hh_id)
        if kin is not None and kin.town_id == town_id:
            total += math.exp(-alpha * dist) * len(kin.member_ids)
    return (1.0 - gov_care_share) * total


def town_ses_shares(state: SimulationState) -> np.ndarray:
    """Per-town SES composition, for homophily scoring."""
    from .core import N_SES
    counts = np.zeros((len(state.grid.towns), N_SES))
    for hh in state.households.values():
        for mid in hh.member_ids:
            agent = state.agents[mid]
            counts[hh.town_id, agent.ses] += 1.0
    totals = counts.sum(axis=1, keepdims=True)
    totals[totals == 0.0] = 1.0
    return counts / totals


def household_ses(state: SimulationState, household: Household) -> int:
    return max((state.agents[m].ses for m in household.member_ids), default=0)


def move_gate_probability(state: SimulationState, household: Household,
                          dest_town: int, ses_shares: np.ndarray) -> float:
    """Logistic probability of accepting a move that requires leaving town."""
    cfg = state.config
    cost = relocation_cost(state, household, cfg.relocation_cost_scale,
                           cfg.relocation_cost_exponent)
    att_here = care_attraction(household, household.town_id, state, cfg.gov_care_share)
    att_there = care_attraction(household, dest_town, state, cfg.gov_care_share)
    ses = household_ses(state, household)
    hom_delta = ses_shares[dest_town, ses] - ses_shares[household.town_id, ses]
    z = (cfg.move_gate_base
         - cfg.move_gate_cost_weight * cost
         + cfg.move_gate_attraction_weight * (att_there - att_here)
         / cfg.move_gate_attraction_scale
         + cfg.move_gate_homophily_weight * hom_delta)
    return 1.0 / (1.0 + math.exp(-z))


def pick_vacant_house(state: SimulationState, town_id: int,
                      rng: np.random.Generator, min_bedrooms: int = 0) -> int | None:
    options = [h for h in state.grid.towns[town_id].house_ids
               if state.grid.houses[h].household_id is None
               and state.grid.houses[h].bedrooms >= min_bedrooms]
    if not options:
        return None
    return options[int(rng.integers(len(options)))]


def find_house_near(state: SimulationState, town_id: int,
                    rng: np.random.Generator) -> int | None:
    """A vacant house in the town, else in the nearest town with vacancies."""
    house = pick_vacant_house(state, town_id, rng)
    if house is not None:
        return house
    others = sorted((state.grid.town_distance(town_id, t.id), t.id)
                    for t in state.grid.towns if t.id != town_id)
    for _, tid in others:
        house = pick_vacant_house(state, tid, rng)
        if house is not None:
            return house
    return None


def sample_destination_town(state: SimulationState, rng: np.random.Generator,
                            exclude: int | None = None) -> int | None:
    """Town draw weighted by vacant-house count."""
    weights = np.zeros(len(state.grid.towns))
    for town in state.grid.towns:
        if town.id == exclude:
            continue
        weights[town.id] = sum(1 for h in town.house_ids
                               if state.grid.houses[h].household_id is None)
    total = weights.sum()
    if total <= 0.0:
        return None
    return int(np.searchsorted(np.cumsum(weights), rng.random() * total, side="right"))


# -- event-driven moves ---------------------------------------------------------


def couple_co_locate(state: SimulationState, male: Agent, female: Agent,
                     rng: np.random.Generator) -> None:
    """Newlyweds set up home in the male's town (he is employed by
    construction of the match pool); the female brings her dependent
    children."""
    male_hh = state.household_of(male)
    parents = {male.mother_id, male.father_id}
    male_independent = not any(m in parents for m in male_hh.member_ids)
    if male_independent:
        dest = male_hh
    else:
        house = find_house_near(state, male_hh.town_id, rng)
        if house is None:
            dest = male_hh  # nowhere vacant: double up rather than split the couple
        else:
            dest = create_household(state, house)
            move_agent(state, male, dest)
    moving = [female] + [c for c in state.living_children(female)
                         if c.age < 16 and c.household_id == female.household_id]
    for agent in moving:
        move_agent(state, agent, dest)


def divorce_male_move(state: SimulationState, male: Agent,
                      rng: np.random.Generator) -> None:
    town = sample_destination_town(state, rng)
    if town is None:
        town = state.household_of(male).town_id
    house = find_house_near(state, town, rng)
    if house is None:
        return  # no vacancy anywhere: he stays put
    dest = create_household(state, house)
    move_agent(state, male, dest)


def independence_move(state: SimulationState, agent: Agent,
                      rng: np.random.Generator) -> int | None:
    """Move an adult out of the parental home into their own house."""
    house = find_house_near(state, state.household_of(agent).town_id, rng)
    if house is None:
        return None
    dest = create_household(state, house)
    move_agent(state, agent, dest)
    return dest.id


def retiree_move_in(state: SimulationState, retiree: Agent,
                    rng: np.random.Generator) -> int | None:
    """With probability equal to the configured scale, move a care-needing
    retiree (and coresident partner) in with a child, choosing the child
    household in proportion to last year's care hours from it."""
    child_households = []
    for child in state.living_children(retiree):
        if child.household_id != retiree.household_id \
                and child.household_id not in child_households:
            child_households.append(child.household_id)
    if not child_households:
        return None
    prior = state.prior_care_by_receiver.get(retiree.id, {})
    hours = np.asarray([prior.get(hh, 0.0) for hh in child_households])
    total = hours.sum()
    if total <= 0.0:
        return None
    if rng.random() >= state.config.retiree_move_in_scale:
        return None
    pick = int(np.searchsorted(np.cumsum(hours), rng.random() * total, side="right"))
    dest = state.households[child_households[min(pick, len(child_households) - 1)]]
    movers = [retiree]
    partner = state.living(retiree.partner_id)
    if partner is not None and partner.household_id == retiree.household_id:
        movers.append(partner)
    for agent in movers:
        move_agent(state, agent, dest)
    return dest.id


def choose_destination(state: SimulationState, household: Household,
                       job_town: int, rng: np.random.Generator,
                       ses_shares: np.ndarray | None = None) -> int | None:
    """Gate a move triggered by a job in another town and pick the house.

    Accepts with the logistic move probability; the destination house comes
    from the job town's vacancy pool (preferring one the household fits),
    falling back to the nearest town with vacancies when the job town is
    full. Returns the chosen house id, or None when the move is declined or
    nowhere has room."""
    if ses_shares is None:
        ses_shares = town_ses_shares(state)
    if rng.random() >= move_gate_probability(state, household, job_town, ses_shares):
        return None
    house = pick_vacant_house(state, job_town, rng,
                              min_bedrooms=len(household.member_ids))
    if house is None:
        house = find_house_near(state, job_town, rng)
    return house


def apply_job_relocations(state: SimulationState, pending: list,
                          rng: np.random.Generator) -> list:
    """Resolve cross-town job acceptances through the move gate. Returns the
    subset of events that actually moved (the employer commits only then)."""
    from .economy import commit_hire

    ses_shares = town_ses_shares(state)
    moved = []
    for event in pending:
        agent = state.agents.get(event.agent_id)
        if agent is None:
            continue
        hh = state.household_of(agent)
        parents = {agent.mother_id, agent.father_id}
        lives_with_parents = any(m in parents for m in hh.member_ids)
        gate_hh = hh
        if lives_with_parents:
            # judged alone: a brand-new household has zero relocation cost,
            # but attraction/homophily still use the agent's own kin
            gate_hh = Household(id=-1, house_id=hh.house_id, town_id=hh.town_id,
                                member_ids=[agent.id])
        house = choose_destination(state, gate_hh, event.town_id, rng, ses_shares)
        if house is None:
            continue
        if lives_with_parents:
            dest = create_household(state, house)
            move_agent(state, agent, dest)
        else:
            relocate_household(state, hh, house)
        if event.is_hire:
            commit_hire(state, agent)
        moved.append(event)
    return moved


def relocations_phase(state: SimulationState, pending_jobs: list,
                      independence_candidates: list[int],
                      rng: np.random.Generator) -> None:
    """Step 10: job-driven moves, optional independence moves for in-town
    jobs, retiree move-ins, and size-driven house changes."""
    moved = apply_job_relocations(state, pending_jobs, rng)

    for aid in independence_candidates:
        agent = state.agents.get(aid)
        if agent is None:
            continue
        hh = state.household_of(agent)
        parents = {agent.mother_id, agent.father_id}
        if not any(m in parents for m in hh.member_ids):
            continue
        if rng.random() < state.config.independence_same_town_prob:
            independence_move(state, agent, rng)

    retirees = [a for a in state.agents.values()
                if a.status == Status.RETIRED and a.care_level > 0]
    for retiree in retirees:
        retiree_move_in(state, retiree, rng)

    # families that outgrew the house move within town when possible
    for hh in list(state.households.values()):
        house = state.grid.houses[hh.house_id]
        if len(hh.member_ids) <= house.bedrooms:
            continue
        new_house = pick_vacant_house(state, hh.town_id, rng,
                                      min_bedrooms=len(hh.member_ids))
        if new_house is not None:
            relocate_household(state, hh, new_house)

    state.log_event("relocations", job_moves=len(moved))
