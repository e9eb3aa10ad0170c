"""Annual demographic processes: deaths, adoptions, births, partnership
formation and divorce.

Mortality switches regime by year (Gompertz-Makeham hazard before the
census year, a rate table until the projection year, Lee-Carter beyond) and
is modified multiplicatively by SES and care-need level. Only partnered
women give birth; newborn care keeps the mother out of work for the birth
year.
"""

from __future__ import annotations

import numpy as np

from . import migration
from .core import Agent, Sex, Status
from .kinship import build_kinship_network
from .rates import RateTables
from .state import SimulationState, SimulationError, move_agent, remove_agent, spawn_agent
from .params import interp_series


def mortality_probability(agent: Agent, year: int, tables: RateTables) -> float:
    """Annual death probability: regime base rate times SES and care-need
    modifiers, clamped to [0, 1]."""
    cfg = tables.config
    q = tables.mortality.base_probability(min(agent.age, cfg.max_age), agent.sex, year)
    q *= cfg.mortality_ses_mult[agent.ses] * cfg.mortality_care_mult[agent.care_level]
    return min(1.0, max(0.0, q))


def apply_deaths(state: SimulationState, year: int, rng: np.random.Generator) -> list[int]:
    cfg = state.config
    agents = list(state.agents.values())
    if not agents:
        return []
    ages = np.fromiter((min(a.age, cfg.max_age) for a in agents), dtype=np.int64)
    sexes = np.fromiter((a.sex for a in agents), dtype=np.int64)
    q = state.tables.mortality.base_array(ages, sexes, year)
    ses_mult = np.asarray(cfg.mortality_ses_mult)
    care_mult = np.asarray(cfg.mortality_care_mult)
    q = q * ses_mult[[a.ses for a in agents]] * care_mult[[a.care_level for a in agents]]
    np.clip(q, 0.0, 1.0, out=q)
    draws = rng.random(len(agents))
    dead_ids = [a.id for a, u, p in zip(agents, draws, q) if u < p]
    for aid in dead_ids:
        remove_agent(state, state.agents[aid])
    state.log_event("deaths", count=len(dead_ids))
    return dead_ids


def apply_adoptions(state: SimulationState, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Rehome every under-16 stuck in a household with no adult: nearest
    kinship household containing an adult, else a random couple household,
    else any adult household."""
    orphans = [a for a in state.agents.values()
               if a.age < 16 and not state.adults_in(state.household_of(a))]
    placements: list[tuple[int, int]] = []
    couple_households: list[int] | None = None
    for orphan in orphans:
        target = None
        network = build_kinship_network(orphan.id, state)
        for d in (1, 2, 3):
            options = [hh for hh in network.by_distance[d]
                       if hh in state.households and state.adults_in(state.households[hh])]
            if options:
                target = options[int(rng.integers(len(options)))] if len(options) > 1 else options[0]
                break
        if target is None:
            if couple_households is None:
                couple_households = [
                    hh.id for hh in state.households.values()
                    if any(state.agents[m].partner_id in hh.member_ids
                           for m in hh.member_ids)]
            pool = couple_households or [hh.id for hh in state.households.values()
                                         if state.adults_in(hh)]
            if not pool:
                raise SimulationError(
                    f"year {state.year}: orphan {orphan.id} but no adult household left")
            target = pool[int(rng.integers(len(pool)))]
        move_agent(state, orphan, state.households[target])
        placements.append((orphan.id, target))
    state.log_event("adoptions", count=len(placements))
    return placements


def apply_births(state: SimulationState, year: int, rng: np.random.Generator) -> list[int]:
    cfg = state.config
    tables = state.tables
    born: list[int] = []
    mothers = [a for a in state.agents.values()
               if a.sex == Sex.FEMALE
               and cfg.fertile_age_min <= a.age <= cfg.fertile_age_max
               and state.living(a.partner_id) is not None]
    for mother in mothers:
        rate = tables.fertility_rate(mother.age, mother.ses, year)
        if rate <= 0.0 or rng.random() >= rate:
            continue
        father = state.living(mother.partner_id)
        sex = Sex.MALE if rng.random() < 0.5 else Sex.FEMALE
        child = spawn_agent(
            state, state.household_of(mother),
            sex=sex, age=0,
            mother_id=mother.id, father_id=father.id,
            ses=max(mother.ses, father.ses),
            parent_max_education=max(mother.education_level, father.education_level),
        )
        # the mother leaves work to care for the newborn and stays out of
        # the job market until maternity ends
        if mother.status == Status.EMPLOYED:
            mother.last_wage = mother.hourly_wage
            mother.hourly_wage = 0.0
            mother.status = Status.UNEMPLOYED
        mother.worked_fraction = 0.0
        mother.maternity_until = year + cfg.maternity_years
        born.append(child.id)
    state.log_event("births", count=len(born))
    return born


def partnership_weight(male: Agent, female: Agent, grid_distance: float,
                       cfg) -> float:
    """Relative probability of a candidate pairing: exponential decay in SES
    distance (slower when the male is the higher-status partner), age gap
    and town-grid distance."""
    ses_dist = abs(male.ses - female.ses)
    if male.ses > female.ses:
        ses_dist *= cfg.partner_ses_male_higher_mult
    return float(np.exp(-cfg.partner_ses_weight * ses_dist
                        - cfg.partner_age_weight * abs(male.age - female.age)
                        - cfg.partner_grid_weight * grid_distance))


def _close_kin(state: SimulationState, a: Agent, b: Agent) -> bool:
    pa = state.parents_of.get(a.id, (None, None))
    pb = state.parents_of.get(b.id, (None, None))
    if a.id in pb or b.id in pa:
        return True
    return any(p is not None and p in pb for p in pa)


def form_partnerships(state: SimulationState, year: int,
                      rng: np.random.Generator) -> list[tuple[int, int]]:
    cfg = state.config
    males = [a for a in state.agents.values()
             if a.sex == Sex.MALE and a.partner_id is None
             and a.status == Status.EMPLOYED and a.age >= 16]
    females = [a for a in state.agents.values()
               if a.sex == Sex.FEMALE and a.partner_id is None and a.age >= 16]
    matches: list[tuple[int, int]] = []
    if not males or not females:
        return matches

    f_age = np.asarray([f.age for f in females], dtype=float)
    f_ses = np.asarray([f.ses for f in females], dtype=float)
    f_town = np.asarray([state.household_of(f).town_id for f in females])
    f_hh = np.asarray([f.household_id for f in females])
    open_mask = np.ones(len(females))
    dist = state.grid.distance_matrix()

    order = rng.permutation(len(males))
    for mi in order:
        male = males[mi]
        if rng.random() >= interp_series(cfg.marriage_rate_bands, male.age):
            continue
        ses_dist = np.abs(male.ses - f_ses)
        ses_dist = np.where(male.ses > f_ses,
                            ses_dist * cfg.partner_ses_male_higher_mult, ses_dist)
        male_town = state.household_of(male).town_id
        w = np.exp(-cfg.partner_ses_weight * ses_dist
                   - cfg.partner_age_weight * np.abs(male.age - f_age)
                   - cfg.partner_grid_weight * dist[male_town, f_town]) * open_mask
        w[f_hh == male.household_id] = 0.0
        # close kin are rare: reject after sampling, which matches filtering
        # them out beforehand
        while True:
            total = w.sum()
            if total <= 0.0:
                break
            pick = int(np.searchsorted(np.cumsum(w), rng.random() * total,
                                       side="right"))
            pick = min(pick, len(females) - 1)
            female = females[pick]
            if _close_kin(state, male, female):
                w[pick] = 0.0
                continue
            male.partner_id = female.id
            female.partner_id = male.id
            open_mask[pick] = 0.0
            migration.couple_co_locate(state, male, female, rng)
            matches.append((male.id, female.id))
            break
    state.log_event("marriages", count=len(matches))
    return matches


def apply_divorces(state: SimulationState, year: int,
                   rng: np.random.Generator) -> list[tuple[int, int]]:
    dissolved: list[tuple[int, int]] = []
    males = [a for a in state.agents.values()
             if a.sex == Sex.MALE and state.living(a.partner_id) is not None]
    for male in males:
        if rng.random() >= state.tables.divorce_rate(male.age):
            continue
        female = state.agents[male.partner_id]
        male.partner_id = None
        female.partner_id = None
        # dependent children stay with the mother; the male moves out alone
        migration.divorce_male_move(state, male, rng)
        dissolved.append((male.id, female.id))
    state.log_event("divorces", count=len(dissolved))
    return dissolved
