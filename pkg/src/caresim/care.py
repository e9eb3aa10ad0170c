"""Care-need dynamics and the quantum care-allocation process.

Care moves in indivisible weekly quanta (default 4 hours) from supplying
households to receivers through kinship networks. Each iteration samples a
receiver in proportion to outstanding unmet need, a household in proportion
to distance-weighted residual supply, then one of six care sources inside
the household (five status categories from the supply table plus the
out-of-income budget). Informal care requires the supplier household to be
in the receiver's town; formal care can only come from distances 0 and 1.
The loop stops when no receiver with unmet need still has reachable supply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (Agent, CareLevel, Household, Status, care_hours,
                   supply_hours)
from .kinship import build_kinship_network
from .state import SimulationState
from . import economy

OUT_OF_INCOME = "out_of_income"
SOURCE_NAMES = {
    Status.TEENAGER: "teenager",
    Status.STUDENT: "student",
    Status.EMPLOYED: "employed",
    Status.UNEMPLOYED: "unemployed",
    Status.RETIRED: "retired",
}
INFORMAL_STATUSES = tuple(SOURCE_NAMES)


@dataclass(slots=True)
class CareQuantum:
    receiver_id: int
    supplier_household_id: int | None  # None = state-funded care
    supplier_agent_id: int | None      # None = purchased formal care
    source: str
    kind: str                          # "informal" | "formal"
    distance: int
    hours: float
    cost: float                        # currency/week; 0 for informal


@dataclass
class CareLedger:
    year: int
    quanta: list[CareQuantum] = field(default_factory=list)
    need: dict[int, float] = field(default_factory=dict)
    informal_received: dict[int, float] = field(default_factory=dict)
    formal_received: dict[int, float] = field(default_factory=dict)
    unmet: dict[int, float] = field(default_factory=dict)
    informal_by_agent: dict[int, float] = field(default_factory=dict)
    hours_by_receiver_household: dict[int, dict[int, float]] = field(default_factory=dict)
    state_funded_hours: float = 0.0
    state_funded_cost_weekly: float = 0.0

    def record(self, q: CareQuantum) -> None:
        self.quanta.append(q)
        if q.kind == "informal":
            self.informal_received[q.receiver_id] = (
                self.informal_received.get(q.receiver_id, 0.0) + q.hours)
            if q.supplier_agent_id is not None:
                self.informal_by_agent[q.supplier_agent_id] = (
                    self.informal_by_agent.get(q.supplier_agent_id, 0.0) + q.hours)
        else:
            self.formal_received[q.receiver_id] = (
                self.formal_received.get(q.receiver_id, 0.0) + q.hours)
        if q.supplier_household_id is not None:
            per = self.hours_by_receiver_household.setdefault(q.receiver_id, {})
            per[q.supplier_household_id] = per.get(q.supplier_household_id, 0.0) + q.hours


# -- care-need transitions -----------------------------------------------------


def care_transition_probability(agent: Agent, state: SimulationState) -> float:
    """Chance of moving up exactly one care level this year: an age, sex and
    SES specific base scaled up by the discounted unmet-need history."""
    cfg = state.config
    if agent.care_level == CareLevel.CRITICAL:
        return 0.0
    if agent.care_level == CareLevel.NONE:
        base = state.tables.care_onset_base(agent.age, agent.sex, agent.ses)
    else:
        base = state.tables.care_progression_base(agent.age, agent.sex, agent.ses)
    p = base * (1.0 + cfg.care_unmet_feedback * agent.unmet_history)
    return min(cfg.care_prob_cap, p)


def care_transitions(state: SimulationState, year: int, rng: np.random.Generator) -> int:
    """Step 11: progressions never go down; onset forces ill-health
    retirement for working-age agents."""
    moved = 0
    for agent in state.agents.values():
        p = care_transition_probability(agent, state)
        if p <= 0.0 or rng.random() >= p:
            continue
        agent.care_level = CareLevel(agent.care_level + 1)
        moved += 1
        if agent.care_level == CareLevel.LOW and agent.age >= 16 \
                and agent.status != Status.RETIRED:
            economy.retire(state, agent)
    state.log_event("care_transitions", count=moved)
    return moved


# -- supply bookkeeping ----------------------------------------------------------


class _SupplierPool:
    """Residual availability of every potential care source this year."""

    def __init__(self, state: SimulationState):
        cfg = state.config
        self.state = state
        self.cfg = cfg
        self.effective_price = cfg.care_price_per_hour
        if cfg.policy == "tax" and state.year >= cfg.policy_year:
            # the deduction refunds the tax share of formal spending, which
            # stretches the household care budget by the same factor
            self.effective_price = cfg.care_price_per_hour * (1.0 - cfg.tax_rate)
        self.informal_supplied: dict[int, float] = {}
        self.time_off_taken: dict[int, float] = {}
        for hh in state.households.values():
            income = economy.household_weekly_income(state, hh)
            hh.per_capita_income = income / max(1, len(hh.member_ids))
            hh.care_budget_share = economy.care_budget_share(
                hh.per_capita_income, cfg.care_budget_beta)
            hh.care_budget_weekly = hh.care_budget_share * income
            hh.formal_spend_weekly = 0.0
            hh.wage_forgone_weekly = 0.0

    def member_informal_available(self, agent: Agent, distance: int) -> float:
        if agent.care_level != CareLevel.NONE:
            return 0.0
        cap = supply_hours(agent.status, distance)
        if cap <= 0:
            return 0.0
        return max(0.0, cap - self.informal_supplied.get(agent.id, 0.0))

    def ooi_hours(self, household: Household) -> float:
        return household.care_budget_weekly / self.effective_price

    def employed_for_time_off(self, household: Household) -> Agent | None:
        """Lowest-wage employed member who can still give up a quantum of
        working time; ties go to the lowest agent id."""
        quantum = self.cfg.quantum_hours
        best: Agent | None = None
        for mid in household.member_ids:
            agent = self.state.agents[mid]
            if agent.status != Status.EMPLOYED or agent.care_level != CareLevel.NONE:
                continue
            remaining = (agent.worked_fraction * self.cfg.weekly_work_hours
                         - self.time_off_taken.get(agent.id, 0.0))
            if remaining < quantum:
                continue
            if best is None or agent.hourly_wage < best.hourly_wage \
                    or (agent.hourly_wage == best.hourly_wage and agent.id < best.id):
                best = agent
        return best


@dataclass
class _ReceiverContext:
    agent: Agent
    town_id: int
    # (household_id, kinship distance, same town) for every network household
    entries: list[tuple[int, int, bool]]


def household_available_supply(state: SimulationState, pool: _SupplierPool,
                               household: Household, distance: int,
                               same_town: bool) -> dict[str, float]:
    """Residual hours by source for one supplying household. Informal
    sources vanish across town lines; the out-of-income budget reaches only
    distances 0 and 1."""
    out: dict[str, float] = {}
    if same_town:
        for status in INFORMAL_STATUSES:
            total = 0.0
            for mid in household.member_ids:
                agent = state.agents[mid]
                if agent.status == status:
                    total += pool.member_informal_available(agent, distance)
            if total > 0.0:
                out[SOURCE_NAMES[status]] = total
    if distance <= 1 and household.care_budget_weekly > 0.0:
        hours = pool.ooi_hours(household)
        if hours > 0.0:
            out[OUT_OF_INCOME] = hours
    return out


def _weighted_pick(options: list, weights: list[float], total: float, u: float):
    acc = 0.0
    target = u * total
    for opt, w in zip(options, weights):
        acc += w
        if target < acc:
            return opt
    return options[-1]


def allocate_care(state: SimulationState, year: int,
                  rng: np.random.Generator) -> CareLedger:
    """Run the full quantum allocation loop for one year."""
    from .policy import apply_direct_funding

    cfg = state.config
    quantum = float(cfg.quantum_hours)
    alpha = cfg.kinship_decay_alpha
    ledger = CareLedger(year=year)
    pool = _SupplierPool(state)

    funded: set[int] = set()
    if cfg.policy == "direct":
        funded = set(apply_direct_funding(state, year, ledger))

    receivers: list[_ReceiverContext] = []
    for agent in state.agents.values():
        if agent.care_level == CareLevel.NONE or agent.id in funded:
            continue
        need = float(care_hours(agent.care_level))
        ledger.need[agent.id] = need
        network = build_kinship_network(agent.id, state)
        town = state.household_of(agent).town_id
        entries = []
        for hh_id, dist in network.items():
            hh = state.households.get(hh_id)
            if hh is None:
                continue
            entries.append((hh_id, dist, hh.town_id == town))
        receivers.append(_ReceiverContext(agent=agent, town_id=town, entries=entries))
        ledger.unmet[agent.id] = need

    unmet = np.asarray([ledger.unmet[r.agent.id] for r in receivers])
    eligible = unmet > 0.0
    decay = [math.exp(-alpha * d) for d in range(4)]

    while True:
        masked = np.where(eligible, unmet, 0.0)
        total_unmet = float(masked.sum())
        if total_unmet <= 0.0:
            break
        ri = int(np.searchsorted(np.cumsum(masked), rng.random() * total_unmet,
                                 side="right"))
        ri = min(ri, len(receivers) - 1)
        ctx = receivers[ri]

        options: list[tuple[int, int, bool, dict]] = []
        weights: list[float] = []
        total_w = 0.0
        for hh_id, dist, same_town in ctx.entries:
            hh = state.households.get(hh_id)
            if hh is None:
                continue
            sources = household_available_supply(state, pool, hh, dist, same_town)
            if not sources:
                continue
            w = decay[dist] * sum(sources.values())
            options.append((hh_id, dist, same_town, sources))
            weights.append(w)
            total_w += w
        if total_w <= 0.0:
            eligible[ri] = False  # permanently: supply only shrinks within a year
            continue

        hh_id, dist, same_town, sources = _weighted_pick(
            options, weights, total_w, rng.random())
        household = state.households[hh_id]
        src_names = list(sources)
        src_total = sum(sources.values())
        source = _weighted_pick(src_names, [sources[s] for s in src_names],
                                src_total, rng.random())

        delivered = False
        if source == OUT_OF_INCOME:
            provider = pool.employed_for_time_off(household) if same_town else None
            formal = provider is None or provider.hourly_wage > pool.effective_price
            if formal:
                cost_to_budget = quantum * pool.effective_price
                if household.care_budget_weekly >= cost_to_budget - 1e-9:
                    household.care_budget_weekly -= cost_to_budget
                    household.formal_spend_weekly += quantum * cfg.care_price_per_hour
                    ledger.record(CareQuantum(
                        receiver_id=ctx.agent.id, supplier_household_id=hh_id,
                        supplier_agent_id=None, source=OUT_OF_INCOME,
                        kind="formal", distance=dist, hours=quantum,
                        cost=quantum * cfg.care_price_per_hour))
                    delivered = True
                else:
                    household.care_budget_weekly = 0.0  # tail too small to use
            else:
                cost_to_budget = quantum * provider.hourly_wage
                if household.care_budget_weekly >= cost_to_budget - 1e-9:
                    household.care_budget_weekly -= cost_to_budget
                    household.wage_forgone_weekly += cost_to_budget
                    provider.worked_fraction = max(
                        0.0, provider.worked_fraction - quantum / cfg.weekly_work_hours)
                    pool.time_off_taken[provider.id] = (
                        pool.time_off_taken.get(provider.id, 0.0) + quantum)
                    ledger.record(CareQuantum(
                        receiver_id=ctx.agent.id, supplier_household_id=hh_id,
                        supplier_agent_id=provider.id, source=OUT_OF_INCOME,
                        kind="informal", distance=dist, hours=quantum, cost=0.0))
                    delivered = True
                else:
                    household.care_budget_weekly = 0.0
        else:
            status = next(s for s, name in SOURCE_NAMES.items() if name == source)
            candidates = [state.agents[m] for m in household.member_ids
                          if state.agents[m].status == status
                          and pool.member_informal_available(state.agents[m], dist) > 0.0]
            # ties on residual go to the youngest (highest id): a lowest-id
            # rule would systematically hand care to the older spouse
            provider = max(candidates,
                           key=lambda a: (pool.member_informal_available(a, dist), a.id))
            pool.informal_supplied[provider.id] = (
                pool.informal_supplied.get(provider.id, 0.0) + quantum)
            ledger.record(CareQuantum(
                receiver_id=ctx.agent.id, supplier_household_id=hh_id,
                supplier_agent_id=provider.id, source=source,
                kind="informal", distance=dist, hours=quantum, cost=0.0))
            delivered = True

        if delivered:
            unmet[ri] -= quantum
            if unmet[ri] <= 1e-9:
                unmet[ri] = 0.0
                eligible[ri] = False
            ledger.unmet[ctx.agent.id] = unmet[ri]

    # update discounted unmet-need histories and shares for every receiver
    d = cfg.discount_rate
    for aid, need in ledger.need.items():
        agent = state.agents[aid]
        left = ledger.unmet.get(aid, 0.0)
        agent.unmet_history = agent.unmet_history * (1.0 - d) + left
        agent.unmet_share_wsum = agent.unmet_share_wsum * (1.0 - d) + (
            left / need if need > 0 else 0.0)
        agent.unmet_share_wnorm = agent.unmet_share_wnorm * (1.0 - d) + 1.0

    state.prior_care_by_receiver = dict(ledger.hours_by_receiver_household)
    state.log_event("care_allocation", quanta=len(ledger.quanta))
    return ledger


# -- hospitalisation --------------------------------------------------------------


def hospital_days(agent: Agent, config) -> tuple[float, float]:
    """Expected annual hospital days and cost for one agent: a care-level
    base inflated by the discounted average share of unmet need."""
    if agent.care_level == CareLevel.NONE:
        return 0.0, 0.0
    base = config.hospital_base_days[agent.care_level]
    days = base * (1.0 + config.hospital_unmet_gamma * agent.unmet_share_avg())
    return days, days * config.hospital_cost_per_day
