"""Kinship-network construction.

A network maps kinship distance 0..3 to the households of an agent's
relatives: own household (0), parents and children (1), grandparents,
grandchildren and siblings (2), uncles, aunts, nephews and nieces (3).
Every household lands at the smallest distance that applies. Relations are
derived from the persistent genealogy registries, so they survive the death
of the linking relative (a nephew via a dead sibling is still a nephew).
"""

from __future__ import annotations

from .core import Household, KinshipNetwork
from .state import SimulationState


def _parent_ids(state: SimulationState, agent_id: int) -> list[int]:
    pair = state.parents_of.get(agent_id)
    if pair is None:
        return []
    return [p for p in pair if p is not None]


def _child_ids(state: SimulationState, agent_id: int) -> list[int]:
    return state.offspring.get(agent_id, [])


def _sibling_ids(state: SimulationState, agent_id: int) -> list[int]:
    out: list[int] = []
    for pid in _parent_ids(state, agent_id):
        for cid in _child_ids(state, pid):
            if cid != agent_id and cid not in out:
                out.append(cid)
    return out


def build_kinship_network(agent_id: int, state: SimulationState) -> KinshipNetwork:
    agent = state.agents[agent_id]
    by_distance: dict[int, list[int]] = {0: [agent.household_id], 1: [], 2: [], 3: []}
    placed = {agent.household_id}

    def place(distance: int, relative_ids: list[int]) -> None:
        for rid in relative_ids:
            rel = state.agents.get(rid)
            if rel is None:
                continue
            if rel.household_id not in placed:
                placed.add(rel.household_id)
                by_distance[distance].append(rel.household_id)

    parents = _parent_ids(state, agent_id)
    children = _child_ids(state, agent_id)
    place(1, parents + children)

    grandparents = [g for p in parents for g in _parent_ids(state, p)]
    grandchildren = [g for c in children for g in _child_ids(state, c)]
    siblings = _sibling_ids(state, agent_id)
    place(2, grandparents + grandchildren + siblings)

    uncles_aunts = [u for p in parents for u in _sibling_ids(state, p)]
    nephews_nieces = [n for s in siblings for n in _child_ids(state, s)]
    place(3, uncles_aunts + nephews_nieces)

    return KinshipNetwork(owner_id=agent_id, by_distance=by_distance)


def household_kinship(household: Household, state: SimulationState) -> dict[int, int]:
    """Minimal kinship distance to every related household, joined over the
    members' individual networks. Excludes the household itself."""
    distances: dict[int, int] = {}
    for mid in household.member_ids:
        network = build_kinship_network(mid, state)
        for hh_id, d in network.items():
            if hh_id == household.id:
                continue
            if hh_id not in distances or d < distances[hh_id]:
                distances[hh_id] = d
    return distances
