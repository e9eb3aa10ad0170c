"""Domain types shared by every part of the simulation.

Everything here is a plain value object: agents, households, the town grid
and the kinship network. No behaviour beyond small lookups lives in this
module; the annual processes that mutate these objects are in demography,
economy, care and migration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum


class CareLevel(IntEnum):
    """Care-need categories, ordered. Agents never move down a level."""

    NONE = 0
    LOW = 1
    MODERATE = 2
    SUBSTANTIAL = 3
    CRITICAL = 4


# Weekly hours of care required at each need level.
WEEKLY_CARE_HOURS = {
    CareLevel.NONE: 0,
    CareLevel.LOW: 8,
    CareLevel.MODERATE: 16,
    CareLevel.SUBSTANTIAL: 32,
    CareLevel.CRITICAL: 80,
}


def care_hours(level: CareLevel) -> int:
    """Weekly hours of care required at `level`."""
    return WEEKLY_CARE_HOURS[CareLevel(level)]


class Sex(IntEnum):
    MALE = 0
    FEMALE = 1


class Status(IntEnum):
    """Life-course status. CHILD is everyone under 16; TEENAGER and STUDENT
    are the two studying stages (16-17 and 18+); the rest are workforce
    states."""

    CHILD = 0
    TEENAGER = 1
    STUDENT = 2
    EMPLOYED = 3
    UNEMPLOYED = 4
    RETIRED = 5


# Socioeconomic groups ordered poorest to richest; index doubles as the
# education level that leads to the group (leave school at 16 -> D, ... at
# 24 -> A).
SES_NAMES = ("D", "C2", "C1", "B", "A")
N_SES = 5


@dataclass(frozen=True)
class SesGroup:
    """One socioeconomic stratum and its wage/unemployment profile."""

    index: int                  # 0 = D (poorest) .. 4 = A
    name: str
    education_level: int        # == index
    initial_wage: float         # currency/hour at zero experience
    max_wage: float             # asymptotic currency/hour
    growth_rate: float          # salary-curve growth per experience unit
    unemployment_modifier: float  # multiplies the economy-wide rate


# Weekly informal-care hours a member can offer, by status and kinship
# distance 0..3 of the receiving household. Employed rows are the
# outside-working-hours minimum; extra employed care goes through the
# household out-of-income budget.
CARE_SUPPLY_HOURS = {
    Status.TEENAGER: (16, 0, 0, 0),
    Status.STUDENT: (24, 16, 8, 4),
    Status.EMPLOYED: (28, 20, 12, 8),
    Status.UNEMPLOYED: (32, 24, 16, 8),
    Status.RETIRED: (48, 36, 20, 10),
}


def supply_hours(status: Status, distance: int) -> int:
    """Weekly informal hours `status` can offer a receiver at kinship
    `distance`; zero for statuses outside the supply table."""
    row = CARE_SUPPLY_HOURS.get(Status(status))
    if row is None:
        return 0
    return row[distance]


@dataclass(slots=True)
class Agent:
    id: int
    sex: Sex
    age: int
    household_id: int
    ses: int = 0                      # provisional from parents until workforce entry
    education_level: int = 0
    parent_max_education: int = 0
    status: Status = Status.CHILD
    hourly_wage: float = 0.0          # > 0 iff employed
    last_wage: float = 0.0            # most recent employed wage, for pensions
    work_experience: float = 0.0      # discounted sum of yearly worked fractions
    worked_fraction: float = 0.0      # fraction of this year's working week
    pension_weekly: float = 0.0
    care_level: CareLevel = CareLevel.NONE
    unmet_history: float = 0.0        # discounted sum of past unmet weekly hours
    unmet_share_wsum: float = 0.0     # discounted numerator of mean unmet share
    unmet_share_wnorm: float = 0.0    # discounted denominator
    maternity_until: int = 0          # first year the mother works again
    mother_id: int | None = None
    father_id: int | None = None
    partner_id: int | None = None
    years_in_town: float = 0.0

    def unmet_share_avg(self) -> float:
        """Discounted average of past yearly unmet-need shares, in [0, 1]."""
        if self.unmet_share_wnorm <= 0.0:
            return 0.0
        return self.unmet_share_wsum / self.unmet_share_wnorm


@dataclass(slots=True)
class Household:
    id: int
    house_id: int
    town_id: int
    member_ids: list[int] = field(default_factory=list)
    per_capita_income: float = 0.0    # currency/week, refreshed in the care phase
    care_budget_share: float = 0.0    # 1 - exp(-beta * per-capita income)
    care_budget_weekly: float = 0.0   # remaining currency/week this year
    formal_spend_weekly: float = 0.0  # currency/week spent on formal care this year
    wage_forgone_weekly: float = 0.0  # wages given up for out-of-income informal care

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass(slots=True)
class House:
    id: int
    town_id: int
    bedrooms: int
    household_id: int | None = None   # None = vacant


@dataclass(slots=True)
class Town:
    id: int
    x: int
    y: int
    density: float                    # normalized weight used at world construction
    house_ids: list[int] = field(default_factory=list)


GRID_ROWS = 8
GRID_COLS = 12
MAX_HOUSES_PER_TOWN = 1225

# Documented constant: the synthetic population stands in for the UK at
# roughly 1:10,000. Not enforced anywhere at runtime.
POPULATION_SCALE = 10_000


@dataclass
class WorldGrid:
    towns: list[Town]
    houses: dict[int, House]
    _distance_matrix: object = None

    def town_distance(self, a: int, b: int) -> float:
        ta, tb = self.towns[a], self.towns[b]
        return math.hypot(ta.x - tb.x, ta.y - tb.y)

    def distance_matrix(self):
        if self._distance_matrix is None:
            import numpy as np
            xs = np.asarray([t.x for t in self.towns], dtype=float)
            ys = np.asarray([t.y for t in self.towns], dtype=float)
            self._distance_matrix = np.hypot(xs[:, None] - xs[None, :],
                                             ys[:, None] - ys[None, :])
        return self._distance_matrix

    def vacant_houses(self, town_id: int) -> list[int]:
        town = self.towns[town_id]
        return [h for h in town.house_ids if self.houses[h].household_id is None]

    def vacant_counts(self) -> list[int]:
        return [sum(1 for h in t.house_ids if self.houses[h].household_id is None)
                for t in self.towns]

    def occupancy_ok(self) -> bool:
        seen: set[int] = set()
        for house in self.houses.values():
            if house.household_id is not None:
                if house.household_id in seen:
                    return False
                seen.add(house.household_id)
        return True


@dataclass
class KinshipNetwork:
    """Households related to one agent, keyed by minimal kinship distance.

    Distance 0 is the agent's own household; 1 parents/children; 2
    grandparents/grandchildren/siblings; 3 uncles/aunts/nephews/nieces.
    A household appears only at the smallest distance that applies.
    """

    owner_id: int
    by_distance: dict[int, list[int]]

    def distance_of(self, household_id: int) -> int | None:
        for d in range(4):
            if household_id in self.by_distance.get(d, ()):
                return d
        return None

    def items(self):
        for d in range(4):
            for hh in self.by_distance.get(d, ()):
                yield hh, d
