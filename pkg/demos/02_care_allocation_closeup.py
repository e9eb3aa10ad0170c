"""Watch the quantum care-allocation loop up close on one hand-built
family scene.

An 82-year-old with critical care need (80 h/week) lives with her retired
husband. One daughter's family lives in the same town: she earns below the
care price, so her household's out-of-income budget converts to informal
care through her unpaid time off. A wealthier son lives two towns away, so
his household can only buy formal care. Every 4-hour quantum that moves is
printed with its source.
"""

import numpy as np

from caresim.care import allocate_care
from caresim.core import CareLevel, House, Sex, Status, Town, WorldGrid
from caresim.params import ScenarioConfig
from caresim.rates import RateTables
from caresim.state import (SimulationState, create_household, make_rng_streams,
                           register_parentage, spawn_agent)

config = ScenarioConfig(care_budget_beta=0.004)
towns = [Town(id=i, x=i % 12, y=i // 12, density=0.0) for i in range(96)]
houses = {}
for hid, town_id in enumerate([0, 0, 3]):
    houses[hid] = House(id=hid, town_id=town_id, bedrooms=4)
    towns[town_id].house_ids.append(hid)
grid = WorldGrid(towns=towns, houses=houses)
state = SimulationState(config=config, tables=RateTables(config), grid=grid,
                        year=2030, rng=make_rng_streams(99))

home = create_household(state, 0)
grandma = spawn_agent(state, home, sex=Sex.FEMALE, age=82, status=Status.RETIRED,
                      care_level=CareLevel.CRITICAL, pension_weekly=140.0)
grandpa = spawn_agent(state, home, sex=Sex.MALE, age=84, status=Status.RETIRED,
                      partner_id=grandma.id, pension_weekly=180.0)
grandma.partner_id = grandpa.id

daughter_home = create_household(state, 1)
daughter = spawn_agent(state, daughter_home, sex=Sex.FEMALE, age=52,
                       status=Status.EMPLOYED, hourly_wage=9.0,
                       worked_fraction=1.0, mother_id=grandma.id)
son_in_law = spawn_agent(state, daughter_home, sex=Sex.MALE, age=54,
                         status=Status.EMPLOYED, hourly_wage=14.0,
                         worked_fraction=1.0, partner_id=daughter.id)
daughter.partner_id = son_in_law.id

son_home = create_household(state, 2)
son = spawn_agent(state, son_home, sex=Sex.MALE, age=49, status=Status.EMPLOYED,
                  hourly_wage=38.0, worked_fraction=1.0, mother_id=grandma.id)

names = {grandma.id: "grandma", grandpa.id: "grandpa", daughter.id: "daughter",
         son_in_law.id: "son-in-law", son.id: "son"}
homes = {home.id: "own household", daughter_home.id: "daughter's household",
         son_home.id: "son's household (other town)"}

ledger = allocate_care(state, 2030, np.random.default_rng(4))

print(f"care need: {ledger.need[grandma.id]:.0f} h/week at critical level\n")
for i, q in enumerate(ledger.quanta, 1):
    who = names.get(q.supplier_agent_id, "care agency")
    print(f"quantum {i:>2}: {q.hours:.0f}h {q.kind:<8} from {homes[q.supplier_household_id]:<28}"
          f" via {q.source:<13} ({who})"
          + (f", cost {q.cost:.0f}/week" if q.cost else ""))

print(f"\nreceived informal {ledger.informal_received.get(grandma.id, 0):.0f}h, "
      f"formal {ledger.formal_received.get(grandma.id, 0):.0f}h, "
      f"unmet {ledger.unmet[grandma.id]:.0f}h")
print(f"daughter's remaining work week: "
      f"{daughter.worked_fraction * config.weekly_work_hours:.0f}h "
      f"(gave up wages for informal care)")
print(f"son's household formal spend: "
      f"{state.households[son_home.id].formal_spend_weekly:.0f}/week")
