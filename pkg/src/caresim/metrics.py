"""Per-year output metrics and the metrics CSV schema.

One row per simulated year from the reporting start year on. Hour columns
are weekly-rate hours summed over the population; currency columns are
annualized. Ratios with an empty denominator carry the sentinel "NA".
"""

from __future__ import annotations

import csv

from .core import CareLevel, Sex, WEEKLY_CARE_HOURS, SES_NAMES
from .care import CareLedger
from .state import SimulationState
from . import economy

NA = "NA"

LEVEL_NAMES = {
    CareLevel.LOW: "low",
    CareLevel.MODERATE: "moderate",
    CareLevel.SUBSTANTIAL: "substantial",
    CareLevel.CRITICAL: "critical",
}

METRIC_COLUMNS = (
    ["year", "population", "recipients",
     "need_total", "informal_total", "formal_total", "unmet_total",
     "informal_per_recipient", "formal_per_recipient", "unmet_per_recipient"]
    + [f"recipients_{name}" for name in LEVEL_NAMES.values()]
    + [f"{kind}_pr_{name}" for name in LEVEL_NAMES.values()
       for kind in ("informal", "formal", "unmet")]
    + [f"{kind}_ses_{name}" for name in SES_NAMES
       for kind in ("informal", "formal", "unmet")]
    + [f"{kind}_dist_{d}" for d in range(4) for kind in ("informal", "formal")]
    + ["women_informal_share", "income_ratio_female_male",
       "hospital_cost_total", "hospital_cost_per_capita",
       "policy_cost", "tax_revenue", "treasury"]
)


def collect_metrics(state: SimulationState, ledger: CareLedger,
                    tax_revenue: float, policy_cost_annual: float) -> dict:
    row: dict = {c: 0.0 for c in METRIC_COLUMNS}
    row["year"] = state.year
    row["population"] = len(state.agents)

    recipients = list(ledger.need)
    row["recipients"] = len(recipients)
    informal_total = sum(ledger.informal_received.values())
    formal_total = sum(ledger.formal_received.values())
    unmet_total = sum(ledger.unmet.values())
    row["need_total"] = sum(ledger.need.values())
    row["informal_total"] = informal_total
    row["formal_total"] = formal_total
    row["unmet_total"] = unmet_total
    if recipients:
        n = len(recipients)
        row["informal_per_recipient"] = informal_total / n
        row["formal_per_recipient"] = formal_total / n
        row["unmet_per_recipient"] = unmet_total / n
    else:
        row["informal_per_recipient"] = NA
        row["formal_per_recipient"] = NA
        row["unmet_per_recipient"] = NA

    # bucket receivers by the need level the allocation actually served
    # (care transitions may have raised the level since)
    level_of_need = {hours: lvl for lvl, hours in WEEKLY_CARE_HOURS.items()}
    by_level: dict[CareLevel, list[int]] = {lvl: [] for lvl in LEVEL_NAMES}
    for aid in recipients:
        agent = state.agents.get(aid)
        lvl = level_of_need.get(ledger.need[aid])
        if lvl in by_level:
            by_level[lvl].append(aid)
        ses = agent.ses if agent is not None else 0
        row[f"informal_ses_{SES_NAMES[ses]}"] += ledger.informal_received.get(aid, 0.0)
        row[f"formal_ses_{SES_NAMES[ses]}"] += ledger.formal_received.get(aid, 0.0)
        row[f"unmet_ses_{SES_NAMES[ses]}"] += ledger.unmet.get(aid, 0.0)
    for lvl, ids in by_level.items():
        name = LEVEL_NAMES[lvl]
        row[f"recipients_{name}"] = len(ids)
        if ids:
            n = len(ids)
            row[f"informal_pr_{name}"] = sum(
                ledger.informal_received.get(a, 0.0) for a in ids) / n
            row[f"formal_pr_{name}"] = sum(
                ledger.formal_received.get(a, 0.0) for a in ids) / n
            row[f"unmet_pr_{name}"] = sum(ledger.unmet.get(a, 0.0) for a in ids) / n
        else:
            row[f"informal_pr_{name}"] = NA
            row[f"formal_pr_{name}"] = NA
            row[f"unmet_pr_{name}"] = NA

    women_hours = 0.0
    for q in ledger.quanta:
        row[f"{q.kind}_dist_{q.distance}"] += q.hours
        if q.kind == "informal" and q.supplier_agent_id is not None:
            supplier = state.agents.get(q.supplier_agent_id)
            if supplier is not None and supplier.sex == Sex.FEMALE:
                women_hours += q.hours
    row["women_informal_share"] = (women_hours / informal_total
                                   if informal_total > 0 else NA)

    male_incomes = []
    female_incomes = []
    for agent in state.agents.values():
        if agent.age < 16:
            continue
        income = economy.weekly_income(state, agent)
        (female_incomes if agent.sex == Sex.FEMALE else male_incomes).append(income)
    if male_incomes and female_incomes and sum(male_incomes) > 0:
        row["income_ratio_female_male"] = (
            (sum(female_incomes) / len(female_incomes))
            / (sum(male_incomes) / len(male_incomes)))
    else:
        row["income_ratio_female_male"] = NA

    from .care import hospital_days
    hosp_total = 0.0
    for agent in state.agents.values():
        hosp_total += hospital_days(agent, state.config)[1]
    row["hospital_cost_total"] = hosp_total
    row["hospital_cost_per_capita"] = (hosp_total / len(state.agents)
                                       if state.agents else 0.0)

    row["policy_cost"] = policy_cost_annual
    row["tax_revenue"] = tax_revenue
    row["treasury"] = state.treasury
    return row


def format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{value:.6f}"


def write_metrics_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRIC_COLUMNS)
        for row in rows:
            writer.writerow([format_cell(row[c]) for c in METRIC_COLUMNS])


def read_metrics_csv(path: str) -> list[dict]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                if v == NA:
                    parsed[k] = NA
                elif k in ("year", "population", "recipients") or k.startswith("recipients_"):
                    parsed[k] = int(v)
                else:
                    parsed[k] = float(v)
            out.append(parsed)
    return out
