"""Policy switches and cross-scenario comparison arithmetic.

Two interventions start at the policy year: a tax deduction of all formal
care spending (accounted in the economy module, and stretching household
care budgets by the refunded share), and direct state funding that meets
the full need of every critical-level agent before household allocation
runs. Scenarios are compared under common random numbers, so trajectories
coincide exactly until the policy year, and the incremental
cost-effectiveness ratio is policy cost per hour of unmet need averted
against the no-policy benchmark.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .core import CareLevel, care_hours
from .params import POLICIES, POLICY_NONE, ScenarioConfig
from .state import SimulationState


class IcerUndefinedError(ValueError):
    """The policy did not reduce unmet need; the ICER has no meaning."""


class ScenarioSetupError(ValueError):
    """Scenario configs in one comparison differ beyond the policy field."""


def apply_direct_funding(state: SimulationState, year: int, ledger) -> list[int]:
    """State-funded formal care for every critical-need agent: full need
    met, cost booked at the care price, agent removed from the household
    allocation pool. No-op before the policy year."""
    from .care import CareQuantum

    cfg = state.config
    if year < cfg.policy_year:
        return []
    funded: list[int] = []
    quantum = float(cfg.quantum_hours)
    for agent in state.agents.values():
        if agent.care_level != CareLevel.CRITICAL:
            continue
        need = float(care_hours(agent.care_level))
        ledger.need[agent.id] = need
        for _ in range(int(need // quantum)):
            ledger.record(CareQuantum(
                receiver_id=agent.id, supplier_household_id=None,
                supplier_agent_id=None, source="out_of_income",
                kind="formal", distance=0, hours=quantum,
                cost=quantum * cfg.care_price_per_hour))
        ledger.state_funded_hours += need
        ledger.state_funded_cost_weekly += need * cfg.care_price_per_hour
        ledger.unmet[agent.id] = 0.0
        funded.append(agent.id)
    return funded


@dataclass
class ScenarioOutcome:
    scenario: str
    seed: int
    years: list[int]
    total_unmet_hours: list[float]      # annual hours
    per_recipient_unmet: list[float]    # weekly hours per recipient
    policy_cost: list[float]            # annual currency
    hospital_cost: list[float]          # annual currency
    population: list[int]

    @classmethod
    def from_rows(cls, scenario: str, seed: int, rows: list[dict]) -> "ScenarioOutcome":
        return cls(
            scenario=scenario, seed=seed,
            years=[r["year"] for r in rows],
            total_unmet_hours=[r["unmet_total"] * 52.0 for r in rows],
            per_recipient_unmet=[0.0 if r["unmet_per_recipient"] == "NA"
                                 else float(r["unmet_per_recipient"]) for r in rows],
            policy_cost=[float(r["policy_cost"]) for r in rows],
            hospital_cost=[float(r["hospital_cost_total"]) for r in rows],
            population=[int(r["population"]) for r in rows],
        )


def _discounted_sum(years: list[int], values: list[float], from_year: int,
                    rate: float, discounting: bool) -> float:
    total = 0.0
    for y, v in zip(years, values):
        if y < from_year:
            continue
        f = 1.0 / (1.0 + rate) ** (y - from_year) if discounting else 1.0
        total += f * v
    return total


def icer(policy_outcome: ScenarioOutcome, benchmark: ScenarioOutcome,
         policy_year: int, discount_rate: float, discounting: bool = True) -> float:
    """e = (C_p - C_b) / (U_b - U_p) with the benchmark cost zero; sums run
    from the policy year to the end, optionally discounted."""
    if policy_outcome.years != benchmark.years:
        raise ScenarioSetupError("outcome year ranges differ")
    cost = _discounted_sum(policy_outcome.years, policy_outcome.policy_cost,
                           policy_year, discount_rate, discounting)
    u_p = _discounted_sum(policy_outcome.years, policy_outcome.total_unmet_hours,
                          policy_year, discount_rate, discounting)
    u_b = _discounted_sum(benchmark.years, benchmark.total_unmet_hours,
                          policy_year, discount_rate, discounting)
    if u_b <= u_p:
        raise IcerUndefinedError(
            "policy did not reduce unmet need; ICER undefined")
    return cost / (u_b - u_p)


def ensure_common_base(base: ScenarioConfig, others: list[ScenarioConfig]) -> None:
    """Scenario configs may differ only in the policy field."""
    for other in others:
        for f in fields(ScenarioConfig):
            if f.name == "policy":
                continue
            if getattr(base, f.name) != getattr(other, f.name):
                raise ScenarioSetupError(
                    f"scenario configs diverge outside policy: field {f.name}")


def _run_one(args: tuple) -> tuple[str, int, list[dict]]:
    from . import engine
    policy_name, seed, config = args
    _, rows = engine.run(config)
    return policy_name, seed, rows


def run_scenario_set(config: ScenarioConfig, scenarios: list, seeds: list[int],
                     out_dir: str | None = None, workers: int | None = None) -> dict:
    """Run every (scenario, seed) pair with identical master seeds (common
    random numbers), write the per-run metrics CSVs plus comparison and
    ICER CSVs, and return the outcomes and ICER table."""
    from .metrics import write_metrics_csv

    if scenarios and isinstance(scenarios[0], ScenarioConfig):
        ensure_common_base(config, scenarios)
        policy_names = [s.policy for s in scenarios]
    else:
        policy_names = list(scenarios)
    for name in policy_names:
        if name not in POLICIES:
            raise ScenarioSetupError(f"unknown policy {name!r}")
    if len(set(policy_names)) != len(policy_names):
        raise ScenarioSetupError("duplicate scenario policies")

    tasks = [(name, seed, config.with_policy(name, seed=seed))
             for name in policy_names for seed in seeds]
    if workers is None:
        workers = int(os.environ.get("CARESIM_WORKERS", "1"))
    results: dict[tuple[str, int], list[dict]] = {}
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for name, seed, rows in pool.map(_run_one, tasks):
                results[(name, seed)] = rows
    else:
        for task in tasks:
            name, seed, rows = _run_one(task)
            results[(name, seed)] = rows

    rows_by_run = dict(sorted(results.items()))
    outcomes = {key: ScenarioOutcome.from_rows(key[0], key[1], rows)
                for key, rows in rows_by_run.items()}

    icer_rows = []
    benchmark_name = POLICY_NONE if POLICY_NONE in policy_names else None
    for name in policy_names:
        if name == benchmark_name or benchmark_name is None:
            continue
        per_seed = []
        for seed in seeds:
            try:
                value = icer(outcomes[(name, seed)], outcomes[(benchmark_name, seed)],
                             config.policy_year, config.discount_rate,
                             config.icer_discounting)
                icer_rows.append({"scenario": name, "seed": seed,
                                  "icer": value, "undefined_flag": 0})
                per_seed.append(value)
            except IcerUndefinedError:
                icer_rows.append({"scenario": name, "seed": seed,
                                  "icer": "", "undefined_flag": 1})
        if per_seed:
            icer_rows.append({"scenario": name, "seed": "median",
                              "icer": float(np.median(per_seed)), "undefined_flag": 0})
            icer_rows.append({"scenario": name, "seed": "min",
                              "icer": min(per_seed), "undefined_flag": 0})
            icer_rows.append({"scenario": name, "seed": "max",
                              "icer": max(per_seed), "undefined_flag": 0})

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for (name, seed), rows in sorted(results.items()):
            write_metrics_csv(os.path.join(out_dir, f"metrics_{name}_{seed}.csv"), rows)
        write_comparison_csv(os.path.join(out_dir, "comparison.csv"), outcomes)
        write_icer_csv(os.path.join(out_dir, "icer.csv"), icer_rows)

    return {"outcomes": outcomes, "icers": icer_rows, "rows": rows_by_run}


def write_comparison_csv(path: str, outcomes: dict) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "seed", "year", "total_unmet_hours",
                         "per_recipient_unmet", "policy_cost", "hospital_cost"])
        for (name, seed), out in sorted(outcomes.items()):
            for i, year in enumerate(out.years):
                writer.writerow([
                    name, seed, year,
                    f"{out.total_unmet_hours[i]:.6f}",
                    f"{out.per_recipient_unmet[i]:.6f}",
                    f"{out.policy_cost[i]:.6f}",
                    f"{out.hospital_cost[i]:.6f}",
                ])


def write_icer_csv(path: str, icer_rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "seed", "icer", "undefined_flag"])
        for row in icer_rows:
            value = row["icer"]
            writer.writerow([row["scenario"], row["seed"],
                             f"{value:.6f}" if value != "" else "",
                             row["undefined_flag"]])
