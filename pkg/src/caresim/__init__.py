"""Agent-based microsimulation of informal and formal social care in a
synthetic UK-like population, with kinship-network care allocation and
policy scenario comparison."""

__version__ = "0.1.0"

from .core import (Agent, CareLevel, Household, KinshipNetwork, Sex, Status,
                   WorldGrid, care_hours, supply_hours)
from .params import ScenarioConfig, ValidationReport, validate_config
from .rates import RateTables
from .state import SimulationState
from .economy import SalaryCurve, care_budget_share, hourly_wage, update_experience
from .kinship import build_kinship_network, household_kinship
from .care import CareLedger, CareQuantum, allocate_care, hospital_days
from .migration import care_attraction, relocation_cost
from .policy import IcerUndefinedError, ScenarioOutcome, icer, run_scenario_set
from .engine import initialize, run, step_year

__all__ = [
    "Agent", "CareLedger", "CareLevel", "CareQuantum", "Household",
    "IcerUndefinedError", "KinshipNetwork", "RateTables", "SalaryCurve",
    "ScenarioConfig", "ScenarioOutcome", "Sex", "SimulationState", "Status",
    "ValidationReport", "WorldGrid", "allocate_care", "build_kinship_network",
    "care_attraction", "care_budget_share", "care_hours", "hospital_days",
    "hourly_wage", "household_kinship", "icer", "initialize", "relocation_cost",
    "run", "run_scenario_set", "step_year", "supply_hours", "update_experience",
    "validate_config",
]
