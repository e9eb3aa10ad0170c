"""Scenario configuration: every model parameter in one dataclass.

All defaults live here and in the shipped annotated config file, never as
hidden constants inside process code. Many values are synthetic stand-ins
(flagged "synthetic" below): the historical series the model would ideally
consume are replaced by parametric defaults that can be overridden from
rate-table CSV files.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace

from .core import N_SES, WEEKLY_CARE_HOURS, CareLevel

POLICY_NONE = "none"
POLICY_TAX = "tax"
POLICY_DIRECT = "direct"
POLICIES = (POLICY_NONE, POLICY_TAX, POLICY_DIRECT)


def _pw(points: str) -> tuple[tuple[float, float], ...]:
    """Parse "year:value, year:value" into a piecewise-linear control list."""
    out = []
    for part in points.split(","):
        y, v = part.split(":")
        out.append((float(y), float(v)))
    return tuple(out)


def interp_series(points: tuple[tuple[float, float], ...], x: float) -> float:
    """Piecewise-linear interpolation over (x, y) control points, clamped at
    both ends."""
    if x <= points[0][0]:
        return points[0][1]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    return points[-1][1]


# Default town density weights for the 8x12 grid, row-major, loosely shaped
# like a population-density map with a dense south-east corner and sparse
# north; purely synthetic, normalized at world construction.
_DEFAULT_DENSITIES = (
    "0.0,0.1,0.2,0.2,0.3,0.2,0.2,0.1,0.1,0.0,0.0,0.0,"
    "0.1,0.2,0.4,0.6,0.5,0.4,0.3,0.2,0.1,0.1,0.0,0.0,"
    "0.1,0.4,0.8,1.2,1.0,0.8,0.5,0.3,0.2,0.1,0.1,0.0,"
    "0.2,0.6,1.2,2.0,1.6,1.2,0.8,0.5,0.3,0.2,0.1,0.1,"
    "0.2,0.8,1.6,2.4,2.2,1.6,1.0,0.6,0.4,0.2,0.1,0.1,"
    "0.3,1.0,2.0,3.0,2.6,2.0,1.4,0.9,0.5,0.3,0.2,0.1,"
    "0.2,0.8,1.8,2.8,3.2,2.6,1.8,1.2,0.7,0.4,0.2,0.1,"
    "0.1,0.5,1.0,1.8,2.4,2.8,2.2,1.4,0.8,0.4,0.2,0.1"
)


@dataclass
class ScenarioConfig:
    """All parameters of one simulation scenario."""

    seed: int = 1
    policy: str = POLICY_NONE

    # --- timeline ---------------------------------------------------------
    start_year: int = 1860
    census_year: int = 1951          # mortality switches GM -> table here
    projection_year: int = 2009      # table -> Lee-Carter here
    policy_year: int = 2020
    end_year: int = 2040
    reporting_start_year: int = 1990

    # --- initial population (1860; burn-in to 1951 washes the details out)
    initial_population: int = 3400
    initial_age_min: int = 20
    initial_age_max: int = 40
    initial_couple_fraction: float = 0.8
    # Approximation of the 2016 UK social-grade distribution with E folded
    # into D and C2; order D, C2, C1, B, A.
    ses_shares: tuple[float, ...] = (0.20, 0.25, 0.30, 0.20, 0.05)

    # --- world grid --------------------------------------------------------
    town_densities: tuple[float, ...] = tuple(float(v) for v in _DEFAULT_DENSITIES.split(","))
    houses_per_initial_agent: float = 3.0
    bedroom_counts: tuple[int, ...] = (2, 3, 4, 5)
    bedroom_shares: tuple[float, ...] = (0.30, 0.45, 0.20, 0.05)

    # --- mortality (synthetic; CSV override via mortality_csv) -------------
    gm_a: float = 0.009              # Gompertz-Makeham background hazard
    gm_b: float = 6.0e-5
    gm_c: float = 0.085
    table_a: float = 0.0013          # 1951 hazard shape for the table regime
    table_b: float = 5.0e-5
    table_c: float = 0.092
    table_infant: float = 0.025      # infant-mortality hump at the 1951 edge
    table_infant_decay: float = 1.4
    table_improvement: float = 0.013  # annual log-mortality decline from 1951
    lc_drift: float = -1.05          # Lee-Carter k_t drift per year
    # Male excess mortality follows the UK gap: widest around 1970-1990,
    # narrowing afterwards.
    mortality_male_points: tuple[tuple[float, float], ...] = _pw(
        "1860:1.55, 1950:1.75, 1970:2.1, 1995:2.0, 2010:1.72, 2025:1.6, 2040:1.58")
    mortality_ses_mult: tuple[float, ...] = (1.20, 1.08, 1.00, 0.92, 0.85)
    mortality_care_mult: tuple[float, ...] = (1.0, 1.2, 1.5, 2.05, 3.1)
    max_age: int = 120

    # --- fertility (per partnered woman; synthetic) ------------------------
    fertile_age_min: int = 16
    fertile_age_max: int = 45
    fertility_peak_age: float = 27.0
    fertility_age_spread: float = 6.5
    partnered_tfr_points: tuple[tuple[float, float], ...] = _pw(
        "1860:5.6, 1900:4.6, 1920:3.5, 1935:2.9, 1945:3.1, 1950:3.3, 1964:4.8,"
        " 1975:2.5, 1990:2.6, 2005:2.8, 2014:2.75, 2022:1.7, 2029:1.15, 2040:1.1"
    )
    fertility_ses_mult: tuple[float, ...] = (1.15, 1.05, 1.00, 0.90, 0.80)

    # --- partnership and divorce -------------------------------------------
    marriage_rate_bands: tuple[tuple[float, float], ...] = _pw(
        "16:0.30, 22:0.55, 30:0.55, 40:0.30, 50:0.12, 60:0.05, 80:0.02"
    )
    partner_ses_weight: float = 0.85      # decay per SES step
    partner_ses_male_higher_mult: float = 0.5
    partner_age_weight: float = 0.14      # decay per year of age difference
    partner_grid_weight: float = 0.35     # decay per grid distance unit
    divorce_rate_bands: tuple[tuple[float, float], ...] = _pw(
        "16:0.015, 30:0.012, 40:0.009, 50:0.005, 60:0.002, 80:0.001"
    )

    # --- education and social mobility --------------------------------------
    education_theta0: float = -0.35       # continuation log-odds floor
    education_income_weight: float = 0.45
    education_income_scale: float = 100.0
    education_parent_weight: float = 0.60
    education_care_weight: float = 0.30
    education_care_scale: float = 10.0

    # --- job market (unemployment series is a synthetic input) -------------
    weekly_work_hours: float = 40.0
    unemployment_points: tuple[tuple[float, float], ...] = _pw(
        "1860:0.05, 1920:0.06, 1932:0.13, 1940:0.04, 1950:0.03, 1975:0.05,"
        " 1983:0.11, 1990:0.07, 2000:0.055, 2009:0.08, 2015:0.055, 2020:0.045, 2040:0.05"
    )
    unemployment_young_mult: float = 1.8  # ages 16-24
    unemployment_ses_mult: tuple[float, ...] = (1.6, 1.25, 1.0, 0.75, 0.55)
    # Historical female re-entry handicap: hire probability multiplier,
    # standing in for lower labor participation (mothers leaving work rarely
    # returned), converging with male rates by the 2020s.
    female_hire_mult_points: tuple[tuple[float, float], ...] = _pw(
        "1860:0.09, 1950:0.09, 1975:0.11, 1990:0.14, 2000:0.30, 2010:0.7,"
        " 2020:1.0, 2040:1.0")
    job_turnover: float = 0.8             # scales both hire and fire flows
    job_offer_rate: float = 0.10          # employed agents; cross-town share below
    job_same_town_prob: float = 0.85
    job_cross_accept: tuple[float, ...] = (0.15, 0.20, 0.25, 0.35, 0.45)

    # --- wages (per SES group D, C2, C1, B, A) ------------------------------
    initial_wages: tuple[float, ...] = (7.0, 8.5, 10.0, 12.0, 15.0)
    max_wages: tuple[float, ...] = (13.0, 18.0, 25.0, 35.0, 50.0)
    wage_growth_rates: tuple[float, ...] = (0.30, 0.25, 0.20, 0.16, 0.12)
    experience_discount: float | None = None  # None -> use discount_rate
    maternity_years: int = 1

    # --- retirement, tax ----------------------------------------------------
    retirement_age: int = 65
    # Female state-pension age followed UK history: 60 until 2010, then
    # equalized with the male age by 2020.
    female_retirement_points: tuple[tuple[float, float], ...] = _pw(
        "1860:57, 1995:57, 2010:61, 2020:65, 2040:65")
    pension_ratio: float = 0.45
    pension_floor_weekly: float = 135.0
    tax_rate: float = 0.25

    # --- care ---------------------------------------------------------------
    quantum_hours: int = 4
    care_price_per_hour: float = 26.0
    care_budget_beta: float = 0.002
    kinship_decay_alpha: float = 1.3
    gov_care_share: float = 0.2
    care_onset_base: float = 0.008       # None -> Low hazard at the reference age
    care_onset_age_ref: float = 65.0
    care_onset_age_rate: float = 0.115
    care_prog_base: float = 0.05        # one-level progression at the reference age
    care_prog_age_ref: float = 65.0
    care_prog_age_rate: float = 0.10
    care_unmet_feedback: float = 0.012   # per discounted unmet hour
    care_male_mult: float = 3.0
    care_ses_mult: tuple[float, ...] = (1.25, 1.10, 1.00, 0.90, 0.80)
    care_prob_cap: float = 0.85

    # --- hospitalisation ----------------------------------------------------
    hospital_cost_per_day: float = 380.0
    hospital_base_days: tuple[float, ...] = (0.0, 2.0, 5.0, 10.0, 20.0)
    hospital_unmet_gamma: float = 1.5

    # --- migration ----------------------------------------------------------
    relocation_cost_scale: float = 1.0   # K
    relocation_cost_exponent: float = 0.5  # p, in (0, 1]
    move_gate_base: float = 0.8
    move_gate_cost_weight: float = 0.05
    move_gate_attraction_weight: float = 0.6
    move_gate_attraction_scale: float = 5.0
    move_gate_homophily_weight: float = 1.2
    independence_same_town_prob: float = 0.8
    retiree_move_in_scale: float = 0.08

    # --- discounting and policy costs ---------------------------------------
    discount_rate: float = 0.035
    icer_discounting: bool = True

    # --- engine/io ----------------------------------------------------------
    check_invariants: bool = False
    event_log: bool = False
    mortality_csv: str = ""
    fertility_csv: str = ""
    unemployment_csv: str = ""
    divorce_csv: str = ""

    def ses_curve(self, ses: int) -> tuple[float, float, float]:
        return (self.initial_wages[ses], self.max_wages[ses], self.wage_growth_rates[ses])

    @property
    def experience_discount_rate(self) -> float:
        if self.experience_discount is None:
            return self.discount_rate
        return self.experience_discount

    def with_policy(self, policy: str, seed: int | None = None) -> "ScenarioConfig":
        out = replace(self, policy=policy)
        if seed is not None:
            out = replace(out, seed=seed)
        return out

    def digest(self) -> str:
        """Stable hash of every parameter, for run manifests."""
        parts = []
        for f in fields(self):
            parts.append(f"{f.name}={getattr(self, f.name)!r}")
        return hashlib.sha256(";".join(parts).encode()).hexdigest()


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def validate_config(config: ScenarioConfig) -> ValidationReport:
    """Check every cross-field constraint; returns the ordered violation
    list and never mutates the config."""
    rep = ValidationReport()

    if not (config.start_year < config.census_year < config.projection_year
            < config.policy_year <= config.end_year):
        rep.add("year ordering must satisfy start < census < projection < policy <= end")
    if config.reporting_start_year < config.start_year:
        rep.add("reporting_start_year before start_year")

    if config.quantum_hours <= 0:
        rep.add("quantum_hours must be positive")
    else:
        bad = [h for lvl, h in WEEKLY_CARE_HOURS.items()
               if lvl != CareLevel.NONE and h % config.quantum_hours != 0]
        if bad:
            rep.add("quantum must divide care-level hours (8,16,32,80); "
                    f"{config.quantum_hours} does not divide {bad}")

    if config.initial_population < 2:
        rep.add("initial_population must be at least 2")
    if not (0.0 <= config.initial_couple_fraction <= 1.0):
        rep.add("initial_couple_fraction outside [0,1]")
    if not (0 < config.initial_age_min <= config.initial_age_max):
        rep.add("initial age range invalid")

    if len(config.ses_shares) != N_SES:
        rep.add("ses_shares must have 5 entries (D, C2, C1, B, A)")
    elif any(s < 0 for s in config.ses_shares) or abs(sum(config.ses_shares) - 1.0) > 1e-9:
        rep.add("ses_shares must be nonnegative and sum to 1")

    if len(config.town_densities) != 96:
        rep.add("town_densities must have 8x12 = 96 entries")
    elif any(d < 0 for d in config.town_densities) or sum(config.town_densities) <= 0:
        rep.add("town_densities must be nonnegative with positive total")

    for name in ("initial_wages", "max_wages", "wage_growth_rates",
                 "mortality_ses_mult", "fertility_ses_mult",
                 "unemployment_ses_mult", "job_cross_accept", "care_ses_mult"):
        if len(getattr(config, name)) != N_SES:
            rep.add(f"{name} must have 5 entries")
    if len(config.initial_wages) == N_SES and len(config.max_wages) == N_SES:
        for i in range(N_SES):
            if not (0 < config.initial_wages[i] < config.max_wages[i]):
                rep.add(f"wage endpoints invalid for SES index {i}: initial must be < max")
        for i in range(N_SES - 1):
            if (config.initial_wages[i] > config.initial_wages[i + 1]
                    or config.max_wages[i] > config.max_wages[i + 1]):
                rep.add("wage endpoints must be weakly increasing from D to A")
    if any(r <= 0 for r in config.wage_growth_rates):
        rep.add("wage growth rates must be positive")

    for name, lo_ok in (("care_price_per_hour", False), ("care_budget_beta", False),
                        ("hospital_cost_per_day", True), ("relocation_cost_scale", False)):
        v = getattr(config, name)
        if v < 0 or (not lo_ok and v == 0):
            rep.add(f"{name} must be positive")
    if config.kinship_decay_alpha < 0:
        rep.add("kinship_decay_alpha must be nonnegative")
    if not (0 < config.relocation_cost_exponent <= 1.0):
        rep.add("relocation_cost_exponent must lie in (0, 1]")
    if not (0.0 <= config.gov_care_share <= 1.0):
        rep.add("gov_care_share outside [0,1]")
    if not (0.0 <= config.tax_rate < 1.0):
        rep.add("tax_rate outside [0,1)")
    if not (0.0 <= config.discount_rate < 1.0):
        rep.add("discount_rate outside [0,1)")

    for name in ("marriage_rate_bands", "divorce_rate_bands",
                 "unemployment_points", "partnered_tfr_points"):
        pts = getattr(config, name)
        if any(x1 <= x0 for (x0, _), (x1, _) in zip(pts, pts[1:])):
            rep.add(f"{name} control points must be strictly increasing in x")
        if name != "partnered_tfr_points" and any(v < 0 or v > 1 for _, v in pts):
            rep.add(f"{name} values outside [0,1]")

    if config.policy not in POLICIES:
        rep.add(f"policy must be one of {POLICIES}")
    if len(config.bedroom_counts) != len(config.bedroom_shares):
        rep.add("bedroom_counts and bedroom_shares must align")
    elif abs(sum(config.bedroom_shares) - 1.0) > 1e-9:
        rep.add("bedroom_shares must sum to 1")
    if len(config.hospital_base_days) != len(WEEKLY_CARE_HOURS):
        rep.add("hospital_base_days must have one entry per care level")
    elif any(d < 0 for d in config.hospital_base_days):
        rep.add("hospital_base_days must be nonnegative")
    if len(config.mortality_care_mult) != len(WEEKLY_CARE_HOURS):
        rep.add("mortality_care_mult must have one entry per care level")

    return rep
