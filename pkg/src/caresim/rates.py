"""Demographic rate tables: mortality (three regimes), fertility,
unemployment and divorce.

Defaults are parametric and synthetic. Each table can be replaced from a
CSV file whose header names the dimensions it provides (subset of
``age,sex,ses,year`` plus ``rate``); omitted dimensions broadcast. Tables
are validated at load: every cell the simulation can touch must resolve,
and probabilities must lie in [0, 1].
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .core import N_SES, SES_NAMES, Sex
from .params import ScenarioConfig, interp_series


class RateTableError(ValueError):
    """A rate table failed validation at load time."""


SEX_CODES = {"m": 0, "male": 0, "f": 1, "female": 1}


def read_rate_csv(path: str, allowed: tuple[str, ...]) -> list[dict]:
    """Read a rate CSV into row dicts; header must be a subset of
    ``allowed`` plus ``rate``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        bad = [c for c in header if c not in allowed and c != "rate"]
        if bad:
            raise RateTableError(f"{path}: unexpected columns {bad}; allowed {allowed}")
        if "rate" not in header:
            raise RateTableError(f"{path}: missing 'rate' column")
        rows = list(reader)
    if not rows:
        raise RateTableError(f"{path}: empty table")
    return rows


def _parse_ses(value: str) -> int:
    v = value.strip()
    if v in SES_NAMES:
        return SES_NAMES.index(v)
    try:
        idx = int(v)
    except ValueError:
        raise RateTableError(f"unknown SES code {value!r}") from None
    if not 0 <= idx < N_SES:
        raise RateTableError(f"SES index {idx} out of range")
    return idx


@dataclass
class MortalityProvider:
    """Base annual death probability by (year, age, sex), regimes already
    stitched together: Gompertz-Makeham before the census year, a table up
    to the projection year, Lee-Carter with linear k_t drift after."""

    start_year: int
    q: np.ndarray  # shape (n_years, n_ages, 2)

    def base_probability(self, age: int, sex: int, year: int) -> float:
        return float(self.base_array(np.asarray([age]), np.asarray([sex]), year)[0])

    def base_array(self, ages: np.ndarray, sexes: np.ndarray, year: int) -> np.ndarray:
        yi = min(max(year - self.start_year, 0), self.q.shape[0] - 1)
        ai = np.minimum(ages, self.q.shape[1] - 1)
        return self.q[yi, ai, sexes]


def _gm_hazard(ages: np.ndarray, a: float, b: float, c: float) -> np.ndarray:
    return a + b * np.exp(c * ages)


def build_mortality(config: ScenarioConfig) -> MortalityProvider:
    """Assemble the full (year, age, sex) base-probability surface."""
    n_years = config.end_year - config.start_year + 1
    n_ages = config.max_age + 1
    ages = np.arange(n_ages, dtype=float)
    hazard = np.zeros((n_years, n_ages, 2))

    gm = _gm_hazard(ages, config.gm_a, config.gm_b, config.gm_c)
    table_1951 = (config.table_a
                  + config.table_infant * np.exp(-config.table_infant_decay * ages)
                  + config.table_b * np.exp(config.table_c * ages))
    b_x = 1.0 / n_ages  # uniform Lee-Carter age loading

    for year in range(config.start_year, config.end_year + 1):
        yi = year - config.start_year
        if year < config.census_year:
            h = gm
        elif year <= config.projection_year:
            h = table_1951 * math.exp(-config.table_improvement * (year - config.census_year))
        else:
            a_x = np.log(table_1951) - config.table_improvement * (
                config.projection_year - config.census_year)
            k_t = config.lc_drift * (year - config.projection_year)
            h = np.exp(a_x + b_x * k_t)
        hazard[yi, :, 0] = h * interp_series(config.mortality_male_points, year)
        hazard[yi, :, 1] = h

    q = 1.0 - np.exp(-hazard)
    q[:, -1, :] = 1.0  # hard cap at max_age
    return MortalityProvider(config.start_year, q)


def mortality_from_rows(config: ScenarioConfig, rows: list[dict], path: str) -> MortalityProvider:
    """Dense (year, age, sex) table from CSV rows; the table regime years
    must be fully covered, other regime years fall back to the parametric
    surface where the CSV is silent."""
    default = build_mortality(config)
    q = default.q.copy()
    n_years, n_ages, _ = q.shape
    filled = np.zeros((n_years, n_ages, 2), dtype=bool)
    for row in rows:
        rate = float(row["rate"])
        if not 0.0 <= rate <= 1.0:
            raise RateTableError(f"{path}: mortality rate {rate} outside [0,1]")
        years = ([int(row["year"]) - config.start_year]
                 if row.get("year") else range(n_years))
        ages = [int(row["age"])] if row.get("age") else range(n_ages)
        sexes = ([SEX_CODES[row["sex"].strip().lower()]]
                 if row.get("sex") else (0, 1))
        for yi in years:
            if not 0 <= yi < n_years:
                continue
            for ai in ages:
                if not 0 <= ai < n_ages:
                    raise RateTableError(f"{path}: age {ai} out of range")
                for si in sexes:
                    q[yi, ai, si] = rate
                    filled[yi, ai, si] = True
    lo = config.census_year - config.start_year
    hi = config.projection_year - config.start_year
    if not filled[lo:hi + 1].all():
        missing = np.argwhere(~filled[lo:hi + 1])
        yi, ai, si = missing[0]
        raise RateTableError(
            f"{path}: table regime not fully covered; first missing cell "
            f"year={config.census_year + int(yi)} age={int(ai)} "
            f"sex={'m' if si == 0 else 'f'} (+{len(missing) - 1} more)")
    q[:, -1, :] = 1.0
    return MortalityProvider(config.start_year, q)


class RateTables:
    """All demographic rate inputs for one scenario."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        if config.mortality_csv:
            rows = read_rate_csv(config.mortality_csv, ("age", "sex", "year"))
            self.mortality = mortality_from_rows(config, rows, config.mortality_csv)
        else:
            self.mortality = build_mortality(config)

        self._fertility = self._build_fertility(config)
        self._unemployment = self._build_unemployment(config)
        self._divorce_points = self._build_divorce(config)

    # -- fertility ----------------------------------------------------------

    def _build_fertility(self, config: ScenarioConfig) -> np.ndarray:
        n_years = config.end_year - config.start_year + 1
        ages = np.arange(config.fertile_age_min, config.fertile_age_max + 1, dtype=float)
        profile = np.exp(-0.5 * ((ages - config.fertility_peak_age)
                                 / config.fertility_age_spread) ** 2)
        profile /= profile.sum()
        table = np.zeros((n_years, len(ages), N_SES))
        for year in range(config.start_year, config.end_year + 1):
            tfr = interp_series(config.partnered_tfr_points, year)
            for ses in range(N_SES):
                table[year - config.start_year, :, ses] = (
                    tfr * profile * config.fertility_ses_mult[ses])
        if config.fertility_csv:
            rows = read_rate_csv(config.fertility_csv, ("age", "ses", "year"))
            filled = np.zeros_like(table, dtype=bool)
            for row in rows:
                rate = float(row["rate"])
                if rate < 0 or rate > 1:
                    raise RateTableError(
                        f"{config.fertility_csv}: fertility rate {rate} outside [0,1]")
                yis = ([int(row["year"]) - config.start_year]
                       if row.get("year") else range(n_years))
                ais = ([int(row["age"]) - config.fertile_age_min]
                       if row.get("age") else range(len(ages)))
                sis = [_parse_ses(row["ses"])] if row.get("ses") else range(N_SES)
                for yi in yis:
                    if not 0 <= yi < n_years:
                        continue
                    for ai in ais:
                        if not 0 <= ai < len(ages):
                            continue
                        for si in sis:
                            table[yi, ai, si] = rate
                            filled[yi, ai, si] = True
            if not filled.all():
                raise RateTableError(
                    f"{config.fertility_csv}: fertility table does not cover "
                    "every (year, fertile age, SES) cell")
        np.clip(table, 0.0, 1.0, out=table)
        return table

    def fertility_rate(self, age: int, ses: int, year: int) -> float:
        cfg = self.config
        if not cfg.fertile_age_min <= age <= cfg.fertile_age_max:
            return 0.0
        yi = min(max(year - cfg.start_year, 0), self._fertility.shape[0] - 1)
        return float(self._fertility[yi, age - cfg.fertile_age_min, ses])

    # -- unemployment ---------------------------------------------------------

    def _build_unemployment(self, config: ScenarioConfig):
        if not config.unemployment_csv:
            return None
        rows = read_rate_csv(config.unemployment_csv, ("year", "age_band", "ses"))
        table: dict[tuple[int, str, int], float] = {}
        for row in rows:
            rate = float(row["rate"])
            if not 0.0 <= rate <= 1.0:
                raise RateTableError(
                    f"{config.unemployment_csv}: rate {rate} outside [0,1]")
            band = (row.get("age_band") or "*").strip()
            if band not in ("*", "16-24", "25+"):
                raise RateTableError(
                    f"{config.unemployment_csv}: unknown age_band {band!r}")
            years = ([int(row["year"])] if row.get("year")
                     else range(config.start_year, config.end_year + 1))
            bands = ("16-24", "25+") if band == "*" else (band,)
            sess = [_parse_ses(row["ses"])] if row.get("ses") else range(N_SES)
            for y in years:
                for b in bands:
                    for s in sess:
                        table[(y, b, s)] = rate
        for y in range(config.start_year, config.end_year + 1):
            for b in ("16-24", "25+"):
                for s in range(N_SES):
                    if (y, b, s) not in table:
                        raise RateTableError(
                            f"{config.unemployment_csv}: missing cell "
                            f"year={y} age_band={b} ses={SES_NAMES[s]}")
        return table

    def unemployment_rate(self, year: int, age: int, ses: int) -> float:
        cfg = self.config
        band = "16-24" if age < 25 else "25+"
        if self._unemployment is not None:
            y = min(max(year, cfg.start_year), cfg.end_year)
            return self._unemployment[(y, band, ses)]
        base = interp_series(cfg.unemployment_points, year)
        mult = cfg.unemployment_young_mult if age < 25 else 1.0
        return min(0.9, base * mult * cfg.unemployment_ses_mult[ses])

    def female_hire_mult(self, year: int) -> float:
        return interp_series(self.config.female_hire_mult_points, year)

    def stationary_nonwork(self, year: int, age: int, ses: int, sex: int) -> float:
        """Long-run non-employment share implied by the hire/fire flows;
        used to draw initial employment states."""
        u = self.unemployment_rate(year, age, ses)
        m = self.female_hire_mult(year) if sex == Sex.FEMALE else 1.0
        return u / (u + (1.0 - u) * m)

    # -- divorce ---------------------------------------------------------------

    def _build_divorce(self, config: ScenarioConfig):
        if not config.divorce_csv:
            return config.divorce_rate_bands
        rows = read_rate_csv(config.divorce_csv, ("age",))
        pts = []
        for row in rows:
            if not row.get("age"):
                raise RateTableError(f"{config.divorce_csv}: 'age' column required")
            rate = float(row["rate"])
            if not 0.0 <= rate <= 1.0:
                raise RateTableError(f"{config.divorce_csv}: rate {rate} outside [0,1]")
            pts.append((float(row["age"]), rate))
        pts.sort()
        if any(a1 <= a0 for (a0, _), (a1, _) in zip(pts, pts[1:])):
            raise RateTableError(f"{config.divorce_csv}: duplicate ages")
        return tuple(pts)

    def divorce_rate(self, age: int) -> float:
        return interp_series(self._divorce_points, age)

    # -- care transitions -------------------------------------------------------

    def care_onset_base(self, age: int, sex: int, ses: int) -> float:
        cfg = self.config
        p = cfg.care_onset_base * math.exp(cfg.care_onset_age_rate * (age - cfg.care_onset_age_ref))
        if sex == Sex.MALE:
            p *= cfg.care_male_mult
        return min(cfg.care_prob_cap, p * cfg.care_ses_mult[ses])

    def care_progression_base(self, age: int, sex: int, ses: int) -> float:
        cfg = self.config
        p = cfg.care_prog_base * math.exp(cfg.care_prog_age_rate * (age - cfg.care_prog_age_ref))
        if sex == Sex.MALE:
            p *= cfg.care_male_mult
        return min(cfg.care_prob_cap, p * cfg.care_ses_mult[ses])
