"""Chart builders for simulation output CSVs.

Each build_* function reads columns from already-parsed metrics rows and
returns the exact arrays it plots, so tests can verify that rendered series
equal CSV columns with no transformation beyond documented aggregation.
Rendering never touches the input files.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "carefigs"  # deterministic SVG ids

import matplotlib.pyplot as plt
import numpy as np

LEVELS = ("low", "moderate", "substantial", "critical")
SES = ("D", "C2", "C1", "B", "A")
KIND_COLORS = {"informal": "#2a7fbf", "formal": "#7f52bf", "unmet": "#bf4040"}


class ChartDataError(ValueError):
    """A required column is missing or malformed; names the column."""


def read_csv_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ChartDataError(f"{path}: empty CSV")
    return rows


def column(rows: list[dict], name: str) -> np.ndarray:
    try:
        raw = [r[name] for r in rows]
    except KeyError:
        raise ChartDataError(f"missing column {name!r}") from None
    out = []
    for v in raw:
        if v == "NA":
            out.append(np.nan)
        else:
            try:
                out.append(float(v))
            except ValueError:
                raise ChartDataError(f"malformed value {v!r} in column {name!r}") from None
    return np.asarray(out)


# -- single-run charts -----------------------------------------------------------


def build_population_care(rows):
    return {
        "year": column(rows, "year"),
        "informal": column(rows, "informal_total"),
        "formal": column(rows, "formal_total"),
        "unmet": column(rows, "unmet_total"),
    }


def build_per_recipient(rows):
    return {
        "year": column(rows, "year"),
        "informal": column(rows, "informal_per_recipient"),
        "formal": column(rows, "formal_per_recipient"),
        "unmet": column(rows, "unmet_per_recipient"),
    }


def build_by_level(rows):
    out = {}
    for kind in ("informal", "formal", "unmet"):
        out[kind] = np.asarray([np.nanmean(column(rows, f"{kind}_pr_{lvl}"))
                                for lvl in LEVELS])
    out["labels"] = np.asarray(LEVELS, dtype=object)
    return out


def build_by_ses(rows):
    out = {}
    for kind in ("informal", "formal", "unmet"):
        out[kind] = np.asarray([np.nanmean(column(rows, f"{kind}_ses_{g}"))
                                for g in SES])
    out["labels"] = np.asarray(SES, dtype=object)
    return out


def build_gender(rows):
    return {
        "year": column(rows, "year"),
        "women_share": column(rows, "women_informal_share"),
        "income_ratio": column(rows, "income_ratio_female_male"),
    }


def build_by_distance(rows):
    out = {}
    for kind in ("informal", "formal"):
        out[kind] = np.asarray([np.nanmean(column(rows, f"{kind}_dist_{d}"))
                                for d in range(4)])
    out["labels"] = np.asarray(["household", "I", "II", "III"], dtype=object)
    return out


def build_hospital(rows):
    return {
        "year": column(rows, "year"),
        "per_capita_cost": column(rows, "hospital_cost_per_capita"),
    }


# -- comparison charts --------------------------------------------------------------


def build_policy_unmet(comparison_rows):
    scenarios = []
    for r in comparison_rows:
        if r["scenario"] not in scenarios:
            scenarios.append(r["scenario"])
    out = {"scenarios": np.asarray(scenarios, dtype=object)}
    for scen in scenarios:
        rows = [r for r in comparison_rows if r["scenario"] == scen]
        seeds = sorted({r["seed"] for r in rows})
        first = [r for r in rows if r["seed"] == seeds[0]]
        out[f"{scen}_year"] = np.asarray([float(r["year"]) for r in first])
        out[f"{scen}_unmet"] = np.asarray(
            [float(r["per_recipient_unmet"]) for r in first])
    return out


def build_icer_bars(icer_rows):
    rows = [r for r in icer_rows if r["seed"] == "median" and r["icer"] != ""]
    if not rows:
        rows = [r for r in icer_rows if r["icer"] != ""]
    return {
        "scenarios": np.asarray([r["scenario"] for r in rows], dtype=object),
        "icer": np.asarray([float(r["icer"]) for r in rows]),
    }


# -- rendering ----------------------------------------------------------------------


def _save(fig, out_dir, name, fmt):
    path = os.path.join(out_dir, f"{name}.{fmt}")
    metadata = {"Date": None} if fmt == "svg" else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)
    return path


def _series_chart(data, keys, title, ylabel, out_dir, name, fmt):
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    for key in keys:
        ax.plot(data["year"], data[key], label=key, color=KIND_COLORS.get(key))
    ax.set_xlabel("year")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_dir, name, fmt)


def _bar_chart(data, keys, title, ylabel, out_dir, name, fmt):
    labels = data["labels"]
    x = np.arange(len(labels))
    width = 0.8 / len(keys)
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    for i, key in enumerate(keys):
        ax.bar(x + (i - (len(keys) - 1) / 2) * width, data[key], width,
               label=key, color=KIND_COLORS.get(key))
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_dir, name, fmt)


def render_all(in_dir: str, out_dir: str, fmt: str = "png") -> list[str]:
    """Render every chart the input directory supports; returns the written
    files. Policy charts are skipped with a warning when no comparison CSV
    is present."""
    import glob as globmod
    import sys

    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    metric_files = sorted(globmod.glob(os.path.join(in_dir, "metrics_*.csv")))
    preferred = [p for p in metric_files if "_none_" in os.path.basename(p)]
    metrics_path = (preferred or metric_files or [None])[0]
    if metrics_path is not None:
        rows = read_csv_rows(metrics_path)
        written.append(_series_chart(
            build_population_care(rows), ("informal", "formal", "unmet"),
            "Weekly care hours, whole population", "hours/week",
            out_dir, "population_care_hours", fmt))
        written.append(_series_chart(
            build_per_recipient(rows), ("informal", "formal", "unmet"),
            "Weekly care hours per recipient", "hours/week",
            out_dir, "per_recipient_hours", fmt))
        written.append(_bar_chart(
            build_by_level(rows), ("informal", "formal", "unmet"),
            "Care received per recipient by need level", "hours/week",
            out_dir, "care_by_need_level", fmt))
        written.append(_bar_chart(
            build_by_ses(rows), ("informal", "formal", "unmet"),
            "Care received by SES group (poorest to wealthiest)", "hours/week",
            out_dir, "care_by_ses", fmt))
        gender = build_gender(rows)
        fig, ax = plt.subplots(figsize=(7.5, 4.5))
        ax.plot(gender["year"], gender["women_share"], label="women's informal share")
        ax.plot(gender["year"], gender["income_ratio"], label="female/male income")
        ax.set_xlabel("year")
        ax.set_ylabel("ratio")
        ax.set_ylim(0, 1.05)
        ax.set_title("Gender composition of care and income")
        ax.legend()
        fig.tight_layout()
        written.append(_save(fig, out_dir, "gender_care_income", fmt))
        written.append(_bar_chart(
            build_by_distance(rows), ("informal", "formal"),
            "Care supplied by kinship distance", "hours/week",
            out_dir, "care_by_kinship_distance", fmt))
        hosp = build_hospital(rows)
        fig, ax = plt.subplots(figsize=(7.5, 4.5))
        ax.plot(hosp["year"], hosp["per_capita_cost"], color="#bf4040")
        ax.set_xlabel("year")
        ax.set_ylabel("currency/year")
        ax.set_title("Per-capita hospitalisation cost of unmet care need")
        fig.tight_layout()
        written.append(_save(fig, out_dir, "hospital_cost_per_capita", fmt))

    comparison_path = os.path.join(in_dir, "comparison.csv")
    icer_path = os.path.join(in_dir, "icer.csv")
    if os.path.exists(comparison_path):
        comp = read_csv_rows(comparison_path)
        data = build_policy_unmet(comp)
        fig, ax = plt.subplots(figsize=(7.5, 4.5))
        for scen in data["scenarios"]:
            ax.plot(data[f"{scen}_year"], data[f"{scen}_unmet"], label=scen)
        ax.set_xlabel("year")
        ax.set_ylabel("hours/week per recipient")
        ax.set_title("Unmet care need per recipient by policy scenario")
        ax.legend()
        fig.tight_layout()
        written.append(_save(fig, out_dir, "policy_unmet_comparison", fmt))
        if os.path.exists(icer_path):
            bars = build_icer_bars(read_csv_rows(icer_path))
            fig, ax = plt.subplots(figsize=(6.0, 4.5))
            ax.bar(bars["scenarios"], bars["icer"], color="#2a7fbf")
            ax.set_ylabel("cost per unmet hour averted")
            ax.set_title("Policy cost-effectiveness (ICER)")
            fig.tight_layout()
            written.append(_save(fig, out_dir, "policy_icer", fmt))
    else:
        print("warning: no comparison.csv found; policy charts skipped",
              file=sys.stderr)
    return written
