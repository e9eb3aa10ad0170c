"""Command-line entry points: validate a config, run one scenario, or
compare policies across seeds."""

from __future__ import annotations

import argparse
import os
import sys

from . import engine, policy
from .io import ConfigError, format_report, load_config, write_manifest
from .metrics import write_metrics_csv
from .params import POLICIES, ScenarioConfig, validate_config


def _load(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig()
    return load_config(path)


def cmd_validate(args) -> int:
    try:
        config = _load(args.config)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = validate_config(config)
    if report.ok:
        print("config OK")
        return 0
    print(format_report(report), file=sys.stderr)
    return 1


def cmd_run(args) -> int:
    try:
        config = _load(args.config)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config.seed = args.seed
    if args.policy:
        config.policy = args.policy
    report = validate_config(config)
    if not report.ok:
        print(format_report(report), file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    try:
        state, rows = engine.run(config)
    except Exception as exc:  # rate-table or simulation failures
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out_csv = os.path.join(args.out, f"metrics_{config.policy}_{config.seed}.csv")
    write_metrics_csv(out_csv, rows)
    if state.events is not None:
        import json
        events_path = os.path.join(args.out, f"events_{config.policy}_{config.seed}.ndjson")
        with open(events_path, "w") as fh:
            for event in state.events:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
    write_manifest(args.out, config, [config.seed], [config.policy])
    print(f"wrote {out_csv}")
    return 0


def cmd_compare(args) -> int:
    try:
        config = _load(args.config)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = validate_config(config)
    if not report.ok:
        print(format_report(report), file=sys.stderr)
        return 1
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    bad = [p for p in policies if p not in POLICIES]
    if bad or not seeds:
        print(f"error: unknown policies {bad} or empty seed list", file=sys.stderr)
        return 2
    try:
        policy.run_scenario_set(config, policies, seeds, out_dir=args.out,
                                workers=args.workers)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_manifest(args.out, config, seeds, policies)
    print(f"wrote {len(policies) * len(seeds)} runs to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caresim",
        description="Agent-based social-care microsimulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", default=None)
    p_val.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--seed", type=int, default=1)
    p_run.add_argument("--policy", choices=POLICIES, default=None)
    p_run.add_argument("--out", required=True)
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run a scenario set under common seeds")
    p_cmp.add_argument("--config", default=None)
    p_cmp.add_argument("--policies", default="none,tax,direct")
    p_cmp.add_argument("--seeds", default="1")
    p_cmp.add_argument("--workers", type=int,
                       default=int(os.environ.get("CARESIM_WORKERS", "1")))
    p_cmp.add_argument("--out", required=True)
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
