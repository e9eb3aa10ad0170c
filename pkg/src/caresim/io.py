"""Config-file and output plumbing.

The scenario config is one flat key-value text file: `key = value` lines,
`#` comments, keys namespaced by prefix (dots are accepted and mapped to
underscores). Piecewise series are written as `x:y` pairs separated by
commas. Every run directory gets a manifest recording the config hash, the
seed and the package version, so a run can be reproduced exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import fields

from .params import ScenarioConfig, ValidationReport


class ConfigError(ValueError):
    pass


_FIELD_TYPES = {f.name: f for f in fields(ScenarioConfig)}


def _parse_value(name: str, raw: str):
    default = getattr(ScenarioConfig(), name)
    raw = raw.strip()
    if isinstance(default, bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected boolean, got {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        if raw == "":
            return ()
        parts = [p.strip() for p in raw.split(",") if p.strip()]
        if default and isinstance(default[0], tuple):
            out = []
            for part in parts:
                x, _, y = part.partition(":")
                if not _:
                    raise ConfigError(f"{name}: expected x:y pairs, got {part!r}")
                out.append((float(x), float(y)))
            return tuple(out)
        if default and isinstance(default[0], int):
            return tuple(int(p) for p in parts)
        return tuple(float(p) for p in parts)
    if default is None or isinstance(default, str):
        if raw.lower() == "none" and name == "experience_discount":
            return None
        if name == "experience_discount":
            return float(raw)
        return raw
    raise ConfigError(f"{name}: unsupported field type")  # pragma: no cover


def parse_config_text(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    config = base if base is not None else ScenarioConfig()
    errors = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected key = value")
            continue
        key, _, raw = stripped.partition("=")
        name = key.strip().replace(".", "_").replace("-", "_")
        if name not in _FIELD_TYPES:
            errors.append(f"line {lineno}: unknown parameter {key.strip()!r}")
            continue
        try:
            setattr(config, name, _parse_value(name, raw))
        except (ValueError, ConfigError) as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise ConfigError("; ".join(errors))
    return config


def load_config(path: str) -> ScenarioConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ", ".join(f"{x:g}:{y:g}" for x, y in value)
        return ", ".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def write_config(path: str, config: ScenarioConfig, header: str = "") -> None:
    lines = []
    if header:
        lines.extend(f"# {line}" for line in header.splitlines())
        lines.append("")
    for f in fields(ScenarioConfig):
        lines.append(f"{f.name} = {_format_value(getattr(config, f.name))}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(out_dir: str, config: ScenarioConfig, seeds: list[int],
                   policies: list[str]) -> str:
    from . import __version__

    manifest = {
        "config_digest": config.digest(),
        "seeds": seeds,
        "policies": policies,
        "version": __version__,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def format_report(report: ValidationReport) -> str:
    if report.ok:
        return "config OK"
    return "\n".join(f"config violation: {v}" for v in report.violations)
