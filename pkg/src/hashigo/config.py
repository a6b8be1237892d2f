"""Flat `key = value` engine configuration shared by the CLI and the service."""

from __future__ import annotations

from pathlib import Path

from .constraints import PROFILES, ConstraintError, ToleranceProfile
from .segmenter import SegmenterConfig


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config(path) -> dict:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def tolerance_from_config(mapping: dict, profile: str | None = None) -> ToleranceProfile:
    """Profile name resolves first (CLI flag beats config file), then explicit
    tolerance.* keys override individual fields."""
    name = profile or mapping.get("tolerance.profile", "default")
    if name not in PROFILES:
        raise ConfigError(f"unknown tolerance profile {name!r} (use default or strict)")
    base = PROFILES[name]
    try:
        return ToleranceProfile(
            float(mapping.get("tolerance.angle_deg", base.angle_tol_deg)),
            float(mapping.get("tolerance.pos_frac", base.pos_tol_frac)),
            float(mapping.get("tolerance.size_ratio_min", base.size_ratio_min)),
        )
    except (ValueError, ConstraintError) as e:
        raise ConfigError(str(e)) from e


def segmenter_from_config(mapping: dict) -> SegmenterConfig:
    return SegmenterConfig.from_mapping(mapping)


def config_fingerprint(mapping: dict, tol: ToleranceProfile, seg: SegmenterConfig) -> str:
    import hashlib

    payload = repr((sorted(mapping.items()), tol, seg))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
