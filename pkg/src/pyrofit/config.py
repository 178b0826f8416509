"""Engine configuration: one bundle of the per-module config sections with
merge semantics defaults <- config file (JSON) <- explicit overrides.
Unknown keys are rejected by name so typos never silently no-op.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .choreography import ChoreoConfig, Shape, Size
from .errors import UnknownConfigKey
from .pyro import SceneConfig
from .similarity import ScoringConfig
from .skeleton import IngestConfig, LimbGraph, default_limb_graph, limb_graph_from_dict


@dataclass
class EngineConfig:
    ingest: IngestConfig
    scoring: ScoringConfig
    choreo: ChoreoConfig
    scene: SceneConfig
    limb_graph: LimbGraph


_SECTIONS = ("ingest", "scoring", "choreo", "scene")
_SECTION_TYPES = {
    "ingest": IngestConfig,
    "scoring": ScoringConfig,
    "choreo": ChoreoConfig,
    "scene": SceneConfig,
}

# flat key -> owning section
_KEY_OWNER = {
    f.name: section
    for section, cls in _SECTION_TYPES.items()
    for f in dataclasses.fields(cls)
}


def default_engine_config() -> EngineConfig:
    return EngineConfig(
        ingest=IngestConfig(),
        scoring=ScoringConfig(),
        choreo=ChoreoConfig(),
        scene=SceneConfig(),
        limb_graph=default_limb_graph(),
    )


def _coerce_scene_value(key: str, value):
    if key == "bounds":
        w, h = value
        return (float(w), float(h))
    if key == "particles_per_shape":
        return {Shape(k): int(v) for k, v in value.items()}
    if key == "size_multipliers":
        return {Size(k): float(v) for k, v in value.items()}
    if key == "lifetimes_s":
        return {Shape(k): float(v) for k, v in value.items()}
    return value


def build_engine_config(*layers: dict | None) -> EngineConfig:
    """Merge flat key/value layers over the defaults, later layers winning.

    Every key must belong to one of the config sections (or be `limb_graph`);
    anything else raises UnknownConfigKey naming the offending key.
    """
    merged: dict = {}
    for layer in layers:
        if not layer:
            continue
        for key, value in layer.items():
            if value is None:
                continue
            if key != "limb_graph" and key not in _KEY_OWNER:
                raise UnknownConfigKey(key)
            merged[key] = value

    section_kwargs: dict[str, dict] = {s: {} for s in _SECTIONS}
    limb_graph = default_limb_graph()
    for key, value in merged.items():
        if key == "limb_graph":
            limb_graph = limb_graph_from_dict(value)
            continue
        section = _KEY_OWNER[key]
        if section == "scene":
            value = _coerce_scene_value(key, value)
        section_kwargs[section][key] = value

    return EngineConfig(
        ingest=IngestConfig(**section_kwargs["ingest"]),
        scoring=ScoringConfig(**section_kwargs["scoring"]),
        choreo=ChoreoConfig(**section_kwargs["choreo"]),
        scene=SceneConfig(**section_kwargs["scene"]),
        limb_graph=limb_graph,
    )


def load_config_file(path: str | Path) -> dict:
    """Read a JSON config file into a flat override layer."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise UnknownConfigKey("<config file is not a JSON object>")
    return data


def engine_config_to_dict(cfg: EngineConfig) -> dict:
    """Flat JSON-safe view of the effective configuration."""
    out: dict = {}
    for section in _SECTIONS:
        for f in dataclasses.fields(_SECTION_TYPES[section]):
            value = getattr(getattr(cfg, section), f.name)
            if isinstance(value, dict):
                value = {k.value if hasattr(k, "value") else k: v for k, v in value.items()}
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
    out["limb_graph"] = {
        "limbs": [[a.name, b.name] for a, b in cfg.limb_graph.limbs],
        "angle_pairs": [list(p) for p in cfg.limb_graph.angle_pairs],
    }
    return out


def scalar_config_flags() -> list[tuple[str, type]]:
    """(flat key, python type) for every scalar tunable, for CLI flags."""
    out = []
    for section in _SECTIONS:
        for f in dataclasses.fields(_SECTION_TYPES[section]):
            if f.type in ("float", "int", "bool") or f.type in (float, int, bool):
                out.append((f.name, {"float": float, "int": int, "bool": bool}.get(f.type, f.type)))
    return out
