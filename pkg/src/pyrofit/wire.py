"""Canonical JSON wire formats: firework specs, score report records, and the
helpers every producer shares so identical values always serialize to
identical bytes.
"""

from __future__ import annotations

import json
import math

from .choreography import Color, FireworkSpec, Shape, Size
from .errors import MalformedRecord
from .similarity import SimilarityResult


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def spec_to_wire(spec: FireworkSpec) -> dict:
    return {
        "t_ms": spec.spawn_t_ms,
        "x": spec.origin[0],
        "y": spec.origin[1],
        "angle_deg": spec.launch_angle_deg,
        "shape": spec.shape.value,
        "color": spec.color.value,
        "size": spec.size.value,
        "seed": str(spec.seed),
    }


def spec_from_wire(data: dict) -> FireworkSpec:
    try:
        return FireworkSpec(
            origin=(float(data["x"]), float(data["y"])),
            launch_angle_deg=float(data["angle_deg"]),
            shape=Shape(data["shape"]),
            color=Color(data["color"]),
            size=Size(data["size"]),
            seed=int(data["seed"]),
            spawn_t_ms=int(data["t_ms"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(f"bad firework spec: {exc}") from exc


def parse_specs_text(text: str) -> list[FireworkSpec]:
    """Parse a JSONL firework-spec file."""
    specs = []
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(exc.msg, offset=exc.pos) from exc
        specs.append(spec_from_wire(data))
    return specs


def score_record(t_ms: int, result: SimilarityResult) -> dict:
    """One score-report line; masked angle pairs serialize as null."""
    delta = [
        float(result.per_pair.delta_deg[i]) if result.per_pair.valid[i] else None
        for i in range(12)
    ]
    return {
        "t_ms": t_ms,
        "S": result.score,
        "D": result.distance_deg,
        "matched_demo_t_ms": result.matched_demo_t_ms,
        "delta_deg": delta,
    }


def summary_record(scores: list[float]) -> dict:
    """Report trailer with the run statistics."""
    if not scores:
        return {"mean_S": None, "max_S": None, "min_S": None}
    return {
        "mean_S": sum(scores) / len(scores),
        "max_S": max(scores),
        "min_S": min(scores),
    }


def ceil_score_stats(scores: list[float]) -> tuple[float | None, int | None, int | None]:
    """Session statistics over per-frame scores, each score ceiled first."""
    if not scores:
        return (None, None, None)
    ceiled = [math.ceil(s) for s in scores]
    return (sum(ceiled) / len(ceiled), max(ceiled), min(ceiled))
