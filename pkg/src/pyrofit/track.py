"""Demo track loading: a header line followed by keypoint frames, reduced and
normalized once at load so scoring never touches raw coordinates again.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import DegenerateSkeleton, EmptyTrack, MalformedRecord
from .skeleton import (
    IngestConfig,
    KeypointFrame,
    Pose13,
    parse_frame,
    reduce_to_pose13,
    serialize_frame,
)

TRACK_FORMAT = "pyrofit-track/1"


@dataclass(eq=False)
class DemoTrack:
    name: str
    fps: float
    frames: list[Pose13]  # strictly increasing t_ms, pre-normalized


def load_demo_track(path: str | Path, ingest: IngestConfig | None = None) -> DemoTrack:
    """Load and normalize a demo track file."""
    text = Path(path).read_text(encoding="utf-8")
    return load_demo_track_text(text, ingest)


def load_demo_track_text(text: str, ingest: IngestConfig | None = None) -> DemoTrack:
    """Load a demo track from its JSONL content.

    The first non-empty line must be the header
    `{"format": "pyrofit-track/1", "fps": <number>, "name": <string>}`.
    Frames that cannot be normalized (degenerate skeletons) are dropped.
    """
    import json

    ingest = ingest or IngestConfig()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedRecord("track is empty, header missing")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"bad header: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(header, dict) or header.get("format") != TRACK_FORMAT:
        raise MalformedRecord(f"header missing or not {TRACK_FORMAT!r}")
    fps = header.get("fps")
    name = header.get("name")
    if not isinstance(fps, (int, float)) or fps <= 0:
        raise MalformedRecord("header 'fps' must be a positive number")
    if not isinstance(name, str) or not name:
        raise MalformedRecord("header 'name' must be a non-empty string")

    frames: list[Pose13] = []
    last_t = None
    for line in lines[1:]:
        frame = parse_frame(line)
        if last_t is not None and frame.t_ms <= last_t:
            raise MalformedRecord(
                f"frame timestamps must increase, got {frame.t_ms} after {last_t}"
            )
        last_t = frame.t_ms
        try:
            pose = reduce_to_pose13(
                frame,
                min_confidence=ingest.min_confidence,
                image_height=ingest.image_height,
                mirror=ingest.mirror,
            )
        except DegenerateSkeleton:
            continue
        frames.append(pose)
    if not frames:
        raise EmptyTrack("track has no usable frames")
    return DemoTrack(name=name, fps=float(fps), frames=frames)


def track_header(name: str, fps: float) -> str:
    import json

    return json.dumps(
        {"format": TRACK_FORMAT, "fps": fps, "name": name}, separators=(",", ":")
    )


def write_track(path: str | Path, name: str, fps: float, frames: Iterable[KeypointFrame]) -> None:
    """Write a track file (header + frames). Handy for authoring fixtures."""
    with open(path, "wb") as fh:
        fh.write(track_header(name, fps).encode("utf-8") + b"\n")
        for frame in frames:
            fh.write(serialize_frame(frame) + b"\n")
