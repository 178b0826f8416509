"""Live training sessions: frame ingestion drives scoring, reminders and
firework choreography, accumulating the statistics reported at close.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import wire
from .choreography import FireworkSpec, choreograph
from .config import EngineConfig, default_engine_config
from .errors import OutOfOrderFrame, PyrofitError, SessionClosed, StorageError
from .rng import SeedSource
from .similarity import ReminderEvent, align_and_score, reminder
from .skeleton import KeypointFrame, Pose13, reduce_to_pose13
from .track import DemoTrack, load_demo_track, load_demo_track_text  # noqa: F401  (re-export)

REMINDER_DEBOUNCE_MS = 1000


class SessionState(Enum):
    IDLE = "idle"
    RUNNING = "running"
    CLOSED = "closed"


@dataclass(frozen=True)
class ScoreUpdate:
    t_ms: int
    score: float
    distance_deg: float
    matched_demo_t_ms: int


@dataclass(frozen=True)
class FireworkSpawn:
    spec: FireworkSpec


@dataclass(frozen=True)
class Diagnostic:
    t_ms: int
    msg: str


Event = ScoreUpdate | ReminderEvent | FireworkSpawn | Diagnostic


@dataclass(frozen=True)
class SessionSummary:
    id: str
    demo: str
    start_t_ms: int | None
    end_t_ms: int | None
    mean_score: float | None  # mean of per-frame scores, each ceiled first
    max_score: int | None
    min_score: int | None
    reminder_count: int
    firework_count: int


@dataclass(eq=False)
class Session:
    id: str
    demo: DemoTrack
    config: EngineConfig
    seed_root: int
    state: SessionState = SessionState.RUNNING
    history: deque = field(default_factory=deque)  # recent Pose13, time-trimmed
    score_series: list = field(default_factory=list)  # (t_ms, S, D)
    seeds: SeedSource = None  # type: ignore[assignment]
    last_t_ms: int | None = None
    last_reminder_t_ms: int | None = None
    reminder_count: int = 0
    firework_count: int = 0

    def __post_init__(self):
        if self.seeds is None:
            self.seeds = SeedSource(self.seed_root)


def open_session(demo: DemoTrack, config: EngineConfig | None = None,
                 seed_root: int = 0, session_id: str = "s0") -> Session:
    """Start a running session; the seed root fixes every firework seed, so
    replaying the same frames reproduces the event stream byte for byte.
    """
    return Session(
        id=session_id,
        demo=demo,
        config=config or default_engine_config(),
        seed_root=seed_root,
    )


def ingest_frame(session: Session, frame: KeypointFrame) -> list[Event]:
    """Process one client frame and return its events in emission order:
    ScoreUpdate, then an optional debounced ReminderEvent, then one
    FireworkSpawn per choreographed spec.

    Scoring/choreography failures degrade to a Diagnostic event; only ordering
    violations and closed sessions raise.
    """
    if session.state is SessionState.CLOSED:
        raise SessionClosed(f"session {session.id} is closed")
    if session.last_t_ms is not None and frame.t_ms <= session.last_t_ms:
        raise OutOfOrderFrame(
            f"frame t_ms {frame.t_ms} not after {session.last_t_ms}"
        )
    session.last_t_ms = frame.t_ms
    cfg = session.config
    events: list[Event] = []

    try:
        pose = reduce_to_pose13(
            frame,
            min_confidence=cfg.ingest.min_confidence,
            image_height=cfg.ingest.image_height,
            mirror=cfg.ingest.mirror,
        )
        result = align_and_score(pose, session.demo, cfg.scoring, cfg.limb_graph)
    except PyrofitError as exc:
        events.append(Diagnostic(t_ms=frame.t_ms, msg=f"{type(exc).__name__}: {exc}"))
        return events

    events.append(
        ScoreUpdate(
            t_ms=frame.t_ms,
            score=result.score,
            distance_deg=result.distance_deg,
            matched_demo_t_ms=result.matched_demo_t_ms,
        )
    )
    rem = reminder(result, t_ms=frame.t_ms)
    if rem is not None:
        last = session.last_reminder_t_ms
        if last is None or frame.t_ms - last >= REMINDER_DEBOUNCE_MS:
            events.append(rem)
            session.last_reminder_t_ms = frame.t_ms
            session.reminder_count += 1

    prev = session.history[-1] if session.history else None
    try:
        specs = choreograph(pose, prev, session.history, result, cfg.choreo, session.seeds)
    except PyrofitError as exc:
        specs = []
        events.append(Diagnostic(t_ms=frame.t_ms, msg=f"{type(exc).__name__}: {exc}"))
    for spec in specs:
        events.append(FireworkSpawn(spec=spec))
    session.firework_count += len(specs)

    session.score_series.append((frame.t_ms, result.score, result.distance_deg))
    session.history.append(pose)
    _trim_history(session, frame.t_ms)
    return events


def _trim_history(session: Session, now_ms: int) -> None:
    keep_ms = int(session.config.scoring.delay_window_s * 1000.0)
    keep_ms += session.config.choreo.amplitude_window_ms
    while session.history and session.history[0].t_ms < now_ms - keep_ms:
        session.history.popleft()


def close_session(session: Session) -> SessionSummary:
    """Close the session and report its statistics (per-frame scores are
    ceiled before aggregation, so integer-valued max/min and a possibly
    fractional mean).
    """
    if session.state is SessionState.CLOSED:
        raise SessionClosed(f"session {session.id} already closed")
    session.state = SessionState.CLOSED
    scores = [s for (_, s, _) in session.score_series]
    mean_s, max_s, min_s = wire.ceil_score_stats(scores)
    times = [t for (t, _, _) in session.score_series]
    return SessionSummary(
        id=session.id,
        demo=session.demo.name,
        start_t_ms=times[0] if times else None,
        end_t_ms=times[-1] if times else None,
        mean_score=mean_s,
        max_score=max_s,
        min_score=min_s,
        reminder_count=session.reminder_count,
        firework_count=session.firework_count,
    )


# --- wire mapping -----------------------------------------------------------

def event_to_message(event: Event) -> dict:
    if isinstance(event, ScoreUpdate):
        return {"type": "score", "t_ms": event.t_ms, "S": event.score, "D": event.distance_deg}
    if isinstance(event, ReminderEvent):
        return {"type": "reminder", "t_ms": event.t_ms, "worst": list(event.worst)}
    if isinstance(event, FireworkSpawn):
        return {"type": "firework", **wire.spec_to_wire(event.spec)}
    if isinstance(event, Diagnostic):
        return {"type": "diagnostic", "msg": event.msg}
    raise TypeError(f"not an event: {event!r}")


def summary_to_record(summary: SessionSummary) -> dict:
    return {
        "id": summary.id,
        "demo": summary.demo,
        "start_t_ms": summary.start_t_ms,
        "end_t_ms": summary.end_t_ms,
        "mean_S": summary.mean_score,
        "max_S": summary.max_score,
        "min_S": summary.min_score,
        "reminders": summary.reminder_count,
        "fireworks": summary.firework_count,
    }


def summary_to_message(summary: SessionSummary) -> dict:
    return {"type": "summary", **summary_to_record(summary)}


# --- persistence ------------------------------------------------------------

CSV_HEADER = "id,demo,mean_S,max_S,min_S,reminders,fireworks"


def persist_summary(summary: SessionSummary, store_path: str | Path) -> None:
    """Append one summary record to the JSONL store."""
    try:
        with open(store_path, "a", encoding="utf-8") as fh:
            fh.write(wire.dumps(summary_to_record(summary)) + "\n")
    except OSError as exc:
        raise StorageError(f"cannot append to {store_path}: {exc}") from exc


def export_csv(store_path: str | Path) -> bytes:
    """Export the summary store as CSV; a missing store yields just the header."""
    lines = [CSV_HEADER]
    path = Path(store_path)
    if path.exists():
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read {store_path}: {exc}") from exc
        import json

        for raw in content.splitlines():
            if not raw.strip():
                continue
            rec = json.loads(raw)
            cells = [
                rec.get("id", ""),
                rec.get("demo", ""),
                rec.get("mean_S"),
                rec.get("max_S"),
                rec.get("min_S"),
                rec.get("reminders"),
                rec.get("fireworks"),
            ]
            lines.append(",".join("" if c is None else str(c) for c in cells))
    return ("\n".join(lines) + "\n").encode("utf-8")
