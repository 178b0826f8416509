"""FastAPI service wrapping the engine: REST endpoints for offline scoring,
simulation and replay, plus the live session protocol on the /session
websocket (one JSON message per event, `type`-tagged both ways).
"""

from __future__ import annotations

import base64
import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import Response

from .. import __version__, pyro, session as sessions, wire
from ..config import EngineConfig, build_engine_config, default_engine_config, engine_config_to_dict
from ..errors import PyrofitError
from ..rng import SeedSource
from ..similarity import align_and_score
from ..skeleton import frame_from_obj, parse_frame, reduce_to_pose13
from ..track import DemoTrack, load_demo_track_text
from .models import (
    DemoInfo,
    FrameOut,
    HealthResponse,
    ReplayRequest,
    ReplayResponse,
    ScoreRecord,
    ScoreRequest,
    ScoreResponse,
    ScoreSummary,
    SimulateRequest,
    SimulateResponse,
)

log = logging.getLogger("pyrofit.service")

DEFAULT_PORT = 8765


def create_app(
    demos: dict[str, DemoTrack] | None = None,
    config: EngineConfig | None = None,
    store_path: str | Path | None = None,
    seed_root: int = 0,
) -> FastAPI:
    app = FastAPI(title="pyrofit", version=__version__)
    app.state.demos = demos or {}
    app.state.config = config or default_engine_config()
    app.state.store_path = Path(store_path) if store_path else None
    app.state.session_seeds = SeedSource(seed_root)
    app.state.session_counter = 0

    def effective_config(overrides: dict | None) -> EngineConfig:
        if not overrides:
            return app.state.config
        return build_engine_config(engine_config_to_dict(app.state.config), overrides)

    def resolve_demo(demo_text: str | None, demo_name: str | None, cfg: EngineConfig) -> DemoTrack:
        if (demo_text is None) == (demo_name is None):
            raise HTTPException(400, "provide exactly one of demo_text / demo_name")
        if demo_name is not None:
            track = app.state.demos.get(demo_name)
            if track is None:
                raise HTTPException(404, f"unknown demo {demo_name!r}")
            return track
        try:
            return load_demo_track_text(demo_text, cfg.ingest)
        except PyrofitError as exc:
            raise HTTPException(400, str(exc)) from exc

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/demos", response_model=list[DemoInfo])
    def list_demos() -> list[DemoInfo]:
        return [
            DemoInfo(name=t.name, fps=t.fps, frames=len(t.frames))
            for t in app.state.demos.values()
        ]

    @app.get("/config")
    def get_config() -> dict:
        return engine_config_to_dict(app.state.config)

    @app.post("/score", response_model=ScoreResponse)
    def score_stream(req: ScoreRequest) -> ScoreResponse:
        try:
            cfg = effective_config(req.config)
        except PyrofitError as exc:
            raise HTTPException(400, str(exc)) from exc
        track = resolve_demo(req.demo_text, req.demo_name, cfg)
        records = []
        scores = []
        try:
            for line in req.user_text.splitlines():
                if not line.strip():
                    continue
                frame = parse_frame(line)
                pose = reduce_to_pose13(
                    frame,
                    min_confidence=cfg.ingest.min_confidence,
                    image_height=cfg.ingest.image_height,
                    mirror=cfg.ingest.mirror,
                )
                result = align_and_score(pose, track, cfg.scoring, cfg.limb_graph)
                records.append(ScoreRecord(**wire.score_record(frame.t_ms, result)))
                scores.append(result.score)
        except PyrofitError as exc:
            raise HTTPException(400, f"{type(exc).__name__}: {exc}") from exc
        return ScoreResponse(
            records=records, summary=ScoreSummary(**wire.summary_record(scores))
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate_specs(req: SimulateRequest) -> SimulateResponse:
        try:
            cfg = effective_config(req.config)
            specs = [wire.spec_from_wire(s.model_dump()) for s in req.specs]
        except PyrofitError as exc:
            raise HTTPException(400, str(exc)) from exc
        digest, frames = pyro.simulate(specs, req.steps, cfg.scene)
        out = SimulateResponse(digest=digest)
        if req.include_frames:
            out.frames = [FrameOut(t_ms=f.t_ms, points=list(f.points)) for f in frames]
        if req.ppm:
            out.ppm_frames = [
                base64.b64encode(pyro.render_ppm(f, cfg.scene, req.width, req.height)).decode("ascii")
                for f in frames
            ]
        return out

    @app.post("/replay", response_model=ReplayResponse)
    def replay_stream(req: ReplayRequest) -> ReplayResponse:
        try:
            cfg = effective_config(req.config)
        except PyrofitError as exc:
            raise HTTPException(400, str(exc)) from exc
        track = resolve_demo(req.demo_text, req.demo_name, cfg)
        sess = sessions.open_session(track, cfg, seed_root=req.seed, session_id="replay")
        lines: list[str] = []
        try:
            for line in req.frames_text.splitlines():
                if not line.strip():
                    continue
                frame = parse_frame(line)
                for event in sessions.ingest_frame(sess, frame):
                    lines.append(wire.dumps(sessions.event_to_message(event)))
        except PyrofitError as exc:
            raise HTTPException(400, f"{type(exc).__name__}: {exc}") from exc
        summary = sessions.close_session(sess)
        lines.append(wire.dumps(sessions.summary_to_message(summary)))
        return ReplayResponse(events=lines)

    @app.get("/summaries")
    def list_summaries() -> list[dict]:
        import json

        path = app.state.store_path
        if path is None or not path.exists():
            return []
        return [
            json.loads(line)
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]

    @app.get("/summaries.csv")
    def summaries_csv() -> Response:
        path = app.state.store_path
        data = sessions.export_csv(path) if path is not None else (sessions.CSV_HEADER + "\n").encode()
        return Response(content=data, media_type="text/csv")

    @app.websocket("/session")
    async def session_ws(ws: WebSocket) -> None:
        await ws.accept()
        sess = None
        try:
            while True:
                try:
                    msg = await ws.receive_json()
                except ValueError:
                    await ws.send_json({"type": "diagnostic", "msg": "message is not valid JSON"})
                    continue
                mtype = msg.get("type") if isinstance(msg, dict) else None

                if mtype == "hello":
                    if sess is not None:
                        await ws.send_json({"type": "diagnostic", "msg": "session already open"})
                        continue
                    name = msg.get("demo")
                    track = app.state.demos.get(name)
                    if track is None:
                        await ws.send_json(
                            {"type": "diagnostic", "msg": f"unknown demo {name!r}"}
                        )
                        await ws.close()
                        return
                    app.state.session_counter += 1
                    sess = sessions.open_session(
                        track,
                        app.state.config,
                        seed_root=app.state.session_seeds.next_seed(),
                        session_id=f"s{app.state.session_counter:04d}",
                    )
                    log.info("session %s opened by %r on demo %r",
                             sess.id, msg.get("client"), name)
                    await ws.send_json(
                        {
                            "type": "ready",
                            "session_id": sess.id,
                            "config": engine_config_to_dict(app.state.config),
                        }
                    )
                elif mtype == "frame":
                    if sess is None:
                        await ws.send_json({"type": "diagnostic", "msg": "send hello first"})
                        continue
                    try:
                        frame = frame_from_obj(msg)
                        events = sessions.ingest_frame(sess, frame)
                    except PyrofitError as exc:
                        await ws.send_json(
                            {"type": "diagnostic", "msg": f"{type(exc).__name__}: {exc}"}
                        )
                        continue
                    for event in events:
                        await ws.send_json(sessions.event_to_message(event))
                elif mtype == "bye":
                    if sess is not None:
                        summary = sessions.close_session(sess)
                        await ws.send_json(sessions.summary_to_message(summary))
                        if app.state.store_path is not None:
                            sessions.persist_summary(summary, app.state.store_path)
                        log.info("session %s closed: %s", sess.id,
                                 sessions.summary_to_record(summary))
                        sess = None
                    await ws.close()
                    return
                else:
                    await ws.send_json(
                        {"type": "diagnostic", "msg": f"unknown message type {mtype!r}"}
                    )
        except WebSocketDisconnect:
            if sess is not None and sess.state is not sessions.SessionState.CLOSED:
                summary = sessions.close_session(sess)
                if app.state.store_path is not None:
                    sessions.persist_summary(summary, app.state.store_path)
                log.info("session %s dropped: %s", sess.id,
                         sessions.summary_to_record(summary))

    return app
