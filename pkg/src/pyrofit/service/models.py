"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class DemoInfo(BaseModel):
    name: str
    fps: float
    frames: int


class ScoreRequest(BaseModel):
    demo_text: str | None = None  # inline track file content
    demo_name: str | None = None  # or one of the preloaded demos
    user_text: str
    config: dict[str, Any] | None = None


class ScoreRecord(BaseModel):
    t_ms: int
    S: float
    D: float
    matched_demo_t_ms: int
    delta_deg: list[float | None]


class ScoreSummary(BaseModel):
    mean_S: float | None
    max_S: float | None
    min_S: float | None


class ScoreResponse(BaseModel):
    records: list[ScoreRecord]
    summary: ScoreSummary


class WireSpec(BaseModel):
    t_ms: int
    x: float
    y: float
    angle_deg: float
    shape: Literal["star", "ball", "cluster"]
    color: Literal["white", "purple", "blue", "green", "orange", "yellow", "multi"]
    size: Literal["large", "medium", "small", "tiny"]
    seed: str  # u64 as string


class SimulateRequest(BaseModel):
    specs: list[WireSpec]
    steps: int = Field(gt=0, le=100_000)
    include_frames: bool = False
    ppm: bool = False
    width: int = Field(default=320, gt=0, le=4096)
    height: int = Field(default=240, gt=0, le=4096)
    config: dict[str, Any] | None = None


class FrameOut(BaseModel):
    t_ms: int
    points: list[tuple[float, float, str, float, float]]


class SimulateResponse(BaseModel):
    digest: str
    frames: list[FrameOut] | None = None
    ppm_frames: list[str] | None = None  # base64-encoded P6 images


class ReplayRequest(BaseModel):
    frames_text: str  # recorded keypoint stream (JSONL)
    demo_text: str | None = None
    demo_name: str | None = None
    seed: int = 0
    config: dict[str, Any] | None = None


class ReplayResponse(BaseModel):
    events: list[str]  # canonical JSONL event lines, summary last
