"""Maps correct motion to firework parameters: active-joint detection, launch
angle from torso lean, shape from movement amplitude, color from wrist height,
size from the widest left/right pair, all gated on a non-zero score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidJoint
from .rng import SeedSource
from .similarity import SimilarityResult
from .skeleton import Joint13, Pose13, joint_height, pair_mean_height

REFERENCE_FRAME_MS = 1000.0 / 30.0  # activity threshold is calibrated at 30 fps

# Canonical pose -> scene mapping: +-X_SPAN torso units across the scene width,
# heights placed so a standing head lands around 60% of the scene height.
SCENE_X_SPAN = 4.0
SCENE_Y_BASE_FRAC = 0.35
SCENE_Y_UNIT_FRAC = 0.15
SCENE_Y_MIN_FRAC = 0.10
SCENE_Y_MAX_FRAC = 0.95


class Shape(str, Enum):
    STAR = "star"
    BALL = "ball"
    CLUSTER = "cluster"


class Color(str, Enum):
    WHITE = "white"
    PURPLE = "purple"
    BLUE = "blue"
    GREEN = "green"
    ORANGE = "orange"
    YELLOW = "yellow"
    MULTI = "multi"


class Size(str, Enum):
    LARGE = "large"
    MEDIUM = "medium"
    SMALL = "small"
    TINY = "tiny"


@dataclass
class ChoreoConfig:
    activity_threshold_ratio: float = 0.02  # x torso scale per 30fps frame
    amplitude_medium_ratio: float = 0.15  # x torso scale over the amplitude window
    amplitude_window_ms: int = 300
    max_fireworks_per_frame: int = 8
    scene_width: float = 100.0
    scene_height: float = 100.0

    def __post_init__(self):
        for name in ("activity_threshold_ratio", "amplitude_medium_ratio"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.amplitude_window_ms <= 0 or self.max_fireworks_per_frame <= 0:
            raise ValueError("amplitude_window_ms and max_fireworks_per_frame must be positive")
        if self.scene_width <= 0 or self.scene_height <= 0:
            raise ValueError("scene dimensions must be positive")


@dataclass(frozen=True)
class ActiveJoint:
    joint: Joint13
    position: tuple[float, float]  # canonical coordinates in the current frame
    displacement: float  # canonical units moved since the previous frame


@dataclass(frozen=True)
class FireworkSpec:
    """Everything a renderer needs to reproduce one firework."""

    origin: tuple[float, float]  # scene units; launch x and target apex height
    launch_angle_deg: float  # 90 = straight up
    shape: Shape
    color: Color
    size: Size
    seed: int  # u64 driving all of the firework's randomness
    spawn_t_ms: int


def active_joints(curr: Pose13, prev: Pose13, cfg: ChoreoConfig) -> list[ActiveJoint]:
    """Joints whose inter-frame displacement beats the activity threshold.

    The threshold is scale-invariant (x torso scale) and frame-rate robust:
    it grows linearly with the actual inter-frame interval.
    """
    if curr.t_ms <= prev.t_ms:
        raise ValueError("curr must be later than prev")
    dt_ms = curr.t_ms - prev.t_ms
    threshold = cfg.activity_threshold_ratio * (dt_ms / REFERENCE_FRAME_MS)
    out = []
    for joint in Joint13:
        if not (curr.valid[joint] and prev.valid[joint]):
            continue
        dx = curr.joints[joint, 0] - prev.joints[joint, 0]
        dy = curr.joints[joint, 1] - prev.joints[joint, 1]
        disp = math.hypot(dx, dy)
        if disp > threshold:
            out.append(
                ActiveJoint(
                    joint=joint,
                    position=(float(curr.joints[joint, 0]), float(curr.joints[joint, 1])),
                    displacement=disp,
                )
            )
    return out


def launch_angle(pose: Pose13) -> float:
    """Launch angle from torso lean: 90 when upright, tilting with the lean.

    Clamped to [10, 170] so extreme leans never produce a horizontal launch.
    """
    needed = (Joint13.L_SHOULDER, Joint13.R_SHOULDER, Joint13.L_HIP, Joint13.R_HIP)
    if not all(pose.valid[j] for j in needed):
        raise InvalidJoint("launch angle needs both shoulders and both hips")
    dx = (
        pose.joints[Joint13.L_SHOULDER, 0]
        + pose.joints[Joint13.R_SHOULDER, 0]
        - pose.joints[Joint13.L_HIP, 0]
        - pose.joints[Joint13.R_HIP, 0]
    )
    dy = (
        pose.joints[Joint13.L_SHOULDER, 1]
        + pose.joints[Joint13.R_SHOULDER, 1]
        - pose.joints[Joint13.L_HIP, 1]
        - pose.joints[Joint13.R_HIP, 1]
    )
    theta = 90.0 - math.degrees(math.atan2(dx, dy))
    return min(170.0, max(10.0, theta))


def joint_amplitudes(
    history: Sequence[Pose13], curr: Pose13, window_ms: int
) -> np.ndarray:
    """Per-joint movement amplitude: the farthest the joint strayed from its
    current position over the trailing window. Masked joints get 0.
    """
    amps = np.zeros(13, dtype=np.float64)
    cutoff = curr.t_ms - window_ms
    for past in history:
        if past.t_ms < cutoff or past.t_ms >= curr.t_ms:
            continue
        both = curr.valid & past.valid
        d = np.linalg.norm(curr.joints - past.joints, axis=1)
        amps = np.where(both, np.maximum(amps, d), amps)
    amps[~curr.valid] = 0.0
    return amps


def shape_for(amplitudes: np.ndarray, pose: Pose13, cfg: ChoreoConfig) -> Shape:
    """Cluster when hands are raised over the head, else ball for medium
    amplitude, star for small.
    """
    try:
        wrists = pair_mean_height(pose, Joint13.L_WRIST, Joint13.R_WRIST)
        head = joint_height(pose, Joint13.HEAD)
        if wrists > head:
            return Shape.CLUSTER
    except InvalidJoint:
        pass
    if float(amplitudes.max()) >= cfg.amplitude_medium_ratio:
        return Shape.BALL
    return Shape.STAR


def color_for(pose: Pose13) -> Color:
    """Total height ladder on the mean wrist height, top rung first.

    Heights are canonical (up-positive), so "above" reads literally. The
    purple/blue band between knees and hips is split at its midpoint.
    """
    wrists = pair_mean_height(pose, Joint13.L_WRIST, Joint13.R_WRIST)
    head = joint_height(pose, Joint13.HEAD)  # nose stands in for the head
    shoulders = pair_mean_height(pose, Joint13.L_SHOULDER, Joint13.R_SHOULDER)
    elbows = pair_mean_height(pose, Joint13.L_ELBOW, Joint13.R_ELBOW)
    hips = pair_mean_height(pose, Joint13.L_HIP, Joint13.R_HIP)
    knees = pair_mean_height(pose, Joint13.L_KNEE, Joint13.R_KNEE)

    if wrists > head:
        return Color.MULTI if elbows > head else Color.YELLOW
    if wrists > shoulders:
        return Color.YELLOW
    if wrists > elbows:
        return Color.ORANGE
    if wrists > hips:
        return Color.GREEN
    if wrists > (knees + hips) / 2.0:
        return Color.BLUE
    if wrists > knees:
        return Color.PURPLE
    return Color.WHITE


_SIZE_PAIRS = (
    (Size.LARGE, Joint13.L_WRIST, Joint13.R_WRIST),
    (Size.MEDIUM, Joint13.L_ANKLE, Joint13.R_ANKLE),
    (Size.SMALL, Joint13.L_ELBOW, Joint13.R_ELBOW),
    (Size.TINY, Joint13.L_SHOULDER, Joint13.R_SHOULDER),
)


def size_for(pose: Pose13) -> Size:
    """Size from which left/right pair is horizontally widest; ties resolve
    toward the larger size (wrists > ankles > elbows > shoulders).
    """
    best: Size | None = None
    best_dist = -1.0
    for size, left, right in _SIZE_PAIRS:
        if not (pose.valid[left] and pose.valid[right]):
            continue
        dist = abs(float(pose.joints[left, 0] - pose.joints[right, 0]))
        if dist > best_dist:
            best = size
            best_dist = dist
    if best is None:
        raise InvalidJoint("no left/right pair available for sizing")
    return best


def pose_to_scene(position: tuple[float, float], cfg: ChoreoConfig) -> tuple[float, float]:
    """Map canonical pose coordinates to scene units."""
    x = (0.5 + position[0] / (2.0 * SCENE_X_SPAN)) * cfg.scene_width
    x = min(cfg.scene_width, max(0.0, x))
    y_frac = SCENE_Y_BASE_FRAC + position[1] * SCENE_Y_UNIT_FRAC
    y_frac = min(SCENE_Y_MAX_FRAC, max(SCENE_Y_MIN_FRAC, y_frac))
    return (x, y_frac * cfg.scene_height)


def choreograph(
    curr: Pose13,
    prev: Pose13 | None,
    history: Sequence[Pose13],
    result: SimilarityResult,
    cfg: ChoreoConfig,
    seeds: SeedSource,
) -> list[FireworkSpec]:
    """One firework per active joint while the score is above zero.

    Capped at max_fireworks_per_frame, keeping the largest displacements.
    Launch angle, color and size are shared across the frame; each spec draws
    a fresh seed so every firework animates independently but reproducibly.
    """
    if result.score == 0.0 or prev is None:
        return []
    active = active_joints(curr, prev, cfg)
    if not active:
        return []
    active.sort(key=lambda a: (-a.displacement, int(a.joint)))
    active = active[: cfg.max_fireworks_per_frame]

    amps = joint_amplitudes(history, curr, cfg.amplitude_window_ms)
    shape = shape_for(amps, curr, cfg)
    angle = launch_angle(curr)
    color = color_for(curr)
    size = size_for(curr)
    return [
        FireworkSpec(
            origin=pose_to_scene(a.position, cfg),
            launch_angle_deg=angle,
            shape=shape,
            color=color,
            size=size,
            seed=seeds.next_seed(),
            spawn_t_ms=curr.t_ms,
        )
        for a in active
    ]
