"""Shared synthetic-pose builders.

Poses are authored in canonical units (hip midpoint at the origin, y up,
torso = 1) and converted to image coordinates (y down, 200px tall, torso
40px), so reducing them recovers the authored values exactly.
"""

from __future__ import annotations

import math

from pyrofit.skeleton import (
    COCO_SOURCE,
    Joint13,
    Keypoint,
    KeypointFrame,
    reduce_to_pose13,
)

IMAGE_HEIGHT = 200.0
TORSO_PX = 40.0
CENTER_X = 100.0
HIP_Y_PX = 120.0

BASE_BODY = {
    Joint13.HEAD: (0.0, 1.4),
    Joint13.R_SHOULDER: (-0.375, 1.0),
    Joint13.L_SHOULDER: (0.375, 1.0),
    Joint13.R_ELBOW: (-0.5, 0.5),
    Joint13.L_ELBOW: (0.5, 0.5),
    Joint13.R_WRIST: (-0.625, 0.125),
    Joint13.L_WRIST: (0.625, 0.125),
    Joint13.R_HIP: (-0.25, 0.0),
    Joint13.L_HIP: (0.25, 0.0),
    Joint13.R_KNEE: (-0.25, -0.75),
    Joint13.L_KNEE: (0.25, -0.75),
    Joint13.R_ANKLE: (-0.25, -1.5),
    Joint13.L_ANKLE: (0.25, -1.5),
}


def canonical_frame(
    joints: dict | None = None,
    t_ms: int = 0,
    confidence: float = 0.9,
    conf_overrides: dict | None = None,
) -> KeypointFrame:
    """Frame whose reduced pose equals the given canonical joint positions."""
    body = dict(BASE_BODY)
    if joints:
        body.update(joints)
    conf_overrides = conf_overrides or {}
    kps = [Keypoint(0.0, 0.0, 0.0)] * 17
    kps = list(kps)
    for joint, (x, y) in body.items():
        px = CENTER_X + TORSO_PX * x
        py = HIP_Y_PX - TORSO_PX * y
        c = conf_overrides.get(joint, confidence)
        kps[COCO_SOURCE[joint]] = Keypoint(px, py, c)
    # face points the reducer ignores: park them near the nose
    nose = kps[0]
    for idx in (1, 2, 3, 4):
        kps[idx] = Keypoint(nose.x + idx, nose.y - 2.0, confidence)
    return KeypointFrame(t_ms=t_ms, keypoints=tuple(kps))


def canonical_pose(joints: dict | None = None, t_ms: int = 0, **kw):
    return reduce_to_pose13(canonical_frame(joints, t_ms=t_ms, **kw),
                            min_confidence=0.3, image_height=IMAGE_HEIGHT)


def wave_body(t_s: float) -> dict:
    """Deterministic exercise motion: arms sweep from waist to overhead."""
    lift = 0.5 + 0.5 * math.sin(2.0 * math.pi * 0.4 * t_s)
    sway = 0.1 * math.sin(2.0 * math.pi * 0.1 * t_s)
    body = dict(BASE_BODY)
    body[Joint13.R_WRIST] = (-0.625 - 0.15 * lift, 0.125 + 1.1 * lift)
    body[Joint13.L_WRIST] = (0.625 + 0.15 * lift, 0.125 + 1.1 * lift)
    body[Joint13.R_ELBOW] = (-0.5 - 0.1 * lift, 0.5 + 0.6 * lift)
    body[Joint13.L_ELBOW] = (0.5 + 0.1 * lift, 0.5 + 0.6 * lift)
    body[Joint13.R_SHOULDER] = (-0.375 + sway, 1.0)
    body[Joint13.L_SHOULDER] = (0.375 + sway, 1.0)
    body[Joint13.HEAD] = (sway, 1.4)
    return body


def wave_frames(duration_s: float, fps: float, t_offset_ms: int = 0) -> list[KeypointFrame]:
    frames = []
    n = int(round(duration_s * fps))
    for i in range(n):
        t_ms = round(i * 1000.0 / fps) + t_offset_ms
        frames.append(canonical_frame(wave_body(i / fps), t_ms=t_ms))
    return frames




# A frozen pose whose angles disagree with every wave_body phase by D > 65:
# hands folded at the face, elbows flared, legs crossed wide.
WRONG_BODY = {
    **BASE_BODY,
    Joint13.R_WRIST: (-0.05, 1.3), Joint13.L_WRIST: (0.05, 1.3),
    Joint13.R_ELBOW: (-0.7, 1.05), Joint13.L_ELBOW: (0.7, 1.05),
    Joint13.R_KNEE: (0.45, -0.7), Joint13.L_KNEE: (-0.45, -0.7),
    Joint13.R_ANKLE: (0.8, -1.3), Joint13.L_ANKLE: (-0.8, -1.3),
}


def oracle_weights(delta, valid):
    """Direct transcription of the weight formula, kept naive on purpose."""
    dsum = sum(d for d, v in zip(delta, valid) if v)
    if dsum == 0:
        n = sum(valid)
        return [1.0 / n if v else 0.0 for v in valid]
    raw = [(1.0 - math.exp(-d / dsum)) if v else 0.0 for d, v in zip(delta, valid)]
    total = sum(raw)
    return [r / total for r in raw]


def oracle_distance(delta, w, valid):
    return sum(d * x for d, x, v in zip(delta, w, valid) if v)
