"""Keypoint and pose data types: COCO-17 ingestion, 13-joint reduction,
canonical (up-positive, torso-normalized) coordinates, and the limb graph
that defines which inter-limb angles get scored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import DegenerateSkeleton, InvalidJoint, MalformedRecord

# COCO keypoint indices (17 points)
COCO_NOSE = 0
COCO_LEFT_EYE = 1
COCO_RIGHT_EYE = 2
COCO_LEFT_EAR = 3
COCO_RIGHT_EAR = 4
COCO_LEFT_SHOULDER = 5
COCO_RIGHT_SHOULDER = 6
COCO_LEFT_ELBOW = 7
COCO_RIGHT_ELBOW = 8
COCO_LEFT_WRIST = 9
COCO_RIGHT_WRIST = 10
COCO_LEFT_HIP = 11
COCO_RIGHT_HIP = 12
COCO_LEFT_KNEE = 13
COCO_RIGHT_KNEE = 14
COCO_LEFT_ANKLE = 15
COCO_RIGHT_ANKLE = 16

NUM_COCO_KEYPOINTS = 17

# Face/ear points are ignored except the nose, which stands in for the head.
DEFAULT_MIN_CONFIDENCE = 0.3


class Joint13(IntEnum):
    """The 13 joints used for angle scoring, stable encoding 0..12."""

    HEAD = 0
    R_SHOULDER = 1
    R_ELBOW = 2
    R_WRIST = 3
    L_SHOULDER = 4
    L_ELBOW = 5
    L_WRIST = 6
    R_HIP = 7
    R_KNEE = 8
    R_ANKLE = 9
    L_HIP = 10
    L_KNEE = 11
    L_ANKLE = 12


# Joint13 -> source COCO index
COCO_SOURCE = {
    Joint13.HEAD: COCO_NOSE,
    Joint13.R_SHOULDER: COCO_RIGHT_SHOULDER,
    Joint13.R_ELBOW: COCO_RIGHT_ELBOW,
    Joint13.R_WRIST: COCO_RIGHT_WRIST,
    Joint13.L_SHOULDER: COCO_LEFT_SHOULDER,
    Joint13.L_ELBOW: COCO_LEFT_ELBOW,
    Joint13.L_WRIST: COCO_LEFT_WRIST,
    Joint13.R_HIP: COCO_RIGHT_HIP,
    Joint13.R_KNEE: COCO_RIGHT_KNEE,
    Joint13.R_ANKLE: COCO_RIGHT_ANKLE,
    Joint13.L_HIP: COCO_LEFT_HIP,
    Joint13.L_KNEE: COCO_LEFT_KNEE,
    Joint13.L_ANKLE: COCO_LEFT_ANKLE,
}

# Left/right partner of each Joint13 member (HEAD maps to itself).
MIRROR_PARTNER = {
    Joint13.HEAD: Joint13.HEAD,
    Joint13.R_SHOULDER: Joint13.L_SHOULDER,
    Joint13.L_SHOULDER: Joint13.R_SHOULDER,
    Joint13.R_ELBOW: Joint13.L_ELBOW,
    Joint13.L_ELBOW: Joint13.R_ELBOW,
    Joint13.R_WRIST: Joint13.L_WRIST,
    Joint13.L_WRIST: Joint13.R_WRIST,
    Joint13.R_HIP: Joint13.L_HIP,
    Joint13.L_HIP: Joint13.R_HIP,
    Joint13.R_KNEE: Joint13.L_KNEE,
    Joint13.L_KNEE: Joint13.R_KNEE,
    Joint13.R_ANKLE: Joint13.L_ANKLE,
    Joint13.L_ANKLE: Joint13.R_ANKLE,
}


@dataclass
class IngestConfig:
    """How raw keypoint frames are reduced to canonical poses."""

    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    image_height: float = 1.0  # only the flip direction matters; scale cancels out
    mirror: bool = False

    def __post_init__(self):
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min_confidence must be in [0, 1]")


@dataclass(frozen=True)
class Keypoint:
    x: float
    y: float
    confidence: float


@dataclass(frozen=True)
class KeypointFrame:
    """One timestamped set of 17 image-space keypoints in COCO order."""

    t_ms: int
    keypoints: tuple[Keypoint, ...]

    def __post_init__(self):
        if len(self.keypoints) != NUM_COCO_KEYPOINTS:
            raise MalformedRecord(
                f"expected {NUM_COCO_KEYPOINTS} keypoints, got {len(self.keypoints)}"
            )


@dataclass(eq=False)
class Pose13:
    """Normalized pose: hip midpoint at the origin, y up-positive, and all
    coordinates divided by the torso scale (shoulder-mid to hip-mid distance).
    """

    t_ms: int
    joints: np.ndarray  # (13, 2) float64, canonical frame
    valid: np.ndarray  # (13,) bool
    scale: float  # torso length in the input units


@dataclass(frozen=True)
class LimbGraph:
    """12 limbs as joint pairs plus 12 angle pairs indexing those limbs."""

    limbs: tuple[tuple[Joint13, Joint13], ...]
    angle_pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.limbs) != 12 or len(self.angle_pairs) != 12:
            raise ValueError("limb graph needs exactly 12 limbs and 12 angle pairs")
        covered = {j for limb in self.limbs for j in limb}
        if covered != set(Joint13):
            raise ValueError("every joint must appear in at least one limb")
        for i, j in self.angle_pairs:
            if not (0 <= i < 12 and 0 <= j < 12):
                raise ValueError(f"angle pair ({i}, {j}) references a missing limb")


_DEFAULT_LIMBS = (
    (Joint13.HEAD, Joint13.R_SHOULDER),
    (Joint13.HEAD, Joint13.L_SHOULDER),
    (Joint13.R_SHOULDER, Joint13.R_ELBOW),
    (Joint13.R_ELBOW, Joint13.R_WRIST),
    (Joint13.L_SHOULDER, Joint13.L_ELBOW),
    (Joint13.L_ELBOW, Joint13.L_WRIST),
    (Joint13.R_SHOULDER, Joint13.R_HIP),
    (Joint13.L_SHOULDER, Joint13.L_HIP),
    (Joint13.R_HIP, Joint13.R_KNEE),
    (Joint13.R_KNEE, Joint13.R_ANKLE),
    (Joint13.L_HIP, Joint13.L_KNEE),
    (Joint13.L_KNEE, Joint13.L_ANKLE),
)

# Neighbouring-limb pairs: neck/upper-arm, elbows, shoulders, hips, knees,
# and neck/torso on each side.
_DEFAULT_ANGLE_PAIRS = (
    (0, 2),
    (1, 4),
    (2, 3),
    (4, 5),
    (6, 2),
    (7, 4),
    (6, 8),
    (7, 10),
    (8, 9),
    (10, 11),
    (0, 6),
    (1, 7),
)

_DEFAULT_GRAPH = LimbGraph(limbs=_DEFAULT_LIMBS, angle_pairs=_DEFAULT_ANGLE_PAIRS)


def default_limb_graph() -> LimbGraph:
    """The default 12-limb / 12-angle-pair table. Pure and constant."""
    return _DEFAULT_GRAPH


def limb_graph_from_dict(data: dict) -> LimbGraph:
    """Build a LimbGraph from a config mapping with joint names as strings."""
    try:
        limbs = tuple(
            (Joint13[a.upper()], Joint13[b.upper()]) for a, b in data["limbs"]
        )
        pairs = tuple((int(i), int(j)) for i, j in data["angle_pairs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad limb graph definition: {exc}") from exc
    return LimbGraph(limbs=limbs, angle_pairs=pairs)


def reduce_to_pose13(
    frame: KeypointFrame,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    image_height: float = 1.0,
    mirror: bool = False,
) -> Pose13:
    """Reduce a COCO-17 frame to the normalized 13-joint pose.

    Coordinates are flipped to up-positive (y' = image_height - y), centered
    on the hip midpoint and divided by the torso scale, so the result is
    invariant to translation and uniform scaling of the input. With `mirror`
    the input is treated as a mirrored (selfie) view: left/right roles are
    swapped and x negated, recovering the true body orientation.

    Raises DegenerateSkeleton when the shoulder or hip midpoint cannot be
    formed (both members of the pair under `min_confidence`) or the torso
    collapses to a point.
    """
    pts = np.empty((13, 2), dtype=np.float64)
    valid = np.empty(13, dtype=bool)
    for joint in Joint13:
        src = MIRROR_PARTNER[joint] if mirror else joint
        kp = frame.keypoints[COCO_SOURCE[src]]
        pts[joint] = (kp.x, image_height - kp.y)
        valid[joint] = kp.confidence >= min_confidence

    shoulder_mid = _pair_midpoint(pts, valid, Joint13.R_SHOULDER, Joint13.L_SHOULDER)
    hip_mid = _pair_midpoint(pts, valid, Joint13.R_HIP, Joint13.L_HIP)
    if shoulder_mid is None or hip_mid is None:
        raise DegenerateSkeleton("shoulders or hips entirely below confidence threshold")

    scale = float(math.hypot(*(shoulder_mid - hip_mid)))
    if scale < 1e-9:
        raise DegenerateSkeleton("torso scale is zero")

    pts = (pts - hip_mid) / scale
    if mirror:
        pts[:, 0] = -pts[:, 0]
    return Pose13(t_ms=frame.t_ms, joints=pts, valid=valid, scale=scale)


def _pair_midpoint(pts, valid, a: Joint13, b: Joint13):
    if valid[a] and valid[b]:
        return (pts[a] + pts[b]) / 2.0
    if valid[a]:
        return pts[a].copy()
    if valid[b]:
        return pts[b].copy()
    return None


def joint_height(pose: Pose13, joint: Joint13) -> float:
    """Canonical up-positive y of one joint; InvalidJoint if masked."""
    if not pose.valid[joint]:
        raise InvalidJoint(f"{joint.name} not observed")
    return float(pose.joints[joint, 1])


def pair_mean_height(pose: Pose13, left: Joint13, right: Joint13) -> float:
    """Mean height of a left/right pair; single-member mean if one is masked."""
    heights = [float(pose.joints[j, 1]) for j in (left, right) if pose.valid[j]]
    if not heights:
        raise InvalidJoint(f"neither {left.name} nor {right.name} observed")
    return sum(heights) / len(heights)


def parse_frame(line: bytes | str) -> KeypointFrame:
    """Parse one JSONL record `{"t_ms": int, "kp": [[x, y, c] x17]}`."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecord(f"not UTF-8: {exc.reason}", offset=exc.start) from exc
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(exc.msg, offset=exc.pos) from exc
    return frame_from_obj(obj)


def frame_from_obj(obj) -> KeypointFrame:
    """Build a frame from an already-decoded record mapping."""
    if not isinstance(obj, dict):
        raise MalformedRecord("record is not a JSON object")
    if "t_ms" not in obj or "kp" not in obj:
        raise MalformedRecord("record needs 't_ms' and 'kp' fields")
    t_ms = obj["t_ms"]
    if not isinstance(t_ms, int) or isinstance(t_ms, bool):
        raise MalformedRecord("'t_ms' must be an integer")
    kp = obj["kp"]
    if not isinstance(kp, list) or len(kp) != NUM_COCO_KEYPOINTS:
        raise MalformedRecord(f"'kp' must hold {NUM_COCO_KEYPOINTS} entries")
    keypoints = []
    for i, entry in enumerate(kp):
        if not isinstance(entry, list) or len(entry) != 3:
            raise MalformedRecord(f"keypoint {i} must be [x, y, confidence]")
        try:
            x, y, c = (float(v) for v in entry)
        except (TypeError, ValueError):
            raise MalformedRecord(f"keypoint {i} has non-numeric values") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise MalformedRecord(f"keypoint {i} has non-finite coordinates")
        if not (math.isfinite(c) and 0.0 <= c <= 1.0):
            raise MalformedRecord(f"keypoint {i} confidence outside [0, 1]")
        keypoints.append(Keypoint(x=x, y=y, confidence=c))
    return KeypointFrame(t_ms=t_ms, keypoints=tuple(keypoints))


def serialize_frame(frame: KeypointFrame) -> bytes:
    """Inverse of parse_frame; parse(serialize(f)) == f for valid frames."""
    record = {
        "t_ms": frame.t_ms,
        "kp": [[kp.x, kp.y, kp.confidence] for kp in frame.keypoints],
    }
    return json.dumps(record, separators=(",", ":")).encode("utf-8")
