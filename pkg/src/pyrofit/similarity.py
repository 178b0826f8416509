"""Pose similarity scoring: limb vectors, inter-limb angles, movement-weighted
angle distance D, the piecewise score S, and temporal alignment of the user
stream against a demo track over a trailing window.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from .errors import EmptyWindow, InsufficientData
from .skeleton import LimbGraph, Pose13

_NORM_EPS = 1e-9


@dataclass
class ScoringConfig:
    d_std: float = 65.0  # angle distance (degrees) at which the score hits bottom
    s_std: float = 60.0  # score awarded exactly at d_std
    delay_window_s: float = 3.0  # trailing alignment window (imitation lag)
    min_valid_angles: int = 6

    def __post_init__(self):
        if not 0 < self.s_std < 100:
            raise ValueError("s_std must be in (0, 100)")
        if self.d_std <= 0:
            raise ValueError("d_std must be positive")
        if self.delay_window_s < 0:
            raise ValueError("delay_window_s must be non-negative")
        if not 1 <= int(self.min_valid_angles) <= 12:
            raise ValueError("min_valid_angles must be in 1..12")


@dataclass(eq=False)
class JointAngles:
    angles_deg: np.ndarray  # (12,) degrees in [0, 180]
    valid: np.ndarray  # (12,) bool


@dataclass(eq=False)
class AngleDiffs:
    delta_deg: np.ndarray  # (12,) absolute per-pair differences, 0 where invalid
    delta_sum: float
    valid: np.ndarray  # (12,) bool


@dataclass(eq=False)
class Weights:
    w: np.ndarray  # (12,) non-negative, sums to 1 over valid entries


@dataclass(eq=False)
class SimilarityResult:
    distance_deg: float  # weighted angle distance D
    score: float  # similarity score S in {0} | [s_std, 100]
    per_pair: AngleDiffs
    weights: Weights
    matched_demo_t_ms: int


@dataclass(frozen=True)
class ReminderEvent:
    """Raised to the user when the score bottoms out at zero."""

    t_ms: int
    distance_deg: float
    worst: tuple[int, ...]  # up to 3 angle-pair indices, largest weighted deviation first


def limb_vectors(pose: Pose13, graph: LimbGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-limb planar vectors joint_a - joint_b, with a validity mask."""
    vecs = np.empty((12, 2), dtype=np.float64)
    valid = np.empty(12, dtype=bool)
    for i, (a, b) in enumerate(graph.limbs):
        vecs[i] = pose.joints[a] - pose.joints[b]
        valid[i] = bool(pose.valid[a] and pose.valid[b])
    return vecs, valid


def joint_angles(vectors: np.ndarray, valid: np.ndarray, graph: LimbGraph) -> JointAngles:
    """Inter-limb angles in degrees for each angle pair of the graph.

    A pair is invalid if either limb is invalid or has near-zero length.
    """
    angles = np.zeros(12, dtype=np.float64)
    out_valid = np.zeros(12, dtype=bool)
    for k, (i, j) in enumerate(graph.angle_pairs):
        if not (valid[i] and valid[j]):
            continue
        ni = vectors[i]
        nj = vectors[j]
        norm_i = math.hypot(ni[0], ni[1])
        norm_j = math.hypot(nj[0], nj[1])
        if norm_i < _NORM_EPS or norm_j < _NORM_EPS:
            continue
        cos_a = (ni[0] * nj[0] + ni[1] * nj[1]) / (norm_i * norm_j)
        cos_a = min(1.0, max(-1.0, cos_a))
        angles[k] = math.degrees(math.acos(cos_a))
        out_valid[k] = True
    return JointAngles(angles_deg=angles, valid=out_valid)


def angle_diffs(demo: JointAngles, user: JointAngles, min_valid_angles: int = 6) -> AngleDiffs:
    """Absolute per-pair angle differences where both sides are valid."""
    valid = demo.valid & user.valid
    if int(valid.sum()) < min_valid_angles:
        raise InsufficientData(
            f"only {int(valid.sum())} valid angle pairs, need {min_valid_angles}"
        )
    delta = np.where(valid, np.abs(demo.angles_deg - user.angles_deg), 0.0)
    return AngleDiffs(delta_deg=delta, delta_sum=float(delta.sum()), valid=valid)


def weights(diffs: AngleDiffs) -> Weights:
    """Movement-sensitive weights: pairs that deviate more get more weight.

    w_i = (1 - e^(-d_i / d_sum)) normalized over valid pairs; the d_sum = 0
    limit degenerates to uniform weights over valid pairs.
    """
    w = np.zeros(12, dtype=np.float64)
    n_valid = int(diffs.valid.sum())
    if n_valid == 0:
        return Weights(w=w)
    if diffs.delta_sum <= 0.0:
        w[diffs.valid] = 1.0 / n_valid
        return Weights(w=w)
    raw = 1.0 - np.exp(-diffs.delta_deg[diffs.valid] / diffs.delta_sum)
    w[diffs.valid] = raw / raw.sum()
    return Weights(w=w)


def weighted_distance(diffs: AngleDiffs, w: Weights) -> float:
    """D = sum of per-pair deviation times weight, a convex combination."""
    return float(np.dot(diffs.delta_deg[diffs.valid], w.w[diffs.valid]))


def score(distance_deg: float, cfg: ScoringConfig) -> float:
    """Piecewise-linear score: 100 at D=0, s_std at D=d_std, 0 beyond."""
    if distance_deg > cfg.d_std:
        return 0.0
    return (cfg.d_std - distance_deg) * (100.0 - cfg.s_std) / cfg.d_std + cfg.s_std


# Per-track cache of precomputed demo angle tables, keyed by limb graph.
_ANGLE_TABLES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _demo_angle_table(demo_track, graph: LimbGraph):
    per_track = _ANGLE_TABLES.setdefault(demo_track, {})
    table = per_track.get(graph)
    if table is None:
        n = len(demo_track.frames)
        t_arr = np.empty(n, dtype=np.int64)
        angles = np.empty((n, 12), dtype=np.float64)
        valid = np.empty((n, 12), dtype=bool)
        for row, pose in enumerate(demo_track.frames):
            vecs, vvalid = limb_vectors(pose, graph)
            ja = joint_angles(vecs, vvalid, graph)
            t_arr[row] = pose.t_ms
            angles[row] = ja.angles_deg
            valid[row] = ja.valid
        table = (t_arr, angles, valid)
        per_track[graph] = table
    return table


def align_and_score(
    user: Pose13,
    demo_track,
    cfg: ScoringConfig,
    graph: LimbGraph,
) -> SimilarityResult:
    """Score the user pose against the best-matching demo frame in the
    trailing window [t - delay_window, t].

    Vectorized over the window for throughput; the returned per-pair data is
    recomputed through the scalar pipeline on the chosen frame. Ties on score
    break toward smaller D, then toward the later demo frame.
    """
    t_arr, demo_angles, demo_valid = _demo_angle_table(demo_track, graph)
    lo = user.t_ms - int(round(cfg.delay_window_s * 1000.0))
    in_window = (t_arr >= lo) & (t_arr <= user.t_ms)
    if not in_window.any():
        raise EmptyWindow(f"no demo frames in [{lo}, {user.t_ms}] ms")

    vecs, vvalid = limb_vectors(user, graph)
    user_ja = joint_angles(vecs, vvalid, graph)

    w_t = t_arr[in_window]
    pair_valid = demo_valid[in_window] & user_ja.valid
    n_valid = pair_valid.sum(axis=1)
    usable = n_valid >= cfg.min_valid_angles
    if not usable.any():
        raise InsufficientData(
            f"no window frame offers {cfg.min_valid_angles} valid angle pairs"
        )

    delta = np.where(pair_valid, np.abs(demo_angles[in_window] - user_ja.angles_deg), 0.0)
    dsum = delta.sum(axis=1)
    w = np.zeros_like(delta)
    moving = usable & (dsum > 0.0)
    if moving.any():
        raw = np.where(pair_valid[moving], 1.0 - np.exp(-delta[moving] / dsum[moving, None]), 0.0)
        w[moving] = raw / raw.sum(axis=1, keepdims=True)
    frozen = usable & (dsum <= 0.0)
    if frozen.any():
        w[frozen] = pair_valid[frozen] / n_valid[frozen, None]

    d_row = (delta * w).sum(axis=1)
    s_row = np.where(
        d_row > cfg.d_std,
        0.0,
        (cfg.d_std - d_row) * (100.0 - cfg.s_std) / cfg.d_std + cfg.s_std,
    )
    s_row = np.where(usable, s_row, -np.inf)

    # best score, then smallest D, then latest demo frame
    order = np.lexsort((-w_t, d_row, -s_row))
    best = order[0]

    demo_row = JointAngles(
        angles_deg=demo_angles[in_window][best].copy(),
        valid=demo_valid[in_window][best].copy(),
    )
    diffs = angle_diffs(demo_row, user_ja, cfg.min_valid_angles)
    best_w = weights(diffs)
    best_d = weighted_distance(diffs, best_w)
    return SimilarityResult(
        distance_deg=best_d,
        score=score(best_d, cfg),
        per_pair=diffs,
        weights=best_w,
        matched_demo_t_ms=int(w_t[best]),
    )


def reminder(result: SimilarityResult, t_ms: int = 0) -> ReminderEvent | None:
    """Corrective reminder, emitted only when the score is zero."""
    if result.score != 0.0:
        return None
    contributions = result.per_pair.delta_deg * result.weights.w
    ranked = [
        int(i)
        for i in np.argsort(-contributions, kind="stable")
        if result.per_pair.valid[i]
    ]
    return ReminderEvent(
        t_ms=t_ms,
        distance_deg=result.distance_deg,
        worst=tuple(ranked[:3]),
    )
