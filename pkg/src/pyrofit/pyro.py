"""Deterministic fixed-timestep particle engine for firework animations.

Every random draw comes from a per-firework splitmix64 stream in a documented
fixed order, and integration is semi-implicit Euler at a fixed dt, so two runs
of the same specs produce bit-identical frames. The browser renderer ports
this file operation for operation; the draw order and integration order are
part of the cross-implementation contract:

  spawn:    no draws (launch velocity is closed-form from the spec)
  explode:  star    -> orientation, then per particle: angle jitter
            ball    -> per particle: direction, speed factor
            cluster -> primary ball draws, then per sub-burst:
                       delay, offset angle, offset distance
  step:     blooming fireworks fire due sub-bursts (in creation order, each
            drawing like a ball) before integrating particles; burst
            particles first integrate on the step after their creation
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .choreography import Color, FireworkSpec, Shape, Size
from .errors import PhaseError
from .rng import SplitMix64

MULTI_PALETTE = ("red", "orange", "yellow", "green", "cyan", "blue", "violet")

COLOR_RGB = {
    "white": (255, 255, 255),
    "purple": (170, 80, 255),
    "blue": (80, 130, 255),
    "green": (80, 220, 120),
    "orange": (255, 150, 50),
    "yellow": (255, 220, 70),
    "red": (255, 80, 80),
    "cyan": (80, 220, 220),
    "violet": (200, 120, 255),
}

ROCKET_COLOR = "white"
ROCKET_RADIUS = 0.6
ROCKET_LIFETIME_S = 6.0
BURST_RADIUS = 0.8
STAR_RINGS = (0.55, 0.775, 1.0)
STAR_JITTER_DEG = 4.0
SUBBURST_DELAY_S = (0.2, 0.5)
SUBBURST_OFFSET = (3.0, 8.0)


class Phase(Enum):
    LAUNCHING = "launching"
    BLOOMING = "blooming"
    DONE = "done"


@dataclass
class SceneConfig:
    dt_s: float = 1.0 / 60.0
    gravity_y: float = -9.8  # scene units / s^2, up-positive scene
    drag: float = 0.98  # per-step velocity multiplier
    bounds: tuple[float, float] = (100.0, 100.0)
    particles_per_shape: dict = field(
        default_factory=lambda: {Shape.STAR: 60, Shape.BALL: 100, Shape.CLUSTER: 30}
    )
    star_spokes: int = 5
    cluster_bursts: int = 6
    cluster_burst_particles: int = 25
    size_multipliers: dict = field(
        default_factory=lambda: {
            Size.LARGE: 1.0,
            Size.MEDIUM: 0.75,
            Size.SMALL: 0.5,
            Size.TINY: 0.3,
        }
    )
    lifetimes_s: dict = field(
        default_factory=lambda: {Shape.STAR: 1.2, Shape.BALL: 1.5, Shape.CLUSTER: 2.5}
    )
    base_burst_speed: float = 26.0
    spawn_at_joint: bool = False  # skip the launch phase, bloom at the joint
    min_apex: float = 1.0

    def __post_init__(self):
        if self.dt_s <= 0:
            raise ValueError("dt_s must be positive")
        if self.gravity_y >= 0:
            raise ValueError("gravity_y must be negative")
        if not 0 < self.drag <= 1:
            raise ValueError("drag must be in (0, 1]")
        mults = [self.size_multipliers[s] for s in (Size.LARGE, Size.MEDIUM, Size.SMALL, Size.TINY)]
        if not all(a > b for a, b in zip(mults, mults[1:])):
            raise ValueError("size multipliers must strictly decrease large -> tiny")


@dataclass
class Particle:
    x: float
    y: float
    vx: float
    vy: float
    color: str
    age_s: float
    lifetime_s: float
    radius: float


@dataclass
class SubBurst:
    fire_at_s: float  # seconds after bloom start
    x: float
    y: float


@dataclass
class Firework:
    spec: FireworkSpec
    phase: Phase
    rng: SplitMix64
    rocket: Particle | None = None
    particles: list = field(default_factory=list)
    pending: list = field(default_factory=list)
    bloom_age_s: float = 0.0
    spawned_count: int = 0
    expired_count: int = 0
    _created: int = 0  # burst particles created, drives the multi palette cycle

    def live_count(self) -> int:
        return len(self.particles) + (1 if self.rocket is not None else 0)


def _resolve_color(color: Color, index: int) -> str:
    if color is Color.MULTI:
        return MULTI_PALETTE[index % len(MULTI_PALETTE)]
    return color.value


def spawn(spec: FireworkSpec, cfg: SceneConfig) -> Firework:
    """Launch a rocket from the ground toward the spec's apex height.

    The launch speed is the drag-free closed form v = sqrt(2|g|h) / sin(theta),
    so with drag enabled the realized apex sits slightly below the target.
    """
    x0, y_target = spec.origin
    rng = SplitMix64(spec.seed)
    fw = Firework(spec=spec, phase=Phase.LAUNCHING, rng=rng)
    if cfg.spawn_at_joint:
        rocket = Particle(
            x=x0, y=y_target, vx=0.0, vy=0.0,
            color=ROCKET_COLOR, age_s=0.0, lifetime_s=ROCKET_LIFETIME_S,
            radius=ROCKET_RADIUS,
        )
    else:
        h = max(cfg.min_apex, y_target)
        theta = math.radians(spec.launch_angle_deg)
        speed = math.sqrt(2.0 * -cfg.gravity_y * h) / math.sin(theta)
        rocket = Particle(
            x=x0, y=0.0, vx=speed * math.cos(theta), vy=speed * math.sin(theta),
            color=ROCKET_COLOR, age_s=0.0, lifetime_s=ROCKET_LIFETIME_S,
            radius=ROCKET_RADIUS,
        )
    fw.rocket = rocket
    fw.spawned_count = 1
    return fw


def _add_particle(fw: Firework, x: float, y: float, angle_deg: float, speed: float,
                  lifetime_s: float, radius: float) -> None:
    rad = math.radians(angle_deg)
    fw.particles.append(
        Particle(
            x=x, y=y,
            vx=speed * math.cos(rad), vy=speed * math.sin(rad),
            color=_resolve_color(fw.spec.color, fw._created),
            age_s=0.0, lifetime_s=lifetime_s, radius=radius,
        )
    )
    fw._created += 1
    fw.spawned_count += 1


def _burst_ball(fw: Firework, x: float, y: float, count: int, base_speed: float,
                lifetime_s: float, radius: float) -> None:
    for _ in range(count):
        angle = fw.rng.uniform(0.0, 360.0)
        speed = base_speed * fw.rng.uniform(0.5, 1.0)
        _add_particle(fw, x, y, angle, speed, lifetime_s, radius)


def explode(fw: Firework, cfg: SceneConfig) -> Firework:
    """Convert the rocket into the shape's particle burst at its apex."""
    if fw.phase is not Phase.LAUNCHING or fw.rocket is None:
        raise PhaseError(f"cannot explode from phase {fw.phase.value}")
    apex_x, apex_y = fw.rocket.x, fw.rocket.y
    fw.rocket = None
    fw.expired_count += 1
    fw.phase = Phase.BLOOMING
    fw.bloom_age_s = 0.0

    shape = fw.spec.shape
    mult = cfg.size_multipliers[fw.spec.size]
    base = cfg.base_burst_speed * mult
    lifetime = cfg.lifetimes_s[shape]
    radius = BURST_RADIUS * mult
    count = cfg.particles_per_shape[shape]

    if shape is Shape.STAR:
        orientation = fw.rng.uniform(0.0, 360.0)
        spoke_step = 360.0 / cfg.star_spokes
        per_ring = max(1, count // (cfg.star_spokes * len(STAR_RINGS)))
        for s in range(cfg.star_spokes):
            for ring in STAR_RINGS:
                for _ in range(per_ring):
                    jitter = fw.rng.uniform(-STAR_JITTER_DEG, STAR_JITTER_DEG)
                    _add_particle(
                        fw, apex_x, apex_y,
                        orientation + s * spoke_step + jitter,
                        base * ring, lifetime, radius,
                    )
    elif shape is Shape.BALL:
        _burst_ball(fw, apex_x, apex_y, count, base, lifetime, radius)
    else:  # cluster: primary burst now, satellite bursts on a short fuse
        _burst_ball(fw, apex_x, apex_y, count, base, lifetime, radius)
        for _ in range(cfg.cluster_bursts):
            delay = fw.rng.uniform(*SUBBURST_DELAY_S)
            off_angle = math.radians(fw.rng.uniform(0.0, 360.0))
            off_dist = fw.rng.uniform(*SUBBURST_OFFSET) * mult
            fw.pending.append(
                SubBurst(
                    fire_at_s=delay,
                    x=apex_x + off_dist * math.cos(off_angle),
                    y=apex_y + off_dist * math.sin(off_angle),
                )
            )
    return fw


def _integrate(p: Particle, cfg: SceneConfig) -> None:
    p.vx = p.vx * cfg.drag
    p.vy = (p.vy + cfg.gravity_y * cfg.dt_s) * cfg.drag
    p.x += p.vx * cfg.dt_s
    p.y += p.vy * cfg.dt_s
    p.age_s += cfg.dt_s


def step(fireworks: list, cfg: SceneConfig) -> list:
    """Advance every firework by one fixed timestep (in list order)."""
    for fw in fireworks:
        if fw.phase is Phase.LAUNCHING:
            rocket = fw.rocket
            _integrate(rocket, cfg)
            if rocket.age_s >= rocket.lifetime_s:
                fw.rocket = None
                fw.expired_count += 1
                fw.phase = Phase.DONE
            elif rocket.vy <= 0.0:
                explode(fw, cfg)
        elif fw.phase is Phase.BLOOMING:
            fw.bloom_age_s += cfg.dt_s
            if fw.pending:
                due = [sb for sb in fw.pending if sb.fire_at_s <= fw.bloom_age_s]
                if due:
                    fw.pending = [sb for sb in fw.pending if sb.fire_at_s > fw.bloom_age_s]
                    mult = cfg.size_multipliers[fw.spec.size]
                    for sb in due:
                        _burst_ball(
                            fw, sb.x, sb.y,
                            cfg.cluster_burst_particles,
                            cfg.base_burst_speed * mult,
                            cfg.lifetimes_s[fw.spec.shape],
                            BURST_RADIUS * mult,
                        )
            alive = []
            for p in fw.particles:
                _integrate(p, cfg)
                if p.age_s >= p.lifetime_s:
                    fw.expired_count += 1
                else:
                    alive.append(p)
            fw.particles = alive
            if not fw.particles and not fw.pending:
                fw.phase = Phase.DONE
    return fireworks


@dataclass
class Frame:
    t_ms: int
    points: list  # (x, y, color, alpha, radius) per live particle


def render_frame(fireworks: list, t_ms: int) -> Frame:
    """Snapshot of all live particles; alpha fades linearly with age."""
    points = []
    for fw in fireworks:
        if fw.rocket is not None:
            points.append(_point(fw.rocket))
        for p in fw.particles:
            points.append(_point(p))
    return Frame(t_ms=t_ms, points=points)


def _point(p: Particle):
    alpha = 1.0 - p.age_s / p.lifetime_s
    return (p.x, p.y, p.color, min(1.0, max(0.0, alpha)), p.radius)


def frame_to_line(frame: Frame) -> str:
    """Canonical JSON serialization; also the digest input, so the float
    formatting (shortest round-trip repr) is part of the contract.
    """
    return json.dumps(
        {"t_ms": frame.t_ms, "points": [list(pt) for pt in frame.points]},
        separators=(",", ":"),
    )


def _run(specs: list, n_steps: int, cfg: SceneConfig, on_frame) -> None:
    fireworks = [spawn(spec, cfg) for spec in specs]
    for i in range(1, n_steps + 1):
        step(fireworks, cfg)
        on_frame(render_frame(fireworks, t_ms=round(i * cfg.dt_s * 1000.0)))


def run_deterministic(specs: list, n_steps: int, cfg: SceneConfig) -> str:
    """Spawn all specs at t=0, step n times, and digest every rendered frame.

    Returns the lowercase-hex 64-bit digest of the canonical frame stream.
    """
    digest = hashlib.blake2b(digest_size=8)

    def absorb(frame: Frame) -> None:
        digest.update(frame_to_line(frame).encode("utf-8"))
        digest.update(b"\n")

    _run(specs, n_steps, cfg, absorb)
    return digest.hexdigest()


def simulate(specs: list, n_steps: int, cfg: SceneConfig) -> tuple[str, list]:
    """Like run_deterministic but also collects the rendered frames."""
    digest = hashlib.blake2b(digest_size=8)
    frames: list[Frame] = []

    def absorb(frame: Frame) -> None:
        digest.update(frame_to_line(frame).encode("utf-8"))
        digest.update(b"\n")
        frames.append(frame)

    _run(specs, n_steps, cfg, absorb)
    return digest.hexdigest(), frames


def render_ppm(frame: Frame, cfg: SceneConfig, width: int, height: int) -> bytes:
    """Rasterize one frame to a binary P6 PPM with additive point splatting."""
    import numpy as np

    img = np.zeros((height, width, 3), dtype=np.float64)
    scene_w, scene_h = cfg.bounds
    for x, y, color, alpha, radius in frame.points:
        px = x / scene_w * width
        py = (1.0 - y / scene_h) * height
        r_px = max(1, round(radius * width / scene_w))
        x_lo = max(0, int(math.floor(px - r_px)))
        x_hi = min(width, int(math.ceil(px + r_px)) + 1)
        y_lo = max(0, int(math.floor(py - r_px)))
        y_hi = min(height, int(math.ceil(py + r_px)) + 1)
        if x_lo >= x_hi or y_lo >= y_hi:
            continue
        ys, xs = np.mgrid[y_lo:y_hi, x_lo:x_hi]
        mask = (xs - px) ** 2 + (ys - py) ** 2 <= r_px**2
        rgb = np.array(COLOR_RGB[color], dtype=np.float64) * alpha
        img[y_lo:y_hi, x_lo:x_hi][mask] += rgb
    data = np.clip(img, 0, 255).astype(np.uint8).tobytes()
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + data
