// Client-side port of the server's firework engine. The two implementations
// must agree to float precision, so everything that matters is pinned: the
// rng draw order (star: orientation then per-particle jitter; ball: direction
// then speed per particle; cluster: primary ball draws, then delay/angle/
// distance per satellite burst), semi-implicit Euler integration at a fixed
// dt, and the rule that satellite bursts fire before integration and new
// particles first move on the following step.

import { MULTI_PALETTE } from "./palette.js";
import { SplitMix64 } from "./rng.js";

export type Shape = "star" | "ball" | "cluster";
export type SizeName = "large" | "medium" | "small" | "tiny";
export type ColorName =
  | "white"
  | "purple"
  | "blue"
  | "green"
  | "orange"
  | "yellow"
  | "multi";

export interface WireSpec {
  t_ms: number;
  x: number;
  y: number;
  angle_deg: number;
  shape: Shape;
  color: ColorName;
  size: SizeName;
  seed: string; // u64 as decimal string
}

export interface SceneConfig {
  dtS: number;
  gravityY: number;
  drag: number;
  bounds: [number, number];
  particlesPerShape: Record<Shape, number>;
  starSpokes: number;
  clusterBursts: number;
  clusterBurstParticles: number;
  sizeMultipliers: Record<SizeName, number>;
  lifetimesS: Record<Shape, number>;
  baseBurstSpeed: number;
  spawnAtJoint: boolean;
  minApex: number;
}

export function defaultSceneConfig(): SceneConfig {
  return {
    dtS: 1.0 / 60.0,
    gravityY: -9.8,
    drag: 0.98,
    bounds: [100.0, 100.0],
    particlesPerShape: { star: 60, ball: 100, cluster: 30 },
    starSpokes: 5,
    clusterBursts: 6,
    clusterBurstParticles: 25,
    sizeMultipliers: { large: 1.0, medium: 0.75, small: 0.5, tiny: 0.3 },
    lifetimesS: { star: 1.2, ball: 1.5, cluster: 2.5 },
    baseBurstSpeed: 26.0,
    spawnAtJoint: false,
    minApex: 1.0,
  };
}

const ROCKET_COLOR = "white";
const ROCKET_RADIUS = 0.6;
const ROCKET_LIFETIME_S = 6.0;
const BURST_RADIUS = 0.8;
const STAR_RINGS = [0.55, 0.775, 1.0];
const STAR_JITTER_DEG = 4.0;
const SUBBURST_DELAY_S: [number, number] = [0.2, 0.5];
const SUBBURST_OFFSET: [number, number] = [3.0, 8.0];
const DEG2RAD = Math.PI / 180.0;

export type Phase = "launching" | "blooming" | "done";

export interface Particle {
  x: number;
  y: number;
  vx: number;
  vy: number;
  color: string;
  ageS: number;
  lifetimeS: number;
  radius: number;
}

interface SubBurst {
  fireAtS: number;
  x: number;
  y: number;
}

export interface Firework {
  spec: WireSpec;
  phase: Phase;
  rng: SplitMix64;
  rocket: Particle | null;
  particles: Particle[];
  pending: SubBurst[];
  bloomAgeS: number;
  spawnedCount: number;
  expiredCount: number;
  created: number;
}

function resolveColor(color: ColorName, index: number): string {
  if (color === "multi") {
    return MULTI_PALETTE[index % MULTI_PALETTE.length];
  }
  return color;
}

export function spawnFirework(spec: WireSpec, cfg: SceneConfig): Firework {
  const fw: Firework = {
    spec,
    phase: "launching",
    rng: new SplitMix64(BigInt(spec.seed)),
    rocket: null,
    particles: [],
    pending: [],
    bloomAgeS: 0.0,
    spawnedCount: 0,
    expiredCount: 0,
    created: 0,
  };
  if (cfg.spawnAtJoint) {
    fw.rocket = {
      x: spec.x, y: spec.y, vx: 0.0, vy: 0.0,
      color: ROCKET_COLOR, ageS: 0.0, lifetimeS: ROCKET_LIFETIME_S,
      radius: ROCKET_RADIUS,
    };
  } else {
    const h = Math.max(cfg.minApex, spec.y);
    const theta = spec.angle_deg * DEG2RAD;
    const speed = Math.sqrt(2.0 * -cfg.gravityY * h) / Math.sin(theta);
    fw.rocket = {
      x: spec.x, y: 0.0,
      vx: speed * Math.cos(theta), vy: speed * Math.sin(theta),
      color: ROCKET_COLOR, ageS: 0.0, lifetimeS: ROCKET_LIFETIME_S,
      radius: ROCKET_RADIUS,
    };
  }
  fw.spawnedCount = 1;
  return fw;
}

function addParticle(
  fw: Firework, x: number, y: number, angleDeg: number, speed: number,
  lifetimeS: number, radius: number,
): void {
  const rad = angleDeg * DEG2RAD;
  fw.particles.push({
    x, y,
    vx: speed * Math.cos(rad), vy: speed * Math.sin(rad),
    color: resolveColor(fw.spec.color, fw.created),
    ageS: 0.0, lifetimeS, radius,
  });
  fw.created += 1;
  fw.spawnedCount += 1;
}

function burstBall(
  fw: Firework, x: number, y: number, count: number, baseSpeed: number,
  lifetimeS: number, radius: number,
): void {
  for (let i = 0; i < count; i++) {
    const angle = fw.rng.uniform(0.0, 360.0);
    const speed = baseSpeed * fw.rng.uniform(0.5, 1.0);
    addParticle(fw, x, y, angle, speed, lifetimeS, radius);
  }
}

export function explode(fw: Firework, cfg: SceneConfig): void {
  if (fw.phase !== "launching" || fw.rocket === null) {
    throw new Error(`cannot explode from phase ${fw.phase}`);
  }
  const apexX = fw.rocket.x;
  const apexY = fw.rocket.y;
  fw.rocket = null;
  fw.expiredCount += 1;
  fw.phase = "blooming";
  fw.bloomAgeS = 0.0;

  const shape = fw.spec.shape;
  const mult = cfg.sizeMultipliers[fw.spec.size];
  const base = cfg.baseBurstSpeed * mult;
  const lifetime = cfg.lifetimesS[shape];
  const radius = BURST_RADIUS * mult;
  const count = cfg.particlesPerShape[shape];

  if (shape === "star") {
    const orientation = fw.rng.uniform(0.0, 360.0);
    const spokeStep = 360.0 / cfg.starSpokes;
    const perRing = Math.max(1, Math.floor(count / (cfg.starSpokes * STAR_RINGS.length)));
    for (let s = 0; s < cfg.starSpokes; s++) {
      for (const ring of STAR_RINGS) {
        for (let k = 0; k < perRing; k++) {
          const jitter = fw.rng.uniform(-STAR_JITTER_DEG, STAR_JITTER_DEG);
          addParticle(
            fw, apexX, apexY,
            orientation + s * spokeStep + jitter,
            base * ring, lifetime, radius,
          );
        }
      }
    }
  } else if (shape === "ball") {
    burstBall(fw, apexX, apexY, count, base, lifetime, radius);
  } else {
    burstBall(fw, apexX, apexY, count, base, lifetime, radius);
    for (let j = 0; j < cfg.clusterBursts; j++) {
      const delay = fw.rng.uniform(SUBBURST_DELAY_S[0], SUBBURST_DELAY_S[1]);
      const offAngle = fw.rng.uniform(0.0, 360.0) * DEG2RAD;
      const offDist = fw.rng.uniform(SUBBURST_OFFSET[0], SUBBURST_OFFSET[1]) * mult;
      fw.pending.push({
        fireAtS: delay,
        x: apexX + offDist * Math.cos(offAngle),
        y: apexY + offDist * Math.sin(offAngle),
      });
    }
  }
}

function integrate(p: Particle, cfg: SceneConfig): void {
  p.vx = p.vx * cfg.drag;
  p.vy = (p.vy + cfg.gravityY * cfg.dtS) * cfg.drag;
  p.x += p.vx * cfg.dtS;
  p.y += p.vy * cfg.dtS;
  p.ageS += cfg.dtS;
}

export function stepFireworks(fireworks: Firework[], cfg: SceneConfig): void {
  for (const fw of fireworks) {
    if (fw.phase === "launching") {
      const rocket = fw.rocket!;
      integrate(rocket, cfg);
      if (rocket.ageS >= rocket.lifetimeS) {
        fw.rocket = null;
        fw.expiredCount += 1;
        fw.phase = "done";
      } else if (rocket.vy <= 0.0) {
        explode(fw, cfg);
      }
    } else if (fw.phase === "blooming") {
      fw.bloomAgeS += cfg.dtS;
      if (fw.pending.length) {
        const due = fw.pending.filter((sb) => sb.fireAtS <= fw.bloomAgeS);
        if (due.length) {
          fw.pending = fw.pending.filter((sb) => sb.fireAtS > fw.bloomAgeS);
          const mult = cfg.sizeMultipliers[fw.spec.size];
          for (const sb of due) {
            burstBall(
              fw, sb.x, sb.y,
              cfg.clusterBurstParticles,
              cfg.baseBurstSpeed * mult,
              cfg.lifetimesS[fw.spec.shape],
              BURST_RADIUS * mult,
            );
          }
        }
      }
      const alive: Particle[] = [];
      for (const p of fw.particles) {
        integrate(p, cfg);
        if (p.ageS >= p.lifetimeS) {
          fw.expiredCount += 1;
        } else {
          alive.push(p);
        }
      }
      fw.particles = alive;
      if (!fw.particles.length && !fw.pending.length) {
        fw.phase = "done";
      }
    }
  }
}

export interface RenderPoint {
  x: number;
  y: number;
  color: string;
  alpha: number;
  radius: number;
}

export function renderPoints(fireworks: Firework[]): RenderPoint[] {
  const points: RenderPoint[] = [];
  for (const fw of fireworks) {
    if (fw.rocket !== null) {
      points.push(toPoint(fw.rocket));
    }
    for (const p of fw.particles) {
      points.push(toPoint(p));
    }
  }
  return points;
}

function toPoint(p: Particle): RenderPoint {
  const alpha = 1.0 - p.ageS / p.lifetimeS;
  return {
    x: p.x, y: p.y, color: p.color,
    alpha: Math.min(1.0, Math.max(0.0, alpha)), radius: p.radius,
  };
}
