// Canvas fireworks renderer. Owns the local scene; specs arrive exclusively
// from server firework events. Simulation runs on a fixed-timestep
// accumulator so the animation is independent of the display refresh rate
// and stays in lockstep with what the server engine would compute.

import { cssColor } from "./palette.js";
import {
  defaultSceneConfig,
  Firework,
  renderPoints,
  SceneConfig,
  spawnFirework,
  stepFireworks,
  WireSpec,
} from "./pyro.js";

export class FireworksRenderer {
  private fireworks: Firework[] = [];
  private lastMs: number | null = null;
  private accumulatorS = 0;

  constructor(private readonly cfg: SceneConfig = defaultSceneConfig()) {}

  spawn(spec: WireSpec): void {
    this.fireworks.push(spawnFirework(spec, this.cfg));
  }

  liveCount(): number {
    return this.fireworks.length;
  }

  update(nowMs: number): void {
    if (this.lastMs !== null) {
      this.accumulatorS += Math.min(0.25, (nowMs - this.lastMs) / 1000.0);
      while (this.accumulatorS >= this.cfg.dtS) {
        stepFireworks(this.fireworks, this.cfg);
        this.accumulatorS -= this.cfg.dtS;
      }
      this.fireworks = this.fireworks.filter((fw) => fw.phase !== "done");
    }
    this.lastMs = nowMs;
  }

  draw(ctx: CanvasRenderingContext2D, width: number, height: number): void {
    const [sceneW, sceneH] = this.cfg.bounds;
    ctx.clearRect(0, 0, width, height);
    ctx.save();
    ctx.globalCompositeOperation = "lighter";
    for (const pt of renderPoints(this.fireworks)) {
      const px = (pt.x / sceneW) * width;
      const py = (1.0 - pt.y / sceneH) * height;
      const r = Math.max(1.5, (pt.radius / sceneW) * width);
      ctx.fillStyle = cssColor(pt.color, pt.alpha);
      ctx.beginPath();
      ctx.arc(px, py, r, 0, 2 * Math.PI);
      ctx.fill();
    }
    ctx.restore();
  }
}
