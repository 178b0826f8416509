// Camera capture behind a pluggable keypoint provider: anything that yields
// 17 COCO-ordered keypoints with confidences qualifies (an on-device pose
// model, or the synthetic provider when no camera/model is around). The loop
// never queues stale work: a tick that lands while estimation is in flight is
// dropped, and timestamps are taken after the estimate so a stalled model
// resumes at current time.

export interface Keypoint {
  x: number;
  y: number;
  confidence: number;
}

export interface KeypointProvider {
  estimate(): Promise<Keypoint[] | null>;
}

export type TickResult = "sent" | "dropped" | "empty";

export interface CaptureOptions {
  targetFps?: number;
  now?: () => number;
  onFrame: (tMs: number, kp: number[][]) => void;
  onError?: (err: unknown) => void;
}

export class CaptureLoop {
  private busy = false;
  private lastTms = -1;

  constructor(
    private readonly provider: KeypointProvider,
    private readonly opts: CaptureOptions,
  ) {}

  intervalMs(): number {
    return 1000.0 / (this.opts.targetFps ?? 24);
  }

  async tick(): Promise<TickResult> {
    if (this.busy) return "dropped";
    this.busy = true;
    try {
      const kp = await this.provider.estimate();
      if (!kp || kp.length !== 17) return "empty";
      const now = this.opts.now ?? (() => performance.now());
      const tMs = Math.round(now());
      if (tMs <= this.lastTms) return "dropped"; // keep t_ms strictly monotonic
      this.lastTms = tMs;
      this.opts.onFrame(tMs, kp.map((k) => [k.x, k.y, k.confidence]));
      return "sent";
    } catch (err) {
      this.opts.onError?.(err);
      return "empty";
    } finally {
      this.busy = false;
    }
  }

  /** Drive ticks on a timer; returns a stop function. */
  start(): () => void {
    const id = setInterval(() => void this.tick(), this.intervalMs());
    return () => clearInterval(id);
  }
}

/**
 * Deterministic stand-in for a pose model: a standing figure waving both
 * arms, emitted in image coordinates (y down). Keeps the full loop
 * demonstrable without camera permissions.
 */
export class SyntheticProvider implements KeypointProvider {
  constructor(private readonly now: () => number = () => performance.now()) {}

  estimate(): Promise<Keypoint[] | null> {
    const t = this.now() / 1000.0;
    const lift = 0.5 + 0.5 * Math.sin(2.0 * Math.PI * 0.4 * t);
    const cx = 320;
    const hipY = 300;
    const torso = 90;
    const pt = (x: number, y: number): Keypoint => ({
      x: cx + torso * x,
      y: hipY - torso * y,
      confidence: 0.9,
    });
    const wristY = 0.125 + 1.1 * lift;
    const elbowY = 0.5 + 0.6 * lift;
    const kp: Keypoint[] = [
      pt(0.0, 1.4), // nose
      pt(0.05, 1.45), pt(-0.05, 1.45), pt(0.1, 1.42), pt(-0.1, 1.42), // face
      pt(0.375, 1.0), pt(-0.375, 1.0), // shoulders (L, R)
      pt(0.5 + 0.1 * lift, elbowY), pt(-0.5 - 0.1 * lift, elbowY), // elbows
      pt(0.625 + 0.15 * lift, wristY), pt(-0.625 - 0.15 * lift, wristY), // wrists
      pt(0.25, 0.0), pt(-0.25, 0.0), // hips
      pt(0.25, -0.75), pt(-0.25, -0.75), // knees
      pt(0.25, -1.5), pt(-0.25, -1.5), // ankles
    ];
    return Promise.resolve(kp);
  }
}

/** Minimal surface of tfjs-style pose detectors. */
export interface PoseDetectorLike {
  estimatePoses(
    input: unknown,
  ): Promise<Array<{ keypoints: Array<{ x: number; y: number; score?: number }> }>>;
}

/** Adapter for an injected on-device detector (e.g. MoveNet via tfjs). */
export class DetectorProvider implements KeypointProvider {
  constructor(
    private readonly detector: PoseDetectorLike,
    private readonly input: unknown,
  ) {}

  async estimate(): Promise<Keypoint[] | null> {
    const poses = await this.detector.estimatePoses(this.input);
    if (!poses.length) return null;
    const kp = poses[0].keypoints
      .slice(0, 17)
      .map((k) => ({ x: k.x, y: k.y, confidence: k.score ?? 0 }));
    return kp.length === 17 ? kp : null;
  }
}
