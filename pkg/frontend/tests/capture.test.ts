// Capture loop: drop-don't-queue under a slow model, monotonic timestamps,
// and the synthetic provider's shape.

import { describe, expect, it } from "vitest";

import { CaptureLoop, Keypoint, KeypointProvider, SyntheticProvider } from "../src/capture.js";

class ManualProvider implements KeypointProvider {
  resolvers: Array<(kp: Keypoint[] | null) => void> = [];

  estimate(): Promise<Keypoint[] | null> {
    return new Promise((resolve) => this.resolvers.push(resolve));
  }

  finish(kp: Keypoint[] | null = defaultKp()): void {
    this.resolvers.shift()?.(kp);
  }
}

function defaultKp(): Keypoint[] {
  return Array.from({ length: 17 }, (_, i) => ({ x: i, y: i * 2, confidence: 0.8 }));
}

describe("capture loop", () => {
  it("emits one frame message per completed tick", async () => {
    const provider = new ManualProvider();
    let clock = 100;
    const frames: Array<[number, number[][]]> = [];
    const loop = new CaptureLoop(provider, {
      targetFps: 24,
      now: () => clock,
      onFrame: (t, kp) => frames.push([t, kp]),
    });
    const tick = loop.tick();
    provider.finish();
    expect(await tick).toBe("sent");
    expect(frames).toHaveLength(1);
    expect(frames[0][0]).toBe(100);
    expect(frames[0][1]).toHaveLength(17);
    expect(frames[0][1][3]).toEqual([3, 6, 0.8]);
  });

  it("drops ticks while the model is busy and resumes at current time", async () => {
    const provider = new ManualProvider();
    let clock = 0;
    const times: number[] = [];
    const loop = new CaptureLoop(provider, {
      now: () => clock,
      onFrame: (t) => times.push(t),
    });
    const slow = loop.tick(); // model stalls
    expect(await loop.tick()).toBe("dropped");
    expect(await loop.tick()).toBe("dropped");
    clock = 500; // stall lasted 500 ms
    provider.finish();
    expect(await slow).toBe("sent");
    const next = loop.tick();
    clock = 542;
    provider.finish();
    expect(await next).toBe("sent");
    expect(times).toEqual([500, 542]); // no backlog, current timestamps only
  });

  it("keeps timestamps strictly monotonic", async () => {
    const provider = new ManualProvider();
    const clock = 250; // frozen clock: second tick must be dropped
    const times: number[] = [];
    const loop = new CaptureLoop(provider, {
      now: () => clock,
      onFrame: (t) => times.push(t),
    });
    const first = loop.tick();
    provider.finish();
    await first;
    const second = loop.tick();
    provider.finish();
    expect(await second).toBe("dropped");
    expect(times).toEqual([250]);
  });

  it("reports empty results without emitting", async () => {
    const provider = new ManualProvider();
    const frames: number[] = [];
    const loop = new CaptureLoop(provider, {
      now: () => 1,
      onFrame: (t) => frames.push(t),
    });
    const tick = loop.tick();
    provider.finish(null);
    expect(await tick).toBe("empty");
    expect(frames).toEqual([]);
  });

  it("synthetic provider emits 17 confident COCO keypoints", async () => {
    const provider = new SyntheticProvider(() => 1234);
    const kp = await provider.estimate();
    expect(kp).toHaveLength(17);
    for (const k of kp!) {
      expect(k.confidence).toBeGreaterThan(0);
      expect(Number.isFinite(k.x) && Number.isFinite(k.y)).toBe(true);
    }
    // nose above hips in image coordinates (y grows downward)
    expect(kp![0].y).toBeLessThan(kp![11].y);
  });
});
