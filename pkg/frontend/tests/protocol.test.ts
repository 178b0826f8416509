// Protocol conformance: a scripted mock server drives the client through the
// whole session flow; every message the client emits must validate against
// the wire schema, and fireworks may only ever originate from server events.

import { describe, expect, it } from "vitest";

import { SessionClient, Transport } from "../src/client.js";
import { validateClientMessage } from "../src/protocol.js";
import type { WireSpec } from "../src/pyro.js";

class ScriptedServer implements Transport {
  sent: Array<Record<string, unknown>> = [];
  closed = false;

  send(data: string): void {
    this.sent.push(JSON.parse(data));
  }

  close(): void {
    this.closed = true;
  }
}

function makeKp(): number[][] {
  return Array.from({ length: 17 }, (_, i) => [100 + i, 200 - i, 0.9]);
}

const FIREWORK = {
  type: "firework", t_ms: 132, x: 48.0, y: 61.0, angle_deg: 90.0,
  shape: "ball", color: "green", size: "large", seed: "987654321",
};

function liveClient(onSpawn?: (spec: WireSpec) => void, now?: () => number) {
  const server = new ScriptedServer();
  const client = new SessionClient({
    demo: "wave", clientName: "test-ui", onSpawn, now: now ?? (() => 0),
  });
  client.attach(server);
  client.onOpen();
  client.onMessage({ type: "ready", session_id: "s0001", config: { d_std: 65 } });
  return { server, client };
}

describe("session flow", () => {
  it("walks hello -> ready -> score -> reminder -> firework -> summary", () => {
    const spawns: WireSpec[] = [];
    const { server, client } = liveClient((spec) => spawns.push(spec));

    expect(server.sent[0].type).toBe("hello");
    expect(client.connection).toBe("live");
    expect(client.sessionId).toBe("s0001");
    expect(client.config).toEqual({ d_std: 65 });

    client.sendFrame(33, makeKp());
    client.onMessage({ type: "score", t_ms: 33, S: 87.5, D: 12.3 });
    expect(client.score).toMatchObject({ t_ms: 33, S: 87.5, D: 12.3 });

    client.onMessage({ type: "score", t_ms: 66, S: 0.0, D: 80.1 });
    client.onMessage({ type: "reminder", t_ms: 66, worst: [2, 7, 4] });
    expect(client.activeReminder()?.worst).toEqual([2, 7, 4]);

    client.onMessage(FIREWORK);
    expect(spawns).toHaveLength(1);
    expect(spawns[0]).toMatchObject({ shape: "ball", seed: "987654321" });

    client.bye();
    client.onMessage({
      type: "summary", id: "s0001", demo: "wave", start_t_ms: 33, end_t_ms: 66,
      mean_S: 44, max_S: 88, min_S: 0, reminders: 1, fireworks: 1,
    });
    expect(client.connection).toBe("ended");
    expect(client.summary?.mean_S).toBe(44);

    // every outgoing message conforms to the schema
    expect(server.sent.length).toBeGreaterThanOrEqual(3);
    for (const msg of server.sent) {
      expect(validateClientMessage(msg)).toEqual([]);
    }
  });

  it("never invents fireworks from non-firework traffic", () => {
    const spawns: WireSpec[] = [];
    const { client } = liveClient((spec) => spawns.push(spec));
    client.sendFrame(33, makeKp());
    client.onMessage({ type: "score", t_ms: 33, S: 100.0, D: 0.0 });
    client.onMessage({ type: "score", t_ms: 66, S: 93.0, D: 3.0 });
    client.onMessage({ type: "reminder", t_ms: 99, worst: [1, 2, 3] });
    client.onMessage({ type: "diagnostic", msg: "all fine" });
    expect(spawns).toHaveLength(0);
    client.onMessage(FIREWORK);
    client.onMessage(FIREWORK);
    expect(spawns).toHaveLength(2);
  });

  it("refuses to send malformed frames", () => {
    const { server, client } = liveClient();
    const before = server.sent.length;
    expect(client.sendFrame(10, [[1, 2, 0.5]])).toBe(false); // 1 keypoint
    expect(client.sendFrame(-5, makeKp())).toBe(false); // negative time
    const bad = makeKp();
    bad[3] = [1, 2, 1.5]; // confidence out of range
    expect(client.sendFrame(20, bad)).toBe(false);
    expect(server.sent.length).toBe(before);
    expect(client.stats.framesDropped).toBe(3);
  });

  it("drops frames until the session is live", () => {
    const server = new ScriptedServer();
    const client = new SessionClient({ demo: "wave", clientName: "t", now: () => 0 });
    client.attach(server);
    client.onOpen();
    expect(client.sendFrame(5, makeKp())).toBe(false);
    expect(server.sent.filter((m) => m.type === "frame")).toHaveLength(0);
  });

  it("ignores unknown server message types", () => {
    const { client } = liveClient();
    client.onMessage({ type: "lasershow", intensity: 11 });
    expect(client.connection).toBe("live");
    expect(client.diagnostics).toEqual([]);
  });

  it("records malformed server messages without crashing", () => {
    const { client } = liveClient();
    client.onMessage({ type: "score", t_ms: "later", S: "high", D: null });
    client.onMessage("{not json");
    expect(client.diagnostics.length).toBe(2);
    expect(client.connection).toBe("live");
  });

  it("measures round-trip from frame to score", () => {
    let clock = 1000;
    const { client } = liveClient(undefined, () => clock);
    client.sendFrame(33, makeKp());
    clock = 1042;
    client.onMessage({ type: "score", t_ms: 33, S: 90, D: 5 });
    expect(client.score?.roundTripMs).toBe(42);
  });

  it("expires the reminder toast after its window", () => {
    let clock = 0;
    const { client } = liveClient(undefined, () => clock);
    client.onMessage({ type: "reminder", t_ms: 1, worst: [0, 1, 2] });
    clock = 1400;
    expect(client.activeReminder()).not.toBeNull();
    clock = 1600;
    expect(client.activeReminder()).toBeNull();
  });
});
