// Session client state machine. Transport-agnostic: the browser wires in a
// WebSocket, tests wire in a script. Fireworks reach the renderer only
// through the onSpawn callback, which fires exclusively on server firework
// messages; the client has no other way to invent one.

import {
  ClientMessage,
  fireworkToSpec,
  parseServerMessage,
  ProtocolError,
  SummaryMsg,
  validateClientMessage,
} from "./protocol.js";
import type { WireSpec } from "./pyro.js";

export interface Transport {
  send(data: string): void;
  close(): void;
}

export type ConnectionState = "disconnected" | "connecting" | "live" | "ended";

export interface ScoreSnapshot {
  t_ms: number;
  S: number;
  D: number;
  roundTripMs: number | null;
}

export interface ReminderSnapshot {
  worst: number[];
  expiresAtMs: number;
}

export interface SessionStats {
  framesSent: number;
  framesDropped: number;
  eventsReceived: number;
}

export interface ClientOptions {
  demo: string;
  clientName: string;
  now?: () => number;
  reminderToastMs?: number;
  onSpawn?: (spec: WireSpec) => void;
  onStateChange?: () => void;
}

const REMINDER_TOAST_MS = 1500;

export class SessionClient {
  connection: ConnectionState = "disconnected";
  sessionId: string | null = null;
  config: Record<string, unknown> | null = null;
  score: ScoreSnapshot | null = null;
  reminder: ReminderSnapshot | null = null;
  summary: SummaryMsg | null = null;
  diagnostics: string[] = [];
  stats: SessionStats = { framesSent: 0, framesDropped: 0, eventsReceived: 0 };

  private transport: Transport | null = null;
  private readonly now: () => number;
  private readonly toastMs: number;
  private readonly sentAt = new Map<number, number>();

  constructor(private readonly opts: ClientOptions) {
    this.now = opts.now ?? (() => performance.now());
    this.toastMs = opts.reminderToastMs ?? REMINDER_TOAST_MS;
  }

  attach(transport: Transport): void {
    this.transport = transport;
    this.connection = "connecting";
    this.changed();
  }

  /** Call when the transport is open: sends the hello handshake. */
  onOpen(): void {
    this.send({ type: "hello", demo: this.opts.demo, client: this.opts.clientName });
  }

  onClose(): void {
    if (this.connection !== "ended") this.connection = "disconnected";
    this.changed();
  }

  onMessage(raw: string | unknown): void {
    let data: unknown = raw;
    if (typeof raw === "string") {
      try {
        data = JSON.parse(raw);
      } catch {
        this.diagnostics.push("unparseable server message");
        return;
      }
    }
    let msg;
    try {
      msg = parseServerMessage(data);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.diagnostics.push(err.message);
        return;
      }
      throw err;
    }
    if (msg === null) return; // unknown type: ignore, stay compatible
    this.stats.eventsReceived += 1;
    switch (msg.type) {
      case "ready":
        this.sessionId = msg.session_id;
        this.config = msg.config;
        this.connection = "live";
        break;
      case "score": {
        const sent = this.sentAt.get(msg.t_ms);
        this.sentAt.delete(msg.t_ms);
        this.score = {
          t_ms: msg.t_ms, S: msg.S, D: msg.D,
          roundTripMs: sent === undefined ? null : this.now() - sent,
        };
        break;
      }
      case "reminder":
        this.reminder = { worst: msg.worst, expiresAtMs: this.now() + this.toastMs };
        break;
      case "firework":
        this.opts.onSpawn?.(fireworkToSpec(msg));
        break;
      case "summary":
        this.summary = msg;
        this.connection = "ended";
        break;
      case "diagnostic":
        this.diagnostics.push(msg.msg);
        break;
    }
    this.changed();
  }

  sendFrame(tMs: number, kp: number[][]): boolean {
    if (this.connection !== "live") {
      this.stats.framesDropped += 1;
      return false;
    }
    const sent = this.send({ type: "frame", t_ms: tMs, kp });
    if (sent) {
      this.stats.framesSent += 1;
      this.sentAt.set(tMs, this.now());
      if (this.sentAt.size > 256) {
        const oldest = this.sentAt.keys().next().value as number;
        this.sentAt.delete(oldest);
      }
    } else {
      this.stats.framesDropped += 1;
    }
    return sent;
  }

  bye(): void {
    this.send({ type: "bye" });
  }

  activeReminder(): ReminderSnapshot | null {
    if (this.reminder && this.now() < this.reminder.expiresAtMs) {
      return this.reminder;
    }
    return null;
  }

  private send(msg: ClientMessage): boolean {
    const problems = validateClientMessage(msg);
    if (problems.length) {
      this.diagnostics.push(`refusing to send: ${problems.join("; ")}`);
      return false;
    }
    if (!this.transport) return false;
    this.transport.send(JSON.stringify(msg));
    return true;
  }

  private changed(): void {
    this.opts.onStateChange?.();
  }
}
