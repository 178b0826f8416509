// Session wire protocol: every message is one JSON object with a "type"
// field. Outgoing messages are validated before they leave the client;
// incoming ones are parsed defensively, with unknown types surfaced as null
// so the app can ignore them (the server does the same for us).

import type { ColorName, Shape, SizeName, WireSpec } from "./pyro.js";

export interface HelloMsg {
  type: "hello";
  demo: string;
  client: string;
}

export interface FrameMsg {
  type: "frame";
  t_ms: number;
  kp: number[][]; // 17 x [x, y, confidence]
}

export interface ByeMsg {
  type: "bye";
}

export type ClientMessage = HelloMsg | FrameMsg | ByeMsg;

export interface ReadyMsg {
  type: "ready";
  session_id: string;
  config: Record<string, unknown>;
}

export interface ScoreMsg {
  type: "score";
  t_ms: number;
  S: number;
  D: number;
}

export interface ReminderMsg {
  type: "reminder";
  t_ms: number;
  worst: number[];
}

export interface FireworkMsg extends WireSpec {
  type: "firework";
}

export interface SummaryMsg {
  type: "summary";
  id: string;
  demo: string;
  start_t_ms: number | null;
  end_t_ms: number | null;
  mean_S: number | null;
  max_S: number | null;
  min_S: number | null;
  reminders: number;
  fireworks: number;
}

export interface DiagnosticMsg {
  type: "diagnostic";
  msg: string;
}

export type ServerMessage =
  | ReadyMsg
  | ScoreMsg
  | ReminderMsg
  | FireworkMsg
  | SummaryMsg
  | DiagnosticMsg;

export class ProtocolError extends Error {}

const SHAPES: Shape[] = ["star", "ball", "cluster"];
const SIZES: SizeName[] = ["large", "medium", "small", "tiny"];
const COLORS: ColorName[] = [
  "white", "purple", "blue", "green", "orange", "yellow", "multi",
];

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Problems with an outgoing message; empty means it conforms. */
export function validateClientMessage(msg: unknown): string[] {
  if (!isObject(msg)) return ["message is not an object"];
  switch (msg.type) {
    case "hello": {
      const problems: string[] = [];
      if (typeof msg.demo !== "string" || !msg.demo) problems.push("hello.demo must be a non-empty string");
      if (typeof msg.client !== "string") problems.push("hello.client must be a string");
      return problems;
    }
    case "frame": {
      const problems: string[] = [];
      if (!Number.isInteger(msg.t_ms) || (msg.t_ms as number) < 0) {
        problems.push("frame.t_ms must be a non-negative integer");
      }
      const kp = msg.kp;
      if (!Array.isArray(kp) || kp.length !== 17) {
        problems.push("frame.kp must hold 17 keypoints");
        return problems;
      }
      kp.forEach((entry, i) => {
        if (!Array.isArray(entry) || entry.length !== 3 || !entry.every(isFiniteNumber)) {
          problems.push(`frame.kp[${i}] must be [x, y, confidence]`);
        } else if (entry[2] < 0 || entry[2] > 1) {
          problems.push(`frame.kp[${i}] confidence outside [0, 1]`);
        }
      });
      return problems;
    }
    case "bye":
      return [];
    default:
      return [`unknown client message type ${String(msg.type)}`];
  }
}

/** Parse a server message; null for unknown types (forward compatibility). */
export function parseServerMessage(data: unknown): ServerMessage | null {
  if (!isObject(data)) throw new ProtocolError("server message is not an object");
  switch (data.type) {
    case "ready":
      if (typeof data.session_id !== "string" || !isObject(data.config)) {
        throw new ProtocolError("bad ready message");
      }
      return data as unknown as ReadyMsg;
    case "score":
      if (!isFiniteNumber(data.t_ms) || !isFiniteNumber(data.S) || !isFiniteNumber(data.D)) {
        throw new ProtocolError("bad score message");
      }
      return data as unknown as ScoreMsg;
    case "reminder":
      if (!isFiniteNumber(data.t_ms) || !Array.isArray(data.worst) ||
          !data.worst.every((w) => Number.isInteger(w))) {
        throw new ProtocolError("bad reminder message");
      }
      return data as unknown as ReminderMsg;
    case "firework": {
      const ok =
        isFiniteNumber(data.t_ms) &&
        isFiniteNumber(data.x) &&
        isFiniteNumber(data.y) &&
        isFiniteNumber(data.angle_deg) &&
        SHAPES.includes(data.shape as Shape) &&
        COLORS.includes(data.color as ColorName) &&
        SIZES.includes(data.size as SizeName) &&
        typeof data.seed === "string" &&
        /^[0-9]+$/.test(data.seed);
      if (!ok) throw new ProtocolError("bad firework message");
      return data as unknown as FireworkMsg;
    }
    case "summary":
      if (typeof data.id !== "string") throw new ProtocolError("bad summary message");
      return data as unknown as SummaryMsg;
    case "diagnostic":
      if (typeof data.msg !== "string") throw new ProtocolError("bad diagnostic message");
      return data as unknown as DiagnosticMsg;
    default:
      return null;
  }
}

export function fireworkToSpec(msg: FireworkMsg): WireSpec {
  const { type, ...spec } = msg;
  void type;
  return spec;
}
