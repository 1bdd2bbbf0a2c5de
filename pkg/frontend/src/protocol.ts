// Session protocol types mirroring the engine's JSON schema (v1).
// Every message is {"v": 1, "kind": ..., "body": ...}; the server refuses
// anything else, so the client validates symmetrically.

export const PROTOCOL_VERSION = 1;

export type MessageKind =
  | "start_session"
  | "pose_update"
  | "sensor_update"
  | "feedback_update"
  | "device_health"
  | "end_session";

export interface SessionMessage {
  v: number;
  kind: MessageKind;
  body: Record<string, unknown>;
}

export interface FrameBody {
  color: "green" | "orange" | "red";
  heading: number;
  tint: "left" | "right" | "none";
  dashed: boolean;
  end_screen: boolean;
}

export interface CueBody {
  kind: string;
  text: string;
}

export interface FeedbackBody {
  t_ms: number;
  frame: FrameBody;
  cues: CueBody[];
  severity: { level: string; side: string };
  phase: string;
  progress: number;
  completed: boolean;
}

export interface SensorBody {
  t_ms: number;
  left_on_ink: boolean;
  right_on_ink: boolean;
  left_fault: boolean;
  right_fault: boolean;
}

export interface PathBody {
  vertices: [number, number][];
  ink_width_mm: number;
  capture_radius_mm: number;
}

export interface PoseBody {
  x_mm: number;
  y_mm: number;
  heading_deg: number;
  t_ms: number;
}

const KINDS: MessageKind[] = [
  "start_session",
  "pose_update",
  "sensor_update",
  "feedback_update",
  "device_health",
  "end_session",
];

export function encodeMessage(kind: MessageKind, body: object): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, kind, body });
}

export function decodeMessage(text: string): SessionMessage {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    throw new Error("session message is not valid JSON");
  }
  if (typeof data !== "object" || data === null) {
    throw new Error("session message must be an object");
  }
  const msg = data as { v?: unknown; kind?: unknown; body?: unknown };
  if (msg.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version ${String(msg.v)}`);
  }
  if (typeof msg.kind !== "string" || !KINDS.includes(msg.kind as MessageKind)) {
    throw new Error(`unknown message kind ${String(msg.kind)}`);
  }
  const body = msg.body ?? {};
  if (typeof body !== "object" || Array.isArray(body)) {
    throw new Error("message body must be an object");
  }
  return { v: PROTOCOL_VERSION, kind: msg.kind as MessageKind, body: body as Record<string, unknown> };
}
