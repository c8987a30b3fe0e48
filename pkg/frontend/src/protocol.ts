/** Frame types and validation for the live session protocol. */

export const GESTURES = ["Palm", "Peace", "Fist", "C", "L", "Ok", "None"] as const;
export type GestureName = (typeof GESTURES)[number];

export interface PoseUpdate {
  robot_id: number;
  x: number;
  y: number;
  phi: number;
  halted: boolean;
}

export interface SessionConfig {
  dt: number;
  latency: number;
  n_robots: number;
  robot_radius: number;
  x_goal: number;
  grammar_mode: string;
  arena: { width: number; height: number; walls: number[][] };
}

export interface RunSummary {
  completed: boolean;
  completion_time: number | null;
  collisions: { t: number; robot_id: number; wall_index: number }[];
  final_poses: { x: number; y: number; phi: number }[];
}

export type Frame =
  | { kind: "session_config"; seq: number; payload: SessionConfig }
  | { kind: "state_update"; seq: number; payload: { t: number; poses: PoseUpdate[] } }
  | { kind: "gesture_event"; seq: number; payload: { t: number; gesture: GestureName } }
  | {
      kind: "grammar_state";
      seq: number;
      payload: { t: number; mode: string; pending: number[] };
    }
  | {
      kind: "command_applied";
      seq: number;
      payload: { t: number; robot_id: number; command: string; beta: number | null };
    }
  | { kind: "run_summary"; seq: number; payload: RunSummary }
  | { kind: "error"; seq: number; payload: { message: string } };

const KINDS = new Set([
  "session_config",
  "state_update",
  "gesture_event",
  "grammar_state",
  "command_applied",
  "run_summary",
  "error",
]);

/** Parse one inbound frame; null for anything malformed. */
export function parseFrame(raw: string): Frame | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const frame = doc as { kind?: unknown; seq?: unknown; payload?: unknown };
  if (typeof frame.kind !== "string" || !KINDS.has(frame.kind)) return null;
  if (typeof frame.seq !== "number") return null;
  if (typeof frame.payload !== "object" || frame.payload === null) return null;
  if (frame.kind === "state_update") {
    const poses = (frame.payload as { poses?: unknown }).poses;
    if (!Array.isArray(poses)) return null;
  }
  return frame as Frame;
}

/** The only message the console ever sends: a gesture by name. */
export function gestureMessage(gesture: GestureName): string {
  return JSON.stringify({ gesture });
}

export function isGestureName(name: string): name is GestureName {
  return (GESTURES as readonly string[]).includes(name);
}
