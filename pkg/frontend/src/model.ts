/** Pure console state: a fold over the inbound frame stream.
 *
 * The view model is rebuilt only through `applyFrame` (plus
 * `recordSend` for the local echo of a clicked gesture), so replaying a
 * recorded session reproduces the identical final state. Frames with a
 * stale sequence number are dropped.
 */

import {
  Frame,
  GestureName,
  PoseUpdate,
  RunSummary,
  SessionConfig,
} from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface HistoryEntry {
  gesture: GestureName;
  accepted: boolean;
  /** grammar mode reached because of this gesture, once known */
  mode: string | null;
}

export interface ViewModel {
  connection: Connection;
  config: SessionConfig | null;
  lastSeq: number;
  simTime: number;
  robots: PoseUpdate[];
  grammarMode: string;
  pendingSteps: number;
  history: HistoryEntry[];
  summary: RunSummary | null;
  lastError: string | null;
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    config: null,
    lastSeq: -1,
    simTime: 0,
    robots: [],
    grammarMode: "Stopped",
    pendingSteps: 0,
    history: [],
    summary: null,
    lastError: null,
  };
}

/** Client-side mirror of the grammar, used for hinting only; the server
 * stays authoritative. */
export function grammarHint(mode: string): string {
  switch (mode) {
    case "Moving":
      return "swarm moving - Palm stops it";
    case "Stopped":
      return "stopped - Peace resumes, Fist opens a cohesion command";
    case "AwaitModifier":
      return "expecting C (contract) or L (expand)";
    default:
      return "";
  }
}

export function applyFrame(vm: ViewModel, frame: Frame): ViewModel {
  if (frame.seq <= vm.lastSeq) {
    return vm; // stale or duplicated; drop
  }
  const next: ViewModel = { ...vm, lastSeq: frame.seq };
  switch (frame.kind) {
    case "session_config":
      next.config = frame.payload;
      next.grammarMode = frame.payload.grammar_mode;
      break;
    case "state_update":
      next.simTime = frame.payload.t;
      next.robots = frame.payload.poses;
      break;
    case "gesture_event": {
      next.history = annotateAccepted(vm.history, frame.payload.gesture);
      break;
    }
    case "grammar_state": {
      next.grammarMode = frame.payload.mode;
      next.pendingSteps = frame.payload.pending.length;
      next.history = annotateMode(next.history, frame.payload.mode);
      break;
    }
    case "command_applied":
      break; // reflected via state_update's halted flags
    case "run_summary":
      next.summary = frame.payload;
      break;
    case "error":
      next.lastError = frame.payload.message;
      break;
  }
  return next;
}

/** Local echo when the operator clicks a gesture button. */
export function recordSend(vm: ViewModel, gesture: GestureName): ViewModel {
  return {
    ...vm,
    history: [...vm.history, { gesture, accepted: false, mode: null }],
  };
}

function annotateAccepted(history: HistoryEntry[], gesture: GestureName): HistoryEntry[] {
  const out = [...history];
  for (let i = out.length - 1; i >= 0; i--) {
    if (out[i].gesture === gesture && !out[i].accepted) {
      out[i] = { ...out[i], accepted: true };
      return out;
    }
  }
  // server-side injection (scripted run being observed): show it anyway
  out.push({ gesture, accepted: true, mode: null });
  return out;
}

function annotateMode(history: HistoryEntry[], mode: string): HistoryEntry[] {
  const out = [...history];
  for (let i = out.length - 1; i >= 0; i--) {
    if (out[i].accepted) {
      if (out[i].mode === null) {
        out[i] = { ...out[i], mode };
      }
      return out;
    }
  }
  return out;
}
