import { describe, expect, it } from "vitest";

import {
  applyFrame,
  grammarHint,
  initialViewModel,
  recordSend,
  ViewModel,
} from "../src/model.js";
import { Frame, GestureName, parseFrame } from "../src/protocol.js";

import fixture from "./fixtures/session.json";

function fixtureFrames(): Frame[] {
  return fixture.frames.map((f: unknown) => parseFrame(JSON.stringify(f))!)
}

/** Replay the recorded session exactly as the console would see it:
 * frames in order, with the operator's clicks interleaved after the
 * frame they followed. */
function replaySession(): ViewModel {
  const sendsBydSeq = new Map<number, GestureName[]>();
  for (const send of fixture.sends) {
    const list = sendsBydSeq.get(send.after_seq) ?? [];
    list.push(send.gesture as GestureName);
    sendsBydSeq.set(send.after_seq, list);
  }
  let vm = initialViewModel();
  vm = { ...vm, connection: "open" };
  for (const frame of fixtureFrames()) {
    vm = applyFrame(vm, frame);
    for (const gesture of sendsBydSeq.get(frame.seq) ?? []) {
      vm = recordSend(vm, gesture);
    }
  }
  return vm;
}

describe("view model", () => {
  it("tracks robot count and simulation time from state updates", () => {
    let vm = initialViewModel();
    for (const frame of fixtureFrames()) {
      vm = applyFrame(vm, frame);
      if (frame.kind === "state_update") {
        expect(vm.robots).toHaveLength(vm.config?.n_robots ?? 3);
        expect(vm.simTime).toBe(frame.payload.t);
      }
    }
  });

  it("drops stale or duplicate frames", () => {
    const frames = fixtureFrames();
    let vm = initialViewModel();
    for (const frame of frames.slice(0, 10)) vm = applyFrame(vm, frame);
    const snapshot = vm;
    // replaying an old frame changes nothing
    expect(applyFrame(vm, frames[2])).toBe(snapshot);
    expect(applyFrame(vm, frames[9])).toBe(snapshot);
  });

  it("reaches a completed summary with zero collisions", () => {
    const vm = replaySession();
    expect(vm.summary).not.toBeNull();
    expect(vm.summary!.completed).toBe(true);
    expect(vm.summary!.collisions).toHaveLength(0);
  });

  it("grammar indicator follows the server's transition stream", () => {
    const expected: string[] = [];
    for (const frame of fixtureFrames()) {
      if (frame.kind === "grammar_state") expected.push(frame.payload.mode);
    }
    // the recorded Fig.-style run: two full brackets around the opening
    expect(expected).toEqual([
      "Moving", "Stopped", "AwaitModifier", "Stopped", "Moving",
      "Stopped", "AwaitModifier", "Stopped", "Moving",
    ]);
    let vm = initialViewModel();
    const seen: string[] = [];
    for (const frame of fixtureFrames()) {
      const before = vm.grammarMode;
      vm = applyFrame(vm, frame);
      if (vm.grammarMode !== before) seen.push(vm.grammarMode);
    }
    expect(seen).toEqual(expected);
  });

  it("replay is deterministic: same stream, same final view model", () => {
    expect(replaySession()).toEqual(replaySession());
  });

  it("annotates the history ribbon with acceptance and resulting mode", () => {
    const vm = replaySession();
    const clicked = fixture.sends.map((s) => s.gesture);
    expect(vm.history.map((h) => h.gesture)).toEqual(clicked);
    for (const entry of vm.history) {
      expect(entry.accepted).toBe(true);
    }
    // the opening Peace must have produced Moving
    expect(vm.history[0].mode).toBe("Moving");
  });

  it("halted flags surface through state updates", () => {
    let vm = initialViewModel();
    let sawHalted = false;
    let sawMoving = false;
    for (const frame of fixtureFrames()) {
      vm = applyFrame(vm, frame);
      if (vm.robots.length > 0) {
        if (vm.robots.every((r) => r.halted)) sawHalted = true;
        if (vm.robots.every((r) => !r.halted)) sawMoving = true;
      }
    }
    expect(sawHalted).toBe(true);
    expect(sawMoving).toBe(true);
  });

  it("keeps errors visible without corrupting the rest of the state", () => {
    let vm = initialViewModel();
    for (const frame of fixtureFrames().slice(0, 5)) vm = applyFrame(vm, frame);
    const robots = vm.robots;
    vm = applyFrame(vm, {
      kind: "error",
      seq: vm.lastSeq + 1,
      payload: { message: "unknown gesture" },
    });
    expect(vm.lastError).toBe("unknown gesture");
    expect(vm.robots).toBe(robots);
  });

  it("pending step count mirrors the bracket contents", () => {
    let vm = initialViewModel();
    let sawPending = false;
    for (const frame of fixtureFrames()) {
      vm = applyFrame(vm, frame);
      if (frame.kind === "grammar_state" && frame.payload.pending.length > 0) {
        sawPending = true;
        expect(vm.pendingSteps).toBe(frame.payload.pending.length);
      }
    }
    expect(sawPending).toBe(true);
  });
});

describe("grammar hints", () => {
  it("prompts for a modifier in AwaitModifier", () => {
    expect(grammarHint("AwaitModifier")).toContain("C");
    expect(grammarHint("AwaitModifier")).toContain("L");
  });

  it("covers every mode", () => {
    for (const mode of ["Moving", "Stopped", "AwaitModifier"]) {
      expect(grammarHint(mode)).not.toBe("");
    }
  });
});
