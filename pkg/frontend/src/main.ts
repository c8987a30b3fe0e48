/** Operator console wiring: socket, buttons, keyboard, render loop. */

import {
  applyFrame,
  grammarHint,
  initialViewModel,
  recordSend,
  ViewModel,
} from "./model.js";
import { GESTURES, GestureName, gestureMessage, parseFrame } from "./protocol.js";
import { render } from "./render.js";

const params = new URLSearchParams(window.location.search);
const serverUrl = params.get("server") ?? "ws://127.0.0.1:8765";

let vm: ViewModel = initialViewModel();

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const grammarEl = document.getElementById("grammar")!;
const hintEl = document.getElementById("hint")!;
const ribbonEl = document.getElementById("ribbon")!;
const summaryEl = document.getElementById("summary")!;
const buttons = new Map<GestureName, HTMLButtonElement>();

const KEYMAP: Record<string, GestureName> = {
  p: "Palm",
  r: "Peace",
  f: "Fist",
  c: "C",
  l: "L",
  o: "Ok",
  n: "None",
};

const ws = new WebSocket(serverUrl);

ws.onopen = () => {
  vm = { ...vm, connection: "open" };
  refreshControls();
};

ws.onclose = () => {
  vm = { ...vm, connection: "closed" };
  refreshControls();
};

ws.onerror = () => {
  vm = { ...vm, connection: "closed" };
  refreshControls();
};

ws.onmessage = (event: MessageEvent) => {
  const frame = parseFrame(String(event.data));
  if (frame === null) {
    console.warn("malformed frame", event.data);
    return;
  }
  vm = applyFrame(vm, frame);
  refreshPanel();
};

function sendGesture(gesture: GestureName): void {
  if (vm.connection !== "open") return;
  ws.send(gestureMessage(gesture));
  vm = recordSend(vm, gesture);
  refreshPanel();
}

function buildButtons(): void {
  const panel = document.getElementById("buttons")!;
  for (const gesture of GESTURES) {
    const button = document.createElement("button");
    button.textContent = gesture;
    button.onclick = () => sendGesture(gesture);
    panel.appendChild(button);
    buttons.set(gesture, button);
  }
  window.addEventListener("keydown", (e) => {
    const gesture = KEYMAP[e.key.toLowerCase()];
    if (gesture && !e.repeat) sendGesture(gesture);
  });
}

function refreshControls(): void {
  statusEl.textContent = vm.connection;
  statusEl.className = `status ${vm.connection}`;
  for (const button of buttons.values()) {
    button.disabled = vm.connection !== "open";
  }
}

function refreshPanel(): void {
  grammarEl.textContent =
    vm.pendingSteps > 0
      ? `${vm.grammarMode} (+${vm.pendingSteps} pending)`
      : vm.grammarMode;
  hintEl.textContent = grammarHint(vm.grammarMode);
  ribbonEl.textContent = vm.history
    .slice(-12)
    .map((h) => {
      const flag = h.accepted ? "" : "?";
      return h.mode ? `${h.gesture}${flag}>${h.mode[0]}` : `${h.gesture}${flag}`;
    })
    .join("  ");
  if (vm.summary) {
    summaryEl.textContent = vm.summary.completed
      ? `run complete at t=${vm.summary.completion_time}s, ` +
        `${vm.summary.collisions.length} collisions`
      : "run incomplete";
  }
  if (vm.lastError) {
    summaryEl.textContent = `server: ${vm.lastError}`;
  }
}

function loop(): void {
  render(ctx, vm);
  requestAnimationFrame(loop);
}

buildButtons();
refreshControls();
loop();
