/** Canvas renderer: arena to scale, robot glyphs with heading ticks. */

import { ViewModel } from "./model.js";

const COLORS = ["#2b78e4", "#e07b00", "#1f9d55"];

export function render(ctx: CanvasRenderingContext2D, vm: ViewModel): void {
  const canvas = ctx.canvas;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!vm.config) {
    ctx.fillStyle = "#888";
    ctx.font = "14px sans-serif";
    ctx.fillText("waiting for session_config...", 16, 24);
    return;
  }
  const { width, height, walls } = vm.config.arena;
  const margin = 14;
  const scale = Math.min(
    (canvas.width - 2 * margin) / width,
    (canvas.height - 2 * margin) / height,
  );
  const toPx = (x: number, y: number): [number, number] => [
    margin + x * scale,
    canvas.height / 2 - y * scale,
  ];

  // floor and boundary
  const [ax, ay] = toPx(0, height / 2);
  ctx.fillStyle = "#f7f5ef";
  ctx.fillRect(ax, ay, width * scale, height * scale);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 2;
  ctx.strokeRect(ax, ay, width * scale, height * scale);

  // goal line
  const [gx0, gy0] = toPx(vm.config.x_goal, height / 2);
  const [, gy1] = toPx(vm.config.x_goal, -height / 2);
  ctx.strokeStyle = "#1f9d55";
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  ctx.moveTo(gx0, gy0);
  ctx.lineTo(gx0, gy1);
  ctx.stroke();
  ctx.setLineDash([]);

  // walls
  ctx.fillStyle = "#51463a";
  for (const [cx, cy, sx, sy] of walls) {
    const [wx, wy] = toPx(cx - sx / 2, cy + sy / 2);
    ctx.fillRect(wx, wy, sx * scale, sy * scale);
  }

  // robots
  const r = vm.config.robot_radius * scale;
  for (const robot of vm.robots) {
    const [px, py] = toPx(robot.x, robot.y);
    const color = COLORS[robot.robot_id % COLORS.length];
    ctx.beginPath();
    ctx.arc(px, py, r, 0, 2 * Math.PI);
    ctx.fillStyle = robot.halted ? "#cfcfcf" : color;
    ctx.fill();
    ctx.lineWidth = robot.halted ? 2 : 1;
    ctx.strokeStyle = robot.halted ? "#b33" : "#222";
    ctx.stroke();
    // heading tick (canvas y is flipped)
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + 1.6 * r * Math.cos(robot.phi), py - 1.6 * r * Math.sin(robot.phi));
    ctx.strokeStyle = "#222";
    ctx.stroke();
    ctx.fillStyle = "#222";
    ctx.font = "11px sans-serif";
    ctx.fillText(String(robot.robot_id), px - 3, py - r - 4);
  }

  ctx.fillStyle = "#555";
  ctx.font = "12px monospace";
  ctx.fillText(`t = ${vm.simTime.toFixed(2)} s`, margin, canvas.height - 6);
}
