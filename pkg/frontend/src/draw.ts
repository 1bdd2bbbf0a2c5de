// Canvas rendering of the scene. Pure draw-from-state: nothing here
// decides colors or timing, it all comes out of SceneState.

import type { PathBody } from "./protocol.js";
import type { SceneState } from "./scene.js";
import { ViewTransform, mmToPx } from "./pose.js";

const COLORS: Record<string, string> = {
  green: "#3dab5e",
  orange: "#f59e0b",
  red: "#dc2626",
};

const TINTS: Record<string, string> = {
  green: "rgba(61, 171, 94, 0.25)",
  orange: "rgba(245, 158, 11, 0.30)",
  red: "rgba(220, 38, 38, 0.30)",
};

export interface PointerState {
  x_mm: number;
  y_mm: number;
  heading_deg: number;
  active: boolean;
}

export function render(
  ctx: CanvasRenderingContext2D,
  scene: SceneState,
  path: PathBody,
  view: ViewTransform,
  pointer: PointerState,
  now_ms: number,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#fdfbf5";
  ctx.fillRect(0, 0, width, height);

  if (scene.tint !== "none" && !scene.endScreen) {
    // The tinted half names the side the cut has drifted toward.
    ctx.fillStyle = TINTS[scene.color] ?? TINTS.orange;
    if (scene.tint === "left") {
      ctx.fillRect(0, 0, width / 2, height);
    } else {
      ctx.fillRect(width / 2, 0, width / 2, height);
    }
  }

  if (scene.dashedLine) {
    drawGuideLine(ctx, path, view);
  }
  if (pointer.active && !scene.endScreen) {
    drawScissors(ctx, view, pointer);
  }
  drawChameleon(ctx, scene, width - 90, 78);
  drawProgress(ctx, scene, width);
  drawHealthBadge(ctx, scene, width);
  if (scene.caption && now_ms - scene.captionAt < 4000) {
    drawCaption(ctx, scene.caption, width, height);
  }
  if (scene.endScreen) {
    drawEndScreen(ctx, width, height, now_ms);
  }
}

function drawGuideLine(
  ctx: CanvasRenderingContext2D,
  path: PathBody,
  view: ViewTransform,
): void {
  // Ink stripe, to scale.
  ctx.lineJoin = "round";
  ctx.lineCap = "round";
  ctx.strokeStyle = "rgba(40, 40, 40, 0.18)";
  ctx.lineWidth = Math.max(path.ink_width_mm * view.scale, 2);
  tracePath(ctx, path, view);
  ctx.stroke();
  // The dashed center line the learner follows.
  ctx.strokeStyle = "#222";
  ctx.lineWidth = 2;
  ctx.setLineDash([10, 8]);
  tracePath(ctx, path, view);
  ctx.stroke();
  ctx.setLineDash([]);
}

function tracePath(
  ctx: CanvasRenderingContext2D,
  path: PathBody,
  view: ViewTransform,
): void {
  ctx.beginPath();
  path.vertices.forEach(([x, y], i) => {
    const [px, py] = mmToPx(view, x, y);
    if (i === 0) {
      ctx.moveTo(px, py);
    } else {
      ctx.lineTo(px, py);
    }
  });
}

function drawScissors(
  ctx: CanvasRenderingContext2D,
  view: ViewTransform,
  pointer: PointerState,
): void {
  const [px, py] = mmToPx(view, pointer.x_mm, pointer.y_mm);
  const angle = (pointer.heading_deg * Math.PI) / 180;
  ctx.save();
  ctx.translate(px, py);
  ctx.rotate(angle);
  ctx.strokeStyle = "#333";
  ctx.lineWidth = 3;
  // Two open blades ahead of the pivot, two finger loops behind.
  ctx.beginPath();
  ctx.moveTo(22, -7);
  ctx.lineTo(-4, 0);
  ctx.lineTo(22, 7);
  ctx.stroke();
  for (const sign of [-1, 1]) {
    ctx.beginPath();
    ctx.ellipse(-14, sign * 6, 7, 5, 0, 0, Math.PI * 2);
    ctx.stroke();
  }
  ctx.fillStyle = "#333";
  ctx.beginPath();
  ctx.arc(0, 0, 3, 0, Math.PI * 2);
  ctx.fill();
  ctx.restore();
}

function drawChameleon(
  ctx: CanvasRenderingContext2D,
  scene: SceneState,
  cx: number,
  cy: number,
): void {
  const color = COLORS[scene.color] ?? COLORS.green;
  const angle = (scene.chameleonHeading * Math.PI) / 180;
  ctx.save();
  ctx.translate(cx, cy);
  ctx.rotate(angle);
  // Body, curled tail, head and eye: a friendly blob, oriented like the
  // scissors so the learner can match them up.
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.ellipse(0, 0, 30, 16, 0, 0, Math.PI * 2);
  ctx.fill();
  ctx.strokeStyle = color;
  ctx.lineWidth = 6;
  ctx.beginPath();
  ctx.arc(-32, -4, 9, Math.PI * 0.2, Math.PI * 1.5);
  ctx.stroke();
  ctx.beginPath();
  ctx.arc(32, -4, 10, 0, Math.PI * 2);
  ctx.fill();
  ctx.fillStyle = "#fff";
  ctx.beginPath();
  ctx.arc(35, -7, 3.5, 0, Math.PI * 2);
  ctx.fill();
  ctx.fillStyle = "#222";
  ctx.beginPath();
  ctx.arc(36, -7, 1.6, 0, Math.PI * 2);
  ctx.fill();
  ctx.restore();
}

function drawProgress(
  ctx: CanvasRenderingContext2D,
  scene: SceneState,
  width: number,
): void {
  const w = width - 240;
  ctx.fillStyle = "#e5e7eb";
  ctx.fillRect(20, 20, w, 10);
  ctx.fillStyle = COLORS[scene.color] ?? COLORS.green;
  ctx.fillRect(20, 20, w * Math.min(scene.progress, 1), 10);
  ctx.strokeStyle = "#9ca3af";
  ctx.strokeRect(20, 20, w, 10);
}

function drawHealthBadge(
  ctx: CanvasRenderingContext2D,
  scene: SceneState,
  width: number,
): void {
  const faulty = scene.leftFault || scene.rightFault;
  ctx.font = "12px sans-serif";
  ctx.textAlign = "left";
  const label = faulty
    ? `sensor fault: ${[scene.leftFault ? "left" : "", scene.rightFault ? "right" : ""]
        .filter(Boolean)
        .join("+")}`
    : "sensors ok";
  ctx.fillStyle = faulty ? "#dc2626" : "#6b7280";
  ctx.fillText(label, 20, 50);
  for (const [i, on] of [scene.leftOnInk, scene.rightOnInk].entries()) {
    ctx.fillStyle = on ? "#111" : "#d1d5db";
    ctx.beginPath();
    ctx.arc(110 + i * 16, 46, 5, 0, Math.PI * 2);
    ctx.fill();
  }
}

function drawCaption(
  ctx: CanvasRenderingContext2D,
  caption: string,
  width: number,
  height: number,
): void {
  ctx.font = "bold 22px sans-serif";
  ctx.textAlign = "center";
  ctx.fillStyle = "rgba(20, 20, 20, 0.85)";
  ctx.fillText(caption, width / 2, height - 28);
}

function drawEndScreen(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  now_ms: number,
): void {
  ctx.fillStyle = "rgba(61, 171, 94, 0.92)";
  ctx.fillRect(0, 0, width, height);
  ctx.fillStyle = "#fff";
  ctx.font = "bold 42px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText("All done!", width / 2, height / 2 - 10);
  ctx.font = "20px sans-serif";
  ctx.fillText("You followed the line to the end.", width / 2, height / 2 + 28);
  // Confetti wiggle so the fanfare moment visibly celebrates.
  for (let i = 0; i < 40; i++) {
    const phase = (now_ms / 700 + i * 0.61) % 1;
    const x = ((i * 97) % width) + Math.sin(now_ms / 300 + i) * 12;
    const y = phase * height;
    ctx.fillStyle = ["#fde047", "#fb923c", "#60a5fa", "#f472b6"][i % 4];
    ctx.fillRect(x, y, 7, 10);
  }
}
