// Wiring: WebSocket session, pointer input, render loop.
//
// The engine owns all feedback policy; this file only moves data between
// the socket, the scene state and the canvas.

import { SpeechCuePlayer } from "./audio.js";
import { PointerState, render } from "./draw.js";
import { PoseSource, ViewTransform, fitTransform, pxToMm } from "./pose.js";
import {
  FeedbackBody,
  PathBody,
  SensorBody,
  decodeMessage,
  encodeMessage,
} from "./protocol.js";
import { applyFeedback, applySensor, initialScene } from "./scene.js";

function mustGetCanvas(id: string): HTMLCanvasElement {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing #${id} canvas`);
  }
  return el as HTMLCanvasElement;
}

const canvas = mustGetCanvas("scene");
const context = canvas.getContext("2d");
if (context === null) {
  throw new Error("2d canvas not supported");
}
const ctx: CanvasRenderingContext2D = context;
const statusLine = document.getElementById("status");

const scene = initialScene();
const player = new SpeechCuePlayer();
const poseSource = new PoseSource();
const pointer: PointerState = { x_mm: 0, y_mm: 0, heading_deg: 0, active: false };

let path: PathBody | null = null;
let view: ViewTransform | null = null;
let sessionOver = false;
const sessionStart = performance.now();

function setStatus(text: string): void {
  if (statusLine) {
    statusLine.textContent = text;
  }
}

const params = new URLSearchParams(location.search);
const wsProto = location.protocol === "https:" ? "wss" : "ws";
const socket = new WebSocket(`${wsProto}://${location.host}/session`);

socket.addEventListener("open", () => {
  const body: Record<string, unknown> = {};
  const mode = params.get("mode");
  if (mode === "sensor" || mode === "oracle") {
    body.mode = mode;
  }
  socket.send(encodeMessage("start_session", body));
  setStatus("connected; drag along the dashed line");
});

socket.addEventListener("message", (event) => {
  const message = decodeMessage(String(event.data));
  if (message.kind === "start_session") {
    path = message.body.path as unknown as PathBody;
    view = fitTransform(path.vertices, canvas.width, canvas.height);
    setStatus(`session started (${String(message.body.mode)} mode)`);
  } else if (message.kind === "feedback_update") {
    const events = applyFeedback(scene, message.body as unknown as FeedbackBody);
    for (const ev of events) {
      if (ev.kind === "caption") {
        player.play(ev.cue, ev.value);
      }
    }
  } else if (message.kind === "sensor_update") {
    applySensor(scene, message.body as unknown as SensorBody);
  } else if (message.kind === "device_health") {
    // Reflected in the badge via sensor updates; nothing extra to do.
  } else if (message.kind === "end_session") {
    sessionOver = true;
    pointer.active = false;
    setStatus("session complete");
  }
});

socket.addEventListener("close", () => setStatus("disconnected"));
socket.addEventListener("error", () => setStatus("connection error"));

function pointerMm(event: PointerEvent): [number, number] | null {
  if (view === null) {
    return null;
  }
  const rect = canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) * canvas.width) / rect.width;
  const y = ((event.clientY - rect.top) * canvas.height) / rect.height;
  return pxToMm(view, x, y);
}

canvas.addEventListener("pointermove", (event) => {
  if (sessionOver) {
    return;
  }
  const mm = pointerMm(event);
  if (mm === null) {
    return;
  }
  const [x_mm, y_mm] = mm;
  pointer.x_mm = x_mm;
  pointer.y_mm = y_mm;
  pointer.active = true;
  poseSource.push({ x_mm, y_mm, t_ms: event.timeStamp - sessionStart + 1 });
});

canvas.addEventListener("pointerleave", () => {
  // Pose stream pauses while the pointer is away.
  pointer.active = false;
  poseSource.reset();
});

function frame(now: number): void {
  if (!sessionOver && socket.readyState === WebSocket.OPEN) {
    const pose = poseSource.poll(now);
    if (pose !== null) {
      pointer.heading_deg = pose.heading_deg;
      socket.send(encodeMessage("pose_update", pose));
    }
  }
  if (path !== null && view !== null) {
    render(ctx, scene, path, view, pointer, now);
  }
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
