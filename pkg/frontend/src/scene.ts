// Scene state and its update log.
//
// The UI is deliberately policy-free: every color, tint, caption and the
// end screen come verbatim from engine messages. applyFeedback copies the
// message into the scene and reports what changed as an ordered event
// list, which is what the renderer animates and what the tests assert.

import type { FeedbackBody, SensorBody } from "./protocol.js";

export interface SceneState {
  color: "green" | "orange" | "red";
  tint: "left" | "right" | "none";
  chameleonHeading: number;
  dashedLine: boolean;
  endScreen: boolean;
  progress: number;
  caption: string | null;
  captionAt: number;
  severityLevel: string;
  leftOnInk: boolean;
  rightOnInk: boolean;
  leftFault: boolean;
  rightFault: boolean;
}

export type SceneEvent =
  | { kind: "color"; value: string }
  | { kind: "tint"; value: string }
  | { kind: "caption"; value: string; cue: string }
  | { kind: "fanfare" };

export function initialScene(): SceneState {
  return {
    color: "green",
    tint: "none",
    chameleonHeading: 0,
    dashedLine: true,
    endScreen: false,
    progress: 0,
    caption: null,
    captionAt: 0,
    severityLevel: "on_track",
    leftOnInk: false,
    rightOnInk: false,
    leftFault: false,
    rightFault: false,
  };
}

const KNOWN_CUES = new Set([
  "keep_going",
  "uh_oh",
  "woah_there",
  "getting_better",
  "stay_on_track",
  "fanfare",
]);

export function applyFeedback(scene: SceneState, body: FeedbackBody): SceneEvent[] {
  const events: SceneEvent[] = [];
  if (body.frame.color !== scene.color) {
    scene.color = body.frame.color;
    events.push({ kind: "color", value: body.frame.color });
  }
  if (body.frame.tint !== scene.tint) {
    scene.tint = body.frame.tint;
    events.push({ kind: "tint", value: body.frame.tint });
  }
  for (const cue of body.cues) {
    if (!KNOWN_CUES.has(cue.kind)) {
      console.warn(`ignoring unknown cue kind ${cue.kind}`);
      continue;
    }
    scene.caption = cue.text;
    scene.captionAt = body.t_ms;
    events.push({ kind: "caption", value: cue.text, cue: cue.kind });
  }
  if (body.frame.end_screen && !scene.endScreen) {
    events.push({ kind: "fanfare" });
  }
  scene.chameleonHeading = body.frame.heading;
  scene.dashedLine = body.frame.dashed;
  scene.endScreen = body.frame.end_screen;
  scene.progress = body.progress;
  scene.severityLevel = body.severity.level;
  return events;
}

export function applySensor(scene: SceneState, body: SensorBody): void {
  scene.leftOnInk = body.left_on_ink;
  scene.rightOnInk = body.right_on_ink;
  scene.leftFault = body.left_fault;
  scene.rightFault = body.right_fault;
}

// Convenience for tests and recorded-script replay: fold a whole script
// and return the concatenated event log.
export function replayScript(scene: SceneState, script: FeedbackBody[]): SceneEvent[] {
  const log: SceneEvent[] = [];
  for (const body of script) {
    log.push(...applyFeedback(scene, body));
  }
  return log;
}
