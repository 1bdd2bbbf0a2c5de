// Pointer drag to pose stream.
//
// A mouse has no orientation, so the heading comes from the smoothed
// motion direction (exponential smoothing over ~100 ms). Poses are
// emitted at a fixed cadence while the pointer is actually moving; a
// stationary pointer emits nothing after its first sample, and leaving
// the canvas pauses the stream entirely.

import type { PoseBody } from "./protocol.js";

export interface PointerSample {
  x_mm: number;
  y_mm: number;
  t_ms: number;
}

export class PoseSource {
  private readonly intervalMs: number;
  private readonly smoothingMs: number;
  private last: PointerSample | null = null;
  private vx = 0;
  private vy = 0;
  private heading = 0;
  private lastEmitAt = -Infinity;
  private lastEmitted: PoseBody | null = null;
  private lastTimestamp = -1;

  constructor(intervalMs = 1000 / 30, smoothingMs = 100) {
    this.intervalMs = intervalMs;
    this.smoothingMs = smoothingMs;
  }

  push(sample: PointerSample): void {
    if (this.last !== null) {
      const dt = sample.t_ms - this.last.t_ms;
      if (dt > 0) {
        const ivx = (sample.x_mm - this.last.x_mm) / dt;
        const ivy = (sample.y_mm - this.last.y_mm) / dt;
        const alpha = 1 - Math.exp(-dt / this.smoothingMs);
        this.vx += alpha * (ivx - this.vx);
        this.vy += alpha * (ivy - this.vy);
        if (Math.hypot(this.vx, this.vy) > 1e-6) {
          this.heading =
            ((Math.atan2(this.vy, this.vx) * 180) / Math.PI + 360) % 360;
        }
      }
    }
    this.last = sample;
  }

  /** Forget the trail (pointer left the canvas / new drag started). */
  reset(): void {
    this.last = null;
    this.vx = 0;
    this.vy = 0;
  }

  /** Called from the render loop; returns a pose when one is due. */
  poll(now_ms: number): PoseBody | null {
    if (this.last === null) {
      return null;
    }
    if (now_ms - this.lastEmitAt < this.intervalMs) {
      return null;
    }
    const moved =
      this.lastEmitted === null ||
      this.lastEmitted.x_mm !== this.last.x_mm ||
      this.lastEmitted.y_mm !== this.last.y_mm;
    if (!moved) {
      return null;
    }
    // The engine requires strictly increasing integer timestamps.
    let t = Math.round(this.last.t_ms);
    if (t <= this.lastTimestamp) {
      t = this.lastTimestamp + 1;
    }
    this.lastTimestamp = t;
    this.lastEmitAt = now_ms;
    const pose: PoseBody = {
      x_mm: this.last.x_mm,
      y_mm: this.last.y_mm,
      heading_deg: this.heading,
      t_ms: t,
    };
    this.lastEmitted = pose;
    return pose;
  }
}

// Canvas pixels <-> paper millimetres.
export interface ViewTransform {
  scale: number; // px per mm
  offsetX: number; // px
  offsetY: number;
}

export function fitTransform(
  vertices: [number, number][],
  width: number,
  height: number,
  margin = 40,
): ViewTransform {
  const xs = vertices.map((v) => v[0]);
  const ys = vertices.map((v) => v[1]);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1);
  const spanY = Math.max(maxY - minY, 1);
  const scale = Math.min(
    (width - 2 * margin) / spanX,
    (height - 2 * margin) / spanY,
  );
  return {
    scale,
    offsetX: margin - minX * scale + (width - 2 * margin - spanX * scale) / 2,
    offsetY: margin - minY * scale + (height - 2 * margin - spanY * scale) / 2,
  };
}

export function pxToMm(t: ViewTransform, xPx: number, yPx: number): [number, number] {
  return [(xPx - t.offsetX) / t.scale, (yPx - t.offsetY) / t.scale];
}

export function mmToPx(t: ViewTransform, xMm: number, yMm: number): [number, number] {
  return [xMm * t.scale + t.offsetX, yMm * t.scale + t.offsetY];
}
