// Canvas renderers for the three linked views. No chart library: the
// views need exact control over equal-axis scaling, frame-accurate
// markers, and hit-testing for annotation edits.

import { Range } from "./ranges.js";

export interface SeriesSpec {
  values: number[];
  color: string;
  label: string;
}

export interface MarkerSpec {
  frame: number;
  kind: "step" | "strike";
  foot: "left" | "right";
}

export interface TimeViewOptions {
  time: number[];
  series: SeriesSpec[];
  markers: MarkerSpec[];
  shaded: Range[]; // excluded frame ranges
  zoom: { t0: number; t1: number } | null;
  cursor: number | null;
  yLabel: string;
}

const FOOT_COLOR: Record<string, string> = { left: "#1668b0", right: "#c23a28" };

const PADDING = { left: 46, right: 10, top: 8, bottom: 22 };

export interface TimeTransform {
  toX(t: number): number;
  toT(x: number): number;
  toY(v: number): number;
  t0: number;
  t1: number;
}

export function timeTransform(
  canvas: HTMLCanvasElement,
  options: TimeViewOptions
): TimeTransform {
  const time = options.time;
  const t0 = options.zoom ? options.zoom.t0 : time[0] ?? 0;
  const t1 = options.zoom ? options.zoom.t1 : time[time.length - 1] ?? 1;
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of options.series) {
    for (let i = 0; i < s.values.length; i++) {
      const t = time[i];
      if (t < t0 || t > t1) continue;
      const v = s.values[i];
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!isFinite(lo) || lo === hi) {
    lo = isFinite(lo) ? lo - 1 : 0;
    hi = lo + 2;
  }
  const w = canvas.width - PADDING.left - PADDING.right;
  const h = canvas.height - PADDING.top - PADDING.bottom;
  const span = t1 - t0 || 1;
  return {
    t0,
    t1,
    toX: (t) => PADDING.left + ((t - t0) / span) * w,
    toT: (x) => t0 + ((x - PADDING.left) / w) * span,
    toY: (v) => PADDING.top + (1 - (v - lo) / (hi - lo)) * h,
  };
}

export function drawTimeView(canvas: HTMLCanvasElement, options: TimeViewOptions): TimeTransform {
  const ctx = canvas.getContext("2d")!;
  const tr = timeTransform(canvas, options);
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  // excluded spans first, underneath everything
  ctx.fillStyle = "rgba(160, 160, 160, 0.25)";
  const dt = options.time.length > 1 ? options.time[1] - options.time[0] : 0;
  for (const [s, e] of options.shaded) {
    const x0 = tr.toX(options.time[s] ?? 0);
    const x1 = tr.toX((options.time[e] ?? 0) + dt);
    ctx.fillRect(x0, PADDING.top, x1 - x0, canvas.height - PADDING.top - PADDING.bottom);
  }

  ctx.strokeStyle = "#999";
  ctx.strokeRect(PADDING.left, PADDING.top, canvas.width - PADDING.left - PADDING.right, canvas.height - PADDING.top - PADDING.bottom);

  for (const s of options.series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < s.values.length; i++) {
      const t = options.time[i];
      if (t < tr.t0 || t > tr.t1) {
        pen = false;
        continue;
      }
      const x = tr.toX(t);
      const y = tr.toY(s.values[i]);
      if (pen) ctx.lineTo(x, y);
      else ctx.moveTo(x, y);
      pen = true;
    }
    ctx.stroke();
  }

  for (const marker of options.markers) {
    const t = options.time[marker.frame];
    if (t === undefined || t < tr.t0 || t > tr.t1) continue;
    const x = tr.toX(t);
    ctx.strokeStyle = FOOT_COLOR[marker.foot];
    ctx.lineWidth = marker.kind === "strike" ? 1.6 : 1.0;
    if (marker.kind === "step") {
      // small cross near the top
      const y = PADDING.top + 12;
      ctx.beginPath();
      ctx.moveTo(x - 4, y - 4);
      ctx.lineTo(x + 4, y + 4);
      ctx.moveTo(x - 4, y + 4);
      ctx.lineTo(x + 4, y - 4);
      ctx.stroke();
    } else {
      ctx.beginPath();
      ctx.moveTo(x, PADDING.top);
      ctx.lineTo(x, canvas.height - PADDING.bottom);
      ctx.stroke();
    }
  }

  if (options.cursor !== null && options.cursor >= tr.t0 && options.cursor <= tr.t1) {
    ctx.strokeStyle = "#222";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    const x = tr.toX(options.cursor);
    ctx.moveTo(x, PADDING.top);
    ctx.lineTo(x, canvas.height - PADDING.bottom);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(options.yLabel, 4, 14);
  ctx.fillText(`${tr.t0.toFixed(2)}s`, PADDING.left, canvas.height - 6);
  const endLabel = `${tr.t1.toFixed(2)}s`;
  ctx.fillText(endLabel, canvas.width - PADDING.right - ctx.measureText(endLabel).width, canvas.height - 6);
  return tr;
}

/** Planar path with equal units on both axes; optional cursor dot. */
export function drawTrajectory(
  canvas: HTMLCanvasElement,
  points: [number, number][],
  cursorIndex: number | null,
  includedMask: ((index: number) => boolean) | null
): void {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!points.length) return;
  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const [x, y] of points) {
    if (x < xLo) xLo = x;
    if (x > xHi) xHi = x;
    if (y < yLo) yLo = y;
    if (y > yHi) yHi = y;
  }
  const pad = 14;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  // equal units on both axes
  const scale = Math.min(w / Math.max(xHi - xLo, 1e-9), h / Math.max(yHi - yLo, 1e-9));
  const cx = (xLo + xHi) / 2;
  const cy = (yLo + yHi) / 2;
  const toX = (x: number) => canvas.width / 2 + (x - cx) * scale;
  const toY = (y: number) => canvas.height / 2 - (y - cy) * scale;

  for (let i = 1; i < points.length; i++) {
    ctx.strokeStyle = includedMask && !includedMask(i) ? "#bbb" : "#1668b0";
    ctx.beginPath();
    ctx.moveTo(toX(points[i - 1][0]), toY(points[i - 1][1]));
    ctx.lineTo(toX(points[i][0]), toY(points[i][1]));
    ctx.stroke();
  }
  if (cursorIndex !== null && points[cursorIndex]) {
    ctx.fillStyle = "#c23a28";
    ctx.beginPath();
    ctx.arc(toX(points[cursorIndex][0]), toY(points[cursorIndex][1]), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}
