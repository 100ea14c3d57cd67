// DOM wiring for the inspector: clip list, three linked views sharing a
// time cursor, annotation editing, save + metrics diff panel.

import { InspectorApi, ApiError } from "./api.js";
import { MarkerSpec, drawTimeView, drawTrajectory, TimeTransform } from "./charts.js";
import { FEET, Foot } from "./model.js";
import {
  ViewState,
  addStrike,
  brushExclude,
  deleteStrike,
  emptyState,
  isDirty,
  loadClip,
  metricsDiff,
  moveStrike,
  resetDraft,
  saveEnabled,
  savedState,
  shadedRanges,
} from "./state.js";

const api = new InspectorApi("");
let state: ViewState = emptyState();
let activeFoot: Foot = "left";
let brushStart: number | null = null;
let dragging: { foot: Foot; frame: number } | null = null;

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

function canvas(id: string): HTMLCanvasElement {
  return $(id) as unknown as HTMLCanvasElement;
}

async function init(): Promise<void> {
  const clips = await api.listClips();
  const list = $("clip-list");
  list.innerHTML = "";
  for (const clip of clips) {
    const item = document.createElement("li");
    item.textContent = `${clip.id} (${clip.duration_s.toFixed(1)} s${clip.has_annotations ? ", annotated" : ""})`;
    item.onclick = () => void selectClip(clip.id);
    list.appendChild(item);
  }
  $("foot-left").onclick = () => setFoot("left");
  $("foot-right").onclick = () => setFoot("right");
  ($("save") as HTMLButtonElement).onclick = () => void save();
  ($("reset") as HTMLButtonElement).onclick = () => {
    state = resetDraft(state);
    render();
  };
  setFoot("left");
}

function setFoot(foot: Foot): void {
  activeFoot = foot;
  $("foot-left").classList.toggle("active", foot === "left");
  $("foot-right").classList.toggle("active", foot === "right");
}

async function selectClip(clipId: string): Promise<void> {
  try {
    const signals = await api.signals(clipId);
    const metrics = await api.metrics(clipId);
    state = loadClip(state, signals, metrics);
    banner(
      signals.segments.ranges.length === 0
        ? signals.segments.note || "no analyzable segment"
        : ""
    );
    render();
  } catch (error) {
    banner(error instanceof ApiError ? error.message : String(error));
  }
}

function banner(message: string): void {
  const el = $("banner");
  el.textContent = message;
  el.style.display = message ? "block" : "none";
}

async function save(): Promise<void> {
  if (!state.clipId || !state.draft || !saveEnabled(state)) return;
  try {
    await api.saveAnnotations(state.clipId, state.draft);
    const metrics = await api.metrics(state.clipId);
    state = savedState(state, metrics);
    banner("");
    render();
  } catch (error) {
    banner(error instanceof ApiError ? `save rejected: ${error.message}` : String(error));
  }
}

// --- rendering -------------------------------------------------------------

let footTransform: TimeTransform | null = null;

function markers(): MarkerSpec[] {
  if (!state.signals || !state.draft) return [];
  const out: MarkerSpec[] = [];
  for (const foot of FEET) {
    for (const frame of state.signals.events[foot].steps) {
      out.push({ frame, kind: "step", foot });
    }
    for (const frame of state.draft.heel_strikes[foot]) {
      out.push({ frame, kind: "strike", foot });
    }
  }
  return out;
}

function render(): void {
  const signals = state.signals;
  if (!signals || !state.draft) return;
  const shaded = shadedRanges(state);
  const cursorIndex =
    state.cursor === null
      ? null
      : Math.max(
          0,
          Math.min(signals.time.length - 1, Math.round(state.cursor / signals.frame_time))
        );

  drawTrajectory(
    canvas("view-trajectory"),
    signals.trajectory,
    cursorIndex,
    (i) => !shaded.some(([s, e]) => i >= s && i <= e)
  );
  footTransform = drawTimeView(canvas("view-feet"), {
    time: signals.time,
    series: [
      { values: signals.foot_height.left, color: "#1668b0", label: "left" },
      { values: signals.foot_height.right, color: "#c23a28", label: "right" },
    ],
    markers: markers(),
    shaded,
    zoom: state.zoom,
    cursor: state.cursor,
    yLabel: `foot height (${signals.spatial_unit})`,
  });
  drawTimeView(canvas("view-knee"), {
    time: signals.time,
    series: [
      { values: signals.knee_angle.left, color: "#1668b0", label: "left" },
      { values: signals.knee_angle.right, color: "#c23a28", label: "right" },
    ],
    markers: [],
    shaded,
    zoom: state.zoom,
    cursor: state.cursor,
    yLabel: "knee flexion (deg)",
  });

  const problems = $("problems");
  problems.innerHTML = "";
  for (const p of state.problems) {
    const li = document.createElement("li");
    li.textContent = p;
    problems.appendChild(li);
  }
  ($("save") as HTMLButtonElement).disabled = !saveEnabled(state);
  $("dirty").textContent = isDirty(state)
    ? state.problems.length
      ? "draft has problems"
      : "unsaved edits"
    : "";

  renderDiff();
}

function renderDiff(): void {
  const tbody = $("diff-body");
  tbody.innerHTML = "";
  for (const row of metricsDiff(state.baseline, state.current)) {
    const tr = document.createElement("tr");
    const fmt = (v: number | null, reason: string | null) =>
      v === null ? (reason ? `— (${reason})` : "—") : v.toPrecision(5);
    const delta =
      row.delta === null ? "" : (row.delta >= 0 ? "+" : "") + row.delta.toPrecision(3);
    tr.innerHTML = `<td>${row.name}</td><td>${fmt(row.before, row.beforeReason)}</td><td>${fmt(
      row.after,
      row.afterReason
    )}</td><td>${delta}</td>`;
    if (row.delta !== null && Math.abs(row.delta) > 1e-12) tr.classList.add("changed");
    tbody.appendChild(tr);
  }
}

// --- pointer interactions on the foot-height view ---------------------------

function frameAt(event: MouseEvent): number | null {
  if (!footTransform || !state.signals) return null;
  const rect = canvas("view-feet").getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * canvas("view-feet").width;
  const t = footTransform.toT(x);
  const frame = Math.round(t / state.signals.frame_time);
  if (frame < 0 || frame >= state.signals.time.length) return null;
  return frame;
}

function nearestStrike(frame: number): { foot: Foot; frame: number } | null {
  if (!state.draft || !state.signals) return null;
  const tolerance = Math.ceil(0.08 / state.signals.frame_time); // 80 ms grab radius
  let best: { foot: Foot; frame: number } | null = null;
  let bestDist = tolerance + 1;
  for (const foot of FEET) {
    for (const s of state.draft.heel_strikes[foot]) {
      const d = Math.abs(s - frame);
      if (d < bestDist) {
        best = { foot, frame: s };
        bestDist = d;
      }
    }
  }
  return best;
}

function wireFeetView(): void {
  const el = canvas("view-feet");
  el.addEventListener("mousedown", (event) => {
    const frame = frameAt(event);
    if (frame === null) return;
    if (event.shiftKey) {
      brushStart = frame;
      return;
    }
    const near = nearestStrike(frame);
    if (near && !event.altKey) {
      dragging = near;
    }
  });
  el.addEventListener("mousemove", (event) => {
    const frame = frameAt(event);
    if (frame === null || !state.signals) return;
    state = { ...state, cursor: frame * state.signals.frame_time };
    if (dragging) {
      state = moveStrike(state, dragging.foot, dragging.frame, frame);
      dragging = { foot: dragging.foot, frame };
    }
    render();
  });
  el.addEventListener("mouseup", (event) => {
    const frame = frameAt(event);
    if (frame === null) {
      dragging = null;
      brushStart = null;
      return;
    }
    if (brushStart !== null) {
      const reason = ($("reason") as HTMLInputElement).value || "excluded by annotator";
      state = brushExclude(state, [Math.min(brushStart, frame), Math.max(brushStart, frame)], reason);
      brushStart = null;
    } else if (dragging) {
      dragging = null;
    } else if (event.altKey) {
      const near = nearestStrike(frame);
      if (near) state = deleteStrike(state, near.foot, near.frame);
    } else {
      state = addStrike(state, activeFoot, frame);
    }
    render();
  });
  el.addEventListener("dblclick", (event) => {
    // double-click zooms to the 4 s around the click; dblclick again resets
    const frame = frameAt(event);
    if (frame === null || !state.signals) return;
    const t = frame * state.signals.frame_time;
    state = {
      ...state,
      zoom: state.zoom
        ? null
        : { t0: Math.max(0, t - 2), t1: Math.min(state.signals.time[state.signals.time.length - 1], t + 2) },
    };
    render();
  });
}

window.addEventListener("load", () => {
  wireFeetView();
  void init();
});
