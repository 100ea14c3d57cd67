// View state and pure reducers. All annotation editing goes through these
// functions so the editing rules are testable without a DOM.

import { Annotation, Foot, MetricsReport, Signals } from "./model.js";
import { Range, invertRanges, mergeRanges, subtractRange } from "./ranges.js";
import { validateAnnotation } from "./validate.js";

export interface ViewState {
  clipId: string | null;
  frames: number;
  signals: Signals | null;
  draft: Annotation | null;
  /** snapshot of the last persisted draft, for dirty tracking */
  saved: Annotation | null;
  /** metrics snapshot before the pending edits (diff baseline) */
  baseline: MetricsReport | null;
  /** metrics after the latest save */
  current: MetricsReport | null;
  problems: string[];
  zoom: { t0: number; t1: number } | null;
  cursor: number | null; // shared time cursor, seconds
}

export function emptyState(): ViewState {
  return {
    clipId: null,
    frames: 0,
    signals: null,
    draft: null,
    saved: null,
    baseline: null,
    current: null,
    problems: [],
    zoom: null,
    cursor: null,
  };
}

function cloneAnnotation(a: Annotation): Annotation {
  return JSON.parse(JSON.stringify(a));
}

/** Initial draft: saved annotations when present, else the automatic
 * detection results (so edits start from what the analyst sees). */
export function draftFromSignals(signals: Signals): Annotation {
  if (signals.annotations) return cloneAnnotation(signals.annotations);
  return {
    clip_id: signals.id,
    heel_strikes: {
      left: [...(signals.events.left.heel_strikes ?? [])],
      right: [...(signals.events.right.heel_strikes ?? [])],
    },
    included_segments: signals.segments.ranges.map((r) => [...r] as Range),
    excluded_ranges: [],
    annotator: "human",
  };
}

export function loadClip(
  state: ViewState,
  signals: Signals,
  metrics: MetricsReport | null
): ViewState {
  const draft = draftFromSignals(signals);
  return {
    ...emptyState(),
    clipId: signals.id,
    frames: signals.time.length,
    signals,
    draft,
    saved: cloneAnnotation(draft),
    baseline: metrics,
    current: metrics,
    problems: validateAnnotation(draft, signals.time.length),
  };
}

function withDraft(state: ViewState, draft: Annotation): ViewState {
  return {
    ...state,
    draft,
    problems: validateAnnotation(draft, state.frames),
  };
}

export function isDirty(state: ViewState): boolean {
  if (!state.draft || !state.saved) return false;
  return JSON.stringify(state.draft) !== JSON.stringify(state.saved);
}

export function saveEnabled(state: ViewState): boolean {
  return isDirty(state) && state.problems.length === 0;
}

// --- heel-strike editing -------------------------------------------------

export function addStrike(state: ViewState, foot: Foot, frame: number): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  const strikes = draft.heel_strikes[foot];
  if (!strikes.includes(frame)) {
    strikes.push(frame);
    strikes.sort((a, b) => a - b); // stays strictly increasing
  }
  return withDraft(state, draft);
}

export function moveStrike(
  state: ViewState,
  foot: Foot,
  fromFrame: number,
  toFrame: number
): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  const strikes = draft.heel_strikes[foot];
  const at = strikes.indexOf(fromFrame);
  if (at < 0) return state;
  strikes.splice(at, 1);
  if (!strikes.includes(toFrame)) strikes.push(toFrame);
  strikes.sort((a, b) => a - b);
  return withDraft(state, draft);
}

export function deleteStrike(state: ViewState, foot: Foot, frame: number): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  draft.heel_strikes[foot] = draft.heel_strikes[foot].filter((f) => f !== frame);
  return withDraft(state, draft);
}

export function clearFootStrikes(state: ViewState, foot: Foot): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  draft.heel_strikes[foot] = [];
  return withDraft(state, draft);
}

// --- segment editing -----------------------------------------------------

/** Brush out a frame range: removed from the included segments and merged
 * into the exclusion list (overlapping exclusions collapse into one). */
export function brushExclude(
  state: ViewState,
  range: Range,
  reason: string
): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  draft.included_segments = subtractRange(
    draft.included_segments as Range[],
    range
  ) as [number, number][];

  const overlapping: Range[] = [range];
  const kept: typeof draft.excluded_ranges = [];
  const reasons: string[] = reason ? [reason] : [];
  for (const ex of draft.excluded_ranges) {
    const [s, e] = ex.range;
    if (range[0] <= e + 1 && range[1] >= s - 1) {
      overlapping.push(ex.range);
      if (ex.reason) reasons.push(ex.reason);
    } else {
      kept.push(ex);
    }
  }
  const merged = mergeRanges(overlapping);
  for (const m of merged) {
    kept.push({ range: m, reason: [...new Set(reasons)].join("; ") });
  }
  kept.sort((a, b) => a.range[0] - b.range[0]);
  draft.excluded_ranges = kept;
  return withDraft(state, draft);
}

/** Re-include a brushed range (undo of brushExclude within that span). */
export function includeRange(state: ViewState, range: Range): ViewState {
  if (!state.draft) return state;
  const draft = cloneAnnotation(state.draft);
  draft.included_segments = mergeRanges([
    ...(draft.included_segments as Range[]),
    range,
  ]) as [number, number][];
  const next: typeof draft.excluded_ranges = [];
  for (const ex of draft.excluded_ranges) {
    for (const r of subtractRange([ex.range], range)) {
      next.push({ range: r, reason: ex.reason });
    }
  }
  draft.excluded_ranges = next;
  return withDraft(state, draft);
}

export function resetDraft(state: ViewState): ViewState {
  if (!state.saved) return state;
  return withDraft(state, cloneAnnotation(state.saved));
}

// --- save / recompute ----------------------------------------------------

/** After a successful PUT and metrics refetch. The previous metrics stay
 * as the diff baseline so the panel shows the effect of the save. */
export function savedState(state: ViewState, metrics: MetricsReport | null): ViewState {
  if (!state.draft) return state;
  return {
    ...state,
    saved: cloneAnnotation(state.draft),
    baseline: state.current,
    current: metrics,
  };
}

export interface MetricDelta {
  name: string;
  before: number | null;
  after: number | null;
  delta: number | null;
  beforeReason: string | null;
  afterReason: string | null;
}

export function metricsDiff(
  before: MetricsReport | null,
  after: MetricsReport | null
): MetricDelta[] {
  const names = new Set<string>([
    ...Object.keys(before?.metrics ?? {}),
    ...Object.keys(after?.metrics ?? {}),
  ]);
  const out: MetricDelta[] = [];
  for (const name of [...names].sort()) {
    const b = before?.metrics[name];
    const a = after?.metrics[name];
    const bv = b?.value ?? null;
    const av = a?.value ?? null;
    out.push({
      name,
      before: bv,
      after: av,
      delta: bv !== null && av !== null ? av - bv : null,
      beforeReason: b?.reason ?? null,
      afterReason: a?.reason ?? null,
    });
  }
  return out;
}

/** Excluded (shaded) spans for the views: everything not included. */
export function shadedRanges(state: ViewState): Range[] {
  if (!state.draft || state.frames === 0) return [];
  return invertRanges(state.draft.included_segments as Range[], state.frames);
}
