import { describe, expect, it } from "vitest";

import { Annotation, MetricsReport, Signals } from "../src/model.js";
import {
  addStrike,
  brushExclude,
  clearFootStrikes,
  deleteStrike,
  draftFromSignals,
  emptyState,
  isDirty,
  loadClip,
  metricsDiff,
  moveStrike,
  resetDraft,
  saveEnabled,
  savedState,
  shadedRanges,
} from "../src/state.js";

const FRAMES = 600;

function signalsFixture(annotations: Annotation | null = null): Signals {
  const time = Array.from({ length: FRAMES }, (_, i) => i / 60);
  return {
    id: "walk",
    frame_time: 1 / 60,
    spatial_unit: "unknown",
    time,
    trajectory: time.map((t) => [t, 0] as [number, number]),
    foot_height: { left: time.map(() => 0), right: time.map(() => 0) },
    knee_angle: { left: time.map(() => 0), right: time.map(() => 0) },
    events: {
      left: { steps: [30, 150, 270], heel_strikes: [60, 180, 300], drift_ratio: 0, heel_provenance: "auto" },
      right: { steps: [90, 210], heel_strikes: [120, 240], drift_ratio: 0, heel_provenance: "auto" },
    },
    segments: { ranges: [[10, 580]], reasons: ["steady"], note: "" },
    annotations,
  };
}

function metricsFixture(cadence: number): MetricsReport {
  return {
    clip_id: "walk",
    dataset: "",
    spatial_unit: "unknown",
    metrics: {
      cadence: { value: cadence, available: true, reason: null },
      step_length_mean: { value: 0.6, available: true, reason: null },
    },
    notes: {},
    diagnostics: {},
  };
}

function freshState() {
  return loadClip(emptyState(), signalsFixture(), metricsFixture(110));
}

describe("draft initialization", () => {
  it("starts from automatic events when no sidecar exists", () => {
    const draft = draftFromSignals(signalsFixture());
    expect(draft.heel_strikes.left).toEqual([60, 180, 300]);
    expect(draft.included_segments).toEqual([[10, 580]]);
  });

  it("starts from saved annotations when present", () => {
    const saved: Annotation = {
      clip_id: "walk",
      heel_strikes: { left: [5], right: [] },
      included_segments: [[0, 100]],
      excluded_ranges: [],
      annotator: "human",
    };
    const draft = draftFromSignals(signalsFixture(saved));
    expect(draft.heel_strikes.left).toEqual([5]);
  });

  it("loadClip is clean and save-disabled", () => {
    const state = freshState();
    expect(isDirty(state)).toBe(false);
    expect(saveEnabled(state)).toBe(false);
    expect(state.problems).toEqual([]);
  });
});

describe("heel-strike editing", () => {
  it("inserting between existing marks keeps the list strictly increasing", () => {
    const state = addStrike(freshState(), "left", 120 + 1); // between 60 and 180
    expect(state.draft!.heel_strikes.left).toEqual([60, 121, 180, 300]);
    expect(state.problems).toEqual([]);
    expect(saveEnabled(state)).toBe(true);
  });

  it("adding a duplicate is a no-op", () => {
    const state = addStrike(freshState(), "left", 180);
    expect(state.draft!.heel_strikes.left).toEqual([60, 180, 300]);
    expect(isDirty(state)).toBe(false);
  });

  it("moving a mark re-sorts", () => {
    const state = moveStrike(freshState(), "left", 60, 200);
    expect(state.draft!.heel_strikes.left).toEqual([180, 200, 300]);
  });

  it("deleting removes exactly one mark", () => {
    const state = deleteStrike(freshState(), "right", 120);
    expect(state.draft!.heel_strikes.right).toEqual([240]);
  });

  it("out-of-bounds edits block saving with a message", () => {
    const state = addStrike(freshState(), "left", FRAMES + 50);
    expect(state.problems.length).toBeGreaterThan(0);
    expect(saveEnabled(state)).toBe(false);
  });

  it("reset returns to the saved draft", () => {
    let state = addStrike(freshState(), "left", 90);
    state = resetDraft(state);
    expect(isDirty(state)).toBe(false);
  });
});

describe("segment brushing", () => {
  it("splits included segments around the brushed range", () => {
    const state = brushExclude(freshState(), [100, 200], "turn");
    expect(state.draft!.included_segments).toEqual([[10, 99], [201, 580]]);
    expect(state.draft!.excluded_ranges).toEqual([{ range: [100, 200], reason: "turn" }]);
    expect(state.problems).toEqual([]);
  });

  it("overlapping brushes merge into one exclusion", () => {
    let state = brushExclude(freshState(), [100, 200], "turn");
    state = brushExclude(state, [150, 260], "stumble");
    expect(state.draft!.excluded_ranges).toHaveLength(1);
    expect(state.draft!.excluded_ranges[0].range).toEqual([100, 260]);
    expect(state.draft!.excluded_ranges[0].reason).toContain("turn");
    expect(state.draft!.excluded_ranges[0].reason).toContain("stumble");
    expect(state.draft!.included_segments).toEqual([[10, 99], [261, 580]]);
  });

  it("shadedRanges covers everything outside the included segments", () => {
    const state = brushExclude(freshState(), [100, 200], "");
    expect(shadedRanges(state)).toEqual([[0, 9], [100, 200], [581, 599]]);
  });
});

describe("save and metrics diff", () => {
  it("no edits produce zero deltas", () => {
    const state = freshState();
    const rows = metricsDiff(state.baseline, state.current);
    for (const row of rows) {
      expect(row.delta).toBe(0);
    }
  });

  it("savedState shifts the baseline so the panel shows the change", () => {
    let state = brushExclude(freshState(), [300, 580], "trim");
    state = savedState(state, metricsFixture(96));
    const cadence = metricsDiff(state.baseline, state.current).find(
      (r) => r.name === "cadence"
    )!;
    expect(cadence.before).toBe(110);
    expect(cadence.after).toBe(96);
    expect(cadence.delta).toBeCloseTo(-14);
    expect(isDirty(state)).toBe(false);
  });

  it("metrics that lose availability surface their reason", () => {
    let state = clearFootStrikes(freshState(), "left");
    expect(saveEnabled(state)).toBe(true);
    const degraded: MetricsReport = {
      ...metricsFixture(110),
      metrics: {
        cadence: { value: 110, available: true, reason: null },
        step_length_mean: { value: null, available: false, reason: "data scarcity" },
      },
    };
    state = savedState(state, degraded);
    const row = metricsDiff(state.baseline, state.current).find(
      (r) => r.name === "step_length_mean"
    )!;
    expect(row.before).toBe(0.6);
    expect(row.after).toBeNull();
    expect(row.afterReason).toBe("data scarcity");
  });
});
