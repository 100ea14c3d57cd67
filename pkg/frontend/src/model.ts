// Types mirroring the inspector service's JSON payloads.

export interface ClipSummary {
  id: string;
  frames: number;
  frame_time: number;
  duration_s: number;
  has_annotations: boolean;
}

export interface FootEvents {
  steps: number[];
  heel_strikes: number[] | null; // null when drift-excluded
  drift_ratio: number;
  heel_provenance: string;
}

export interface Segments {
  ranges: [number, number][];
  reasons: string[];
  note: string;
}

export interface Signals {
  id: string;
  frame_time: number;
  spatial_unit: string;
  time: number[];
  trajectory: [number, number][];
  foot_height: { left: number[]; right: number[] };
  knee_angle: { left: number[]; right: number[] };
  events: { left: FootEvents; right: FootEvents };
  segments: Segments;
  annotations: Annotation | null;
}

export interface ExcludedRange {
  range: [number, number];
  reason: string;
}

export interface Annotation {
  clip_id: string;
  heel_strikes: { left: number[]; right: number[] };
  included_segments: [number, number][];
  excluded_ranges: ExcludedRange[];
  annotator: string;
}

export interface MetricEntry {
  value: number | null;
  available: boolean;
  reason: string | null;
}

export interface MetricsReport {
  clip_id: string;
  dataset: string;
  spatial_unit: string;
  metrics: Record<string, MetricEntry>;
  notes: Record<string, string>;
  diagnostics: Record<string, unknown>;
}

export type Foot = "left" | "right";
export const FEET: Foot[] = ["left", "right"];
