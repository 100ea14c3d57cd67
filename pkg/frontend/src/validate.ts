// Client-side draft validation; must match the service's rules so a save
// the client allows is a save the server accepts.

import { Annotation, FEET } from "./model.js";

export function validateAnnotation(draft: Annotation, frames: number): string[] {
  const problems: string[] = [];
  for (const foot of FEET) {
    const strikes = draft.heel_strikes[foot];
    for (let i = 0; i < strikes.length; i++) {
      const v = strikes[i];
      if (!Number.isInteger(v)) problems.push(`${foot} heel-strike ${v} is not an integer frame`);
      if (v < 0 || v >= frames) problems.push(`${foot} heel-strike ${v} out of bounds (0..${frames - 1})`);
      if (i > 0 && strikes[i] <= strikes[i - 1]) {
        problems.push(`${foot} heel-strikes must be strictly increasing`);
        break;
      }
    }
  }
  problems.push(...checkRanges(draft.included_segments, frames, "included segment"));
  problems.push(
    ...checkRanges(
      draft.excluded_ranges.map((r) => r.range),
      frames,
      "excluded range"
    )
  );
  if (draft.annotator !== "auto" && draft.annotator !== "human") {
    problems.push(`annotator must be auto or human, got ${draft.annotator}`);
  }
  return problems;
}

function checkRanges(ranges: [number, number][], frames: number, what: string): string[] {
  const problems: string[] = [];
  for (const [s, e] of ranges) {
    if (!Number.isInteger(s) || !Number.isInteger(e)) {
      problems.push(`${what} [${s}, ${e}] bounds must be integers`);
    }
    if (s < 0 || e < s) problems.push(`${what} [${s}, ${e}] is not a valid range`);
    if (e >= frames) problems.push(`${what} [${s}, ${e}] out of bounds (0..${frames - 1})`);
  }
  for (let i = 1; i < ranges.length; i++) {
    if (ranges[i][0] <= ranges[i - 1][1]) {
      problems.push(`${what}s must be sorted and non-overlapping`);
      break;
    }
  }
  return problems;
}
