// Inclusive integer frame-range arithmetic shared by drafts and views.

export type Range = [number, number];

/** Sort and merge overlapping (or touching) ranges. */
export function mergeRanges(ranges: Range[]): Range[] {
  const sorted = ranges
    .map((r): Range => [Math.min(r[0], r[1]), Math.max(r[0], r[1])])
    .sort((a, b) => a[0] - b[0]);
  const out: Range[] = [];
  for (const [s, e] of sorted) {
    const last = out[out.length - 1];
    if (last && s <= last[1] + 1) {
      last[1] = Math.max(last[1], e);
    } else {
      out.push([s, e]);
    }
  }
  return out;
}

/** Remove [s, e] from every range, splitting where needed. */
export function subtractRange(ranges: Range[], cut: Range): Range[] {
  const [cs, ce] = [Math.min(cut[0], cut[1]), Math.max(cut[0], cut[1])];
  const out: Range[] = [];
  for (const [s, e] of ranges) {
    if (ce < s || cs > e) {
      out.push([s, e]);
      continue;
    }
    if (cs > s) out.push([s, cs - 1]);
    if (ce < e) out.push([ce + 1, e]);
  }
  return out;
}

/** Complement of `ranges` within [0, frames). */
export function invertRanges(ranges: Range[], frames: number): Range[] {
  const out: Range[] = [];
  let next = 0;
  for (const [s, e] of mergeRanges(ranges)) {
    if (s > next) out.push([next, s - 1]);
    next = Math.max(next, e + 1);
  }
  if (next <= frames - 1) out.push([next, frames - 1]);
  return out;
}

export function totalFrames(ranges: Range[]): number {
  return ranges.reduce((acc, [s, e]) => acc + (e - s + 1), 0);
}

export function rangesEqual(a: Range[], b: Range[]): boolean {
  return a.length === b.length && a.every((r, i) => r[0] === b[i][0] && r[1] === b[i][1]);
}
