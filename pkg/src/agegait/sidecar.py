"""Annotation sidecar: human heel-strike marks and segment decisions.

The sidecar is a JSON document stored next to the clip file with an added
`.annotations.json` extension; the clip identifier is the clip file stem.
Frame indices are 0-based. Keeping manual annotations in a versionable
sidecar makes visual-inspection decisions explicit and reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

SIDECAR_SUFFIX = ".annotations.json"

FEET = ("left", "right")
ANNOTATORS = ("auto", "human")


class SidecarError(ValueError):
    """Malformed or inconsistent annotation sidecar."""


@dataclass(frozen=True)
class ExcludedRange:
    start: int
    end: int
    reason: str = ""


@dataclass(frozen=True)
class AnnotationSidecar:
    clip_id: str
    heel_strikes: dict[str, tuple[int, ...]] = field(
        default_factory=lambda: {"left": (), "right": ()}
    )
    included_segments: tuple[tuple[int, int], ...] = ()
    excluded_ranges: tuple[ExcludedRange, ...] = ()
    annotator: str = "human"

    def __post_init__(self):
        if set(self.heel_strikes) != set(FEET):
            raise SidecarError("heel_strikes must have exactly 'left' and 'right' lists")
        if self.annotator not in ANNOTATORS:
            raise SidecarError(f"annotator must be one of {ANNOTATORS}, got {self.annotator!r}")
        for foot in FEET:
            idx = self.heel_strikes[foot]
            if any(not isinstance(i, int) or isinstance(i, bool) for i in idx):
                raise SidecarError(f"{foot} heel-strike indices must be integers")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise SidecarError(f"{foot} heel-strike indices must be strictly increasing")
            if any(i < 0 for i in idx):
                raise SidecarError(f"{foot} heel-strike indices must be non-negative")
        _check_segments(self.included_segments, "included segments")
        _check_segments(tuple((r.start, r.end) for r in self.excluded_ranges), "excluded ranges")

    def bind(self, frame_count: int) -> None:
        """Validate all indices against a clip's frame count."""
        for foot in FEET:
            for i in self.heel_strikes[foot]:
                if i >= frame_count:
                    raise SidecarError(
                        f"{foot} heel-strike index {i} out of bounds for {frame_count} frames"
                    )
        for start, end in self.included_segments:
            if end >= frame_count:
                raise SidecarError(
                    f"segment [{start}, {end}] out of bounds for {frame_count} frames"
                )
        for r in self.excluded_ranges:
            if r.end >= frame_count:
                raise SidecarError(
                    f"excluded range [{r.start}, {r.end}] out of bounds for {frame_count} frames"
                )

    @property
    def has_heel_strikes(self) -> bool:
        return any(self.heel_strikes[f] for f in FEET)

    @property
    def has_segments(self) -> bool:
        return bool(self.included_segments)

    def with_clip_id(self, clip_id: str) -> "AnnotationSidecar":
        return replace(self, clip_id=clip_id)


def _check_segments(segments: tuple[tuple[int, int], ...], what: str) -> None:
    for start, end in segments:
        if not (isinstance(start, int) and isinstance(end, int)):
            raise SidecarError(f"{what} bounds must be integers")
        if start < 0 or end < start:
            raise SidecarError(f"{what}: invalid range [{start}, {end}]")
    for (_, e0), (s1, _) in zip(segments, segments[1:]):
        if s1 <= e0:
            raise SidecarError(f"{what} must be sorted and non-overlapping")


def sidecar_to_dict(sidecar: AnnotationSidecar) -> dict:
    return {
        "clip_id": sidecar.clip_id,
        "heel_strikes": {f: list(sidecar.heel_strikes[f]) for f in FEET},
        "included_segments": [list(s) for s in sidecar.included_segments],
        "excluded_ranges": [
            {"range": [r.start, r.end], "reason": r.reason} for r in sidecar.excluded_ranges
        ],
        "annotator": sidecar.annotator,
    }


def sidecar_from_dict(doc: dict) -> AnnotationSidecar:
    if not isinstance(doc, dict):
        raise SidecarError("sidecar document must be a JSON object")
    try:
        strikes = doc.get("heel_strikes", {})
        return AnnotationSidecar(
            clip_id=str(doc["clip_id"]),
            heel_strikes={f: tuple(int(i) for i in strikes.get(f, [])) for f in FEET},
            included_segments=tuple(
                (int(s), int(e)) for s, e in doc.get("included_segments", [])
            ),
            excluded_ranges=tuple(
                ExcludedRange(int(r["range"][0]), int(r["range"][1]), str(r.get("reason", "")))
                for r in doc.get("excluded_ranges", [])
            ),
            annotator=str(doc.get("annotator", "human")),
        )
    except SidecarError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SidecarError(f"malformed sidecar document: {exc}") from exc


def read_annotations(text: str) -> AnnotationSidecar:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SidecarError(f"sidecar is not valid JSON: {exc}") from exc
    return sidecar_from_dict(doc)


def write_annotations(sidecar: AnnotationSidecar) -> str:
    return json.dumps(sidecar_to_dict(sidecar), indent=2, sort_keys=True) + "\n"


def sidecar_path_for(clip_path: str | Path) -> Path:
    clip_path = Path(clip_path)
    return clip_path.with_name(clip_path.name + SIDECAR_SUFFIX)


def load_sidecar_for(clip_path: str | Path) -> AnnotationSidecar | None:
    path = sidecar_path_for(clip_path)
    if not path.exists():
        return None
    return read_annotations(path.read_text())
