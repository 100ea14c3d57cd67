"""Local HTTP service backing the clip inspector.

Serves clip listings, per-clip signals (trajectory, foot heights, knee
angles, detected events), recomputed metrics, and accepts annotation
sidecars. Sidecar writes are atomic (temp file + rename) and serialized
per clip; reads are safe to run concurrently.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .bvh import BvhError, MotionClip, parse_bvh_file
from .config import AnalysisConfig
from .kinematics import horizontal_components
from .pipeline import AnalysisResult, analyze_clip, metrics_report_json
from .sidecar import (
    AnnotationSidecar,
    ExcludedRange,
    SidecarError,
    load_sidecar_for,
    sidecar_path_for,
    sidecar_to_dict,
    write_annotations,
)


class ClipSummary(BaseModel):
    id: str
    frames: int
    frame_time: float
    duration_s: float
    has_annotations: bool


class ClipListResponse(BaseModel):
    clips: list[ClipSummary]


class FootEventsModel(BaseModel):
    steps: list[int]
    heel_strikes: Optional[list[int]] = None  # null when drift-excluded
    drift_ratio: float
    heel_provenance: str


class EventsModel(BaseModel):
    left: FootEventsModel
    right: FootEventsModel


class SegmentsModel(BaseModel):
    ranges: list[list[int]]
    reasons: list[str]
    note: str = ""


class ExcludedRangeModel(BaseModel):
    range: list[int] = Field(min_length=2, max_length=2)
    reason: str = ""


class AnnotationModel(BaseModel):
    clip_id: str
    heel_strikes: dict[str, list[int]]
    included_segments: list[list[int]] = []
    excluded_ranges: list[ExcludedRangeModel] = []
    annotator: str = "human"


class SignalsResponse(BaseModel):
    id: str
    frame_time: float
    spatial_unit: str
    time: list[float]
    trajectory: list[list[float]]
    foot_height: dict[str, list[float]]
    knee_angle: dict[str, list[float]]
    events: EventsModel
    segments: SegmentsModel
    annotations: Optional[AnnotationModel] = None


class MetricEntry(BaseModel):
    value: Optional[float]
    available: bool
    reason: Optional[str] = None


class MetricsResponse(BaseModel):
    clip_id: str
    dataset: str
    spatial_unit: str
    metrics: dict[str, MetricEntry]
    notes: dict[str, str]
    diagnostics: dict


class SaveAnnotationsResponse(BaseModel):
    saved: bool
    clip_id: str


class _ClipStore:
    """Parses clips on demand, caching by file modification time."""

    def __init__(self, directory: Path):
        self.directory = directory
        self._cache: dict[str, tuple[float, MotionClip]] = {}
        self._cache_lock = threading.Lock()
        self._write_locks: dict[str, threading.Lock] = {}

    def clip_paths(self) -> dict[str, Path]:
        return {p.stem: p for p in sorted(self.directory.glob("*.bvh"))}

    def path_of(self, clip_id: str) -> Path:
        path = self.clip_paths().get(clip_id)
        if path is None:
            raise HTTPException(status_code=404, detail=f"unknown clip {clip_id!r}")
        return path

    def load(self, clip_id: str) -> MotionClip:
        path = self.path_of(clip_id)
        mtime = path.stat().st_mtime
        with self._cache_lock:
            cached = self._cache.get(clip_id)
            if cached is not None and cached[0] == mtime:
                return cached[1]
        try:
            clip = parse_bvh_file(path)
        except BvhError as exc:
            raise HTTPException(status_code=422, detail=f"clip {clip_id!r}: {exc}") from exc
        with self._cache_lock:
            self._cache[clip_id] = (mtime, clip)
        return clip

    def write_lock(self, clip_id: str) -> threading.Lock:
        with self._cache_lock:
            return self._write_locks.setdefault(clip_id, threading.Lock())


def _annotation_model(sidecar: AnnotationSidecar) -> AnnotationModel:
    return AnnotationModel.model_validate(sidecar_to_dict(sidecar))


def _sidecar_from_model(model: AnnotationModel) -> AnnotationSidecar:
    return AnnotationSidecar(
        clip_id=model.clip_id,
        heel_strikes={
            "left": tuple(model.heel_strikes.get("left", [])),
            "right": tuple(model.heel_strikes.get("right", [])),
        },
        included_segments=tuple((int(s), int(e)) for s, e in model.included_segments),
        excluded_ranges=tuple(
            ExcludedRange(int(r.range[0]), int(r.range[1]), r.reason)
            for r in model.excluded_ranges
        ),
        annotator=model.annotator,
    )


def create_app(
    clip_dir: str | Path,
    config: Optional[AnalysisConfig] = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    clip_dir = Path(clip_dir)
    if not clip_dir.is_dir():
        raise NotADirectoryError(f"clip directory {clip_dir} does not exist")
    config = config or AnalysisConfig()
    store = _ClipStore(clip_dir)
    app = FastAPI(title="agegait inspector service")

    def _analyze(clip_id: str) -> AnalysisResult:
        clip = store.load(clip_id)
        sidecar = load_sidecar_for(store.path_of(clip_id))
        try:
            return analyze_clip(clip, config, sidecar, require_segments=False)
        except (SidecarError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/clips", response_model=ClipListResponse)
    def list_clips() -> ClipListResponse:
        clips = []
        for clip_id, path in store.clip_paths().items():
            clip = store.load(clip_id)
            clips.append(
                ClipSummary(
                    id=clip_id,
                    frames=clip.frame_count,
                    frame_time=clip.frame_time,
                    duration_s=clip.duration,
                    has_annotations=sidecar_path_for(path).exists(),
                )
            )
        return ClipListResponse(clips=clips)

    @app.get("/clips/{clip_id}/signals", response_model=SignalsResponse)
    def clip_signals(clip_id: str) -> SignalsResponse:
        result = _analyze(clip_id)
        clip = result.clip
        n = clip.frame_count
        trajectory = horizontal_components(
            result.fk[config.joints.root].positions, config.up_axis
        )
        heights = result.foot_heights()
        angles = result.knee_angles()
        sidecar = load_sidecar_for(store.path_of(clip_id))
        return SignalsResponse(
            id=clip_id,
            frame_time=clip.frame_time,
            spatial_unit=clip.spatial_unit,
            time=[i * clip.frame_time for i in range(n)],
            trajectory=trajectory.tolist(),
            foot_height={s: heights[s].tolist() for s in ("left", "right")},
            knee_angle={s: angles[s].tolist() for s in ("left", "right")},
            events=EventsModel(
                left=_foot_model(result.events.left),
                right=_foot_model(result.events.right),
            ),
            segments=SegmentsModel(
                ranges=[list(r) for r in result.segments.ranges],
                reasons=list(result.segments.reasons),
                note=result.segments.note,
            ),
            annotations=None if sidecar is None else _annotation_model(sidecar),
        )

    @app.get("/clips/{clip_id}/metrics", response_model=MetricsResponse)
    def clip_metrics(clip_id: str) -> MetricsResponse:
        result = _analyze(clip_id)
        if result.metrics is None:
            raise HTTPException(status_code=422, detail="no analyzable segment")
        return MetricsResponse.model_validate(json.loads(metrics_report_json(result.metrics)))

    @app.put("/clips/{clip_id}/annotations", response_model=SaveAnnotationsResponse)
    def put_annotations(clip_id: str, payload: AnnotationModel) -> SaveAnnotationsResponse:
        clip = store.load(clip_id)
        if payload.clip_id and payload.clip_id != clip_id:
            raise HTTPException(
                status_code=422,
                detail=f"payload clip_id {payload.clip_id!r} does not match {clip_id!r}",
            )
        try:
            sidecar = _sidecar_from_model(payload).with_clip_id(clip_id)
            sidecar.bind(clip.frame_count)
        except SidecarError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

        path = sidecar_path_for(store.path_of(clip_id))
        text = write_annotations(sidecar)
        with store.write_lock(clip_id):
            fd, tmp = tempfile.mkstemp(
                dir=str(path.parent), prefix=path.name, suffix=".tmp"
            )
            try:
                with os.fdopen(fd, "w") as handle:
                    handle.write(text)
                os.replace(tmp, path)  # atomic; last writer wins
            except OSError as exc:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise HTTPException(status_code=507, detail=f"write failed: {exc}") from exc
        return SaveAnnotationsResponse(saved=True, clip_id=clip_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _foot_model(foot) -> FootEventsModel:
    return FootEventsModel(
        steps=list(foot.steps),
        heel_strikes=None if foot.heel_strikes is None else list(foot.heel_strikes),
        drift_ratio=foot.drift_ratio,
        heel_provenance=foot.heel_provenance,
    )
