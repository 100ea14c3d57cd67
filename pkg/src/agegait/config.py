"""Analysis configuration: joint-name mapping and every tunable threshold.

Clip skeletons name joints differently across datasets, so the hip / knee /
ankle / foot mapping is configuration, never inferred. All detection
thresholds live here with their defaults so a single file documents the
whole analysis.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .bvh import Skeleton


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class JointMap:
    root: str = "Hips"
    left_hip: str = "LeftHip"
    left_knee: str = "LeftKnee"
    left_ankle: str = "LeftAnkle"
    left_foot: str = "LeftFoot"
    right_hip: str = "RightHip"
    right_knee: str = "RightKnee"
    right_ankle: str = "RightAnkle"
    right_foot: str = "RightFoot"

    def side(self, name: str) -> tuple[str, str, str, str]:
        if name == "left":
            return (self.left_hip, self.left_knee, self.left_ankle, self.left_foot)
        return (self.right_hip, self.right_knee, self.right_ankle, self.right_foot)

    def all_names(self) -> tuple[str, ...]:
        return (
            self.root,
            self.left_hip,
            self.left_knee,
            self.left_ankle,
            self.left_foot,
            self.right_hip,
            self.right_knee,
            self.right_ankle,
            self.right_foot,
        )


@dataclass(frozen=True)
class AnalysisConfig:
    joints: JointMap = field(default_factory=JointMap)
    up_axis: str = "Y"
    # step counting
    prominence_frac: float = 0.25
    min_separation_s: float = 0.4
    # heel strikes / ground drift
    drift_threshold: float = 0.2
    descent_frac: float = 0.05
    # segment selection
    smoothing_window_s: float = 0.25
    turn_rate_limit_deg_s: float = 30.0
    turn_window_s: float = 2.0
    turn_window_max_deg: float = 45.0
    min_segment_s: float = 1.5
    # gait speed windows
    speed_window_s: float = 1.0
    speed_hop_s: float = 0.5
    # variability / comparison
    min_cycles_for_variability: int = 10
    tie_tolerance: float = 0.02
    # protocol comparability of the old/normative pair
    trajectory_comparable: bool = True
    cadence_comparable: bool = True
    # foot-height signal source
    use_end_sites: bool = False
    # pairing identifier (dataset / protocol label)
    dataset: str = ""

    def __post_init__(self):
        positive = (
            "prominence_frac",
            "min_separation_s",
            "drift_threshold",
            "descent_frac",
            "smoothing_window_s",
            "turn_rate_limit_deg_s",
            "turn_window_s",
            "turn_window_max_deg",
            "min_segment_s",
            "speed_window_s",
            "speed_hop_s",
            "tie_tolerance",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.min_cycles_for_variability < 1:
            raise ConfigError("min_cycles_for_variability must be at least 1")
        if self.up_axis not in ("X", "Y", "Z"):
            raise ConfigError(f"up_axis must be X, Y or Z, got {self.up_axis!r}")

    def bind(self, skeleton: Skeleton) -> None:
        """Check every mapped joint name against a clip's skeleton."""
        missing = [n for n in self.joints.all_names() if n not in skeleton.name_to_index]
        if missing:
            raise ConfigError(
                f"joint mapping names not present in skeleton: {', '.join(missing)}"
            )

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["joints"] = asdict(self.joints)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "AnalysisConfig":
        doc = dict(doc)
        joints = doc.pop("joints", {})
        unknown = set(doc) - {f.name for f in cls.__dataclass_fields__.values()}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        bad_joint_keys = set(joints) - {f for f in JointMap.__dataclass_fields__}
        if bad_joint_keys:
            raise ConfigError(f"unknown joint mapping keys: {sorted(bad_joint_keys)}")
        return cls(joints=JointMap(**joints), **doc)

    def with_overrides(self, **kwargs) -> "AnalysisConfig":
        return replace(self, **kwargs)


def load_config(path: str | Path) -> AnalysisConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    try:
        return AnalysisConfig.from_dict(doc)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def save_config(config: AnalysisConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
