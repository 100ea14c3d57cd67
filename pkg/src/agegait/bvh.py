"""BVH motion-capture parsing, serialization, and unit rescaling.

The parser accepts the two-section HIERARCHY/MOTION layout, tab or space
separators, CRLF or LF line endings, and joint names containing spaces.
All numbers are read as 64-bit floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional

import numpy as np

POSITION_CHANNELS = ("Xposition", "Yposition", "Zposition")
ROTATION_CHANNELS = ("Xrotation", "Yrotation", "Zrotation")
VALID_CHANNELS = POSITION_CHANNELS + ROTATION_CHANNELS

SPATIAL_UNITS = ("unknown", "meters", "centimeters", "dataset-specific")


class BvhError(ValueError):
    """Invalid BVH content or an operation violating clip invariants."""


class BvhSyntaxError(BvhError):
    """Malformed BVH text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, eq=False)
class Joint:
    """One joint of the hierarchy. `parent` is an index into Skeleton.joints."""

    name: str
    parent: Optional[int]
    offset: np.ndarray
    channels: tuple[str, ...]
    end_site: Optional[np.ndarray] = None

    @property
    def rotation_order(self) -> str:
        """Axis letters of the rotation channels in declared order, e.g. 'ZXY'."""
        return "".join(c[0] for c in self.channels if c.endswith("rotation"))

    def validate(self) -> None:
        if len(self.offset) != 3 or not np.all(np.isfinite(self.offset)):
            raise BvhError(f"joint {self.name!r}: offset must be a finite 3-vector")
        for c in self.channels:
            if c not in VALID_CHANNELS:
                raise BvhError(f"joint {self.name!r}: unknown channel {c!r}")
        if len(set(self.channels)) != len(self.channels):
            raise BvhError(f"joint {self.name!r}: duplicate channels")
        n_rot = len(self.rotation_order)
        if n_rot not in (0, 3):
            raise BvhError(
                f"joint {self.name!r}: {n_rot} rotation channels; a joint must "
                "declare either none or a full XYZ permutation"
            )
        if self.end_site is not None and (
            len(self.end_site) != 3 or not np.all(np.isfinite(self.end_site))
        ):
            raise BvhError(f"joint {self.name!r}: end-site offset must be a finite 3-vector")


@dataclass(frozen=True, eq=False)
class Skeleton:
    """Joint hierarchy in declaration (topological) order; joints[0] is the root."""

    joints: tuple[Joint, ...]

    def __post_init__(self):
        if not self.joints:
            raise BvhError("skeleton has no joints")
        names = [j.name for j in self.joints]
        if len(set(names)) != len(names):
            raise BvhError("joint names must be unique within a skeleton")
        roots = [i for i, j in enumerate(self.joints) if j.parent is None]
        if roots != [0]:
            raise BvhError("skeleton must have exactly one root joint, first in the list")
        for i, j in enumerate(self.joints[1:], start=1):
            if j.parent is None or not 0 <= j.parent < i:
                raise BvhError(f"joint {j.name!r}: parent must precede joint in the list")
        for j in self.joints:
            j.validate()

    @property
    def root_index(self) -> int:
        return 0

    @cached_property
    def name_to_index(self) -> dict[str, int]:
        return {j.name: i for i, j in enumerate(self.joints)}

    @cached_property
    def channel_starts(self) -> tuple[int, ...]:
        starts, total = [], 0
        for j in self.joints:
            starts.append(total)
            total += len(j.channels)
        return tuple(starts)

    @property
    def total_channels(self) -> int:
        return self.channel_starts[-1] + len(self.joints[-1].channels)

    def index_of(self, name: str) -> int:
        try:
            return self.name_to_index[name]
        except KeyError:
            raise BvhError(f"unknown joint {name!r}") from None

    def children_of(self, index: int) -> list[int]:
        return [i for i, j in enumerate(self.joints) if j.parent == index]


@dataclass(frozen=True, eq=False)
class MotionClip:
    """A skeleton plus per-frame channel values.

    `frames` rows are frames; columns follow joint declaration order.
    `spatial_unit` tags the (dataset-specific) length unit of positions.
    """

    skeleton: Skeleton
    frame_time: float
    frames: np.ndarray
    spatial_unit: str = "unknown"
    source: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.frame_time) and self.frame_time > 0):
            raise BvhError(f"frame time must be finite and positive, got {self.frame_time}")
        if self.spatial_unit not in SPATIAL_UNITS:
            raise BvhError(f"unknown spatial unit tag {self.spatial_unit!r}")
        frames = np.asarray(self.frames, dtype=np.float64)
        object.__setattr__(self, "frames", frames)
        if frames.ndim != 2 or frames.shape[0] < 1:
            raise BvhError("motion data must be a non-empty frame matrix")
        if frames.shape[1] != self.skeleton.total_channels:
            raise BvhError(
                f"frame width {frames.shape[1]} does not match skeleton "
                f"channel count {self.skeleton.total_channels}"
            )
        if not np.all(np.isfinite(frames)):
            bad = np.argwhere(~np.isfinite(frames))[0]
            raise BvhError(f"non-finite channel value at frame {bad[0]}, column {bad[1]}")

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def duration(self) -> float:
        return self.frame_count * self.frame_time

    def joint_channels(self, index: int) -> np.ndarray:
        """Per-frame channel values of one joint, shape (frames, n_channels)."""
        start = self.skeleton.channel_starts[index]
        return self.frames[:, start : start + len(self.skeleton.joints[index].channels)]


# ---------------------------------------------------------------------------
# Parsing


class _Lines:
    """Cursor over logical lines, keeping 1-based line numbers for errors."""

    def __init__(self, text: str):
        self.raw = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
        self.pos = 0

    def next(self) -> tuple[str, int]:
        while self.pos < len(self.raw):
            line = self.raw[self.pos]
            self.pos += 1
            if line.strip():
                return line, self.pos
        return "", self.pos + 1

    def peek(self) -> tuple[str, int]:
        saved = self.pos
        line, no = self.next()
        self.pos = saved
        return line, no


def _column_of(line: str, token: str) -> int:
    at = line.find(token)
    return at + 1 if at >= 0 else 1


def _parse_floats(tokens: list[str], line: str, line_no: int, what: str) -> list[float]:
    values = []
    for tok in tokens:
        try:
            values.append(float(tok))
        except ValueError:
            raise BvhSyntaxError(
                f"expected a number in {what}, got {tok!r}", line_no, _column_of(line, tok)
            ) from None
    return values


def parse_bvh(text: str, source: str = "", spatial_unit: str = "unknown") -> MotionClip:
    """Parse complete BVH text into a validated MotionClip."""
    lines = _Lines(text)

    line, no = lines.next()
    if line.strip().upper() != "HIERARCHY":
        raise BvhSyntaxError("expected HIERARCHY", no, _column_of(line, line.strip() or " "))

    joints: list[dict] = []
    stack: list[int] = []  # indices into joints, innermost last
    in_end_site = False

    def current() -> dict:
        return joints[stack[-1]]

    while True:
        line, no = lines.next()
        stripped = line.strip()
        if not stripped:
            raise BvhSyntaxError("unexpected end of file inside HIERARCHY", no)
        keyword = stripped.split()[0]

        if keyword in ("ROOT", "JOINT"):
            if in_end_site:
                raise BvhSyntaxError(f"{keyword} inside End Site block", no)
            if keyword == "ROOT" and joints:
                raise BvhSyntaxError("second ROOT declaration", no, _column_of(line, "ROOT"))
            if keyword == "JOINT" and not stack:
                raise BvhSyntaxError("JOINT outside of a joint block", no)
            name = stripped[len(keyword):].strip()
            if name.endswith("{"):
                name = name[:-1].strip()
            if not name:
                raise BvhSyntaxError(f"{keyword} without a name", no)
            joint = {
                "name": name,
                "parent": stack[-1] if stack else None,
                "offset": None,
                "channels": (),
                "end_site": None,
                "line": no,
            }
            joints.append(joint)
            # brace may sit on the same line or the next one
            if not stripped.endswith("{"):
                brace, bno = lines.next()
                if brace.strip() != "{":
                    raise BvhSyntaxError("expected '{' after joint declaration", bno)
            stack.append(len(joints) - 1)

        elif stripped.startswith("End Site") or stripped.startswith("End site"):
            if not stack or in_end_site:
                raise BvhSyntaxError("End Site outside of a joint block", no)
            if stripped.rstrip("{").strip() not in ("End Site", "End site"):
                raise BvhSyntaxError("malformed End Site declaration", no)
            if not stripped.endswith("{"):
                brace, bno = lines.next()
                if brace.strip() != "{":
                    raise BvhSyntaxError("expected '{' after End Site", bno)
            in_end_site = True

        elif keyword == "OFFSET":
            tokens = stripped.split()[1:]
            if len(tokens) != 3:
                raise BvhSyntaxError("OFFSET requires 3 values", no, _column_of(line, "OFFSET"))
            vec = np.array(_parse_floats(tokens, line, no, "OFFSET"), dtype=np.float64)
            if in_end_site:
                current()["end_site"] = vec
            elif stack:
                current()["offset"] = vec
            else:
                raise BvhSyntaxError("OFFSET outside of a joint block", no)

        elif keyword == "CHANNELS":
            if in_end_site or not stack:
                raise BvhSyntaxError("CHANNELS outside of a joint block", no)
            tokens = stripped.split()[1:]
            if not tokens:
                raise BvhSyntaxError("CHANNELS requires a count", no)
            try:
                count = int(tokens[0])
            except ValueError:
                raise BvhSyntaxError(
                    f"CHANNELS count must be an integer, got {tokens[0]!r}",
                    no,
                    _column_of(line, tokens[0]),
                ) from None
            names = tokens[1:]
            if len(names) != count:
                raise BvhSyntaxError(
                    f"CHANNELS declares {count} but lists {len(names)}", no
                )
            for c in names:
                if c not in VALID_CHANNELS:
                    raise BvhSyntaxError(
                        f"unknown channel {c!r}", no, _column_of(line, c)
                    )
            current()["channels"] = tuple(names)

        elif stripped == "{":
            raise BvhSyntaxError("unexpected '{'", no)

        elif stripped == "}":
            if in_end_site:
                in_end_site = False
            elif stack:
                done = joints[stack.pop()]
                if done["offset"] is None:
                    raise BvhSyntaxError(
                        f"joint {done['name']!r} missing OFFSET", done["line"]
                    )
                if not stack:
                    break  # root block closed
            else:
                raise BvhSyntaxError("unmatched '}'", no)

        elif keyword.upper() == "MOTION":
            raise BvhSyntaxError("MOTION before HIERARCHY closed", no)

        else:
            raise BvhSyntaxError(f"unexpected token {keyword!r}", no, _column_of(line, keyword))

    try:
        skeleton = Skeleton(
            joints=tuple(
                Joint(j["name"], j["parent"], j["offset"], j["channels"], j["end_site"])
                for j in joints
            )
        )
    except BvhError as exc:
        raise BvhSyntaxError(str(exc), joints[0]["line"] if joints else 1) from None

    line, no = lines.next()
    if line.strip().upper() != "MOTION":
        raise BvhSyntaxError("expected MOTION section", no)

    def _labeled_value(expected: str) -> tuple[str, int]:
        line, no = lines.next()
        parts = line.strip().split(":", 1)
        label = " ".join(parts[0].lower().split())
        if label != expected or len(parts) != 2:
            raise BvhSyntaxError(f"expected '{expected.title()}:' line", no)
        return parts[1].strip(), no

    value, no = _labeled_value("frames")
    try:
        declared = int(value)
    except ValueError:
        raise BvhSyntaxError(f"frame count must be an integer, got {value!r}", no) from None

    value, no = _labeled_value("frame time")
    try:
        frame_time = float(value)
    except ValueError:
        raise BvhSyntaxError(f"frame time must be a number, got {value!r}", no) from None

    width = skeleton.total_channels
    rows = []
    while True:
        line, no = lines.next()
        if not line.strip():
            break
        tokens = line.split()
        if len(tokens) != width:
            raise BvhSyntaxError(
                f"frame row has {len(tokens)} values, skeleton declares {width} channels",
                no,
            )
        values = _parse_floats(tokens, line, no, "frame data")
        for tok, v in zip(tokens, values):
            if not math.isfinite(v):
                raise BvhSyntaxError(
                    f"non-finite value {tok!r} in frame data", no, _column_of(line, tok)
                )
        rows.append(values)

    if len(rows) != declared:
        raise BvhError(
            f"declared Frames: {declared} but found {len(rows)} data rows"
        )
    if not rows:
        raise BvhError("clip must contain at least one frame")

    frames = np.array(rows, dtype=np.float64)
    return MotionClip(
        skeleton=skeleton,
        frame_time=frame_time,
        frames=frames,
        spatial_unit=spatial_unit,
        source=source,
    )


def parse_bvh_file(path: str | Path, spatial_unit: str = "unknown") -> MotionClip:
    path = Path(path)
    return parse_bvh(path.read_text(), source=path.stem, spatial_unit=spatial_unit)


# ---------------------------------------------------------------------------
# Serialization


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def write_bvh(clip: MotionClip) -> str:
    """Serialize a clip back to BVH text (6 decimal digits)."""
    sk = clip.skeleton
    out: list[str] = ["HIERARCHY"]
    children = {i: sk.children_of(i) for i in range(len(sk.joints))}

    def emit(index: int, depth: int) -> None:
        j = sk.joints[index]
        pad = "\t" * depth
        out.append(f"{pad}{'ROOT' if j.parent is None else 'JOINT'} {j.name}")
        out.append(f"{pad}{{")
        inner = "\t" * (depth + 1)
        out.append(f"{inner}OFFSET {' '.join(_fmt(v) for v in j.offset)}")
        out.append(f"{inner}CHANNELS {len(j.channels)} {' '.join(j.channels)}".rstrip())
        for child in children[index]:
            emit(child, depth + 1)
        if j.end_site is not None:
            out.append(f"{inner}End Site")
            out.append(f"{inner}{{")
            out.append(f"{inner}\tOFFSET {' '.join(_fmt(v) for v in j.end_site)}")
            out.append(f"{inner}}}")
        out.append(f"{pad}}}")

    emit(0, 0)
    out.append("MOTION")
    out.append(f"Frames: {clip.frame_count}")
    out.append(f"Frame Time: {clip.frame_time:.8f}")
    for row in clip.frames:
        out.append(" ".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def write_bvh_file(clip: MotionClip, path: str | Path) -> None:
    Path(path).write_text(write_bvh(clip))


# ---------------------------------------------------------------------------
# Rescaling


def position_column_mask(skeleton: Skeleton) -> np.ndarray:
    """Boolean mask over frame columns selecting position channels."""
    mask = np.zeros(skeleton.total_channels, dtype=bool)
    col = 0
    for j in skeleton.joints:
        for c in j.channels:
            mask[col] = c.endswith("position")
            col += 1
    return mask


def rescale_clip(clip: MotionClip, factor: float, new_unit: str | None = None) -> MotionClip:
    """Multiply all positions (channels, offsets, end sites) by `factor`.

    Rotations are untouched. The spatial-unit tag becomes `new_unit` when
    given, stays put for factor 1, and falls back to 'dataset-specific'
    otherwise.
    """
    if not (math.isfinite(factor) and factor > 0):
        raise BvhError(f"rescale factor must be positive, got {factor}")
    skeleton = Skeleton(
        joints=tuple(
            Joint(
                j.name,
                j.parent,
                j.offset * factor,
                j.channels,
                None if j.end_site is None else j.end_site * factor,
            )
            for j in clip.skeleton.joints
        )
    )
    frames = clip.frames.copy()
    mask = position_column_mask(clip.skeleton)
    frames[:, mask] *= factor
    if new_unit is None:
        new_unit = clip.spatial_unit if factor == 1.0 else "dataset-specific"
    return MotionClip(
        skeleton=skeleton,
        frame_time=clip.frame_time,
        frames=frames,
        spatial_unit=new_unit,
        source=clip.source,
    )
