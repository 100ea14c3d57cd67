"""Directional fidelity scoring of an old-style / normative metric pair.

Each age-sensitive gait variable has an expected direction of change in
old-style walking (smaller or larger than normative). A variable whose
observed direction opposes the expectation is a violation; excluded
variables are carried through with their reason, never dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .metrics import (
    DATA_SCARCITY,
    EXCLUSION_REASONS,
    INADEQUATE_ACCURACY,
    PROTOCOL_DEPENDENCE,
    GaitMetrics,
)
from .events import HEEL_STRIKE_UNRELIABLE

SMALLER = "smaller"
LARGER = "larger"

CONSISTENT = "consistent"
VIOLATION = "violation"
INDISTINGUISHABLE = "indistinguishable"
EXCLUDED = "excluded"


@dataclass(frozen=True)
class FidelityVariable:
    """One comparable gait variable and where its value comes from."""

    name: str
    metric: Optional[str]  # GaitMetrics key; None for never-computed variables
    expected: Optional[str]  # smaller | larger | None
    always_excluded_reason: Optional[str] = None


# Comparison vocabulary, in presentation order. The last four are never
# computed from single-joint MoCap (joint-angle accuracy / center-of-mass
# estimation) but still appear in reports with their exclusion reason.
VARIABLES: tuple[FidelityVariable, ...] = (
    FidelityVariable("gait_speed_mean", "gait_speed_mean", SMALLER),
    FidelityVariable("cadence", "cadence", SMALLER),
    FidelityVariable("step_width_mean", "step_width_mean", LARGER),
    FidelityVariable("step_length_mean", "step_length_mean", SMALLER),
    FidelityVariable("gait_speed_std", "gait_speed_std", LARGER),
    FidelityVariable("stride_time_variability", "stride_time_std", None, DATA_SCARCITY),
    FidelityVariable("step_length_variability", "step_length_std", LARGER),
    FidelityVariable("step_width_variability", "step_width_std", LARGER),
    FidelityVariable("knee_rom", "knee_rom", SMALLER),
    FidelityVariable("ankle_rom", None, None, INADEQUATE_ACCURACY),
    FidelityVariable("hip_rom", None, None, INADEQUATE_ACCURACY),
    FidelityVariable("ankle_angles_at_events", None, None, INADEQUATE_ACCURACY),
    FidelityVariable("dynamic_balance", None, None, INADEQUATE_ACCURACY),
)

VARIABLE_NAMES = tuple(v.name for v in VARIABLES)


def default_directions() -> dict[str, str]:
    """Expected change of each comparable variable in old-style walking."""
    return {v.name: v.expected for v in VARIABLES if v.expected is not None}


class PairingError(ValueError):
    """Old and normative metrics do not come from the same dataset/protocol."""


@dataclass(frozen=True)
class FidelityRow:
    variable: str
    old_value: Optional[float]
    normative_value: Optional[float]
    expected: Optional[str]
    observed: Optional[str]
    verdict: str
    reason: Optional[str] = None  # exclusion reason when verdict == excluded

    def verdict_label(self) -> str:
        if self.verdict == EXCLUDED:
            return f"excluded({self.reason})"
        return self.verdict


@dataclass(frozen=True)
class FidelityReport:
    old_id: str
    normative_id: str
    dataset: str
    tie_tolerance: float
    rows: tuple[FidelityRow, ...]

    @property
    def summary(self) -> dict[str, int]:
        counts = {CONSISTENT: 0, VIOLATION: 0, INDISTINGUISHABLE: 0, EXCLUDED: 0}
        for row in self.rows:
            counts[row.verdict] += 1
        return counts

    @property
    def violations(self) -> tuple[str, ...]:
        return tuple(r.variable for r in self.rows if r.verdict == VIOLATION)

    def row(self, variable: str) -> FidelityRow:
        for r in self.rows:
            if r.variable == variable:
                return r
        raise KeyError(variable)

    def to_dict(self) -> dict:
        return {
            "old_id": self.old_id,
            "normative_id": self.normative_id,
            "dataset": self.dataset,
            "tie_tolerance": self.tie_tolerance,
            "rows": [
                {
                    "variable": r.variable,
                    "old": r.old_value,
                    "normative": r.normative_value,
                    "expected": r.expected,
                    "observed": r.observed,
                    "verdict": r.verdict,
                    "reason": r.reason,
                }
                for r in self.rows
            ],
            "summary": self.summary,
        }


def compare_pair(
    old: GaitMetrics,
    normative: GaitMetrics,
    directions: Optional[dict[str, str]] = None,
    tie_tolerance: float = 0.02,
) -> FidelityReport:
    """Verdict every variable of an old/normative pair.

    Values within `tie_tolerance` (relative to the larger magnitude) are
    indistinguishable; otherwise the observed direction of the old-style
    value is checked against the expected direction.
    """
    if old.dataset != normative.dataset:
        raise PairingError(
            f"pair identifiers differ: {old.dataset!r} vs {normative.dataset!r}"
        )
    if tie_tolerance < 0:
        raise ValueError("tie tolerance must be non-negative")
    if directions is None:
        directions = default_directions()
    for name, d in directions.items():
        if d not in (SMALLER, LARGER):
            raise ValueError(f"direction for {name!r} must be smaller or larger")

    rows: list[FidelityRow] = []
    for var in VARIABLES:
        expected = directions.get(var.name)
        if var.metric is None or var.always_excluded_reason is not None:
            reason = var.always_excluded_reason or INADEQUATE_ACCURACY
            if var.metric is not None:
                mv_old, mv_norm = old.get(var.metric), normative.get(var.metric)
                reason = mv_old.reason or mv_norm.reason or reason
            rows.append(
                FidelityRow(var.name, None, None, expected, None, EXCLUDED, reason)
            )
            continue

        mv_old, mv_norm = old.get(var.metric), normative.get(var.metric)
        if not (mv_old.available and mv_norm.available):
            reason = mv_old.reason or mv_norm.reason or DATA_SCARCITY
            rows.append(
                FidelityRow(
                    var.name,
                    mv_old.value,
                    mv_norm.value,
                    expected,
                    None,
                    EXCLUDED,
                    reason,
                )
            )
            continue

        o, n = mv_old.value, mv_norm.value
        scale = max(abs(o), abs(n))
        if abs(o - n) <= tie_tolerance * scale:
            rows.append(
                FidelityRow(var.name, o, n, expected, None, INDISTINGUISHABLE)
            )
            continue
        observed = SMALLER if o < n else LARGER
        verdict = CONSISTENT if observed == expected else VIOLATION
        rows.append(FidelityRow(var.name, o, n, expected, observed, verdict))

    return FidelityReport(
        old_id=old.clip_id,
        normative_id=normative.clip_id,
        dataset=old.dataset,
        tie_tolerance=tie_tolerance,
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# Per-dataset inclusion matrix


@dataclass(frozen=True)
class DatasetDiagnostics:
    """What a dataset's clips allow: drift-based heel-strike reliability,
    protocol comparability of the old/normative pair, and how many gait
    cycles a continuous record offers."""

    name: str
    heel_strike_reliable: bool
    trajectory_comparable: bool
    cadence_comparable: bool
    stride_cycle_count: int = 0


@dataclass(frozen=True)
class InclusionEntry:
    included: bool
    reason: Optional[str] = None

    def __post_init__(self):
        if not self.included and self.reason not in EXCLUSION_REASONS:
            raise ValueError("excluded entry needs a vocabulary reason")


SPATIAL_VARIABLES = (
    "step_width_mean",
    "step_length_mean",
    "step_length_variability",
    "step_width_variability",
)
ALWAYS_INCLUDED = ("gait_speed_mean", "gait_speed_std", "knee_rom")


def dataset_inclusion_matrix(
    diagnostics: dict[str, DatasetDiagnostics],
    min_cycles_for_variability: int = 10,
) -> dict[str, dict[str, InclusionEntry]]:
    """Per-dataset, per-variable include/exclude decisions with reasons."""
    matrix: dict[str, dict[str, InclusionEntry]] = {}
    for name, diag in diagnostics.items():
        column: dict[str, InclusionEntry] = {}
        for var in VARIABLES:
            if var.metric is None:
                column[var.name] = InclusionEntry(False, var.always_excluded_reason)
            elif var.name in ALWAYS_INCLUDED:
                column[var.name] = InclusionEntry(True)
            elif var.name == "cadence":
                column[var.name] = (
                    InclusionEntry(True)
                    if diag.cadence_comparable
                    else InclusionEntry(False, PROTOCOL_DEPENDENCE)
                )
            elif var.name in SPATIAL_VARIABLES:
                if not diag.trajectory_comparable:
                    column[var.name] = InclusionEntry(False, PROTOCOL_DEPENDENCE)
                elif not diag.heel_strike_reliable:
                    column[var.name] = InclusionEntry(False, HEEL_STRIKE_UNRELIABLE)
                else:
                    column[var.name] = InclusionEntry(True)
            elif var.name == "stride_time_variability":
                if not diag.cadence_comparable:
                    column[var.name] = InclusionEntry(False, PROTOCOL_DEPENDENCE)
                elif not diag.heel_strike_reliable:
                    column[var.name] = InclusionEntry(False, HEEL_STRIKE_UNRELIABLE)
                elif diag.stride_cycle_count < min_cycles_for_variability:
                    column[var.name] = InclusionEntry(False, DATA_SCARCITY)
                else:
                    column[var.name] = InclusionEntry(True)
            else:  # pragma: no cover - every variable is handled above
                raise AssertionError(var.name)
        matrix[name] = column
    return matrix


# ---------------------------------------------------------------------------
# Rendering


def _fmt_value(v: Optional[float]) -> str:
    if v is None:
        return ""
    return f"{v:.6g}"


def render_report(report: FidelityReport, fmt: str = "csv") -> str:
    """Deterministic serialization; CSV column order is fixed."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = ["metric,old,normative,expected,observed,verdict"]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    r.variable,
                    _fmt_value(r.old_value),
                    _fmt_value(r.normative_value),
                    r.expected or "",
                    r.observed or "",
                    r.verdict_label(),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_inclusion_matrix(matrix: dict[str, dict[str, InclusionEntry]]) -> str:
    names = list(matrix)
    label = {
        (True, None): "yes",
        **{(False, r): f"no ({r})" for r in EXCLUSION_REASONS},
    }
    cells = {
        (n, var): label[(matrix[n][var].included, matrix[n][var].reason)]
        for n in names
        for var in VARIABLE_NAMES
    }
    left = max(len(v) for v in VARIABLE_NAMES) + 2
    widths = {n: max(len(n), max(len(cells[(n, v)]) for v in VARIABLE_NAMES)) + 2 for n in names}
    lines = ["variable".ljust(left) + "".join(n.ljust(widths[n]) for n in names)]
    for var in VARIABLE_NAMES:
        lines.append(var.ljust(left) + "".join(cells[(n, var)].ljust(widths[n]) for n in names))
    return "\n".join(lines) + "\n"
