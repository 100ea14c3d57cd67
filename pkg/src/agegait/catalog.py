"""Queryable registry of surveyed MoCap locomotion datasets.

The shipped data file records, per dataset: demographics (older adults /
total participants), body-part coverage, motor skills, whether old-style
motions exist, and minutes of old-style forward walking. Unknown values are
a distinct state (None), never zero, so aggregate sums stay honest:
`aggregates` reports known-sums plus unknown counts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

CATEGORIES = ("clinical", "general-purpose")
BODY_PARTS = ("full body", "lower limbs", "lower limbs and trunk", "feet")
OLD_STYLE = ("yes", "no", "unknown")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetRecord:
    name: str
    category: str
    total_participants: Optional[int]
    older_adults: Optional[int]
    body_parts: str
    motor_skills: tuple[str, ...]
    has_old_style: str
    old_style_forward_walking_minutes: Optional[float]
    citation_key: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise CatalogError(f"{self.name}: unknown category {self.category!r}")
        if self.body_parts not in BODY_PARTS:
            raise CatalogError(f"{self.name}: unknown body parts {self.body_parts!r}")
        if self.has_old_style not in OLD_STYLE:
            raise CatalogError(f"{self.name}: has_old_style must be yes/no/unknown")
        if (
            self.older_adults is not None
            and self.total_participants is not None
            and self.older_adults > self.total_participants
        ):
            raise CatalogError(
                f"{self.name}: older adults ({self.older_adults}) exceed "
                f"total participants ({self.total_participants})"
            )
        if (
            self.old_style_forward_walking_minutes is not None
            and self.has_old_style != "yes"
        ):
            raise CatalogError(
                f"{self.name}: old-style minutes present without old-style motions"
            )


def _record_from_dict(doc: dict) -> DatasetRecord:
    try:
        return DatasetRecord(
            name=str(doc["name"]),
            category=str(doc["category"]),
            total_participants=doc.get("total_participants"),
            older_adults=doc.get("older_adults"),
            body_parts=str(doc["body_parts"]),
            motor_skills=tuple(doc.get("motor_skills", [])),
            has_old_style=str(doc.get("has_old_style", "unknown")),
            old_style_forward_walking_minutes=doc.get("old_style_forward_walking_minutes"),
            citation_key=str(doc.get("citation_key", "")),
        )
    except KeyError as exc:
        raise CatalogError(f"record {doc.get('name', '?')!r}: missing field {exc}") from exc


def load_catalog(path: str | Path | None = None) -> tuple[list[DatasetRecord], dict]:
    """Load dataset records plus the survey headline block.

    Without a path, the data file shipped with the package is used.
    """
    if path is None:
        text = resources.files("agegait.data").joinpath("datasets.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    records = [_record_from_dict(d) for d in doc.get("datasets", [])]
    names = [r.name for r in records]
    if len(set(names)) != len(names):
        raise CatalogError("duplicate dataset names in catalog")
    return records, dict(doc.get("survey", {}))


def query(records, predicate: Callable[[DatasetRecord], bool]) -> list[DatasetRecord]:
    """Filter records, preserving catalog order."""
    return [r for r in records if predicate(r)]


def aggregates(records) -> dict:
    """Known-sums and counts across the catalog; unknowns counted separately."""
    known_participants = [r.total_participants for r in records if r.total_participants is not None]
    known_older = [r.older_adults for r in records if r.older_adults is not None]
    minutes = [
        r.old_style_forward_walking_minutes
        for r in records
        if r.old_style_forward_walking_minutes is not None
    ]
    full_body_older = [
        r.older_adults
        for r in records
        if r.body_parts == "full body" and r.older_adults is not None
    ]
    by_category = {c: sum(1 for r in records if r.category == c) for c in CATEGORIES}
    by_body_parts = {b: sum(1 for r in records if r.body_parts == b) for b in BODY_PARTS}
    return {
        "dataset_count": len(records),
        "by_category": by_category,
        "by_body_parts": by_body_parts,
        "participants_known_sum": sum(known_participants),
        "participants_unknown_count": len(records) - len(known_participants),
        "older_adults_known_sum": sum(known_older),
        "older_adults_unknown_count": len(records) - len(known_older),
        "old_style_dataset_count": sum(1 for r in records if r.has_old_style == "yes"),
        "old_style_forward_walking_minutes_sum": sum(minutes),
        "full_body_older_adults_known_sum": sum(full_body_older),
    }


# ---------------------------------------------------------------------------
# Query mini-language for the CLI:
#   field op value [and|or field op value ...]
# ops: = != > >= < <= ~ (substring, case-insensitive). 'and' binds tighter
# than 'or'. Bare string values may use underscores for spaces.

_NUMERIC_FIELDS = {
    "total_participants": lambda r: r.total_participants,
    "older_adults": lambda r: r.older_adults,
    "old_style_minutes": lambda r: r.old_style_forward_walking_minutes,
}
_STRING_FIELDS = {
    "name": lambda r: r.name,
    "category": lambda r: r.category,
    "body_parts": lambda r: r.body_parts,
    "has_old_style": lambda r: r.has_old_style,
    "citation_key": lambda r: r.citation_key,
    "motor_skills": lambda r: "; ".join(r.motor_skills),
}

_CLAUSE = re.compile(
    r"""^\s*(?P<field>\w+)\s*(?P<op>!=|>=|<=|=|>|<|~)\s*(?P<value>"[^"]*"|'[^']*'|\S+)\s*$"""
)


def _parse_clause(text: str) -> Callable[[DatasetRecord], bool]:
    m = _CLAUSE.match(text)
    if not m:
        raise CatalogError(f"malformed query clause: {text!r}")
    fieldname, op, raw = m.group("field"), m.group("op"), m.group("value")
    quoted = raw[0] in "\"'"
    value = raw[1:-1] if quoted else raw

    if fieldname in _NUMERIC_FIELDS:
        getter = _NUMERIC_FIELDS[fieldname]
        if value.lower() == "unknown":
            if op not in ("=", "!="):
                raise CatalogError(f"only = and != work with 'unknown': {text!r}")
            want_none = op == "="
            return lambda r: (getter(r) is None) == want_none
        try:
            number = float(value)
        except ValueError:
            raise CatalogError(f"{fieldname} needs a number, got {value!r}") from None
        ops = {
            "=": lambda a: a == number,
            "!=": lambda a: a != number,
            ">": lambda a: a > number,
            ">=": lambda a: a >= number,
            "<": lambda a: a < number,
            "<=": lambda a: a <= number,
        }
        if op not in ops:
            raise CatalogError(f"operator {op!r} not valid for numbers")
        test = ops[op]
        return lambda r: getter(r) is not None and test(getter(r))

    if fieldname in _STRING_FIELDS:
        getter = _STRING_FIELDS[fieldname]
        if not quoted:
            value = value.replace("_", " ")
        low = value.lower()
        if op == "=":
            return lambda r: getter(r).lower() == low
        if op == "!=":
            return lambda r: getter(r).lower() != low
        if op == "~":
            return lambda r: low in getter(r).lower()
        raise CatalogError(f"operator {op!r} not valid for strings")

    raise CatalogError(
        f"unknown field {fieldname!r}; use one of "
        f"{sorted([*_NUMERIC_FIELDS, *_STRING_FIELDS])}"
    )


def parse_query(text: str) -> Callable[[DatasetRecord], bool]:
    """Compile the query mini-language into a record predicate."""
    if not text.strip():
        return lambda r: True
    or_groups = []
    for group in re.split(r"\s+or\s+", text.strip(), flags=re.IGNORECASE):
        clauses = [
            _parse_clause(c) for c in re.split(r"\s+and\s+", group, flags=re.IGNORECASE)
        ]
        or_groups.append(clauses)

    def predicate(r: DatasetRecord) -> bool:
        return any(all(c(r) for c in group) for group in or_groups)

    return predicate


def render_records(records) -> str:
    """Fixed-width table for terminal output."""
    headers = ("name", "category", "older/total", "body parts", "old style", "old-style min")
    rows = []
    for r in records:
        older = "?" if r.older_adults is None else str(r.older_adults)
        total = "?" if r.total_participants is None else str(r.total_participants)
        minutes = (
            ""
            if r.old_style_forward_walking_minutes is None
            else f"{r.old_style_forward_walking_minutes:g}"
        )
        rows.append(
            (r.name, r.category, f"{older}/{total}", r.body_parts, r.has_old_style, minutes)
        )
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"
