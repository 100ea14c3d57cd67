import pytest
from hypothesis import given
from hypothesis import strategies as st

from agegait.fidelity import (
    CONSISTENT,
    EXCLUDED,
    INDISTINGUISHABLE,
    LARGER,
    SMALLER,
    VIOLATION,
    VARIABLE_NAMES,
    PairingError,
    compare_pair,
    dataset_inclusion_matrix,
    default_directions,
    render_inclusion_matrix,
    render_report,
)

from _fixtures import (
    EXPECTED_CONSISTENT,
    EXPECTED_INCLUSION,
    EXPECTED_VIOLATIONS,
    metrics_fixture,
    style_pairs,
    survey_diagnostics,
)


def test_default_directions_exactly():
    assert default_directions() == {
        "gait_speed_mean": SMALLER,
        "cadence": SMALLER,
        "step_width_mean": LARGER,
        "step_length_mean": SMALLER,
        "gait_speed_std": LARGER,
        "step_length_variability": LARGER,
        "step_width_variability": LARGER,
        "knee_rom": SMALLER,
    }


@pytest.mark.parametrize("name", list(style_pairs()))
def test_style_pair_verdicts(name):
    old, norm = style_pairs()[name]
    report = compare_pair(old, norm)
    assert set(report.violations) == EXPECTED_VIOLATIONS[name]
    consistent = {r.variable for r in report.rows if r.verdict == CONSISTENT}
    assert consistent == EXPECTED_CONSISTENT[name]
    # excluded variables are carried, never dropped
    assert {r.variable for r in report.rows} == set(VARIABLE_NAMES)
    for row in report.rows:
        if row.verdict == EXCLUDED:
            assert row.reason


def test_identical_metrics_all_indistinguishable():
    old, _ = style_pairs()["xia"]
    report = compare_pair(old, old)
    for row in report.rows:
        assert row.verdict in (INDISTINGUISHABLE, EXCLUDED)
    assert report.summary[VIOLATION] == 0


def test_mismatched_pair_identifiers_error():
    old, _ = style_pairs()["xia"]
    _, norm = style_pairs()["cmu"]
    with pytest.raises(PairingError):
        compare_pair(old, norm)


def _pair_with(old_value, norm_value, dataset="d"):
    values = {"gait_speed_mean": old_value, "knee_rom": 10.0}
    norm = {"gait_speed_mean": norm_value, "knee_rom": 10.0}
    return (
        metrics_fixture("o", dataset, values, {}),
        metrics_fixture("n", dataset, norm, {}),
    )


@given(
    old=st.floats(0.01, 100, allow_nan=False),
    norm=st.floats(0.01, 100, allow_nan=False),
    direction=st.sampled_from([SMALLER, LARGER]),
    tol=st.floats(0.0, 0.5),
)
def test_verdict_antisymmetry(old, norm, direction, tol):
    directions = {"gait_speed_mean": direction}
    a, b = _pair_with(old, norm)
    fwd = compare_pair(a, b, directions, tol).row("gait_speed_mean").verdict
    rev = compare_pair(b, a, directions, tol).row("gait_speed_mean").verdict
    flip = {CONSISTENT: VIOLATION, VIOLATION: CONSISTENT}
    if fwd == INDISTINGUISHABLE:
        assert rev == INDISTINGUISHABLE
    else:
        assert rev == flip[fwd]


@given(
    old=st.floats(0.01, 100, allow_nan=False),
    norm=st.floats(0.01, 100, allow_nan=False),
    tols=st.tuples(st.floats(0.0, 0.5), st.floats(0.0, 0.5)),
)
def test_tolerance_monotone(old, norm, tols):
    lo, hi = sorted(tols)
    a, b = _pair_with(old, norm)
    verdict_lo = compare_pair(a, b, tie_tolerance=lo).row("gait_speed_mean").verdict
    verdict_hi = compare_pair(a, b, tie_tolerance=hi).row("gait_speed_mean").verdict
    if verdict_lo == INDISTINGUISHABLE:
        assert verdict_hi == INDISTINGUISHABLE
    # raising the tolerance never un-ties a tie


@given(scale=st.floats(0.001, 1000.0))
def test_verdicts_scale_invariant(scale):
    old, norm = style_pairs()["xia"]
    base = compare_pair(old, norm)
    length_like = (
        "gait_speed_mean",
        "gait_speed_std",
        "step_length_mean",
        "step_length_std",
        "step_width_mean",
        "step_width_std",
    )

    def rescaled(m):
        values = {
            k: mv.value * scale if k in length_like else mv.value
            for k, mv in m.values.items()
            if mv.available
        }
        reasons = {k: mv.reason for k, mv in m.values.items() if not mv.available}
        return metrics_fixture(m.clip_id, m.dataset, values, reasons)

    scaled = compare_pair(rescaled(old), rescaled(norm))
    for a, b in zip(base.rows, scaled.rows):
        assert a.verdict == b.verdict, a.variable


def test_inclusion_matrix_matches_survey_pattern():
    matrix = dataset_inclusion_matrix(survey_diagnostics())
    observed = {
        name: {var: entry.included for var, entry in column.items()}
        for name, column in matrix.items()
    }
    assert observed == EXPECTED_INCLUSION
    # reason vocabulary only
    for column in matrix.values():
        for entry in column.values():
            if not entry.included:
                assert entry.reason in (
                    "protocol dependence",
                    "data scarcity",
                    "inadequate accuracy",
                    "heel-strike-unreliable",
                )


def test_inclusion_matrix_render_lists_all_variables():
    text = render_inclusion_matrix(dataset_inclusion_matrix(survey_diagnostics()))
    for var in VARIABLE_NAMES:
        assert var in text


def test_render_csv_columns_and_violation_markers():
    old, norm = style_pairs()["xia"]
    report = compare_pair(old, norm)
    text = render_report(report, "csv")
    lines = text.strip().split("\n")
    assert lines[0] == "metric,old,normative,expected,observed,verdict"
    width_row = next(l for l in lines if l.startswith("step_width_mean,"))
    assert width_row.endswith(",violation")
    assert "1.168" in width_row and "2.039" in width_row
    excluded_row = next(l for l in lines if l.startswith("ankle_rom,"))
    assert "excluded(inadequate accuracy)" in excluded_row


def test_render_deterministic():
    old, norm = style_pairs()["cmu"]
    report = compare_pair(old, norm)
    assert render_report(report, "csv") == render_report(report, "csv")
    assert render_report(report, "json") == render_report(report, "json")
    with pytest.raises(ValueError, match="format"):
        render_report(report, "yaml")


def test_exclusions_only_report():
    empty_old = metrics_fixture("o", "d", {}, {})
    empty_norm = metrics_fixture("n", "d", {}, {})
    report = compare_pair(empty_old, empty_norm)
    assert all(r.verdict == EXCLUDED for r in report.rows)
    assert render_report(report, "csv").count("excluded") == len(VARIABLE_NAMES)
