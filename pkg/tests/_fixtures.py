"""Reference metric pairs for the four surveyed style datasets, plus the
diagnostics that drive their inclusion matrix. Shared by the fidelity and
acceptance tests."""

from agegait.fidelity import DatasetDiagnostics
from agegait.metrics import METRIC_NAMES, GaitMetrics, MetricValue

PROTOCOL = "protocol dependence"
SCARCITY = "data scarcity"
UNRELIABLE = "heel-strike-unreliable"


def metrics_fixture(clip_id, dataset, values: dict, exclusions: dict) -> GaitMetrics:
    """Build a GaitMetrics carrying `values` plus reasoned exclusions; any
    metric not mentioned is excluded for data scarcity."""
    out = {}
    for name in METRIC_NAMES:
        if name in values:
            out[name] = MetricValue(float(values[name]))
        else:
            out[name] = MetricValue(None, exclusions.get(name, SCARCITY))
    return GaitMetrics(
        clip_id=clip_id, dataset=dataset, spatial_unit="dataset-specific", values=out
    )


def style_pairs() -> dict[str, tuple[GaitMetrics, GaitMetrics]]:
    """(old, normative) metric pairs with the survey's reference values."""
    pairs = {}

    pairs["xia"] = (
        metrics_fixture(
            "xia-old",
            "xia",
            {
                "gait_speed_mean": 0.167,
                "gait_speed_std": 0.033,
                "cadence": 94.35,
                "step_length_mean": 12.34,
                "step_length_std": 0.5783,
                "step_width_mean": 1.168,
                "step_width_std": 0.294,
                "knee_rom": 26.10,
            },
            {"stride_time_std": SCARCITY},
        ),
        metrics_fixture(
            "xia-normative",
            "xia",
            {
                "gait_speed_mean": 0.200,
                "gait_speed_std": 0.024,
                "cadence": 105.71,
                "step_length_mean": 12.88,
                "step_length_std": 0.445,
                "step_width_mean": 2.039,
                "step_width_std": 0.217,
                "knee_rom": 38.47,
            },
            {"stride_time_std": SCARCITY},
        ),
    )

    cmu_excl = {
        "step_length_mean": PROTOCOL,
        "step_length_std": PROTOCOL,
        "step_width_mean": PROTOCOL,
        "step_width_std": PROTOCOL,
        "stride_time_std": SCARCITY,
    }
    pairs["cmu"] = (
        metrics_fixture(
            "cmu-old",
            "cmu",
            {
                "gait_speed_mean": 0.055,
                "gait_speed_std": 0.009,
                "cadence": 144.18,
                "knee_rom": 14.59,
            },
            cmu_excl,
        ),
        metrics_fixture(
            "cmu-normative",
            "cmu",
            {
                "gait_speed_mean": 0.173,
                "gait_speed_std": 0.024,
                "cadence": 109.25,
                "knee_rom": 42.47,
            },
            cmu_excl,
        ),
    )

    bfa_excl = {
        "cadence": PROTOCOL,
        "step_length_mean": UNRELIABLE,
        "step_length_std": UNRELIABLE,
        "step_width_mean": UNRELIABLE,
        "step_width_std": UNRELIABLE,
        "stride_time_std": UNRELIABLE,
    }
    pairs["bfa"] = (
        metrics_fixture(
            "bfa-old",
            "bfa",
            {"gait_speed_mean": 0.061, "gait_speed_std": 0.015, "knee_rom": 21.30},
            bfa_excl,
        ),
        metrics_fixture(
            "bfa-normative",
            "bfa",
            {"gait_speed_mean": 0.090, "gait_speed_std": 0.037, "knee_rom": 36.76},
            bfa_excl,
        ),
    )

    style100_excl = {
        "cadence": PROTOCOL,
        "step_length_mean": PROTOCOL,
        "step_length_std": PROTOCOL,
        "step_width_mean": PROTOCOL,
        "step_width_std": PROTOCOL,
        "stride_time_std": UNRELIABLE,
    }
    pairs["100style"] = (
        metrics_fixture(
            "100style-old",
            "100style",
            {"gait_speed_mean": 0.399, "gait_speed_std": 0.120, "knee_rom": 33.29},
            style100_excl,
        ),
        metrics_fixture(
            "100style-normative",
            "100style",
            {"gait_speed_mean": 1.217, "gait_speed_std": 0.381, "knee_rom": 41.02},
            style100_excl,
        ),
    )
    return pairs


EXPECTED_VIOLATIONS = {
    "xia": {"step_width_mean"},
    "cmu": {"cadence", "gait_speed_std"},
    "bfa": {"gait_speed_std"},
    "100style": {"gait_speed_std"},
}

EXPECTED_CONSISTENT = {
    "xia": {
        "gait_speed_mean",
        "cadence",
        "step_length_mean",
        "gait_speed_std",
        "step_length_variability",
        "step_width_variability",
        "knee_rom",
    },
    "cmu": {"gait_speed_mean", "knee_rom"},
    "bfa": {"gait_speed_mean", "knee_rom"},
    "100style": {"gait_speed_mean", "knee_rom"},
}


def survey_diagnostics() -> dict[str, DatasetDiagnostics]:
    return {
        "xia": DatasetDiagnostics(
            "xia",
            heel_strike_reliable=True,
            trajectory_comparable=True,
            cadence_comparable=True,
            stride_cycle_count=6,
        ),
        "cmu": DatasetDiagnostics(
            "cmu",
            heel_strike_reliable=True,
            trajectory_comparable=False,
            cadence_comparable=True,
            stride_cycle_count=4,
        ),
        "100style": DatasetDiagnostics(
            "100style",
            heel_strike_reliable=False,
            trajectory_comparable=False,
            cadence_comparable=False,
            stride_cycle_count=8,
        ),
        "bfa": DatasetDiagnostics(
            "bfa",
            heel_strike_reliable=False,
            trajectory_comparable=True,
            cadence_comparable=False,
            stride_cycle_count=8,
        ),
    }


# include/exclude pattern per dataset column, in variable order
EXPECTED_INCLUSION = {
    "xia": {
        "gait_speed_mean": True,
        "cadence": True,
        "step_width_mean": True,
        "step_length_mean": True,
        "gait_speed_std": True,
        "stride_time_variability": False,
        "step_length_variability": True,
        "step_width_variability": True,
        "knee_rom": True,
        "ankle_rom": False,
        "hip_rom": False,
        "ankle_angles_at_events": False,
        "dynamic_balance": False,
    },
    "cmu": {
        "gait_speed_mean": True,
        "cadence": True,
        "step_width_mean": False,
        "step_length_mean": False,
        "gait_speed_std": True,
        "stride_time_variability": False,
        "step_length_variability": False,
        "step_width_variability": False,
        "knee_rom": True,
        "ankle_rom": False,
        "hip_rom": False,
        "ankle_angles_at_events": False,
        "dynamic_balance": False,
    },
    "100style": {
        "gait_speed_mean": True,
        "cadence": False,
        "step_width_mean": False,
        "step_length_mean": False,
        "gait_speed_std": True,
        "stride_time_variability": False,
        "step_length_variability": False,
        "step_width_variability": False,
        "knee_rom": True,
        "ankle_rom": False,
        "hip_rom": False,
        "ankle_angles_at_events": False,
        "dynamic_balance": False,
    },
    "bfa": {
        "gait_speed_mean": True,
        "cadence": False,
        "step_width_mean": False,
        "step_length_mean": False,
        "gait_speed_std": True,
        "stride_time_variability": False,
        "step_length_variability": False,
        "step_width_variability": False,
        "knee_rom": True,
        "ankle_rom": False,
        "hip_rom": False,
        "ankle_angles_at_events": False,
        "dynamic_balance": False,
    },
}
