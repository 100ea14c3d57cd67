"""Command-line entry point.

Subcommands: analyze, compare, catalog, export-plot, serve, generate,
init-config. Batch commands call the library directly; `serve` hosts the
HTTP service used by the inspector UI. Exit code is 0 exactly when a
report/output was produced.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bvh import BvhError, write_bvh_file
from .catalog import CatalogError, aggregates, load_catalog, parse_query, query, render_records
from .config import AnalysisConfig, ConfigError, load_config, save_config
from .fidelity import PairingError, compare_pair, render_report
from .pipeline import (
    NoAnalyzableSegmentError,
    analyze_file,
    export_plot_data,
    load_metrics_report,
    metrics_report_csv,
    metrics_report_json,
)
from .sidecar import SidecarError
from .synth import WalkerSpec, WalkerSpecError, generate

PLOT_KINDS = ("trajectory", "foot-height", "knee-angle")


def _load_config_arg(path: str | None) -> AnalysisConfig:
    if path is None:
        return AnalysisConfig()
    return load_config(path)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_analyze(args) -> int:
    config = _load_config_arg(args.config)
    result = analyze_file(args.clip, config, args.sidecar)
    report = (
        metrics_report_csv(result.metrics)
        if args.format == "csv"
        else metrics_report_json(result.metrics)
    )
    _emit(report, args.out)
    return 0


def _cmd_compare(args) -> int:
    config = _load_config_arg(args.config)
    old = load_metrics_report(args.old)
    normative = load_metrics_report(args.normative)
    report = compare_pair(old, normative, tie_tolerance=config.tie_tolerance)
    _emit(render_report(report, args.format), args.out)
    return 0


def _cmd_catalog(args) -> int:
    records, survey = load_catalog(args.catalog)
    if args.aggregates:
        summary = aggregates(records)
        summary["survey"] = survey
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return 0
    matched = query(records, parse_query(args.query or ""))
    sys.stdout.write(render_records(matched))
    return 0


def _cmd_export_plot(args) -> int:
    config = _load_config_arg(args.config)
    result = analyze_file(args.clip, config, args.sidecar)
    _emit(export_plot_data(result, args.kind), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config_arg(args.config)
    app = create_app(args.dir, config, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_generate(args) -> int:
    if args.spec is None:
        spec = WalkerSpec()
    else:
        doc = json.loads(Path(args.spec).read_text())
        spec = WalkerSpec.from_dict(doc)
    walker = generate(spec)
    write_bvh_file(walker.clip, args.out)
    if args.truth:
        truth = {
            "spec": spec.to_dict(),
            "metrics": walker.true_metrics,
            "events": {
                side: {
                    "steps": list(walker.events.foot(side).steps),
                    "heel_strikes": list(walker.events.foot(side).heel_strikes),
                }
                for side in ("left", "right")
            },
        }
        Path(args.truth).write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_init_config(args) -> int:
    save_config(AnalysisConfig(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agegait",
        description="Gait analysis and age-style walking fidelity toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute gait metrics for a BVH clip")
    p.add_argument("clip", help="path to the .bvh file")
    p.add_argument("--config", help="analysis config JSON")
    p.add_argument("--sidecar", help="annotation sidecar JSON (default: <clip>.annotations.json)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("compare", help="fidelity verdicts for an old/normative report pair")
    p.add_argument("old", help="metrics report JSON of the old-style clip")
    p.add_argument("normative", help="metrics report JSON of the normative clip")
    p.add_argument("--config", help="analysis config JSON (tie tolerance)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("catalog", help="query the surveyed-dataset catalog")
    p.add_argument("query", nargs="?", default="", help="e.g. \"older_adults > 0 and body_parts = full_body\"")
    p.add_argument("--aggregates", action="store_true", help="print summary totals as JSON")
    p.add_argument("--catalog", help="alternative catalog JSON file")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("export-plot", help="columnar plot data for a clip")
    p.add_argument("clip", help="path to the .bvh file")
    p.add_argument("--kind", choices=PLOT_KINDS, required=True)
    p.add_argument("--config", help="analysis config JSON")
    p.add_argument("--sidecar", help="annotation sidecar JSON")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_export_plot)

    p = sub.add_parser("serve", help="run the local inspector service")
    p.add_argument("--dir", required=True, help="directory containing .bvh clips")
    p.add_argument("--config", help="analysis config JSON")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", help="directory with built UI assets to serve at /")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("generate", help="synthesize a walker clip with known parameters")
    p.add_argument("--spec", help="walker spec JSON (default: built-in defaults)")
    p.add_argument("--out", required=True, help="output .bvh path")
    p.add_argument("--truth", help="also write ground-truth events/metrics JSON here")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("init-config", help="write the default analysis config")
    p.add_argument("--out", required=True, help="output config JSON path")
    p.set_defaults(func=_cmd_init_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        BvhError,
        SidecarError,
        ConfigError,
        CatalogError,
        PairingError,
        WalkerSpecError,
        NoAnalyzableSegmentError,
        FileNotFoundError,
        NotADirectoryError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
