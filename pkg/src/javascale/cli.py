"""Command-line driver.

Exit codes: 0 success, 1 usage problem, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import DataError, UsageError
from .extractor import extract_corpus
from .metrics import compute_metrics, metric_value, used_modules_by_provenance
from .normalize import decorrelation_report, normalize_corpus
from .pipeline import (
    GridCell,
    EvalSet,
    evaluate_grid,
    fit_grid,
    load_config,
    render_run_report,
    run_pipeline,
)
from .regression import filter_by_size, fit_log_power, fit_robust_log_power
from .report import (
    normalized_csv,
    render_bin_report,
    render_fit_table,
    render_nrmse_table,
    render_welch_matrix,
)
from .stats import bin_by, linear_ratios, log_ratio_summary, log_ratios, welch_t_test
from .store import (
    FactsArchive,
    export_metrics_table,
    read_facts,
    read_metrics_table,
    write_facts,
)
from .synth import SynthSpec, generate_metrics


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        raise UsageError(message)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo_text, hi_text = text.split(":", 1)
        lo = float(lo_text) if lo_text else 0.0
        hi = float(hi_text) if hi_text else math.inf
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected LO:HI") from exc
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="javascale", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract facts for a corpus manifest")
    p.add_argument("manifest")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("metrics", help="compute the per-project metrics table")
    p.add_argument("facts")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("fit", help="fit one scaling model")
    p.add_argument("metrics")
    p.add_argument("--y", required=True, dest="y_metric")
    p.add_argument("--x", required=True, dest="x_metric")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--subset", type=_parse_range, default=None, metavar="LO:HI")
    p.add_argument("--robust", action="store_true")
    p.add_argument("--zero-offset", action="store_true",
                   help="fit log(v+1) so zero counts stay in the sample")

    p = sub.add_parser("bins", help="binned ratio analysis with Welch tests")
    p.add_argument("metrics")
    p.add_argument("--ratio", required=True, metavar="NUM/DEN")
    p.add_argument("--edges", required=True, help="comma-separated thresholds")
    p.add_argument("--bin-metric", default=None, help="defaults to the denominator")
    p.add_argument("--linear-ratios", action="store_true",
                   help="run the Welch tests on raw ratios instead of log ratios")

    p = sub.add_parser("validate", help="NRMSE evaluation over a model grid")
    p.add_argument("metrics")
    p.add_argument("--grid", required=True, help="JSON grid configuration")

    p = sub.add_parser("normalize", help="size-normalized metric table")
    p.add_argument("metrics")
    p.add_argument("--num", required=True)
    p.add_argument("--den", required=True)
    p.add_argument("--beta", required=True, help="exponent or 'auto'")
    p.add_argument("--subset", type=_parse_range, default=(50, 1000), metavar="LO:HI",
                   help="subset fitted when --beta auto (default 50:1000)")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("synth", help="generate a synthetic metrics table")
    p.add_argument("--spec", required=True, help="JSON generator spec")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("pipeline", help="run the full pipeline from a config")
    p.add_argument("config")

    p = sub.add_parser("report", help="render the report for a finished run")
    p.add_argument("run_dir")

    return parser


def cmd_extract(args) -> int:
    projects = extract_corpus(args.manifest)
    write_facts(FactsArchive(projects=projects), args.output)
    total_warn = sum(p.parse_warning_count for p in projects)
    print(f"extracted {len(projects)} project(s) -> {args.output}"
          f" ({total_warn} parse warning(s))")
    return 0


def cmd_metrics(args) -> int:
    archive = read_facts(args.facts)
    corpus = [compute_metrics(p) for p in archive.projects]
    export_metrics_table(corpus, args.output)
    unresolved = sum(
        used_modules_by_provenance(p).unresolved for p in archive.projects
    )
    resolved = sum(pm.used_total for pm in corpus)
    total_names = resolved + unresolved
    fraction = unresolved / total_names if total_names else 0.0
    print(f"wrote metrics for {len(corpus)} project(s) -> {args.output}")
    print(
        f"unresolved used-module names: {unresolved} of {total_names} "
        f"({fraction:.1%}); excluded from the provenance split"
    )
    return 0


def cmd_fit(args) -> int:
    corpus = read_metrics_table(args.metrics)
    if args.subset is not None:
        corpus = filter_by_size(corpus, args.x_metric, args.subset[0], args.subset[1])
        print(f"subset projects: {len(corpus)}")
    xs = [metric_value(pm, args.x_metric) for pm in corpus]
    ys = [metric_value(pm, args.y_metric) for pm in corpus]
    fitter = fit_robust_log_power if args.robust else fit_log_power
    fit = fitter(xs, ys, args.k, zero_offset=args.zero_offset)
    label = f"{args.y_metric} vs. {args.x_metric}"
    print(render_fit_table([(label, fit)]), end="")
    print(f"n={fit.n} excluded_zero_pairs={fit.excluded_zero_pairs}")
    return 0


def cmd_bins(args) -> int:
    corpus = read_metrics_table(args.metrics)
    try:
        num, den = args.ratio.split("/", 1)
    except ValueError as exc:
        raise UsageError("--ratio must look like interfaces/classes") from exc
    edges = [float(e) for e in args.edges.split(",") if e.strip()]
    bin_metric = args.bin_metric or den
    bins = bin_by(corpus, bin_metric, edges)
    ratio_series = linear_ratios if args.linear_ratios else log_ratios
    summaries = []
    series = {}
    for b in bins:
        values, _ = ratio_series(b, num, den)
        series[b.label] = values
        if values:
            summaries.append(log_ratio_summary(b, num, den))
    print(render_bin_report(summaries, num, den), end="")
    labels = [s.label for s in summaries]
    p_values = {}
    for i, a in enumerate(labels):
        for b_label in labels[i + 1 :]:
            if len(series[a]) >= 2 and len(series[b_label]) >= 2:
                p_values[(a, b_label)] = welch_t_test(series[a], series[b_label]).p_value
    print(render_welch_matrix(labels, p_values), end="")
    return 0


def cmd_validate(args) -> int:
    corpus = read_metrics_table(args.metrics)
    try:
        grid_data = json.loads(Path(args.grid).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read grid config: {exc}") from exc
    cells = [
        GridCell(
            model_id=m["id"],
            y_metric=m["y"],
            x_metric=m["x"],
            k=float(m.get("k", 1)),
            subset=None
            if m.get("subset") is None
            else (
                float(m["subset"][0]),
                math.inf if m["subset"][1] is None else float(m["subset"][1]),
            ),
            robust=bool(m.get("robust", False)),
        )
        for m in grid_data["models"]
    ]
    testsets = [
        EvalSet(
            name=t["name"],
            metric=t["metric"],
            low=float(t["range"][0]),
            high=math.inf if t["range"][1] is None else float(t["range"][1]),
        )
        for t in grid_data.get("testsets", [])
    ]
    space = grid_data.get("space", "log")
    fitted = fit_grid(corpus, cells)
    print(render_fit_table([(mid, fit) for mid, fit, _ in fitted]), end="")
    if testsets:
        evals = evaluate_grid(corpus, fitted, testsets, space)
        print(render_nrmse_table(evals, [t.name for t in testsets]), end="")
    return 0


def cmd_normalize(args) -> int:
    corpus = read_metrics_table(args.metrics)
    if args.beta == "auto":
        subset = filter_by_size(corpus, args.den, args.subset[0], args.subset[1])
        fit = fit_log_power(
            [metric_value(pm, args.den) for pm in subset],
            [metric_value(pm, args.num) for pm in subset],
        )
        beta = fit.beta
        print(f"auto beta from subset {args.subset[0]:g}:{args.subset[1]:g} -> {beta!r}")
    else:
        try:
            beta = float(args.beta)
        except ValueError as exc:
            raise UsageError("--beta must be a number or 'auto'") from exc
    rows = normalize_corpus(corpus, args.num, args.den, beta)
    text = normalized_csv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} normalized row(s) -> {args.output}")
    else:
        print(text, end="")
    try:
        deco = decorrelation_report(corpus, args.num, args.den, beta)
        print(
            f"pearson_log={deco.pearson_log:.4f} spearman={deco.spearman:.4f} "
            f"decorrelated={deco.decorrelated}"
        )
    except DataError:
        pass
    return 0


def cmd_synth(args) -> int:
    try:
        data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read synth spec: {exc}") from exc
    spec = SynthSpec(
        n_projects=int(data["n_projects"]),
        x_range=(float(data["x_range"][0]), float(data["x_range"][1])),
        true_alpha=float(data["alpha"]),
        true_beta=float(data["beta"]),
        true_k=float(data.get("k", 1)),
        noise_sigma=float(data.get("sigma", 0)),
        seed=int(data.get("seed", 0)),
        x_metric=data.get("x_metric", "classes"),
        y_metric=data.get("y_metric", "methods"),
    )
    corpus = generate_metrics(spec)
    export_metrics_table(corpus, args.output)
    print(f"wrote {len(corpus)} synthetic project(s) -> {args.output}")
    return 0


def cmd_pipeline(args) -> int:
    config = load_config(args.config)
    result = run_pipeline(config)
    print(f"pipeline complete -> {result.out_dir} ({len(result.stages)} stages)")
    return 0


def cmd_report(args) -> int:
    print(render_run_report(args.run_dir), end="")
    return 0


_COMMANDS = {
    "extract": cmd_extract,
    "metrics": cmd_metrics,
    "fit": cmd_fit,
    "bins": cmd_bins,
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
