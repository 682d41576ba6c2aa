"""Command-line surface: assess, chart, design, validate, decompose.

Exit codes for `assess`: 0 on success, 1 when any sample is flagged
low-quality (for scripted gating), 2 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .charts import cusum, estimate_in_control, ewma, write_chart_csv
from .config import RunConfig
from .decomposition import load_effects, write_effects
from .design import maximin_lhd, write_plan
from .errors import RamanQCError
from .pipeline import assess, effects_from_dataset
from .similarity import SimilarityParams, dissimilarity
from .spectra import load_dataset, load_ideal_profile, validate


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.type in (bool, "bool"):
            parser.add_argument(flag, action="store_true", default=None)
        else:
            parser.add_argument(flag, type=float, default=None)


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_json(args.config) if args.config else RunConfig()
    int_fields = {"lag_window", "balance", "chart_baseline"}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            if f.name in int_fields:
                value = int(value)
            setattr(config, f.name, value)
    return config


def _load_effects_and_ideal(args: argparse.Namespace):
    """Common ingestion for assess/chart: baseline decomposition or effects file."""
    ideal = None
    if args.effects:
        effects = load_effects(args.effects)
        ideal_entries = [e for e in effects if e.sample_index == 0]
        effects = [e for e in effects if e.sample_index != 0]
        if ideal_entries:
            ideal = ideal_entries[0].fixed
    else:
        dataset = load_dataset(args.input, args.positions)
        effects = effects_from_dataset(dataset)
        if dataset.ideal is not None:
            ideal = dataset.ideal.intensities
    if ideal is None and args.ideal:
        ideal = load_ideal_profile(args.ideal).intensities
    return effects, ideal


def cmd_assess(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    effects, ideal = _load_effects_and_ideal(args)
    if ideal is None:
        print("error: consistency assessment needs an ideal profile "
              "(sample 0 in the input, or --ideal)", file=sys.stderr)
        return 2
    provenance = {
        "input": str(args.effects or args.input),
        "config_hash": config.digest(),
    }
    report = assess(effects, np.asarray(ideal, float), config, provenance)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
    print(report.to_text())
    return 1 if report.any_low_quality() else 0


def _feature_series(args: argparse.Namespace, config: RunConfig):
    """(d, D) series either from a features CSV or computed from the input."""
    if args.features_csv:
        with open(args.features_csv, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        rows.sort(key=lambda r: int(r["sample"]))
        d = np.array([float(r["max_intensity_diff"]) for r in rows])
        D = np.array([float(r["dissimilarity"]) for r in rows])
        return d, D
    effects, ideal = _load_effects_and_ideal(args)
    if ideal is None:
        raise RamanQCError("charting needs an ideal profile (sample 0 or --ideal)")
    params = SimilarityParams(config.lag_window, config.mean_center)
    ideal = np.asarray(ideal, float)
    d = np.array([abs(ideal.max() - e.fixed.max()) for e in effects])
    D = np.array([dissimilarity(ideal, e.fixed, params) for e in effects])
    return d, D


def cmd_chart(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    d, D = _feature_series(args, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, series in (("max_intensity_diff", d), ("dissimilarity", D)):
        mu0, sigma0 = estimate_in_control(series, config.chart_baseline)
        charts = [
            cusum(series, mu0, sigma0, config.cusum_k, config.cusum_h, name),
            ewma(series, mu0, sigma0, config.ewma_weight, config.ewma_width,
                 statistic=name),
        ]
        write_chart_csv(charts, out / f"chart_{name}.csv")
        for chart, label in zip(charts, ("CUSUM", "EWMA")):
            signal_text = ", ".join(map(str, chart.signals)) or "none"
            print(f"{label}-{name}: signals at {signal_text}")
    return 0


def cmd_design(args: argparse.Namespace) -> int:
    plan = maximin_lhd(args.n, args.dims, args.iters, args.seed, args.restarts)
    write_plan(plan, args.out)
    print(f"wrote {plan.n}-point {plan.dims}-D plan to {args.out} "
          f"(maximin distance {plan.score:.6f})")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.input, args.positions)
    violations = validate(dataset)
    if violations:
        for v in violations:
            print(str(v))
        return 2
    print(f"OK: {len(dataset.samples)} sample(s), "
          f"{len(dataset.grid)} shifts"
          + (", ideal profile present" if dataset.ideal is not None else ""))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.input, args.positions)
    effects = effects_from_dataset(dataset)
    write_effects(effects, args.out)
    print(f"wrote effects for {len(effects)} sample(s) to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramanqc",
        description="Quality indices for multichannel Raman spectra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("--input", type=Path, help="spectra CSV (long format)")
        p.add_argument("--effects", type=Path, help="pre-decomposed effects CSV")
        p.add_argument("--ideal", type=Path, help="separate ideal-profile CSV")
        p.add_argument("--positions", type=Path, help="positions CSV")

    p = sub.add_parser("assess", help="full pipeline: indices, flags, report")
    add_inputs(p)
    p.add_argument("--out", type=Path, required=True, help="report directory")
    _add_config_flags(p)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("chart", help="CUSUM/EWMA baselines over (d, D) series")
    add_inputs(p)
    p.add_argument("--features-csv", type=Path,
                   help="precomputed sample,max_intensity_diff,dissimilarity CSV")
    p.add_argument("--out", type=Path, required=True, help="chart CSV directory")
    _add_config_flags(p)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("design", help="maximin Latin hypercube sampling plan")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="positions CSV path")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("validate", help="check a spectra CSV against the invariants")
    add_inputs(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="run the baseline decomposer, write effects CSV")
    add_inputs(p)
    p.add_argument("--out", type=Path, required=True, help="effects CSV path")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RamanQCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
