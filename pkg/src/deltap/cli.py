"""Command line interface: ``deltap analyze | simulate | report``.

Exit codes: 0 success, 64 unknown variable or pair, 65 unparseable input,
66 input file missing, 70 runtime failure, 78 invalid configuration.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import config_snapshot, load_config
from .data import BinaryMatrix
from .errors import ConfigurationError, LabelLookupError, ParseError
from .files import (
    fmt,
    ingest,
    read_records,
    read_results,
    sha256_file,
    write_distances,
    write_edges,
    write_instances,
    write_json,
    write_results,
)
from .inference import analyze_all_pairs, analyze_pair, analyze_table, with_overrides
from .relational import build_distance_matrix, build_edges
from .report import render_bar_chart, venn_counts
from .synthesis import replicate, simulate_spec, validation_run

log = logging.getLogger("deltap")

EXIT_OK = 0
EXIT_LOOKUP = 64
EXIT_PARSE = 65
EXIT_NO_INPUT = 66
EXIT_RUNTIME = 70
EXIT_CONFIG = 78
OUT_DIR_ENV = "DELTAP_OUT_DIR"


def _pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected A,B but got {text!r}")
    return parts[0], parts[1]


def _itemset(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) < 2:
        raise argparse.ArgumentTypeError(f"an item set needs at least two names: {text!r}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltap", description="Bayesian added-value analysis of binary variables."
    )
    parser.add_argument("--version", action="version", version=f"deltap {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--config", help="INI configuration file")
    sampling.add_argument("--seed", type=int, help="master seed")
    sampling.add_argument("--sampler", choices=("direct", "mcmc"))
    sampling.add_argument("--draws", type=int, help="draws per pair (direct sampler)")
    sampling.add_argument("--chains", type=int)
    sampling.add_argument("--steps", type=int, help="retained steps per chain")
    sampling.add_argument("--burn-in", dest="burn_in", type=int)
    sampling.add_argument("--thin", type=int)
    sampling.add_argument("--workers", type=int)
    sampling.add_argument("--out-dir", dest="out_dir", help=f"default: ${OUT_DIR_ENV} or ./deltap-out")

    p = sub.add_parser("analyze", parents=[sampling], help="analyse all variable pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("instances", "contingency"), default="instances")
    p.add_argument("--categorical", action="append", default=[], metavar="COLUMN",
                   help="one-hot encode this column (repeatable)")
    p.add_argument("--itemset", action="append", default=[], type=_itemset, metavar="X,Y",
                   help="add the conjunction column X&Y (repeatable)")
    p.add_argument("--pair", type=_pair, help="analyse only this pair")

    p = sub.add_parser("simulate", parents=[sampling], help="synthetic validation runs")

    p = sub.add_parser("report", help="bar chart and Venn counts from a results table")
    p.add_argument("--input", help="results.csv (default: <out-dir>/results.csv)")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--pair", type=_pair, help="write Venn counts for A,B")
    return parser


def _out_dir(args) -> Path:
    path = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or "deltap-out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(args):
    config, settings = load_config(args.config)
    config = with_overrides(
        config,
        seed=args.seed,
        sampler=args.sampler,
        draws=args.draws,
        chains=args.chains,
        steps=args.steps,
        burn_in=args.burn_in,
        thin=args.thin,
        workers=args.workers,
    )
    return config, settings


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    config, _ = _config(args)
    out = _out_dir(args)
    if not Path(args.input).exists():
        raise FileNotFoundError(args.input)
    checksum = sha256_file(args.input)

    if args.format == "contingency":
        data = ingest(args.input, "contingency")
        results = [analyze_table(data, config)]
    else:
        data: BinaryMatrix = ingest(
            args.input, "instances", categorical=args.categorical, itemsets=args.itemset
        )
        if args.pair:
            a, b = sorted(args.pair)
            results = [analyze_pair(data, a, b, config)]
        else:
            results = analyze_all_pairs(data, config)

    write_results(results, out / "results.csv", checksum)
    write_edges(build_edges(results), out / "edges.csv", checksum)
    write_distances(build_distance_matrix(results), out / "distances.csv", checksum)
    manifest = {
        "tool": "deltap",
        "version": __version__,
        "command": "analyze",
        "input": str(args.input),
        "input_format": args.format,
        "input_sha256": checksum,
        "categorical": list(args.categorical),
        "itemsets": [list(x) for x in args.itemset],
        "master_seed": config.seed,
        "config": config_snapshot(config),
        "threshold": results[0].threshold if results else None,
        "pair_seeds": {f"{r.var_a},{r.var_b}": r.seed for r in results},
        "outputs": ["results.csv", "edges.csv", "distances.csv"],
        "timing": {"elapsed_seconds": round(time.perf_counter() - started, 3)},
    }
    write_json(manifest, out / "manifest.json")
    n_sig = sum(r.significant for r in results)
    print(f"{len(results)} pairs analysed, {n_sig} significant; outputs in {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    config, settings = _config(args)
    out = _out_dir(args)
    (out / "data").mkdir(exist_ok=True)
    (out / "histograms").mkdir(exist_ok=True)
    summary = [
        ("spec", "prob_a", "prob_b", "delta_p", "n", "seed", "mean", "sd", "ci_low",
         "ci_high", "p_value", "covered", "repetitions", "coverage", "reject_rate")
    ]
    spec_seeds = {}
    for name, spec in zip(settings.names, settings.specs):
        matrix, samples, s = simulate_spec(spec, config)
        spec_seeds[name] = spec.seed
        write_instances(matrix, out / "data" / f"{name}.csv")
        counts, edges = np.histogram(samples.delta_p_ab, bins=settings.bins)
        with open(out / "histograms" / f"{name}.csv", "w", encoding="utf-8") as fh:
            fh.write(f"# delta_p(A,B) posterior; true value {fmt(spec.delta_p)}\n")
            fh.write("bin_low,bin_high,count\n")
            for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                fh.write(f"{fmt(lo)},{fmt(hi)},{int(c)}\n")
        covered = s.ci_low <= spec.delta_p <= s.ci_high
        coverage, reject = float(covered), float(s.significant_at(config.base_significance))
        if settings.repetitions > 1:
            runs = validation_run(replicate(spec, settings.repetitions), config)
            coverage = float(np.mean([r.ci_low <= spec.delta_p <= r.ci_high for _, r in runs]))
            reject = float(np.mean([r.significant_at(config.base_significance) for _, r in runs]))
            with open(out / "histograms" / f"{name}_pvalues.csv", "w", encoding="utf-8") as fh:
                fh.write("seed,p_value\n")
                for sp, r in runs:
                    fh.write(f"{sp.seed},{r.p_value_text}\n")
        summary.append(
            (name, fmt(spec.prob_a), fmt(spec.prob_b), fmt(spec.delta_p), spec.n, spec.seed,
             fmt(s.mean), fmt(s.sd), fmt(s.ci_low), fmt(s.ci_high), s.p_value_text,
             int(covered), settings.repetitions, fmt(coverage), fmt(reject))
        )
    with open(out / "simulation_summary.csv", "w", encoding="utf-8") as fh:
        for row in summary:
            fh.write(",".join(str(c) for c in row) + "\n")
    write_json(
        {
            "tool": "deltap",
            "version": __version__,
            "command": "simulate",
            "master_seed": config.seed,
            "config": config_snapshot(config),
            "spec_seeds": spec_seeds,
            "repetitions": settings.repetitions,
            "timing": {"elapsed_seconds": round(time.perf_counter() - started, 3)},
        },
        out / "manifest.json",
    )
    print(f"{len(settings.specs)} simulations written to {out}")
    return EXIT_OK


def _checksum_of(path) -> str | None:
    comments, _, _ = read_records(path)
    for line in comments:
        if line.startswith("input-sha256:"):
            return line.split(":", 1)[1].strip()
    return None


def cmd_report(args) -> int:
    out = _out_dir(args)
    source = Path(args.input) if args.input else out / "results.csv"
    if not source.exists():
        raise FileNotFoundError(source)
    rows = read_results(source)
    checksum = _checksum_of(source)
    (out / "bars.svg").write_text(render_bar_chart(rows, checksum), encoding="utf-8")
    if args.pair:
        v = venn_counts(rows, *args.pair)
        with open(out / "venn.csv", "w", encoding="utf-8") as fh:
            if checksum:
                fh.write(f"# input-sha256: {checksum}\n")
            fh.write("region,count\n")
            fh.write(f"{v.a} only,{v.a_only}\n{v.b} only,{v.b_only}\nboth,{v.both}\n")
        print(f"{v.a} only: {v.a_only}, {v.b} only: {v.b_only}, both: {v.both}")
    print(f"report written to {out}")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except LabelLookupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LOOKUP
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: input not found: {exc}", file=sys.stderr)
        return EXIT_NO_INPUT
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
