"""Command-line front end: graph generation, measurement, and experiments.

Exit codes: 0 success, 1 usage error, 2 I/O or input-data error, 3 graph
generation failure (repeated-pairing cap exhausted).

Reproducibility contract: a fixed --seed makes `generate` byte-identical
across runs, and makes experiment sweeps byte-identical except for the
runtime_ms column.  Sweep cells derive their RNG seeds as
child_seed = first 8 little-endian bytes of
SHA-256("degdep-seed" 0x1f master 0x1f part ...), so results do not depend
on execution order or --jobs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .config_model import (
    DEFAULT_MAX_ATTEMPTS,
    GenerationError,
    generate_cm,
    generate_ecm,
    generate_rcm,
)
from .correlations import MEASURES, full_report
from .digraph import read_edge_list, write_edge_list
from .experiments import (
    BUILTIN_JOINTS,
    NULL_MODEL_MEASURES,
    PAIR_LABELS,
    ExperimentConfig,
    builtin_joint,
    run_consistency,
    run_endpoint_laws,
    run_null_model,
    write_rows_csv,
    write_summary_csv,
)
from .pmf import DegenerateLawError, parse_law, read_joint_pmf

__all__ = ["main"]


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _comma_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None


def _comma_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_laws(out_law: str, in_law: str):
    try:
        return parse_law(out_law), parse_law(in_law)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="degdep",
        description=(
            "Degree-degree dependency measures (two Spearman variants, "
            "Kendall's tau, Pearson) on directed multigraphs, and directed "
            "configuration-model generators usable as null models."
        ),
        epilog=(
            "Environment: DEGDEP_ZETA_KMAX overrides the default truncation "
            "(10^6) of zeta:a laws; DEGDEP_PURE_PYTHON=1 forces the numpy "
            "pair-counting kernel."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a configuration-model graph")
    gen.add_argument("--model", choices=("cm", "rcm", "ecm"), required=True)
    gen.add_argument("--n", type=int, required=True, help="number of nodes")
    gen.add_argument("--out-law", required=True, help="out-degree law, e.g. zeta:2.5")
    gen.add_argument("--in-law", required=True, help="in-degree law, e.g. poisson:3")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS,
                     help="rcm only: pairing attempts before giving up")
    gen.add_argument("-o", "--output", required=True, help="edge-list output path")

    meas = sub.add_parser("measure", help="measure a graph given as an edge list")
    meas.add_argument("graph", help="edge-list file: 'src<TAB>dst' per occurrence")
    meas.add_argument("--pairs", type=_comma_list, default=PAIR_LABELS,
                      help=f"subset of {','.join(PAIR_LABELS)}")
    meas.add_argument("--measures", type=_comma_list, default=MEASURES,
                      help=f"subset of {','.join(MEASURES)}")
    meas.add_argument("--seed", type=int, default=0, help="tie-break seed")
    meas.add_argument("--tie-break-replicas", type=int, default=1)
    meas.add_argument("--format", choices=("json", "csv"), default="json")
    meas.add_argument("-o", "--output", default=None, help="default: stdout")

    exp = sub.add_parser("experiment", help="run a canned experiment sweep")
    exp_sub = exp.add_subparsers(dest="experiment", required=True)

    def add_sweep_args(p, with_laws=True):
        p.add_argument("--sizes", type=_comma_ints, required=True,
                       help="ascending comma-separated node counts")
        p.add_argument("--replicas", type=int, required=True)
        if with_laws:
            p.add_argument("--out-law", required=True)
            p.add_argument("--in-law", required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--jobs", type=int, default=1,
                       help="concurrent sweep cells (default 1)")
        p.add_argument("-o", "--output", required=True, help="rows CSV path")

    null = exp_sub.add_parser("null-model",
                              help="measure generated graphs over a size/replica grid")
    null.add_argument("--model", choices=("cm", "rcm", "ecm"), required=True)
    add_sweep_args(null)
    null.add_argument("--pairs", type=_comma_list, default=PAIR_LABELS)
    null.add_argument("--measures", type=_comma_list, default=NULL_MODEL_MEASURES)
    null.add_argument("--tie-break-replicas", type=int, default=32)
    null.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)

    cons = exp_sub.add_parser("consistency",
                              help="estimators on iid samples vs exact population targets")
    cons.add_argument("--joint", required=True,
                      help=f"builtin joint ({', '.join(BUILTIN_JOINTS)}) or a "
                           "'x<TAB>y<TAB>prob' file")
    add_sweep_args(cons, with_laws=False)
    cons.add_argument("--tie-break-replicas", type=int, default=32)

    tab = exp_sub.add_parser("table1",
                             help="empirical endpoint-degree laws of multigraphs vs "
                                  "their plain/size-biased limits")
    tab.add_argument("--model", choices=("cm",), default="cm")
    add_sweep_args(tab)
    tab.add_argument("--pairs", type=_comma_list, default=PAIR_LABELS)

    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_generate(args) -> int:
    out_law, in_law = _parse_laws(args.out_law, args.in_law)
    rng = np.random.default_rng(args.seed)
    if args.model == "cm":
        result = generate_cm(args.n, out_law, in_law, rng)
    elif args.model == "rcm":
        result = generate_rcm(args.n, out_law, in_law, rng, max_attempts=args.max_attempts)
    else:
        result = generate_ecm(args.n, out_law, in_law, rng)
    write_edge_list(result.graph, args.output)
    meta = {
        "model": args.model,
        "n": args.n,
        "out_law": args.out_law,
        "in_law": args.in_law,
        "edges": result.graph.edge_count,
        "bidegree": {
            "total_stubs": result.bidegree.total_stubs,
            "balance_added": result.bidegree.balance_added,
        },
        "ledger": {
            "self_loops_removed": result.ledger.self_loops_removed,
            "multi_edges_merged": result.ledger.multi_edges_merged,
            "total_erased": result.ledger.total_erased,
        },
        "attempts": result.attempts,
        "seeds": {"master": args.seed},
    }
    with open(args.output + ".meta.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def _cmd_measure(args) -> int:
    unknown_pairs = set(args.pairs) - set(PAIR_LABELS)
    if unknown_pairs:
        raise _UsageError(f"unknown pairs: {sorted(unknown_pairs)}")
    unknown_measures = set(args.measures) - set(MEASURES)
    if unknown_measures:
        raise _UsageError(f"unknown measures: {sorted(unknown_measures)}")
    graph = read_edge_list(args.graph)
    report = full_report(graph, seed=args.seed, tie_break_replicas=args.tie_break_replicas)
    payload = report.to_dict()
    payload["pairs"] = {
        label: {
            key: value
            for key, value in entry.items()
            if key in args.measures or key.startswith("degenerate_")
        }
        for label, entry in payload["pairs"].items()
        if label in args.pairs
    }
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = ["pair,measure,value,defined"]
        for label, entry in payload["pairs"].items():
            for key, value in entry.items():
                if key.startswith("degenerate_"):
                    continue
                defined = value is not None
                lines.append(
                    f"{label},{key},{'' if value is None else repr(value)},"
                    f"{'true' if defined else 'false'}"
                )
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _resolve_joint(spec_text: str):
    if spec_text in BUILTIN_JOINTS:
        return builtin_joint(spec_text)
    if os.path.exists(spec_text):
        return read_joint_pmf(spec_text)
    raise _UsageError(
        f"--joint {spec_text!r} is neither a builtin ({', '.join(BUILTIN_JOINTS)}) "
        "nor an existing file"
    )


def _sweep_config(args, **extra) -> ExperimentConfig:
    _parse_laws(args.out_law, args.in_law)
    try:
        return ExperimentConfig(
            model=args.model, sizes=args.sizes, replicas=args.replicas,
            out_law=args.out_law, in_law=args.in_law, seed=args.seed,
            pairs=args.pairs, jobs=args.jobs, **extra,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _cmd_experiment(args) -> int:
    if args.experiment == "null-model":
        config = _sweep_config(
            args,
            measures=args.measures,
            tie_break_replicas=args.tie_break_replicas,
            max_attempts=args.max_attempts,
        )
        rows = run_null_model(config)
        write_rows_csv(rows, args.output)
        write_summary_csv(rows, args.output + ".summary.csv")
        return 0
    if args.experiment == "consistency":
        joint = _resolve_joint(args.joint)
        try:
            rows = run_consistency(
                joint, sizes=args.sizes, replicas=args.replicas, seed=args.seed,
                tie_break_replicas=args.tie_break_replicas, jobs=args.jobs,
            )
        except DegenerateLawError as exc:
            raise _UsageError(f"degenerate joint: {exc}") from None
        write_rows_csv(rows, args.output)
        return 0
    config = _sweep_config(args)
    rows = run_endpoint_laws(config)
    write_rows_csv(rows, args.output)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "measure":
            return _cmd_measure(args)
        return _cmd_experiment(args)
    except _UsageError as exc:
        sys.stderr.write(f"degdep: error: {exc}\n")
        return 1
    except GenerationError as exc:
        sys.stderr.write(f"degdep: generation failed: {exc}\n")
        return 3
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"degdep: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
