"""Seeded, reproducible experiment sweeps and their CSV row formats.

Three canned experiments drive the library end to end:

  - null-model: generate configuration-model graphs over a size/replica grid
    and record every dependency measure; the rank measures should shrink
    toward zero as graphs grow.
  - consistency: sample iid integer pairs from a known joint law, treat them
    as an edge multiset, and compare every estimator with its exact
    population target.
  - endpoint laws ("table1"): compare empirical endpoint-degree marginals of
    multigraphs against their predicted plain/size-biased limits.

Every cell (size index, replica index) owns RNGs seeded by
:func:`degdep.seeding.child_seed`, so results do not depend on execution
order and sweeps are byte-reproducible (the runtime_ms column is excluded
from that contract).  Cells may run concurrently; rows are sorted before
writing.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .config_model import (
    DEFAULT_MAX_ATTEMPTS,
    GenerationError,
    endpoint_degree_laws,
    generate_cm,
    generate_ecm,
    generate_rcm,
)
from .correlations import (
    MEASURES,
    kendall_xy,
    pearson_xy,
    spearman_average_xy,
    spearman_uniform_xy,
)
from .digraph import ALL_PAIRS, DegreeTypePair
from .pmf import (
    JointPmf,
    Pmf,
    kendall_population,
    parse_law,
    spearman_average_limit,
    spearman_population,
    tv_distance,
)
from .seeding import child_seed

__all__ = [
    "ExperimentConfig",
    "ExperimentRow",
    "ConsistencyRow",
    "EndpointLawRow",
    "run_null_model",
    "run_consistency",
    "run_endpoint_laws",
    "write_rows_csv",
    "read_rows_csv",
    "write_summary_csv",
    "builtin_joint",
    "BUILTIN_JOINTS",
    "summarize_null_model",
]

PAIR_LABELS = tuple(p.label for p in ALL_PAIRS)
NULL_MODEL_MEASURES = ("spearman_uniform", "spearman_average", "kendall")
CONSISTENCY_MEASURES = ("spearman_uniform", "spearman_average", "kendall")

_MODELS = ("cm", "rcm", "ecm")


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of a generation sweep (null-model / endpoint laws)."""

    model: str
    sizes: tuple[int, ...]
    replicas: int
    out_law: str
    in_law: str
    seed: int
    pairs: tuple[str, ...] = PAIR_LABELS
    measures: tuple[str, ...] = NULL_MODEL_MEASURES
    tie_break_replicas: int = 32
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    jobs: int = 1

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}, got {self.model!r}")
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("sizes must be positive")
        if list(sizes) != sorted(sizes):
            raise ValueError("sizes must be ascending")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.tie_break_replicas < 1:
            raise ValueError("tie_break_replicas must be >= 1")
        for label in self.pairs:
            DegreeTypePair.from_label(label)
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise ValueError(f"unknown measures: {sorted(unknown)}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "measures", tuple(self.measures))

    def laws(self) -> tuple[Pmf, Pmf]:
        return parse_law(self.out_law), parse_law(self.in_law)


@dataclass(frozen=True)
class ExperimentRow:
    """One measure on one generated graph: the null-model sweep row."""

    n: int
    replica: int
    pair: str
    measure: str
    value: float | None
    defined: bool
    runtime_ms: float
    attempts: int
    erased_fraction: float | None


@dataclass(frozen=True)
class ConsistencyRow:
    """One estimator vs its population target on one iid sample."""

    n: int
    replica: int
    measure: str
    value: float | None
    target: float
    abs_error: float | None
    defined: bool
    runtime_ms: float


@dataclass(frozen=True)
class EndpointLawRow:
    """Total-variation gap of one empirical endpoint marginal to its limit."""

    n: int
    replica: int
    pair: str
    side: str
    tv_distance: float
    runtime_ms: float


# ---------------------------------------------------------------------------
# CSV plumbing
# ---------------------------------------------------------------------------

_OPTIONAL_FLOATS = {"value", "erased_fraction", "abs_error"}


def _cell_to_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _text_to_cell(name: str, text: str, target_type):
    if name in _OPTIONAL_FLOATS and text == "":
        return None
    if target_type is bool:
        return text == "true"
    return target_type(text)


def write_rows_csv(rows, path) -> None:
    """Write dataclass rows as CSV; floats use repr so parsing is lossless."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    names = [f.name for f in fields(rows[0])]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in rows:
            writer.writerow([_cell_to_text(getattr(row, name)) for name in names])


_ROW_TYPES = {"n": int, "replica": int, "pair": str, "measure": str, "side": str,
              "value": float, "target": float, "abs_error": float,
              "defined": bool, "runtime_ms": float, "attempts": int,
              "erased_fraction": float, "tv_distance": float}


def read_rows_csv(path, row_cls=ExperimentRow):
    """Parse a CSV written by :func:`write_rows_csv` back into row objects."""
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = [f.name for f in fields(row_cls)]
        if header != expected:
            raise ValueError(f"{path}: header {header} does not match {expected}")
        for record in reader:
            kwargs = {
                name: _text_to_cell(name, text, _ROW_TYPES[name])
                for name, text in zip(header, record)
            }
            out.append(row_cls(**kwargs))
    return out


def summarize_null_model(rows) -> list[dict]:
    """Per (n, pair, measure): count of defined values, mean, std, mean |value|."""
    groups: dict[tuple, list[float]] = {}
    totals: dict[tuple, int] = {}
    for row in rows:
        key = (row.n, row.pair, row.measure)
        totals[key] = totals.get(key, 0) + 1
        if row.defined and row.value is not None:
            groups.setdefault(key, []).append(row.value)
    summary = []
    for key in sorted(totals):
        vals = groups.get(key, [])
        n, pair, measure = key
        entry = {
            "n": n,
            "pair": pair,
            "measure": measure,
            "replicas": totals[key],
            "defined": len(vals),
            "mean": float(np.mean(vals)) if vals else None,
            "std": float(np.std(vals)) if vals else None,
            "mean_abs": float(np.mean(np.abs(vals))) if vals else None,
        }
        summary.append(entry)
    return summary


def write_summary_csv(rows, path) -> None:
    """Write the per-cell summary block produced by :func:`summarize_null_model`."""
    summary = summarize_null_model(rows)
    names = ["n", "pair", "measure", "replicas", "defined", "mean", "std", "mean_abs"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for entry in summary:
            writer.writerow([_cell_to_text(entry[name]) for name in names])


# ---------------------------------------------------------------------------
# Sweep execution
# ---------------------------------------------------------------------------


def _run_cells(cells, worker, jobs: int):
    if jobs <= 1:
        results = [worker(cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, cells))
    rows = [row for cell_rows in results for row in cell_rows]
    rows.sort(key=_row_sort_key)
    return rows


def _row_sort_key(row):
    key = [row.n, row.replica]
    for name in ("pair", "side", "measure"):
        if hasattr(row, name):
            key.append(getattr(row, name))
    return tuple(key)


def _generate(config: ExperimentConfig, n: int, gen_seed: int):
    out_law, in_law = config.laws()
    rng = np.random.default_rng(gen_seed)
    if config.model == "cm":
        return generate_cm(n, out_law, in_law, rng)
    if config.model == "rcm":
        return generate_rcm(n, out_law, in_law, rng, max_attempts=config.max_attempts)
    return generate_ecm(n, out_law, in_law, rng)


def _measure_pair(config, x, y, size_index, replica, pair_index, measure):
    if measure == "spearman_uniform":
        draws = [
            spearman_uniform_xy(
                x, y, child_seed(config.seed, size_index, replica, pair_index, rep, "tie-break")
            )
            for rep in range(config.tie_break_replicas)
        ]
        return float(np.mean(draws))
    if measure == "spearman_average":
        return spearman_average_xy(x, y)
    if measure == "kendall":
        return kendall_xy(x, y)
    return pearson_xy(x, y)


def run_null_model(config: ExperimentConfig) -> list[ExperimentRow]:
    """Measure every configured pair on a grid of generated graphs.

    Generation failures (the expected RCM outcome under heavy tails) become
    rows with defined=false rather than aborting the sweep.
    """
    pair_index = {label: i for i, label in enumerate(PAIR_LABELS)}

    def worker(cell):
        size_index, replica = cell
        n = config.sizes[size_index]
        gen_seed = child_seed(config.seed, size_index, replica, "generate")
        rows = []
        try:
            result = _generate(config, n, gen_seed)
        except GenerationError as exc:
            for label in config.pairs:
                for measure in config.measures:
                    rows.append(
                        ExperimentRow(
                            n=n, replica=replica, pair=label, measure=measure,
                            value=None, defined=False, runtime_ms=0.0,
                            attempts=exc.attempts, erased_fraction=None,
                        )
                    )
            return rows
        erased = (
            result.ledger.total_erased / n if config.model == "ecm" else None
        )
        for label in config.pairs:
            pair = DegreeTypePair.from_label(label)
            view = result.graph.edge_degree_view(pair)
            x, y = view.source_degrees, view.target_degrees
            for measure in config.measures:
                t0 = time.perf_counter()
                value = _measure_pair(
                    config, x, y, size_index, replica, pair_index[label], measure
                )
                elapsed_ms = (time.perf_counter() - t0) * 1e3
                rows.append(
                    ExperimentRow(
                        n=n, replica=replica, pair=label, measure=measure,
                        value=value, defined=value is not None,
                        runtime_ms=round(elapsed_ms, 3),
                        attempts=result.attempts, erased_fraction=erased,
                    )
                )
        return rows

    cells = [(si, r) for si in range(len(config.sizes)) for r in range(config.replicas)]
    return _run_cells(cells, worker, config.jobs)


# ---------------------------------------------------------------------------
# Consistency experiment
# ---------------------------------------------------------------------------

BUILTIN_JOINTS = ("bernoulli-equal", "bernoulli-opposite", "bernoulli-product")


def builtin_joint(name: str) -> JointPmf:
    """Small named joints used by the consistency experiment."""
    if name == "bernoulli-equal":
        return JointPmf.from_entries({(0, 0): 0.5, (1, 1): 0.5})
    if name == "bernoulli-opposite":
        return JointPmf.from_entries({(0, 1): 0.5, (1, 0): 0.5})
    if name == "bernoulli-product":
        return JointPmf.from_entries(
            {(0, 0): 0.25, (0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.25}
        )
    raise ValueError(f"unknown builtin joint {name!r}; known: {BUILTIN_JOINTS}")


def run_consistency(
    joint: JointPmf,
    sizes,
    replicas: int,
    seed: int,
    tie_break_replicas: int = 32,
    jobs: int = 1,
) -> list[ConsistencyRow]:
    """Sample iid pairs from `joint` and compare estimators with exact targets.

    Rejects joints with a point-mass marginal (every target is then
    degenerate).  Targets: the population Spearman rho for uniform-rank
    ranks, its S-factor-rescaled version for average ranks, and the
    population Kendall tau.
    """
    sizes = tuple(int(s) for s in sizes)
    if not sizes or any(s < 2 for s in sizes):
        raise ValueError("sizes must all be >= 2")
    targets = {
        "spearman_uniform": spearman_population(joint),
        "spearman_average": spearman_average_limit(joint),
        "kendall": kendall_population(joint),
    }

    def worker(cell):
        size_index, replica = cell
        n = sizes[size_index]
        sample_rng = np.random.default_rng(
            child_seed(seed, size_index, replica, "consistency-sample")
        )
        x, y = joint.sample(sample_rng, n)
        rows = []
        for measure in CONSISTENCY_MEASURES:
            t0 = time.perf_counter()
            if measure == "spearman_uniform":
                draws = [
                    spearman_uniform_xy(
                        x, y, child_seed(seed, size_index, replica, rep, "tie-break")
                    )
                    for rep in range(tie_break_replicas)
                ]
                value = float(np.mean(draws))
            elif measure == "spearman_average":
                value = spearman_average_xy(x, y)
            else:
                value = kendall_xy(x, y)
            elapsed_ms = (time.perf_counter() - t0) * 1e3
            target = targets[measure]
            rows.append(
                ConsistencyRow(
                    n=n, replica=replica, measure=measure,
                    value=value, target=target,
                    abs_error=None if value is None else abs(value - target),
                    defined=value is not None,
                    runtime_ms=round(elapsed_ms, 3),
                )
            )
        return rows

    cells = [(si, r) for si in range(len(sizes)) for r in range(replicas)]
    return _run_cells(cells, worker, jobs)


# ---------------------------------------------------------------------------
# Endpoint-law (table1) experiment
# ---------------------------------------------------------------------------


def run_endpoint_laws(config: ExperimentConfig) -> list[EndpointLawRow]:
    """TV distance of multigraph endpoint-degree marginals to their limits.

    Only meaningful for the plain multigraph model (cm), whose endpoint laws
    are the tabulated plain/size-biased laws.
    """
    if config.model != "cm":
        raise ValueError("endpoint-law experiment requires model='cm'")
    out_law, in_law = config.laws()

    def worker(cell):
        size_index, replica = cell
        n = config.sizes[size_index]
        gen_seed = child_seed(config.seed, size_index, replica, "generate")
        result = _generate(config, n, gen_seed)
        rows = []
        for label in config.pairs:
            pair = DegreeTypePair.from_label(label)
            t0 = time.perf_counter()
            source_law, target_law = endpoint_degree_laws(pair, out_law, in_law)
            tv_source = tv_distance(
                result.graph.empirical_marginal("source", pair.alpha), source_law
            )
            tv_target = tv_distance(
                result.graph.empirical_marginal("target", pair.beta), target_law
            )
            elapsed_ms = round((time.perf_counter() - t0) * 1e3 / 2, 3)
            rows.append(
                EndpointLawRow(n=n, replica=replica, pair=label, side="source",
                               tv_distance=tv_source, runtime_ms=elapsed_ms)
            )
            rows.append(
                EndpointLawRow(n=n, replica=replica, pair=label, side="target",
                               tv_distance=tv_target, runtime_ms=elapsed_ms)
            )
        return rows

    cells = [(si, r) for si in range(len(config.sizes)) for r in range(config.replicas)]
    return _run_cells(cells, worker, config.jobs)
