"""Degree-degree dependency estimators on directed multigraphs.

Four measures are computed per degree-type pair over the edge occurrences of
a graph: Spearman's rho with random tie-breaking (uniform ranks), Spearman's
rho with average ranks, Kendall's tau (tau-a: the denominator is m(m-1) and
tied pairs count in neither direction), and Pearson's correlation of the raw
degrees.  The distribution-based forms (tie-aware cdf expectations over the
empirical edge law) are provided alongside so the exact rank identities can
be verified.

All estimators also accept raw integer pair data, which is how the sampling
consistency experiments drive them.  Exact integer arithmetic is used for
counts and rank sums wherever it fits in 64 bits; m here always denotes the
number of edge occurrences (or data pairs).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .digraph import ALL_PAIRS, DegreeTypePair, DirectedMultigraph
from .seeding import child_seed

__all__ = [
    "uniform_ranks",
    "average_ranks",
    "concordance_counts",
    "kendall_naive",
    "spearman_uniform_xy",
    "spearman_average_xy",
    "kendall_xy",
    "pearson_xy",
    "spearman_uniform",
    "spearman_average",
    "kendall_graph",
    "pearson_assortativity",
    "spearman_from_distributions",
    "kendall_from_distributions",
    "PairMeasures",
    "CorrelationReport",
    "full_report",
    "MEASURES",
]

MEASURES = ("spearman_uniform", "spearman_average", "kendall", "pearson")

# exact int64 dot products of centered doubled ranks are safe below this size
_EXACT_RANK_LIMIT = 2_000_000
_EXACT_CDF_LIMIT = 1_200_000


def _as_rng(rng) -> np.random.Generator:
    return np.random.default_rng(rng)


def _as_values(values, name: str = "values") -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.all(arr == rounded):
            raise ValueError(f"{name} must be integers")
        arr = rounded
    return arr.astype(np.int64)


def _require_pairs(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = _as_values(x, "x")
    y = _as_values(y, "y")
    if x.size != y.size:
        raise ValueError("x and y must have the same length")
    if x.size < 2:
        raise ValueError("need at least 2 data pairs (edge occurrences)")
    return x, y


# ---------------------------------------------------------------------------
# Ranks
# ---------------------------------------------------------------------------


def uniform_ranks(values, rng=None, *, noise=None) -> np.ndarray:
    """Ranks with ties broken by fresh iid uniform noise; rank 1 = largest.

    Equivalent to ranking the continuized values v + U: the noise can only
    reorder exact ties, so the result is always a permutation of 1..m and is
    deterministic given the RNG state.  An explicit per-entry `noise` vector
    may be supplied instead of an RNG.
    """
    values = _as_values(values)
    if noise is None:
        noise = _as_rng(rng).random(values.size)
    else:
        noise = np.asarray(noise, dtype=np.float64)
        if noise.shape != values.shape:
            raise ValueError("noise must match values in length")
    order = np.lexsort((noise, values))  # ascending value, ties by noise
    ranks = np.empty(values.size, dtype=np.int64)
    ranks[order] = np.arange(values.size, 0, -1)
    return ranks


def _average_ranks_doubled(values: np.ndarray) -> np.ndarray:
    """2 * average rank as exact integers: 1 + 2*(#greater) + (#equal)."""
    uniq, inv, counts = np.unique(values, return_inverse=True, return_counts=True)
    greater = counts.sum() - np.cumsum(counts)  # strictly greater than uniq[i]
    doubled = 1 + 2 * greater + counts
    return doubled[inv].astype(np.int64)


def average_ranks(values) -> np.ndarray:
    """Average ranks (ties share their mean rank); rank 1 = largest.

    Deterministic; the ranks are half-integers and always sum to m(m+1)/2.
    """
    values = _as_values(values)
    return _average_ranks_doubled(values) / 2.0


# ---------------------------------------------------------------------------
# Concordant / discordant pair counting
# ---------------------------------------------------------------------------


def _run_pair_count(change_mask: np.ndarray) -> int:
    """Unordered pairs inside equal runs, given a 'new run starts here' mask."""
    starts = np.flatnonzero(change_mask)
    counts = np.diff(np.r_[starts, change_mask.size])
    return int(np.sum(counts * (counts - 1) // 2))


def concordance_counts(x, y) -> tuple[int, int]:
    """Exact (concordant, discordant) unordered pair counts in O(m log m).

    A pair is concordant iff (x_i - x_j)(y_i - y_j) > 0 and discordant iff
    < 0; pairs tied in either coordinate count in neither.  Sorting by
    (x, then y) turns the discordant count into a strict inversion count of
    the y sequence, delegated to the counting kernel; the tie groups are
    handled by exact run-length arithmetic.
    """
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    m = x.size
    if m < 2:
        return 0, 0
    order = np.lexsort((y, x))
    xs = x[order]
    ys = y[order]
    discordant = kernels.count_inversions(ys)
    total = m * (m - 1) // 2
    ties_x = _run_pair_count(np.r_[True, xs[1:] != xs[:-1]])
    y_sorted = np.sort(y)
    ties_y = _run_pair_count(np.r_[True, y_sorted[1:] != y_sorted[:-1]])
    ties_xy = _run_pair_count(
        np.r_[True, (xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1])]
    )
    concordant = total - ties_x - ties_y + ties_xy - discordant
    return int(concordant), int(discordant)


def kendall_naive(x, y) -> tuple[int, int]:
    """(concordant, discordant) by the O(m^2) definition; testing oracle.

    Independent of the fast path: compares every pair of rows directly.
    Intended for m up to a few thousand.
    """
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    m = x.size
    concordant = discordant = 0
    block = 256
    for start in range(0, m, block):
        stop = min(start + block, m)
        dx = np.sign(x[start:stop, None] - x[None, :])
        dy = np.sign(y[start:stop, None] - y[None, :])
        prod = dx * dy
        concordant += int(np.count_nonzero(prod > 0))
        discordant += int(np.count_nonzero(prod < 0))
    return concordant // 2, discordant // 2


# ---------------------------------------------------------------------------
# Estimators on raw integer pairs
# ---------------------------------------------------------------------------


def _centered_rank_dot(r2a: np.ndarray, r2b: np.ndarray, m: int):
    """Sum over pairs of (2R_a - (m+1)) (2R_b - (m+1)); exact when it fits."""
    da = r2a - (m + 1)
    db = r2b - (m + 1)
    if m <= _EXACT_RANK_LIMIT:
        return int(np.dot(da, db))
    return float(np.dot(da.astype(np.float64), db.astype(np.float64)))


def spearman_uniform_xy(x, y, rng) -> float:
    """Spearman's rho after random tie-breaking, one draw per call.

    Source and target ranks use two independent noise vectors drawn from the
    given RNG.  With both rank vectors permutations of 1..m, the classical
    closed form reduces to 3 * sum((2Ra-(m+1))(2Rb-(m+1))) / (m^3 - m).
    """
    x, y = _require_pairs(x, y)
    rng = _as_rng(rng)
    m = x.size
    ra = uniform_ranks(x, rng)
    rb = uniform_ranks(y, rng)
    num = _centered_rank_dot(2 * ra, 2 * rb, m)
    value = 3 * num / (m**3 - m)
    return min(1.0, max(-1.0, value))


def spearman_average_xy(x, y) -> float | None:
    """Spearman's rho on average ranks; None when a side is fully tied.

    Numerator and the two variance terms are the classical tie-corrected
    forms 4*sum(Ra Rb) - m(m+1)^2 and sqrt(4*sum(R^2) - m(m+1)^2), computed
    exactly through centered doubled ranks.
    """
    x, y = _require_pairs(x, y)
    m = x.size
    r2a = _average_ranks_doubled(x)
    r2b = _average_ranks_doubled(y)
    var_a = _centered_rank_dot(r2a, r2a, m)
    var_b = _centered_rank_dot(r2b, r2b, m)
    if var_a == 0 or var_b == 0:
        return None
    num = _centered_rank_dot(r2a, r2b, m)
    if isinstance(num, int) and isinstance(var_a, int) and isinstance(var_b, int):
        prod = var_a * var_b
        root = math.isqrt(prod)
        denom = root if root * root == prod else math.sqrt(prod)
    else:
        denom = math.sqrt(float(var_a) * float(var_b))
    return min(1.0, max(-1.0, num / denom))


def kendall_xy(x, y) -> float:
    """Kendall's tau-a: 2(N_C - N_D) / (m(m-1)), ties uncorrected."""
    x, y = _require_pairs(x, y)
    m = x.size
    n_c, n_d = concordance_counts(x, y)
    return 2 * (n_c - n_d) / (m * (m - 1))


def pearson_xy(x, y) -> float | None:
    """Sample Pearson correlation of the raw pairs; None on zero variance.

    Uses exact integer sums when they provably fit in 64 bits (so small
    graphs produce exact rationals), and a two-pass mean-then-moments double
    precision path otherwise for stability on heavy-tailed degrees.
    """
    x, y = _require_pairs(x, y)
    m = x.size
    mx = int(np.abs(x).max())
    my = int(np.abs(y).max())
    bound = 2**62
    if m * max(mx, 1) ** 2 < bound and m * max(my, 1) ** 2 < bound:
        sx, sy = int(x.sum()), int(y.sum())
        sxx, syy = int(np.dot(x, x)), int(np.dot(y, y))
        sxy = int(np.dot(x, y))
        var_x = m * sxx - sx * sx
        var_y = m * syy - sy * sy
        if var_x == 0 or var_y == 0:
            return None
        num = m * sxy - sx * sy
        prod = var_x * var_y
        root = math.isqrt(prod)
        denom = root if root * root == prod else math.sqrt(prod)
        return min(1.0, max(-1.0, num / denom))
    dx = x - x.mean()
    dy = y - y.mean()
    var_x = float(np.dot(dx, dx))
    var_y = float(np.dot(dy, dy))
    if var_x == 0.0 or var_y == 0.0:
        return None
    value = float(np.dot(dx, dy)) / math.sqrt(var_x * var_y)
    return min(1.0, max(-1.0, value))


# ---------------------------------------------------------------------------
# Estimators on graphs
# ---------------------------------------------------------------------------


def _view_arrays(g: DirectedMultigraph, pair: DegreeTypePair) -> tuple[np.ndarray, np.ndarray]:
    view = g.edge_degree_view(pair)
    return view.source_degrees, view.target_degrees


def spearman_uniform(g: DirectedMultigraph, pair: DegreeTypePair, rng) -> float:
    """Uniform-rank Spearman's rho of the endpoint degrees; one tie-break draw."""
    x, y = _view_arrays(g, pair)
    return spearman_uniform_xy(x, y, rng)


def spearman_average(g: DirectedMultigraph, pair: DegreeTypePair) -> float | None:
    """Average-rank Spearman's rho; None when a side's degrees are constant."""
    x, y = _view_arrays(g, pair)
    return spearman_average_xy(x, y)


def kendall_graph(g: DirectedMultigraph, pair: DegreeTypePair) -> float:
    """Kendall's tau-a of the endpoint degrees over edge occurrences."""
    x, y = _view_arrays(g, pair)
    return kendall_xy(x, y)


def pearson_assortativity(g: DirectedMultigraph, pair: DegreeTypePair) -> float | None:
    """Pearson correlation of the endpoint degrees; None on a constant side."""
    x, y = _view_arrays(g, pair)
    return pearson_xy(x, y)


def _empirical_tie_aware_int(values: np.ndarray) -> np.ndarray:
    """m * tie-aware empirical cdf at each value: count(<= v) + count(<= v-1)."""
    uniq, inv, counts = np.unique(values, return_inverse=True, return_counts=True)
    cum = np.cumsum(counts)
    return (cum + cum - counts)[inv]


def spearman_from_distributions(g: DirectedMultigraph, pair: DegreeTypePair) -> float:
    """Distribution form of Spearman's rho: 3 E[sF_a sF_b | G] - 3.

    sF_a, sF_b are the tie-aware cdfs of the empirical endpoint-degree
    marginals, evaluated at the sampled edge's degrees; computed with integer
    counts and one exact rational division at the end.
    """
    g._require_edges()
    x, y = _view_arrays(g, pair)
    m = x.size
    sfa = _empirical_tie_aware_int(x)
    sfb = _empirical_tie_aware_int(y)
    if m <= _EXACT_CDF_LIMIT:
        total = int(np.dot(sfa, sfb))
        return float(Fraction(3 * total, m**3) - 3)
    total = float(np.dot(sfa.astype(np.float64), sfb.astype(np.float64)))
    return 3.0 * total / m**3 - 3.0


def kendall_from_distributions(g: DirectedMultigraph, pair: DegreeTypePair) -> float:
    """Distribution form of Kendall's tau: E[sH(d_a, d_b) | G] - 1.

    sH is the tie-aware joint cdf of the empirical edge joint, evaluated at
    the sampled edge itself.  Exact integer counts; equals
    2 (N_C - N_D) / m^2, i.e. the pair estimator with an occurrence-squared
    denominator.
    """
    g._require_edges()
    x, y = _view_arrays(g, pair)
    m = x.size
    ux, ix = np.unique(x, return_inverse=True)
    uy, iy = np.unique(y, return_inverse=True)
    grid = np.zeros((ux.size + 1, uy.size + 1), dtype=np.int64)
    np.add.at(grid, (ix + 1, iy + 1), 1)
    cum = grid.cumsum(axis=0).cumsum(axis=1)
    # with integer data, count(<= v - 1) is the padded index of v itself
    total = int(
        np.sum(cum[ix + 1, iy + 1] + cum[ix, iy + 1] + cum[ix + 1, iy] + cum[ix, iy])
    )
    return float(Fraction(total, m * m) - 1)


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairMeasures:
    """All four measures for one degree-type pair, with degeneracy flags."""

    spearman_uniform: float
    spearman_average: float | None
    kendall: float
    pearson: float | None
    degenerate_source: bool
    degenerate_target: bool

    def to_dict(self) -> dict:
        return {
            "spearman_uniform": self.spearman_uniform,
            "spearman_average": self.spearman_average,
            "kendall": self.kendall,
            "pearson": self.pearson,
            "degenerate_source": self.degenerate_source,
            "degenerate_target": self.degenerate_target,
        }


@dataclass(frozen=True)
class CorrelationReport:
    """Measures for all four degree-type pairs plus graph metadata."""

    n: int
    edges: int
    seed: int
    pairs: dict

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edges,
            "seed": self.seed,
            "pairs": {label: pm.to_dict() for label, pm in self.pairs.items()},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict) -> "CorrelationReport":
        pairs = {
            label: PairMeasures(**entry) for label, entry in data["pairs"].items()
        }
        return cls(n=data["n"], edges=data["edges"], seed=data["seed"], pairs=pairs)

    @classmethod
    def from_json(cls, text: str) -> "CorrelationReport":
        return cls.from_dict(json.loads(text))


def full_report(
    g: DirectedMultigraph, seed: int, tie_break_replicas: int = 1
) -> CorrelationReport:
    """All four measures for all four pairs.

    The uniform-rank Spearman value is the mean over `tie_break_replicas`
    independent tie-break draws (1 reproduces a single draw); every draw gets
    its own child seed, so identical (graph, seed, replicas) inputs give an
    identical report.  Degenerate sides are flagged and yield None for the
    average-rank and Pearson entries instead of an error.
    """
    if g.edge_count < 2:
        raise ValueError("full report requires at least 2 edge occurrences")
    if tie_break_replicas < 1:
        raise ValueError("tie_break_replicas must be >= 1")
    pairs: dict[str, PairMeasures] = {}
    for pair_index, pair in enumerate(ALL_PAIRS):
        x, y = _view_arrays(g, pair)
        draws = [
            spearman_uniform_xy(
                x, y, child_seed(seed, pair_index, rep, "tie-break")
            )
            for rep in range(tie_break_replicas)
        ]
        pairs[pair.label] = PairMeasures(
            spearman_uniform=float(np.mean(draws)),
            spearman_average=spearman_average_xy(x, y),
            kendall=kendall_xy(x, y),
            pearson=pearson_xy(x, y),
            degenerate_source=bool(np.all(x == x[0])),
            degenerate_target=bool(np.all(y == y[0])),
        )
    return CorrelationReport(n=g.n, edges=g.edge_count, seed=int(seed), pairs=pairs)
