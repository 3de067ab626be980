"""Directed configuration-model generators and their limiting endpoint laws.

Three variants share one pipeline: draw per-node out/in stub counts iid from
two target laws, balance the totals, then pair out-stubs to in-stubs by a
uniformly random matching.

  - cm:  keep the resulting multigraph (self-loops and multi-edges allowed);
  - rcm: redraw the pairing of the *same* stub sequence until the graph is
         simple (practical only when the laws have finite variance);
  - ecm: remove self-loops and merge multi-edges, recording every erased
         stub in a ledger.

The endpoint-degree laws of a uniformly sampled edge in the large-graph
limit are plain or size-biased versions of the target laws, depending on the
degree-type pair; `endpoint_degree_laws` tabulates them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .digraph import DegreeTypePair, DirectedMultigraph
from .pmf import Pmf, size_biased

__all__ = [
    "GenerationError",
    "BiDegreeRealization",
    "ErasureLedger",
    "GenerationResult",
    "sample_bidegree",
    "pair_stubs_cm",
    "generate_cm",
    "generate_rcm",
    "generate_ecm",
    "erase_multigraph",
    "endpoint_degree_laws",
    "DEFAULT_MAX_ATTEMPTS",
]

DEFAULT_MAX_ATTEMPTS = 1000

_MEAN_MISMATCH_WARN = 0.05


class GenerationError(RuntimeError):
    """Graph generation failed; carries the number of pairing attempts used."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


@dataclass(frozen=True, eq=False)
class BiDegreeRealization:
    """Per-node stub counts with equal out/in totals.

    `balance_added` is the number of stubs appended by the balancing step
    (all on one side).
    """

    out_stubs: np.ndarray
    in_stubs: np.ndarray
    balance_added: int

    def __post_init__(self):
        if int(self.out_stubs.sum()) != int(self.in_stubs.sum()):
            raise ValueError("stub totals must balance")
        self.out_stubs.setflags(write=False)
        self.in_stubs.setflags(write=False)

    @property
    def total_stubs(self) -> int:
        return int(self.out_stubs.sum())


@dataclass(frozen=True, eq=False)
class ErasureLedger:
    """Stub removals performed by the erased variant.

    Per node, `erased_out[v]` / `erased_in[v]` count removed stubs; the
    totals satisfy sum(erased_out) == sum(erased_in) == self_loops_removed +
    multi_edges_merged == (stub edges) - (surviving edges).  Both counters
    count removed edge occurrences: a k-fold multi-edge contributes k - 1 to
    `multi_edges_merged`.
    """

    erased_out: np.ndarray
    erased_in: np.ndarray
    self_loops_removed: int
    multi_edges_merged: int

    def __post_init__(self):
        expected = self.self_loops_removed + self.multi_edges_merged
        if not (
            int(self.erased_out.sum()) == int(self.erased_in.sum()) == expected
        ):
            raise ValueError("erasure ledger out of balance")
        self.erased_out.setflags(write=False)
        self.erased_in.setflags(write=False)

    @classmethod
    def empty(cls, n: int) -> "ErasureLedger":
        zero = np.zeros(n, dtype=np.int64)
        return cls(zero, zero.copy(), 0, 0)

    @property
    def total_erased(self) -> int:
        return int(self.erased_out.sum())


@dataclass(frozen=True, eq=False)
class GenerationResult:
    """A generated graph plus the stub sequence and erasure bookkeeping."""

    graph: DirectedMultigraph
    bidegree: BiDegreeRealization
    ledger: ErasureLedger
    attempts: int


def _require_degree_law(p: Pmf, name: str) -> None:
    if np.any(p.support < 0):
        raise ValueError(f"{name} must be supported on non-negative integers")


def sample_bidegree(n: int, out_law: Pmf, in_law: Pmf, rng) -> BiDegreeRealization:
    """Draw n iid stub counts from each law, then balance the totals.

    Balancing adds one stub at a time to a uniformly random node on the
    deficient side until the totals match; under equal means the addition is
    o(n), so the empirical laws are preserved asymptotically.  Laws whose
    means differ by more than 5% trigger a warning (the model presumes equal
    means).  An all-zero sample is rejected.
    """
    if n < 1:
        raise ValueError("need at least one node")
    _require_degree_law(out_law, "out_law")
    _require_degree_law(in_law, "in_law")
    mean_out, mean_in = out_law.mean(), in_law.mean()
    if abs(mean_out - mean_in) > _MEAN_MISMATCH_WARN * max(mean_out, mean_in):
        warnings.warn(
            f"stub laws have unequal means (out {mean_out:.6g}, in {mean_in:.6g}); "
            "the configuration model presumes equal means",
            stacklevel=2,
        )
    rng = np.random.default_rng(rng)
    out_stubs = out_law.sample(rng, n).copy()
    in_stubs = in_law.sample(rng, n).copy()
    deficit = int(in_stubs.sum() - out_stubs.sum())
    if deficit > 0:
        np.add.at(out_stubs, rng.integers(0, n, deficit), 1)
    elif deficit < 0:
        np.add.at(in_stubs, rng.integers(0, n, -deficit), 1)
    if int(out_stubs.sum()) == 0:
        raise ValueError("degenerate stub sample: zero stubs on every node")
    return BiDegreeRealization(out_stubs, in_stubs, abs(deficit))


def _stub_endpoints(b: BiDegreeRealization) -> tuple[np.ndarray, np.ndarray]:
    n = b.out_stubs.size
    src = np.repeat(np.arange(n, dtype=np.int64), b.out_stubs)
    tgt = np.repeat(np.arange(n, dtype=np.int64), b.in_stubs)
    return src, tgt


def pair_stubs_cm(b: BiDegreeRealization, rng) -> GenerationResult:
    """Uniform random matching of out-stubs to in-stubs; keeps the multigraph.

    Every out-stub is equally likely to land on every in-stub, realized by a
    single random permutation of the in-stub slots.  The resulting degrees
    equal the stub counts exactly.
    """
    rng = np.random.default_rng(rng)
    src, tgt = _stub_endpoints(b)
    dst = tgt[rng.permutation(tgt.size)]
    n = b.out_stubs.size
    graph = DirectedMultigraph(n, src, dst)
    return GenerationResult(graph, b, ErasureLedger.empty(n), attempts=1)


def generate_cm(n: int, out_law: Pmf, in_law: Pmf, rng) -> GenerationResult:
    """Sample a bi-degree sequence and pair it once (multigraph variant)."""
    rng = np.random.default_rng(rng)
    return pair_stubs_cm(sample_bidegree(n, out_law, in_law, rng), rng)


def _pairing_is_simple(src: np.ndarray, dst: np.ndarray, n: int) -> bool:
    if np.any(src == dst):
        return False
    keys = src * np.int64(n) + dst
    return np.unique(keys).size == keys.size


def generate_rcm(
    n: int,
    out_law: Pmf,
    in_law: Pmf,
    rng,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> GenerationResult:
    """Repeat the pairing of one stub sequence until the graph is simple.

    The bi-degree realization is drawn once and reused across attempts; only
    the matching is redrawn.  Raises GenerationError (with the attempt count)
    when no simple pairing appears within `max_attempts`, which is the
    expected outcome for infinite-variance laws at large n.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    rng = np.random.default_rng(rng)
    b = sample_bidegree(n, out_law, in_law, rng)
    src, tgt = _stub_endpoints(b)
    for attempt in range(1, max_attempts + 1):
        dst = tgt[rng.permutation(tgt.size)]
        if _pairing_is_simple(src, dst, n):
            graph = DirectedMultigraph(n, src, dst)
            return GenerationResult(graph, b, ErasureLedger.empty(n), attempts=attempt)
    raise GenerationError(
        f"no simple pairing in {max_attempts} attempts "
        f"(n={n}, stub edges={b.total_stubs}); heavy-tailed degree laws make "
        "the simplicity probability vanish - use the erased variant instead",
        attempts=max_attempts,
    )


def erase_multigraph(g: DirectedMultigraph) -> tuple[DirectedMultigraph, ErasureLedger]:
    """Remove self-loops, then merge multi-edges; returns graph and ledger.

    An erased self-loop increments both erased_out and erased_in of its node,
    and a k-fold multi-edge erases k-1 out-stubs of the source and k-1
    in-stubs of the target, which makes the stub/edge balance exact and
    auditable.
    """
    n = g.n
    src, dst = g.src, g.dst
    erased_out = np.zeros(n, dtype=np.int64)
    erased_in = np.zeros(n, dtype=np.int64)

    loop_mask = src == dst
    loop_counts = np.bincount(src[loop_mask], minlength=n)
    erased_out += loop_counts
    erased_in += loop_counts
    self_loops_removed = int(loop_mask.sum())

    src, dst = src[~loop_mask], dst[~loop_mask]
    keys = src * np.int64(n) + dst
    uniq_keys, counts = np.unique(keys, return_counts=True)
    uniq_src = (uniq_keys // n).astype(np.int64)
    uniq_dst = (uniq_keys % n).astype(np.int64)
    dup = counts - 1
    np.add.at(erased_out, uniq_src, dup)
    np.add.at(erased_in, uniq_dst, dup)
    multi_edges_merged = int(dup.sum())

    graph = DirectedMultigraph(n, uniq_src, uniq_dst)
    ledger = ErasureLedger(erased_out, erased_in, self_loops_removed, multi_edges_merged)
    return graph, ledger


def generate_ecm(n: int, out_law: Pmf, in_law: Pmf, rng) -> GenerationResult:
    """Pair once, then make the graph simple by erasure (see erase_multigraph)."""
    rng = np.random.default_rng(rng)
    b = sample_bidegree(n, out_law, in_law, rng)
    cm = pair_stubs_cm(b, rng)
    graph, ledger = erase_multigraph(cm.graph)
    return GenerationResult(graph, b, ledger, attempts=1)


def endpoint_degree_laws(
    pair: DegreeTypePair, out_law: Pmf, in_law: Pmf
) -> tuple[Pmf, Pmf]:
    """Limiting laws of the endpoint degrees of a uniformly sampled edge.

    The degree whose stubs were followed to reach an endpoint is size-biased;
    the opposite degree at that endpoint keeps its plain law (out/in draws
    are independent per node).  Per (source-type, target-type) pair:

        (out, in)  -> (size-biased out, size-biased in)
        (in,  out) -> (plain in, plain out)
        (out, out) -> (size-biased out, plain out)
        (in,  in)  -> (plain in, size-biased in)
    """
    source = size_biased(out_law) if pair.alpha == "out" else in_law
    target = size_biased(in_law) if pair.beta == "in" else out_law
    return source, target
