"""Directed multigraph container with degree bookkeeping and edge sampling.

Edges are stored occurrence-expanded (one entry per edge occurrence, so a
k-fold multi-edge appears k times); all dependency measures are sums over
edge occurrences and the flat layout keeps those sums cache-friendly at
millions of edges.  Degrees are tallied once at construction.  Graphs are
immutable after construction; sampling takes a caller-owned RNG.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pmf import JointPmf, Pmf

__all__ = [
    "DegreeTypePair",
    "ALL_PAIRS",
    "EdgeDegreeView",
    "DirectedMultigraph",
    "read_edge_list",
    "write_edge_list",
]

_DEGREE_TYPES = ("out", "in")


@dataclass(frozen=True)
class DegreeTypePair:
    """Which degree is read at each end of an edge.

    `alpha` applies to the source node, `beta` to the target node; each is
    "out" or "in", giving four combinations.
    """

    alpha: str
    beta: str

    def __post_init__(self):
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if value not in _DEGREE_TYPES:
                raise ValueError(f"{name} must be 'out' or 'in', got {value!r}")

    @property
    def label(self) -> str:
        return f"{self.alpha}-{self.beta}"

    @classmethod
    def from_label(cls, label: str) -> "DegreeTypePair":
        alpha, sep, beta = label.partition("-")
        if not sep:
            raise ValueError(f"pair label must look like 'out-in', got {label!r}")
        return cls(alpha, beta)


ALL_PAIRS = (
    DegreeTypePair("out", "in"),
    DegreeTypePair("in", "out"),
    DegreeTypePair("out", "out"),
    DegreeTypePair("in", "in"),
)


@dataclass(frozen=True)
class EdgeDegreeView:
    """Per-edge-occurrence degree pairs (source-side degree, target-side degree)."""

    pair: DegreeTypePair
    source_degrees: np.ndarray
    target_degrees: np.ndarray

    def __len__(self) -> int:
        return self.source_degrees.size


@dataclass(frozen=True, eq=False)
class DirectedMultigraph:
    """Directed multigraph over nodes 0..n-1 with self-loops and multi-edges.

    Invariants maintained by construction: sum(out_deg) == sum(in_deg) ==
    number of edge occurrences, and the degree arrays agree with recounting
    the edge list.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    out_deg: np.ndarray = field(init=False, repr=False, compare=False)
    in_deg: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError("node count must be non-negative")
        src = self._validated_ids(self.src, "source")
        dst = self._validated_ids(self.dst, "target")
        if src.size != dst.size:
            raise ValueError("source and target arrays differ in length")
        if src.size and max(int(src.max()), int(dst.max())) >= n:
            raise ValueError("node id out of range for the declared node count")
        out_deg = np.bincount(src, minlength=n).astype(np.int64)
        in_deg = np.bincount(dst, minlength=n).astype(np.int64)
        for attr, val in (("n", n),):
            object.__setattr__(self, attr, val)
        for attr, val in (
            ("src", src),
            ("dst", dst),
            ("out_deg", out_deg),
            ("in_deg", in_deg),
        ):
            val.setflags(write=False)
            object.__setattr__(self, attr, val)

    @staticmethod
    def _validated_ids(values, what: str) -> np.ndarray:
        arr = np.asarray(values)
        if arr.ndim != 1:
            raise ValueError(f"{what} ids must be one-dimensional")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.all(arr == rounded):
                raise ValueError(f"{what} ids must be integers")
            arr = rounded
        arr = arr.astype(np.int64)
        if arr.size and arr.min() < 0:
            raise ValueError(f"{what} ids must be non-negative")
        return arr

    @classmethod
    def from_edge_list(cls, pairs, n: int | None = None) -> "DirectedMultigraph":
        """Build from (source, target) pairs; duplicates become multi-edges."""
        arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs)
        if arr.size == 0:
            src = np.empty(0, dtype=np.int64)
            dst = np.empty(0, dtype=np.int64)
        else:
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise ValueError("edge list must be a sequence of (source, target) pairs")
            src, dst = arr[:, 0], arr[:, 1]
        if n is None:
            n = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1
        return cls(n, src, dst)

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def degrees(self, kind: str) -> np.ndarray:
        if kind == "out":
            return self.out_deg
        if kind == "in":
            return self.in_deg
        raise ValueError(f"degree kind must be 'out' or 'in', got {kind!r}")

    def _require_edges(self) -> None:
        if self.edge_count == 0:
            raise ValueError("operation requires a graph with at least one edge")

    def sample_edge(self, rng) -> tuple[int, int]:
        """One edge occurrence uniformly at random (multiplicity-weighted)."""
        self._require_edges()
        rng = np.random.default_rng(rng)
        i = int(rng.integers(0, self.edge_count))
        return int(self.src[i]), int(self.dst[i])

    def edge_degree_view(self, pair: DegreeTypePair) -> EdgeDegreeView:
        """Degree pairs at the two ends of every edge occurrence."""
        return EdgeDegreeView(
            pair=pair,
            source_degrees=self.degrees(pair.alpha)[self.src],
            target_degrees=self.degrees(pair.beta)[self.dst],
        )

    def empirical_edge_joint(self, pair: DegreeTypePair) -> JointPmf:
        """Joint law of the endpoint degrees of a uniformly sampled edge.

        Mass at (k, l) is the fraction of edge occurrences whose source-side
        degree is k and target-side degree is l; built from integer counts
        and converted to probabilities at the end.
        """
        self._require_edges()
        view = self.edge_degree_view(pair)
        keys = np.stack([view.source_degrees, view.target_degrees], axis=1)
        uniq, counts = np.unique(keys, axis=0, return_counts=True)
        return JointPmf(uniq[:, 0], uniq[:, 1], counts / self.edge_count)

    def empirical_marginal(self, side: str, degree_type: str) -> Pmf:
        """Law of one endpoint degree of a uniformly sampled edge.

        `side` is "source" or "target"; each edge occurrence carries weight
        1/|E|.
        """
        self._require_edges()
        if side == "source":
            nodes = self.src
        elif side == "target":
            nodes = self.dst
        else:
            raise ValueError(f"side must be 'source' or 'target', got {side!r}")
        values = self.degrees(degree_type)[nodes]
        uniq, counts = np.unique(values, return_counts=True)
        return Pmf(uniq, counts / self.edge_count)

    def node_degree_pmf(self, degree_type: str) -> Pmf:
        """Empirical law of the node degrees (every node weighted 1/n)."""
        if self.n == 0:
            raise ValueError("graph has no nodes")
        uniq, counts = np.unique(self.degrees(degree_type), return_counts=True)
        return Pmf(uniq, counts / self.n)

    def is_simple(self) -> bool:
        """True iff the graph has no self-loops and no repeated (v, w) edge."""
        if self.edge_count == 0:
            return True
        if np.any(self.src == self.dst):
            return False
        keys = self.src * np.int64(self.n) + self.dst
        return np.unique(keys).size == self.edge_count


def read_edge_list(path, n: int | None = None) -> DirectedMultigraph:
    """Read a graph from text: one 'src<TAB>dst' occurrence per line.

    Blank lines and '#' comments are ignored; repeated lines are multi-edges.
    Malformed lines are rejected with their line number.
    """
    srcs: list[int] = []
    dsts: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'src<TAB>dst', got {line!r}")
            try:
                s, d = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer node id in {line!r}") from None
            if s < 0 or d < 0:
                raise ValueError(f"{path}:{lineno}: negative node id in {line!r}")
            srcs.append(s)
            dsts.append(d)
    if n is None:
        n = max(srcs + dsts, default=-1) + 1
    return DirectedMultigraph(n, np.asarray(srcs, dtype=np.int64), np.asarray(dsts, dtype=np.int64))


def write_edge_list(g: DirectedMultigraph, path) -> None:
    """Write the edge occurrences as 'src<TAB>dst' lines (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s, d in zip(g.src.tolist(), g.dst.tolist()):
            fh.write(f"{s}\t{d}\n")
