"""Shared builders and brute-force oracles for the test suite."""

import itertools

import numpy as np

from degdep import DirectedMultigraph, JointPmf, Pmf


def random_pmf(rng, max_atoms=8, span=20, min_atoms=1) -> Pmf:
    """Random finite pmf with up to `max_atoms` integer atoms in [-span, span]."""
    k = int(rng.integers(min_atoms, max_atoms + 1))
    support = rng.choice(np.arange(-span, span + 1), size=k, replace=False)
    weights = rng.random(k) + 1e-3
    return Pmf(np.sort(support), weights / weights.sum())


def random_joint(rng, max_side=8, span=10) -> JointPmf:
    """Random joint pmf on up to max_side x max_side integer atoms."""
    kx = int(rng.integers(1, max_side + 1))
    ky = int(rng.integers(1, max_side + 1))
    xs = np.sort(rng.choice(np.arange(-span, span + 1), size=kx, replace=False))
    ys = np.sort(rng.choice(np.arange(-span, span + 1), size=ky, replace=False))
    cells = [(x, y) for x in xs for y in ys]
    keep = rng.random(len(cells)) < 0.7
    keep[int(rng.integers(0, len(cells)))] = True
    cells = [c for c, k in zip(cells, keep) if k]
    weights = rng.random(len(cells)) + 1e-3
    weights /= weights.sum()
    return JointPmf.from_entries({c: w for c, w in zip(cells, weights)})


def random_nondegenerate_joint(rng, max_side=8, span=10) -> JointPmf:
    while True:
        joint = random_joint(rng, max_side, span)
        if not joint.marginal_x().is_point_mass and not joint.marginal_y().is_point_mass:
            return joint


def random_multigraph(rng, max_nodes=20, max_edges=60) -> DirectedMultigraph:
    """Random multigraph with self-loops and repeats; at least 2 edges."""
    n = int(rng.integers(2, max_nodes + 1))
    m = int(rng.integers(2, max_edges + 1))
    src = rng.integers(0, n, m)
    dst = rng.integers(0, n, m)
    return DirectedMultigraph(n, src, dst)


def spearman_brute(joint: JointPmf) -> float:
    """Spearman's rho from its four-probability definition with independent copies.

    rho = 3 [P(X<X',Y<Y'') + P(X<=X',Y<Y'') + P(X<X',Y<=Y'') + P(X<=X',Y<=Y'') - 1]
    where X' and Y'' come from two independent copies of the pair, so they are
    independent of each other and of (X, Y).
    """
    mx, my = joint.marginal_x(), joint.marginal_y()
    total = 0.0
    for (x, y, q) in zip(joint.xs, joint.ys, joint.probs):
        for (xp, qx) in zip(mx.support, mx.probs):
            for (yp, qy) in zip(my.support, my.probs):
                w = float(q * qx * qy)
                lt_x, le_x = float(x < xp), float(x <= xp)
                lt_y, le_y = float(y < yp), float(y <= yp)
                total += w * (lt_x * lt_y + le_x * lt_y + lt_x * le_y + le_x * le_y)
    return 3.0 * (total - 1.0)


def kendall_brute(joint: JointPmf) -> float:
    """Kendall's tau as E[sign(X - X') sign(Y - Y')] over an independent copy."""
    total = 0.0
    for (x1, y1, q1), (x2, y2, q2) in itertools.product(
        zip(joint.xs, joint.ys, joint.probs), repeat=2
    ):
        total += q1 * q2 * np.sign(x1 - x2) * np.sign(y1 - y2)
    return float(total)


def inversions_brute(arr) -> int:
    arr = list(arr)
    return sum(
        1
        for i in range(len(arr))
        for j in range(i + 1, len(arr))
        if arr[i] > arr[j]
    )
