"""The hybrid chain between the transversal and colored sampling models.

Hybrid index i interpolates between two ways of sampling (element, color)
pairs: elements before i behave as in the colored model (the element appears
with probability p and carries one uniform color), elements from i on behave
as in the transversal model (every pair (x, c) appears independently with
probability p/k).  Index 0 is the pure transversal model and index n the
pure colored model, and the probability of containing a rainbow transversal
edge is nondecreasing along the chain, which is what makes the transversal
event a lower bound for the colored one.

The exact evaluator enumerates the mixed-radix outcome space (k+1 outcomes
per colored element, 2^k per transversal element) with two prunings: once
the processed prefix already contains a rainbow edge the whole subtree hits,
and once no completion can produce one the subtree misses.

The per-element comparison that drives the chain is exposed as
``pointwise_gap``: the colored-side hit rate minus the transversal-side one
given the relevant color set has size d, evaluated in closed form to avoid
the cancellation of its alternating series.
"""

from __future__ import annotations

import math

from .errors import CapacityError, InvalidInputError, PreconditionError
from .families import MultiHypergraph
from .lift import _sdr_exists, has_rainbow_transversal
from .measures import McEstimate, split_generator

EXACT_GUARD = 10**7


def _check_model(h: MultiHypergraph, k: int, p: float) -> None:
    if k < h.r:
        raise PreconditionError(f"need k >= r = {h.r}; got k = {k}")
    if not 0.0 < p <= 1.0:
        raise InvalidInputError("p must lie in (0, 1]")


def _hybrid_avail(u, n: int, k: int, p: float, i: int) -> dict[int, list[int]]:
    """Decode one uniform block into the hybrid sample's color lists.

    Row layout per element: column 0 drives colored-model inclusion,
    column 1 the colored-model color, columns 2..k+1 the per-color
    transversal coin flips.  The layout is part of the reproducibility
    contract: one block of n x (k+2) uniforms per trial.
    """
    p_over_k = p / k
    avail: dict[int, list[int]] = {}
    for j in range(n):
        if j < i:
            if u[j, 0] < p:
                avail[j] = [int(u[j, 1] * k) + 1]
        else:
            cs = [c + 1 for c in range(k) if u[j, 2 + c] < p_over_k]
            if cs:
                avail[j] = cs
    return avail


def hybrid_sample(
    h: MultiHypergraph, k: int, p: float, i: int, seed: int
) -> frozenset[tuple[int, int]]:
    """One draw of the hybrid model X^i as a set of (element, color) pairs."""
    _check_model(h, k, p)
    n = h.ground.n
    if not 0 <= i <= n:
        raise InvalidInputError(f"hybrid index must lie in 0..{n}")
    u = split_generator(seed).random((n, k + 2))
    avail = _hybrid_avail(u, n, k, p, i)
    return frozenset((j, c) for j, cs in avail.items() for c in cs)


def chain_hit_estimates(
    h: MultiHypergraph, k: int, p: float, samples: int, seed: int
) -> list[McEstimate]:
    """Monte Carlo hit probabilities along the full chain i = 0..n.

    Each (i, trial) pair draws from its own counter-based stream, so the
    estimates are reproducible and independent across chain positions.
    """
    _check_model(h, k, p)
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    n = h.ground.n
    edge_masks = [e.mask for e, _ in h.edges]
    edge_idx = [e.indices for e, _ in h.edges]
    out = []
    for i in range(n + 1):
        hits = 0
        for trial in range(samples):
            u = split_generator(seed, i, trial).random((n, k + 2))
            avail = _hybrid_avail(u, n, k, p, i)
            smask = 0
            for j in avail:
                smask |= 1 << j
            for em, idx in zip(edge_masks, edge_idx):
                if em & ~smask == 0 and _sdr_exists(idx, avail):
                    hits += 1
                    break
        out.append(McEstimate.from_hits(hits, samples, seed))
    return out


def exact_hybrid_hit(h: MultiHypergraph, k: int, p: float, i: int) -> float:
    """Exact hit probability of the hybrid model X^i by outcome enumeration."""
    _check_model(h, k, p)
    n = h.ground.n
    if not 0 <= i <= n:
        raise InvalidInputError(f"hybrid index must lie in 0..{n}")
    space = (k + 1) ** i * (1 << (k * (n - i)))
    if space > EXACT_GUARD:
        raise CapacityError(f"outcome space {space} exceeds {EXACT_GUARD}")
    p_over_k = p / k
    all_colors = list(range(1, k + 1))
    # transversal-element outcomes: every color subset with its probability
    subset_weights = []
    for smask in range(1 << k):
        w = 1.0
        cs = []
        for c in range(k):
            if smask >> c & 1:
                w *= p_over_k
                cs.append(c + 1)
            else:
                w *= 1.0 - p_over_k
        subset_weights.append((cs, w))

    contributions: list[float] = []

    def completable(avail: dict[int, list[int]], j: int) -> bool:
        aug = dict(avail)
        for jj in range(j, n):
            aug[jj] = all_colors
        return has_rainbow_transversal(
            [(x, c) for x, cs in aug.items() for c in cs], h
        )

    def rec(j: int, avail: dict[int, list[int]], weight: float) -> None:
        if weight == 0.0:
            return
        if has_rainbow_transversal(
            [(x, c) for x, cs in avail.items() for c in cs], h
        ):
            contributions.append(weight)
            return
        if j == n or not completable(avail, j):
            return
        if j < i:
            rec(j + 1, avail, weight * (1.0 - p))
            for c in all_colors:
                rec(j + 1, {**avail, j: [c]}, weight * p / k)
        else:
            for cs, w in subset_weights:
                rec(j + 1, {**avail, j: cs} if cs else avail, weight * w)

    rec(0, {}, 1.0)
    return min(1.0, max(0.0, math.fsum(contributions)))


def pointwise_gap(p: float, k: int, d: int) -> float:
    """Colored-minus-transversal completion probability when d of the k
    colors would finish an edge: p d / k - 1 + (1 - p/k)^d.

    Nonnegative on the whole domain 0 < p < 1, 1 <= d <= k; evaluated in
    closed form rather than via its alternating series.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError("p must lie in (0, 1)")
    if not 1 <= d <= k:
        raise PreconditionError("color-set size d must lie in 1..k")
    return p * d / k - 1.0 + (1.0 - p / k) ** d
