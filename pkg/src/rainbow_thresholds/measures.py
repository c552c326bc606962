"""Exact and Monte Carlo evaluation of the plain and colored product measures.

For an increasing family F with minimal edges H_F and inclusion probabilities
p_1..p_n, the plain measure is

    mu_p(F) = P[some minimal edge is contained in the random subset X_p],

computed by inclusion-exclusion over nonempty subcollections A of H_F with
term (-1)^{|A|+1} prod_{x in union(A)} p_x.

The colored measure draws a uniform color in {1..k} for every element,
independently of inclusion.  The colored family F^rb is generated by the
rainbow copies of the minimal edges (all colors on an edge pairwise
distinct), while F^all ignores colors entirely, so mu_p^k(F^all) recovers
mu_p(F).  Both exact evaluators sum over subsets of the union U of minimal
edges only; elements outside U cannot affect membership.

Per-element probability vectors generalize the uniform-p model and are
accepted by every exact evaluator.  All exact paths accumulate with
compensated summation (math.fsum); Monte Carlo trials draw from per-trial
counter-based streams so results do not depend on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    InvalidInputError,
    PreconditionError,
)
from .families import IncreasingFamily, Subset, _mask_to_indices

IE_MAX_EDGES = 20
SUPPORT_MAX = 20
CONFLICT_GRAPH_MAX = 16

_MAX_SEED = 1 << 64


def split_generator(seed: int, *path: int) -> np.random.Generator:
    """A reproducible random stream for (seed, path).

    Counter-based splitting: the Philox generator is keyed by the 64-bit
    master seed and its 256-bit counter is loaded from up to three path
    indices (trial numbers, chain positions).  Streams for distinct paths
    never overlap and do not depend on the order they are consumed in.
    """
    if not 0 <= seed < _MAX_SEED:
        raise InvalidInputError("seed must fit in 64 bits")
    if len(path) > 3:
        raise InvalidInputError("at most three path indices are supported")
    counter = 0
    for j, ix in enumerate(path):
        ix = int(ix)
        if not 0 <= ix < _MAX_SEED:
            raise InvalidInputError("path indices must fit in 64 bits")
        counter |= ix << (64 * (3 - j))
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


@dataclass(frozen=True)
class MeasureParams:
    """Per-element inclusion probabilities, plus a color count for colored use."""

    pvec: tuple[float, ...]
    k: int | None = None

    def __post_init__(self):
        for p in self.pvec:
            if not 0.0 < p <= 1.0:
                raise InvalidInputError("inclusion probabilities must lie in (0, 1]")
        if self.k is not None and self.k < 1:
            raise InvalidInputError("color count k must be >= 1")

    @classmethod
    def uniform(cls, n: int, p: float, k: int | None = None) -> "MeasureParams":
        return cls((float(p),) * n, k)

    @classmethod
    def coerce(cls, n: int, params, k: int | None = None) -> "MeasureParams":
        """Accept a MeasureParams, a scalar p, or a sequence of p_i."""
        if isinstance(params, MeasureParams):
            if len(params.pvec) != n:
                raise InvalidInputError("pvec length does not match ground set")
            if k is not None and params.k is not None and params.k != k:
                raise InvalidInputError("conflicting color counts")
            return cls(params.pvec, params.k if k is None else k)
        if isinstance(params, (int, float)):
            return cls.uniform(n, float(params), k)
        pvec = tuple(float(p) for p in params)
        if len(pvec) != n:
            raise InvalidInputError("pvec length does not match ground set")
        return cls(pvec, k)


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its binomial standard error."""

    estimate: float
    stderr: float
    samples: int
    seed: int

    @classmethod
    def from_hits(cls, hits: int, samples: int, seed: int) -> "McEstimate":
        est = hits / samples
        return cls(est, math.sqrt(est * (1.0 - est) / samples), samples, seed)

    def csv_row(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def _require_nontrivial(family: IncreasingFamily) -> None:
    if family.is_empty:
        raise DomainError("measure of the empty family is trivially 0; rejected")
    if family.is_trivial:
        raise DomainError("measure of the full family is trivially 1; rejected")


def mu_exact(family: IncreasingFamily, params) -> float:
    """Exact mu_p(F) by inclusion-exclusion (enumeration fallback for many edges)."""
    _require_nontrivial(family)
    mp = MeasureParams.coerce(family.ground.n, params)
    edges = [e.mask for e in family.minimal_edges]
    if len(edges) <= IE_MAX_EDGES:
        return _mu_inclusion_exclusion(edges, mp.pvec)
    if family.ground.n <= 25:
        return _mu_support_enumeration(family, mp.pvec)
    raise CapacityError(
        f"{len(edges)} edges exceeds the inclusion-exclusion guard and "
        f"n = {family.ground.n} exceeds the enumeration fallback"
    )


def _mu_inclusion_exclusion(edge_masks: list[int], pvec: Sequence[float]) -> float:
    m = len(edge_masks)
    prod_cache: dict[int, float] = {}

    def union_prod(mask: int) -> float:
        val = prod_cache.get(mask)
        if val is None:
            val = 1.0
            for i in _mask_to_indices(mask):
                val *= pvec[i]
            prod_cache[mask] = val
        return val

    unions = [0] * (1 << m)
    terms = []
    for a in range(1, 1 << m):
        low = a & -a
        unions[a] = unions[a ^ low] | edge_masks[low.bit_length() - 1]
        sign = 1.0 if a.bit_count() & 1 else -1.0
        terms.append(sign * union_prod(unions[a]))
    return min(1.0, max(0.0, math.fsum(terms)))


def _mu_support_enumeration(family: IncreasingFamily, pvec: Sequence[float]) -> float:
    """Sum of subset weights over the union of minimal edges (off-support
    elements never affect membership)."""
    support = family.support.indices
    edges = [e.mask for e in family.minimal_edges]
    terms = []
    for t in range(1 << len(support)):
        tmask = 0
        w = 1.0
        for j, i in enumerate(support):
            if t >> j & 1:
                tmask |= 1 << i
                w *= pvec[i]
            else:
                w *= 1.0 - pvec[i]
        if any(e & ~tmask == 0 for e in edges):
            terms.append(w)
    return min(1.0, max(0.0, math.fsum(terms)))


# ---------------------------------------------------------------------------
# Rainbow coloring counts.
#
# The number of k-colorings of V(A) that are injective on every edge of A is
# the number of proper k-colorings of the conflict graph obtained by turning
# each edge into a clique; it is evaluated by deletion-contraction.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=200_000)
def _proper_colorings(m: int, edges: frozenset[tuple[int, int]], k: int) -> int:
    if not edges:
        return k**m
    # split over connected components
    comp = list(range(m))

    def find(a):
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            comp[rv] = ru
    roots = {find(v) for v in range(m)}
    if len(roots) > 1:
        out = 1
        for root in sorted(roots):
            verts = sorted(v for v in range(m) if find(v) == root)
            relabel = {v: i for i, v in enumerate(verts)}
            sub = frozenset(
                (relabel[u], relabel[v])
                for u, v in edges
                if find(u) == root
            )
            out *= _proper_colorings(len(verts), sub, k)
        return out
    if len(edges) == m * (m - 1) // 2:
        return falling_factorial_int(k, m)
    # deletion-contraction on the smallest edge
    e = min(edges)
    u, v = e
    deleted = _proper_colorings(m, edges - {e}, k)
    # contract v into u, relabel to 0..m-2
    relabel = {}
    nxt = 0
    for w in range(m):
        if w == v:
            continue
        relabel[w] = nxt
        nxt += 1
    contracted = set()
    for a, b in edges - {e}:
        a2 = relabel[u if a == v else a]
        b2 = relabel[u if b == v else b]
        if a2 != b2:
            contracted.add((min(a2, b2), max(a2, b2)))
    return deleted - _proper_colorings(m - 1, frozenset(contracted), k)


def falling_factorial_int(k: int, r: int) -> int:
    """k (k-1) ... (k-r+1); vanishes when r > k, one when r = 0."""
    if r < 0:
        raise InvalidInputError("falling factorial needs r >= 0")
    out = 1
    for i in range(r):
        out *= k - i
    return out


def _injective_colorings(edge_masks: Sequence[int], k: int) -> int:
    """Colorings of V(A) = union of the edges, injective on each edge."""
    vmask = 0
    for e in edge_masks:
        vmask |= e
    verts = _mask_to_indices(vmask)
    if len(verts) > CONFLICT_GRAPH_MAX:
        raise CapacityError(
            f"conflict graph on {len(verts)} vertices exceeds the cap "
            f"{CONFLICT_GRAPH_MAX}"
        )
    relabel = {v: i for i, v in enumerate(verts)}
    conflict = set()
    for e in edge_masks:
        idx = [relabel[v] for v in _mask_to_indices(e)]
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                u, v = idx[a], idx[b]
                conflict.add((min(u, v), max(u, v)))
    return _proper_colorings(len(verts), frozenset(conflict), k)


def rainbow_coloring_count(t: Subset, family: IncreasingFamily, k: int) -> int:
    """Number of the k^{|T|} colorings of T under which some minimal edge
    inside T is rainbow.

    Inclusion-exclusion over nonempty collections A of edges inside T, with
    each term counting colorings injective on every edge of A; elements of T
    outside the union of those edges contribute a free factor of k each.
    """
    if k < 1:
        raise InvalidInputError("color count k must be >= 1")
    inside = [e.mask for e in family.minimal_edges if e.mask & ~t.mask == 0]
    if not inside:
        return 0
    if len(inside) > IE_MAX_EDGES:
        raise CapacityError(f"{len(inside)} edges inside T exceeds the IE guard")
    vt = 0
    for e in inside:
        vt |= e
    vt_size = vt.bit_count()
    unions = [0] * (1 << len(inside))
    total = 0
    for a in range(1, 1 << len(inside)):
        low = a & -a
        unions[a] = unions[a ^ low] | inside[low.bit_length() - 1]
        chosen = [inside[i] for i in _mask_to_indices(a)]
        na = _injective_colorings(chosen, k)
        term = na * k ** (vt_size - unions[a].bit_count())
        total += term if a.bit_count() & 1 else -term
    return total * k ** (len(t) - vt_size)


# ---------------------------------------------------------------------------
# Colored measures.
# ---------------------------------------------------------------------------


class ColoredMeasure:
    """Reusable exact evaluator for mu_p^k(F^rb) at varying p.

    The conditional rainbow-hit probability given the included set T depends
    only on the set of minimal edges inside T, so it is tabulated once per
    (family, k) and reused across p evaluations (bisection solvers lean on
    this).
    """

    def __init__(self, family: IncreasingFamily, k: int):
        _require_nontrivial(family)
        if k < 1:
            raise InvalidInputError("color count k must be >= 1")
        support = family.support
        if len(support) > SUPPORT_MAX:
            raise CapacityError(
                f"union of minimal edges has {len(support)} elements; guard is "
                f"{SUPPORT_MAX}"
            )
        self.family = family
        self.k = k
        self.support_indices = support.indices
        edges = [e.mask for e in family.minimal_edges]
        cond_cache: dict[frozenset[int], float] = {}
        table: list[tuple[int, float]] = []
        for t in range(1 << len(self.support_indices)):
            tmask = 0
            for j, i in enumerate(self.support_indices):
                if t >> j & 1:
                    tmask |= 1 << i
            key = frozenset(i for i, e in enumerate(edges) if e & ~tmask == 0)
            if not key:
                continue
            cond = cond_cache.get(key)
            if cond is None:
                cond = self._conditional_hit(tmask, k)
                cond_cache[key] = cond
            table.append((t, cond))
        self._table = table

    def _conditional_hit(self, tmask: int, k: int) -> float:
        count = rainbow_coloring_count(Subset(self.family.ground, tmask), self.family, k)
        return float(Fraction(count, k ** tmask.bit_count()))

    def value(self, params) -> float:
        mp = MeasureParams.coerce(self.family.ground.n, params, self.k)
        pvec = mp.pvec
        idx = self.support_indices
        terms = []
        for t, cond in self._table:
            w = 1.0
            for j, i in enumerate(idx):
                w *= pvec[i] if t >> j & 1 else 1.0 - pvec[i]
            terms.append(w * cond)
        return min(1.0, max(0.0, math.fsum(terms)))


def mu_colored_exact(family: IncreasingFamily, params, k: int | None = None) -> float:
    """Exact mu_p^k(F^rb): probability that the colored random subset contains
    a rainbow minimal edge."""
    mp = MeasureParams.coerce(family.ground.n, params, k)
    if mp.k is None:
        raise InvalidInputError("colored measure needs a color count k")
    return ColoredMeasure(family, mp.k).value(mp)


def mu_colored_all_exact(family: IncreasingFamily, params, k: int | None = None) -> float:
    """Exact mu_p^k(F^all); colors are irrelevant, so this equals mu_p(F).

    Computed by subset enumeration over the support (a different engine than
    the inclusion-exclusion used by mu_exact, so the identity is testable).
    """
    mp = MeasureParams.coerce(family.ground.n, params, k)
    if mp.k is None:
        raise InvalidInputError("colored measure needs a color count k")
    _require_nontrivial(family)
    if len(family.support) > SUPPORT_MAX:
        raise CapacityError("support exceeds the enumeration guard")
    return _mu_support_enumeration(family, mp.pvec)


def mu_colored_mc(
    family: IncreasingFamily, params, samples: int, seed: int, k: int | None = None
) -> McEstimate:
    """Monte Carlo estimate of mu_p^k(F^rb).

    Each trial draws one uniform color per element and one inclusion decision
    per element from the trial's own counter-based stream, then checks for a
    rainbow minimal edge inside the sampled set.
    """
    mp = MeasureParams.coerce(family.ground.n, params, k)
    if mp.k is None:
        raise InvalidInputError("colored measure needs a color count k")
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    _require_nontrivial(family)
    n = family.ground.n
    kk = mp.k
    pvec = np.array(mp.pvec)
    edge_idx = [e.indices for e in family.minimal_edges]
    edge_masks = [e.mask for e in family.minimal_edges]
    hits = 0
    for trial in range(samples):
        gen = split_generator(seed, trial)
        u = gen.random((n, 2))
        included = u[:, 0] < pvec
        colors = (u[:, 1] * kk).astype(np.int64) + 1
        smask = 0
        for i in range(n):
            if included[i]:
                smask |= 1 << i
        if _rainbow_hit(smask, colors, edge_masks, edge_idx):
            hits += 1
    return McEstimate.from_hits(hits, samples, seed)


def _rainbow_hit(smask: int, colors, edge_masks, edge_idx) -> bool:
    for em, idx in zip(edge_masks, edge_idx):
        if em & ~smask:
            continue
        seen = set()
        ok = True
        for i in idx:
            c = colors[i]
            if c in seen:
                ok = False
                break
            seen.add(c)
        if ok:
            return True
    return False
