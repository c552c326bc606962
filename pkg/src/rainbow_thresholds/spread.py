"""Spread certification for multi-hypergraphs and weighted measures.

A hypergraph H is kappa-spread when the uniform measure on H puts mass at
most kappa^{-|S|} on every up-set <S>, i.e. |H meet <S>| <= kappa^{-|S|} |H|
with edges counted by multiplicity.  The layered variant bounds, for every
set A with positive degree and every level j at or above the next radius,
the number M_j(A) of edges meeting A in exactly j elements by q^j |H|.

Only sets contained in at least one edge can violate any of these bounds
(all other sets have empty intersection with H and zero degree), so the
candidate space is the sub-edge lattice; the reduction is verified against
full-powerset enumeration in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CapacityError, DomainError, InvalidInputError
from .families import MultiHypergraph, Subset, _mask_to_indices

LATTICE_GUARD = 10**6
REL_TOL = 1e-12


@dataclass(frozen=True)
class SpreadProfile:
    """A layered spread target: base q and strictly decreasing radii."""

    q: float
    radii: tuple[int, ...]

    def __post_init__(self):
        if not 0.0 < self.q <= 1.0:
            raise InvalidInputError("spread base q must lie in (0, 1]")
        if not self.radii:
            raise InvalidInputError("profile needs at least one radius")
        if any(r < 1 for r in self.radii):
            raise InvalidInputError("radii must be positive")
        if any(a <= b for a, b in zip(self.radii, self.radii[1:])):
            raise InvalidInputError("radii must be strictly decreasing")

    @property
    def lam(self) -> int:
        return len(self.radii)


@dataclass(frozen=True)
class SpreadCertificate:
    """Optimal spread with its minimizing witness and exact counts.

    kappa = (total / intersection)^(1/size); the integer triple allows exact
    downstream comparisons without reintroducing rounding.
    """

    kappa: float
    witness: Subset
    total: int
    intersection: int
    size: int


def _lattice_masks(h: MultiHypergraph) -> list[int]:
    if not h.edges:
        raise DomainError("spread is undefined for an empty hypergraph")
    budget = sum(1 << len(e) for e, _ in h.edges)
    if budget > LATTICE_GUARD:
        raise CapacityError("sub-edge lattice exceeds the enumeration guard")
    seen: set[int] = set()
    for e, _ in h.edges:
        s = e.mask
        while s:
            seen.add(s)
            s = (s - 1) & e.mask
    return sorted(seen, key=_mask_to_indices)


def _lattice_intersections(h: MultiHypergraph) -> dict[int, int]:
    """|H meet <S>| for every nonempty lattice S, accumulated edge by edge."""
    if not h.edges:
        raise DomainError("spread is undefined for an empty hypergraph")
    budget = sum(1 << len(e) for e, _ in h.edges)
    if budget > LATTICE_GUARD:
        raise CapacityError("sub-edge lattice exceeds the enumeration guard")
    counts: dict[int, int] = {}
    for e, m in h.edges:
        s = e.mask
        while s:
            counts[s] = counts.get(s, 0) + m
            s = (s - 1) & e.mask
    return counts


def intersection_count(h: MultiHypergraph, s: Subset) -> int:
    """|H meet <S>|: multiplicity-weighted count of edges containing S."""
    return sum(m for e, m in h.edges if s.mask & ~e.mask == 0)


def optimal_spread(h: MultiHypergraph) -> SpreadCertificate:
    """The largest kappa for which H is kappa-spread.

    Minimizes (|H| / |H meet <S>|)^{1/|S|} over nonempty S in the sub-edge
    lattice; the running minimum is maintained with exact integer
    cross-power comparisons, so ties resolve deterministically to the
    lattice-first witness.
    """
    total = h.total
    counts = _lattice_intersections(h)
    best = None  # (intersection, size, mask)
    for mask in sorted(counts, key=_mask_to_indices):
        inter = counts[mask]
        size = mask.bit_count()
        if best is None:
            best = (inter, size, mask)
            continue
        b_inter, b_size, _ = best
        # (total/inter)^(1/size) < (total/b_inter)^(1/b_size)
        lhs = total**b_size * b_inter**size
        rhs = total**size * inter**b_size
        if lhs < rhs:
            best = (inter, size, mask)
    inter, size, mask = best
    kappa = (total / inter) ** (1.0 / size)
    return SpreadCertificate(kappa, Subset(h.ground, mask), total, inter, size)


def check_spread(h: MultiHypergraph, kappa: float) -> tuple[bool, Subset | None]:
    """Is H kappa-spread?  On failure returns the violating witness S."""
    if kappa <= 0:
        raise InvalidInputError("kappa must be positive")
    total = h.total
    counts = _lattice_intersections(h)
    for mask in sorted(counts, key=_mask_to_indices):
        s = mask.bit_count()
        if counts[mask] * kappa**s > total * (1.0 + REL_TOL):
            return False, Subset(h.ground, mask)
    return True, None


def intersection_profile(h: MultiHypergraph, a: Subset) -> dict[int, int]:
    """M_j(A) for all j: multiplicity-weighted edge counts by |A meet S|.

    The values partition H, so they always sum to |H|.
    """
    out: dict[int, int] = {}
    for e, m in h.edges:
        j = (a.mask & e.mask).bit_count()
        out[j] = out.get(j, 0) + m
    return out


def measured_spiro_q(h: MultiHypergraph, radii: tuple[int, ...]) -> float:
    """The smallest q at which H is (q; radii)-spread, by full tabulation.

    Maximizes (M_j(A) / |H|)^(1/j) over lattice sets A and the levels j the
    radius schedule applies to A; returns 1.0 when no constraint binds.
    """
    probe = SpreadProfile(1.0, radii)
    if any(len(e) > radii[0] for e, _ in h.edges):
        raise DomainError(f"hypergraph is not {radii[0]}-bounded")
    total = h.total
    best = 0.0
    for mask in _lattice_masks(h):
        a = mask.bit_count()
        levels: set[int] = set()
        for i in range(probe.lam - 1):
            if radii[i] >= a >= radii[i + 1]:
                levels.update(range(radii[i + 1], a + 1))
        if not levels:
            continue
        prof = intersection_profile(h, Subset(h.ground, mask))
        for j in sorted(levels):
            mj = prof.get(j, 0)
            if mj:
                best = max(best, (mj / total) ** (1.0 / j))
    return best if best > 0.0 else 1.0


def check_spiro(
    h: MultiHypergraph, profile: SpreadProfile
) -> tuple[bool, tuple | None]:
    """Layered spread check against a (q; r_1..r_lambda) profile.

    Boundedness by r_1 is part of the property, so an over-sized edge makes
    the answer False (with that edge as witness) rather than an error.  For
    every lattice A whose size falls in a bracket [r_{i+1}, r_i] and every
    j >= r_{i+1}, requires M_j(A) <= q^j |H|.  The failure witness is
    (A, j, M_j(A)).
    """
    if not h.edges:
        raise DomainError("spread is undefined for an empty hypergraph")
    for e, _ in h.edges:
        if len(e) > profile.radii[0]:
            return False, (e, None, None)
    total = h.total
    q = profile.q
    radii = profile.radii
    for mask in _lattice_masks(h):
        a = mask.bit_count()
        levels: set[int] = set()
        for i in range(profile.lam - 1):
            if radii[i] >= a >= radii[i + 1]:
                levels.update(range(radii[i + 1], a + 1))
        if not levels:
            continue
        prof = intersection_profile(h, Subset(h.ground, mask))
        for j in sorted(levels):
            mj = prof.get(j, 0)
            if mj > q**j * total * (1.0 + REL_TOL):
                return False, (Subset(h.ground, mask), j, mj)
    return True, None


def measure_spread(
    weighted: Sequence[tuple[Subset, float]], q: float
) -> tuple[bool, Subset | None]:
    """Is the weighted measure q-spread?  nu(<S>) <= q^|S| over the support
    lattice; weights must be nonnegative and sum to one (within 1e-9)."""
    if not weighted:
        raise InvalidInputError("measure needs a nonempty support")
    if not 0.0 < q <= 1.0:
        raise InvalidInputError("q must lie in (0, 1]")
    ground = weighted[0][0].ground
    tot = math.fsum(w for _, w in weighted)
    if any(w < 0 for _, w in weighted) or abs(tot - 1.0) > 1e-9:
        raise InvalidInputError("weights must be nonnegative and sum to 1")
    seen: set[int] = set()
    for s, _ in weighted:
        if s.ground != ground:
            raise InvalidInputError("support sets live over different grounds")
        m = s.mask
        while m:
            seen.add(m)
            m = (m - 1) & s.mask
    for mask in sorted(seen, key=_mask_to_indices):
        nu = math.fsum(w for s, w in weighted if mask & ~s.mask == 0)
        if nu > q ** mask.bit_count() * (1.0 + REL_TOL) + 1e-15:
            return False, Subset(ground, mask)
    return True, None
