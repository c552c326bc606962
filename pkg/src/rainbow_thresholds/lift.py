"""Rainbow lifts of hypergraphs and the transversal-event machinery.

Lifting an r-bounded hypergraph H over X to the colored ground X x {1..k}
replaces every edge E by all of its rainbow colorings (one colored edge per
injective assignment of colors, multiplicity inherited), giving H'.  Padding
then multiplies the multiplicity of each size-t colored edge by the falling
factorial (k-t)_{r-t}, giving H'' with exactly (k)_r |H| edges counted with
multiplicity.  Intersections with an up-set <S> factor through the
projection S_X, which is what transfers spread bounds from H to H''.

The transversal event asks whether a random set of (element, color) pairs
contains an edge of H with a system of distinct color representatives; the
check runs one bipartite augmenting-path matching per edge with a fixed scan
order, so outcomes are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    CapacityError,
    DomainError,
    InvalidInputError,
    PreconditionError,
)
from .families import (
    ColoredSubset,
    GroundSet,
    MultiHypergraph,
    Subset,
    _mask_to_indices,
    make_hypergraph,
)
from .measures import falling_factorial_int, split_generator
from .spread import (
    SpreadProfile,
    intersection_count,
    intersection_profile,
    optimal_spread,
)

LIFT_GUARD = 10**6
REL_TOL = 1e-12
MIN_SPIRO_KAPPA = 6.0


def falling_factorial(k: int, r: int) -> int:
    """(k)_r = k (k-1) ... (k-r+1), defined here for 0 <= r <= k."""
    if r < 0 or r > k:
        raise DomainError(f"falling factorial needs 0 <= r <= k; got ({k}, {r})")
    return falling_factorial_int(k, r)


@dataclass(frozen=True)
class ColoredHypergraph:
    """A multi-hypergraph over X x {1..k} whose edges are rainbow colorings
    of edges of a source hypergraph."""

    ground: GroundSet
    k: int
    r: int
    edges: tuple[tuple[ColoredSubset, int], ...]
    source: MultiHypergraph

    def __post_init__(self):
        for s, m in self.edges:
            if m < 1:
                raise InvalidInputError("multiplicities must be >= 1")
            if not s.is_proper:
                raise InvalidInputError("colored edges must not repeat elements")
            colors = [c for _, c in s.pairs]
            if len(set(colors)) != len(colors):
                raise InvalidInputError("colored edges must be rainbow")
            if self.source.multiplicity(s.projection) == 0:
                raise InvalidInputError("edge projection is not a source edge")

    @property
    def total(self) -> int:
        return sum(m for _, m in self.edges)

    @cached_property
    def product_form(self) -> MultiHypergraph:
        """The same hypergraph over an explicit product ground set.

        Element (x, c) becomes index x*k + (c-1) with label "<x>@<c>"; this
        lets the spread certifiers run unchanged on colored objects.
        """
        labels = tuple(
            f"{lbl}@{c}" for lbl in self.ground.labels for c in range(1, self.k + 1)
        )
        pg = GroundSet(labels)
        items = []
        for s, m in self.edges:
            mask = 0
            for x, c in s.pairs:
                mask |= 1 << (x * self.k + (c - 1))
            items.append((Subset(pg, mask), m))
        return make_hypergraph(pg, items)

    def product_pairs(self, mask: int) -> frozenset[tuple[int, int]]:
        """Decode a product-ground mask back to (element, color) pairs."""
        pairs = set()
        i = 0
        while mask:
            if mask & 1:
                pairs.add((i // self.k, i % self.k + 1))
            mask >>= 1
            i += 1
        return frozenset(pairs)


def lift_rainbow(h: MultiHypergraph, k: int) -> ColoredHypergraph:
    """H': every rainbow coloring of every edge, multiplicity inherited.

    An edge of size t expands into (k)_t colored edges, so the lifted total
    is sum_E m_H(E) (k)_{|E|}.
    """
    r = h.r
    if k < r:
        raise PreconditionError(f"need k >= r = {r} colors; got k = {k}")
    budget = sum(falling_factorial(k, len(e)) for e, _ in h.edges)
    if budget > LIFT_GUARD:
        raise CapacityError("lift would materialize too many colored edges")
    import itertools

    out = []
    for e, m in h.edges:
        idx = e.indices
        for colors in itertools.permutations(range(1, k + 1), len(idx)):
            s = ColoredSubset(h.ground, k, frozenset(zip(idx, colors)))
            out.append((s, m))
    return ColoredHypergraph(h.ground, k, r, tuple(out), h)


def pad_lift(hp: ColoredHypergraph, r: int) -> ColoredHypergraph:
    """H'': scale each size-t colored edge's multiplicity by (k-t)_{r-t}.

    Verifies the count identity |H''| = (k)_r |H| before returning.  For
    r-uniform sources with r = hp.r the padding factor is 1 and H'' = H'.
    """
    k = hp.k
    if r > k:
        raise DomainError(f"padding target r = {r} exceeds k = {k}")
    out = []
    for s, m in hp.edges:
        t = len(s)
        if t > r:
            raise DomainError(f"padding target r = {r} below edge size {t}")
        out.append((s, m * falling_factorial(k - t, r - t)))
    padded = ColoredHypergraph(hp.ground, k, r, tuple(out), hp.source)
    expected = falling_factorial(k, r) * hp.source.total
    if padded.total != expected:
        raise InvalidInputError(
            f"count identity failed: |H''| = {padded.total}, expected {expected}"
        )
    return padded


def colored_intersection_count(ch: ColoredHypergraph, s) -> int:
    """|H'' meet <S>| for a colored set S (ColoredSubset or pair iterable)."""
    pairs = s.pairs if isinstance(s, ColoredSubset) else frozenset(
        (int(x), int(c)) for x, c in s
    )
    count = 0
    for e, m in ch.edges:
        if pairs <= e.pairs:
            count += m
    return count


# ---------------------------------------------------------------------------
# Spread transfer verification.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftSpreadReport:
    ok: bool
    bound_ok: bool
    identity_ok: bool
    falling_ok: bool
    worst_ratio: float
    checked: int
    witness: ColoredSubset | None


def _submasks_up_to(mask: int, depth: int):
    import itertools

    from .families import _mask_to_indices

    idx = _mask_to_indices(mask)
    for size in range(1, min(depth, len(idx)) + 1):
        for combo in itertools.combinations(idx, size):
            sub = 0
            for i in combo:
                sub |= 1 << i
            yield sub


def verify_lift_spread(
    h: MultiHypergraph, hpp: ColoredHypergraph, kappa: float, depth: int
) -> LiftSpreadReport:
    """Check the transferred spread bound on H'' against its source bound.

    For every lattice set S of size s <= depth this checks the bound
    |H'' meet <S>| <= e^s |H''| / (k kappa)^s, the exact factorization
    |H'' meet <S>| = (k-s)_{r-s} |H meet <S_X>|, and the arithmetic step
    (k)_s >= (k/e)^s.  Requires kappa <= kappa*(H), the source's optimal
    spread.
    """
    cert = optimal_spread(h)
    if kappa > cert.kappa * (1.0 + REL_TOL):
        raise PreconditionError(
            f"kappa = {kappa} exceeds the optimal spread {cert.kappa}"
        )
    k, r = hpp.k, hpp.r
    total = hpp.total
    # intersection counts for the whole depth-limited lattice, edge by edge
    counts: dict[int, int] = {}
    for e, m in hpp.product_form.edges:
        for sub in _submasks_up_to(e.mask, depth):
            counts[sub] = counts.get(sub, 0) + m
    base_counts: dict[int, int] = {}

    bound_ok = identity_ok = falling_ok = True
    worst = 0.0
    witness = None
    for mask in sorted(counts):
        s = mask.bit_count()
        count = counts[mask]
        pairs = hpp.product_pairs(mask)
        base_mask = 0
        for x, _ in pairs:
            base_mask |= 1 << x
        base_count = base_counts.get(base_mask)
        if base_count is None:
            base_count = intersection_count(h, Subset(h.ground, base_mask))
            base_counts[base_mask] = base_count
        if count != falling_factorial(k - s, r - s) * base_count:
            identity_ok = False
            witness = ColoredSubset(hpp.ground, k, pairs)
        ratio = count * (k * kappa) ** s / (math.e**s * total)
        worst = max(worst, ratio)
        if ratio > 1.0 + REL_TOL:
            bound_ok = False
            if witness is None:
                witness = ColoredSubset(hpp.ground, k, pairs)
    for s in range(1, depth + 1):
        if falling_factorial_int(k, s) < (k / math.e) ** s * (1.0 - REL_TOL):
            falling_ok = False
    ok = bound_ok and identity_ok and falling_ok
    return LiftSpreadReport(
        ok, bound_ok, identity_ok, falling_ok, worst, len(counts), witness
    )


@dataclass(frozen=True)
class LiftSpiroReport:
    ok: bool
    target_ok: bool
    links_ok: bool
    target_q: float
    geometric_checked: bool
    worst_ratio: float
    checked: int
    failures: tuple[str, ...]


def verify_lift_spiro(
    h: MultiHypergraph,
    hpp: ColoredHypergraph,
    profile: SpreadProfile,
    depth: int | None = None,
    enforce_min_kappa: bool = True,
) -> LiftSpiroReport:
    """Check the layered spread transfer onto H'' link by link.

    With kappa = 1/profile.q, the target is that H'' is
    (3e/(k kappa); r_1..r_lambda)-spread, clamped at q = 1 when k kappa is
    small.  Independently, for every colored lattice set A up to ``depth``
    and every applicable level s, the counting chain is validated:

      * partition identity: M_s(A) equals the sum over t of edges with
        |A meet T| = s and |T_X meet A_X| = t;
      * per-projection bound: that count is at most
        C(t, s) (k-s)_{r-s} N_t, with N_t the source count at level t;
      * source spread: N_t <= kappa^{-t} |H|;
      * geometric tail (only meaningful for kappa >= 6):
        sum_{t>=s} (2/kappa)^t <= (3/2) (2/kappa)^s <= (3/kappa)^s;
      * falling factorial: (k)_s >= (k/e)^s.

    The kappa >= 6 precondition is enforced by default; pass
    ``enforce_min_kappa=False`` to validate the kappa-free links on
    desk-scale instances whose measured spread is smaller.
    """
    import numpy as np

    from .spread import _lattice_intersections

    kappa = 1.0 / profile.q
    if enforce_min_kappa and kappa < MIN_SPIRO_KAPPA:
        raise PreconditionError(f"layered transfer assumes kappa >= 6; got {kappa}")
    if not h.is_uniform:
        raise PreconditionError("layered transfer needs a uniform source")
    if profile.radii[-1] != 1:
        raise PreconditionError("profile must end at radius 1")
    k, r = hpp.k, hpp.r
    total_src = h.total
    total = hpp.total
    target_q = min(1.0, 3.0 * math.e / (k * kappa))
    radii = profile.radii
    geometric = kappa >= MIN_SPIRO_KAPPA
    failures: list[str] = []
    target_ok = True
    worst = 0.0
    checked = 0
    depth = radii[0] if depth is None else depth

    # one row per H'' edge: color of each base element (0 = absent)
    n = h.ground.n
    colors = np.zeros((len(hpp.edges), n), dtype=np.int16)
    mults = np.zeros(len(hpp.edges), dtype=np.int64)
    for row, (t_edge, m) in enumerate(hpp.edges):
        mults[row] = m
        for x, c in t_edge.pairs:
            colors[row, x] = c
    src_profiles: dict[int, dict[int, int]] = {}

    # the colored lattice is exactly (base lattice set) x (injective coloring)
    base_masks = sorted(
        mask for mask in _lattice_intersections(h) if mask.bit_count() <= depth
    )
    for base_mask in base_masks:
        a = base_mask.bit_count()
        levels: set[int] = set()
        for i in range(profile.lam - 1):
            if radii[i] >= a >= radii[i + 1]:
                levels.update(range(radii[i + 1], a + 1))
        if not levels:
            continue
        xs = list(_mask_to_indices(base_mask))
        src_profile = src_profiles.get(base_mask)
        if src_profile is None:
            src_profile = intersection_profile(h, Subset(h.ground, base_mask))
            src_profiles[base_mask] = src_profile
        cols = colors[:, xs]
        t_arr = (cols > 0).sum(axis=1)

        def tabulate(assignment):
            s_arr = (cols == np.array(assignment, dtype=np.int16)).sum(axis=1)
            joint = np.zeros((a + 1, a + 1), dtype=np.int64)
            np.add.at(joint, (s_arr, t_arr), mults)
            return joint

        # Relabeling the colors permutes H'' onto itself, so all (k)_a
        # rainbow assignments of this base set share one joint table; the
        # canonical one is checked in full and the symmetry is spot-checked.
        canonical = tuple(range(1, a + 1))
        joint = tabulate(canonical)
        spot = {tuple(range(a, 0, -1)), tuple(range(2, a + 2))} - {canonical}
        for other in sorted(spot):
            if max(other) <= k and not np.array_equal(joint, tabulate(other)):
                failures.append(f"color symmetry at base {xs}, colors {other}")
        label = tuple(zip(xs, canonical))
        if int(joint.sum()) != total:
            failures.append(f"partition identity at A={label}")
        assignments = falling_factorial_int(k, a)
        for s in sorted(levels):
            checked += assignments
            ms = int(joint[s].sum())
            if ms > target_q**s * total * (1.0 + REL_TOL):
                target_ok = False
            worst = max(worst, ms / (target_q**s * total))
            pad = falling_factorial_int(k - s, r - s)
            for t in range(s, a + 1):
                cnt = int(joint[s, t])
                nt = src_profile.get(t, 0)
                if cnt > math.comb(t, s) * pad * nt + REL_TOL:
                    failures.append(
                        f"projection bound at A={label}, s={s}, t={t}"
                    )
                if nt > kappa ** (-t) * total_src * (1.0 + REL_TOL):
                    failures.append(f"source spread at A_X={xs}, t={t}")
            if geometric:
                tail = sum((2.0 / kappa) ** t for t in range(s, a + 1))
                if tail > 1.5 * (2.0 / kappa) ** s * (1.0 + REL_TOL):
                    failures.append(f"geometric tail at s={s}, a={a}")
                if 1.5 * (2.0 / kappa) ** s > (3.0 / kappa) ** s * (1.0 + REL_TOL):
                    failures.append(f"geometric consolidation at s={s}")
            if falling_factorial_int(k, s) < (k / math.e) ** s * (1.0 - REL_TOL):
                failures.append(f"falling factorial bound at s={s}")
    links_ok = not failures
    return LiftSpiroReport(
        target_ok and links_ok,
        target_ok,
        links_ok,
        target_q,
        geometric,
        worst,
        checked,
        tuple(failures),
    )


# ---------------------------------------------------------------------------
# Transversal events.
# ---------------------------------------------------------------------------


def has_rainbow_transversal(sample, h: MultiHypergraph) -> bool:
    """True iff some edge of H has a system of distinct color representatives
    inside the sample of (element, color) pairs.

    The sample may give one element several colors (the transversal model);
    each edge is tested by bipartite matching between its elements and the
    sampled colors.
    """
    pairs = sample.pairs if isinstance(sample, ColoredSubset) else sample
    avail: dict[int, list[int]] = {}
    for x, c in pairs:
        avail.setdefault(int(x), []).append(int(c))
    for cs in avail.values():
        cs.sort()
    for e, _ in h.edges:
        idx = e.indices
        if all(i in avail for i in idx) and _sdr_exists(idx, avail):
            return True
    return False


def _sdr_exists(elements: tuple[int, ...], avail: dict[int, list[int]]) -> bool:
    owner: dict[int, int] = {}  # color -> position in `elements`

    def assign(pos: int, taken: set[int]) -> bool:
        for c in avail[elements[pos]]:
            if c in taken:
                continue
            taken.add(c)
            if c not in owner or assign(owner[c], taken):
                owner[c] = pos
                return True
        return False

    for pos in range(len(elements)):
        if not assign(pos, set()):
            return False
    return True


def transversal_trial(h: MultiHypergraph, k: int, p: float, seed: int) -> bool:
    """One sample of the product ground at rate p/k, tested for a rainbow
    transversal edge."""
    if k < h.r:
        raise PreconditionError(f"need k >= r = {h.r}; got k = {k}")
    if not 0.0 < p <= 1.0:
        raise InvalidInputError("p must lie in (0, 1]")
    n = h.ground.n
    gen = split_generator(seed)
    u = gen.random((n, k))
    sample = [
        (i, c + 1) for i in range(n) for c in range(k) if u[i, c] < p / k
    ]
    return has_rainbow_transversal(sample, h)
