"""Ground sets, subsets, multi-hypergraphs, increasing families, and membership tests.

An increasing family F over a finite ground set X is closed under supersets
and is stored as its antichain of minimal edges H_F; F and H_F determine each
other.  Subsets are machine-word bitmasks over element indices, and the
canonical edge order is lexicographic on sorted index lists.

Colored objects live over X x {1..k}.  A colored subset is "proper" when no
element carries two colors; improper sets are representable (they carry
measure zero) but rejected by membership predicates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    DomainError,
    EmptyFamilyError,
    InvalidInputError,
)

ENUMERATION_MAX_GROUND = 25


def _mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class GroundSet:
    """An ordered finite ground set; elements are addressed by index 0..n-1."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise InvalidInputError("ground set needs at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInputError("ground set labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidInputError(f"unknown label {label!r}") from None

    def subset(self, labels) -> "Subset":
        mask = 0
        for lbl in labels:
            mask |= 1 << self.index(lbl)
        return Subset(self, mask)

    def subset_of_indices(self, indices) -> "Subset":
        mask = 0
        for i in indices:
            mask |= 1 << int(i)
        return Subset(self, mask)

    def full_subset(self) -> "Subset":
        return Subset(self, (1 << self.n) - 1)


def letters_ground(n: int) -> GroundSet:
    """Ground set labeled a, b, c, ... (x0, x1, ... beyond 26 elements)."""
    if n <= 26:
        return GroundSet(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))
    return GroundSet(tuple(f"x{i}" for i in range(n)))


@dataclass(frozen=True)
class Subset:
    """A subset of a ground set, stored as a bitmask over element indices."""

    ground: GroundSet
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.ground.n:
            raise InvalidInputError("subset index out of range for ground set")

    @property
    def indices(self) -> tuple[int, ...]:
        return _mask_to_indices(self.mask)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.ground.labels[i] for i in self.indices)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __le__(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.ground, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.ground, self.mask & other.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def _check_same_ground(a: GroundSet, b: GroundSet) -> None:
    if a != b:
        raise InvalidInputError("objects live over different ground sets")


@dataclass(frozen=True)
class MultiHypergraph:
    """An edge multiset over a ground set; r is the maximum edge size.

    Edges are canonically ordered and duplicate member sets are merged into
    multiplicities, so the hypergraph is r-bounded by construction and
    ``total`` counts edges with multiplicity.
    """

    ground: GroundSet
    edges: tuple[tuple[Subset, int], ...]

    def __post_init__(self):
        seen = set()
        for e, m in self.edges:
            _check_same_ground(e.ground, self.ground)
            if m < 1:
                raise InvalidInputError("edge multiplicities must be >= 1")
            if e.mask in seen:
                raise InvalidInputError("duplicate member set; use make_hypergraph")
            seen.add(e.mask)

    @property
    def r(self) -> int:
        if not self.edges:
            raise DomainError("bound r undefined for an empty hypergraph")
        return max(len(e) for e, _ in self.edges)

    @property
    def total(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(m for _, m in self.edges)

    @property
    def is_uniform(self) -> bool:
        sizes = {len(e) for e, _ in self.edges}
        return len(sizes) == 1

    def multiplicity(self, s: Subset) -> int:
        _check_same_ground(s.ground, self.ground)
        for e, m in self.edges:
            if e.mask == s.mask:
                return m
        return 0


def make_hypergraph(ground: GroundSet, edges) -> MultiHypergraph:
    """Build a MultiHypergraph, merging identical member sets into multiplicity.

    ``edges`` is an iterable of Subset or (Subset, multiplicity) pairs.
    """
    counts: dict[int, int] = {}
    for item in edges:
        if isinstance(item, Subset):
            e, m = item, 1
        else:
            e, m = item
        _check_same_ground(e.ground, ground)
        if m < 1:
            raise InvalidInputError("edge multiplicities must be >= 1")
        counts[e.mask] = counts.get(e.mask, 0) + int(m)
    ordered = sorted(counts.items(), key=lambda km: _mask_to_indices(km[0]))
    return MultiHypergraph(
        ground, tuple((Subset(ground, mask), m) for mask, m in ordered)
    )


@dataclass(frozen=True)
class IncreasingFamily:
    """An increasing family, stored as its antichain of minimal edges."""

    ground: GroundSet
    minimal_edges: tuple[Subset, ...]

    def __post_init__(self):
        masks = [e.mask for e in self.minimal_edges]
        for e in self.minimal_edges:
            _check_same_ground(e.ground, self.ground)
        if len(set(masks)) != len(masks):
            raise InvalidInputError("minimal edges must be distinct")
        for a, b in itertools.combinations(masks, 2):
            if a & ~b == 0 or b & ~a == 0:
                raise InvalidInputError("minimal edges must form an antichain")

    @property
    def is_empty(self) -> bool:
        return not self.minimal_edges

    @property
    def is_trivial(self) -> bool:
        """True iff F = 2^X, i.e. the empty set is a member."""
        return any(e.mask == 0 for e in self.minimal_edges)

    @property
    def support(self) -> Subset:
        """Union of all minimal edges."""
        mask = 0
        for e in self.minimal_edges:
            mask |= e.mask
        return Subset(self.ground, mask)


def make_family(ground: GroundSet, edges) -> IncreasingFamily:
    """Antichain reduction: drop any edge that contains another given edge.

    The result is order-independent: edges are deduplicated, reduced, and
    sorted lexicographically on their sorted index lists.  An empty edge list
    yields the empty family.
    """
    masks = []
    for e in edges:
        _check_same_ground(e.ground, ground)
        masks.append(e.mask)
    masks = sorted(set(masks), key=lambda m: (m.bit_count(), _mask_to_indices(m)))
    minimal: list[int] = []
    for m in masks:
        if not any(q & ~m == 0 for q in minimal):
            minimal.append(m)
    minimal.sort(key=_mask_to_indices)
    return IncreasingFamily(ground, tuple(Subset(ground, m) for m in minimal))


def as_hypergraph(family: IncreasingFamily) -> MultiHypergraph:
    """The minimal edges of a family as a multiplicity-one hypergraph."""
    return make_hypergraph(family.ground, family.minimal_edges)


def family_of(hypergraph: MultiHypergraph) -> IncreasingFamily:
    """The increasing family generated by a hypergraph's member sets."""
    return make_family(hypergraph.ground, [e for e, _ in hypergraph.edges])


def contains(family: IncreasingFamily, t: Subset) -> bool:
    """Membership T in F: true iff some minimal edge is a subset of T."""
    _check_same_ground(t.ground, family.ground)
    return any(e.mask & ~t.mask == 0 for e in family.minimal_edges)


def ell(family: IncreasingFamily) -> int:
    """Maximum size of a minimal edge."""
    if family.is_empty:
        raise EmptyFamilyError("ell is undefined for the empty family")
    return max(len(e) for e in family.minimal_edges)


@dataclass(frozen=True)
class ColoredSubset:
    """A set of (element index, color) pairs over X x {1..k}.

    Proper means all first coordinates are distinct; only proper sets carry
    positive colored measure, and membership predicates require properness.
    """

    ground: GroundSet
    k: int
    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInputError("color count k must be >= 1")
        for x, c in self.pairs:
            if not 0 <= x < self.ground.n:
                raise InvalidInputError("colored pair element out of range")
            if not 1 <= c <= self.k:
                raise InvalidInputError("color out of range 1..k")

    @property
    def is_proper(self) -> bool:
        elems = [x for x, _ in self.pairs]
        return len(set(elems)) == len(elems)

    @property
    def projection(self) -> Subset:
        """The uncolored shadow S_X of this set."""
        mask = 0
        for x, _ in self.pairs:
            mask |= 1 << x
        return Subset(self.ground, mask)

    def color_of(self, index: int) -> int:
        for x, c in self.pairs:
            if x == index:
                return c
        raise InvalidInputError(f"element {index} not in colored subset")

    def __len__(self) -> int:
        return len(self.pairs)


def colored_subset(ground: GroundSet, k: int, pairs) -> ColoredSubset:
    """Build a ColoredSubset from (label-or-index, color) pairs."""
    norm = set()
    for x, c in pairs:
        idx = ground.index(x) if isinstance(x, str) else int(x)
        norm.add((idx, int(c)))
    return ColoredSubset(ground, k, frozenset(norm))


def _require_proper(s: ColoredSubset) -> dict[int, int]:
    if not s.is_proper:
        raise InvalidInputError("colored subset repeats an element")
    return {x: c for x, c in s.pairs}


def is_rainbow_member(family: IncreasingFamily, s: ColoredSubset) -> bool:
    """Membership in F^rb: some minimal edge lies in S with pairwise distinct colors."""
    _check_same_ground(s.ground, family.ground)
    coloring = _require_proper(s)
    support = s.projection.mask
    for e in family.minimal_edges:
        if e.mask & ~support:
            continue
        colors = [coloring[i] for i in e.indices]
        if len(set(colors)) == len(colors):
            return True
    return False


def is_all_member(family: IncreasingFamily, s: ColoredSubset) -> bool:
    """Membership in F^all: the projection S_X is in F (colors ignored)."""
    _check_same_ground(s.ground, family.ground)
    _require_proper(s)
    return contains(family, s.projection)


def enumerate_members(family: IncreasingFamily) -> int:
    """Exact number of members of F among all subsets of the ground set.

    Exhaustive by construction; guarded to n <= 25 ground elements.
    """
    n = family.ground.n
    if n > ENUMERATION_MAX_GROUND:
        raise CapacityError(f"enumeration guard: n = {n} > {ENUMERATION_MAX_GROUND}")
    if family.is_empty:
        return 0
    total = 0
    chunk = 1 << 20
    dtype = np.uint32 if n <= 32 else np.uint64
    masks = np.array([e.mask for e in family.minimal_edges], dtype=dtype)
    for start in range(0, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        block = np.arange(start, stop, dtype=dtype)
        hit = np.zeros(stop - start, dtype=bool)
        for m in masks:
            hit |= (block & m) == m
        total += int(hit.sum())
    return total


# ---------------------------------------------------------------------------
# Text format: one edge per line as comma-separated element labels, optional
# multiplicity suffix `*m` for hypergraph lines, `#` starts a comment.
# ---------------------------------------------------------------------------


def parse_hypergraph_text(text: str) -> MultiHypergraph:
    """Parse the edge-per-line text format into a MultiHypergraph.

    The ground set consists of the labels in order of first appearance.
    """
    rows: list[tuple[list[str], int]] = []
    labels: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mult = 1
        if "*" in line:
            body, _, tail = line.rpartition("*")
            try:
                mult = int(tail.strip())
            except ValueError:
                raise InvalidInputError(
                    f"line {lineno}: bad multiplicity suffix {tail!r}"
                ) from None
            if mult < 1:
                raise InvalidInputError(f"line {lineno}: multiplicity must be >= 1")
            line = body
        parts = [p.strip() for p in line.split(",")]
        if any(not p for p in parts):
            raise InvalidInputError(f"line {lineno}: empty label")
        if len(set(parts)) != len(parts):
            raise InvalidInputError(f"line {lineno}: repeated label in edge")
        for p in parts:
            if p not in seen:
                seen.add(p)
                labels.append(p)
        rows.append((parts, mult))
    if not rows:
        raise InvalidInputError("no edges found in hypergraph text")
    ground = GroundSet(tuple(labels))
    return make_hypergraph(
        ground, ((ground.subset(parts), mult) for parts, mult in rows)
    )


def format_hypergraph_text(h: MultiHypergraph) -> str:
    lines = []
    for e, m in h.edges:
        body = ",".join(e.labels)
        lines.append(body if m == 1 else f"{body}*{m}")
    return "\n".join(lines) + "\n"


def read_hypergraph(path) -> MultiHypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph_text(fh.read())


def write_hypergraph(h: MultiHypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_hypergraph_text(h))
