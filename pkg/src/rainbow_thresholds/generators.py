"""Construction of the application families at desk scale, plus toy and
random families for property testing.

Family edges are sets of ground elements; distinct underlying objects whose
edge sets coincide merge into multiplicity, so spread is computed on the
hypergraph the counting identities refer to.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .errors import CapacityError, DomainError, InvalidInputError
from .families import (
    GroundSet,
    IncreasingFamily,
    MultiHypergraph,
    letters_ground,
    make_family,
    make_hypergraph,
)
from .measures import split_generator

MAX_HAMILTON_N = 9
MAX_ENUM_VERTICES = 8


@dataclass(frozen=True)
class HostGraph:
    """A simple u-uniform host on vertices 1..n."""

    n: int
    u: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.u < 1 or self.n < self.u:
            raise InvalidInputError("host needs n >= u >= 1")
        seen = set()
        for e in self.edges:
            if len(e) != self.u:
                raise InvalidInputError("host edges must have size u")
            if not all(1 <= v <= self.n for v in e):
                raise InvalidInputError("host edge vertex out of range")
            if e in seen:
                raise InvalidInputError("host edges must be distinct")
            seen.add(e)


def complete_graph(n: int) -> HostGraph:
    return complete_hypergraph(n, 2)


def complete_hypergraph(n: int, u: int) -> HostGraph:
    edges = tuple(
        frozenset(c) for c in itertools.combinations(range(1, n + 1), u)
    )
    return HostGraph(n, u, edges)


def degree(host: HostGraph, t) -> int:
    """d_H(T): number of host edges containing the vertex set T."""
    tset = frozenset(t)
    return sum(1 for e in host.edges if tset <= e)


def min_degree_ell(host: HostGraph, ell_: int) -> int:
    """Minimum degree over all vertex sets of size ell."""
    if not 0 < ell_ < host.u:
        raise DomainError(f"need 0 < ell < u = {host.u}")
    return min(
        degree(host, t)
        for t in itertools.combinations(range(1, host.n + 1), ell_)
    )


def _edge_label(e: frozenset[int]) -> str:
    return "-".join(str(v) for v in sorted(e))


def host_ground(host: HostGraph) -> GroundSet:
    """Ground set whose elements are the host's edges."""
    return GroundSet(tuple(_edge_label(e) for e in host.edges))


def _edge_set_hypergraph(host: HostGraph, images: Counter) -> MultiHypergraph:
    ground = host_ground(host)
    items = []
    for edge_sets, mult in images.items():
        items.append((ground.subset(_edge_label(e) for e in edge_sets), mult))
    return make_hypergraph(ground, items)


def hamilton_cycles(n: int) -> MultiHypergraph:
    """All Hamilton cycles of K_n as edge sets over E(K_n); (n-1)!/2 members."""
    if not 3 <= n <= MAX_HAMILTON_N:
        raise CapacityError(f"hamilton_cycles supports 3 <= n <= {MAX_HAMILTON_N}")
    host = complete_graph(n)
    images: Counter = Counter()
    for perm in itertools.permutations(range(2, n + 1)):
        if perm[0] > perm[-1]:
            continue  # quotient by reflection
        seq = (1,) + perm
        cyc = frozenset(
            frozenset((seq[i], seq[(i + 1) % n])) for i in range(n)
        )
        images[cyc] += 1
    return _edge_set_hypergraph(host, images)


def ell_cycles(n: int, u: int, ell_: int) -> MultiHypergraph:
    """All Hamilton ell-cycles in the complete u-uniform host: windows of u
    consecutive vertices at stride u - ell around a cyclic order."""
    if not 1 <= ell_ < u:
        raise DomainError(f"need 1 <= ell < u; got ell = {ell_}, u = {u}")
    d = u - ell_
    if n % d != 0:
        raise DomainError(f"stride {d} must divide n = {n}")
    if n <= u:
        raise DomainError("a spanning cycle needs n > u")
    if n > MAX_ENUM_VERTICES:
        raise CapacityError(f"enumeration supports n <= {MAX_ENUM_VERTICES}")
    host = complete_hypergraph(n, u)
    t = n // d
    images: Counter = Counter()
    seen: set[frozenset] = set()
    for perm in itertools.permutations(range(1, n + 1)):
        windows = frozenset(
            frozenset(perm[(w * d + off) % n] for off in range(u))
            for w in range(t)
        )
        if len(windows) != t or windows in seen:
            continue
        seen.add(windows)
        images[windows] += 1
    return _edge_set_hypergraph(host, images)


def perfect_matchings(host: HostGraph) -> MultiHypergraph:
    """All perfect matchings of the host, each a set of n/u host edges."""
    if host.n % host.u != 0:
        raise DomainError(f"u = {host.u} must divide n = {host.n}")
    by_vertex: dict[int, list[frozenset[int]]] = {v: [] for v in range(1, host.n + 1)}
    for e in host.edges:
        for v in e:
            by_vertex[v].append(e)
    images: Counter = Counter()

    def extend(covered: frozenset[int], chosen: tuple) -> None:
        if len(covered) == host.n:
            images[frozenset(chosen)] += 1
            return
        v = min(set(range(1, host.n + 1)) - covered)
        for e in by_vertex[v]:
            if not (e & covered):
                extend(covered | e, chosen + (e,))

    extend(frozenset(), ())
    if not images:
        raise DomainError("host has no perfect matching")
    return _edge_set_hypergraph(host, images)


def tree_embeddings(host: HostGraph, tree_edges) -> MultiHypergraph:
    """Edge-set images of all embeddings of a spanning tree into the host.

    Tree vertices are 0..n-1 with n equal to the host's vertex count;
    multiplicity records how many embeddings share an image (always the
    automorphism count of the tree), which leaves spread untouched.
    """
    if host.u != 2:
        raise DomainError("tree embeddings need a graph host")
    tree = [tuple(e) for e in tree_edges]
    nverts = host.n
    if nverts > MAX_ENUM_VERTICES:
        raise CapacityError(f"enumeration supports n <= {MAX_ENUM_VERTICES}")
    verts = {v for e in tree for v in e}
    if verts != set(range(nverts)) or len(tree) != nverts - 1:
        raise InvalidInputError("tree must span vertices 0..n-1 with n-1 edges")
    host_edges = set(host.edges)
    images: Counter = Counter()
    for perm in itertools.permutations(range(1, nverts + 1)):
        img = []
        ok = True
        for a, b in tree:
            e = frozenset((perm[a], perm[b]))
            if e not in host_edges:
                ok = False
                break
            img.append(e)
        if ok:
            images[frozenset(img)] += 1
    if not images:
        raise DomainError("tree does not embed into the host")
    return _edge_set_hypergraph(host, images)


def power_hamilton(n: int, rp: int) -> MultiHypergraph:
    """Edge sets of rp-th powers of Hamilton cycles of K_n (rp*n elements
    each); cycles with equal powers merge into multiplicity."""
    if rp < 1:
        raise DomainError("power must be >= 1")
    if 2 * rp >= n:
        raise DomainError(f"need 2 rp < n; got rp = {rp}, n = {n}")
    if n > MAX_ENUM_VERTICES:
        raise CapacityError(f"enumeration supports n <= {MAX_ENUM_VERTICES}")
    host = complete_graph(n)
    images: Counter = Counter()
    for perm in itertools.permutations(range(2, n + 1)):
        if perm[0] > perm[-1]:
            continue
        seq = (1,) + perm
        power = frozenset(
            frozenset((seq[i], seq[(i + dist) % n]))
            for i in range(n)
            for dist in range(1, rp + 1)
        )
        images[power] += 1
    return _edge_set_hypergraph(host, images)


def single_edge(r: int) -> IncreasingFamily:
    """The family generated by one edge of size r over a ground of size r."""
    ground = letters_ground(r)
    return make_family(ground, [ground.full_subset()])


def sunflower(core_size: int, petal_count: int, petal_size: int) -> IncreasingFamily:
    """Edges sharing a common core, with disjoint petals of the given size;
    sunflower(1, 2, 1) is the worked two-edge family {{a,b},{a,c}}."""
    if core_size < 0 or petal_count < 1 or petal_size < 1:
        raise InvalidInputError("need core >= 0, petals >= 1, petal size >= 1")
    n = core_size + petal_count * petal_size
    ground = letters_ground(n)
    core = list(range(core_size))
    edges = []
    for j in range(petal_count):
        start = core_size + j * petal_size
        edges.append(ground.subset_of_indices(core + list(range(start, start + petal_size))))
    return make_family(ground, edges)


def random_family(
    n: int, max_edges: int, max_size: int, seed: int, stream: int = 0
) -> IncreasingFamily:
    """A seeded random antichain family over a ground of n elements.

    ``stream`` selects a substream of the master seed, so corpora of
    families can share one seed.
    """
    if n < 1 or max_edges < 1 or not 1 <= max_size <= n:
        raise InvalidInputError("need n >= 1, max_edges >= 1, 1 <= max_size <= n")
    gen = split_generator(seed, stream)
    ground = letters_ground(n)
    count = int(gen.integers(1, max_edges + 1))
    edges = []
    for _ in range(count):
        size = int(gen.integers(1, max_size + 1))
        members = gen.choice(n, size=size, replace=False)
        edges.append(ground.subset_of_indices(int(i) for i in members))
    return make_family(ground, edges)
