import itertools

import pytest

import rainbow_thresholds as rt
from conftest import edge_index_sets
from oracles import brute_count_members, is_member


def g(labels):
    return rt.GroundSet(tuple(labels))


def test_ground_set_validation():
    with pytest.raises(rt.InvalidInputError):
        g([])
    with pytest.raises(rt.InvalidInputError):
        g(["a", "a"])
    with pytest.raises(rt.InvalidInputError):
        g("abc").index("z")


def test_subset_basics():
    gs = g("abcd")
    s = gs.subset("bd")
    assert s.indices == (1, 3)
    assert s.labels == ("b", "d")
    assert len(s) == 2
    assert 1 in s and 0 not in s
    with pytest.raises(rt.InvalidInputError):
        rt.Subset(gs, 1 << 4)


def test_make_family_containment_reduction():
    gs = g("ab")
    fam = rt.make_family(gs, [gs.subset("a"), gs.subset("ab")])
    assert [e.labels for e in fam.minimal_edges] == [("a",)]


def test_make_family_antichain_unchanged():
    gs = g("abc")
    fam = rt.make_family(gs, [gs.subset("ab"), gs.subset("bc")])
    assert [e.labels for e in fam.minimal_edges] == [("a", "b"), ("b", "c")]


def test_make_family_order_independent():
    gs = g("abcd")
    edges = [gs.subset(x) for x in ("cd", "ab", "abc", "bd")]
    fam1 = rt.make_family(gs, edges)
    fam2 = rt.make_family(gs, list(reversed(edges)))
    assert fam1 == fam2


def test_k4_matchings_family_shape(k4_family):
    assert len(k4_family.minimal_edges) == 3
    assert rt.ell(k4_family) == 2


def test_contains():
    gs = g("abc")
    fam = rt.make_family(gs, [gs.subset("ab")])
    assert rt.contains(fam, gs.subset("abc"))
    assert not rt.contains(fam, gs.subset("a"))
    other = g("abcd")
    with pytest.raises(rt.InvalidInputError):
        rt.contains(fam, other.subset("ab"))


def test_no_matching_inside_triangle(k4_family):
    # the triangle 12,13,23 of K4 contains no perfect matching
    triangle = k4_family.ground.subset(["1-2", "1-3", "2-3"])
    assert not rt.contains(k4_family, triangle)


def test_ell():
    gs = g("abc")
    fam = rt.make_family(gs, [gs.subset("a"), gs.subset("bc")])
    assert rt.ell(fam) == 2
    assert rt.ell(rt.single_edge(4)) == 4
    ham5 = rt.family_of(rt.hamilton_cycles(5))
    assert ham5.ground.n == 10
    assert rt.ell(ham5) == 5
    with pytest.raises(rt.EmptyFamilyError):
        rt.ell(rt.make_family(gs, []))


def test_rainbow_member():
    gs = g("abc")
    fam = rt.make_family(gs, [gs.subset("ab")])
    assert rt.is_rainbow_member(fam, rt.colored_subset(gs, 2, [("a", 1), ("b", 2)]))
    assert not rt.is_rainbow_member(fam, rt.colored_subset(gs, 2, [("a", 1), ("b", 1)]))
    fam2 = rt.make_family(gs, [gs.subset("ab"), gs.subset("bc")])
    s = rt.colored_subset(gs, 2, [("a", 1), ("b", 1), ("c", 2)])
    assert rt.is_rainbow_member(fam2, s)  # via edge bc
    improper = rt.colored_subset(gs, 2, [("a", 1), ("a", 2)])
    with pytest.raises(rt.InvalidInputError):
        rt.is_rainbow_member(fam, improper)


def test_all_member():
    gs = g("ab")
    fam = rt.make_family(gs, [gs.subset("ab")])
    assert rt.is_all_member(fam, rt.colored_subset(gs, 2, [("a", 1), ("b", 1)]))
    assert not rt.is_all_member(fam, rt.colored_subset(gs, 2, [("a", 1)]))


def test_rainbow_implies_all(corpus):
    for fam in corpus.values():
        gs = fam.ground
        k = max(2, rt.ell(fam))
        gen = rt.split_generator(99)
        for _ in range(50):
            pairs = [
                (i, int(gen.integers(1, k + 1)))
                for i in range(gs.n)
                if gen.random() < 0.5
            ]
            s = rt.ColoredSubset(gs, k, frozenset(pairs))
            if rt.is_rainbow_member(fam, s):
                assert rt.is_all_member(fam, s)


def test_enumerate_members():
    gs = g("abc")
    assert rt.enumerate_members(rt.make_family(gs, [gs.subset("ab")])) == 2
    gs2 = g("ab")
    assert rt.enumerate_members(rt.make_family(gs2, [gs2.subset("a")])) == 2


def test_enumerate_members_k4(k4_family):
    # frozen from the exhaustive oracle over 2^6 subsets
    assert rt.enumerate_members(k4_family) == 37
    assert brute_count_members(edge_index_sets(k4_family), 6) == 37


def test_up_closure(corpus):
    for fam in corpus.values():
        n = fam.ground.n
        if n > 8:
            continue
        members = [
            t
            for t in range(1 << n)
            if rt.contains(fam, rt.Subset(fam.ground, t))
        ]
        member_set = set(members)
        for t in members:
            # adding any one element keeps membership
            for i in range(n):
                assert (t | 1 << i) in member_set


def test_cover_reduction(corpus):
    # F subset of <G> iff every minimal edge contains a member of G
    gen = rt.split_generator(5)
    for fam in corpus.values():
        n = fam.ground.n
        if n > 8:
            continue
        edges = edge_index_sets(fam)
        for _ in range(10):
            gsets = [
                frozenset(
                    int(i) for i in gen.choice(n, int(gen.integers(1, 3)), replace=False)
                )
                for _ in range(int(gen.integers(1, 4)))
            ]
            lhs = True
            for tmask in range(1 << n):
                tset = frozenset(i for i in range(n) if tmask >> i & 1)
                if is_member(edges, tset) and not any(s <= tset for s in gsets):
                    lhs = False
                    break
            rhs = all(any(s <= e for s in gsets) for e in edges)
            assert lhs == rhs


def test_antichain_validation():
    gs = g("ab")
    with pytest.raises(rt.InvalidInputError):
        rt.IncreasingFamily(gs, (gs.subset("a"), gs.subset("ab")))


def test_hypergraph_merge_and_total():
    gs = g("abc")
    h = rt.make_hypergraph(gs, [gs.subset("ab"), (gs.subset("ab"), 2), gs.subset("c")])
    assert h.total == 4
    assert h.multiplicity(gs.subset("ab")) == 3
    assert h.r == 2
    assert not h.is_uniform


def test_text_format_roundtrip():
    text = """
# a comment
a,b
b,c*3  # trailing comment
d
"""
    h = rt.parse_hypergraph_text(text)
    assert h.ground.labels == ("a", "b", "c", "d")
    assert h.total == 5
    out = rt.format_hypergraph_text(h)
    again = rt.parse_hypergraph_text(out)
    assert again == h


def test_text_format_errors():
    with pytest.raises(rt.InvalidInputError):
        rt.parse_hypergraph_text("a,a\n")
    with pytest.raises(rt.InvalidInputError):
        rt.parse_hypergraph_text("a,b*0\n")
    with pytest.raises(rt.InvalidInputError):
        rt.parse_hypergraph_text("a,b*x\n")
    with pytest.raises(rt.InvalidInputError):
        rt.parse_hypergraph_text("# only comments\n")


def test_text_format_file_roundtrip(tmp_path):
    h = rt.hamilton_cycles(4)
    path = tmp_path / "h.txt"
    rt.write_hypergraph(h, path)
    assert rt.read_hypergraph(path) == h


def test_capacity_guard():
    gs = rt.letters_ground(26)
    fam = rt.make_family(gs, [gs.subset_of_indices([i]) for i in range(26)])
    with pytest.raises(rt.CapacityError):
        rt.enumerate_members(fam)
