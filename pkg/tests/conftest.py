import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import rainbow_thresholds as rt


def k4_matchings_family():
    """The three perfect matchings of K4 as a family over E(K4)."""
    return rt.family_of(rt.perfect_matchings(rt.complete_graph(4)))


def tiny_corpus():
    """Named small families used across the property tests."""
    fams = {
        "single1": rt.single_edge(1),
        "single2": rt.single_edge(2),
        "single3": rt.single_edge(3),
        "worked": rt.sunflower(1, 2, 1),
        "sunflower213": rt.sunflower(2, 1, 3),
        "sunflower122": rt.sunflower(1, 2, 2),
        "two-disjoint": rt.make_family(
            rt.letters_ground(4),
            [rt.letters_ground(4).subset("ab"), rt.letters_ground(4).subset("cd")],
        ),
        "k4-matchings": k4_matchings_family(),
    }
    for seed in (3, 7, 21):
        fams[f"random{seed}"] = rt.random_family(6, 4, 3, seed)
    return fams


@pytest.fixture(scope="session")
def corpus():
    return tiny_corpus()


@pytest.fixture(scope="session")
def k4_family():
    return k4_matchings_family()


def edge_index_sets(family):
    """Minimal edges as frozensets of indices, for the oracles."""
    return [frozenset(e.indices) for e in family.minimal_edges]
