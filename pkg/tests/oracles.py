"""Independent brute-force oracles for the test suite.

Everything here works on plain index sets (frozensets/tuples over
range(n)) and uses direct enumeration only, deliberately avoiding the
library's bitmask, inclusion-exclusion, LP, and matching machinery.
"""

import itertools
from fractions import Fraction


def all_subsets(n):
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            yield frozenset(combo)


def is_member(edge_sets, t):
    return any(e <= t for e in edge_sets)


def brute_count_members(edge_sets, n):
    return sum(1 for t in all_subsets(n) if is_member(edge_sets, t))


def brute_mu(edge_sets, n, pvec):
    total = 0.0
    for t in all_subsets(n):
        if not is_member(edge_sets, t):
            continue
        w = 1.0
        for i in range(n):
            w *= pvec[i] if i in t else 1.0 - pvec[i]
        total += w
    return total


def brute_rainbow_count(t_set, edge_sets, k):
    """Colorings of t_set under which some edge inside t_set is rainbow."""
    inside = [sorted(e) for e in edge_sets if e <= t_set]
    elems = sorted(t_set)
    count = 0
    for coloring in itertools.product(range(1, k + 1), repeat=len(elems)):
        cmap = dict(zip(elems, coloring))
        for e in inside:
            cs = [cmap[x] for x in e]
            if len(set(cs)) == len(cs):
                count += 1
                break
    return count


def brute_mu_colored(edge_sets, n, k, pvec):
    """mu_p^k of the rainbow family by enumerating subsets and colorings."""
    total = 0.0
    for t in all_subsets(n):
        w = 1.0
        for i in range(n):
            w *= pvec[i] if i in t else 1.0 - pvec[i]
        if w == 0.0:
            continue
        hits = brute_rainbow_count(t, edge_sets, k)
        total += w * hits / k ** len(t)
    return total


def brute_min_cover(edge_sets, p, fractional_grid=None):
    """Exact integer cover minimum over all candidate subsets of edges."""
    candidates = set()
    for e in edge_sets:
        es = sorted(e)
        for size in range(len(es) + 1):
            for combo in itertools.combinations(es, size):
                candidates.add(frozenset(combo))
    candidates = sorted(candidates, key=lambda s: (len(s), sorted(s)))
    pf = Fraction(p) if not isinstance(p, Fraction) else p
    best = None
    for pick in range(1, 1 << len(candidates)):
        chosen = [candidates[i] for i in range(len(candidates)) if pick >> i & 1]
        if not all(any(s <= e for s in chosen) for e in edge_sets):
            continue
        cost = sum(pf ** len(s) for s in chosen)
        if best is None or cost < best:
            best = cost
    return float(best)


def brute_kappa(weighted_edges, n):
    """Optimal spread over every nonempty subset of the ground set."""
    total = sum(m for _, m in weighted_edges)
    best = None
    for s in all_subsets(n):
        if not s:
            continue
        inter = sum(m for e, m in weighted_edges if s <= e)
        if inter == 0:
            continue
        ratio = (total / inter) ** (1.0 / len(s))
        if best is None or ratio < best:
            best = ratio
    return best


def brute_check_spread(weighted_edges, n, kappa):
    total = sum(m for _, m in weighted_edges)
    for s in all_subsets(n):
        if not s:
            continue
        inter = sum(m for e, m in weighted_edges if s <= e)
        if inter * kappa ** len(s) > total * (1 + 1e-12):
            return False
    return True


def brute_intersection_levels(weighted_edges, a_set):
    """M_j(A) for all j by direct counting."""
    out = {}
    for e, m in weighted_edges:
        j = len(a_set & e)
        out[j] = out.get(j, 0) + m
    return out


def brute_sdr(edge_elems, avail):
    """Does an injective color assignment exist?  Tries all combinations."""
    elems = sorted(edge_elems)
    if any(x not in avail or not avail[x] for x in elems):
        return False
    for assignment in itertools.product(*(sorted(avail[x]) for x in elems)):
        if len(set(assignment)) == len(assignment):
            return True
    return False


def brute_pointwise_series(p, k, d, terms=40):
    x = p / k
    total = 0.0
    for j in range(1, terms + 1):
        import math

        total += x ** (2 * j) * math.comb(d, 2 * j)
        total -= x ** (2 * j + 1) * math.comb(d, 2 * j + 1)
    return total
