"""Cover-based expectation thresholds: p-smallness, its LP relaxation, and
the bisection solvers for q(F) and q_f(F).

F is p-small when some collection G of sets covers F (every member of F
contains a member of G) with total weight sum_{S in G} p^{|S|} <= 1/2;
weak p-smallness replaces G by nonnegative weights g(S) with
sum_{S subset T} g(S) >= 1 for every member T.  Both decisions reduce to the
minimal edges: F is covered iff every minimal edge contains a member of G,
and the only useful candidate sets S are subsets of minimal edges (any other
S covers nothing new at equal or higher weight).  The candidate space is
therefore the sub-edge lattice; the reduction is exactness-preserving and is
exercised against exhaustive oracles in the tests.

The fractional optimum is computed by an in-module primal simplex with
Bland's rule, solving the covering dual

    max sum_T y_T   s.t.  sum_{T >= S} y_T <= p^{|S|} for every candidate S,

whose shadow prices are the cover weights g.  With at most 200 candidate
columns the tableau runs over exact rationals, so optima and certificates
are exact; larger instances fall back to floating point.  Every fractional
solve ships the dual vector, and check_cover_certificate verifies primal
feasibility, dual feasibility over the full lattice, and objective agreement
at 1e-9.

The integer optimum uses branch and bound over the minimal edges in order of
fewest candidate subsets, with the fractional value as a lower bound and
memoized exact completions; an exhaustive oracle is available for lattices
of at most 12 candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, DomainError, NumericalError
from .families import IncreasingFamily, Subset, _mask_to_indices
from .thresholds import INTERIOR, ThresholdResult

LATTICE_GUARD = 10**6
EXACT_SIMPLEX_MAX_COLUMNS = 200
EXHAUSTIVE_MAX_CANDIDATES = 12
SIMPLEX_MAX_PIVOTS = 20_000
CERT_TOL = 1e-9
DEFAULT_COVER_TOL = 1e-6

INTEGER = "integer"
FRACTIONAL = "fractional"


@dataclass(frozen=True)
class CoverSolution:
    """A weighted cover certifying (weak) p-smallness at probability p.

    ``support`` holds the sets with nonzero weight (binary weights in
    integer mode).  Fractional solutions carry the dual multipliers, one per
    minimal edge, that certify optimality.
    """

    support: tuple[tuple[Subset, float], ...]
    cost: float
    p: float
    mode: str
    dual: tuple[tuple[Subset, float], ...] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "p": self.p,
            "cost": self.cost,
            "support": [
                {"labels": list(s.labels), "weight": w} for s, w in self.support
            ],
        }
        if self.dual is not None:
            out["dual"] = [
                {"labels": list(t.labels), "weight": y} for t, y in self.dual
            ]
        return out


def _require_solvable(family: IncreasingFamily) -> None:
    if family.is_empty:
        raise DomainError("cover thresholds are undefined for the empty family")
    if family.is_trivial:
        raise DomainError("cover thresholds are undefined for the full family")


def candidate_lattice(family: IncreasingFamily) -> list[Subset]:
    """All subsets of minimal edges (the useful cover candidates), with the
    empty set, deduplicated and in (size, index-lex) order."""
    budget = sum(1 << len(e) for e in family.minimal_edges)
    if budget > LATTICE_GUARD:
        raise CapacityError("sub-edge lattice exceeds the candidate guard")
    seen: set[int] = set()
    for e in family.minimal_edges:
        s = e.mask
        while True:
            seen.add(s)
            if s == 0:
                break
            s = (s - 1) & e.mask
    ordered = sorted(seen, key=lambda m: (m.bit_count(), _mask_to_indices(m)))
    return [Subset(family.ground, m) for m in ordered]


# ---------------------------------------------------------------------------
# Simplex on the covering dual.
# ---------------------------------------------------------------------------


def _simplex_covering_dual(coverage: list[int], costs: list, m: int, exact: bool):
    """max 1.y  s.t.  for each row i: sum_{j in coverage[i]} y_j <= costs[i].

    Rows are candidate sets, columns are minimal edges (coverage[i] is the
    bitmask of edges containing candidate i).  Returns (objective, y, g)
    where g (the shadow prices, one per row) solves the original covering
    LP.  Bland's rule precludes cycling; the pivot cap guards degeneracy
    bugs.
    """
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    eps = zero if exact else 1e-12
    nrows = len(coverage)
    ncols = m + nrows

    tableau = []
    for i, cov in enumerate(coverage):
        row = [one if cov >> j & 1 else zero for j in range(m)]
        row.extend(one if t == i else zero for t in range(nrows))
        row.append(costs[i])
        tableau.append(row)
    # objective row holds z_j - c_j; structural columns have c_j = 1
    obj = [-one] * m + [zero] * nrows + [zero]
    basis = [m + i for i in range(nrows)]

    for _ in range(SIMPLEX_MAX_PIVOTS):
        enter = next((j for j in range(ncols) if obj[j] < -eps), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(nrows):
            a = tableau[i][enter]
            if a > eps:
                ratio = tableau[i][-1] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best, leave = ratio, i
        if leave is None:
            raise NumericalError("covering dual is unbounded; lattice lacks the empty set")
        piv = tableau[leave][enter]
        tableau[leave] = [v / piv for v in tableau[leave]]
        for i in range(nrows):
            if i != leave and tableau[i][enter] != zero:
                f = tableau[i][enter]
                tableau[i] = [v - f * w for v, w in zip(tableau[i], tableau[leave])]
        if obj[enter] != zero:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tableau[leave])]
        basis[leave] = enter
    else:
        raise NumericalError("simplex pivot cap exceeded")

    y = [zero] * m
    for i, b in enumerate(basis):
        if b < m:
            y[b] = tableau[i][-1]
    g = [obj[m + i] for i in range(nrows)]
    objective = obj[-1]
    return objective, y, g


# ---------------------------------------------------------------------------
# Per-family solver context (p-independent structure, reused by bisection).
# ---------------------------------------------------------------------------


class _CoverContext:
    def __init__(self, family: IncreasingFamily):
        _require_solvable(family)
        self.family = family
        self.edges = [e.mask for e in family.minimal_edges]
        self.m = len(self.edges)
        self.full = (1 << self.m) - 1
        lattice = candidate_lattice(family)
        self.lattice_masks = [s.mask for s in lattice]
        self.columns = self._pruned_columns()
        self.sizes = [mask.bit_count() for mask, _ in self.columns]
        # branch order: edges with the fewest candidate subsets first
        per_edge = [
            [i for i, (_, cov) in enumerate(self.columns) if cov >> j & 1]
            for j in range(self.m)
        ]
        self.edge_order = sorted(range(self.m), key=lambda j: (len(per_edge[j]), j))
        # within an edge, larger candidates first: cheaper for every p < 1
        self.per_edge_cols = [
            sorted(per_edge[j], key=lambda i: (-self.sizes[i], i)) for j in self.edge_order
        ]

    def _pruned_columns(self) -> list[tuple[int, int]]:
        """Solver columns as (subset mask, edge-coverage mask).

        A candidate is dropped when another candidate covers at least the
        same edges with at least the same size (so at most the same weight
        for every p <= 1); the surviving dual certificate remains feasible
        for the full lattice.  The empty set is always kept.
        """
        cov_of: dict[int, int] = {}
        for s in self.lattice_masks:
            cov = 0
            for j, t in enumerate(self.edges):
                if s & ~t == 0:
                    cov |= 1 << j
            cov_of[s] = cov
        # one representative per coverage pattern: the largest, earliest set
        reps: dict[int, int] = {}
        for s in self.lattice_masks:
            cov = cov_of[s]
            cur = reps.get(cov)
            if cur is None or s.bit_count() > cur.bit_count():
                reps[cov] = s
        chosen = []
        items = sorted(reps.items(), key=lambda cv: (cv[1].bit_count(), cv[1]))
        for cov, s in items:
            dominated = any(
                (cov2 | cov) == cov2 and s2.bit_count() >= s.bit_count()
                for cov2, s2 in items
                if (cov2, s2) != (cov, s)
            )
            if not dominated and s != 0:
                chosen.append((s, cov))
        chosen.append((0, self.full))
        chosen.sort(key=lambda sc: (sc[0].bit_count(), _mask_to_indices(sc[0])))
        return chosen

    def costs(self, p):
        return [p ** size for size in self.sizes]

    def lp(self, p):
        """Fractional optimum at p; returns (cost, g by column, y by edge)."""
        exact = isinstance(p, Fraction) and len(self.columns) <= EXACT_SIMPLEX_MAX_COLUMNS
        pval = p if exact else float(p)
        coverage = [cov for _, cov in self.columns]
        obj, y, g = _simplex_covering_dual(coverage, self.costs(pval), self.m, exact)
        return obj, g, y

    def integer_min(self, p):
        """Exact minimum cover cost at p; returns (cost, chosen column ids).

        Depth-first branch and bound over uncovered edges with memoized
        completions; candidate order within an edge is cost-increasing, so
        the scan stops as soon as a candidate alone meets the incumbent.
        """
        costs = self.costs(p)
        memo: dict[int, tuple] = {}

        def complete(uncovered: int):
            if uncovered == 0:
                return costs[0] * 0, ()
            hit = memo.get(uncovered)
            if hit is not None:
                return hit
            pos = next(
                idx
                for idx, j in enumerate(self.edge_order)
                if uncovered >> j & 1
            )
            best_cost, best_sel = None, None
            for col in self.per_edge_cols[pos]:
                c = costs[col]
                if best_cost is not None and c >= best_cost:
                    break
                sub_cost, sub_sel = complete(uncovered & ~self.columns[col][1])
                total = c + sub_cost
                if best_cost is None or total < best_cost:
                    best_cost, best_sel = total, (col,) + sub_sel
            memo[uncovered] = (best_cost, best_sel)
            return memo[uncovered]

        return complete(self.full)

    def column_subset(self, col: int) -> Subset:
        return Subset(self.family.ground, self.columns[col][0])


def lp_min_cover_cost(family: IncreasingFamily, p: float) -> tuple[float, CoverSolution]:
    """Minimum fractional cover weight at p, with the dual certificate."""
    ctx = _CoverContext(family)
    pf = p if isinstance(p, Fraction) else Fraction(float(p))
    obj, g, y = ctx.lp(pf)
    support = tuple(
        (ctx.column_subset(i), float(w)) for i, w in enumerate(g) if w != 0
    )
    dual = tuple(
        (family.minimal_edges[j], float(y[j])) for j in range(ctx.m)
    )
    solution = CoverSolution(support, float(obj), float(p), FRACTIONAL, dual)
    return float(obj), solution


def min_cover_cost_integer(
    family: IncreasingFamily, p: float
) -> tuple[float, CoverSolution]:
    """Minimum binary cover weight at p (exact branch and bound)."""
    ctx = _CoverContext(family)
    pf = p if isinstance(p, Fraction) else Fraction(float(p))
    cost, chosen = ctx.integer_min(pf)
    support = tuple((ctx.column_subset(i), 1.0) for i in sorted(set(chosen)))
    solution = CoverSolution(support, float(cost), float(p), INTEGER)
    return float(cost), solution


def min_cover_cost_exhaustive(
    family: IncreasingFamily, p: float
) -> tuple[float, CoverSolution]:
    """Brute-force integer optimum over the full lattice (<= 12 candidates)."""
    _require_solvable(family)
    lattice = candidate_lattice(family)
    if len(lattice) > EXHAUSTIVE_MAX_CANDIDATES:
        raise CapacityError(
            f"{len(lattice)} candidates exceeds the exhaustive guard "
            f"{EXHAUSTIVE_MAX_CANDIDATES}"
        )
    pf = Fraction(float(p))
    edges = [e.mask for e in family.minimal_edges]
    best_cost, best_sel = None, None
    for pick in range(1, 1 << len(lattice)):
        chosen = [lattice[i] for i in _mask_to_indices(pick)]
        if not all(any(s.mask & ~t == 0 for s in chosen) for t in edges):
            continue
        cost = sum(pf ** len(s) for s in chosen)
        if best_cost is None or cost < best_cost:
            best_cost, best_sel = cost, chosen
    support = tuple((s, 1.0) for s in best_sel)
    return float(best_cost), CoverSolution(support, float(best_cost), float(p), INTEGER)


def check_cover_certificate(
    family: IncreasingFamily, cover: CoverSolution, tol: float = CERT_TOL
) -> dict:
    """Verify a CoverSolution against its invariants.

    Integer mode: every minimal edge contains a support set and the cost is
    the recomputed weight.  Fractional mode additionally checks the dual:
    nonnegativity, feasibility against every lattice candidate, and
    objective agreement with the primal cost.
    """
    p = cover.p
    checks = {}
    if cover.mode == INTEGER:
        covered = all(
            any(s.mask & ~t.mask == 0 for s, _ in cover.support)
            for t in family.minimal_edges
        )
        checks["primal_feasible"] = covered
    else:
        checks["primal_feasible"] = all(
            sum(w for s, w in cover.support if s.mask & ~t.mask == 0) >= 1.0 - tol
            for t in family.minimal_edges
        )
    recomputed = sum(w * p ** len(s) for s, w in cover.support)
    checks["cost_consistent"] = abs(recomputed - cover.cost) <= tol
    if cover.dual is not None:
        y = {t.mask: w for t, w in cover.dual}
        checks["dual_nonnegative"] = all(w >= -tol for w in y.values())
        checks["dual_feasible"] = all(
            sum(y.get(t.mask, 0.0) for t in family.minimal_edges if s.mask & ~t.mask == 0)
            <= p ** len(s) + tol
            for s in candidate_lattice(family)
        )
        checks["objective_agreement"] = abs(sum(y.values()) - cover.cost) <= tol
    checks["ok"] = all(checks.values())
    return checks


def _bisect_cover(decision, tol: float, method: str) -> ThresholdResult:
    # decision(p) = "cost at p is <= 1/2", monotone nonincreasing in p
    lo, hi = 0.0, 1.0
    while hi - lo > 2.0 * tol:
        mid = 0.5 * (lo + hi)
        if decision(Fraction(mid)):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), tol, INTERIOR, method)


def solve_q(family: IncreasingFamily, tol: float = DEFAULT_COVER_TOL) -> ThresholdResult:
    """Largest p at which F is p-small (integer covers), by bisection.

    Every nonconstant cost term p^{|S|} increases with p, so the minimum
    cost is nondecreasing and the decision is monotone.  The fractional
    optimum screens the integer solve: when even the LP exceeds 1/2 the
    integer cost must as well.
    """
    ctx = _CoverContext(family)
    half = Fraction(1, 2)

    def decision(p: Fraction) -> bool:
        lp_cost, _, _ = ctx.lp(p)
        if lp_cost > half:
            return False
        cost, _ = ctx.integer_min(p)
        return cost <= half

    return _bisect_cover(decision, tol, "bisect-ilp-cover")


def solve_qf(family: IncreasingFamily, tol: float = DEFAULT_COVER_TOL) -> ThresholdResult:
    """Largest p at which F is weakly p-small (fractional covers)."""
    ctx = _CoverContext(family)
    half = Fraction(1, 2)

    def decision(p: Fraction) -> bool:
        cost, _, _ = ctx.lp(p)
        return cost <= half

    return _bisect_cover(decision, tol, "bisect-lp-cover")
