"""Bisection solvers for the threshold p_c and the k-color rainbow threshold.

Both objectives are strictly increasing in p on (0, 1) for nontrivial
families (the colored case by the per-element exchange argument tested in
the measures suite), so bisection against the level 1/2 is valid.  The
colored measure need not reach 1/2 even at p = 1, hence the attainment
trichotomy: interior root, boundary (the value at p = 1 is 1/2 up to 1e-12),
or not attained (supremum below 1/2, reported with value 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .families import IncreasingFamily, ell
from .measures import ColoredMeasure, MeasureParams, mu_exact

DEFAULT_TOL = 1e-9
MAX_BISECT_ITER = 60
BOUNDARY_TOL = 1e-12

INTERIOR = "interior"
BOUNDARY = "boundary"
NOT_ATTAINED = "not-attained"


@dataclass(frozen=True)
class ThresholdResult:
    """A solved threshold value with its bracket and attainment status."""

    value: float
    bracket: tuple[float, float]
    tol: float
    attained: str
    method: str

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.value <= hi:
            raise ValueError("threshold value must lie inside its bracket")


def bisect_increasing(objective, target: float, tol: float, method: str) -> ThresholdResult:
    """Root of objective(p) = target for increasing objective on (0, 1).

    The endpoints are never evaluated; the bracket invariant is
    objective(lo) < target <= objective(hi) with lo, hi in [0, 1].
    """
    lo, hi = 0.0, 1.0
    for _ in range(MAX_BISECT_ITER):
        if hi - lo <= 2.0 * tol:
            break
        mid = 0.5 * (lo + hi)
        if objective(mid) < target:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), tol, INTERIOR, method)


def solve_pc(family: IncreasingFamily, tol: float = DEFAULT_TOL) -> ThresholdResult:
    """The unique p with mu_p(F) = 1/2, for nonempty nontrivial F."""
    return bisect_increasing(
        lambda p: mu_exact(family, p), 0.5, tol, method="bisect-mu-exact"
    )


def solve_pc_k(
    family: IncreasingFamily, k: int, tol: float = DEFAULT_TOL
) -> ThresholdResult:
    """The p with mu_p^k(F^rb) = 1/2, with explicit attainment semantics.

    Requires k >= ell(F) so that rainbow copies of every minimal edge exist.
    When even the boundary value mu_1^k(F^rb) stays below 1/2 the level is
    never reached; the supremum value 1 is returned flagged as not attained
    rather than extrapolated.
    """
    if k < ell(family):
        raise PreconditionError(
            f"rainbow threshold needs k >= ell(F) = {ell(family)}; got k = {k}"
        )
    evaluator = ColoredMeasure(family, k)
    n = family.ground.n
    at_one = evaluator.value(MeasureParams.uniform(n, 1.0, k))
    if abs(at_one - 0.5) <= BOUNDARY_TOL:
        return ThresholdResult(1.0, (1.0, 1.0), tol, BOUNDARY, "boundary-mu-colored")
    if at_one < 0.5:
        return ThresholdResult(
            1.0, (1.0, 1.0), tol, NOT_ATTAINED, "sup-mu-colored"
        )
    return bisect_increasing(
        lambda p: evaluator.value(MeasureParams.uniform(n, p, k)),
        0.5,
        tol,
        method="bisect-mu-colored",
    )
