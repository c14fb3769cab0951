"""Reservation values: the smallest already-held prize at which stopping
weakly beats opening a given box and then stopping.

The classic solver treats the single-box problem with reward max(prizes);
it is exact because the expected exceedance is piecewise linear in the
threshold.  The generalized solver works for any utility: the stop-vs-open
gap is nonincreasing in the probe prize for submodular monotone utilities,
so the least satisfying probe is found by bisection between 0 and the
largest prize the instance can produce.  Probes past that bound cannot be
realized by any holding, so a gap still positive there is reported as an
infinite reservation value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Box,
    ExplicitTableUtility,
    PiecewiseLinear,
    SearchState,
    evaluate_utility,
)
from .errors import DomainError, StateError

BISECTION_TOL = 1e-12
GRID_SCAN_RESOLUTION = 1e-6


@dataclass(frozen=True)
class ReservationValue:
    """An extended nonnegative real: zero, a positive finite value, or
    infinite (no holding ever justifies stopping over opening)."""

    kind: str
    value: float

    ZERO_KIND = "zero"
    FINITE_KIND = "finite"
    INFINITE_KIND = "infinite"

    @classmethod
    def zero(cls) -> "ReservationValue":
        return cls(cls.ZERO_KIND, 0.0)

    @classmethod
    def finite(cls, y: float) -> "ReservationValue":
        if y <= 0.0:
            raise DomainError(f"finite reservation value must be positive, got {y}")
        return cls(cls.FINITE_KIND, float(y))

    @classmethod
    def infinite(cls) -> "ReservationValue":
        return cls(cls.INFINITE_KIND, float("inf"))

    @property
    def is_zero(self) -> bool:
        return self.kind == self.ZERO_KIND

    @property
    def is_finite(self) -> bool:
        return self.kind == self.FINITE_KIND

    @property
    def is_infinite(self) -> bool:
        return self.kind == self.INFINITE_KIND

    def as_float(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.is_infinite:
            return "inf"
        return repr(self.value)


def weitzman_reservation(box: Box) -> ReservationValue:
    """Exact single-box reservation value for the max-prize reward.

    Solves cost >= E max(0, prize - y) for the least nonnegative y.  The
    right side is piecewise linear and nonincreasing with breakpoints at the
    support values, so the answer comes from one linear equation on the
    crossing segment; no iteration, no tolerance.
    """
    atoms = box.dist.atoms
    expected_excess_at_zero = 0.0
    for v, p in atoms:
        expected_excess_at_zero += p * v
    if box.cost >= expected_excess_at_zero:
        return ReservationValue.zero()

    # Walk segments between consecutive breakpoints 0 = b_0 < v_1 < ... < v_m.
    breakpoints = [0.0] + [v for v, _ in atoms if v > 0.0]
    h = expected_excess_at_zero  # E max(0, x - y) at y = breakpoints[0]
    for lo, hi in zip(breakpoints, breakpoints[1:]):
        tail = sum(p for v, p in atoms if v > lo)  # -slope on (lo, hi]
        h_hi = h - (hi - lo) * tail
        if h_hi <= box.cost:
            y = lo + (h - box.cost) / tail
            return ReservationValue.finite(y) if y > 0.0 else ReservationValue.zero()
        h = h_hi
    # The running h hits 0 at the top of the support up to rounding; a cost
    # of 0 can leave it a few ulps above, in which case the top is the root.
    return ReservationValue.finite(breakpoints[-1])


def _stop_open_gap(state: SearchState, box: Box, probe: float) -> float:
    """E u(found, probe, prize) - cost - u(found, probe): positive means the
    probe prize is not yet enough to stop.

    Accumulated as a sum of per-atom differences so that atoms the probe
    dominates contribute exactly zero; summing the expectation first would
    leave probability-rounding jitter on the gap's flat tail and strand the
    bisection there.
    """
    held = state.values
    utility = state.instance.utility
    stay = evaluate_utility(utility, held + (probe,))
    gap = -box.cost
    for v, p in box.dist.atoms:
        gap += p * (evaluate_utility(utility, held + (probe, v)) - stay)
    return gap


def probe_upper_bound(state: SearchState) -> float:
    """Largest prize the instance can produce or has produced."""
    bound = state.instance.max_support_value()
    for v in state.values:
        bound = max(bound, v)
    return bound


def generalized_reservation(
    state: SearchState,
    box_id: int,
    tol: float = BISECTION_TOL,
    cache: dict | None = None,
) -> ReservationValue:
    value, _ = generalized_reservation_with_method(state, box_id, tol=tol, cache=cache)
    return value


def generalized_reservation_with_method(
    state: SearchState,
    box_id: int,
    tol: float = BISECTION_TOL,
    cache: dict | None = None,
) -> tuple[ReservationValue, str]:
    """Reservation value of an unopened box at a history, with the solving
    method used ("closed" endpoints, "bisection", or "grid-resolution").

    The cache, when supplied, is keyed by the multiset of observed values
    plus the box id; utilities are symmetric, so histories that differ only
    in which boxes produced the values share a solution.
    """
    if box_id in state.opened:
        raise StateError(f"box {box_id} is already open")
    box = state.instance.box(box_id)

    key = None
    if cache is not None:
        key = (tuple(sorted(state.values)), box_id)
        hit = cache.get(key)
        if hit is not None:
            return hit

    result = _solve_reservation(state, box, tol)
    if cache is not None:
        cache[key] = result
    return result


def _solve_reservation(
    state: SearchState, box: Box, tol: float
) -> tuple[ReservationValue, str]:
    gap_at_zero = _stop_open_gap(state, box, 0.0)
    if gap_at_zero <= 0.0:
        return ReservationValue.zero(), "closed"

    upper = probe_upper_bound(state)
    if upper <= 0.0:
        # Gap positive at 0 with no positive prize anywhere is impossible for
        # a nonnegative cost; guard for explicit tables.
        return ReservationValue.infinite(), "closed"

    gap_at_upper = _stop_open_gap(state, box, upper)
    if gap_at_upper > 0.0:
        return ReservationValue.infinite(), "closed"

    if isinstance(state.instance.utility, ExplicitTableUtility):
        # The gap may be non-monotone for an arbitrary table; scan a fixed
        # grid and report the least satisfying grid point.
        steps = int(upper / GRID_SCAN_RESOLUTION) + 1
        for k in range(steps + 1):
            y = min(k * GRID_SCAN_RESOLUTION, upper)
            if _stop_open_gap(state, box, y) <= 0.0:
                return (
                    ReservationValue.finite(y) if y > 0 else ReservationValue.zero(),
                    "grid-resolution",
                )
        return ReservationValue.infinite(), "grid-resolution"

    lo, hi = 0.0, upper  # gap(lo) > 0 >= gap(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _stop_open_gap(state, box, mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return ReservationValue.finite(0.5 * (lo + hi)), "bisection"


def bernoulli_concave_reservation(
    found: int, box: Box, psi: PiecewiseLinear
) -> ReservationValue:
    """Closed-form reservation value for a success-count instance: boxes pay
    prize 1 with probability p, and the utility is a concave transform psi of
    the number of successes found.

    With w_k = psi(k) - psi(k-1), after `found` successes the value is
    max(0, (w_{found+1} - cost/p) / (w_{found+1} - w_{found+2})), classified
    zero or finite; when the two weights tie the formula degenerates to zero
    or infinity depending on whether cost/p reaches the weight.

    Note the formula linearly extrapolates past the largest attainable prize
    (value 1): a result above 1 can never be triggered by a real holding and
    corresponds to an infinite reservation value from the bisection solver.
    """
    if found < 0:
        raise DomainError("found-prize count must be nonnegative")
    values = box.dist.values
    if any(v not in (0.0, 1.0) for v in values):
        raise DomainError(f"box {box.id} support {values} is not within {{0, 1}}")
    p = 0.0
    for v, prob in box.dist.atoms:
        if v == 1.0:
            p = prob
    if p == 0.0:
        raise DomainError(f"box {box.id} has zero success probability")
    if psi.last_x < found + 2:
        raise DomainError(f"psi table must cover {found + 2}, ends at {psi.last_x}")

    w_next = psi(found + 1) - psi(found)
    w_after = psi(found + 2) - psi(found + 1)
    ratio = box.cost / p
    denominator = w_next - w_after
    if denominator == 0.0:
        if ratio >= w_next:
            return ReservationValue.zero()
        return ReservationValue.infinite()
    y = (w_next - ratio) / denominator
    if y <= 0.0:
        return ReservationValue.zero()
    return ReservationValue.finite(y)
