"""Reduction of SPR instances to undiscounted target-process bandits and the
retirement-value calibration of the per-box index.

Each box becomes a three-step process: entering pays minus the opening cost
and reveals the prize; a second continuation pays the bonus of the prize; a
third pays base minus bonus of the prize and hits the target state, ending
play.  Continuing a set of boxes twice and one of them a third time therefore
collects exactly the SPR payoff of opening that set and keeping its best
prize.  The index of a box is the least retirement value that makes entering
the box no better than retiring at once; it is piecewise linear in the
retirement value, so the calibration is an exact breakpoint scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import Box, Instance, SearchState, Utility
from .errors import DomainError, VerificationError
from .reservation import ReservationValue, generalized_reservation

INDEX_TOL = 1e-9


@dataclass(frozen=True)
class AtomStep:
    """Rewards along one realization of a box's process."""

    value: float
    probability: float
    reveal_reward: float  # second continuation: bonus(value)
    finish_reward: float  # third continuation: base(value) - bonus(value)


@dataclass(frozen=True)
class BoxProcess:
    box_id: int
    entry_reward: float  # first continuation: minus the opening cost
    steps: tuple[AtomStep, ...]


@dataclass(frozen=True)
class TargetBandit:
    processes: tuple[BoxProcess, ...]

    def process(self, box_id: int) -> BoxProcess:
        for proc in self.processes:
            if proc.box_id == box_id:
                return proc
        raise DomainError(f"no process for box {box_id}")


def _require_spr_form(utility: Utility) -> tuple[Callable[[float], float], Callable[[float], float]]:
    form = utility.spr_form()
    if form is None:
        raise DomainError(
            f"utility kind '{utility.kind}' has no base/bonus decomposition"
        )
    return form


def map_to_target_bandit(instance: Instance) -> TargetBandit:
    """Emit the per-box reward schedule for an SPR-decomposable instance."""
    base, bonus = _require_spr_form(instance.utility)
    processes = []
    for box in instance.boxes:
        steps = tuple(
            AtomStep(v, p, bonus(v), base(v) - bonus(v)) for v, p in box.dist.atoms
        )
        processes.append(BoxProcess(box.id, -box.cost, steps))
    return TargetBandit(tuple(processes))


def schedule_reward(
    bandit: TargetBandit, realized: dict[int, float], finisher: int
) -> float:
    """Total reward of continuing every box in `realized` twice and the
    finisher a third time."""
    total = 0.0
    for box_id, value in realized.items():
        proc = bandit.process(box_id)
        total += proc.entry_reward
        step = next(s for s in proc.steps if s.value == value)
        total += step.reveal_reward
        if box_id == finisher:
            total += step.finish_reward
    return total


def gittins_index(box: Box, utility: Utility) -> float:
    """Least retirement value lam with
    lam >= -cost + E bonus(prize) + E max(lam, base(prize) - bonus(prize)).

    The right side minus lam is piecewise linear and nonincreasing in lam
    with breakpoints at base - bonus of the support values, so the least
    solution comes from an exact segment scan.  Returns +inf when the
    expected bonus alone exceeds the cost, in which case no finite
    retirement value satisfies the inequality.
    """
    base, bonus = _require_spr_form(utility)
    atoms = box.dist.atoms
    expected_bonus = 0.0
    for v, p in atoms:
        expected_bonus += p * bonus(v)
    slack = expected_bonus - box.cost  # value of phi past the last breakpoint
    if slack > 0.0:
        return float("inf")

    targets = sorted({base(v) - bonus(v) for v, _ in atoms})

    def phi(lam: float) -> float:
        total = slack
        for v, p in atoms:
            t = base(v) - bonus(v)
            if t > lam:
                total += p * (t - lam)
        return total

    # phi is nonincreasing; find the least lam with phi(lam) <= 0.  Left of
    # the first breakpoint phi has slope -1, so solve there first.
    first = targets[0]
    val_first = phi(first)
    if val_first > 0.0:
        lo = first
        for t in targets[1:]:
            val_t = phi(t)
            if val_t <= 0.0:
                mass_above = sum(p for v, p in atoms if base(v) - bonus(v) > lo)
                return lo + phi(lo) / mass_above
            lo = t
        return targets[-1]  # slack == 0 exactly: phi first reaches 0 here
    return first + val_first  # slope -1 segment: phi(lam) = phi(first) + first - lam


@dataclass(frozen=True)
class IndexConsistency:
    box_id: int
    reservation: ReservationValue
    index: float
    base_minus_bonus_at_reservation: float | None
    gap_at_reservation: float | None
    consistent: bool


def verify_index_consistency(
    box: Box, utility: Utility, tol: float = INDEX_TOL
) -> IndexConsistency:
    """Check that the calibrated index equals base - bonus at the empty-history
    reservation value (finite case), that infinite classifications coincide,
    and that the stop-vs-open gap vanishes at the reservation value.

    Raises VerificationError with both values if the identities fail.
    """
    base, bonus = _require_spr_form(utility)
    instance = Instance((Box(1, box.cost, box.dist),), utility)
    empty = SearchState.initial(instance)
    reservation = generalized_reservation(empty, 1)
    index = gittins_index(box, utility)

    if reservation.is_infinite or index == float("inf"):
        consistent = reservation.is_infinite and index == float("inf")
        result = IndexConsistency(box.id, reservation, index, None, None, consistent)
        if not consistent:
            raise VerificationError(
                f"box {box.id}: reservation {reservation} vs index {index}"
            )
        return result

    if reservation.is_zero:
        # No identity binds at an all-stop box; the index may even be
        # negative while the reservation value clamps at zero.
        return IndexConsistency(box.id, reservation, index, None, None, True)

    y = reservation.as_float()
    level = base(y) - bonus(y)
    expected_bonus = 0.0
    gap = -box.cost
    for v, p in box.dist.atoms:
        expected_bonus += p * bonus(v)
        gap += p * max(level, base(v) - bonus(v))
    gap += expected_bonus - level
    consistent = abs(level - index) <= tol and abs(gap) <= tol
    result = IndexConsistency(box.id, reservation, index, level, gap, consistent)
    if not consistent:
        raise VerificationError(
            f"box {box.id}: index {index} vs base-bonus level {level} "
            f"(stop-open gap at reservation: {gap})"
        )
    return result
