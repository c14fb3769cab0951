"""Exact execution of the greatest-reservation-value rule, a brute-force
dynamic-programming oracle for the optimal policy, and Monte Carlo rollout.

Both evaluators recurse over the finite outcome tree, so every expectation
is an exact sum.  The oracle memoizes on the canonical history (observations
sorted by box id); utilities are symmetric, so histories differing only in
opening order share a value.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .core import Instance, SearchState, evaluate_utility
from .errors import DomainError, ResourceLimitError, ValidationError
from .reservation import ReservationValue, generalized_reservation

DEFAULT_NODE_CAP = 10_000_000
DEFAULT_LOG_LIMIT = 1_000
TIE_TOL = 1e-9
ORACLE_MAX_BOXES = 10


@dataclass(frozen=True)
class Action:
    """Stop, or open a specific unopened box."""

    kind: str
    box_id: int | None = None

    @classmethod
    def stop(cls) -> "Action":
        return cls("stop", None)

    @classmethod
    def open(cls, box_id: int) -> "Action":
        return cls("open", box_id)

    def __str__(self) -> str:
        return "stop" if self.kind == "stop" else f"open {self.box_id}"


@dataclass(frozen=True)
class TieBreak:
    """Preference order among boxes whose reservation values tie."""

    priority: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "priority", tuple(int(i) for i in self.priority))

    def validate_for(self, instance: Instance) -> None:
        if sorted(self.priority) != list(instance.ids):
            raise ValidationError(
                f"tie-break {self.priority} is not a permutation of box ids {instance.ids}"
            )

    def pick(self, candidates) -> int:
        rank = {box_id: pos for pos, box_id in enumerate(self.priority)}
        return min(candidates, key=lambda i: rank[i])


def default_tie_break(instance: Instance) -> TieBreak:
    return TieBreak(instance.ids)


@dataclass
class PolicyEvaluation:
    expected_payoff: float
    tree_nodes: int
    action_log: dict[tuple[tuple[int, float], ...], Action] = field(default_factory=dict)


def stop_payoff(state: SearchState) -> float:
    """Utility of everything found so far, net of the costs sunk opening it."""
    return evaluate_utility(state.instance.utility, state.values) - state.sunk_cost


def pandora_next_action(
    state: SearchState,
    tie_break: TieBreak | None = None,
    cache: dict | None = None,
    tie_tol: float = TIE_TOL,
) -> Action:
    """Open the unopened box of greatest reservation value; stop when no
    reservation value exceeds zero (indifference stops)."""
    tb = tie_break if tie_break is not None else default_tie_break(state.instance)
    tb.validate_for(state.instance)
    unopened = state.unopened()
    if not unopened:
        return Action.stop()

    values: dict[int, ReservationValue] = {
        i: generalized_reservation(state, i, cache=cache) for i in unopened
    }
    openable = [i for i in unopened if not values[i].is_zero]
    if not openable:
        return Action.stop()

    best = max(values[i].as_float() for i in openable)
    if best == float("inf"):
        tied = [i for i in openable if values[i].is_infinite]
    else:
        tied = [i for i in openable if best - values[i].as_float() <= tie_tol]
    return Action.open(tb.pick(tied))


def pandora_expected_value(
    instance: Instance,
    tie_break: TieBreak | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
    cache: dict | None = None,
    log_limit: int = DEFAULT_LOG_LIMIT,
) -> PolicyEvaluation:
    """Exact expected payoff of the rule: depth-first recursion over the
    outcome tree, branching on each opened box's atoms."""
    tb = tie_break if tie_break is not None else default_tie_break(instance)
    tb.validate_for(instance)
    if cache is None:
        cache = {}
    log: dict = {}
    nodes = 0

    def visit(state: SearchState) -> float:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError(f"outcome tree exceeded {node_cap} nodes")
        action = pandora_next_action(state, tb, cache=cache)
        if len(log) < log_limit:
            log.setdefault(state.history_key(), action)
        if action.kind == "stop":
            return stop_payoff(state)
        box = instance.box(action.box_id)
        total = 0.0
        for v, p in box.dist.atoms:
            total += p * visit(state.open_box(box.id, v))
        return total

    value = visit(SearchState.initial(instance))
    return PolicyEvaluation(value, nodes, log)


def optimal_expected_value(
    instance: Instance,
    node_cap: int = DEFAULT_NODE_CAP,
    log_limit: int = DEFAULT_LOG_LIMIT,
) -> PolicyEvaluation:
    """Exact optimum by Bellman recursion over canonical histories:
    the value of a history is the better of stopping now and opening any
    unopened box (paying its cost, then continuing optimally)."""
    if len(instance.boxes) > ORACLE_MAX_BOXES:
        raise DomainError(
            f"oracle supports at most {ORACLE_MAX_BOXES} boxes, got {len(instance.boxes)}"
        )
    memo: dict = {}
    log: dict = {}
    nodes = 0

    def value_of(state: SearchState) -> float:
        nonlocal nodes
        key = state.history_key()
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError(f"state space exceeded {node_cap} nodes")
        best = evaluate_utility(instance.utility, state.values)
        best_action = Action.stop()
        for i in state.unopened():
            box = instance.box(i)
            expect = -box.cost
            for v, p in box.dist.atoms:
                expect += p * value_of(state.open_box(i, v))
            if expect > best:
                best = expect
                best_action = Action.open(i)
        memo[key] = best
        if len(log) < log_limit:
            log[key] = best_action
        return best

    total = value_of(SearchState.initial(instance))
    return PolicyEvaluation(total, nodes, log)


def reference_optimal_value(instance: Instance, node_cap: int = DEFAULT_NODE_CAP) -> float:
    """Memo-free reference recursion; exponential, for cross-checking the
    memoized oracle on tiny instances."""
    nodes = 0

    def value_of(state: SearchState) -> float:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError(f"outcome tree exceeded {node_cap} nodes")
        best = evaluate_utility(instance.utility, state.values)
        for i in state.unopened():
            box = instance.box(i)
            expect = -box.cost
            for v, p in box.dist.atoms:
                expect += p * value_of(state.open_box(i, v))
            best = max(best, expect)
        return best

    return value_of(SearchState.initial(instance))


def policy_gap(
    instance: Instance,
    tie_break: TieBreak | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
    cache: dict | None = None,
) -> float:
    """Optimal expected payoff minus the rule's expected payoff.  Zero (up to
    float noise) certifies the rule on this instance and tie-break; a value
    beyond 1e-9 refutes it."""
    optimal = optimal_expected_value(instance, node_cap=node_cap)
    rule = pandora_expected_value(instance, tie_break, node_cap=node_cap, cache=cache)
    return optimal.expected_payoff - rule.expected_payoff


def policy_gaps_over_tiebreaks(
    instance: Instance,
    node_cap: int = DEFAULT_NODE_CAP,
    cache: dict | None = None,
) -> list[tuple[TieBreak, float]]:
    """The gap for every tie-break permutation, sharing one reservation
    cache and one oracle run."""
    if cache is None:
        cache = {}
    optimal = optimal_expected_value(instance, node_cap=node_cap)
    out = []
    for perm in itertools.permutations(instance.ids):
        tb = TieBreak(perm)
        rule = pandora_expected_value(instance, tb, node_cap=node_cap, cache=cache)
        out.append((tb, optimal.expected_payoff - rule.expected_payoff))
    return out


def simulate(
    instance: Instance,
    tie_break: TieBreak | None = None,
    seed: int = 0,
    runs: int = 1,
    cache: dict | None = None,
) -> tuple[float, float]:
    """Monte Carlo rollouts of the rule with a seeded generator.

    Returns the sample mean payoff and its standard error; reproducible for
    a fixed seed, and exactly (mean, 0.0) when every rollout pays the same.
    """
    if runs < 1:
        raise DomainError("runs must be at least 1")
    tb = tie_break if tie_break is not None else default_tie_break(instance)
    tb.validate_for(instance)
    if cache is None:
        cache = {}
    rng = random.Random(seed)

    payoffs = []
    for _ in range(runs):
        state = SearchState.initial(instance)
        while True:
            action = pandora_next_action(state, tb, cache=cache)
            if action.kind == "stop":
                break
            box = instance.box(action.box_id)
            draw = rng.random()
            acc = 0.0
            value = box.dist.atoms[-1][0]
            for v, p in box.dist.atoms:
                acc += p
                if draw < acc:
                    value = v
                    break
            state = state.open_box(box.id, value)
        payoffs.append(stop_payoff(state))

    mean = sum(payoffs) / runs
    if runs == 1 or all(x == payoffs[0] for x in payoffs):
        return mean, 0.0
    variance = sum((x - mean) ** 2 for x in payoffs) / (runs - 1)
    return mean, (variance / runs) ** 0.5
