"""Shared fixtures and seeded random-instance generators for the test suite."""

from __future__ import annotations

import math
import random
from pathlib import Path

import pytest

from pandorabox import (
    Box,
    ConcaveSumUtility,
    FiniteDistribution,
    Instance,
    MaxUtility,
    OrderWeightedUtility,
    PiecewiseLinear,
    SprUtility,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


def sqrt_sum_table(upper: int) -> PiecewiseLinear:
    return PiecewiseLinear(tuple((float(s), math.sqrt(s)) for s in range(upper + 1)))


def half_bonus_spr(upper: float = 2.0) -> SprUtility:
    """base(x) = x, bonus(x) = x / 2."""
    return SprUtility(
        PiecewiseLinear(((0.0, 0.0), (upper, upper))),
        PiecewiseLinear(((0.0, 0.0), (upper, upper / 2.0))),
    )


def bernoulli_box(box_id: int, cost: float, p: float, prize: float = 1.0) -> Box:
    atoms = ((prize, 1.0),) if p == 1.0 else ((0.0, 1.0 - p), (prize, p))
    return Box(box_id, cost, FiniteDistribution(atoms))


def random_distribution(rng: random.Random, max_atoms: int = 3, value_hi: float = 2.0) -> FiniteDistribution:
    n_atoms = rng.randint(1, max_atoms)
    values: list[float] = []
    while len(values) < n_atoms:
        v = round(rng.uniform(0.0, value_hi), 3)
        if v not in values:
            values.append(v)
    values.sort()
    if n_atoms == 1:
        return FiniteDistribution(((values[0], 1.0),))
    cuts = sorted(round(rng.uniform(0.05, 0.95), 6) for _ in range(n_atoms - 1))
    while len(set(cuts)) != len(cuts):
        cuts = sorted(round(rng.uniform(0.05, 0.95), 6) for _ in range(n_atoms - 1))
    probs, prev = [], 0.0
    for c in cuts:
        probs.append(c - prev)
        prev = c
    probs.append(1.0 - prev)
    return FiniteDistribution(tuple(zip(values, probs)))


def random_spr_utility(rng: random.Random, value_hi: float = 2.0) -> SprUtility:
    """Random monotone piecewise-linear base with a bonus grown by increments
    no larger than the base's, so bonus <= base and base - bonus is monotone.
    Breakpoints stay at least 0.25 apart to keep slopes moderate."""
    xs = [0.0]
    for _ in range(rng.randint(1, 3)):
        x = round(rng.uniform(0.3, value_hi), 2)
        if all(abs(x - y) >= 0.25 for y in xs):
            xs.append(x)
    xs.sort()
    if xs[-1] < value_hi + 0.5:
        xs.append(value_hi + 0.5)
    base_pts, bonus_pts = [(0.0, 0.0)], [(0.0, 0.0)]
    base_acc = bonus_acc = 0.0
    for b in xs[1:]:
        d_base = round(rng.uniform(0.0, 1.0), 4)
        d_bonus = round(rng.uniform(0.0, d_base), 4)
        base_acc += d_base
        bonus_acc += d_bonus
        base_pts.append((b, base_acc))
        bonus_pts.append((b, bonus_acc))
    return SprUtility(PiecewiseLinear(tuple(base_pts)), PiecewiseLinear(tuple(bonus_pts)))


def random_boxes(rng: random.Random, n: int, max_atoms: int = 3, cost_hi: float = 2.0) -> tuple[Box, ...]:
    return tuple(
        Box(i, round(rng.uniform(0.0, cost_hi), 3), random_distribution(rng, max_atoms))
        for i in range(1, n + 1)
    )


def random_spr_instance(rng: random.Random, max_boxes: int = 4) -> Instance:
    return Instance(random_boxes(rng, rng.randint(2, max_boxes)), random_spr_utility(rng))


def random_max_instance(rng: random.Random, max_boxes: int = 4) -> Instance:
    return Instance(random_boxes(rng, rng.randint(2, max_boxes)), MaxUtility())


def concave_power_table(boxes: tuple[Box, ...], alpha: float) -> PiecewiseLinear:
    """A concave power table with nodes dense enough to cover every sum a
    reservation query can reach on these boxes."""
    reach = sum(b.dist.max_value for b in boxes) + max(b.dist.max_value for b in boxes)
    step = max(reach / 40.0, 1e-6)
    nodes = [step * k for k in range(int(reach / step) + 2)]
    return PiecewiseLinear(tuple((s, s**alpha) for s in nodes))


def random_submodular_instance(rng: random.Random, max_boxes: int = 3) -> Instance:
    """A random instance whose utility is monotone and submodular by
    construction: max, SPR form, nonincreasing rank weights, or a concave
    transform of the sum."""
    boxes = random_boxes(rng, rng.randint(2, max_boxes), max_atoms=2, cost_hi=1.5)
    style = rng.random()
    if style < 0.25:
        return Instance(boxes, MaxUtility())
    if style < 0.5:
        return Instance(boxes, random_spr_utility(rng))
    if style < 0.75:
        tail = sorted((round(rng.uniform(0.0, 1.0), 2) for _ in range(2)), reverse=True)
        return Instance(boxes, OrderWeightedUtility((1.0, *tail)))
    alpha = rng.uniform(0.3, 0.95)
    return Instance(boxes, ConcaveSumUtility(concave_power_table(boxes, alpha)))
