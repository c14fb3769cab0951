"""Domain types, utility-function variants, and structural checkers.

Prize distributions have finite support, so every expectation in the package
is an exact finite sum.  Utilities are symmetric set-functions of the prize
values discovered so far; scalar building blocks (SPR base/bonus tables and
concave-sum tables) are piecewise linear, which extends them continuously
between table nodes.

The checkers certify a property on a finite grid only.  A "holds" verdict
records the grid it was checked on; a failing verdict carries a witness with
the two sides of the violated inequality.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import DomainError, StateError, TableMissError, ValidationError

PROBABILITY_TOL = 1e-12
CHECK_TOL = 1e-9


# ---------------------------------------------------------------------------
# scalar piecewise-linear functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinear:
    """A scalar function given by (x, y) nodes, linear between nodes.

    Queries beyond the last node continue the final segment's slope; queries
    below the first node are a domain error.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 1:
            raise ValidationError("piecewise-linear table needs at least one node")
        xs = [float(x) for x, _ in self.points]
        ys = [float(y) for _, y in self.points]
        for a, b in zip(xs, xs[1:]):
            if not b > a:
                raise ValidationError(f"table nodes must be strictly ascending, got {a} then {b}")
        object.__setattr__(self, "points", tuple(zip(xs, ys)))

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.points)

    @property
    def ys(self) -> tuple[float, ...]:
        return tuple(y for _, y in self.points)

    @property
    def last_x(self) -> float:
        return self.points[-1][0]

    def __call__(self, x: float) -> float:
        pts = self.points
        if x < pts[0][0]:
            raise DomainError(f"query {x} below table start {pts[0][0]}")
        if len(pts) == 1:
            return pts[0][1]
        i = bisect_right(self.xs, x) - 1
        if i >= len(pts) - 1:
            i = len(pts) - 2
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def slopes(self) -> tuple[float, ...]:
        return tuple(
            (y1 - y0) / (x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])
        )

    def is_nondecreasing(self, tol: float = 0.0) -> bool:
        return all(s >= -tol for s in self.slopes()) if len(self.points) > 1 else True


def identity_table(upper: float = 1.0) -> PiecewiseLinear:
    return PiecewiseLinear(((0.0, 0.0), (float(upper), float(upper))))


def zero_table() -> PiecewiseLinear:
    return PiecewiseLinear(((0.0, 0.0), (1.0, 0.0)))


# ---------------------------------------------------------------------------
# distributions, boxes, instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteDistribution:
    """A finite-support prize distribution: atoms of (value, probability)."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        atoms = tuple((float(v), float(p)) for v, p in self.atoms)
        if not atoms:
            raise ValidationError("distribution needs at least one atom")
        atoms = tuple(sorted(atoms))
        values = [v for v, _ in atoms]
        for v, p in atoms:
            if v < 0.0:
                raise ValidationError(f"prize value {v} is negative")
            if not 0.0 < p <= 1.0:
                raise ValidationError(f"atom probability {p} not in (0, 1]")
        if len(set(values)) != len(values):
            raise ValidationError("support values must be pairwise distinct")
        total = 0.0
        for _, p in atoms:
            total += p
        if abs(total - 1.0) > PROBABILITY_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def max_value(self) -> float:
        return self.atoms[-1][0]

    def mean(self) -> float:
        total = 0.0
        for v, p in self.atoms:
            total += p * v
        return total

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return any(abs(value - v) <= tol for v, _ in self.atoms)


@dataclass(frozen=True)
class Box:
    """An option with an opening cost and a prize distribution."""

    id: int
    cost: float
    dist: FiniteDistribution

    def __post_init__(self) -> None:
        if self.id < 1:
            raise ValidationError(f"box id {self.id} must be a positive integer")
        if self.cost < 0.0:
            raise ValidationError(f"box {self.id}: cost {self.cost} is negative")


# ---------------------------------------------------------------------------
# utility variants
# ---------------------------------------------------------------------------


class Utility:
    """Base class for symmetric utilities over discovered prize values.

    Evaluation sorts arguments descending before dispatch, so every variant
    is order-insensitive by construction.
    """

    kind: str = "abstract"

    def _value(self, ordered: tuple[float, ...]) -> float:
        raise NotImplementedError

    def spr_form(self) -> tuple[Callable[[float], float], Callable[[float], float]] | None:
        """Return scalar (base, bonus) callables if this utility decomposes
        as base(max) + sum of bonus(others), else None."""
        return None


@dataclass(frozen=True)
class MaxUtility(Utility):
    """Reward is the single greatest prize found."""

    kind = "max"

    def _value(self, ordered: tuple[float, ...]) -> float:
        return ordered[0] if ordered else 0.0

    def spr_form(self):
        return (lambda x: x), (lambda x: 0.0)


@dataclass(frozen=True)
class SprUtility(Utility):
    """base(max prize) plus bonus(x) for every other prize found.

    base, bonus and base - bonus must be nonnegative and nondecreasing with
    base(0) = bonus(0) = 0.
    """

    base: PiecewiseLinear
    bonus: PiecewiseLinear
    kind = "spr"

    def __post_init__(self) -> None:
        for name, fn in (("base", self.base), ("bonus", self.bonus)):
            if fn.points[0] != (0.0, 0.0):
                raise ValidationError(f"{name} table must start at node (0, 0)")
            if not fn.is_nondecreasing():
                raise ValidationError(f"{name} table must be nondecreasing")
        # base - bonus nondecreasing and nonnegative: check on merged nodes
        # plus the tail slopes, which pins the piecewise-linear difference.
        xs = sorted(set(self.base.xs) | set(self.bonus.xs))
        last = max(self.base.last_x, self.bonus.last_x)
        probes = xs + [last + 1.0]
        diffs = [self._diff(x) for x in probes]
        for d in diffs:
            if d < -PROBABILITY_TOL:
                raise ValidationError("base - bonus must be nonnegative")
        for a, b in zip(diffs, diffs[1:]):
            if b < a - PROBABILITY_TOL:
                raise ValidationError("base - bonus must be nondecreasing")

    def _diff(self, x: float) -> float:
        return self.base(x) - self.bonus(x)

    def _value(self, ordered: tuple[float, ...]) -> float:
        if not ordered:
            return 0.0
        total = self.base(ordered[0])
        for x in ordered[1:]:
            total += self.bonus(x)
        return total

    def spr_form(self):
        return self.base, self.bonus


@dataclass(frozen=True)
class OrderWeightedUtility(Utility):
    """Sum of w_k times the k-th greatest prize, w nonincreasing.

    Arguments beyond the weight list reuse the final weight, so a list
    (w1, w2) means weights (w1, w2, w2, ...).
    """

    weights: tuple[float, ...]
    kind = "order_weighted"

    def __post_init__(self) -> None:
        ws = tuple(float(w) for w in self.weights)
        if not ws:
            raise ValidationError("weight list must be nonempty")
        if any(w < 0.0 for w in ws):
            raise ValidationError("weights must be nonnegative")
        for a, b in zip(ws, ws[1:]):
            if b > a:
                raise ValidationError(f"weights must be nonincreasing, got {a} then {b}")
        object.__setattr__(self, "weights", ws)

    def weight(self, rank: int) -> float:
        """Weight of the rank-th greatest prize, 1-based."""
        ws = self.weights
        return ws[rank - 1] if rank <= len(ws) else ws[-1]

    def _value(self, ordered: tuple[float, ...]) -> float:
        total = 0.0
        for rank, x in enumerate(ordered, start=1):
            total += self.weight(rank) * x
        return total

    def spr_form(self):
        ws = self.weights
        if len(ws) >= 3 and any(w != ws[1] for w in ws[2:]):
            return None
        w1 = ws[0]
        w2 = ws[1] if len(ws) > 1 else ws[0]
        return (lambda x: w1 * x), (lambda x: w2 * x)


@dataclass(frozen=True)
class ConcaveSumUtility(Utility):
    """A concave nondecreasing transform of the total prize value.

    The transform is a table on the sums attainable in the target instance;
    sums between nodes interpolate linearly, sums past the last node are a
    domain error rather than a silent extrapolation.
    """

    table: PiecewiseLinear
    kind = "concave_sum"

    def __post_init__(self) -> None:
        pts = self.table.points
        if pts[0] != (0.0, 0.0):
            raise ValidationError("concave-sum table must start at node (0, 0)")
        if not self.table.is_nondecreasing():
            raise ValidationError("concave-sum table must be nondecreasing")
        slopes = self.table.slopes()
        for a, b in zip(slopes, slopes[1:]):
            if b > a + PROBABILITY_TOL:
                raise ValidationError("concave-sum table must be concave")

    def _value(self, ordered: tuple[float, ...]) -> float:
        total = 0.0
        for x in ordered:
            total += x
        if total > self.table.last_x + PROBABILITY_TOL:
            raise DomainError(
                f"sum {total} exceeds concave-sum table range {self.table.last_x}"
            )
        return self.table(min(total, self.table.last_x))

    def spr_form(self):
        slopes = self.table.slopes()
        if any(s != slopes[0] for s in slopes[1:]):
            return None
        s = slopes[0]
        return (lambda x: s * x), (lambda x: s * x)


@dataclass(frozen=True)
class ExplicitTableUtility(Utility):
    """A utility given pointwise on a small set of argument multisets.

    Exists to feed the checkers' negative tests; it may deliberately break
    every structural property except symmetry (keys canonicalize to sorted
    descending tuples) and the empty vector mapping to 0.
    """

    entries: tuple[tuple[tuple[float, ...], float], ...]
    kind = "explicit"

    def __post_init__(self) -> None:
        canon: dict[tuple[float, ...], float] = {}
        for key, value in self.entries:
            ck = tuple(sorted((float(x) for x in key), reverse=True))
            if ck in canon and canon[ck] != float(value):
                raise ValidationError(f"conflicting table entries for multiset {ck}")
            canon[ck] = float(value)
        if canon.get((), 0.0) != 0.0:
            raise ValidationError("the empty vector must map to 0")
        object.__setattr__(self, "entries", tuple(sorted(canon.items())))
        object.__setattr__(self, "_map", canon)

    def _value(self, ordered: tuple[float, ...]) -> float:
        if not ordered:
            return 0.0
        try:
            return self._map[ordered]  # type: ignore[attr-defined]
        except KeyError:
            raise TableMissError(f"no table entry for argument vector {ordered}") from None


def evaluate_utility(utility: Utility, values: Iterable[float]) -> float:
    """Evaluate a utility on a vector of prize values (any order)."""
    vec = tuple(float(v) for v in values)
    for v in vec:
        if v < 0.0:
            raise DomainError(f"prize value {v} is negative")
    return utility._value(tuple(sorted(vec, reverse=True)))


# ---------------------------------------------------------------------------
# instances and search states
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A fixed set of boxes together with the utility over found prizes."""

    boxes: tuple[Box, ...]
    utility: Utility

    def __post_init__(self) -> None:
        if not self.boxes:
            raise ValidationError("instance needs at least one box")
        boxes = tuple(sorted(self.boxes, key=lambda b: b.id))
        ids = [b.id for b in boxes]
        if ids != list(range(1, len(boxes) + 1)):
            raise ValidationError(f"box ids must be contiguous from 1, got {ids}")
        object.__setattr__(self, "boxes", boxes)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(b.id for b in self.boxes)

    def box(self, box_id: int) -> Box:
        if not 1 <= box_id <= len(self.boxes):
            raise ValidationError(f"no box with id {box_id}")
        return self.boxes[box_id - 1]

    def max_support_value(self) -> float:
        return max(b.dist.max_value for b in self.boxes)


@dataclass(frozen=True)
class SearchState:
    """The set of opened boxes of an instance and the prizes they revealed."""

    instance: Instance
    observed: tuple[tuple[int, float], ...]
    sunk_cost: float = field(default=0.0)

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(i), float(v)) for i, v in self.observed))
        ids = [i for i, _ in pairs]
        if len(set(ids)) != len(ids):
            raise ValidationError("a box appears twice in the observations")
        cost = 0.0
        for i, v in pairs:
            box = self.instance.box(i)
            if not box.dist.contains(v):
                raise ValidationError(f"value {v} is not in box {i}'s support")
            cost += box.cost
        object.__setattr__(self, "observed", pairs)
        object.__setattr__(self, "sunk_cost", cost)

    @classmethod
    def initial(cls, instance: Instance) -> "SearchState":
        return cls(instance, ())

    @property
    def opened(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.observed)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.observed)

    def unopened(self) -> tuple[int, ...]:
        opened = self.opened
        return tuple(i for i in self.instance.ids if i not in opened)

    def open_box(self, box_id: int, value: float) -> "SearchState":
        if box_id in self.opened:
            raise StateError(f"box {box_id} is already open")
        return SearchState(self.instance, self.observed + ((box_id, value),))

    def history_key(self) -> tuple[tuple[int, float], ...]:
        """Canonical key: observations sorted by id, opening order erased."""
        return self.observed


def enumerate_histories(instance: Instance, max_opened: int) -> list[SearchState]:
    """All realization profiles over all opened subsets of size <= max_opened."""
    states: list[SearchState] = []
    ids = instance.ids
    for size in range(0, min(max_opened, len(ids)) + 1):
        for subset in itertools.combinations(ids, size):
            value_choices = [instance.box(i).dist.values for i in subset]
            for profile in itertools.product(*value_choices):
                states.append(SearchState(instance, tuple(zip(subset, profile))))
    return states


# ---------------------------------------------------------------------------
# level functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelTable:
    """Increments of u on repeated equal arguments: row l holds
    u(x repeated l) - u(x repeated l-1) for each grid value x."""

    grid: tuple[float, ...]
    rows: tuple[tuple[float, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.rows)

    def value(self, level: int, x: float) -> float:
        return self.rows[level - 1][self.grid.index(x)]


def level_functions(utility: Utility, grid: Sequence[float], depth: int) -> LevelTable:
    """Tabulate the level increments of a utility on a value grid."""
    if depth < 1:
        raise DomainError("depth must be at least 1")
    gs = tuple(sorted(set(float(g) for g in grid)))
    if any(g < 0.0 for g in gs):
        raise DomainError("grid values must be nonnegative")
    rows = []
    for level in range(1, depth + 1):
        row = tuple(
            evaluate_utility(utility, (x,) * level) - evaluate_utility(utility, (x,) * (level - 1))
            for x in gs
        )
        rows.append(row)
    return LevelTable(gs, tuple(rows))


def spr_bonus(utility: Utility, x: float) -> float:
    """The two-copy increment u(x, x) - u(x); equals the SPR bonus when the
    utility has SPR form."""
    if x < 0.0:
        raise DomainError(f"prize value {x} is negative")
    return evaluate_utility(utility, (x, x)) - evaluate_utility(utility, (x,))


# ---------------------------------------------------------------------------
# assumption checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """Argument vectors demonstrating a violation, with the two sides of the
    inequality that failed."""

    vectors: tuple[tuple[float, ...], ...]
    lhs: float
    rhs: float
    note: str = ""


@dataclass(frozen=True)
class AssumptionReport:
    label: str
    holds: bool
    witness: Witness | None
    grid: tuple[float, ...]
    max_arity: int
    note: str = ""

    def __post_init__(self) -> None:
        if self.holds and self.witness is not None:
            raise ValidationError("a passing report cannot carry a witness")
        if not self.holds and self.witness is None:
            raise ValidationError("a failing report must carry a witness")


def _grid_tuples(grid: tuple[float, ...], max_arity: int):
    for arity in range(0, max_arity + 1):
        yield from itertools.combinations_with_replacement(grid, arity)


def _safe_eval(utility: Utility, vec: tuple[float, ...]) -> float | None:
    """Evaluate, returning None when a table does not cover the probe
    (explicit-table miss or a sum past a concave table's last node), so the
    checkers certify exactly the evaluable part of the grid."""
    try:
        return evaluate_utility(utility, vec)
    except (TableMissError, DomainError):
        return None


def check_monotone_submodular(
    utility: Utility,
    grid: Sequence[float],
    max_arity: int = 3,
    tol: float = CHECK_TOL,
) -> AssumptionReport:
    """Exhaustively test nonnegativity, the null-append identity, permutation
    invariance, componentwise monotonicity, and pairwise submodularity on all
    grid tuples up to max_arity.  Stops at the first violation, in that
    sub-check order.
    """
    gs = tuple(sorted(set(float(g) for g in grid)))
    label = "monotone-submodular"

    def report(witness: Witness | None) -> AssumptionReport:
        return AssumptionReport(label, witness is None, witness, gs, max_arity)

    combos = list(_grid_tuples(gs, max_arity))

    for t in combos:
        v = _safe_eval(utility, t)
        if v is not None and v < -tol:
            return report(Witness((t,), v, 0.0, "nonnegativity"))

    for t in combos:
        base = _safe_eval(utility, t)
        appended = _safe_eval(utility, t + (0.0,))
        if base is None or appended is None:
            continue
        if abs(appended - base) > tol:
            return report(Witness((t + (0.0,), t), appended, base, "null-append identity"))

    for t in combos:
        if len(t) < 2:
            continue
        base = _safe_eval(utility, t)
        if base is None:
            continue
        for perm in (tuple(reversed(t)), t[1:] + t[:1]):
            other = _safe_eval(utility, perm)
            if other is not None and other != base:
                return report(Witness((t, perm), base, other, "permutation invariance"))

    for t in combos:
        if not t:
            continue
        base = _safe_eval(utility, t)
        if base is None:
            continue
        for pos, x in enumerate(t):
            for higher in gs:
                if higher <= x:
                    continue
                raised = t[:pos] + (higher,) + t[pos + 1 :]
                v = _safe_eval(utility, raised)
                if v is not None and v < base - tol:
                    return report(Witness((raised, t), v, base, "componentwise monotonicity"))

    pairs = [(lo, hi) for lo in gs for hi in gs if hi > lo]
    for ctx in _grid_tuples(gs, max(0, max_arity - 2)):
        for a_lo, a_hi in pairs:
            for b_lo, b_hi in pairs:
                hh = _safe_eval(utility, ctx + (a_hi, b_hi))
                ll = _safe_eval(utility, ctx + (a_lo, b_lo))
                hl = _safe_eval(utility, ctx + (a_hi, b_lo))
                lh = _safe_eval(utility, ctx + (a_lo, b_hi))
                if None in (hh, ll, hl, lh):
                    continue
                lhs = hh + ll
                rhs = hl + lh
                if lhs > rhs + tol:
                    return report(
                        Witness(
                            (ctx + (a_hi, b_hi), ctx + (a_lo, b_lo), ctx + (a_hi, b_lo), ctx + (a_lo, b_hi)),
                            lhs,
                            rhs,
                            "pairwise submodularity",
                        )
                    )

    return report(None)


def check_increment_independence(
    utility: Utility,
    grid: Sequence[float],
    max_arity: int = 3,
    tol: float = CHECK_TOL,
) -> AssumptionReport:
    """Test that the gain from raising a component from 0 to x_i does not
    depend on a larger component's exact value: for x_i <= x_lo < x_hi,
    u(ctx, x_hi, x_i) - u(ctx, x_hi, 0) must equal the same with x_lo.
    """
    gs = tuple(sorted(set(float(g) for g in grid)))
    label = "increment-independence"

    for ctx in _grid_tuples(gs, max(0, max_arity - 2)):
        for x_lo in gs:
            for x_hi in gs:
                if x_hi <= x_lo:
                    continue
                for x_i in gs:
                    if x_i > x_lo:
                        continue
                    hi_with = _safe_eval(utility, ctx + (x_hi, x_i))
                    hi_zero = _safe_eval(utility, ctx + (x_hi, 0.0))
                    lo_with = _safe_eval(utility, ctx + (x_lo, x_i))
                    lo_zero = _safe_eval(utility, ctx + (x_lo, 0.0))
                    if None in (hi_with, hi_zero, lo_with, lo_zero):
                        continue
                    lhs = hi_with - hi_zero
                    rhs = lo_with - lo_zero
                    if abs(lhs - rhs) > tol:
                        witness = Witness(
                            (ctx + (x_hi, x_i), ctx + (x_hi, 0.0), ctx + (x_lo, x_i), ctx + (x_lo, 0.0)),
                            lhs,
                            rhs,
                            f"increment of {x_i} differs under companion {x_hi} vs {x_lo}",
                        )
                        return AssumptionReport(label, False, witness, gs, max_arity)

    return AssumptionReport(label, True, None, gs, max_arity)


def check_spr(
    utility: Utility,
    grid: Sequence[float],
    max_arity: int = 3,
    tol: float = CHECK_TOL,
) -> AssumptionReport:
    """Test the SPR decomposition on the grid.

    With f(x) := u(x,x) - u(x), every grid tuple must satisfy
    u(t) = u(max t) + sum of f over the rest, and u, f, u - f must be
    nonnegative and nondecreasing with u(0) = f(0) = 0.
    """
    gs = tuple(sorted(set(float(g) for g in grid)))
    label = "spr"

    def report(witness: Witness | None) -> AssumptionReport:
        return AssumptionReport(label, witness is None, witness, gs, max_arity)

    u_of: dict[float, float] = {}
    f_of: dict[float, float] = {}
    for x in gs:
        ux = _safe_eval(utility, (x,))
        uxx = _safe_eval(utility, (x, x))
        if ux is None or uxx is None:
            continue
        u_of[x] = ux
        f_of[x] = uxx - ux

    u0 = _safe_eval(utility, (0.0,))
    u00 = _safe_eval(utility, (0.0, 0.0))
    if u0 is not None and abs(u0) > tol:
        return report(Witness(((0.0,),), u0, 0.0, "u(0) must be 0"))
    if u0 is not None and u00 is not None and abs(u00 - u0) > tol:
        return report(Witness(((0.0, 0.0), (0.0,)), u00 - u0, 0.0, "f(0) must be 0"))

    scale = [x for x in gs if x in u_of]
    for name, table in (("u", u_of), ("f", f_of)):
        for x in scale:
            if table[x] < -tol:
                return report(Witness(((x,),), table[x], 0.0, f"{name} nonnegative"))
        for a, b in zip(scale, scale[1:]):
            if table[b] < table[a] - tol:
                return report(Witness(((b,), (a,)), table[b], table[a], f"{name} nondecreasing"))
    for a, b in zip(scale, scale[1:]):
        da, db = u_of[a] - f_of[a], u_of[b] - f_of[b]
        if db < da - tol:
            return report(Witness(((b,), (a,)), db, da, "u - f nondecreasing"))
    for x in scale:
        if u_of[x] - f_of[x] < -tol:
            return report(Witness(((x,),), u_of[x] - f_of[x], 0.0, "u - f nonnegative"))

    for t in _grid_tuples(gs, max_arity):
        if len(t) < 2:
            continue
        actual = _safe_eval(utility, t)
        if actual is None:
            continue
        ordered = tuple(sorted(t, reverse=True))
        if ordered[0] not in u_of or any(x not in f_of for x in ordered[1:]):
            continue
        decomposed = u_of[ordered[0]]
        for x in ordered[1:]:
            decomposed += f_of[x]
        if abs(actual - decomposed) > tol:
            return report(
                Witness((t,), actual, decomposed, "decomposition base(max) + sum of bonuses")
            )

    return report(None)


def _reservation_sign(a, b, tol: float) -> int:
    """Compare two reservation values, treating a gap within tol as a tie."""
    fa, fb = a.as_float(), b.as_float()
    if fa == fb:
        return 0
    if fa == float("inf"):
        return 1
    if fb == float("inf"):
        return -1
    if abs(fa - fb) <= tol:
        return 0
    return 1 if fa > fb else -1


def check_ord(
    instance: Instance,
    histories: Sequence[SearchState],
    tolerance: float = CHECK_TOL,
    cache: dict | None = None,
) -> AssumptionReport:
    """Test history-independence of the ordering of reservation values.

    A violation is a strict reversal: a pair of unopened boxes strictly
    ordered one way at the empty history and strictly the other way at some
    supplied history.  Ties (within tolerance) are compatible with either
    order; in particular, boxes tied at an infinite reservation value may
    split into any strict order later without failing the check, so a
    passing verdict certifies the ordering only where values are finite.
    Infinite reservation values compare above all finite ones.
    """
    from .reservation import generalized_reservation

    if cache is None:
        cache = {}
    grid = tuple(sorted({v for b in instance.boxes for v in b.dist.values}))
    empty = SearchState.initial(instance)
    base = {
        i: generalized_reservation(empty, i, cache=cache) for i in instance.ids
    }

    for state in histories:
        unopened = state.unopened()
        for k, j in itertools.combinations(unopened, 2):
            rk = generalized_reservation(state, k, cache=cache)
            rj = generalized_reservation(state, j, cache=cache)
            s_now = _reservation_sign(rk, rj, tolerance)
            s_base = _reservation_sign(base[k], base[j], tolerance)
            if s_now * s_base == -1:
                witness = Witness(
                    (tuple(v for _, v in state.observed),),
                    rk.as_float(),
                    rj.as_float(),
                    (
                        f"boxes ({k}, {j}) order as ({base[k].as_float()}, {base[j].as_float()}) "
                        f"at the empty history but flip at history {state.observed}"
                    ),
                )
                return AssumptionReport("ord", False, witness, grid, len(instance.boxes))

    note = ""
    if sum(1 for r in base.values() if r.is_infinite) >= 2:
        note = "several boxes tie at an infinite reservation value; their relative order is not certified"
    return AssumptionReport("ord", True, None, grid, len(instance.boxes), note)
