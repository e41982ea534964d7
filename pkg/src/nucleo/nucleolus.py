"""Exact nucleolus of weighted majority games via sequential linear programs.

The scheme is the classical one: minimize the largest excess over all
coalitions, fix the constraints that are tight at every optimum, and recurse
on the shrunken face until a single point remains.  Two engines share one
implementation:

* the brute engine works on explicit coalitions (one LP variable per player),
* the typed engine works on weight-type profiles (one variable per distinct
  weight), restricting to weight-symmetric payoff vectors.  Equal-weight
  players are interchangeable, the nucleolus treats interchangeable players
  equally, and profile multiplicities do not depend on the payoff vector, so
  the restriction is lossless.

Constraints are generated lazily.  The separation oracle is the min-cost
covering knapsack from the coalition engine; coalitions whose excess is
constant on the affine hull fixed so far (in particular the empty and grand
coalitions, and everything frozen) are recognized by an exact kernel test
and never surface.  A constraint is frozen when it is tight at every
optimum of the stage LP, decided exactly: a strictly positive dual value
proves it by complementary slackness, and the remaining active candidates
get one auxiliary LP each over the optimal face.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coalitions import (
    EnumerationLimit,
    OracleStall,
    ProfileCoalition,
    min_cost_selection,
    min_winning_weight,
)
from .exactlp import ExactLinearProgram, solve
from .games import GameError, Representation, representation
from .linalg import EchelonSystem

DEFAULT_MAX_BRUTE_PLAYERS = 20


class NoImputation(GameError):
    """The game admits no imputation (two or more players can win alone)."""


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class Level:
    """One fixed excess level: its value and the coalitions frozen there."""

    epsilon: Fraction
    coalitions: tuple


@dataclass(frozen=True)
class NucleolusResult:
    x_star: tuple[Fraction, ...]  # input player order
    levels: tuple[Level, ...]
    engine: str
    stages: int

    def __post_init__(self):
        for a, b in zip(self.levels, self.levels[1:]):
            if not a.epsilon > b.epsilon:
                raise SolverError("level values must strictly decrease")

    def to_json_dict(self) -> dict:
        levels = []
        for lev in self.levels:
            coals = []
            for c in lev.coalitions:
                if isinstance(c, ProfileCoalition):
                    coals.append({
                        "profile": [
                            {"weight": str(w), "count": int(j)}
                            for w, j in zip(c.type_weights, c.counts)
                            if j > 0
                        ]
                    })
                else:
                    coals.append({"members": sorted(i + 1 for i in c)})
            levels.append({"epsilon": str(lev.epsilon), "coalitions": coals})
        return {
            "x_star": [str(v) for v in self.x_star],
            "levels": levels,
            "engine": self.engine,
            "stages": self.stages,
        }


@dataclass(frozen=True)
class NucleusBox:
    """Componentwise range of payoffs over the imputations that minimize the
    largest excess."""

    lower: tuple[Fraction, ...]  # input player order
    upper: tuple[Fraction, ...]

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def to_json_dict(self) -> dict:
        return {
            "lower": [str(v) for v in self.lower],
            "upper": [str(v) for v in self.upper],
        }


def _movable(vec: Sequence[int], kernel: list[list[int]]) -> bool:
    """A coalition vector has non-constant excess on the fixed affine hull
    iff it is not orthogonal to the hull's kernel."""
    for kv in kernel:
        s = 0
        for j, d in zip(vec, kv):
            if j and d:
                s += j * d
        if s:
            return True
    return False


# ---------------------------------------------------------------------------
# the solving space: players grouped into classes with one payoff variable each
# ---------------------------------------------------------------------------


class _ItemSpace:
    """LP variables are per-class payoffs; pool vectors are class-count tuples."""

    def __init__(self, rep: Representation, granularity: str):
        # rep must have integer weights, all strictly positive
        self.rep = rep
        if granularity == "player":
            classes = [(int(w), 1) for w in rep.weights]  # sorted order
        else:
            table = rep.weight_types()
            classes = [(int(w), c) for w, c in table.entries]
        self.granularity = granularity
        self.weights = tuple(w for w, _ in classes)
        self.counts = tuple(c for _, c in classes)
        self.dim = len(classes)
        self.total_weight = sum(w * c for w, c in zip(self.weights, self.counts))
        self.win_cut = min_winning_weight(rep)
        self.lower_bounds = tuple(
            Fraction(1) if w >= rep.quota else Fraction(0) for w in self.weights
        )
        self.full = tuple(self.counts)
        self.zero = tuple(0 for _ in classes)

    def value(self, vec: Sequence[int]) -> int:
        w = sum(j * wk for j, wk in zip(vec, self.weights))
        return 1 if w >= self.win_cut else 0

    def excess_at(self, vec: Sequence[int], y: Sequence[Fraction]) -> Fraction:
        paid = sum((Fraction(j) * yk for j, yk in zip(vec, y) if j), Fraction(0))
        return Fraction(self.value(vec)) - paid

    def seeds(self) -> list[tuple[int, ...]]:
        out = [self.zero, self.full]
        for k in range(self.dim):
            block = [0] * self.dim
            block[k] = self.counts[k]
            out.append(tuple(block))
        return out

    def singletons(self) -> list[tuple[int, ...]]:
        out = []
        for k in range(self.dim):
            single = [0] * self.dim
            single[k] = 1
            out.append(tuple(single))
        return out

    # -- separation oracle ---------------------------------------------------

    def best_excess(self, y: Sequence[Fraction], kernel: list[list[int]],
                    exclude: frozenset = frozenset()):
        """Maximum-excess movable pool vector outside ``exclude``, or None.

        Ties prefer a winning coalition, then the lexicographically smallest
        count vector (inherited from the knapsack's enumeration order).
        """
        denom = 1
        for v in y:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
        costs = tuple(int(v * denom) for v in y)

        def acceptable(vec: tuple[int, ...]) -> bool:
            return vec not in exclude and _movable(vec, kernel)

        try:
            win = min_cost_selection(self.weights, self.counts, costs,
                                     self.win_cut, self.total_weight,
                                     accept=acceptable, max_pops=400)
            lose = None
            if self.win_cut >= 1:
                lose = min_cost_selection(self.weights, self.counts, costs,
                                          0, self.win_cut - 1,
                                          accept=acceptable, max_pops=400)
        except OracleStall:
            return self._scan_best(costs, denom, kernel, exclude)

        best = None  # (excess numerator, winning flag, vec)
        if win is not None:
            best = (denom - win[0], True, win[1])
        if lose is not None and (best is None or -lose[0] > best[0]):
            best = (-lose[0], False, lose[1])
        if best is None:
            return None
        return tuple(best[2]), Fraction(best[0], denom)

    def _scan_best(self, costs, denom, kernel, exclude):
        if self.granularity == "player":
            return self._scan_best_masks(costs, denom, kernel, exclude)
        best = None
        ranges = [range(c + 1) for c in self.counts]
        for vec in itertools.product(*ranges):
            if vec in exclude or not _movable(vec, kernel):
                continue
            w = sum(j * wk for j, wk in zip(vec, self.weights))
            cost = sum(j * ck for j, ck in zip(vec, costs))
            num = (denom if w >= self.win_cut else 0) - cost
            key = (num, w >= self.win_cut)
            if best is None or key > best[0]:
                best = (key, vec)
        if best is None:
            return None
        return tuple(best[1]), Fraction(best[0][0], denom)

    def _scan_best_masks(self, costs, denom, kernel, exclude):
        """Vectorized full scan over explicit coalitions (player granularity).

        Ties go to the smallest bitmask, a different but equally
        deterministic rule than the knapsack path; callers only rely on the
        excess value being the exact maximum.
        """
        import numpy as np

        dim = self.dim
        wsum = np.zeros(1, dtype=np.int64)
        csum = np.zeros(1, dtype=object)
        for k in range(dim):
            wsum = np.concatenate([wsum, wsum + self.weights[k]])
            csum = np.concatenate([csum, csum + costs[k]])
        win = wsum >= self.win_cut
        num = np.where(win, denom, 0).astype(object) - csum

        fixed = np.ones(1 << dim, dtype=bool)
        for kv in kernel:
            ksum = np.zeros(1, dtype=object)
            for k in range(dim):
                ksum = np.concatenate([ksum, ksum + kv[k]])
            fixed &= ksum == 0
        eligible = ~fixed
        for vec in exclude:
            mask = 0
            for k, j in enumerate(vec):
                if j:
                    mask |= 1 << k
            eligible[mask] = False

        idx = np.nonzero(eligible)[0]
        if idx.size == 0:
            return None
        vals = num[idx]
        pos = int(np.argmax(vals))
        mask = int(idx[pos])
        vec = tuple((mask >> k) & 1 for k in range(dim))
        return vec, Fraction(int(vals[pos]), denom)

    # -- expansion back to players -------------------------------------------

    def payoff_per_sorted_player(self, y: Sequence[Fraction]) -> list[Fraction]:
        if self.granularity == "player":
            return list(y)
        out = []
        table = self.rep.weight_types()
        for (w, count), yk in zip(table.entries, y):
            out.extend([yk] * count)
        return out

    def describe(self, vec: tuple[int, ...], to_full_input) -> object:
        if self.granularity == "player":
            return frozenset(
                to_full_input(self.rep.input_order[k])
                for k, j in enumerate(vec) if j
            )
        return ProfileCoalition.of(self.rep, vec)


# ---------------------------------------------------------------------------
# sequential scheme
# ---------------------------------------------------------------------------


def _solve_master(space: _ItemSpace, system: EchelonSystem, working: list):
    """min eps over the fixed affine hull and the working excess rows;
    returns (y, eps, dual value per working row)."""
    dim = space.dim
    lp = ExactLinearProgram(
        num_vars=dim + 1,
        objective=tuple([Fraction(0)] * dim + [Fraction(1)]),
        sense="min",
        lower_bounds=tuple(list(space.lower_bounds) + [None]),
    )
    for row in system.rows:
        lp.add_constraint(list(row[:dim]) + [Fraction(0)], "=", row[dim])
    for vec in working:
        lp.add_constraint([Fraction(j) for j in vec] + [Fraction(1)],
                          ">=", Fraction(space.value(vec)))
    sol = solve(lp)
    if sol.status == "infeasible":
        raise NoImputation("the game admits no imputation")
    if sol.status != "optimal":
        raise SolverError(f"master LP returned {sol.status}")
    work_duals = sol.duals[len(system.rows):]
    return sol.values[:dim], sol.values[dim], work_duals


def _optimize_over_face(space: _ItemSpace, system: EchelonSystem, working: list,
                        eps: Fraction, objective: Sequence[Fraction], sense: str,
                        kernel, stop_at: Fraction | None = None) -> Fraction:
    """Exact optimum of a payoff functional over the current optimal face.

    Cap constraints are generated lazily; if ``stop_at`` is given and some
    relaxation already attains it, the true optimum equals ``stop_at`` and
    the loop exits early (the relaxed optimizer itself is then discarded).
    Newly discovered rows are appended to ``working``.
    """
    while True:
        dim = space.dim
        lp = ExactLinearProgram(
            num_vars=dim,
            objective=tuple(objective),
            sense=sense,
            lower_bounds=space.lower_bounds,
        )
        for row in system.rows:
            lp.add_constraint(list(row[:dim]), "=", row[dim])
        for vec in working:
            lp.add_constraint([Fraction(j) for j in vec], ">=",
                              Fraction(space.value(vec)) - eps)
        sol = solve(lp)
        if sol.status != "optimal":
            raise SolverError(f"face LP returned {sol.status}")
        if stop_at is not None and sol.objective_value == stop_at:
            return stop_at
        viol = space.best_excess(sol.values, kernel)
        if viol is None or viol[1] <= eps:
            return sol.objective_value
        working.append(viol[0])


def _always_tight(space: _ItemSpace, system: EchelonSystem, working: list,
                  eps: Fraction, vec: tuple[int, ...], kernel) -> bool:
    """Whether e(vec, .) = eps on the entire optimal face of this stage."""
    objective = [Fraction(j) for j in vec]
    floor = Fraction(space.value(vec)) - eps
    best_paid = _optimize_over_face(space, system, working, eps,
                                    objective, "max", kernel, stop_at=floor)
    if best_paid < floor:  # the face contains a witness paying exactly floor
        raise SolverError("face optimization below known witness")
    return best_paid == floor


def _sequential_nucleolus(space: _ItemSpace, to_full_input):
    """Returns (payoff per class, levels, stage count)."""
    dim = space.dim
    lb_total = sum(
        (lb * c for lb, c in zip(space.lower_bounds, space.counts)), Fraction(0)
    )
    if lb_total > 1:
        raise NoImputation("individual rationality demands more than the total payoff")

    system = EchelonSystem(dim)
    system.add_row([Fraction(c) for c in space.counts], Fraction(1))  # efficiency

    working: list[tuple[int, ...]] = list(dict.fromkeys(space.seeds()))
    levels: list[tuple[Fraction, list]] = []
    stages = 0

    while system.rank < dim:
        stages += 1
        if stages > dim + 2:
            raise SolverError("stage count exceeded the dimension bound")
        kernel = system.kernel_basis_int()

        working = [v for v in working if _movable(v, kernel)]
        for single in space.singletons():
            if single not in working and _movable(single, kernel):
                working.append(single)

        # stage level: grow the working set until the oracle confirms optimality
        while True:
            y, eps, work_duals = _solve_master(space, system, working)
            viol = space.best_excess(y, kernel)
            if viol is None or viol[1] <= eps:
                break
            working.append(viol[0])

        # constraints tight at every optimum of this stage: a positive dual
        # value proves it (complementary slackness); zero-dual actives get an
        # auxiliary LP over the optimal face, one each
        frozen: list[tuple[int, ...]] = []
        tested: set[tuple[int, ...]] = set()
        for vec, dual in zip(working, work_duals):
            if dual > 0:
                frozen.append(vec)
                tested.add(vec)
        while True:
            for vec in list(working):
                if vec in tested:
                    continue
                if space.excess_at(vec, y) != eps:
                    continue
                tested.add(vec)
                if _always_tight(space, system, working, eps, vec, kernel):
                    frozen.append(vec)
            if frozen:
                break
            extra = space.best_excess(y, kernel, exclude=frozenset(working))
            if extra is None or extra[1] != eps:
                raise SolverError("no always-tight constraint found at this stage")
            working.append(extra[0])

        for vec in frozen:
            system.add_row([Fraction(j) for j in vec],
                           Fraction(space.value(vec)) - eps)
            working.remove(vec)
        if levels and levels[-1][0] == eps:
            levels[-1][1].extend(frozen)
        else:
            if levels and not eps < levels[-1][0]:
                raise SolverError("levels failed to decrease")
            levels.append((eps, list(frozen)))

    y = system.solve_unique()
    for yk, lb in zip(y, space.lower_bounds):
        if yk < lb:
            raise SolverError("solution violates individual rationality")
    level_objs = tuple(
        Level(epsilon=eps,
              coalitions=tuple(space.describe(v, to_full_input) for v in vecs))
        for eps, vecs in levels
    )
    return y, level_objs, stages


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def _strip_zero_weights(rep: Representation):
    """Positive-weight subgame plus the map from its input order to the full one."""
    orig = rep.original_weights
    keep = [i for i, w in enumerate(orig) if w > 0]
    if len(keep) == rep.n:
        return rep, list(range(rep.n))
    sub = representation(rep.quota, [orig[i] for i in keep])
    return sub, keep


def _pick_engine(rep: Representation, engine: str, max_brute: int) -> str:
    if engine not in ("auto", "brute", "typed"):
        raise GameError(f"unknown engine {engine!r}")
    if engine == "auto":
        t = rep.weight_types().t
        return "typed" if (rep.n > max_brute or t <= 6) else "brute"
    return engine


def _prepare_space(rep: Representation, engine: str, max_brute_players: int):
    sub, keep = _strip_zero_weights(rep)
    chosen = _pick_engine(sub, engine, max_brute_players)
    if chosen == "brute" and sub.n > max_brute_players:
        raise EnumerationLimit(
            f"brute engine limited to {max_brute_players} players, game has {sub.n}"
        )
    work_rep = sub if sub.has_integer_weights() else sub.to_integer()
    space = _ItemSpace(work_rep, "player" if chosen == "brute" else "type")
    return space, work_rep, keep, chosen


def _expand_to_full(space: _ItemSpace, work_rep: Representation, keep: list[int],
                    per_class: Sequence[Fraction], n_full: int) -> list[Fraction]:
    per_sorted = space.payoff_per_sorted_player(per_class)
    per_sub_input = work_rep.to_input_order(per_sorted)
    full = [Fraction(0)] * n_full
    for sub_i, full_i in enumerate(keep):
        full[full_i] = per_sub_input[sub_i]
    return full


def nucleolus(rep: Representation, engine: str = "auto",
              max_brute_players: int = DEFAULT_MAX_BRUTE_PLAYERS) -> NucleolusResult:
    """The exact nucleolus over imputations, in input player order.

    ``engine="brute"`` works on explicit coalitions (player count capped),
    ``engine="typed"`` on weight-type profiles; ``auto`` picks typed for
    games with many players or few distinct weights.  Zero-weight players
    receive payoff 0 and are removed before the engines run.
    """
    space, work_rep, keep, chosen = _prepare_space(rep, engine, max_brute_players)

    def to_full_input(sub_input_index: int) -> int:
        return keep[sub_input_index]

    y, levels, stages = _sequential_nucleolus(space, to_full_input)
    x_full = _expand_to_full(space, work_rep, keep, y, rep.n)
    return NucleolusResult(
        x_star=tuple(x_full),
        levels=levels,
        engine=chosen,
        stages=stages,
    )


def nucleus_box(rep: Representation, engine: str = "auto",
                max_brute_players: int = DEFAULT_MAX_BRUTE_PLAYERS) -> NucleusBox:
    """Componentwise min and max payoffs over the set of imputations that
    minimize the largest excess (the first level only).

    The largest excess includes the constant-0 excess of the empty and
    grand coalitions, so the minimum is never below 0.
    """
    space, work_rep, keep, _ = _prepare_space(rep, engine, max_brute_players)
    dim = space.dim
    lb_total = sum(
        (lb * c for lb, c in zip(space.lower_bounds, space.counts)), Fraction(0)
    )
    if lb_total > 1:
        raise NoImputation("individual rationality demands more than the total payoff")

    system = EchelonSystem(dim)
    system.add_row([Fraction(c) for c in space.counts], Fraction(1))
    kernel = system.kernel_basis_int()

    working = [v for v in dict.fromkeys(space.seeds()) if _movable(v, kernel)]
    if system.rank < dim:
        while True:
            y, eps, _ = _solve_master(space, system, working)
            viol = space.best_excess(y, kernel)
            if viol is None or viol[1] <= eps:
                break
            working.append(viol[0])
        eps_face = eps if eps > 0 else Fraction(0)

    lower = [Fraction(0)] * dim
    upper = [Fraction(0)] * dim
    for k in range(dim):
        if system.rank == dim:
            point = system.solve_unique()
            lower[k] = upper[k] = point[k]
            continue
        obj = [Fraction(0)] * dim
        obj[k] = Fraction(1)
        lower[k] = _optimize_over_face(space, system, working, eps_face,
                                       obj, "min", kernel)
        upper[k] = _optimize_over_face(space, system, working, eps_face,
                                       obj, "max", kernel)

    lo_full = _expand_to_full(space, work_rep, keep, lower, rep.n)
    hi_full = _expand_to_full(space, work_rep, keep, upper, rep.n)
    return NucleusBox(lower=tuple(lo_full), upper=tuple(hi_full))
