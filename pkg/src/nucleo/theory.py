"""Diagnostics relating voting weight to nucleolus payoffs, plus structural
game classifiers.

Covers: the L1 distance between normalized weights and the nucleolus with
its exact bound 2*wbar_1 / min(qbar, 1-qbar) and the two-sided decomposition
of the gap; the sufficient condition min(qbar, 1-qbar) * m > 2*t*w1^2 for
the nucleolus to equal the normalized weights (m the multiplicity of the
rarest weight, t the number of distinct weights, w1 the largest integer
weight) together with the replication factor that guarantees it; and the
classifiers constant-sum, homogeneous representation, existence of a
homogeneous representation, null players, and interchangeability.

Classifiers run on integer-scaled weights and use reachable-weight bitsets,
so they stay exact and fast even for games with hundreds of players.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .coalitions import (
    EnumerationLimit,
    NonIntegerWeights,
    min_winning_weight,
    minimal_winning_coalitions,
    minimal_winning_count_vectors,
    reachable_weights,
)
from .exactlp import ExactLinearProgram, solve
from .games import GameError, Representation, representation
from .linalg import EchelonSystem

EXPLICIT_LIMIT = 16


class DegenerateQuota(GameError):
    pass


class WeightAbsent(GameError):
    pass


class IdentityViolation(RuntimeError):
    """An exact identity that must hold for a genuine nucleolus failed."""


# ---------------------------------------------------------------------------
# weight-vs-nucleolus gap
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    """Exact L1 gap between normalized weights and the nucleolus, the bound
    2*wbar_1/min(qbar, 1-qbar), and the over/under-paid decomposition."""

    l1_gap: Fraction
    bound: Fraction
    s_plus: frozenset[int]   # players paid more than their relative weight
    s_minus: frozenset[int]  # players paid at most their relative weight
    delta: Fraction          # x*(S-) = (1 - delta) * wbar(S-)

    def to_json_dict(self) -> dict:
        return {
            "l1_gap": str(self.l1_gap),
            "bound": str(self.bound),
            "s_plus": sorted(i + 1 for i in self.s_plus),
            "s_minus": sorted(i + 1 for i in self.s_minus),
            "delta": str(self.delta),
        }


def gap_report(rep: Representation, x_star: Sequence) -> GapReport:
    """Gap diagnostics for a caller-supplied nucleolus vector (input order).

    Asserts the bound and the identity l1 = 2 * delta * wbar(S-); both hold
    for every genuine nucleolus, so a violation signals a bad input vector.
    """
    norm = rep.normalize()
    qb = norm.quota_bar
    if not 0 < qb < 1:
        raise DegenerateQuota(f"normalized quota {qb} must lie strictly between 0 and 1")
    wbar = norm.to_input_order()
    xs = tuple(Fraction(v) for v in x_star)
    if len(xs) != rep.n:
        raise GameError(f"payoff vector has length {len(xs)}, game has {rep.n} players")

    s_plus = frozenset(i for i in range(rep.n) if xs[i] > wbar[i])
    s_minus = frozenset(i for i in range(rep.n) if xs[i] <= wbar[i])
    l1 = sum((abs(xs[i] - wbar[i]) for i in range(rep.n)), Fraction(0))
    bound = 2 * max(wbar) / min(qb, 1 - qb)

    w_minus = sum((wbar[i] for i in s_minus), Fraction(0))
    if w_minus == 0:
        # impossible: weights cannot exceed payoffs everywhere when both sum to 1
        raise IdentityViolation("wbar(S-) = 0 cannot occur")
    if w_minus == 1:
        delta = Fraction(0)
        if l1 != 0:
            raise IdentityViolation("wbar(S-) = 1 forces a zero gap for a nucleolus")
    else:
        x_minus = sum((xs[i] for i in s_minus), Fraction(0))
        delta = 1 - x_minus / w_minus
        if l1 != 2 * delta * w_minus:
            raise IdentityViolation("gap decomposition identity failed")
    if l1 > bound:
        raise IdentityViolation("gap exceeds the weight-distance bound")
    return GapReport(l1_gap=l1, bound=bound, s_plus=s_plus, s_minus=s_minus, delta=delta)


def distance_bound(rep: Representation) -> Fraction:
    """2 * wbar_1 / min(qbar, 1 - qbar), computable without solving."""
    norm = rep.normalize()
    qb = norm.quota_bar
    if not 0 < qb < 1:
        raise DegenerateQuota(f"normalized quota {qb} must lie strictly between 0 and 1")
    return 2 * norm.weights_bar[0] / min(qb, 1 - qb)


# ---------------------------------------------------------------------------
# weight-power coincidence condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoincidenceReport:
    """min(qbar, 1-qbar) * m_circ versus 2 * t * w1^2, and the replication
    factor from which the condition is guaranteed to hold."""

    lhs: Fraction
    rhs: Fraction
    holds: bool
    replica_threshold: int

    def to_json_dict(self) -> dict:
        return {
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "replica_threshold": self.replica_threshold,
        }


def coincidence_report(rep: Representation) -> CoincidenceReport:
    if not rep.has_integer_weights():
        raise NonIntegerWeights("apply to_integer() before the coincidence test")
    qb = rep.normalize().quota_bar
    if not 0 < qb < 1:
        raise DegenerateQuota(f"normalized quota {qb} must lie strictly between 0 and 1")
    table = rep.weight_types()
    w1 = int(rep.weights[0])
    lhs = min(qb, 1 - qb) * table.m_circ
    rhs = Fraction(2 * table.t * w1 * w1)
    # replication multiplies m_circ by rho and leaves qbar, t, w1 unchanged,
    # so the condition holds from the first rho with rho * lhs > rhs
    rho = math.floor(rhs / lhs) + 1
    return CoincidenceReport(lhs=lhs, rhs=rhs, holds=lhs > rhs, replica_threshold=rho)


def replica_threshold(rep: Representation) -> int:
    """Smallest rho such that every rho-replica satisfies the coincidence
    condition (an upper bound for actual coincidence, not tight)."""
    return coincidence_report(rep).replica_threshold


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------


def _integer_form(rep: Representation) -> Representation:
    return rep if rep.has_integer_weights() else rep.to_integer()


def _type_ints(rep: Representation) -> tuple[list[int], list[int]]:
    table = rep.weight_types()
    return [int(w) for w in table.weights], list(table.counts)


def _reach_in(reach: int, lo: int, hi: int) -> bool:
    """Any set bit of ``reach`` with index in the integer range [lo, hi]?"""
    lo = max(0, lo)
    if hi < lo:
        return False
    mask = ((1 << (hi - lo + 1)) - 1) << lo
    return bool(reach & mask)


def is_constant_sum(rep: Representation) -> bool:
    """Exactly one of S and its complement wins, for every coalition S."""
    ri = _integer_form(rep)
    weights, counts = _type_ints(ri)
    reach = reachable_weights(weights, counts)
    W = int(ri.total_weight)
    q = ri.quota
    # both lose: W - q < w(S) < q;  both win: q <= w(S) <= W - q
    both_lose = _reach_in(reach, math.floor(W - q) + 1, math.ceil(q) - 1)
    both_win = _reach_in(reach, math.ceil(q), math.floor(W - q))
    return not (both_lose or both_win)


def is_homogeneous_rep(rep: Representation) -> bool:
    """True iff every minimal winning coalition weighs exactly the quota.

    A property of the representation (not of the game); invariant under the
    integer scaling used internally.
    """
    ri = _integer_form(rep)
    weights, counts = _type_ints(ri)
    q = ri.quota
    if q.denominator != 1:
        return False  # coalition weights are integers, so none equals q
    q_int = int(q)
    wmax = max(weights)
    for w0 in range(q_int + 1, q_int + wmax):
        # a minimal winning coalition of weight w0 uses only types heavier
        # than the winning margin w0 - q
        margin = w0 - q_int
        allowed = [(w, c) for w, c in zip(weights, counts) if w > margin]
        if not allowed:
            continue
        reach = reachable_weights([w for w, _ in allowed], [c for _, c in allowed])
        if reach >> w0 & 1:
            return False
    return True


def null_players(rep: Representation) -> frozenset[int]:
    """Players that never turn a losing coalition winning (input indices)."""
    ri = _integer_form(rep)
    weights, counts = _type_ints(ri)
    q = ri.quota
    hi = math.ceil(q) - 1  # largest losing integer weight
    null_weights = set()
    for k, (wk, ck) in enumerate(zip(weights, counts)):
        if wk == 0:
            null_weights.add(wk)
            continue
        rest_counts = list(counts)
        rest_counts[k] = ck - 1
        reach = reachable_weights(weights, rest_counts)
        # a swing: q - wk <= w(S) < q for some S avoiding the tested player
        if not _reach_in(reach, math.ceil(q - wk), hi):
            null_weights.add(wk)
    orig_int = ri.original_weights
    return frozenset(i for i in range(rep.n) if int(orig_int[i]) in null_weights)


def interchangeable_type_pairs(rep: Representation) -> frozenset[frozenset]:
    """Pairs of weight values (in the original scale) whose players can be
    swapped without changing any coalition's status; same-weight players are
    always interchangeable and are not listed."""
    ri = _integer_form(rep)
    weights, counts = _type_ints(ri)
    q = ri.quota
    lam = ri.total_weight / rep.total_weight  # original -> integer scale
    pairs = set()
    for a in range(len(weights)):
        for b in range(a + 1, len(weights)):
            wa, wb = weights[a], weights[b]  # wa > wb
            rest = list(counts)
            rest[a] -= 1
            rest[b] -= 1
            reach = reachable_weights(weights, rest)
            # the swap changes some coalition iff a third-party weight w(S)
            # satisfies q - wa <= w(S) < q - wb
            if not _reach_in(reach, math.ceil(q - wa), math.ceil(q - wb) - 1):
                pairs.add(frozenset({Fraction(wa) / lam, Fraction(wb) / lam}))
    return frozenset(pairs)


def interchangeable_pairs(rep: Representation,
                          limit: int = EXPLICIT_LIMIT) -> frozenset[frozenset[int]]:
    """Unordered player pairs (input indices) that are interchangeable."""
    if rep.n > limit:
        raise EnumerationLimit(f"{rep.n} players exceeds pair-expansion limit {limit}")
    type_pairs = interchangeable_type_pairs(rep)
    orig = rep.original_weights
    out = set()
    for i in range(rep.n):
        for j in range(i + 1, rep.n):
            wi, wj = orig[i], orig[j]
            if wi == wj or frozenset({wi, wj}) in type_pairs:
                out.add(frozenset({i, j}))
    return frozenset(out)


# ---------------------------------------------------------------------------
# homogeneous representation search
# ---------------------------------------------------------------------------


def _homogeneity_solution(eq_rows: list[list[Fraction]], losing_rows: list[list[int]],
                          nv: int):
    """Feasibility of the homogeneity system over (weights..., quota) with
    total weight minimized; returns the witness vector or None.

    Variables: v[0..nv-2] the candidate weights, v[nv-1] the quota.
    Equalities come pre-reduced (independent rows, homogeneous rhs 0);
    losing rows encode w(L) <= q - 1 and are added lazily.
    """
    objective = [Fraction(1)] * (nv - 1) + [Fraction(0)]
    lower = [Fraction(0)] * (nv - 1) + [Fraction(1)]
    active: list[list[int]] = []
    remaining = [list(r) for r in losing_rows]
    rounds = 0
    while True:
        rounds += 1
        if rounds > len(losing_rows) + 2:
            raise RuntimeError("homogeneity row generation failed to terminate")
        lp = ExactLinearProgram(
            num_vars=nv,
            objective=tuple(objective),
            sense="min",
            lower_bounds=tuple(lower),
        )
        for row in eq_rows:
            lp.add_constraint(row, "=", 0)
        for row in active:
            coeffs = [Fraction(c) for c in row[:-1]] + [Fraction(-1)]
            lp.add_constraint(coeffs, "<=", -1)
        sol = solve(lp)
        if sol.status == "infeasible":
            return None
        if sol.status != "optimal":
            return None
        vals = sol.values
        worst = None
        for row in remaining:
            lhs = sum((Fraction(c) * vals[k] for k, c in enumerate(row[:-1])), Fraction(0))
            slack = (vals[-1] - 1) - lhs
            if slack < 0 and (worst is None or slack < worst[0]):
                worst = (slack, row)
        if worst is None:
            return vals
        active.append(worst[1])
        remaining.remove(worst[1])


def permits_homogeneous_rep(rep: Representation, limit: int = EXPLICIT_LIMIT,
                            profile_cap: int = 200_000):
    """Whether the game has a homogeneous representation; returns
    (answer, witness) with the witness a validated representation whose
    total weight is minimal for the homogeneity system.

    Small games enumerate explicit minimal winning and maximal losing
    coalitions; larger games use the weight-type profile system, which is
    lossless because the solution set is convex and invariant under
    permuting equal-weight players.
    """
    ri = _integer_form(rep)
    if ri.n <= limit:
        return _permits_homogeneous_explicit(rep, ri)
    return _permits_homogeneous_typed(rep, ri, profile_cap)


def _maximal_losing_masks(ri: Representation):
    weights = [int(w) for w in ri.original_weights]
    q = ri.quota
    n = ri.n
    size = 1 << n
    wsum = [0] * size
    for m in range(1, size):
        low = m & -m
        i = low.bit_length() - 1
        wsum[m] = wsum[m ^ low] + weights[i]
    out = []
    for m in range(size):
        if Fraction(wsum[m]) >= q:
            continue
        outsiders = [weights[i] for i in range(n) if not m >> i & 1]
        if outsiders and Fraction(wsum[m] + min(outsiders)) < q:
            continue
        out.append(m)
    return out


def _permits_homogeneous_explicit(rep: Representation, ri: Representation):
    n = ri.n
    mwcs = minimal_winning_coalitions(ri, limit=n)
    system = EchelonSystem(n + 1)
    for S in mwcs:
        row = [Fraction(0)] * (n + 1)
        for i in S:
            row[i] = Fraction(1)
        row[n] = Fraction(-1)
        system.add_row(row, 0)  # w(S) - q = 0, homogeneous so always consistent
    eq_rows = [list(r[: n + 1]) for r in system.rows]

    losing_rows = []
    for m in _maximal_losing_masks(ri):
        row = [1 if m >> i & 1 else 0 for i in range(n)] + [0]
        losing_rows.append(row)

    vals = _homogeneity_solution(eq_rows, losing_rows, n + 1)
    if vals is None:
        return False, None
    witness = representation(vals[n], vals[:n])
    _verify_witness_explicit(ri, witness)
    return True, witness


def _verify_witness_explicit(ri: Representation, witness: Representation) -> None:
    n = ri.n
    for m in range(1 << n):
        S = [i for i in range(n) if m >> i & 1]
        if ri.is_winning(S) != witness.is_winning(S):
            raise IdentityViolation("homogeneity witness induces a different game")
    if not is_homogeneous_rep(witness):
        raise IdentityViolation("homogeneity witness is not homogeneous")


def _maximal_losing_profiles(ri: Representation, cap: int):
    """Profiles of losing coalitions to which no available player can be
    added without winning."""
    table = ri.weight_types()
    weights = [int(w) for w in table.weights]
    counts = list(table.counts)
    win_cut = min_winning_weight(ri)
    t = len(weights)
    out = []

    def rec(k: int, acc: list[int], weight: int):
        if len(out) > cap:
            raise EnumerationLimit(f"more than {cap} maximal losing profiles")
        if k == t:
            avail = [weights[i] for i in range(t) if acc[i] < counts[i]]
            if avail and weight + min(avail) < win_cut:
                return
            out.append(tuple(acc))
            return
        # a maximal losing profile keeps total weight below the quota
        for j in range(counts[k] + 1):
            w = weight + j * weights[k]
            if w >= win_cut:
                break
            rec(k + 1, acc + [j], w)

    rec(0, [], 0)
    return out


def _permits_homogeneous_typed(rep: Representation, ri: Representation, cap: int):
    table = ri.weight_types()
    t = table.t
    system = EchelonSystem(t + 1)
    for vec in minimal_winning_count_vectors(ri, cap=cap):
        row = [Fraction(c) for c in vec] + [Fraction(-1)]
        system.add_row(row, 0)
    eq_rows = [list(r[: t + 1]) for r in system.rows]

    # the equalities alone often already rule a homogeneous representation
    # out; only enumerate the (possibly huge) losing side when they do not
    if _homogeneity_solution(eq_rows, [], t + 1) is None:
        return False, None
    losing_rows = [list(p) + [0] for p in _maximal_losing_profiles(ri, cap)]
    vals = _homogeneity_solution(eq_rows, losing_rows, t + 1)
    if vals is None:
        return False, None
    # expand type weights back to players (input order)
    per_type = {w: vals[k] for k, (w, _) in enumerate(table.entries)}
    weights = [per_type[w] for w in ri.original_weights]
    witness = representation(vals[t], weights)
    _verify_witness_typed(ri, witness)
    return True, witness


def _verify_witness_typed(ri: Representation, witness: Representation) -> None:
    """Winning-set equality via reachable weight pairs of the two systems."""
    table = ri.weight_types()
    orig_weights = [int(w) for w in table.weights]
    counts = list(table.counts)
    seen: dict[int, Fraction] = {}
    for w, x in zip(ri.original_weights, witness.original_weights):
        seen.setdefault(int(w), x)
    per_type_witness = [seen[w] for w in orig_weights]

    # enumerate joint reachable (orig weight, witness weight) combinations per
    # type counts; equivalence must hold for every reachable pair
    combos = {(0, Fraction(0))}
    for wk, xk, ck in zip(orig_weights, per_type_witness, counts):
        new = set()
        for j in range(ck + 1):
            dw, dx = wk * j, xk * j
            for a, b in combos:
                new.add((a + dw, b + dx))
        combos = new
        if len(combos) > 2_000_000:
            raise EnumerationLimit("witness verification lattice too large")
    for a, b in combos:
        if (Fraction(a) >= ri.quota) != (b >= witness.quota):
            raise IdentityViolation("homogeneity witness induces a different game")
    if not is_homogeneous_rep(witness):
        raise IdentityViolation("homogeneity witness is not homogeneous")


# ---------------------------------------------------------------------------
# regularity along game sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    """Finite-prefix evidence on whether a weight class's aggregate relative
    weight stays away from zero; never a verdict about the limit."""

    weight: Fraction
    values: tuple[Fraction, ...]
    running_min: tuple[Fraction, ...]
    appears_bounded_away: bool

    def to_json_dict(self) -> dict:
        return {
            "weight": str(self.weight),
            "values": [str(v) for v in self.values],
            "running_min": [str(v) for v in self.running_min],
            "appears_bounded_away": self.appears_bounded_away,
        }


def regularity_statistic(seq: Iterable[Representation], weight) -> RegularityReport:
    """m_w(n) * wbar_w(n) for each game in the sequence, with a simple flag:
    positive throughout and no new minimum in the second half of the prefix."""
    w = Fraction(weight)
    values = []
    for rep in seq:
        mult = rep.weight_types().multiplicity_of(w)
        if mult == 0:
            raise WeightAbsent(f"weight {w} absent from a {rep.n}-player game")
        values.append(mult * w / rep.total_weight)
    if not values:
        raise GameError("empty game sequence")
    running = []
    cur = None
    for v in values:
        cur = v if cur is None or v < cur else cur
        running.append(cur)
    mid = (len(values) - 1) // 2
    appears = running[-1] > 0 and running[-1] == running[mid]
    return RegularityReport(
        weight=w,
        values=tuple(values),
        running_min=tuple(running),
        appears_bounded_away=appears,
    )
