"""Coalition enumeration, excesses, minimal winning coalitions, and the
maximum-excess separation oracle.

The oracle answers "which coalition has the largest excess at payoff x,
excluding a given collection of coalitions" without enumerating all 2^n
subsets: over winning coalitions the maximum excess is 1 minus the cost of
a cheapest winning coalition, found by a bounded-knapsack dynamic program
over integer total weight; excluded coalitions are handled by partitioning
the search space around each excluded solution and re-running the DP on
each part, so candidates come out in ascending cost order.

Players with equal weight and equal payoff are interchangeable for the DP,
so the item system groups them; for the 900-player showcase game this
collapses to three items.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .games import GameError, Representation

DEFAULT_ENUMERATION_LIMIT = 20


class TooManyPlayers(GameError):
    pass


class EnumerationLimit(GameError):
    pass


class NonIntegerWeights(GameError):
    pass


class DimensionMismatch(GameError):
    pass


class OracleStall(RuntimeError):
    """The exclusion-partition search exceeded its candidate budget."""


# ---------------------------------------------------------------------------
# excesses
# ---------------------------------------------------------------------------


def coalition_value(rep: Representation, players: Iterable[int]) -> int:
    return 1 if rep.is_winning(players) else 0


def excess(rep: Representation, players: Iterable[int], x: Sequence) -> Fraction:
    """e(S, x) = v(S) - x(S), with x in input player order."""
    xs = [Fraction(v) for v in x]
    if len(xs) != rep.n:
        raise DimensionMismatch(f"payoff vector has length {len(xs)}, game has {rep.n} players")
    members = list(players)
    total = sum((xs[i] for i in members), Fraction(0))
    return Fraction(coalition_value(rep, members)) - total


@dataclass(frozen=True)
class ProfileCoalition:
    """A coalition described by how many players of each weight type it uses.

    ``counts`` is aligned with ``rep.weight_types().entries`` (heaviest type
    first); ``type_weights`` carries those weight values.  ``multiplicity``
    counts the explicit coalitions in the class.
    """

    counts: tuple[int, ...]
    weight: Fraction
    multiplicity: int
    type_weights: tuple[Fraction, ...] = ()

    @staticmethod
    def of(rep: Representation, counts: Sequence[int]) -> "ProfileCoalition":
        table = rep.weight_types()
        counts = tuple(int(c) for c in counts)
        if len(counts) != table.t:
            raise DimensionMismatch("profile length does not match number of weight types")
        mult = 1
        weight = Fraction(0)
        for (w, avail), c in zip(table.entries, counts):
            if not 0 <= c <= avail:
                raise GameError(f"profile count {c} outside 0..{avail} for weight {w}")
            mult *= math.comb(avail, c)
            weight += w * c
        return ProfileCoalition(counts=counts, weight=weight, multiplicity=mult,
                                type_weights=table.weights)

    def expand_one(self, rep: Representation) -> frozenset[int]:
        """A canonical explicit member of the class (lowest input indices per type)."""
        table = rep.weight_types()
        orig = rep.original_weights
        members: list[int] = []
        for (w, _), c in zip(table.entries, self.counts):
            taken = 0
            for i, wi in enumerate(orig):
                if taken == c:
                    break
                if wi == w:
                    members.append(i)
                    taken += 1
        return frozenset(members)


def all_profiles(rep: Representation, cap: int = 2_000_000) -> list[ProfileCoalition]:
    """Every profile class of the game's weight-type lattice."""
    table = rep.weight_types()
    size = 1
    for c in table.counts:
        size *= c + 1
    if size > cap:
        raise EnumerationLimit(f"profile lattice has {size} classes (cap {cap})")
    out: list[ProfileCoalition] = []

    def rec(k: int, acc: list[int]):
        if k == table.t:
            out.append(ProfileCoalition.of(rep, acc))
            return
        for j in range(table.counts[k] + 1):
            rec(k + 1, acc + [j])

    rec(0, [])
    return out


@dataclass(frozen=True)
class ExcessRecord:
    excess: Fraction
    coalition: frozenset[int]
    profile: ProfileCoalition | None = None


def ordered_excess_vector(rep: Representation, x: Sequence,
                          limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[ExcessRecord]:
    """Excesses of all 2^n coalitions, weakly decreasing; ties break by
    coalition bitmask ascending (bit i of the mask is input player i)."""
    if rep.n > limit:
        raise TooManyPlayers(f"{rep.n} players exceeds enumeration limit {limit}")
    xs = [Fraction(v) for v in x]
    if len(xs) != rep.n:
        raise DimensionMismatch(f"payoff vector has length {len(xs)}, game has {rep.n} players")

    denom = 1
    for v in xs:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    xnum = [int(v * denom) for v in xs]

    wdenom = 1
    weights = rep.original_weights
    for w in weights:
        wdenom = wdenom * w.denominator // math.gcd(wdenom, w.denominator)
    wnum = [int(w * wdenom) for w in weights]
    qnum = rep.quota * wdenom

    n = rep.n
    size = 1 << n
    xsum = [0] * size
    wsum = [0] * size
    for m in range(1, size):
        low = m & -m
        i = low.bit_length() - 1
        prev = m ^ low
        xsum[m] = xsum[prev] + xnum[i]
        wsum[m] = wsum[prev] + wnum[i]

    enum = []
    for m in range(size):
        v = 1 if wsum[m] >= qnum else 0
        enum.append(v * denom - xsum[m])
    order = sorted(range(size), key=lambda m: (-enum[m], m))
    return [
        ExcessRecord(
            excess=Fraction(enum[m], denom),
            coalition=frozenset(i for i in range(n) if m >> i & 1),
        )
        for m in order
    ]


# ---------------------------------------------------------------------------
# minimal winning coalitions
# ---------------------------------------------------------------------------


def minimal_winning_coalitions(rep: Representation,
                               limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[frozenset[int]]:
    """Inclusion-minimal winning coalitions, masks ascending.

    A winning S is minimal iff removing its lightest member loses, since
    removing any member leaves at least as little weight as that.
    """
    if rep.n > limit:
        raise TooManyPlayers(f"{rep.n} players exceeds enumeration limit {limit}")
    weights = rep.original_weights
    wdenom = 1
    for w in weights:
        wdenom = wdenom * w.denominator // math.gcd(wdenom, w.denominator)
    wnum = [int(w * wdenom) for w in weights]
    qnum = rep.quota * wdenom

    n = rep.n
    size = 1 << n
    wsum = [0] * size
    wmin = [None] * size
    out = []
    for m in range(1, size):
        low = m & -m
        i = low.bit_length() - 1
        prev = m ^ low
        wsum[m] = wsum[prev] + wnum[i]
        pm = wmin[prev]
        wmin[m] = wnum[i] if pm is None or wnum[i] < pm else pm
        if wsum[m] >= qnum and wsum[m] - wmin[m] < qnum:
            out.append(frozenset(j for j in range(n) if m >> j & 1))
    return out


def is_minimal_winning_profile(rep: Representation, counts: Sequence[int]) -> bool:
    prof = ProfileCoalition.of(rep, counts)
    if prof.weight < rep.quota:
        return False
    table = rep.weight_types()
    for (w, _), c in zip(table.entries, prof.counts):
        if c >= 1 and prof.weight - w >= rep.quota:
            return False
    return True


def minimal_winning_count_vectors(rep: Representation, cap: int = 200_000) -> list[tuple[int, ...]]:
    """Count vectors (per weight type, heaviest first) of all minimal winning
    coalitions; integer weights required.  Pure integer arithmetic; profiles
    live in the weight window [ceil(q), ceil(q) + w1 - 1]."""
    if not rep.has_integer_weights():
        raise NonIntegerWeights("profile enumeration requires integer weights")
    table = rep.weight_types()
    tweights = [int(w) for w in table.weights]
    counts = list(table.counts)
    t = table.t
    win_cut = min_winning_weight(rep)
    wmax = max(tweights)
    hi_cut = win_cut + wmax - 1
    suffix_weight = [0] * (t + 1)
    for k in reversed(range(t)):
        suffix_weight[k] = suffix_weight[k + 1] + tweights[k] * counts[k]
    out: list[tuple[int, ...]] = []

    def rec(k: int, acc: list[int], weight: int):
        if len(out) > cap:
            raise EnumerationLimit(f"more than {cap} candidate profiles")
        if k == t:
            if weight >= win_cut and all(
                j == 0 or weight - w < win_cut
                for j, w in zip(acc, tweights)
            ):
                out.append(tuple(acc))
            return
        for j in range(counts[k] + 1):
            w = weight + j * tweights[k]
            if w > hi_cut:
                break
            if w + suffix_weight[k + 1] < win_cut:
                continue
            rec(k + 1, acc + [j], w)

    rec(0, [], 0)
    out.sort()
    return out


def minimal_winning_profiles(rep: Representation, cap: int = 200_000) -> list[ProfileCoalition]:
    """Minimal winning coalitions as profile classes (integer weights required)."""
    return [ProfileCoalition.of(rep, c) for c in minimal_winning_count_vectors(rep, cap)]


# ---------------------------------------------------------------------------
# reachable-weight bitsets
# ---------------------------------------------------------------------------


def reachable_weights(weights: Sequence[int], counts: Sequence[int]) -> int:
    """Bitset (Python int) with bit w set iff some selection within the given
    multiplicities has total weight exactly w.  Binary-split bounded knapsack."""
    r = 1
    for w, c in zip(weights, counts):
        if w == 0 or c == 0:
            continue
        chunk = 1
        remaining = c
        while remaining > 0:
            take = min(chunk, remaining)
            r |= r << (w * take)
            remaining -= take
            chunk *= 2
    return r


# ---------------------------------------------------------------------------
# min-cost selection engine (bounded knapsack + exclusion partitions)
# ---------------------------------------------------------------------------


_INF = None


def _convolve(old: list, omega: int, lo: int, hi: int, cost: int, top: int) -> list:
    """new[w] = min over j in [lo, hi] of (j*cost + old[w - j*omega])."""
    new: list = [_INF] * (top + 1)
    for r in range(min(omega, top + 1)):
        positions = range(r, top + 1, omega)
        count = len(positions)
        dq: deque = deque()  # (m, old[r+m*omega] - m*cost), increasing values
        for i in range(count):
            m_enter = i - lo
            if 0 <= m_enter < count:
                val = old[r + m_enter * omega]
                if val is not _INF:
                    g = val - m_enter * cost
                    while dq and dq[-1][1] >= g:
                        dq.pop()
                    dq.append((m_enter, g))
            low_m = i - hi
            while dq and dq[0][0] < low_m:
                dq.popleft()
            if dq:
                new[r + i * omega] = dq[0][1] + i * cost
    return new


def _box_min_cost(weights: Sequence[int], los: Sequence[int], his: Sequence[int],
                  costs: Sequence[int], wlo: int, whi: int):
    """Cheapest selection with per-item counts in [lo, hi] and total weight in
    [wlo, whi]; ties resolved toward the lexicographically smallest count
    vector.  Returns (cost, counts) or None."""
    t = len(weights)
    whi_local = whi
    dp: list[list] = [[_INF] * (whi_local + 1) for _ in range(t + 1)]
    dp[t][0] = 0
    for k in reversed(range(t)):
        dp[k] = _convolve(dp[k + 1], weights[k], los[k], his[k], costs[k], whi_local)
    best = _INF
    for w in range(max(wlo, 0), whi_local + 1):
        v = dp[0][w]
        if v is not _INF and (best is _INF or v < best):
            best = v
    if best is _INF:
        return None

    prof: list[int] = []
    acc_w = 0
    acc_c = 0
    for k in range(t):
        arr = dp[k + 1]
        chosen = None
        for j in range(los[k], his[k] + 1):
            w_used = acc_w + j * weights[k]
            if w_used > whi_local:
                break
            target = best - acc_c - j * costs[k]
            if target < 0 and costs[k] > 0:
                break
            lo_need = max(wlo - w_used, 0)
            hi_need = whi_local - w_used
            found = False
            for w in range(lo_need, hi_need + 1):
                if arr[w] is not _INF and arr[w] == target:
                    found = True
                    break
            if found:
                chosen = j
                break
        if chosen is None:
            raise OracleStall("reconstruction failed")  # pragma: no cover
        prof.append(chosen)
        acc_w += chosen * weights[k]
        acc_c += chosen * costs[k]
    return best, tuple(prof)


def min_cost_selection(weights: Sequence[int], counts: Sequence[int], costs: Sequence[int],
                       wlo: int, whi: int,
                       exclude: frozenset[tuple[int, ...]] = frozenset(),
                       accept: Callable[[tuple[int, ...]], bool] | None = None,
                       max_pops: int = 400):
    """Cheapest acceptable selection with total weight in [wlo, whi].

    ``exclude`` lists count vectors that must not be returned; ``accept`` is
    an extra filter.  Candidates are generated in ascending (cost, counts)
    order by partitioning the count box around each rejected solution, so
    the first acceptable candidate is optimal.  Raises ``OracleStall`` after
    ``max_pops`` rejected candidates.
    """
    t = len(weights)
    init = _box_min_cost(weights, [0] * t, [int(c) for c in counts], costs, wlo, whi)
    heap = []
    if init is not None:
        cost, prof = init
        heap = [(cost, prof, tuple([0] * t), tuple(int(c) for c in counts))]
    pops = 0
    while heap:
        cost, prof, los, his = heapq.heappop(heap)
        if prof not in exclude and (accept is None or accept(prof)):
            return cost, prof
        pops += 1
        if pops > max_pops:
            raise OracleStall(f"exceeded {max_pops} rejected candidates")
        for k in range(t):
            for new_lo, new_hi in (
                (los[k], prof[k] - 1),
                (prof[k] + 1, his[k]),
            ):
                if new_lo > new_hi:
                    continue
                clos = list(prof[:k]) + [new_lo] + list(los[k + 1:])
                chis = list(prof[:k]) + [new_hi] + list(his[k + 1:])
                sub = _box_min_cost(weights, clos, chis, costs, wlo, whi)
                if sub is not None:
                    heapq.heappush(heap, (sub[0], sub[1], tuple(clos), tuple(chis)))
    return None


# ---------------------------------------------------------------------------
# the maximum-excess oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _ItemSystem:
    """Players grouped into classes of identical (weight, cost)."""

    weights: tuple[int, ...]          # integer weights per class
    counts: tuple[int, ...]
    costs: tuple[int, ...]            # scaled payoff numerators per member
    denom: int                        # common denominator of all payoffs
    members: tuple[tuple[int, ...], ...]  # input-order player indices per class


def build_item_system(rep: Representation, x: Sequence) -> _ItemSystem:
    if not rep.has_integer_weights():
        raise NonIntegerWeights("the oracle requires integer weights; scale with to_integer()")
    xs = [Fraction(v) for v in x]
    if len(xs) != rep.n:
        raise DimensionMismatch(f"payoff vector has length {len(xs)}, game has {rep.n} players")
    denom = 1
    for v in xs:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    groups: dict[tuple[int, int], list[int]] = {}
    orig = rep.original_weights
    for i in range(rep.n):
        key = (int(orig[i]), int(xs[i] * denom))
        groups.setdefault(key, []).append(i)
    keys = sorted(groups, key=lambda k: (-k[0], k[1]))
    return _ItemSystem(
        weights=tuple(k[0] for k in keys),
        counts=tuple(len(groups[k]) for k in keys),
        costs=tuple(k[1] for k in keys),
        denom=denom,
        members=tuple(tuple(groups[k]) for k in keys),
    )


def _selection_to_coalition(items: _ItemSystem, prof: Sequence[int]) -> frozenset[int]:
    members: list[int] = []
    for cls, j in enumerate(prof):
        members.extend(items.members[cls][:j])
    return frozenset(members)


def _expansions(items: _ItemSystem, prof: Sequence[int], cap: int):
    """Up to ``cap`` distinct explicit coalitions with class counts ``prof``."""
    import itertools

    pools = [
        itertools.combinations(items.members[cls], j)
        for cls, j in enumerate(prof)
    ]
    for combo in itertools.islice(itertools.product(*pools), cap):
        yield frozenset(i for part in combo for i in part)


def _coalition_to_selection(items: _ItemSystem, coal: frozenset[int]) -> tuple[int, ...]:
    counts = []
    for cls_members in items.members:
        counts.append(sum(1 for i in cls_members if i in coal))
    return tuple(counts)


def min_winning_weight(rep: Representation) -> int:
    """Smallest integer total weight that wins (integer weights required)."""
    q = rep.quota
    c = -(-q.numerator // q.denominator)  # ceil
    return int(c)


def max_excess_coalition(rep: Representation, x: Sequence,
                         forbidden: Iterable[frozenset[int]] = (),
                         max_pops: int = 2000) -> ExcessRecord:
    """A coalition with maximum excess at x among all coalitions (including
    the empty and grand coalitions) outside ``forbidden``.

    Requires integer weights and a componentwise nonnegative payoff vector.
    Ties between a winning and a losing candidate of equal excess go to the
    winning one; remaining ties follow the class-count order of the grouped
    item system.
    """
    xs = [Fraction(v) for v in x]
    if any(v < 0 for v in xs):
        raise GameError("the oracle requires a nonnegative payoff vector")
    items = build_item_system(rep, xs)
    W = sum(w * c for w, c in zip(items.weights, items.counts))
    C = min_winning_weight(rep)

    # a class vector is exhausted only when every explicit coalition with
    # those counts is forbidden; otherwise it stays eligible and a
    # non-forbidden expansion is picked afterwards
    forbidden_sets = {frozenset(c) for c in forbidden}
    per_class: dict[tuple[int, ...], int] = {}
    for coal in forbidden_sets:
        sel = _coalition_to_selection(items, coal)
        per_class[sel] = per_class.get(sel, 0) + 1

    def class_multiplicity(prof: tuple[int, ...]) -> int:
        mult = 1
        for cls, j in enumerate(prof):
            mult *= math.comb(items.counts[cls], j)
        return mult

    def acceptable(prof: tuple[int, ...]) -> bool:
        hit = per_class.get(prof, 0)
        return hit == 0 or hit < class_multiplicity(prof)

    win = min_cost_selection(items.weights, items.counts, items.costs,
                             C, W, accept=acceptable, max_pops=max_pops)
    lose = None
    if C >= 1:
        lose = min_cost_selection(items.weights, items.counts, items.costs,
                                  0, C - 1, accept=acceptable, max_pops=max_pops)

    D = items.denom
    best = None  # (excess numerator over D, is_winning, prof)
    if win is not None:
        best = (D - win[0], True, win[1])
    if lose is not None:
        cand = (-lose[0], False, lose[1])
        if best is None or cand[0] > best[0]:
            best = cand
    if best is None:
        raise GameError("all coalitions are forbidden")
    num, _, prof = best
    chosen = None
    for cand_set in _expansions(items, prof, len(forbidden_sets) + 1):
        if cand_set not in forbidden_sets:
            chosen = cand_set
            break
    if chosen is None:  # pragma: no cover
        raise GameError("all coalitions are forbidden")
    counts_by_type = _profile_by_weight_types(rep, items, prof)
    return ExcessRecord(
        excess=Fraction(num, D),
        coalition=chosen,
        profile=counts_by_type,
    )


def _profile_by_weight_types(rep: Representation, items: _ItemSystem,
                             prof: Sequence[int]) -> ProfileCoalition | None:
    """Collapse an item-class selection to a weight-type profile when the
    selection is weight-symmetric enough to be one."""
    table = rep.weight_types()
    counts = [0] * table.t
    index_of = {int(w): i for i, (w, _) in enumerate(table.entries)}
    for cls, j in enumerate(prof):
        counts[index_of[items.weights[cls]]] += j
    try:
        return ProfileCoalition.of(rep, counts)
    except GameError:  # pragma: no cover
        return None
