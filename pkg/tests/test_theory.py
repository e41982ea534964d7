import random
from fractions import Fraction as F

import pytest

from nucleo.games import representation
from nucleo.nucleolus import nucleolus
from nucleo.theory import (
    DegenerateQuota,
    WeightAbsent,
    coincidence_report,
    distance_bound,
    gap_report,
    interchangeable_pairs,
    interchangeable_type_pairs,
    is_constant_sum,
    is_homogeneous_rep,
    null_players,
    permits_homogeneous_rep,
    regularity_statistic,
    replica_threshold,
)
from nucleo.experiments import eq3_representation

import oracles

XSTAR = (F(2, 5), F(1, 5), F(1, 5), F(1, 5))


# -- gap report --------------------------------------------------------------


def test_gap_textbook_game():
    rep = representation(8, [6, 4, 3, 2])
    rpt = gap_report(rep, XSTAR)
    assert rpt.l1_gap == F(2, 15)
    assert rpt.bound == F(12, 7)
    assert rpt.s_plus == frozenset({3})
    assert rpt.l1_gap == 2 * rpt.delta * sum(
        (rep.normalize().to_input_order()[i] for i in rpt.s_minus), F(0)
    )


def test_gap_zero_for_homogeneous_representation():
    rpt = gap_report(representation(3, [2, 1, 1, 1]), XSTAR)
    assert rpt.l1_gap == F(0)
    assert rpt.delta == F(0)


def test_gap_small_weight_game():
    # oracle arithmetic: 2*|1/3 - 9/20| + |1/3 - 1/10| = 7/30 + 7/30 = 7/15,
    # confirmed by the decomposition 2 * (7/27) * (9/10)
    rep = representation(F(1, 2), [F(9, 20), F(9, 20), F(1, 10)])
    rpt = gap_report(rep, (F(1, 3), F(1, 3), F(1, 3)))
    assert rpt.l1_gap == F(7, 15)
    assert rpt.bound == F(9, 5)
    assert rpt.delta == F(7, 27)
    assert rpt.l1_gap <= rpt.bound


def test_gap_rejects_degenerate_quota():
    rep = representation(2, [1, 1])
    with pytest.raises(DegenerateQuota):
        gap_report(rep, (F(1, 2), F(1, 2)))
    with pytest.raises(DegenerateQuota):
        distance_bound(rep)


# -- coincidence condition ----------------------------------------------------


def test_coincidence_flagship_holds():
    rep = representation(1500, [4] * 300 + [3] * 300 + [2] * 300)
    rpt = coincidence_report(rep)
    assert rpt.lhs == F(400, 3)
    assert rpt.rhs == F(96)
    assert rpt.holds
    assert rpt.replica_threshold == 1


def test_coincidence_small_homogeneous_game_fails():
    rpt = coincidence_report(representation(3, [2, 1, 1, 1]))
    assert rpt.lhs == F(2, 5) and rpt.rhs == F(16) and not rpt.holds


def test_coincidence_calls_for_193_copies_at_simple_majority():
    # equal numbers of weights 4, 3, 2 with a 50% quota: the condition reads
    # m/2 > 96, i.e. it first holds at multiplicity 193
    for m, expect in ((192, False), (193, True)):
        rep = representation(F(9 * m, 2), [4] * m + [3] * m + [2] * m)
        assert coincidence_report(rep).holds is expect


def test_replica_threshold_values():
    assert replica_threshold(representation(5, [4, 3, 2])) == 217
    flagship = representation(1500, [4] * 300 + [3] * 300 + [2] * 300)
    assert replica_threshold(flagship) == 1
    # threshold 1 whenever the condition already holds
    assert coincidence_report(flagship).holds


def test_replication_leaves_condition_data_invariant():
    base = representation(5, [4, 3, 2])
    r0 = coincidence_report(base)
    for rho in (2, 5, 217):
        rep = base.replicate(rho)
        r = coincidence_report(rep)
        assert r.rhs == r0.rhs
        assert r.lhs == r0.lhs * rho
    assert coincidence_report(base.replicate(217)).holds
    assert not coincidence_report(base.replicate(216)).holds


# -- classifiers ---------------------------------------------------------------


def test_constant_sum_examples():
    assert is_constant_sum(representation(3, [2, 1, 1, 1]))
    assert is_constant_sum(representation(8, [6, 4, 3, 2]))
    assert not is_constant_sum(representation(2, [1, 1]))


def test_constant_sum_matches_brute():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 8)
        ws = [rng.randint(0, 5) for _ in range(n)]
        if sum(ws) == 0:
            continue
        q = rng.randint(1, sum(ws))
        rep = representation(q, ws)
        assert is_constant_sum(rep) == oracles.brute_constant_sum(rep)


def test_homogeneous_examples():
    assert is_homogeneous_rep(representation(3, [2, 1, 1, 1]))
    assert not is_homogeneous_rep(representation(8, [6, 4, 3, 2]))
    flagship = representation(1500, [4] * 300 + [3] * 300 + [2] * 300)
    assert not is_homogeneous_rep(flagship)


def test_homogeneous_matches_brute():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(1, 8)
        ws = [rng.randint(1, 5) for _ in range(n)]
        q = rng.randint(1, sum(ws))
        rep = representation(q, ws)
        assert is_homogeneous_rep(rep) == oracles.brute_is_homogeneous(rep)


def test_null_players_examples():
    assert null_players(representation(F(7, 2), [1, 2, 2, 2])) == frozenset({0})
    assert null_players(representation(8, [6, 4, 3, 2])) == frozenset()
    assert null_players(representation(1, [1, 0])) == frozenset({1})


def test_null_players_match_brute():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 8)
        ws = [rng.randint(0, 5) for _ in range(n)]
        if sum(ws) == 0:
            continue
        q = rng.randint(1, sum(ws))
        rep = representation(q, ws)
        assert null_players(rep) == oracles.brute_null_players(rep)


def test_interchangeable_pairs_examples():
    got = interchangeable_pairs(representation(3, [2, 1, 1, 1]))
    assert got == frozenset({frozenset({1, 2}), frozenset({1, 3}), frozenset({2, 3})})
    # different weights can still be interchangeable
    got = interchangeable_pairs(representation(F(5, 2), [1, 2, 2]))
    assert got == frozenset({frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})})
    assert interchangeable_pairs(representation(1, [1, 0])) == frozenset()


def test_interchangeable_pairs_match_brute():
    rng = random.Random(6)
    for _ in range(40):
        n = rng.randint(2, 7)
        ws = [rng.randint(0, 5) for _ in range(n)]
        if sum(ws) == 0:
            continue
        q = rng.randint(1, sum(ws))
        rep = representation(q, ws)
        assert interchangeable_pairs(rep) == oracles.brute_interchangeable_pairs(rep)


def test_cross_weight_interchangeability_violates_coincidence():
    # interchangeable players with different weights force the condition to
    # fail, since equality of payoff and weight cannot both hold
    rep = representation(F(5, 2), [1, 2, 2])
    pairs = interchangeable_type_pairs(rep)
    assert frozenset({F(1), F(2)}) in pairs
    assert not coincidence_report(rep.to_integer()).holds


# -- homogeneous representation search ----------------------------------------


def test_permits_homogeneous_textbook_game():
    ok, witness = permits_homogeneous_rep(representation(8, [6, 4, 3, 2]))
    assert ok
    assert witness.normalize().to_input_order() == XSTAR
    assert is_homogeneous_rep(witness)
    assert witness.quota == F(3)
    assert witness.original_weights == (F(2), F(1), F(1), F(1))


def test_permits_homogeneous_flagship_false():
    rep = representation(1500, [4] * 300 + [3] * 300 + [2] * 300)
    ok, witness = permits_homogeneous_rep(rep, profile_cap=400_000)
    assert not ok and witness is None


def test_permits_homogeneous_dictator():
    ok, witness = permits_homogeneous_rep(representation(1, [1]))
    assert ok and witness.is_winning({0})


def test_permits_homogeneous_witness_verified_exhaustively():
    rng = random.Random(8)
    found = 0
    for _ in range(40):
        n = rng.randint(2, 6)
        ws = [rng.randint(1, 4) for _ in range(n)]
        q = rng.randint(1, sum(ws))
        rep = representation(q, ws)
        ok, witness = permits_homogeneous_rep(rep)
        if not ok:
            continue
        found += 1
        for S in oracles.coalitions(n):
            assert rep.is_winning(S) == witness.is_winning(S)
        assert oracles.brute_is_homogeneous(witness)
    assert found >= 5


# -- regularity ----------------------------------------------------------------


def test_regularity_alternating_family():
    seq = [eq3_representation(n) for n in range(3, 13)]
    heavy = regularity_statistic(seq, 2)
    assert heavy.values[0] == F(4, 5)
    assert heavy.values == tuple(F(2 * (n - 1), 2 * n - 1) for n in range(3, 13))
    assert min(heavy.values) == F(4, 5)
    assert heavy.appears_bounded_away

    light = regularity_statistic(seq, 1)
    assert light.values == tuple(F(1, 2 * n - 1) for n in range(3, 13))
    assert not light.appears_bounded_away


def test_regularity_replica_family_constant():
    base = representation(5, [4, 3, 2])
    seq = [base.replicate(r) for r in range(1, 7)]
    rpt = regularity_statistic(seq, 4)
    assert rpt.values == tuple([F(4, 9)] * 6)
    assert rpt.appears_bounded_away


def test_regularity_missing_weight():
    with pytest.raises(WeightAbsent):
        regularity_statistic([representation(3, [2, 1, 1, 1])], 7)


# -- consistency with known nucleolus facts -------------------------------------


def test_condition_forces_coincidence_on_replicated_random_games():
    """Soundness: whenever the condition holds, the nucleolus equals the
    normalized weights; exercised by replicating random small games past
    their guaranteed threshold."""
    rng = random.Random(31)
    checked = 0
    for _ in range(12):
        n = rng.randint(2, 4)
        ws = [rng.randint(1, 3) for _ in range(n)]
        total = sum(ws)
        if total < 2:
            continue
        q = rng.randint(1, total - 1)
        base = representation(q, ws)
        rho = replica_threshold(base)
        rep = base.replicate(rho)
        rpt = coincidence_report(rep)
        assert rpt.holds
        assert nucleolus(rep, engine="typed").x_star == tuple(
            rep.normalize().to_input_order()
        )
        checked += 1
    assert checked >= 8


def test_sufficiency_only_examples():
    # the condition is sufficient, not necessary: one game fails it while the
    # nucleolus still equals the weights, another fails it and differs
    small = representation(3, [2, 1, 1, 1])
    assert not coincidence_report(small).holds
    assert nucleolus(small).x_star == tuple(small.normalize().to_input_order())

    textbook = representation(8, [6, 4, 3, 2])
    assert not coincidence_report(textbook).holds
    assert nucleolus(textbook).x_star != tuple(textbook.normalize().to_input_order())
