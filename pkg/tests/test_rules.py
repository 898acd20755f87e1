import math
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import elections
from shiftbribery.election import Election, Voter
from shiftbribery.errors import InvalidThreshold
from shiftbribery.rules import (
    RULE_KINDS,
    RuleSpec,
    borda_scores,
    cc_committee_score,
    cc_exact_member_check,
    greedy_cc,
    is_member,
    lambert_w0,
    ptas_threshold,
    t_approval_scores,
    topk_member_check,
    winning_committee,
)


def E(names, orders, weights=None):
    return Election.from_orders(names, orders, weights)


def test_borda_examples():
    assert borda_scores(E("abc", ["abc"])) == [2, 1, 0]
    assert borda_scores(E("ab", ["ab"], [3])) == [3, 0]
    assert borda_scores(E("abc", ["abc", "cba"])) == [2, 2, 2]


def test_t_approval_examples():
    e = E("abc", ["abc", "bac"])
    assert t_approval_scores(e, 3) == [2, 2, 2]
    assert t_approval_scores(E("abc", ["abc"]), 1) == [1, 0, 0]
    assert t_approval_scores(e, 2) == [2, 2, 0]
    with pytest.raises(InvalidThreshold):
        t_approval_scores(e, 4)


def test_rule_strings_round_trip():
    for text in ["sntv", "bloc", "kborda", "approval-cc:2", "borda-cc", "greedy-approval-cc:3", "ptas-cc", "greedy-borda-cc"]:
        assert str(RuleSpec.parse(text)) == text
    for bad in ["approval-cc", "sntv:1", "plurality", "approval-cc:0", "approval-cc:x"]:
        with pytest.raises(ValueError):
            RuleSpec.parse(bad)


def test_topk_single_candidate():
    e = E("a", ["a"])
    for kind in ("sntv", "bloc", "kborda"):
        assert topk_member_check(e, RuleSpec(kind), 1, 0)[0]


def test_topk_all_tied():
    e = E("abc", ["abc", "bca", "cab"])
    for c in range(3):
        assert topk_member_check(e, RuleSpec("kborda"), 1, c)[0]


def test_topk_two_strictly_above():
    # Borda: a=3, b=3, p=2 (p second in one vote, never first)
    e = E(["a", "b", "p"], [["a", "p", "b"], ["b", "a", "p"], ["b", "a", "p"], ["a", "p", "b"]])
    scores = borda_scores(e)
    assert scores[2] < min(scores[0], scores[1])
    assert not topk_member_check(e, RuleSpec("kborda"), 2, 2)[0]
    assert topk_member_check(e, RuleSpec("kborda"), 3, 2)[0]


def test_cc_committee_score_examples():
    e = E("abc", ["abc", "bca"])
    assert cc_committee_score(e, [0, 1]) == 4
    assert cc_committee_score(e, [0, 1, 2]) == e.total_weight * (e.m - 1)
    assert cc_committee_score(e, [2]) == borda_scores(e)[2]


def _brute_cc_members(e, k, t):
    best, members = -1, set()
    for committee in combinations(range(e.m), k):
        score = cc_committee_score(e, committee, t)
        if score > best:
            best, members = score, set(committee)
        elif score == best:
            members |= set(committee)
    return best, members


@given(elections(m_max=5, n_max=4), st.data())
def test_cc_exact_matches_brute_force(e, data):
    k = data.draw(st.integers(1, e.m))
    t = data.draw(st.one_of(st.none(), st.integers(1, e.m)))
    best, members = _brute_cc_members(e, k, t)
    for p in range(e.m):
        res = cc_exact_member_check(e, k, t, p)
        assert res.best_score == best
        assert res.is_member == (p in members)
        if res.is_member:
            assert p in res.witness and cc_committee_score(e, res.witness, t) == best


def test_cc_k_equals_m_and_k_one():
    e = E("abcd", ["abcd", "dcba", "bdac"])
    for p in range(4):
        assert cc_exact_member_check(e, 4, None, p).is_member
    scores = borda_scores(e)
    for p in range(4):
        assert cc_exact_member_check(e, 1, None, p).is_member == (scores[p] == max(scores))


@given(elections(m_max=6, n_max=5))
def test_greedy_first_pick_is_a_borda_winner(e):
    g = greedy_cc(e, 1)
    scores = borda_scores(e)
    assert scores[g.members[0]] == max(scores)
    assert g.members[0] == scores.index(max(scores))


def test_greedy_k_equals_m():
    e = E("abcd", ["abcd", "bacd", "cdab"])
    g = greedy_cc(e, 4)
    assert g.committee == (0, 1, 2, 3)
    assert g.score == cc_committee_score(e, range(4))


def test_greedy_tie_order():
    e = E("abc", ["abc", "bac"])
    assert greedy_cc(e, 1).members == (0,)
    assert greedy_cc(e, 1, tie_order=[1, 0, 2]).members == (1,)


@given(elections(m_max=6, n_max=5), st.data())
def test_greedy_gains_sum_to_committee_score(e, data):
    k = data.draw(st.integers(1, e.m))
    t = data.draw(st.one_of(st.none(), st.integers(1, e.m)))
    g = greedy_cc(e, k, t)
    assert len(set(g.members)) == k
    assert g.score == cc_committee_score(e, g.members, t)


def test_lambert_w0_known_values():
    assert lambert_w0(0) == 0
    assert lambert_w0(1) == pytest.approx(0.5671432904097838, abs=1e-12)
    assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-12)


def test_ptas_threshold_examples():
    assert ptas_threshold(10, 1) == 6
    assert ptas_threshold(12, 3) == 5
    assert ptas_threshold(1, 1) == 1
    for m in range(1, 30):
        assert 1 <= ptas_threshold(m, m) <= m


def test_single_candidate_member_under_every_rule():
    e = E("a", ["a", "a"])
    for kind in RULE_KINDS:
        rule = RuleSpec(kind, 1) if kind in ("approval-cc", "greedy-approval-cc") else RuleSpec(kind)
        assert is_member(e, rule, 1, 0)


def test_winning_committee_witness_shape():
    e = E("abcde", ["abcde", "edcba", "cdeab"])
    for kind in ("sntv", "bloc", "kborda", "borda-cc", "greedy-borda-cc", "ptas-cc"):
        for p in range(5):
            w = winning_committee(e, RuleSpec(kind), 2, p)
            if w is not None:
                assert len(w) == 2 and p in w


def _expanded(e):
    voters = [Voter(v.order) for v in e.voters for _ in range(v.weight)]
    return Election(e.candidates, tuple(voters))


@settings(max_examples=60)
@given(elections(m_max=5, n_max=3, weight_max=4), st.data())
def test_weight_equals_duplicated_voters(e, data):
    k = data.draw(st.integers(1, e.m))
    t = data.draw(st.integers(1, e.m))
    dup = _expanded(e)
    for kind in RULE_KINDS:
        rule = RuleSpec(kind, t) if kind in ("approval-cc", "greedy-approval-cc") else RuleSpec(kind)
        for p in range(e.m):
            assert is_member(e, rule, k, p) == is_member(dup, rule, k, p)
