import time
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from helpers import instance, instances
from shiftbribery.bribery import (
    SolverReport,
    choose_strategy,
    dispatch_solver,
    shift_menu,
    solve_fpt_as,
    solve_kborda_levels,
    solve_oracle,
    solve_sntv_bloc,
    solve_subset_all_or_nothing,
    solve_subset_approval,
    solve_xp_shifts,
    solve_xp_voters,
)
from shiftbribery.bribery_ilp import build_basic_ilp, solve_ilp_candidates
from shiftbribery.election import AllOrNothingPrice, ShiftAction, TablePrice
from shiftbribery.errors import InstanceTooLarge, NoApplicableSolver, WrongPriceKind, WrongRule
from shiftbribery.rules import RuleSpec, is_member

SLOW = settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def brute_opt(inst, max_units=None):
    """Cheapest successful action, enumerated from the last voter backwards."""
    bounds = [range(b + 1) for b in inst.max_shifts]
    best = None
    for shifts in product(*reversed(bounds)):
        shifts = tuple(reversed(shifts))
        if max_units is not None and sum(shifts) > max_units:
            continue
        cost = inst.cost(ShiftAction(shifts))
        if cost > inst.budget or (best is not None and cost >= best):
            continue
        if is_member(inst.shifted(ShiftAction(shifts)), inst.rule, inst.committee_size, inst.preferred):
            best = cost
    return best


def test_already_member_costs_nothing():
    inst = instance("pab", ["pab", "apb"], "p", 1, "kborda", 5)
    for solver in (solve_oracle, solve_xp_voters, solve_ilp_candidates):
        rep = solver(inst)
        assert rep.feasible and rep.cost == 0
        assert rep.solution.action.shifts == (0, 0)


def test_zero_budget_non_member_is_infeasible():
    inst = instance("abp", ["abp", "bap"], "p", 1, "kborda", 0)
    assert solve_oracle(inst).outcome == "infeasible"


def test_oracle_matches_reverse_enumeration_on_sntv():
    for budget in range(5):
        inst = instance("abp", ["abp", "bpa"], "p", 1, "sntv", budget)
        rep = solve_oracle(inst)
        assert (rep.cost if rep.feasible else None) == brute_opt(inst)


def test_oracle_returns_lexicographically_smallest_optimum():
    # moving p to the top of either vote costs 1; the first voter is preferred
    inst = instance("ap", ["ap", "ap"], "p", 1, "sntv", 3)
    rep = solve_oracle(inst)
    assert rep.cost == 1
    assert rep.solution.action.shifts == (0, 1)


def test_oracle_guard():
    inst = instance("abcdef", ["abcdef"] * 4, "f", 1, "kborda", 20)
    with pytest.raises(InstanceTooLarge):
        solve_oracle(inst, limit=100)


def test_report_record_fields():
    inst = instance("ap", ["ap"], "p", 1, "sntv", 1)
    rec = solve_oracle(inst).to_record()
    assert set(rec) == {"strategy", "outcome", "cost", "shifts", "witness_committee", "optimal", "nodes_explored", "elapsed_ms"}
    assert rec["witness_committee"] == [1]


def test_report_rejects_a_bad_action():
    inst = instance("ap", ["ap"], "p", 1, "sntv", 1)
    with pytest.raises(AssertionError):
        SolverReport.success(inst, "test", ShiftAction((0,)), optimal=True, nodes=1, started=time.perf_counter())


def test_poly_top_ranked_everywhere():
    inst = instance("pab", ["pab", "pba"], "p", 1, "sntv", 0)
    assert solve_sntv_bloc(inst).cost == 0


def test_poly_rejects_other_rules():
    with pytest.raises(WrongRule):
        solve_sntv_bloc(instance("pab", ["pab"], "p", 1, "kborda", 0))


def test_subset_rejects_wrong_inputs():
    with pytest.raises(WrongPriceKind):
        solve_subset_all_or_nothing(instance("abp", ["abp"], "p", 1, "kborda", 1))
    aon = [AllOrNothingPrice(1)]
    with pytest.raises(WrongRule):
        solve_subset_all_or_nothing(instance("abp", ["abp"], "p", 1, "greedy-borda-cc", 1, aon))
    with pytest.raises(WrongRule):
        solve_subset_approval(instance("abp", ["abp"], "p", 1, "kborda", 1))
    with pytest.raises(WrongRule):
        solve_fpt_as(instance("abp", ["abp"], "p", 1, "greedy-borda-cc", 1), Fraction(1))


def test_subset_all_prices_above_budget():
    prices = [AllOrNothingPrice(4), AllOrNothingPrice(5)]
    inst = instance("abp", ["abp", "bap"], "p", 1, "kborda", 3, prices)
    rep = solve_subset_all_or_nothing(inst)
    assert rep.outcome == "infeasible"


def test_subset_approval_moves_p_only_to_position_t():
    inst = instance("abcp", ["abcp", "bcap", "cabp"], "p", 1, "approval-cc:2", 9)
    rep = solve_subset_approval(inst)
    assert rep.feasible
    for voter, s in zip(inst.election.voters, rep.solution.action.shifts):
        assert s == 0 or voter.position(inst.preferred) - s == 2


def test_fpt_as_menu_with_huge_epsilon():
    table = [0, 1, 2, 3, 4]
    assert shift_menu(table, Fraction(10**6)) == [0, 1, 4]
    # a free shift dominates not shifting at all
    assert shift_menu([0, 0, 5], Fraction(1)) == [1, 2]


def test_xp_voters_single_voter_node_bound():
    inst = instance("abcdp", ["abcdp"], "p", 1, "kborda", 4)
    rep = solve_xp_voters(inst)
    assert rep.nodes_explored <= inst.election.m
    assert rep.cost == 4


def test_xp_shifts_zero():
    member = instance("pab", ["pab"], "p", 1, "kborda", 3)
    other = instance("abp", ["abp"], "p", 1, "kborda", 3)
    assert solve_xp_shifts(member, 0).feasible
    assert not solve_xp_shifts(other, 0).feasible


def test_basic_ilp_shapes():
    single = instance("abp", ["abp"], "p", 1, "kborda", 10)
    basic = build_basic_ilp(single)
    assert len(basic.columns) == 3
    assert sum(1 for c in basic.model.constraints if c.sense == "=") == 1
    zero = build_basic_ilp(instance("abp", ["abp", "bap", "abp"], "p", 1, "kborda", 0))
    assert all(s == 0 for _, s in zero.columns)
    two = build_basic_ilp(instance("abc", ["abc", "cab"], "c", 1, "kborda", 10))
    assert len(two.columns) <= 6


def test_ilp_kborda_every_budget():
    orders = ["abcp", "bcpa", "cpab"]
    for budget in range(7):
        inst = instance("abcp", orders, "p", 1, "kborda", budget)
        assert solve_ilp_candidates(inst).feasible == (brute_opt(inst) is not None)


def test_dispatch_routes():
    sntv = instance("abp", ["abp", "bap"], "p", 1, "sntv", 2)
    assert dispatch_solver(sntv).strategy == "poly"
    greedy = instance("abp", ["abp", "bap"], "p", 1, "greedy-borda-cc", 2)
    assert dispatch_solver(greedy).strategy == "xp_voters"
    approval = instance("abp", ["abp", "bap"], "p", 1, "approval-cc:1", 2)
    assert choose_strategy(approval) == "subset"


def test_dispatch_gives_up_on_oversized_input():
    m = 9
    names = [f"c{i}" for i in range(m - 1)] + ["p"]
    inst = instance(names, [names] * 12, "p", 1, "greedy-borda-cc", 200)
    with pytest.raises(NoApplicableSolver):
        dispatch_solver(inst)
    with pytest.raises(NoApplicableSolver):
        dispatch_solver(instance("abp", ["abp"], "p", 1, "kborda", 1), "poly")


def test_levels_on_a_small_kborda_instance():
    inst = instance("abcp", ["abcp", "bcpa", "cpab"], "p", 2, "kborda", 2)
    assert solve_kborda_levels(inst).feasible == (brute_opt(inst) is not None)


def _agrees_with_brute(rep, inst):
    opt = brute_opt(inst)
    assert rep.feasible == (opt is not None)
    if rep.feasible and rep.solution.optimal:
        assert rep.cost == opt


@SLOW
@given(instances())
def test_oracle_and_xp_voters_match_brute_force(inst):
    _agrees_with_brute(solve_oracle(inst), inst)
    _agrees_with_brute(solve_xp_voters(inst), inst)


@SLOW
@given(instances(rule=RuleSpec("sntv")) | instances(rule=RuleSpec("bloc")))
def test_poly_matches_brute_force(inst):
    _agrees_with_brute(solve_sntv_bloc(inst), inst)


@SLOW
@given(instances(), st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1)]))
def test_fpt_as_bound(inst, eps):
    assume(inst.rule.candidate_monotone)
    opt = brute_opt(inst)
    rep = solve_fpt_as(inst, eps)
    if opt is not None:
        assert rep.feasible and rep.cost <= (1 + eps) * opt


@SLOW
@given(instances(), st.integers(0, 4))
def test_xp_shifts_matches_filtered_brute_force(inst, s_max):
    rep = solve_xp_shifts(inst, s_max)
    opt = brute_opt(inst, max_units=s_max)
    assert rep.feasible == (opt is not None)
    if rep.feasible:
        assert rep.solution.action.unit_shifts <= s_max


@SLOW
@given(instances(m_max=4, n_max=3))
def test_ilp_matches_brute_force(inst):
    assume(inst.rule.kind not in ("sntv", "bloc"))
    _agrees_with_brute(solve_ilp_candidates(inst), inst)


@SLOW
@given(instances(), st.integers(0, 6))
def test_budget_monotonicity(inst, extra):
    richer = inst.with_budget(inst.budget + extra)
    solvers = [solve_oracle, solve_xp_voters]
    if inst.rule.kind in ("sntv", "bloc"):
        solvers.append(solve_sntv_bloc)
    if inst.rule.approval_based:
        solvers.append(solve_subset_approval)
    for solver in solvers:
        if solver(inst).feasible:
            assert solver(richer).feasible


def test_aon_subset_matches_brute_force_on_fixed_cases():
    for budget in range(8):
        prices = [AllOrNothingPrice(3), AllOrNothingPrice(2), AllOrNothingPrice(4)]
        inst = instance("abcp", ["abcp", "bacp", "cpab"], "p", 1, "kborda", budget, prices)
        rep = solve_subset_all_or_nothing(inst)
        assert (rep.cost if rep.feasible else None) == brute_opt(inst)


def test_weighted_voter_charged_once():
    inst = instance("ap", ["ap", "pa"], "p", 1, "sntv", 1, weights=[3, 1])
    rep = solve_oracle(inst)
    assert rep.feasible and rep.cost == 1
    table = instance("ap", ["ap"], "p", 1, "sntv", 4, [TablePrice((0, 4))], weights=[5])
    assert solve_oracle(table).cost == 4
