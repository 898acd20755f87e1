"""Shift Bribery through integer feasibility models, one model per committee guess.

Voters are grouped into types: identical order, weight, and price values.  For a
type ``i`` and a shift ``s`` the variable ``S[i,s]`` counts voters of that type
whose vote is shifted by ``s``.  Every score used by the rules is a linear
function of these counts, so each rule contributes linear constraints on top of
the assignment and budget rows.

Greedy constraints are written tie-aware: a competitor with a smaller index than
the guessed pick must lose by at least one point.  Solutions therefore always
re-verify against the real rule.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .bribery import SolverReport
from .election import BriberyInstance, ShiftAction, shift_order
from .errors import InstanceTooLarge, WrongRule
from .ilp import IlpModel, lp_feasible_point, solve_feasibility
from .rules import (
    APPROVAL_CC,
    BORDA_CC,
    GREEDY_APPROVAL_CC,
    GREEDY_BORDA_CC,
    KBORDA,
    PTAS_CC,
    winning_committee,
)

ILP_RULES = (KBORDA, APPROVAL_CC, BORDA_CC, GREEDY_APPROVAL_CC, PTAS_CC, GREEDY_BORDA_CC)
ILP_MAX_CANDIDATES = 5
ILP_NODE_LIMIT = 20_000


@dataclass(frozen=True)
class VoterType:
    order: tuple[int, ...]
    weight: int
    costs: tuple[int, ...]  # price of each reachable shift 0..pos(p)-1
    members: tuple[int, ...]  # voter indices, ascending

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass
class BasicIlp:
    model: IlpModel
    types: list[VoterType]
    columns: dict[tuple[int, int], str]  # (type, shift) -> variable name
    bribed: dict[tuple[int, int], tuple[int, ...]]  # (type, shift) -> shifted order

    def linear(self, per_vote) -> dict[str, int]:
        """Coefficients of ``sum over voters of weight * per_vote(shifted order)``."""
        coeffs: dict[str, int] = {}
        for (i, s), name in self.columns.items():
            a = self.types[i].weight * per_vote(self.bribed[(i, s)])
            if a:
                coeffs[name] = coeffs.get(name, 0) + a
        return coeffs


def voter_types(instance: BriberyInstance) -> list[VoterType]:
    p = instance.preferred
    groups: dict[tuple, list[int]] = {}
    for v, (voter, pf) in enumerate(zip(instance.election.voters, instance.prices)):
        costs = tuple(pf(s) for s in range(voter.position(p)))
        groups.setdefault((voter.order, voter.weight, costs), []).append(v)
    return [VoterType(o, w, c, tuple(members)) for (o, w, c), members in groups.items()]


def build_basic_ilp(instance: BriberyInstance) -> BasicIlp:
    """Assignment and budget rows over the orders reachable by shifting ``p``."""
    p = instance.preferred
    model = IlpModel()
    types = voter_types(instance)
    columns: dict[tuple[int, int], str] = {}
    bribed: dict[tuple[int, int], tuple[int, ...]] = {}
    budget_row: dict[str, int] = {}
    for i, vt in enumerate(types):
        row = {}
        for s, cost in enumerate(vt.costs):
            if cost > instance.budget:
                break  # nondecreasing prices: farther shifts are unaffordable too
            name = model.add_variable(f"S[{i},{s}]", vt.count)
            columns[(i, s)] = name
            bribed[(i, s)] = shift_order(vt.order, p, s)
            row[name] = 1
            budget_row[name] = cost
        model.add_constraint(row, "=", vt.count)
    model.add_constraint(budget_row, "<=", instance.budget)
    return BasicIlp(model, types, columns, bribed)


# -- per-vote score functions -------------------------------------------------


def _rank_scores(order, t):
    m = len(order)
    scores = [0] * m
    for i, c in enumerate(order):
        scores[c] = (m - 1 - i) if t is None else int(i < t)
    return scores


def _score_of(basic: BasicIlp, c: int, t):
    return basic.linear(lambda order: _rank_scores(order, t)[c])


def _cc_score_of(basic: BasicIlp, committee, t):
    return basic.linear(lambda order: max(_rank_scores(order, t)[c] for c in committee))


def _difference(a: dict, b: dict) -> dict:
    out = dict(a)
    for n, x in b.items():
        out[n] = out.get(n, 0) - x
    return out


# -- committee guesses ---------------------------------------------------------


def _kborda_models(basic, instance):
    p, k, m = instance.preferred, instance.committee_size, instance.election.m
    others = [c for c in range(m) if c != p]
    score_p = _score_of(basic, p, None)
    scores = {c: _score_of(basic, c, None) for c in others}
    for rest in combinations(others, k - 1):
        model = basic.model.copy()
        for c in others:
            if c not in rest:
                model.add_constraint(_difference(score_p, scores[c]), ">=", 0)
        yield model


def _cc_models(basic, instance, t):
    p, k, m = instance.preferred, instance.committee_size, instance.election.m
    committees = list(combinations(range(m), k))
    phi = {w: _cc_score_of(basic, w, t) for w in committees}
    for w in committees:
        if p not in w:
            continue
        model = basic.model.copy()
        for other in committees:
            if other != w:
                model.add_constraint(_difference(phi[w], phi[other]), ">=", 0)
        yield model


def _greedy_round_rows(basic, prefix, pick, candidates, t):
    """Rows forcing ``pick`` to win the round after ``prefix`` under index tie-breaking."""
    base = _cc_score_of(basic, (*prefix, pick), t)
    rows = []
    for c in candidates:
        if c == pick or c in prefix:
            continue
        rival = _cc_score_of(basic, (*prefix, c), t)
        rows.append((_difference(base, rival), ">=", 1 if c < pick else 0))
    return rows


def _greedy_models(basic, instance, t, stats):
    """Selection prefixes ending in ``p``; a prefix whose relaxation is empty is cut."""
    p, k, m = instance.preferred, instance.committee_size, instance.election.m
    candidates = range(m)
    bounds_lo = {n: 0 for n in basic.model.variables}
    bounds_hi = dict(basic.model.upper)

    def extend(model, prefix):
        for pick in candidates:
            if pick in prefix:
                continue
            child = model.copy()
            for row in _greedy_round_rows(basic, prefix, pick, candidates, t):
                child.add_constraint(*row)
            stats["relaxations"] += 1
            if lp_feasible_point(child, bounds_lo, bounds_hi) is None:
                continue
            if pick == p:
                yield child
            elif len(prefix) + 1 < k:
                yield from extend(child, (*prefix, pick))

    yield from extend(basic.model.copy(), ())


def _actions_from(basic: BasicIlp, values: dict[str, int], n: int) -> tuple[int, ...]:
    shifts = [0] * n
    for i, vt in enumerate(basic.types):
        queue = list(vt.members)
        for s in range(len(vt.costs)):
            name = basic.columns.get((i, s))
            for _ in range(values.get(name, 0) if name else 0):
                shifts[queue.pop(0)] = s
    return tuple(shifts)


def solve_ilp_candidates(
    instance: BriberyInstance, max_candidates: int = ILP_MAX_CANDIDATES, node_limit: int = ILP_NODE_LIMIT
) -> SolverReport:
    """Decide feasibility by solving one integer model per committee (or selection) guess."""
    started = time.perf_counter()
    rule = instance.rule
    if rule.kind not in ILP_RULES:
        raise WrongRule(f"the ILP solver does not handle {rule}")
    e = instance.election
    if e.m > max_candidates:
        raise InstanceTooLarge(f"{e.m} candidates exceed the ILP bound {max_candidates}")
    zero = ShiftAction.zero(e.n)
    if winning_committee(e, rule, instance.committee_size, instance.preferred) is not None:
        return SolverReport.success(instance, "ilp", zero, optimal=False, nodes=0, started=started)

    basic = build_basic_ilp(instance)
    t = rule.approval_threshold(e.m, instance.committee_size)
    stats = {"relaxations": 0}
    if rule.kind == KBORDA:
        models = _kborda_models(basic, instance)
    elif rule.is_exact_cc:
        models = _cc_models(basic, instance, t)
    else:
        models = _greedy_models(basic, instance, t, stats)

    nodes = 0
    undecided = False
    for model in models:
        result = solve_feasibility(model, node_limit)
        nodes += result.nodes
        if result.status == "limit":
            undecided = True
        elif result.status == "feasible":
            shifts = _actions_from(basic, result.solution, e.n)
            return SolverReport.success(
                instance, "ilp", shifts, optimal=False, nodes=nodes + stats["relaxations"], started=started
            )
    nodes += stats["relaxations"]
    if undecided:
        return SolverReport.undecided("ilp", nodes=nodes, started=started, reason="node limit reached")
    return SolverReport.failure("ilp", nodes=nodes, started=started)


def ilp_variable_count(instance: BriberyInstance) -> int:
    return len(build_basic_ilp(instance).model.variables)


__all__ = [
    "BasicIlp",
    "ILP_MAX_CANDIDATES",
    "ILP_RULES",
    "VoterType",
    "build_basic_ilp",
    "ilp_variable_count",
    "solve_ilp_candidates",
    "voter_types",
]

