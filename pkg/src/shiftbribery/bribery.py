"""Shift Bribery solvers.

Every solver takes a :class:`BriberyInstance` and returns a :class:`SolverReport`.
A feasible report is re-verified when it is built: the action must respect the
per-voter bounds, fit the budget, and make ``p`` a member of a winning committee
of the shifted election.

Ties among minimum-cost actions are broken toward the lexicographically
smallest shift vector wherever a solver claims optimality.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .election import (
    AllOrNothingPrice,
    BriberyInstance,
    BriberySolution,
    ShiftAction,
    UnitPrice,
)
from .errors import InstanceTooLarge, NoApplicableSolver, WrongPriceKind, WrongRule
from .rules import BLOC, KBORDA, SNTV, borda_scores, t_approval_scores, winning_committee

ORACLE_LIMIT = 10**7
XP_LIMIT = 10**7
SUBSET_MAX_VOTERS = 20
FPTAS_LIMIT = 10**7
LEVELS_NODE_LIMIT = 5_000_000
AUTO_XP_WORK = 10**7

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
INCONCLUSIVE = "inconclusive"


class VerificationError(AssertionError):
    """A solver produced an action that does not re-verify."""


@dataclass(frozen=True)
class SolverReport:
    strategy: str
    outcome: str
    solution: Optional[BriberySolution]
    nodes_explored: int
    elapsed: float
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.outcome == FEASIBLE

    @property
    def cost(self) -> Optional[int]:
        return self.solution.cost if self.solution else None

    @classmethod
    def success(
        cls, instance, strategy, action, *, optimal, nodes, started, budget_cap=None
    ) -> "SolverReport":
        """Build a feasible report after re-verifying ``action`` against ``instance``."""
        action = action if isinstance(action, ShiftAction) else ShiftAction(tuple(action))
        cap = instance.budget if budget_cap is None else budget_cap
        for s, bound in zip(action.shifts, instance.max_shifts):
            if s > bound:
                raise VerificationError(f"{strategy}: shift {s} exceeds bound {bound}")
        cost = instance.cost(action)
        if cost > cap:
            raise VerificationError(f"{strategy}: cost {cost} exceeds budget {cap}")
        witness = winning_committee(
            instance.shifted(action), instance.rule, instance.committee_size, instance.preferred
        )
        if witness is None:
            raise VerificationError(f"{strategy}: preferred candidate is not a member after the shift")
        solution = BriberySolution(action, cost, witness, optimal)
        return cls(strategy, FEASIBLE, solution, nodes, time.perf_counter() - started)

    @classmethod
    def failure(cls, strategy, *, nodes, started, reason="") -> "SolverReport":
        return cls(strategy, INFEASIBLE, None, nodes, time.perf_counter() - started, reason)

    @classmethod
    def undecided(cls, strategy, *, nodes, started, reason) -> "SolverReport":
        return cls(strategy, INCONCLUSIVE, None, nodes, time.perf_counter() - started, reason)

    def to_record(self, include_timing: bool = True) -> dict:
        sol = self.solution
        record = {
            "strategy": self.strategy,
            "outcome": self.outcome,
            "cost": sol.cost if sol else None,
            "shifts": list(sol.action.shifts) if sol else None,
            "witness_committee": list(sol.witness) if sol else None,
            "optimal": sol.optimal if sol else False,
            "nodes_explored": self.nodes_explored,
        }
        if include_timing:
            record["elapsed_ms"] = round(self.elapsed * 1000, 3)
        if self.reason:
            record["reason"] = self.reason
        return record


def _member(instance: BriberyInstance, shifts) -> bool:
    shifted = instance.shifted(ShiftAction(tuple(shifts)))
    return winning_committee(shifted, instance.rule, instance.committee_size, instance.preferred) is not None


def _cost_tables(instance: BriberyInstance) -> list[list[int]]:
    return [[pf(s) for s in range(bound + 1)] for pf, bound in zip(instance.prices, instance.max_shifts)]


def count_actions_within_budget(cost_tables, budget: int, cap: Optional[int] = None) -> int:
    """Number of shift vectors of total cost at most ``budget``.

    Counting stops early once it exceeds ``cap``; partial counts are lower
    bounds because every prefix extends by zero shifts at no cost.
    """
    total = math.prod(len(t) for t in cost_tables)
    if sum(t[-1] for t in cost_tables) <= budget:
        return total
    counts = {0: 1}
    for table in cost_tables:
        nxt: dict[int, int] = {}
        for c, ways in counts.items():
            for price in table:
                if c + price <= budget:
                    nxt[c + price] = nxt.get(c + price, 0) + ways
        counts = nxt
        if cap is not None and sum(counts.values()) > cap:
            break
    return sum(counts.values())


# -- exhaustive oracle --------------------------------------------------------


def solve_oracle(instance: BriberyInstance, limit: int = ORACLE_LIMIT) -> SolverReport:
    """Enumerate every valid shift action; ground truth for all other solvers."""
    started = time.perf_counter()
    bounds = instance.max_shifts
    space = math.prod(b + 1 for b in bounds)
    if space > limit:
        raise InstanceTooLarge(f"oracle search space {space} exceeds {limit}")
    tables = _cost_tables(instance)
    budget = instance.budget
    best = None
    best_cost = budget + 1
    nodes = 0
    for shifts in product(*(range(b + 1) for b in bounds)):
        nodes += 1
        cost = sum(t[s] for t, s in zip(tables, shifts))
        if cost < best_cost and _member(instance, shifts):
            best, best_cost = shifts, cost
    if best is None:
        return SolverReport.failure("oracle", nodes=nodes, started=started)
    return SolverReport.success(instance, "oracle", best, optimal=True, nodes=nodes, started=started)


# -- XP enumerators -----------------------------------------------------------


def solve_xp_voters(instance: BriberyInstance, limit: int = XP_LIMIT) -> SolverReport:
    """Depth-first search over per-voter shift amounts with budget pruning."""
    started = time.perf_counter()
    tables = _cost_tables(instance)
    n = len(tables)
    size = count_actions_within_budget(tables, instance.budget, cap=limit)
    if size > limit:
        raise InstanceTooLarge(f"{size} budget-feasible actions exceed {limit}")
    best: list = [None, instance.budget + 1]
    nodes = 0
    shifts = [0] * n
    # cheapest completion from voter i onward is 0 since prices start at 0

    def visit(i, cost):
        nonlocal nodes
        if i == n:
            nodes += 1
            if _member(instance, shifts):
                best[0], best[1] = tuple(shifts), cost
            return
        for s, price in enumerate(tables[i]):
            c = cost + price
            if c >= best[1]:
                break  # prices are nondecreasing in s
            shifts[i] = s
            visit(i + 1, c)
        shifts[i] = 0

    visit(0, 0)
    if best[0] is None:
        return SolverReport.failure("xp_voters", nodes=nodes, started=started)
    return SolverReport.success(instance, "xp_voters", best[0], optimal=True, nodes=nodes, started=started)


def count_bounded_compositions(bounds, total: int) -> int:
    """Number of vectors ``0 <= s_v <= bounds[v]`` with ``sum(s) <= total``."""
    ways = [1] + [0] * total
    for b in bounds:
        nxt = [0] * (total + 1)
        for used, w in enumerate(ways):
            if w:
                for s in range(min(b, total - used) + 1):
                    nxt[used + s] += w
        ways = nxt
    return sum(ways)


def solve_xp_shifts(instance: BriberyInstance, s_max: int, limit: int = XP_LIMIT) -> SolverReport:
    """Try every distribution of at most ``s_max`` unit shifts among the voters.

    The result is optimal (flag set) only when ``s_max`` covers every valid action.
    """
    started = time.perf_counter()
    if s_max < 0:
        raise ValueError("s_max must be nonnegative")
    bounds = instance.max_shifts
    size = count_bounded_compositions(bounds, min(s_max, sum(bounds)))
    if size > limit:
        raise InstanceTooLarge(f"{size} shift distributions exceed {limit}")
    tables = _cost_tables(instance)
    n = len(bounds)
    best: list = [None, instance.budget + 1]
    nodes = 0
    shifts = [0] * n

    def visit(i, left, cost):
        nonlocal nodes
        if i == n:
            nodes += 1
            if _member(instance, shifts):
                best[0], best[1] = tuple(shifts), cost
            return
        for s in range(min(bounds[i], left) + 1):
            c = cost + tables[i][s]
            if c >= best[1]:
                break
            shifts[i] = s
            visit(i + 1, left - s, c)
        shifts[i] = 0

    visit(0, s_max, 0)
    exhaustive = s_max >= sum(bounds)
    if best[0] is None:
        return SolverReport.failure(
            "xp_shifts", nodes=nodes, started=started, reason=f"no successful action with at most {s_max} unit shifts"
        )
    return SolverReport.success(instance, "xp_shifts", best[0], optimal=exhaustive, nodes=nodes, started=started)


# -- subset solvers -----------------------------------------------------------


def _subset_search(instance, strategy, candidate_shift, started):
    """Try every subset of the voters that can be bribed at all.

    ``candidate_shift[v]`` is the shift applied when voter ``v`` is chosen
    (``0`` means the voter is never worth choosing).
    """
    tables = _cost_tables(instance)
    budget = instance.budget
    options = [
        v for v, s in enumerate(candidate_shift) if s > 0 and tables[v][s] <= budget
    ]
    if len(options) > SUBSET_MAX_VOTERS:
        raise InstanceTooLarge(f"{len(options)} bribable voters exceed the subset limit {SUBSET_MAX_VOTERS}")
    n = instance.election.n
    best, best_cost = None, budget + 1
    nodes = 0
    for mask in range(1 << len(options)):
        cost = 0
        shifts = [0] * n
        for bit, v in enumerate(options):
            if mask >> bit & 1:
                shifts[v] = candidate_shift[v]
                cost += tables[v][candidate_shift[v]]
        if cost > budget or cost > best_cost:
            continue
        nodes += 1
        shifts = tuple(shifts)
        if cost == best_cost and shifts >= best:
            continue
        if _member(instance, shifts):
            best, best_cost = shifts, cost
    if best is None:
        return SolverReport.failure(strategy, nodes=nodes, started=started)
    return SolverReport.success(instance, strategy, best, optimal=True, nodes=nodes, started=started)


def solve_subset_all_or_nothing(instance: BriberyInstance) -> SolverReport:
    """All-or-nothing prices: a bribed vote may as well put ``p`` on top."""
    started = time.perf_counter()
    if not all(isinstance(pf, AllOrNothingPrice) for pf in instance.prices):
        raise WrongPriceKind("subset solver needs all-or-nothing prices")
    if not instance.rule.candidate_monotone:
        raise WrongRule(f"{instance.rule} is not candidate-monotone")
    return _subset_search(instance, "subset", list(instance.max_shifts), started)


def solve_subset_approval(instance: BriberyInstance) -> SolverReport:
    """Approval-based rules: shift ``p`` exactly onto the approval boundary or not at all."""
    started = time.perf_counter()
    rule = instance.rule
    if not rule.approval_based:
        raise WrongRule(f"{rule} is not approval-based")
    e = instance.election
    t = rule.approval_threshold(e.m, instance.committee_size)
    p = instance.preferred
    shifts = [max(0, v.position(p) - t) for v in e.voters]
    return _subset_search(instance, "subset", shifts, started)


# -- FPT approximation scheme -------------------------------------------------


def _price_levels(max_price: int, epsilon: Fraction) -> list[int]:
    """``0`` and ``floor((1+eps)^j)`` for ``j = 0, 1, ...`` up to ``max_price``."""
    levels = {0}
    base = 1 + epsilon
    power = Fraction(1)
    while True:
        levels.add(math.floor(power))
        if power >= max_price:
            break
        power *= base
    return sorted(levels)


def shift_menu(table: list[int], epsilon: Fraction) -> list[int]:
    """Candidate shifts for one voter: for every price level, the farthest shift within it."""
    menu = {len(table) - 1}
    for level in _price_levels(table[-1], epsilon):
        s = max(i for i, price in enumerate(table) if price <= level) if table[0] <= level else 0
        menu.add(s)
    return sorted(menu)


def solve_fpt_as(instance: BriberyInstance, epsilon, limit: int = FPTAS_LIMIT) -> SolverReport:
    """Cheapest successful action among rounded-up shift menus.

    Any optimal action rounds up voter by voter to a menu entry costing at most
    ``(1+eps)`` times as much; candidate monotonicity keeps it successful.  The
    budget is relaxed accordingly to ``floor((1+eps) * B)``.
    """
    started = time.perf_counter()
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not instance.rule.candidate_monotone:
        raise WrongRule(f"{instance.rule} is not candidate-monotone")
    tables = _cost_tables(instance)
    menus = [shift_menu(t, epsilon) for t in tables]
    space = math.prod(len(menu) for menu in menus)
    if space > limit:
        raise InstanceTooLarge(f"FPT-AS menu product {space} exceeds {limit}")
    cap = math.floor((1 + epsilon) * instance.budget)
    best, best_cost = None, cap + 1
    nodes = 0
    for shifts in product(*menus):
        cost = sum(t[s] for t, s in zip(tables, shifts))
        if cost >= best_cost:
            continue
        nodes += 1
        if _member(instance, shifts):
            best, best_cost = shifts, cost
    if best is None:
        return SolverReport.failure("fptas", nodes=nodes, started=started)
    return SolverReport.success(
        instance, "fptas", best, optimal=False, nodes=nodes, started=started, budget_cap=cap
    )


# -- polynomial algorithm for SNTV and Bloc -----------------------------------


def _min_cost_by_weight(items):
    """``table[x] = (cost, chosen)`` for the cheapest subset of ``items`` of total weight x."""
    total = sum(w for w, _, _ in items)
    table: list = [None] * (total + 1)
    table[0] = (0, ())
    for w, c, v in items:
        for x in range(total, w - 1, -1):
            prev = table[x - w]
            if prev is not None:
                cand = (prev[0] + c, prev[1] + (v,))
                if table[x] is None or cand[0] < table[x][0]:
                    table[x] = cand
    return table


def solve_sntv_bloc(instance: BriberyInstance) -> SolverReport:
    """Guess the final score of ``p``, then pick the cheapest vote set reaching it.

    Under t-approval a bribed vote raises ``p`` by the voter's weight and lowers
    exactly one candidate, the one on position ``t``; no shift farther than the
    boundary changes any score.  Votes are therefore grouped by the candidate
    they would push out.  For each guessed gain ``g``, a knapsack over the groups
    finds the cheapest set of votes whose total weight reaches ``g`` while at most
    ``k-1`` candidates stay above ``score(p) + g``.
    """
    started = time.perf_counter()
    rule = instance.rule
    if rule.kind not in (SNTV, BLOC):
        raise WrongRule(f"polynomial solver handles SNTV and Bloc, not {rule}")
    e = instance.election
    k = instance.committee_size
    p = instance.preferred
    t = rule.approval_threshold(e.m, k)
    scores = t_approval_scores(e, t)
    budget = instance.budget

    groups: dict[int, list] = {}
    for v, (voter, pf) in enumerate(zip(e.voters, instance.prices)):
        pos = voter.position(p)
        if pos <= t:
            continue
        cost = pf(pos - t)
        if cost <= budget:
            groups.setdefault(voter.order[t - 1], []).append((voter.weight, cost, v))
    group_keys = sorted(groups)
    tables = {c: _min_cost_by_weight(groups[c]) for c in group_keys}
    max_gain = sum(w for c in group_keys for w, _, _ in groups[c])

    nodes = 0
    best = None  # (cost, voters)
    for gain in range(max_gain + 1):
        target = scores[p] + gain
        above = [c for c in range(e.m) if c != p and scores[c] > target]
        need = max(0, len(above) - (k - 1))
        above_set = set(above)
        # dp[(weight capped at gain, reduced capped at need)] = (cost, voters)
        dp = {(0, 0): (0, ())}
        for c in group_keys:
            table = tables[c]
            nxt: dict = {}
            for (wsum, red), (cost, chosen) in dp.items():
                for x, entry in enumerate(table):
                    if entry is None:
                        continue
                    nodes += 1
                    ncost = cost + entry[0]
                    if ncost > budget:
                        continue
                    reduced = c in above_set and scores[c] - x <= target
                    key = (min(gain, wsum + x), min(need, red + int(reduced)))
                    if key not in nxt or ncost < nxt[key][0]:
                        nxt[key] = (ncost, chosen + entry[1])
            dp = nxt
        hit = dp.get((gain, need))
        if hit is not None and (best is None or hit[0] < best[0]):
            best = hit
    if best is None:
        return SolverReport.failure("poly", nodes=nodes, started=started)
    shifts = [0] * e.n
    for v in best[1]:
        shifts[v] = e.voters[v].position(p) - t
    return SolverReport.success(instance, "poly", shifts, optimal=True, nodes=nodes, started=started)


# -- k-Borda with unit prices: threat levels -----------------------------------


def solve_kborda_levels(instance: BriberyInstance, node_limit: int = LEVELS_NODE_LIMIT) -> SolverReport:
    """Decision procedure for k-Borda with unit prices and unit weights.

    With unit prices every unit shift buys ``p`` exactly one point, and extra
    shifts never hurt (candidate monotonicity).  So the whole budget is spent
    and ``p`` ends at ``P = score(p) + min(B, capacity)``.  Only candidates
    scoring above ``P`` ("threats") can still beat ``p``; what matters in each
    vote is how many threats ``p`` passes.  The search enumerates, per vote,
    the minimal shifts passing 0, 1, 2, ... threats, and fills leftover budget
    afterwards.  It decides feasibility; the reported cost is the cost of the
    filled action, not necessarily the optimum.
    """
    started = time.perf_counter()
    rule = instance.rule
    if rule.kind != KBORDA:
        raise WrongRule(f"threat-level solver handles k-Borda, not {rule}")
    if not all(isinstance(pf, UnitPrice) for pf in instance.prices):
        raise WrongPriceKind("threat-level solver needs unit prices")
    e = instance.election
    if any(v.weight != 1 for v in e.voters):
        raise WrongRule("threat-level solver needs unit voter weights")
    p = instance.preferred
    k = instance.committee_size
    budget = instance.budget
    bounds = instance.max_shifts
    scores = borda_scores(e)
    final_p = scores[p] + min(budget, sum(bounds))
    threats = [c for c in range(e.m) if c != p and scores[c] > final_p]
    need = {c: scores[c] - final_p for c in threats}
    threat_set = set(threats)

    # per voter: list of (shift, threats passed by that shift) at threat boundaries
    levels = []
    for v, voter in enumerate(e.voters):
        pos = voter.position(p)
        steps = []
        for d in range(1, min(budget, pos - 1) + 1):
            c = voter.order[pos - 1 - d]
            if c in threat_set:
                steps.append((d, c))
        if steps:
            levels.append((v, steps))

    passes = {c: 0 for c in threats}
    shifts = [0] * e.n
    nodes = 0
    found = None
    limit_hit = False

    def potential(idx, left):
        """Threats that cannot reach their requirement from voters ``idx..``."""
        reach = dict(passes)
        for _, steps in levels[idx:]:
            for d, c in steps:
                if d > left:
                    break
                reach[c] += 1
        return sum(1 for c in threats if reach[c] < need[c])

    def visit(idx, left):
        nonlocal nodes, found, limit_hit
        if found is not None or limit_hit:
            return
        nodes += 1
        if nodes > node_limit:
            limit_hit = True
            return
        if potential(idx, left) > k - 1:
            return
        if idx == len(levels):
            found = tuple(shifts)
            return
        v, steps = levels[idx]
        visit(idx + 1, left)
        passed = []
        for d, c in steps:
            if d > left:
                break
            passes[c] += 1
            passed.append(c)
            shifts[v] = d
            visit(idx + 1, left - d)
            if found is not None or limit_hit:
                break
        for c in passed:
            passes[c] -= 1
        if found is None:
            shifts[v] = 0

    visit(0, budget)
    if limit_hit:
        return SolverReport.undecided("levels", nodes=nodes, started=started, reason="node limit reached")
    if found is None:
        return SolverReport.failure("levels", nodes=nodes, started=started)
    action = list(found)
    left = budget - sum(action)
    for v, b in enumerate(bounds):
        extra = min(left, b - action[v])
        action[v] += extra
        left -= extra
    return SolverReport.success(instance, "levels", action, optimal=False, nodes=nodes, started=started)


# -- dispatch ----------------------------------------------------------------

STRATEGIES = ("auto", "oracle", "poly", "subset", "fptas", "xp_voters", "xp_shifts", "ilp", "levels")


def _levels_applicable(instance) -> bool:
    return (
        instance.rule.kind == KBORDA
        and all(isinstance(pf, UnitPrice) for pf in instance.prices)
        and all(v.weight == 1 for v in instance.election.voters)
    )


def choose_strategy(instance: BriberyInstance) -> str:
    """The strategy ``auto`` resolves to."""
    from .bribery_ilp import ILP_MAX_CANDIDATES, ILP_RULES

    rule = instance.rule
    if rule.kind in (SNTV, BLOC):
        return "poly"
    if rule.approval_based:
        return "subset"
    if rule.candidate_monotone and all(isinstance(pf, AllOrNothingPrice) for pf in instance.prices):
        return "subset"
    tables = _cost_tables(instance)
    e = instance.election
    # each enumerated action costs a membership check of roughly m*n work
    work_cap = max(1, AUTO_XP_WORK // (e.m * e.n))
    if count_actions_within_budget(tables, instance.budget, cap=work_cap) <= min(XP_LIMIT, work_cap):
        return "xp_voters"
    if _levels_applicable(instance):
        return "levels"
    if rule.kind in ILP_RULES and instance.election.m <= ILP_MAX_CANDIDATES:
        return "ilp"
    raise NoApplicableSolver("every applicable solver's size guard is exceeded")


def dispatch_solver(
    instance: BriberyInstance, strategy: str = "auto", epsilon=None, s_max: Optional[int] = None
) -> SolverReport:
    from .bribery_ilp import solve_ilp_candidates

    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "auto":
        strategy = choose_strategy(instance)
    try:
        if strategy == "oracle":
            return solve_oracle(instance)
        if strategy == "poly":
            return solve_sntv_bloc(instance)
        if strategy == "subset":
            if instance.rule.approval_based:
                return solve_subset_approval(instance)
            return solve_subset_all_or_nothing(instance)
        if strategy == "fptas":
            if epsilon is None:
                raise ValueError("strategy fptas needs epsilon")
            return solve_fpt_as(instance, epsilon)
        if strategy == "xp_voters":
            return solve_xp_voters(instance)
        if strategy == "xp_shifts":
            if s_max is None:
                raise ValueError("strategy xp_shifts needs s_max")
            return solve_xp_shifts(instance, s_max)
        if strategy == "levels":
            return solve_kborda_levels(instance)
        return solve_ilp_candidates(instance)
    except (WrongRule, WrongPriceKind, InstanceTooLarge) as exc:
        raise NoApplicableSolver(f"{strategy}: {exc}") from exc
