"""Random oracle-equivalence sweeps.

Trial ``i`` draws its instance from a generator seeded with ``(seed, i)``, so
the output does not depend on how trials are spread over worker processes.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .bribery import (
    SolverReport,
    solve_fpt_as,
    solve_oracle,
    solve_sntv_bloc,
    solve_subset_all_or_nothing,
    solve_subset_approval,
    solve_xp_voters,
)
from .bribery_ilp import ILP_MAX_CANDIDATES, ILP_RULES, solve_ilp_candidates
from .election import AllOrNothingPrice, BriberyInstance
from .rules import BLOC, RULE_KINDS, SNTV
from .sampling import SweepConfig, random_instance, trial_rng
from .textio import format_instance

EPSILONS = (Fraction(1, 4), Fraction(1, 2), Fraction(1))


@dataclass(frozen=True)
class CrosscheckConfig:
    trials: int = 500
    seed: int = 0
    m_max: int = 5
    n_max: int = 4
    rules: tuple[str, ...] = RULE_KINDS
    epsilons: tuple[Fraction, ...] = EPSILONS
    jobs: int = 1

    def sweep(self) -> SweepConfig:
        return SweepConfig(m_max=self.m_max, n_max=self.n_max, rules=self.rules)


@dataclass
class TrialResult:
    index: int
    rule: str
    oracle: str
    opt: Optional[int]
    checked: list[str] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)
    instance_text: str = ""

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_line(self) -> str:
        record = {
            "trial": self.index,
            "rule": self.rule,
            "oracle": self.oracle,
            "opt": self.opt,
            "checked": self.checked,
            "ok": self.ok,
        }
        if not self.ok:
            record["problems"] = self.problems
            record["instance"] = self.instance_text
        return json.dumps(record)


def exact_solvers(instance: BriberyInstance) -> list[tuple[str, callable]]:
    """Exact solvers whose preconditions hold for ``instance``."""
    rule = instance.rule
    out = []
    if rule.kind in (SNTV, BLOC):
        out.append(("poly", solve_sntv_bloc))
    if rule.candidate_monotone and all(isinstance(pf, AllOrNothingPrice) for pf in instance.prices):
        out.append(("subset-aon", solve_subset_all_or_nothing))
    if rule.approval_based:
        out.append(("subset-approval", solve_subset_approval))
    out.append(("xp_voters", solve_xp_voters))
    if rule.kind in ILP_RULES and instance.election.m <= ILP_MAX_CANDIDATES:
        out.append(("ilp", solve_ilp_candidates))
    return out


def compare(name: str, report: SolverReport, oracle: SolverReport) -> Optional[str]:
    if report.outcome != oracle.outcome:
        return f"{name}: {report.outcome}, oracle {oracle.outcome}"
    if report.feasible and report.solution.optimal and report.cost != oracle.cost:
        return f"{name}: cost {report.cost}, oracle OPT {oracle.cost}"
    return None


def check_fpt_as(instance: BriberyInstance, oracle: SolverReport, epsilon: Fraction) -> Optional[str]:
    report = solve_fpt_as(instance, epsilon)
    if oracle.feasible and not report.feasible:
        return f"fptas({epsilon}): infeasible, oracle feasible"
    if oracle.feasible and report.cost > (1 + epsilon) * oracle.cost:
        return f"fptas({epsilon}): cost {report.cost} above (1+eps)*{oracle.cost}"
    return None


def run_trial(cfg: CrosscheckConfig, index: int) -> TrialResult:
    instance = random_instance(trial_rng(cfg.seed, index), cfg.sweep())
    oracle = solve_oracle(instance)
    result = TrialResult(index, str(instance.rule), oracle.outcome, oracle.cost)
    for name, solver in exact_solvers(instance):
        result.checked.append(name)
        problem = compare(name, solver(instance), oracle)
        if problem:
            result.problems.append(problem)
    if instance.rule.candidate_monotone:
        for eps in cfg.epsilons:
            result.checked.append(f"fptas({eps})")
            problem = check_fpt_as(instance, oracle, eps)
            if problem:
                result.problems.append(problem)
    if result.problems:
        result.instance_text = format_instance(instance)
    return result


def _run_chunk(args) -> list[TrialResult]:
    cfg, indices = args
    return [run_trial(cfg, i) for i in indices]


def iter_trials(cfg: CrosscheckConfig) -> Iterator[TrialResult]:
    """Trial results in index order, computed serially or by ``cfg.jobs`` processes."""
    indices = list(range(cfg.trials))
    if cfg.jobs <= 1 or cfg.trials <= 1:
        for i in indices:
            yield run_trial(cfg, i)
        return
    chunk = max(1, len(indices) // (cfg.jobs * 4))
    chunks = [(cfg, indices[i : i + chunk]) for i in range(0, len(indices), chunk)]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        for results in pool.map(_run_chunk, chunks):
            yield from results


@dataclass
class CrosscheckSummary:
    trials: int = 0
    passed: int = 0
    failed_trial: Optional[int] = None
    per_solver: dict[str, int] = field(default_factory=dict)
    outcomes: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed_trial is None

    def to_line(self) -> str:
        return json.dumps(
            {
                "summary": "pass" if self.ok else "fail",
                "trials": self.trials,
                "passed": self.passed,
                "failed_trial": self.failed_trial,
                "oracle_outcomes": dict(sorted(self.outcomes.items())),
                "solver_checks": dict(sorted(self.per_solver.items())),
            }
        )


def run_crosscheck(cfg: CrosscheckConfig, emit=None) -> CrosscheckSummary:
    """Run the sweep, stopping at the first discrepancy; ``emit`` receives one line per trial."""
    summary = CrosscheckSummary()
    for result in iter_trials(cfg):
        summary.trials += 1
        summary.outcomes[result.oracle] = summary.outcomes.get(result.oracle, 0) + 1
        for name in result.checked:
            summary.per_solver[name] = summary.per_solver.get(name, 0) + 1
        if emit is not None:
            emit(result.to_line())
        if not result.ok:
            summary.failed_trial = result.index
            break
        summary.passed += 1
    return summary
