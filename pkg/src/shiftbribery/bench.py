"""Timing ladders for the solvers.  Node counters are deterministic; wall-clock is not."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .bribery import (
    solve_fpt_as,
    solve_oracle,
    solve_sntv_bloc,
    solve_subset_all_or_nothing,
    solve_xp_voters,
)
from .bribery_ilp import solve_ilp_candidates
from .election import AllOrNothingPrice, BriberyInstance, Election, UnitPrice, Voter
from .rules import RuleSpec
from .sampling import random_table

SUITES = ("minimal", "standard")


@dataclass(frozen=True)
class BenchRow:
    family: str
    solver: str
    label: str
    space: int  # size of the searched space where meaningful
    nodes: int
    outcome: str
    seconds: float

    def to_record(self) -> dict:
        return {
            "family": self.family,
            "solver": self.solver,
            "label": self.label,
            "space": self.space,
            "nodes": self.nodes,
            "outcome": self.outcome,
            "ms": round(self.seconds * 1000, 3),
        }


def _p_last_election(rng: random.Random, m: int, n: int) -> Election:
    """Candidate 0 is ``p`` and sits last in every vote, so it can move in every vote."""
    voters = []
    for _ in range(n):
        rest = list(range(1, m))
        rng.shuffle(rest)
        voters.append(Voter((*rest, 0)))
    return Election(tuple(chr(ord("a") + i) if i else "p" for i in range(m)), tuple(voters))


def _instance(election, rule, k, prices, budget):
    return BriberyInstance(election, 0, k, rule, tuple(prices), budget)


def bench_cases(suite: str = "minimal"):
    """Yield ``(family, solver name, solver, label, space, instance)`` tuples."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    rng = random.Random(2024)
    big = suite == "standard"
    ladder = [(2, 2), (3, 2), (3, 3), (4, 3), (4, 4)] + ([(5, 4), (5, 5)] if big else [])
    for m, n in ladder:
        e = _p_last_election(rng, m, n)
        inst = _instance(e, RuleSpec("kborda"), 1, [UnitPrice()] * n, 0)
        yield "oracle-ladder", "oracle", solve_oracle, f"m={m},n={n}", m**n, inst
    for n in [3, 5, 7] + ([9, 11] if big else []):
        e = _p_last_election(rng, 4, n)
        prices = [AllOrNothingPrice(rng.randint(1, 5)) for _ in range(n)]
        inst = _instance(e, RuleSpec("kborda"), 1, prices, 3 * n)
        yield "aon-kborda", "subset", solve_subset_all_or_nothing, f"n={n}", 2**n, inst
    for n in [4, 8, 16] + ([32, 64] if big else []):
        e = _p_last_election(rng, 5, n)
        prices = [random_table(rng, 5, 9) for _ in range(n)]
        inst = _instance(e, RuleSpec("sntv"), 2, prices, 4 * n)
        yield "sntv-table", "poly", solve_sntv_bloc, f"n={n}", 0, inst
    for n in [2, 3, 4] + ([5] if big else []):
        e = _p_last_election(rng, 4, n)
        inst = _instance(e, RuleSpec("kborda"), 2, [UnitPrice()] * n, n)
        yield "kborda-unit", "ilp", solve_ilp_candidates, f"n={n}", 0, inst
        yield "kborda-unit", "xp_voters", solve_xp_voters, f"n={n}", 4**n, inst
    for n in [3, 4] + ([5] if big else []):
        e = _p_last_election(rng, 5, n)
        prices = [random_table(rng, 5, 9) for _ in range(n)]
        inst = _instance(e, RuleSpec("kborda"), 2, prices, 3 * n)
        yield "kborda-table", "fptas(1/2)", lambda x: solve_fpt_as(x, Fraction(1, 2)), f"n={n}", 0, inst
    for n in [3, 4] + ([5] if big else []):
        e = _p_last_election(rng, 5, n)
        inst = _instance(e, RuleSpec("greedy-borda-cc"), 2, [UnitPrice()] * n, 2 * n)
        yield "greedy-borda-cc", "xp_voters", solve_xp_voters, f"n={n}", 5**n, inst


def run_bench(suite: str = "minimal", repeat: int = 1) -> list[BenchRow]:
    if repeat < 1:
        raise ValueError("repeat must be at least 1")
    rows = []
    for family, name, solver, label, space, inst in bench_cases(suite):
        times = []
        for _ in range(repeat):
            start = time.perf_counter()
            report = solver(inst)
            times.append(time.perf_counter() - start)
        rows.append(BenchRow(family, name, label, space, report.nodes_explored, report.outcome, min(times)))
    return rows


def format_table(rows: list[BenchRow]) -> str:
    header = ("family", "solver", "size", "space", "nodes", "outcome", "ms")
    body = [
        (r.family, r.solver, r.label, str(r.space or "-"), str(r.nodes), r.outcome, f"{r.seconds * 1000:.2f}")
        for r in rows
    ]
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in (header, *body)]
    return "\n".join(lines) + "\n"

