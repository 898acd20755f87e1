"""Executable checks for the hardness constructions.

Score audits compare the unbribed elections with the score patterns the
constructions are built around. :func:`reduction_cases` enumerates every tiny
source instance, and :func:`check_case` decides the generated bribery instance and
compares the answer with the source problem's brute-force answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .bribery import dispatch_solver
from .catalog import all_graphs, colored_graph_families, set_cover_inputs
from .election import BriberyInstance
from .reductions import (
    Graph,
    SetCoverInput,
    gen_borda_from_mis,
    gen_greedy_approval_cc_from_setcover,
    gen_kborda_from_clique,
    has_clique,
    has_multicolored_independent_set,
    has_set_cover,
    infeasible_marker,
    mis_budget,
)
from .rules import borda_scores, greedy_cc


def mis_score_audit(graph: Graph, h: int, instance: BriberyInstance) -> list[str]:
    """Vertex and edge candidates at ``L+B+1``, everyone else but ``p`` at most ``L+B``."""
    e = instance.election
    scores = borda_scores(e)
    L, B = scores[instance.preferred], instance.budget
    problems = []
    q = graph.vertices // h
    delta = max((graph.degree(v) for v in range(graph.vertices)), default=0)
    if B != mis_budget(q, delta, h):
        problems.append(f"budget {B}, expected {mis_budget(q, delta, h)}")
    for name, score in zip(e.candidates, scores):
        if name == "p":
            continue
        if name[0] in "ve":
            if score != L + B + 1:
                problems.append(f"{name} at {score}, expected {L + B + 1}")
        elif score > L + B:
            problems.append(f"{name} at {score}, above {L + B}")
    return problems


def clique_score_audit(graph: Graph, h: int, instance: BriberyInstance) -> list[str]:
    """All vertex candidates tied at some ``L`` and ``p`` at ``L-(h-1)-B``."""
    e = instance.election
    scores = borda_scores(e)
    vertex = [scores[e.index(f"v{v}")] for v in range(graph.vertices)]
    problems = []
    if len(set(vertex)) != 1:
        problems.append(f"vertex candidates not tied: {vertex}")
    L = vertex[0]
    want = L - (h - 1) - instance.budget
    if scores[instance.preferred] != want:
        problems.append(f"p at {scores[instance.preferred]}, expected {want}")
    if instance.budget != math.comb(h, 2) * (2 + h**3):
        problems.append(f"budget {instance.budget}")
    return problems


def setcover_join_audit(inst: SetCoverInput, instance: BriberyInstance) -> list[str]:
    """Unbribed greedy order: set candidates, then element candidates, then ``pp``."""
    e = instance.election
    s, r = len(inst.sets), inst.universe
    want = [f"cmS{j}" for j in range(1, s + 1)] + [f"cmU{i}" for i in range(1, r + 1)] + ["pp"]
    got = [e.candidates[c] for c in greedy_cc(e, instance.committee_size, instance.rule.t).members]
    if got != want:
        return [f"join order {got}, expected {want}"]
    return []


@dataclass(frozen=True)
class ReductionCase:
    family: str  # "mis", "clique" or "setcover"
    h: int
    source: object  # Graph or SetCoverInput
    instance: BriberyInstance
    expected: bool  # the source problem's answer

    def label(self) -> str:
        if isinstance(self.source, Graph):
            return f"{self.family} h={self.h} v={self.source.vertices} edges={list(self.source.edges)}"
        sets = [sorted(x) for x in self.source.sets]
        return f"{self.family} h={self.h} u={self.source.universe} sets={sets}"


def reduction_cases(max_vertices: int = 6, clique_sizes=(2, 3), max_sets: int = 3) -> Iterator[ReductionCase]:
    for h, graph in colored_graph_families(max_vertices):
        instance = gen_borda_from_mis(graph, h)
        yield ReductionCase("mis", h, graph, instance, has_multicolored_independent_set(graph, h))
    for graph in all_graphs(max_vertices):
        for h in clique_sizes:
            yield ReductionCase("clique", h, graph, gen_kborda_from_clique(graph, h), has_clique(graph, h))
    for inst in set_cover_inputs(max_sets, max_sets):
        instance = gen_greedy_approval_cc_from_setcover(inst, 3)
        yield ReductionCase("setcover", inst.h, inst, instance, has_set_cover(inst))


def structural_audit(case: ReductionCase) -> list[str]:
    """The family's score audit; degenerate sources that map to the marker have none."""
    if case.instance == infeasible_marker(case.instance.rule):
        return []
    if case.family == "mis":
        return mis_score_audit(case.source, case.h, case.instance)
    if case.family == "clique":
        return clique_score_audit(case.source, case.h, case.instance)
    return setcover_join_audit(case.source, case.instance)


def check_case(case: ReductionCase) -> Optional[str]:
    """None when bribery feasibility matches the source answer, else a description."""
    report = dispatch_solver(case.instance)
    if report.outcome == "inconclusive":
        return f"{case.label()}: {report.strategy} inconclusive"
    if report.feasible != case.expected:
        return f"{case.label()}: {report.strategy} says {report.outcome}, source answer {case.expected}"
    return None
