"""Multiwinner rules: SNTV, Bloc, k-Borda, Chamberlin-Courant and its greedy variants.

Membership follows the non-unique-winner model: ``p`` is a member when it
belongs to at least one winning committee.  The greedy rules output a single
committee, built round by round with ties going to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .election import Election
from .errors import InstanceTooLarge, InvalidThreshold

SNTV = "sntv"
BLOC = "bloc"
KBORDA = "kborda"
APPROVAL_CC = "approval-cc"
BORDA_CC = "borda-cc"
GREEDY_APPROVAL_CC = "greedy-approval-cc"
PTAS_CC = "ptas-cc"
GREEDY_BORDA_CC = "greedy-borda-cc"

RULE_KINDS = (
    SNTV,
    BLOC,
    KBORDA,
    APPROVAL_CC,
    BORDA_CC,
    GREEDY_APPROVAL_CC,
    PTAS_CC,
    GREEDY_BORDA_CC,
)
_WITH_T = (APPROVAL_CC, GREEDY_APPROVAL_CC)

CC_ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class RuleSpec:
    kind: str
    t: Optional[int] = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule {self.kind!r}")
        if self.kind in _WITH_T:
            if self.t is None or self.t < 1:
                raise ValueError(f"{self.kind} needs a positive approval threshold t")
        elif self.t is not None:
            raise ValueError(f"{self.kind} takes no threshold")

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        text = text.strip()
        kind, _, t = text.partition(":")
        if kind in _WITH_T:
            if not t.isdigit():
                raise ValueError(f"rule {kind} expects ':<t>' with a positive integer t")
            return cls(kind, int(t))
        if t:
            raise ValueError(f"rule {kind} takes no ':' parameter")
        return cls(kind)

    def __str__(self):
        return f"{self.kind}:{self.t}" if self.t is not None else self.kind

    @property
    def is_topk(self) -> bool:
        return self.kind in (SNTV, BLOC, KBORDA)

    @property
    def is_greedy(self) -> bool:
        return self.kind in (GREEDY_APPROVAL_CC, PTAS_CC, GREEDY_BORDA_CC)

    @property
    def is_exact_cc(self) -> bool:
        return self.kind in (APPROVAL_CC, BORDA_CC)

    @property
    def candidate_monotone(self) -> bool:
        return not self.is_greedy

    @property
    def approval_based(self) -> bool:
        """Rules whose outcome depends on approval sets only (used by the subset solver)."""
        return self.kind in (APPROVAL_CC, GREEDY_APPROVAL_CC, PTAS_CC)

    def approval_threshold(self, m: int, k: int) -> Optional[int]:
        """The ``t`` of the underlying t-approval scores, ``None`` for Borda-based rules."""
        if self.kind == SNTV:
            return 1
        if self.kind == BLOC:
            return k
        if self.kind in _WITH_T:
            return self.t
        if self.kind == PTAS_CC:
            return ptas_threshold(m, k)
        return None


# -- scores ------------------------------------------------------------------


def borda_scores(election: Election) -> list[int]:
    m = election.m
    scores = [0] * m
    for v in election.voters:
        for i, c in enumerate(v.order):
            scores[c] += v.weight * (m - 1 - i)
    return scores


def t_approval_scores(election: Election, t: int) -> list[int]:
    if not 1 <= t <= election.m:
        raise InvalidThreshold(f"approval threshold {t} outside [1, {election.m}]")
    scores = [0] * election.m
    for v in election.voters:
        for c in v.order[:t]:
            scores[c] += v.weight
    return scores


def _scores_for(election: Election, t: Optional[int]) -> list[int]:
    return borda_scores(election) if t is None else t_approval_scores(election, t)


def topk_member_check(election: Election, rule: RuleSpec, k: int, p: int):
    """Return ``(is_member, scores)`` for SNTV, Bloc, or k-Borda."""
    if not rule.is_topk:
        raise ValueError(f"{rule} is not a top-k score rule")
    scores = _scores_for(election, rule.approval_threshold(election.m, k))
    above = sum(1 for c, s in enumerate(scores) if c != p and s > scores[p])
    return above <= k - 1, scores


def _topk_witness(scores: Sequence[int], k: int, p: int) -> tuple[int, ...]:
    others = sorted((c for c in range(len(scores)) if c != p), key=lambda c: (-scores[c], c))
    return tuple(sorted([p, *others[: k - 1]]))


# -- Chamberlin-Courant ------------------------------------------------------


def voter_score_table(election: Election, t: Optional[int]) -> list[list[int]]:
    """``table[v][c]``: the Borda (``t is None``) or t-approval score voter v gives c."""
    m = election.m
    if t is not None and not 1 <= t <= m:
        raise InvalidThreshold(f"approval threshold {t} outside [1, {m}]")
    table = []
    for v in election.voters:
        row = [0] * m
        for i, c in enumerate(v.order):
            row[c] = (m - 1 - i) if t is None else int(i < t)
        table.append(row)
    return table


def cc_committee_score(election: Election, committee: Sequence[int], t: Optional[int] = None) -> int:
    """Weighted sum of each voter's score for its best-ranked committee member."""
    if not committee:
        raise ValueError("committee must be nonempty")
    table = voter_score_table(election, t)
    return sum(v.weight * max(row[c] for c in committee) for v, row in zip(election.voters, table))


@dataclass(frozen=True)
class CCResult:
    is_member: bool
    best_score: int
    witness: Optional[tuple[int, ...]]


def cc_exact_member_check(
    election: Election, k: int, t: Optional[int], p: int, limit: int = CC_ENUMERATION_LIMIT
) -> CCResult:
    """Brute force over all k-committees; ``witness`` is the lexicographically first
    best committee containing ``p`` (``None`` when ``p`` is not a member)."""
    m = election.m
    if math.comb(m, k) > limit:
        raise InstanceTooLarge(f"C({m},{k}) committees exceed the enumeration limit {limit}")
    table = voter_score_table(election, t)
    weights = [v.weight for v in election.voters]
    best = -1
    best_p = -1
    witness = None
    for committee in combinations(range(m), k):
        score = 0
        for w, row in zip(weights, table):
            score += w * max(row[c] for c in committee)
        if score > best:
            best = score
        if p in committee and score > best_p:
            best_p = score
            witness = committee
    member = best_p == best
    return CCResult(member, best, witness if member else None)


@dataclass(frozen=True)
class GreedyCommittee:
    members: tuple[int, ...]  # selection order; members[j] joined in round j+1
    gains: tuple[int, ...]

    @property
    def committee(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def score(self) -> int:
        return sum(self.gains)


def greedy_cc(
    election: Election, k: int, t: Optional[int] = None, tie_order: Optional[Sequence[int]] = None
) -> GreedyCommittee:
    """Greedy Chamberlin-Courant with Borda (``t is None``) or t-approval scores.

    Each round adds the candidate with the largest marginal gain; ties go to
    the candidate appearing first in ``tie_order`` (default: index order).  A
    round whose best gain is 0 still adds a candidate.
    """
    m = election.m
    if not 1 <= k <= m:
        raise ValueError(f"committee size must lie in [1, {m}]")
    table = voter_score_table(election, t)
    weights = [v.weight for v in election.voters]
    order = list(tie_order) if tie_order is not None else list(range(m))
    current = [0] * election.n
    chosen: list[int] = []
    gains: list[int] = []
    taken = set()
    for _ in range(k):
        best_c, best_gain = -1, -1
        for c in order:
            if c in taken:
                continue
            gain = 0
            for w, row, cur in zip(weights, table, current):
                if row[c] > cur:
                    gain += w * (row[c] - cur)
            if gain > best_gain:
                best_c, best_gain = c, gain
        chosen.append(best_c)
        gains.append(best_gain)
        taken.add(best_c)
        current = [max(cur, row[best_c]) for cur, row in zip(current, table)]
    return GreedyCommittee(tuple(chosen), tuple(gains))


# -- PTAS-CC threshold -------------------------------------------------------


def lambert_w0(x: float, tol: float = 1e-12, max_iter: int = 50) -> float:
    """Principal branch of Lambert's W for ``x >= 0`` by Newton's method on w*e^w = x.

    Starting at log(1+x), which lies above the root, the iterates decrease
    monotonically because w*e^w is convex and increasing there.
    """
    if x < 0:
        raise ValueError("lambert_w0 is implemented for x >= 0 only")
    w = math.log1p(x)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            break
        step = f / (ew * (w + 1))
        w -= step
        if abs(step) <= 1e-16 * max(1.0, abs(w)):
            break
    return w


def ptas_threshold(m: int, k: int) -> int:
    if not 1 <= k <= m:
        raise ValueError(f"committee size must lie in [1, {m}]")
    t = math.ceil(m * lambert_w0(k) / k)
    return min(max(t, 1), m)


# -- dispatch ----------------------------------------------------------------


def winning_committee(
    election: Election, rule: RuleSpec, k: int, p: int, cc_limit: int = CC_ENUMERATION_LIMIT
) -> Optional[tuple[int, ...]]:
    """A winning committee containing ``p``, or ``None`` if ``p`` is not a member."""
    if rule.is_topk:
        member, scores = topk_member_check(election, rule, k, p)
        return _topk_witness(scores, k, p) if member else None
    t = rule.approval_threshold(election.m, k)
    if rule.is_exact_cc:
        return cc_exact_member_check(election, k, t, p, cc_limit).witness
    committee = greedy_cc(election, k, t).committee
    return committee if p in committee else None


def is_member(election: Election, rule: RuleSpec, k: int, p: int) -> bool:
    return winning_committee(election, rule, k, p) is not None
