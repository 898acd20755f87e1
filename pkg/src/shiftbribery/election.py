"""Ordinal elections, price functions, and shift actions.

Candidates are dense integer indices ``0..m-1`` with a display-name table.
Every tie-break in the package uses ascending index order.

A voter carries an integer ``weight``: it counts ``weight`` times in every
score, but it is a single bribable agent, so shifting ``p`` in its vote moves
all copies at once and is charged one price evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

from .errors import ShiftOutOfRange


@dataclass(frozen=True)
class Voter:
    order: tuple[int, ...]
    weight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if self.weight < 1:
            raise ValueError(f"voter weight must be >= 1, got {self.weight}")

    @cached_property
    def _positions(self):
        pos = [0] * len(self.order)
        for i, c in enumerate(self.order):
            pos[c] = i + 1
        return pos

    def position(self, c: int) -> int:
        return self._positions[c]


@dataclass(frozen=True)
class Election:
    candidates: tuple[str, ...]
    voters: tuple[Voter, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "voters", tuple(self.voters))
        m = len(self.candidates)
        if m < 1:
            raise ValueError("an election needs at least one candidate")
        if not self.voters:
            raise ValueError("an election needs at least one voter")
        if len(set(self.candidates)) != m:
            raise ValueError("candidate names must be unique")
        full = list(range(m))
        for i, v in enumerate(self.voters):
            if len(v.order) != m or sorted(v.order) != full:
                raise ValueError(f"voter {i} does not rank every candidate exactly once")

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def total_weight(self) -> int:
        return sum(v.weight for v in self.voters)

    def index(self, name: str) -> int:
        return self.candidates.index(name)

    @classmethod
    def from_orders(cls, candidates, orders, weights=None):
        """Build an election from candidate names and orders given as names or indices."""
        candidates = tuple(candidates)
        lookup = {name: i for i, name in enumerate(candidates)}
        weights = weights or [1] * len(orders)
        voters = []
        for order, w in zip(orders, weights):
            voters.append(Voter(tuple(lookup[c] if isinstance(c, str) else c for c in order), w))
        return cls(candidates, tuple(voters))


def position(voter: Voter, c: int) -> int:
    """1-based rank of candidate ``c`` in ``voter``'s order."""
    return voter.position(c)


# -- price functions ---------------------------------------------------------


@dataclass(frozen=True)
class UnitPrice:
    def __call__(self, distance: int) -> int:
        return distance


@dataclass(frozen=True)
class AllOrNothingPrice:
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("all-or-nothing price must be nonnegative")

    def __call__(self, distance: int) -> int:
        return self.q if distance > 0 else 0


@dataclass(frozen=True)
class TablePrice:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __call__(self, distance: int) -> int:
        return self.values[distance]


PriceFunction = Union[UnitPrice, AllOrNothingPrice, TablePrice]


@dataclass(frozen=True)
class PriceViolation:
    index: int
    reason: str


def validate_price_function(pf: PriceFunction, m: int) -> Optional[PriceViolation]:
    """Return the first violated index, or ``None`` if ``pf`` is valid on ``0..m-1``."""
    if isinstance(pf, TablePrice) and len(pf.values) < m:
        return PriceViolation(len(pf.values), f"table has {len(pf.values)} entries, needs {m}")
    if isinstance(pf, AllOrNothingPrice) and pf.q < 0:
        return PriceViolation(1, "negative price")
    if pf(0) != 0:
        return PriceViolation(0, f"price at distance 0 is {pf(0)}, must be 0")
    prev = 0
    for i in range(1, m):
        cur = pf(i)
        if cur < prev:
            return PriceViolation(i, f"price decreases from {prev} to {cur}")
        prev = cur
    return None


# -- shift actions -----------------------------------------------------------


@dataclass(frozen=True)
class ShiftAction:
    shifts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(self.shifts))
        if any(s < 0 for s in self.shifts):
            raise ShiftOutOfRange("shift distances must be nonnegative")

    @property
    def unit_shifts(self) -> int:
        return sum(self.shifts)

    @classmethod
    def zero(cls, n: int) -> "ShiftAction":
        return cls((0,) * n)

    def __len__(self):
        return len(self.shifts)


def shift_order(order: Sequence[int], p: int, distance: int) -> tuple[int, ...]:
    """Move ``p`` ``distance`` positions toward the top of ``order``."""
    if distance == 0:
        return tuple(order)
    i = order.index(p)
    if distance > i:
        raise ShiftOutOfRange(f"cannot shift by {distance}; candidate is at position {i + 1}")
    j = i - distance
    return tuple(order[:j]) + (p,) + tuple(order[j:i]) + tuple(order[i + 1 :])


def apply_shift(election: Election, p: int, action: ShiftAction) -> Election:
    if len(action.shifts) != election.n:
        raise ShiftOutOfRange(f"action has {len(action.shifts)} entries for {election.n} voters")
    if not any(action.shifts):
        return election
    voters = []
    for v, s in zip(election.voters, action.shifts):
        if s > v.position(p) - 1:
            raise ShiftOutOfRange(
                f"shift {s} exceeds the {v.position(p) - 1} positions above the candidate"
            )
        voters.append(v if s == 0 else Voter(shift_order(v.order, p, s), v.weight))
    return Election(election.candidates, tuple(voters))


def action_cost(prices: Sequence[PriceFunction], action: ShiftAction) -> int:
    if len(prices) != len(action.shifts):
        raise ValueError("prices and action lengths differ")
    return sum(pf(s) for pf, s in zip(prices, action.shifts))


# -- instances and solutions -------------------------------------------------


@dataclass(frozen=True)
class BriberyInstance:
    election: Election
    preferred: int
    committee_size: int
    rule: "object"  # rules.RuleSpec; typed loosely to avoid an import cycle
    prices: tuple[PriceFunction, ...]
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "prices", tuple(self.prices))
        e = self.election
        if not 0 <= self.preferred < e.m:
            raise ValueError(f"preferred candidate index {self.preferred} out of range")
        if not 1 <= self.committee_size <= e.m:
            raise ValueError(f"committee size must lie in [1, {e.m}]")
        if len(self.prices) != e.n:
            raise ValueError(f"{len(self.prices)} price functions for {e.n} voters")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        for i, pf in enumerate(self.prices):
            bad = validate_price_function(pf, e.m)
            if bad is not None:
                raise ValueError(f"price function of voter {i}: {bad.reason} (index {bad.index})")

    @property
    def max_shifts(self) -> tuple[int, ...]:
        """Per-voter upper bound on the shift distance, ``pos_v(p) - 1``."""
        p = self.preferred
        return tuple(v.position(p) - 1 for v in self.election.voters)

    def cost(self, action: ShiftAction) -> int:
        return action_cost(self.prices, action)

    def shifted(self, action: ShiftAction) -> Election:
        return apply_shift(self.election, self.preferred, action)

    def with_budget(self, budget: int) -> "BriberyInstance":
        return BriberyInstance(
            self.election, self.preferred, self.committee_size, self.rule, self.prices, budget
        )


@dataclass(frozen=True)
class BriberySolution:
    action: ShiftAction
    cost: int
    witness: tuple[int, ...]
    optimal: bool = field(default=False)
