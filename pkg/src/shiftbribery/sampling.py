"""Seeded random instances for sweeps and property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .election import AllOrNothingPrice, BriberyInstance, Election, TablePrice, UnitPrice, Voter
from .rules import RULE_KINDS, RuleSpec, _WITH_T, winning_committee

PRICE_KINDS = ("table", "unit", "aon")


@dataclass(frozen=True)
class SweepConfig:
    m_max: int = 5
    n_max: int = 4
    weight_max: int = 2
    price_max: int = 9
    budget_max: int = 12
    rules: tuple[str, ...] = RULE_KINDS
    t_values: tuple[int, ...] = (1, 2)
    price_kinds: tuple[str, ...] = field(default=PRICE_KINDS)
    # pick p among the non-members when there are any; otherwise most draws are trivial
    avoid_members: bool = True


def random_election(rng: random.Random, m: int, n: int, weight_max: int = 1) -> Election:
    names = tuple(chr(ord("a") + i) for i in range(m))
    voters = []
    for _ in range(n):
        order = list(range(m))
        rng.shuffle(order)
        voters.append(Voter(tuple(order), rng.randint(1, weight_max)))
    return Election(names, tuple(voters))


def random_table(rng: random.Random, m: int, price_max: int) -> TablePrice:
    steps = sorted(rng.randint(0, price_max) for _ in range(m - 1))
    return TablePrice((0, *steps))


def random_rule(rng: random.Random, kind: str, m: int, t_values) -> RuleSpec:
    if kind in _WITH_T:
        return RuleSpec(kind, min(rng.choice(t_values), m))
    return RuleSpec(kind)


def random_instance(rng: random.Random, cfg: SweepConfig = SweepConfig()) -> BriberyInstance:
    m = rng.randint(1, cfg.m_max)
    n = rng.randint(1, cfg.n_max)
    election = random_election(rng, m, n, cfg.weight_max)
    rule = random_rule(rng, rng.choice(cfg.rules), m, cfg.t_values)
    kind = rng.choice(cfg.price_kinds)
    if kind == "unit":
        prices = tuple(UnitPrice() for _ in range(n))
    elif kind == "aon":
        prices = tuple(AllOrNothingPrice(rng.randint(0, cfg.price_max)) for _ in range(n))
    else:
        prices = tuple(random_table(rng, m, cfg.price_max) for _ in range(n))
    k = rng.randint(1, m)
    preferred = rng.randrange(m)
    if cfg.avoid_members:
        outside = [c for c in range(m) if winning_committee(election, rule, k, c) is None]
        if outside:
            preferred = rng.choice(outside)
    return BriberyInstance(
        election,
        preferred=preferred,
        committee_size=k,
        rule=rule,
        prices=prices,
        budget=rng.randint(0, cfg.budget_max),
    )


def trial_rng(seed: int, index: int) -> random.Random:
    """Independent stream per trial, so results do not depend on how trials are split."""
    return random.Random(f"{seed}:{index}")
