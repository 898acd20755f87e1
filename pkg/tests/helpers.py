"""Shared builders and hypothesis strategies for the test suite."""

import random

from hypothesis import strategies as st

from shiftbribery.election import AllOrNothingPrice, BriberyInstance, Election, TablePrice, UnitPrice, Voter
from shiftbribery.rules import RULE_KINDS, RuleSpec


def instance(candidates, orders, p, k, rule, budget, prices=None, weights=None):
    e = Election.from_orders(candidates, orders, weights)
    prices = prices or [UnitPrice()] * e.n
    if isinstance(rule, str):
        rule = RuleSpec.parse(rule)
    return BriberyInstance(e, e.index(p), k, rule, tuple(prices), budget)


@st.composite
def elections(draw, m_max=5, n_max=4, weight_max=2):
    m = draw(st.integers(1, m_max))
    n = draw(st.integers(1, n_max))
    orders = [draw(st.permutations(range(m))) for _ in range(n)]
    weights = [draw(st.integers(1, weight_max)) for _ in range(n)]
    names = tuple(chr(ord("a") + i) for i in range(m))
    return Election(names, tuple(Voter(tuple(o), w) for o, w in zip(orders, weights)))


@st.composite
def price_functions(draw, m, price_max=9):
    kind = draw(st.sampled_from(["unit", "aon", "table"]))
    if kind == "unit":
        return UnitPrice()
    if kind == "aon":
        return AllOrNothingPrice(draw(st.integers(0, price_max)))
    steps = draw(st.lists(st.integers(0, 3), min_size=m - 1, max_size=m - 1))
    values = [0]
    for s in steps:
        values.append(values[-1] + s)
    return TablePrice(tuple(values))


@st.composite
def rules(draw, m):
    kind = draw(st.sampled_from(RULE_KINDS))
    if kind in ("approval-cc", "greedy-approval-cc"):
        return RuleSpec(kind, draw(st.integers(1, m)))
    return RuleSpec(kind)


@st.composite
def instances(draw, m_max=4, n_max=3, budget_max=8, rule=None):
    e = draw(elections(m_max, n_max))
    prices = tuple(draw(price_functions(e.m)) for _ in range(e.n))
    spec = rule if rule is not None else draw(rules(e.m))
    return BriberyInstance(
        e,
        draw(st.integers(0, e.m - 1)),
        draw(st.integers(1, e.m)),
        spec,
        prices,
        draw(st.integers(0, budget_max)),
    )


def seeded(seed):
    return random.Random(seed)
