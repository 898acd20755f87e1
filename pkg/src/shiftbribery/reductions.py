"""Instance generators for the hardness constructions and brute-force source oracles.

Candidate names encode their role so that audits can find them again:

* independent-set construction: ``p``, ``v<i>``, ``e<i>_<j>``, ``f<v>_<j>``, ``da<j>``, ``db<j>``
* clique construction: ``p``, ``v<i>``, ``de<e>_<j>``, ``h<j>``, ``f<j>``
* set-cover construction: ``cmS<j>``, ``cpS<j>``, ``cmU<i>``, ``cpU<i>``, ``pp``, ``p``,
  ``pad<j>``, ``x<j>``

Blocks of candidates appear in ascending index order; reversed blocks are
reversed literally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

from .election import BriberyInstance, Election, UnitPrice, Voter
from .errors import InstanceTooLarge, PreconditionViolated
from .rules import GREEDY_APPROVAL_CC, KBORDA, RuleSpec

ORACLE_MAX_VERTICES = 20
ORACLE_MAX_SETS = 20
SETCOVER_MAX_SIZE = 3


@dataclass(frozen=True)
class Graph:
    vertices: int
    edges: tuple[tuple[int, int], ...]
    colors: Optional[tuple[int, ...]] = None  # colors[v] in 1..h

    def __post_init__(self):
        if self.vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            normalized.append((min(u, v), max(u, v)))
        if len(set(normalized)) != len(normalized):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        if self.colors is not None:
            colors = tuple(self.colors)
            if len(colors) != self.vertices or any(c < 1 for c in colors):
                raise ValueError("every vertex needs a color >= 1")
            object.__setattr__(self, "colors", colors)

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def incident(self, v: int) -> list[int]:
        """Indices of the edges touching ``v``."""
        return [i for i, e in enumerate(self.edges) if v in e]

    def degree(self, v: int) -> int:
        return len(self.incident(v))


@dataclass(frozen=True)
class SetCoverInput:
    universe: int
    sets: tuple[frozenset[int], ...]
    h: int

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for j, s in enumerate(sets):
            if not s:
                raise ValueError(f"set {j + 1} is empty")
            if not all(0 <= u < self.universe for u in s):
                raise ValueError(f"set {j + 1} has an element outside the universe")
        object.__setattr__(self, "sets", sets)
        if self.h < 0:
            raise ValueError("target h must be nonnegative")


# -- source-problem oracles ------------------------------------------------------


def has_multicolored_independent_set(graph: Graph, h: int) -> bool:
    """One vertex of each color ``1..h``, pairwise non-adjacent."""
    if graph.vertices > ORACLE_MAX_VERTICES:
        raise InstanceTooLarge(f"{graph.vertices} vertices exceed {ORACLE_MAX_VERTICES}")
    if graph.colors is None:
        raise ValueError("graph is not colored")
    classes = [[v for v in range(graph.vertices) if graph.colors[v] == c] for c in range(1, h + 1)]
    edges = set(graph.edges)
    for pick in product(*classes):
        if all((min(a, b), max(a, b)) not in edges for a, b in combinations(pick, 2)):
            return True
    return False


def has_clique(graph: Graph, h: int) -> bool:
    if graph.vertices > ORACLE_MAX_VERTICES:
        raise InstanceTooLarge(f"{graph.vertices} vertices exceed {ORACLE_MAX_VERTICES}")
    edges = set(graph.edges)
    return any(
        all(pair in edges for pair in combinations(group, 2))
        for group in combinations(range(graph.vertices), h)
    )


def has_set_cover(inst: SetCoverInput) -> bool:
    """At most ``h`` of the sets cover the universe."""
    if len(inst.sets) > ORACLE_MAX_SETS:
        raise InstanceTooLarge(f"{len(inst.sets)} sets exceed {ORACLE_MAX_SETS}")
    universe = frozenset(range(inst.universe))
    for size in range(min(inst.h, len(inst.sets)) + 1):
        for group in combinations(inst.sets, size):
            if frozenset().union(*group) == universe:
                return True
    return False


# -- helpers -----------------------------------------------------------------------


def _instance(names, orders, k, rule, budget, weights=None) -> BriberyInstance:
    lookup = {name: i for i, name in enumerate(names)}
    weights = weights or [1] * len(orders)
    voters = tuple(Voter(tuple(lookup[c] for c in order), w) for order, w in zip(orders, weights))
    election = Election(tuple(names), voters)
    return BriberyInstance(
        election,
        preferred=lookup["p"],
        committee_size=k,
        rule=rule,
        prices=tuple(UnitPrice() for _ in voters),
        budget=budget,
    )


def infeasible_marker(rule: RuleSpec = RuleSpec(KBORDA)) -> BriberyInstance:
    """A fixed instance with no successful action: one voter ranks ``a`` first and ``p`` last, k=1, B=0.

    Pads keep ``p`` outside the top ``t`` for approval rules.
    """
    pads = [f"pad{j}" for j in range(max(0, (rule.t or 1) - 1))]
    names = ("a", *pads, "p")
    return _instance(names, [names], 1, rule, 0)


# -- Borda from multicolored independent set --------------------------------------


def mis_budget(q: int, delta: int, h: int) -> int:
    return h * (q + (q - 1) * delta)


def gen_borda_from_mis(graph: Graph, h: int) -> BriberyInstance:
    """Single-winner Borda (k-Borda with k=1) with unit prices and budget ``h(q + (q-1)Δ)``."""
    colors = graph.colors
    if colors is None:
        raise PreconditionViolated("graph must be colored")
    if h < 1:
        raise PreconditionViolated("h must be at least 1")
    if any(not 1 <= c <= h for c in colors):
        raise PreconditionViolated(f"every color must lie in 1..{h}")
    classes = [[v for v in range(graph.vertices) if colors[v] == i] for i in range(1, h + 1)]
    q = len(classes[0])
    if q == 0 or any(len(c) != q for c in classes):
        raise PreconditionViolated("every color class must have the same positive size")
    for a, b in graph.edges:
        if colors[a] == colors[b]:
            raise PreconditionViolated(f"edge ({a}, {b}) joins two vertices of color {colors[a]}")

    delta = max((graph.degree(v) for v in range(graph.vertices)), default=0)
    budget = mis_budget(q, delta, h)
    vname = [f"v{v}" for v in range(graph.vertices)]
    ename = [f"e{a}_{b}" for a, b in graph.edges]
    fname = {v: [f"f{v}_{j}" for j in range(delta - graph.degree(v))] for v in range(graph.vertices)}
    d1 = [f"da{j}" for j in range(2 * budget)]
    d2 = [f"db{j}" for j in range(2 * budget)]
    all_f = [f for v in range(graph.vertices) for f in fname[v]]
    names = ["p", *vname, *ename, *all_f, *d1, *d2]

    def block(v):
        return [vname[v], *(ename[i] for i in graph.incident(v)), *fname[v]]

    def rest(i):
        members = classes[i - 1]
        others = [vname[v] for v in range(graph.vertices) if colors[v] != i]
        far_edges = [ename[j] for j, (a, b) in enumerate(graph.edges) if colors[a] != i and colors[b] != i]
        far_f = [f for v in range(graph.vertices) if v not in members for f in fname[v]]
        return [*d1, *others, *far_edges, *far_f, *d2]

    def reverse_keep_tail(order):
        flipped = order[::-1]
        tail = [c for c in flipped if c in d2_set]
        return [c for c in flipped if c not in d2_set] + tail

    d2_set = set(d2)
    orders = []
    for i in range(1, h + 1):
        members = classes[i - 1]
        x = [c for v in members for c in block(v)] + ["p"] + rest(i)
        x2 = [c for v in reversed(members) for c in reversed(block(v))] + ["p"] + rest(i)
        orders += [x, x2, reverse_keep_tail(x), reverse_keep_tail(x2)]

    z = [*all_f, *vname, *ename, *d1, "p", *d2]
    # z' is z reversed with the V(G) u E(G) block moved B+1 places forward, past
    # B+1 members of D'.  Each of them gains B+1 against p, exactly as intended,
    # while the D' members they jump over lose points instead of gaining them.
    gap = d1[::-1]
    z2 = [*d2[::-1], "p", *gap[: budget - 1], *ename[::-1], *vname[::-1], *gap[budget - 1 :], *all_f[::-1]]
    orders += [z, z2]
    return _instance(names, orders, 1, RuleSpec(KBORDA), budget)


# -- k-Borda from clique -----------------------------------------------------------


def clique_budget(h: int) -> int:
    return math.comb(h, 2) * (2 + h**3)


def gen_kborda_from_clique(graph: Graph, h: int) -> BriberyInstance:
    """k-Borda with ``k = n - h + 1``, unit prices, and budget ``C(h,2)(2 + h^3)``.

    Graphs with fewer than ``C(h,2)`` edges cannot contain an ``h``-clique and
    map to :func:`infeasible_marker`.
    """
    if h < 1:
        raise PreconditionViolated("h must be at least 1")
    n = graph.vertices
    if len(graph.edges) < math.comb(h, 2) or n < h:
        return infeasible_marker()
    budget = clique_budget(h)
    vname = [f"v{v}" for v in range(n)]
    dname = [[f"de{i}_{j}" for j in range(h**3)] for i in range(len(graph.edges))]
    hname = [f"h{j}" for j in range(budget)]
    fname = [f"f{j}" for j in range(budget + h - 1)]
    all_d = [c for group in dname for c in group] + hname
    names = ["p", *vname, *all_d, *fname]
    f_set = set(fname)

    orders = []
    for i, (u, v) in enumerate(graph.edges):
        own = set(dname[i])
        x = [
            vname[u],
            vname[v],
            *dname[i],
            "p",
            *(c for c in all_d if c not in own),
            *(vname[w] for w in range(n) if w not in (u, v)),
            *fname,
        ]
        flipped = x[::-1]
        y = [c for c in flipped if c not in f_set] + [c for c in flipped if c in f_set]
        orders += [x, y]
    orders.append([*vname, *fname, "p", *all_d])
    orders.append([*fname, "p", *vname[::-1], *all_d])
    return _instance(names, orders, n - h + 1, RuleSpec(KBORDA), budget)


# -- Greedy-Approval-CC from set cover ---------------------------------------------


def setcover_base(inst: SetCoverInput) -> int:
    return max(len(inst.sets) * inst.universe, 2)


def gen_greedy_approval_cc_from_setcover(inst: SetCoverInput, t: int = 3) -> BriberyInstance:
    """Greedy-Approval-CC(t) with committee size ``|S| + |U| + 1`` and budget ``h``."""
    if t < 3:
        raise PreconditionViolated("the construction needs t >= 3")
    s, r = len(inst.sets), inst.universe
    if s > SETCOVER_MAX_SIZE or r > SETCOVER_MAX_SIZE:
        raise InstanceTooLarge(f"set systems are limited to {SETCOVER_MAX_SIZE} sets and elements")
    rule = RuleSpec(GREEDY_APPROVAL_CC, t)
    h = min(inst.h, s)
    covered = frozenset().union(*inst.sets) if inst.sets else frozenset()
    if r == 0:
        raise PreconditionViolated("the universe must be nonempty")
    if h == 0 or len(covered) < r:
        return infeasible_marker(rule)

    beta = setcover_base(inst)
    cm_s = [f"cmS{j}" for j in range(1, s + 1)]
    cp_s = [f"cpS{j}" for j in range(1, s + 1)]
    cm_u = [f"cmU{i}" for i in range(1, r + 1)]
    cp_u = [f"cpU{i}" for i in range(1, r + 1)]
    important = [*cm_s, *cp_s, *cm_u, *cp_u, "pp", "p"]
    pads = [f"pad{j}" for j in range(h + 1)]

    tops: list[tuple[list[str], int, bool]] = []  # (top-t block, weight, p directly behind)
    dummies: list[str] = []

    def fill(approved, weight=1, bribable=False):
        start = len(dummies)
        dummies.extend(f"x{start + j}" for j in range(t - len(approved)))
        filler = dummies[start:]
        top = [*filler, *approved] if bribable else [*approved, *filler]
        tops.append((top, weight, bribable))

    for j in range(s):
        fill([cm_s[j]], bribable=True)
    for j, members in enumerate(inst.sets):
        for i in range(r):
            fill([cm_u[i], cp_s[j]] if i in members else [cp_s[j]])
    for i in range(r):
        fill(["pp", cp_u[i]])

    def block(approved, count):
        if count > 0:
            fill(approved, weight=count)

    for j in range(s):
        block([cm_s[j], cp_s[j]], beta**5 - (j + 1))
        block([cm_s[j]], r - 1)
    for i in range(r):
        # spacing by s keeps c-(u_1), c-(u_2), ... in index order whatever the
        # element degrees are; a spacing of 1 lets a frequent element jump ahead
        block([cm_u[i], cp_u[i]], beta**4 - (i + 1) * s)
        block([cp_u[i]], sum(1 for members in inst.sets if i in members) - 1)
    block(["p", "pp"], beta**2)
    block(["pp"], h - 1)

    names = [*important, *pads, *dummies]
    orders, weights = [], []
    for top, weight, bribable in tops:
        if bribable:
            behind = ["p"]
        elif "p" in top:
            behind = []
        else:
            behind = [*pads, "p"]  # more than h positions behind the approval boundary
        taken = set(top) | set(behind)
        orders.append([*top, *behind, *(c for c in names if c not in taken)])
        weights.append(weight)
    return _instance(names, orders, s + r + 1, rule, h, weights)
