"""Integer feasibility models and a small exact branch-and-bound engine.

Relaxations are solved with a dense phase-one simplex over ``Fraction`` using
Bland's rule, so pruning decisions are exact.  Models are feasibility-only:
there is no objective, and the first integral point found is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, int], ...]
    sense: str
    rhs: int


@dataclass
class IlpModel:
    """Nonnegative integer variables with optional upper bounds and linear constraints."""

    upper: dict[str, Optional[int]] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)

    def add_variable(self, name: str, upper: Optional[int] = None) -> str:
        if name in self.upper:
            raise ValueError(f"variable {name} declared twice")
        if upper is not None and (not isinstance(upper, int) or upper < 0):
            raise ValueError(f"upper bound of {name} must be a nonnegative integer")
        self.upper[name] = upper
        return name

    def add_constraint(self, coeffs: dict[str, int], sense: str, rhs: int) -> None:
        if sense not in SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        for name, a in coeffs.items():
            if name not in self.upper:
                raise ValueError(f"constraint references undeclared variable {name}")
            if not isinstance(a, int):
                raise ValueError("coefficients must be integers")
        if not isinstance(rhs, int):
            raise ValueError("right-hand sides must be integers")
        items = tuple((n, a) for n, a in coeffs.items() if a != 0)
        self.constraints.append(Constraint(items, sense, rhs))

    def copy(self) -> "IlpModel":
        return IlpModel(dict(self.upper), list(self.constraints))

    @property
    def variables(self) -> list[str]:
        return list(self.upper)

    def satisfied_by(self, values: dict[str, int]) -> bool:
        for name, ub in self.upper.items():
            x = values.get(name, 0)
            if x < 0 or (ub is not None and x > ub):
                return False
        for con in self.constraints:
            lhs = sum(a * values.get(n, 0) for n, a in con.coeffs)
            if not _holds(lhs, con.sense, con.rhs):
                return False
        return True


def _holds(lhs, sense, rhs) -> bool:
    if sense == "<=":
        return lhs <= rhs
    if sense == ">=":
        return lhs >= rhs
    return lhs == rhs


# -- exact phase-one simplex --------------------------------------------------


def lp_feasible_point(model: IlpModel, lower: dict, upper: dict) -> Optional[dict[str, Fraction]]:
    """A point of the LP relaxation within the given bounds, or ``None`` if empty."""
    fixed = {n: Fraction(lower[n]) for n in model.upper if upper[n] is not None and lower[n] == upper[n]}
    free = [n for n in model.upper if n not in fixed]
    col = {n: j for j, n in enumerate(free)}

    rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for con in model.constraints:
        coeffs: dict[int, Fraction] = {}
        rhs = Fraction(con.rhs)
        for n, a in con.coeffs:
            if n in fixed:
                rhs -= a * fixed[n]
            else:
                rhs -= a * lower[n]
                coeffs[col[n]] = Fraction(a)
        if not coeffs:
            if not _holds(0, con.sense, rhs):
                return None
            continue
        rows.append((coeffs, con.sense, rhs))
    for n in free:
        if upper[n] is not None:
            rows.append(({col[n]: Fraction(1)}, "<=", Fraction(upper[n] - lower[n])))

    nvar = len(free)
    y = _phase_one(rows, nvar)
    if y is None:
        return None
    point = dict(fixed)
    for n in free:
        point[n] = lower[n] + y[col[n]]
    return point


def _phase_one(rows, nvar) -> Optional[list[Fraction]]:
    nrow = len(rows)
    if nrow == 0:
        return [Fraction(0)] * nvar
    nslack = sum(1 for _, s, _ in rows if s != "=")
    # columns: structural | slacks | artificials | rhs
    basis: list[int] = []
    tableau: list[list[Fraction]] = []
    art_cols: list[int] = []
    slack_j = nvar
    pending = []
    for coeffs, sense, rhs in rows:
        row = [Fraction(0)] * (nvar + nslack)
        for j, a in coeffs.items():
            row[j] = a
        sj = None
        if sense != "=":
            row[slack_j] = Fraction(1 if sense == "<=" else -1)
            sj = slack_j
            slack_j += 1
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
        pending.append((row, rhs, sj))
    ncol = nvar + nslack
    nart = sum(1 for row, rhs, sj in pending if sj is None or row[sj] != 1)
    width = ncol + nart
    art_j = ncol
    for row, rhs, sj in pending:
        full = row + [Fraction(0)] * nart + [rhs]
        if sj is not None and row[sj] == 1:
            basis.append(sj)
        else:
            full[art_j] = Fraction(1)
            basis.append(art_j)
            art_cols.append(art_j)
            art_j += 1
        tableau.append(full)

    # objective: minimise the sum of artificials, stored as reduced costs
    obj = [Fraction(0)] * (width + 1)
    art_set = set(art_cols)
    for j in art_cols:
        obj[j] = Fraction(1)
    for i, b in enumerate(basis):
        if b in art_set:
            r = tableau[i]
            for j in range(width + 1):
                if r[j]:
                    obj[j] -= r[j]

    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(nrow):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded phase-one objective cannot happen; guard anyway
            break
        _pivot(tableau, obj, leave, enter, width)
        basis[leave] = enter

    if -obj[width] != 0:
        return None
    y = [Fraction(0)] * nvar
    for i, b in enumerate(basis):
        if b < nvar:
            y[b] = tableau[i][width]
    return y


def _pivot(tableau, obj, r, c, width):
    prow = tableau[r]
    a = prow[c]
    if a != 1:
        prow[:] = [x / a for x in prow]
    nz = [j for j in range(width + 1) if prow[j]]
    for i, row in enumerate(tableau):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = obj[c]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]


# -- branch and bound ---------------------------------------------------------


@dataclass
class IlpResult:
    status: str  # "feasible" | "infeasible" | "limit"
    solution: Optional[dict[str, int]]
    nodes: int


def solve_feasibility(model: IlpModel, node_limit: int = 100_000) -> IlpResult:
    """Depth-first branch-and-bound on variable bounds."""
    names = model.variables
    root = ({n: 0 for n in names}, dict(model.upper))
    stack = [root]
    nodes = 0
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        if nodes > node_limit:
            return IlpResult("limit", None, nodes)
        point = lp_feasible_point(model, lower, upper)
        if point is None:
            continue
        frac = next((n for n in names if point[n].denominator != 1), None)
        if frac is None:
            solution = {n: int(point[n]) for n in names}
            assert model.satisfied_by(solution)
            return IlpResult("feasible", solution, nodes)
        value = point[frac]
        lo_ub = dict(upper)
        lo_ub[frac] = math.floor(value)
        hi_lb = dict(lower)
        hi_lb[frac] = math.ceil(value)
        # explore the branch nearer to the relaxed value first
        down = (lower, lo_ub)
        up = (hi_lb, upper)
        if value - math.floor(value) <= Fraction(1, 2):
            stack.extend([up, down])
        else:
            stack.extend([down, up])
    return IlpResult("infeasible", None, nodes)
