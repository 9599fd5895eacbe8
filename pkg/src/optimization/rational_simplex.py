"""
Exact linear programming over the rationals.

Two-phase tableau simplex with Bland's smallest-index rule, all arithmetic in
fractions.Fraction. Problems are always minimizations.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.errors import LpError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    """Sparse row: sum(coeffs[j] * x_j) <sense> rhs"""

    coeffs: Tuple[Tuple[int, Fraction], ...]
    sense: Sense
    rhs: Fraction
    name: str = ""


@dataclass
class LpProblem:
    """Minimize objective . x subject to constraints and lower <= x <= upper"""

    name: str = ""
    variables: List[str] = field(default_factory=list)
    objective: List[Fraction] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    lower: List[Fraction] = field(default_factory=list)
    upper: List[Optional[Fraction]] = field(default_factory=list)
    binary: List[bool] = field(default_factory=list)
    # optimum is an integer whenever the binaries are integral
    integral_objective: bool = False

    def add_variable(self, name: str, cost=0, lower=0, upper=None, binary: bool = False) -> int:
        if binary:
            lower, upper = 0, 1
        self.variables.append(name)
        self.objective.append(Fraction(cost))
        self.lower.append(Fraction(lower))
        self.upper.append(None if upper is None else Fraction(upper))
        self.binary.append(binary)
        return len(self.variables) - 1

    def add_constraint(self, coeffs: Dict[int, object], sense: Sense, rhs, name: str = ""):
        row = tuple(sorted((j, Fraction(a)) for j, a in coeffs.items() if a != 0))
        for j, _ in row:
            if not 0 <= j < len(self.variables):
                raise LpError(f"constraint {name!r} references unknown variable {j}")
        self.constraints.append(Constraint(row, Sense(sense), Fraction(rhs), name))

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def validate(self):
        n = self.num_variables
        if not (len(self.objective) == len(self.lower) == len(self.upper) == len(self.binary) == n):
            raise LpError(f"inconsistent dimensions in problem {self.name!r}")
        for j in range(n):
            if self.upper[j] is not None and self.upper[j] < self.lower[j]:
                raise LpError(f"variable {self.variables[j]} has empty bounds")

    def with_bounds(self, fixed: Dict[int, Fraction]) -> "LpProblem":
        """Copy with some variables fixed to a value"""
        lower, upper = list(self.lower), list(self.upper)
        for j, value in fixed.items():
            lower[j] = upper[j] = Fraction(value)
        return replace(self, lower=lower, upper=upper)

    def permuted(self, order: Sequence[int]) -> "LpProblem":
        """Same problem with variables listed in the given order"""
        position = {old: new for new, old in enumerate(order)}
        return LpProblem(
            name=self.name,
            variables=[self.variables[j] for j in order],
            objective=[self.objective[j] for j in order],
            constraints=[
                Constraint(tuple(sorted((position[j], a) for j, a in c.coeffs)), c.sense, c.rhs, c.name)
                for c in self.constraints
            ],
            lower=[self.lower[j] for j in order],
            upper=[self.upper[j] for j in order],
            binary=[self.binary[j] for j in order],
            integral_objective=self.integral_objective,
        )

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for j, v in enumerate(x):
            if v < self.lower[j] or (self.upper[j] is not None and v > self.upper[j]):
                return False
            if self.binary[j] and v not in (ZERO, ONE):
                return False
        for c in self.constraints:
            lhs = sum((a * x[j] for j, a in c.coeffs), ZERO)
            if (c.sense == Sense.LE and lhs > c.rhs) or (c.sense == Sense.GE and lhs < c.rhs) or (
                c.sense == Sense.EQ and lhs != c.rhs
            ):
                return False
        return True


@dataclass
class LpResult:
    status: LpStatus
    optimum: Optional[Fraction] = None
    assignment: Optional[List[Fraction]] = None
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


# ===========================================
# TABLEAU
# ===========================================

class _Tableau:
    """Dense simplex tableau; the last entry of each row is the right-hand side"""

    def __init__(self, rows: List[List[Fraction]], basis: List[int], num_cols: int):
        self.rows = rows
        self.basis = basis
        self.num_cols = num_cols
        self.obj: List[Fraction] = [ZERO] * (num_cols + 1)
        self.pivots = 0

    def set_costs(self, costs: List[Fraction]):
        """Reduced-cost row for the given cost vector"""
        obj = list(costs) + [ZERO]
        for row, b in zip(self.rows, self.basis):
            cb = costs[b]
            if cb:
                for j, a in enumerate(row):
                    if a:
                        obj[j] -= cb * a
        self.obj = obj

    def pivot(self, r: int, col: int):
        row = self.rows[r]
        piv = row[col]
        if piv != ONE:
            row = [a / piv for a in row]
            self.rows[r] = row
        nonzero = [j for j, a in enumerate(row) if a]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[col]
                if f:
                    for j in nonzero:
                        other[j] -= f * row[j]
        f = self.obj[col]
        if f:
            for j in nonzero:
                self.obj[j] -= f * row[j]
        self.basis[r] = col
        self.pivots += 1

    def run(self, allowed: Sequence[bool]) -> LpStatus:
        """Bland's rule until optimal or unbounded"""
        while True:
            entering = next(
                (j for j in range(self.num_cols) if allowed[j] and self.obj[j] < 0), None
            )
            if entering is None:
                return LpStatus.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return LpStatus.UNBOUNDED
            self.pivot(best[1], entering)

    def value(self) -> Fraction:
        return -self.obj[-1]


def _solve_standard(
    rows: List[Dict[int, Fraction]],
    senses: List[Sense],
    rhs: List[Fraction],
    costs: List[Fraction],
) -> Tuple[LpStatus, Optional[List[Fraction]], int]:
    """min costs . y subject to rows (senses) rhs, y >= 0"""
    n = len(costs)
    m = len(rows)

    # normalize to nonnegative right-hand sides
    norm_rows, norm_senses, norm_rhs = [], [], []
    for row, sense, b in zip(rows, senses, rhs):
        if b < 0:
            row = {j: -a for j, a in row.items()}
            b = -b
            sense = {Sense.LE: Sense.GE, Sense.GE: Sense.LE, Sense.EQ: Sense.EQ}[sense]
        norm_rows.append(row)
        norm_senses.append(sense)
        norm_rhs.append(b)

    num_slack = sum(1 for s in norm_senses if s != Sense.EQ)
    num_art = sum(1 for s in norm_senses if s != Sense.LE)
    num_cols = n + num_slack + num_art

    table: List[List[Fraction]] = []
    basis: List[int] = []
    slack_col, art_col = n, n + num_slack
    for row, sense, b in zip(norm_rows, norm_senses, norm_rhs):
        line = [ZERO] * (num_cols + 1)
        for j, a in row.items():
            line[j] = a
        line[-1] = b
        if sense == Sense.LE:
            line[slack_col] = ONE
            basis.append(slack_col)
            slack_col += 1
        else:
            if sense == Sense.GE:
                line[slack_col] = -ONE
                slack_col += 1
            line[art_col] = ONE
            basis.append(art_col)
            art_col += 1
        table.append(line)

    tableau = _Tableau(table, basis, num_cols)
    first_art = n + num_slack

    if num_art:
        phase1 = [ZERO] * first_art + [ONE] * num_art
        tableau.set_costs(phase1)
        tableau.run([True] * num_cols)
        if tableau.value() > 0:
            return LpStatus.INFEASIBLE, None, tableau.pivots
        # drive artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tableau.rows):
            if tableau.basis[r] >= first_art:
                row = tableau.rows[r]
                col = next((j for j in range(first_art) if row[j]), None)
                if col is None:
                    del tableau.rows[r]
                    del tableau.basis[r]
                    continue
                tableau.pivot(r, col)
            r += 1

    allowed = [j < first_art for j in range(num_cols)]
    tableau.set_costs(list(costs) + [ZERO] * (num_cols - n))
    status = tableau.run(allowed)
    if status != LpStatus.OPTIMAL:
        return status, None, tableau.pivots

    y = [ZERO] * n
    for row, b in zip(tableau.rows, tableau.basis):
        if b < n:
            y[b] = row[-1]
    logger.debug("simplex finished: %d rows, %d columns, %d pivots", m, num_cols, tableau.pivots)
    return LpStatus.OPTIMAL, y, tableau.pivots


def solve_lp(problem: LpProblem) -> LpResult:
    """
    Exact optimum of the LP relaxation (binary flags are ignored).

    Fixed variables (lower == upper) are substituted out. Upper bounds are
    added lazily: only bounds violated by an intermediate optimum become
    explicit rows, which keeps covering programs small.
    """
    problem.validate()
    n = problem.num_variables
    free = [j for j in range(n) if problem.upper[j] is None or problem.upper[j] != problem.lower[j]]
    column = {j: i for i, j in enumerate(free)}
    shift = problem.lower

    base_rows, base_senses, base_rhs = [], [], []
    for c in problem.constraints:
        row: Dict[int, Fraction] = {}
        b = c.rhs
        for j, a in c.coeffs:
            b -= a * shift[j]
            if j in column:
                row[column[j]] = a
        if not row:
            ok = (c.sense == Sense.LE and b >= 0) or (c.sense == Sense.GE and b <= 0) or (
                c.sense == Sense.EQ and b == 0
            )
            if not ok:
                return LpResult(LpStatus.INFEASIBLE)
            continue
        base_rows.append(row)
        base_senses.append(c.sense)
        base_rhs.append(b)

    costs = [problem.objective[j] for j in free]
    constant = sum((problem.objective[j] * shift[j] for j in range(n)), ZERO)
    bounded = [j for j in free if problem.upper[j] is not None]
    active: set = set()
    pivots = 0

    while True:
        rows = base_rows + [{column[j]: ONE} for j in sorted(active)]
        senses = base_senses + [Sense.LE] * len(active)
        rhs = base_rhs + [problem.upper[j] - shift[j] for j in sorted(active)]
        status, y, used = _solve_standard(rows, senses, rhs, costs)
        pivots += used

        if status == LpStatus.INFEASIBLE:
            return LpResult(status, pivots=pivots)
        if status == LpStatus.UNBOUNDED:
            if len(active) < len(bounded):
                active.update(bounded)
                continue
            return LpResult(status, pivots=pivots)

        violated = [j for j in bounded if j not in active and y[column[j]] > problem.upper[j] - shift[j]]
        if not violated:
            break
        active.update(violated)

    x = list(shift)
    for j in free:
        x[j] = shift[j] + y[column[j]]
    optimum = constant + sum((c * v for c, v in zip(costs, y)), ZERO)
    return LpResult(LpStatus.OPTIMAL, optimum, x, pivots)
