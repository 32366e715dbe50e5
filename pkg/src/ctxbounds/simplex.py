"""Dense exact-rational simplex (two phase, Bland's rule).

Solves max c.x subject to A x <= b, x >= 0 over Fractions.  Rows with
negative right-hand side get an artificial variable and a feasibility phase.
Desk-scale only: dense tableau, no factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPSolution:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: Fraction
    x: list[Fraction]
    nonunique: bool  # a nonbasic variable had zero reduced cost at optimum


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols  # columns excluding the rhs

    def pivot(self, row: int, col: int) -> None:
        rows = self.rows
        piv = rows[row][col]
        rows[row] = [v / piv for v in rows[row]]
        prow = rows[row]
        for i, r in enumerate(rows):
            if i != row and r[col] != 0:
                f = r[col]
                rows[i] = [a - f * b for a, b in zip(r, prow)]
        self.basis[row] = col

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        m = len(self.rows)
        rc = list(cost)
        for i in range(m):
            cb = cost[self.basis[i]]
            if cb != 0:
                row = self.rows[i]
                for j in range(self.ncols):
                    if row[j] != 0:
                        rc[j] -= cb * row[j]
        return rc

    def optimize(self, cost: list[Fraction], frozen: set[int] | None = None) -> str:
        """Run primal simplex to optimality under Bland's rule (maximization)."""
        frozen = frozen or set()
        basic = set(self.basis)
        while True:
            rc = self.reduced_costs(cost)
            entering = -1
            for j in range(self.ncols):
                if j in basic or j in frozen:
                    continue
                if rc[j] > 0:
                    entering = j
                    break
            if entering < 0:
                return "optimal"
            leave = -1
            best: Fraction | None = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            basic.discard(self.basis[leave])
            basic.add(entering)
            self.pivot(leave, entering)


def solve_max(
    c: Sequence[Fraction], a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> LPSolution:
    """Maximize ``c.x`` over ``a x <= b, x >= 0`` exactly."""
    m, n = len(a), len(c)
    c = [Fraction(v) for v in c]
    neg_rows = [i for i in range(m) if Fraction(b[i]) < 0]
    total = n + m + len(neg_rows)

    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(v) for v in a[i]]
        row += [ZERO] * (m + len(neg_rows)) + [Fraction(b[i])]
        row[n + i] = ONE
        if Fraction(b[i]) < 0:
            row = [-v for v in row]
        rows.append(row)

    basis: list[int] = []
    art_cols: list[int] = []
    k = n + m
    for i in range(m):
        if i in neg_rows:
            rows[i][k] = ONE
            basis.append(k)
            art_cols.append(k)
            k += 1
        else:
            basis.append(n + i)

    tab = _Tableau(rows, basis, total)

    if art_cols:
        phase1 = [ZERO] * total
        for j in art_cols:
            phase1[j] = Fraction(-1)
        tab.optimize(phase1)
        infeas = sum(
            rows[i][-1] for i in range(m) if tab.basis[i] in art_cols
        )
        if infeas != 0:
            return LPSolution("infeasible", ZERO, [ZERO] * n, False)
        # pivot remaining degenerate artificials out of the basis
        art_set = set(art_cols)
        for i in range(m):
            if tab.basis[i] in art_set:
                for j in range(total):
                    if j not in art_set and rows[i][j] != 0:
                        tab.pivot(i, j)
                        break

    art_set = set(art_cols)
    cost = [Fraction(v) for v in c] + [ZERO] * (total - n)
    status = tab.optimize(cost, frozen=art_set)
    if status != "optimal":
        return LPSolution("unbounded", ZERO, [ZERO] * n, False)

    x = [ZERO] * n
    for i, var in enumerate(tab.basis):
        if var < n:
            x[var] = rows[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)

    rc = tab.reduced_costs(cost)
    basic = set(tab.basis)
    nonunique = any(
        j not in basic and j not in art_set and rc[j] == 0 for j in range(total)
    )
    return LPSolution("optimal", value, x, nonunique)
