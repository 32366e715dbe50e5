"""Generalized-probabilistic bound: exact LP over the fractional packing polytope.

The feasible set relaxes deterministic assignments to per-outcome values in
[0, 1] with every context summing to at most 1.  The optimum and its dual
(a covering LP, solved independently) are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .hypergraph import ContextHypergraph
from .simplex import solve_max

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FractionalAssignment:
    """Per-outcome values in [0,1]; every context sums to at most 1."""

    t: Mapping[str, Fraction]


@dataclass(frozen=True)
class GeneralBoundResult:
    value: Fraction
    witness: FractionalAssignment
    nonunique: bool = False


def _packing_rows(
    hypergraph: ContextHypergraph,
) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(hypergraph.outcomes)
    index = {o: i for i, o in enumerate(hypergraph.outcomes)}
    rows: list[list[Fraction]] = []
    for ctx in hypergraph.contexts:
        row = [ZERO] * n
        for outcome in ctx:
            row[index[outcome]] = ONE
        rows.append(row)
    for i in range(n):  # box constraints t_i <= 1 (isolated outcomes included)
        row = [ZERO] * n
        row[i] = ONE
        rows.append(row)
    return rows, [ONE] * len(rows)


def beta_general(hypergraph: ContextHypergraph) -> GeneralBoundResult:
    """Exact optimum of the packing LP; the witness is a vertex of the polytope."""
    weights = hypergraph.weight_vector()
    rows, rhs = _packing_rows(hypergraph)
    sol = solve_max(weights, rows, rhs)
    if sol.status != "optimal":  # the polytope is a subset of the unit box
        raise RuntimeError(f"packing LP unexpectedly {sol.status}")
    witness = FractionalAssignment(dict(zip(hypergraph.outcomes, sol.x)))
    return GeneralBoundResult(sol.value, witness, sol.nonunique)


def beta_general_dual(hypergraph: ContextHypergraph) -> Fraction:
    """Optimum of the dual covering LP, solved as its own exact LP.

    Variables: one per context and one per box row, all nonnegative; each
    outcome must be covered with total weight at least its objective
    coefficient.  By strong duality this equals :func:`beta_general`.
    """
    weights = hypergraph.weight_vector()
    rows, _ = _packing_rows(hypergraph)
    nvars = len(rows)
    n = len(weights)
    # min 1.u  s.t.  (rows)^T u >= weights  ==  max (-1).u  s.t. -(rows)^T u <= -weights
    a = [[-rows[j][i] for j in range(nvars)] for i in range(n)]
    b = [-w for w in weights]
    c = [Fraction(-1)] * nvars
    sol = solve_max(c, a, b)
    if sol.status != "optimal":
        raise RuntimeError(f"covering LP unexpectedly {sol.status}")
    return -sol.value


def check_fractional(
    hypergraph: ContextHypergraph, assignment: FractionalAssignment
) -> bool:
    """Exact feasibility check of the box and context constraints."""
    t = assignment.t
    for outcome in hypergraph.outcomes:
        if outcome not in t:
            raise ValueError(f"assignment is missing outcome {outcome!r}")
        value = Fraction(t[outcome])
        if value < 0 or value > 1:
            return False
    for ctx in hypergraph.contexts:
        if sum((Fraction(t[o]) for o in ctx), ZERO) > 1:
            return False
    return True
