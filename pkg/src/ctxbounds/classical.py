"""Exact hidden-variable maxima over deterministic non-contextual assignments.

A deterministic assignment picks at most one outcome per context, i.e. its
support is an independent set of the exclusivity graph.  The classical bound
is the maximum weight of such a set; it is computed exactly with rational
arithmetic by branch and bound, with full enumeration as the small-instance
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .hypergraph import ContextHypergraph, exclusivity_graph, context_multiplicities

DEFAULT_SEARCH_BUDGET = 64
DEFAULT_ENUMERATION_CAP = 24


class InstanceTooLargeError(RuntimeError):
    """The instance exceeds the configured exact-search budget."""


@dataclass(frozen=True)
class DeterministicAssignment:
    """A 0/1 value per outcome; valid iff every context sums to at most 1."""

    values: Mapping[str, int]

    def support(self) -> tuple[str, ...]:
        return tuple(o for o, v in self.values.items() if v == 1)


@dataclass(frozen=True)
class ClassicalBoundResult:
    value: Fraction
    witness: DeterministicAssignment


def is_nc_assignment(
    hypergraph: ContextHypergraph, assignment: DeterministicAssignment
) -> bool:
    """True iff every context contains at most one outcome with value 1."""
    values = assignment.values
    for outcome in hypergraph.outcomes:
        if outcome not in values:
            raise ValueError(f"assignment is missing outcome {outcome!r}")
    for ctx in hypergraph.contexts:
        if sum(values[o] for o in ctx) > 1:
            return False
    return True


def enumerate_nc_assignments(
    hypergraph: ContextHypergraph, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[DeterministicAssignment]:
    """Yield every valid deterministic assignment once, in canonical order.

    Canonical order is lexicographic on the support read as a sorted index
    list, with shorter prefixes first: the empty assignment, then all sets
    containing outcome 0, and so on.  Serves as the brute-force oracle for
    :func:`beta_classical`.
    """
    n = len(hypergraph.outcomes)
    if n > cap:
        raise InstanceTooLargeError(
            f"{n} outcomes exceed the enumeration cap of {cap}"
        )
    masks = exclusivity_graph(hypergraph).neighbor_masks()
    outcomes = hypergraph.outcomes

    def to_assignment(chosen: int) -> DeterministicAssignment:
        return DeterministicAssignment(
            {o: (chosen >> i) & 1 for i, o in enumerate(outcomes)}
        )

    def rec(start: int, chosen: int, blocked: int) -> Iterator[DeterministicAssignment]:
        yield to_assignment(chosen)
        for v in range(start, n):
            if not (blocked >> v) & 1:
                yield from rec(v + 1, chosen | (1 << v), blocked | masks[v] | (1 << v))

    yield from rec(0, 0, 0)


def _clique_cover_bound(
    mask: int, masks: list[int], weights: list[Fraction]
) -> Fraction:
    # Greedy clique cover of the remaining vertices; the independent set can
    # take at most the heaviest vertex from each clique.
    cliques: list[tuple[int, Fraction]] = []
    bound = Fraction(0)
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        placed = False
        for idx, (members, best) in enumerate(cliques):
            if members & ~masks[v] == 0:  # v adjacent to every member
                if weights[v] > best:
                    bound += weights[v] - best
                    best = weights[v]
                cliques[idx] = (members | (1 << v), best)
                placed = True
                break
        if not placed:
            cliques.append((1 << v, weights[v]))
            bound += weights[v]
    return bound


def _max_independent_weight(
    mask: int, masks: list[int], weights: list[Fraction]
) -> Fraction:
    """Exact max-weight independent set value on the vertices in ``mask``."""
    best = Fraction(0)

    def rec(mask: int, acc: Fraction) -> None:
        nonlocal best
        if acc > best:
            best = acc
        if not mask:
            return
        if acc + _clique_cover_bound(mask, masks, weights) <= best:
            return
        # branch on the heaviest remaining vertex, lowest index on ties
        v, vw = -1, Fraction(-1)
        m = mask
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            if weights[u] > vw:
                v, vw = u, weights[u]
        rec(mask & ~(masks[v] | (1 << v)), acc + vw)
        rec(mask & ~(1 << v), acc)

    rec(mask, Fraction(0))
    return best


def beta_classical(
    hypergraph: ContextHypergraph, max_vertices: int = DEFAULT_SEARCH_BUDGET
) -> ClassicalBoundResult:
    """Exact non-contextual maximum of the weighted sum of outcome indicators.

    Returns the optimum together with the lexicographically smallest optimal
    witness in canonical outcome order (supports compared as sorted index
    lists, shorter prefixes first).  Raises :class:`InstanceTooLargeError`
    instead of ever returning an approximation.
    """
    n = len(hypergraph.outcomes)
    if n > max_vertices:
        raise InstanceTooLargeError(
            f"{n} outcomes exceed the search budget of {max_vertices}"
        )
    weights = hypergraph.weight_vector()
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    masks = exclusivity_graph(hypergraph).neighbor_masks()
    full = (1 << n) - 1

    optimum = _max_independent_weight(full, masks, weights)

    # Lexicographic extraction: prefer including the earliest vertex while the
    # optimum stays attainable; stop as soon as the accumulated weight reaches
    # it (a shorter support is lexicographically smaller than any extension).
    chosen = 0
    acc = Fraction(0)
    available = full
    for v in range(n):
        if acc == optimum:
            break
        if not (available >> v) & 1:
            continue
        rest = available & ~(masks[v] | (1 << v)) & ~((1 << (v + 1)) - 1)
        if acc + weights[v] + _max_independent_weight(rest, masks, weights) == optimum:
            chosen |= 1 << v
            acc += weights[v]
            available &= ~(masks[v] | (1 << v))
        else:
            available &= ~(1 << v)

    witness = DeterministicAssignment(
        {o: (chosen >> i) & 1 for i, o in enumerate(hypergraph.outcomes)}
    )
    return ClassicalBoundResult(optimum, witness)


def bks_equality_deficit(
    hypergraph: ContextHypergraph, max_vertices: int = DEFAULT_SEARCH_BUDGET
) -> Fraction:
    """Maximum of the total per-context sum over all valid assignments.

    Each outcome contributes once per context containing it, so the objective
    is the independent-set maximum under multiplicity weights.  A value at
    most ``len(contexts) - 1`` certifies that no assignment can pick exactly
    one outcome in every context simultaneously.
    """
    n = len(hypergraph.outcomes)
    if n > max_vertices:
        raise InstanceTooLargeError(
            f"{n} outcomes exceed the search budget of {max_vertices}"
        )
    mult = context_multiplicities(hypergraph)
    weights = [Fraction(mult[o]) for o in hypergraph.outcomes]
    masks = exclusivity_graph(hypergraph).neighbor_masks()
    return _max_independent_weight((1 << n) - 1, masks, weights)
