"""Finite hidden-variable models with per-context outcome copies.

A model carries one 0/1 table per (context, outcome) incidence over a finite
sample space.  Its faithfulness parameter is the largest probability that two
copies of the same outcome disagree; collapsing the copies by pointwise
product yields an ordinary non-contextual model, and the loss incurred is
bounded by the per-outcome multiplicities.  Everything here is exact rational
arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .classical import beta_classical
from .hypergraph import ContextHypergraph, context_multiplicities, exclusivity_graph
from .rationals import format_rational, parse_rational

ZERO = Fraction(0)


class HVModelFormatError(ValueError):
    """A hidden-variable model document violates the input schema."""


@dataclass(frozen=True)
class FiniteHVModel:
    """Sample space with exact probabilities and per-incidence 0/1 tables."""

    hypergraph: ContextHypergraph
    mu: tuple[Fraction, ...]
    tables: Mapping[tuple[int, str], tuple[int, ...]]

    def __post_init__(self) -> None:
        uniform = len(set(self.mu)) <= 1
        object.__setattr__(self, "_uniform", uniform)

    @property
    def size(self) -> int:
        return len(self.mu)

    def incidences(self) -> list[tuple[int, str]]:
        return [
            (ci, outcome)
            for ci, ctx in enumerate(self.hypergraph.contexts)
            for outcome in ctx
        ]

    def event_probability(self, points: list[int]) -> Fraction:
        """Exact measure of a set of sample points (uniform fast path)."""
        if not points:
            return ZERO
        if getattr(self, "_uniform", False):
            return self.mu[0] * len(points)
        return sum((self.mu[w] for w in points), ZERO)


@dataclass(frozen=True)
class CollapsedModel:
    """One 0/1 table per outcome: the pointwise product of all its copies."""

    hypergraph: ContextHypergraph
    mu: tuple[Fraction, ...]
    values: Mapping[str, tuple[int, ...]]


@dataclass(frozen=True)
class ONCReport:
    """Exact disagreement probabilities between copies of shared outcomes."""

    epsilon_max: Fraction
    disagreements: Mapping[tuple[str, int, int], Fraction]
    feasible: bool
    violations: tuple[tuple[int, int], ...]  # (context index, sample point)


class CollapseMargin(NamedTuple):
    probability: Fraction  # Pr{some copy differs from the collapsed value}
    bound: Fraction  # (k_i - 1) * epsilon_max
    margin: Fraction  # bound - probability, nonnegative


def _check_model(hypergraph: ContextHypergraph, model: FiniteHVModel) -> None:
    if model.hypergraph is not hypergraph and model.hypergraph != hypergraph:
        raise ValueError("model was built against a different hypergraph")
    size = model.size
    if size == 0:
        raise ValueError("model needs at least one sample point")
    if any(p < 0 for p in model.mu):
        raise ValueError("probabilities must be nonnegative")
    total = sum(model.mu, ZERO)
    if total != 1:
        raise ValueError(f"probabilities sum to {total}, expected exactly 1")
    for ci, ctx in enumerate(hypergraph.contexts):
        for outcome in ctx:
            key = (ci, outcome)
            if key not in model.tables:
                raise ValueError(f"missing table for incidence {ci}/{outcome}")
            table = model.tables[key]
            if len(table) != size:
                raise ValueError(
                    f"table {ci}/{outcome} has {len(table)} entries, expected {size}"
                )
            if any(v not in (0, 1) for v in table):
                raise ValueError(f"table {ci}/{outcome} has non-binary entries")


def validate_onc(hypergraph: ContextHypergraph, model: FiniteHVModel) -> ONCReport:
    """Measure every pairwise copy disagreement and the per-context feasibility.

    ``epsilon_max`` is the maximum disagreement probability over all
    (outcome, context, context) triples sharing the outcome; the full table
    is returned so weaker per-pair readings can be audited.
    """
    _check_model(hypergraph, model)

    violations: list[tuple[int, int]] = []
    for ci, ctx in enumerate(hypergraph.contexts):
        columns = [model.tables[(ci, o)] for o in ctx]
        for w in range(model.size):
            if sum(col[w] for col in columns) > 1:
                violations.append((ci, w))

    containing: dict[str, list[int]] = {o: [] for o in hypergraph.outcomes}
    for ci, ctx in enumerate(hypergraph.contexts):
        for outcome in ctx:
            containing[outcome].append(ci)

    disagreements: dict[tuple[str, int, int], Fraction] = {}
    eps_max = ZERO
    for outcome, indices in containing.items():
        for a in range(len(indices)):
            for b in range(a + 1, len(indices)):
                ca, cb = indices[a], indices[b]
                ta, tb = model.tables[(ca, outcome)], model.tables[(cb, outcome)]
                differ = [w for w in range(model.size) if ta[w] != tb[w]]
                p = model.event_probability(differ)
                disagreements[(outcome, ca, cb)] = p
                if p > eps_max:
                    eps_max = p
    return ONCReport(eps_max, disagreements, not violations, tuple(violations))


def collapse(model: FiniteHVModel) -> CollapsedModel:
    """Pointwise product of all copies of each outcome.

    The result satisfies the per-context constraint everywhere because each
    product is dominated by any single copy.  An outcome occurring in no
    context has the empty product, identically 1.
    """
    hypergraph = model.hypergraph
    containing: dict[str, list[int]] = {o: [] for o in hypergraph.outcomes}
    for ci, ctx in enumerate(hypergraph.contexts):
        for outcome in ctx:
            containing[outcome].append(ci)
    values: dict[str, tuple[int, ...]] = {}
    for outcome, indices in containing.items():
        column = [1] * model.size
        for ci in indices:
            table = model.tables[(ci, outcome)]
            column = [c & t for c, t in zip(column, table)]
        values[outcome] = tuple(column)
    return CollapsedModel(hypergraph, model.mu, values)


def collapse_margins(
    hypergraph: ContextHypergraph,
    model: FiniteHVModel,
    collapsed: CollapsedModel,
) -> dict[str, CollapseMargin]:
    """Per outcome: probability that any copy differs from the collapsed value,
    against the multiplicity bound (k_i - 1) * epsilon_max."""
    _check_model(hypergraph, model)
    eps = validate_onc(hypergraph, model).epsilon_max
    mult = context_multiplicities(hypergraph)
    containing: dict[str, list[int]] = {o: [] for o in hypergraph.outcomes}
    for ci, ctx in enumerate(hypergraph.contexts):
        for outcome in ctx:
            containing[outcome].append(ci)

    out: dict[str, CollapseMargin] = {}
    for outcome in hypergraph.outcomes:
        y = collapsed.values[outcome]
        points = [
            w
            for w in range(model.size)
            if any(model.tables[(ci, outcome)][w] != y[w] for ci in containing[outcome])
        ]
        p = model.event_probability(points)
        bound = Fraction(max(mult[outcome] - 1, 0)) * eps
        out[outcome] = CollapseMargin(p, bound, bound - p)
    return out


def epsilon_slope(hypergraph: ContextHypergraph) -> Fraction:
    """Sum of weight * (multiplicity - 1) over the outcomes.

    The slope of the robust bound in the faithfulness parameter.  Isolated
    outcomes have no copies to disagree, so they contribute zero.
    """
    mult = context_multiplicities(hypergraph)
    return sum(
        (
            hypergraph.weight(o) * max(mult[o] - 1, 0)
            for o in hypergraph.outcomes
        ),
        ZERO,
    )


def robust_bound(hypergraph: ContextHypergraph, eps: Fraction) -> Fraction:
    """Noise-robust inequality bound: classical optimum plus eps times the slope."""
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return beta_classical(hypergraph).value + eps * epsilon_slope(hypergraph)


def critical_epsilon(hypergraph: ContextHypergraph, beta_target: float) -> float:
    """Largest faithfulness parameter refuted by observing ``beta_target``.

    Observing a value at least ``beta_target`` rules out every model whose
    parameter is below the returned threshold.  When every outcome occurs in
    a single context the threshold is infinite: any violation of the
    classical bound already refutes the exact (0-faithful) models.
    """
    beta_cl = beta_classical(hypergraph).value
    if beta_target < float(beta_cl):
        raise ValueError(
            f"target {beta_target} is below the classical bound {float(beta_cl)}"
        )
    slope = epsilon_slope(hypergraph)
    if slope == 0:
        return math.inf
    return (beta_target - float(beta_cl)) / float(slope)


def expectations(
    model: FiniteHVModel, choice: Mapping[str, int]
) -> dict[str, Fraction]:
    """Exact expectation of the chosen copy of every outcome."""
    hypergraph = model.hypergraph
    out: dict[str, Fraction] = {}
    for outcome in hypergraph.outcomes:
        if outcome not in choice:
            raise ValueError(f"no context chosen for outcome {outcome!r}")
        ci = choice[outcome]
        if ci < 0 or ci >= len(hypergraph.contexts) or outcome not in hypergraph.contexts[ci]:
            raise ValueError(f"context {ci} does not contain outcome {outcome!r}")
        table = model.tables[(ci, outcome)]
        out[outcome] = model.event_probability(
            [w for w in range(model.size) if table[w] == 1]
        )
    return out


def default_context_choice(hypergraph: ContextHypergraph) -> dict[str, int]:
    """First context containing each outcome, in canonical order."""
    choice: dict[str, int] = {}
    for ci, ctx in enumerate(hypergraph.contexts):
        for outcome in ctx:
            choice.setdefault(outcome, ci)
    for outcome in hypergraph.outcomes:
        if outcome not in choice:
            raise ValueError(f"outcome {outcome!r} occurs in no context")
    return choice


def repeatability_bound(
    model: FiniteHVModel,
    outcome: str,
    ci: int,
    cj: int,
    xi: int,
    epsilon_max: Fraction | None = None,
) -> tuple[Fraction, Fraction]:
    """Conditional disagreement of two copies given the value of the first.

    Returns the exact conditional probability that the copy in context
    ``cj`` differs from ``xi`` given that the copy in ``ci`` equals ``xi``,
    together with its bound epsilon_max / Pr{first copy = xi}.  Pass a
    precomputed ``epsilon_max`` to skip re-measuring the model.
    """
    hypergraph = model.hypergraph
    if xi not in (0, 1):
        raise ValueError("xi must be 0 or 1")
    for c in (ci, cj):
        if c < 0 or c >= len(hypergraph.contexts) or outcome not in hypergraph.contexts[c]:
            raise ValueError(f"outcome {outcome!r} is not in context {c}")
    ti = model.tables[(ci, outcome)]
    tj = model.tables[(cj, outcome)]
    cond_points = [w for w in range(model.size) if ti[w] == xi]
    p_cond = model.event_probability(cond_points)
    if p_cond == 0:
        raise ValueError(
            f"conditioning event X[{ci}/{outcome}] = {xi} has probability 0"
        )
    joint = model.event_probability([w for w in cond_points if tj[w] != xi])
    conditional = joint / p_cond
    if epsilon_max is None:
        epsilon_max = validate_onc(hypergraph, model).epsilon_max
    bound = epsilon_max / p_cond
    assert conditional <= bound
    return conditional, bound


# ---------------------------------------------------------------------------
# Seeded model generator
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _draw(seed: int, point: int, channel: int) -> int:
    # counter-based stream: the value depends only on (seed, point, channel)
    h = _splitmix64(seed & _MASK64)
    h = _splitmix64(h ^ (point & _MASK64))
    h = _splitmix64(h ^ (channel & _MASK64))
    return h


def sample_onc(
    hypergraph: ContextHypergraph, eps: Fraction, seed: int, size: int
) -> FiniteHVModel:
    """Deterministic generator of feasible models with bounded copy disagreement.

    Per sample point a random independent set of the exclusivity graph seeds
    all copies identically; each incidence copy is then flipped pointwise
    with probability at most ``eps``, subject to a per-incidence quota of
    ``floor(eps * size)`` flips and to the per-context constraint (a flip
    that would violate it is discarded, not retried).  Consequently every
    copy differs from its base column on at most the quota, so the measured
    disagreement of any two copies is at most ``2 * eps`` exactly; the actual
    value is whatever :func:`validate_onc` measures.
    """
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    if size < 1:
        raise ValueError("size must be at least 1")

    n = len(hypergraph.outcomes)
    masks = exclusivity_graph(hypergraph).neighbor_masks()
    incidences = [
        (ci, pos, outcome)
        for ci, ctx in enumerate(hypergraph.contexts)
        for pos, outcome in enumerate(ctx)
    ]
    n_inc = len(incidences)
    index = {o: i for i, o in enumerate(hypergraph.outcomes)}

    # base assignment: one independent set per sample point (channels beyond
    # the flip range so base and flip draws never collide)
    base = [[0] * size for _ in range(n)]
    for w in range(size):
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = _draw(seed, w, n_inc + 2 * i) % (i + 1)
            order[i], order[j] = order[j], order[i]
        chosen = 0
        for rank, v in enumerate(order):
            if masks[v] & chosen:
                continue
            if _draw(seed, w, n_inc + 2 * rank + 1) & 1:
                chosen |= 1 << v
                base[v][w] = 1

    tables: dict[tuple[int, str], list[int]] = {
        (ci, outcome): list(base[index[outcome]])
        for ci, _, outcome in incidences
    }

    quota = int(eps * size)  # floor
    threshold = int(eps * (1 << 64))  # flip iff draw < threshold, prob <= eps
    if quota > 0 and threshold > 0:
        for inc_idx, (ci, _, outcome) in enumerate(incidences):
            ctx = hypergraph.contexts[ci]
            flips = 0
            column = tables[(ci, outcome)]
            for w in range(size):
                if flips >= quota:
                    break
                if _draw(seed, w, inc_idx) >= threshold:
                    continue
                if column[w] == 1:
                    column[w] = 0
                    flips += 1
                else:
                    occupied = any(
                        tables[(ci, other)][w] for other in ctx if other != outcome
                    )
                    if not occupied:
                        column[w] = 1
                        flips += 1

    mu = tuple([Fraction(1, size)] * size)
    return FiniteHVModel(
        hypergraph,
        mu,
        {key: tuple(col) for key, col in tables.items()},
    )


# ---------------------------------------------------------------------------
# Document format
# ---------------------------------------------------------------------------


def parse_hv_model(text: str, hypergraph: ContextHypergraph) -> FiniteHVModel:
    """Parse the hidden-variable model JSON document against a hypergraph.

    Shape: ``{"omega": int, "mu": ["p/q", ...],
    "tables": {"<context-index>/<outcome-id>": [0, 1, ...]}}``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HVModelFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise HVModelFormatError("top-level value must be an object")
    omega = doc.get("omega")
    if not isinstance(omega, int) or isinstance(omega, bool) or omega < 1:
        raise HVModelFormatError("omega must be a positive integer")
    mu_raw = doc.get("mu")
    if not isinstance(mu_raw, list) or len(mu_raw) != omega:
        raise HVModelFormatError(f"mu must be a list of {omega} rationals")
    try:
        mu = tuple(parse_rational(v, location=f"mu[{i}]") for i, v in enumerate(mu_raw))
    except ValueError as exc:
        raise HVModelFormatError(str(exc)) from exc

    tables_raw = doc.get("tables")
    if not isinstance(tables_raw, dict):
        raise HVModelFormatError("tables must be an object")
    tables: dict[tuple[int, str], tuple[int, ...]] = {}
    for key, column in tables_raw.items():
        head, sep, outcome = key.partition("/")
        if not sep or not head.isdigit():
            raise HVModelFormatError(
                f"tables[{key}]: key must look like '<context-index>/<outcome-id>'"
            )
        ci = int(head)
        if ci >= len(hypergraph.contexts):
            raise HVModelFormatError(f"tables[{key}]: context index out of range")
        if outcome not in hypergraph.contexts[ci]:
            raise HVModelFormatError(
                f"tables[{key}]: outcome {outcome!r} not in context {ci}"
            )
        if (
            not isinstance(column, list)
            or len(column) != omega
            or any(v not in (0, 1) or isinstance(v, bool) for v in column)
        ):
            raise HVModelFormatError(
                f"tables[{key}]: must be a list of {omega} binary values"
            )
        tables[(ci, outcome)] = tuple(column)

    model = FiniteHVModel(hypergraph, mu, tables)
    try:
        _check_model(hypergraph, model)
    except ValueError as exc:
        raise HVModelFormatError(str(exc)) from exc
    return model


def load_hv_model(path: str, hypergraph: ContextHypergraph) -> FiniteHVModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_hv_model(handle.read(), hypergraph)


def emit_hv_model(model: FiniteHVModel) -> str:
    tables = {
        f"{ci}/{outcome}": list(model.tables[(ci, outcome)])
        for ci, ctx in enumerate(model.hypergraph.contexts)
        for outcome in ctx
    }
    doc = {
        "omega": model.size,
        "mu": [format_rational(p) for p in model.mu],
        "tables": tables,
    }
    return json.dumps(doc, indent=2) + "\n"
