"""Context hypergraphs and the combinatorial structure derived from them.

A scenario is a finite set of outcome labels together with a family of
contexts (subsets of outcomes that can be measured jointly).  Everything
downstream -- classical, generalized-probabilistic and spectral bounds --
consumes the immutable :class:`ContextHypergraph` built here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .rationals import format_rational, parse_rational


class Finding(NamedTuple):
    """One validation observation: ``(severity, location, message)``."""

    severity: str  # "error" | "warning" | "info"
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural check; ``ok`` iff no error-level finding."""

    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "warning")

    def render(self) -> str:
        if not self.findings:
            return "ok: no findings"
        lines = [f"{f.severity}: {f.location}: {f.message}" for f in self.findings]
        return "\n".join(lines)


class HypergraphFormatError(ValueError):
    """A hypergraph document violates the input schema."""

    def __init__(self, findings: Iterable[Finding]):
        self.findings = tuple(findings)
        super().__init__("; ".join(f"{f.location}: {f.message}" for f in self.findings))


@dataclass(frozen=True)
class ContextHypergraph:
    """Outcome set, context family and nonnegative rational weights.

    Canonical conventions fixed at construction time:

    * outcome order is declaration (file) order and is the tie-breaking
      order used by every deterministic computation downstream;
    * members of a context are stored sorted by canonical outcome order;
    * duplicate contexts are collapsed to their first occurrence, so the
      per-outcome multiplicities count distinct contexts only.  A context
      that is a strict subset of another is kept: it constrains models
      identically but changes the multiplicities.
    """

    name: str
    outcomes: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    weights: Mapping[str, Fraction] = field(default_factory=dict)

    @staticmethod
    def build(
        name: str,
        outcomes: Sequence[str],
        contexts: Iterable[Iterable[str]],
        weights: Mapping[str, object] | None = None,
    ) -> "ContextHypergraph":
        """Canonicalize raw data into a hypergraph (no validity checks).

        Use :func:`validate` to obtain a report on the invariants; use
        :func:`parse_hypergraph` for fail-fast loading from a document.
        """
        outcomes = tuple(str(o) for o in outcomes)
        index = {o: i for i, o in enumerate(outcomes)}

        def member_key(o: str) -> tuple[int, object]:
            return (0, index[o]) if o in index else (1, o)

        canonical: list[tuple[str, ...]] = []
        seen: set[tuple[str, ...]] = set()
        for ctx in contexts:
            members = tuple(sorted((str(o) for o in ctx), key=member_key))
            if members not in seen:
                seen.add(members)
                canonical.append(members)

        wmap: dict[str, Fraction] = {o: Fraction(1) for o in outcomes}
        if weights:
            for key, value in weights.items():
                wmap[str(key)] = (
                    value if isinstance(value, Fraction) else Fraction(value)  # type: ignore[arg-type]
                )
        return ContextHypergraph(str(name), outcomes, tuple(canonical), wmap)

    def weight(self, outcome: str) -> Fraction:
        return self.weights.get(outcome, Fraction(1))

    def index_of(self, outcome: str) -> int:
        return self.outcomes.index(outcome)

    def weight_vector(self) -> list[Fraction]:
        return [self.weight(o) for o in self.outcomes]


@dataclass(frozen=True)
class ExclusivityGraph:
    """Simple graph on the outcomes: an edge iff two outcomes co-occur in a context."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[int, int]]  # index pairs, i < j

    def adjacent(self, a: int, b: int) -> bool:
        if a == b:
            return False
        return (min(a, b), max(a, b)) in self.edges

    def neighbor_masks(self) -> list[int]:
        """Per-vertex bitmasks of neighbours (vertex itself excluded)."""
        masks = [0] * len(self.vertices)
        for i, j in self.edges:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return masks

    @property
    def n(self) -> int:
        return len(self.vertices)


def validate(hypergraph: ContextHypergraph) -> ValidationReport:
    """Check every structural invariant; violations become findings, never raises."""
    findings: list[Finding] = []
    seen: set[str] = set()
    for pos, outcome in enumerate(hypergraph.outcomes):
        if outcome in seen:
            findings.append(
                Finding("error", f"outcomes[{pos}]", f"duplicate outcome id {outcome!r}")
            )
        seen.add(outcome)

    declared = set(hypergraph.outcomes)
    covered: set[str] = set()
    for ci, ctx in enumerate(hypergraph.contexts):
        loc = f"contexts[{ci}]"
        if len(ctx) == 0:
            findings.append(Finding("error", loc, "context is empty"))
            continue
        ctx_seen: set[str] = set()
        for outcome in ctx:
            if outcome not in declared:
                findings.append(
                    Finding("error", loc, f"undeclared outcome id {outcome!r}")
                )
            if outcome in ctx_seen:
                findings.append(
                    Finding("error", loc, f"duplicate id {outcome!r} within context")
                )
            ctx_seen.add(outcome)
        covered.update(ctx_seen)

    for outcome, w in hypergraph.weights.items():
        if outcome not in declared:
            findings.append(
                Finding("error", f"weights[{outcome}]", "weight for undeclared outcome")
            )
        if w < 0:
            findings.append(
                Finding("error", f"weights[{outcome}]", f"negative weight {w}")
            )

    for outcome in hypergraph.outcomes:
        if outcome not in covered:
            findings.append(
                Finding(
                    "warning",
                    f"outcomes[{outcome}]",
                    "outcome belongs to no context (unconstrained in every model)",
                )
            )
    return ValidationReport(tuple(findings))


def exclusivity_graph(hypergraph: ContextHypergraph) -> ExclusivityGraph:
    """Derive the co-occurrence graph: i ~ j iff some context contains both."""
    index = {o: i for i, o in enumerate(hypergraph.outcomes)}
    edges: set[tuple[int, int]] = set()
    for ctx in hypergraph.contexts:
        ids = sorted(index[o] for o in ctx if o in index)
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                if ids[a] != ids[b]:
                    edges.add((ids[a], ids[b]))
    return ExclusivityGraph(hypergraph.outcomes, frozenset(edges))


def context_multiplicities(hypergraph: ContextHypergraph) -> dict[str, int]:
    """Number of distinct contexts each outcome occurs in (0 for isolated outcomes)."""
    counts = {o: 0 for o in hypergraph.outcomes}
    for ctx in hypergraph.contexts:
        for outcome in set(ctx):
            if outcome in counts:
                counts[outcome] += 1
    return counts


def parse_hypergraph(text: str) -> ContextHypergraph:
    """Parse the hypergraph JSON document, failing fast on any schema error.

    Expected shape::

        {"name": str, "outcomes": [str], "weights": {str: "p/q" | int},
         "contexts": [[str]]}

    Weights default to 1; bare numbers must be integers.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphFormatError(
            [Finding("error", "document", f"invalid JSON: {exc}")]
        ) from exc
    if not isinstance(doc, dict):
        raise HypergraphFormatError(
            [Finding("error", "document", "top-level value must be an object")]
        )

    findings: list[Finding] = []
    name = doc.get("name", "")
    if not isinstance(name, str):
        findings.append(Finding("error", "name", "must be a string"))
        name = ""

    outcomes_raw = doc.get("outcomes")
    if not isinstance(outcomes_raw, list) or not all(
        isinstance(o, str) for o in outcomes_raw
    ):
        raise HypergraphFormatError(
            findings + [Finding("error", "outcomes", "must be a list of strings")]
        )
    outcomes = list(outcomes_raw)

    contexts_raw = doc.get("contexts")
    if not isinstance(contexts_raw, list) or not all(
        isinstance(c, list) and all(isinstance(o, str) for o in c)
        for c in contexts_raw
    ):
        raise HypergraphFormatError(
            findings
            + [Finding("error", "contexts", "must be a list of lists of outcome ids")]
        )

    weights_raw = doc.get("weights", {})
    if not isinstance(weights_raw, dict):
        raise HypergraphFormatError(
            findings + [Finding("error", "weights", "must be an object")]
        )
    weights: dict[str, Fraction] = {}
    for key, value in weights_raw.items():
        try:
            weights[key] = parse_rational(value, location=f"weights[{key}]")
        except ValueError as exc:
            findings.append(Finding("error", f"weights[{key}]", str(exc)))

    hypergraph = ContextHypergraph.build(name, outcomes, contexts_raw, weights)
    report = validate(hypergraph)
    findings.extend(report.errors())
    if findings:
        raise HypergraphFormatError(findings)
    return hypergraph


def load_hypergraph(path: str) -> ContextHypergraph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_hypergraph(handle.read())


def emit_hypergraph(hypergraph: ContextHypergraph) -> str:
    """Serialize back to the document format (canonical field order)."""
    weights_doc: dict[str, object] = {}
    for outcome in hypergraph.outcomes:
        w = hypergraph.weight(outcome)
        weights_doc[outcome] = int(w) if w.denominator == 1 else format_rational(w)
    doc = {
        "name": hypergraph.name,
        "outcomes": list(hypergraph.outcomes),
        "weights": weights_doc,
        "contexts": [list(ctx) for ctx in hypergraph.contexts],
    }
    return json.dumps(doc, indent=2) + "\n"
