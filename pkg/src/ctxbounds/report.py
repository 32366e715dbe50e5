"""Aggregated bound reports: computation, JSON round-trip and text rendering.

Serialization contract: exact rationals appear as ``"p/q"`` strings with a
decimal convenience field, floats carry 9 significant digits, and the JSON
payload is byte-identical across runs with the same flags (timings are kept
on the dataclass for callers but never serialized).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .classical import beta_classical
from .hypergraph import ContextHypergraph, context_multiplicities, exclusivity_graph
from .lp import beta_general
from .onc import critical_epsilon, epsilon_slope, robust_bound
from .rationals import format_float, format_rational, round_float
from .theta import DEFAULT_SDP_ITERS, DEFAULT_SDP_TOL, lovasz_theta

SCHEMA_VERSION = 1


@dataclass
class BoundsReport:
    instance: str
    multiplicities: dict[str, int] = field(default_factory=dict)
    beta_cl: Fraction | None = None
    classical_witness: tuple[str, ...] | None = None
    beta_g: Fraction | None = None
    lp_witness: dict[str, Fraction] | None = None
    lp_nonunique: bool | None = None
    beta_qu: float | None = None
    beta_qu_error: float | None = None
    beta_qu_certified: bool | None = None
    epsilon_slope: Fraction = Fraction(0)
    target: float | None = None
    critical_epsilon: float | None = None
    epsilon: Fraction | None = None
    robust_bound: Fraction | None = None
    timings: dict[str, float] = field(default_factory=dict, compare=False)


def _rational_entry(q: Fraction) -> dict[str, str]:
    return {"rational": format_rational(q), "decimal": format_float(float(q))}


def _parse_rational_entry(entry: dict) -> Fraction:
    return Fraction(entry["rational"])


def _float_entry(x: float) -> object:
    if math.isinf(x):
        return "inf"
    return round_float(x)


def _parse_float_entry(value: object) -> float:
    if value == "inf":
        return math.inf
    return float(value)  # type: ignore[arg-type]


def compute_bounds_report(
    hypergraph: ContextHypergraph,
    bounds: tuple[str, ...] = ("cl", "g", "qu"),
    target: float | str | None = None,
    epsilon: Fraction | None = None,
    sdp_tol: float = DEFAULT_SDP_TOL,
    sdp_iters: int = DEFAULT_SDP_ITERS,
) -> BoundsReport:
    """Compute the requested bounds and robustness quantities for a scenario.

    ``target`` is either the string ``"qu"`` (use the computed spectral
    bound) or a number; it yields the critical faithfulness threshold.
    ``epsilon`` yields the noise-robust bound at that parameter.
    """
    report = BoundsReport(instance=hypergraph.name)
    report.multiplicities = context_multiplicities(hypergraph)
    report.epsilon_slope = epsilon_slope(hypergraph)

    if "cl" in bounds or target is not None or epsilon is not None:
        start = time.perf_counter()
        cl = beta_classical(hypergraph)
        report.timings["classical"] = time.perf_counter() - start
        if "cl" in bounds:
            report.beta_cl = cl.value
            report.classical_witness = cl.witness.support()
    if "g" in bounds:
        start = time.perf_counter()
        lp = beta_general(hypergraph)
        report.timings["lp"] = time.perf_counter() - start
        report.beta_g = lp.value
        report.lp_witness = dict(lp.witness.t)
        report.lp_nonunique = lp.nonunique
    if "qu" in bounds:
        start = time.perf_counter()
        qu = lovasz_theta(
            exclusivity_graph(hypergraph),
            hypergraph.weights,
            tol=sdp_tol,
            max_iters=sdp_iters,
        )
        report.timings["sdp"] = time.perf_counter() - start
        report.beta_qu = qu.value
        report.beta_qu_error = qu.certified_error
        report.beta_qu_certified = qu.certified

    if target is not None:
        if target == "qu":
            if report.beta_qu is None:
                raise ValueError("target 'qu' needs the quantum bound to be computed")
            target_value = report.beta_qu
        else:
            target_value = float(target)
        report.target = target_value
        report.critical_epsilon = critical_epsilon(hypergraph, target_value)
    if epsilon is not None:
        report.epsilon = Fraction(epsilon)
        report.robust_bound = robust_bound(hypergraph, report.epsilon)
    return report


def report_to_json_dict(report: BoundsReport) -> dict:
    doc: dict[str, object] = {
        "schema_version": SCHEMA_VERSION,
        "instance": report.instance,
        "multiplicities": dict(report.multiplicities),
    }
    if report.beta_cl is not None:
        doc["beta_cl"] = _rational_entry(report.beta_cl)
        doc["classical_witness"] = list(report.classical_witness or ())
    if report.beta_g is not None:
        doc["beta_g"] = _rational_entry(report.beta_g)
        doc["lp_witness"] = {
            o: format_rational(v) for o, v in (report.lp_witness or {}).items()
        }
        doc["lp_nonunique"] = bool(report.lp_nonunique)
    if report.beta_qu is not None:
        doc["beta_qu"] = {
            "value": _float_entry(report.beta_qu),
            "certified_error": _float_entry(report.beta_qu_error or 0.0),
            "certified": bool(report.beta_qu_certified),
        }
    doc["epsilon_slope"] = _rational_entry(report.epsilon_slope)
    if report.target is not None:
        doc["target"] = _float_entry(report.target)
        doc["critical_epsilon"] = _float_entry(report.critical_epsilon or 0.0)
    if report.epsilon is not None:
        doc["epsilon"] = _rational_entry(report.epsilon)
        doc["robust_bound"] = _rational_entry(report.robust_bound or Fraction(0))
    return doc


def report_from_json_dict(doc: dict) -> BoundsReport:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version: {doc.get('schema_version')!r}")
    report = BoundsReport(instance=str(doc["instance"]))
    report.multiplicities = {
        o: int(k) for o, k in doc.get("multiplicities", {}).items()
    }
    if "beta_cl" in doc:
        report.beta_cl = _parse_rational_entry(doc["beta_cl"])
        report.classical_witness = tuple(doc.get("classical_witness", ()))
    if "beta_g" in doc:
        report.beta_g = _parse_rational_entry(doc["beta_g"])
        report.lp_witness = {
            o: Fraction(v) for o, v in doc.get("lp_witness", {}).items()
        }
        report.lp_nonunique = bool(doc.get("lp_nonunique"))
    if "beta_qu" in doc:
        entry = doc["beta_qu"]
        report.beta_qu = _parse_float_entry(entry["value"])
        report.beta_qu_error = _parse_float_entry(entry["certified_error"])
        report.beta_qu_certified = bool(entry["certified"])
    report.epsilon_slope = _parse_rational_entry(doc["epsilon_slope"])
    if "target" in doc:
        report.target = _parse_float_entry(doc["target"])
        report.critical_epsilon = _parse_float_entry(doc["critical_epsilon"])
    if "epsilon" in doc:
        report.epsilon = _parse_rational_entry(doc["epsilon"])
        report.robust_bound = _parse_rational_entry(doc["robust_bound"])
    return report


def render_report_json(report: BoundsReport) -> str:
    return json.dumps(report_to_json_dict(report), indent=2) + "\n"


def render_report_text(report: BoundsReport) -> str:
    lines = [f"instance: {report.instance}"]
    if report.beta_cl is not None:
        lines.append(
            f"beta_cl  = {format_rational(report.beta_cl)}"
            f" ({format_float(float(report.beta_cl))})"
        )
        lines.append(
            "  witness: {" + ", ".join(report.classical_witness or ()) + "}"
        )
    if report.beta_g is not None:
        lines.append(
            f"beta_g   = {format_rational(report.beta_g)}"
            f" ({format_float(float(report.beta_g))})"
        )
        witness = ", ".join(
            f"{o}={format_rational(v)}" for o, v in (report.lp_witness or {}).items()
        )
        lines.append(f"  vertex: {witness}")
        if report.lp_nonunique:
            lines.append("  note: optimum is not unique (zero reduced cost)")
    if report.beta_qu is not None:
        cert = "certified" if report.beta_qu_certified else "UNCERTIFIED"
        lines.append(
            f"beta_qu  = {format_float(report.beta_qu)}"
            f" +/- {format_float(report.beta_qu_error or 0.0)} ({cert})"
        )
    lines.append(f"epsilon slope sum(w*(k-1)) = {format_rational(report.epsilon_slope)}")
    if report.target is not None:
        lines.append(
            f"critical epsilon at target {format_float(report.target)}"
            f" = {format_float(report.critical_epsilon or 0.0)}"
        )
    if report.epsilon is not None:
        lines.append(
            f"robust bound at eps {format_rational(report.epsilon)}"
            f" = {format_rational(report.robust_bound or Fraction(0))}"
            f" ({format_float(float(report.robust_bound or 0))})"
        )
    return "\n".join(lines) + "\n"
