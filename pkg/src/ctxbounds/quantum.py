"""Projector models over a context hypergraph: validity, Born values, spectra.

Operators are complex Hermitian matrices held as numpy arrays.  Eigenvalue
computations run through the real-symmetric embedding of dimension 2d (each
eigenvalue appears twice; every second one is kept), so the linear-algebra
kernel stays real.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .hypergraph import ContextHypergraph, Finding, ValidationReport

DEFAULT_PROJECTOR_TOL = 1e-9
HERMITIAN_TOL = 1e-12
VECTOR_NORM_TOL = 1e-6


class DimensionMismatchError(ValueError):
    """Operators of incompatible dimensions were combined."""


class QuantumModelFormatError(ValueError):
    """A quantum-model document violates the input schema."""


def _as_operator(m: np.ndarray) -> np.ndarray:
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"operator must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("operator has non-finite entries")
    return arr


def _embed_real(m: np.ndarray) -> np.ndarray:
    x, y = m.real, m.imag
    return np.block([[x, -y], [y, x]])


def hermitian_eigvals(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending (real embedding kernel)."""
    return np.linalg.eigvalsh(_embed_real(_as_operator(m)))[::2]


def hermitian_top_eigpair(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector of a Hermitian matrix."""
    m = _as_operator(m)
    d = m.shape[0]
    vals, vecs = np.linalg.eigh(_embed_real(m))
    top = vecs[:, -1]
    vec = top[:d] + 1j * top[d:]
    return float(vals[-1]), vec / np.linalg.norm(vec)


def operator_norm(m: np.ndarray) -> float:
    """Operator norm of a Hermitian matrix: largest absolute eigenvalue."""
    vals = hermitian_eigvals(m)
    return float(max(abs(vals[0]), abs(vals[-1]))) if len(vals) else 0.0


def operator_norm_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Operator norm of the difference of two Hermitian operators.

    Equals the largest difference between their expectation values over all
    states, which is why it is the experimentally relevant metric on effects.
    """
    a, b = _as_operator(a), _as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return operator_norm(a - b)


def _hermiticity_defect(m: np.ndarray) -> float:
    # i(M - M^dagger) is Hermitian; its norm measures the defect.
    return operator_norm(1j * (m - m.conj().T))


@dataclass(frozen=True)
class QuantumModel:
    """Per-outcome projectors, all of one dimension, plus optional rank-one vectors."""

    dimension: int
    projectors: Mapping[str, np.ndarray]
    vectors: Mapping[str, np.ndarray] | None = None


@dataclass(frozen=True)
class QuantumState:
    """A density operator (positive semidefinite, unit trace)."""

    rho: np.ndarray

    @property
    def dimension(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class EffectAssignment:
    """Per-context effects approximating the reference projectors.

    Keys of ``effects`` are (context index, outcome id) incidences.
    """

    effects: Mapping[tuple[int, str], np.ndarray]
    projectors: Mapping[str, np.ndarray]


def state_from_vector(v: np.ndarray) -> QuantumState:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector cannot define a state")
    v = v / norm
    return QuantumState(np.outer(v, v.conj()))


def random_pure_state(dimension: int, seed: int) -> QuantumState:
    """Deterministic pseudo-random pure state (normal real/imag components)."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dimension) + 1j * rng.normal(size=dimension)
    return state_from_vector(v)


def projector_from_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def _check_model_dimensions(model: QuantumModel) -> None:
    for outcome, p in model.projectors.items():
        p = _as_operator(p)
        if p.shape[0] != model.dimension:
            raise DimensionMismatchError(
                f"projector {outcome!r} has dimension {p.shape[0]}, "
                f"model declares {model.dimension}"
            )


def verify_quantum_model(
    hypergraph: ContextHypergraph,
    model: QuantumModel,
    tol: float = DEFAULT_PROJECTOR_TOL,
) -> ValidationReport:
    """Check Hermiticity, idempotence and the per-context operator constraint.

    Per context the largest eigenvalue of the projector sum must not exceed
    1 + tol; every violation is reported with its location and measured norm.
    """
    _check_model_dimensions(model)
    findings: list[Finding] = []
    for outcome in hypergraph.outcomes:
        if outcome not in model.projectors:
            findings.append(
                Finding("error", f"projectors[{outcome}]", "no projector given")
            )
            continue
        p = _as_operator(model.projectors[outcome])
        herm = _hermiticity_defect(p)
        if herm > tol:
            findings.append(
                Finding(
                    "error",
                    f"projectors[{outcome}]",
                    f"not Hermitian: defect norm {herm:.3e}",
                )
            )
        idem = operator_norm(p @ p - p)
        if idem > tol:
            findings.append(
                Finding(
                    "error",
                    f"projectors[{outcome}]",
                    f"not idempotent: |P^2 - P| = {idem:.3e}",
                )
            )
    if not findings:
        for ci, ctx in enumerate(hypergraph.contexts):
            total = sum(
                (_as_operator(model.projectors[o]) for o in ctx),
                np.zeros((model.dimension, model.dimension), dtype=np.complex128),
            )
            top = hermitian_eigvals(total)[-1]
            if top > 1 + tol:
                findings.append(
                    Finding(
                        "error",
                        f"contexts[{ci}]",
                        f"projector sum exceeds identity: top eigenvalue "
                        f"{top:.12f} on context {list(ctx)}",
                    )
                )
    return ValidationReport(tuple(findings))


def verify_epsilon_precise(
    hypergraph: ContextHypergraph,
    effects: EffectAssignment,
    eps: float,
    tol: float = DEFAULT_PROJECTOR_TOL,
) -> ValidationReport:
    """Check that per-context effects stay eps-close to the reference projectors.

    Per context the effect sum must stay below identity; per incidence the
    operator-norm distance to the reference projector must stay within
    eps + tol.  The measured worst deviation of every incidence is reported
    as an info finding.
    """
    findings: list[Finding] = []
    dims = {p.shape[0] for p in map(_as_operator, effects.projectors.values())}
    dims |= {q.shape[0] for q in map(_as_operator, effects.effects.values())}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed operator dimensions: {sorted(dims)}")

    for ci, ctx in enumerate(hypergraph.contexts):
        present = [o for o in ctx if (ci, o) in effects.effects]
        for outcome in ctx:
            if (ci, outcome) not in effects.effects:
                findings.append(
                    Finding("error", f"effects[{ci}/{outcome}]", "no effect given")
                )
        if len(present) < len(ctx):
            continue
        dim = _as_operator(effects.effects[(ci, present[0])]).shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for outcome in ctx:
            q = _as_operator(effects.effects[(ci, outcome)])
            vals = hermitian_eigvals(q)
            if vals[0] < -tol or vals[-1] > 1 + tol:
                findings.append(
                    Finding(
                        "error",
                        f"effects[{ci}/{outcome}]",
                        f"not an effect: spectrum in [{vals[0]:.3e}, {vals[-1]:.6f}]",
                    )
                )
            if outcome not in effects.projectors:
                findings.append(
                    Finding(
                        "error",
                        f"projectors[{outcome}]",
                        "no reference projector for effect",
                    )
                )
                continue
            dist = operator_norm_distance(q, effects.projectors[outcome])
            severity = "error" if dist > eps + tol else "info"
            findings.append(
                Finding(
                    severity,
                    f"effects[{ci}/{outcome}]",
                    f"distance to reference projector {dist:.12f}"
                    + (f" exceeds eps={eps}" if severity == "error" else ""),
                )
            )
            total += q
        top = hermitian_eigvals(total)[-1]
        if top > 1 + tol:
            findings.append(
                Finding(
                    "error",
                    f"contexts[{ci}]",
                    f"effect sum exceeds identity: top eigenvalue {top:.12f}",
                )
            )
    return ValidationReport(tuple(findings))


def quantum_value(
    hypergraph: ContextHypergraph, model: QuantumModel, state: QuantumState
) -> float:
    """Weighted sum of Born probabilities of the outcomes in the given state."""
    _check_model_dimensions(model)
    rho = _as_operator(state.rho)
    if rho.shape[0] != model.dimension:
        raise DimensionMismatchError(
            f"state dimension {rho.shape[0]} vs model dimension {model.dimension}"
        )
    total = 0.0
    for outcome in hypergraph.outcomes:
        w = float(hypergraph.weight(outcome))
        if w == 0.0:
            continue
        p = _as_operator(model.projectors[outcome])
        total += w * float(np.trace(rho @ p).real)
    return total


def max_quantum_value(
    hypergraph: ContextHypergraph, model: QuantumModel
) -> tuple[float, QuantumState]:
    """State-optimal value: top eigenvalue of the weighted projector sum.

    The witness is the pure state built from the top eigenvector.
    """
    _check_model_dimensions(model)
    d = model.dimension
    total = np.zeros((d, d), dtype=np.complex128)
    for outcome in hypergraph.outcomes:
        total += float(hypergraph.weight(outcome)) * _as_operator(
            model.projectors[outcome]
        )
    value, vec = hermitian_top_eigpair(total)
    return value, state_from_vector(vec)


def _complex_entry(pair: object, location: str) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
    ):
        raise QuantumModelFormatError(f"{location}: entries must be [re, im] pairs")
    return complex(pair[0], pair[1])


def parse_quantum_model(text: str) -> QuantumModel:
    """Parse the quantum-model JSON document.

    Shape: ``{"dimension": int, "projectors": {id: {"vector": [[re,im],...]}
    | {"matrix": [[[re,im],...],...]}}}``.  Vectors are normalized on load;
    a norm deviating from 1 by more than 1e-6 is an error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise QuantumModelFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise QuantumModelFormatError("top-level value must be an object")
    dimension = doc.get("dimension")
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
        raise QuantumModelFormatError("dimension must be a positive integer")
    raw = doc.get("projectors")
    if not isinstance(raw, dict):
        raise QuantumModelFormatError("projectors must be an object")

    projectors: dict[str, np.ndarray] = {}
    vectors: dict[str, np.ndarray] = {}
    for outcome, spec in raw.items():
        loc = f"projectors[{outcome}]"
        if not isinstance(spec, dict):
            raise QuantumModelFormatError(f"{loc}: must be an object")
        if "vector" in spec:
            entries = spec["vector"]
            if not isinstance(entries, list) or len(entries) != dimension:
                raise QuantumModelFormatError(
                    f"{loc}: vector must have {dimension} entries"
                )
            v = np.array(
                [_complex_entry(e, loc) for e in entries], dtype=np.complex128
            )
            norm = float(np.linalg.norm(v))
            if abs(norm - 1.0) > VECTOR_NORM_TOL:
                raise QuantumModelFormatError(
                    f"{loc}: vector norm {norm:.9f} deviates from 1 by more than "
                    f"{VECTOR_NORM_TOL}"
                )
            v = v / norm
            vectors[outcome] = v
            projectors[outcome] = projector_from_vector(v)
        elif "matrix" in spec:
            entries = spec["matrix"]
            if not isinstance(entries, list) or len(entries) != dimension:
                raise QuantumModelFormatError(
                    f"{loc}: matrix must have {dimension} rows"
                )
            rows = []
            for r in entries:
                if not isinstance(r, list) or len(r) != dimension:
                    raise QuantumModelFormatError(
                        f"{loc}: matrix rows must have {dimension} entries"
                    )
                rows.append([_complex_entry(e, loc) for e in r])
            projectors[outcome] = np.array(rows, dtype=np.complex128)
        else:
            raise QuantumModelFormatError(f"{loc}: needs a 'vector' or 'matrix' key")
    return QuantumModel(dimension, projectors, vectors or None)


def load_quantum_model(path: str) -> QuantumModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_quantum_model(handle.read())


def emit_quantum_model(model: QuantumModel) -> str:
    """Serialize a model back to the document format (vectors when available)."""
    projectors: dict[str, object] = {}
    for outcome in model.projectors:
        if model.vectors and outcome in model.vectors:
            v = np.asarray(model.vectors[outcome], dtype=np.complex128)
            projectors[outcome] = {
                "vector": [[float(z.real), float(z.imag)] for z in v]
            }
        else:
            m = _as_operator(model.projectors[outcome])
            projectors[outcome] = {
                "matrix": [
                    [[float(z.real), float(z.imag)] for z in row] for row in m
                ]
            }
    doc = {"dimension": model.dimension, "projectors": projectors}
    return json.dumps(doc, indent=2) + "\n"
