"""Built-in scenarios with quantum realizations, each self-verified on build.

The constructions are fixed by closed forms, but the contract is the oracle
run at build time: orthogonality patterns, context counts, multiplicities and
the spectral value.  A failed self-check raises instead of returning a bad
instance.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .hypergraph import ContextHypergraph
from .quantum import QuantumModel, QuantumState, projector_from_vector, state_from_vector

_SELF_CHECK_ORTHO = 1e-12
_SELF_CHECK_SPECTRAL = 1e-9


def cycle_instance(n: int) -> ContextHypergraph:
    """The n-cycle scenario: outcomes 0..n-1, contexts {i, i+1 mod n}, unit weights."""
    if n < 3:
        raise ValueError("cycle instances need at least 3 outcomes")
    outcomes = [str(i) for i in range(n)]
    contexts = [[str(i), str((i + 1) % n)] for i in range(n)]
    return ContextHypergraph.build(f"cycle-{n}", outcomes, contexts)


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for entry in v:
        if abs(entry) > 1e-12:
            return v if entry.real > 0 else -v
    return v


def kcbs_pentagon() -> tuple[ContextHypergraph, QuantumModel, QuantumState]:
    """Pentagon scenario with its rank-one realization in dimension 3.

    The five unit vectors sit on a cone around the symmetry axis with
    consecutive vectors orthogonal; the distinguished state is the axis
    state, whose value equals the spectral maximum sqrt(5).
    """
    hypergraph = ContextHypergraph.build(
        "kcbs-pentagon",
        [str(i) for i in range(5)],
        [[str(i), str((i + 1) % 5)] for i in range(5)],
    )
    cos2 = math.cos(math.pi / 5) / (1 + math.cos(math.pi / 5))
    ct = math.sqrt(cos2)
    st = math.sqrt(1 - cos2)
    vectors = {}
    for j in range(5):
        phi = 4 * math.pi * j / 5
        v = np.array([ct, st * math.cos(phi), st * math.sin(phi)], dtype=np.complex128)
        vectors[str(j)] = _canonical_sign(v)
    projectors = {o: projector_from_vector(v) for o, v in vectors.items()}
    model = QuantumModel(3, projectors, vectors)
    state = state_from_vector(np.array([1.0, 0.0, 0.0]))

    for j in range(5):
        ip = abs(np.vdot(vectors[str(j)], vectors[str((j + 1) % 5)]))
        if ip > _SELF_CHECK_ORTHO:
            raise RuntimeError(f"kcbs self-check: <v{j}, v{j+1}> = {ip:.3e}")
    total = sum(projectors.values())
    top = float(np.linalg.eigvalsh(np.real(total))[-1])
    if abs(top - math.sqrt(5)) > _SELF_CHECK_SPECTRAL:
        raise RuntimeError(f"kcbs self-check: spectral value {top!r} != sqrt(5)")
    return hypergraph, model, state


def _peres_rays() -> list[np.ndarray]:
    rays: list[np.ndarray] = []
    for i in range(4):
        v = np.zeros(4)
        v[i] = 1.0
        rays.append(v)
    for j, k in itertools.combinations(range(4), 2):
        for sign in (1.0, -1.0):
            v = np.zeros(4)
            v[j] = 1.0
            v[k] = sign
            rays.append(v / math.sqrt(2))
    for signs in itertools.product((1.0, -1.0), repeat=3):
        rays.append(np.array([1.0, *signs]) / 2.0)
    return rays


def _ray_label(v: np.ndarray) -> str:
    # label from the integer template: scale so entries are in {-1, 0, 1}
    scale = max(abs(x) for x in v)
    digits = []
    for x in v / scale:
        if abs(x) < 1e-9:
            digits.append("0")
        elif x > 0:
            digits.append("1")
        else:
            digits.append("m")
    return "".join(digits)


def peres_mermin_24() -> tuple[ContextHypergraph, QuantumModel]:
    """The 24-ray scenario in dimension 4: 24 orthonormal 4-element contexts.

    Rays are the coordinate axes, the diagonals of the coordinate planes and
    the half-sum sign patterns; the contexts are all mutually orthogonal
    4-subsets, recomputed and counted on every build.
    """
    rays = [_canonical_sign(r.astype(np.complex128)) for r in _peres_rays()]
    labels = [_ray_label(np.real(r)) for r in rays]
    if len(set(labels)) != 24:
        raise RuntimeError("peres-mermin self-check: labels not unique")

    orthogonal = [
        [abs(np.vdot(rays[a], rays[b])) <= _SELF_CHECK_ORTHO for b in range(24)]
        for a in range(24)
    ]
    contexts = [
        [labels[a] for a in combo]
        for combo in itertools.combinations(range(24), 4)
        if all(orthogonal[a][b] for a, b in itertools.combinations(combo, 2))
    ]
    if len(contexts) != 24:
        raise RuntimeError(
            f"peres-mermin self-check: {len(contexts)} orthogonal tetrads, expected 24"
        )
    hypergraph = ContextHypergraph.build("peres-mermin-24", labels, contexts)
    counts = {o: 0 for o in labels}
    for ctx in hypergraph.contexts:
        for outcome in ctx:
            counts[outcome] += 1
    if any(k != 4 for k in counts.values()):
        raise RuntimeError("peres-mermin self-check: multiplicities differ from 4")

    vectors = dict(zip(labels, rays))
    projectors = {o: projector_from_vector(v) for o, v in vectors.items()}
    total = sum(projectors.values())
    if float(np.abs(total - 6 * np.eye(4)).max()) > _SELF_CHECK_SPECTRAL:
        raise RuntimeError("peres-mermin self-check: projector sum is not 6*identity")
    return hypergraph, QuantumModel(4, projectors, vectors)


def instance_names() -> tuple[str, ...]:
    return ("kcbs-pentagon", "peres-mermin-24", "cycle-<n>")


def build_instance(
    name: str,
) -> tuple[ContextHypergraph, QuantumModel | None, QuantumState | None]:
    """Look up a named instance; cycles are parametrized as ``cycle-<n>``."""
    if name == "kcbs-pentagon":
        return kcbs_pentagon()
    if name == "peres-mermin-24":
        hypergraph, model = peres_mermin_24()
        return hypergraph, model, None
    if name.startswith("cycle-"):
        try:
            n = int(name.split("-", 1)[1])
        except ValueError:
            raise ValueError(f"bad cycle instance name: {name!r}") from None
        return cycle_instance(n), None, None
    raise ValueError(
        f"unknown instance {name!r}; available: {', '.join(instance_names())}"
    )
