"""Shared fixtures and seeded generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ctxbounds import ContextHypergraph, cycle_instance, kcbs_pentagon, peres_mermin_24


def random_hypergraph(seed: int, max_vertices: int = 14) -> ContextHypergraph:
    """Seeded random scenario: small contexts, mixed rational weights."""
    rng = random.Random(seed)
    n = rng.randint(3, max_vertices)
    outcomes = [f"o{i}" for i in range(n)]
    contexts = []
    for _ in range(rng.randint(2, n + 2)):
        size = rng.randint(2, min(4, n))
        contexts.append(rng.sample(outcomes, size))
    weights: dict[str, Fraction] = {}
    for outcome in outcomes:
        roll = rng.random()
        if roll < 0.1:
            weights[outcome] = Fraction(0)
        elif roll < 0.5:
            weights[outcome] = Fraction(rng.randint(1, 16), rng.randint(1, 8))
    return ContextHypergraph.build(f"random-{seed}", outcomes, contexts, weights)


@pytest.fixture(scope="session")
def pentagon() -> ContextHypergraph:
    return cycle_instance(5)


@pytest.fixture(scope="session")
def kcbs():
    return kcbs_pentagon()


@pytest.fixture(scope="session")
def mermin_peres():
    return peres_mermin_24()
