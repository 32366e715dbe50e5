"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criteria 9-11 share one generated model suite (module-scoped).
"""

import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from ctxbounds import (
    beta_classical,
    beta_general,
    beta_general_dual,
    collapse,
    critical_epsilon,
    cycle_instance,
    emit_hypergraph,
    enumerate_nc_assignments,
    exclusivity_graph,
    lovasz_theta,
    max_quantum_value,
    peres_mermin_24,
    collapse_margins,
    quantum_value,
    random_pure_state,
    repeatability_bound,
    robust_bound,
    sample_onc,
    validate_onc,
    verify_quantum_model,
)
from ctxbounds.cli import main
from ctxbounds.onc import expectations
from conftest import random_hypergraph

F = Fraction


def _record(number: int, description: str, ok: bool) -> None:
    print(f"criterion {number:02d} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {number} failed: {description}"


@pytest.fixture(scope="module")
def model_suite():
    """500 generated models across pentagon / 7-cycle / Peres-Mermin,
    eps in {0, 1/100, 1/20}, with their measured reports."""
    mp24, _model = peres_mermin_24()
    instances = [cycle_instance(5), cycle_instance(7), mp24]
    eps_values = [F(0), F(1, 100), F(1, 20)]
    sizes = (30, 50, 80)
    suite = []
    for i in range(500):
        h = instances[i % 3]
        eps = eps_values[(i // 3) % 3]
        size = sizes[(i // 9) % 3]
        model = sample_onc(h, eps, seed=10_000 + i, size=size)
        report = validate_onc(h, model)
        suite.append((h, eps, model, report))
    return suite


def test_criterion_01_pentagon_classical_bound(pentagon):
    result = beta_classical(pentagon)
    _record(1, "pentagon classical bound equals 2 exactly", result.value == F(2))


def test_criterion_02_pentagon_lp_bound(pentagon):
    primal = beta_general(pentagon)
    dual = beta_general_dual(pentagon)
    ok = primal.value == F(5, 2) and dual == F(5, 2)
    _record(2, "pentagon LP bound equals 5/2 exactly, dual optimum equal", ok)


def test_criterion_03_pentagon_theta(pentagon):
    result = lovasz_theta(exclusivity_graph(pentagon))
    ok = (
        result.certified
        and result.certified_error <= 1e-6
        and abs(result.value - math.sqrt(5)) <= 1e-6
    )
    _record(3, "pentagon theta equals sqrt(5) within 1e-6, certified gap", ok)


def test_criterion_04_pentagon_critical_epsilon(pentagon):
    value = critical_epsilon(pentagon, math.sqrt(5))
    expected = (math.sqrt(5) - 2) / 5
    ok = abs(value - expected) <= 1e-6 and abs(value - 0.0472136) <= 1e-6
    _record(4, "pentagon critical epsilon equals (sqrt(5)-2)/5 within 1e-6", ok)


def test_criterion_05_mermin_peres_instance(mermin_peres):
    h, _model = mermin_peres
    counts = {o: sum(o in c for c in h.contexts) for o in h.outcomes}
    theta = lovasz_theta(exclusivity_graph(h))
    eps_star = critical_epsilon(h, 6.0)
    ok = (
        len(h.outcomes) == 24
        and len(h.contexts) == 24
        and all(len(c) == 4 for c in h.contexts)
        and set(counts.values()) == {4}
        and beta_classical(h).value == F(5)
        and theta.certified
        and abs(theta.value - 6.0) <= 1e-5
        and abs(eps_star - F(1, 72)) <= 1e-7
    )
    _record(5, "Peres-Mermin: 24/24/4, k=4, beta_cl=5, theta=6, eps*=1/72", ok)


def test_criterion_06_kcbs_model(kcbs):
    h, model, state = kcbs
    report = verify_quantum_model(h, model, tol=1e-9)
    value, witness = max_quantum_value(h, model)
    at_axis = quantum_value(h, model, state)
    ok = (
        report.ok
        and abs(value - math.sqrt(5)) <= 1e-9
        and abs(value - at_axis) <= 1e-9
    )
    _record(6, "KCBS model verifies at 1e-9; spectral value sqrt(5) = axis value", ok)


def test_criterion_07_mermin_peres_every_state(mermin_peres):
    h, model = mermin_peres
    ok = all(
        abs(quantum_value(h, model, random_pure_state(4, seed)) - 6.0) <= 1e-9
        for seed in range(100)
    )
    _record(7, "Peres-Mermin value is 6 within 1e-9 for 100 seeded states", ok)


def test_criterion_08_sandwich_suite():
    ok = True
    for seed in range(200):
        h = random_hypergraph(seed, max_vertices=14)
        cl = beta_classical(h).value
        qu = lovasz_theta(exclusivity_graph(h), h.weights)
        g = beta_general(h).value
        brute = max(
            sum((h.weight(o) for o in a.support()), F(0))
            for a in enumerate_nc_assignments(h)
        )
        ok = (
            ok
            and qu.certified
            and float(cl) <= qu.value + 1e-6
            and qu.value <= float(g) + 1e-6
            and cl == brute
        )
        if not ok:
            break
    _record(8, "200 random scenarios: cl <= qu <= g sandwich, cl matches "
               "enumeration", ok)


def test_criterion_09_collapse_suite(model_suite):
    ok = True
    for h, _eps, model, report in model_suite:
        collapsed = collapse(model)
        for ctx in h.contexts:
            for w in range(model.size):
                if sum(collapsed.values[o][w] for o in ctx) > 1:
                    ok = False
        entries = collapse_margins(h, model, collapsed)
        if any(entry.margin < 0 for entry in entries.values()):
            ok = False
        if not report.feasible:
            ok = False
        if not ok:
            break
    _record(9, "500 generated models: collapse feasible everywhere, "
               "multiplicity margins nonnegative", ok)


def test_criterion_10_expectation_suite(model_suite):
    rng = random.Random(99)
    ok = True
    for h, _eps, model, report in model_suite:
        bound = robust_bound(h, report.epsilon_max)
        containing = {
            o: [i for i, c in enumerate(h.contexts) if o in c] for o in h.outcomes
        }
        for _ in range(10):
            choice = {o: rng.choice(containing[o]) for o in h.outcomes}
            t = expectations(model, choice)
            total = sum((h.weight(o) * t[o] for o in h.outcomes), F(0))
            if total > bound:
                ok = False
        if not ok:
            break
    _record(10, "same models: weighted expectation sums below the robust "
                "bound for 10 random context choices each", ok)


def test_criterion_11_repeatability_suite(model_suite):
    ok = True
    for h, _eps, model, report in model_suite:
        containing = {
            o: [i for i, c in enumerate(h.contexts) if o in c] for o in h.outcomes
        }
        for o, cis in containing.items():
            for ci, cj in itertools.permutations(cis, 2):
                for xi in (0, 1):
                    try:
                        conditional, bound = repeatability_bound(
                            model, o, ci, cj, xi, epsilon_max=report.epsilon_max
                        )
                    except ValueError:
                        continue  # conditioning event has probability zero
                    if conditional > bound:
                        ok = False
        if not ok:
            break
    _record(11, "same models: conditional repeatability inequality holds "
                "wherever the conditioning event is possible", ok)


def test_criterion_12_cli_determinism(tmp_path, capsys):
    hpath = tmp_path / "pentagon.json"
    hpath.write_text(emit_hypergraph(cycle_instance(5)))

    analyze_args = ["analyze", str(hpath), "--bounds", "all", "--target", "qu",
                    "--format", "json"]
    assert main(analyze_args) == 0
    first_analyze = capsys.readouterr().out
    assert main(analyze_args) == 0
    second_analyze = capsys.readouterr().out

    simulate_args = ["simulate", str(hpath), "--epsilon", "1/50", "--seed", "9",
                     "--size", "120", "--trials", "6", "--format", "json"]
    assert main(simulate_args) == 0
    first_simulate = capsys.readouterr().out
    assert main(simulate_args) == 0
    second_simulate = capsys.readouterr().out

    ok = (
        first_analyze == second_analyze
        and first_simulate == second_simulate
        and json.loads(first_analyze)["schema_version"] == 1
    )
    with capsys.disabled():
        _record(12, "analyze and simulate emit byte-identical JSON across runs", ok)
