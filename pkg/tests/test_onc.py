import math
import random
from fractions import Fraction

import pytest

from ctxbounds import (
    ContextHypergraph,
    FiniteHVModel,
    HVModelFormatError,
    collapse,
    critical_epsilon,
    cycle_instance,
    default_context_choice,
    emit_hv_model,
    epsilon_slope,
    expectations,
    parse_hv_model,
    peres_mermin_24,
    collapse_margins,
    repeatability_bound,
    robust_bound,
    sample_onc,
    validate_onc,
)

F = Fraction


def constant_model(h: ContextHypergraph, support: set[str], size: int) -> dict:
    """Tables where every copy equals the indicator of ``support`` at every point."""
    return {
        (ci, o): tuple([int(o in support)] * size)
        for ci, ctx in enumerate(h.contexts)
        for o in ctx
    }


@pytest.fixture()
def flip_model(pentagon):
    """50-point model, base support {0,2} everywhere, one copy of outcome 0
    flipped at the first sample point in its first context."""
    size = 50
    tables = constant_model(pentagon, {"0", "2"}, size)
    ci = next(
        i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx and "1" in ctx
    )
    column = list(tables[(ci, "0")])
    column[0] = 0
    tables[(ci, "0")] = tuple(column)
    mu = tuple([F(1, size)] * size)
    return FiniteHVModel(pentagon, mu, tables), ci


@pytest.fixture()
def split_model(pentagon):
    """Base support {0,2} on 25 points and {1,3} on 25 points, one flip of
    outcome 0 where it was 1; Pr{unflipped copy of 0 = 1} stays 1/2."""
    size = 50
    tables = {}
    for ci, ctx in enumerate(pentagon.contexts):
        for o in ctx:
            column = [int(o in ("0", "2"))] * 25 + [int(o in ("1", "3"))] * 25
            tables[(ci, o)] = tuple(column)
    ci = next(
        i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx and "1" in ctx
    )
    cj = next(
        i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx and "4" in ctx
    )
    column = list(tables[(ci, "0")])
    column[0] = 0
    tables[(ci, "0")] = tuple(column)
    mu = tuple([F(1, size)] * size)
    return FiniteHVModel(pentagon, mu, tables), ci, cj


class TestValidateOnc:
    def test_identical_copies_give_zero(self, pentagon):
        model = FiniteHVModel(
            pentagon, tuple([F(1, 4)] * 4), constant_model(pentagon, {"1", "3"}, 4)
        )
        report = validate_onc(pentagon, model)
        assert report.feasible
        assert report.epsilon_max == 0
        assert all(v == 0 for v in report.disagreements.values())

    def test_single_flip_measures_one_fiftieth(self, pentagon, flip_model):
        model, _ci = flip_model
        report = validate_onc(pentagon, model)
        assert report.feasible
        assert report.epsilon_max == F(1, 50)
        nonzero = [p for p in report.disagreements.values() if p != 0]
        assert nonzero == [F(1, 50)]

    def test_infeasible_point_is_located(self, pentagon):
        tables = constant_model(pentagon, {"0"}, 2)
        ci = next(
            i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx and "1" in ctx
        )
        bad = list(tables[(ci, "1")])
        bad[1] = 1  # both outcomes of the context fire at point 1
        tables[(ci, "1")] = tuple(bad)
        model = FiniteHVModel(pentagon, (F(1, 2), F(1, 2)), tables)
        report = validate_onc(pentagon, model)
        assert not report.feasible
        assert (ci, 1) in report.violations

    def test_missing_table_raises(self, pentagon):
        tables = constant_model(pentagon, set(), 2)
        del tables[(0, "0")]
        model = FiniteHVModel(pentagon, (F(1, 2), F(1, 2)), tables)
        with pytest.raises(ValueError, match="missing table"):
            validate_onc(pentagon, model)

    def test_bad_probability_sum_raises(self, pentagon):
        tables = constant_model(pentagon, set(), 2)
        model = FiniteHVModel(pentagon, (F(1, 2), F(1, 3)), tables)
        with pytest.raises(ValueError, match="sum"):
            validate_onc(pentagon, model)


class TestCollapse:
    def test_faithful_model_is_fixed_point(self, pentagon):
        model = FiniteHVModel(
            pentagon, tuple([F(1, 3)] * 3), constant_model(pentagon, {"2", "4"}, 3)
        )
        collapsed = collapse(model)
        for (ci, o), table in model.tables.items():
            assert collapsed.values[o] == table

    def test_flip_zeroes_the_product(self, pentagon, flip_model):
        model, ci = flip_model
        collapsed = collapse(model)
        assert collapsed.values["0"][0] == 0  # 0 * 1 at the flipped point
        assert all(v == 1 for v in collapsed.values["0"][1:])
        assert all(v == 1 for v in collapsed.values["2"])

    def test_always_one_copies_collapse_to_one(self):
        h = ContextHypergraph.build("one", ["a"], [["a"]])
        model = FiniteHVModel(h, (F(1, 2), F(1, 2)), {(0, "a"): (1, 1)})
        assert collapse(model).values["a"] == (1, 1)

    def test_collapse_is_feasible_everywhere(self, pentagon):
        for seed in range(10):
            model = sample_onc(pentagon, F(1, 10), seed=seed, size=40)
            collapsed = collapse(model)
            for ctx in pentagon.contexts:
                for w in range(model.size):
                    assert sum(collapsed.values[o][w] for o in ctx) <= 1


class TestCollapseMargins:
    def test_faithful_model_zero_margins(self, pentagon):
        model = FiniteHVModel(
            pentagon, tuple([F(1, 4)] * 4), constant_model(pentagon, {"1", "4"}, 4)
        )
        entries = collapse_margins(pentagon, model, collapse(model))
        assert all(e.probability == 0 and e.bound == 0 for e in entries.values())

    def test_flip_model_meets_bound_with_equality(self, pentagon, flip_model):
        model, _ci = flip_model
        entries = collapse_margins(pentagon, model, collapse(model))
        assert entries["0"].probability == F(1, 50)
        assert entries["0"].bound == F(1, 50)  # (k-1) * eps = 1 * 1/50
        assert entries["0"].margin == 0

    def test_generated_models_never_violate(self, pentagon):
        for seed in range(15):
            model = sample_onc(pentagon, F(1, 20), seed=seed, size=60)
            entries = collapse_margins(pentagon, model, collapse(model))
            assert all(e.margin >= 0 for e in entries.values())


class TestRobustBound:
    def test_zero_eps_reduces_to_classical(self, pentagon):
        assert robust_bound(pentagon, F(0)) == 2

    def test_pentagon_slope_five(self, pentagon):
        assert epsilon_slope(pentagon) == 5
        assert robust_bound(pentagon, F(1, 100)) == F(41, 20)

    def test_mermin_peres_threshold_boundary(self, mermin_peres):
        h, _model = mermin_peres
        assert epsilon_slope(h) == 72
        assert robust_bound(h, F(1, 72)) == 6

    def test_negative_eps_rejected(self, pentagon):
        with pytest.raises(ValueError):
            robust_bound(pentagon, F(-1, 10))


class TestCriticalEpsilon:
    def test_pentagon_at_sqrt5(self, pentagon):
        expected = (math.sqrt(5) - 2) / 5
        assert critical_epsilon(pentagon, math.sqrt(5)) == pytest.approx(
            expected, abs=1e-15
        )
        assert critical_epsilon(pentagon, math.sqrt(5)) == pytest.approx(
            0.0472136, abs=1e-6
        )

    def test_mermin_peres_at_six(self, mermin_peres):
        h, _model = mermin_peres
        assert critical_epsilon(h, 6.0) == pytest.approx(1 / 72, abs=1e-12)

    def test_at_classical_bound_is_zero(self, pentagon):
        assert critical_epsilon(pentagon, 2.0) == 0.0

    def test_single_context_is_infinite(self):
        h = ContextHypergraph.build("k3", list("abc"), [list("abc")])
        assert critical_epsilon(h, 1.5) == math.inf

    def test_below_classical_rejected(self, pentagon):
        with pytest.raises(ValueError):
            critical_epsilon(pentagon, 1.5)


class TestExpectations:
    def test_constant_one(self):
        h = ContextHypergraph.build("one", ["a"], [["a"]])
        model = FiniteHVModel(h, (F(1, 2), F(1, 2)), {(0, "a"): (1, 1)})
        assert expectations(model, {"a": 0}) == {"a": F(1)}

    def test_uniform_half(self):
        h = ContextHypergraph.build("one", ["a"], [["a"]])
        model = FiniteHVModel(h, (F(1, 2), F(1, 2)), {(0, "a"): (0, 1)})
        assert expectations(model, {"a": 0})["a"] == F(1, 2)

    def test_flip_shifts_choice_by_one_fiftieth(self, pentagon, flip_model):
        model, ci = flip_model
        other = next(
            i for i, ctx in enumerate(pentagon.contexts)
            if "0" in ctx and i != ci
        )
        flipped = expectations(model, {**default_context_choice(pentagon), "0": ci})
        unflipped = expectations(model, {**default_context_choice(pentagon), "0": other})
        assert unflipped["0"] - flipped["0"] == F(1, 50)

    def test_invalid_choice_rejected(self, pentagon, flip_model):
        model, _ci = flip_model
        bad = dict.fromkeys(pentagon.outcomes, 0)  # context 0 lacks most outcomes
        with pytest.raises(ValueError):
            expectations(model, bad)


class TestRepeatability:
    def test_faithful_model_zero_conditional(self, pentagon):
        model = FiniteHVModel(
            pentagon, tuple([F(1, 5)] * 5), constant_model(pentagon, {"0", "2"}, 5)
        )
        ci, cj = [
            i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx
        ]
        conditional, bound = repeatability_bound(model, "0", ci, cj, 1)
        assert conditional == 0
        assert bound == 0

    def test_split_model_meets_bound(self, pentagon, split_model):
        model, ci, cj = split_model
        # condition on the unflipped copy: Pr = 1/2, so bound = (1/50)/(1/2)
        conditional, bound = repeatability_bound(model, "0", cj, ci, 1)
        assert bound == F(1, 25)
        assert conditional == F(1, 25)

    def test_disjoint_contexts_rejected(self, pentagon, flip_model):
        model, _ci = flip_model
        ci = next(i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx)
        cj = next(i for i, ctx in enumerate(pentagon.contexts) if "0" not in ctx)
        with pytest.raises(ValueError):
            repeatability_bound(model, "0", ci, cj, 1)

    def test_zero_probability_conditioning_rejected(self, pentagon):
        model = FiniteHVModel(
            pentagon, tuple([F(1, 2)] * 2), constant_model(pentagon, set(), 2)
        )
        ci, cj = [i for i, ctx in enumerate(pentagon.contexts) if "0" in ctx]
        with pytest.raises(ValueError, match="probability 0"):
            repeatability_bound(model, "0", ci, cj, 1)

    def test_holds_on_generated_models(self, pentagon):
        for seed in range(10):
            model = sample_onc(pentagon, F(1, 20), seed=seed, size=50)
            eps = validate_onc(pentagon, model).epsilon_max
            for outcome in pentagon.outcomes:
                cis = [i for i, c in enumerate(pentagon.contexts) if outcome in c]
                for ci in cis:
                    for cj in cis:
                        if ci == cj:
                            continue
                        for xi in (0, 1):
                            try:
                                conditional, bound = repeatability_bound(
                                    model, outcome, ci, cj, xi, epsilon_max=eps
                                )
                            except ValueError:
                                continue
                            assert conditional <= bound


class TestGenerator:
    def test_zero_eps_gives_faithful_model(self, pentagon):
        model = sample_onc(pentagon, F(0), seed=11, size=30)
        report = validate_onc(pentagon, model)
        assert report.feasible
        assert report.epsilon_max == 0
        collapsed = collapse(model)
        for (ci, o), table in model.tables.items():
            assert collapsed.values[o] == table

    def test_measured_epsilon_below_twice_nominal(self, pentagon):
        for seed in range(10):
            model = sample_onc(pentagon, F(1, 20), seed=seed, size=1000)
            report = validate_onc(pentagon, model)
            assert report.feasible
            assert report.epsilon_max <= F(1, 10)

    def test_size_one_is_deterministic_colouring(self, pentagon):
        model = sample_onc(pentagon, F(1, 4), seed=3, size=1)
        report = validate_onc(pentagon, model)
        assert report.feasible
        assert model.size == 1

    def test_deterministic_in_seed(self, pentagon):
        a = sample_onc(pentagon, F(1, 20), seed=42, size=100)
        b = sample_onc(pentagon, F(1, 20), seed=42, size=100)
        assert a == b
        c = sample_onc(pentagon, F(1, 20), seed=43, size=100)
        assert c != a

    def test_feasible_across_instances(self):
        mp24, _model = peres_mermin_24()
        for h in (cycle_instance(5), cycle_instance(7), mp24):
            for seed in (0, 1):
                model = sample_onc(h, F(1, 20), seed=seed, size=40)
                assert validate_onc(h, model).feasible

    def test_eps_bounds_rejected(self, pentagon):
        with pytest.raises(ValueError):
            sample_onc(pentagon, F(3, 2), seed=0, size=10)
        with pytest.raises(ValueError):
            sample_onc(pentagon, F(1, 2), seed=0, size=0)


class TestRobustBoundEndToEnd:
    def test_expectation_sums_below_robust_bound(self, pentagon):
        rng = random.Random(7)
        for seed in range(10):
            model = sample_onc(pentagon, F(1, 20), seed=seed, size=60)
            eps = validate_onc(pentagon, model).epsilon_max
            bound = robust_bound(pentagon, eps)
            for _ in range(5):
                choice = {
                    o: rng.choice(
                        [i for i, c in enumerate(pentagon.contexts) if o in c]
                    )
                    for o in pentagon.outcomes
                }
                t = expectations(model, choice)
                total = sum(
                    (pentagon.weight(o) * t[o] for o in pentagon.outcomes), F(0)
                )
                assert total <= bound


class TestDocuments:
    def test_round_trip(self, pentagon):
        model = sample_onc(pentagon, F(1, 25), seed=5, size=20)
        parsed = parse_hv_model(emit_hv_model(model), pentagon)
        assert parsed == model

    def test_bad_key_rejected(self, pentagon):
        with pytest.raises(HVModelFormatError):
            parse_hv_model(
                '{"omega": 1, "mu": ["1"], "tables": {"nokey": [1]}}', pentagon
            )

    def test_bad_probability_sum_rejected(self, pentagon):
        model = sample_onc(pentagon, F(0), seed=1, size=2)
        doc = emit_hv_model(model).replace('"1/2"', '"1/3"', 1)
        with pytest.raises(HVModelFormatError):
            parse_hv_model(doc, pentagon)

    def test_wrong_table_length_rejected(self, pentagon):
        doc = '{"omega": 2, "mu": ["1/2", "1/2"], "tables": {"0/0": [1]}}'
        with pytest.raises(HVModelFormatError):
            parse_hv_model(doc, pentagon)
