"""Frequency analyses: compatibility, completion probabilities, next-step
distributions, realization points, and joint feasibility."""

import random
from fractions import Fraction

import pytest

from freqlogic import (
    Comparator,
    Engine,
    EvalContext,
    FrequencySpec,
    IncompatiblePrefix,
    Model,
    NextBeyondHorizon,
    SpecError,
    WorldBeyondObservation,
    check_compatibility,
    completion_probability,
    completion_probability_weighted,
    evaluate,
    frequency_lcd,
    joint_frequency_exists,
    next_outcome_distribution,
    observed_frequency,
    parse,
    random_models,
    realization_points,
    realization_points_by_peak,
    step_probability_update,
)
from oracles import completion_by_enumeration, next_ratio_by_enumeration

HALF = Fraction(1, 2)
FAIR2 = FrequencySpec(("Head", "Tail"), {"Head": HALF, "Tail": HALF}, 2)
FAIR4 = FrequencySpec(("Head", "Tail"), {"Head": HALF, "Tail": HALF}, 4)
FAIR6 = FrequencySpec(("Head", "Tail"), {"Head": HALF, "Tail": HALF}, 6)
BIASED3 = FrequencySpec(("Head", "Tail"), {"Head": Fraction(2, 3), "Tail": Fraction(1, 3)}, 3)
SKEW = {"Head": Fraction(2, 3), "Tail": Fraction(1, 3)}


def test_observed_frequency_examples():
    model = Model(FAIR4, ("Head", "Head", "Tail", "Head"))
    assert observed_frequency(model, 3, parse("Head")) == Fraction(2, 3)
    assert observed_frequency(model, 4, parse("Head")) == Fraction(3, 4)
    assert observed_frequency(model, 4, parse("Head | !Head")) == 1
    with pytest.raises(ValueError):
        observed_frequency(model, 0, parse("Head"))


def test_check_compatibility_verdicts():
    assert check_compatibility(Model(FAIR4, ("Tail", "Tail"))).compatible
    assert check_compatibility(Model(FAIR4), 0).compatible

    verdict = check_compatibility(Model(FAIR4, ("Tail", "Tail", "Tail")))
    assert not verdict.compatible
    assert verdict.status == "INCOMPATIBLE"
    assert verdict.witness_atom == "Tail"
    assert verdict.bounds["Tail"] == (3, 2)
    with pytest.raises(WorldBeyondObservation):
        check_compatibility(Model(FAIR4, ("Tail",)), 3)


def test_incompatibility_witness_formula_holds():
    """The verdict's witness says: that share of the series is already spent on
    the atom, yet no admissible assignment ever reaches that share."""
    model = Model(FAIR4, ("Tail", "Tail", "Tail"))
    verdict = check_compatibility(model)
    for engine in Engine:
        assert evaluate(EvalContext(model, verdict.world), verdict.witness_formula, engine)


def test_completion_probability_fixtures():
    assert completion_probability(Model(FAIR4), 0) == Fraction(3, 8)
    assert completion_probability(Model(FAIR4, ("Tail", "Tail"))) == Fraction(1, 4)
    assert completion_probability(Model(FAIR6, ("Head", "Tail", "Tail"))) == Fraction(3, 8)
    assert completion_probability(Model(FAIR4, ("Tail", "Tail", "Tail"))) == 0
    assert completion_probability(Model(FAIR4, ("Head", "Tail", "Head", "Tail"))) == 1


def test_completion_probability_weighted_fixtures():
    assert completion_probability_weighted(Model(FAIR2, ("Head",), SKEW)) == Fraction(1, 3)
    assert completion_probability_weighted(
        Model(FAIR6, ("Head", "Tail", "Tail"), SKEW)
    ) == Fraction(4, 9)
    assert completion_probability_weighted(Model(FAIR4, ("Head",), SKEW)) == Fraction(2, 9)
    uniform = {"Head": HALF, "Tail": HALF}
    assert completion_probability_weighted(
        Model(FAIR4, ("Tail", "Tail"), uniform)
    ) == completion_probability(Model(FAIR4, ("Tail", "Tail")))
    with pytest.raises(SpecError):
        completion_probability_weighted(Model(FAIR4))


def test_completion_probabilities_match_enumeration():
    for model in random_models(29, 25):
        for m in range(len(model.observed) + 1):
            assert completion_probability(model, m) == completion_by_enumeration(
                Model(model.spec, model.observed), m
            )
            if model.weights is not None:
                assert completion_probability_weighted(model, m) == completion_by_enumeration(model, m)


def test_next_outcome_distribution_examples():
    assert next_outcome_distribution(Model(FAIR4, ("Tail",))) == {
        "Head": Fraction(2, 3),
        "Tail": Fraction(1, 3),
    }
    assert next_outcome_distribution(Model(FAIR4, ("Tail", "Tail"))) == {
        "Head": Fraction(1),
        "Tail": Fraction(0),
    }
    degenerate = FrequencySpec(("Head", "Tail"), {"Head": Fraction(1), "Tail": Fraction(0)}, 2)
    assert next_outcome_distribution(Model(degenerate), 0) == {
        "Head": Fraction(1),
        "Tail": Fraction(0),
    }
    with pytest.raises(IncompatiblePrefix):
        next_outcome_distribution(Model(FAIR4, ("Tail", "Tail", "Tail")))
    with pytest.raises(NextBeyondHorizon):
        next_outcome_distribution(Model(FAIR4, ("Head", "Tail", "Head", "Tail")))


def test_next_distribution_matches_enumeration_and_sums_to_one():
    for model in random_models(31, 25):
        base = Model(model.spec, model.observed)  # weights never matter here
        for m in range(min(len(model.observed), model.spec.n - 1) + 1):
            enumerated = {
                p: next_ratio_by_enumeration(base, m, p) for p in model.spec.atoms
            }
            if None in enumerated.values():
                with pytest.raises(IncompatiblePrefix):
                    next_outcome_distribution(base, m)
                continue
            dist = next_outcome_distribution(base, m)
            assert dist == enumerated
            assert sum(dist.values()) == 1


def test_step_probability_update_examples():
    fair = Model(FAIR4, ("Head",))
    assert step_probability_update(Fraction(3, 8), Fraction(2, 3), fair, "Tail") == HALF
    weighted = Model(FAIR4, ("Head",), SKEW)
    assert step_probability_update(Fraction(2, 9), Fraction(2, 3), weighted, "Tail") == Fraction(4, 9)
    assert step_probability_update(Fraction(3, 8), 0, fair, "Tail") == 0
    assert step_probability_update(0, Fraction(2, 3), fair, "Tail") == 0


def test_frequency_lcd_ignores_zero_targets():
    assert frequency_lcd(FAIR4) == 2
    assert frequency_lcd(BIASED3) == 3
    spec = FrequencySpec(("a", "b"), {"a": Fraction(1), "b": Fraction(0)}, 3)
    assert frequency_lcd(spec) == 1


def test_realization_points_examples():
    assert realization_points(Model(FAIR4)) == {2, 4}
    assert realization_points(Model(FAIR6)) == {2, 4, 6}
    assert realization_points(Model(BIASED3)) == {3}


def test_realization_points_peak_route_agrees():
    for spec in (FAIR2, FAIR4, FAIR6, BIASED3):
        model = Model(spec)
        for engine in Engine:
            assert realization_points_by_peak(model, engine) == realization_points(model)


def test_realization_points_single_outcome_degeneracy():
    """With every world realizing the target, the share curve is flat and has
    no strict peak; the arithmetic route still reports every world."""
    spec = FrequencySpec(("a",), {"a": Fraction(1)}, 3)
    model = Model(spec)
    assert realization_points(model) == {1, 2, 3}
    assert realization_points_by_peak(model) == set()


def test_joint_frequency_examples():
    model = Model(FAIR4)
    head, tail = parse("Head"), parse("Tail")
    both = [(head, Comparator.GEQ, HALF), (tail, Comparator.GEQ, HALF)]
    assert joint_frequency_exists(model, 2, both)
    assert not joint_frequency_exists(model, 1, both)
    assert joint_frequency_exists(model, 2, [(head, Comparator.GEQ, Fraction(1))])
    assert joint_frequency_exists(model, 4, [])
    with pytest.raises(ValueError):
        joint_frequency_exists(model, 0, both)


def test_joint_frequency_random_constraints():
    """The enumeration route and the formula encoding agree (a disagreement
    raises inside the call) and respond to constraint tightening."""
    rng = random.Random(17)
    for model in random_models(23, 12):
        spec = model.spec
        for _ in range(4):
            m = rng.randint(1, spec.n)
            constraints = [
                (parse(rng.choice(spec.atoms)), rng.choice(list(Comparator)), Fraction(rng.randint(0, 4), 4))
                for _ in range(rng.randint(1, 3))
            ]
            feasible = joint_frequency_exists(model, m, constraints, Engine.REFERENCE)
            assert feasible == joint_frequency_exists(model, m, constraints)
            if feasible:
                relaxed = [(f, Comparator.GEQ, Fraction(0)) for (f, _, _) in constraints]
                assert joint_frequency_exists(model, m, relaxed)
