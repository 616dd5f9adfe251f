"""Evaluator behavior: worked examples, engine agreement, and error contracts."""

import random
from fractions import Fraction

import pytest

from freqlogic import (
    Atom,
    Comparator,
    Engine,
    EvalContext,
    Evaluator,
    FrequencySpec,
    IncompatiblePrefix,
    Member,
    Model,
    Next,
    NextBeyondHorizon,
    NonPropositional,
    Not,
    OBSERVED,
    Or,
    UnknownAtom,
    WhiteBox,
    WorldBeyondObservation,
    count_compatible,
    evaluate,
    explain,
    max_index,
    next_value_atomic,
    parse,
    star_measure,
)
from oracles import BruteForce, formula_corpus, reach, safe_worlds

HALF = Fraction(1, 2)
FAIR4 = FrequencySpec(("Head", "Tail"), {"Head": HALF, "Tail": HALF}, 4)
FAIR6 = FrequencySpec(("Head", "Tail"), {"Head": HALF, "Tail": HALF}, 6)
BIASED3 = FrequencySpec(("Head", "Tail"), {"Head": Fraction(2, 3), "Tail": Fraction(1, 3)}, 3)

HHTH = Model(FAIR4, ("Head", "Head", "Tail", "Head"))
HHHTTT = Model(FAIR6, ("Head", "Head", "Head", "Tail", "Tail", "Tail"))


def ev(model, formula, world, engine=Engine.ACCELERATED, selector=OBSERVED):
    return evaluate(EvalContext(model, world, selector), parse(formula), engine)


def test_prefix_share_examples():
    assert ev(HHTH, "box[>=2/3] Head", 3)
    assert ev(HHTH, "box[>=3/4] Head", 4)
    assert not ev(HHTH, "box[>3/4] Head", 4)
    assert ev(HHTH, "circ[>=1/2] Head", 2)
    assert ev(HHTH, "circ[>=1/2] Head", 3)
    assert not ev(HHTH, "circ[>=1/2] Head", 1)


def test_member_quantified_share_examples():
    for w in (1, 2, 3):
        assert ev(HHHTTT, "bbox[>=1] Head", w)
    assert not ev(HHHTTT, "bbox[>=1] Head", 6)
    assert ev(HHHTTT, "bbox[>=1/2] Head", 6)


def test_equality_on_member_shares_is_existential():
    model = Model(BIASED3)
    assert ev(model, "bbox[=1] Head", 2)
    assert ev(model, "bbox[=1/2] Head", 2)
    assert not ev(model, "bbox[=1/3] Head", 2)


def test_star_is_world_and_selector_free():
    model = Model(FAIR4, ("Tail",))
    for w in (1, 2, 3, 4):
        assert ev(model, "star[>=1/2] Head", w)
        assert not ev(model, "star[>1/2] Head", w)


def test_continuation_examples():
    tt = Model(FAIR4, ("Tail", "Tail"))
    assert ev(tt, "next[>=1] Head", 2)
    assert ev(tt, "next^2[>=1] Head", 2)
    assert not ev(tt, "next[>0] Tail", 2)


def test_incompatible_prefix_makes_next_degenerate():
    model = Model(FAIR4, ("Tail", "Tail", "Tail"))
    for engine in Engine:
        assert ev(model, "next[>=0] Head", 3, engine)
        assert not ev(model, "next[>=1/2] Head", 3, engine)
        assert ev(model, "next[<=0] Head", 3, engine)
        assert ev(model, "next[<1/2] Head", 3, engine)
        assert ev(model, "next[=0] Head", 3, engine)
        assert ev(model, "next[max 0] Head", 3, engine)


def test_next_at_the_last_world_raises():
    model = Model(FAIR4, ("Head", "Tail", "Head", "Tail"))
    for engine in Engine:
        with pytest.raises(NextBeyondHorizon):
            ev(model, "next[>=1] Head", 4, engine)


def test_connectives_evaluate_eagerly():
    model = Model(FAIR4, ("Head", "Tail", "Head", "Tail"))
    taut = parse("Head | !Head")
    doomed = Or(taut, Next(Comparator.GEQ, 1, 1, Atom("Head")))
    with pytest.raises(NextBeyondHorizon):
        evaluate(EvalContext(model, 4), doomed)


def test_observed_selector_cannot_read_past_the_prefix():
    model = Model(FAIR4, ("Head", "Tail"))
    with pytest.raises(WorldBeyondObservation):
        ev(model, "Head", 3)
    # member-quantified operators never read the prefix
    assert ev(model, "bbox[>=1/2] Head", 3)
    assert ev(model, "star[>=1/2] Head", 4)


def test_member_selector_checks_admissibility():
    model = Model(FAIR4)
    assert ev(model, "Head", 3, selector=Member(("Tail", "Tail", "Head", "Head")))
    with pytest.raises(ValueError):
        ev(model, "Head", 1, selector=Member(("Tail", "Tail")))
    with pytest.raises(ValueError):
        ev(model, "Head", 1, selector=Member(("Tail", "Tail", "Tail", "Tail")))


def test_evaluate_rejects_unknown_atoms_and_worlds():
    with pytest.raises(UnknownAtom):
        ev(HHTH, "Edge", 1)
    with pytest.raises(ValueError):
        ev(HHTH, "Head", 0)
    with pytest.raises(ValueError):
        ev(HHTH, "Head", 5)


def test_star_measure_values():
    assert star_measure(FAIR4, parse("Head | Tail")) == 1
    assert star_measure(FAIR4, parse("Head")) == HALF
    assert star_measure(BIASED3, parse("!Head")) == Fraction(1, 3)
    with pytest.raises(NonPropositional):
        star_measure(FAIR4, parse("box[>=1/2] Head"))
    with pytest.raises(UnknownAtom):
        star_measure(FAIR4, parse("Edge"))


def test_count_compatible_values():
    assert count_compatible(Model(FAIR4, ("Tail",))) == 3
    assert count_compatible(Model(FAIR4)) == 6
    assert count_compatible(Model(FAIR4, ("Tail", "Tail", "Tail"))) == 0
    assert count_compatible(Model(FAIR4, ("Tail", "Tail")), 1) == 3
    with pytest.raises(WorldBeyondObservation):
        count_compatible(Model(FAIR4, ("Tail",)), 2)
    with pytest.raises(ValueError):
        count_compatible(Model(FAIR4), 5)


def test_next_value_atomic_values_and_errors():
    assert next_value_atomic(Model(FAIR4, ("Tail",)), 1, "Head") == Fraction(2, 3)
    assert next_value_atomic(Model(FAIR4, ("Tail", "Tail")), 2, "Head") == 1
    assert next_value_atomic(Model(FAIR4, ("Head", "Tail")), 2, "Tail") == HALF
    with pytest.raises(NextBeyondHorizon):
        next_value_atomic(Model(FAIR4, ("Head",) * 2), 4, "Head")
    with pytest.raises(IncompatiblePrefix):
        next_value_atomic(Model(FAIR4, ("Tail", "Tail", "Tail")), 3, "Head")
    with pytest.raises(UnknownAtom):
        next_value_atomic(Model(FAIR4), 0, "Edge")


def test_max_index_examples():
    assert max_index(EvalContext(HHTH, 4), "box", parse("Head")) == Fraction(3, 4)
    assert max_index(EvalContext(Model(BIASED3), 2), "bbox", parse("Head")) == 1
    assert max_index(EvalContext(Model(FAIR4, ("Tail",)), 1), "next", parse("Head")) == Fraction(2, 3)
    assert max_index(EvalContext(HHTH, 3), "circ", parse("Head")) == HALF
    assert max_index(EvalContext(HHTH, 1), "star", parse("Head")) == HALF
    with pytest.raises(ValueError):
        max_index(EvalContext(HHTH, 1), "diamond", parse("Head"))


def corpus_models():
    yield HHTH
    yield Model(FAIR4, ("Tail", "Tail", "Tail"))  # incompatible prefix
    yield Model(BIASED3, ("Head",))


def test_reference_engine_matches_brute_force():
    """Both engines reproduce the direct-definition evaluator wherever the
    context is structurally safe."""
    rng = random.Random(11)
    for model in corpus_models():
        brute = BruteForce(model)
        evals = {engine: Evaluator(model, engine) for engine in Engine}
        selectors = [(None, OBSERVED)] + [
            (a, Member(a)) for a in (brute.members[0], brute.members[-1])
        ]
        for f in formula_corpus(rng, model.spec.atoms, 40):
            for raw, sel in selectors:
                for m in safe_worlds(model, f, observed=raw is None):
                    want = brute.holds(f, m, raw)
                    for engine in Engine:
                        assert evals[engine].evaluate(f, m, sel) == want


def test_max_index_matches_brute_force():
    rng = random.Random(13)
    for model in corpus_models():
        brute = BruteForce(model)
        evals = {engine: Evaluator(model, engine) for engine in Engine}
        for f in formula_corpus(rng, model.spec.atoms, 15, depth=2):
            for op in ("box", "circ", "bbox", "star", "next"):
                # star sweeps every world and next shifts evaluation one world
                # ahead, so an operand with its own continuation horizon would
                # overrun the series under those two tags
                if op in ("star", "next") and reach(f) > 0:
                    continue
                for m in safe_worlds(model, f, observed=True):
                    # the next tag additionally needs a successor world and the
                    # observed prefix up to m
                    if op == "next" and (m >= model.spec.n or m > len(model.observed)):
                        continue
                    want = brute.best(op, f, m, None)
                    for engine in Engine:
                        assert evals[engine].max_index(op, f, m) == want


def test_explain_reports_measures():
    text = explain(EvalContext(HHTH, 3), parse("box[>=2/3] Head"))
    assert "measure 2/3" in text
    assert "-> true" in text
    star = explain(EvalContext(HHTH, 1), parse("star[>=1/2] Head"))
    assert "outcome measure 1/2" in star
    star_slow = explain(EvalContext(HHTH, 1), parse("star[>=1/2] Head"), Engine.REFERENCE)
    assert "satisfaction fractions" in star_slow
    nxt = explain(EvalContext(Model(FAIR4, ("Tail",)), 1), parse("next[>=1/2] Head"), Engine.REFERENCE)
    assert "2 of 3 compatible continuations" in nxt
