"""Law registry plumbing; the exhaustive sweep lives in the acceptance suite."""

from fractions import Fraction

import pytest

from freqlogic import (
    Engine,
    FrequencySpec,
    Model,
    UnknownLaw,
    check_all_laws,
    check_law,
    list_laws,
    pinned_model,
    random_models,
)

FAIR2 = FrequencySpec(("Head", "Tail"), {"Head": Fraction(1, 2), "Tail": Fraction(1, 2)}, 2)


def test_registry_shape():
    rows = list_laws()
    ids = [law_id for law_id, _, _ in rows]
    assert len(ids) == len(set(ids))
    assert all(summary for _, summary, _ in rows)
    assert "le-box-dual" in ids
    assert "non-law-star-implies-member-box" in ids


def test_unknown_law_is_rejected():
    with pytest.raises(UnknownLaw):
        check_law("no-such-law", Model(FAIR2))
    with pytest.raises(UnknownLaw):
        check_all_laws(Model(FAIR2), ["le-box-dual", "no-such-law"])
    with pytest.raises(UnknownLaw):
        pinned_model("no-such-law")


def test_pinned_models_exist_exactly_for_non_laws():
    for law_id, _, expected in list_laws():
        model = pinned_model(law_id)
        assert (model is None) == expected


def test_check_law_needs_a_model_unless_pinned():
    with pytest.raises(ValueError):
        check_law("le-box-dual")
    report = check_law("le-box-dual", Model(FAIR2))
    assert report.passed and report.as_expected
    assert report.instances > 0
    assert report.counterexample is None


def test_non_law_reports_its_counterexample():
    report = check_law("non-law-member-box-eq-split")
    assert not report.passed
    assert report.as_expected
    assert "member-box-eq-split" in report.counterexample


def test_check_all_laws_shares_one_sweep():
    reports = check_all_laws(Model(FAIR2), ["circle-monotone", "truth-implies-circle"])
    assert [r.law_id for r in reports] == ["circle-monotone", "truth-implies-circle"]
    assert all(r.passed for r in reports)


def test_random_models_are_deterministic():
    a = random_models(9, 5)
    b = random_models(9, 5)
    assert [(m.spec, m.observed, m.weights) for m in a] == [
        (m.spec, m.observed, m.weights) for m in b
    ]
    assert all(m.spec.n <= 6 and len(m.spec.atoms) <= 3 for m in a)


def test_engines_agree_on_a_law_replay():
    model = Model(FAIR2, ("Head",))
    for law_id in ("member-box-pin", "star-eq-pinned"):
        ref = check_law(law_id, model, Engine.REFERENCE)
        acc = check_law(law_id, model, Engine.ACCELERATED)
        assert ref.passed and acc.passed
        assert ref.instances == acc.instances
