import json
import os
import pathlib

import pytest

import dialogos

DATA = pathlib.Path(os.environ.get("DIALOGOS_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))

LEFT = "forall x. a(x) | exists x. ~a(x)"
DRINKER = "exists x. (a(x) -> forall y. a(y))"


def test_parse_and_polarity():
    f = dialogos.parse("a -> b")
    assert str(f) == "a -> b"
    assert f.polarity() == {"a": "negative", "b": "positive"}
    assert dialogos.Formula("forall x. p(x)") == dialogos.Formula("forall y. p(y)")
    with pytest.raises(ValueError):
        dialogos.parse("a &")


def test_prove_is_strategic():
    d = dialogos.prove("forall x. c(x) |- exists x. c(x)")
    assert d is not None
    assert dialogos.validate_derivation(d)[0]
    assert dialogos.is_strategic(d)
    assert dialogos.prove("a -> b") is None


def test_strategies_and_translation():
    for formula in (LEFT, DRINKER):
        s = dialogos.find_winning_strategy(formula)
        assert s is not None
        ok, condition, path, message = dialogos.validate_strategy(s)
        assert ok, message
        assert dialogos.is_winning(s)
        d = dialogos.strategy_to_derivation(s)
        assert dialogos.validate_derivation(d)[0]
        back = dialogos.derivation_to_strategy(d)
        assert dialogos.is_winning(back)
    assert dialogos.find_winning_strategy("a | b") is None


def test_entailment():
    v = dialogos.entail(
        ["exists x. exists y. (suedois(x) & (prix_Nobel(y) & gagner(x,y)))", "forall u. (suedois(u) -> scandinave(u))"],
        "exists w. exists z. (scandinave(w) & (prix_Nobel(z) & gagner(w,z)))",
    )
    assert v["answer"] == "yes"
    assert v["evidence"] == "winning-strategy"


def test_suite():
    results = dialogos.run_suite((DATA / "fracas_subset.json").read_text())
    assert [r["answer"] for r in results] == ["yes", "yes", "no", "unknown"]
    assert all(r["matches"] for r in results)
    assert dialogos.run_suite(json.dumps([])) == []


def test_limits():
    tight = dialogos.SearchLimits(max_depth=1)
    assert tight.max_depth == 1
    assert dialogos.find_winning_strategy(LEFT, tight) is None
    assert dialogos.find_winning_strategy(LEFT, dialogos.SearchLimits()) is not None
