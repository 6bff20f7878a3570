"""Composition lemmas for match conditions.

Each lemma says: if the first match satisfies the condition for the rule and
the second satisfies it for the derived rule, the composite satisfies it for
the original rule.  The negatives show that dropping either hypothesis loses
the conclusion, so the suites are not vacuous.
"""

import pytest
from hypothesis import given

from catrewrite.graph import Graph, Morphism, PartialMorphism, identity, inclusion
from catrewrite.pushout import (conflict_free_fpbc, conflict_free_spo, gluing_check,
                                span_rule)
from catrewrite.systems import Rule

import suites
from conftest import instances


@pytest.mark.parametrize("system", ["spo", "dpo", "sqpo1"])
def test_lemma_sample(system):
    out = suites.lemma(system, 200, seed=17)
    assert out["violations"] == 0


@given(instances("spo"))
def test_spo_lemma_property(inst):
    assert suites.spo_lemma(inst.rule, inst.f1, inst.f2) is not False


@given(instances("dpo"))
def test_dpo_lemma_property(inst):
    assert suites.dpo_lemma(inst.rule, inst.f1, inst.f2) is not False


@given(instances("sqpo1"))
def test_sqpo1_lemma_property(inst):
    assert suites.sqpo1_lemma(inst.rule, inst.f1, inst.f2) is not False


AB = Graph(["a", "b"])
X = Graph(["x"])
MERGE = Morphism(AB, X, {"a": "x", "b": "x"})


def _spo_rule():
    r = PartialMorphism(AB, Graph(["a"]), Graph(["a"]), {"a": "a"})
    return Rule("SPO", AB, r.target, r)


def test_spo_first_hypothesis_needed():
    rule = _spo_rule()
    assert suites.spo_lemma(rule, MERGE, identity(X)) is None
    assert not conflict_free_spo(rule.arrow, MERGE)


def test_spo_second_hypothesis_needed():
    rule = _spo_rule()
    f1 = identity(AB)
    assert conflict_free_spo(rule.arrow, f1)
    assert suites.spo_lemma(rule, f1, MERGE) is None
    assert not conflict_free_spo(rule.arrow, MERGE)


def _dpo_rule(k_nodes, l_graph):
    K = Graph(k_nodes)
    return span_rule("POC", inclusion(K, l_graph), identity(K))


def test_dpo_first_hypothesis_needed(ex):
    rule = _dpo_rule([], ex["A"])
    f1 = inclusion(ex["A"], ex["AC"])
    assert suites.dpo_lemma(rule, f1, identity(ex["AC"])) is None
    assert not gluing_check(rule.first.arrow, f1).ok


def test_dpo_second_hypothesis_needed():
    rule = _dpo_rule(["a"], AB)
    f1 = identity(AB)
    L2 = Graph(["a", "b", "c"], {"e": ("b", "c")})
    f2 = inclusion(AB, L2)
    assert gluing_check(rule.first.arrow, f1).ok
    assert suites.dpo_lemma(rule, f1, f2) is None
    composite_report = gluing_check(rule.first.arrow, f2)
    assert not composite_report.dangling_ok


def test_sqpo1_first_hypothesis_needed():
    rule = span_rule("FPBC1", inclusion(Graph(["a"]), AB), identity(Graph(["a"])))
    assert suites.sqpo1_lemma(rule, MERGE, identity(X)) is None
    assert not conflict_free_fpbc(rule.first.arrow, MERGE)


def test_sqpo1_second_hypothesis_needed():
    rule = span_rule("FPBC1", inclusion(Graph(["a"]), AB), identity(Graph(["a"])))
    f1 = identity(AB)
    assert conflict_free_fpbc(rule.first.arrow, f1)
    assert suites.sqpo1_lemma(rule, f1, MERGE) is None
    assert not conflict_free_fpbc(rule.first.arrow, MERGE)
