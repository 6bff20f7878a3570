import pytest
from hypothesis import given

from catrewrite.graph import (Graph, Morphism, MorphismError, PartialMorphism, compose_total,
                              identity, inclusion, is_mono, is_partial_mono)
from catrewrite.homs import is_isomorphic
from catrewrite.oracle import (is_pushout_square, verify_fpbc_bounded,
                               verify_partial_pushout_bounded, verify_pullback,
                               verify_pushout_bounded, verify_pushout_complement)
from catrewrite.pushout import (conflict_free_fpbc, conflict_free_spo, dpo_step,
                                fpbc_left_linear, fpbc_monic_match, gluing_check,
                                pushout_complement, pushout_total, spo_pushout, sqpo_step)
from catrewrite.systems import RewriteError, is_undefined

import suites
from conftest import instances


def G(nodes, edges=None):
    return Graph(nodes, edges or {})


# -- total pushouts -----------------------------------------------------------


def test_pushout_along_identity(ex):
    L = ex["A"]
    f = inclusion(L, ex["L1"])
    r1, rho1, g = pushout_total(identity(L), f)
    assert r1 == ex["L1"] and g == f and rho1 == identity(ex["L1"])


def test_pushout_of_identity_match(ex):
    rho = inclusion(ex["A"], ex["AC"])
    r1, rho1, g = pushout_total(rho, identity(ex["A"]))
    assert is_isomorphic(r1, ex["AC"])
    assert rho1 == compose_total(rho, g)


def test_pushout_adds_fresh_node(ex):
    L, R = G(["a"]), G(["a", "r"])
    rho, f = inclusion(L, R), inclusion(L, ex["AC"])
    cand = pushout_total(rho, f)
    r1 = cand[0]
    assert (len(r1.nodes), len(r1.edges)) == (3, 1)
    assert verify_pushout_bounded(rho, f, cand).ok


def test_pushout_merges_through_rule():
    # the rule glues two nodes, the match keeps them apart: their images merge
    L = G(["x", "y"])
    R = G(["m"])
    rho = Morphism(L, R, {"x": "m", "y": "m"})
    L1 = G(["x", "y"], {"e": ("x", "y")})
    f = inclusion(L, L1)
    r1, rho1, g = pushout_total(rho, f)
    assert len(r1.nodes) == 1 and len(r1.edges) == 1
    assert verify_pushout_bounded(rho, f, (r1, rho1, g)).ok


def test_pushout_source_mismatch(ex):
    with pytest.raises(MorphismError):
        pushout_total(identity(ex["A"]), identity(ex["AC"]))


@given(instances("po"))
def test_pushout_commutes(inst):
    rho, f = inst.rule.arrow, inst.f1
    r1, rho1, g = pushout_total(rho, f)
    assert compose_total(rho, g) == compose_total(f, rho1)
    assert rho1.defect() is None and g.defect() is None


# -- SPO ------------------------------------------------------------------------


def test_conflict_free_examples():
    L = G(["a", "b"])
    r = PartialMorphism(L, G(["a"]), G(["a"]), {"a": "a"})
    merge = Morphism(L, G(["x"]), {"a": "x", "b": "x"})
    mono = Morphism(L, G(["x", "y"]), {"a": "x", "b": "y"})
    assert not conflict_free_spo(r, merge)
    assert conflict_free_spo(r, mono)
    empty = PartialMorphism(L, G([]), G([]), {})
    assert conflict_free_spo(empty, merge)


def test_spo_identity_rule(ex):
    L = ex["A"]
    r = PartialMorphism(L, L, L, {"a": "a"})
    f = inclusion(L, ex["L1"])
    r1_obj, r1, g = spo_pushout(r, f)
    assert r1_obj == ex["L1"]
    assert r1.domain == ex["L1"] and r1.node_map == {n: n for n in ex["L1"].nodes}
    assert g == f


def test_spo_pure_deletion(ex):
    L = G(["a"])
    r = PartialMorphism(L, G([]), G([]), {})
    f = inclusion(L, ex["AC"])
    cand = spo_pushout(r, f)
    r1_obj, r1, g = cand
    assert r1_obj == G(["c"])
    assert verify_partial_pushout_bounded(r, f, cand).ok


def test_spo_rejects_non_mono_rule():
    L = G(["a", "b"])
    r = PartialMorphism(L, G(["x"]), L, {"a": "x", "b": "x"})
    with pytest.raises(RewriteError):
        spo_pushout(r, identity(L))


@given(instances("spo"))
def test_spo_postconditions(inst):
    out = spo_pushout(inst.rule.arrow, inst.f1)
    if is_undefined(out):
        assert not conflict_free_spo(inst.rule.arrow, inst.f1)
        return
    _, r1, g = out
    assert g.defect() is None and is_partial_mono(r1)


# -- gluing and pushout complements ------------------------------------------


def test_gluing_examples(ex):
    L = ex["A"]
    ok = gluing_check(identity(L), inclusion(L, ex["L1"]))
    assert ok.ok
    dangling = gluing_check(inclusion(G([]), L), inclusion(L, ex["AC"]))
    assert not dangling.dangling_ok and dangling.dangling_violations == ("e1",)
    assert dangling.identification_ok
    two = G(["a", "b"])
    merged = gluing_check(inclusion(G([]), two), Morphism(two, G(["x"]), {"a": "x", "b": "x"}))
    assert not merged.identification_ok and merged.identification_violations == (("a", "b"),)
    assert not merged.ok


def test_gluing_needs_mono_rule():
    two = G(["a", "b"])
    l = Morphism(two, G(["x"]), {"a": "x", "b": "x"})
    with pytest.raises(RewriteError):
        gluing_check(l, identity(G(["x"])))


def test_complement_of_identity(ex):
    K = ex["AC"]
    pc = pushout_complement(identity(K), inclusion(K, ex["L1"]))
    assert pc.k1 == ex["L1"]


def test_complement_by_difference(ex):
    K, L = G(["a"]), G(["a", "b"])
    l, f = inclusion(K, L), inclusion(L, ex["L1"])
    pc = pushout_complement(l, f)
    assert pc.k1 == ex["AC"]
    assert suites.complement_item_for_item(l, f, pc)
    assert verify_pushout_complement(l, f, (pc.k1, pc.l1, pc.g)).ok
    assert is_pushout_square(l, pc.g, pc.l1, f)


def test_complement_undefined_on_dangling(ex):
    L = ex["A"]
    out = pushout_complement(inclusion(G([]), L), inclusion(L, ex["AC"]))
    assert is_undefined(out) and "dangling" in out.reason


@given(instances("poc"))
def test_complement_item_for_item(inst):
    pc = pushout_complement(inst.rule.arrow, inst.f1)
    if not is_undefined(pc):
        assert suites.complement_item_for_item(inst.rule.arrow, inst.f1, pc)


# -- DPO ------------------------------------------------------------------------


def test_dpo_identity_span(ex):
    K = ex["A"]
    sq = dpo_step(identity(K), identity(K), inclusion(K, ex["L1"]))
    assert sq.derived == ex["L1"]


def test_dpo_delete_node():
    K, L = G(["k"]), G(["k", "d"])
    L1 = G(["k", "d", "z"], {"e": ("k", "z")})
    sq = dpo_step(inclusion(K, L), identity(K), inclusion(L, L1))
    assert is_isomorphic(sq.derived, G(["k", "z"], {"e": ("k", "z")}))


def test_dpo_adds_and_deletes():
    K, L = G(["k"]), G(["k", "d"])
    R = G(["k", "n"], {"new": ("k", "n")})
    L1 = G(["k", "d", "z"], {"e": ("z", "k")})
    sq = dpo_step(inclusion(K, L), inclusion(K, R), inclusion(L, L1))
    d = sq.derived
    assert (len(d.nodes), len(d.edges)) == (3, 2)
    assert "d" not in d.nodes


def test_dpo_undefined_reasons(ex):
    L = ex["A"]
    K = G([])
    assert is_undefined(dpo_step(inclusion(K, L), identity(K), inclusion(L, ex["AC"])))
    two = G(["a", "b"])
    f = Morphism(two, G(["x"]), {"a": "x", "b": "x"})
    out = dpo_step(inclusion(G(["a"]), two), identity(G(["a"])), f)
    assert is_undefined(out) and "identifies" in out.reason


# -- SqPO -----------------------------------------------------------------------


def test_fpbc_identity_rule(ex):
    L = ex["AC"]
    f = inclusion(L, ex["L1"])
    pc = fpbc_left_linear(identity(L), f)
    assert pc.k1 == ex["L1"] and pc.g == f


def test_fpbc_left_linear_not_conflict_free():
    K, L = G(["a"]), G(["a", "b"])
    f = Morphism(L, G(["x"]), {"a": "x", "b": "x"})
    assert not conflict_free_fpbc(inclusion(K, L), f)
    assert is_undefined(fpbc_left_linear(inclusion(K, L), f))


def test_fpbc_left_linear_deletes_dangling(ex):
    # where the complement is undefined, the final pullback complement drops the edge
    L = ex["A"]
    l, f = inclusion(G([]), L), inclusion(L, ex["AC"])
    pc = fpbc_left_linear(l, f)
    assert pc.k1 == G(["c"])
    assert verify_fpbc_bounded(l, f, (pc.k1, pc.l1, pc.g)).ok


@given(instances("poc"))
def test_fpbc_agrees_with_complement_under_gluing(inst):
    l, f = inst.rule.arrow, inst.f1
    pc = pushout_complement(l, f)
    if is_undefined(pc):
        return
    fp = fpbc_left_linear(l, f)
    assert (fp.k1, fp.l1, fp.g) == (pc.k1, pc.l1, pc.g)
    assert verify_pullback(l, f, (fp.k1, fp.l1, fp.g)).ok


def test_fpbc_monic_match_identity(ex):
    L = ex["AC"]
    f = inclusion(L, ex["L2"])
    pc = fpbc_monic_match(identity(L), f)
    assert is_isomorphic(pc.k1, ex["L2"]) and is_mono(pc.l1)


def test_fpbc_cloning():
    K, L = G(["k1", "k2"]), G(["p"])
    l = Morphism(K, L, {"k1": "p", "k2": "p"})
    L1 = G(["p", "q"], {"e": ("q", "p")})
    f = inclusion(L, L1)
    pc = fpbc_monic_match(l, f)
    expected = G(["k1", "k2", "q"], {"x": ("q", "k1"), "y": ("q", "k2")})
    assert is_isomorphic(pc.k1, expected)
    assert verify_fpbc_bounded(l, f, (pc.k1, pc.l1, pc.g)).ok


def test_fpbc_monic_match_deletion():
    K, L = G([]), G(["p"])
    L1 = G(["p", "q", "s"], {"e": ("q", "p"), "u": ("q", "s")})
    l, f = inclusion(K, L), inclusion(L, L1)
    pc = fpbc_monic_match(l, f)
    assert is_isomorphic(pc.k1, G(["q", "s"], {"u": ("q", "s")}))
    assert verify_fpbc_bounded(l, f, (pc.k1, pc.l1, pc.g)).ok


def test_fpbc_monic_match_needs_mono():
    L = G(["a", "b"])
    with pytest.raises(RewriteError):
        fpbc_monic_match(identity(L), Morphism(L, G(["x"]), {"a": "x", "b": "x"}))


def test_sqpo_identity_span(ex):
    K = ex["AC"]
    for variant in (1, 2):
        sq = sqpo_step(variant, identity(K), identity(K), inclusion(K, ex["L2"]))
        assert is_isomorphic(sq.derived, ex["L2"])


def test_sqpo2_propagates_clones():
    K, L = G(["k1", "k2"]), G(["p"])
    l = Morphism(K, L, {"k1": "p", "k2": "p"})
    L1 = G(["p", "q"], {"e": ("q", "p")})
    sq = sqpo_step(2, l, identity(K), inclusion(L, L1))
    assert is_isomorphic(sq.derived, G(["k1", "k2", "q"], {"x": ("q", "k1"), "y": ("q", "k2")}))


def test_sqpo_variant_preconditions():
    K, L = G(["k1", "k2"]), G(["p"])
    l = Morphism(K, L, {"k1": "p", "k2": "p"})
    with pytest.raises(RewriteError):
        sqpo_step(1, l, identity(K), identity(L))
    two = G(["p", "q"])
    m = Morphism(two, G(["x"]), {"p": "x", "q": "x"})
    with pytest.raises(RewriteError):
        sqpo_step(2, identity(two), identity(two), m)
    with pytest.raises(ValueError):
        sqpo_step(3, identity(two), identity(two), identity(two))
