import random
import time

import pytest
from hypothesis import given, strategies as st

from catrewrite.garbage import (gr, is_garbage_free, lgr_step, lgr_system,
                                reachable_subgraph, reproduce_counterexample, rgr_step,
                                rgr_system)
from catrewrite.graph import Graph, GraphError, Morphism, identity, inclusion
from catrewrite.instances import random_subgraph
from catrewrite.systems import RewriteError, Rule, check_functoriality_identity

from conftest import graphs


def closure(roots, g):
    """Least fixpoint of 'roots are alive, successors of alive nodes are alive'."""
    alive = set(roots)
    while True:
        more = {t for s, t in g.edges.values() if s in alive} - alive
        if not more:
            return alive
        alive |= more


def test_reachability_examples(ex):
    assert gr(ex["A"], ex["L1"]) == ex["AC"]
    assert gr(ex["A"], ex["L2"]) == ex["ACD"]
    assert gr(ex["L1"], ex["L2"]) == ex["L2"]
    res = reachable_subgraph(ex["A"], ex["L2"])
    assert res.alive == {"a", "c", "d"}
    assert res.witness_order == ("a", "c", "d")


def test_roots_must_be_subgraph(ex):
    with pytest.raises(GraphError):
        gr(Graph(["zz"]), ex["L1"])


@given(graphs(), st.data())
def test_matches_fixpoint(g, data):
    roots = data.draw(st.sets(st.sampled_from(sorted(g.nodes)))) if g.nodes else set()
    res = reachable_subgraph(Graph(roots), g)
    assert res.alive == closure(roots, g)
    assert res.gr == g.induced(res.alive)


@given(graphs(), st.integers(0, 2**16))
def test_idempotent_monotone_edge_blind(g, seed):
    rng = random.Random(seed)
    a = random_subgraph(rng, g)
    a_big = Graph(set(a.nodes) | set(random_subgraph(rng, g).nodes), a.edges)
    once = gr(a, g)
    assert gr(once, g) == once
    assert once.is_subgraph_of(gr(a_big, g))
    assert gr(Graph(a.nodes), g) == once


def test_lgr_examples(ex):
    A = ex["A"]
    rho = identity(A)
    assert lgr_step(rho, inclusion(A, ex["L1"])).derived == ex["AC"]
    assert lgr_step(rho, inclusion(A, ex["L2"])).derived == ex["ACD"]
    assert lgr_step(rho, identity(A)).derived == A


def test_rgr_examples(ex):
    A = ex["A"]
    rho = identity(A)
    sq1 = rgr_step(rho, inclusion(A, ex["L1"]))
    assert sq1.derived == ex["AC"]
    sq2 = rgr_step(sq1.bottom.arrow, inclusion(ex["L1"], ex["L2"]))
    assert sq2.derived == ex["ACD"]
    L = ex["L1"]
    assert rgr_step(inclusion(A, L), identity(L)).derived == gr(A, L)


def test_identity_laws(ex):
    A = ex["A"]
    assert check_functoriality_identity(lgr_system, Rule("LGR", A, A, identity(A)))
    assert check_functoriality_identity(rgr_system, Rule("RGR", A, A, identity(A)))


def test_inclusions_required(ex):
    bent = Morphism(ex["A"], ex["AC"], {"a": "c"})
    with pytest.raises(RewriteError):
        lgr_step(identity(ex["A"]), bent)


def test_garbage_free_rules(ex):
    assert is_garbage_free(inclusion(ex["AC"], ex["L1"]))
    assert not is_garbage_free(inclusion(ex["A"], ex["L1"]))


def test_counterexample():
    t0 = time.perf_counter()
    rep = reproduce_counterexample()
    assert time.perf_counter() - t0 < 1.0
    assert rep.lgr_verdict == "fails" and rep.rgr_verdict == "holds"
    assert (len(rep.lgr_two_step.nodes), len(rep.lgr_two_step.edges)) == (5, 3)
    assert (len(rep.lgr_one_step.nodes), len(rep.lgr_one_step.edges)) == (3, 2)
    assert rep.rgr_two_step == rep.rgr_one_step
    assert sorted(rep.rgr_one_step.nodes) == ["a", "c", "d"]
    assert rep.lines()[0] == "lgr: fails"


@given(graphs(), st.integers(0, 2**16))
def test_rgr_composition_of_closures(g, seed):
    rng = random.Random(seed)
    l1 = random_subgraph(rng, g)
    L = random_subgraph(rng, l1)
    R = random_subgraph(rng, L)
    assert gr(gr(R, l1), g) == gr(R, g)
