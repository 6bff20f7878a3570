import itertools

import pytest
from hypothesis import given, strategies as st

from catrewrite.graph import (Graph, GraphError, Morphism, MorphismError, PartialGraph,
                              PartialMorphism, TermGraph, as_partial, compose_partial,
                              compose_total, disjoint_union, fresh_id, graph_difference,
                              identity, image_subgraph, inclusion, inverse, is_iso, is_mono,
                              is_partial_mono, nowhere, pullback_object, quotient)
from catrewrite.homs import is_isomorphic

from conftest import graphs


def test_graph_rejects_dangling_edge():
    with pytest.raises(GraphError):
        Graph(["a"], {"e": ("a", "b")})


def test_partial_graph_reports_dangling():
    pg = PartialGraph(["a"], {"e": ("a", "b"), "f": ("a", "a")})
    assert pg.dangling_edges() == ["e"]
    assert not pg.is_graph()
    with pytest.raises(GraphError):
        pg.to_graph()


def test_fresh_id_is_deterministic():
    assert fresh_id("a", {"x"}) == "a"
    assert fresh_id("a", {"a"}) == "a#1"
    assert fresh_id("a", {"a", "a#1"}) == "a#2"


def test_termgraph_arity_checked():
    with pytest.raises(GraphError, match="arity"):
        TermGraph(["x", "y"], {"x": "f"}, {"x": []}, {"f": 1})
    t = TermGraph(["x", "y"], {"x": "f"}, {"x": ["y"]}, {"f": 1})
    assert t.edges == {"x/0": ("x", "y")}


def test_compose_identity_and_chain():
    a, x, p = Graph(["a"]), Graph(["x"]), Graph(["p"])
    f = Morphism(a, x, {"a": "x"})
    g = Morphism(x, p, {"x": "p"})
    assert compose_total(identity(a), f) == f
    assert compose_total(f, g).node_map == {"a": "p"}


def test_compose_inclusions_of_example_chain(ex):
    f1 = inclusion(ex["A"], ex["L1"])
    f2 = inclusion(ex["L1"], ex["L2"])
    assert compose_total(f1, f2) == inclusion(ex["A"], ex["L2"])


def test_compose_mismatch_raises():
    a, b = Graph(["a"]), Graph(["b"])
    with pytest.raises(MorphismError):
        compose_total(identity(a), identity(b))


def test_partial_composition_domains():
    ab, xy = Graph(["a", "b"]), Graph(["x", "y"])
    f = Morphism(ab, xy, {"a": "x", "b": "y"})
    g = PartialMorphism(xy, Graph(["z"]), Graph(["x"]), {"x": "z"})
    h = compose_partial(f, g)
    assert dict(h.node_map) == {"a": "z"}
    assert h.domain == Graph(["a"])
    omega = nowhere(Graph(["q"]), ab)
    assert compose_partial(omega, as_partial(f)).node_map == {}
    whole = compose_partial(as_partial(f), as_partial(identity(xy)))
    assert whole == as_partial(f)


def test_mono_checks(ex):
    assert is_mono(identity(ex["L2"]))
    collapse = Morphism(Graph(["a", "b"]), Graph(["x"]), {"a": "x", "b": "x"})
    assert not is_mono(collapse)
    assert is_mono(inclusion(ex["AC"], ex["L1"]))


def test_partial_mono_checks():
    ab, x = Graph(["a", "b"]), Graph(["x"])
    assert is_partial_mono(nowhere(ab, x))
    assert is_partial_mono(as_partial(identity(ab)))
    assert not is_partial_mono(PartialMorphism(ab, x, ab, {"a": "x", "b": "x"}))


def test_difference(ex):
    g = ex["L2"]
    assert graph_difference(g, g) == PartialGraph()
    assert graph_difference(g, Graph()) == PartialGraph(g.nodes, g.edges)
    d = graph_difference(ex["L1"], ex["AC"])
    assert d.nodes == {"b"} and not d.edges and d.is_graph()


def test_quotient_examples():
    g = Graph(["a", "b", "c"])
    q, p = quotient(g)
    assert q == g and p == identity(g)
    q, _ = quotient(g, [("a", "b")])
    assert len(q.nodes) == 2
    h = Graph(["s1", "t1", "s2", "t2"], {"e1": ("s1", "t1"), "e2": ("s2", "t2")})
    q, p = quotient(h, [("s1", "s2")])
    assert len(q.nodes) == 3 and len(q.edges) == 2
    assert p.defect() is None
    assert q.edges[p("e1")][0] == q.edges[p("e2")][0]


def _closure(items, pairs):
    """Naive equivalence closure by fixpoint iteration."""
    rel = {(x, x) for x in items} | set(pairs) | {(b, a) for a, b in pairs}
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return rel
        rel |= extra


@given(graphs(), st.data())
def test_quotient_matches_closure(g, data):
    nodes, edges = sorted(g.nodes), sorted(g.edges)
    npairs = data.draw(st.lists(st.tuples(st.sampled_from(nodes), st.sampled_from(nodes)),
                                max_size=3)) if nodes else []
    epairs = data.draw(st.lists(st.tuples(st.sampled_from(edges), st.sampled_from(edges)),
                                max_size=2)) if edges else []
    q, p = quotient(g, npairs, epairs)
    assert p.defect() is None
    erel = _closure(edges, epairs)
    forced = [(g.edges[a][0], g.edges[b][0]) for a, b in erel]
    forced += [(g.edges[a][1], g.edges[b][1]) for a, b in erel]
    nrel = _closure(nodes, npairs + forced)
    for x, y in itertools.product(nodes, nodes):
        assert (p(x) == p(y)) == ((x, y) in nrel)
    for x, y in itertools.product(edges, edges):
        assert (p(x) == p(y)) == ((x, y) in erel)


def test_disjoint_union(ex):
    g = ex["AC"]
    u, i1, i2 = disjoint_union(g, Graph())
    assert is_isomorphic(u, g)
    u, _, _ = disjoint_union(Graph(["a"]), Graph(["a"]))
    assert len(u.nodes) == 2
    u, i1, i2 = disjoint_union(g, g)
    assert (len(u.nodes), len(u.edges)) == (4, 2)
    assert is_mono(i1) and is_mono(i2)


@given(graphs(), graphs())
def test_disjoint_union_sizes(g, h):
    u, i1, i2 = disjoint_union(g, h)
    assert len(u.nodes) == len(g.nodes) + len(h.nodes)
    assert len(u.edges) == len(g.edges) + len(h.edges)
    assert i1.defect() is None and i2.defect() is None
    assert not (set(i1.node_map.values()) & set(i2.node_map.values()))


def test_iso_and_inverse(ex):
    g = ex["AC"]
    ren = Graph(["p", "q"], {"z": ("p", "q")})
    f = Morphism(g, ren, {"a": "p", "c": "q"}, {"e1": "z"})
    assert is_iso(f)
    assert compose_total(f, inverse(f)) == identity(g)
    assert image_subgraph(f) == ren


def test_pullback_object_of_identity(ex):
    g = ex["L1"]
    p, pa, pb = pullback_object(identity(g), identity(g))
    assert is_isomorphic(p, g)
    assert compose_total(pa, identity(g)) == compose_total(pb, identity(g))
