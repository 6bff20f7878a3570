"""Pushouts, pushout complements and final pullback complements of graphs,
and the rewriting systems built from them (PO, SPO, POC/DPO, FPBC/SqPO)."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (Graph, Morphism, MorphismError, PartialGraph, PartialMorphism,
                    compose_total, disjoint_union, fresh_id, inclusion, is_mono,
                    is_partial_mono, quotient)
from .systems import (DIRECT, INVERSE, ComposedRule, ComposedSquare, Rule, RewriteError,
                      RewriteSquare, RewriteSystem, Undefined, compose_systems)


def _require_shared_source(a, b):
    if a.source != b.source:
        raise MorphismError("morphisms must share their source")


def pushout_total(rho: Morphism, f: Morphism):
    """Pushout of ``rho: L -> R`` and ``f: L -> L1``; returns ``(R1, rho1, g)``.

    Built as ``(L1 ⊎ R)/≈`` with ``rho(x) ≈ f(x)``.  Classes that contain an
    item of ``L1`` are named after it, so untouched context keeps its ids.
    """
    _require_shared_source(rho, f)
    l1, r = f.target, rho.target
    taken = set(l1.nodes) | set(l1.edges)
    rn, re_ = {}, {}
    for n in sorted(r.nodes):
        rn[n] = fresh_id(n, taken)
        taken.add(rn[n])
    for e in sorted(r.edges):
        re_[e] = fresh_id(e, taken)
        taken.add(re_[e])
    edges = dict(l1.edges)
    for e, (s, t) in r.edges.items():
        edges[re_[e]] = (rn[s], rn[t])
    union = Graph(set(l1.nodes) | set(rn.values()), edges)
    node_pairs = [(f.node_map[x], rn[rho.node_map[x]]) for x in sorted(rho.source.nodes)]
    edge_pairs = [(f.edge_map[x], re_[rho.edge_map[x]]) for x in sorted(rho.source.edges)]
    l1_items = l1.items()

    def rep(cls):
        return min(cls, key=lambda x: (x not in l1_items, x))

    r1, q = quotient(union, node_pairs, edge_pairs, rep=rep)
    rho1 = Morphism(l1, r1, {n: q.node_map[n] for n in l1.nodes},
                    {e: q.edge_map[e] for e in l1.edges}, check=False)
    g = Morphism(r, r1, {n: q.node_map[rn[n]] for n in r.nodes},
                 {e: q.edge_map[re_[e]] for e in r.edges}, check=False)
    return r1, rho1, g


# ---------------------------------------------------------------------------
# SPO


def _identifies_across(f: Morphism, inside_nodes, inside_edges) -> bool:
    for items, fmap, inside in ((f.source.nodes, f.node_map, inside_nodes),
                                (f.source.edges, f.edge_map, inside_edges)):
        images_in = {fmap[x] for x in items if x in inside}
        if any(fmap[y] in images_in for y in items if y not in inside):
            return True
    return False


def conflict_free_spo(r: PartialMorphism, f: Morphism) -> bool:
    """``f`` never sends an item of ``dom(r)`` and an item outside it to the same place."""
    return not _identifies_across(f, r.domain.nodes, set(r.domain.edges))


def spo_pushout(r: PartialMorphism, f: Morphism):
    """Pushout of a partial mono ``r`` and a conflict-free total ``f`` in the
    category of partial morphisms; returns ``(R1, r1, g)`` or :class:`Undefined`."""
    if not is_partial_mono(r):
        raise RewriteError("SPO rule must be a partial monomorphism")
    _require_shared_source(r, f)
    if not conflict_free_spo(r, f):
        return Undefined("match is not conflict-free")
    L, l1 = r.source, f.target
    dead_nodes = {f.node_map[x] for x in L.nodes if x not in r.domain.nodes}
    dead_edges = {f.edge_map[e] for e in L.edges if e not in r.domain.edges}
    dead_edges |= {e for e, (s, t) in l1.edges.items()
                   if s in dead_nodes or t in dead_nodes}
    kept = Graph(l1.nodes - dead_nodes,
                 {e: st for e, st in l1.edges.items() if e not in dead_edges})
    dom = r.domain
    f0 = Morphism(dom, kept, {x: f.node_map[x] for x in dom.nodes},
                  {e: f.edge_map[e] for e in dom.edges}, check=False)
    r0 = r.carrier
    r1_obj, k1, g = pushout_total(r0, f0)
    r1 = PartialMorphism(l1, r1_obj, kept, k1.node_map, k1.edge_map, check=False)
    g = Morphism(r.target, r1_obj, g.node_map, g.edge_map, check=False)
    return r1_obj, r1, g


# ---------------------------------------------------------------------------
# DPO


@dataclass(frozen=True)
class GluingReport:
    dangling_ok: bool
    dangling_violations: tuple
    identification_ok: bool
    identification_violations: tuple

    @property
    def ok(self) -> bool:
        return self.dangling_ok and self.identification_ok


def _image_items(m: Morphism):
    return set(m.node_map.values()), set(m.edge_map.values())


def gluing_check(l: Morphism, f: Morphism) -> GluingReport:
    if not is_mono(l):
        raise RewriteError("gluing condition needs a mono rule")
    if l.target != f.source:
        raise MorphismError("rule target must be the match source")
    L, l1 = f.source, f.target
    kn, ke = _image_items(l)
    deleted = {f.node_map[x] for x in L.nodes if x not in kn}
    fe = set(f.edge_map.values())
    dangling = tuple(sorted(e for e, (s, t) in l1.edges.items()
                            if (s in deleted or t in deleted) and e not in fe))
    pairs = []
    for items, fmap, keep in ((sorted(L.nodes), f.node_map, kn),
                              (sorted(L.edges), f.edge_map, ke)):
        for i, x in enumerate(items):
            for y in items[i + 1:]:
                if fmap[x] == fmap[y] and not (x in keep and y in keep):
                    pairs.append((x, y))
    return GluingReport(not dangling, dangling, not pairs, tuple(pairs))


@dataclass(frozen=True)
class PushoutComplementResult:
    k1: Graph
    l1: Morphism
    g: Morphism


def pushout_complement(l: Morphism, f: Morphism):
    """``K1 = L1 − f(L − l(K))`` with its inclusion and ``g = f∘l``, or Undefined."""
    report = gluing_check(l, f)
    if not report.ok:
        why = []
        if not report.dangling_ok:
            why.append(f"dangling edges {list(report.dangling_violations)}")
        if not report.identification_ok:
            why.append(f"identified pairs {list(report.identification_violations)}")
        return Undefined("gluing condition fails: " + "; ".join(why))
    return _delete_outside_image(l, f)


def _delete_outside_image(l: Morphism, f: Morphism) -> PushoutComplementResult:
    L, l1 = f.source, f.target
    kn, ke = _image_items(l)
    gone_n = {f.node_map[x] for x in L.nodes if x not in kn}
    gone_e = {f.edge_map[e] for e in L.edges if e not in ke}
    gone_e |= {e for e, (s, t) in l1.edges.items() if s in gone_n or t in gone_n}
    k1 = Graph(l1.nodes - gone_n, {e: st for e, st in l1.edges.items() if e not in gone_e})
    K = l.source
    g = Morphism(K, k1, {k: f.node_map[l.node_map[k]] for k in K.nodes},
                 {e: f.edge_map[l.edge_map[e]] for e in K.edges})
    return PushoutComplementResult(k1, inclusion(k1, l1), g)


def _glue(k1: Graph, g: Morphism, r: Morphism):
    """Pushout of ``r: K -> R`` and ``g: K -> K1`` as a quotient of ``K1 ⊎ R``."""
    K = r.source
    u, i1, i2 = disjoint_union(k1, r.target)
    node_pairs = [(g.node_map[k], i2.node_map[r.node_map[k]]) for k in sorted(K.nodes)]
    edge_pairs = [(g.edge_map[e], i2.edge_map[r.edge_map[e]]) for e in sorted(K.edges)]
    r1_obj, q = quotient(u, node_pairs, edge_pairs)
    return r1_obj, compose_total(i1, q), compose_total(i2, q)


def _spans_squares(approach, l, r, f, k1, l1, g):
    r1_obj, r1, h = _glue(k1, g, r)
    K, L, R = l.source, l.target, r.target
    first = RewriteSquare(Rule(approach, L, K, l), Rule(approach, f.target, k1, l1), f, g)
    second = RewriteSquare(Rule("PO", K, R, r), Rule("PO", k1, r1_obj, r1), g, h)
    return ComposedSquare(first, second)


def dpo_step(l: Morphism, r: Morphism, f: Morphism):
    """Double pushout in one pass, independent of the composed system.

    The match is rejected when it identifies a deleted item with anything,
    or when removing ``f(L − l(K))`` from ``L1`` leaves a dangling edge.
    The result is glued with ``R`` as a quotient of a disjoint union.
    """
    if not is_mono(l):
        raise RewriteError("DPO span needs a mono left leg")
    if l.source != r.source:
        raise RewriteError("span legs must share the interface")
    if l.target != f.source:
        raise MorphismError("rule target must be the match source")
    L, l1 = f.source, f.target
    kept_n, kept_e = _image_items(l)
    for items, fmap, kept in ((L.nodes, f.node_map, kept_n), (L.edges, f.edge_map, kept_e)):
        pre = {}
        for x in items:
            pre.setdefault(fmap[x], []).append(x)
        for xs in pre.values():
            if len(xs) > 1 and not all(x in kept for x in xs):
                return Undefined(f"match identifies deleted item(s) {sorted(xs)}")
    del_n = {f.node_map[x] for x in L.nodes if x not in kept_n}
    del_e = {f.edge_map[e] for e in L.edges if e not in kept_e}
    rest = PartialGraph(l1.nodes - del_n,
                        {e: st for e, st in l1.edges.items() if e not in del_e})
    if not rest.is_graph():
        return Undefined(f"deletion leaves dangling edges {rest.dangling_edges()}")
    k1 = rest.to_graph()
    K = l.source
    g = Morphism(K, k1, {k: f.node_map[l.node_map[k]] for k in K.nodes},
                 {e: f.edge_map[l.edge_map[e]] for e in K.edges})
    return _spans_squares("POC", l, r, f, k1, inclusion(k1, l1), g)


# ---------------------------------------------------------------------------
# SqPO


def conflict_free_fpbc(l: Morphism, f: Morphism) -> bool:
    """``f`` never identifies an item in the image of ``l`` with one outside it."""
    kn, ke = _image_items(l)
    return not _identifies_across(f, kn, ke)


def fpbc_left_linear(l: Morphism, f: Morphism):
    """Final pullback complement for a mono rule and a conflict-free match."""
    if not is_mono(l):
        raise RewriteError("left-linear FPBC needs a mono rule")
    if l.target != f.source:
        raise MorphismError("rule target must be the match source")
    if not conflict_free_fpbc(l, f):
        return Undefined("match is not conflict-free")
    return _delete_outside_image(l, f)


def fpbc_monic_match(l: Morphism, f: Morphism) -> PushoutComplementResult:
    """Final pullback complement for an arbitrary rule and a mono match.

    The context ``L1 − f(L)`` is kept; each context edge is copied once for
    every choice of ``l``-preimages of its endpoints that lie in the image of
    ``f``, so nodes cloned by ``l`` receive their own copies of incident edges.
    """
    if not is_mono(f):
        raise RewriteError("monic-match FPBC needs a mono match")
    if l.target != f.source:
        raise MorphismError("rule target must be the match source")
    K, L, l1 = l.source, l.target, f.target
    back = {}
    for x in L.nodes:
        back[f.node_map[x]] = sorted(k for k in K.nodes if l.node_map[k] == x)
    taken = set(K.nodes) | set(K.edges)
    nodes = set(K.nodes)
    up_n = {k: f.node_map[l.node_map[k]] for k in K.nodes}
    lift = {}
    for c in sorted(l1.nodes - set(back)):
        name = fresh_id(c, taken)
        taken.add(name)
        nodes.add(name)
        lift[c] = [name]
        up_n[name] = c
    for y, ks in back.items():
        lift[y] = ks
    edges = dict(K.edges)
    up_e = {e: f.edge_map[l.edge_map[e]] for e in K.edges}
    image_edges = set(f.edge_map.values())
    context_edges = sorted(e for e in l1.edges if e not in image_edges)
    for e in context_edges:
        s, t = l1.edges[e]
        for a in lift[s]:
            for b in lift[t]:
                name = fresh_id(e, taken)
                taken.add(name)
                edges[name] = (a, b)
                up_e[name] = e
    k1 = Graph(nodes, edges)
    l1_arrow = Morphism(k1, l1, up_n, up_e)
    g = inclusion(K, k1)
    return PushoutComplementResult(k1, l1_arrow, g)


def sqpo_step(variant: int, l: Morphism, r: Morphism, f: Morphism):
    """Sesqui-pushout in one pass, independent of the composed system.

    Variant 1 (mono rule) deletes ``f(L − l(K))`` and every edge left
    dangling, provided no item inside ``f(l(K))`` is also hit from outside
    ``l(K)``.  Variant 2 (mono match) builds the interface as ``K`` plus the
    context, with one copy of a context edge per pair of endpoints above
    its endpoints.  Both then glue in ``R``.
    """
    if l.source != r.source:
        raise RewriteError("span legs must share the interface")
    if l.target != f.source:
        raise MorphismError("rule target must be the match source")
    K, L, l1 = l.source, l.target, f.target
    if variant == 1:
        if not is_mono(l):
            raise RewriteError("SqPO variant 1 needs a mono left leg")
        kept_n, kept_e = _image_items(l)
        for items, fmap, kept in ((L.nodes, f.node_map, kept_n),
                                  (L.edges, f.edge_map, kept_e)):
            inside = {fmap[x] for x in items if x in kept}
            outside = {fmap[x] for x in items if x not in kept}
            if inside & outside:
                return Undefined(f"match is not conflict-free at {sorted(inside & outside)}")
        del_n = {f.node_map[x] for x in L.nodes if x not in kept_n}
        del_e = {f.edge_map[e] for e in L.edges if e not in kept_e}
        rest = PartialGraph(l1.nodes - del_n,
                            {e: st for e, st in l1.edges.items() if e not in del_e})
        k1 = Graph(rest.nodes, {e: rest.edges[e] for e in rest.edges
                                if e not in rest.dangling_edges()})
        g = Morphism(K, k1, {k: f.node_map[l.node_map[k]] for k in K.nodes},
                     {e: f.edge_map[l.edge_map[e]] for e in K.edges})
        return _spans_squares("FPBC1", l, r, f, k1, inclusion(k1, l1), g)
    if variant != 2:
        raise ValueError("variant must be 1 or 2")
    if not is_mono(f):
        raise RewriteError("SqPO variant 2 needs a mono match")
    fl = compose_total(l, f)
    matched = set(f.node_map.values())
    ctx = Graph(l1.nodes - matched, {})
    u, from_k, from_ctx = disjoint_union(K, ctx)
    over = {}
    for x in K.nodes:
        over[from_k.node_map[x]] = fl.node_map[x]
    for c in ctx.nodes:
        over[from_ctx.node_map[c]] = c
    edges = dict(u.edges)
    up_e = {from_k.edge_map[e]: fl.edge_map[e] for e in K.edges}
    taken = set(u.nodes) | set(u.edges)
    for e in sorted(set(l1.edges) - set(f.edge_map.values())):
        s, t = l1.edges[e]
        for a in sorted(n for n in u.nodes if over[n] == s):
            for b in sorted(n for n in u.nodes if over[n] == t):
                name = fresh_id(e, taken)
                taken.add(name)
                edges[name] = (a, b)
                up_e[name] = e
    k1 = Graph(u.nodes, edges)
    l1_arrow = Morphism(k1, l1, over, up_e)
    g = Morphism(K, k1, from_k.node_map, from_k.edge_map)
    return _spans_squares("FPBC2", l, r, f, k1, l1_arrow, g)


# ---------------------------------------------------------------------------
# systems


class PushoutSystem(RewriteSystem):
    """Rules are arbitrary graph morphisms; every match rewrites by pushout."""

    name = "po"
    orientation = DIRECT
    match_category = "graph"
    right_category = "graph"

    def rule_defect(self, rule):
        if getattr(rule, "approach", None) != "PO":
            return "expected a PO rule"
        if not isinstance(rule.arrow, Morphism):
            return "PO rule arrow must be a total morphism"
        return rule.arrow.defect()

    def _step(self, rule, f):
        r1_obj, rho1, g = pushout_total(rule.arrow, f)
        return RewriteSquare(rule, Rule("PO", f.target, r1_obj, rho1), f, g)


class SpoSystem(RewriteSystem):
    name = "spo"
    orientation = DIRECT
    ambient = "partial"
    match_category = "graph"
    right_category = "graph"

    def rule_defect(self, rule):
        if getattr(rule, "approach", None) != "SPO":
            return "expected an SPO rule"
        if not isinstance(rule.arrow, PartialMorphism):
            return "SPO rule arrow must be a partial morphism"
        if not is_partial_mono(rule.arrow):
            return "SPO rule arrow must be a partial monomorphism"
        return rule.arrow.defect()

    def _step(self, rule, f):
        out = spo_pushout(rule.arrow, f)
        if isinstance(out, Undefined):
            return out
        r1_obj, r1, g = out
        return RewriteSquare(rule, Rule("SPO", f.target, r1_obj, r1), f, g)


class _MonoRuleInverse(RewriteSystem):
    orientation = INVERSE
    approach = ""
    mono_rule = True

    def rule_defect(self, rule):
        if getattr(rule, "approach", None) != self.approach:
            return f"expected a {self.approach} rule"
        if not isinstance(rule.arrow, Morphism):
            return "rule arrow must be a total morphism"
        if self.mono_rule and not is_mono(rule.arrow):
            return "rule arrow must be a monomorphism"
        return rule.arrow.defect()

    def _wrap(self, rule, f, pc):
        if isinstance(pc, Undefined):
            return pc
        return RewriteSquare(rule, Rule(self.approach, f.target, pc.k1, pc.l1), f, pc.g)


class PushoutComplementSystem(_MonoRuleInverse):
    name = "poc"
    approach = "POC"

    def _step(self, rule, f):
        return self._wrap(rule, f, pushout_complement(rule.arrow, f))


class Fpbc1System(_MonoRuleInverse):
    name = "fpbc1"
    approach = "FPBC1"

    def _step(self, rule, f):
        return self._wrap(rule, f, fpbc_left_linear(rule.arrow, f))


class Fpbc2System(_MonoRuleInverse):
    name = "fpbc2"
    approach = "FPBC2"
    mono_rule = False
    match_category = "graph_mono"
    right_category = "graph_mono"

    def match_defect(self, f):
        problem = super().match_defect(f)
        if problem:
            return problem
        if not is_mono(f):
            return "match must be a monomorphism"
        return None

    def _step(self, rule, f):
        return self._wrap(rule, f, fpbc_monic_match(rule.arrow, f))


po_system = PushoutSystem()
spo_system = SpoSystem()
poc_system = PushoutComplementSystem()
fpbc1_system = Fpbc1System()
fpbc2_system = Fpbc2System()
dpo_system = compose_systems(poc_system, po_system, name="dpo")
sqpo1_system = compose_systems(fpbc1_system, po_system, name="sqpo1")
sqpo2_system = compose_systems(fpbc2_system, po_system, name="sqpo2")


def span_rule(approach: str, l: Morphism, r: Morphism):
    """The composed rule for a span ``L <-l- K -r-> R`` (approach POC/FPBC1/FPBC2)."""
    return ComposedRule(Rule(approach, l.target, l.source, l),
                        Rule("PO", r.source, r.target, r))
