"""Termgraph rewriting with heterogeneous pushouts.

A heterogeneous morphism ``L ~> R`` is a pair of partial termgraph
morphisms, ``tau: L ⇀ R`` forward and ``sigma: R ⇀ L`` backward.  A rule
has ``tau`` defined on every node of ``L``; ``sigma`` marks the nodes of
``R`` that copy a node of ``L`` (a labeled copy must agree with its
original, an unlabeled one is a clone that inherits the matched structure).

Partial termgraph morphisms here are node maps, so composing the backward
legs of a square leg-wise says nothing.  The cocone conditions used below
therefore also read the backward legs transposed (``sigma1∘g = f∘sigma``),
require the context of the match to be preserved, and require the derived
termgraph to carry the labels that the rule copies.  See
:func:`cocone_defect`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import (Graph, Morphism, MorphismError, PartialMorphism, TermGraph,
                    as_partial, compose_partial, compose_total, fresh_id, identity,
                    is_mono, nowhere)
from .homs import iter_homs
from .systems import DIRECT, Rule, RewriteError, RewriteSquare, RewriteSystem


@dataclass(frozen=True)
class HeteroMorphism:
    tau: PartialMorphism
    sigma: PartialMorphism

    def __post_init__(self):
        t, s = self.tau, self.sigma
        if not (isinstance(t.source, TermGraph) and isinstance(t.target, TermGraph)):
            raise MorphismError("heterogeneous morphisms live between termgraphs")
        if t.source != s.target or t.target != s.source:
            raise MorphismError("forward and backward legs do not span the same pair")

    @property
    def source(self) -> TermGraph:
        return self.tau.source

    @property
    def target(self) -> TermGraph:
        return self.tau.target


def node_partial(source: TermGraph, target: TermGraph, mapping) -> PartialMorphism:
    """Partial termgraph morphism from a node dictionary (keys form the domain)."""
    mapping = dict(mapping)
    return PartialMorphism(source, target, Graph(mapping), mapping)


def embed(f: Morphism) -> HeteroMorphism:
    """A total morphism ``f`` seen as the pair ``(f, nowhere)``."""
    return HeteroMorphism(as_partial(f), nowhere(f.target, f.source))


def hetero_identity(g: TermGraph) -> HeteroMorphism:
    return embed(identity(g))


def hetero_compose(u: HeteroMorphism, v: HeteroMorphism) -> HeteroMorphism:
    """``v ∘ u``: forward legs compose forward, backward legs backward."""
    if u.target != v.source:
        raise MorphismError("cannot compose: target of first is not source of second")
    return HeteroMorphism(compose_partial(u.tau, v.tau), compose_partial(v.sigma, u.sigma))


def validate_hpo_rule(rho: HeteroMorphism) -> tuple[bool, list[str]]:
    """Check the rule conditions; the diagnostics name each offending node."""
    L, R = rho.source, rho.target
    tau, sigma = rho.tau, rho.sigma
    problems = []
    missing = sorted(L.nodes - set(tau.node_map))
    if missing:
        problems.append(f"tau is undefined on nodes {missing}")
    for p in sorted(sigma.node_map):
        q = sigma.node_map[p]
        if not R.is_labeled(p):
            continue
        if R.label(p) != L.label(q):
            problems.append(f"node {p!r} labeled {R.label(p)!r} copies {q!r} "
                            f"labeled {L.label(q)!r}")
            continue
        if missing:
            continue
        want = tuple(tau.node_map[s] for s in L.succ[q])
        if R.succ[p] != want:
            problems.append(f"successors of {p!r} are not the tau-images of "
                            f"those of {q!r}")
    return not problems, problems


def _check_match(f: Morphism):
    if not isinstance(f, Morphism) or not isinstance(f.source, TermGraph):
        raise RewriteError("HPO match must be a termgraph morphism")
    problem = f.defect()
    if problem:
        raise RewriteError(f"HPO match is not a termgraph morphism: {problem}")
    if not is_mono(f):
        raise RewriteError("HPO match must be a monomorphism")


def _copies_structure(rho: HeteroMorphism, f: Morphism):
    """Pairs ``(p, f(q))``: unlabeled clones of variables whose match is labeled."""
    L, R, l1 = rho.source, rho.target, f.target
    out = []
    for p, q in sorted(rho.sigma.node_map.items()):
        if not R.is_labeled(p) and not L.is_labeled(q) and l1.is_labeled(f.node_map[q]):
            out.append((p, f.node_map[q]))
    return out


def cocone_defect(rho: HeteroMorphism, f: Morphism, rho1: HeteroMorphism,
                  g: Morphism) -> Optional[str]:
    """Why ``(rho1, g)`` is not a heterogeneous cocone over ``rho`` and ``f``."""
    L, R = rho.source, rho.target
    l1 = f.target
    if f.source != L or g.source != R or rho1.source != l1 or g.target != rho1.target:
        return "square endpoints do not line up"
    if g.defect():
        return f"right leg: {g.defect()}"
    if not is_mono(g):
        return "right leg is not mono"
    ok, why = validate_hpo_rule(rho1)
    if not ok:
        return f"bottom rule: {why[0]}"
    # leg-wise commutation
    lhs = hetero_compose(embed(f), rho1)
    rhs = hetero_compose(rho, embed(g))
    if lhs.tau != rhs.tau:
        return "forward legs do not commute"
    if lhs.sigma != rhs.sigma:
        return "backward legs do not commute"
    # transposed backward legs
    if compose_partial(as_partial(g), rho1.sigma) != compose_partial(rho.sigma, as_partial(f)):
        return "sigma1∘g differs from f∘sigma"
    tau1, sigma1 = rho1.tau.node_map, rho1.sigma.node_map
    r1 = rho1.target
    matched = set(f.node_map.values())
    for c in sorted(l1.nodes - matched):
        if sigma1.get(tau1[c]) != c:
            return f"context node {c!r} is not preserved"
        if l1.is_labeled(c):
            x = tau1[c]
            if r1.label(x) != l1.label(c) or r1.succ[x] != tuple(tau1[s] for s in l1.succ[c]):
                return f"context node {c!r} is not copied with its label"
    for p, y in _copies_structure(rho, f):
        x = g.node_map[p]
        if r1.label(x) != l1.label(y) or r1.succ[x] != tuple(tau1[s] for s in l1.succ[y]):
            return f"clone {p!r} does not inherit the structure of {y!r}"
    return None


def check_hetero_cocone(rho: HeteroMorphism, f: Morphism, rho1: HeteroMorphism,
                        g: Morphism) -> bool:
    return cocone_defect(rho, f, rho1, g) is None


def cocone_morphism_ok(a_rho1: HeteroMorphism, a_g: Morphism, b_rho1: HeteroMorphism,
                       b_g: Morphism, h: Morphism, h_left: Morphism = None) -> bool:
    """``h`` carries cocone ``a`` to cocone ``b`` (``h_left`` relates their lhs)."""
    if h_left is None:
        h_left = identity(a_rho1.source)
    if compose_total(a_g, h) != b_g:
        return False
    fwd_a = compose_partial(a_rho1.tau, as_partial(h))
    fwd_b = compose_partial(as_partial(h_left), b_rho1.tau)
    if fwd_a != fwd_b:
        return False
    back_a = compose_partial(as_partial(h), b_rho1.sigma)
    back_b = compose_partial(a_rho1.sigma, as_partial(h_left))
    return back_a == back_b


def hpo_construct(rho: HeteroMorphism, f: Morphism):
    """The heterogeneous pushout of ``rho`` and a mono match ``f``.

    Returns ``(rho1, g)``.  The derived termgraph holds a copy of ``R`` and
    the context ``L1 − f(L)``.  Edges from the context into the matched part
    are redirected along ``tau``; clones of variables inherit the label and
    successors of what the variable was matched to.
    """
    ok, why = validate_hpo_rule(rho)
    if not ok:
        raise RewriteError("invalid HPO rule: " + "; ".join(why))
    _check_match(f)
    L, R, l1 = rho.source, rho.target, f.target
    if f.source != L:
        raise RewriteError("match source is not the rule's lhs")
    tau, sigma = rho.tau.node_map, rho.sigma.node_map
    back = {y: x for x, y in f.node_map.items()}
    ctx = sorted(l1.nodes - set(back))
    taken = set(ctx)
    gname = {}
    for p in sorted(R.nodes):
        gname[p] = fresh_id(p, taken)
        taken.add(gname[p])
    tau1 = {y: gname[tau[x]] for y, x in back.items()}
    tau1.update({c: c for c in ctx})

    labels, succ = {}, {}
    for p in R.labels:
        labels[gname[p]] = R.labels[p]
        succ[gname[p]] = [gname[s] for s in R.succ[p]]
    for p, y in _copies_structure(rho, f):
        labels[gname[p]] = l1.labels[y]
        succ[gname[p]] = [tau1[s] for s in l1.succ[y]]
    for c in ctx:
        if l1.is_labeled(c):
            labels[c] = l1.labels[c]
            succ[c] = [tau1[s] for s in l1.succ[c]]
    signature = {**dict(l1.signature), **dict(R.signature)}
    r1 = TermGraph(set(gname.values()) | set(ctx), labels, succ, signature)

    sigma1 = {gname[p]: f.node_map[q] for p, q in sigma.items()}
    sigma1.update({c: c for c in ctx})
    rho1 = HeteroMorphism(node_partial(l1, r1, tau1), node_partial(r1, l1, sigma1))
    g = Morphism(R, r1, gname)
    return rho1, g


def hpo_step(rho: HeteroMorphism, f: Morphism) -> RewriteSquare:
    rho1, g = hpo_construct(rho, f)
    top = Rule("HPO", rho.source, rho.target, rho)
    bottom = Rule("HPO", rho1.source, rho1.target, rho1)
    return RewriteSquare(top, bottom, f, g)


def hpo_rule(rho: HeteroMorphism) -> Rule:
    return Rule("HPO", rho.source, rho.target, rho)


class HpoSystem(RewriteSystem):
    name = "hpo"
    orientation = DIRECT
    ambient = "hetero"
    match_category = "termgraph_mono"
    right_category = "termgraph_mono"

    def rule_defect(self, rule):
        if getattr(rule, "approach", None) != "HPO":
            return "expected an HPO rule"
        if not isinstance(rule.arrow, HeteroMorphism):
            return "HPO rule arrow must be a heterogeneous morphism"
        ok, why = validate_hpo_rule(rule.arrow)
        return None if ok else why[0]

    def match_defect(self, f):
        if not isinstance(f, Morphism) or not isinstance(f.source, TermGraph):
            return "match must be a termgraph morphism"
        problem = f.defect()
        if problem:
            return problem
        if not is_mono(f):
            return "match must be a monomorphism"
        return None

    def _step(self, rule, f):
        return hpo_step(rule.arrow, f)

    def compose_arrows(self, a, b):
        to_h = lambda m: embed(m) if isinstance(m, Morphism) else m
        return hetero_compose(to_h(a), to_h(b))

    def commutes(self, sq: RewriteSquare) -> bool:
        return check_hetero_cocone(sq.top.arrow, sq.left, sq.bottom.arrow, sq.right)

    def identity_square(self, rule) -> RewriteSquare:
        return RewriteSquare(rule, rule, identity(rule.lhs), identity(rule.rhs))

    def equivalences(self, a, b, h_left=None):
        if h_left is None:
            if a.bottom.lhs != b.bottom.lhs:
                return
            h_left = identity(a.bottom.lhs)
        fixed = {}
        for p, x in a.right.node_map.items():
            y = b.right.node_map[p]
            if fixed.setdefault(x, y) != y:
                return
        for h in iter_homs(a.derived, b.derived, "iso", fixed=fixed):
            if cocone_morphism_ok(a.bottom.arrow, a.right, b.bottom.arrow, b.right,
                                  h, h_left):
                yield h


hpo_system = HpoSystem()
