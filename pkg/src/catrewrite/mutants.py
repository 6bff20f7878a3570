"""Deliberately broken candidates, one family per construction.

Each mutant takes a correct construction result and perturbs it.  The oracles
must reject every one of them; the test suite checks this on small hand-built
instances.  A mutant returns ``None`` when the instance gives it nothing to
perturb.
"""

from __future__ import annotations

from .graph import (Graph, Morphism, PartialMorphism, TermGraph, compose_total, fresh_id,
                    quotient)
from .hpo import HeteroMorphism, _copies_structure, node_partial
from .pushout import PushoutComplementResult


def _retarget(m: Morphism, tgt) -> Morphism:
    return Morphism(m.source, tgt, m.node_map, m.edge_map, check=False)


def _retarget_partial(m: PartialMorphism, tgt) -> PartialMorphism:
    return PartialMorphism(m.source, tgt, m.domain, m.node_map, m.edge_map, check=False)


def extra_node(candidate):
    """Add a disconnected node to the derived graph (total or partial bottom arrow)."""
    r1, bottom, g = candidate
    z = fresh_id("junk", set(r1.nodes) | set(r1.edges))
    grown = Graph(set(r1.nodes) | {z}, r1.edges)
    if isinstance(bottom, PartialMorphism):
        return grown, _retarget_partial(bottom, grown), _retarget(g, grown)
    return grown, _retarget(bottom, grown), _retarget(g, grown)


def overglue(candidate):
    """Identify the first two nodes of the derived graph that the construction kept apart."""
    r1, bottom, g = candidate
    nodes = sorted(r1.nodes)
    if len(nodes) < 2:
        return None
    merged, q = quotient(r1, [(nodes[0], nodes[1])])
    if isinstance(bottom, PartialMorphism):
        b = PartialMorphism(bottom.source, merged, bottom.domain,
                            {k: q.node_map[v] for k, v in bottom.node_map.items()},
                            {k: q.edge_map[v] for k, v in bottom.edge_map.items()})
    else:
        b = compose_total(bottom, q)
    return merged, b, compose_total(g, q)


def spo_keep_deleted(r: PartialMorphism, f: Morphism, candidate):
    """Keep a node that the rule deletes, mapped into the derived graph."""
    r1, bottom, g = candidate
    dead = sorted(f.node_map[x] for x in r.source.nodes if x not in r.domain.nodes)
    if not dead:
        return None
    y = dead[0]
    name = fresh_id(y, set(r1.nodes) | set(r1.edges))
    grown = Graph(set(r1.nodes) | {name}, r1.edges)
    dom = Graph(set(bottom.domain.nodes) | {y}, bottom.domain.edges)
    b = PartialMorphism(bottom.source, grown, dom, {**bottom.node_map, y: name},
                        bottom.edge_map)
    return grown, b, _retarget(g, grown)


def complement_keep_deleted(l: Morphism, f: Morphism, pc: PushoutComplementResult):
    """Put back into ``K1`` a node that the rule deletes (without its edges)."""
    kn = set(l.node_map.values())
    dead = sorted(f.node_map[x] for x in l.target.nodes if x not in kn)
    dead = [y for y in dead if y not in pc.k1.nodes]
    if not dead:
        return None
    y = dead[0]
    k1 = Graph(set(pc.k1.nodes) | {y}, pc.k1.edges)
    l1 = Morphism(k1, pc.l1.target, {**pc.l1.node_map, y: y}, pc.l1.edge_map)
    return PushoutComplementResult(k1, l1, _retarget(pc.g, k1))


def drop_context_edge(pc: PushoutComplementResult):
    """Remove from ``K1`` one edge outside the image of ``g``.

    For the deleting complement this loses a context edge; for the cloning
    one it loses one of the replicated copies.
    """
    used = set(pc.g.edge_map.values())
    spare = sorted(e for e in pc.k1.edges if e not in used)
    if not spare:
        return None
    e = spare[-1]
    k1 = Graph(pc.k1.nodes, {d: st for d, st in pc.k1.edges.items() if d != e})
    l1 = Morphism(k1, pc.l1.target, pc.l1.node_map,
                  {d: v for d, v in pc.l1.edge_map.items() if d != e})
    return PushoutComplementResult(k1, l1, _retarget(pc.g, k1))


def _rebuild(rho1: HeteroMorphism, g: Morphism, r1: TermGraph, sigma1=None):
    l1 = rho1.source
    sigma1 = dict(rho1.sigma.node_map if sigma1 is None else sigma1)
    return (HeteroMorphism(node_partial(l1, r1, rho1.tau.node_map),
                           node_partial(r1, l1, sigma1)),
            Morphism(g.source, r1, g.node_map))


def hpo_garbage_node(rho1: HeteroMorphism, g: Morphism):
    """An unlabeled node nobody points to and nothing copies."""
    r1 = rho1.target
    z = fresh_id("junk", set(r1.nodes))
    grown = TermGraph(set(r1.nodes) | {z}, r1.labels, r1.succ, r1.signature)
    return _rebuild(rho1, g, grown)


def hpo_clone_unlabeled(rho: HeteroMorphism, f: Morphism, rho1: HeteroMorphism,
                        g: Morphism):
    """Strip the label a clone inherits from the node its variable was matched to."""
    clones = _copies_structure(rho, f)
    if not clones:
        return None
    x = g.node_map[clones[0][0]]
    r1 = rho1.target
    labels = {n: v for n, v in r1.labels.items() if n != x}
    succ = {n: v for n, v in r1.succ.items() if n != x}
    return _rebuild(rho1, g, TermGraph(r1.nodes, labels, succ, r1.signature))


def hpo_context_not_redirected(f: Morphism, rho1: HeteroMorphism, g: Morphism):
    """Point one successor of a labeled context node somewhere other than its
    redirected target."""
    l1, r1 = f.target, rho1.target
    matched = set(f.node_map.values())
    tau1 = rho1.tau.node_map
    for c in sorted(l1.nodes - matched):
        if not l1.is_labeled(c) or not l1.succ[c]:
            continue
        want = tau1[l1.succ[c][0]]
        others = sorted(n for n in r1.nodes if n != want)
        if not others:
            continue
        x = tau1[c]
        succ = dict(r1.succ)
        succ[x] = (others[0],) + tuple(r1.succ[x][1:])
        return _rebuild(rho1, g, TermGraph(r1.nodes, r1.labels, succ, r1.signature))
    return None


MUTANTS = {
    "pushout": ("extra_node", "overglue"),
    "spo": ("extra_node", "spo_keep_deleted"),
    "pushout_complement": ("complement_keep_deleted",),
    "fpbc1": ("drop_context_edge",),
    "fpbc2": ("drop_context_edge",),
    "hpo": ("hpo_garbage_node", "hpo_clone_unlabeled", "hpo_context_not_redirected"),
}


__all__ = ["extra_node", "overglue", "spo_keep_deleted", "complement_keep_deleted",
           "drop_context_edge", "hpo_garbage_node", "hpo_clone_unlabeled",
           "hpo_context_not_redirected", "MUTANTS"]
