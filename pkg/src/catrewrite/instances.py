"""Seeded random instances for the property suites: small graphs, rules and
match chains ``L -f1-> L1 -f2-> L2`` for every rewriting system."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from .garbage import gr
from .graph import Graph, Morphism, PartialMorphism, TermGraph, inclusion
from .hpo import HeteroMorphism, node_partial
from .systems import Rule
from .pushout import span_rule

MAX_NODES = 4
MAX_EDGES = 5


def random_graph(rng: random.Random, max_nodes: int = MAX_NODES,
                 max_edges: int = MAX_EDGES, prefix: str = "n",
                 min_nodes: int = 0) -> Graph:
    n = rng.randint(min_nodes, max_nodes)
    nodes = [f"{prefix}{i}" for i in range(n)]
    edges = {}
    if nodes:
        for i in range(rng.randint(0, max_edges)):
            edges[f"{prefix}e{i}"] = (rng.choice(nodes), rng.choice(nodes))
    return Graph(nodes, edges)


def random_subgraph(rng: random.Random, g: Graph, keep: float = 0.6) -> Graph:
    nodes = {n for n in g.nodes if rng.random() < keep}
    edges = {e: st for e, st in g.edges.items()
             if st[0] in nodes and st[1] in nodes and rng.random() < keep}
    return Graph(nodes, edges)


def random_extension(rng: random.Random, g: Graph, mono: bool = False,
                     max_nodes: int = MAX_NODES, max_edges: int = MAX_EDGES,
                     prefix: str = "m", keep_names: bool = False,
                     merge: float = 0.3):
    """A random morphism out of ``g`` into a new graph within the size limits.

    Returns ``(target, f)``.  Without ``mono``, nodes and parallel edges may be
    merged.  ``keep_names`` makes a mono extension an inclusion.
    """
    if keep_names and not mono:
        raise ValueError("keep_names needs a mono extension")
    nmap, tnodes = {}, []
    for i, n in enumerate(sorted(g.nodes)):
        if not mono and tnodes and rng.random() < merge:
            nmap[n] = rng.choice(tnodes)
            continue
        name = n if keep_names else f"{prefix}{len(tnodes)}"
        nmap[n] = name
        tnodes.append(name)
    taken = set(tnodes)
    k = 0
    while len(tnodes) < max_nodes and rng.random() < 0.5:
        name = f"{prefix}x{k}"
        k += 1
        if name not in taken:
            tnodes.append(name)
            taken.add(name)
    emap, tedges = {}, {}
    for j, e in enumerate(sorted(g.edges)):
        s, t = g.edges[e]
        st = (nmap[s], nmap[t])
        same = [d for d, ends in tedges.items() if ends == st]
        if not mono and same and rng.random() < merge:
            emap[e] = rng.choice(same)
            continue
        name = e if keep_names else f"{prefix}e{len(tedges)}"
        emap[e] = name
        tedges[name] = st
    k = 0
    while tnodes and len(tedges) < max_edges and rng.random() < 0.5:
        name = f"{prefix}y{k}"
        k += 1
        tedges[name] = (rng.choice(tnodes), rng.choice(tnodes))
    tgt = Graph(tnodes, tedges)
    return tgt, Morphism(g, tgt, nmap, emap)


def _fits(g, max_nodes=MAX_NODES, max_edges=MAX_EDGES) -> bool:
    return len(g.nodes) <= max_nodes and len(g.edges) <= max_edges


@dataclass
class Instance:
    """A rule with a chain of two composable matches."""

    rule: Any
    f1: Morphism
    f2: Morphism

    @property
    def composite(self):
        from .graph import compose_total
        return compose_total(self.f1, self.f2)


def match_chain(rng: random.Random, L, mono: bool = False, inclusions: bool = False):
    """Two consecutive random matches out of ``L``."""
    l1, f1 = random_extension(rng, L, mono=mono or inclusions, prefix="a",
                              keep_names=inclusions)
    l2, f2 = random_extension(rng, l1, mono=mono or inclusions, prefix="b",
                              keep_names=inclusions)
    return f1, f2


def random_partial_mono(rng: random.Random, L: Graph) -> PartialMorphism:
    dom = random_subgraph(rng, L)
    r_obj, carrier = random_extension(rng, dom, mono=True, prefix="r")
    return PartialMorphism(L, r_obj, dom, carrier.node_map, carrier.edge_map)


def random_mono(rng: random.Random, K: Graph, prefix: str = "l"):
    tgt, m = random_extension(rng, K, mono=True, prefix=prefix)
    return m


def random_rule(rng: random.Random, system: str):
    """A random valid rule for the named system (left side at most 3 nodes)."""
    if system in ("lgr", "rgr"):
        L = random_graph(rng, 3, 4)
        R = random_subgraph(rng, L)
        if system == "rgr":
            R = gr(R, L)
        return Rule(system.upper(), L, R, inclusion(R, L))
    if system == "po":
        L = random_graph(rng, 3, 3)
        R, rho = random_extension(rng, L, prefix="r")
        return Rule("PO", L, R, rho)
    if system == "spo":
        L = random_graph(rng, 3, 3)
        return _spo_rule(rng, L)
    K = random_graph(rng, 2, 2, prefix="k")
    if system in ("poc", "fpbc1", "dpo", "sqpo1"):
        l = random_mono(rng, K)
    else:
        _, l = random_extension(rng, K, prefix="l", max_nodes=3, max_edges=3)
    approach = {"poc": "POC", "dpo": "POC", "fpbc1": "FPBC1", "sqpo1": "FPBC1",
                "fpbc2": "FPBC2", "sqpo2": "FPBC2"}[system]
    if system in ("poc", "fpbc1", "fpbc2"):
        return Rule(approach, l.target, K, l)
    _, r = random_extension(rng, K, prefix="r", max_nodes=3, max_edges=3)
    return span_rule(approach, l, r)


def _spo_rule(rng, L):
    r = random_partial_mono(rng, L)
    return Rule("SPO", L, r.target, r)


MONO_MATCH = {"fpbc2", "sqpo2", "hpo"}
INCLUSION_MATCH = {"lgr", "rgr"}


def random_instance(rng: random.Random, system: str) -> Instance:
    """A rule and two composable matches that fit in the size limits."""
    while True:
        if system == "hpo":
            rule, f1, f2 = random_hpo_instance(rng)
            return Instance(rule, f1, f2)
        rule = random_rule(rng, system)
        f1, f2 = match_chain(rng, rule.lhs, mono=system in MONO_MATCH,
                             inclusions=system in INCLUSION_MATCH)
        if _fits(f2.target) and _fits(rule.lhs):
            return Instance(rule, f1, f2)


# ---------------------------------------------------------------------------
# termgraphs


def random_signature(rng: random.Random) -> dict:
    return {lab: rng.randint(0, 2) for lab in ("f", "g")[:rng.randint(1, 2)]}


def random_termgraph(rng: random.Random, signature: dict, max_nodes: int = MAX_NODES,
                     prefix: str = "t", min_nodes: int = 1) -> TermGraph:
    n = rng.randint(min_nodes, max_nodes)
    nodes = [f"{prefix}{i}" for i in range(n)]
    labels, succ = {}, {}
    for x in nodes:
        if rng.random() < 0.5:
            lab = rng.choice(sorted(signature))
            labels[x] = lab
            succ[x] = [rng.choice(nodes) for _ in range(signature[lab])]
    return TermGraph(nodes, labels, succ, signature)


def random_termgraph_extension(rng: random.Random, g: TermGraph,
                               max_nodes: int = MAX_NODES, prefix: str = "u",
                               keep_names: bool = False):
    """A random mono termgraph morphism out of ``g``: rename, add context,
    and give some unlabeled nodes a label."""
    nodes = sorted(g.nodes)
    nmap = {n: (n if keep_names else f"{prefix}{i}") for i, n in enumerate(nodes)}
    tnodes = list(nmap.values())
    k = 0
    while len(tnodes) < max_nodes and rng.random() < 0.6:
        name = f"{prefix}c{k}"
        k += 1
        if name not in tnodes:
            tnodes.append(name)
    sig = g.signature
    labels = {nmap[n]: lab for n, lab in g.labels.items()}
    succ = {nmap[n]: [nmap[s] for s in ss] for n, ss in g.succ.items()}
    for x in tnodes:
        if x in labels or rng.random() < 0.5:
            continue
        lab = rng.choice(sorted(sig))
        labels[x] = lab
        succ[x] = [rng.choice(tnodes) for _ in range(sig[lab])]
    tgt = TermGraph(tnodes, labels, succ, sig)
    return tgt, Morphism(g, tgt, nmap)


def random_hpo_rule(rng: random.Random, L: TermGraph) -> HeteroMorphism:
    """A random valid rule: ``tau`` total on nodes, ``sigma`` marking copies."""
    sig = L.signature
    lnodes = sorted(L.nodes)
    rnodes, tau = [], {}
    for x in lnodes:
        if rnodes and rng.random() < 0.25:
            tau[x] = rng.choice(rnodes)
        else:
            tau[x] = f"r{len(rnodes)}"
            rnodes.append(tau[x])
    while len(rnodes) < MAX_NODES and rng.random() < 0.4:
        rnodes.append(f"r{len(rnodes)}")
    labels, succ, sigma = {}, {}, {}
    for p in rnodes:
        roll = rng.random()
        if roll < 0.45 and lnodes:
            q = rng.choice(lnodes)
            sigma[p] = q
            if L.is_labeled(q) and rng.random() < 0.6:
                labels[p] = L.labels[q]
                succ[p] = [tau[s] for s in L.succ[q]]
        elif roll < 0.75:
            lab = rng.choice(sorted(sig))
            labels[p] = lab
            succ[p] = [rng.choice(rnodes) for _ in range(sig[lab])]
    R = TermGraph(rnodes, labels, succ, sig)
    return HeteroMorphism(node_partial(L, R, tau), node_partial(R, L, sigma))


def random_hpo_instance(rng: random.Random):
    sig = random_signature(rng)
    L = random_termgraph(rng, sig, max_nodes=2)
    rho = random_hpo_rule(rng, L)
    l1, f1 = random_termgraph_extension(rng, L, max_nodes=MAX_NODES - 1, prefix="u")
    l2, f2 = random_termgraph_extension(rng, l1, prefix="w")
    return Rule("HPO", L, rho.target, rho), f1, f2


__all__ = ["random_graph", "random_subgraph", "random_extension", "random_rule",
           "random_instance", "random_termgraph", "random_hpo_rule",
           "random_hpo_instance", "random_partial_mono", "match_chain",
           "Instance", "MONO_MATCH", "INCLUSION_MATCH"]
