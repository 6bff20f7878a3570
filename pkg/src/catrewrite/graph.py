"""Finite graphs, termgraphs, and total/partial morphisms between them.

Every value here is immutable once built.  Node and edge ids are opaque
strings; constructions that need new ids draw them from :func:`fresh_id`,
which appends ``#<n>`` to a base name until the id is unused, so derived
graphs come out the same on every run.
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union


class GraphError(ValueError):
    """Malformed graph or termgraph."""


class MorphismError(ValueError):
    """Malformed morphism, or morphisms whose endpoints do not line up."""


def fresh_id(base: str, taken) -> str:
    if base not in taken:
        return base
    n = 1
    while f"{base}#{n}" in taken:
        n += 1
    return f"{base}#{n}"


def _freeze_edges(edges) -> Mapping[str, tuple[str, str]]:
    if isinstance(edges, Mapping):
        items = {str(e): (str(st[0]), str(st[1])) for e, st in edges.items()}
    else:
        items = {}
        for e, s, t in edges:
            if e in items:
                raise GraphError(f"duplicate edge id {e!r}")
            items[str(e)] = (str(s), str(t))
    return MappingProxyType(dict(sorted(items.items())))


class PartialGraph:
    """Nodes and edges whose endpoints may point at absent nodes."""

    __slots__ = ("nodes", "edges", "_hash")

    def __init__(self, nodes: Iterable[str] = (), edges=()):
        object.__setattr__(self, "nodes", frozenset(str(n) for n in nodes))
        object.__setattr__(self, "edges", _freeze_edges(edges))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def src(self, e: str) -> str:
        return self.edges[e][0]

    def tgt(self, e: str) -> str:
        return self.edges[e][1]

    @property
    def edge_ids(self) -> frozenset:
        return frozenset(self.edges)

    def dangling_edges(self) -> list[str]:
        return sorted(e for e, (s, t) in self.edges.items()
                      if s not in self.nodes or t not in self.nodes)

    def is_graph(self) -> bool:
        return not self.dangling_edges()

    def to_graph(self) -> "Graph":
        return Graph(self.nodes, self.edges)

    def size(self) -> tuple[int, int]:
        return len(self.nodes), len(self.edges)

    def _key(self):
        return (type(self).__name__, self.nodes, tuple(self.edges.items()))

    def __eq__(self, other):
        if not isinstance(other, PartialGraph) or type(self) is not type(other):
            return NotImplemented
        return self.nodes == other.nodes and dict(self.edges) == dict(other.edges)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.nodes, frozenset(self.edges.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        es = ", ".join(f"{e}:{s}->{t}" for e, (s, t) in self.edges.items())
        return f"{type(self).__name__}(nodes={sorted(self.nodes)}, edges=[{es}])"


class Graph(PartialGraph):
    """A finite directed multigraph with explicit edge ids."""

    __slots__ = ()

    def __init__(self, nodes: Iterable[str] = (), edges=()):
        super().__init__(nodes, edges)
        for e, (s, t) in self.edges.items():
            if s not in self.nodes or t not in self.nodes:
                missing = s if s not in self.nodes else t
                raise GraphError(f"edge {e!r} refers to unknown node {missing!r}")
        if self.nodes & frozenset(self.edges):
            clash = sorted(self.nodes & frozenset(self.edges))[0]
            raise GraphError(f"id {clash!r} is used for both a node and an edge")

    def is_subgraph_of(self, other: "Graph") -> bool:
        if not self.nodes <= other.nodes:
            return False
        return all(e in other.edges and other.edges[e] == st
                   for e, st in self.edges.items())

    def subgraph(self, nodes: Iterable[str], edges: Iterable[str]) -> "Graph":
        return Graph(nodes, {e: self.edges[e] for e in edges})

    def induced(self, nodes: Iterable[str]) -> "Graph":
        ns = frozenset(nodes)
        return Graph(ns, {e: st for e, st in self.edges.items()
                          if st[0] in ns and st[1] in ns})

    def out_edges(self, n: str) -> list[str]:
        return [e for e, (s, _) in self.edges.items() if s == n]

    def successors(self, n: str) -> list[str]:
        return sorted({t for s, t in self.edges.values() if s == n})

    def items(self) -> frozenset:
        return self.nodes | frozenset(self.edges)


class TermGraph:
    """A graph whose labeled nodes carry an ordered successor list.

    ``labels`` maps labeled nodes to their label, ``succ`` maps each labeled
    node to a tuple of successor node ids whose length is the label's arity
    in ``signature``.  Unlabeled nodes have no successors.  The underlying
    graph names the i-th successor edge of ``n`` as ``"n/i"``.
    """

    __slots__ = ("nodes", "labels", "succ", "signature", "_graph", "_hash")

    def __init__(self, nodes: Iterable[str], labels: Mapping[str, str] = None,
                 succ: Mapping[str, Iterable[str]] = None,
                 signature: Mapping[str, int] = None):
        labels = dict(labels or {})
        succ = {n: tuple(ss) for n, ss in (succ or {}).items()}
        signature = dict(signature or {})
        ns = frozenset(nodes)
        for n, lab in labels.items():
            if n not in ns:
                raise GraphError(f"label on unknown node {n!r}")
            if lab not in signature:
                raise GraphError(f"node {n!r}: label {lab!r} missing from signature")
            got = len(succ.get(n, ()))
            if got != signature[lab]:
                raise GraphError(f"node {n!r}: label {lab!r} has arity "
                                 f"{signature[lab]} but {got} successors given")
        for n, ss in succ.items():
            if n not in labels and ss:
                raise GraphError(f"unlabeled node {n!r} has successors")
            for m in ss:
                if m not in ns:
                    raise GraphError(f"node {n!r} has unknown successor {m!r}")
        set_ = object.__setattr__
        set_(self, "nodes", ns)
        set_(self, "labels", MappingProxyType(dict(sorted(labels.items()))))
        set_(self, "succ", MappingProxyType(
            {n: succ.get(n, ()) for n in sorted(labels)}))
        set_(self, "signature", MappingProxyType(dict(sorted(signature.items()))))
        set_(self, "_graph", None)
        set_(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("TermGraph is immutable")

    @property
    def graph(self) -> Graph:
        if self._graph is None:
            edges = {f"{n}/{i}": (n, m)
                     for n, ss in self.succ.items() for i, m in enumerate(ss)}
            object.__setattr__(self, "_graph", Graph(self.nodes, edges))
        return self._graph

    @property
    def edges(self):
        return self.graph.edges

    def is_labeled(self, n: str) -> bool:
        return n in self.labels

    def label(self, n: str) -> Optional[str]:
        return self.labels.get(n)

    def size(self) -> tuple[int, int]:
        return len(self.nodes), len(self.edges)

    def with_signature(self, signature: Mapping[str, int]) -> "TermGraph":
        return TermGraph(self.nodes, self.labels, self.succ, signature)

    def __eq__(self, other):
        if not isinstance(other, TermGraph):
            return NotImplemented
        return (self.nodes == other.nodes and dict(self.labels) == dict(other.labels)
                and dict(self.succ) == dict(other.succ))

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(
                (self.nodes, frozenset(self.labels.items()),
                 frozenset(self.succ.items()))))
        return self._hash

    def __repr__(self):
        parts = []
        for n in sorted(self.nodes):
            if n in self.labels:
                parts.append(f"{n}:{self.labels[n]}({','.join(self.succ[n])})")
            else:
                parts.append(n)
        return f"TermGraph({' '.join(parts)})"


AnyGraph = Union[Graph, TermGraph]


def underlying(g: AnyGraph) -> Graph:
    return g.graph if isinstance(g, TermGraph) else g


# ---------------------------------------------------------------------------
# morphisms


def _termgraph_edge_map(source: TermGraph, target: TermGraph, node_map) -> dict:
    emap = {}
    for n, ss in source.succ.items():
        m = node_map.get(n)
        for i in range(len(ss)):
            emap[f"{n}/{i}"] = f"{m}/{i}"
    return emap


class Morphism:
    """A total structure-preserving map ``source -> target``.

    For termgraphs only ``node_map`` is given: labeled nodes must land on
    nodes with the same label, and the i-th successor edge goes to the i-th
    successor edge of the image.
    """

    __slots__ = ("source", "target", "node_map", "edge_map", "_hash")

    def __init__(self, source: AnyGraph, target: AnyGraph,
                 node_map: Mapping[str, str], edge_map: Mapping[str, str] = None,
                 check: bool = True):
        node_map = dict(node_map)
        if isinstance(source, TermGraph):
            if not isinstance(target, TermGraph):
                raise MorphismError("termgraph morphism needs a termgraph target")
            edge_map = _termgraph_edge_map(source, target, node_map)
        else:
            edge_map = dict(edge_map or {})
        set_ = object.__setattr__
        set_(self, "source", source)
        set_(self, "target", target)
        set_(self, "node_map", MappingProxyType(node_map))
        set_(self, "edge_map", MappingProxyType(edge_map))
        set_(self, "_hash", None)
        if check:
            problem = self.defect()
            if problem:
                raise MorphismError(problem)

    def __setattr__(self, name, value):
        raise AttributeError("Morphism is immutable")

    def defect(self) -> Optional[str]:
        src, tgt = self.source, self.target
        if set(self.node_map) != set(src.nodes):
            return "node map is not total on the source"
        for n, m in self.node_map.items():
            if m not in tgt.nodes:
                return f"node {n!r} maps to unknown node {m!r}"
        if isinstance(src, TermGraph):
            for n, lab in src.labels.items():
                m = self.node_map[n]
                if tgt.label(m) != lab:
                    return f"node {n!r} labeled {lab!r} maps to {m!r} with label {tgt.label(m)!r}"
                if tuple(self.node_map[s] for s in src.succ[n]) != tgt.succ[m]:
                    return f"successors of {n!r} are not preserved positionally"
            return None
        if set(self.edge_map) != set(src.edges):
            return "edge map is not total on the source"
        for e, (s, t) in src.edges.items():
            e1 = self.edge_map[e]
            if e1 not in tgt.edges:
                return f"edge {e!r} maps to unknown edge {e1!r}"
            if tgt.edges[e1] != (self.node_map[s], self.node_map[t]):
                return f"edge {e!r} is not mapped compatibly with its endpoints"
        return None

    def __call__(self, x: str) -> str:
        if x in self.node_map:
            return self.node_map[x]
        return self.edge_map[x]

    def image(self) -> tuple[frozenset, frozenset]:
        return frozenset(self.node_map.values()), frozenset(self.edge_map.values())

    def _key(self):
        return (self.source, self.target, frozenset(self.node_map.items()),
                frozenset(self.edge_map.items()))

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._key()))
        return self._hash

    def __repr__(self):
        nm = ", ".join(f"{k}->{v}" for k, v in sorted(self.node_map.items()))
        em = ", ".join(f"{k}->{v}" for k, v in sorted(self.edge_map.items()))
        return f"Morphism({{{nm}}}, {{{em}}})"


TotalMorphism = Morphism


def identity(g: AnyGraph) -> Morphism:
    return Morphism(g, g, {n: n for n in g.nodes}, {e: e for e in g.edges},
                    check=False)


def inclusion(sub: Graph, sup: Graph) -> Morphism:
    if not sub.is_subgraph_of(sup):
        raise MorphismError("not a subgraph")
    return Morphism(sub, sup, {n: n for n in sub.nodes},
                    {e: e for e in sub.edges}, check=False)


def is_inclusion(f: Morphism) -> bool:
    return (all(k == v for k, v in f.node_map.items())
            and all(k == v for k, v in f.edge_map.items()))


def compose_total(f: Morphism, g: Morphism) -> Morphism:
    """Return ``g ∘ f``."""
    if f.target != g.source:
        raise MorphismError("cannot compose: target of first is not source of second")
    return Morphism(f.source, g.target,
                    {n: g.node_map[m] for n, m in f.node_map.items()},
                    {e: g.edge_map[d] for e, d in f.edge_map.items()},
                    check=False)


def is_mono(f: Morphism) -> bool:
    return (len(set(f.node_map.values())) == len(f.node_map)
            and len(set(f.edge_map.values())) == len(f.edge_map))


def is_iso(f: Morphism) -> bool:
    return (is_mono(f) and len(f.node_map) == len(f.target.nodes)
            and len(f.edge_map) == len(f.target.edges))


def inverse(f: Morphism) -> Morphism:
    if not is_iso(f):
        raise MorphismError("not an isomorphism")
    return Morphism(f.target, f.source,
                    {v: k for k, v in f.node_map.items()},
                    {v: k for k, v in f.edge_map.items()}, check=False)


class PartialMorphism:
    """A total morphism from a subgraph ``domain`` of ``source`` to ``target``.

    Termgraph partial morphisms are node maps: their domain carries no edges,
    so they impose no label or successor constraints.
    """

    __slots__ = ("source", "target", "domain", "node_map", "edge_map", "_hash")

    def __init__(self, source: AnyGraph, target: AnyGraph, domain: Graph,
                 node_map: Mapping[str, str], edge_map: Mapping[str, str] = None,
                 check: bool = True):
        set_ = object.__setattr__
        set_(self, "source", source)
        set_(self, "target", target)
        set_(self, "domain", domain)
        set_(self, "node_map", MappingProxyType(dict(node_map)))
        set_(self, "edge_map", MappingProxyType(dict(edge_map or {})))
        set_(self, "_hash", None)
        if check:
            problem = self.defect()
            if problem:
                raise MorphismError(problem)

    def __setattr__(self, name, value):
        raise AttributeError("PartialMorphism is immutable")

    def defect(self) -> Optional[str]:
        if not self.domain.is_subgraph_of(underlying(self.source)):
            return "domain is not a subgraph of the source"
        if isinstance(self.source, TermGraph) and self.domain.edges:
            return "termgraph partial morphisms have node-only domains"
        carrier = Morphism(self.domain, underlying(self.target), self.node_map,
                           self.edge_map, check=False)
        return carrier.defect()

    @property
    def carrier(self) -> Morphism:
        return Morphism(self.domain, underlying(self.target), self.node_map,
                        self.edge_map, check=False)

    def is_total(self) -> bool:
        src = underlying(self.source)
        return self.domain.nodes == src.nodes and set(self.domain.edges) == set(src.edges)

    def get(self, x: str) -> Optional[str]:
        if x in self.node_map:
            return self.node_map[x]
        return self.edge_map.get(x)

    def __call__(self, x: str) -> str:
        v = self.get(x)
        if v is None:
            raise KeyError(x)
        return v

    def _key(self):
        return (self.source, self.target, self.domain,
                frozenset(self.node_map.items()), frozenset(self.edge_map.items()))

    def __eq__(self, other):
        if not isinstance(other, PartialMorphism):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._key()))
        return self._hash

    def __repr__(self):
        nm = ", ".join(f"{k}->{v}" for k, v in sorted(self.node_map.items()))
        em = ", ".join(f"{k}->{v}" for k, v in sorted(self.edge_map.items()))
        return f"PartialMorphism({{{nm}}}, {{{em}}})"


def as_partial(f: Morphism) -> PartialMorphism:
    src = f.source
    if isinstance(src, TermGraph):
        return PartialMorphism(src, f.target, Graph(src.nodes), f.node_map, check=False)
    return PartialMorphism(src, f.target, src, f.node_map, f.edge_map, check=False)


def nowhere(source: AnyGraph, target: AnyGraph) -> PartialMorphism:
    return PartialMorphism(source, target, Graph(), {}, {}, check=False)


def partial_identity(g: AnyGraph) -> PartialMorphism:
    return as_partial(identity(g))


def compose_partial(f: PartialMorphism, g: PartialMorphism) -> PartialMorphism:
    """Return ``g ∘ f``, defined where ``f`` is defined and lands in ``dom(g)``."""
    if isinstance(f, Morphism):
        f = as_partial(f)
    if isinstance(g, Morphism):
        g = as_partial(g)
    if f.target != g.source:
        raise MorphismError("cannot compose: target of first is not source of second")
    dn = {x: g.node_map[y] for x, y in f.node_map.items() if y in g.node_map}
    de = {x: g.edge_map[y] for x, y in f.edge_map.items() if y in g.edge_map}
    dom = Graph(dn, {e: f.domain.edges[e] for e in de})
    return PartialMorphism(f.source, g.target, dom, dn, de, check=False)


def is_partial_mono(f: PartialMorphism) -> bool:
    return (len(set(f.node_map.values())) == len(f.node_map)
            and len(set(f.edge_map.values())) == len(f.edge_map))


def graph_difference(g: Graph, h: Graph) -> PartialGraph:
    """Items of ``g`` not in ``h``; edges keep their endpoints even if removed."""
    if not h.is_subgraph_of(g):
        raise GraphError("second argument is not a subgraph of the first")
    return PartialGraph(g.nodes - h.nodes,
                        {e: st for e, st in g.edges.items() if e not in h.edges})


def image_subgraph(f: Morphism) -> Graph:
    nodes, edges = f.image()
    tgt = underlying(f.target)
    return Graph(nodes, {e: tgt.edges[e] for e in edges})


# ---------------------------------------------------------------------------
# colimit plumbing


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def congruence_classes(g: Graph, node_pairs=(), edge_pairs=()):
    """Least equivalence on items containing the pairs and closed under src/tgt."""
    nodes = _UnionFind(sorted(g.nodes))
    edges = _UnionFind(sorted(g.edges))
    for a, b in node_pairs:
        nodes.union(a, b)
    for a, b in edge_pairs:
        edges.union(a, b)
    for cls in edges.classes().values():
        first = cls[0]
        for e in cls[1:]:
            nodes.union(g.src(first), g.src(e))
            nodes.union(g.tgt(first), g.tgt(e))
    return nodes, edges


def quotient(g: Graph, node_pairs=(), edge_pairs=(), rep=min):
    """Quotient ``g`` by the generated congruence; return it with the projection.

    ``rep`` picks the id naming each class (default: the smallest id).
    """
    nodes, edges = congruence_classes(g, node_pairs, edge_pairs)
    nmap = {}
    for cls in nodes.classes().values():
        name = rep(cls)
        for x in cls:
            nmap[x] = name
    emap, qedges = {}, {}
    for cls in edges.classes().values():
        name = rep(cls)
        for x in cls:
            emap[x] = name
        qedges[name] = (nmap[g.src(cls[0])], nmap[g.tgt(cls[0])])
    q = Graph(set(nmap.values()), qedges)
    return q, Morphism(g, q, nmap, emap, check=False)


def disjoint_union(g: Graph, h: Graph):
    """Coproduct ``g ⊎ h``; ids of ``g`` are kept, clashing ids of ``h`` renamed."""
    taken = set(g.nodes) | set(g.edges)
    hn = {}
    for n in sorted(h.nodes):
        hn[n] = fresh_id(n, taken)
        taken.add(hn[n])
    he = {}
    for e in sorted(h.edges):
        he[e] = fresh_id(e, taken)
        taken.add(he[e])
    edges = dict(g.edges)
    for e, (s, t) in h.edges.items():
        edges[he[e]] = (hn[s], hn[t])
    u = Graph(set(g.nodes) | set(hn.values()), edges)
    inj1 = Morphism(g, u, {n: n for n in g.nodes}, {e: e for e in g.edges}, check=False)
    inj2 = Morphism(h, u, hn, he, check=False)
    return u, inj1, inj2


def pullback_object(f: Morphism, l: Morphism):
    """Pullback of ``f: A -> C`` and ``l: B -> C``; returns (P, pA, pB)."""
    if f.target != l.target:
        raise MorphismError("pullback needs a shared codomain")
    a, b = underlying(f.source), underlying(l.source)
    nodes = {}
    for x in sorted(a.nodes):
        for y in sorted(b.nodes):
            if f.node_map[x] == l.node_map[y]:
                nodes[(x, y)] = f"{x}|{y}"
    edges, ea, eb = {}, {}, {}
    for x in sorted(a.edges):
        for y in sorted(b.edges):
            if f.edge_map[x] == l.edge_map[y]:
                name = f"{x}|{y}"
                edges[name] = (nodes[(a.src(x), b.src(y))],
                               nodes[(a.tgt(x), b.tgt(y))])
                ea[name], eb[name] = x, y
    p = Graph(nodes.values(), edges)
    pa = Morphism(p, a, {v: k[0] for k, v in nodes.items()}, ea, check=False)
    pb = Morphism(p, b, {v: k[1] for k, v in nodes.items()}, eb, check=False)
    return p, pa, pb
