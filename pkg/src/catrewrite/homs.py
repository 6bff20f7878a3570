"""Exhaustive homomorphism search (backtracking with pruning) and isomorphism."""

from __future__ import annotations

from typing import Iterator, Mapping, Optional

from .graph import (AnyGraph, Graph, Morphism, PartialMorphism, TermGraph,
                    underlying)

MODES = ("any", "mono", "iso")
DEFAULT_CAP = (6, 8)


class EnumerationCapError(RuntimeError):
    """An operand is larger than the enumeration cap allows."""


def _node_order(g: Graph, fixed) -> list[str]:
    deg = {n: 0 for n in g.nodes}
    for s, t in g.edges.values():
        deg[s] += 1
        deg[t] += 1
    # fixed nodes first, then a connected-ish order by degree
    order, seen = [], set()
    pending = sorted(g.nodes, key=lambda n: (n not in fixed, -deg[n], n))
    adj = {n: set() for n in g.nodes}
    for s, t in g.edges.values():
        adj[s].add(t)
        adj[t].add(s)
    while pending:
        frontier = [n for n in pending if adj[n] & seen] or pending
        n = frontier[0]
        pending.remove(n)
        order.append(n)
        seen.add(n)
    return order


def iter_graph_homs(src: Graph, tgt: Graph, mode: str = "any",
                    fixed: Optional[Mapping[str, str]] = None,
                    allowed: Optional[Mapping[str, set]] = None,
                    raw: bool = False) -> Iterator[Morphism]:
    """Yield every graph morphism ``src -> tgt`` agreeing with ``fixed``.

    ``fixed`` pins values of some nodes or edges; ``allowed`` restricts some
    of them to a set of candidates.  Results come out in a deterministic order.
    With ``raw`` the maps are yielded as a ``(node_map, edge_map)`` pair of
    plain dicts, which is much cheaper in tight loops.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    fixed = dict(fixed or {})
    allowed = allowed or {}
    mono = mode in ("mono", "iso")
    if mode == "iso" and (len(src.nodes) != len(tgt.nodes)
                          or len(src.edges) != len(tgt.edges)):
        return
    if mono and (len(src.nodes) > len(tgt.nodes) or len(src.edges) > len(tgt.edges)):
        return
    between: dict[tuple[str, str], list[str]] = {}
    for e, st in tgt.edges.items():
        between.setdefault(st, []).append(e)
    for v in between.values():
        v.sort()
    src_between: dict[tuple[str, str], list[str]] = {}
    for e, st in src.edges.items():
        src_between.setdefault(st, []).append(e)
    order = _node_order(src, fixed)
    tnodes = sorted(tgt.nodes)
    edges = sorted(src.edges, key=lambda e: (e not in fixed, e))
    nmap: dict[str, str] = {}
    used: set = set()

    def pairs_ok(n: str) -> bool:
        for (s, t), es in src_between.items():
            if n not in (s, t) or s not in nmap or t not in nmap:
                continue
            avail = between.get((nmap[s], nmap[t]), ())
            if len(avail) < (len(es) if mono else 1):
                return False
        return True

    def candidates(x, pool):
        if x in fixed:
            pool = [fixed[x]] if fixed[x] in pool else []
        if x in allowed:
            pool = [y for y in pool if y in allowed[x]]
        return pool

    emap: dict[str, str] = {}
    eused: set = set()

    def edge_rec(j: int):
        if j == len(edges):
            if raw:
                yield dict(nmap), dict(emap)
            else:
                yield Morphism(src, tgt, dict(nmap), dict(emap), check=False)
            return
        e = edges[j]
        s, t = src.edges[e]
        for d in candidates(e, between.get((nmap[s], nmap[t]), [])):
            if mono and d in eused:
                continue
            emap[e] = d
            eused.add(d)
            yield from edge_rec(j + 1)
            eused.discard(d)
        emap.pop(e, None)

    def rec(i: int):
        if i == len(order):
            yield from edge_rec(0)
            return
        n = order[i]
        for m in candidates(n, tnodes):
            if m not in tgt.nodes or (mono and m in used):
                continue
            nmap[n] = m
            used.add(m)
            if pairs_ok(n):
                yield from rec(i + 1)
            used.discard(m)
            del nmap[n]

    yield from rec(0)


def iter_termgraph_homs(src: TermGraph, tgt: TermGraph, mode: str = "any",
                        fixed: Optional[Mapping[str, str]] = None,
                        allowed: Optional[Mapping[str, set]] = None) -> Iterator[Morphism]:
    """Yield every termgraph morphism ``src -> tgt`` agreeing with ``fixed`` (nodes)."""
    fixed = dict(fixed or {})
    allowed = allowed or {}
    mono = mode in ("mono", "iso")
    if mode == "iso" and (len(src.nodes) != len(tgt.nodes)
                          or len(src.labels) != len(tgt.labels)):
        return
    if mono and len(src.nodes) > len(tgt.nodes):
        return
    order = sorted(src.nodes, key=lambda n: (n not in fixed, n not in src.labels, n))
    tnodes = sorted(tgt.nodes)

    def assign(nmap, used, n, m, stack):
        # propagate successor constraints; returns False on conflict
        stack.append((n, m))
        while stack:
            a, b = stack.pop()
            if a in nmap:
                if nmap[a] != b:
                    return False
                continue
            if a in fixed and fixed[a] != b:
                return False
            if a in allowed and b not in allowed[a]:
                return False
            if mono and b in used:
                return False
            nmap[a] = b
            used.add(b)
            lab = src.label(a)
            if lab is not None:
                if tgt.label(b) != lab:
                    return False
                stack.extend(zip(src.succ[a], tgt.succ[b]))
        return True

    def rec(i, nmap, used):
        while i < len(order) and order[i] in nmap:
            i += 1
        if i == len(order):
            yield Morphism(src, tgt, dict(nmap), check=False)
            return
        n = order[i]
        for m in ([fixed[n]] if n in fixed else tnodes):
            nm, us = dict(nmap), set(used)
            if assign(nm, us, n, m, []):
                yield from rec(i + 1, nm, us)

    yield from rec(0, {}, set())


def iter_homs(src: AnyGraph, tgt: AnyGraph, mode: str = "any",
              fixed: Optional[Mapping[str, str]] = None,
              allowed: Optional[Mapping[str, set]] = None) -> Iterator[Morphism]:
    if isinstance(src, TermGraph) != isinstance(tgt, TermGraph):
        raise TypeError("cannot mix graphs and termgraphs")
    if isinstance(src, TermGraph):
        return iter_termgraph_homs(src, tgt, mode, fixed, allowed)
    return iter_graph_homs(src, tgt, mode, fixed, allowed)


def enumerate_homs(src: AnyGraph, tgt: AnyGraph, constraint: str = "any",
                   cap: tuple[int, int] = DEFAULT_CAP) -> list[Morphism]:
    """All morphisms ``src -> tgt`` of the given kind (``any``, ``mono``, ``iso``)."""
    max_nodes, max_edges = cap
    for g in (src, tgt):
        n, e = len(g.nodes), len(g.edges)
        if n > max_nodes or e > max_edges:
            raise EnumerationCapError(
                f"operand with {n} nodes / {e} edges exceeds cap {max_nodes}/{max_edges}")
    return list(iter_homs(src, tgt, constraint))


def iso_check(g: AnyGraph, h: AnyGraph) -> Optional[Morphism]:
    """An isomorphism ``g -> h`` if one exists (identity preferred), else ``None``."""
    if isinstance(g, TermGraph) != isinstance(h, TermGraph):
        return None
    if g == h:
        from .graph import identity
        return identity(g)
    return next(iter_homs(g, h, "iso"), None)


def is_isomorphic(g: AnyGraph, h: AnyGraph) -> bool:
    return iso_check(g, h) is not None


def iter_partial_homs(src: Graph, tgt: Graph,
                      fixed: Optional[Mapping[str, Optional[str]]] = None,
                      raw: bool = False) -> Iterator[PartialMorphism]:
    """Yield every partial morphism ``src ⇀ tgt`` agreeing with ``fixed``.

    In ``fixed`` a value of ``None`` forces the item out of the domain.  With
    ``raw`` the result is a ``(node_map, edge_map)`` pair of dicts that send
    items outside the domain to ``None``.
    """
    fixed = dict(fixed or {})
    between: dict[tuple[str, str], list[str]] = {}
    for e, st in tgt.edges.items():
        between.setdefault(st, []).append(e)
    nodes = sorted(src.nodes)
    edges = sorted(src.edges)
    tnodes = [None] + sorted(tgt.nodes)
    nmap: dict[str, Optional[str]] = {}

    def edge_rec(j, emap):
        if j == len(edges):
            if raw:
                yield dict(nmap), dict(emap)
                return
            dn = {k: v for k, v in nmap.items() if v is not None}
            de = {k: v for k, v in emap.items() if v is not None}
            dom = Graph(dn, {e: src.edges[e] for e in de})
            yield PartialMorphism(src, tgt, dom, dn, de, check=False)
            return
        e = edges[j]
        s, t = src.edges[e]
        opts: list = [None]
        if nmap[s] is not None and nmap[t] is not None:
            opts += sorted(between.get((nmap[s], nmap[t]), []))
        if e in fixed:
            opts = [fixed[e]] if fixed[e] in opts else []
        for v in opts:
            emap[e] = v
            yield from edge_rec(j + 1, emap)
        emap.pop(e, None)

    def node_rec(i):
        if i == len(nodes):
            yield from edge_rec(0, {})
            return
        n = nodes[i]
        opts = [fixed[n]] if n in fixed else tnodes
        for v in opts:
            if v is not None and v not in tgt.nodes:
                continue
            nmap[n] = v
            yield from node_rec(i + 1)
        nmap.pop(n, None)

    yield from node_rec(0)


def automorphism_count(g: AnyGraph) -> int:
    return sum(1 for _ in iter_homs(g, g, "iso"))


__all__ = ["EnumerationCapError", "enumerate_homs", "iso_check", "is_isomorphic",
           "iter_homs", "iter_graph_homs", "iter_termgraph_homs",
           "iter_partial_homs", "automorphism_count", "underlying"]
