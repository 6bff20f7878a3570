"""Brute-force checks of universal properties on small instances.

Each check takes a construction's output as a *candidate* and searches a
bounded universe of competitors for a counterexample: a cocone (or a
complement) that admits no mediating morphism, or more than one.  Passing
is evidence at desk scale, not a proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional

from .graph import (Graph, Morphism, PartialMorphism, TermGraph, compose_partial,
                    compose_total, fresh_id, inclusion, is_iso, pullback_object,
                    quotient)
from .homs import (EnumerationCapError, is_isomorphic, iter_graph_homs, iter_homs,
                   iter_partial_homs)
from .hpo import HeteroMorphism, _copies_structure, cocone_defect, cocone_morphism_ok
from .pushout import pushout_total

ORACLE_CAP = (10, 14)
EXTRA_NODES = 2


@dataclass
class VerificationVerdict:
    ok: bool
    counterexample: Optional[dict] = None
    checked: int = 0
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.ok != (self.counterexample is None):
            raise ValueError("a verdict fails exactly when it has a counterexample")

    def __bool__(self):
        return self.ok

    @property
    def reason(self) -> str:
        return "" if self.ok else self.counterexample.get("reason", "")


def _fail(reason: str, checked: int = 0, **extra) -> VerificationVerdict:
    return VerificationVerdict(False, {"reason": reason, **extra}, checked)


def _check_cap(graphs: Iterable, cap) -> None:
    max_nodes, max_edges = cap
    for g in graphs:
        n, e = len(g.nodes), len(g.edges)
        if n > max_nodes or e > max_edges:
            raise EnumerationCapError(
                f"operand with {n} nodes / {e} edges exceeds cap {max_nodes}/{max_edges}")


def default_bound(derived) -> int:
    return len(derived.nodes) + 2


def _pins(pairs) -> Optional[dict]:
    """Merge ``(x, value)`` pins; ``None`` if two disagree."""
    out = {}
    for x, v in pairs:
        if out.setdefault(x, v) != v:
            return None
    return out


def _items(m) -> list:
    return list(m.node_map.items()) + list(m.edge_map.items())


def _count(it: Iterator, limit: int = 2) -> int:
    return sum(1 for _ in itertools.islice(it, limit))


# ---------------------------------------------------------------------------
# competitor universes


def set_partitions(items: list) -> Iterator[list]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def quotients(g: Graph, full_up_to: int = 4) -> Iterator[Graph]:
    """Quotients of ``g``.

    Each single identification of two nodes is tried with parallel edges kept
    apart and merged; when ``g`` is small every node partition is also tried,
    with parallel edges merged.
    """
    nodes = sorted(g.nodes)

    def merged(q):
        par = {}
        for e, st in q.edges.items():
            par.setdefault(st, []).append(e)
        return quotient(q, (), [(es[0], e) for es in par.values() for e in es[1:]])[0]

    yield merged(g)
    for a, b in itertools.combinations(nodes, 2):
        q, _ = quotient(g, [(a, b)])
        yield q
        yield merged(q)
    if len(nodes) <= full_up_to:
        for part in set_partitions(nodes):
            yield merged(quotient(g, [(cls[0], x) for cls in part for x in cls[1:]])[0])


def extensions(g: Graph, bound: int, edge_up_to: int = 4) -> Iterator[Graph]:
    """``g`` plus isolated nodes up to the bound, and (when ``g`` has at most
    ``edge_up_to`` nodes and edges) ``g`` plus one edge."""
    taken = set(g.nodes) | set(g.edges)
    extra = []
    for _ in range(min(EXTRA_NODES, bound - len(g.nodes))):
        name = fresh_id("z", taken | set(extra))
        extra.append(name)
        yield Graph(set(g.nodes) | set(extra), g.edges)
    if len(g.nodes) > edge_up_to or len(g.edges) > edge_up_to:
        return
    ename = fresh_id("ze", taken | set(extra))
    for s in sorted(g.nodes):
        for t in sorted(g.nodes):
            yield Graph(g.nodes, {**g.edges, ename: (s, t)})


def small_graphs(max_nodes: int, max_edges: int) -> Iterator[Graph]:
    """Every graph on nodes ``v0..v(n-1)``, ``n <= max_nodes``, up to ``max_edges`` edges."""
    for n in range(max_nodes + 1):
        nodes = [f"v{i}" for i in range(n)]
        pairs = [(s, t) for s in nodes for t in nodes]
        for k in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(pairs, k):
                yield Graph(nodes, {f"w{i}": st for i, st in enumerate(combo)})


def _invariant(g) -> tuple:
    deg = {n: [0, 0, 0] for n in g.nodes}
    for s, t in g.edges.values():
        deg[s][0] += 1
        deg[t][1] += 1
        if s == t:
            deg[s][2] += 1
    return len(g.nodes), len(g.edges), tuple(sorted(tuple(d) for d in deg.values()))


def _dedupe(graphs: Iterable) -> list:
    """Drop repeats up to isomorphism (universal properties do not see the difference)."""
    buckets: dict = {}
    out = []
    for g in graphs:
        bucket = buckets.setdefault(_invariant(g), [])
        if any(g == h or is_isomorphic(g, h) for h in bucket):
            continue
        bucket.append(g)
        out.append(g)
    return out


def pushout_targets(r1: Graph, bound: int, exhaustive: bool = False) -> list[Graph]:
    targets = [r1, *quotients(r1), *extensions(r1, bound)]
    if exhaustive:
        targets.extend(small_graphs(min(bound, 3), 3))
    return _dedupe(targets)


# ---------------------------------------------------------------------------
# pushouts of total morphisms


def total_cocones(rho: Morphism, f: Morphism, x: Graph, raw: bool = False) -> Iterator[tuple]:
    """Pairs ``(c1: L1 -> X, c2: R -> X)`` with ``c1∘f = c2∘rho``.

    With ``raw`` each leg is a ``(node_map, edge_map)`` pair of dicts.
    """
    L = rho.source
    l_items = [(rho(a), f(a)) for a in itertools.chain(L.nodes, L.edges)]
    for c1 in iter_graph_homs(f.target, x, raw=True):
        n1, e1 = c1
        fixed = _pins((ra, n1[fa] if fa in n1 else e1[fa]) for ra, fa in l_items)
        if fixed is None:
            continue
        for c2 in iter_graph_homs(rho.target, x, fixed=fixed, raw=True):
            if raw:
                yield c1, c2
            else:
                yield (Morphism(f.target, x, *c1, check=False),
                       Morphism(rho.target, x, *c2, check=False))


def total_cocones_bruteforce(rho: Morphism, f: Morphism, x: Graph) -> set:
    """The same cocones by exhaustive product over all maps (tiny inputs only)."""
    def all_maps(src):
        nodes, edges = sorted(src.nodes), sorted(src.edges)
        for nm in itertools.product(sorted(x.nodes), repeat=len(nodes)):
            for em in itertools.product(sorted(x.edges), repeat=len(edges)):
                m = Morphism(src, x, dict(zip(nodes, nm)), dict(zip(edges, em)),
                             check=False)
                if m.defect() is None:
                    yield m
    out = set()
    for c1 in all_maps(f.target):
        for c2 in all_maps(rho.target):
            if compose_total(f, c1) == compose_total(rho, c2):
                out.add((c1, c2))
    return out


def verify_pushout_bounded(rho: Morphism, f: Morphism, candidate, bound: int = None,
                           exhaustive: bool = False, cap=ORACLE_CAP) -> VerificationVerdict:
    """Check that ``candidate = (R1, rho1, g)`` is a pushout of ``rho`` and ``f``.

    Competing cocones land in quotients and small extensions of ``R1`` (and
    all tiny graphs when ``exhaustive``); each needs exactly one mediator.
    """
    r1, rho1, g = candidate
    _check_cap([rho.source, rho.target, f.target, r1], cap)
    for m, name in ((rho1, "bottom arrow"), (g, "right leg")):
        if m.defect():
            return _fail(f"{name} is not a morphism: {m.defect()}")
    if compose_total(rho, g) != compose_total(f, rho1):
        return _fail("square does not commute")
    bound = default_bound(r1) if bound is None else bound
    l1, R = f.target, rho.target
    n1_keys, e1_keys = sorted(l1.nodes), sorted(l1.edges)
    nr_keys, er_keys = sorted(R.nodes), sorted(R.edges)

    def key(c1, c2):
        return (tuple(c1[0][a] for a in n1_keys), tuple(c1[1][a] for a in e1_keys),
                tuple(c2[0][a] for a in nr_keys), tuple(c2[1][a] for a in er_keys))

    checked = 0
    # exactly one mediator per cocone  <=>  h |-> (h∘rho1, h∘g) is a bijection
    # from homs(R1, X) onto the cocones into X
    for x in pushout_targets(r1, bound, exhaustive):
        induced = {}
        for hn, he in iter_graph_homs(r1, x, raw=True):
            def h(a):
                return hn[a] if a in hn else he[a]
            c1 = ({a: h(rho1.node_map[a]) for a in n1_keys},
                  {a: h(rho1.edge_map[a]) for a in e1_keys})
            c2 = ({a: h(g.node_map[a]) for a in nr_keys},
                  {a: h(g.edge_map[a]) for a in er_keys})
            k = key(c1, c2)
            induced[k] = induced.get(k, 0) + 1
        for c1, c2 in total_cocones(rho, f, x, raw=True):
            checked += 1
            n = induced.get(key(c1, c2), 0)
            if n != 1:
                cocone = (Morphism(l1, x, *c1, check=False), Morphism(R, x, *c2, check=False))
                return _fail("no mediating morphism" if n == 0 else
                             "mediating morphism is not unique", checked,
                             target=x, cocone=cocone, mediators=n)
    return VerificationVerdict(True, None, checked)


def mediators(candidate, cocone, x: Graph) -> int:
    """Number of ``h: R1 -> X`` (capped at 2) with ``h∘rho1 = c1`` and ``h∘g = c2``."""
    r1, rho1, g = candidate
    c1, c2 = cocone
    fixed = _pins(itertools.chain(((rho1(a), c1(a)) for a, _ in _items(rho1)),
                                  ((g(a), c2(a)) for a, _ in _items(g))))
    return 0 if fixed is None else _count(iter_homs(r1, x, fixed=fixed))


# ---------------------------------------------------------------------------
# pushouts of partial morphisms


def _partial_pins(pairs) -> Optional[dict]:
    """Pins where ``None`` means "must be undefined"."""
    out = {}
    for x, v in pairs:
        if x in out and out[x] != v:
            return None
        out[x] = v
    return out


def _raw_partial(m) -> tuple:
    """Partial morphism as ``(node_map, edge_map)`` with ``None`` off the domain."""
    return ({n: m.node_map.get(n) for n in m.source.nodes},
            {e: m.edge_map.get(e) for e in m.source.edges})


def _get(raw, a):
    n, e = raw
    return n[a] if a in n else e[a]


def partial_cocones(r: PartialMorphism, f: Morphism, x: Graph,
                    raw: bool = False) -> Iterator[tuple]:
    """Pairs ``(c1: L1 ⇀ X, c2: R ⇀ X)`` with ``c1∘f = c2∘r`` as partial maps."""
    L = r.source
    l_items = [(r.get(a), f(a)) for a in itertools.chain(L.nodes, L.edges)]
    for c1 in iter_partial_homs(f.target, x, raw=True):
        pairs, ok = [], True
        for ra, fa in l_items:
            img = _get(c1, fa)
            if ra is None:
                if img is not None:
                    ok = False
                    break
            else:
                pairs.append((ra, img))
        if not ok:
            continue
        fixed = _partial_pins(pairs)
        if fixed is None:
            continue
        for c2 in iter_partial_homs(r.target, x, fixed=fixed, raw=True):
            if raw:
                yield c1, c2
            else:
                yield _from_raw(f.target, x, c1), _from_raw(r.target, x, c2)


def _from_raw(src: Graph, tgt: Graph, raw) -> PartialMorphism:
    dn = {k: v for k, v in raw[0].items() if v is not None}
    de = {k: v for k, v in raw[1].items() if v is not None}
    return PartialMorphism(src, tgt, Graph(dn, {e: src.edges[e] for e in de}), dn, de)


def verify_partial_pushout_bounded(r: PartialMorphism, f: Morphism, candidate,
                                   bound: int = None, cap=ORACLE_CAP) -> VerificationVerdict:
    """Pushout check in the category of graphs and partial morphisms.

    ``candidate = (R1, r1, g)`` with ``r1: L1 ⇀ R1`` partial and ``g`` total.
    """
    r1_obj, r1, g = candidate
    _check_cap([r.source, r.target, f.target, r1_obj], cap)
    if r1.defect():
        return _fail(f"bottom arrow is not a partial morphism: {r1.defect()}")
    if g.defect():
        return _fail(f"right leg is not a morphism: {g.defect()}")
    if compose_partial(r, g) != compose_partial(f, r1):
        return _fail("square does not commute")
    bound = default_bound(r1_obj) if bound is None else bound
    targets = [r1_obj, *quotients(r1_obj), Graph()]
    targets += [t for t in extensions(r1_obj, bound) if not t.edges.keys() - r1_obj.edges.keys()]
    l1, R = f.target, r.target
    l1_items = sorted(l1.nodes) + sorted(l1.edges)
    r_items = sorted(R.nodes) + sorted(R.edges)
    r1_img = [r1.get(a) for a in l1_items]
    g_img = [g(a) for a in r_items]

    def key(c1, c2):
        return (tuple(_get(c1, a) for a in l1_items), tuple(_get(c2, a) for a in r_items))

    checked = 0
    # as for total pushouts: mediators correspond one-to-one with cocones
    for x in _dedupe(targets):
        induced = {}
        for h in iter_partial_homs(r1_obj, x, raw=True):
            k = (tuple(None if y is None else _get(h, y) for y in r1_img),
                 tuple(_get(h, y) for y in g_img))
            induced[k] = induced.get(k, 0) + 1
        for c1, c2 in partial_cocones(r, f, x, raw=True):
            checked += 1
            n = induced.get(key(c1, c2), 0)
            if n != 1:
                return _fail("no mediating morphism" if n == 0 else
                             "mediating morphism is not unique", checked, target=x,
                             cocone=(_from_raw(l1, x, c1), _from_raw(R, x, c2)),
                             mediators=n)
    return VerificationVerdict(True, None, checked)


# ---------------------------------------------------------------------------
# pullbacks and final pullback complements


def verify_pullback(l: Morphism, f: Morphism, candidate) -> VerificationVerdict:
    """Exact check that ``K`` with ``l`` and ``g`` is the pullback of ``f`` and ``l1``.

    ``candidate = (K1, l1, g)`` closes the square ``l1∘g = f∘l``.
    """
    k1, l1, g = candidate
    for m, name in ((l1, "bottom arrow"), (g, "right leg")):
        if m.defect():
            return _fail(f"{name} is not a morphism: {m.defect()}")
    if compose_total(g, l1) != compose_total(l, f):
        return _fail("square does not commute")
    p, pa, pb = pullback_object(f, l1)
    K = l.source
    where = {}
    for y in itertools.chain(p.nodes, p.edges):
        where[(pa(y), pb(y))] = y
    nmap, emap = {}, {}
    for k in K.nodes:
        nmap[k] = where[(l(k), g(k))]
    for e in K.edges:
        emap[e] = where[(l(e), g(e))]
    u = Morphism(K, p, nmap, emap, check=False)
    if not is_iso(u):
        return _fail("comparison map into the pullback is not an isomorphism",
                     pullback=p, comparison=u)
    return VerificationVerdict(True, None, 1)


def complement_targets(k1: Graph, bound: int, full_up_to: int = 10) -> list[Graph]:
    """Competing interface graphs: subgraphs of ``K1``, and ``K1`` enlarged by a
    node, an edge, or a duplicated node with its incident edges."""
    out = []
    items = sorted(k1.nodes) + sorted(k1.edges)
    if len(items) <= full_up_to:
        drops = itertools.chain.from_iterable(
            itertools.combinations(items, k) for k in range(len(items) + 1))
    else:
        drops = itertools.chain.from_iterable(
            itertools.combinations(items, k) for k in range(3))
    for drop in drops:
        nodes = k1.nodes - set(drop)
        edges = {e: st for e, st in k1.edges.items() if e not in drop}
        if all(s in nodes and t in nodes for s, t in edges.values()):
            out.append(Graph(nodes, edges))
    out.extend(extensions(k1, bound))
    if len(k1.nodes) < bound:
        taken = set(k1.nodes) | set(k1.edges)
        for n in sorted(k1.nodes):
            twin = fresh_id(n, taken)
            edges = dict(k1.edges)
            t2 = taken | {twin}
            for e, (s, t) in k1.edges.items():
                if n in (s, t):
                    name = fresh_id(e, t2)
                    t2.add(name)
                    edges[name] = (twin if s == n else s, twin if t == n else t)
            out.append(Graph(set(k1.nodes) | {twin}, edges))
    return _dedupe(out)


def pullback_complements(l: Morphism, f: Morphism, kx: Graph) -> Iterator[tuple]:
    """Pairs ``(l1': K' -> L1, g': K -> K')`` closing a pullback square.

    An item of ``K'`` outside the image of ``g'`` has no partner in ``L``, so
    in a pullback it must land outside the image of ``f``; that prunes the
    search before the exact pullback test.
    """
    fl = compose_total(l, f)
    K, l1 = l.source, f.target
    f_img = {z for _, z in _items(f)}
    context = {y for y in itertools.chain(l1.nodes, l1.edges) if y not in f_img}
    for gx in iter_homs(K, kx):
        fixed = _pins((gx(k), fl(k)) for k, _ in _items(gx))
        if fixed is None:
            continue
        allowed = {y: context for y in itertools.chain(kx.nodes, kx.edges) if y not in fixed}
        for lx in iter_homs(kx, l1, fixed=fixed, allowed=allowed):
            if is_pullback_count(l, f, lx, gx):
                yield lx, gx


def is_pullback_count(l: Morphism, f: Morphism, lx: Morphism, gx: Morphism) -> bool:
    """Pullback test by counting; agrees with :func:`verify_pullback` on commuting squares.

    The comparison map ``k -> (l(k), g'(k))`` must be injective, and the
    pullback has ``sum_z |f^-1(z)| * |l1'^-1(z)|`` items.
    """
    K = l.source
    for kind in ("nodes", "edges"):
        ks = getattr(K, kind)
        pairs = {(l(k), gx(k)) for k in ks}
        if len(pairs) != len(ks):
            return False
        fcount, lcount = {}, {}
        for a in getattr(l.target, kind):
            fcount[f(a)] = fcount.get(f(a), 0) + 1
        for y in getattr(lx.source, kind):
            lcount[lx(y)] = lcount.get(lx(y), 0) + 1
        if sum(n * lcount.get(z, 0) for z, n in fcount.items()) != len(ks):
            return False
    return True


def verify_fpbc_bounded(l: Morphism, f: Morphism, candidate, bound: int = None,
                        cap=ORACLE_CAP) -> VerificationVerdict:
    """Check that ``candidate = (K1, l1, g)`` is a final pullback complement.

    Every competing complement ``(K', l1', g')`` must map to the candidate
    through exactly one ``h`` with ``l1∘h = l1'`` and ``h∘g' = g``.
    """
    k1, l1, g = candidate
    _check_cap([l.source, l.target, f.target, k1], cap)
    pb = verify_pullback(l, f, candidate)
    if not pb.ok:
        return pb
    bound = default_bound(k1) if bound is None else bound
    fibres = {}
    for y, z in _items(l1):
        fibres.setdefault(z, set()).add(y)
    checked = 0
    for kx in complement_targets(k1, bound):
        for lx, gx in pullback_complements(l, f, kx):
            checked += 1
            fixed = _pins((gx(a), g(a)) for a, _ in _items(gx))
            n = 0
            if fixed is not None:
                allowed = {y: fibres.get(z, set()) for y, z in _items(lx)}
                n = _count(iter_homs(kx, k1, fixed=fixed, allowed=allowed))
            if n != 1:
                return _fail("no mediating morphism" if n == 0 else
                             "mediating morphism is not unique", checked,
                             complement=(kx, lx, gx), mediators=n)
    return VerificationVerdict(True, None, checked)


# ---------------------------------------------------------------------------
# pushout complements


def is_pushout_square(l: Morphism, g: Morphism, l1: Morphism, f: Morphism) -> bool:
    """Whether ``L1`` with ``f`` and ``l1`` is a pushout of ``l`` and ``g``."""
    p, into_p_from_k1, into_p_from_l = pushout_total(l, g)
    fixed = _pins(itertools.chain(((into_p_from_k1(a), l1(a)) for a, _ in _items(l1)),
                                  ((into_p_from_l(a), f(a)) for a, _ in _items(f))))
    if fixed is None:
        return False
    u = next(iter_homs(p, f.target, fixed=fixed), None)
    return u is not None and is_iso(u)


def enumerate_pushout_complements(l: Morphism, f: Morphism) -> list[tuple]:
    """All pushout complements ``(K', inclusion, g')`` with ``K'`` a subgraph of ``L1``.

    For a mono ``l`` the complement's ``l1`` is mono too, so up to isomorphism
    every complement is one of these.
    """
    l1g = f.target
    fl = compose_total(l, f)
    need_n, need_e = set(fl.node_map.values()), set(fl.edge_map.values())
    out = []
    free_nodes = sorted(l1g.nodes - need_n)
    for kn in range(len(free_nodes) + 1):
        for extra in itertools.combinations(free_nodes, kn):
            nodes = need_n | set(extra)
            possible = sorted(e for e, (s, t) in l1g.edges.items()
                              if s in nodes and t in nodes and e not in need_e)
            if not need_e <= {e for e, (s, t) in l1g.edges.items()
                              if s in nodes and t in nodes}:
                continue
            for ke in range(len(possible) + 1):
                for more in itertools.combinations(possible, ke):
                    edges = {e: l1g.edges[e] for e in need_e | set(more)}
                    kx = Graph(nodes, edges)
                    gx = Morphism(l.source, kx, fl.node_map, fl.edge_map, check=False)
                    incl = inclusion(kx, l1g)
                    if is_pushout_square(l, gx, incl, f):
                        out.append((kx, incl, gx))
    return out


def verify_pushout_complement(l: Morphism, f: Morphism, candidate) -> VerificationVerdict:
    """The candidate closes a pushout square and every other complement is
    isomorphic to it (compatibly with the legs)."""
    k1, l1, g = candidate
    if compose_total(g, l1) != compose_total(l, f):
        return _fail("square does not commute")
    if not is_pushout_square(l, g, l1, f):
        return _fail("pushout of the rule and the candidate does not rebuild L1")
    found = enumerate_pushout_complements(l, f)
    for kx, lx, gx in found:
        fixed = _pins((gx(a), g(a)) for a, _ in _items(gx))
        fibres = {}
        for y, z in _items(l1):
            fibres.setdefault(z, set()).add(y)
        allowed = {y: fibres.get(z, set()) for y, z in _items(lx)}
        if fixed is None or next(iter_homs(kx, k1, "iso", fixed=fixed, allowed=allowed),
                                 None) is None:
            return _fail("a non-isomorphic pushout complement exists", len(found),
                         complement=(kx, lx, gx))
    return VerificationVerdict(True, None, len(found))


# ---------------------------------------------------------------------------
# heterogeneous pushouts


def termgraph_extensions(r1: TermGraph, bound: int, max_free_labels: int = 1
                         ) -> Iterator[TermGraph]:
    """``R1`` plus up to two extra nodes, at most ``max_free_labels`` of them labeled."""
    room = min(EXTRA_NODES, bound - len(r1.nodes))
    sig = r1.signature
    taken = set(r1.nodes)
    for k in range(1, room + 1):
        extra = []
        for _ in range(k):
            extra.append(fresh_id("z", taken | set(extra)))
        nodes = sorted(set(r1.nodes) | set(extra))
        yield TermGraph(nodes, r1.labels, r1.succ, sig)
        if max_free_labels < 1:
            continue
        for lab in sorted(sig):
            for succ in itertools.product(nodes, repeat=sig[lab]):
                labels = {**r1.labels, extra[0]: lab}
                yield TermGraph(nodes, labels, {**r1.succ, extra[0]: succ}, sig)


_UNDEF = object()


def _forced_parts(rho: HeteroMorphism, f: Morphism, x: TermGraph):
    """Triples ``(g', tau1', sigma1')`` fixed by commutation and context
    preservation; ``sigma1'`` maps nodes of ``g'(R)`` possibly to ``_UNDEF``."""
    L, R, l1 = rho.source, rho.target, f.target
    tau, sigma = rho.tau.node_map, rho.sigma.node_map
    matched = {f.node_map[a]: a for a in L.nodes}
    ctx = sorted(l1.nodes - set(matched))
    xs = sorted(x.nodes)
    for gx in iter_homs(R, x, "mono"):
        tau1 = {y: gx.node_map[tau[a]] for y, a in matched.items()}
        sig1 = {}
        for p in R.nodes:
            sig1[gx.node_map[p]] = f.node_map[sigma[p]] if p in sigma else _UNDEF

        def place(i, tau1, sig1):
            if i == len(ctx):
                yield tau1, sig1
                return
            c = ctx[i]
            for xn in xs:
                cur = sig1.get(xn)
                if cur is None:
                    yield from place(i + 1, {**tau1, c: xn}, {**sig1, xn: c})
                elif cur == c:
                    yield from place(i + 1, {**tau1, c: xn}, sig1)

        for t1, s1 in place(0, tau1, sig1):
            yield gx, t1, s1


def _copies_ok(l1: TermGraph, x: TermGraph, t1: dict, xn: str, y: str) -> bool:
    """Node ``xn`` of ``x`` carries the label of ``y`` with ``t1``-translated successors."""
    lab = l1.labels.get(y)
    if lab is None:
        return xn not in x.labels
    return x.labels.get(xn) == lab and x.succ[xn] == tuple(t1[s] for s in l1.succ[y])


def hetero_cocones(rho: HeteroMorphism, f: Morphism, x: TermGraph,
                   raw: bool = False) -> Iterator[tuple]:
    """Heterogeneous cocones ``(rho1', g')`` over ``rho`` and ``f`` into ``x``.

    Commutation and context preservation fix ``g'``, ``tau1'`` and part of
    ``sigma1'``; the remaining nodes choose a copy target or none.  The label
    conditions of :func:`cocone_defect` are applied directly.  With ``raw``
    the cocone is yielded as ``(g', tau1', sigma1')`` with dict legs.
    """
    l1 = f.target
    matched = set(f.node_map.values())
    ctx = sorted(l1.nodes - matched)
    clones = _copies_structure(rho, f)
    l1_nodes = sorted(l1.nodes)
    for gx, t1, s1 in _forced_parts(rho, f, x):
        ok = all(_copies_ok(l1, x, t1, xn, y) for xn, y in s1.items()
                 if y is not _UNDEF and xn in x.labels)
        ok = ok and all(_copies_ok(l1, x, t1, t1[c], c) for c in ctx if c in l1.labels)
        ok = ok and all(_copies_ok(l1, x, t1, gx.node_map[p], y) for p, y in clones)
        if not ok:
            continue
        free = sorted(n for n in x.nodes if n not in s1)
        options = []
        for n in free:
            if n in x.labels:
                options.append([_UNDEF] + [y for y in l1_nodes if _copies_ok(l1, x, t1, n, y)])
            else:
                options.append([_UNDEF] + l1_nodes)
        base = {n: v for n, v in s1.items() if v is not _UNDEF}
        for combo in itertools.product(*options):
            smap = dict(base)
            smap.update((n, v) for n, v in zip(free, combo) if v is not _UNDEF)
            if raw:
                yield gx, t1, smap
            else:
                yield _hetero_from_raw(l1, x, t1, smap), gx


def _hetero_from_raw(l1: TermGraph, x: TermGraph, t1: dict, smap: dict) -> HeteroMorphism:
    return HeteroMorphism(PartialMorphism(l1, x, Graph(t1), t1, check=False),
                          PartialMorphism(x, l1, Graph(smap), smap, check=False))


def hetero_cocones_bruteforce(rho: HeteroMorphism, f: Morphism, x: TermGraph) -> set:
    """Reference enumeration: every forced part, every choice of the free
    backward values, filtered by :func:`cocone_defect`.  Returns a set of
    ``(g' node map, tau1', sigma1')`` as sorted tuples."""
    l1 = f.target
    out = set()
    for gx, t1, s1 in _forced_parts(rho, f, x):
        free = sorted(n for n in x.nodes if n not in s1)
        for combo in itertools.product([_UNDEF] + sorted(l1.nodes), repeat=len(free)):
            smap = {n: v for n, v in itertools.chain(s1.items(), zip(free, combo))
                    if v is not _UNDEF}
            if cocone_defect(rho, f, _hetero_from_raw(l1, x, t1, smap), gx) is None:
                out.add((tuple(sorted(gx.node_map.items())), tuple(sorted(t1.items())),
                         tuple(sorted(smap.items()))))
    return out


def verify_initial_cocone_bounded(rho: HeteroMorphism, f: Morphism, candidate,
                                  bound: int = None, max_free_labels: int = 1,
                                  extra_targets: Iterable = (), cap=ORACLE_CAP
                                  ) -> VerificationVerdict:
    """Check that ``candidate = (rho1, g)`` is an initial heterogeneous cocone.

    Competing cocones land in ``R1`` and ``R1`` enlarged by up to two nodes;
    each must receive exactly one mono cocone morphism from the candidate,
    that is a mono ``h`` with ``h∘g = g'``, ``h∘tau1 = tau1'`` and
    ``sigma1'∘h = sigma1``.
    """
    rho1, g = candidate
    r1 = rho1.target
    _check_cap([rho.source, rho.target, f.target, r1], cap)
    why = cocone_defect(rho, f, rho1, g)
    if why:
        return _fail(f"candidate is not a cocone: {why}")
    bound = default_bound(r1) if bound is None else bound
    targets = _dedupe([r1, *termgraph_extensions(r1, bound, max_free_labels),
                       *extra_targets])
    sig1 = rho1.sigma.node_map
    tau1 = rho1.tau.node_map
    r1_nodes = sorted(r1.nodes)
    checked = 0
    for x in targets:
        last, homs = None, []
        for gx, t1, smap in hetero_cocones(rho, f, x, raw=True):
            checked += 1
            if last is None or last[0] is not gx or last[1] is not t1:
                fixed = _pins(itertools.chain(
                    ((g.node_map[p], gx.node_map[p]) for p in g.source.nodes),
                    ((tau1[y], t1[y]) for y in f.target.nodes)))
                homs = [] if fixed is None else [
                    h.node_map for h in iter_homs(r1, x, "mono", fixed=fixed)]
                last = (gx, t1)
            n = sum(1 for h in homs if all(smap.get(h[z]) == sig1.get(z) for z in r1_nodes))
            if n != 1:
                return _fail("no cocone morphism" if n == 0 else
                             "cocone morphism is not unique", checked, target=x,
                             cocone=(_hetero_from_raw(f.target, x, t1, smap), gx),
                             mediators=n)
    return VerificationVerdict(True, None, checked)


__all__ = [
    "VerificationVerdict", "verify_pushout_bounded", "verify_partial_pushout_bounded",
    "verify_pullback", "verify_fpbc_bounded", "verify_pushout_complement",
    "enumerate_pushout_complements", "verify_initial_cocone_bounded",
    "total_cocones", "total_cocones_bruteforce", "partial_cocones", "hetero_cocones",
    "hetero_cocones_bruteforce", "is_pullback_count", "mediators", "pushout_targets",
    "complement_targets", "pullback_complements", "termgraph_extensions",
    "quotients", "extensions", "small_graphs", "set_partitions", "ORACLE_CAP",
    "EnumerationCapError",
]
