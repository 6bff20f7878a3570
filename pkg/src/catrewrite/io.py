"""JSON documents for graphs, termgraphs, morphisms, rules and derivation
scripts, plus DOT export.

A file holds one document or ``{"objects": [...]}``.  Every document has a
``kind`` and a ``name``; later documents refer to earlier ones by name::

    {"kind": "graph", "name": "L1",
     "nodes": [{"id": "a"}, {"id": "c"}],
     "edges": [{"id": "e1", "src": "a", "tgt": "c"}]}

    {"kind": "termgraph", "name": "T", "signature": {"f": 1, "a": 0},
     "nodes": [{"id": "u", "label": "f", "successors": ["w"]},
               {"id": "w", "label": "a"}]}

    {"kind": "morphism", "name": "f", "source": "A", "target": "L1",
     "node_map": {"a": "a"}, "edge_map": {},
     "domain": {"nodes": [...], "edges": [...]}}      # domain: partial only

    {"kind": "rule", "name": "rho", "approach": "PO", "arrow": "r"}
    {"kind": "rule", "name": "span", "approach": "POC", "left": "l", "right": "r"}
    {"kind": "rule", "name": "h", "approach": "HPO", "lhs": "L", "rhs": "R",
     "tau": {"x": "p"}, "sigma": {"p": "x"}}

    {"kind": "derivation", "name": "run", "system": "dpo",
     "steps": [{"rule": "span", "match": "m1"}, {"match": "m2"}]}

Errors carry the file name and, where it can be found, the line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .graph import (Graph, GraphError, Morphism, MorphismError, PartialMorphism,
                    TermGraph)
from .hpo import HeteroMorphism, node_partial
from .pushout import span_rule
from .systems import ComposedRule, RewriteError, Rule, DIRECT_APPROACHES

SPAN_APPROACHES = {"DPO": "POC", "SQPO1": "FPBC1", "SQPO2": "FPBC2"}


class ParseError(ValueError):
    def __init__(self, message: str, path: str = "<input>", line: Optional[int] = None):
        self.path, self.line, self.message = path, line, message
        where = f"{path}:{line}" if line else path
        super().__init__(f"{where}: {message}")


@dataclass
class DerivationScript:
    name: str
    system: str
    steps: list  # [(rule or None, match)]


@dataclass
class Workspace:
    objects: dict = field(default_factory=dict)
    kinds: dict = field(default_factory=dict)

    def get(self, name: str, kind: Optional[str] = None):
        if name not in self.objects:
            raise KeyError(f"unknown object {name!r}")
        if kind and self.kinds[name] not in (kind if isinstance(kind, tuple) else (kind,)):
            raise KeyError(f"{name!r} is a {self.kinds[name]}, expected {kind}")
        return self.objects[name]


class _Reader:
    def __init__(self, text: str, path: str, ws: Workspace):
        self.text, self.path, self.ws = text, path, ws
        self.lines = text.splitlines()

    def line_of(self, *needles) -> Optional[int]:
        """First line mentioning every needle as a JSON string."""
        quoted = [json.dumps(n) for n in needles if n is not None]
        for i, line in enumerate(self.lines, 1):
            if all(q in line for q in quoted):
                return i
        return None

    def fail(self, message: str, *needles):
        raise ParseError(message, self.path, self.line_of(*needles))

    def ref(self, doc: dict, key: str, kind, owner: str):
        name = doc.get(key)
        if not isinstance(name, str):
            self.fail(f"{owner!r}: missing reference {key!r}", owner)
        try:
            return self.ws.get(name, kind)
        except KeyError as e:
            self.fail(f"{owner!r}: {e.args[0]}", name)

    # -- documents -------------------------------------------------------

    def graph(self, doc: dict, name: str) -> Graph:
        nodes, edges = [], {}
        for n in doc.get("nodes", []):
            nid = n.get("id") if isinstance(n, dict) else n
            if not isinstance(nid, str):
                self.fail(f"graph {name!r}: node without an id", name)
            if nid in nodes:
                self.fail(f"graph {name!r}: duplicate node {nid!r}", nid)
            nodes.append(nid)
        for e in doc.get("edges", []):
            eid, s, t = e.get("id"), e.get("src"), e.get("tgt")
            if eid in edges:
                self.fail(f"graph {name!r}: duplicate edge {eid!r}", eid)
            for end in (s, t):
                if end not in nodes:
                    self.fail(f"graph {name!r}: edge {eid!r} has unknown endpoint {end!r}",
                              eid)
            edges[eid] = (s, t)
        return Graph(nodes, edges)

    def termgraph(self, doc: dict, name: str) -> TermGraph:
        sig = doc.get("signature", {})
        nodes, labels, succ = [], {}, {}
        for n in doc.get("nodes", []):
            nid = n.get("id")
            nodes.append(nid)
            if "label" in n:
                lab = n["label"]
                ss = list(n.get("successors", []))
                if lab not in sig:
                    self.fail(f"termgraph {name!r}: node {nid!r} uses label {lab!r} "
                              f"missing from the signature", nid)
                if len(ss) != sig[lab]:
                    self.fail(f"termgraph {name!r}: node {nid!r} labeled {lab!r} needs "
                              f"{sig[lab]} successors, got {len(ss)}", nid)
                labels[nid], succ[nid] = lab, ss
            elif n.get("successors"):
                self.fail(f"termgraph {name!r}: unlabeled node {nid!r} has successors", nid)
        try:
            return TermGraph(nodes, labels, succ, sig)
        except GraphError as e:
            self.fail(f"termgraph {name!r}: {e}", name)

    def morphism(self, doc: dict, name: str):
        src = self.ref(doc, "source", ("graph", "termgraph"), name)
        tgt = self.ref(doc, "target", ("graph", "termgraph"), name)
        nmap, emap = doc.get("node_map", {}), doc.get("edge_map", {})
        try:
            if "domain" in doc:
                d = doc["domain"]
                dnodes = d.get("nodes", sorted(nmap))
                dedges = d.get("edges", sorted(emap))
                under = src.graph if isinstance(src, TermGraph) else src
                dom = Graph(dnodes, {e: under.edges[e] for e in dedges})
                return PartialMorphism(src, tgt, dom, nmap, emap)
            return Morphism(src, tgt, nmap, emap)
        except (MorphismError, GraphError, KeyError) as e:
            self.fail(f"morphism {name!r}: {e}", name)

    def rule(self, doc: dict, name: str):
        approach = str(doc.get("approach", "")).upper()
        try:
            if approach == "HPO":
                L = self.ref(doc, "lhs", "termgraph", name)
                R = self.ref(doc, "rhs", "termgraph", name)
                rho = HeteroMorphism(node_partial(L, R, doc.get("tau", {})),
                                     node_partial(R, L, doc.get("sigma", {})))
                return Rule("HPO", L, R, rho)
            if approach in SPAN_APPROACHES or "left" in doc:
                l = self.ref(doc, "left", "morphism", name)
                r = self.ref(doc, "right", "morphism", name)
                return span_rule(SPAN_APPROACHES.get(approach, approach), l, r)
            arrow = self.ref(doc, "arrow", "morphism", name)
            if approach in DIRECT_APPROACHES:
                return Rule(approach, arrow.source, arrow.target, arrow)
            return Rule(approach, arrow.target, arrow.source, arrow)
        except (RewriteError, MorphismError, GraphError) as e:
            self.fail(f"rule {name!r}: {e}", name)

    def derivation(self, doc: dict, name: str) -> DerivationScript:
        steps = []
        for i, step in enumerate(doc.get("steps", [])):
            rule = self.ref(step, "rule", "rule", name) if "rule" in step else None
            if rule is None and i == 0:
                self.fail(f"derivation {name!r}: the first step needs a rule", name)
            match = self.ref(step, "match", "morphism", name)
            steps.append((rule, match))
        if not isinstance(doc.get("system"), str):
            self.fail(f"derivation {name!r}: missing system", name)
        return DerivationScript(name, doc["system"], steps)

    def load(self, doc: Any):
        if not isinstance(doc, dict):
            self.fail("expected a JSON object")
        docs = doc["objects"] if "objects" in doc else [doc]
        for d in docs:
            kind, name = d.get("kind"), d.get("name")
            if not isinstance(name, str):
                self.fail(f"{kind} document without a name", kind)
            handler = getattr(self, kind, None) if kind in KINDS else None
            if handler is None:
                self.fail(f"{name!r}: unknown kind {kind!r}", name)
            if name in self.ws.objects:
                self.fail(f"duplicate object name {name!r}", name)
            self.ws.objects[name] = handler(d, name)
            self.ws.kinds[name] = "morphism" if kind == "morphism" else kind


KINDS = ("graph", "termgraph", "morphism", "rule", "derivation")


def parse_text(text: str, path: str = "<input>", ws: Workspace = None) -> Workspace:
    ws = ws if ws is not None else Workspace()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", path, e.lineno) from None
    _Reader(text, path, ws).load(doc)
    return ws


def parse_inputs(paths) -> Workspace:
    """Load every file in order into one workspace."""
    ws = Workspace()
    for p in paths:
        try:
            text = Path(p).read_text()
        except OSError as e:
            raise ParseError(f"cannot read file: {e.strerror}", str(p)) from None
        parse_text(text, str(p), ws)
    return ws


# ---------------------------------------------------------------------------
# serialization


def graph_doc(g, name: str) -> dict:
    if isinstance(g, TermGraph):
        nodes = []
        for n in sorted(g.nodes):
            entry = {"id": n}
            if n in g.labels:
                entry["label"] = g.labels[n]
                if g.succ[n]:
                    entry["successors"] = list(g.succ[n])
            nodes.append(entry)
        return {"kind": "termgraph", "name": name, "signature": dict(g.signature),
                "nodes": nodes}
    return {"kind": "graph", "name": name,
            "nodes": [{"id": n} for n in sorted(g.nodes)],
            "edges": [{"id": e, "src": s, "tgt": t} for e, (s, t) in sorted(g.edges.items())]}


def morphism_doc(m, name: str, source: str, target: str) -> dict:
    doc = {"kind": "morphism", "name": name, "source": source, "target": target,
           "node_map": dict(sorted(m.node_map.items()))}
    if not isinstance(m.source, TermGraph):
        doc["edge_map"] = dict(sorted(m.edge_map.items()))
    if isinstance(m, PartialMorphism):
        doc["domain"] = {"nodes": sorted(m.domain.nodes), "edges": sorted(m.domain.edges)}
    return doc


def dumps(docs) -> str:
    if isinstance(docs, list):
        docs = {"objects": docs}
    return json.dumps(docs, indent=2, sort_keys=False)


def _dot_id(x: str) -> str:
    return json.dumps(x)


def to_dot(g, name: str = "G") -> str:
    """DOT text for a graph or termgraph, with sorted output."""
    lines = [f"digraph {_dot_id(name)} {{"]
    if isinstance(g, TermGraph):
        for n in sorted(g.nodes):
            lab = f"{n}: {g.labels[n]}" if n in g.labels else n
            lines.append(f"  {_dot_id(n)} [label={_dot_id(lab)}];")
        for n, ss in sorted(g.succ.items()):
            for i, m in enumerate(ss):
                lines.append(f"  {_dot_id(n)} -> {_dot_id(m)} [label=\"{i}\"];")
    else:
        for n in sorted(g.nodes):
            lines.append(f"  {_dot_id(n)};")
        for e, (s, t) in sorted(g.edges.items()):
            lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [label={_dot_id(e)}];")
    lines.append("}")
    return "\n".join(lines)


def rule_docs(rule, name: str) -> list:
    """Documents that rebuild ``rule`` under ``name`` (sides, arrows, rule)."""
    if isinstance(rule, ComposedRule):
        first, second = rule.first, rule.second
        approach = {v: k for k, v in SPAN_APPROACHES.items()}.get(first.approach,
                                                                   first.approach)
        return [graph_doc(first.lhs, f"{name}.lhs"), graph_doc(first.rhs, f"{name}.interface"),
                graph_doc(second.rhs, f"{name}.rhs"),
                morphism_doc(first.arrow, f"{name}.left", f"{name}.interface", f"{name}.lhs"),
                morphism_doc(second.arrow, f"{name}.right", f"{name}.interface", f"{name}.rhs"),
                {"kind": "rule", "name": name, "approach": approach,
                 "left": f"{name}.left", "right": f"{name}.right"}]
    if rule.approach == "HPO":
        return [graph_doc(rule.lhs, f"{name}.lhs"), graph_doc(rule.rhs, f"{name}.rhs"),
                {"kind": "rule", "name": name, "approach": "HPO", "lhs": f"{name}.lhs",
                 "rhs": f"{name}.rhs", "tau": dict(sorted(rule.arrow.tau.node_map.items())),
                 "sigma": dict(sorted(rule.arrow.sigma.node_map.items()))}]
    src, tgt = (("lhs", "rhs") if rule.approach in DIRECT_APPROACHES else ("rhs", "lhs"))
    return [graph_doc(rule.lhs, f"{name}.lhs"), graph_doc(rule.rhs, f"{name}.rhs"),
            morphism_doc(rule.arrow, f"{name}.arrow", f"{name}.{src}", f"{name}.{tgt}"),
            {"kind": "rule", "name": name, "approach": rule.approach,
             "arrow": f"{name}.arrow"}]


__all__ = ["ParseError", "Workspace", "DerivationScript", "parse_text", "parse_inputs",
           "graph_doc", "morphism_doc", "rule_docs", "dumps", "to_dot"]
