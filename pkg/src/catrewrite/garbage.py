"""Garbage removal by forward reachability, and the L-GR / R-GR rewriting systems.

In both systems rules and matches are inclusions.  L-GR keeps what is
reachable from the left-hand side, R-GR what is reachable from the
right-hand side; only the second one is functorial.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

from .graph import Graph, GraphError, Morphism, inclusion, is_inclusion
from .systems import (INVERSE, Rule, RewriteError, RewriteSquare, RewriteSystem,
                      check_functoriality_composition, check_functoriality_identity)


@dataclass(frozen=True)
class ReachabilityResult:
    alive: frozenset
    gr: Graph
    witness_order: tuple


def reachable_subgraph(a: Graph, l1: Graph) -> ReachabilityResult:
    """Subgraph of ``l1`` induced by the nodes reachable from the nodes of ``a``."""
    if not a.is_subgraph_of(l1):
        raise GraphError("roots are not a subgraph of the host graph")
    succ: dict[str, set] = {}
    for s, t in l1.edges.values():
        succ.setdefault(s, set()).add(t)
    roots = sorted(a.nodes)
    seen = set(roots)
    order = []
    work = deque(roots)
    while work:
        n = work.popleft()
        order.append(n)
        for m in sorted(succ.get(n, ())):
            if m not in seen:
                seen.add(m)
                work.append(m)
    alive = frozenset(seen)
    return ReachabilityResult(alive, l1.induced(alive), tuple(order))


def gr(a: Graph, l1: Graph) -> Graph:
    return reachable_subgraph(a, l1).gr


def _check_inclusions(rho: Morphism, f: Morphism):
    for m, what in ((rho, "rule"), (f, "match")):
        if not isinstance(m, Morphism) or not is_inclusion(m):
            raise RewriteError(f"{what} must be an inclusion")
    if rho.target != f.source:
        raise RewriteError("rule lhs is not the match source")


def _gr_square(approach: str, rho: Morphism, f: Morphism, roots: Graph) -> RewriteSquare:
    L, R, l1 = f.source, rho.source, f.target
    kept = gr(roots, l1)
    top = Rule(approach, L, R, rho)
    bottom = Rule(approach, l1, kept, inclusion(kept, l1))
    return RewriteSquare(top, bottom, f, inclusion(R, kept))


def lgr_step(rho: Morphism, f: Morphism) -> RewriteSquare:
    """Keep what ``L1`` reaches from the left-hand side ``L``."""
    _check_inclusions(rho, f)
    return _gr_square("LGR", rho, f, f.source)


def rgr_step(rho: Morphism, f: Morphism) -> RewriteSquare:
    """Keep what ``L1`` reaches from the right-hand side ``R``."""
    _check_inclusions(rho, f)
    return _gr_square("RGR", rho, f, rho.source)


def is_garbage_free(rho: Morphism) -> bool:
    """``gr(R, L) = R``: the rule's right-hand side is closed under successors in ``L``."""
    return gr(rho.source, rho.target) == rho.source


class _GarbageSystem(RewriteSystem):
    orientation = INVERSE
    ambient = "total"
    match_category = "inclusion"
    right_category = "inclusion"
    approach = ""

    def rule_defect(self, rule):
        if getattr(rule, "approach", None) != self.approach:
            return f"expected a {self.approach} rule"
        if not isinstance(rule.arrow, Morphism) or not is_inclusion(rule.arrow):
            return "rule arrow must be an inclusion"
        return None

    def match_defect(self, f):
        if not isinstance(f, Morphism) or not is_inclusion(f):
            return "match must be an inclusion"
        return None


class LgrSystem(_GarbageSystem):
    name = "lgr"
    approach = "LGR"

    def _step(self, rule, f):
        return lgr_step(rule.arrow, f)


class RgrSystem(_GarbageSystem):
    """R-GR over garbage-free rules, the class on which its identity law holds."""

    name = "rgr"
    approach = "RGR"

    def rule_defect(self, rule):
        problem = super().rule_defect(rule)
        if problem:
            return problem
        if not is_garbage_free(rule.arrow):
            return "rule rhs is not closed under successors in lhs"
        return None

    def _step(self, rule, f):
        return rgr_step(rule.arrow, f)


lgr_system = LgrSystem()
rgr_system = RgrSystem()


# ---------------------------------------------------------------------------
# the fixed example


def example_graphs() -> dict[str, Graph]:
    return {
        "A": Graph(["a"]),
        "L1": Graph(["a", "b", "c"], {"e1": ("a", "c")}),
        "L2": Graph(["a", "b", "c", "d", "e"],
                    {"e1": ("a", "c"), "e2": ("a", "d"), "e3": ("b", "e")}),
        "AC": Graph(["a", "c"], {"e1": ("a", "c")}),
        "ACD": Graph(["a", "c", "d"], {"e1": ("a", "c"), "e2": ("a", "d")}),
    }


@dataclass
class CounterexampleReport:
    lgr_verdict: str
    rgr_verdict: str
    lgr_two_step: Graph
    lgr_one_step: Graph
    rgr_two_step: Graph
    rgr_one_step: Graph

    def lines(self) -> list[str]:
        def desc(g):
            return f"{len(g.nodes)} nodes / {len(g.edges)} edges {sorted(g.nodes)}"
        return [
            f"lgr: {self.lgr_verdict}",
            f"  two-step derived: {desc(self.lgr_two_step)}",
            f"  one-step derived: {desc(self.lgr_one_step)}",
            f"rgr: {self.rgr_verdict}",
            f"  two-step derived: {desc(self.rgr_two_step)}",
            f"  one-step derived: {desc(self.rgr_one_step)}",
        ]


def reproduce_counterexample() -> CounterexampleReport:
    """Run both garbage-removal systems on ``{a} ⊆ L1 ⊆ L2`` with the rule ``{a} ⊆ {a}``."""
    g = example_graphs()
    a, l1, l2 = g["A"], g["L1"], g["L2"]
    rho = inclusion(a, a)
    f1, f2 = inclusion(a, l1), inclusion(l1, l2)
    out = {}
    for system in (lgr_system, rgr_system):
        rule = Rule(system.approach, a, a, rho)
        assert check_functoriality_identity(system, rule)
        res = check_functoriality_composition(system, rule, f1, f2)
        out[system.name] = res
    lg, rg = out["lgr"], out["rgr"]
    return CounterexampleReport(lg.verdict, rg.verdict,
                                lg.two_step.derived, lg.one_step.derived,
                                rg.two_step.derived, rg.one_step.derived)
