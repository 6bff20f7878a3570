"""Rewriting systems over a span of categories.

A rewriting system is described extensionally: a rule predicate, a match
predicate, and a partial step function sending a rule and a match to a
commuting square (a rule morphism).  A step outside the domain returns an
:class:`Undefined` value, which is a normal outcome and not an error.

Each system also knows how to compose arrows in its ambient category, so
that squares can be pasted vertically and compared up to isomorphism of
their bottom-right corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Union

from .graph import (Morphism, MorphismError, PartialMorphism, compose_partial,
                    compose_total, identity, as_partial)
from .homs import iter_homs

DIRECT = "direct"
INVERSE = "inverse"

# match/right categories, with the inclusions between them
_SUBCATEGORY = {
    "graph": {"graph"},
    "graph_mono": {"graph_mono", "graph"},
    "inclusion": {"inclusion", "graph_mono", "graph"},
    "termgraph_mono": {"termgraph_mono"},
}


class RewriteError(ValueError):
    """Malformed input to a rewrite step (bad rule, bad match, mismatched ends)."""


class Undefined:
    """Outcome of a step whose match lies outside the domain of the process."""

    __slots__ = ("reason",)

    def __init__(self, reason: str = ""):
        self.reason = reason

    def __bool__(self):
        return False

    def __eq__(self, other):
        return isinstance(other, Undefined)

    def __hash__(self):
        return hash(Undefined)

    def __repr__(self):
        return f"Undefined({self.reason!r})"


def is_undefined(x) -> bool:
    return isinstance(x, Undefined)


@dataclass(frozen=True)
class Rule:
    """A production ``lhs ⇝ rhs`` carrying its underlying arrow.

    For direct approaches (PO, SPO, HPO) ``arrow`` goes ``lhs -> rhs``; for
    inverse approaches (POC, FPBC1, FPBC2, LGR, RGR) it goes ``rhs -> lhs``.
    """

    approach: str
    lhs: Any
    rhs: Any
    arrow: Any

    def __post_init__(self):
        src, tgt = self.arrow.source, self.arrow.target
        if self.approach in DIRECT_APPROACHES:
            ok = src == self.lhs and tgt == self.rhs
        else:
            ok = src == self.rhs and tgt == self.lhs
        if not ok:
            raise RewriteError(f"{self.approach} rule arrow does not match its sides")


DIRECT_APPROACHES = frozenset({"PO", "SPO", "HPO"})
INVERSE_APPROACHES = frozenset({"POC", "FPBC1", "FPBC2", "LGR", "RGR"})


@dataclass(frozen=True)
class ComposedRule:
    """A pair of rules sharing the interface ``first.rhs == second.lhs``."""

    first: Any
    second: Any

    def __post_init__(self):
        if self.first.rhs != self.second.lhs:
            raise RewriteError("composed rule: rhs of first is not lhs of second")

    @property
    def lhs(self):
        return self.first.lhs

    @property
    def rhs(self):
        return self.second.rhs

    @property
    def interface(self):
        return self.first.rhs


@dataclass(frozen=True)
class RewriteSquare:
    """A rule morphism ``top -> bottom`` with legs ``left: L -> L1``, ``right: R -> R1``."""

    top: Any
    bottom: Any
    left: Any
    right: Any

    @property
    def derived(self):
        return self.right.target


@dataclass(frozen=True)
class ComposedSquare:
    """Horizontal pasting of a square of the first system with one of the second."""

    first: Any
    second: Any

    @property
    def top(self):
        return ComposedRule(self.first.top, self.second.top)

    @property
    def bottom(self):
        return ComposedRule(self.first.bottom, self.second.bottom)

    @property
    def left(self):
        return self.first.left

    @property
    def right(self):
        return self.second.right

    @property
    def derived(self):
        return self.second.right.target


Square = Union[RewriteSquare, ComposedSquare]


class RewriteSystem:
    """Base class: span orientation, ambient category, and the step function.

    Subclasses implement :meth:`rule_defect`, :meth:`match_defect` and
    :meth:`_step`.  ``ambient`` is ``"total"``, ``"partial"``, ``"hetero"`` or
    ``"inclusion"`` and fixes how rule arrows are composed with legs.
    """

    name = "abstract"
    orientation = DIRECT
    ambient = "total"
    match_category = "graph"
    right_category = "graph"

    # -- contract -----------------------------------------------------------
    def rule_defect(self, rule) -> Optional[str]:
        raise NotImplementedError

    def match_defect(self, f) -> Optional[str]:
        if not isinstance(f, Morphism):
            return "match must be a total morphism"
        return f.defect()

    def _step(self, rule, f):
        raise NotImplementedError

    # -- ambient category ---------------------------------------------------
    def compose_arrows(self, a, b):
        """``b ∘ a`` in the ambient category."""
        if self.ambient == "partial":
            return compose_partial(a if isinstance(a, PartialMorphism) else as_partial(a),
                                   b if isinstance(b, PartialMorphism) else as_partial(b))
        return compose_total(a, b)

    def compose_matches(self, f1, f2):
        return compose_total(f1, f2)

    def identity_match(self, obj):
        return identity(obj)

    def commutes(self, sq: RewriteSquare) -> bool:
        c = self.compose_arrows
        if self.orientation == DIRECT:
            return c(sq.top.arrow, sq.right) == c(sq.left, sq.bottom.arrow)
        return c(sq.top.arrow, sq.left) == c(sq.right, sq.bottom.arrow)

    def paste(self, upper: RewriteSquare, lower: RewriteSquare) -> RewriteSquare:
        """Vertical composite: ``lower ∘ upper``."""
        return RewriteSquare(upper.top, lower.bottom,
                             self.compose_matches(upper.left, lower.left),
                             compose_total(upper.right, lower.right))

    def identity_square(self, rule) -> RewriteSquare:
        return RewriteSquare(rule, rule, self.identity_match(rule.lhs), identity(rule.rhs))

    def _bottom_compatible(self, a: RewriteSquare, b: RewriteSquare, h, h_left) -> bool:
        c = self.compose_arrows
        if self.orientation == DIRECT:
            return c(a.bottom.arrow, h) == c(h_left, b.bottom.arrow)
        return c(h, b.bottom.arrow) == c(a.bottom.arrow, h_left)

    def _search_hints(self, a: RewriteSquare, b: RewriteSquare, h_left):
        """Pins and candidate sets every equivalence ``h`` must respect.

        Returns ``None`` when the right legs already rule out any ``h``.
        """
        fixed = {}

        def pin(y, want):
            if fixed.setdefault(y, want) != want:
                raise LookupError
        try:
            ra, rb = a.right, b.right
            for x, y in list(ra.node_map.items()) + list(ra.edge_map.items()):
                pin(y, rb(x))
            ba, bb = a.bottom.arrow, b.bottom.arrow
            allowed = {}
            if self.orientation == DIRECT:
                # h∘ba = bb∘h_left wherever ba is defined
                for x, y in list(ba.node_map.items()) + list(ba.edge_map.items()):
                    want = bb.node_map.get(h_left(x), bb.edge_map.get(h_left(x)))
                    if want is None:
                        raise LookupError
                    pin(y, want)
            elif isinstance(bb, Morphism) and isinstance(ba, Morphism):
                # bb∘h = h_left∘ba: h stays inside the fibres of bb
                fibres = {}
                for y, z in list(bb.node_map.items()) + list(bb.edge_map.items()):
                    fibres.setdefault(z, set()).add(y)
                for x, z in list(ba.node_map.items()) + list(ba.edge_map.items()):
                    allowed[x] = fibres.get(h_left(z), set())
        except LookupError:
            return None
        return fixed, allowed

    def equivalences(self, a: RewriteSquare, b: RewriteSquare,
                     h_left=None) -> Iterator[Morphism]:
        """Isos ``h: R1(a) -> R1(b)`` with ``h∘right(a) = right(b)`` that carry the
        bottom rule of ``a`` to that of ``b`` (given the iso ``h_left`` on lhs)."""
        if h_left is None:
            if a.bottom.lhs != b.bottom.lhs:
                return
            h_left = identity(a.bottom.lhs)
        hints = self._search_hints(a, b, h_left)
        if hints is None:
            return
        fixed, allowed = hints
        for h in iter_homs(a.right.target, b.right.target, "iso", fixed=fixed,
                           allowed=allowed):
            if self._bottom_compatible(a, b, h, h_left):
                yield h

    def square_equivalent(self, a, b, h_left=None) -> bool:
        return next(self.equivalences(a, b, h_left), None) is not None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _check_inputs(sys: RewriteSystem, rule, f):
    problem = sys.rule_defect(rule)
    if problem:
        raise RewriteError(f"{sys.name}: invalid rule: {problem}")
    problem = sys.match_defect(f)
    if problem:
        raise RewriteError(f"{sys.name}: inadmissible match: {problem}")
    if f.source != rule.lhs:
        raise RewriteError(f"{sys.name}: match source is not the rule's lhs")


def rewrite_step(sys: RewriteSystem, rule, f):
    """Apply ``rule`` at match ``f``: a square, or :class:`Undefined`."""
    _check_inputs(sys, rule, f)
    out = sys._step(rule, f)
    if is_undefined(out):
        return out
    if out.left != f or out.top != rule:
        raise AssertionError(f"{sys.name}: step broke the section law")
    return out


# ---------------------------------------------------------------------------
# functoriality


@dataclass
class FunctorialityResult:
    verdict: str  # "holds" | "fails" | "inapplicable"
    two_step: Optional[Square] = None
    one_step: Optional[Square] = None
    domain_violation: bool = False
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    @property
    def fails(self) -> bool:
        return self.verdict == "fails"


def check_functoriality_identity(sys: RewriteSystem, rule) -> bool:
    """``id_L`` is in the domain and is sent to the identity square (up to iso)."""
    idm = sys.identity_match(rule.lhs)
    sq = rewrite_step(sys, rule, idm)
    if is_undefined(sq):
        return False
    return sys.square_equivalent(sq, sys.identity_square(rule))


def check_functoriality_composition(sys: RewriteSystem, rule, f1, f2) -> FunctorialityResult:
    if f1.target != f2.source:
        raise RewriteError("matches are not consecutive")
    sq1 = rewrite_step(sys, rule, f1)
    if is_undefined(sq1):
        return FunctorialityResult("inapplicable", reason=f"first match: {sq1.reason}")
    sq2 = rewrite_step(sys, sq1.bottom, f2)
    if is_undefined(sq2):
        return FunctorialityResult("inapplicable", reason=f"second match: {sq2.reason}")
    pasted = sys.paste(sq1, sq2)
    one = rewrite_step(sys, rule, sys.compose_matches(f1, f2))
    if is_undefined(one):
        return FunctorialityResult("fails", pasted, None, domain_violation=True,
                                   reason=f"composite match outside domain: {one.reason}")
    if sys.square_equivalent(pasted, one):
        return FunctorialityResult("holds", pasted, one)
    return FunctorialityResult("fails", pasted, one,
                               reason="two-step and one-step squares differ")


# ---------------------------------------------------------------------------
# horizontal composition


def _category_fits(right: str, match: str) -> bool:
    return match in _SUBCATEGORY.get(right, {right})


class ComposedSystem(RewriteSystem):
    """``second ∘ first``: apply ``first``, then ``second`` at the produced right leg."""

    def __init__(self, first: RewriteSystem, second: RewriteSystem, name: str = None):
        if not _category_fits(first.right_category, second.match_category):
            raise RewriteError(
                f"cannot compose {first.name} then {second.name}: right category "
                f"{first.right_category!r} is not inside match category "
                f"{second.match_category!r}")
        self.first = first
        self.second = second
        self.name = name or f"{second.name}∘{first.name}"
        self.match_category = first.match_category
        self.right_category = second.right_category

    def rule_defect(self, rule) -> Optional[str]:
        if not isinstance(rule, ComposedRule):
            return "expected a composed rule"
        return (self.first.rule_defect(rule.first)
                or self.second.rule_defect(rule.second))

    def match_defect(self, f):
        return self.first.match_defect(f)

    def _step(self, rule, f):
        s1 = rewrite_step(self.first, rule.first, f)
        if is_undefined(s1):
            return Undefined(f"first factor ({self.first.name}): {s1.reason}")
        s2 = rewrite_step(self.second, rule.second, s1.right)
        if is_undefined(s2):
            return Undefined(f"second factor ({self.second.name}): {s2.reason}")
        return ComposedSquare(s1, s2)

    def compose_matches(self, f1, f2):
        return self.first.compose_matches(f1, f2)

    def identity_match(self, obj):
        return self.first.identity_match(obj)

    def commutes(self, sq: ComposedSquare) -> bool:
        return (self.first.commutes(sq.first) and self.second.commutes(sq.second)
                and sq.first.right == sq.second.left)

    def paste(self, upper: ComposedSquare, lower: ComposedSquare) -> ComposedSquare:
        return ComposedSquare(self.first.paste(upper.first, lower.first),
                              self.second.paste(upper.second, lower.second))

    def identity_square(self, rule: ComposedRule) -> ComposedSquare:
        return ComposedSquare(self.first.identity_square(rule.first),
                              self.second.identity_square(rule.second))

    def equivalences(self, a: ComposedSquare, b: ComposedSquare, h_left=None):
        for h_mid in self.first.equivalences(a.first, b.first, h_left):
            yield from self.second.equivalences(a.second, b.second, h_mid)


def compose_systems(first: RewriteSystem, second: RewriteSystem,
                    name: str = None) -> ComposedSystem:
    return ComposedSystem(first, second, name)


class IdentitySystem(RewriteSystem):
    """Rules are identity arrows and every match is sent to its identity-like square."""

    name = "id"

    def __init__(self, orientation: str = DIRECT, category: str = "graph"):
        self.orientation = orientation
        self.match_category = category
        self.right_category = category

    def rule_defect(self, rule):
        if rule.arrow != identity(rule.lhs):
            return "rule arrow is not an identity"
        return None

    def _step(self, rule, f):
        approach = rule.approach
        bottom = Rule(approach, f.target, f.target, identity(f.target))
        return RewriteSquare(rule, bottom, f, f)


__all__ = [
    "RewriteError", "Undefined", "is_undefined", "Rule", "ComposedRule",
    "RewriteSquare", "ComposedSquare", "RewriteSystem", "ComposedSystem",
    "IdentitySystem", "FunctorialityResult", "rewrite_step",
    "check_functoriality_identity", "check_functoriality_composition",
    "compose_systems", "DIRECT", "INVERSE", "MorphismError",
]
