"""Categorical graph rewriting: PO, SPO, DPO, SqPO, HPO and garbage removal."""

from .graph import (Graph, GraphError, Morphism, MorphismError, PartialGraph,
                    PartialMorphism, TermGraph, compose_partial, compose_total,
                    disjoint_union, graph_difference, identity, inclusion, is_iso,
                    is_mono, is_partial_mono, quotient)
from .homs import EnumerationCapError, enumerate_homs, is_isomorphic, iso_check
from .systems import (ComposedRule, ComposedSquare, RewriteError, RewriteSquare,
                      RewriteSystem, Rule, Undefined, check_functoriality_composition,
                      check_functoriality_identity, compose_systems, is_undefined,
                      rewrite_step)

__version__ = "0.1.0"
