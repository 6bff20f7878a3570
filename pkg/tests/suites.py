"""Randomized suites shared by the unit tests and the acceptance run.

Every runner draws instances from a seeded generator and returns a small
summary dict; callers decide which counts and seeds to use.
"""

import random

from catrewrite.graph import compose_total, is_partial_mono, Morphism
from catrewrite.homs import iter_homs
from catrewrite.hpo import hpo_construct
from catrewrite.instances import random_instance
from catrewrite.oracle import (verify_fpbc_bounded, verify_initial_cocone_bounded,
                               verify_partial_pushout_bounded, verify_pushout_bounded,
                               verify_pushout_complement)
from catrewrite.pushout import (conflict_free_fpbc, conflict_free_spo, dpo_step,
                                fpbc1_system, fpbc2_system, fpbc_left_linear,
                                fpbc_monic_match, gluing_check, po_system, poc_system,
                                pushout_complement, pushout_total, spo_pushout, sqpo_step)
from catrewrite.systems import (check_functoriality_composition,
                                check_functoriality_identity, compose_systems,
                                is_undefined, rewrite_step)

FUNCTORIAL = ("po", "spo", "poc", "dpo", "fpbc1", "fpbc2", "sqpo1", "sqpo2", "hpo", "rgr")


def fits(*gs, max_nodes=4, max_edges=5):
    return all(len(g.nodes) <= max_nodes and len(g.edges) <= max_edges for g in gs)


def functoriality(system, count, seed=0):
    """Draw until ``count`` composition checks were applicable."""
    from catrewrite.cli import SYSTEMS
    sys_ = SYSTEMS[system]
    rng = random.Random(seed)
    out = {"applicable": 0, "drawn": 0, "fails": [], "identity_fails": 0}
    while out["applicable"] < count:
        inst = random_instance(rng, system)
        out["drawn"] += 1
        if not check_functoriality_identity(sys_, inst.rule):
            out["identity_fails"] += 1
        res = check_functoriality_composition(sys_, inst.rule, inst.f1, inst.f2)
        if res.fails:
            out["fails"].append(res.reason)
        if res.holds or res.fails:
            out["applicable"] += 1
    return out


# ---------------------------------------------------------------------------
# composition lemmas: returns None when a hypothesis fails, else the verdict


def spo_lemma(rule, f1, f2):
    r = rule.arrow
    if not conflict_free_spo(r, f1):
        return None
    _, r1, _ = spo_pushout(r, f1)
    if not conflict_free_spo(r1, f2):
        return None
    return conflict_free_spo(r, compose_total(f1, f2))


def dpo_lemma(rule, f1, f2):
    l = rule.first.arrow
    pc = pushout_complement(l, f1)
    if is_undefined(pc) or not gluing_check(pc.l1, f2).ok:
        return None
    return gluing_check(l, compose_total(f1, f2)).ok


def sqpo1_lemma(rule, f1, f2):
    l = rule.first.arrow
    if not conflict_free_fpbc(l, f1):
        return None
    pc = fpbc_left_linear(l, f1)
    if not conflict_free_fpbc(pc.l1, f2):
        return None
    return conflict_free_fpbc(l, compose_total(f1, f2))


LEMMAS = {"spo": spo_lemma, "dpo": dpo_lemma, "sqpo1": sqpo1_lemma}


def lemma(system, count, seed=0):
    check = LEMMAS[system]
    rng = random.Random(seed)
    out = {"hold": 0, "violations": 0, "drawn": 0}
    while out["hold"] + out["violations"] < count:
        inst = random_instance(rng, system)
        out["drawn"] += 1
        verdict = check(inst.rule, inst.f1, inst.f2)
        if verdict is True:
            out["hold"] += 1
        elif verdict is False:
            out["violations"] += 1
    return out


# ---------------------------------------------------------------------------
# oracles


def _oracle_case(which, inst):
    """Construct with the engine and verify; ``None`` if outside the size limits."""
    f = inst.f1
    arrow = inst.rule.arrow
    if which == "po":
        cand = pushout_total(arrow, f)
        return verify_pushout_bounded(arrow, f, cand) if fits(cand[0], f.target) else None
    if which == "spo":
        cand = spo_pushout(arrow, f)
        if is_undefined(cand) or not fits(cand[0], f.target):
            return None
        return verify_partial_pushout_bounded(arrow, f, cand)
    if which == "poc":
        pc = pushout_complement(arrow, f)
        if is_undefined(pc) or not fits(pc.k1, f.target):
            return None
        return verify_pushout_complement(arrow, f, (pc.k1, pc.l1, pc.g))
    if which in ("fpbc1", "fpbc2"):
        pc = fpbc_left_linear(arrow, f) if which == "fpbc1" else fpbc_monic_match(arrow, f)
        if is_undefined(pc) or not fits(pc.k1, f.target):
            return None
        return verify_fpbc_bounded(arrow, f, (pc.k1, pc.l1, pc.g))
    rho1, g = hpo_construct(arrow, f)
    if not fits(rho1.target, f.target):
        return None
    return verify_initial_cocone_bounded(arrow, f, (rho1, g))


def oracle(which, count, seed=11):
    rng = random.Random(seed)
    out = {"passed": 0, "failed": [], "drawn": 0}
    while out["passed"] + len(out["failed"]) < count:
        inst = random_instance(rng, which)
        out["drawn"] += 1
        v = _oracle_case(which, inst)
        if v is None:
            continue
        if v.ok:
            out["passed"] += 1
        else:
            out["failed"].append(v.reason)
    return out


# ---------------------------------------------------------------------------
# two routes: direct one-pass step against the composed system


ROUTES = {
    "dpo": (poc_system, lambda rule, f: dpo_step(rule.first.arrow, rule.second.arrow, f)),
    "sqpo1": (fpbc1_system,
              lambda rule, f: sqpo_step(1, rule.first.arrow, rule.second.arrow, f)),
    "sqpo2": (fpbc2_system,
              lambda rule, f: sqpo_step(2, rule.first.arrow, rule.second.arrow, f)),
}


def two_routes(system, count, seed=5):
    first, direct = ROUTES[system]
    composed = compose_systems(first, po_system)
    rng = random.Random(seed)
    out = {"agree": 0, "undefined": 0, "disagree": 0}
    for _ in range(count):
        inst = random_instance(rng, system)
        a = rewrite_step(composed, inst.rule, inst.f1)
        b = direct(inst.rule, inst.f1)
        if is_undefined(a) or is_undefined(b):
            same = is_undefined(a) and is_undefined(b)
            out["undefined"] += same
        else:
            same = composed.square_equivalent(a, b)
        out["agree" if same else "disagree"] += 1
    return out


# ---------------------------------------------------------------------------
# postconditions of single steps


def spo_postconditions(count, seed=3):
    """Right leg total and bottom rule a partial mono on every defined step."""
    rng = random.Random(seed)
    out = {"checked": 0, "bad": 0}
    while out["checked"] < count:
        inst = random_instance(rng, "spo")
        cand = spo_pushout(inst.rule.arrow, inst.f1)
        if is_undefined(cand):
            continue
        _, r1, g = cand
        out["checked"] += 1
        ok = isinstance(g, Morphism) and g.defect() is None and is_partial_mono(r1)
        out["bad"] += not ok
    return out


def _image_outside(l, f):
    kn, ke = set(l.node_map.values()), set(l.edge_map.values())
    L = f.source
    return (sorted({f.node_map[x] for x in L.nodes if x not in kn}),
            {f.edge_map[e]: f.target.edges[f.edge_map[e]] for e in L.edges if e not in ke})


def complement_item_for_item(l, f, pc):
    """``K1`` equals ``L1`` minus the image of the deleted part, and the
    pushout of the rule with ``g`` gives back ``L1`` compatibly with both legs."""
    nodes, edges = _image_outside(l, f)
    l1 = f.target
    if set(pc.k1.nodes) != set(l1.nodes) - set(nodes):
        return False
    if dict(pc.k1.edges) != {e: st for e, st in l1.edges.items() if e not in edges}:
        return False
    x, l_back, f_back = pushout_total(l, pc.g)
    pins = {}
    for m, target in ((f_back, f), (l_back, pc.l1)):
        for item, img in list(m.node_map.items()) + list(m.edge_map.items()):
            want = target(item)
            if pins.setdefault(img, want) != want:
                return False
    return next(iter_homs(x, f.target, "iso", fixed=pins), None) is not None


def dpo_complements(count, seed=4):
    rng = random.Random(seed)
    out = {"checked": 0, "bad": 0}
    while out["checked"] < count:
        inst = random_instance(rng, "poc")
        pc = pushout_complement(inst.rule.arrow, inst.f1)
        if is_undefined(pc):
            continue
        out["checked"] += 1
        out["bad"] += not complement_item_for_item(inst.rule.arrow, inst.f1, pc)
    return out
