"""Command-line front end.

    catrewrite step --system dpo FILES --rule rho --match m
    catrewrite derive FILES --script run
    catrewrite functoriality --system sqpo1 --count 200 --seed 3
    catrewrite verify --system po FILES --rule rho --match m --bound 6
    catrewrite gc counterexample
    catrewrite compose --first poc --second po FILES --rule span --match m

Exit status: 0 when everything holds, 1 when a verdict fails or a step is
undefined, 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from .garbage import lgr_system, reproduce_counterexample, rgr_system
from .graph import GraphError, MorphismError
from .homs import EnumerationCapError
from .hpo import hpo_construct, hpo_system
from .instances import random_instance
from .io import ParseError, dumps, graph_doc, morphism_doc, parse_inputs, to_dot
from .oracle import (verify_fpbc_bounded, verify_initial_cocone_bounded,
                     verify_partial_pushout_bounded, verify_pushout_bounded,
                     verify_pushout_complement)
from .pushout import (dpo_step, dpo_system, fpbc1_system, fpbc2_system, fpbc_left_linear,
                      fpbc_monic_match, po_system, poc_system, pushout_complement,
                      pushout_total, spo_pushout, spo_system, sqpo1_system, sqpo2_system,
                      sqpo_step)
from .systems import (ComposedRule, RewriteError, Rule, check_functoriality_composition,
                      check_functoriality_identity, compose_systems, is_undefined,
                      rewrite_step)

BOUND_ENV = "CATREWRITE_BOUND"

SYSTEMS = {s.name: s for s in (po_system, spo_system, poc_system, fpbc1_system,
                               fpbc2_system, dpo_system, sqpo1_system, sqpo2_system,
                               hpo_system, lgr_system, rgr_system)}

DIRECT_ROUTES = {("poc", "po"): "dpo", ("fpbc1", "po"): "sqpo1", ("fpbc2", "po"): "sqpo2"}


class UsageError(Exception):
    pass


def _default_bound():
    raw = os.environ.get(BOUND_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BOUND_ENV} must be an integer, got {raw!r}") from None


def _system(name):
    if name not in SYSTEMS:
        raise UsageError(f"unknown system {name!r}; choose from {', '.join(sorted(SYSTEMS))}")
    return SYSTEMS[name]


_INVERSE_TAGS = {"poc": "POC", "fpbc1": "FPBC1", "fpbc2": "FPBC2"}


def _retag(rule, system_name):
    """Read a deleting rule (or the left part of a span) under another inverse approach."""
    tag = _INVERSE_TAGS.get(system_name)
    if tag is None:
        return rule
    if isinstance(rule, ComposedRule) and rule.first.approach in _INVERSE_TAGS.values():
        return ComposedRule(Rule(tag, rule.first.lhs, rule.first.rhs, rule.first.arrow),
                            rule.second)
    if isinstance(rule, Rule) and rule.approach in _INVERSE_TAGS.values():
        return Rule(tag, rule.lhs, rule.rhs, rule.arrow)
    return rule


def _square_docs(sq, prefix="derived"):
    return [graph_doc(sq.top.rhs, f"{prefix}.rhs"), graph_doc(sq.derived, prefix),
            morphism_doc(sq.right, f"{prefix}.right", f"{prefix}.rhs", prefix)]


def _emit(args, out, sq, title):
    if is_undefined(sq):
        out.write(f"{title}: undefined ({sq.reason})\n")
        return
    if args.format == "dot":
        out.write(to_dot(sq.derived, title) + "\n")
        return
    g = sq.derived
    out.write(f"{title}: derived {len(g.nodes)} nodes, {len(g.edges)} edges\n")
    out.write(dumps(_square_docs(sq)) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_step(args, out):
    sys_ = _system(args.system)
    ws = parse_inputs(args.files)
    rule = ws.get(args.rule, "rule")
    match = ws.get(args.match, "morphism")
    sq = rewrite_step(sys_, rule, match)
    _emit(args, out, sq, f"step {sys_.name}")
    return 1 if is_undefined(sq) else 0


def cmd_derive(args, out):
    ws = parse_inputs(args.files)
    script = ws.get(args.script, "derivation")
    sys_ = _system(args.system or script.system)
    rule, status = None, 0
    for i, (step_rule, match) in enumerate(script.steps, 1):
        rule = step_rule if step_rule is not None else rule
        if match.source != rule.lhs:
            raise UsageError(f"derivation {script.name!r}: step {i} match does not start "
                             f"at the rule's left-hand side")
        sq = rewrite_step(sys_, rule, match)
        _emit(args, out, sq, f"step {i} ({sys_.name})")
        if is_undefined(sq):
            status = 1
            break
        rule = sq.bottom
    return status


def cmd_functoriality(args, out):
    sys_ = _system(args.system)
    if args.files:
        ws = parse_inputs(args.files)
        rule = ws.get(args.rule, "rule")
        f1, f2 = ws.get(args.f1, "morphism"), ws.get(args.f2, "morphism")
        ident = check_functoriality_identity(sys_, rule)
        comp = check_functoriality_composition(sys_, rule, f1, f2)
        out.write(f"identity: {'holds' if ident else 'fails'}\n")
        out.write(f"composition: {comp.verdict}" + (f" ({comp.reason})" if comp.reason else "")
                  + "\n")
        return 0 if ident and not comp.fails else 1
    rng = random.Random(args.seed)
    counts = {"holds": 0, "fails": 0, "inapplicable": 0}
    ident_fail = 0
    start = time.perf_counter()
    for _ in range(args.count):
        inst = random_instance(rng, sys_.name)
        if not check_functoriality_identity(sys_, inst.rule):
            ident_fail += 1
        counts[check_functoriality_composition(sys_, inst.rule, inst.f1, inst.f2).verdict] += 1
    dt = time.perf_counter() - start
    out.write(f"{sys_.name}: {args.count} instances (seed {args.seed}) in {dt:.2f}s\n")
    out.write(f"  identity: {args.count - ident_fail} hold, {ident_fail} fail\n")
    out.write(f"  composition: {counts['holds']} hold, {counts['fails']} fail, "
              f"{counts['inapplicable']} inapplicable\n")
    return 0 if not ident_fail and not counts["fails"] else 1


def _candidate(name, arrow, f):
    if name == "po":
        return verify_pushout_bounded, pushout_total(arrow, f)
    if name == "spo":
        return verify_partial_pushout_bounded, spo_pushout(arrow, f)
    if name == "poc":
        pc = pushout_complement(arrow, f)
        return verify_pushout_complement, pc if is_undefined(pc) else (pc.k1, pc.l1, pc.g)
    if name in ("fpbc1", "fpbc2"):
        pc = (fpbc_left_linear if name == "fpbc1" else fpbc_monic_match)(arrow, f)
        return verify_fpbc_bounded, pc if is_undefined(pc) else (pc.k1, pc.l1, pc.g)
    if name == "hpo":
        return verify_initial_cocone_bounded, hpo_construct(arrow, f)
    raise UsageError(f"verify supports po, spo, poc, fpbc1, fpbc2 and hpo, not {name!r}")


def cmd_verify(args, out):
    sys_ = _system(args.system)
    ws = parse_inputs(args.files)
    rule = _retag(ws.get(args.rule, "rule"), sys_.name)
    if isinstance(rule, ComposedRule) and sys_.name in _INVERSE_TAGS:
        rule = rule.first  # only the deleting leg is a universal construction here
    match = ws.get(args.match, "morphism")
    problem = sys_.rule_defect(rule) or sys_.match_defect(match)
    if problem:
        raise RewriteError(f"{sys_.name}: {problem}")
    oracle, cand = _candidate(sys_.name, rule.arrow, match)
    if is_undefined(cand):
        out.write(f"verify {sys_.name}: construction undefined ({cand.reason})\n")
        return 1
    kwargs = {}
    if sys_.name != "poc":
        kwargs["bound"] = args.bound
    if sys_.name == "po":
        kwargs["exhaustive"] = args.exhaustive
    verdict = oracle(rule.arrow, match, cand, **kwargs)
    out.write(f"verify {sys_.name}: {'ok' if verdict.ok else 'rejected'} "
              f"({verdict.checked} competitors checked)\n")
    if not verdict.ok:
        out.write(f"  reason: {verdict.reason}\n")
    return 0 if verdict.ok else 1


def cmd_gc(args, out):
    report = reproduce_counterexample()
    if args.format == "dot":
        out.write(to_dot(report.lgr_two_step, "lgr_two_step") + "\n")
        out.write(to_dot(report.lgr_one_step, "lgr_one_step") + "\n")
    else:
        out.write("\n".join(report.lines()) + "\n")
    verdicts = (report.lgr_verdict, report.rgr_verdict)
    return 1 if "fails" in verdicts else 0


def cmd_compose(args, out):
    first, second = _system(args.first), _system(args.second)
    composed = compose_systems(first, second)
    ws = parse_inputs(args.files)
    rule = ws.get(args.rule, "rule")
    match = ws.get(args.match, "morphism")
    if not isinstance(rule, ComposedRule):
        raise UsageError(f"compose needs a two-part rule, {args.rule!r} is a single rule")
    rule = _retag(rule, first.name)
    sq = rewrite_step(composed, rule, match)
    _emit(args, out, sq, f"compose {first.name};{second.name}")
    direct = DIRECT_ROUTES.get((first.name, second.name))
    if direct is None:
        return 1 if is_undefined(sq) else 0
    l, r = rule.first.arrow, rule.second.arrow
    other = dpo_step(l, r, match) if direct == "dpo" else sqpo_step(int(direct[-1]), l, r, match)
    if is_undefined(sq) or is_undefined(other):
        agree = is_undefined(sq) and is_undefined(other)
    else:
        agree = composed.square_equivalent(sq, other)
    out.write(f"direct {direct} route: {'agrees' if agree else 'disagrees'}\n")
    if not agree:
        return 1
    return 1 if is_undefined(sq) else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "dot"), default="text")
    common.add_argument("--bound", type=int, default=None,
                        help=f"oracle target size (default: derived size + 2, or ${BOUND_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--exhaustive", action="store_true",
                        help="also try every small graph as an oracle target")

    parser = argparse.ArgumentParser(prog="catrewrite",
                                     description="Categorical graph rewriting toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("step", parents=[common], help="apply one rule at one match")
    p.add_argument("files", nargs="+")
    p.add_argument("--system", required=True)
    p.add_argument("--rule", required=True)
    p.add_argument("--match", required=True)
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("derive", parents=[common], help="run a derivation script")
    p.add_argument("files", nargs="+")
    p.add_argument("--script", required=True)
    p.add_argument("--system")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("functoriality", parents=[common],
                       help="check identity and composition laws")
    p.add_argument("files", nargs="*")
    p.add_argument("--system", required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--rule")
    p.add_argument("--f1")
    p.add_argument("--f2")
    p.set_defaults(func=cmd_functoriality)

    p = sub.add_parser("verify", parents=[common], help="run an oracle on a constructed square")
    p.add_argument("files", nargs="+")
    p.add_argument("--system", required=True)
    p.add_argument("--rule", required=True)
    p.add_argument("--match", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gc", parents=[common], help="garbage-removal reports")
    p.add_argument("what", choices=("counterexample",))
    p.set_defaults(func=cmd_gc)

    p = sub.add_parser("compose", parents=[common],
                       help="run two systems in sequence and cross-check the direct route")
    p.add_argument("files", nargs="+")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--rule", required=True)
    p.add_argument("--match", required=True)
    p.set_defaults(func=cmd_compose)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.bound is None:
            args.bound = _default_bound()
        if args.command == "functoriality" and args.files and not (args.rule and args.f1
                                                                   and args.f2):
            raise UsageError("replaying needs --rule, --f1 and --f2")
        return args.func(args, out)
    except (ParseError, UsageError, RewriteError, GraphError, MorphismError,
            EnumerationCapError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) else str(e)
        print(f"catrewrite: error: {msg}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
