"""Command-line front end: ``rlz <group> <command> ...``.

Exit status is 0 when every checked law holds, 1 when some law fails and 2
on usage, parse or schema errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import hol, kam, poly, tripos
from .errors import (
    InvalidPaks,
    KindError,
    ParseError,
    RealizabilityError,
    RuleMismatch,
    SchemaError,
    UnboundVariable,
)
from .instance import dumps, paks_from_doc, parse_instance
from .rl_core import enumerate_closed_stack_sets
from .oca_core import LAWS, OBSERVATIONS, check_oca_laws, derive_oca, oca_from_json, oca_to_json
from .paks import FiniteAks, check_axioms, random_paks

SCHEMA = """\
instance file (JSON):
  terms   [name, ...]                 non-empty, distinct
  stacks  [name, ...]                 non-empty, distinct
  app     |terms| x |terms| matrix of term names
  push    |terms| x |stacks| matrix of stack names
  save    [term name] * |stacks|
  K, S, cc                            term names
  pole    [[term, stack], ...]
  qp      [term name, ...]            optional quasi-proofs
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True, default=_jsonable))
    else:
        for line in text_lines:
            print(line)


def _jsonable(x):
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _table(rows):
    """Left-aligned text table from a list of tuples."""
    rows = [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _load_oca(path):
    """An OCA from a serialized table file or by deriving it from an instance file."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, (exc.lineno, exc.colno)) from None
    if isinstance(doc, dict) and "leq" in doc:
        return oca_from_json(doc)
    obj = paks_from_doc(doc)
    return derive_oca(obj)


# ---------------------------------------------------------------------------
# paks


def cmd_paks_check(args):
    obj = _read_instance(args.file)
    p = obj.paks if isinstance(obj, FiniteAks) else obj
    rep = check_axioms(p)
    names = ["S1", "S2", "S3", "S4", "S5", "strong", "S_eta"]
    rows = [("axiom", "status", "witness")]
    for n in names:
        r = rep[n]
        if n == "strong":
            status = "yes" if r.holds else "no"
        else:
            status = "pass" if r.holds else "FAIL"
        rows.append((n, status, "" if r.holds else json.dumps(r.witness)))
    payload = {"valid": rep.valid, "axioms": {n: {"holds": rep[n].holds, "witness": rep[n].witness} for n in names}}
    _emit(args, payload, _table(rows) + [f"valid: {rep.valid}"])
    return 0 if rep.valid and rep["S_eta"].holds else 1


def _read_instance(path):
    from .instance import loads
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    return loads(text)


def cmd_paks_derive(args):
    o = derive_oca(parse_instance(args.file))
    Path(args.out).write_text(json.dumps(oca_to_json(o), indent=1) + "\n")
    _emit(args, {"size": o.size, "out": args.out},
          [f"carrier size {o.size}; written to {args.out}"])
    return 0


def cmd_paks_generate(args):
    rng = random.Random(args.seed)
    for _attempt in range(args.attempts):
        p = random_paks(rng, args.terms, args.stacks, args.seeds)
        if p.valid and len(enumerate_closed_stack_sets(p.rl)) >= args.min_carrier:
            text = dumps(p, {"generator": "rlz paks generate", "seed": args.seed})
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return 0
    print(f"no instance with carrier >= {args.min_carrier} in {args.attempts} attempts", file=sys.stderr)
    return 1


# ---------------------------------------------------------------------------
# oca


def cmd_oca_check(args):
    o = _load_oca(args.file)
    if args.law == "all":
        names = list(LAWS) + list(OBSERVATIONS)
    else:
        if args.law not in LAWS and args.law not in OBSERVATIONS:
            raise UsageError(f"unknown law {args.law!r}; choose from {', '.join(list(LAWS) + list(OBSERVATIONS))}")
        names = [args.law]
    res = check_oca_laws(o, names)
    rows = [("law", "status", "cases", "witness")]
    failed = False
    for n, r in res.items():
        observed = n in OBSERVATIONS
        status = ("yes" if r.holds else "no") if observed else ("pass" if r.holds else "FAIL")
        failed |= not r.holds and not observed
        rows.append((n, status, r.cases, "" if r.holds else list(r.witness or ())))
    payload = {"size": o.size, "laws": {n: {"holds": r.holds, "cases": r.cases, "witness": r.witness,
                                            "required": n in LAWS} for n, r in res.items()}}
    _emit(args, payload, [f"carrier size {o.size}"] + _table(rows))
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# kam


def cmd_kam_run(args):
    p = kam.parse_process(args.process)
    tr = kam.run(p, args.max_steps)
    lines = [f"{i:>4}  {r or '':<3} {kam.render_process(q)}"
             for i, (r, q) in enumerate(zip((None,) + tr.rules, tr.processes))]
    lines.append(f"status: {tr.status.value} after {tr.steps} step(s)")
    payload = {"trace": [kam.render_process(q) for q in tr.processes], "rules": list(tr.rules),
               "status": tr.status.value, "steps": tr.steps}
    _emit(args, payload, lines)
    return 0


def cmd_kam_pole(args):
    bp = kam.BoundedPole(kam.parse_final_set(args.final), args.max_steps)
    p = kam.parse_process(args.member)
    r = kam.pole_member(bp, p)
    _emit(args, {"process": kam.render_process(p), "member": r.value}, [r.value])
    return 0


def cmd_kam_counterexample(args):
    rep = kam.counterexample_check(args.max_size, args.max_steps)
    lines = [f"quasi-proofs checked: {rep.checked}",
             f"realizing both constants: {len(rep.both)}"]
    lines += [f"  {kam.compact(q)}" for q in rep.both]
    lines.append(f"undecided within {args.max_steps} steps: {len(rep.unknown)}")
    lines += [f"  {kam.compact(q)}" for q in rep.unknown]
    payload = {"max_size": rep.max_size, "checked": rep.checked,
               "both": [kam.compact(q) for q in rep.both],
               "unknown": [kam.compact(q) for q in rep.unknown]}
    _emit(args, payload, lines)
    return 0 if rep.empty else 1


# ---------------------------------------------------------------------------
# poly, tripos, hol


def cmd_poly_compile(args):
    t = poly.parse_poly(args.term)
    out = poly.render(t)
    _emit(args, {"input": args.term, "compiled": out}, [out])
    return 0


def cmd_tripos_check(args):
    o = _load_oca(args.file)
    res = tripos.check_tripos(o, args.max_index, args.beck_chevalley)
    rows = [("theorem", "status", "cases")]
    rows += [(n, "pass" if r.holds else "FAIL", r.cases) for n, r in res.items()]
    payload = {n: {"holds": r.holds, "cases": r.cases, "witness": r.witness} for n, r in res.items()}
    _emit(args, payload, [f"carrier size {o.size}, index sets up to {args.max_index}"] + _table(rows))
    return 0 if all(r.holds for r in res.values()) else 1


def _load_model(path):
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, (exc.lineno, exc.colno)) from None
    if "oca" in doc:
        o = oca_from_json(doc["oca"])
    elif "instance" in doc:
        o = _load_oca(Path(path).parent / doc["instance"])
    else:
        raise SchemaError("model", "needs an 'oca' table or an 'instance' path")
    return hol.model_from_doc(doc, o)


def cmd_hol_check(args):
    root = hol.load_derivation(args.derivation)
    seq = hol.check_derivation(root)
    m = _load_model(args.model)
    sat = hol.satisfies(m, seq)
    lines = [f"derivation ok: {seq}", f"satisfied: {sat.holds} ({sat.cases} cases)"]
    if not sat.holds:
        lines.append(f"counterexample: {sat.counterexample}")
    payload = {"sequent": str(seq), "rules": sorted(hol.rules_used(root)),
               "satisfied": sat.holds, "cases": sat.cases, "counterexample": sat.counterexample}
    _emit(args, payload, lines)
    return 0 if sat.holds else 1


# ---------------------------------------------------------------------------


def build_parser():
    def options(default):
        # the subcommand copies must not overwrite a value given before the group
        p = _Parser(add_help=False)
        p.add_argument("--json", action="store_true", default=default(False), help="machine-readable report")
        p.add_argument("--seed", type=int, default=default(0), help="RNG seed for randomized commands")
        return p

    common = options(lambda _: argparse.SUPPRESS)
    ap = _Parser(prog="rlz", description="Finite classical realizability workbench.",
                 parents=[options(lambda v: v)])
    groups = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = groups.add_parser("paks", help="Krivine structure instances").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("check", parents=[common])
    c.add_argument("file")
    c.set_defaults(fn=cmd_paks_check)
    c = g.add_parser("derive-oca", parents=[common])
    c.add_argument("file")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_paks_derive)
    c = g.add_parser("generate", parents=[common], help="random valid instance (generate and test)")
    c.add_argument("--terms", type=int, default=4)
    c.add_argument("--stacks", type=int, default=3)
    c.add_argument("--seeds", type=int, default=1, help="pole seed processes")
    c.add_argument("--min-carrier", type=int, default=1)
    c.add_argument("--attempts", type=int, default=1000)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_paks_generate)

    g = groups.add_parser("oca", help="algebra laws").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("check", parents=[common])
    c.add_argument("file", help="instance file or serialized algebra")
    c.add_argument("--law", default="all")
    c.set_defaults(fn=cmd_oca_check)

    g = groups.add_parser("kam", help="Krivine machine").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("run", parents=[common])
    c.add_argument("process")
    c.add_argument("--max-steps", type=int, default=100)
    c.set_defaults(fn=cmd_kam_run)
    c = g.add_parser("pole", parents=[common])
    c.add_argument("--final", required=True, help='processes separated by ";"')
    c.add_argument("--member", required=True)
    c.add_argument("--max-steps", type=int, default=1000)
    c.set_defaults(fn=cmd_kam_pole)
    c = g.add_parser("counterexample", parents=[common])
    c.add_argument("--max-size", type=int, default=5)
    c.add_argument("--max-steps", type=int, default=10_000)
    c.set_defaults(fn=cmd_kam_counterexample)

    g = groups.add_parser("poly", help="bracket abstraction").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("compile", parents=[common])
    c.add_argument("term")
    c.set_defaults(fn=cmd_poly_compile)

    g = groups.add_parser("tripos", help="predicate layer").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("check", parents=[common])
    c.add_argument("file", help="instance file or serialized algebra")
    c.add_argument("--max-index", type=int, default=2)
    c.add_argument("--beck-chevalley", action="store_true")
    c.set_defaults(fn=cmd_tripos_check)

    g = groups.add_parser("hol", help="typing derivations").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("check", parents=[common])
    c.add_argument("derivation")
    c.add_argument("--model", required=True)
    c.set_defaults(fn=cmd_hol_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print(ap.format_usage(), file=sys.stderr, end="")
        return 2
    except InvalidPaks as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return 1
    except (RuleMismatch, KindError, UnboundVariable) as exc:
        print(f"derivation rejected: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(SCHEMA, file=sys.stderr, end="")
        return 2
    except RealizabilityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
