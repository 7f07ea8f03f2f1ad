"""Offline search for small consistent PAKS instances (developer tool).

Encodes S1-S5, a quasi-proof set closed under application that realizes no
full stack set, and a few incomparable orthogonal sets, then hands the
problem to z3.  Found instances are re-checked with the package's own
``check_axioms`` before being written out.  Requires ``z3-solver``, which is
not a runtime dependency.
"""
import argparse
import itertools
import random
import sys
from pathlib import Path

import z3

from realizability.rl_core import RealizabilityLattice, enumerate_closed_stack_sets
from realizability.instance import dumps
from realizability.paks import FinitePaks, trivial_paks


def solve(n, m, n_incomparable, seed, extra=None):
    T, P = range(n), range(m)
    app = [[z3.Int(f"a{t}_{s}") for s in T] for t in T]
    push = [[z3.Int(f"p{t}_{q}") for q in P] for t in T]
    save = [z3.Int(f"v{q}") for q in P]
    pole = [[z3.Bool(f"o{t}_{q}") for q in P] for t in T]
    qp = [z3.Bool(f"q{t}") for t in T]
    K, S, cc = 0, 1, 2
    sol = z3.Solver()
    sol.set("random_seed", seed)
    for v in itertools.chain(*app):
        sol.add(0 <= v, v < n)
    for v in itertools.chain(*push):
        sol.add(0 <= v, v < m)
    for v in save:
        sol.add(0 <= v, v < n)

    def ap(x, y):
        # x, y may be symbolic
        return _sel2(app, x, y, n, n)

    def pu(x, y):
        return _sel2(push, x, y, n, m)

    def orth(x, y):
        return _sel2(pole, x, y, n, m)

    for t in T:
        for s in T:
            for q in P:
                sol.add(z3.Implies(orth(t, push[s][q]), orth(app[t][s], q)))
                sol.add(z3.Implies(pole[t][q], orth(K, pu(t, push[s][q]))))
                for u in T:
                    sol.add(z3.Implies(orth(ap(app[t][u], app[s][u]), q),
                                       orth(S, pu(t, pu(s, push[u][q])))))
        for q in P:
            sol.add(z3.Implies(orth(t, pu(save[q], q)), orth(cc, push[t][q])))
            for q2 in P:
                sol.add(z3.Implies(pole[t][q], orth(save[q], push[t][q2])))
    sol.add(qp[K], qp[S], qp[cc])
    for t in T:
        for s in T:
            sol.add(z3.Implies(z3.And(qp[t], qp[s]), _sel1(qp, app[t][s], n)))
        sol.add(z3.Implies(qp[t], z3.Or([z3.Not(pole[t][q]) for q in P])))
    # incomparable orthogonal sets on the last n_incomparable terms
    chosen = list(range(n - n_incomparable, n))
    for a, b in itertools.permutations(chosen, 2):
        sol.add(z3.Or([z3.And(pole[a][q], z3.Not(pole[b][q])) for q in P]))
    if extra:
        extra(sol, app, push, save, pole, qp)
    if sol.check() != z3.sat:
        return None
    mdl = sol.model()
    ev = lambda e: mdl.eval(e, model_completion=True)
    return dict(
        app=[[ev(v).as_long() for v in row] for row in app],
        push=[[ev(v).as_long() for v in row] for row in push],
        save=[ev(v).as_long() for v in save],
        pole=sorted([t, q] for t in T for q in P if z3.is_true(ev(pole[t][q]))),
        K=K, S=S, cc=cc,
    )


def _sel1(arr, x, n):
    if isinstance(x, int):
        return arr[x]
    out = arr[n - 1]
    for i in range(n - 2, -1, -1):
        out = z3.If(x == i, arr[i], out)
    return out


def _sel2(arr, x, y, n, m):
    if isinstance(x, int):
        return _sel1(arr[x], y, m)
    out = _sel1(arr[n - 1], y, m)
    for i in range(n - 2, -1, -1):
        out = z3.If(x == i, _sel1(arr[i], y, m), out)
    return out


def to_paks(d, n, m):
    terms = ("K", "S", "cc") + tuple(f"t{i}" for i in range(3, n))
    rl = RealizabilityLattice(terms, tuple(f"p{j}" for j in range(m)),
                              frozenset(map(tuple, d["pole"])))
    return FinitePaks(rl, d["app"], d["push"], d["save"], d["K"], d["S"], d["cc"])


def pin_app(seed, n, m, count=4):
    """Fix a few random application entries to diversify solver models."""
    rng = random.Random(seed * 100 + n * 10 + m)
    pins = [(rng.randrange(3, n), rng.randrange(n), rng.randrange(n)) for _ in range(count)]

    def extra(sol, app, push, save, pole, qp):
        for t, s, v in pins:
            sol.add(app[t][s] == v)
    return extra


def chain(n, m):
    """Every orthogonal set is the full set, term 3's or term 4's (a chain)."""
    def extra(sol, app, push, save, pole, qp):
        P = range(m)
        same = lambda a, b: z3.And([pole[a][q] == pole[b][q] for q in P])
        sol.add(z3.Or([z3.Not(pole[3][q]) for q in P]))
        sol.add(z3.And([z3.Implies(pole[4][q], pole[3][q]) for q in P]))
        sol.add(z3.Not(same(3, 4)))
        for t in range(n):
            sol.add(z3.Or(z3.And(pole[t]), same(t, 3), same(t, 4)))
    return extra


# name -> (n_terms, n_stacks, incomparable, z3 seed, constraint family)
LIBRARY = {
    "chain_6x3": (6, 3, 0, 1, "chain"),
    "gen_6x4": (6, 4, 2, 0, None),
    "gen_7x4": (7, 4, 2, 2, "pins"),
    "gen_7x5": (7, 5, 3, 3, "pins"),
}


def build(name):
    n, m, inc, seed, family = LIBRARY[name]
    extra = {"chain": chain(n, m), "pins": pin_app(seed, n, m), None: None}[family]
    d = solve(n, m, inc, seed, extra)
    p = to_paks(d, n, m)
    assert p.valid, p.report.failures()
    meta = {"generator": "scripts/find_fixtures.py", "name": name, "n_terms": n,
            "n_stacks": m, "incomparable": inc, "seed": seed, "constraints": family,
            "z3": z3.get_version_string()}
    return p, meta


def trivial_library():
    return {
        "empty_1x1": (trivial_paks(1, 1), {"name": "empty_1x1", "construction": "empty pole"}),
        "full_1x1": (trivial_paks(1, 1, full=True), {"name": "full_1x1", "construction": "full pole"}),
        "empty_3x2": (trivial_paks(3, 2), {"name": "empty_3x2", "construction": "empty pole"}),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    sub = ap.add_subparsers(dest="cmd", required=True)
    one = sub.add_parser("search")
    one.add_argument("n", type=int)
    one.add_argument("m", type=int)
    one.add_argument("--incomparable", type=int, default=2)
    one.add_argument("--seed", type=int, default=0)
    lib = sub.add_parser("library")
    lib.add_argument("outdir")
    args = ap.parse_args(argv)
    if args.cmd == "search":
        d = solve(args.n, args.m, args.incomparable, args.seed)
        if d is None:
            print("unsat", file=sys.stderr)
            return 1
        p = to_paks(d, args.n, args.m)
        assert p.valid, p.report.failures()
        print(len(enumerate_closed_stack_sets(p.rl)), "closed sets", file=sys.stderr)
        print(dumps(p), end="")
        return 0
    out = Path(args.outdir)
    entries = trivial_library()
    for name in LIBRARY:
        entries[name] = build(name)
    for name, (p, meta) in entries.items():
        (out / f"{name}.json").write_text(dumps(p, meta))
        print(name, len(enumerate_closed_stack_sets(p.rl)), "closed sets")
    return 0


if __name__ == "__main__":
    sys.exit(main())
