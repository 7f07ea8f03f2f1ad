"""Independent re-implementations used as test oracles.

These deliberately avoid the package's bitset helpers: poles are Python sets
of ``(term, stack)`` pairs and every axiom is spelled out as a nested loop.
"""
import itertools


def axioms_by_brute_force(p):
    """``{axiom: holds}`` for S1-S5 and the strong converse of S1."""
    n, m = len(p.rl.terms), len(p.rl.stacks)
    pole = set(p.rl.pole)
    T, P = range(n), range(m)
    app, push, save = p.app, p.push, p.save

    def inside(t, pi):
        return (t, pi) in pole

    s1 = strong = True
    for t, s, pi in itertools.product(T, T, P):
        a, b = inside(t, push[s][pi]), inside(app[t][s], pi)
        s1 &= (not a) or b
        strong &= (not b) or a
    s2 = all(inside(p.K, push[t][push[s][pi]])
             for t, s, pi in itertools.product(T, T, P) if inside(t, pi))
    s3 = all(inside(p.S, push[t][push[s][push[u][pi]]])
             for t, s, u, pi in itertools.product(T, T, T, P)
             if inside(app[app[t][u]][app[s][u]], pi))
    s4 = all(inside(p.cc, push[t][pi])
             for t, pi in itertools.product(T, P) if inside(t, push[save[pi]][pi]))
    s5 = all(inside(save[pi], push[t][pi2])
             for t, pi, pi2 in itertools.product(T, P, P) if inside(t, pi))
    return {"S1": s1, "S2": s2, "S3": s3, "S4": s4, "S5": s5, "strong": strong}


def closed_sets_by_brute_force(rl):
    """All stack sets ``X`` (as frozensets) with ``(perp X) perp = X``."""
    n, m = len(rl.terms), len(rl.stacks)
    pole = set(rl.pole)
    out = set()
    for r in range(m + 1):
        for X in itertools.combinations(range(m), r):
            L = {t for t in range(n) if all((t, q) in pole for q in X)}
            back = frozenset(q for q in range(m) if all((t, q) in pole for t in L))
            if back == frozenset(X):
                out.add(back)
    return out
