"""Tabular pre-abstract and abstract Krivine structures.

A :class:`FinitePaks` stores ``app``, ``push`` and ``save`` as total index
tables over a :class:`~realizability.lattice.RealizabilityLattice`.  Every
axiom is a single-antecedent implication between pole memberships, so the
checks below are plain quantifier loops over the finite carriers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import InvalidPaks, SchemaError
from .rl_core import (
    RealizabilityLattice,
    app_image,
    bits_of,
    members,
    perp_of_stacks,
    perp_of_terms,
)

AXIOMS = ("S1", "S2", "S3", "S4", "S5")


@dataclass(frozen=True)
class AxiomResult:
    holds: bool
    witness: Optional[dict] = None


@dataclass(frozen=True)
class AxiomReport:
    results: dict

    @property
    def valid(self) -> bool:
        return all(self.results[a].holds for a in AXIOMS)

    @property
    def strong(self) -> bool:
        return self.results["strong"].holds

    def failures(self):
        return {name: r.witness for name, r in self.results.items() if not r.holds}

    def __getitem__(self, name):
        return self.results[name]


def _table(rows, n_rows, n_cols, bound, name):
    rows = tuple(tuple(int(v) for v in row) for row in rows)
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise SchemaError(name, f"expected a {n_rows}x{n_cols} table")
    if any(not 0 <= v < bound for r in rows for v in r):
        raise SchemaError(name, "entry out of range")
    return rows


@dataclass(frozen=True)
class FinitePaks:
    rl: RealizabilityLattice
    app: tuple
    push: tuple
    save: tuple
    K: int
    S: int
    cc: int

    def __post_init__(self):
        n, m = self.rl.n_terms, self.rl.n_stacks
        object.__setattr__(self, "app", _table(self.app, n, n, n, "app"))
        object.__setattr__(self, "push", _table(self.push, n, m, m, "push"))
        save = tuple(int(v) for v in self.save)
        if len(save) != m or any(not 0 <= v < n for v in save):
            raise SchemaError("save", f"expected {m} term indices")
        object.__setattr__(self, "save", save)
        for name in ("K", "S", "cc"):
            if not 0 <= getattr(self, name) < n:
                raise SchemaError(name, "term index out of range")

    @cached_property
    def report(self) -> AxiomReport:
        return check_axioms(self)

    @property
    def valid(self) -> bool:
        return self.report.valid

    def ap(self, *terms: int) -> int:
        """Left-associated application ``t1 t2 ... tn``."""
        acc = terms[0]
        for t in terms[1:]:
            acc = self.app[acc][t]
        return acc

    def pu(self, *items: int) -> int:
        """``t1 . t2 . ... . pi``: all but the last argument are terms."""
        *ts, pi = items
        for t in reversed(ts):
            pi = self.push[t][pi]
        return pi

    @property
    def I(self) -> int:
        return combinator_I(self)

    @property
    def E_eta(self) -> int:
        return combinator_E(self)

    def require_valid(self):
        rep = self.report
        for a in AXIOMS:
            if not rep[a].holds:
                raise InvalidPaks(a, rep[a].witness)
        return self


@dataclass(frozen=True)
class FiniteAks:
    paks: FinitePaks
    qp: int

    def __post_init__(self):
        p = self.paks
        for name in ("K", "S", "cc"):
            if not self.qp >> getattr(p, name) & 1:
                raise SchemaError("qp", f"{name} must be a quasi-proof")
        for t in members(self.qp):
            for u in members(self.qp):
                if not self.qp >> p.app[t][u] & 1:
                    raise SchemaError("qp", f"not closed under app: ({t}, {u})")

    @classmethod
    def minimal(cls, paks: FinitePaks) -> "FiniteAks":
        return cls(paks, minimal_qp(paks))

    @property
    def rl(self):
        return self.paks.rl


def minimal_qp(p: FinitePaks) -> int:
    """Closure of ``{K, S, cc}`` under application."""
    qp = bits_of((p.K, p.S, p.cc))
    while True:
        grown = qp | app_image(p.app, qp, qp)
        if grown == qp:
            return qp
        qp = grown


def combinator_I(p: FinitePaks) -> int:
    return p.ap(p.S, p.K, p.K)


def combinator_E(p: FinitePaks) -> int:
    return p.app[p.S][p.app[p.K][combinator_I(p)]]


def check_axioms(p: FinitePaks) -> AxiomReport:
    rl, app, push, save = p.rl, p.app, p.push, p.save
    orth = rl.orth
    n, m = rl.n_terms, rl.n_stacks
    T, P = range(n), range(m)
    results = {}

    def first(gen):
        for w in gen:
            return AxiomResult(False, w)
        return AxiomResult(True)

    results["S1"] = first(
        dict(t=t, s=s, pi=pi)
        for t in T for s in T for pi in P
        if orth(t, push[s][pi]) and not orth(app[t][s], pi)
    )
    results["strong"] = first(
        dict(t=t, s=s, pi=pi)
        for t in T for s in T for pi in P
        if orth(app[t][s], pi) and not orth(t, push[s][pi])
    )
    results["S2"] = first(
        dict(t=t, s=s, pi=pi)
        for t in T for pi in P if orth(t, pi)
        for s in T if not orth(p.K, push[t][push[s][pi]])
    )
    results["S3"] = first(
        dict(t=t, s=s, u=u, pi=pi)
        for t in T for s in T for u in T for pi in P
        if orth(app[app[t][u]][app[s][u]], pi)
        and not orth(p.S, push[t][push[s][push[u][pi]]])
    )
    results["S4"] = first(
        dict(t=t, pi=pi)
        for t in T for pi in P
        if orth(t, push[save[pi]][pi]) and not orth(p.cc, push[t][pi])
    )
    results["S5"] = first(
        dict(t=t, pi=pi, pi2=pi2)
        for t in T for pi in P if orth(t, pi)
        for pi2 in P if not orth(save[pi], push[t][pi2])
    )
    results["S_eta"] = _s_eta_result(p)
    return AxiomReport(results)


def _s_eta_result(p: FinitePaks) -> AxiomResult:
    E = combinator_E(p)
    orth = p.rl.orth
    for t in range(p.rl.n_terms):
        Et = p.app[E][t]
        for s in range(p.rl.n_terms):
            ts = p.app[t][s]
            for pi in range(p.rl.n_stacks):
                if orth(ts, pi) and not orth(Et, p.push[s][pi]):
                    return AxiomResult(False, dict(t=t, s=s, pi=pi))
    return AxiomResult(True)


def check_s_eta(p: FinitePaks):
    """``ts`` orthogonal to ``pi`` implies ``E t`` orthogonal to ``s.pi``.

    Returns ``(holds, witness)``; the witness is the offending triple.
    """
    r = _s_eta_result(p)
    return r.holds, r.witness


def check_weaker_conditions(p: FinitePaks) -> dict:
    """The single-process consequences of S2-S5 obtained through S1."""
    orth = p.rl.orth
    T, P = range(p.rl.n_terms), range(p.rl.n_stacks)
    ap, pu, save = p.ap, p.pu, p.save
    return {
        "K": all(orth(ap(p.K, t, s), pi) for t in T for pi in P if orth(t, pi) for s in T),
        "S": all(
            orth(ap(p.S, t, s, u), pi)
            for t in T for s in T for u in T for pi in P
            if orth(ap(ap(t, u), ap(s, u)), pi)
        ),
        "cc": all(orth(ap(p.cc, t), pi) for t in T for pi in P if orth(t, pu(save[pi], pi))),
        "save": all(
            orth(ap(save[pi], t), pi2) for t in T for pi in P if orth(t, pi) for pi2 in P
        ),
    }


def diamond(p: FinitePaks, P: int, Q: int) -> int:
    """``(perp P)(perp Q)`` pushed back to a closed stack set."""
    rl = p.rl
    return perp_of_terms(rl, app_image(p.app, perp_of_stacks(rl, P), perp_of_stacks(rl, Q)))


def implication_graph(app, push, save, K, S, cc, n, m):
    """Successor lists over processes ``t * pi`` (encoded ``t * m + pi``).

    A pole satisfies S1-S5 exactly when it is closed under these edges.
    """
    succ = [set() for _ in range(n * m)]

    def edge(t1, p1, t2, p2):
        succ[t1 * m + p1].add(t2 * m + p2)

    for t in range(n):
        for s in range(n):
            for pi in range(m):
                edge(t, push[s][pi], app[t][s], pi)                       # S1
                edge(t, pi, K, push[t][push[s][pi]])                      # S2
                for u in range(n):
                    edge(app[app[t][u]][app[s][u]], pi,
                         S, push[t][push[s][push[u][pi]]])                # S3
        for pi in range(m):
            edge(t, push[save[pi]][pi], cc, push[t][pi])                  # S4
            for pi2 in range(m):
                edge(t, pi, save[pi], push[t][pi2])                       # S5
    return succ


def upward_closure(succ, seeds):
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        x = stack.pop()
        for y in succ[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def random_paks(rng: random.Random, n_terms: int, n_stacks: int, n_seeds: int = 1,
                distinct_combinators: bool = True) -> FinitePaks:
    """Random tables with a pole generated as the upward closure of random seeds.

    The result always satisfies S1-S5 (and is re-checked by the caller via
    :func:`check_axioms`); it may be degenerate (empty or full pole).
    """
    n, m = n_terms, n_stacks
    app = [[rng.randrange(n) for _ in range(n)] for _ in range(n)]
    push = [[rng.randrange(m) for _ in range(m)] for _ in range(n)]
    save = [rng.randrange(n) for _ in range(m)]
    if distinct_combinators and n >= 3:
        K, S, cc = rng.sample(range(n), 3)
    else:
        K, S, cc = (rng.randrange(n) for _ in range(3))
    succ = implication_graph(app, push, save, K, S, cc, n, m)
    seeds = [rng.randrange(n * m) for _ in range(n_seeds)]
    closed = upward_closure(succ, seeds)
    pole = frozenset(divmod(x, m) for x in closed)
    rl = RealizabilityLattice(tuple(f"t{i}" for i in range(n)),
                              tuple(f"p{j}" for j in range(m)), pole)
    return FinitePaks(rl, app, push, save, K, S, cc)


def random_tables(rng: random.Random, n_terms: int, n_stacks: int, pole_density=0.5) -> FinitePaks:
    """Unconstrained random tables and pole; most of these violate some axiom."""
    n, m = n_terms, n_stacks
    pole = frozenset((t, p) for t in range(n) for p in range(m) if rng.random() < pole_density)
    rl = RealizabilityLattice(tuple(f"t{i}" for i in range(n)),
                              tuple(f"p{j}" for j in range(m)), pole)
    return FinitePaks(
        rl,
        [[rng.randrange(n) for _ in range(n)] for _ in range(n)],
        [[rng.randrange(m) for _ in range(m)] for _ in range(n)],
        [rng.randrange(n) for _ in range(m)],
        rng.randrange(n), rng.randrange(n), rng.randrange(n),
    )


def trivial_paks(n_terms: int = 1, n_stacks: int = 1, full: bool = False) -> FinitePaks:
    """Constant tables with an empty (or full) pole; valid for any sizes."""
    n, m = n_terms, n_stacks
    pole = frozenset((t, p) for t in range(n) for p in range(m)) if full else frozenset()
    rl = RealizabilityLattice(tuple(f"T{i}" for i in range(n)),
                              tuple(f"P{j}" for j in range(m)), pole)
    return FinitePaks(rl, [[0] * n for _ in range(n)], [[0] * m for _ in range(n)],
                      [0] * m, 0, min(1, n - 1), min(2, n - 1))
