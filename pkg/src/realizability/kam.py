"""A small-step Krivine machine over combinatory terms.

Text syntax: application by juxtaposition (left associative), push by
``.``, process separator ``*``, saved stacks as ``k[...]``::

    S (K (S K K)) * t . a

``K``, ``S`` and ``cc`` are the instructions; any other identifier is a
variable in term position and a stack constant at the bottom of a stack.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from . import _limits
from .errors import CapacityExceeded, ParseError

INSTRUCTIONS = ("K", "S", "cc")


class _Node:
    """Structural hash computed once; runs hash every visited process."""

    __slots__ = ()

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_h", h)
            return h


@dataclass(frozen=True, eq=True)
class TVar(_Node):
    __hash__ = _Node.__hash__
    name: str


@dataclass(frozen=True, eq=True)
class TConst(_Node):
    __hash__ = _Node.__hash__
    name: str  # one of INSTRUCTIONS


@dataclass(frozen=True, eq=True)
class Saved(_Node):
    __hash__ = _Node.__hash__
    stack: "SynStack"


@dataclass(frozen=True, eq=True)
class TApp(_Node):
    __hash__ = _Node.__hash__
    fun: "SynTerm"
    arg: "SynTerm"


@dataclass(frozen=True, eq=True)
class SConst(_Node):
    __hash__ = _Node.__hash__
    name: str


@dataclass(frozen=True, eq=True)
class Push(_Node):
    __hash__ = _Node.__hash__
    head: "SynTerm"
    tail: "SynStack"


SynTerm = Union[TVar, TConst, Saved, TApp]
SynStack = Union[SConst, Push]

K, S, CC = (TConst(n) for n in INSTRUCTIONS)


@dataclass(frozen=True, eq=True)
class Process(_Node):
    __hash__ = _Node.__hash__
    term: SynTerm
    stack: SynStack

    def __str__(self):
        return render_process(self)


def tapp(*ts: SynTerm) -> SynTerm:
    acc = ts[0]
    for t in ts[1:]:
        acc = TApp(acc, t)
    return acc


def push(*items) -> SynStack:
    """``push(t1, t2, pi)`` is the stack ``t1 . t2 . pi``."""
    *ts, pi = items
    for t in reversed(ts):
        pi = Push(t, pi)
    return pi


I_TERM = tapp(S, K, K)
E_TERM = TApp(S, TApp(K, I_TERM))


# ---------------------------------------------------------------------------
# reduction


def _cells(pi: SynStack, n: int):
    """First ``n`` cells of ``pi`` and the remaining stack, or ``None``."""
    out = []
    for _ in range(n):
        if not isinstance(pi, Push):
            return None
        out.append(pi.head)
        pi = pi.tail
    return out, pi


def _r1(p):
    if isinstance(p.term, TApp):
        return Process(p.term.fun, Push(p.term.arg, p.stack))


def _r2(p):
    if p.term == K and (c := _cells(p.stack, 2)):
        (t, _s), pi = c
        return Process(t, pi)


def _r3(p):
    if p.term == S and (c := _cells(p.stack, 3)):
        (t, s, u), pi = c
        return Process(TApp(TApp(t, u), TApp(s, u)), pi)


def _r4(p):
    if p.term == CC and isinstance(p.stack, Push):
        pi = p.stack.tail
        return Process(p.stack.head, Push(Saved(pi), pi))


def _r5(p):
    if isinstance(p.term, Saved) and isinstance(p.stack, Push):
        return Process(p.stack.head, p.term.stack)


RULES = (("R2", _r2), ("R3", _r3), ("R4", _r4), ("R5", _r5), ("R1", _r1))


def matching_rules(p: Process) -> list:
    return [name for name, rule in RULES if rule(p) is not None]


class Stuck:
    """Returned by :func:`step` when no rule applies."""

    def __repr__(self):
        return "Stuck"


STUCK = Stuck()


def step(p: Process):
    """One reduction step, or ``STUCK``."""
    assert len(matching_rules(p)) <= 1, f"overlapping rules at {p}"
    for _name, rule in RULES:
        q = rule(p)
        if q is not None:
            return q
    return STUCK


def step_rule(p: Process):
    for name, rule in RULES:
        q = rule(p)
        if q is not None:
            return name, q
    return None, STUCK


class Status(enum.Enum):
    STUCK = "stuck"
    BUDGET = "budget-exhausted"
    HIT = "hit"
    CYCLE = "cycle"


@dataclass(frozen=True)
class Trace:
    processes: tuple
    rules: tuple
    status: Status

    @property
    def last(self) -> Process:
        return self.processes[-1]

    @property
    def steps(self) -> int:
        return len(self.processes) - 1


def run(p: Process, max_steps: int, final: Optional[Callable[[Process], bool]] = None,
        detect_cycles: bool = False) -> Trace:
    """Iterate :func:`step`.  With ``detect_cycles`` a repeated process stops
    the run with status ``CYCLE``; the machine is deterministic, so such a
    run never reaches anything it has not already visited."""
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    procs, rules = [p], []
    seen = {p}
    while True:
        if final is not None and final(p):
            return Trace(tuple(procs), tuple(rules), Status.HIT)
        name, q = step_rule(p)
        if q is STUCK:
            return Trace(tuple(procs), tuple(rules), Status.STUCK)
        if len(rules) == max_steps:
            return Trace(tuple(procs), tuple(rules), Status.BUDGET)
        procs.append(q)
        rules.append(name)
        if detect_cycles:
            if q in seen:
                return Trace(tuple(procs), tuple(rules), Status.CYCLE)
            seen.add(q)
        p = q


# ---------------------------------------------------------------------------
# bounded poles


class Membership(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BoundedPole:
    """Processes reducing into ``final_set`` within ``max_steps`` steps."""

    final_set: frozenset
    max_steps: int = 1000

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        object.__setattr__(self, "final_set", frozenset(self.final_set))


def pole_member(bp: BoundedPole, p: Process, max_steps: Optional[int] = None) -> Membership:
    budget = bp.max_steps if max_steps is None else max_steps
    tr = run(p, budget, bp.final_set.__contains__, detect_cycles=True)
    return {Status.HIT: Membership.YES, Status.STUCK: Membership.NO, Status.CYCLE: Membership.NO,
            Status.BUDGET: Membership.UNKNOWN}[tr.status]


# ---------------------------------------------------------------------------
# two-constant counterexample


def quasi_proofs(max_size: int, limit: Optional[int] = None) -> list:
    """Closed terms over K, S, cc with at most ``max_size`` leaves."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    limit = _limits.max_enum(limit)
    by_size = {1: [K, S, CC]}
    total = 3
    for n in range(2, max_size + 1):
        terms = []
        for left in range(1, n):
            for a, b in itertools.product(by_size[left], by_size[n - left]):
                terms.append(TApp(a, b))
        total += len(terms)
        if total > limit:
            raise CapacityExceeded(f"more than {limit} quasi-proofs of size <= {max_size}")
        by_size[n] = terms
    return [t for n in sorted(by_size) for t in by_size[n]]


def is_quasi_proof(t: SynTerm) -> bool:
    if isinstance(t, TConst):
        return True
    if isinstance(t, TApp):
        return is_quasi_proof(t.fun) and is_quasi_proof(t.arg)
    return False


@dataclass(frozen=True)
class CounterexampleReport:
    max_size: int
    checked: int
    both: tuple       # quasi-proofs realizing both constants
    unknown: tuple    # runs that exhausted the step budget

    @property
    def empty(self) -> bool:
        return not self.both


def counterexample_check(max_size: int, max_steps: int = 10_000, alpha="a", beta="b",
                         limit: Optional[int] = None) -> CounterexampleReport:
    """Search quasi-proofs ``Q`` with ``Q * alpha`` and ``Q * beta`` both in the pole
    generated by ``{S * alpha, K * beta}``."""
    a, b = SConst(alpha), SConst(beta)
    bp = BoundedPole({Process(S, a), Process(K, b)}, max_steps)
    both, unknown = [], []
    qs = quasi_proofs(max_size, limit)
    for q in qs:
        ra, rb = pole_member(bp, Process(q, a)), pole_member(bp, Process(q, b))
        if ra is Membership.YES and rb is Membership.YES:
            both.append(q)
        elif Membership.UNKNOWN in (ra, rb) and Membership.NO not in (ra, rb):
            unknown.append(q)
    return CounterexampleReport(max_size, len(qs), tuple(both), tuple(unknown))


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(?P<lp>\()|(?P<rp>\))|(?P<lb>k\[)|(?P<rb>\])|(?P<dot>\.)|(?P<star>\*)|(?P<id>[A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    out.append((None, None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def term(self):
        items = []
        while self.peek()[0] in ("id", "lp", "lb"):
            items.append(self.atom())
        if not items:
            tok = self.peek()
            raise ParseError(f"expected a term, got {tok[1]!r}", tok[2])
        return tapp(*items)

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "lp":
            self.take("lp")
            t = self.term()
            self.take("rp")
            return t
        if kind == "lb":
            self.take("lb")
            pi = self.stack()
            self.take("rb")
            return Saved(pi)
        self.take("id")
        return TConst(val) if val in INSTRUCTIONS else TVar(val)

    def stack(self):
        items = [self.term()]
        while self.peek()[0] == "dot":
            self.take("dot")
            items.append(self.term())
        bottom = items[-1]
        if not isinstance(bottom, TVar):
            raise ParseError("a stack must end with a stack constant", self.peek()[2])
        return push(*items[:-1], SConst(bottom.name))

    def done(self):
        tok = self.peek()
        if tok[0] is not None:
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])


def parse_term(text: str) -> SynTerm:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_stack(text: str) -> SynStack:
    p = _Parser(text)
    s = p.stack()
    p.done()
    return s


def parse_process(text: str) -> Process:
    p = _Parser(text)
    t = p.term()
    p.take("star")
    s = p.stack()
    p.done()
    return Process(t, s)


def parse_final_set(spec: str) -> frozenset:
    """Semicolon-separated processes, e.g. ``"S * a; K * b"``."""
    return frozenset(parse_process(part) for part in spec.split(";") if part.strip())


def render_term(t: SynTerm) -> str:
    if isinstance(t, (TVar, TConst)):
        return t.name
    if isinstance(t, Saved):
        return f"k[{render_stack(t.stack)}]"
    arg = render_term(t.arg)
    if isinstance(t.arg, TApp):
        arg = f"({arg})"
    return f"{render_term(t.fun)} {arg}"


def render_stack(pi: SynStack) -> str:
    parts = []
    while isinstance(pi, Push):
        parts.append(render_term(pi.head))
        pi = pi.tail
    parts.append(pi.name)
    return " . ".join(parts)


def render_process(p: Process) -> str:
    return f"{render_term(p.term)} * {render_stack(p.stack)}"


def compact(t: SynTerm) -> str:
    """Juxtaposition without spaces, e.g. ``S(K(SKK))``."""
    if isinstance(t, (TVar, TConst)):
        return t.name
    if isinstance(t, Saved):
        return f"k[{render_stack(t.stack)}]"
    arg = compact(t.arg)
    if isinstance(t.arg, TApp):
        arg = f"({arg})"
    return compact(t.fun) + arg


# ---------------------------------------------------------------------------
# enumeration for shape checks


def enumerate_terms(max_size: int, variables=("x",), stack_consts=("a",)) -> list:
    """Terms with at most ``max_size`` nodes; saved stacks hold a bare constant."""
    leaves = [K, S, CC] + [TVar(v) for v in variables] + [Saved(SConst(c)) for c in stack_consts]
    by_size = {1: leaves}
    for n in range(2, max_size + 1):
        by_size[n] = [TApp(a, b) for left in range(1, n - 1)
                      for a, b in itertools.product(by_size[left], by_size.get(n - 1 - left, []))]
    return [t for n in sorted(by_size) for t in by_size[n]]


def enumerate_stacks(terms: Iterable[SynTerm], max_cells: int, stack_consts=("a",)) -> list:
    terms = list(terms)
    out = [SConst(c) for c in stack_consts]
    layer = list(out)
    for _ in range(max_cells):
        layer = [Push(t, pi) for t in terms for pi in layer]
        out.extend(layer)
    return out
