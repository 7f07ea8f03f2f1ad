"""Combinatory polynomials, bracket abstraction and the derived toolkit.

A polynomial is a binary tree of :class:`Const`, :class:`Var` and
:class:`App` nodes.  A constant holds either a carrier index or one of the
reserved names ``k``, ``s``, ``e``, ``c`` which are resolved against the
algebra at evaluation time.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ParseError, UnboundVariable
from .oca_core import Oca

NAMED_CONSTANTS = ("k", "s", "e", "c")


@dataclass(frozen=True)
class Const:
    value: Union[int, str]

    def __str__(self):
        return self.value if isinstance(self.value, str) else f"#{self.value}"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fun: "Poly"
    arg: "Poly"

    def __str__(self):
        return render(self)


Poly = Union[Const, Var, App]

K, S, E, C = (Const(n) for n in NAMED_CONSTANTS)


def ap(*ps: Poly) -> Poly:
    """Left-associated application of one or more polynomials."""
    acc = ps[0]
    for q in ps[1:]:
        acc = App(acc, q)
    return acc


def free_vars(t: Poly) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return frozenset()


def constants(t: Poly) -> Iterator[Const]:
    if isinstance(t, Const):
        yield t
    elif isinstance(t, App):
        yield from constants(t.fun)
        yield from constants(t.arg)


def size(t: Poly) -> int:
    """Number of nodes (leaves and application nodes)."""
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    return 1


def lambda_star(y: str, t: Poly) -> Poly:
    """Bracket abstraction; clause order: ``y`` absent, ``t = y``, application."""
    if y not in free_vars(t):
        return App(K, t)
    if isinstance(t, Var):
        return ap(S, K, K)
    return ap(S, lambda_star(y, t.fun), lambda_star(y, t.arg))


def lam(*args) -> Poly:
    """``lam("x", "y", body)`` is ``lambda_star(x, lambda_star(y, body))``."""
    *names, body = args
    for name in reversed(names):
        body = lambda_star(name, body)
    return body


def substitute(t: Poly, y: str, u: Poly) -> Poly:
    if isinstance(t, Var):
        return u if t.name == y else t
    if isinstance(t, App):
        return App(substitute(t.fun, y, u), substitute(t.arg, y, u))
    return t


def resolve(o: Oca, c: Const) -> int:
    if isinstance(c.value, str):
        v = getattr(o, c.value) if c.value in NAMED_CONSTANTS else None
        if v is None:
            raise UnboundVariable(c.value)
        return v
    if not 0 <= c.value < o.size:
        raise ValueError(f"constant #{c.value} outside the carrier")
    return c.value


def evaluate(o: Oca, t: Poly, env: Optional[Mapping[str, int]] = None) -> int:
    env = env or {}
    if isinstance(t, Const):
        return resolve(o, t)
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    return o.app(evaluate(o, t.fun, env), evaluate(o, t.arg, env))


eval_poly = evaluate


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))|(?P<idx>#\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, -1)

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        if self.peek()[0] == "lam":
            self.take("lam")
            names = [self.take("id")[1]]
            while self.peek()[0] == "id":
                names.append(self.take("id")[1])
            self.take("dot")
            return lam(*names, self.expr())
        items = []
        while self.peek()[0] in ("id", "idx", "lp", "lam"):
            if self.peek()[0] == "lam":
                items.append(self.expr())
                break
            items.append(self.atom())
        if not items:
            tok = self.peek()
            raise ParseError(f"expected a term, got {tok[1]!r}", tok[2])
        return ap(*items)

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "lp":
            self.take("lp")
            e = self.expr()
            self.take("rp")
            return e
        self.i += 1
        if kind == "idx":
            return Const(int(val[1:]))
        return Const(val) if val in NAMED_CONSTANTS else Var(val)


def parse_poly(text: str) -> Poly:
    """Parse lambda surface syntax, compiling every binder with :func:`lambda_star`.

    ``k s e c`` are constants, ``#n`` is carrier element ``n``; other
    identifiers are variables.
    """
    p = _Parser(text)
    e = p.expr()
    if p.peek()[0] is not None:
        tok = p.peek()
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return e


compile_lambda = parse_poly


def render(t: Poly) -> str:
    """Left-associated rendering: ``s k k``, ``s (k x)``."""
    if isinstance(t, App):
        arg = render(t.arg)
        if isinstance(t.arg, App):
            arg = f"({arg})"
        return f"{render(t.fun)} {arg}"
    return str(t)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_polys(leaves: Iterable[Poly], max_nodes: int) -> list:
    """All trees over ``leaves`` with at most ``max_nodes`` nodes."""
    leaves = list(leaves)
    by_size = {1: leaves}
    for n in range(3, max_nodes + 1, 2):
        trees = []
        for left in range(1, n - 1, 2):
            for a, b in itertools.product(by_size[left], by_size[n - 1 - left]):
                trees.append(App(a, b))
        by_size[n] = trees
    return [t for n in sorted(by_size) for t in by_size[n]]


# ---------------------------------------------------------------------------
# toolkit

x, y, z, x1, x2, x3 = (Var(n) for n in ("x", "y", "z", "x1", "x2", "x3"))

I_POLY = ap(S, K, K)
K_PRIME = lam("x1", "x2", x2)
PAIR = lam("x1", "x2", "x3", ap(x3, x1, x2))
P1 = lam("x1", ap(x1, K))
P2 = lam("x1", ap(x1, K_PRIME))
SWAP = lam("x1", "x2", ap(x2, x1))
E0 = ap(S, App(K, I_POLY))


def i_b(b: Poly) -> Poly:
    return ap(S, K, b)


def D(a: Poly) -> Poly:
    return lam("x", "y", App(x, App(a, y)))


def E_fn(a: Poly) -> Poly:
    return lam("x", "y", App(y, App(a, x)))


def F(c: Poly) -> Poly:
    return lam("x", "y", App(c, App(x, y)))


def G(c: Poly) -> Poly:
    return lam("x", App(App(c, App(P1, x)), App(P2, x)))


def M(c: Poly, b: Poly) -> Poly:
    return lam("x", App(App(c, x), b))


def H(m: Poly, n: Poly) -> Poly:
    return ap(F(E), ap(F(F(m)), n))


def R(c: Poly) -> Poly:
    return G(ap(F(D(c)), PAIR))


G_SMALL = ap(F(E), App(S, I_POLY))

NAMED = {
    "i": I_POLY, "k'": K_PRIME, "p": PAIR, "p1": P1, "p2": P2, "f": SWAP,
    "e0": E0, "g": G_SMALL,
}
PARAMETRISED = {"D": (D, 1), "E_fn": (E_fn, 1), "F": (F, 1), "G": (G, 1),
                "M": (M, 2), "H": (H, 2), "R": (R, 1), "i_b": (i_b, 1)}


class Toolkit:
    """Evaluated toolkit combinators over a fixed algebra.

    Parametrised constructors take carrier elements and return carrier
    elements; evaluations are memoised.
    """

    def __init__(self, o: Oca):
        self.o = o
        self._memo = {}

    def _ev(self, key, build):
        if key not in self._memo:
            self._memo[key] = evaluate(self.o, build())
        return self._memo[key]

    def named(self, name: str) -> int:
        return self._ev(name, lambda: NAMED[name])

    def build(self, name: str, *args: int) -> int:
        fn, arity = PARAMETRISED[name]
        if len(args) != arity:
            raise TypeError(f"{name} takes {arity} argument(s)")
        return self._ev((name,) + args, lambda: fn(*(Const(a) for a in args)))

    @property
    def i(self):
        return self.named("i")

    @property
    def p(self):
        return self.named("p")

    @property
    def p1(self):
        return self.named("p1")

    @property
    def p2(self):
        return self.named("p2")

    @property
    def f(self):
        return self.named("f")

    @property
    def g(self):
        return self.named("g")

    @property
    def e0(self):
        return self.named("e0")

    def D(self, a):
        return self.build("D", a)

    def E_fn(self, a):
        return self.build("E_fn", a)

    def F(self, c):
        return self.build("F", c)

    def G(self, c):
        return self.build("G", c)

    def M(self, c, b):
        return self.build("M", c, b)

    def H(self, m, n):
        return self.build("H", m, n)

    def R(self, c):
        return self.build("R", c)

    def i_b(self, b):
        return self.build("i_b", b)

    def wedge(self, a, b):
        return self.o.ap(self.p, a, b)

    def proj1(self, w):
        return self.o.app(self.p1, w)

    def proj2(self, w):
        return self.o.app(self.p2, w)


def toolkit(o: Oca) -> Toolkit:
    return Toolkit(o)


def wedge(o: Oca, a: int, b: int) -> int:
    return evaluate(o, ap(PAIR, Const(a), Const(b)))


def proj1(o: Oca, w: int) -> int:
    return evaluate(o, App(P1, Const(w)))


def proj2(o: Oca, w: int) -> int:
    return evaluate(o, App(P2, Const(w)))


def toolkit_inequalities(o: Oca) -> dict:
    """Exhaustively check each defining inequality; ``{name: (holds, witness)}``."""
    tk = Toolkit(o)
    A = list(o.carrier)
    leq, app = o.leq, o.app

    def sweep(arity, pred):
        for args in itertools.product(A, repeat=arity):
            if not pred(*args):
                return False, args
        return True, None

    return {
        "swap": sweep(2, lambda a, b: leq(o.ap(tk.f, a, b), app(b, a))),
        "D": sweep(3, lambda a, b, c: leq(o.ap(tk.D(a), c, b), app(c, app(a, b)))),
        "E_fn": sweep(3, lambda a, b, c: leq(o.ap(tk.E_fn(a), b, c), app(c, app(a, b)))),
        "F": sweep(3, lambda a, b, c: leq(o.ap(tk.F(c), a, b), app(c, app(a, b)))),
        "G": sweep(3, lambda a, b, c: leq(app(tk.G(c), tk.wedge(a, b)), o.ap(c, a, b))),
        "M": sweep(3, lambda a, b, c: leq(app(tk.M(c, b), a), o.ap(c, a, b))),
        "H": sweep(5, lambda m, n, a, b, c: not leq(app(m, o.ap(n, a, b)), c)
                   or leq(app(tk.H(m, n), a), o.arrow(b, c))),
        "R": sweep(3, lambda a, b, c: leq(app(tk.R(c), tk.wedge(a, b)), tk.wedge(a, app(c, b)))),
    }


def toolkit_preserves_filter(o: Oca) -> dict:
    tk = Toolkit(o)
    phi = o.filter_elements()
    out = {}
    for name in NAMED:
        out[name] = o.in_filter(tk.named(name))
    for name, (_, arity) in PARAMETRISED.items():
        out[name] = all(o.in_filter(tk.build(name, *args))
                        for args in itertools.product(phi, repeat=arity))
    return out


def sq_leq(o: Oca, a: int, b: int):
    """Return the first ``f`` in the filter with ``f a <= b``, or ``None``."""
    for f in o.carrier:
        if o.in_filter(f) and o.leq(o.app(f, a), b):
            return f
    return None


def sq_leq_holds(o: Oca, a: int, b: int) -> bool:
    return sq_leq(o, a, b) is not None
