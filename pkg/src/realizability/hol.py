"""Higher-order formulas, typing derivations and their finite-model semantics.

Formula syntax::

    forall x:I -> o. x 0 => x z        # => associates to the right
    \\y:I. succ y                       # expression lambda
    M =_I N                            # Leibniz equality at kind I
    bot                                # falsity, forall x:o. x

Kinds are built from constants (``o`` for truth values) with a right
associative ``->``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from . import _limits
from . import poly as P
from .errors import (
    CapacityExceeded,
    FreshnessViolation,
    KindError,
    ModelShapeError,
    ParseError,
    RuleMismatch,
    UnboundVariable,
)
from .oca_core import Oca

# ---------------------------------------------------------------------------
# kinds


@dataclass(frozen=True)
class KConst:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class KArrow:
    dom: "Kind"
    cod: "Kind"

    def __str__(self):
        d = f"({self.dom})" if isinstance(self.dom, KArrow) else str(self.dom)
        return f"{d} -> {self.cod}"


Kind = Union[KConst, KArrow]
O = KConst("o")
IND = KConst("I")


def arrow(*kinds: Kind) -> Kind:
    *doms, cod = kinds
    for d in reversed(doms):
        cod = KArrow(d, cod)
    return cod


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Var:
    name: str
    kind: Kind

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    kind: Kind

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Lam:
    var: Var
    body: "Expr"

    @property
    def kind(self):
        return KArrow(self.var.kind, self.body.kind)

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class App:
    fun: "Expr"
    arg: "Expr"

    def __post_init__(self):
        fk = self.fun.kind
        if not isinstance(fk, KArrow) or fk.dom != self.arg.kind:
            raise KindError(f"cannot apply {render(self.fun)} : {fk} to {render(self.arg)} : {self.arg.kind}")

    @property
    def kind(self):
        return self.fun.kind.cod

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.left.kind != O or self.right.kind != O:
            raise KindError("both sides of => must be formulas")

    kind = O

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Expr"

    def __post_init__(self):
        if self.body.kind != O:
            raise KindError("the body of forall must be a formula")

    kind = O

    def __str__(self):
        return render(self)


Expr = Union[Var, Const, Lam, App, Implies, Forall]


def eapp(*es: Expr) -> Expr:
    acc = es[0]
    for e in es[1:]:
        acc = App(acc, e)
    return acc


def implies(*fs: Expr) -> Expr:
    *hyps, concl = fs
    for h in reversed(hyps):
        concl = Implies(h, concl)
    return concl


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e,))
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, (Lam, Forall)):
        return free_vars(e.body) - {e.var}
    if isinstance(e, App):
        return free_vars(e.fun) | free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def _names(e: Expr) -> set:
    if isinstance(e, (Var, Const)):
        return {e.name}
    if isinstance(e, (Lam, Forall)):
        return {e.var.name} | _names(e.body)
    if isinstance(e, App):
        return _names(e.fun) | _names(e.arg)
    return _names(e.left) | _names(e.right)


def fresh_var(base: str, kind: Kind, avoid: Iterable[str]) -> Var:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return Var(name, kind)


def substitute(e: Expr, x: Var, m: Expr) -> Expr:
    """Capture-avoiding ``e{x := m}``."""
    if m.kind != x.kind:
        raise KindError(f"substituting {render(m)} : {m.kind} for {x.name} : {x.kind}")
    return _subst(e, x, m)


def _subst(e, x, m):
    if isinstance(e, Var):
        return m if e == x else e
    if isinstance(e, Const):
        return e
    if isinstance(e, App):
        return App(_subst(e.fun, x, m), _subst(e.arg, x, m))
    if isinstance(e, Implies):
        return Implies(_subst(e.left, x, m), _subst(e.right, x, m))
    v, body = e.var, e.body
    if v == x or x not in free_vars(body):
        return e
    if v in free_vars(m):
        nv = fresh_var(v.name, v.kind, _names(body) | _names(m) | {x.name})
        body, v = _subst(body, v, nv), nv
    return type(e)(v, _subst(body, x, m))


def beta_normal(e: Expr) -> Expr:
    if isinstance(e, (Var, Const)):
        return e
    if isinstance(e, App):
        f, a = beta_normal(e.fun), beta_normal(e.arg)
        if isinstance(f, Lam):
            return beta_normal(_subst(f.body, f.var, a))
        return App(f, a)
    if isinstance(e, Implies):
        return Implies(beta_normal(e.left), beta_normal(e.right))
    return type(e)(e.var, beta_normal(e.body))


def alpha_eq(a: Expr, b: Expr, env_a=None, env_b=None, depth=0) -> bool:
    env_a, env_b = env_a or {}, env_b or {}
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        if a in env_a or b in env_b:
            return env_a.get(a) == env_b.get(b)
        return a == b
    if isinstance(a, Const):
        return a == b
    if isinstance(a, App):
        return alpha_eq(a.fun, b.fun, env_a, env_b, depth) and alpha_eq(a.arg, b.arg, env_a, env_b, depth)
    if isinstance(a, Implies):
        return (alpha_eq(a.left, b.left, env_a, env_b, depth)
                and alpha_eq(a.right, b.right, env_a, env_b, depth))
    if a.var.kind != b.var.kind:
        return False
    return alpha_eq(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)


def same_formula(a: Expr, b: Expr) -> bool:
    """Equality up to renaming of bound variables and beta conversion."""
    return alpha_eq(beta_normal(a), beta_normal(b))


_X_O = Var("x", O)
FALSUM = Forall(_X_O, _X_O)


def leibniz(sigma: Kind, m: Expr, n: Expr) -> Expr:
    """``m =_sigma n`` as ``forall y. y m => y n``."""
    if m.kind != sigma or n.kind != sigma:
        raise KindError(f"both sides of =_{sigma} must have kind {sigma}")
    y = fresh_var("y", KArrow(sigma, O), _names(m) | _names(n))
    return Forall(y, Implies(App(y, m), App(y, n)))


def negation(a: Expr) -> Expr:
    return Implies(a, FALSUM)


ZERO = Const("0", IND)
SUCC = Const("succ", KArrow(IND, IND))


def nat_predicate(z: Union[str, Var] = "z") -> Expr:
    """``forall x. (forall y. x y => x (succ y)) => x 0 => x z``."""
    z = Var(z, IND) if isinstance(z, str) else z
    if z.kind != IND:
        raise KindError("the argument of N must have kind I")
    avoid = {z.name}
    x = fresh_var("x", KArrow(IND, O), avoid)
    y = fresh_var("y", IND, avoid | {x.name})
    step = Forall(y, Implies(App(x, y), App(x, App(SUCC, y))))
    return Forall(x, implies(step, App(x, ZERO), App(x, z)))


def render(e: Expr) -> str:
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Forall):
        if e == FALSUM:
            return "bot"
        return f"forall {e.var.name}:{e.var.kind}. {render(e.body)}"
    if isinstance(e, Lam):
        return f"\\{e.var.name}:{e.var.kind}. {render(e.body)}"
    if isinstance(e, Implies):
        left = render(e.left)
        if isinstance(e.left, (Implies, Forall, Lam)) and e.left != FALSUM:
            left = f"({left})"
        return f"{left} => {render(e.right)}"
    fun = render(e.fun)
    if isinstance(e.fun, (Lam, Forall, Implies)) and e.fun != FALSUM:
        fun = f"({fun})"
    arg = render(e.arg)
    if not isinstance(e.arg, (Var, Const)) and e.arg != FALSUM:
        arg = f"({arg})"
    return f"{fun} {arg}"


# ---------------------------------------------------------------------------
# formula parser

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<implies>=>)|(?P<eq>=_)|(?P<lam>\\|λ)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<colon>:)|(?P<dot>\.)|(?P<id>[A-Za-z0-9_][A-Za-z0-9_']*))"
)


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


@dataclass
class Signature:
    """Kinds of free variables and constants available to the parser."""

    kinds: set = field(default_factory=lambda: {"o", "I"})
    consts: dict = field(default_factory=lambda: {"0": IND, "succ": KArrow(IND, IND)})
    vars: dict = field(default_factory=dict)

    def copy(self):
        return Signature(set(self.kinds), dict(self.consts), dict(self.vars))


class _FParser:
    def __init__(self, text, sig: Signature):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    # kinds
    def kind(self):
        left = self.katom()
        if self.peek()[0] == "arrow":
            self.take("arrow")
            return KArrow(left, self.kind())
        return left

    def katom(self):
        if self.peek()[0] == "lp":
            self.take("lp")
            k = self.kind()
            self.take("rp")
            return k
        _, name, pos = self.take("id")
        if name not in self.sig.kinds:
            raise KindError(f"unknown kind {name!r} at {pos}")
        return KConst(name)

    # expressions
    def expr(self, bound):
        kind, val, _ = self.peek()
        if kind == "id" and val == "forall":
            self.take("id")
            v = self.binder()
            return Forall(v, self.expr({**bound, v.name: v}))
        if kind == "lam":
            self.take("lam")
            v = self.binder()
            return Lam(v, self.expr({**bound, v.name: v}))
        left = self.equation(bound)
        if self.peek()[0] == "implies":
            self.take("implies")
            return Implies(left, self.expr(bound))
        return left

    def binder(self):
        _, name, _ = self.take("id")
        self.take("colon")
        k = self.kind()
        self.take("dot")
        return Var(name, k)

    def equation(self, bound):
        left = self.application(bound)
        if self.peek()[0] == "eq":
            self.take("eq")
            sigma = self.katom()
            return leibniz(sigma, left, self.application(bound))
        return left

    def application(self, bound):
        items = []
        while True:
            kind, val, _ = self.peek()
            if kind == "lp" or (kind == "id" and val != "forall"):
                items.append(self.atom(bound))
            elif kind in ("lam",) or (kind == "id" and val == "forall"):
                items.append(self.expr(bound))
                break
            else:
                break
        if not items:
            tok = self.peek()
            raise ParseError(f"expected an expression, got {tok[1]!r}", tok[2])
        return eapp(*items)

    def atom(self, bound):
        if self.peek()[0] == "lp":
            self.take("lp")
            e = self.expr(bound)
            self.take("rp")
            return e
        _, name, pos = self.take("id")
        if name in bound:
            return bound[name]
        if name == "bot":
            return FALSUM
        if name in self.sig.vars:
            return Var(name, self.sig.vars[name])
        if name in self.sig.consts:
            return Const(name, self.sig.consts[name])
        raise UnboundVariable(name)

    def done(self):
        tok = self.peek()
        if tok[0] is not None:
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])


def parse_kind(text: str, sig: Optional[Signature] = None) -> Kind:
    p = _FParser(text, sig or Signature())
    k = p.kind()
    p.done()
    return k


def parse_expr(text: str, sig: Optional[Signature] = None) -> Expr:
    p = _FParser(text, sig or Signature())
    e = p.expr({})
    p.done()
    return e


def parse_formula(text: str, sig: Optional[Signature] = None) -> Expr:
    e = parse_expr(text, sig)
    if e.kind != O:
        raise KindError(f"{text!r} has kind {e.kind}, not o")
    return e


# ---------------------------------------------------------------------------
# sequents and derivations

RULES = ("ax", "->i", "->e", "forall-i", "forall-e")


@dataclass(frozen=True)
class Sequent:
    context: tuple  # ((name, formula), ...)
    subject: P.Poly
    formula: Expr

    def __str__(self):
        ctx = ", ".join(f"{n} : {render(a)}" for n, a in self.context)
        return f"{ctx + ' ' if ctx else ''}|- {P.render(self.subject)} : {render(self.formula)}"


@dataclass(frozen=True)
class Node:
    id: str
    rule: str
    premises: tuple
    sequent: Sequent
    witness: Optional[Expr] = None  # the instantiating expression of forall-e


def _ctx_equal(a, b):
    return len(a) == len(b) and all(n1 == n2 and same_formula(f1, f2) for (n1, f1), (n2, f2) in zip(a, b))


def _check_sequent_shape(node: Node):
    seq = node.sequent
    names = [n for n, _ in seq.context]
    if len(set(names)) != len(names):
        raise RuleMismatch(node.id, "context declares a variable twice")
    for n, f in seq.context:
        if n in P.NAMED_CONSTANTS:
            raise RuleMismatch(node.id, f"{n!r} is reserved for a constant")
        if f.kind != O:
            raise KindError(f"declaration {n} is not a formula")
    if seq.formula.kind != O:
        raise KindError("conclusion is not a formula")
    extra = P.free_vars(seq.subject) - set(names)
    if extra:
        raise RuleMismatch(node.id, f"subject mentions undeclared {sorted(extra)}")


def check_derivation(node: Node) -> Sequent:
    """Check every node of the tree; return the root sequent."""
    for prem in node.premises:
        check_derivation(prem)
    _check_sequent_shape(node)
    seq = node.sequent
    ps = [p.sequent for p in node.premises]

    def need(n):
        if len(ps) != n:
            raise RuleMismatch(node.id, f"{node.rule} takes {n} premise(s), got {len(ps)}")

    if node.rule == "ax":
        need(0)
        if not isinstance(seq.subject, P.Var):
            raise RuleMismatch(node.id, "axiom subject must be a declared variable")
        decl = dict(seq.context).get(seq.subject.name)
        if decl is None or not same_formula(decl, seq.formula):
            raise RuleMismatch(node.id, "variable is not declared with this formula")
    elif node.rule == "->i":
        need(1)
        prem = ps[0]
        if not prem.context:
            raise RuleMismatch(node.id, "premise context is empty")
        x, a = prem.context[-1]
        if not _ctx_equal(prem.context[:-1], seq.context):
            raise RuleMismatch(node.id, "premise context must extend the conclusion's by one declaration")
        if seq.subject != P.App(P.E, P.lambda_star(x, prem.subject)):
            raise RuleMismatch(node.id, f"subject must be e(lambda* {x} p)")
        if not same_formula(seq.formula, Implies(a, prem.formula)):
            raise RuleMismatch(node.id, "conclusion must be A => B")
    elif node.rule == "->e":
        need(2)
        f, g = ps
        if not (_ctx_equal(f.context, seq.context) and _ctx_equal(g.context, seq.context)):
            raise RuleMismatch(node.id, "premises must share the conclusion's context")
        fm = beta_normal(f.formula)
        if not isinstance(fm, Implies):
            raise RuleMismatch(node.id, "first premise must prove an implication")
        if not same_formula(fm.left, g.formula):
            raise RuleMismatch(node.id, "second premise does not prove the hypothesis")
        if not same_formula(fm.right, seq.formula):
            raise RuleMismatch(node.id, "conclusion is not the implication's consequent")
        if seq.subject != P.App(f.subject, g.subject):
            raise RuleMismatch(node.id, "subject must be the application p q")
    elif node.rule == "forall-i":
        need(1)
        prem = ps[0]
        _same_subject_context(node, prem, seq)
        fm = seq.formula
        if not isinstance(fm, Forall):
            raise RuleMismatch(node.id, "conclusion must be a universal formula")
        if not same_formula(fm.body, prem.formula):
            raise RuleMismatch(node.id, "body differs from the premise's formula")
        for n, a in seq.context:
            if fm.var in free_vars(a):
                raise FreshnessViolation(node.id, f"{fm.var.name} is free in the declaration of {n}")
    elif node.rule == "forall-e":
        need(1)
        prem = ps[0]
        _same_subject_context(node, prem, seq)
        fm = prem.formula
        if not isinstance(fm, Forall):
            raise RuleMismatch(node.id, "premise must be a universal formula")
        if node.witness is None:
            raise RuleMismatch(node.id, "forall-e needs an instantiating expression")
        inst = substitute(fm.body, fm.var, node.witness)
        if not same_formula(inst, seq.formula):
            raise RuleMismatch(node.id, "conclusion is not the instantiated body")
    else:
        raise RuleMismatch(node.id, f"unknown rule {node.rule!r}")
    return seq


def _same_subject_context(node, prem, seq):
    if not _ctx_equal(prem.context, seq.context):
        raise RuleMismatch(node.id, "context must be unchanged")
    if prem.subject != seq.subject:
        raise RuleMismatch(node.id, "subject must be unchanged")


# derivation files --------------------------------------------------------

_NODE = re.compile(r"^(?P<id>\S+)\s+(?P<rule>\S+)(?P<prem>(?:\s+[^\s:]+)*?)(?:\s+with\s+(?P<with>.*?))?\s*::\s*(?P<seq>.*)$")


def _split_sequent(text, sig, where):
    if "|-" not in text:
        raise ParseError("missing |-", where)
    ctx_text, rest = text.split("|-", 1)
    if " : " not in rest:
        raise ParseError("missing ' : ' between subject and formula", where)
    subj_text, form_text = rest.split(" : ", 1)
    ctx = []
    for decl in filter(None, (d.strip() for d in ctx_text.split(","))):
        if ":" not in decl:
            raise ParseError(f"bad declaration {decl!r}", where)
        name, f = decl.split(":", 1)
        ctx.append((name.strip(), parse_formula(f, sig)))
    return Sequent(tuple(ctx), P.parse_poly(subj_text.strip()), parse_formula(form_text, sig))


def parse_derivation(text: str) -> Node:
    """Line format::

        kind N                       # extra kind constant
        const c : KIND               # expression constant
        var A : KIND                 # free expression variable
        ID RULE [PREMISE ...] [with EXPR] :: CONTEXT |- SUBJECT : FORMULA
        root ID                      # optional; defaults to the last node
    """
    sig = Signature()
    nodes, root = {}, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        where = f"line {lineno}"
        if head == "kind":
            sig.kinds.add(line.split()[1])
        elif head in ("const", "var"):
            body = line.split(None, 1)[1]
            if ":" not in body:
                raise ParseError(f"{head} needs 'NAME : KIND'", where)
            name, k = (s.strip() for s in body.split(":", 1))
            (sig.consts if head == "const" else sig.vars)[name] = parse_kind(k, sig)
        elif head == "root":
            root = line.split()[1]
        else:
            m = _NODE.match(line)
            if not m:
                raise ParseError("cannot read node line", where)
            prem_ids = m.group("prem").split()
            try:
                prems = tuple(nodes[p] for p in prem_ids)
            except KeyError as exc:
                raise ParseError(f"unknown premise {exc.args[0]}", where) from None
            witness = parse_expr(m.group("with"), sig) if m.group("with") else None
            node = Node(m.group("id"), m.group("rule"), prems,
                        _split_sequent(m.group("seq"), sig, where), witness)
            nodes[node.id] = node
    if not nodes:
        raise ParseError("no nodes", "end of file")
    root = root or list(nodes)[-1]  # default: the last node
    if root not in nodes:
        raise ParseError(f"unknown root {root}", "end of file")
    return nodes[root]


def load_derivation(path) -> Node:
    try:
        return parse_derivation(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", str(path)) from None


def rules_used(node: Node) -> set:
    out = {node.rule}
    for p in node.premises:
        out |= rules_used(p)
    return out


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Fn:
    """A finite function, stored as its graph over an ordered domain."""

    dom: tuple
    values: tuple

    def __call__(self, v):
        return self.values[self.dom.index(v)]


@dataclass
class Model:
    oca: Oca
    kind_interp: dict = field(default_factory=dict)   # kind name -> tuple of values
    const_interp: dict = field(default_factory=dict)  # const name -> value
    max_items: Optional[int] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def values(self, k: Kind) -> tuple:
        if k in self._cache:
            return self._cache[k]
        if k == O:
            out = tuple(self.oca.carrier)
        elif isinstance(k, KConst):
            if k.name not in self.kind_interp:
                raise KindError(f"kind {k.name} has no interpretation")
            out = tuple(self.kind_interp[k.name])
        else:
            dom, cod = self.values(k.dom), self.values(k.cod)
            limit = _limits.max_enum(self.max_items)
            if len(cod) ** len(dom) > limit:
                raise CapacityExceeded(f"|{k}| = {len(cod)}^{len(dom)} exceeds {limit}")
            out = tuple(Fn(dom, vs) for vs in itertools.product(cod, repeat=len(dom)))
        self._cache[k] = out
        return out

    def fn(self, k: KArrow, f) -> Fn:
        """Turn a Python callable into an element of ``[[k]]``."""
        dom = self.values(k.dom)
        return Fn(dom, tuple(f(v) for v in dom))


def interpret_any(m: Model, e: Expr, assign: Mapping):
    if isinstance(e, Var):
        try:
            return assign[e]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Const):
        try:
            return m.const_interp[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Lam):
        dom = m.values(e.var.kind)
        return Fn(dom, tuple(interpret_any(m, e.body, {**assign, e.var: s}) for s in dom))
    if isinstance(e, App):
        return interpret_any(m, e.fun, assign)(interpret_any(m, e.arg, assign))
    if isinstance(e, Implies):
        return m.oca.arrow(interpret(m, e.left, assign), interpret(m, e.right, assign))
    return m.oca.inf(interpret(m, e.body, {**assign, e.var: s}) for s in m.values(e.var.kind))


def interpret(m: Model, a: Expr, assign: Optional[Mapping] = None) -> int:
    if a.kind != O:
        raise KindError(f"{render(a)} is not a formula")
    return interpret_any(m, a, assign or {})


def assignments(m: Model, variables: Iterable[Var]):
    vs = sorted(set(variables), key=lambda v: (v.name, str(v.kind)))
    spaces = [m.values(v.kind) for v in vs]
    total = 1
    for s in spaces:
        total *= len(s)
    limit = _limits.max_enum(m.max_items)
    if total > limit:
        raise CapacityExceeded(f"{total} assignments exceed {limit}")
    for combo in itertools.product(*spaces):
        yield dict(zip(vs, combo))


@dataclass(frozen=True)
class Satisfaction:
    holds: bool
    cases: int
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.holds


def satisfies(m: Model, seq: Sequent) -> Satisfaction:
    """Every assignment and every ``b_i <= [[A_i]]`` give ``p{x := b} <= [[B]]``."""
    o = m.oca
    fv = set(free_vars(seq.formula))
    for _, a in seq.context:
        fv |= free_vars(a)
    names = [n for n, _ in seq.context]
    extra = P.free_vars(seq.subject) - set(names)
    if extra:
        raise UnboundVariable(sorted(extra)[0])
    cases = 0
    for asg in assignments(m, fv):
        hyps = [interpret(m, a, asg) for _, a in seq.context]
        concl = interpret(m, seq.formula, asg)
        below = [[b for b in o.carrier if o.leq(b, h)] for h in hyps]
        for bs in itertools.product(*below):
            cases += 1
            if not o.leq(P.evaluate(o, seq.subject, dict(zip(names, bs))), concl):
                cex = {"assignment": {v.name: _show(val) for v, val in asg.items()},
                       "b": dict(zip(names, bs))}
                return Satisfaction(False, cases, cex)
    return Satisfaction(True, cases)


def _show(v):
    return list(v.values) if isinstance(v, Fn) else v


# ---------------------------------------------------------------------------
# arithmetic


def peano_model(o: Oca, n: int) -> Model:
    """``[[I]] = {0 .. n-1}`` with successor saturating at ``n - 1``."""
    if n < 1:
        raise ModelShapeError("[[I]] must be non-empty")
    m = Model(o, {"I": tuple(range(n))})
    m.const_interp["0"] = 0
    m.const_interp["succ"] = m.fn(KArrow(IND, IND), lambda v: min(v + 1, n - 1))
    return m


def numeral(k: int) -> Expr:
    e = ZERO
    for _ in range(k):
        e = App(SUCC, e)
    return e


def default_equations(m: Model) -> list:
    """Closed equations ``M =_I N`` that hold in ``m``: numerals with equal values,
    plus ``forall x. x = x`` and ``forall x. succ x = succ x``."""
    n = len(m.values(IND))
    eqs = []
    for a in range(n + 1):
        for b in range(n + 1):
            if interpret_any(m, numeral(a), {}) == interpret_any(m, numeral(b), {}):
                eqs.append(leibniz(IND, numeral(a), numeral(b)))
    x = Var("x", IND)
    eqs.append(Forall(x, leibniz(IND, x, x)))
    eqs.append(Forall(x, leibniz(IND, App(SUCC, x), App(SUCC, x))))
    return eqs


IDENTITY_REALIZER = P.lam("x", P.Var("x"))
SUCC_REALIZER = P.lam("x", P.App(P.Var("x"), P.S))


def succ_not_zero() -> Expr:
    x = Var("x", IND)
    return Forall(x, negation(leibniz(IND, App(SUCC, x), ZERO)))


@dataclass(frozen=True)
class PeanoReport:
    equations: tuple   # ((formula text, holds), ...)
    succ_not_zero: bool

    @property
    def ok(self):
        return self.succ_not_zero and all(h for _, h in self.equations)


def peano_realizers(m: Model, equations: Optional[list] = None) -> PeanoReport:
    succ = m.const_interp.get("succ")
    zero = m.const_interp.get("0")
    if succ is None or zero is None:
        raise ModelShapeError("model lacks 0 or succ")
    if any(succ(v) == zero for v in m.values(IND)):
        raise ModelShapeError("succ reaches 0, so succ x != 0 is false in this model")
    o = m.oca
    ident = P.evaluate(o, IDENTITY_REALIZER)
    eqs = default_equations(m) if equations is None else equations
    rows = tuple((render(e), o.leq(ident, interpret(m, e))) for e in eqs)
    ok = o.leq(P.evaluate(o, SUCC_REALIZER), interpret(m, succ_not_zero()))
    return PeanoReport(rows, ok)


def model_from_doc(doc: dict, oca: Oca) -> Model:
    """``{"peano": n}`` or ``{"kinds": {...}, "consts": {...}}`` with kinds as
    sizes and function constants as value lists over the domain order."""
    if "peano" in doc:
        return peano_model(oca, int(doc["peano"]))
    m = Model(oca, {k: tuple(range(int(v))) for k, v in doc.get("kinds", {}).items()})
    sig = Signature(set(m.kind_interp) | {"o"}, {}, {})
    for name, spec in doc.get("consts", {}).items():
        k = parse_kind(spec["kind"], sig)
        m.const_interp[name] = _value_from_json(m, k, spec["value"])
    return m


def _value_from_json(m, k, v):
    if isinstance(k, KArrow):
        dom = m.values(k.dom)
        return Fn(dom, tuple(_value_from_json(m, k.cod, x) for x in v))
    return v
