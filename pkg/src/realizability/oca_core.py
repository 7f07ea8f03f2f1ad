"""Ordered combinatory algebras: an abstract interface, a table-backed
implementation, and the algebra derived from a finite Krivine structure.

Elements are carrier indices ``0 .. size-1``.  ``leq(a, b)`` is the OCA
order; for a derived algebra it is reverse inclusion of closed stack sets,
so the full stack set is the bottom and ``close(empty)`` the top.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidPaks, ModelShapeError, SchemaError
from .rl_core import (
    close_stacks,
    conductor_right,
    enumerate_closed_stack_sets,
    members,
    perp_of_stacks,
    perp_of_terms,
    push_image,
)
from .paks import AXIOMS, FiniteAks, FinitePaks, combinator_E, minimal_qp


class Oca(ABC):
    """Behavioural interface shared by table-backed and derived algebras."""

    size: int
    k: int
    s: int
    e: int
    c: Optional[int]

    @abstractmethod
    def leq(self, a: int, b: int) -> bool: ...

    @abstractmethod
    def app(self, a: int, b: int) -> int: ...

    @abstractmethod
    def arrow(self, a: int, b: int) -> int: ...

    @abstractmethod
    def in_filter(self, a: int) -> bool: ...

    @abstractmethod
    def inf(self, xs: Iterable[int]) -> int: ...

    @property
    def carrier(self) -> range:
        return range(self.size)

    @property
    def bottom(self) -> int:
        return self.inf(self.carrier)

    @property
    def top(self) -> int:
        return self.inf(())

    def filter_elements(self) -> list[int]:
        return [a for a in self.carrier if self.in_filter(a)]

    def ap(self, *xs: int) -> int:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.app(acc, x)
        return acc

    def label(self, a: int) -> str:
        return str(a)


@dataclass(frozen=True, eq=False)
class TableOca(Oca):
    """An OCA given by explicit tables.

    ``leq`` is a square boolean matrix, ``app_table``/``arrow_table`` are
    square index tables and ``filter`` is a tuple of booleans.  ``inf`` is the
    greatest lower bound read off the order; it raises
    :class:`ModelShapeError` when the order has none.
    """

    leq_table: tuple
    app_table: tuple
    arrow_table: tuple
    k: int
    s: int
    e: int
    c: Optional[int] = None
    filter: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        n = len(self.leq_table)
        if n == 0:
            raise SchemaError("leq", "carrier must be non-empty")
        for name in ("leq_table", "app_table", "arrow_table"):
            rows = tuple(tuple(r) for r in getattr(self, name))
            if len(rows) != n or any(len(r) != n for r in rows):
                raise SchemaError(name, f"expected a {n}x{n} table")
            if name == "leq_table":
                rows = tuple(tuple(bool(v) for v in r) for r in rows)
            elif any(not 0 <= v < n for r in rows for v in r):
                raise SchemaError(name, "entry out of range")
            object.__setattr__(self, name, rows)
        for name in ("k", "s", "e", "c"):
            v = getattr(self, name)
            if v is not None and not 0 <= v < n:
                raise SchemaError(name, "element out of range")
        filt = tuple(bool(v) for v in self.filter) if self.filter else (True,) * n
        if len(filt) != n:
            raise SchemaError("filter", f"expected {n} flags")
        object.__setattr__(self, "filter", filt)
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(n))
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return len(self.leq_table)

    def leq(self, a, b):
        return self.leq_table[a][b]

    def app(self, a, b):
        return self.app_table[a][b]

    def arrow(self, a, b):
        return self.arrow_table[a][b]

    def in_filter(self, a):
        return self.filter[a]

    def inf(self, xs):
        xs = list(xs)
        lower = [z for z in self.carrier if all(self.leq(z, x) for x in xs)]
        for z in lower:
            if all(self.leq(w, z) for w in lower):
                return z
        raise ModelShapeError(f"no greatest lower bound for {xs}")

    def label(self, a):
        return self.labels[a]


@dataclass(frozen=True, eq=False)
class DerivedOca(TableOca):
    """The algebra of closed stack sets of a valid :class:`FinitePaks`.

    ``bits[i]`` is the stack bitset of element ``i``; the filter comes from
    the quasi-proofs ``qp``.
    """

    paks: Optional[FinitePaks] = None
    qp: int = 0
    bits: tuple = ()
    index: dict = field(default_factory=dict, repr=False)

    def inf(self, xs):
        union = 0
        for x in xs:
            union |= self.bits[x]
        return self.index[close_stacks(self.paks.rl, union)]

    def element(self, bits: int) -> int:
        """Carrier index of a closed stack bitset."""
        try:
            return self.index[bits]
        except KeyError:
            raise ValueError(f"stack set {bits:#b} is not closed") from None

    def realizers(self, a: int) -> int:
        """Terms orthogonal to every stack of ``a``, as a bitset."""
        return perp_of_stacks(self.paks.rl, self.bits[a])


def _stack_label(rl, bits):
    return "{" + ",".join(rl.stacks[p] for p in members(bits)) + "}"


def set_app(p: FinitePaks, P: int, Q: int) -> int:
    """``P o Q`` on stack bitsets: close the stacks ``pi`` with ``perp(Q).pi`` inside ``P``."""
    rl = p.rl
    return close_stacks(rl, conductor_right(rl, p.push, perp_of_stacks(rl, Q), P))


def set_arrow(p: FinitePaks, P: int, Q: int) -> int:
    rl = p.rl
    return close_stacks(rl, push_image(p.push, perp_of_stacks(rl, P), Q))


def derive_oca(p, qp: Optional[int] = None) -> DerivedOca:
    """Build the derived algebra from a valid :class:`FinitePaks` or :class:`FiniteAks`.

    Without an explicit quasi-proof set the minimal one (closure of
    ``{K, S, cc}`` under application) defines the filter.
    """
    if isinstance(p, FiniteAks):
        qp = p.qp if qp is None else qp
        p = p.paks
    rep = p.report
    for a in AXIOMS:
        if not rep[a].holds:
            raise InvalidPaks(a, rep[a].witness)
    if qp is None:
        qp = minimal_qp(p)
    rl = p.rl
    bits = tuple(c.bits for c in enumerate_closed_stack_sets(rl))
    index = {b: i for i, b in enumerate(bits)}
    n = len(bits)
    # a <= b iff a contains b
    leq = tuple(tuple(bits[b] & ~bits[a] == 0 for b in range(n)) for a in range(n))
    app = tuple(tuple(index[set_app(p, bits[a], bits[b])] for b in range(n)) for a in range(n))
    arrow = tuple(tuple(index[set_arrow(p, bits[a], bits[b])] for b in range(n)) for a in range(n))

    def of_term(t):
        return index[perp_of_terms(rl, 1 << t)]

    E = combinator_E(p)
    filt = tuple(perp_of_stacks(rl, b) & qp != 0 for b in bits)
    return DerivedOca(
        leq_table=leq, app_table=app, arrow_table=arrow,
        k=of_term(p.K), s=of_term(p.S), e=of_term(p.app[E][E]), c=of_term(p.cc),
        filter=filt, labels=tuple(_stack_label(rl, b) for b in bits),
        paks=p, qp=qp, bits=bits, index=index,
    )


def oca_app(o: Oca, a: int, b: int) -> int:
    return o.app(a, b)


def oca_arrow(o: Oca, a: int, b: int) -> int:
    return o.arrow(a, b)


def oca_inf(o: Oca, xs: Iterable[int]) -> int:
    return o.inf(xs)


def derive_filter(aks: FiniteAks):
    """Membership predicate of the filter of quasi-proof-realized elements."""
    o = derive_oca(aks)
    return o.in_filter


# ---------------------------------------------------------------------------
# conformance kit


@dataclass(frozen=True)
class LawResult:
    holds: bool
    cases: int
    witness: Optional[tuple] = None


def _sweep(gen, pred):
    n = 0
    for args in gen:
        n += 1
        if not pred(*args):
            return LawResult(False, n, args)
    return LawResult(True, n)


def _pairs(o):
    return itertools.product(o.carrier, repeat=2)


def _triples(o):
    return itertools.product(o.carrier, repeat=3)


def law_preorder(o):
    r = _sweep(((a,) for a in o.carrier), lambda a: o.leq(a, a))
    if not r.holds:
        return r
    return _sweep(_triples(o), lambda a, b, c: not (o.leq(a, b) and o.leq(b, c)) or o.leq(a, c))


def law_antisymmetric(o):
    return _sweep(_pairs(o), lambda a, b: not (o.leq(a, b) and o.leq(b, a)) or a == b)


def law_app_monotone(o):
    return _sweep(
        itertools.product(o.carrier, repeat=4),
        lambda a, a2, b, b2: not (o.leq(a, a2) and o.leq(b, b2)) or o.leq(o.app(a, b), o.app(a2, b2)),
    )


def law_k(o):
    return _sweep(_pairs(o), lambda a, b: o.leq(o.ap(o.k, a, b), a))


def law_s(o):
    return _sweep(_triples(o), lambda a, b, c: o.leq(o.ap(o.s, a, b, c), o.app(o.app(a, c), o.app(b, c))))


def law_arrow_monotone(o):
    return _sweep(
        itertools.product(o.carrier, repeat=4),
        lambda a, a2, b, b2: not (o.leq(a2, a) and o.leq(b, b2)) or o.leq(o.arrow(a, b), o.arrow(a2, b2)),
    )


def law_half_adjunction(o):
    return _sweep(_triples(o), lambda a, b, c: not o.leq(a, o.arrow(b, c)) or o.leq(o.app(a, b), c))


def law_adjunctor(o):
    return _sweep(_triples(o), lambda a, b, c: not o.leq(o.app(a, b), c) or o.leq(o.app(o.e, a), o.arrow(b, c)))


def law_peirce(o):
    if o.c is None:
        return LawResult(True, 0)
    return _sweep(_pairs(o), lambda a, b: o.leq(o.c, o.arrow(o.arrow(o.arrow(a, b), a), a)))


def law_filter(o):
    for name in ("k", "s", "e", "c"):
        v = getattr(o, name)
        if v is not None and not o.in_filter(v):
            return LawResult(False, 0, (name,))
    r = _sweep(_pairs(o), lambda a, b: not (o.in_filter(a) and o.in_filter(b)) or o.in_filter(o.app(a, b)))
    if not r.holds:
        return r
    return _sweep(_pairs(o), lambda a, b: not (o.in_filter(a) and o.leq(a, b)) or o.in_filter(b))


def law_inf(o):
    """``inf`` is the greatest lower bound on every subset of the carrier."""
    n = 0
    for r in range(o.size + 1):
        for xs in itertools.combinations(o.carrier, r):
            n += 1
            m = o.inf(xs)
            if not all(o.leq(m, x) for x in xs):
                return LawResult(False, n, xs)
            for z in o.carrier:
                if all(o.leq(z, x) for x in xs) and not o.leq(z, m):
                    return LawResult(False, n, xs)
    return LawResult(True, n)


def law_bottom_absorbs(o):
    bot = o.bottom
    return _sweep(((a,) for a in o.carrier), lambda a: o.app(bot, a) == bot)


LAWS = {
    "preorder": law_preorder,
    "app-monotone": law_app_monotone,
    "k": law_k,
    "s": law_s,
    "arrow-monotone": law_arrow_monotone,
    "half-adjunction": law_half_adjunction,
    "adjunctor": law_adjunctor,
    "peirce": law_peirce,
    "filter": law_filter,
    "inf": law_inf,
    "bottom-absorbs": law_bottom_absorbs,
}

# reported but never required
OBSERVATIONS = {
    "antisymmetric": law_antisymmetric,
}


def check_oca_laws(o: Oca, laws: Optional[Iterable[str]] = None) -> dict:
    """Run the named laws (all by default); returns ``{name: LawResult}``."""
    names = list(LAWS) if laws is None else list(laws)
    out = {}
    for name in names:
        fn = LAWS.get(name) or OBSERVATIONS.get(name)
        if fn is None:
            raise KeyError(f"unknown law {name!r}")
        out[name] = fn(o)
    return out


def stronger_adjunction_instances(o: DerivedOca) -> list:
    """Triples ``(a, b, c)`` where ``c <= a o b`` holds without ``a <= b -> c``.

    The converse direction always holds; an empty list means the full
    equivalence happens to hold on this instance.
    """
    return [
        (a, b, c) for a, b, c in _triples(o)
        if o.leq(o.app(a, b), c) and not o.leq(a, o.arrow(b, c))
    ]


# ---------------------------------------------------------------------------
# serialization


def oca_to_json(o: Oca) -> dict:
    n = o.size
    return {
        "size": n,
        "labels": [o.label(a) for a in range(n)],
        "leq": [[int(o.leq(a, b)) for b in range(n)] for a in range(n)],
        "app": [[o.app(a, b) for b in range(n)] for a in range(n)],
        "arrow": [[o.arrow(a, b) for b in range(n)] for a in range(n)],
        "k": o.k, "s": o.s, "e": o.e, "c": o.c,
        "filter": [a for a in range(n) if o.in_filter(a)],
    }


def oca_from_json(doc: dict) -> TableOca:
    try:
        n = int(doc["size"])
        filt = set(doc.get("filter", range(n)))
        return TableOca(
            leq_table=doc["leq"], app_table=doc["app"], arrow_table=doc["arrow"],
            k=doc["k"], s=doc["s"], e=doc["e"], c=doc.get("c"),
            filter=tuple(a in filt for a in range(n)),
            labels=tuple(doc.get("labels") or ()),
        )
    except KeyError as exc:
        raise SchemaError(str(exc.args[0]), "missing field") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError("oca", str(exc)) from None
