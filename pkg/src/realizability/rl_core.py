"""Finite realizability lattices and the orthogonality Galois connection.

Subsets of terms and stacks are plain ``int`` bitsets: bit ``i`` is set when
the ``i``-th term (resp. stack) belongs to the set.  Closed sets are compared
by bitset equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import _limits
from .errors import CapacityExceeded, SchemaError


def bits_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def members(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class RealizabilityLattice:
    """Terms, stacks and a pole given as ``(term_index, stack_index)`` pairs."""

    terms: tuple[str, ...]
    stacks: tuple[str, ...]
    pole: frozenset[tuple[int, int]]
    # term_orth[t] is the bitset of stacks orthogonal to t; stack_orth dually
    term_orth: tuple[int, ...] = field(init=False, repr=False, compare=False)
    stack_orth: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "stacks", tuple(self.stacks))
        object.__setattr__(self, "pole", frozenset((int(t), int(p)) for t, p in self.pole))
        if not self.terms:
            raise SchemaError("terms", "must be non-empty")
        if not self.stacks:
            raise SchemaError("stacks", "must be non-empty")
        n, m = len(self.terms), len(self.stacks)
        term_orth = [0] * n
        stack_orth = [0] * m
        for t, p in self.pole:
            if not (0 <= t < n and 0 <= p < m):
                raise SchemaError("pole", f"pair ({t}, {p}) out of range")
            term_orth[t] |= 1 << p
            stack_orth[p] |= 1 << t
        object.__setattr__(self, "term_orth", tuple(term_orth))
        object.__setattr__(self, "stack_orth", tuple(stack_orth))

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[bool]], terms=None, stacks=None):
        """Build from a boolean ``|terms| x |stacks|`` orthogonality matrix."""
        n = len(rows)
        m = len(rows[0]) if n else 0
        terms = terms or tuple(f"T{i}" for i in range(n))
        stacks = stacks or tuple(f"P{j}" for j in range(m))
        pole = {(i, j) for i in range(n) for j in range(m) if rows[i][j]}
        return cls(terms, stacks, frozenset(pole))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def n_stacks(self) -> int:
        return len(self.stacks)

    @property
    def all_terms(self) -> int:
        return (1 << len(self.terms)) - 1

    @property
    def all_stacks(self) -> int:
        return (1 << len(self.stacks)) - 1

    def orth(self, t: int, p: int) -> bool:
        return bool(self.term_orth[t] >> p & 1)


def perp_of_terms(rl: RealizabilityLattice, terms: int) -> int:
    """Stacks orthogonal to every term of ``terms`` (``L`` maps to ``L^perp``)."""
    out = rl.all_stacks
    for t in members(terms):
        out &= rl.term_orth[t]
    return out


def perp_of_stacks(rl: RealizabilityLattice, stacks: int) -> int:
    out = rl.all_terms
    for p in members(stacks):
        out &= rl.stack_orth[p]
    return out


def close_stacks(rl: RealizabilityLattice, stacks: int) -> int:
    return perp_of_terms(rl, perp_of_stacks(rl, stacks))


def close_terms(rl: RealizabilityLattice, terms: int) -> int:
    return perp_of_stacks(rl, perp_of_terms(rl, terms))


@dataclass(frozen=True, order=True)
class ClosedStackSet:
    """A stack set fixed by bi-orthogonal closure; build it with :meth:`of`."""

    bits: int

    @classmethod
    def of(cls, rl: RealizabilityLattice, bits: int) -> "ClosedStackSet":
        if close_stacks(rl, bits) != bits:
            raise ValueError(f"stack set {bits:#b} is not closed")
        return cls(bits)


@dataclass(frozen=True, order=True)
class ClosedTermSet:
    bits: int

    @classmethod
    def of(cls, rl: RealizabilityLattice, bits: int) -> "ClosedTermSet":
        if close_terms(rl, bits) != bits:
            raise ValueError(f"term set {bits:#b} is not closed")
        return cls(bits)


def biorth_close_stacks(rl: RealizabilityLattice, stacks: int) -> ClosedStackSet:
    return ClosedStackSet(close_stacks(rl, stacks))


def biorth_close_terms(rl: RealizabilityLattice, terms: int) -> ClosedTermSet:
    return ClosedTermSet(close_terms(rl, terms))


def _closed_by_subsets(rl, limit):
    if (1 << rl.n_stacks) > limit:
        raise CapacityExceeded(f"2^{rl.n_stacks} subsets exceed bound {limit}")
    found = set()
    for subset in range(1 << rl.n_stacks):
        found.add(close_stacks(rl, subset))
    return found


def _closed_by_generators(rl, limit):
    # every closed set is the closure of the union of the singleton closures it contains
    generators = {close_stacks(rl, 1 << p) for p in range(rl.n_stacks)}
    found = {close_stacks(rl, 0)} | generators
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                c = close_stacks(rl, a | g)
                if c not in found:
                    found.add(c)
                    nxt.append(c)
                    if len(found) > limit:
                        raise CapacityExceeded(f"more than {limit} closed stack sets")
        frontier = nxt
    return found


def enumerate_closed_stack_sets(
    rl: RealizabilityLattice, strategy: str = "auto", max_items: int | None = None
) -> list[ClosedStackSet]:
    """All fixed points of the closure, sorted by bitset value.

    ``strategy`` is ``"subsets"`` (close all ``2^|stacks|`` subsets),
    ``"generators"`` (saturate joins of singleton closures) or ``"auto"``,
    which picks subsets up to 16 stacks.
    """
    limit = _limits.max_enum(max_items)
    if strategy == "auto":
        strategy = "subsets" if rl.n_stacks <= _limits.EXHAUSTIVE_STACK_LIMIT else "generators"
    if strategy == "subsets":
        found = _closed_by_subsets(rl, limit)
    elif strategy == "generators":
        found = _closed_by_generators(rl, limit)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return [ClosedStackSet(b) for b in sorted(found)]


def enumerate_closed_term_sets(rl: RealizabilityLattice) -> list[ClosedTermSet]:
    if (1 << rl.n_terms) > _limits.max_enum():
        raise CapacityExceeded(f"2^{rl.n_terms} subsets exceed bound")
    return [ClosedTermSet(b) for b in sorted({close_terms(rl, s) for s in range(1 << rl.n_terms)})]


def push_image(push: Sequence[Sequence[int]], terms: int, stacks: int) -> int:
    """The stack set ``L.P = {push(t, p) : t in L, p in P}``."""
    out = 0
    for t in members(terms):
        row = push[t]
        for p in members(stacks):
            out |= 1 << row[p]
    return out


def conductor_right(
    rl: RealizabilityLattice, push: Sequence[Sequence[int]], terms: int, stacks: int
) -> int:
    """Stacks ``p`` with ``{push(t, p) : t in terms}`` inside ``stacks``."""
    out = 0
    term_list = list(members(terms))
    for p in range(rl.n_stacks):
        if all(stacks >> push[t][p] & 1 for t in term_list):
            out |= 1 << p
    return out


def app_image(app: Sequence[Sequence[int]], left: int, right: int) -> int:
    """The term set ``LM = {app(t, u) : t in L, u in M}``."""
    out = 0
    for t in members(left):
        row = app[t]
        for u in members(right):
            out |= 1 << row[u]
    return out
