"""Predicates over finite index sets with values in an algebra.

Index sets are tuples of hashable labels.  A :class:`Pred` maps each label
of its index set to a carrier element; an :class:`IndexMap` is a total
function between index sets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import IndexMismatch, SchemaError
from .oca_core import Oca
from .poly import I_POLY, Toolkit, evaluate


@dataclass(frozen=True)
class Pred:
    index: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.index) != len(self.values):
            raise SchemaError("values", "one value per index element required")
        if len(set(self.index)) != len(self.index):
            raise SchemaError("index", "duplicate labels")

    def __call__(self, i):
        return self.values[self.index.index(i)]

    @classmethod
    def from_dict(cls, d: dict) -> "Pred":
        return cls(tuple(d), tuple(d.values()))


@dataclass(frozen=True)
class IndexMap:
    source: tuple
    target: tuple
    image: tuple  # image[n] is the target label of source[n]

    def __post_init__(self):
        for name in ("source", "target", "image"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.image) != len(self.source):
            raise SchemaError("image", "map must be total on its source")
        if any(v not in self.target for v in self.image):
            raise SchemaError("image", "value outside the target")

    def __call__(self, j):
        return self.image[self.source.index(j)]

    @classmethod
    def identity(cls, index) -> "IndexMap":
        return cls(index, index, index)

    def then(self, other: "IndexMap") -> "IndexMap":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise IndexMismatch("composition of non-matching maps")
        return IndexMap(self.source, other.target, tuple(other(self(j)) for j in self.source))


def all_maps(source: tuple, target: tuple) -> Iterator[IndexMap]:
    for image in itertools.product(target, repeat=len(source)):
        yield IndexMap(source, target, image)


def all_preds(o: Oca, index: tuple) -> Iterator[Pred]:
    for values in itertools.product(o.carrier, repeat=len(index)):
        yield Pred(index, values)


def _same_index(phi: Pred, psi: Pred):
    if phi.index != psi.index:
        raise IndexMismatch(f"index {phi.index} differs from {psi.index}")


# ---------------------------------------------------------------------------
# orders


def entails(o: Oca, phi: Pred, psi: Pred):
    """``(holds, f)``: the first filter element ``f`` with ``f phi(i) <= psi(i)`` for all ``i``."""
    _same_index(phi, psi)
    pairs = list(zip(phi.values, psi.values))
    for f in o.carrier:
        if o.in_filter(f) and all(o.leq(o.app(f, a), b) for a, b in pairs):
            return True, f
    return False, None


def entails_holds(o, phi, psi) -> bool:
    return entails(o, phi, psi)[0]


def pointwise_leq(o: Oca, phi: Pred, psi: Pred) -> bool:
    _same_index(phi, psi)
    return all(o.leq(a, b) for a, b in zip(phi.values, psi.values))


def pointwise_sq(o: Oca, phi: Pred, psi: Pred) -> bool:
    _same_index(phi, psi)
    return all(
        any(o.in_filter(f) and o.leq(o.app(f, a), b) for f in o.carrier)
        for a, b in zip(phi.values, psi.values)
    )


def filter_minimum(o: Oca) -> Optional[int]:
    phi = o.filter_elements()
    for m in phi:
        if all(o.leq(m, f) for f in phi):
            return m
    return None


def pred_wedge(o: Oca, phi: Pred, psi: Pred) -> Pred:
    _same_index(phi, psi)
    tk = Toolkit(o)
    return Pred(phi.index, tuple(tk.wedge(a, b) for a, b in zip(phi.values, psi.values)))


def pred_arrow(o: Oca, phi: Pred, psi: Pred) -> Pred:
    _same_index(phi, psi)
    return Pred(phi.index, tuple(o.arrow(a, b) for a, b in zip(phi.values, psi.values)))


# ---------------------------------------------------------------------------
# equality, reindexing, quantification


def _eq_value(o: Oca, i, j) -> int:
    return evaluate(o, I_POLY) if i == j else o.bottom


def eq_pred(o: Oca, index: tuple) -> Pred:
    """Equality on ``index``: ``skk`` on the diagonal, bottom elsewhere."""
    pairs = tuple(itertools.product(index, repeat=2))
    return Pred(pairs, tuple(_eq_value(o, i, j) for i, j in pairs))


def reindex(alpha: IndexMap, psi: Pred) -> Pred:
    if psi.index != alpha.target:
        raise IndexMismatch(f"predicate index {psi.index} is not the map's target {alpha.target}")
    return Pred(alpha.source, tuple(psi(alpha(j)) for j in alpha.source))


def forall_along(o: Oca, alpha: IndexMap, phi: Pred) -> Pred:
    if phi.index != alpha.source:
        raise IndexMismatch(f"predicate index {phi.index} is not the map's source {alpha.source}")
    return Pred(alpha.target, tuple(
        o.inf(o.arrow(_eq_value(o, alpha(j), i), phi(j)) for j in alpha.source)
        for i in alpha.target
    ))


# ---------------------------------------------------------------------------
# pullbacks


@dataclass(frozen=True)
class PullbackSquare:
    """``alpha: J -> I``, ``beta: K -> I`` and their pullback ``P`` with
    projections ``rho: P -> J`` and ``pi: P -> K``."""

    alpha: IndexMap
    beta: IndexMap
    rho: IndexMap
    pi: IndexMap

    def __post_init__(self):
        a, b, r, p = self.alpha, self.beta, self.rho, self.pi
        if a.target != b.target or r.target != a.source or p.target != b.source or r.source != p.source:
            raise IndexMismatch("square does not type-check")
        P = r.source
        if any(a(r(z)) != b(p(z)) for z in P):
            raise SchemaError("square", "does not commute")
        pairs = [(r(z), p(z)) for z in P]
        fibre = [(j, k) for j in a.source for k in b.source if a(j) == b(k)]
        if len(set(pairs)) != len(pairs) or set(pairs) != set(fibre):
            raise SchemaError("square", "P is not the pullback")

    @classmethod
    def canonical(cls, alpha: IndexMap, beta: IndexMap) -> "PullbackSquare":
        if alpha.target != beta.target:
            raise IndexMismatch("maps must share a target")
        P = tuple((j, k) for j in alpha.source for k in beta.source if alpha(j) == beta(k))
        return cls(alpha, beta, IndexMap(P, alpha.source, tuple(j for j, _ in P)),
                   IndexMap(P, beta.source, tuple(k for _, k in P)))

    @classmethod
    def with_iso(cls, alpha, beta, P: tuple, iso: dict) -> "PullbackSquare":
        """A user-supplied apex ``P`` with an explicit bijection to the fibre product."""
        return cls(alpha, beta, IndexMap(P, alpha.source, tuple(iso[z][0] for z in P)),
                   IndexMap(P, beta.source, tuple(iso[z][1] for z in P)))


def check_beck_chevalley(o: Oca, sq: PullbackSquare, phi: Pred):
    """``(holds, detail)`` for both entailments between ``beta*(forall_alpha phi)``
    and ``forall_pi(rho* phi)``."""
    lhs = reindex(sq.beta, forall_along(o, sq.alpha, phi))
    rhs = forall_along(o, sq.pi, reindex(sq.rho, phi))
    fwd, f1 = entails(o, lhs, rhs)
    bwd, f2 = entails(o, rhs, lhs)
    return fwd and bwd, {"forward": f1, "backward": f2, "lhs": lhs.values, "rhs": rhs.values}


# ---------------------------------------------------------------------------
# generic predicate


def generic_predicate(o: Oca):
    """``(Sigma, T)`` with ``Sigma`` the carrier and ``T`` the identity predicate."""
    sigma = tuple(o.carrier)
    return sigma, Pred(sigma, sigma)


def classify(o: Oca, phi: Pred) -> IndexMap:
    """The map reindexing the generic predicate to ``phi``."""
    sigma, _ = generic_predicate(o)
    return IndexMap(phi.index, sigma, phi.values)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepResult:
    holds: bool
    cases: int
    witness: Optional[tuple] = None


def _index(n, tag="i"):
    return tuple(f"{tag}{x}" for x in range(n))


def sweep_meet_adjunction(o: Oca, max_index: int = 2) -> SweepResult:
    """``phi ^ psi |- theta`` iff ``phi |- psi -> theta`` for every triple."""
    cases = 0
    for n in range(1, max_index + 1):
        preds = list(all_preds(o, _index(n)))
        for phi, psi, theta in itertools.product(preds, repeat=3):
            cases += 1
            lhs = entails_holds(o, pred_wedge(o, phi, psi), theta)
            if lhs != entails_holds(o, phi, pred_arrow(o, psi, theta)):
                return SweepResult(False, cases, (phi.values, psi.values, theta.values))
    return SweepResult(True, cases)


def sweep_forall_adjunction(o: Oca, max_index: int = 2) -> SweepResult:
    """``alpha* psi |- phi`` iff ``psi |- forall_alpha phi`` for every map and pair."""
    cases = 0
    for nI in range(1, max_index + 1):
        for nJ in range(0, max_index + 1):
            I, J = _index(nI), _index(nJ, "j")
            for alpha in all_maps(J, I):
                for psi in all_preds(o, I):
                    for phi in all_preds(o, J):
                        cases += 1
                        lhs = entails_holds(o, reindex(alpha, psi), phi)
                        if lhs != entails_holds(o, psi, forall_along(o, alpha, phi)):
                            return SweepResult(False, cases, (alpha.image, psi.values, phi.values))
    return SweepResult(True, cases)


def sweep_beck_chevalley(o: Oca, max_index: int = 2) -> SweepResult:
    cases = 0
    sizes = range(1, max_index + 1)
    for nI, nJ, nK in itertools.product(sizes, repeat=3):
        I, J, K = _index(nI), _index(nJ, "j"), _index(nK, "k")
        for alpha in all_maps(J, I):
            for beta in all_maps(K, I):
                sq = PullbackSquare.canonical(alpha, beta)
                for phi in all_preds(o, J):
                    cases += 1
                    ok, _ = check_beck_chevalley(o, sq, phi)
                    if not ok:
                        return SweepResult(False, cases, (alpha.image, beta.image, phi.values))
    return SweepResult(True, cases)


def sweep_generic(o: Oca, max_index: int = 2) -> SweepResult:
    _, T = generic_predicate(o)
    cases = 0
    for n in range(0, max_index + 1):
        for phi in all_preds(o, _index(n)):
            cases += 1
            if reindex(classify(o, phi), T) != phi:
                return SweepResult(False, cases, (phi.values,))
    return SweepResult(True, cases)


def check_tripos(o: Oca, max_index: int = 2, beck_chevalley: bool = False) -> dict:
    out = {
        "meet-adjunction": sweep_meet_adjunction(o, max_index),
        "forall-adjunction": sweep_forall_adjunction(o, max_index),
        "generic-predicate": sweep_generic(o, max_index),
    }
    if beck_chevalley:
        out["beck-chevalley"] = sweep_beck_chevalley(o, max_index)
    return out
