import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import DATA, FIXTURES, NONTRIVIAL, PINNED, oca_of
from realizability import hol
from realizability import poly as P
from realizability.errors import (
    CapacityExceeded,
    FreshnessViolation,
    KindError,
    ModelShapeError,
    ParseError,
    RuleMismatch,
    UnboundVariable,
)
from realizability.hol import (
    IND,
    O,
    SUCC,
    ZERO,
    App,
    Const,
    Forall,
    Implies,
    KArrow,
    Lam,
    Model,
    Node,
    Sequent,
    Var,
    check_derivation,
    interpret,
    interpret_any,
    leibniz,
    parse_formula,
    peano_model,
    peano_realizers,
    same_formula,
    satisfies,
    substitute,
)

VALID = sorted((DATA / "derivations" / "valid").glob("*.deriv"))
BROKEN = {
    "arrow_intro_subject": RuleMismatch,
    "forall_elim_wrong": RuleMismatch,
    "freshness": FreshnessViolation,
    "kind_error": KindError,
    "modus_ponens_mismatch": RuleMismatch,
    "parse_error": ParseError,
    "unbound": UnboundVariable,
    "undeclared_axiom": RuleMismatch,
}
PRED = KArrow(IND, O)
A, B = Var("A", O), Var("B", O)
x, y = Var("x", IND), Var("y", IND)
Pv = Var("P", PRED)


def models():
    return [(name, n, peano_model(oca_of(name), n)) for name in FIXTURES for n in (2, 3)]


def test_kinds_and_rendering():
    k = hol.parse_kind("I -> I -> o")
    assert k == KArrow(IND, KArrow(IND, O))
    assert str(k) == "I -> I -> o"
    assert str(hol.parse_kind("(I -> o) -> o")) == "(I -> o) -> o"
    with pytest.raises(KindError):
        hol.parse_kind("N")
    with pytest.raises(KindError):
        App(Pv, A)


def test_substitution_avoids_capture():
    body = Forall(y, Implies(App(Pv, x), App(Pv, y)))
    out = substitute(body, x, y)
    assert isinstance(out, Forall) and out.var != y
    assert out.body.left == App(Pv, y)
    with pytest.raises(KindError):
        substitute(body, x, A)


def test_formula_comparison():
    f1 = parse_formula("forall u:I. P u => P u", hol.Signature(vars={"P": PRED}))
    f2 = parse_formula("forall v:I. P v => P v", hol.Signature(vars={"P": PRED}))
    assert same_formula(f1, f2)
    redex = App(Lam(y, App(Pv, y)), ZERO)
    assert same_formula(redex, App(Pv, ZERO))
    assert not same_formula(App(Pv, ZERO), App(Pv, App(SUCC, ZERO)))
    assert hol.render(hol.FALSUM) == "bot"


def test_single_axiom_and_arrow_intro():
    ax = Node("n1", "ax", (), Sequent((("x", A),), P.Var("x"), A))
    assert check_derivation(ax).formula == A
    intro = Node("n2", "->i", (ax,), Sequent((), P.App(P.E, P.ap(P.S, P.K, P.K)), Implies(A, A)))
    assert P.render(check_derivation(intro).subject) == "e (s k k)"
    bad = Node("n2", "forall-i", (ax,), Sequent((("x", A),), P.Var("x"), Forall(A, A)))
    with pytest.raises(FreshnessViolation):
        check_derivation(bad)
    reserved = Node("n1", "ax", (), Sequent((("k", A),), P.Var("k"), A))
    with pytest.raises(RuleMismatch):
        check_derivation(reserved)


def test_corpus_covers_every_rule():
    used = set()
    for path in VALID:
        used |= hol.rules_used(hol.load_derivation(path))
    assert used == set(hol.RULES)
    assert len(VALID) >= 10
    assert len(BROKEN) >= 5


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.stem)
def test_valid_derivations_are_adequate(path):
    seq = check_derivation(hol.load_derivation(path))
    for name, n, m in models():
        res = satisfies(m, seq)
        assert res.holds, (name, n, res.counterexample)
        assert res.cases > 0


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.stem)
def test_closed_realizers_use_filter_constants(path):
    seq = check_derivation(hol.load_derivation(path))
    if seq.context:
        return
    assert not P.free_vars(seq.subject)
    for name in FIXTURES:
        o = oca_of(name)
        assert all(o.in_filter(P.resolve(o, c)) for c in P.constants(seq.subject))


@pytest.mark.parametrize("stem,error", sorted(BROKEN.items()))
def test_broken_derivations(stem, error):
    path = DATA / "derivations" / "broken" / f"{stem}.deriv"
    with pytest.raises(error):
        check_derivation(hol.load_derivation(path))


def test_derivation_file_errors(tmp_path):
    with pytest.raises(ParseError):
        hol.parse_derivation("var A : o\nn1 ->i n0 :: |- x : A\n")
    with pytest.raises(ParseError):
        hol.parse_derivation("var A : o\nn1 ax :: x : A |- x : A\nroot n9\n")
    with pytest.raises(ParseError):
        hol.parse_derivation("# nothing\n")
    with pytest.raises(ParseError):
        hol.load_derivation(tmp_path / "missing.deriv")


def test_interpretation_clauses():
    o = oca_of(PINNED)
    m = peano_model(o, 2)
    for a, b in itertools.product(o.carrier, repeat=2):
        assert interpret(m, Implies(A, B), {A: a, B: b}) == o.arrow(a, b)
    single = Model(o, {"U": ("*",)})
    u = Var("u", hol.KConst("U"))
    Q = Var("Q", KArrow(hol.KConst("U"), O))
    for f in single.values(Q.kind):
        assert interpret(single, Forall(u, App(Q, u)), {Q: f}) == f("*")
    assert interpret(m, hol.FALSUM) == o.bottom
    with pytest.raises(UnboundVariable):
        interpret(m, A)
    with pytest.raises(KindError):
        interpret(m, ZERO)


@pytest.mark.parametrize("name", NONTRIVIAL)
def test_leibniz_two_ways(name):
    o = oca_of(name)
    m = peano_model(o, 2)
    for v in m.values(IND):
        unfolded = interpret(m, leibniz(IND, x, x), {x: v})
        direct = o.inf(o.arrow(f(v), f(v)) for f in m.values(PRED))
        assert unfolded == direct


def test_satisfaction_examples():
    o = oca_of(PINNED)
    m = Model(o, {}, {"T": o.top})
    top = Sequent((), P.Const(o.top), Const("T", O))
    assert satisfies(m, top).holds
    wrong = Sequent((("x", A),), P.Var("x"), B)
    res = satisfies(peano_model(o, 2), wrong)
    assert not res.holds
    asg, bs = res.counterexample["assignment"], res.counterexample["b"]
    assert not o.leq(bs["x"], asg["B"])


def test_capacity_guard():
    o = oca_of("gen_6x4")
    m = Model(o, {"I": tuple(range(4))}, max_items=1000)
    with pytest.raises(CapacityExceeded):
        m.values(KArrow(IND, O))


def i_terms():
    return st.sampled_from([ZERO, App(SUCC, ZERO), x, y, App(SUCC, x)])


def formulas():
    atoms = st.one_of(st.just(A), st.builds(lambda t: App(Pv, t), i_terms()))

    def extend(sub):
        return st.one_of(
            st.builds(Implies, sub, sub),
            st.builds(lambda f: Forall(y, f), sub),
            st.builds(lambda f: Forall(A, f), sub),
        )
    return st.recursive(atoms, extend, max_leaves=4)


@given(formulas(), i_terms())
def test_substitution_commutes_with_semantics(f, mterm):
    o = oca_of(PINNED)
    m = peano_model(o, 2)
    fv = hol.free_vars(f) | hol.free_vars(mterm) | {x}
    for asg in hol.assignments(m, fv):
        left = interpret(m, substitute(f, x, mterm), asg)
        right = interpret(m, f, {**asg, x: interpret_any(m, mterm, asg)})
        assert left == right


def test_peano_examples():
    o = oca_of(PINNED)
    with pytest.raises(ModelShapeError):
        peano_realizers(peano_model(o, 1))
    m = peano_model(o, 2)
    ident = P.evaluate(o, hol.IDENTITY_REALIZER)
    assert o.leq(ident, interpret(m, leibniz(IND, ZERO, ZERO)))
    assert o.leq(P.evaluate(o, hol.SUCC_REALIZER), interpret(m, hol.succ_not_zero()))
    rep = peano_realizers(m)
    assert rep.ok and rep.equations


def test_nat_predicate():
    f = hol.nat_predicate("z")
    assert f.kind == O
    assert {v.name for v in hol.free_vars(f)} == {"z"}
    o = oca_of(PINNED)
    m = peano_model(o, 2)
    z = Var("z", IND)
    values = [interpret(m, f, {z: v}) for v in (0, 1)]
    assert all(v in o.carrier for v in values)


def test_model_from_doc():
    o = oca_of(PINNED)
    m = hol.model_from_doc({"kinds": {"I": 2}, "consts": {"0": {"kind": "I", "value": 0},
                                                          "succ": {"kind": "I -> I", "value": [1, 1]}}}, o)
    assert m.const_interp["succ"](0) == 1
    assert peano_realizers(m).ok


def nodes(root):
    for p in root.premises:
        yield from nodes(p)
    yield root


@pytest.mark.parametrize("name", FIXTURES)
def test_adequacy_rule_by_rule(name):
    m = peano_model(oca_of(name), 2)
    seen = set()
    for path in VALID:
        for node in nodes(hol.load_derivation(path)):
            prem_ok = all(satisfies(m, p.sequent).holds for p in node.premises)
            if prem_ok:
                assert satisfies(m, node.sequent).holds, (path.stem, node.id)
                seen.add(node.rule)
    assert seen == set(hol.RULES)
