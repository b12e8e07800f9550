import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import SIGNATURE, VAR_NAMES, random_term, term_depth
from oracles import db_normalize, db_subst_free, to_db
from sdep.terms import (
    E, GQ_TYPE, T, Abs, And, App, Arrow, Const, Meta, NormalizationError, TypeCheckError, Var,
    alpha_eq, apply, arrows, beta_normalize, format_type, free_vars, is_normal, parse_type,
    pretty, substitute, type_of,
)

ET = Arrow(E, T)
every = Const("every", GQ_TYPE)
woman = Const("woman", ET)
john = Const("john", E)
like = Const("like", arrows(E, E, T))
x, y = Var("x", E), Var("y", E)
P = Var("P", ET)


def test_type_of_examples():
    assert type_of(apply(like, john, x)) == T
    assert type_of(Abs("x", E, App(woman, x))) == ET
    assert type_of(App(every, woman)) == Arrow(ET, T)
    assert type_of(And(App(woman, x), App(woman, john))) == T


def test_type_errors():
    with pytest.raises(TypeCheckError) as info:
        type_of(And(Var("p", E), Var("q", T)))
    assert info.value.path == ("left",)
    with pytest.raises(TypeCheckError, match="does not match"):
        type_of(App(woman, woman))
    with pytest.raises(TypeCheckError, match="applying"):
        type_of(App(john, john))
    with pytest.raises(TypeCheckError, match="bound at"):
        type_of(Abs("x", T, App(woman, x)))


def test_free_vars():
    t = Abs("x", E, apply(like, x, y))
    assert free_vars(t) == {"y": E}
    assert free_vars(john) == {}


def test_substitute_plain():
    assert substitute(App(woman, x), "x", john) == App(woman, john)
    # bound occurrences are left alone
    t = Abs("x", E, App(woman, x))
    assert substitute(t, "x", john) == t


def test_substitute_avoids_capture():
    t = Abs("y", E, apply(like, x, y))
    out = substitute(t, "x", y)
    assert isinstance(out, Abs) and out.var != "y"
    assert alpha_eq(out, Abs("z", E, apply(like, y, Var("z", E))))
    assert free_vars(out) == {"y": E}


def test_substitute_type_mismatch():
    with pytest.raises(TypeCheckError):
        substitute(App(woman, x), "x", woman)


def test_beta_examples():
    S = Var("S", ET)
    t = App(Abs("P", ET, apply(every, Var("R", ET), P)), S)
    assert beta_normalize(t) == apply(every, Var("R", ET), S)
    k = Abs("x", E, Abs("y", E, x))
    assert beta_normalize(apply(k, y, john)) == y
    assert beta_normalize(john) == john


def test_beta_budget():
    # (\f. f (f j)) applied repeatedly needs more than two steps
    f = Var("f", Arrow(E, E))
    twice = Abs("f", Arrow(E, E), App(f, App(f, john)))
    ident = Abs("x", E, x)
    with pytest.raises(NormalizationError):
        beta_normalize(App(twice, ident), budget=2)
    assert beta_normalize(App(twice, ident), budget=3) == john


def test_alpha_eq():
    assert alpha_eq(Abs("x", E, App(woman, x)), Abs("z", E, App(woman, Var("z", E))))
    assert not alpha_eq(Abs("x", E, App(woman, x)), Abs("x", E, App(woman, y)))
    assert not alpha_eq(Abs("x", E, x), Abs("x", T, Var("x", T)))
    a, b = App(woman, x), App(woman, john)
    assert not alpha_eq(And(a, b), And(b, a))
    # free vs bound
    assert not alpha_eq(Abs("y", E, x), Abs("x", E, x))


def test_pretty():
    R, S = Const("R", ET), Const("S", ET)
    assert pretty(apply(every, R, S)) == "every(R,S)"
    assert pretty(App(every, R)) == "λP.every(R,P)"
    assert pretty(x) == "x"
    t = Abs("h2", E, And(App(woman, Var("h2", E)), apply(like, john, Var("h2", E))))
    assert pretty(t) == "λh2.woman(h2)∧like(john,h2)"
    assert pretty(t, unicode=False) == "\\h2.woman(h2) & like(john,h2)"
    assert pretty(App(Abs("x", E, App(woman, x)), john)) == "(λx.woman(x))(john)"


def test_types_text():
    assert format_type(GQ_TYPE) == "(e->t)->(e->t)->t"
    assert format_type(GQ_TYPE, unicode=True) == "(e→t)→(e→t)→t"
    assert parse_type("(e->t)->(e->t)->t") == GQ_TYPE
    assert parse_type("e → t") == ET
    assert parse_type("T->S") == Arrow(Meta("T"), Meta("S"))
    for bad in ("", "e->", "(e", "e t"):
        with pytest.raises(ValueError):
            parse_type(bad)


# --- properties over random well-typed terms --------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)
TYPES = [E, T, ET, Arrow(ET, T)]


def _term(seed):
    rng = random.Random(seed)
    ty = rng.choice(TYPES)
    return random_term(rng, ty, depth=6), ty


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_generator_respects_bounds(seed):
    t, ty = _term(seed)
    assert type_of(t) == ty
    assert term_depth(t) <= 6


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_normalization_preserves_type_and_terminates(seed):
    t, ty = _term(seed)
    n = beta_normalize(t)
    assert type_of(n) == ty
    assert is_normal(n)
    assert alpha_eq(beta_normalize(n), n)
    assert to_db(n) == db_normalize(to_db(t))


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_substitution_matches_nameless_oracle(seed):
    rng = random.Random(seed)
    t = random_term(rng, rng.choice(TYPES), depth=5, env={"x": E})
    s = random_term(rng, E, depth=3)
    out = substitute(t, "x", s)
    assert type_of(out) == type_of(t)
    assert to_db(out) == db_subst_free(to_db(t), "x", to_db(s))
    if "x" in free_vars(t):
        # nothing free in s got captured
        assert set(free_vars(s)) <= set(free_vars(out))


@settings(max_examples=300, deadline=None)
@given(seeds, seeds, seeds)
def test_alpha_eq_is_equivalence(s1, s2, s3):
    a, _ = _term(s1)
    b, _ = _term(s2)
    c, _ = _term(s3)
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)
    assert alpha_eq(a, b) == (to_db(a) == to_db(b))


def test_signature_is_closed():
    for c in SIGNATURE:
        assert free_vars(c) == {}
    assert "x" in VAR_NAMES
