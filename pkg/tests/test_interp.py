import pytest

from trees import NOT_LIKE, HATES, NOT_LIKE_S, NOT_LIKE_B
from oracles import evaluate, sform_denotation, small_models
from sdep.bform import BForm, Branch, Leaf, encode, parse_bform
from sdep.core import SDET, SLabel, parse_sform, parse_uform
from sdep.interp import (
    InterpretationError, LexiconError, RuleError, apply_rule, bind_and_compose, builtin_rules,
    dedup, interpret, interpret_all, interpret_uform, match_rules, parse_lexicon, parse_rules,
    type_leaf,
)
from sdep.scoping import enumerate_scopings
from sdep.terms import (
    E, GQ_TYPE, T, Abs, And, App, Arrow, Const, Var, alpha_eq, apply, arrows, pretty,
)

ET = Arrow(E, T)
MODELS = list(small_models())

peter = Const("peter", E)
john = Const("john", E)
woman = Const("woman", ET)
every = Const("every", GQ_TYPE)
hate = Const("hate", arrows(E, E, T))
h1, h2 = Var("h1", E), Var("h2", E)
restriction = Abs("h2", E, And(App(woman, h2), apply(hate, peter, h2)))


def truth_table(term):
    return tuple(evaluate(term, m) for m in MODELS)


def test_builtin_table():
    assert [str(r) for r in builtin_rules()] == [
        "C1 + T->S T LR", "C2 + e e->t RL", "C3 det T->S T LR",
        "C4 - T->S T LR", "C5 - e->t e->t INTERSECT"]


def test_match_rules():
    ids = lambda found: [r.id for r in found]
    assert ids(match_rules("+", E, ET)) == ["C2"]
    assert ids(match_rules("+", Arrow(ET, T), ET)) == ["C1"]
    assert ids(match_rules("det", GQ_TYPE, ET)) == ["C3"]
    assert ids(match_rules("-", Arrow(T, T), T)) == ["C4"]
    assert ids(match_rules("-", ET, ET)) == ["C5"]
    assert match_rules("+", E, E) == []
    # C1's metavariables must bind consistently
    assert match_rules("+", Arrow(ET, T), E) == []


def test_apply_rules():
    c = {r.id: r for r in builtin_rules()}
    assert apply_rule(c["C2"], peter, Abs("h1", E, apply(hate, h1, h2))) == apply(hate, peter, h2)
    got = apply_rule(c["C5"], Abs("h2", E, apply(hate, peter, h2)), woman)
    assert alpha_eq(got, restriction)
    assert pretty(got) == "λh2.woman(h2)∧hate(peter,h2)"
    assert pretty(apply_rule(c["C3"], every, restriction)) == \
        "λP.every(λh2.woman(h2)∧hate(peter,h2),P)"


def test_type_leaf(lex):
    assert type_leaf("john", (), lex) == john
    assert type_leaf("hate", ("h1", "h2"), lex) == apply(hate, h1, h2)
    with pytest.raises(LexiconError, match="known arities: 2"):
        type_leaf("hate", ("h1",), lex)
    with pytest.raises(LexiconError, match="no lexicon entry"):
        type_leaf("fido", (), lex)


def test_bind_and_compose(lex):
    term, rule = bind_and_compose(SLabel.plus("h1"), peter, apply(hate, h1, h2))
    assert (term, rule) == (apply(hate, peter, h2), "C2")
    term, rule = bind_and_compose(SLabel.minus("h2"), apply(hate, peter, h2), woman)
    assert rule == "C5" and alpha_eq(term, restriction)
    term, rule = bind_and_compose(SDET, every, restriction)
    assert rule == "C3" and alpha_eq(term, App(every, restriction))
    with pytest.raises(InterpretationError, match="no composition rule"):
        bind_and_compose(SDET, john, woman)


def test_golden_derivation(not_like_s, lex):
    it = interpret(encode(not_like_s), lex)
    expected = apply(Const("not", Arrow(T, T)), apply(
        every, restriction, Abs("l2", E, apply(Const("like", arrows(E, E, T)), john,
                                               Var("l2", E)))))
    assert alpha_eq(it.term, expected) and it.type == T
    assert [(s.path, s.rule) for s in it.trace] == [
        ("hhdhd", "C2"), ("hhdh", "C5"), ("hhd", "C3"), ("hh", "C1"), ("h", "C4"), ("", "C2")]
    shown = [f"{pretty(s.result)}:{s.result_type}" for s in it.trace]
    assert shown[0] == "hate(peter,h2):t"
    assert shown[1].startswith("λh2.woman(h2)∧hate(peter,h2):")
    assert pretty(it.trace[2].result) == "λP.every(λh2.woman(h2)∧hate(peter,h2),P)"
    assert pretty(it.trace[3].result) == "every(λh2.woman(h2)∧hate(peter,h2),λl2.like(l1,l2))"
    assert pretty(it.trace[4].result).startswith("not(every(")


def test_head_line_types(not_like_s, lex):
    it = interpret(encode(not_like_s), lex)
    by_head = {}
    for step in it.trace:
        by_head.setdefault(step.head_pred, []).append(step.result_type)
    assert by_head["like"] == [T, T, T]
    assert by_head["hate"] == [T]


def test_bform_and_sform_inputs_agree(not_like_s, lex):
    a = interpret(encode(not_like_s), lex)
    b = interpret(parse_bform(NOT_LIKE_B), lex)
    assert a.term == b.term


def test_leaf_has_empty_trace(lex):
    it = interpret(BForm(Leaf("john")), lex)
    assert it.term == john and it.type == E and it.trace == ()


def test_non_closed_rejected(lex):
    # an IBF that still has l1 free
    ibf = Branch(Leaf("peter"), SLabel.plus("l2"), Leaf("like", ("l1", "l2")))
    with pytest.raises(InterpretationError, match="free variables l1"):
        interpret(ibf, lex)


def test_not_like_readings_match_model_oracle(not_like, lex):
    report = interpret_uform(not_like, lex)
    assert report.scopings == 6 and not report.failures and not report.truncated
    assert len(report.readings) == 2
    terms = [r.interpretation.term for r in report.readings]
    wide_every = parse_sform(
        "(like(l1,l2) (+l1 john) (+l2 (woman (det every) (-h2 (hate(h1,h2) (+h1 peter))))) "
        "(-n1 not(n1)))")
    golden = interpret(encode(parse_sform(NOT_LIKE_S)), lex).term
    assert any(alpha_eq(t, golden) for t in terms)
    # the other reading, built independently from the ordered tree
    oracle = tuple(sform_denotation(wide_every, m) for m in MODELS)
    other = [t for t in terms if not alpha_eq(t, golden)]
    assert len(other) == 1
    assert truth_table(other[0]) == oracle
    assert pretty(other[0]) == "every(λh2.woman(h2)∧hate(peter,h2),λl2.not(like(john,l2)))"
    assert truth_table(golden) != oracle


@pytest.mark.parametrize("text,count", [(NOT_LIKE, 6), (HATES, 4)])
def test_every_scoping_agrees_with_oracle(text, count, lex):
    scopings = list(enumerate_scopings(parse_uform(text)))
    assert len(scopings) == count
    tables = set()
    for s in scopings:
        it = interpret(encode(s), lex)
        table = truth_table(it.term)
        assert table == tuple(sform_denotation(s, m) for m in MODELS)
        tables.add(table)
    report = interpret_uform(parse_uform(text), lex)
    # readings equal modulo alpha exactly when their truth tables agree here
    assert len(report.readings) == len(tables)


def test_hates_single_reading(hates, lex):
    report = interpret_uform(hates, lex)
    assert len(report.readings) == 1
    assert pretty(report.readings[0].interpretation.term) == \
        "every(λl2.woman(l2)∧not(like(john,l2)),λh2.hate(peter,h2))"


def test_single_node_uform(lex):
    report = interpret_uform(parse_uform("(john)"), lex)
    assert report.scopings == 1 and len(report.readings) == 1


def test_max_scopings_truncates(not_like, lex):
    report = interpret_uform(not_like, lex, max_scopings=2)
    assert report.scopings == 2 and report.truncated


def test_failures_are_reported(lex):
    report = interpret_uform(parse_uform("(like (1 john) (2 fido))"), lex)
    assert report.readings == [] and report.scopings == len(report.failures) == 2
    assert all("fido" in msg for _, msg in report.failures)


def test_lexicon_parsing():
    lex = parse_lexicon("# comment\nsee/2 : e, e => t\nmary : e  # trailing\n")
    assert len(lex) == 2 and ("see", 2) in lex
    for bad, msg in [("see/2 : e => t", "arity 2"), ("mary e", "missing ':'"),
                     ("x : T", "metavariables"), ("a : e\na : e", "duplicate"),
                     ("a : e->", "line 1")]:
        with pytest.raises(LexiconError, match=msg):
            parse_lexicon(bad)


def test_rule_parsing():
    rules = parse_rules("X1 + e e->t rl\n@builtin\n")
    assert [r.id for r in rules] == ["X1", "C1", "C2", "C3", "C4", "C5"]
    for bad, msg in [("C1 + e", "5 fields"), ("R * e e->t RL", "unknown mode"),
                     ("R + e e->t UP", "unknown action"), ("R + e t LR", "arrow"),
                     ("R - e t INTERSECT", "INTERSECT"), ("C2 + e e->t RL\n@builtin", "duplicate")]:
        with pytest.raises(RuleError, match=msg):
            parse_rules(bad)


def test_ambiguity_strict_vs_all(not_like_s, lex):
    # a second complement rule that also matches e + e->t
    rules = parse_rules("@builtin\nC2b + e e->t RL\n")
    with pytest.raises(InterpretationError, match="ambiguous") as info:
        interpret(encode(not_like_s), lex, rules)
    assert info.value.path == "hhdhd"
    found = interpret_all(encode(not_like_s), lex, rules)
    # two choices at each of the two complement steps with an e dependent
    assert len(found) == 4
    assert len(dedup(found)) == 1
    assert {s.rule for it in found for s in it.trace} >= {"C2", "C2b"}


def test_custom_rules_replace_builtin(not_like_s, lex):
    rules = parse_rules("C2 + e e->t RL\n")
    with pytest.raises(InterpretationError, match="no composition rule"):
        interpret(encode(not_like_s), lex, rules)
