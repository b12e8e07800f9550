"""Bottom-up semantic interpretation of B-forms.

Leaves are typed from a lexicon.  Each branch first binds its label variable
by abstraction (on the head for ``+x``, on the dependent for ``-x``, nothing
for ``det``), then combines the two translations with the first composition
rule whose mode and type patterns match.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources

from .bform import BForm, IBF, Leaf, encode
from .core import DET, SLabel
from .scoping import enumerate_scopings
from .terms import (
    And, Abs, App, Arrow, Const, E, Meta, T, Var, alpha_eq, all_names, arrows, beta_normalize,
    format_type, free_vars, fresh_name, parse_type, pretty, type_of,
)

log = logging.getLogger(__name__)


class InterpretationError(ValueError):
    def __init__(self, message, path=None):
        self.path = path
        where = f" at {path or 'root'}" if path is not None else ""
        super().__init__(f"{message}{where}")


class LexiconError(InterpretationError):
    pass


class RuleError(InterpretationError):
    pass


# --- lexicon --------------------------------------------------------------

@dataclass(frozen=True)
class LexEntry:
    arg_types: tuple
    result_type: object

    @property
    def const_type(self):
        return arrows(*self.arg_types, self.result_type)


class Lexicon:
    """Leaf typing table keyed by ``(pred, arity)``."""

    def __init__(self, entries=None):
        self.entries = dict(entries or {})

    def add(self, pred, arg_types, result_type):
        self.entries[(pred, len(arg_types))] = LexEntry(tuple(arg_types), result_type)

    def lookup(self, pred, arity):
        try:
            return self.entries[(pred, arity)]
        except KeyError:
            arities = sorted(a for p, a in self.entries if p == pred)
            if arities:
                raise LexiconError(f"{pred} has no lexicon entry of arity {arity} "
                                   f"(known arities: {', '.join(map(str, arities))})") from None
            raise LexiconError(f"no lexicon entry for {pred}") from None

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)


def parse_lexicon(text: str) -> Lexicon:
    """Read ``pred/arity : ty1,...,tyn => result`` lines; ``john : e`` for arity 0."""
    lex = Lexicon()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, _, body = line.partition(":")
            if not body:
                raise ValueError("missing ':'")
            head = head.strip()
            pred, _, arity_text = head.partition("/")
            arity = int(arity_text) if arity_text else 0
            if "=>" in body:
                args_text, _, result_text = body.partition("=>")
                arg_types = [parse_type(a) for a in args_text.split(",") if a.strip()]
            else:
                arg_types, result_text = [], body
            result = parse_type(result_text)
            if len(arg_types) != arity:
                raise ValueError(f"arity {arity} but {len(arg_types)} argument types")
            if any(_has_meta(ty) for ty in arg_types + [result]):
                raise ValueError("lexicon types cannot contain metavariables")
            if (pred.strip(), arity) in lex:
                raise ValueError(f"duplicate entry {pred}/{arity}")
            lex.add(pred.strip(), arg_types, result)
        except ValueError as exc:
            raise LexiconError(f"lexicon line {lineno}: {exc}") from None
    return lex


def _has_meta(ty):
    if isinstance(ty, Meta):
        return True
    if isinstance(ty, Arrow):
        return _has_meta(ty.dom) or _has_meta(ty.cod)
    return False


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return parse_lexicon(f.read())


def sample_lexicon() -> Lexicon:
    """The bundled lexicon for the running example (john, peter, like, ...)."""
    return parse_lexicon(resources.files("sdep.data").joinpath("sample.lex").read_text("utf-8"))


def type_leaf(pred, argvars, lex: Lexicon):
    entry = lex.lookup(pred, len(argvars))
    term = Const(pred, entry.const_type)
    for v, ty in zip(argvars, entry.arg_types):
        term = App(term, Var(v, ty))
    return term


# --- composition rules ----------------------------------------------------

PLUS, MINUS = "+", "-"
LR, RL, INTERSECT = "LR", "RL", "INTERSECT"
SET_TYPE = Arrow(E, T)


@dataclass(frozen=True)
class CompRule:
    id: str
    mode: str
    left: object
    right: object
    action: str

    def __post_init__(self):
        if self.mode not in (PLUS, MINUS, DET):
            raise RuleError(f"rule {self.id}: unknown mode {self.mode!r}")
        if self.action == LR:
            fun, arg = self.left, self.right
        elif self.action == RL:
            fun, arg = self.right, self.left
        elif self.action == INTERSECT:
            if self.left != SET_TYPE or self.right != SET_TYPE:
                raise RuleError(f"rule {self.id}: INTERSECT needs e->t on both sides")
            return
        else:
            raise RuleError(f"rule {self.id}: unknown action {self.action!r}")
        if not isinstance(fun, Arrow) or fun.dom != arg:
            raise RuleError(f"rule {self.id}: {self.action} needs the function pattern to be "
                            f"an arrow taking the other pattern")

    def result_pattern(self):
        if self.action == LR:
            return self.left.cod
        if self.action == RL:
            return self.right.cod
        return SET_TYPE

    def __str__(self):
        return (f"{self.id} {self.mode} {format_type(self.left)} {format_type(self.right)} "
                f"{self.action}")


BUILTIN_RULES_TEXT = """\
C1 + T->S T LR
C2 + e e->t RL
C3 det T->S T LR
C4 - T->S T LR
C5 - e->t e->t INTERSECT
"""


def parse_rules(text: str, builtin=None) -> list:
    """Read ``id mode Lpattern Rpattern action`` lines.

    A line ``@builtin`` splices in the built-in table at that point.
    """
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "@builtin":
            rules.extend(builtin if builtin is not None else builtin_rules())
            continue
        fields = line.split()
        if len(fields) != 5:
            raise RuleError(f"rule line {lineno}: expected 5 fields, got {len(fields)}")
        rid, mode, left, right, action = fields
        try:
            rules.append(CompRule(rid, mode, parse_type(left), parse_type(right), action.upper()))
        except ValueError as exc:
            raise RuleError(f"rule line {lineno}: {exc}") from None
    ids = [r.id for r in rules]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise RuleError(f"duplicate rule ids: {', '.join(dupes)}")
    return rules


def builtin_rules() -> list:
    return parse_rules(BUILTIN_RULES_TEXT, builtin=[])


def load_rules(path) -> list:
    with open(path, encoding="utf-8") as f:
        return parse_rules(f.read())


def unify(pattern, ty, bindings):
    """One-way match of a type pattern against a concrete type."""
    if isinstance(pattern, Meta):
        bound = bindings.get(pattern.name)
        if bound is None:
            return {**bindings, pattern.name: ty}
        return bindings if bound == ty else None
    if isinstance(pattern, Arrow):
        if not isinstance(ty, Arrow):
            return None
        b = unify(pattern.dom, ty.dom, bindings)
        return None if b is None else unify(pattern.cod, ty.cod, b)
    return bindings if pattern == ty else None


def match_rules(mode, left_type, right_type, rules=None) -> list:
    rules = builtin_rules() if rules is None else rules
    out = []
    for rule in rules:
        if rule.mode != mode:
            continue
        b = unify(rule.left, left_type, {})
        if b is not None and unify(rule.right, right_type, b) is not None:
            out.append(rule)
    return out


def apply_rule(rule: CompRule, left, right):
    """Combine two translations with ``rule`` and beta-normalize."""
    if rule.action == LR:
        result = App(left, right)
    elif rule.action == RL:
        result = App(right, left)
    else:
        result = _intersect(left, right)
    return beta_normalize(result)


def _intersect(left, right):
    # reuse the dependent's binder name where possible: λx.R(x) ∧ L(x)
    avoid = set(free_vars(left)) | set(free_vars(right))
    name = None
    for side in (left, right):
        if isinstance(side, Abs) and side.var not in avoid:
            name = side.var
            break
    if name is None:
        name = fresh_name("x", avoid | all_names(left) | all_names(right))
    x = Var(name, E)
    return Abs(name, E, And(App(right, x), App(left, x)))


# --- binding and composition ----------------------------------------------

def _mode(label: SLabel):
    return label.mode


def _var_type(var, term, var_types):
    if var_types and var in var_types:
        return var_types[var]
    found = free_vars(term).get(var)
    if found is None:
        raise InterpretationError(f"variable {var} is not free in the side that should bind it")
    return found


def bind(label: SLabel, dep, head, var_types=None):
    """Apply the variable-binding step; returns ``(mode, left, right)``."""
    if label.mode == PLUS:
        x = label.var
        return PLUS, dep, Abs(x, _var_type(x, head, var_types), head)
    if label.mode == MINUS:
        x = label.var
        return MINUS, Abs(x, _var_type(x, dep, var_types), dep), head
    return DET, dep, head


def _candidates(label, dep, head, rules, strict, var_types):
    mode, left, right = bind(label, dep, head, var_types)
    lt, rt = type_of(left), type_of(right)
    found = match_rules(mode, lt, rt, rules)
    if not found:
        raise InterpretationError(
            f"no composition rule for mode {mode} with L:{format_type(lt)} R:{format_type(rt)}")
    if strict and len(found) > 1:
        raise InterpretationError(
            f"ambiguous composition for mode {mode} with L:{format_type(lt)} "
            f"R:{format_type(rt)}: rules {', '.join(r.id for r in found)} all apply")
    return left, lt, right, rt, found


def bind_and_compose(label: SLabel, dep, head, rules=None, *, strict=True, var_types=None):
    """Bind, then compose with the matching rule; returns ``(term, rule_id)``.

    In strict mode more than one matching rule is an error; otherwise the
    first in table order wins.
    """
    left, _, right, _, found = _candidates(label, dep, head, rules, strict, var_types)
    return apply_rule(found[0], left, right), found[0].id


# --- interpretation -------------------------------------------------------

@dataclass(frozen=True)
class Step:
    path: str
    rule: str
    label: SLabel
    head_pred: str
    left: object
    left_type: object
    right: object
    right_type: object
    result: object
    result_type: object

    def format(self, unicode=False):
        def show(term, ty):
            return f"{pretty(term, unicode)} : {format_type(ty, unicode)}"

        return (f"{self.path or 'root'}: {self.rule}  {show(self.left, self.left_type)}  "
                f"{show(self.right, self.right_type)}  =>  {show(self.result, self.result_type)}")

    def as_dict(self):
        return {
            "path": self.path, "rule": self.rule, "label": str(self.label), "head": self.head_pred,
            "left": pretty(self.left, False), "left_type": format_type(self.left_type),
            "right": pretty(self.right, False), "right_type": format_type(self.right_type),
            "result": pretty(self.result, False), "result_type": format_type(self.result_type),
        }


@dataclass(frozen=True)
class Interpretation:
    term: object
    type: object
    trace: tuple = ()

    def __str__(self):
        return f"{pretty(self.term)} : {format_type(self.type, True)}"


def _root(b):
    return b.root if isinstance(b, BForm) else b


def _interpret(t: IBF, lex, rules, path, all_derivations):
    """Yield ``(term, var_types, head_pred, steps)`` for every derivation of ``t``."""
    if isinstance(t, Leaf):
        entry = lex.lookup(t.pred, len(t.argvars))
        yield type_leaf(t.pred, t.argvars, lex), dict(zip(t.argvars, entry.arg_types)), t.pred, ()
        return
    deps = _interpret(t.dep, lex, rules, path + "d", all_derivations)
    for dep, dep_vars, _, dep_steps in deps:
        for head, head_vars, head_pred, head_steps in _interpret(
                t.head, lex, rules, path + "h", all_derivations):
            var_types = {**dep_vars, **head_vars}
            try:
                left, lt, right, rt, found = _candidates(
                    t.label, dep, head, rules, not all_derivations, var_types)
            except InterpretationError as exc:
                raise InterpretationError(str(exc), path) from None
            if t.label.mode != DET:
                var_types.pop(t.label.var, None)
            for rule in found:
                result = apply_rule(rule, left, right)
                step = Step(path, rule.id, t.label, head_pred, left, lt, right, rt,
                            result, type_of(result))
                yield result, var_types, head_pred, dep_steps + head_steps + (step,)


def interpret(b, lex: Lexicon, rules=None, *, strict=True) -> Interpretation:
    """Interpret a B-form; in strict mode every step must match exactly one rule."""
    rules = builtin_rules() if rules is None else rules
    results = interpret_all(b, lex, rules, strict=strict)
    return results[0]


def interpret_all(b, lex: Lexicon, rules=None, *, strict=False) -> list:
    """Every derivation, forking wherever several rules match."""
    rules = builtin_rules() if rules is None else rules
    root = _root(b)
    out = []
    for term, _, _, steps in _interpret(root, lex, rules, "", all_derivations=not strict):
        leftover = free_vars(term)
        if leftover:
            raise InterpretationError(
                f"translation {pretty(term, False)} keeps free variables "
                f"{', '.join(sorted(leftover))}")
        out.append(Interpretation(term, type_of(term), steps))
        if strict:
            break
    return out


def dedup(interpretations) -> list:
    out = []
    for it in interpretations:
        if not any(alpha_eq(it.term, o.term) and it.type == o.type for o in out):
            out.append(it)
    return out


@dataclass
class Reading:
    sform: object
    interpretation: Interpretation


@dataclass
class UFormInterpretation:
    readings: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (SForm, error message)
    scopings: int = 0
    truncated: bool = False


def interpret_uform(u, lex: Lexicon, rules=None, *, strict=True, max_scopings=None,
                    permute_det=False) -> UFormInterpretation:
    """Interpret every scoping of ``u`` and keep one witness per distinct reading."""
    rules = builtin_rules() if rules is None else rules
    report = UFormInterpretation()
    for s in enumerate_scopings(u, permute_det=permute_det):
        if max_scopings is not None and report.scopings >= max_scopings:
            report.truncated = True
            break
        report.scopings += 1
        try:
            b = encode(s)
            found = interpret_all(b, lex, rules, strict=strict)
        except (InterpretationError, ValueError, TypeError) as exc:
            log.debug("scoping %s failed: %s", s, exc)
            report.failures.append((s, str(exc)))
            continue
        for it in found:
            if not any(alpha_eq(it.term, r.interpretation.term) for r in report.readings):
                report.readings.append(Reading(s, it))
    return report
