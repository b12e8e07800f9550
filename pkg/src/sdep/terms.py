"""Simply typed lambda terms over the base types ``e`` and ``t``.

Terms are immutable: ``Const``, ``Var``, ``App``, ``Abs`` and a primitive
conjunction ``And``.  Constants are curried; ``f(a,b)`` is only a printing
convention for ``App(App(f, a), b)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Union


# --- types ----------------------------------------------------------------

@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "SemType"
    cod: "SemType"

    def __str__(self):
        return format_type(self)


@dataclass(frozen=True)
class Meta:
    """A type metavariable; only appears in composition-rule patterns."""

    name: str

    def __str__(self):
        return self.name


SemType = Union[Base, Arrow, Meta]

E = Base("e")
T = Base("t")


def arrows(*types):
    """``arrows(a, b, c)`` is ``a -> b -> c``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def format_type(ty, unicode=False) -> str:
    arrow = "→" if unicode else "->"
    if isinstance(ty, Arrow):
        left = format_type(ty.dom, unicode)
        if isinstance(ty.dom, Arrow):
            left = f"({left})"
        return f"{left}{arrow}{format_type(ty.cod, unicode)}"
    return str(ty)


_TYPE_TOKEN = re.compile(r"\s*(->|→|[()]|[A-Za-z][A-Za-z0-9_]*)")


def parse_type(text: str) -> SemType:
    """Parse ``e``, ``t``, ``A->B`` (right associative) and parentheses.

    Names starting with an uppercase letter are metavariables.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad type syntax at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    i = 0

    def atom():
        nonlocal i
        tok = tokens[i]
        if tok == "(":
            i += 1
            ty = arrow()
            if tokens[i] != ")":
                raise ValueError(f"missing ')' in type {text!r}")
            i += 1
            return ty
        if tok in ("e", "t"):
            i += 1
            return E if tok == "e" else T
        if tok and tok[0].isupper():
            i += 1
            return Meta(tok)
        raise ValueError(f"unexpected {tok!r} in type {text!r}")

    def arrow():
        nonlocal i
        left = atom()
        if tokens[i] in ("->", "→"):
            i += 1
            return Arrow(left, arrow())
        return left

    ty = arrow()
    if tokens[i] is not None:
        raise ValueError(f"trailing {tokens[i]!r} in type {text!r}")
    return ty


# --- terms ----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    name: str
    ty: SemType


@dataclass(frozen=True)
class Var:
    name: str
    ty: SemType


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    var: str
    varty: SemType
    body: "Term"


@dataclass(frozen=True)
class And:
    left: "Term"
    right: "Term"


Term = Union[Const, Var, App, Abs, And]


def apply(f, *args):
    for a in args:
        f = App(f, a)
    return f


class TypeCheckError(TypeError):
    def __init__(self, message, path=(), expected=None, found=None):
        self.path = tuple(path)
        self.expected = expected
        self.found = found
        where = "/".join(self.path) or "root"
        super().__init__(f"{message} at {where}")


def type_of(t: Term, _env=None, _path=()) -> SemType:
    env = _env or {}
    if isinstance(t, Const):
        return t.ty
    if isinstance(t, Var):
        bound = env.get(t.name)
        if bound is not None and bound != t.ty:
            raise TypeCheckError(
                f"variable {t.name} used at type {format_type(t.ty)} but bound at "
                f"{format_type(bound)}", _path, bound, t.ty)
        return t.ty
    if isinstance(t, App):
        fty = type_of(t.fun, env, _path + ("fun",))
        aty = type_of(t.arg, env, _path + ("arg",))
        if not isinstance(fty, Arrow):
            raise TypeCheckError(f"applying a term of type {format_type(fty)}", _path, None, fty)
        if fty.dom != aty:
            raise TypeCheckError(
                f"argument type {format_type(aty)} does not match {format_type(fty.dom)}",
                _path, fty.dom, aty)
        return fty.cod
    if isinstance(t, Abs):
        inner = dict(env)
        inner[t.var] = t.varty
        return Arrow(t.varty, type_of(t.body, inner, _path + ("body",)))
    if isinstance(t, And):
        for side, sub in (("left", t.left), ("right", t.right)):
            ty = type_of(sub, env, _path + (side,))
            if ty != T:
                raise TypeCheckError(f"conjunct of type {format_type(ty)}", _path + (side,), T, ty)
        return T
    raise TypeError(f"not a term: {t!r}")


def free_vars(t: Term) -> dict:
    """Free variable names mapped to their types."""
    out = {}

    def walk(node, bound):
        if isinstance(node, Var):
            if node.name not in bound:
                out.setdefault(node.name, node.ty)
        elif isinstance(node, App):
            walk(node.fun, bound)
            walk(node.arg, bound)
        elif isinstance(node, Abs):
            walk(node.body, bound | {node.var})
        elif isinstance(node, And):
            walk(node.left, bound)
            walk(node.right, bound)

    walk(t, frozenset())
    return out


def all_names(t: Term) -> set:
    if isinstance(t, (Var, Const)):
        return {t.name}
    if isinstance(t, App):
        return all_names(t.fun) | all_names(t.arg)
    if isinstance(t, Abs):
        return {t.var} | all_names(t.body)
    if isinstance(t, And):
        return all_names(t.left) | all_names(t.right)
    return set()


def fresh_name(base, avoid) -> str:
    stem = base.rstrip("0123456789") or "x"
    for k in itertools.count(1):
        name = f"{stem}{k}"
        if name not in avoid:
            return name


def substitute(t: Term, x: str, s: Term) -> Term:
    """``t[x := s]`` without capturing free variables of ``s``."""
    sty = type_of(s)
    s_free = set(free_vars(s))

    def sub(node):
        if isinstance(node, Var):
            if node.name != x:
                return node
            if node.ty != sty:
                raise TypeCheckError(
                    f"substituting a {format_type(sty)} term for {x}:{format_type(node.ty)}",
                    (), node.ty, sty)
            return s
        if isinstance(node, Const):
            return node
        if isinstance(node, App):
            return App(sub(node.fun), sub(node.arg))
        if isinstance(node, And):
            return And(sub(node.left), sub(node.right))
        if node.var == x or x not in free_vars(node.body):
            return node
        if node.var in s_free:
            new = fresh_name(node.var, s_free | all_names(node.body) | {x})
            body = rename_free(node.body, node.var, new)
            return Abs(new, node.varty, sub(body))
        return Abs(node.var, node.varty, sub(node.body))

    return sub(t)


def rename_free(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of ``old``; ``new`` must not occur in ``t``."""
    if isinstance(t, Var):
        return Var(new, t.ty) if t.name == old else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(rename_free(t.fun, old, new), rename_free(t.arg, old, new))
    if isinstance(t, And):
        return And(rename_free(t.left, old, new), rename_free(t.right, old, new))
    if t.var == old:
        return t
    return Abs(t.var, t.varty, rename_free(t.body, old, new))


class NormalizationError(RuntimeError):
    pass


STEP_BUDGET = 10**6


def beta_normalize(t: Term, budget=STEP_BUDGET) -> Term:
    """Beta-normal form; no eta steps.  Raises after ``budget`` contractions."""
    steps = 0

    def nf(node):
        nonlocal steps
        if isinstance(node, (Var, Const)):
            return node
        if isinstance(node, Abs):
            return Abs(node.var, node.varty, nf(node.body))
        if isinstance(node, And):
            return And(nf(node.left), nf(node.right))
        fun = nf(node.fun)
        if isinstance(fun, Abs):
            steps += 1
            if steps > budget:
                raise NormalizationError(f"no normal form within {budget} beta steps")
            return nf(substitute(fun.body, fun.var, node.arg))
        return App(fun, nf(node.arg))

    return nf(t)


def is_normal(t: Term) -> bool:
    if isinstance(t, App):
        return not isinstance(t.fun, Abs) and is_normal(t.fun) and is_normal(t.arg)
    if isinstance(t, Abs):
        return is_normal(t.body)
    if isinstance(t, And):
        return is_normal(t.left) and is_normal(t.right)
    return True


def alpha_eq(a: Term, b: Term) -> bool:
    def eq(x, y, ex, ey, depth):
        if type(x) is not type(y):
            return False
        if isinstance(x, Const):
            return x == y
        if isinstance(x, Var):
            bx, by = ex.get(x.name), ey.get(y.name)
            if bx is None and by is None:
                return x == y
            return bx == by and x.ty == y.ty
        if isinstance(x, App):
            return eq(x.fun, y.fun, ex, ey, depth) and eq(x.arg, y.arg, ex, ey, depth)
        if isinstance(x, And):
            return eq(x.left, y.left, ex, ey, depth) and eq(x.right, y.right, ex, ey, depth)
        if x.varty != y.varty:
            return False
        return eq(x.body, y.body, {**ex, x.var: depth}, {**ey, y.var: depth}, depth + 1)

    return eq(a, b, {}, {}, 0)


# --- printing -------------------------------------------------------------

GQ_TYPE = arrows(arrows(E, T), arrows(E, T), T)


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def pretty(t: Term, unicode=True) -> str:
    """Render ``t`` as ``f(a,b)``, ``λx.B`` and ``A∧B``.

    A quantifier constant of type (e->t)->(e->t)->t applied to only its
    restriction prints as ``λP.q(R,P)``.  With ``unicode=False`` the output
    uses ``\\x.`` and ``&``.
    """
    lam = "λ" if unicode else "\\"
    conj = "∧" if unicode else " & "

    def show(node):
        if isinstance(node, (Var, Const)):
            return node.name
        if isinstance(node, Abs):
            return f"{lam}{node.var}.{show(node.body)}"
        if isinstance(node, And):
            left = show(node.left)
            if isinstance(node.left, (And, Abs)):
                left = f"({left})"
            right = show(node.right)
            if isinstance(node.right, Abs):
                right = f"({right})"
            return f"{left}{conj}{right}"
        head, args = _spine(node)
        shown = [show(a) for a in args]
        if isinstance(head, Const) and head.ty == GQ_TYPE and len(args) == 1:
            return f"{lam}P.{head.name}({shown[0]},P)"
        h = show(head)
        if not isinstance(head, (Var, Const)):
            h = f"({h})"
        return f"{h}({','.join(shown)})"

    return show(t)
