"""Binary incorporation trees (IBFs / B-forms) and the S-form <-> B-form encoding.

A ``Branch`` incorporates its ``dep`` subtree into its ``head`` subtree
through an edge label.  Along a head-line the lowest branch holds the
rightmost (narrowest-scope) dependent of the S-form node.

Text notation: a leaf is ``pred`` or ``pred(x1,...,xn)``; a branch is
``((dep LABEL) head)``, e.g. ``((peter +h1) hate(h1,h2))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .core import DET, ParseError, SDET, SForm, SLabel, TokenStream, iter_nodes, parse_leaf_head


@dataclass(frozen=True)
class Leaf:
    pred: str
    argvars: tuple = ()
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "argvars", tuple(self.argvars))
        object.__setattr__(self, "fv", frozenset(self.argvars))


@dataclass(frozen=True)
class Branch:
    dep: "IBF"
    label: SLabel
    head: "IBF"
    # S-form path of the dependent this branch was encoded from, if any
    origin: tuple | None = field(default=None, compare=False, repr=False)
    fv: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fv = self.dep.fv | self.head.fv
        if self.label.mode != DET:
            fv = fv - {self.label.var}
        object.__setattr__(self, "fv", frozenset(fv))


IBF = Union[Leaf, Branch]


@dataclass(frozen=True)
class BForm:
    root: IBF

    def __str__(self):
        return print_bform(self.root)


@dataclass(frozen=True)
class IBFViolation:
    kind: str  # overlap, missing-binder, duplicate-argvar, duplicate-declaration, not-closed
    path: str
    variables: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} at {self.path or 'root'}: {self.detail}"


class IBFError(ValueError):
    def __init__(self, violation, sform_path=None):
        self.violation = violation
        self.sform_path = sform_path
        where = ""
        if sform_path is not None:
            where = f" (S-form node {'/'.join(map(str, sform_path)) or 'root'})"
        super().__init__(f"{violation}{where}")


def _branch_violations(t: Branch, path):
    out = []
    overlap = t.dep.fv & t.head.fv
    if overlap:
        names = tuple(sorted(overlap))
        out.append(IBFViolation("overlap", path, names,
                                f"free variables {', '.join(names)} occur on both sides"))
    if t.label.mode == "+" and t.label.var not in t.head.fv:
        out.append(IBFViolation("missing-binder", path, (t.label.var,),
                                f"{t.label} binds {t.label.var}, which is not free in the head"))
    if t.label.mode == "-" and t.label.var not in t.dep.fv:
        out.append(IBFViolation("missing-binder", path, (t.label.var,),
                                f"{t.label} binds {t.label.var}, which is not free in the dependent"))
    return out


def _leaf_violations(t: Leaf, path):
    if len(set(t.argvars)) != len(t.argvars):
        return [IBFViolation("duplicate-argvar", path, t.argvars,
                             f"repeated argument variable on {t.pred}")]
    return []


def free_vars(t: IBF, path="") -> frozenset:
    """Recompute free variables, raising ``IBFError`` on the first clause violation."""
    if isinstance(t, Leaf):
        for v in _leaf_violations(t, path):
            raise IBFError(v)
        return frozenset(t.argvars)
    dep = free_vars(t.dep, path + "d")
    head = free_vars(t.head, path + "h")
    for v in _branch_violations(t, path):
        raise IBFError(v)
    fv = dep | head
    if t.label.mode != DET:
        fv = fv - {t.label.var}
    return fv


def check_ibf(t: IBF) -> list:
    """Every clause violation in ``t``; paths are strings over ``d``/``h``."""
    out = []

    def walk(node, path):
        if isinstance(node, Leaf):
            out.extend(_leaf_violations(node, path))
            return
        walk(node.dep, path + "d")
        walk(node.head, path + "h")
        out.extend(_branch_violations(node, path))

    walk(t, "")
    return out


def iter_branches(t: IBF, path=""):
    """Post-order ``(path, branch)`` pairs."""
    if isinstance(t, Branch):
        yield from iter_branches(t.dep, path + "d")
        yield from iter_branches(t.head, path + "h")
        yield path, t


def head_leaf(t: IBF) -> Leaf:
    while isinstance(t, Branch):
        t = t.head
    return t


# --- encoding -------------------------------------------------------------

def encode_ibf(s: SForm, path=()) -> IBF:
    """Structural encoding with no validity checks."""
    acc = Leaf(s.pred, s.argvars)
    for i in reversed(range(len(s.children))):
        label, child = s.children[i]
        acc = Branch(encode_ibf(child, path + (i,)), label, acc, origin=path + (i,))
    return acc


def _sform_path(t: IBF, bpath):
    """S-form node reached by a B-form path, as (S-form path, branch or None)."""
    node = t
    spath = ()
    for step in bpath:
        if step == "d":
            spath = node.origin
        node = node.dep if step == "d" else node.head
    return spath, node


def _closure_violation(t):
    names = tuple(sorted(t.fv))
    return IBFViolation("not-closed", "", names,
                        f"free variables {', '.join(names)} remain at the root")


def validate_sform(s: SForm) -> list:
    """Clause and closedness violations, each paired with the S-form path it concerns.

    Returns ``(sform_path, IBFViolation)`` tuples; for a branch the S-form
    path is the dependent being incorporated.
    """
    t = encode_ibf(s)
    out = []
    for v in check_ibf(t):
        node = t
        for step in v.path:
            node = node.dep if step == "d" else node.head
        spath = node.origin if isinstance(node, Branch) else _sform_path(t, v.path)[0]
        out.append((spath, v))
    if t.fv:
        out.append(((), _closure_violation(t)))
    seen = {}
    for spath, node in iter_nodes(s):
        for v in node.argvars:
            if v in seen:
                out.append((spath, IBFViolation(
                    "duplicate-declaration", "", (v,),
                    f"variable {v} is declared again on {node.pred} (first at "
                    f"{'/'.join(map(str, seen[v])) or 'root'})")))
            else:
                seen[v] = spath
    return out


def encode(s: SForm) -> BForm:
    """Encode ``s``; raises ``IBFError`` on its first violation (so ``s`` is no S-form)."""
    problems = validate_sform(s)
    if problems:
        spath, violation = problems[0]
        raise IBFError(violation, spath)
    return BForm(encode_ibf(s))


def decode(b) -> SForm:
    t = b.root if isinstance(b, BForm) else b
    deps = []
    while isinstance(t, Branch):
        deps.append((t.label, decode(t.dep)))
        t = t.head
    return SForm(t.pred, t.argvars, tuple(deps))


def make_bform(t: IBF) -> BForm:
    """Wrap ``t`` as a B-form after checking every clause and closedness."""
    violations = check_ibf(t)
    if violations:
        raise IBFError(violations[0])
    if t.fv:
        raise IBFError(_closure_violation(t))
    return BForm(t)


# --- text notation --------------------------------------------------------

def print_bform(t) -> str:
    if isinstance(t, BForm):
        t = t.root
    if isinstance(t, Leaf):
        return f"{t.pred}({','.join(t.argvars)})" if t.argvars else t.pred
    return f"(({print_bform(t.dep)} {t.label}) {print_bform(t.head)})"


def _parse_item(ts: TokenStream) -> IBF:
    tok = ts.peek()
    if tok.kind == "word":
        pred, argvars, _ = parse_leaf_head(ts)
        return Leaf(pred, tuple(argvars))
    ts.expect("(", "'(' or a leaf")
    ts.expect("(", "'(' opening a dependent")
    dep = _parse_item(ts)
    ltok = ts.expect("word", "edge label")
    text = ltok.text
    if text == DET:
        label = SDET
    elif len(text) > 1 and text[0] in "+-":
        try:
            label = SLabel(text[0], text[1:])
        except ValueError:
            raise ParseError(f"unknown label {text!r}", ltok.line, ltok.col) from None
    else:
        raise ParseError(f"unknown label {text!r}", ltok.line, ltok.col)
    ts.expect(")", "')'")
    head = _parse_item(ts)
    ts.expect(")", "')'")
    return Branch(dep, label, head)


def parse_ibf(text: str) -> IBF:
    ts = TokenStream(text)
    t = _parse_item(ts)
    tok = ts.peek()
    if tok.kind != "eof":
        raise ts.error(f"trailing input {tok.text!r}", tok)
    return t


def parse_bform(text: str) -> BForm:
    return make_bform(parse_ibf(text))


def looks_like_bform(text: str) -> bool:
    ts = TokenStream(text)
    first, second = ts.peek(), ts.peek(1)
    return first.kind == "word" or (first.kind == "(" and second.kind == "(")
