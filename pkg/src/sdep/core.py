"""Tree values shared by every stage, and their bracketed text notation.

Two kinds of tree are handled here:

* ``UForm``: an unordered dependency tree whose edges carry ``det``, ``i``
  or ``-i`` labels.  Children are kept sorted in canonical order, so plain
  equality of two ``UForm`` values is multiset-tree equality.
* ``SForm``: an ordered tree whose nodes declare argument variables and whose
  edges carry ``det``, ``+x`` or ``-x`` labels.  Sibling order is meaningful;
  the rightmost dependent takes the narrowest scope.

Text notation::

    (like (1 john) (-1 not) (2 (woman (det every) (-2 (hate (1 peter))))))
    (like(l1,l2) (+l1 john) (-n1 not(n1)) (+l2 (woman (det every) ...)))
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

DET = "det"

PRED_RE = re.compile(r"[a-z0-9_]+\Z")
VAR_RE = re.compile(r"[a-z][a-z0-9]*\Z")

# A U-form label is DET or a non-zero int: i > 0 is an argument edge,
# i < 0 an inverted (modifier) edge.
ULabel = Union[str, int]
Path = tuple


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")


def check_pred(name):
    if not isinstance(name, str) or not PRED_RE.match(name):
        raise ValueError(f"invalid predicate name {name!r}")
    return name


def check_var(name):
    if not isinstance(name, str) or not VAR_RE.match(name):
        raise ValueError(f"invalid variable name {name!r}")
    return name


def check_ulabel(label):
    if label == DET:
        return label
    if isinstance(label, bool) or not isinstance(label, int):
        raise ValueError(f"invalid U-form label {label!r}")
    if label == 0:
        raise ValueError("label index must be >= 1")
    return label


def ulabel_key(label):
    """Sort key: det first, then positive ascending, then negative ascending."""
    if label == DET:
        return (0, 0)
    if label > 0:
        return (1, label)
    return (2, -label)


def format_ulabel(label):
    return DET if label == DET else str(label)


@dataclass(frozen=True)
class SLabel:
    """Edge label of an S-form: ``det``, ``+var`` (complement) or ``-var`` (modifier)."""

    mode: str
    var: str | None = None

    def __post_init__(self):
        if self.mode == DET:
            if self.var is not None:
                raise ValueError("det label carries no variable")
        elif self.mode in ("+", "-"):
            check_var(self.var)
        else:
            raise ValueError(f"invalid S-form label mode {self.mode!r}")

    @classmethod
    def plus(cls, var):
        return cls("+", var)

    @classmethod
    def minus(cls, var):
        return cls("-", var)

    def __str__(self):
        return DET if self.mode == DET else f"{self.mode}{self.var}"


SDET = SLabel(DET)


@dataclass(frozen=True)
class UForm:
    pred: str
    children: tuple = ()

    def __post_init__(self):
        check_pred(self.pred)
        kids = []
        for label, child in self.children:
            check_ulabel(label)
            if not isinstance(child, UForm):
                raise TypeError(f"U-form child must be a UForm, got {type(child).__name__}")
            kids.append((label, child))
        kids.sort(key=lambda lc: (ulabel_key(lc[0]), print_uform(lc[1])))
        object.__setattr__(self, "children", tuple(kids))

    def __str__(self):
        return print_uform(self)


@dataclass(frozen=True)
class SForm:
    pred: str
    argvars: tuple = ()
    children: tuple = ()

    def __post_init__(self):
        check_pred(self.pred)
        argvars = tuple(self.argvars)
        for v in argvars:
            check_var(v)
        if len(set(argvars)) != len(argvars):
            raise ValueError(f"duplicate argument variable on node {self.pred}")
        object.__setattr__(self, "argvars", argvars)
        kids = tuple((label, child) for label, child in self.children)
        for label, child in kids:
            if not isinstance(label, SLabel) or not isinstance(child, SForm):
                raise TypeError("S-form children must be (SLabel, SForm) pairs")
        object.__setattr__(self, "children", kids)

    def __str__(self):
        return print_sform(self)


def node_at(tree, path):
    """Follow child indices from the root; raises IndexError on a bad path."""
    node = tree
    for i in path:
        if not isinstance(i, int) or not 0 <= i < len(node.children):
            raise IndexError(f"invalid path {tuple(path)!r}")
        node = node.children[i][1]
    return node


def iter_nodes(tree, path=()) -> Iterator[tuple]:
    """Pre-order ``(path, node)`` pairs."""
    yield path, tree
    for i, (_, child) in enumerate(tree.children):
        yield from iter_nodes(child, path + (i,))


# --- printing -------------------------------------------------------------

def _node_head(tree):
    if isinstance(tree, SForm) and tree.argvars:
        return f"{tree.pred}({','.join(tree.argvars)})"
    return tree.pred


def _print(tree, fmt_label):
    parts = [_node_head(tree)]
    for label, child in tree.children:
        inner = _print(child, fmt_label)
        if child.children:
            inner = f"({inner})"
        parts.append(f"({fmt_label(label)} {inner})")
    return " ".join(parts)


def print_uform(u: UForm) -> str:
    return f"({_print(u, format_ulabel)})"


def print_sform(s: SForm) -> str:
    return f"({_print(s, str)})"


# --- parsing --------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<punct>[(),])|(?P<word>[+-]?[A-Za-z0-9_]+)|(?P<bad>\S))")


@dataclass
class Token:
    kind: str  # "(", ")", ",", "word", "eof"
    text: str
    line: int
    col: int
    spaced: bool  # whitespace immediately before this token


def tokenize(text):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        gap = text[pos:m.start(m.lastgroup)]
        for j, ch in enumerate(gap):
            if ch == "\n":
                line += 1
                line_start = pos + j + 1
        start = m.start(m.lastgroup)
        col = start - line_start + 1
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", line, col)
        kind = m.group("punct") or "word"
        tokens.append(Token(kind, m.group(m.lastgroup), line, col, bool(gap) or start == 0))
        pos = m.end()
    rest = text[pos:]
    for j, ch in enumerate(rest):
        if ch == "\n":
            line += 1
            line_start = pos + j + 1
    tokens.append(Token("eof", "", line, len(text) - line_start + 1, True))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.next()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise ParseError(f"expected {what or repr(kind)}, found {found!r}", tok.line, tok.col)
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)


def parse_leaf_head(ts: TokenStream):
    """``NAME`` or ``NAME(x1,...,xn)`` with the argument list glued to the name."""
    tok = ts.expect("word", "predicate name")
    if not PRED_RE.match(tok.text):
        raise ts.error(f"invalid predicate name {tok.text!r}", tok)
    argvars = []
    nxt = ts.peek()
    if nxt.kind == "(" and not nxt.spaced:
        ts.next()
        while True:
            v = ts.expect("word", "argument variable")
            if not VAR_RE.match(v.text):
                raise ts.error(f"invalid argument variable {v.text!r}", v)
            if v.text in argvars:
                raise ts.error(f"duplicate argument variable {v.text!r}", v)
            argvars.append(v.text)
            sep = ts.next()
            if sep.kind == ")":
                break
            if sep.kind != ",":
                raise ts.error("expected ',' or ')' in argument list", sep)
    return tok.text, argvars, tok


@dataclass
class _Raw:
    pred: str
    argvars: list
    children: list = field(default_factory=list)  # (label_token, _Raw)


def _parse_label(tok):
    text = tok.text
    if text == DET:
        return "det", DET
    if re.fullmatch(r"-?[0-9]+", text):
        value = int(text)
        if value == 0:
            raise ParseError("label index must be >= 1", tok.line, tok.col)
        return "num", value
    if text[0] in "+-" and VAR_RE.match(text[1:]):
        return "named", SLabel(text[0], text[1:])
    raise ParseError(f"unknown label {text!r}", tok.line, tok.col)


def _parse_body(ts, kinds):
    pred, argvars, _ = parse_leaf_head(ts)
    node = _Raw(pred, argvars)
    while ts.peek().kind == "(":
        ts.next()
        ltok = ts.expect("word", "edge label")
        kind, label = _parse_label(ltok)
        kinds.append((kind, ltok))
        if ts.peek().kind == "(":
            ts.next()
            child = _parse_body(ts, kinds)
            ts.expect(")", "')'")
        else:
            child = _parse_body_leafonly(ts)
        ts.expect(")", "')'")
        node.children.append((label, child))
    return node


def _parse_body_leafonly(ts):
    pred, argvars, _ = parse_leaf_head(ts)
    return _Raw(pred, argvars)


def _parse_raw(text):
    ts = TokenStream(text)
    kinds = []
    ts.expect("(", "'('")
    raw = _parse_body(ts, kinds)
    ts.expect(")", "')'")
    tok = ts.peek()
    if tok.kind != "eof":
        raise ts.error(f"trailing input {tok.text!r}", tok)
    return raw, kinds


def _has_argvars(raw):
    return bool(raw.argvars) or any(_has_argvars(c) for _, c in raw.children)


def detect_kind(text):
    """Return ``"uform"`` or ``"sform"`` from the label classes used in ``text``.

    A tree with only ``det`` labels and no argument lists reads as a U-form.
    """
    raw, kinds = _parse_raw(text)
    return _classify(raw, kinds)


def _classify(raw, kinds):
    num = [t for k, t in kinds if k == "num"]
    named = [t for k, t in kinds if k == "named"]
    if num and named:
        tok = named[0] if num[0].line < named[0].line or (
            num[0].line == named[0].line and num[0].col < named[0].col) else num[0]
        raise ParseError("numeric and named labels cannot be mixed", tok.line, tok.col)
    if named or _has_argvars(raw):
        return "sform"
    return "uform"


def parse_uform(text: str) -> UForm:
    raw, kinds = _parse_raw(text)
    for kind, tok in kinds:
        if kind == "named":
            raise ParseError(f"named label {tok.text!r} in a U-form", tok.line, tok.col)
    if _has_argvars(raw):
        raise ParseError("argument lists are not allowed in a U-form")

    def build(r):
        return UForm(r.pred, tuple((lab, build(c)) for lab, c in r.children))

    return build(raw)


def parse_sform(text: str) -> SForm:
    raw, kinds = _parse_raw(text)
    for kind, tok in kinds:
        if kind == "num":
            raise ParseError(f"numeric label {tok.text!r} in an S-form", tok.line, tok.col)

    def build(r):
        kids = tuple((SDET if lab == DET else lab, build(c)) for lab, c in r.children)
        return SForm(r.pred, tuple(r.argvars), kids)

    return build(raw)


def parse_tree(text):
    """Parse either kind of tree, auto-detected from its labels."""
    if detect_kind(text) == "sform":
        return parse_sform(text)
    return parse_uform(text)
