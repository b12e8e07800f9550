"""From U-forms to S-forms and back: ordering, argument naming, scope forgetting."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union

from .core import DET, SDET, SForm, SLabel, UForm, iter_nodes
from .uform import require_valid


@dataclass(frozen=True)
class OrderedUForm:
    pred: str
    children: tuple = ()  # ordered (label, OrderedUForm) pairs


Selector = Union[Mapping, Callable, None]


def _pick(selector, path, node):
    if selector is None:
        return None
    if callable(selector):
        return selector(path, node)
    return selector.get(tuple(path))


def order_uform(u: UForm, choice: Selector = None, _path=()) -> OrderedUForm:
    """Arrange the children of every node.

    ``choice`` maps a canonical node path to a permutation of that node's
    canonical child indices (leftmost first, i.e. widest scope first), or is
    a callable ``(path, node) -> permutation``.  Nodes it does not cover keep
    canonical order.
    """
    n = len(u.children)
    perm = _pick(choice, _path, u)
    if perm is None:
        perm = tuple(range(n))
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"permutation {perm} does not fit the {n} children of node "
                         f"{u.pred} at {_path}")
    return OrderedUForm(u.pred, tuple(
        (u.children[i][0], order_uform(u.children[i][1], choice, _path + (i,))) for i in perm))


def _to_uform(o: OrderedUForm) -> UForm:
    return UForm(o.pred, tuple((lab, _to_uform(c)) for lab, c in o.children))


def _iter_ordered(o, path=()):
    yield path, o
    for i, (_, c) in enumerate(o.children):
        yield from _iter_ordered(c, path + (i,))


class _FreshNames:
    """Names ``<initial><n>``, counting up per initial and skipping anything taken."""

    def __init__(self, taken):
        self.taken = set(taken)
        self.counters = {}

    def __call__(self, pred):
        initial = pred[0] if pred[0].isalpha() else "x"
        k = self.counters.get(initial, 0)
        while True:
            k += 1
            name = f"{initial}{k}"
            if name not in self.taken:
                break
        self.counters[initial] = k
        self.taken.add(name)
        return name


def name_arguments(o: OrderedUForm) -> SForm:
    """Replace argument numbers by fresh argument variables."""
    u = _to_uform(o)
    require_valid(u)
    fresh = _FreshNames(node.pred for _, node in _iter_ordered(o))
    names = {}
    for path, node in _iter_ordered(o):
        arity = _arity(node, names.get(("inv", path)))
        names[path] = tuple(fresh(node.pred) for _ in range(arity))
        for i, (label, _) in enumerate(node.children):
            if label != DET and label < 0:
                names[("inv", path + (i,))] = -label

    def build(node, path):
        kids = []
        for i, (label, child) in enumerate(node.children):
            cpath = path + (i,)
            if label == DET:
                slabel = SDET
            elif label > 0:
                slabel = SLabel.plus(names[path][label - 1])
            else:
                slabel = SLabel.minus(names[cpath][-label - 1])
            kids.append((slabel, build(child, cpath)))
        return SForm(node.pred, names[path], tuple(kids))

    return build(o, ())


def _arity(node, incoming):
    idx = [lab for lab, _ in node.children if lab != DET and lab > 0]
    if incoming:
        idx.append(incoming)
    return max(idx, default=0)


def _node_orders(node, permute_det):
    n = len(node.children)
    if permute_det:
        return list(itertools.permutations(range(n)))
    dets = [i for i, (lab, _) in enumerate(node.children) if lab == DET]
    rest = [i for i, (lab, _) in enumerate(node.children) if lab != DET]
    return [d + r for d in itertools.permutations(dets) for r in itertools.permutations(rest)]


def count_scopings(u: UForm, permute_det=False) -> int:
    total = 1
    for _, node in iter_nodes(u):
        if permute_det:
            total *= math.factorial(len(node.children))
        else:
            ndet = sum(1 for lab, _ in node.children if lab == DET)
            total *= math.factorial(ndet) * math.factorial(len(node.children) - ndet)
    return total


def enumerate_scopings(u: UForm, permute_det=False) -> Iterator[SForm]:
    """Lazily yield one S-form per combination of per-node child orders.

    Determiners stay leftmost (widest scope) unless ``permute_det`` is set.
    Nodes vary in pre-order with the last node varying fastest; each node's
    orders are lexicographic over child-index permutations.
    """
    require_valid(u)
    paths = [path for path, _ in iter_nodes(u)]
    choices = [_node_orders(node, permute_det) for _, node in iter_nodes(u)]
    for combo in itertools.product(*choices):
        selector = dict(zip(paths, combo))
        yield name_arguments(order_uform(u, selector))


class ScopeError(ValueError):
    pass


def forget_scope(s: SForm) -> UForm:
    """Drop order and argument names, restoring numeric labels."""
    declared = {}
    for _, node in iter_nodes(s):
        for i, v in enumerate(node.argvars):
            if v in declared:
                raise ScopeError(f"variable {v} declared twice")
            declared[v] = i + 1

    def build(node):
        kids = []
        for label, child in node.children:
            if label.mode == DET:
                ulabel = DET
            else:
                if label.var not in declared:
                    raise ScopeError(f"label {label} uses undeclared variable {label.var}")
                i = declared[label.var]
                ulabel = i if label.mode == "+" else -i
            kids.append((ulabel, build(child)))
        return UForm(node.pred, tuple(kids))

    return build(s)

