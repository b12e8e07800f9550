"""Predicate-argument structure of U-forms and their well-formedness checks."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .core import DET, UForm, node_at, iter_nodes


class Edge(NamedTuple):
    """A tree edge ``(upper, label, lower)`` with both ends given as paths."""

    upper: tuple
    label: int
    lower: tuple


@dataclass(frozen=True)
class PredicationTree:
    head: tuple
    args: dict  # index -> node path

    @property
    def arity(self):
        return max(self.args, default=0)


@dataclass(frozen=True)
class PredArgRelation:
    pred: str
    args: tuple
    path: tuple = ()
    arg_paths: tuple = ()

    def __str__(self):
        return f"{self.pred}({','.join(self.args)})"

    def key(self):
        return (self.pred, self.args)

    def as_dict(self):
        return {"pred": self.pred, "args": list(self.args)}


@dataclass(frozen=True)
class Violation:
    kind: str  # "NoHoles" | "Repetition"
    path: tuple
    index: int
    detail: str

    def __str__(self):
        where = "/".join(map(str, self.path)) or "root"
        return f"{self.kind} at {where}: {self.detail}"


NO_HOLES = "NoHoles"
REPETITION = "Repetition"


def predication_edges(u: UForm, path) -> set:
    """Edges ``(A,+i,X)`` below node A and the edge ``(X,-i,A)`` above it, if any."""
    path = tuple(path)
    node = node_at(u, path)
    edges = set()
    for i, (label, _) in enumerate(node.children):
        if label != DET and label > 0:
            edges.add(Edge(path, label, path + (i,)))
    if path:
        parent = path[:-1]
        label = node_at(u, parent).children[path[-1]][0]
        if label != DET and label < 0:
            edges.add(Edge(parent, label, path))
    return edges


def _slots(u, path):
    """(index, path) pairs of A's predication tree, duplicates kept."""
    out = []
    for e in predication_edges(u, path):
        if e.label > 0:
            out.append((e.label, e.lower))
        else:
            out.append((-e.label, e.upper))
    out.sort()
    return out


def predication_tree(u: UForm, path) -> PredicationTree:
    path = tuple(path)
    args = {}
    for i, p in _slots(u, path):
        args.setdefault(i, p)
    return PredicationTree(path, args)


def validate_uform(u: UForm) -> list:
    """All no-holes and no-repetition violations, in pre-order."""
    out = []
    for path, node in iter_nodes(u):
        slots = _slots(u, path)
        seen = {}
        for i, _ in slots:
            seen[i] = seen.get(i, 0) + 1
        for i in sorted(k for k, n in seen.items() if n > 1):
            out.append(Violation(REPETITION, path, i,
                                 f"index {i} occurs {seen[i]} times in the predication tree of {node.pred}"))
        top = max(seen, default=0)
        for j in range(1, top):
            if j not in seen:
                out.append(Violation(NO_HOLES, path, j,
                                     f"slot {j} of {node.pred} is missing below slot {top}"))
    return out


class InvalidUForm(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(map(str, self.violations)))


def require_valid(u):
    violations = validate_uform(u)
    if violations:
        raise InvalidUForm(violations)


def _bfs(u):
    queue = deque([((), u)])
    while queue:
        path, node = queue.popleft()
        yield path, node
        for i, (_, child) in enumerate(node.children):
            queue.append((path + (i,), child))


def extract_predarg(u: UForm) -> list:
    """One relation per node with arguments, in breadth-first canonical order."""
    require_valid(u)
    rels = []
    for path, node in _bfs(u):
        tree = predication_tree(u, path)
        if not tree.args:
            continue
        arg_paths = tuple(tree.args[i] for i in range(1, tree.arity + 1))
        rels.append(PredArgRelation(node.pred, tuple(node_at(u, p).pred for p in arg_paths),
                                    path, arg_paths))
    return rels


def relation_set(u: UForm) -> set:
    return {r.key() for r in extract_predarg(u)}
