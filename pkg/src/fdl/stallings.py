"""Folded subgroup graphs over the alphabet {a, b}.

A ``LabeledGraph`` has dense integer vertices ``0..n-1`` and directed edges
``(src, dst, label)``.  Reading ``a`` follows an a-edge forwards, reading
``a^-1`` follows one backwards.  All constructors that fold also renumber
vertices breadth-first from the base (labels scanned as a, a^-1, b, b^-1),
so two folded graphs are isomorphic as based labeled graphs exactly when
their edge tuples are equal.
"""

from __future__ import annotations

import os
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    AlreadyMember,
    NotAMember,
    SizeCap,
    UnreducedWord,
    ValidationError,
)
from .words import A, B, Word, product, reduce, require_free

LABELS = (A, B)
# scan order used for BFS numbering and spanning trees
_KEYS = ((A, 1), (A, -1), (B, 1), (B, -1))

DEFAULT_SIZE_CAP = 10**6


def size_cap() -> int:
    """Vertex cap for materialized graphs; ``FDL_SIZE_CAP`` overrides it."""
    env = os.environ.get("FDL_SIZE_CAP")
    return int(env) if env else DEFAULT_SIZE_CAP


def _check_cap(n: int, cap: Optional[int]) -> None:
    cap = size_cap() if cap is None else cap
    if n > cap:
        raise SizeCap(f"graph would need {n} vertices (cap {cap})")


Edge = tuple[int, int, str]


class LabeledGraph:
    """Based, connected, edge-labeled graph.  Treat instances as immutable."""

    __slots__ = ("n", "base", "edges", "_step")

    def __init__(self, n: int, edges: Iterable[Edge], base: int = 0):
        if n < 1 or not 0 <= base < n:
            raise ValidationError("a graph needs at least one vertex and a valid base")
        self.n = n
        self.base = base
        self.edges = tuple(edges)
        for s, t, label in self.edges:
            if label not in LABELS or not (0 <= s < n and 0 <= t < n):
                raise ValidationError(f"bad edge {(s, t, label)}")
        self._step = None

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, edges={len(self.edges)}, base={self.base})"

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.n, self.base, sorted(self.edges)) == (other.n, other.base, sorted(other.edges))

    def __hash__(self):
        return hash((self.n, self.base, tuple(sorted(self.edges))))

    @property
    def step(self) -> dict:
        """``(vertex, label, sign) -> vertex`` for a folded graph."""
        if self._step is None:
            table = {}
            for s, t, label in self.edges:
                for key, val in (((s, label, 1), t), ((t, label, -1), s)):
                    if key in table:
                        raise ValidationError("graph is not folded")
                    table[key] = val
            self._step = table
        return self._step

    @property
    def is_folded(self) -> bool:
        try:
            self.step
        except ValidationError:
            return False
        return True

    def degree(self, v: int) -> int:
        return sum((s == v) + (t == v) for s, t, _ in self.edges)

    @property
    def rank(self) -> int:
        """Rank of the free group of based loops (edges - vertices + 1)."""
        return len(self.edges) - self.n + 1

    def to_json(self) -> dict:
        return {"vertices": self.n, "base": self.base,
                "edges": [[s, t, label] for s, t, label in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "LabeledGraph":
        return cls(int(data["vertices"]), [(int(s), int(t), str(l)) for s, t, l in data["edges"]],
                   int(data.get("base", 0)))


@dataclass(frozen=True)
class TraceResult:
    outcome: str  # "closed", "open" or "blocked"
    vertex: int  # end vertex, or where reading stopped
    position: Optional[int] = None  # index into the expanded word when blocked

    @property
    def closed(self) -> bool:
        return self.outcome == "closed"


@dataclass(frozen=True)
class PermRep:
    """A finite cover of the rose: two permutations acting on ``0..degree-1``."""

    degree: int
    perm_a: tuple
    perm_b: tuple

    def __post_init__(self):
        for perm in (self.perm_a, self.perm_b):
            if len(perm) != self.degree or sorted(perm) != list(range(self.degree)):
                raise ValidationError("perm_a and perm_b must be permutations of 0..degree-1")

    def act(self, w: Word, point: int = 0) -> int:
        require_free(w)
        inverse = {}
        for letter, exp in w.runs:
            perm = self.perm_a if letter == A else self.perm_b
            if exp < 0 and letter not in inverse:
                inv = [0] * self.degree
                for i, j in enumerate(perm):
                    inv[j] = i
                inverse[letter] = inv
            table = perm if exp > 0 else inverse[letter]
            for _ in range(abs(exp)):
                point = table[point]
        return point

    def contains(self, w: Word) -> bool:
        """Membership in the finite-index subgroup stabilizing point 0."""
        return self.act(w) == 0

    def to_graph(self) -> LabeledGraph:
        edges = [(i, self.perm_a[i], A) for i in range(self.degree)]
        edges += [(i, self.perm_b[i], B) for i in range(self.degree)]
        return LabeledGraph(self.degree, edges, 0)

    def to_json(self) -> dict:
        return {"degree": self.degree, "perm_a": list(self.perm_a), "perm_b": list(self.perm_b)}

    @classmethod
    def from_json(cls, data: dict) -> "PermRep":
        return cls(int(data["degree"]), tuple(data["perm_a"]), tuple(data["perm_b"]))


def _renumber(base: int, adjacency: dict) -> LabeledGraph:
    """BFS renumbering of a deterministic adjacency map ``v -> {(label, sign): w}``."""
    index = {base: 0}
    order = [base]
    queue = deque([base])
    while queue:
        v = queue.popleft()
        nbrs = adjacency.get(v, {})
        for key in _KEYS:
            w = nbrs.get(key)
            if w is not None and w not in index:
                index[w] = len(order)
                order.append(w)
                queue.append(w)
    edges = []
    for v in order:
        for label in LABELS:
            w = adjacency.get(v, {}).get((label, 1))
            if w is not None:
                edges.append((index[v], index[w], label))
    return LabeledGraph(len(order), edges, 0)


def fold(g: LabeledGraph, rng: Optional[random.Random] = None) -> LabeledGraph:
    """Stallings folding with a union-find worklist.

    ``rng`` shuffles the order in which pending identifications are
    processed; the folded result does not depend on it.
    """
    parent = list(range(g.n))
    size = [1] * g.n
    adj: list = [dict() for _ in range(g.n)]
    pending: list = []

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def attach(u, key, v):
        w = adj[u].get(key)
        if w is None:
            adj[u][key] = v
        else:
            pending.append((w, v))

    def drain():
        while pending:
            i = rng.randrange(len(pending)) if rng is not None else len(pending) - 1
            pending[i], pending[-1] = pending[-1], pending[i]
            x, y = pending.pop()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            if size[rx] < size[ry]:
                rx, ry = ry, rx
            parent[ry] = rx
            size[rx] += size[ry]
            moved, adj[ry] = adj[ry], None
            for key, v in moved.items():
                attach(rx, key, v)

    for s, t, label in g.edges:
        attach(find(s), (label, 1), t)
        attach(find(t), (label, -1), s)
        drain()

    adjacency = {}
    for v in range(g.n):
        if parent[v] == v:
            adjacency[v] = {key: find(w) for key, w in adj[v].items()}
    return _renumber(find(g.base), adjacency)


def from_generators(gens: Sequence[Word], cap: Optional[int] = None) -> LabeledGraph:
    """Folded Stallings graph of the subgroup generated by ``gens``."""
    gens = [reduce(w) for w in gens]
    for w in gens:
        require_free(w)
    _check_cap(1 + sum(max(len(w) - 1, 0) for w in gens), cap)
    n = 1
    edges = []
    for w in gens:
        letters = list(w.expand())
        prev = 0
        for i, (label, sign) in enumerate(letters):
            nxt = 0 if i == len(letters) - 1 else n
            if nxt:
                n += 1
            edges.append((prev, nxt, label) if sign > 0 else (nxt, prev, label))
            prev = nxt
    return fold(LabeledGraph(n, edges, 0))


def _walk(g: LabeledGraph, w: Word, start: int):
    """Follow ``w`` from ``start``; returns ``(vertex, blocked_position)``."""
    step = g.step
    v = start
    pos = 0
    for label, exp in w.runs:
        sign = 1 if exp > 0 else -1
        for _ in range(abs(exp)):
            nxt = step.get((v, label, sign))
            if nxt is None:
                return v, pos
            v = nxt
            pos += 1
    return v, None


def trace(g: LabeledGraph, w: Word) -> TraceResult:
    if not w.is_reduced:
        raise UnreducedWord(f"word {str(w)!r} must be freely reduced before tracing")
    require_free(w)
    v, blocked = _walk(g, w, g.base)
    if blocked is not None:
        return TraceResult("blocked", v, blocked)
    return TraceResult("closed" if v == g.base else "open", v)


def contains(g: LabeledGraph, w: Word) -> bool:
    return trace(g, reduce(w)).closed


def core(g: LabeledGraph) -> LabeledGraph:
    """Prune non-base vertices of degree one until none remain."""
    deg = [0] * g.n
    incident: list = [[] for _ in range(g.n)]
    for i, (s, t, _) in enumerate(g.edges):
        deg[s] += 1
        deg[t] += 1
        incident[s].append(i)
        incident[t].append(i)
    alive_edge = [True] * len(g.edges)
    alive = [True] * g.n
    stack = [v for v in range(g.n) if v != g.base and deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v] or v == g.base or deg[v] > 1:
            continue
        alive[v] = False
        for i in incident[v]:
            if alive_edge[i]:
                alive_edge[i] = False
                s, t, _ = g.edges[i]
                other = t if s == v else s
                deg[v] -= 1
                deg[other] -= 1
                if other != g.base and deg[other] <= 1:
                    stack.append(other)
    adjacency: dict = {}
    for i, (s, t, label) in enumerate(g.edges):
        if alive_edge[i]:
            adjacency.setdefault(s, {})[(label, 1)] = t
            adjacency.setdefault(t, {})[(label, -1)] = s
    return _renumber(g.base, adjacency)


def pullback(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Based component of the fiber product; its loops are the intersection."""
    s1, s2 = g1.step, g2.step
    start = (g1.base, g2.base)
    seen = {start}
    queue = deque([start])
    adjacency: dict = {}
    while queue:
        u, v = pair = queue.popleft()
        for label, sign in _KEYS:
            x = s1.get((u, label, sign))
            y = s2.get((v, label, sign))
            if x is None or y is None:
                continue
            adjacency.setdefault(pair, {})[(label, sign)] = (x, y)
            if (x, y) not in seen:
                seen.add((x, y))
                queue.append((x, y))
    return _renumber(start, adjacency)


def _spanning_tree(g: LabeledGraph):
    """BFS tree from the base.

    Returns ``(words, non_tree)`` where ``words[v]`` is the tree path from the
    base to ``v`` and ``non_tree`` lists edge indices in discovery order.
    """
    step = g.step
    edge_index = {}
    for i, (s, t, label) in enumerate(g.edges):
        edge_index[(s, label, 1)] = i
        edge_index[(t, label, -1)] = i
    paths = {g.base: Word()}
    tree = set()
    non_tree = []
    queue = deque([g.base])
    while queue:
        v = queue.popleft()
        for label, sign in _KEYS:
            w = step.get((v, label, sign))
            if w is None:
                continue
            i = edge_index[(v, label, sign)]
            if w not in paths:
                paths[w] = paths[v] * Word.letter(label, sign)
                tree.add(i)
                queue.append(w)
            elif i not in tree and i not in non_tree:
                non_tree.append(i)
    return paths, non_tree


def basis(g: LabeledGraph) -> list[Word]:
    """Free basis of the subgroup: one word per non-tree edge."""
    paths, non_tree = _spanning_tree(g)
    out = []
    for i in non_tree:
        s, t, label = g.edges[i]
        out.append(paths[s] * Word.letter(label) * ~paths[t])
    return out


Crossing = tuple[int, int]  # (basis index, ±1)


def express(g: LabeledGraph, w: Word) -> list[Crossing]:
    """Write ``w`` in the basis returned by :func:`basis`."""
    if not trace(g, w).closed:
        raise NotAMember(f"{str(w)!r} is not in the subgroup")
    _, non_tree = _spanning_tree(g)
    position = {i: k for k, i in enumerate(non_tree)}
    step = g.step
    edge_index = {}
    for i, (s, t, label) in enumerate(g.edges):
        edge_index[(s, label, 1)] = i
        edge_index[(t, label, -1)] = i
    out = []
    v = g.base
    for label, sign in w.expand():
        i = edge_index[(v, label, sign)]
        if i in position:
            out.append((position[i], sign))
        v = step[(v, label, sign)]
    return out


def evaluate_crossings(words: Sequence[Word], crossings: Iterable[Crossing]) -> Word:
    return product(words[i] if sign > 0 else ~words[i] for i, sign in crossings)


def graft(g: LabeledGraph, w: Word) -> tuple[LabeledGraph, int]:
    """Add the unread tail of ``w`` as a fresh path; returns the graph and end vertex.

    The result stays folded because ``w`` is reduced and every grafted
    vertex is new.
    """
    if not w.is_reduced:
        raise UnreducedWord(f"word {str(w)!r} must be freely reduced")
    v, pos = _walk(g, w, g.base)
    if pos is None:
        return g, v
    edges = list(g.edges)
    n = g.n
    for k, (label, sign) in enumerate(w.expand()):
        if k < pos:
            continue
        edges.append((v, n, label) if sign > 0 else (n, v, label))
        v = n
        n += 1
    return LabeledGraph(n, edges, g.base), v


def complete(g: LabeledGraph) -> PermRep:
    """Extend each partial a/b permutation to a full one.

    Vertices missing an outgoing edge are matched, in index order, to
    vertices missing an incoming edge.
    """
    step = g.step
    perms = []
    for label in LABELS:
        perm = [step.get((v, label, 1)) for v in range(g.n)]
        no_out = [v for v in range(g.n) if perm[v] is None]
        no_in = [v for v in range(g.n) if (v, label, -1) not in step]
        for u, v in zip(no_out, no_in):
            perm[u] = v
        perms.append(tuple(perm))
    return PermRep(g.n, perms[0], perms[1])


def hall_complete(g: LabeledGraph, avoid: Word, cap: Optional[int] = None) -> PermRep:
    """Finite cover containing the subgroup of ``g`` but not ``avoid``."""
    avoid = reduce(avoid)
    require_free(avoid)
    if trace(g, avoid).closed:
        raise AlreadyMember(f"{str(avoid)!r} already lies in the subgroup")
    _check_cap(g.n + len(avoid), cap)
    grown, end = graft(g, avoid)
    cover = complete(grown)
    # completion only adds edges, so the grafted path keeps its endpoint
    if cover.act(avoid) != end or end == 0:
        raise RuntimeError("completed cover failed to separate the word")
    return cover


def to_dot(g: LabeledGraph, name: str = "core") -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle, label=\"\"];"]
    for v in range(g.n):
        attrs = ' [style=bold, penwidth=3, label="*"]' if v == g.base else ""
        lines.append(f"  {v}{attrs};")
    for s, t, label in g.edges:
        style = 'color=red' if label == A else 'color=blue, style=dashed'
        lines.append(f'  {s} -> {t} [label="{label}", {style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
