"""Order and ray-orbit computations for finite-state transducer words.

The order of a word is governed by its *class graph*: nodes are words up
to symmetric conjugacy (conjugates and inverses share a node), and a
node ``g`` sends an edge with label ``k`` to the section ``g^k @ a`` for
every cycle ``(a, ...)`` of length ``k`` in the letter permutation of
``g``.  The order of ``g`` is the least common multiple, over all paths
out of ``g``, of the product of the labels along the path:

* a reachable cycle whose labels multiply to more than 1 certifies
  infinite order;
* if the reachable part of the graph closes up and every cycle in it
  multiplies to 1, the lcm is finite and gives a candidate order, which
  is then confirmed (and minimised) through the word problem.

Node identification is what keeps the graph small.  Three wp-backed
normalisations are always on: generators that act trivially are erased,
words that act trivially collapse onto the identity node, and words
equal in the acting group (screened by their letter permutations) are
merged.  Rotations and inverses are merged syntactically.  A further
bounded search for conjugating elements can be switched on, but is off
by default.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import reduce as _reduce
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

from .action import Ray, act_ray, word_problem_fs
from .transducer import FINITE_STATE, Transducer
from .words import GroupWord, cyclic_key, reduce_refs


@dataclass(frozen=True)
class CycleDecomposition:
    """Letter cycles of a word, each with the section at its least
    letter: for a cycle ``(a, ...)`` of length ``k`` the section is
    ``g^k @ a``."""

    cycles: Tuple[Tuple[str, ...], ...]
    sections: Tuple[GroupWord, ...]


@dataclass(frozen=True)
class ClassGraph:
    nodes: Tuple[GroupWord, ...]
    edges: Tuple[Tuple[int, int, int], ...]
    mode: str


class EdgeRecord(NamedTuple):
    source: GroupWord
    letter: str
    label: int
    target: GroupWord


@dataclass(frozen=True)
class CycleCertificate:
    """A reachable cycle with a label above 1: ``access`` leads from the
    starting word to the cycle, ``cycle`` is the closed walk."""

    access: Tuple[EdgeRecord, ...]
    cycle: Tuple[EdgeRecord, ...]


@dataclass(frozen=True)
class OrderResult:
    kind: str
    n: Optional[int] = None
    cycle: Optional[CycleCertificate] = None
    spent: Optional[int] = None

    @classmethod
    def finite(cls, n: int) -> "OrderResult":
        return cls("Finite", n=n)

    @classmethod
    def infinite_certified(cls, cycle: CycleCertificate) -> "OrderResult":
        return cls("InfiniteCertified", cycle=cycle)

    @classmethod
    def unknown(cls, spent: int) -> "OrderResult":
        return cls("Unknown", spent=spent)

    @property
    def is_finite(self) -> bool:
        return self.kind == "Finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "InfiniteCertified"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "Unknown"

    def __str__(self) -> str:
        if self.is_finite:
            return f"Finite({self.n})"
        return self.kind


def cycle_decomposition(t: Transducer, g: GroupWord) -> CycleDecomposition:
    """Cycles of the letter permutation of ``g``, least letter first.

    >>> from .zoo import grigorchuk
    >>> t = grigorchuk()
    >>> cycle_decomposition(t, t.states.parse_word("b")).cycles
    (('0',), ('1',))
    """
    na = len(t.alphabet)
    seen = [False] * na
    cycles = []
    sections = []
    for a in range(na):
        if seen[a]:
            continue
        orbit = []
        acc: list[int] = []
        cur = a
        while True:
            orbit.append(cur)
            seen[cur] = True
            res, cur = t._trace_refs(cur, g.refs)
            for x in res:
                if acc and acc[-1] == -x:
                    acc.pop()
                else:
                    acc.append(x)
            if cur == a:
                break
        cycles.append(tuple(t.alphabet.letters[i] for i in orbit))
        sections.append(GroupWord(tuple(acc)))
    return CycleDecomposition(tuple(cycles), tuple(sections))


# -- wp-backed normalisation --------------------------------------------


def _trivial_generator_refs(t: Transducer) -> frozenset:
    cached = t._cache.get("trivial_gens")
    if cached is None:
        cached = frozenset(
            r
            for r in range(1, len(t.states) + 1)
            if word_problem_fs(t, GroupWord((r,))).trivial
        )
        t._cache["trivial_gens"] = cached
    return cached


def _wp_refs(t: Transducer, refs: Tuple[int, ...]) -> bool:
    return word_problem_fs(t, GroupWord(refs)).trivial


def _normalize_refs(t: Transducer, refs: Sequence[int]) -> Tuple[int, ...]:
    trivial = _trivial_generator_refs(t)
    out = reduce_refs(r for r in refs if abs(r) not in trivial)
    if out and _wp_refs(t, out):
        return ()
    return out


def same_class(t: Transducer, g: GroupWord, h: GroupWord) -> bool:
    """True when ``g`` and ``h`` land on one class-graph node: equal in
    the acting group, possibly after inverting, rotating, or erasing
    trivial generators.  (One-sided: conjugacy beyond rotation is not
    searched, so ``False`` does not mean *not conjugate*.)"""
    a = _normalize_refs(t, g.refs)
    b = _normalize_refs(t, h.refs)
    if cyclic_key(a) == cyclic_key(b):
        return True
    b_inv = tuple(-r for r in reversed(b))
    return _wp_refs(t, reduce_refs(a + b_inv)) or _wp_refs(t, reduce_refs(a + b))


def _conjugator_words(t: Transducer, length: int):
    gens = [
        r
        for r in range(1, len(t.states) + 1)
        if r not in _trivial_generator_refs(t)
    ]
    signed = [r for g in gens for r in (g, -g)]
    frontier: list[Tuple[int, ...]] = [()]
    for _ in range(length):
        frontier = [
            w + (r,) for w in frontier for r in signed if not (w and w[-1] == -r)
        ]
        yield from frontier


class _Graph:
    """Reachable class graph of a word, built breadth-first to a budget
    of node expansions."""

    def __init__(self, t: Transducer, mode: str, merge_conjugators: int = 0):
        self.t = t
        self.mode = mode
        self.merge_conjugators = merge_conjugators
        self.node_refs: list[Tuple[int, ...]] = []
        self.node_sig: list[Tuple[int, ...]] = []
        self.edges: list[Tuple[int, int, int, str]] = []
        self._exact: dict = {}
        self._by_sig: dict = {}

    def find(self, refs: Sequence[int]) -> int:
        refs = _normalize_refs(self.t, refs)
        if self.mode == "symmetric_conjugacy":
            refs = cyclic_key(refs)
        idx = self._exact.get(refs)
        if idx is not None:
            return idx
        t = self.t
        sig = t._perm_signature(refs)
        inv = tuple(-r for r in reversed(refs))
        for j in self._by_sig.get(sig, ()):
            other_inv = tuple(-r for r in reversed(self.node_refs[j]))
            if _wp_refs(t, reduce_refs(refs + other_inv)):
                self._exact[refs] = j
                return j
        if self.mode == "symmetric_conjugacy":
            inv_sig = t._perm_signature(inv)
            for j in self._by_sig.get(inv_sig, ()):
                if _wp_refs(t, reduce_refs(refs + self.node_refs[j])):
                    self._exact[refs] = j
                    return j
        if self.merge_conjugators > 0 and self.mode == "symmetric_conjugacy":
            for j in range(len(self.node_refs)):
                other_inv = tuple(-r for r in reversed(self.node_refs[j]))
                for h in _conjugator_words(t, self.merge_conjugators):
                    h_inv = tuple(-r for r in reversed(h))
                    conj = reduce_refs(h_inv + refs + h)
                    if _wp_refs(t, reduce_refs(conj + other_inv)) or _wp_refs(
                        t, reduce_refs(conj + self.node_refs[j])
                    ):
                        self._exact[refs] = j
                        return j
        idx = len(self.node_refs)
        self.node_refs.append(refs)
        self.node_sig.append(sig)
        self._exact[refs] = idx
        self._by_sig.setdefault(sig, []).append(idx)
        return idx

    def expand(self, u: int) -> list:
        """Add the outgoing edges of node ``u``; returns new node ids."""
        t = self.t
        w = self.node_refs[u]
        na = len(t.alphabet)
        seen = [False] * na
        fresh = []
        for a in range(na):
            if seen[a]:
                continue
            acc: list[int] = []
            cur = a
            k = 0
            while True:
                seen[cur] = True
                k += 1
                res, cur = t._trace_refs(cur, w)
                for x in res:
                    if acc and acc[-1] == -x:
                        acc.pop()
                    else:
                        acc.append(x)
                if cur == a:
                    break
            before = len(self.node_refs)
            v = self.find(tuple(acc))
            self.edges.append((u, v, k, t.alphabet.letters[a]))
            if v >= before:
                fresh.append(v)
        return fresh

    def record(self, u: int, v: int, k: int, letter: str) -> EdgeRecord:
        return EdgeRecord(
            GroupWord(self.node_refs[u]), letter, k, GroupWord(self.node_refs[v])
        )


def _strongly_connected(n: int, edges) -> list:
    """Tarjan, iterative; components come out in reverse topological
    order (every edge leaves a component with a larger or equal id)."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for s in range(n):
        if index[s] != -1:
            continue
        work: list[list] = [[s, 0]]
        while work:
            frame = work[-1]
            v, pi = frame
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            while frame[1] < len(adj[v]):
                w = adj[v][frame[1]]
                frame[1] += 1
                if index[w] == -1:
                    work.append([w, 0])
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def _edge_path(edges, start: int, goal: int, keep: Callable[[int], bool]):
    """Shortest edge path start -> goal through nodes satisfying
    ``keep``; None when unreachable."""
    by_src: dict = {}
    for e in edges:
        by_src.setdefault(e[0], []).append(e)
    prev: dict = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for e in by_src.get(u, ()):
            v = e[1]
            if v not in prev and keep(v):
                prev[v] = e
                queue.append(v)
    if goal not in prev:
        return None
    path = []
    cur = goal
    while cur != start:
        e = prev[cur]
        path.append(e)
        cur = e[0]
    path.reverse()
    return path


def class_graph(
    t: Transducer,
    g: GroupWord,
    budget: int = 1000,
    mode: str = "symmetric_conjugacy",
    merge_conjugators: int = 0,
) -> ClassGraph:
    """The reachable class graph of ``g``, up to ``budget`` expansions."""
    graph, _, _ = _build(t, g, budget, mode, merge_conjugators)
    nodes = tuple(GroupWord(r) for r in graph.node_refs)
    edges = tuple((u, v, k) for (u, v, k, _) in graph.edges)
    return ClassGraph(nodes, edges, mode)


def _build(t, g, budget, mode, merge_conjugators):
    if t.kind != FINITE_STATE:
        raise ValueError("class graphs require a finite-state transducer")
    graph = _Graph(t, mode, merge_conjugators)
    root = graph.find(g.refs)
    queue = deque([root])
    queued = {root}
    spent = 0
    closed = True
    while queue:
        u = queue.popleft()
        if not graph.node_refs[u]:
            continue  # the identity has no interesting sections
        if spent >= budget:
            closed = False
            break
        spent += 1
        for v in graph.expand(u):
            if v not in queued:
                queued.add(v)
                queue.append(v)
    return graph, closed, spent


def _certified_cycle(graph: _Graph, comp, root: int) -> Optional[CycleCertificate]:
    for u, v, k, letter in graph.edges:
        if k > 1 and comp[u] == comp[v]:
            back = _edge_path(graph.edges, v, u, lambda x: comp[x] == comp[u])
            if back is None:
                continue
            access = _edge_path(graph.edges, root, u, lambda x: True)
            if access is None:
                continue
            cycle = [(u, v, k, letter)] + back
            return CycleCertificate(
                access=tuple(graph.record(*e) for e in access),
                cycle=tuple(graph.record(*e) for e in cycle),
            )
    return None


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def order(
    t: Transducer,
    g: GroupWord,
    budget: int = 1000,
    merge_conjugators: int = 0,
) -> OrderResult:
    """Decide the order of ``g`` in the group generated by the states.

    >>> from .zoo import grigorchuk
    >>> t = grigorchuk()
    >>> str(order(t, t.states.parse_word("a")))
    'Finite(2)'
    """
    if t.kind != FINITE_STATE:
        raise ValueError("order requires a finite-state transducer")
    if not _normalize_refs(t, g.refs):
        return OrderResult.finite(1)
    graph, closed, spent = _build(t, g, budget, "symmetric_conjugacy", merge_conjugators)
    comp = _strongly_connected(len(graph.node_refs), [(u, v) for u, v, _, _ in graph.edges])
    root = 0
    certificate = _certified_cycle(graph, comp, root)
    if certificate is not None:
        return OrderResult.infinite_certified(certificate)
    if not closed:
        return OrderResult.unknown(spent=budget)
    # Every reachable cycle multiplies to 1: fold path products over the
    # condensation, in reverse component order (= topological order).
    ncomp = max(comp, default=-1) + 1
    prods: list[set] = [set() for _ in range(ncomp)]
    prods[comp[root]].add(1)
    out_of: dict = {}
    for u, v, k, _ in graph.edges:
        if comp[u] != comp[v]:
            out_of.setdefault(comp[u], []).append((comp[v], k))
    for cid in range(ncomp - 1, -1, -1):
        if not prods[cid]:
            continue
        for target, k in out_of.get(cid, ()):
            prods[target].update(p * k for p in prods[cid])
    candidate = 1
    for bag in prods:
        for p in bag:
            candidate = math.lcm(candidate, p)
    if not word_problem_fs(t, g**candidate).trivial:
        return OrderResult.unknown(spent=spent)
    for p in _prime_factors(candidate):
        while candidate % p == 0 and word_problem_fs(t, g ** (candidate // p)).trivial:
            candidate //= p
    return OrderResult.finite(candidate)


def orbit_size_ray(
    t: Transducer, g: GroupWord, ray: Ray, budget: int = 1000
) -> OrderResult:
    """Size of the orbit of ``ray`` under the group generated by ``g``.

    Follows the path of (section, tail) pairs: one step consumes one ray
    position, the label is the length of the letter's orbit under the
    current section, and the next section is the label-th power's
    section at that letter.  A revisited pair across labels all equal to
    1 (or reaching the identity) closes the orbit; the product of the
    labels walked before the loop is then confirmed through the ray
    action before being reported.
    """
    if t.kind != FINITE_STATE:
        raise ValueError("orbit_size_ray requires a finite-state transducer")
    pre, per = len(ray.preperiod), len(ray.period)
    current = _normalize_refs(t, g.refs)
    path: list = []  # (pos-phase or None, refs, sig)
    records: list[EdgeRecord] = []
    labels: list[int] = []
    pos = 0

    def confirm(n: int) -> OrderResult:
        if act_ray(t, g**n, ray) != ray:
            return OrderResult.unknown(spent=pos)
        for d in range(1, n):
            if n % d == 0 and act_ray(t, g**d, ray) == ray:
                return OrderResult.unknown(spent=pos)
        return OrderResult.finite(n)

    for _ in range(budget):
        if not current:
            return confirm(_reduce(lambda a, b: a * b, labels, 1))
        phase = (pos - pre) % per if pos >= pre else None
        sig = t._perm_signature(current)
        if phase is not None:
            for i, (ph, refs, s) in enumerate(path):
                if ph != phase or s != sig:
                    continue
                inv = tuple(-r for r in reversed(current))
                if refs == current or _wp_refs(t, reduce_refs(refs + inv)):
                    if all(lab == 1 for lab in labels[i:]):
                        n = _reduce(lambda a, b: a * b, labels[:i], 1)
                        return confirm(n)
                    return OrderResult.infinite_certified(
                        CycleCertificate(
                            access=tuple(records[:i]), cycle=tuple(records[i:])
                        )
                    )
        path.append((phase, current, sig))
        a = t.alphabet.index(ray.letter_at(pos))
        k = 0
        cur = a
        acc: list[int] = []
        while True:
            k += 1
            res, cur = t._trace_refs(cur, current)
            for x in res:
                if acc and acc[-1] == -x:
                    acc.pop()
                else:
                    acc.append(x)
            if cur == a:
                break
        labels.append(k)
        nxt = _normalize_refs(t, tuple(acc))
        records.append(
            EdgeRecord(GroupWord(current), ray.letter_at(pos), k, GroupWord(nxt))
        )
        current = nxt
        pos += 1
    return OrderResult.unknown(spent=budget)
