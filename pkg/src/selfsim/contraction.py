"""Contraction machinery: making a transducer group contracting by
composition with small auxiliary transducers, computing nuclei, and
deciding nuclearity.

The auxiliary transducers shorten long words.  Each ``Φᵢ`` watches for
one state ``sᵢ`` (its bit flips there and nowhere else) and erases the
output whenever its bit is up, so only inputs of the shape
``sᵢ^-α · w · sᵢ^β`` with ``w`` free of ``sᵢ`` keep their length.
``Φ₀`` does the same with a three-bit letter for ``x``, ``y`` and the
remaining states at once, using that ``x`` and ``y`` commute.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .action import word_problem_fs
from .transducer import FINITE_STATE, Alphabet, Transducer, compose, expand_alphabet
from .words import GroupWord, StateSet, _letter_rank, reduce_refs


def _word_key(refs: Tuple[int, ...]) -> Tuple:
    return (len(refs), tuple(_letter_rank(r) for r in refs))


def _sig(t: Transducer, refs: Tuple[int, ...]) -> Tuple[int, ...]:
    key = ("sig", refs)
    sig = t._cache.get(key)
    if sig is None:
        sig = t._perm_signature(refs)
        t._cache[key] = sig
    return sig


def _trivial(t: Transducer, refs: Tuple[int, ...]) -> bool:
    return word_problem_fs(t, GroupWord(refs)).trivial


def auxiliary_transducers(
    states: StateSet,
    roles: Optional[Dict[str, str]] = None,
) -> Tuple[Transducer, Tuple[Transducer, ...]]:
    """The contraction helpers for a state set with distinguished
    ``x`` and ``y``: ``Φ₀`` over three-bit letters and one ``Φᵢ`` over
    ``{0, 1}`` per remaining (non-identity) state.

    ``roles`` optionally reassigns states: ``"x"``/``"y"`` share the
    first/second bit of ``Φ₀``, a trailing apostrophe marks a state
    that is the formal inverse of its role (it erases on the opposite
    bit value), ``"s<k>"``/``"s<k>'"`` assign the watched groups, and
    ``"e"`` is a pass-through for states equal to the identity.  By
    default ``x`` and ``y`` take their own roles and every other
    non-identity state is watched on its own.

    >>> s = StateSet(("q", "x", "y"))
    >>> phi0, (phi_q,) = auxiliary_transducers(s)
    >>> phi_q.transition("0", "q")
    (GroupWord(refs=(1,)), '1')
    >>> phi0.transition("000", "x")
    (GroupWord(refs=(2,)), '100')
    """
    for needed in ("x", "y"):
        if needed not in states:
            raise ValueError(f"state set lacks the distinguished state {needed!r}")
    live = [name for name in states.names if name not in states.identity]
    if roles is None:
        roles = {}
        counter = 0
        for name in live:
            if name in ("x", "y"):
                roles[name] = name
            else:
                roles[name] = f"s{counter}"
                counter += 1
    unknown = [n for n in live if roles.get(n) is None]
    if unknown:
        raise ValueError(f"no contraction role for states {unknown!r}")
    groups = sorted(
        {int(r.rstrip("'")[1:]) for r in roles.values() if r.rstrip("'").startswith("s")}
    )

    bits = Alphabet(("0", "1"))
    helpers = []
    for target in groups:
        table = {}
        for name in live:
            role = roles[name]
            inverse = role.endswith("'")
            if role.rstrip("'") == f"s{target}":
                out_on = "1" if inverse else "0"
                table[("0", name)] = ((name,) if out_on == "0" else None, "1")
                table[("1", name)] = ((name,) if out_on == "1" else None, "0")
            else:
                table[("0", name)] = ((name,), "0")
                table[("1", name)] = (None, "1")
        helpers.append(Transducer(bits, states, table, kind=FINITE_STATE))

    triples = Alphabet(
        tuple(f"{a}{b}{c}" for a in "01" for b in "01" for c in "01")
    )
    table = {}
    for name in live:
        role = roles[name]
        base = role.rstrip("'")
        if role == "e":
            for letter in triples.letters:
                table[(letter, name)] = ((name,), letter)
            continue
        pos = 0 if base == "x" else 1 if base == "y" else 2
        out_on = "1" if role.endswith("'") else "0"
        for letter in triples.letters:
            up = letter[pos] == "1"
            flipped = letter[:pos] + ("0" if up else "1") + letter[pos + 1 :]
            table[(letter, name)] = (
                (name,) if letter[pos] == out_on else None,
                flipped,
            )
    phi0 = Transducer(triples, states, table, kind=FINITE_STATE)
    return phi0, tuple(helpers)


def _contraction_roles(phi: Transducer) -> Dict[str, str]:
    """Assign contraction roles: ``x`` and ``y`` take their own bits, a
    state named ``q~`` joins the role of ``q`` as its formal inverse,
    and every remaining state is watched on a bit of its own.

    The pairing must follow the naming convention, not group identity:
    a formal inverse has to act as the auxiliary inverse of its partner
    (primed role) even when both happen to act trivially upstairs,
    because their rows feed each other's outputs through the auxiliary
    coordinates.  A word-problem check guards the convention — a state
    named ``q~`` that is not actually inverse to ``q`` is watched on
    its own bit instead.
    """
    states = phi.states
    roles: Dict[str, str] = {}
    counter = 0
    for name in states.names:
        if name in states.identity or name in roles:
            continue
        if name in ("x", "y"):
            roles[name] = name
        else:
            roles[name] = f"s{counter}"
            counter += 1
        partner = name + "~"
        if (
            partner in states
            and partner not in states.identity
            and partner not in roles
            and _trivial(
                phi, reduce_refs((states.ref(name), states.ref(partner)))
            )
        ):
            roles[partner] = roles[name] + "'"
    return roles


def contractify(phi: Transducer) -> Transducer:
    """Compose ``phi`` with its auxiliary transducers, producing a
    transducer over ``A × {0,1}³ × {0,1}^ℓ`` that generates a
    contracting group.

    Requires ``x`` and ``y`` to commute in the group generated by
    ``phi`` (checked); raising a section to the composed transducer
    multiplies every cycle label by four without changing which
    elements have finite order.
    """
    if phi.kind != FINITE_STATE:
        raise ValueError("contractify requires a finite-state transducer")
    states = phi.states
    for needed in ("x", "y"):
        if needed not in states:
            raise ValueError(f"state set lacks the distinguished state {needed!r}")
    bracket = (
        states.word(("x",)).inverse()
        * states.word(("y",)).inverse()
        * states.word(("x", "y"))
    )
    if not word_problem_fs(phi, bracket).trivial:
        raise ValueError("x and y do not commute in the generated group")
    phi0, helpers = auxiliary_transducers(states, _contraction_roles(phi))
    return reduce(compose, helpers, compose(phi, phi0))


# -- nucleus ---------------------------------------------------------------


@dataclass(frozen=True)
class NucleusReport:
    """Nucleus approximation: the recurrent sections of short products.

    ``nucleus`` holds one reduced normal form per element (shortest
    word found, ties by reference order); ``closure_depth`` counts the
    sweeps needed to close under sections; ``complete`` is false when
    the class budget was exhausted instead.
    """

    nucleus: Tuple[GroupWord, ...]
    closure_depth: int
    complete: bool

    def __len__(self) -> int:
        return len(self.nucleus)


class _Registry:
    """Group elements keyed by word-problem equality, with a letter
    permutation prefilter so most comparisons never run a search."""

    def __init__(self, t: Transducer):
        self.t = t
        self.reps: List[Tuple[int, ...]] = []
        self.by_sig: Dict[Tuple[int, ...], List[int]] = {}

    def find_or_add(self, refs: Tuple[int, ...]) -> Tuple[int, bool]:
        sig = _sig(self.t, refs)
        bucket = self.by_sig.setdefault(sig, [])
        for i in bucket:
            rep = self.reps[i]
            if refs == rep or _trivial(
                self.t, reduce_refs(refs + tuple(-r for r in reversed(rep)))
            ):
                if _word_key(refs) < _word_key(rep):
                    self.reps[i] = refs
                return i, False
        self.reps.append(refs)
        bucket.append(len(self.reps) - 1)
        return len(self.reps) - 1, True


def nucleus(phi: Transducer, budget: int = 64) -> NucleusReport:
    """Approximate the nucleus: the elements that occur as sections at
    arbitrarily deep letters of products of the generators.

    Seeds with all products of at most two signed generators, closes
    under sections, discards the transient part, then reseeds with
    pairwise products of the survivors and repeats until nothing new
    recurs.  The result therefore absorbs products of its own members,
    which the block-length search of :func:`nuclearize` relies on.
    ``budget`` caps the number of distinct elements tracked; an
    incomplete report has ``complete=False``.
    """
    if phi.kind != FINITE_STATE:
        raise ValueError("nucleus requires a finite-state transducer")
    registry = _Registry(phi)
    na = len(phi.alphabet)

    singles: List[Tuple[int, ...]] = [()]
    for s in range(1, len(phi.states) + 1):
        if phi.states.names[s - 1] in phi.states.identity:
            continue
        singles.extend(((s,), (-s,)))

    edges: Dict[int, Set[int]] = {}
    depth = 0

    def close(pending: List[int]) -> bool:
        nonlocal depth
        while pending:
            depth += 1
            frontier, pending = pending, []
            for u in frontier:
                targets = edges.setdefault(u, set())
                for a in range(na):
                    child, _ = phi._trace_refs(a, registry.reps[u])
                    idx, created = registry.find_or_add(child)
                    targets.add(idx)
                    if created:
                        pending.append(idx)
                    if len(registry.reps) > budget:
                        return False
        return True

    keep: Set[int] = set()
    pool = singles
    while True:
        fresh: List[int] = []
        for left in pool:
            for right in pool:
                idx, created = registry.find_or_add(reduce_refs(left + right))
                if created:
                    fresh.append(idx)
                if len(registry.reps) > budget:
                    return NucleusReport((), depth, False)
        if not close(fresh):
            return NucleusReport((), depth, False)
        for u in range(len(registry.reps)):
            edges.setdefault(u, set())

        # Keep a class iff it is reachable from some cycle of the
        # section graph: those recur at unbounded depth.
        grown = set(_cyclic_nodes(edges))
        stack = list(grown)
        while stack:
            u = stack.pop()
            for v in edges[u]:
                if v not in grown:
                    grown.add(v)
                    stack.append(v)
        if grown == keep:
            break
        keep = grown
        pool = singles + [registry.reps[u] for u in sorted(keep)]

    members = sorted((registry.reps[i] for i in keep), key=_word_key)
    return NucleusReport(tuple(GroupWord(r) for r in members), depth, True)


def _cyclic_nodes(edges: Dict[int, Set[int]]) -> List[int]:
    """Nodes lying on some cycle: members of a multi-node strongly
    connected component, or carrying a self-loop."""
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack: Set[int] = set()
    stack: List[int] = []
    cyclic: List[int] = []
    counter = 0
    for root in edges:
        if root in index:
            continue
        work: List[Tuple[int, Iterator[int]]] = [(root, iter(edges[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(edges[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or node in edges[node]:
                    cyclic.extend(component)
    return cyclic


# -- nuclearity ------------------------------------------------------------


def is_nuclear(phi: Transducer) -> bool:
    """Decide whether sections of two-state products collapse to single
    states: for every letter ``a`` and states ``s₁, s₂`` there must be
    an ``s₃`` equal in the group to ``(s₁s₂)@a``.

    Equality of the candidate words is decided by the word problem
    (standing in for minimising the triple-product transducer; same
    outcome, directly on words).  A block re-lettering delegates to the
    machine it was expanded from: a section over one block letter is an
    iterated section over the base letters, so the check can walk those
    layers instead of the materialised block rows.
    """
    if phi.kind != FINITE_STATE:
        raise ValueError("is_nuclear requires a finite-state transducer")
    base, depth = phi, 1
    while base._expanded_from is not None:
        base, n = base._expanded_from
        depth *= n
    return _pair_sections_collapse(base, depth)


def _pair_sections_collapse(base: Transducer, depth: int) -> bool:
    """Whether every section of a two-state product at ``depth`` input
    letters equals some single state of ``base`` in the group."""
    states = range(1, len(base.states) + 1)
    by_sig: Dict[Tuple[int, ...], List[int]] = {}
    for s in states:
        by_sig.setdefault(_sig(base, (s,)), []).append(s)
    na = len(base.alphabet)
    layer: Set[Tuple[int, ...]] = {
        reduce_refs((s1, s2)) for s1 in states for s2 in states
    }
    for _ in range(depth):
        nxt: Set[Tuple[int, ...]] = set()
        for w in layer:
            for a in range(na):
                child, _ = base._trace_refs(a, w)
                nxt.add(child)
        layer = nxt
    for w in layer:
        if len(w) == 1 and w[0] > 0:
            continue
        if not any(
            _trivial(base, reduce_refs(w + (-s,)))
            for s in by_sig.get(_sig(base, w), ())
        ):
            return False
    return True


def nuclearize(phi: Transducer, budget: int = 8) -> Transducer:
    """Extend the state set by the nucleus and re-letter over blocks of
    ``n`` input letters for the least ``n ≤ budget`` that makes the
    result nuclear.  The generated group is unchanged.
    """
    if phi.kind != FINITE_STATE:
        raise ValueError("nuclearize requires a finite-state transducer")
    size = max(budget, 64)
    report = nucleus(phi, budget=size)
    while not report.complete and size < 4096:
        size *= 4
        report = nucleus(phi, budget=size)
    if not report.complete:
        raise RuntimeError("nucleus did not stabilise within the budget")
    extended = _with_states(phi, report.nucleus)
    for n in range(1, budget + 1):
        if _pair_sections_collapse(extended, n):
            if n == 1:
                return extended
            cells = len(extended.alphabet) ** n * len(extended.states)
            if cells > 4_000_000:
                raise RuntimeError(
                    f"nuclear at block length {n}, but the block table "
                    f"({cells} cells) is too large to materialise"
                )
            return expand_alphabet(extended, n)
    raise RuntimeError(f"no block length up to {budget} is nuclear")


def _with_states(phi: Transducer, elements: Sequence[GroupWord]) -> Transducer:
    """A transducer over the states of ``phi`` plus one fresh state per
    element not already represented by a single state."""
    fresh: List[Tuple[str, Tuple[int, ...]]] = []
    used = set(phi.states.names)
    new_identity: Optional[str] = None
    for w in elements:
        if len(w.refs) == 1 and w.refs[0] > 0:
            continue
        if not w.refs and phi.states.identity:
            continue
        name = "e" if not w.refs else ".".join(
            phi.states.name(r) + ("" if r > 0 else "~") for r in w.refs
        )
        while name in used:
            name += "_"
        used.add(name)
        if not w.refs:
            new_identity = name
        fresh.append((name, w.refs))

    if not fresh:
        return phi
    names = phi.states.names + tuple(name for name, _ in fresh)
    identity = set(phi.states.identity)
    if new_identity is not None:
        identity.add(new_identity)
    states = StateSet(names, identity=frozenset(identity))

    table = {}
    for (letter, state), (out, out_letter) in phi.table().items():
        table[(letter, state)] = (out.refs, out_letter)
    for name, refs in fresh:
        if not refs:
            continue
        for a, letter in enumerate(phi.alphabet.letters):
            child, b = phi._trace_refs(a, refs)
            table[(letter, name)] = (child, phi.alphabet.letters[b])
    return Transducer(phi.alphabet, states, table, kind=phi.kind)


# -- path criterion --------------------------------------------------------


def path_contraction_bound(phi: Transducer, n_max: int) -> Optional[int]:
    """Least ``N ≤ n_max`` such that every freely reduced input word of
    length ``N`` produces an empty output somewhere along its path in
    the dual Moore diagram, or ``None``.

    ``Some(N)`` certifies contraction with ``|g@a| ≤ (1-1/N)·|g| + 1``.
    Outputs of identity-flagged states count as empty.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    na = len(phi.alphabet)
    ns = len(phi.states)
    signed = [r for s in range(1, ns + 1) for r in (s, -s)]
    steps: Dict[int, List[Tuple[int, int]]] = {a: [] for a in range(na)}
    for a in range(na):
        for r in signed:
            out, b = phi._trace_refs(a, (r,))
            if out:
                steps[a].append((r, b))

    frontier = {(b, r) for a in range(na) for (r, b) in steps[a]}
    if not frontier:
        return 1
    for length in range(2, n_max + 1):
        frontier = {
            (b, r)
            for (a, p) in frontier
            for (r, b) in steps[a]
            if r != -p
        }
        if not frontier:
            return length
    return None
