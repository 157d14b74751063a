"""Letter-to-letter and letter-to-word transducers acting on infinite
words, with group-word outputs.

A transducer holds, for every (letter, state) pair, an output word over
the states and an output letter.  Processing a letter through a word of
states threads the letter left to right through each factor, collecting
the outputs; inverse factors are handled by inverting the letter map of
the state and the output word.  Every state must permute the letters —
this is what makes inverses meaningful and is enforced for both kinds.

Two kinds are distinguished: ``finite_state`` transducers output exactly
one positive state (or nothing) per step, so sections of group elements
stay words over the states; ``asynchronous`` ones may output arbitrary
words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Tuple

from .words import GroupWord, StateSet

FINITE_STATE = "finite_state"
ASYNCHRONOUS = "asynchronous"


@dataclass(frozen=True)
class Alphabet:
    """Ordered, unique letter names."""

    letters: Tuple[str, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("alphabet must be nonempty")
        index: dict[str, int] = {}
        for i, letter in enumerate(self.letters):
            if not letter:
                raise ValueError("letters must be nonempty strings")
            if letter in index:
                raise ValueError(f"duplicate letter {letter!r}")
            index[letter] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, letter: str) -> bool:
        return letter in self._index

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise KeyError(f"unknown letter {letter!r}") from None


class TraceResult(NamedTuple):
    residual: GroupWord
    letter: str


@dataclass(frozen=True)
class Report:
    problems: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


def _as_refs(states: StateSet, output) -> Tuple[int, ...]:
    if output is None:
        return ()
    if isinstance(output, GroupWord):
        return output.refs
    if isinstance(output, str):
        if output in ("", "-"):
            return ()
        return states.parse_word(output).refs
    return states.word(output).refs


class Transducer:
    """A transducer over ``alphabet`` with states ``states``.

    ``table`` maps ``(letter, state)`` name pairs to ``(output,
    out_letter)``; the output may be a word string (``"-"`` for the
    empty word), an iterable of tokens or signed references, or a
    :class:`GroupWord`.  Pairs left out of the table are *missing*:
    :func:`validate` reports them and tracing through them raises.
    Identity-flagged states get the row ``(empty, same letter)``
    synthesised for every letter not explicitly provided.
    """

    __slots__ = (
        "alphabet",
        "states",
        "kind",
        "_out",
        "_olet",
        "_pre",
        "_expanded_from",
        "_cache",
    )

    def __init__(
        self,
        alphabet: Alphabet,
        states: StateSet,
        table: Mapping = (),
        kind: str = FINITE_STATE,
    ):
        if kind not in (FINITE_STATE, ASYNCHRONOUS):
            raise ValueError(f"unknown transducer kind {kind!r}")
        na, ns = len(alphabet), len(states)
        out: list[list[Optional[Tuple[int, ...]]]] = [[None] * na for _ in range(ns)]
        olet: list[list[Optional[int]]] = [[None] * na for _ in range(ns)]
        if isinstance(table, Mapping):
            items = table.items()
        else:
            items = table
        for (letter, state), (output, out_letter) in items:
            a, s = alphabet.index(letter), states.index(state)
            if out[s][a] is not None:
                raise ValueError(f"duplicate transition ({letter!r}, {state!r})")
            out[s][a] = _as_refs(states, output)
            olet[s][a] = alphabet.index(out_letter)
        for name in states.identity:
            s = states.index(name)
            for a in range(na):
                if out[s][a] is None:
                    out[s][a] = ()
                    olet[s][a] = a
        self.alphabet = alphabet
        self.states = states
        self.kind = kind
        self._out = out
        self._olet = olet
        self._pre: list[Optional[list[int]]] = [None] * ns
        self._expanded_from: Optional[tuple] = None
        self._cache: dict = {}

    @classmethod
    def _from_rows(cls, alphabet, states, out, olet, kind) -> "Transducer":
        t = cls.__new__(cls)
        t.alphabet = alphabet
        t.states = states
        t.kind = kind
        t._out = out
        t._olet = olet
        t._pre = [None] * len(states)
        t._expanded_from = None
        t._cache = {}
        return t

    # -- inspection ----------------------------------------------------

    def transition(self, letter: str, state: str) -> Tuple[GroupWord, str]:
        a, s = self.alphabet.index(letter), self.states.index(state)
        refs, b = self._out[s][a], self._olet[s][a]
        if refs is None or b is None:
            raise ValueError(f"missing transition ({letter!r}, {state!r})")
        return GroupWord(refs), self.alphabet.letters[b]

    def table(self) -> dict:
        """The full table as a name-keyed dict (rebuilt on each call)."""
        result = {}
        for s, state in enumerate(self.states.names):
            for a, letter in enumerate(self.alphabet.letters):
                refs, b = self._out[s][a], self._olet[s][a]
                if refs is None or b is None:
                    continue
                result[(letter, state)] = (GroupWord(refs), self.alphabet.letters[b])
        return result

    # -- tracing -------------------------------------------------------

    def _preimage_row(self, s: int) -> list:
        row = self._pre[s]
        if row is None:
            olet = self._olet[s]
            row = [-1] * len(self.alphabet)
            for a, b in enumerate(olet):
                if b is None:
                    continue
                if row[b] != -1:
                    raise ValueError(
                        f"state {self.states.names[s]!r}: letter map is not invertible"
                    )
                row[b] = a
            self._pre[s] = row
        return row

    def _trace_refs(self, a: int, refs: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """Thread letter index ``a`` through the word ``refs``."""
        acc: list[int] = []
        out, olet = self._out, self._olet
        for r in refs:
            if r > 0:
                s = r - 1
                w, b = out[s][a], olet[s][a]
                if w is None or b is None:
                    raise ValueError(
                        f"missing transition ({self.alphabet.letters[a]!r}, "
                        f"{self.states.names[s]!r})"
                    )
                for x in w:
                    if acc and acc[-1] == -x:
                        acc.pop()
                    else:
                        acc.append(x)
                a = b
            else:
                s = -r - 1
                b = self._preimage_row(s)[a]
                if b == -1:
                    raise ValueError(
                        f"state {self.states.names[s]!r}: letter "
                        f"{self.alphabet.letters[a]!r} has no preimage"
                    )
                w = out[s][b]
                assert w is not None
                for x in reversed(w):
                    if acc and acc[-1] == x:
                        acc.pop()
                    else:
                        acc.append(-x)
                a = b
        return tuple(acc), a

    def _letter_image(self, a: int, refs: Sequence[int]) -> int:
        """Like :meth:`_trace_refs` but tracks only the letter."""
        olet = self._olet
        for r in refs:
            if r > 0:
                b = olet[r - 1][a]
                if b is None:
                    raise ValueError("missing transition")
                a = b
            else:
                a = self._preimage_row(-r - 1)[a]
                if a == -1:
                    raise ValueError("letter has no preimage")
        return a

    def _perm_signature(self, refs: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self._letter_image(a, refs) for a in range(len(self.alphabet)))


def trace_letter(t: Transducer, letter: str, g: GroupWord) -> TraceResult:
    """Process one letter through the word ``g``, left to right.

    Returns the residual word (the section of ``g`` at the letter) and
    the output letter.

    >>> from .zoo import grigorchuk
    >>> t = grigorchuk()
    >>> g = t.states.parse_word("b")
    >>> trace_letter(t, "0", g)
    TraceResult(residual=GroupWord(refs=(1,)), letter='0')
    """
    refs, b = t._trace_refs(t.alphabet.index(letter), g.refs)
    return TraceResult(GroupWord(refs), t.alphabet.letters[b])


def validate(t: Transducer) -> Report:
    """Check totality, per-state letter bijectivity, identity flags,
    and the output discipline of the declared kind."""
    problems: list[str] = []
    for s, state in enumerate(t.states.names):
        seen: dict[int, str] = {}
        for a, letter in enumerate(t.alphabet.letters):
            refs, b = t._out[s][a], t._olet[s][a]
            if refs is None or b is None:
                problems.append(f"table not total: missing ({letter}, {state})")
                continue
            if b in seen:
                problems.append(
                    f"state {state}: letters {seen[b]} and {letter} share "
                    f"output letter {t.alphabet.letters[b]}"
                )
            else:
                seen[b] = letter
            if t.kind == FINITE_STATE:
                if len(refs) > 1 or any(r < 0 for r in refs):
                    problems.append(
                        f"state {state}, letter {letter}: output is not a "
                        "single positive state"
                    )
            if state in t.states.identity:
                if refs != () or b != a:
                    problems.append(
                        f"state {state} is flagged identity but acts on {letter}"
                    )
    return Report(tuple(problems))


def compose(phi: Transducer, psi: Transducer) -> Transducer:
    """Product transducer on pairs of letters, named ``a|b``.

    On letter ``(a, b)`` and state ``s``, first ``psi`` processes ``b``
    giving ``(w, b')``, then ``a`` is threaded through ``w`` by ``phi``
    giving ``(w', a')``; the result is ``(w', (a', b'))``.  Both factors
    must share one state set.
    """
    if phi.states is not psi.states and phi.states != psi.states:
        raise ValueError("compose requires transducers over the same state set")
    states = phi.states
    letters = tuple(
        f"{a}|{b}" for a in phi.alphabet.letters for b in psi.alphabet.letters
    )
    alphabet = Alphabet(letters)
    nb = len(psi.alphabet)
    ns = len(states)
    identity_idx = {states.index(n) for n in states.identity}
    out: list[list] = [[None] * len(letters) for _ in range(ns)]
    olet: list[list] = [[None] * len(letters) for _ in range(ns)]
    for s in range(ns):
        if s in identity_idx:
            for i in range(len(letters)):
                out[s][i] = ()
                olet[s][i] = i
            continue
        for b in range(nb):
            w, b2 = psi._out[s][b], psi._olet[s][b]
            if w is None or b2 is None:
                raise ValueError(
                    f"missing transition ({psi.alphabet.letters[b]!r}, "
                    f"{states.names[s]!r})"
                )
            for a in range(len(phi.alphabet)):
                w2, a2 = phi._trace_refs(a, w)
                i = a * nb + b
                out[s][i] = w2
                olet[s][i] = a2 * nb + b2
    kind = FINITE_STATE if phi.kind == psi.kind == FINITE_STATE else ASYNCHRONOUS
    return Transducer._from_rows(alphabet, states, out, olet, kind)


def expand_alphabet(t: Transducer, n: int) -> Transducer:
    """Re-letter a finite-state transducer over blocks of ``n`` input
    letters, named by joining with ``|``.

    The result remembers its base, so the word problem can be answered
    on the base transducer: a word moves some block ray over the big
    alphabet exactly when it moves some letter ray over the small one.
    """
    if t.kind != FINITE_STATE:
        raise ValueError("expand_alphabet requires a finite-state transducer")
    if n < 1:
        raise ValueError("block length must be at least 1")
    base_letters = t.alphabet.letters
    na = len(base_letters)
    blocks: list[Tuple[int, ...]] = [()]
    for _ in range(n):
        blocks = [blk + (a,) for blk in blocks for a in range(na)]
    alphabet = Alphabet(tuple("|".join(base_letters[a] for a in blk) for blk in blocks))
    ns = len(t.states)
    identity_idx = {t.states.index(nm) for nm in t.states.identity}
    out: list[list] = [[None] * len(blocks) for _ in range(ns)]
    olet: list[list] = [[None] * len(blocks) for _ in range(ns)]
    for s in range(ns):
        if s in identity_idx:
            for i in range(len(blocks)):
                out[s][i] = ()
                olet[s][i] = i
            continue
        for i, blk in enumerate(blocks):
            refs: Tuple[int, ...] = (s + 1,)
            code = 0
            for a in blk:
                refs, b = t._trace_refs(a, refs)
                code = code * na + b
            out[s][i] = refs
            olet[s][i] = code
    expanded = Transducer._from_rows(alphabet, t.states, out, olet, FINITE_STATE)
    expanded._expanded_from = (t, n)
    return expanded
