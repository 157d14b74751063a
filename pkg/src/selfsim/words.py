"""Free-group words over a named set of generators.

Group elements are stored as tuples of signed 1-based integers: ``3``
means the third generator, ``-3`` its inverse.  Words are kept freely
reduced at all times, and generators flagged as acting trivially are
erased when a word is built through :meth:`StateSet.word`, so that
syntactic comparison is meaningful wherever it is sound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Tuple


def reduce_refs(refs: Iterable[int]) -> Tuple[int, ...]:
    """Freely reduce a sequence of signed generator references.

    >>> reduce_refs([1, 2, -2, 3])
    (1, 3)
    >>> reduce_refs([1, -1])
    ()
    >>> reduce_refs([-2, 2, -2])
    (-2,)
    """
    out: list[int] = []
    for r in refs:
        if out and out[-1] == -r:
            out.pop()
        else:
            out.append(r)
    return tuple(out)


def _letter_rank(ref: int) -> int:
    # Order generators as 1 < 1^-1 < 2 < 2^-1 < ...
    return 2 * ref - 2 if ref > 0 else -2 * ref - 1


def cyclic_key(refs: Sequence[int]) -> Tuple[int, ...]:
    """Least word, generator-rank-lexicographically, among all cyclic
    rotations of ``refs`` and of its inverse.

    Used as a cheap canonical form for symmetric conjugacy classes:
    two words with different keys may still be conjugate, but equal
    keys always mean conjugate (or inverse-conjugate) words.

    >>> cyclic_key([2, 1])
    (1, 2)
    >>> cyclic_key([-1, -2])
    (1, 2)
    >>> cyclic_key([])
    ()
    """
    word = tuple(refs)
    if not word:
        return ()
    inverse = tuple(-r for r in reversed(word))
    best: Tuple[int, ...] | None = None
    best_rank: Tuple[int, ...] | None = None
    for base in (word, inverse):
        for i in range(len(base)):
            rot = base[i:] + base[:i]
            rank = tuple(_letter_rank(r) for r in rot)
            if best_rank is None or rank < best_rank:
                best, best_rank = rot, rank
    assert best is not None
    return best


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word in the generators, as signed references."""

    refs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        reduced = reduce_refs(self.refs)
        if reduced != tuple(self.refs):
            object.__setattr__(self, "refs", reduced)

    @property
    def is_identity(self) -> bool:
        return not self.refs

    def __len__(self) -> int:
        return len(self.refs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.refs)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.refs + other.refs)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(-r for r in reversed(self.refs)))

    def __pow__(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse() ** (-n)
        result = GroupWord()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, h: "GroupWord") -> "GroupWord":
        """g^h = h^-1 g h."""
        return h.inverse() * self * h


def commutator(g: GroupWord, h: GroupWord) -> GroupWord:
    """[g, h] = g^-1 h^-1 g h."""
    return g.inverse() * h.inverse() * g * h


_TOKEN_RE = re.compile(r"^(?P<name>.*?)(?P<inv>')?(?:\^(?P<exp>-?\d+))?$")


@dataclass(frozen=True)
class StateSet:
    """Ordered generator names with a set of identity-flagged names."""

    names: Tuple[str, ...]
    identity: frozenset = frozenset()
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.names:
            raise ValueError("state set must be nonempty")
        index: dict[str, int] = {}
        for i, name in enumerate(self.names):
            if not name:
                raise ValueError("state names must be nonempty")
            if name in index:
                raise ValueError(f"duplicate state name {name!r}")
            index[name] = i
        unknown = set(self.identity) - set(index)
        if unknown:
            raise ValueError(f"identity flags on unknown states: {sorted(unknown)}")
        object.__setattr__(self, "identity", frozenset(self.identity))
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown state {name!r}") from None

    def ref(self, name: str) -> int:
        """1-based positive reference for a state name."""
        return self.index(name) + 1

    def name(self, ref: int) -> str:
        return self.names[abs(ref) - 1]

    def word(self, items: Iterable) -> GroupWord:
        """Build a word from signed ints, state names, or word tokens.

        Name tokens may carry a trailing apostrophe for the inverse and
        a ``^k`` repetition suffix (``k`` may be negative); identity-
        flagged states are erased.

        >>> s = StateSet(("a", "b", "e"), identity=frozenset({"e"}))
        >>> s.word(["a", "e", "b'"]).refs
        (1, -2)
        >>> s.word(["a^3"]).refs
        (1, 1, 1)
        >>> s.word([2, -2, 1]).refs
        (1,)
        """
        refs: list[int] = []
        for item in items:
            if isinstance(item, int):
                if item == 0 or abs(item) > len(self.names):
                    raise ValueError(f"reference {item} out of range")
                name = self.name(item)
                if name in self.identity:
                    continue
                refs.append(item)
                continue
            if item in self._index:
                name, inverted, count = item, False, 1
            else:
                match = _TOKEN_RE.match(item)
                if match is None or not match.group("name"):
                    raise ValueError(f"bad word token {item!r}")
                name = match.group("name")
                inverted = bool(match.group("inv"))
                count = 1 if match.group("exp") is None else int(match.group("exp"))
            ref = self.ref(name)
            if inverted:
                ref = -ref
            if count < 0:
                ref, count = -ref, -count
            if name in self.identity:
                continue
            refs.extend([ref] * count)
        return GroupWord(tuple(refs))

    def parse_word(self, text: str) -> GroupWord:
        """Parse a whitespace-separated word expression; ``-`` is the
        identity."""
        if text.strip() == "-":
            return GroupWord(())
        return self.word(text.split())

    def format_word(self, word: GroupWord) -> str:
        """Inverse of :meth:`parse_word`, one token per factor.

        >>> s = StateSet(("a", "b"))
        >>> s.format_word(s.word(["a", "b'", "a"]))
        "a b' a"
        """
        if word.is_identity:
            return "-"
        return " ".join(
            self.name(r) if r > 0 else self.name(r) + "'" for r in word.refs
        )
