"""A small zoo of standard transducers used in tests and docs."""

from __future__ import annotations

from .transducer import Alphabet, Transducer
from .words import StateSet


def grigorchuk() -> Transducer:
    """The five-state transducer generating the first Grigorchuk group.

    State ``a`` swaps the two letters; ``b``, ``c``, ``d`` recurse on
    letter 1 and defer to ``a`` (or nothing) on letter 0; ``e`` is the
    identity.
    """
    alphabet = Alphabet(("0", "1"))
    states = StateSet(("a", "b", "c", "d", "e"), identity=frozenset({"e"}))
    table = {
        ("0", "a"): ("-", "1"),
        ("1", "a"): ("-", "0"),
        ("0", "b"): ("a", "0"),
        ("1", "b"): ("c", "1"),
        ("0", "c"): ("a", "0"),
        ("1", "c"): ("d", "1"),
        ("0", "d"): ("-", "0"),
        ("1", "d"): ("b", "1"),
    }
    return Transducer(alphabet, states, table)


def binary_odometer() -> Transducer:
    """Binary add-one-with-carry on least-significant-digit-first rays."""
    alphabet = Alphabet(("0", "1"))
    states = StateSet(("odo", "e"), identity=frozenset({"e"}))
    table = {
        ("0", "odo"): ("-", "1"),
        ("1", "odo"): ("odo", "0"),
    }
    return Transducer(alphabet, states, table)
