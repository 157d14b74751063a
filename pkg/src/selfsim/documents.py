"""Plain-text document formats for transducers and counter machines.

Transducer documents (``.fra``)::

    kind: finite_state
    alphabet: 0 1
    states: a b c d e
    identity: e
    a , 0 -> - , 1
    b , 0 -> a , 0
    ...
    witness start = a b
    ray base = - , 0

``kind`` is ``finite_state`` (default) or ``asynchronous``.  A
transition line reads "in state X, on input letter ℓ, emit OUTPUT and
pass letter ℓ' on"; OUTPUT is ``-`` for the empty word or
whitespace-joined state tokens (apostrophe for inverse, ``^k`` for
repetition).  ``default: identity`` fills every unspecified pair
``(s, a)`` with the copy rule ``s , a -> s , a``.  Identity-flagged
states need no transition lines (and may not have any).  Witness lines
name group words, ray lines name eventually periodic rays as
``PREPERIOD , PERIOD`` with ``-`` for an empty preperiod.

Machine documents (``.mm``)::

    states: s1 s2 halt
    start: s1
    final: halt
    s1: I s2
    s2: IX halt halt

Both formats ignore blank lines and ``#`` comments and round-trip:
``parse(serialize(doc)) == doc``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .action import Ray
from .minsky import Instruction, MinskyMachine, _ARITY
from .transducer import ASYNCHRONOUS, FINITE_STATE, Alphabet, Transducer
from .transducer import validate as _validate_transducer
from .words import GroupWord, StateSet


class DocumentError(ValueError):
    """A parse problem, carrying the 1-based line number when known."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class TransducerDocument:
    transducer: Transducer
    witnesses: Dict[str, GroupWord] = field(default_factory=dict)
    rays: Dict[str, Ray] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransducerDocument):
            return NotImplemented
        mine, theirs = self.transducer, other.transducer
        return (
            mine.kind == theirs.kind
            and mine.alphabet.letters == theirs.alphabet.letters
            and mine.states.names == theirs.states.names
            and mine.states.identity == theirs.states.identity
            and mine.table() == theirs.table()
            and self.witnesses == other.witnesses
            and self.rays == other.rays
        )


@dataclass(frozen=True)
class MachineDocument:
    machine: MinskyMachine


_KINDS = {"finite_state": FINITE_STATE, "asynchronous": ASYNCHRONOUS}


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_transducer(text: str) -> TransducerDocument:
    """Parse a transducer document; errors carry line numbers.

    >>> doc = parse_transducer(
    ...     "alphabet: 0 1\\nstates: odo e\\nidentity: e\\n"
    ...     "odo , 0 -> - , 1\\nodo , 1 -> odo , 0\\n"
    ... )
    >>> doc.transducer.kind
    'finite_state'
    """
    kind: Optional[str] = None
    letters: Optional[Tuple[str, ...]] = None
    names: Optional[Tuple[str, ...]] = None
    identity: Tuple[str, ...] = ()
    use_default = False
    transitions: List[Tuple[int, str, str, str, str]] = []
    witness_lines: List[Tuple[int, str, str]] = []
    ray_lines: List[Tuple[int, str, str]] = []

    for lineno, line in _lines(text):
        head, sep, rest = line.partition(":")
        head = head.strip()
        if sep == ":" and head in ("kind", "alphabet", "states", "identity", "default"):
            rest = rest.strip()
            if head == "kind":
                if rest not in _KINDS:
                    raise DocumentError(
                        f"unknown kind {rest!r}; expected finite_state or asynchronous",
                        lineno,
                    )
                kind = _KINDS[rest]
            elif head == "alphabet":
                letters = tuple(rest.split())
                if not letters:
                    raise DocumentError("alphabet must not be empty", lineno)
            elif head == "states":
                names = tuple(rest.split())
                if not names:
                    raise DocumentError("states must not be empty", lineno)
            elif head == "identity":
                identity = tuple(rest.split())
            else:
                if rest != "identity":
                    raise DocumentError(
                        f"unknown default rule {rest!r}; only 'identity' is supported",
                        lineno,
                    )
                use_default = True
            continue
        if line.startswith("witness "):
            name, eq, tokens = line[len("witness ") :].partition("=")
            if eq != "=":
                raise DocumentError("witness line needs NAME = TOKENS", lineno)
            witness_lines.append((lineno, name.strip(), tokens.strip()))
            continue
        if line.startswith("ray "):
            name, eq, tokens = line[len("ray ") :].partition("=")
            if eq != "=":
                raise DocumentError("ray line needs NAME = PRE , PER", lineno)
            ray_lines.append((lineno, name.strip(), tokens.strip()))
            continue
        if "->" in line:
            left, _, right = line.partition("->")
            lhs = [part.strip() for part in left.split(",")]
            if len(lhs) != 2 or not all(lhs):
                raise DocumentError(
                    "transition line needs 'STATE , LETTER' left of ->", lineno
                )
            out_part, comma, letter_part = right.rpartition(",")
            if comma != "," or not out_part.strip() or not letter_part.strip():
                raise DocumentError(
                    "transition line needs 'OUTPUT , LETTER' right of ->", lineno
                )
            transitions.append(
                (lineno, lhs[0], lhs[1], out_part.strip(), letter_part.strip())
            )
            continue
        raise DocumentError(f"unrecognised line {line!r}", lineno)

    if letters is None:
        raise DocumentError("missing 'alphabet:' line")
    if names is None:
        raise DocumentError("missing 'states:' line")
    for flag in identity:
        if flag not in names:
            raise DocumentError(f"identity flag names unknown state {flag!r}")
    try:
        states = StateSet(names, identity=frozenset(identity))
        alphabet = Alphabet(letters)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None

    table: Dict[Tuple[str, str], Tuple[Optional[Tuple[str, ...]], str]] = {}
    state_line: Dict[str, int] = {}
    for lineno, state, letter, out, out_letter in transitions:
        if state not in names:
            raise DocumentError(f"unknown state {state!r}", lineno)
        if letter not in letters:
            raise DocumentError(f"unknown letter {letter!r}", lineno)
        if out_letter not in letters:
            raise DocumentError(f"unknown letter {out_letter!r}", lineno)
        if (letter, state) in table:
            raise DocumentError(
                f"duplicate transition for ({state!r}, {letter!r})", lineno
            )
        if state in states.identity:
            raise DocumentError(
                f"identity state {state!r} may not carry transitions", lineno
            )
        try:
            output = None if out == "-" else tuple(out.split())
            if output is not None:
                states.word(output)  # validate tokens now, with a line number
        except ValueError as exc:
            raise DocumentError(str(exc), lineno) from None
        table[(letter, state)] = (output, out_letter)
        state_line.setdefault(state, lineno)

    if kind is None:
        # No kind line: a table whose outputs are all empty or one
        # plain state token is finite-state, anything else asynchronous.
        kind = FINITE_STATE
        for output, _ in table.values():
            if output is None:
                continue
            if len(output) > 1 or any(x.endswith("'") or "^" in x for x in output):
                kind = ASYNCHRONOUS
                break

    if use_default:
        for state in names:
            if state in states.identity:
                continue
            for letter in letters:
                table.setdefault((letter, state), ((state,), letter))

    try:
        t = Transducer(alphabet, states, table, kind=kind)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    report = _validate_transducer(t)
    if not report.ok:
        problem = report.problems[0]
        lineno = next(
            (state_line[s] for s in names if s in state_line and s in problem),
            None,
        )
        raise DocumentError("; ".join(report.problems), lineno)

    witnesses: Dict[str, GroupWord] = {}
    for lineno, name, tokens in witness_lines:
        if not name or name in witnesses:
            raise DocumentError(f"bad or duplicate witness name {name!r}", lineno)
        try:
            witnesses[name] = GroupWord() if tokens == "-" else states.parse_word(tokens)
        except ValueError as exc:
            raise DocumentError(str(exc), lineno) from None

    rays: Dict[str, Ray] = {}
    for lineno, name, tokens in ray_lines:
        if not name or name in rays:
            raise DocumentError(f"bad or duplicate ray name {name!r}", lineno)
        pre_part, comma, per_part = tokens.partition(",")
        if comma != ",":
            raise DocumentError("ray line needs 'PRE , PER'", lineno)
        pre = () if pre_part.strip() == "-" else tuple(pre_part.split())
        per = tuple(per_part.split())
        for letter in pre + per:
            if letter not in letters:
                raise DocumentError(f"unknown letter {letter!r}", lineno)
        if not per:
            raise DocumentError("ray period must not be empty", lineno)
        rays[name] = Ray(pre, per)

    return TransducerDocument(t, witnesses, rays)


def serialize_transducer(doc: TransducerDocument) -> str:
    """Render a document; inverse of :func:`parse_transducer`."""
    t = doc.transducer
    states = t.states
    out = [
        "kind: " + ("finite_state" if t.kind == FINITE_STATE else "asynchronous"),
        "alphabet: " + " ".join(t.alphabet.letters),
        "states: " + " ".join(states.names),
    ]
    if states.identity:
        out.append(
            "identity: " + " ".join(n for n in states.names if n in states.identity)
        )
    for state in states.names:
        if state in states.identity:
            continue
        for letter in t.alphabet.letters:
            word, image = t.transition(letter, state)
            out.append(f"{state} , {letter} -> {states.format_word(word)} , {image}")
    for name in sorted(doc.witnesses):
        out.append(f"witness {name} = {states.format_word(doc.witnesses[name])}")
    for name in sorted(doc.rays):
        ray = doc.rays[name]
        pre = " ".join(ray.preperiod) if ray.preperiod else "-"
        out.append(f"ray {name} = {pre} , {' '.join(ray.period)}")
    return "\n".join(out) + "\n"


def parse_machine(text: str) -> MachineDocument:
    """Parse a counter-machine document; errors carry line numbers.

    >>> doc = parse_machine(
    ...     "states: s1 halt\\nstart: s1\\nfinal: halt\\ns1: I halt\\n"
    ... )
    >>> doc.machine.program["s1"].type
    'I'
    """
    names: Optional[Tuple[str, ...]] = None
    start: Optional[str] = None
    final: Optional[str] = None
    program_lines: List[Tuple[int, str, str]] = []

    for lineno, line in _lines(text):
        head, colon, rest = line.partition(":")
        head = head.strip()
        rest = rest.strip()
        if colon != ":":
            raise DocumentError(f"unrecognised line {line!r}", lineno)
        if head == "states":
            names = tuple(rest.split())
        elif head == "start":
            start = rest
        elif head == "final":
            final = rest
        else:
            program_lines.append((lineno, head, rest))

    if names is None:
        raise DocumentError("missing 'states:' line")
    if start is None:
        raise DocumentError("missing 'start:' line")
    if final is None:
        raise DocumentError("missing 'final:' line")

    program: Dict[str, Instruction] = {}
    for lineno, name, rest in program_lines:
        if name not in names:
            raise DocumentError(f"unknown state {name!r}", lineno)
        if name in program:
            raise DocumentError(f"duplicate instruction for {name!r}", lineno)
        parts = rest.split()
        if not parts:
            raise DocumentError("instruction line needs a type", lineno)
        ty, targets = parts[0], tuple(parts[1:])
        if ty not in _ARITY:
            raise DocumentError(f"unknown instruction type {ty!r}", lineno)
        for target in targets:
            if target not in names:
                raise DocumentError(f"unknown state {target!r}", lineno)
        try:
            program[name] = Instruction(ty, targets)
        except ValueError as exc:
            raise DocumentError(str(exc), lineno) from None

    try:
        mm = MinskyMachine(names, start, final, program)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    return MachineDocument(mm)


def serialize_machine(doc: MachineDocument) -> str:
    """Render a machine document; inverse of :func:`parse_machine`."""
    mm = doc.machine
    out = [
        "states: " + " ".join(mm.states),
        "start: " + mm.start,
        "final: " + mm.final,
    ]
    for state in mm.states:
        ins = mm.program.get(state)
        if ins is not None:
            out.append(f"{state}: {ins.type} {' '.join(ins.targets)}".rstrip())
    return "\n".join(out) + "\n"
