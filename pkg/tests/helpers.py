"""Shared test fixtures: an independent re-implementation of the tree
action (used as the oracle for everything in the action module), a
counter-machine corpus, and a couple of word generators.

The oracle reads the transition table as plain data and recurses on the
definition of the action, so it shares no code with the traced
implementation it checks.
"""

from __future__ import annotations

import random
from typing import Dict, List, Sequence, Tuple

from selfsim import GroupWord, Transducer
from selfsim.minsky import Instruction, MinskyMachine


def oracle_act(t: Transducer, g: GroupWord, word: Sequence[str]) -> Tuple[str, ...]:
    """Recursive reference action of ``g`` on a finite word."""
    table = {}
    for (letter, state), (out, out_letter) in t.table().items():
        table[(letter, state)] = (out.refs, out_letter)
    names = t.states.names
    letters = t.alphabet.letters

    def one(refs: Tuple[int, ...], a: str) -> Tuple[Tuple[int, ...], str]:
        residual: List[int] = []
        for r in refs:
            if r > 0:
                out, a = table[(a, names[r - 1])]
                residual.extend(out)
            else:
                state = names[-r - 1]
                for b in letters:
                    if table[(b, state)][1] == a:
                        a = b
                        break
                else:
                    raise AssertionError(f"no preimage of {a!r} under {state}")
                residual.extend(-x for x in reversed(table[(a, state)][0]))
        return tuple(residual), a

    def act(refs: Tuple[int, ...], rest: Sequence[str]) -> Tuple[str, ...]:
        if not rest:
            return ()
        residual, image = one(refs, rest[0])
        return (image,) + act(residual, rest[1:])

    return act(g.refs, tuple(word))


def random_word(rng: random.Random, t: Transducer, max_len: int = 6) -> GroupWord:
    """A random signed word over the non-identity states of ``t``."""
    pool = [
        i + 1
        for i, name in enumerate(t.states.names)
        if name not in t.states.identity
    ]
    refs = tuple(
        rng.choice(pool) * rng.choice((1, -1))
        for _ in range(rng.randint(0, max_len))
    )
    return GroupWord(refs)


def random_letters(rng: random.Random, t: Transducer, length: int) -> Tuple[str, ...]:
    return tuple(rng.choice(t.alphabet.letters) for _ in range(length))


def machine(spec: str) -> MinskyMachine:
    """Compact machine notation: ``"s1:I(s2); s2:IX(halt,halt)"``.

    States are declared in order of appearance; the single state never
    given an instruction is the final state; the first state is the
    start.  A bare name declares a state without an instruction (for
    machines whose halting state is unreachable).
    """
    program: Dict[str, Instruction] = {}
    order: List[str] = []

    def note(name: str) -> None:
        if name not in order:
            order.append(name)

    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            note(chunk)
            continue
        head, _, rest = chunk.partition(":")
        ty, _, targets = rest.strip().partition("(")
        tgt = tuple(x.strip() for x in targets.rstrip(")").split(","))
        note(head.strip())
        for x in tgt:
            note(x)
        program[head.strip()] = Instruction(ty.strip(), tgt)
    final = [name for name in order if name not in program]
    if len(final) != 1:
        raise ValueError(f"need exactly one final state, got {final}")
    return MinskyMachine(tuple(order), order[0], final[0], program)


# Machines exercising every instruction type, loops, guards and jumps.
MACHINE_CORPUS: Tuple[Tuple[str, str], ...] = (
    ("increment-both-halt", "s1:III(halt)"),
    ("two-step-halting", "s1:I(s2); s2:IX(halt,halt)"),
    ("self-loop", "s1:IX(s1,s1); halt"),
    ("count-up-down", "s1:I(s2); s2:I(s3); s3:IX(halt,s3)"),
    ("swap-then-test", "s1:II(s2); s2:VI(s3); s3:IX(halt,s3)"),
    ("jump-on-m", "s1:VII(halt,s2); s2:IV(s1)"),
    ("jump-on-n", "s1:II(s2); s2:VIII(s3,s4); s3:I(halt); s4:V(s1)"),
    ("n-counter-loop", "s1:II(s2); s2:X(halt,s2)"),
    ("guarded-descent", "s1:III(s2); s2:IV(s3); s3:V(halt)"),
    ("three-chain", "s1:III(s2); s2:III(s3); s3:III(halt)"),
    ("ping-pong", "s1:I(s2); s2:VI(s3); s3:X(halt,s2)"),
    ("never-halts", "s1:I(s1); halt"),
)


def corpus() -> List[Tuple[str, MinskyMachine]]:
    return [(name, machine(spec)) for name, spec in MACHINE_CORPUS]
