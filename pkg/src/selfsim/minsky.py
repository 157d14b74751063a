"""Two-counter machines with a ten-instruction repertoire, plus
normalisation into the three instruction subsets the compilers accept.

Instruction types (one or two target states):

=====  ==========================================  ========
type   effect on (m, n)                            targets
=====  ==========================================  ========
I      m+1                                         1
II     n+1                                         1
III    m+1 and n+1                                 1
IV     m-1 (guard m>0)                             1
V      n-1 (guard n>0)                             1
VI     swap m and n                                1
VII    jump on m==0, counters kept                 2
VIII   jump on n==0, counters kept                 2
IX     m==0 -> first target; else m-1 -> second    2
X      n==0 -> first target; else n-1 -> second    2
=====  ==========================================  ========

``normalize`` rewrites any machine over a chosen subset while
preserving halting behaviour; a run of F steps becomes at most
``step_factor * F`` steps, and on halting the *multiset* of counter
values is preserved (the rewrites for the two richer targets track a
swap flag, so the counters may land exchanged).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Tuple

from .transducer import Report

INSTRUCTION_TYPES = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X")
_ARITY = {ty: (2 if ty in ("VII", "VIII", "IX", "X") else 1) for ty in INSTRUCTION_TYPES}

WP_TYPES = frozenset({"I", "VI", "IX"})
ORDER_TYPES = frozenset({"III", "IV", "V", "VII", "VIII"})
ORBIT_TYPES = frozenset({"III", "IX", "X"})
TARGETS: Mapping[str, frozenset] = {
    "wp": WP_TYPES,
    "order": ORDER_TYPES,
    "orbit": ORBIT_TYPES,
}
_FACTORS = {"wp": 4, "order": 2, "orbit": 3}


class GuardViolation(Exception):
    """A decrement was attempted on a zero counter."""


class AlreadyHalted(Exception):
    """step() was called on a configuration in the final state."""


@dataclass(frozen=True)
class Instruction:
    type: str
    targets: Tuple[str, ...]

    def __post_init__(self) -> None:
        if self.type not in INSTRUCTION_TYPES:
            raise ValueError(f"unknown instruction type {self.type!r}")
        object.__setattr__(self, "targets", tuple(self.targets))
        if len(self.targets) != _ARITY[self.type]:
            raise ValueError(
                f"type {self.type} takes {_ARITY[self.type]} target(s), "
                f"got {len(self.targets)}"
            )


@dataclass(frozen=True)
class Config:
    state: str
    m: int = 0
    n: int = 0


@dataclass(frozen=True)
class RunResult:
    halted: bool
    steps: int
    config: Config


@dataclass(frozen=True)
class MinskyMachine:
    states: Tuple[str, ...]
    start: str
    final: str
    program: Dict[str, Instruction] = field(default_factory=dict)
    step_factor: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        names = set(self.states)
        if len(names) != len(self.states):
            raise ValueError("duplicate state names")
        for special in (self.start, self.final):
            if special not in names:
                raise ValueError(f"state {special!r} not declared")
        if self.final in self.program:
            raise ValueError("the final state cannot carry an instruction")
        missing = names - {self.final} - set(self.program)
        if missing:
            raise ValueError(f"states without instructions: {sorted(missing)}")
        extra = set(self.program) - names
        if extra:
            raise ValueError(f"instructions for undeclared states: {sorted(extra)}")
        for s, ins in self.program.items():
            for target in ins.targets:
                if target not in names:
                    raise ValueError(
                        f"state {s}: jump target {target!r} not declared"
                    )


def step(mm: MinskyMachine, config: Config) -> Config:
    """One transition.  Raises on guard violations and on final configs.

    >>> mm = MinskyMachine(("s", "f"), "s", "f", {"s": Instruction("I", ("f",))})
    >>> step(mm, Config("s", 2, 3))
    Config(state='f', m=3, n=3)
    """
    if config.state == mm.final:
        raise AlreadyHalted(config.state)
    ins = mm.program[config.state]
    ty, tg, m, n = ins.type, ins.targets, config.m, config.n
    if ty == "I":
        return Config(tg[0], m + 1, n)
    if ty == "II":
        return Config(tg[0], m, n + 1)
    if ty == "III":
        return Config(tg[0], m + 1, n + 1)
    if ty == "IV":
        if m == 0:
            raise GuardViolation(f"decrement of m=0 in state {config.state}")
        return Config(tg[0], m - 1, n)
    if ty == "V":
        if n == 0:
            raise GuardViolation(f"decrement of n=0 in state {config.state}")
        return Config(tg[0], m, n - 1)
    if ty == "VI":
        return Config(tg[0], n, m)
    if ty == "VII":
        return Config(tg[0] if m == 0 else tg[1], m, n)
    if ty == "VIII":
        return Config(tg[0] if n == 0 else tg[1], m, n)
    if ty == "IX":
        return Config(tg[0], 0, n) if m == 0 else Config(tg[1], m - 1, n)
    if ty == "X":
        return Config(tg[0], m, 0) if n == 0 else Config(tg[1], m, n - 1)
    raise AssertionError(ty)


def run(mm: MinskyMachine, fuel: int, config: Optional[Config] = None) -> RunResult:
    """Run up to ``fuel`` transitions from ``config`` (default: start
    state with zero counters).  ``steps`` counts transitions taken."""
    if config is None:
        config = Config(mm.start, 0, 0)
    steps = 0
    while steps < fuel and config.state != mm.final:
        config = step(mm, config)
        steps += 1
    return RunResult(config.state == mm.final, steps, config)


def validate(mm: MinskyMachine) -> Report:
    """Semantic lint: unreachable states and reachable guard violations
    (probed by simulation from the start, 10000 transitions)."""
    problems = []
    reachable = {mm.start}
    frontier = [mm.start]
    while frontier:
        s = frontier.pop()
        ins = mm.program.get(s)
        if ins is None:
            continue
        for target in ins.targets:
            if target not in reachable:
                reachable.add(target)
                frontier.append(target)
    for s in mm.states:
        if s not in reachable:
            problems.append(f"state {s} is unreachable from {mm.start}")
    try:
        run(mm, 10000)
    except GuardViolation as exc:
        problems.append(f"guard violation reachable: {exc}")
    return Report(tuple(problems))


# -- normalisation -------------------------------------------------------


class _Builder:
    def __init__(self, mm: MinskyMachine):
        self.mm = mm
        self.program: Dict[str, Instruction] = {}
        self.order: list = []
        self.used = set(mm.states)
        self._dead: Optional[str] = None

    def fresh(self, base: str) -> str:
        i = 1
        while f"{base}.n{i}" in self.used:
            i += 1
        name = f"{base}.n{i}"
        self.used.add(name)
        return name

    def emit(self, state: str, ty: str, *targets: str) -> None:
        if state in self.program:
            raise AssertionError(f"double emit for {state}")
        self.program[state] = Instruction(ty, targets)
        self.order.append(state)

    def dead(self, ty: str) -> str:
        # A looping state standing in for a guard violation.
        if self._dead is None:
            name = "dead"
            while name in self.used:
                name += "_"
            self.used.add(name)
            self._dead = name
            if ty == "I":
                self.emit(name, "I", name)
            else:
                self.emit(name, "III", name)
        return self._dead

    def machine(self, start: str, factor: int) -> MinskyMachine:
        states = []
        seen = set()
        for s in [start] + self.order + [self.mm.final]:
            if s not in seen:
                seen.add(s)
                states.append(s)
        return MinskyMachine(
            tuple(states),
            start,
            self.mm.final,
            dict(self.program),
            step_factor=self.mm.step_factor * factor,
        )


def _emit_wp(mm: MinskyMachine, b: _Builder) -> None:
    for s in mm.states:
        ins = mm.program.get(s)
        if ins is None:
            continue
        ty, tg = ins.type, ins.targets
        if ty in ("I", "VI", "IX"):
            b.emit(s, ty, *tg)
        elif ty == "II":
            c1, c2 = b.fresh(s), b.fresh(s)
            b.emit(s, "VI", c1)
            b.emit(c1, "I", c2)
            b.emit(c2, "VI", tg[0])
        elif ty == "III":
            c1, c2, c3 = b.fresh(s), b.fresh(s), b.fresh(s)
            b.emit(s, "I", c1)
            b.emit(c1, "VI", c2)
            b.emit(c2, "I", c3)
            b.emit(c3, "VI", tg[0])
        elif ty == "IV":
            b.emit(s, "IX", b.dead("I"), tg[0])
        elif ty == "V":
            c1, c2 = b.fresh(s), b.fresh(s)
            b.emit(s, "VI", c1)
            b.emit(c1, "IX", b.dead("I"), c2)
            b.emit(c2, "VI", tg[0])
        elif ty == "VII":
            c = b.fresh(s)
            b.emit(s, "IX", tg[0], c)
            b.emit(c, "I", tg[1])
        elif ty == "VIII":
            c, c0, c1, c2 = b.fresh(s), b.fresh(s), b.fresh(s), b.fresh(s)
            b.emit(s, "VI", c)
            b.emit(c, "IX", c0, c1)
            b.emit(c0, "VI", tg[0])
            b.emit(c1, "I", c2)
            b.emit(c2, "VI", tg[1])
        elif ty == "X":
            c, c0, c1 = b.fresh(s), b.fresh(s), b.fresh(s)
            b.emit(s, "VI", c)
            b.emit(c, "IX", c0, c1)
            b.emit(c0, "VI", tg[0])
            b.emit(c1, "VI", tg[1])
        else:
            raise AssertionError(ty)


def _emit_flipped(mm: MinskyMachine, b: _Builder, target: str) -> str:
    """Rewrites for the two targets that cannot express a plain swap:
    machine states become (state, flag) pairs, where a raised flag means
    the simulated counters are stored exchanged."""

    def name(s: str, f: int) -> str:
        if s == mm.final:
            return mm.final
        return s if f == 0 else f"{s}.flip"

    pending = [(mm.start, 0)]
    done = set()
    while pending:
        s, f = pending.pop(0)
        if s == mm.final or (s, f) in done:
            continue
        done.add((s, f))
        ins = mm.program[s]
        ty, tg = ins.type, ins.targets
        node = name(s, f)

        def go(state: str, flip: int = f) -> str:
            pending.append((state, flip))
            return name(state, flip)

        if target == "order":
            dec_m = "IV" if f == 0 else "V"  # decrement the simulated m
            dec_n = "V" if f == 0 else "IV"
            test_m = "VII" if f == 0 else "VIII"
            test_n = "VIII" if f == 0 else "VII"
            if ty == "I":
                c = b.fresh(node)
                b.emit(node, "III", c)
                b.emit(c, dec_n, go(tg[0]))
            elif ty == "II":
                c = b.fresh(node)
                b.emit(node, "III", c)
                b.emit(c, dec_m, go(tg[0]))
            elif ty == "III":
                b.emit(node, "III", go(tg[0]))
            elif ty == "IV":
                b.emit(node, dec_m, go(tg[0]))
            elif ty == "V":
                b.emit(node, dec_n, go(tg[0]))
            elif ty == "VI":
                flipped = go(tg[0], 1 - f)
                b.emit(node, test_m, flipped, flipped)
            elif ty == "VII":
                b.emit(node, test_m, go(tg[0]), go(tg[1]))
            elif ty == "VIII":
                b.emit(node, test_n, go(tg[0]), go(tg[1]))
            elif ty == "IX":
                c = b.fresh(node)
                b.emit(node, test_m, go(tg[0]), c)
                b.emit(c, dec_m, go(tg[1]))
            elif ty == "X":
                c = b.fresh(node)
                b.emit(node, test_n, go(tg[0]), c)
                b.emit(c, dec_n, go(tg[1]))
            else:
                raise AssertionError(ty)
        else:  # orbit
            dec_m = "IX" if f == 0 else "X"  # IX(dead, t): guarded decrement
            dec_n = "X" if f == 0 else "IX"
            if ty == "I":
                c = b.fresh(node)
                b.emit(node, "III", c)
                b.emit(c, dec_n, b.dead("III"), go(tg[0]))
            elif ty == "II":
                c = b.fresh(node)
                b.emit(node, "III", c)
                b.emit(c, dec_m, b.dead("III"), go(tg[0]))
            elif ty == "III":
                b.emit(node, "III", go(tg[0]))
            elif ty == "IV":
                b.emit(node, dec_m, b.dead("III"), go(tg[0]))
            elif ty == "V":
                b.emit(node, dec_n, b.dead("III"), go(tg[0]))
            elif ty == "VI":
                c1, c2 = b.fresh(node), b.fresh(node)
                b.emit(node, "III", c1)
                b.emit(c1, "IX", b.dead("III"), c2)
                b.emit(c2, "X", b.dead("III"), go(tg[0], 1 - f))
            elif ty in ("VII", "VIII"):
                # Non-destructive test: guarded decrement of the tested
                # counter, then restore it by incrementing both and
                # dropping the other one again.
                probe, undo = (dec_m, dec_n) if ty == "VII" else (dec_n, dec_m)
                c1, c2 = b.fresh(node), b.fresh(node)
                b.emit(node, probe, go(tg[0]), c1)
                b.emit(c1, "III", c2)
                b.emit(c2, undo, b.dead("III"), go(tg[1]))
            elif ty == "IX":
                b.emit(node, dec_m, go(tg[0]), go(tg[1]))
            elif ty == "X":
                b.emit(node, dec_n, go(tg[0]), go(tg[1]))
            else:
                raise AssertionError(ty)
    return name(mm.start, 0)


def normalize(mm: MinskyMachine, target: str) -> MinskyMachine:
    """Rewrite ``mm`` over the instruction subset named by ``target``
    (``wp``: I/VI/IX, ``order``: III/IV/V/VII/VIII, ``orbit``:
    III/IX/X).  Machines already inside the subset come back unchanged.

    Halting is preserved: a run halting in F transitions halts within
    ``step_factor`` times F transitions, with the same counter multiset.
    """
    types = TARGETS.get(target)
    if types is None:
        raise ValueError(f"unknown target {target!r} (wp, order, or orbit)")
    if all(ins.type in types for ins in mm.program.values()):
        return mm
    b = _Builder(mm)
    if target == "wp":
        _emit_wp(mm, b)
        start = mm.start
    else:
        start = _emit_flipped(mm, b, target)
    return b.machine(start, _FACTORS[target])
