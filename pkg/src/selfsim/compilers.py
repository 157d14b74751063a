"""Compilers from two-counter machines to transducers.

Three encodings of a machine run as a group acting on sequences:

* :func:`compile_wp` (asynchronous): a distinguished commutator is
  nontrivial exactly when the machine halts; one ``0`` consumed per
  simulated step (types I, VI, IX).
* :func:`compile_order` (finite-state): the element ``s_* x y`` has
  finite order exactly when the machine halts (types III, IV, V, VII,
  VIII).  Counter values live in the exponents of ``x`` and ``y`` as
  powers of two, so incrementing doubles and testing reads parity.
* :func:`compile_orbit` (finite-state): the orbit of the ray ``0^∞``
  under ``s_* x y`` is finite exactly when the machine halts, with one
  label-3 edge per simulated step (types III, IX, X).

Machines using other instruction types must be passed through
:func:`selfsim.minsky.normalize` first; the compilers reject them
rather than normalising silently, because normalisation changes step
counts and therefore orbit sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .action import Ray
from .minsky import Instruction, MinskyMachine, TARGETS
from .transducer import ASYNCHRONOUS, FINITE_STATE, Alphabet, Transducer, validate
from .words import GroupWord, StateSet, commutator


@dataclass(frozen=True)
class Compilation:
    """A compiled transducer with its distinguished elements.

    ``witnesses`` maps names like ``"start"`` to words over the
    compiled state set; ``base_ray`` is the ray the relevant decision
    problem acts on; ``target`` is one of ``wp``/``order``/``orbit``.
    """

    transducer: Transducer
    witnesses: Dict[str, GroupWord] = field(default_factory=dict)
    base_ray: Ray = Ray()
    target: str = "wp"
    machine: Optional[MinskyMachine] = None


def _check_types(mm: MinskyMachine, target: str) -> None:
    allowed = TARGETS[target]
    bad = sorted(
        {ins.type for ins in mm.program.values() if ins.type not in allowed}
    )
    if bad:
        raise ValueError(
            f"compile_{target} accepts instruction types "
            f"{sorted(allowed)} only, got {bad}; "
            f"normalize(mm, {target!r}) first"
        )


def _check_reserved(mm: MinskyMachine, reserved: Iterable[str]) -> None:
    clash = sorted(set(mm.states) & set(reserved))
    if clash:
        raise ValueError(f"machine states collide with reserved names: {clash}")


def _finish(
    table: dict,
    letters: List[str],
    states: List[str],
    identity: Iterable[str],
    kind: str,
) -> Transducer:
    t = Transducer(
        Alphabet(tuple(letters)),
        StateSet(tuple(states), identity=frozenset(identity)),
        table,
        kind=kind,
    )
    report = validate(t)
    if not report.ok:  # pragma: no cover - guards compiler bugs
        raise AssertionError("compiled table invalid: " + "; ".join(report.problems))
    return t


# -- word problem (asynchronous) ------------------------------------------


def compile_wp(mm: MinskyMachine) -> Compilation:
    """Compile a machine over types I, VI, IX for the word problem.

    The simulation runs along the ray ``0^∞``: every ``0`` consumed by
    ``g = (s_* x y) t (s_* x y)^-1`` advances the machine one step, and
    ``[g, u]`` moves the letters ``0^{k+1}`` and ``1^{k+1}`` exactly
    when the machine halts after ``k`` transitions.
    """
    _check_types(mm, "wp")
    _check_reserved(mm, ("t", "u", "x", "y"))
    halt = mm.final

    states: List[str] = list(mm.states)
    letters: List[str] = ["0", "1", "h1", "h2"]
    for s in mm.states:
        ins = mm.program.get(s)
        if ins is None:
            continue
        count = {"I": 1, "IX": 2, "VI": 5}[ins.type]
        letters.extend(f"{s}.{k}" for k in range(1, count + 1))
        if ins.type == "VI":
            states.extend((f"{s}.a", f"{s}.b"))
    states.extend(("t", "u", "x", "y"))

    table: dict = {}
    for state in states:
        for letter in letters:
            table[(letter, state)] = ((state,), letter)

    def put(letter: str, state: str, output, out_letter: str) -> None:
        table[(letter, state)] = (output, out_letter)

    # Universal rows: letter 1 is silently fixed by everything but u,
    # and u inverts the 0/1 spine while ignoring all other letters.
    for state in states:
        if state != "u":
            put("1", state, None, "1")
    for letter in letters:
        put(letter, "u", None, letter)
    put("0", "u", ("u",), "1")
    put("1", "u", ("u",), "0")

    # Halting detection: the final state turns the next 0 into h1, and
    # t toggles h1/h2 so that conjugation cannot undo the mark.
    put("0", halt, None, "h1")
    put("h1", halt, None, "0")
    put("h2", halt, None, "h2")
    put("h1", "t", None, "h2")
    put("h2", "t", None, "h1")
    for gen in ("x", "y"):
        put("h1", gen, None, "h1")
        put("h2", gen, None, "h2")

    for s, ins in mm.program.items():
        ty, tg = ins.type, ins.targets
        if ty == "I":
            L1 = f"{s}.1"
            put("0", s, (tg[0],), L1)
            put(L1, s, None, "0")
            put(L1, "x", ("x", "x"), L1)
            put(L1, "y", ("y",), L1)
        elif ty == "IX":
            L1, L2 = f"{s}.1", f"{s}.2"
            zero, dec = tg
            put("0", s, (dec,), L1)
            put(L1, s, None, "0")
            put(L1, "x", (dec + "'", zero, "x"), L2)
            put(L2, "x", ("x'", zero + "'", dec, "x"), L1)
            put(L1, "y", ("y",), L1)
            put(L2, "y", ("y",), L2)
        else:  # VI
            L = [f"{s}.{k}" for k in range(1, 6)]
            a, b = f"{s}.a", f"{s}.b"
            put("0", s, (a, b, "x"), L[0])
            put(L[0], s, None, "0")
            put("0", a, (a,), L[1])
            put(L[1], a, None, "0")
            put(L[1], b, (b,), L[3])
            put(L[2], b, (a + "'", tg[0]), L[4])
            put(L[3], b, None, L[1])
            put(L[4], b, None, L[2])
            put(L[0], "x", ("x'", b + "'", "x", b, "x"), L[0])
            put(L[1], "x", None, L[2])
            put(L[2], "x", ("x",), L[1])
            put(L[3], "x", ("x", "x"), L[3])
            put(L[4], "x", ("y",), L[4])
            put(L[0], "y", ("x'", "y", "x"), L[0])
            put(L[1], "y", ("y",), L[1])
            put(L[3], "y", ("y",), L[3])
            put(L[4], "y", ("x",), L[4])

    t = _finish(table, letters, states, (), ASYNCHRONOUS)
    ss = t.states
    start = ss.word((mm.start, "x", "y"))
    g = start * ss.word(("t",)) * start.inverse()
    u = ss.word(("u",))
    witnesses = {
        "start": start,
        "g": g,
        "u": u,
        "commutator": commutator(g, u),
    }
    return Compilation(t, witnesses, Ray((), ("0",)), "wp", mm)


def make_uniform_witness(comp: Compilation, n: int) -> GroupWord:
    """The commutator ``[(s_* x y^{2^n}) t (s_* x y^{2^n})^-1, u]``.

    One word per ``n ≥ 0``; all of them are trivial exactly when the
    compiled machine never halts, so they witness the same answer at
    every scale.  The reduced length is ``4·(2 + 2^n) + 4``.
    """
    if comp.target != "wp" or comp.machine is None:
        raise ValueError("uniform witnesses require a compile_wp compilation")
    if n < 0:
        raise ValueError("n must be nonnegative")
    ss = comp.transducer.states
    w = ss.word((comp.machine.start, "x")) * ss.word(("y",)) ** (2 ** n)
    g = w * ss.word(("t",)) * w.inverse()
    return commutator(g, ss.word(("u",)))


# -- order (finite-state) --------------------------------------------------

_ORDER_BLOCK_SIZE = {"III": 2, "IV": 2, "V": 2, "VII": 4, "VIII": 4}
_ORDER_TYPES_IN_ORDER = ("III", "IV", "V", "VII", "VIII")


def _inv(name: Optional[str]) -> Optional[str]:
    if name is None:
        return None
    return name[:-1] if name.endswith("~") else name + "~"


def _pair_swap_row(gen: str, L: List[str], B: List[str]) -> dict:
    # The x-row of a type-IV block: unbarred letters swap and emit one
    # gen per double step, barred letters mirror with the inverse.
    return {
        L[0]: (gen, L[1]),
        L[1]: (None, L[0]),
        B[0]: (None, B[1]),
        B[1]: (_inv(gen), B[0]),
    }


def _fixed_row(gen: str, L: List[str], B: List[str]) -> dict:
    row = {a: (gen, a) for a in L}
    row.update({a: (_inv(gen), a) for a in B})
    return row


def _quad_row(gen: str, L: List[str], B: List[str]) -> dict:
    # The x-row of a type-VII block: parity of the exponent decides
    # which half of the letters sees the generator.
    return {
        L[0]: (gen, L[3]),
        L[1]: (None, L[2]),
        L[2]: (None, L[1]),
        L[3]: (gen, L[0]),
        B[0]: (_inv(gen), B[3]),
        B[1]: (None, B[2]),
        B[2]: (None, B[1]),
        B[3]: (_inv(gen), B[0]),
    }


def _quad_fixed_row(gen: str, L: List[str], B: List[str]) -> dict:
    return {
        L[0]: (gen, L[0]),
        L[1]: (None, L[1]),
        L[2]: (None, L[2]),
        L[3]: (gen, L[3]),
        B[0]: (_inv(gen), B[0]),
        B[1]: (None, B[1]),
        B[2]: (None, B[2]),
        B[3]: (_inv(gen), B[3]),
    }


def _order_block(ty: str) -> Tuple[List[str], List[str]]:
    k = _ORDER_BLOCK_SIZE[ty]
    unbarred = [f"{ty}.{i}" for i in range(1, k + 1)]
    barred = [f"{ty}.{i}*" for i in range(1, k + 1)]
    return unbarred, barred


def _order_xy_rows(ty: str, L: List[str], B: List[str]) -> Tuple[dict, dict]:
    if ty == "III":
        return _fixed_row("x", L, B), _fixed_row("y", L, B)
    if ty == "IV":
        return _pair_swap_row("x", L, B), _fixed_row("y", L, B)
    if ty == "V":
        return _fixed_row("x", L, B), _pair_swap_row("y", L, B)
    if ty == "VII":
        return _quad_row("x", L, B), _quad_fixed_row("y", L, B)
    if ty == "VIII":
        return _quad_fixed_row("x", L, B), _quad_row("y", L, B)
    raise AssertionError(ty)


def _order_s_row(ins: Instruction, L: List[str], B: List[str]) -> dict:
    ty = ins.type
    if ty == "III":
        s1 = ins.targets[0]
        return {
            L[0]: (s1, L[1]),
            L[1]: (None, L[0]),
            B[0]: (None, B[1]),
            B[1]: (_inv(s1), B[0]),
        }
    if ty in ("IV", "V"):
        s1 = ins.targets[0]
        row = {a: (s1, a) for a in L}
        row.update({a: (_inv(s1), a) for a in B})
        return row
    # VII/VIII: targets are (jump-if-zero, fall-through); the zero
    # branch reads odd exponents, the other one even exponents.
    zero, other = ins.targets
    return {
        L[0]: (None, L[1]),
        L[1]: (other, L[0]),
        L[2]: (zero, L[3]),
        L[3]: (None, B[3]),
        B[0]: (_inv(other), B[1]),
        B[1]: (None, B[0]),
        B[2]: (None, L[2]),
        B[3]: (_inv(zero), B[2]),
    }


def _order_t_row(L: List[str], B: List[str]) -> dict:
    row = {a: (None, b) for a, b in zip(L, B)}
    row.update({b: (None, a) for a, b in zip(L, B)})
    return row


def compile_order(mm: MinskyMachine) -> Compilation:
    """Compile a machine over types III, IV, V, VII, VIII for the order
    problem: the machine halts iff ``s_* x y`` has finite order.

    States of the machine act on the letter block of their own type and
    flip barred letters of every other block; inverse states (named
    with a trailing ``~``) carry the derived inverse rows, so the
    transducer stays finite-state and closed under inversion.
    """
    _check_types(mm, "order")
    _check_reserved(mm, ("x", "y", "e", "x~", "y~"))
    present = [
        ty
        for ty in _ORDER_TYPES_IN_ORDER
        if any(ins.type == ty for ins in mm.program.values())
    ]
    if not present:
        present = ["III"]
    blocks = {ty: _order_block(ty) for ty in present}

    positive: List[str] = list(mm.states) + ["x", "y"]
    rows: Dict[str, dict] = {name: {} for name in positive}
    for ty in present:
        L, B = blocks[ty]
        xrow, yrow = _order_xy_rows(ty, L, B)
        rows["x"].update(xrow)
        rows["y"].update(yrow)
        for s in mm.states:
            ins = mm.program.get(s)
            if ins is not None and ins.type == ty:
                rows[s].update(_order_s_row(ins, L, B))
            else:
                rows[s].update(_order_t_row(L, B))

    letters: List[str] = []
    for ty in present:
        L, B = blocks[ty]
        letters.extend(L)
        letters.extend(B)

    states = positive + [f"{name}~" for name in positive] + ["e"]
    table: dict = {}
    for name in positive:
        inverse_row: dict = {}
        for b, (o, a) in rows[name].items():
            table[(b, name)] = ((o,) if o else None, a)
            inverse_row[a] = (_inv(o), b)
        for a, (o, b) in inverse_row.items():
            table[(a, f"{name}~")] = ((o,) if o else None, b)

    t = _finish(table, letters, states, ("e",), FINITE_STATE)
    ss = t.states
    start = ss.word((mm.start, "x", "y"))
    witnesses = {
        "start": start,
        "commutator": commutator(ss.word(("x",)), ss.word(("y",))),
    }
    return Compilation(t, witnesses, Ray((), (letters[0],)), "order", mm)


# -- orbit (finite-state) --------------------------------------------------

_ORBIT_TYPES_IN_ORDER = ("III", "IX", "X")


def compile_orbit(mm: MinskyMachine) -> Compilation:
    """Compile a machine over types III, IX, X for the ray-orbit
    problem: the orbit of ``0^∞`` under ``s_* x y`` has size ``3^k``
    when the machine halts after ``k`` transitions, and is infinite
    otherwise.
    """
    _check_types(mm, "orbit")
    _check_reserved(mm, ("x", "y", "e"))
    present = [
        ty
        for ty in _ORBIT_TYPES_IN_ORDER
        if any(ins.type == ty for ins in mm.program.values())
    ]
    blocks = {
        ty: [f"{ty}.{i}" for i in range(1, (3 if ty == "III" else 5))]
        for ty in present
    }
    letters: List[str] = ["0"]
    for ty in present:
        letters.extend(blocks[ty])

    table: dict = {}

    def put(letter: str, state: str, output, out_letter: str) -> None:
        table[(letter, state)] = (output, out_letter)

    put("0", "x", None, "0")
    put("0", "y", None, "0")
    for ty in present:
        b = blocks[ty]
        if ty == "III":
            put(b[0], "x", ("x",), b[0])
            put(b[1], "x", ("x",), b[1])
            put(b[0], "y", ("y",), b[0])
            put(b[1], "y", ("y",), b[1])
        else:
            # Type X is type IX with the roles of x and y switched.
            swap, keep = ("y", "x") if ty == "X" else ("x", "y")
            put(b[0], swap, None, b[1])
            put(b[1], swap, None, b[0])
            put(b[2], swap, (swap,), b[3])
            put(b[3], swap, None, b[2])
            put(b[0], keep, None, b[0])
            put(b[1], keep, None, b[1])
            put(b[2], keep, (keep,), b[2])
            put(b[3], keep, (keep,), b[3])

    for s in mm.states:
        ins = mm.program.get(s)
        if ins is None:
            for letter in letters:
                put(letter, s, None, letter)
            continue
        for ty in present:
            if ty == ins.type:
                continue
            for letter in blocks[ty]:
                put(letter, s, (s,), letter)
        b = blocks[ins.type]
        if ins.type == "III":
            put("0", s, (ins.targets[0],), b[0])
            put(b[0], s, None, b[1])
            put(b[1], s, None, "0")
        else:
            zero, dec = ins.targets
            put("0", s, None, b[0])
            put(b[0], s, (dec,), b[3])
            put(b[1], s, (zero,), b[2])
            put(b[2], s, (zero,), b[1])
            put(b[3], s, None, "0")

    states = list(mm.states) + ["x", "y", "e"]
    t = _finish(table, letters, states, ("e",), FINITE_STATE)
    ss = t.states
    witnesses = {"start": ss.word((mm.start, "x", "y"))}
    return Compilation(t, witnesses, Ray((), ("0",)), "orbit", mm)
