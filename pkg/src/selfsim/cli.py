"""Command-line surface.

Every subcommand reads a document (``.fra`` transducer or ``.mm``
counter machine), runs one library operation, and prints a plain
``key: value`` report.  Exit codes: 0 for a definite answer or
successful artifact, 2 when a budgeted search came back unknown, 1 for
any error (bad flags, unreadable files, malformed documents).

Group elements on the command line are whitespace-separated state
names with an apostrophe for inverses and ``^k`` for repetition
(``"s1 x y^4"``); a name that matches a witness stored in the document
refers to that witness.  Rays are written ``PRE , PER`` with ``-`` for
an empty preperiod, or name a ray stored in the document.

``SELFSIM_BUDGET`` overrides the default search budget (1000) for all
``--budget`` flags left unset.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Dict, Sequence

from .action import (
    Ray,
    act_ray,
    act_word,
    is_fixed_ray,
    state_at,
    word_problem_bounded,
    word_problem_fs,
)
from .compilers import compile_order, compile_orbit, compile_wp, make_uniform_witness
from .contraction import contractify, is_nuclear, nucleus, nuclearize
from .documents import (
    MachineDocument,
    TransducerDocument,
    parse_machine,
    parse_transducer,
    serialize_machine,
    serialize_transducer,
)
from .minsky import Config, TARGETS, normalize, run
from .minsky import validate as validate_machine
from .order import order, orbit_size_ray
from .tiling import check_tileset_property, periodicity_probe, tileset_from_transducer
from .transducer import FINITE_STATE
from .words import GroupWord

DEFAULT_BUDGET = 1000
DEFAULT_DEPTH = 12

_COMPILERS = {"wp": compile_wp, "order": compile_order, "orbit": compile_orbit}


class CommandError(ValueError):
    """A user-facing command failure (exit code 1)."""


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_transducer(path: str) -> TransducerDocument:
    return parse_transducer(_read(path))


def _load_machine(path: str) -> MachineDocument:
    return parse_machine(_read(path))


def _budget(args: argparse.Namespace) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("SELFSIM_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CommandError(f"SELFSIM_BUDGET must be an integer, got {env!r}")
    return DEFAULT_BUDGET


def _element(doc: TransducerDocument, text: str) -> GroupWord:
    if text in doc.witnesses:
        return doc.witnesses[text]
    return doc.transducer.states.parse_word(text)


def _parse_ray(doc: TransducerDocument, text: str) -> Ray:
    if text in doc.rays:
        return doc.rays[text]
    pre_part, comma, per_part = text.partition(",")
    if comma != ",":
        raise CommandError(f"ray {text!r} is neither a stored name nor 'PRE , PER'")
    pre = () if pre_part.strip() in ("", "-") else tuple(pre_part.split())
    per = tuple(per_part.split())
    if not per:
        raise CommandError("ray period must not be empty")
    letters = set(doc.transducer.alphabet.letters)
    for letter in pre + per:
        if letter not in letters:
            raise CommandError(f"unknown letter {letter!r} in ray")
    return Ray(pre, per)


def _format_ray(ray: Ray) -> str:
    pre = " ".join(ray.preperiod) if ray.preperiod else "-"
    return f"{pre} , {' '.join(ray.period)}"


def _emit(**pairs) -> None:
    for key, value in pairs.items():
        if value is None:
            continue
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key.replace('_', '-')}: {value}")


# -- handlers ----------------------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.file.endswith(".mm"):
        doc = _load_machine(args.file)
        report = validate_machine(doc.machine)
        _emit(
            states=len(doc.machine.states),
            start=doc.machine.start,
            final=doc.machine.final,
            ok=report.ok,
        )
        for problem in report.problems:
            _emit(problem=problem)
        return 0
    doc = _load_transducer(args.file)
    t = doc.transducer
    _emit(
        kind=t.kind,
        letters=len(t.alphabet),
        states=len(t.states),
        witnesses=len(doc.witnesses),
        rays=len(doc.rays),
        ok=True,
    )
    return 0


def _cmd_act(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    g = _element(doc, args.element)
    letters = tuple(args.word.split())
    for letter in letters:
        if letter not in t.alphabet.letters:
            raise CommandError(f"unknown letter {letter!r}")
    image = act_word(t, g, letters)
    residual = state_at(t, g, letters)
    _emit(
        input=" ".join(letters),
        output=" ".join(image),
        residual=t.states.format_word(residual),
    )
    return 0


def _cmd_ray(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    g = _element(doc, args.element)
    ray = _parse_ray(doc, args.ray)
    _emit(ray=_format_ray(ray))
    if t.kind == FINITE_STATE:
        image = act_ray(t, g, ray)
        _emit(image=_format_ray(image), fixed=image == ray)
        return 0
    verdict = is_fixed_ray(t, g, ray, budget=_budget(args))
    if verdict.is_yes:
        _emit(fixed=True)
        return 0
    if verdict.is_no:
        _emit(fixed=False, witness=" ".join(verdict.witness))
        return 0
    _emit(fixed="unknown", spent=verdict.spent)
    return 2


def _cmd_wp(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    g = _element(doc, args.element)
    _emit(element=args.element)
    if args.depth is None and t.kind == FINITE_STATE:
        answer = word_problem_fs(t, g)
        _emit(trivial=answer.trivial)
        if answer.witness is not None:
            _emit(witness=" ".join(answer.witness))
        return 0
    depth = args.depth if args.depth is not None else DEFAULT_DEPTH
    verdict = word_problem_bounded(t, g, depth)
    if verdict.is_yes:
        _emit(trivial=True)
        return 0
    if verdict.is_no:
        _emit(trivial=False, witness=" ".join(verdict.witness))
        return 0
    _emit(trivial="unknown", depth=depth)
    return 2


def _order_exit(result) -> int:
    if result.is_unknown:
        _emit(spent=result.spent)
        return 2
    return 0


def _cmd_order(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    g = _element(doc, args.element)
    result = order(doc.transducer, g, budget=_budget(args))
    _emit(element=args.element, order=str(result))
    return _order_exit(result)


def _cmd_orbit(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    if args.letter not in t.alphabet.letters:
        raise CommandError(f"unknown letter {args.letter!r}")
    g = _element(doc, args.element)
    result = orbit_size_ray(t, g, Ray((), (args.letter,)), budget=_budget(args))
    _emit(element=args.element, letter=args.letter, orbit=str(result))
    return _order_exit(result)


def _cmd_mm_run(args: argparse.Namespace) -> int:
    doc = _load_machine(args.file)
    config = Config(doc.machine.start, args.m, args.n)
    result = run(doc.machine, args.fuel, config)
    _emit(
        halted=result.halted,
        steps=result.steps,
        state=result.config.state,
        m=result.config.m,
        n=result.config.n,
    )
    return 0 if result.halted else 2


def _cmd_mm_normalize(args: argparse.Namespace) -> int:
    doc = _load_machine(args.file)
    if args.target not in TARGETS:
        raise CommandError(f"unknown target {args.target!r}")
    out = normalize(doc.machine, args.target)
    sys.stdout.write(serialize_machine(MachineDocument(out)))
    return 0


def _cmd_mm_compile(args: argparse.Namespace) -> int:
    doc = _load_machine(args.file)
    comp = _COMPILERS[args.target](doc.machine)
    out_doc = TransducerDocument(
        comp.transducer, dict(comp.witnesses), {"base": comp.base_ray}
    )
    Path(args.output).write_text(serialize_transducer(out_doc), encoding="utf-8")
    _emit(
        target=args.target,
        kind=comp.transducer.kind,
        letters=len(comp.transducer.alphabet),
        states=len(comp.transducer.states),
        witnesses=" ".join(sorted(comp.witnesses)),
        output=args.output,
    )
    return 0


def _cmd_contractify(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    composed = contractify(t)
    suffix = composed.alphabet.letters[0].split("|")[1:]
    zeros = "|".join("0" * len(part) for part in suffix)
    rays: Dict[str, Ray] = {}
    for name, ray in doc.rays.items():
        rays[name] = Ray(
            tuple(f"{a}|{zeros}" for a in ray.preperiod),
            tuple(f"{a}|{zeros}" for a in ray.period),
        )
    out_doc = TransducerDocument(composed, dict(doc.witnesses), rays)
    Path(args.output).write_text(serialize_transducer(out_doc), encoding="utf-8")
    _emit(
        letters=len(composed.alphabet),
        states=len(composed.states),
        output=args.output,
    )
    return 0


def _cmd_nucleus(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    t = doc.transducer
    report = nucleus(t, budget=_budget(args))
    _emit(size=len(report.nucleus), depth=report.closure_depth, complete=report.complete)
    for element in report.nucleus:
        _emit(element=t.states.format_word(element))
    return 0 if report.complete else 2


def _cmd_nuclear_check(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    _emit(nuclear=is_nuclear(doc.transducer))
    return 0


def _cmd_nuclearize(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    result = nuclearize(doc.transducer, budget=_budget(args))
    expanded = getattr(result, "_expanded_from", None)
    block = expanded[1] if expanded else 1
    rays = dict(doc.rays) if block == 1 else {}
    out_doc = TransducerDocument(result, dict(doc.witnesses), rays)
    Path(args.output).write_text(serialize_transducer(out_doc), encoding="utf-8")
    _emit(
        block=block,
        letters=len(result.alphabet),
        states=len(result.states),
        output=args.output,
    )
    return 0


def _cmd_tiles(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    ts = tileset_from_transducer(doc.transducer)
    Path(args.output).write_text(ts.to_text(), encoding="utf-8")
    _emit(tiles=len(ts), colours=len(ts.colours), output=args.output)
    if args.check is not None:
        sides_part, colon, prop = args.check.partition(":")
        if colon != ":" or len(sides_part) != 2:
            raise CommandError(
                f"--check wants two side letters, a colon and a property, got {args.check!r}"
            )
        result = check_tileset_property(ts, (sides_part[0], sides_part[1]), prop)
        _emit(check=f"{sides_part[0]} {sides_part[1]} {prop}", ok=result.ok)
        if result.counterexample is not None:
            _emit(counterexample=" ".join(result.counterexample))
    return 0


def _cmd_probe(args: argparse.Namespace) -> int:
    doc = _load_transducer(args.file)
    result = periodicity_probe(doc.transducer, args.state, budget=_budget(args))
    _emit(state=args.state, order=str(result))
    return _order_exit(result)


def _cmd_witness(args: argparse.Namespace) -> int:
    doc = _load_machine(args.file)
    comp = compile_wp(doc.machine)
    word = make_uniform_witness(comp, args.n)
    _emit(
        n=args.n,
        length=len(word.refs),
        witness=comp.transducer.states.format_word(word),
    )
    return 0


# -- parser ------------------------------------------------------------------


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--budget",
        type=int,
        default=None,
        help="search budget (default: $SELFSIM_BUDGET or 1000)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfsim",
        description="Transducer groups: actions, word and order problems, "
        "counter-machine compilers, contraction, Wang tiles.",
    )
    try:
        sub = parser.add_subparsers(dest="command", required=True)
    except TypeError:  # pragma: no cover - very old argparse
        sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", help="parse and validate a document")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("act", help="apply an element to a finite word")
    p.add_argument("file")
    p.add_argument("--word", required=True, help="input letters, whitespace-separated")
    p.add_argument("--element", required=True)
    p.set_defaults(handler=_cmd_act)

    p = sub.add_parser("ray", help="apply an element to an eventually periodic ray")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    p.add_argument("--ray", required=True, help="'PRE , PER' or a stored ray name")
    _add_budget(p)
    p.set_defaults(handler=_cmd_ray)

    p = sub.add_parser("wp", help="word problem: does the element act trivially?")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    p.add_argument(
        "--depth",
        type=int,
        default=None,
        help="bounded search depth (default: exact for finite-state, "
        f"{DEFAULT_DEPTH} otherwise)",
    )
    p.set_defaults(handler=_cmd_wp)

    p = sub.add_parser("order", help="order of an element")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    _add_budget(p)
    p.set_defaults(handler=_cmd_order)

    p = sub.add_parser("orbit", help="orbit size of a constant ray")
    p.add_argument("file")
    p.add_argument("--element", required=True)
    p.add_argument("--letter", required=True)
    _add_budget(p)
    p.set_defaults(handler=_cmd_orbit)

    mm = sub.add_parser("mm", help="counter-machine commands")
    try:
        mm_sub = mm.add_subparsers(dest="mm_command", required=True)
    except TypeError:  # pragma: no cover
        mm_sub = mm.add_subparsers(dest="mm_command")

    p = mm_sub.add_parser("run", help="run a machine")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(handler=_cmd_mm_run)

    p = mm_sub.add_parser(
        "normalize", help="rewrite using only the instruction types of a target"
    )
    p.add_argument("file")
    p.add_argument("--target", required=True, choices=sorted(TARGETS))
    p.set_defaults(handler=_cmd_mm_normalize)

    p = mm_sub.add_parser("compile", help="compile a machine into a transducer")
    p.add_argument("file")
    p.add_argument("--target", required=True, choices=sorted(_COMPILERS))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_mm_compile)

    p = sub.add_parser(
        "contractify", help="compose with the auxiliary contraction transducers"
    )
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_contractify)

    p = sub.add_parser("nucleus", help="recurrent sections of short products")
    p.add_argument("file")
    _add_budget(p)
    p.set_defaults(handler=_cmd_nucleus)

    p = sub.add_parser("nuclear-check", help="is the transducer nuclear?")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_nuclear_check)

    p = sub.add_parser("nuclearize", help="extend states and re-letter until nuclear")
    p.add_argument("file")
    _add_budget(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=_cmd_nuclearize)

    p = sub.add_parser("tiles", help="export the Wang tileset")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument(
        "--check",
        default=None,
        help="check a property, e.g. SW:complete or SE:deterministic",
    )
    p.set_defaults(handler=_cmd_tiles)

    p = sub.add_parser(
        "probe", help="periodicity probe: order of a state via forced tilings"
    )
    p.add_argument("file")
    p.add_argument("--state", required=True)
    _add_budget(p)
    p.set_defaults(handler=_cmd_probe)

    p = sub.add_parser("witness", help="uniform word-problem witness for a machine")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_witness)

    return parser


def run_command(argv: Sequence[str]) -> int:
    """Run one subcommand; returns the exit code (0 ok, 2 unknown, 1 error)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except argparse.ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
