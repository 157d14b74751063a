"""Text formats for transducers and counter machines."""

import pytest

from selfsim import ASYNCHRONOUS, FINITE_STATE, GroupWord, Ray
from selfsim.compilers import compile_wp
from selfsim.documents import (
    DocumentError,
    MachineDocument,
    TransducerDocument,
    parse_machine,
    parse_transducer,
    serialize_machine,
    serialize_transducer,
)
from selfsim.zoo import binary_odometer, grigorchuk

from helpers import corpus, machine


# -- transducer documents ----------------------------------------------------


def test_round_trip_grigorchuk_with_witnesses_and_rays():
    t = grigorchuk()
    doc = TransducerDocument(
        t,
        witnesses={"flip": t.states.parse_word("a"), "torsion": t.states.parse_word("a b")},
        rays={"base": Ray((), ("0",)), "mixed": Ray(("1",), ("0", "1"))},
    )
    text = serialize_transducer(doc)
    again = parse_transducer(text)
    assert again == doc
    assert serialize_transducer(again) == text


def test_round_trip_asynchronous_compilation():
    comp = compile_wp(machine("s1:I(s2); s2:IX(halt,halt)"))
    doc = TransducerDocument(comp.transducer, witnesses=dict(comp.witnesses))
    again = parse_transducer(serialize_transducer(doc))
    assert again == doc
    assert again.transducer.kind == ASYNCHRONOUS


def test_parse_minimal_document_and_kind_inference():
    doc = parse_transducer(
        "alphabet: 0 1\n"
        "states: odo e\n"
        "identity: e\n"
        "odo , 0 -> - , 1\n"
        "odo , 1 -> odo , 0\n"
    )
    assert doc.transducer.kind == FINITE_STATE
    assert doc.witnesses == {} and doc.rays == {}
    doc2 = parse_transducer(
        "alphabet: 0 1\nstates: q\nq , 0 -> q q , 1\nq , 1 -> - , 0\n"
    )
    assert doc2.transducer.kind == ASYNCHRONOUS


def test_parse_respects_comments_blank_lines_and_default_rule():
    doc = parse_transducer(
        "# a hand-written fixture\n"
        "kind: finite_state\n"
        "alphabet: 0 1\n"
        "\n"
        "states: p q   # two working states\n"
        "default: identity\n"
        "p , 0 -> q , 1\n"
        "p , 1 -> q , 0\n"
    )
    t = doc.transducer
    assert t.transition("0", "q") == (t.states.parse_word("q"), "0")
    assert t.transition("1", "q") == (t.states.parse_word("q"), "1")
    assert t.transition("0", "p") == (t.states.parse_word("q"), "1")


def test_witness_words_support_inverse_and_power_sugar():
    doc = parse_transducer(
        "alphabet: 0 1\nstates: odo e\nidentity: e\n"
        "odo , 0 -> - , 1\nodo , 1 -> odo , 0\n"
        "witness back = odo'\n"
        "witness four = odo^4\n"
        "witness none = -\n"
        "ray base = - , 0\n"
        "ray shifted = 1 1 , 0 1\n"
    )
    ss = doc.transducer.states
    assert doc.witnesses["back"] == ss.parse_word("odo").inverse()
    assert doc.witnesses["four"] == ss.parse_word("odo") ** 4
    assert doc.witnesses["none"] == GroupWord(())
    assert doc.rays["base"] == Ray((), ("0",))
    assert doc.rays["shifted"] == Ray(("1", "1"), ("0", "1"))


ODO_HEAD = "alphabet: 0 1\nstates: odo e\nidentity: e\nodo , 0 -> - , 1\nodo , 1 -> odo , 0\n"

BAD_TRANSDUCERS = [
    ("kind: sideways\n" + ODO_HEAD, 1, "unknown kind"),
    ("alphabet:\n", 1, "alphabet must not be empty"),
    ("alphabet: 0 1\nstates:\n", 2, "states must not be empty"),
    ("alphabet: 0 1\nstates: q\ndefault: mirror\n", 3, "unknown default"),
    (ODO_HEAD + "what is this\n", 6, "unrecognised"),
    (ODO_HEAD + "witness broken\n", 6, "NAME = TOKENS"),
    (ODO_HEAD + "witness w = odo\nwitness w = odo\n", 7, "duplicate witness"),
    (ODO_HEAD + "witness w = ghost\n", 6, "ghost"),
    (ODO_HEAD + "ray r = 0 0\n", 6, "PRE , PER"),
    (ODO_HEAD + "ray r = - , 2\n", 6, "unknown letter"),
    (ODO_HEAD + "ray r = - ,\n", 6, "period must not be empty"),
    ("alphabet: 0 1\nstates: q\nq , 0 ->\n", 3, "transition line"),
    ("alphabet: 0 1\nstates: q\nzz , 0 -> zz , 1\n", 3, "unknown state"),
    ("alphabet: 0 1\nstates: q\nq , 7 -> q , 1\n", 3, "unknown letter"),
    ("alphabet: 0 1\nstates: q\nq , 0 -> q , 7\n", 3, "unknown letter"),
    (ODO_HEAD + "odo , 0 -> - , 1\n", 6, "duplicate transition"),
    (ODO_HEAD + "e , 0 -> - , 0\n", 6, "identity state"),
    ("states: q\nq , 0 -> q , 0\n", None, "missing 'alphabet:'"),
    ("alphabet: 0 1\n", None, "missing 'states:'"),
    ("alphabet: 0 1\nstates: q\nidentity: zz\n", None, "unknown state"),
]


@pytest.mark.parametrize("text, lineno, fragment", BAD_TRANSDUCERS)
def test_transducer_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(DocumentError, match=fragment) as exc:
        parse_transducer(text)
    assert exc.value.lineno == lineno
    if lineno is not None:
        assert str(exc.value).startswith(f"line {lineno}: ")


def test_incomplete_table_is_reported_with_a_line():
    text = "kind: finite_state\nalphabet: 0 1\nstates: q\nq , 0 -> q , 1\n"
    with pytest.raises(DocumentError, match="not total") as exc:
        parse_transducer(text)
    assert exc.value.lineno == 4  # the one line mentioning q


def test_document_error_is_a_value_error():
    assert issubclass(DocumentError, ValueError)


# -- machine documents -------------------------------------------------------


@pytest.mark.parametrize("name, mm", corpus())
def test_machine_round_trips(name, mm):
    doc = MachineDocument(mm)
    text = serialize_machine(doc)
    again = parse_machine(text)
    assert again.machine == mm
    assert serialize_machine(again) == text


def test_parse_machine_with_comments():
    doc = parse_machine(
        "# two steps then halt\n"
        "states: s1 s2 halt\n"
        "start: s1\n"
        "final: halt\n"
        "s1: I s2\n"
        "s2: IX halt halt  # zero-test\n"
    )
    assert doc.machine.program["s2"].targets == ("halt", "halt")


BAD_MACHINES = [
    ("states: s halt\nstart: s\nfinal: halt\nno colon here\n", 4, "unrecognised"),
    ("states: s halt\nstart: s\nfinal: halt\nzz: I halt\n", 4, "unknown state"),
    ("states: s halt\nstart: s\nfinal: halt\ns: I halt\ns: I halt\n", 5, "duplicate"),
    ("states: s halt\nstart: s\nfinal: halt\ns: XII halt\n", 4, "unknown instruction"),
    ("states: s halt\nstart: s\nfinal: halt\ns: I ghost\n", 4, "unknown state"),
    ("states: s halt\nstart: s\nfinal: halt\ns: VII halt\n", 4, "takes 2"),
    ("states: s halt\nstart: s\nfinal: halt\ns:\n", 4, "needs a type"),
    ("start: s\nfinal: halt\n", None, "missing 'states:'"),
    ("states: s halt\nfinal: halt\ns: I halt\n", None, "missing 'start:'"),
    ("states: s halt\nstart: s\ns: I halt\n", None, "missing 'final:'"),
    ("states: s\nstart: s\nfinal: s\ns: I s\n", None, "final state"),
]


@pytest.mark.parametrize("text, lineno, fragment", BAD_MACHINES)
def test_machine_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(DocumentError, match=fragment) as exc:
        parse_machine(text)
    assert exc.value.lineno == lineno
