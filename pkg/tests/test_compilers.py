"""Counter machines compiled into transducer groups.

The heart of this file is the exchange-relation suite: one machine
transition must equal one letter exchange ``prefix · g = g' · prefix``
as an exact identity of reduced words, for every instruction type and
small counter values.
"""

import pytest

from selfsim import (
    ASYNCHRONOUS,
    FINITE_STATE,
    GroupWord,
    Ray,
    act_ray,
    act_word,
    order,
    orbit_size_ray,
    state_at,
    word_problem_bounded,
    word_problem_fs,
)
from selfsim.compilers import (
    compile_orbit,
    compile_order,
    compile_wp,
    make_uniform_witness,
)
from selfsim.transducer import validate
from selfsim.words import commutator

from helpers import machine

SMALL = range(0, 3)


# -- gating ------------------------------------------------------------------


def test_compilers_reject_foreign_instruction_types():
    with pytest.raises(ValueError, match="normalize"):
        compile_wp(machine("s1:III(halt)"))
    with pytest.raises(ValueError, match="normalize"):
        compile_order(machine("s1:I(halt)"))
    with pytest.raises(ValueError, match="normalize"):
        compile_orbit(machine("s1:I(halt)"))


def test_compilers_reject_reserved_state_names():
    with pytest.raises(ValueError, match="reserved"):
        compile_wp(machine("x:I(halt)"))
    with pytest.raises(ValueError, match="reserved"):
        compile_order(machine("y:III(halt)"))
    with pytest.raises(ValueError, match="reserved"):
        compile_orbit(machine("e:III(halt)"))


# -- word-problem compiler ---------------------------------------------------

WP_MM = machine("s1:I(s2); s2:VI(s3); s3:IX(halt,s1)")


@pytest.fixture(scope="module")
def wp():
    return compile_wp(WP_MM)


def conj(comp, state, m, n):
    """The configuration word (s x^(2^m) y^(2^n)) t (…)^-1."""
    ss = comp.transducer.states
    w = ss.word((state,)) * ss.word(("x",)) ** (2**m) * ss.word(("y",)) ** (2**n)
    return w * ss.word(("t",)) * w.inverse()


def exchanges_to(comp, g, prefix):
    """Feed ``prefix`` through ``g``; require it to pass unchanged and
    return the exact residual word."""
    t = comp.transducer
    assert act_word(t, g, prefix) == prefix
    return state_at(t, g, prefix)


def test_wp_compilation_shape(wp):
    assert wp.transducer.kind == ASYNCHRONOUS
    assert validate(wp.transducer).ok
    assert wp.target == "wp"
    assert wp.machine is WP_MM
    assert wp.base_ray == Ray((), ("0",))
    ss = wp.transducer.states
    assert wp.witnesses["start"] == ss.word(("s1", "x", "y"))
    assert wp.witnesses["g"] == (
        wp.witnesses["start"] * ss.word(("t",)) * wp.witnesses["start"].inverse()
    )
    assert wp.witnesses["commutator"] == commutator(
        wp.witnesses["g"], wp.witnesses["u"]
    )


@pytest.mark.parametrize("m", SMALL)
@pytest.mark.parametrize("n", SMALL)
def test_exchange_type_I(wp, m, n):
    # one 0 advances (s1, m, n) to (s2, m+1, n)
    got = exchanges_to(wp, conj(wp, "s1", m, n), ("0",))
    assert got == conj(wp, "s2", m + 1, n)


@pytest.mark.parametrize("m", SMALL)
@pytest.mark.parametrize("n", SMALL)
def test_exchange_type_VI(wp, m, n):
    # 0^(m+2) swaps the counters: (s2, m, n) to (s3, n, m)
    got = exchanges_to(wp, conj(wp, "s2", m, n), ("0",) * (m + 2))
    assert got == conj(wp, "s3", n, m)


@pytest.mark.parametrize("n", SMALL)
def test_exchange_type_IX_zero_branch(wp, n):
    got = exchanges_to(wp, conj(wp, "s3", 0, n), ("0",))
    assert got == conj(wp, "halt", 0, n)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("n", SMALL)
def test_exchange_type_IX_decrement_branch(wp, m, n):
    got = exchanges_to(wp, conj(wp, "s3", m, n), ("0",))
    assert got == conj(wp, "s1", m - 1, n)


@pytest.mark.parametrize("m", SMALL)
@pytest.mark.parametrize("n", SMALL)
def test_halting_configuration_marks_the_ray(wp, m, n):
    t = wp.transducer
    g = conj(wp, "halt", m, n)
    assert act_word(t, g, ("0",)) == ("h2",)
    assert state_at(t, g, ("0",)) == GroupWord(())


def test_halting_machine_has_nontrivial_commutator():
    comp = compile_wp(machine("s1:I(s2); s2:IX(halt,halt)"))
    v = word_problem_bounded(comp.transducer, comp.witnesses["commutator"], 16)
    assert v.is_no
    w = v.witness
    assert act_word(comp.transducer, comp.witnesses["commutator"], w) != w


def test_looping_machine_fixes_the_ray_but_moves_marked_words():
    # A machine that never halts keeps the 0-ray fixed; the commutator
    # is still a nontrivial tree map, but only off the ray, on words
    # that already contain a halting mark.
    from selfsim import is_fixed_ray

    comp = compile_wp(machine("s1:IX(s1,s1); halt"))
    g = comp.witnesses["commutator"]
    assert is_fixed_ray(comp.transducer, g, comp.base_ray, 64).is_yes
    v = word_problem_bounded(comp.transducer, g, 10)
    assert v.is_no
    assert any(letter not in ("0", "1") for letter in v.witness)


# -- uniform witnesses -------------------------------------------------------


def test_uniform_witness_matches_explicit_expansion(wp):
    ss = wp.transducer.states
    x, y, s, t, u = (ss.word((k,)) for k in ("x", "y", "s1", "t", "u"))
    for n in range(0, 4):
        w = s * x * y ** (2**n)
        expected = commutator(w * t * w.inverse(), u)
        got = make_uniform_witness(wp, n)
        assert got == expected
        assert len(got.refs) == 4 * (2 + 2**n) + 4


def test_uniform_witness_at_zero_is_the_distinguished_commutator(wp):
    assert make_uniform_witness(wp, 0) == wp.witnesses["commutator"]


def test_uniform_witness_rejects_bad_inputs(wp):
    with pytest.raises(ValueError):
        make_uniform_witness(wp, -1)
    with pytest.raises(ValueError):
        make_uniform_witness(compile_order(machine("s1:III(halt)")), 1)


# -- order compiler ----------------------------------------------------------

ORDER_MM = machine("s1:III(s2); s2:VII(halt,halt)")


@pytest.fixture(scope="module")
def ordc():
    return compile_order(ORDER_MM)


def test_order_compilation_shape(ordc):
    t = ordc.transducer
    assert t.kind == FINITE_STATE
    assert validate(t).ok
    assert ordc.target == "order"
    # letter blocks for the two instruction types present, with mirrors
    assert set(t.alphabet.letters) == {
        "III.1", "III.2", "III.1*", "III.2*",
        "VII.1", "VII.2", "VII.3", "VII.4",
        "VII.1*", "VII.2*", "VII.3*", "VII.4*",
    }
    for name in ("s1", "s2", "halt", "x", "y"):
        assert name in t.states.names
        assert f"{name}~" in t.states.names
    assert "e" in t.states.identity


def test_order_compiler_row_samples(ordc):
    t = ordc.transducer
    P = t.states.parse_word
    E = GroupWord(())
    # x fixes the III block, writing itself (mirrored on barred letters)
    assert t.transition("III.1", "x") == (P("x"), "III.1")
    assert t.transition("III.1*", "x") == (P("x~"), "III.1*")
    # a type-III state halves its own block while emitting the target
    assert t.transition("III.1", "s1") == (P("s2"), "III.2")
    assert t.transition("III.2", "s1") == (E, "III.1")
    assert t.transition("III.2*", "s1") == (P("s2~"), "III.1*")
    # x on a VII block alternates by exponent parity
    assert t.transition("VII.1", "x") == (P("x"), "VII.4")
    assert t.transition("VII.2", "x") == (E, "VII.3")
    # a foreign state flips bars on blocks it does not own
    assert t.transition("VII.1", "s1") == (E, "VII.1*")
    assert t.transition("VII.1*", "s1") == (E, "VII.1")


def test_order_inverse_states_invert(ordc):
    t = ordc.transducer
    for name in ("s1", "s2", "x", "y"):
        w = t.states.word((name, f"{name}~"))
        assert word_problem_fs(t, w).trivial


@pytest.mark.parametrize(
    "spec, n",
    [
        ("s1:III(s2); s2:VII(halt,halt)", 8),
        ("s1:III(s2); s2:III(s3); s3:VII(halt,halt)", 16),
        ("s1:III(s2); s2:IV(s3); s3:VII(halt,halt)", 8),
    ],
)
def test_halting_machines_have_finite_order(spec, n):
    comp = compile_order(machine(spec))
    start = comp.witnesses["start"]
    res = order(comp.transducer, start)
    assert res.kind == "Finite" and res.n == n
    assert word_problem_fs(comp.transducer, start**n).trivial
    assert not word_problem_fs(comp.transducer, start ** (n // 2)).trivial


def test_looping_machine_has_infinite_order():
    comp = compile_order(machine("s1:III(s1); halt"))
    res = order(comp.transducer, comp.witnesses["start"])
    assert res.kind == "InfiniteCertified"


@pytest.mark.parametrize("spec", ["s1:III(s2); s2:VII(halt,halt)", "s1:III(s1); halt"])
def test_order_compiler_makes_x_y_commute(spec):
    comp = compile_order(machine(spec))
    assert word_problem_fs(comp.transducer, comp.witnesses["commutator"]).trivial


# -- orbit compiler ----------------------------------------------------------


def test_orbit_compilation_shape():
    comp = compile_orbit(machine("s1:III(s2); s2:IX(halt,s2)"))
    t = comp.transducer
    assert t.kind == FINITE_STATE
    assert validate(t).ok
    assert comp.target == "orbit"
    assert comp.base_ray == Ray((), ("0",))
    assert list(comp.witnesses) == ["start"]
    assert t.alphabet.letters[0] == "0"
    assert set(t.states.names) == {"s1", "s2", "halt", "x", "y", "e"}


def test_orbit_compiler_row_samples():
    comp = compile_orbit(machine("s1:III(s2); s2:IX(halt,s2)"))
    t = comp.transducer
    P = t.states.parse_word
    E = GroupWord(())
    # a type-III state rotates 0 -> III.1 -> III.2 -> 0, emitting its
    # target on the first step
    assert t.transition("0", "s1") == (P("s2"), "III.1")
    assert t.transition("III.1", "s1") == (E, "III.2")
    assert t.transition("III.2", "s1") == (E, "0")
    # x and y echo themselves on the III block and fix the spine
    assert t.transition("III.1", "x") == (P("x"), "III.1")
    assert t.transition("0", "x") == (E, "0")
    # foreign blocks pass through with the state preserved
    assert t.transition("IX.1", "s1") == (P("s1"), "IX.1")


@pytest.mark.parametrize(
    "spec, h",
    [
        ("s1:III(halt)", 1),
        ("s1:III(s2); s2:III(halt)", 2),
        ("s1:III(s2); s2:III(s3); s3:III(halt)", 3),
        ("s1:IX(halt,s1); halt", 1),
        ("s1:III(s2); s2:IX(halt,s2)", 3),
    ],
)
def test_orbit_size_is_three_to_the_halting_time(spec, h):
    comp = compile_orbit(machine(spec))
    start = comp.witnesses["start"]
    res = orbit_size_ray(comp.transducer, start, comp.base_ray)
    assert res.kind == "Finite" and res.n == 3**h
    assert act_ray(comp.transducer, start ** (3**h), comp.base_ray) == comp.base_ray
    assert (
        act_ray(comp.transducer, start ** (3 ** (h - 1)), comp.base_ray)
        != comp.base_ray
    )


def test_orbit_of_looping_machine_is_infinite():
    comp = compile_orbit(machine("s1:III(s1); halt"))
    res = orbit_size_ray(comp.transducer, comp.witnesses["start"], comp.base_ray)
    assert res.kind == "InfiniteCertified"
