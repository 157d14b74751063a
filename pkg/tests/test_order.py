"""Orders of transducer words, orbit sizes along rays, class bookkeeping."""

import math
import random

import pytest

from selfsim import GroupWord, Ray, act_ray, order, orbit_size_ray, word_problem_fs
from selfsim.order import (
    CycleCertificate,
    cycle_decomposition,
    same_class,
)
from selfsim.zoo import binary_odometer, grigorchuk

from helpers import random_word


def check_cycle_certificate(cert: CycleCertificate) -> None:
    """Structural replay: the access chains into the cycle, the cycle
    closes up, and its labels multiply to at least 2."""
    assert isinstance(cert, CycleCertificate)
    chain = cert.access + cert.cycle
    for prev, nxt in zip(chain, chain[1:]):
        assert prev.target == nxt.source
    assert cert.cycle
    assert cert.cycle[-1].target == cert.cycle[0].source
    assert math.prod(e.label for e in cert.cycle) >= 2


@pytest.mark.parametrize(
    "text, n",
    [("a", 2), ("b", 2), ("c", 2), ("d", 2), ("a b", 16), ("a d", 4), ("b c", 2)],
)
def test_grigorchuk_orders(text, n):
    t = grigorchuk()
    res = order(t, t.states.parse_word(text))
    assert res.kind == "Finite" and res.n == n
    assert str(res) == f"Finite({n})"


def test_order_of_identity_word():
    t = grigorchuk()
    assert order(t, GroupWord(())).n == 1
    assert order(t, t.states.parse_word("a a")).n == 1


def test_finite_orders_replay_through_word_problem():
    t = grigorchuk()
    rng = random.Random(160814)
    for _ in range(25):
        g = random_word(rng, t, max_len=8)
        res = order(t, g)
        assert res.kind == "Finite"  # the group is torsion
        n = res.n
        assert n >= 1 and (n & (n - 1)) == 0  # and a 2-group
        assert word_problem_fs(t, g**n).trivial
        if n > 1:
            assert not word_problem_fs(t, g ** (n // 2)).trivial


def test_odometer_is_infinite_with_certificate():
    t = binary_odometer()
    res = order(t, t.states.parse_word("odo"))
    assert res.kind == "InfiniteCertified"
    assert str(res) == "InfiniteCertified"
    check_cycle_certificate(res.cycle)


def test_order_unknown_on_starved_budget():
    t = grigorchuk()
    res = order(t, t.states.parse_word("a b"), budget=1)
    assert res.kind == "Unknown"
    assert res.spent is not None


def test_order_rejects_asynchronous_input():
    from selfsim import ASYNCHRONOUS, Alphabet, StateSet, Transducer

    t = Transducer(
        Alphabet(("0",)),
        StateSet(("q",)),
        {("0", "q"): (None, "0")},
        kind=ASYNCHRONOUS,
    )
    with pytest.raises(ValueError):
        order(t, t.states.parse_word("q"))


# -- cycle decompositions ----------------------------------------------------


def test_cycle_decomposition_examples():
    t = grigorchuk()
    a = cycle_decomposition(t, t.states.parse_word("a"))
    assert a.cycles == (("0", "1"),)
    assert a.sections == (GroupWord(()),)
    b = cycle_decomposition(t, t.states.parse_word("b"))
    assert b.cycles == (("0",), ("1",))
    assert b.sections == (t.states.parse_word("a"), t.states.parse_word("c"))


def test_cycle_decomposition_odometer():
    t = binary_odometer()
    d = cycle_decomposition(t, t.states.parse_word("odo"))
    assert d.cycles == (("0", "1"),)
    assert d.sections == (t.states.parse_word("odo"),)


def test_cycle_sections_are_sections_of_the_power():
    # for a cycle (a, ...) of length k the section is (g^k) at a
    from selfsim import state_at

    rng = random.Random(31)
    for t in (grigorchuk(), binary_odometer()):
        for _ in range(50):
            g = random_word(rng, t)
            dec = cycle_decomposition(t, g)
            for cyc, sec in zip(dec.cycles, dec.sections):
                k = len(cyc)
                expected = state_at(t, g**k, (cyc[0],))
                assert word_problem_fs(t, sec * expected.inverse()).trivial


# -- orbit sizes along rays --------------------------------------------------


def test_orbit_of_zero_ray_under_odometer_is_infinite():
    t = binary_odometer()
    res = orbit_size_ray(t, t.states.parse_word("odo"), Ray((), ("0",)))
    assert res.kind == "InfiniteCertified"
    check_cycle_certificate(res.cycle)


@pytest.mark.parametrize(
    "text, n",
    [("a", 2), ("d", 1), ("b", 2), ("a b", 16), ("a d", 4)],
)
def test_grigorchuk_orbits_of_zero_ray(text, n):
    t = grigorchuk()
    g = t.states.parse_word(text)
    zeros = Ray((), ("0",))
    res = orbit_size_ray(t, g, zeros)
    assert res.kind == "Finite" and res.n == n
    assert act_ray(t, g**n, zeros) == zeros
    for d in range(1, n):
        if n % d == 0:
            assert act_ray(t, g**d, zeros) != zeros


def test_orbit_size_unknown_when_budget_starved():
    t = binary_odometer()
    res = orbit_size_ray(t, t.states.parse_word("odo"), Ray((), ("0",)), budget=1)
    assert res.kind == "Unknown"


# -- class bookkeeping -------------------------------------------------------


def test_same_class_rotations_inverses_and_padding():
    rng = random.Random(77)
    for t in (grigorchuk(), binary_odometer()):
        for _ in range(60):
            g = random_word(rng, t)
            refs = g.refs
            if refs:
                cut = rng.randrange(len(refs))
                rotated = GroupWord(refs[cut:] + refs[:cut])
                if len(rotated.refs) == len(refs):  # no boundary cancellation
                    assert same_class(t, g, rotated)
            assert same_class(t, g, g.inverse())
            assert same_class(t, g, g)


def test_same_class_distinguishes_letters():
    t = grigorchuk()
    a = t.states.parse_word("a")
    b = t.states.parse_word("b")
    assert not same_class(t, a, b)
    assert not same_class(t, a, GroupWord(()))
    assert same_class(t, t.states.parse_word("b c"), t.states.parse_word("d"))
