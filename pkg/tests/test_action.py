"""Acting on words and rays, and the triviality/fixed-ray deciders."""

import random

import pytest

from selfsim import (
    GroupWord,
    Ray,
    Verdict3,
    act_ray,
    act_word,
    is_fixed_ray,
    state_at,
    word_problem_bounded,
    word_problem_fs,
)
from selfsim.zoo import binary_odometer, grigorchuk

from helpers import oracle_act, random_letters, random_word


# -- ray canonical form ------------------------------------------------------


def test_ray_period_is_made_primitive():
    assert Ray((), ("1", "1")).period == ("1",)
    assert Ray((), ("0", "1", "0", "1")) == Ray((), ("0", "1"))


def test_ray_preperiod_is_absorbed_into_rotation():
    assert Ray(("0",), ("1", "0")) == Ray((), ("0", "1"))


def test_ray_rejects_empty_period():
    with pytest.raises(ValueError):
        Ray((), ())


def test_ray_letter_at_and_prefix():
    r = Ray(("1",), ("0", "1"))
    assert r.prefix(6) == ("1", "0", "1", "0", "1", "0")
    assert r.letter_at(0) == "1"
    assert r.letter_at(4) == "1"


# -- finite actions ----------------------------------------------------------


@pytest.mark.parametrize("make", [grigorchuk, binary_odometer])
def test_act_word_matches_independent_oracle(make):
    t = make()
    rng = random.Random(20260814)
    for _ in range(300):
        g = random_word(rng, t)
        u = random_letters(rng, t, rng.randrange(0, 8))
        assert act_word(t, g, u) == oracle_act(t, g, u)


def test_act_word_on_empty_input():
    t = grigorchuk()
    assert act_word(t, t.states.parse_word("a b"), ()) == ()


def test_state_at_known_sections():
    t = grigorchuk()
    b = t.states.parse_word("b")
    assert state_at(t, b, ("0",)) == t.states.parse_word("a")
    assert state_at(t, b, ("1",)) == t.states.parse_word("c")
    assert state_at(t, b, ("1", "1")) == t.states.parse_word("d")


def test_odometer_adds_one_in_binary():
    t = binary_odometer()
    tau = t.states.parse_word("odo")
    # lsb-first: 3 + 1 = 4
    assert act_word(t, tau, ("1", "1", "0")) == ("0", "0", "1")
    # carry off the end wraps within the explored prefix
    assert act_word(t, tau, ("1", "1", "1")) == ("0", "0", "0")


# -- rays --------------------------------------------------------------------


def test_act_ray_odometer_examples():
    t = binary_odometer()
    tau = t.states.parse_word("odo")
    zeros = Ray((), ("0",))
    ones = Ray((), ("1",))
    assert act_ray(t, tau, zeros) == Ray(("1",), ("0",))
    assert act_ray(t, tau, ones) == zeros
    assert act_ray(t, tau**2, zeros) == Ray(("0", "1"), ("0",))


@pytest.mark.parametrize("make", [grigorchuk, binary_odometer])
def test_act_ray_agrees_with_act_word_on_prefixes(make):
    t = make()
    rng = random.Random(4242)
    for _ in range(150):
        g = random_word(rng, t)
        pre = random_letters(rng, t, rng.randrange(0, 3))
        per = random_letters(rng, t, rng.randrange(1, 4))
        ray = Ray(pre, per)
        image = act_ray(t, g, ray)
        n = len(image.preperiod) + len(image.period) + 7
        assert image.prefix(n) == act_word(t, g, ray.prefix(n))


# -- word problem ------------------------------------------------------------

GRIG_TRIVIAL = ["a a", "b b", "c c", "d d", "b c d", "d c b", "a d a d a d a d"]
GRIG_MOVING = ["a", "b", "c", "d", "a b", "b a c"]


@pytest.mark.parametrize("text", GRIG_TRIVIAL)
def test_wp_confirms_relations(text):
    t = grigorchuk()
    assert word_problem_fs(t, t.states.parse_word(text)).trivial


@pytest.mark.parametrize("text", GRIG_MOVING)
def test_wp_rejects_nontrivial_words(text):
    t = grigorchuk()
    trivial, witness = word_problem_fs(t, t.states.parse_word(text))
    assert not trivial
    assert act_word(t, t.states.parse_word(text), witness) != witness


def test_wp_witness_is_minimal_moved_prefix():
    t = grigorchuk()
    g = t.states.parse_word("d")  # fixes the whole first level
    _, witness = word_problem_fs(t, g)
    assert witness == ("1", "0", "0")
    for k in range(len(witness)):
        u = witness[:k]
        assert act_word(t, g, u) == u


def test_bounded_wp_agrees_with_decider():
    rng = random.Random(555)
    for t in (grigorchuk(), binary_odometer()):
        for _ in range(150):
            g = random_word(rng, t)
            exact = word_problem_fs(t, g)
            verdict = word_problem_bounded(t, g, 40)
            assert not verdict.is_unknown
            assert verdict.is_yes == exact.trivial
            if verdict.is_no:
                assert verdict.witness == exact.witness


def test_bounded_wp_runs_out_of_depth():
    t = grigorchuk()
    v = word_problem_bounded(t, t.states.parse_word("a a"), 0)
    assert v.is_unknown and v.spent == 0
    assert word_problem_bounded(t, t.states.parse_word("a"), 0).is_no


def test_bounded_wp_rejects_negative_depth():
    t = grigorchuk()
    with pytest.raises(ValueError):
        word_problem_bounded(t, t.states.parse_word("a"), -1)


# -- fixed rays --------------------------------------------------------------


def test_fixed_ray_no_cases_with_witnesses():
    t = grigorchuk()
    zeros = Ray((), ("0",))
    for text, moved in [("a", ("0",)), ("b", ("0", "0")), ("a b a", ("0", "0", "0"))]:
        v = is_fixed_ray(t, t.states.parse_word(text), zeros, 64)
        assert v.is_no
        assert v.witness == moved
        assert act_word(t, t.states.parse_word(text), moved) != moved


def test_fixed_ray_yes_certificate_recurs():
    t = grigorchuk()
    d = t.states.parse_word("d")
    zeros = Ray((), ("0",))
    v = is_fixed_ray(t, d, zeros, 64)
    assert v.is_yes
    i, j, section = v.certificate
    assert 0 <= i < j
    assert state_at(t, d, zeros.prefix(i)) == section
    assert state_at(t, d, zeros.prefix(j)) == section
    assert act_word(t, d, zeros.prefix(j)) == zeros.prefix(j)


def test_fixed_ray_identity_fixes_everything():
    t = binary_odometer()
    v = is_fixed_ray(t, GroupWord(()), Ray((), ("0", "1")), 8)
    assert v.is_yes


def test_fixed_ray_unknown_when_budget_too_small():
    t = grigorchuk()
    v = is_fixed_ray(t, t.states.parse_word("d"), Ray((), ("0",)), 0)
    assert v.is_unknown and v.spent == 0


def test_verdict_constructors():
    assert Verdict3.yes().answer == "yes"
    assert Verdict3.no(witness=("0",)).witness == ("0",)
    assert Verdict3.unknown(spent=3).spent == 3
