"""Mapping classes: involution, invariance, the twist inequality, rel. twisting."""

import random

import pytest

from conftest import random_mapping_word
from laminatron.curves import Curve, MappingClassWord, relative_twisting
from laminatron.surface import S05


def test_twist_fixes_core(sides):
    for i, blk in enumerate([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]):
        D = MappingClassWord.block_twist(S05, blk, 5)
        assert D.apply(sides[i]) == sides[i]


def test_rotation_orbit(sides):
    r = MappingClassWord.named(S05, "r")
    for i in range(5):
        assert r.apply(sides[i]) == sides[(i + 1) % 5]
    rho = MappingClassWord.named(S05, "rho")
    for i in range(5):
        assert rho.apply(sides[i]) == sides[(i + 2) % 5]


def test_rotation_order_five(sides):
    r = MappingClassWord.named(S05, "r")
    five = r * r * r * r * r
    for s in sides:
        assert five.apply(s) == s


def test_involution_random(sides):
    rng = random.Random(3)
    for _ in range(15):
        mc = random_mapping_word(rng)
        c = rng.choice(sides)
        assert mc.inverse().apply(mc.apply(c)) == c


def test_intersection_invariance(sides):
    rng = random.Random(4)
    for t in range(15):
        # mixed word lengths, up to the full 12-step budget
        mc = random_mapping_word(rng, max_len=12 if t % 3 == 0 else 6)
        a, b = rng.sample(sides, 2)
        assert mc.apply(a, budget=10**7).i(mc.apply(b, budget=10**7)) == a.i(b)


def test_twist_inequality_exact(sides):
    """|i(T_b^e d, d2) - |e| i(b,d) i(b,d2)| <= i(d,d2), exactly."""
    rng = random.Random(9)
    for _ in range(40):
        beta = random_mapping_word(rng, 4).apply(rng.choice(sides))
        d1 = random_mapping_word(rng, 4).apply(rng.choice(sides))
        d2 = random_mapping_word(rng, 4).apply(rng.choice(sides))
        e = rng.randint(-8, 8)
        tw = MappingClassWord.twist(beta, e) if e else MappingClassWord([], S05)
        lhs = abs(tw.apply(d1).i(d2) - abs(e) * beta.i(d1) * beta.i(d2))
        assert lhs <= d1.i(d2)


def test_relative_twisting_recovers_power(sides):
    alpha, beta = sides[0], sides[1]
    for e in (7, -5, 12):
        b2 = MappingClassWord.twist(alpha, e).apply(beta)
        rt = relative_twisting(alpha, b2, beta)
        assert abs(abs(rt.n_star) - abs(e)) <= rt.slack
        assert rt.min_value <= beta.i(beta) + rt.slack  # profile bottoms out


def test_relative_twisting_brute_force_window(sides):
    """Frozen oracle: the argmin over a full scan window matches the descent."""
    alpha, beta = sides[0], sides[1]
    b7 = MappingClassWord.twist(alpha, 7).apply(beta)
    profile = {}
    for n in range(-20, 21):
        tw = MappingClassWord.twist(alpha, n) if n else MappingClassWord([], S05)
        profile[n] = tw.apply(b7).i(beta)
    brute = min(profile, key=lambda n: (profile[n], abs(n)))
    rt = relative_twisting(alpha, b7, beta)
    assert rt.n_star == brute == -7
    assert profile[brute] == 0


def test_relative_twisting_requires_crossing(sides):
    with pytest.raises(ValueError):
        relative_twisting(sides[0], sides[2], sides[1])  # disjoint from alpha


def test_twist_about_generated_curve(sides):
    rng = random.Random(21)
    mc = random_mapping_word(rng, 3)
    alpha = mc.apply(sides[0])
    beta = rng.choice([s for s in sides if s.i(alpha) > 0])
    tw = MappingClassWord.twist(alpha, 3)
    img = tw.apply(beta)
    # the twisted curve is again simple and intersects alpha the same amount
    assert img.i(alpha) == beta.i(alpha)


def test_apply_identity(sides):
    ident = MappingClassWord([], S05)
    for s in sides:
        assert ident.apply(s) == s
