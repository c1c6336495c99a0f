"""Shared randomized generators for exact test data.

Everything is seeded; no test depends on wall-clock randomness.
"""

import random

import pytest

from pwproj import Mat2, PwpMap, cut_and_paste, qq


def random_dyadic(rng, max_num=1024, max_exp=10):
    """A rational with numerator bounded by max_num and a power-of-two
    denominator."""
    num = rng.randint(-max_num, max_num)
    return qq(num, 2 ** rng.randint(0, max_exp))


def _entry_ok(e, bound):
    q = e.as_rational()
    num, den = abs(int(q.numerator)), int(q.denominator)
    return num <= bound and den <= bound and den & (den - 1) == 0


def random_sl2_dyadic(rng, bound=1024):
    """A non-identity element of SL2(Z[1/2]) with entry numerators and
    denominators at most 2^10 in absolute value, denominators powers of two.

    Built as short products of elementary matrices, rejecting products whose
    entries exceed the bound.
    """
    while True:
        m = Mat2.identity()
        for _ in range(rng.randint(2, 4)):
            kind = rng.randrange(3)
            if kind == 0:
                m = m * Mat2(1, random_dyadic(rng, 8, 3), 0, 1)
            elif kind == 1:
                m = m * Mat2(1, 0, random_dyadic(rng, 8, 3), 1)
            else:
                m = m * Mat2.diagonal(qq(2) ** rng.choice([-1, 1]))
        if m.psl2_equal(Mat2.identity()):
            continue
        if all(_entry_ok(e, bound) for e in m.entries()):
            return m


def random_localized_element(rng):
    """A piecewise element of the dyadic group with genuine breakpoints,
    built from cut-and-paste output composed with a dyadic translation."""
    while True:
        g = random_sl2_dyadic(rng)
        if g.is_affine():
            continue
        x = random_dyadic(rng, 64, 4)
        if g.act(x).is_infinity:
            continue
        h = cut_and_paste(g, x).result
        if rng.random() < 0.5:
            h = h * PwpMap.translation(random_dyadic(rng, 8, 2))
        if rng.random() < 0.3:
            h = h.invert()
        return h


@pytest.fixture
def rng():
    return random.Random(20260810)
