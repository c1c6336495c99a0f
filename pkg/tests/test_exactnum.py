"""Exact number tests: canonical forms, field axioms, ordering, valuations,
ring membership, Galois conjugation.

Order comparisons are cross-checked against two independent oracles: the
sign-tracked squaring method and 100-digit mpmath evaluation.
"""

import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwproj import (
    AlgebraicReal,
    RingSpec,
    arith,
    as_algebraic,
    compare,
    galois_conjugate,
    in_ring,
    padic_valuation,
    parse_number,
    qq,
    sqrt_rational,
)
from pwproj.errors import (
    DivisionByZero,
    MixedRadicands,
    NotPrime,
    ParseError,
    SquareFactorTooLarge,
)
from pwproj.exactnum import split_square


def surd(rn, rd, sn, sd, d):
    return AlgebraicReal(qq(rn, rd), qq(sn, sd), d)


class TestArith:
    def test_golden_ratio_product(self):
        # (1+sqrt5)/2 * (-1+sqrt5)/2 = (5-1)/4 = 1
        x = surd(1, 2, 1, 2, 5)
        y = surd(-1, 2, 1, 2, 5)
        assert arith(x, y, "*") == as_algebraic(1)

    def test_rational_sum(self):
        assert arith(qq(3, 8), qq(1, 8), "+") == as_algebraic(qq(1, 2))

    def test_surd_minus_rational(self):
        x = surd(3, 2, 1, 2, 5)
        assert arith(x, qq(1, 2), "-") == surd(1, 1, 1, 2, 5)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            arith(qq(1), qq(0), "/")

    def test_mixed_radicands_rejected(self):
        with pytest.raises(MixedRadicands):
            arith(surd(0, 1, 1, 1, 2), surd(0, 1, 1, 1, 3), "+")

    def test_division_by_surd(self):
        x = surd(1, 1, 1, 1, 2)  # 1 + sqrt2
        assert x / x == as_algebraic(1)
        inv = as_algebraic(1) / x  # = sqrt2 - 1
        assert inv == surd(-1, 1, 1, 1, 2)


rational_st = st.builds(qq, st.integers(-40, 40), st.integers(1, 25))
radicand_st = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


@st.composite
def algebraic_st(draw, d=None):
    rat = draw(rational_st)
    if draw(st.booleans()):
        return AlgebraicReal(rat)
    surd_part = draw(rational_st)
    if surd_part == 0:
        return AlgebraicReal(rat)
    return AlgebraicReal(rat, surd_part, d if d is not None else draw(radicand_st))


class TestFieldAxioms:
    @settings(max_examples=150, deadline=None)
    @given(algebraic_st(d=5), algebraic_st(d=5), algebraic_st(d=5))
    def test_associativity_and_distributivity(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z

    @settings(max_examples=100, deadline=None)
    @given(algebraic_st(d=7))
    def test_inverses(self, x):
        assert x + (-x) == as_algebraic(0)
        if x != as_algebraic(0):
            assert x * (as_algebraic(1) / x) == as_algebraic(1)

    @settings(max_examples=100, deadline=None)
    @given(algebraic_st(d=3), algebraic_st(d=3))
    def test_galois_is_ring_morphism(self, x, y):
        assert galois_conjugate(x * y) == galois_conjugate(x) * galois_conjugate(y)
        assert galois_conjugate(x + y) == galois_conjugate(x) + galois_conjugate(y)
        assert galois_conjugate(galois_conjugate(x)) == x


def _squaring_sign_oracle(x, y):
    """Compare r1 + s1*sqrt(d1) vs r2 + s2*sqrt(d2) by repeated squaring
    with sign tracking; independent of the interval-refinement code path."""
    # reduce to sign of u + v where u is rational and v = s*sqrt(d) pure
    diff_rat = x.rat - y.rat
    terms = []
    if x.surd != 0:
        terms.append((x.surd, x.d))
    if y.surd != 0:
        terms.append((-y.surd, y.d))
    if not terms:
        return (diff_rat > 0) - (diff_rat < 0)
    if len(terms) == 1:
        s, d = terms[0]
        # sign of diff_rat + s*sqrt(d): compare diff_rat^2 vs s^2 d
        if diff_rat == 0:
            return 1 if s > 0 else -1
        lhs, rhs = diff_rat * diff_rat, s * s * d
        if diff_rat > 0 and s > 0:
            return 1
        if diff_rat < 0 and s < 0:
            return -1
        if diff_rat > 0:  # s < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)
    # two distinct radicands: move one to the other side and square both
    (s1, d1), (s2n, d2) = terms
    s2 = -s2n  # comparing diff_rat + s1 sqrt(d1) vs s2 sqrt(d2)
    a = AlgebraicReal(diff_rat, s1, d1)
    sa = _squaring_sign_oracle(a, AlgebraicReal(qq(0)))
    sb = 1 if s2 > 0 else (-1 if s2 < 0 else 0)
    if sb == 0:
        return sa
    if sa != sb:
        return sa if sa != 0 else -sb
    # same sign: compare squares, which have a single radicand each
    a2 = a * a
    b2 = AlgebraicReal(s2 * s2 * d2)
    return sa * _squaring_sign_oracle(a2, b2)


class TestCompare:
    def test_golden_vs_three_halves(self):
        assert compare(surd(1, 2, 1, 2, 5), qq(3, 2)) > 0

    def test_equal_surds(self):
        assert compare(surd(1, 2, 1, 2, 5), surd(1, 2, 1, 2, 5)) == 0

    def test_cross_radicand(self):
        # oracle: (1+sqrt2)^2 = 3 + 2 sqrt2, and (3+2sqrt2) vs 6 reduces to
        # 2 sqrt2 vs 3, i.e. 8 vs 9, so 1+sqrt2 < sqrt6
        x = surd(1, 1, 1, 1, 2)
        y = sqrt_rational(qq(6))
        assert _squaring_sign_oracle(x, y) == -1
        assert compare(x, y) == -1

    def test_rational_never_equals_surd(self):
        assert compare(surd(0, 1, 1, 1, 2), qq(7, 5)) != 0

    def test_total_order_against_100_digit_evaluation(self):
        rng = random.Random(5)
        mpmath.mp.dps = 100
        rads = [None, 2, 3, 5, 6, 13]

        def rand_val():
            d = rng.choice(rads)
            rat = qq(rng.randint(-60, 60), rng.randint(1, 40))
            if d is None:
                return AlgebraicReal(rat)
            s = qq(rng.randint(-60, 60), rng.randint(1, 40))
            return AlgebraicReal(rat, s, d) if s else AlgebraicReal(rat)

        def approx(v):
            out = mpmath.mpf(int(v.rat.numerator)) / int(v.rat.denominator)
            if v.d is not None:
                out += (
                    mpmath.mpf(int(v.surd.numerator))
                    / int(v.surd.denominator)
                    * mpmath.sqrt(v.d)
                )
            return out

        for _ in range(10 ** 4):
            x, y = rand_val(), rand_val()
            got = compare(x, y)
            ax, ay = approx(x), approx(y)
            if abs(ax - ay) > mpmath.mpf(10) ** -80:
                assert got == (1 if ax > ay else -1)
            else:
                assert got == 0

    @settings(max_examples=120, deadline=None)
    @given(algebraic_st(), algebraic_st())
    def test_matches_squaring_oracle(self, x, y):
        assert compare(x, y) == _squaring_sign_oracle(x, y)

    @settings(max_examples=80, deadline=None)
    @given(algebraic_st(), algebraic_st(), algebraic_st())
    def test_transitivity(self, x, y, z):
        if compare(x, y) <= 0 and compare(y, z) <= 0:
            assert compare(x, z) <= 0


class TestValuation:
    def test_examples(self):
        assert padic_valuation(qq(3, 8), 2) == -3
        assert padic_valuation(qq(50), 5) == 2
        assert padic_valuation(qq(0), 2) == math.inf

    def test_not_prime(self):
        with pytest.raises(NotPrime):
            padic_valuation(qq(1), 6)

    def test_additive(self):
        rng = random.Random(7)
        for _ in range(200):
            a = qq(rng.randint(1, 500), rng.randint(1, 500))
            b = qq(rng.randint(1, 500), rng.randint(1, 500))
            p = rng.choice([2, 3, 5, 7])
            assert padic_valuation(a * b, p) == padic_valuation(a, p) + padic_valuation(b, p)


def _denominator_factors(x):
    den = int(x.denominator)
    out = set()
    f = 2
    while f * f <= den:
        while den % f == 0:
            out.add(f)
            den //= f
        f += 1
    if den > 1:
        out.add(den)
    return out


class TestRings:
    def test_examples(self):
        z2 = RingSpec.s_integers({2})
        assert in_ring(qq(3, 8), z2)
        assert not in_ring(qq(1, 3), z2)
        assert in_ring(qq(7), RingSpec.integers())

    def test_characterization_against_factoring_oracle(self):
        rng = random.Random(11)
        for _ in range(300):
            x = qq(rng.randint(-300, 300), rng.randint(1, 300))
            s = frozenset(rng.sample([2, 3, 5, 7, 11], rng.randint(0, 3)))
            ring = RingSpec.s_integers(s)
            assert in_ring(x, ring) == (_denominator_factors(x) <= s)

    def test_empty_s_is_integers(self):
        assert RingSpec.s_integers(set()) == RingSpec.integers()

    def test_ring_text_roundtrip(self):
        for text in ("Z", "Q", "Z[1/2]", "Z[1/2,1/5]", "Z[sqrt(2)]"):
            assert RingSpec.from_text(text).to_text() == text
        with pytest.raises(ParseError):
            RingSpec.from_text("Z[1/4]")


class TestGalois:
    def test_examples(self):
        assert galois_conjugate(surd(1, 1, 1, 1, 2)) == surd(1, 1, -1, 1, 2)
        assert galois_conjugate(as_algebraic(qq(3, 2))) == as_algebraic(qq(3, 2))
        assert galois_conjugate(surd(1, 2, 1, 2, 5)) == surd(1, 2, -1, 2, 5)


class TestSquarefreeExtraction:
    def test_split(self):
        assert split_square(50) == (5, 2)
        assert split_square(1) == (1, 1)
        assert split_square(49) == (7, 1)
        assert split_square(2 * 3 * 5) == (1, 30)

    def test_sqrt_normalizes(self):
        assert sqrt_rational(qq(8)) == surd(0, 1, 2, 1, 2)
        assert sqrt_rational(qq(9, 4)) == as_algebraic(qq(3, 2))
        assert sqrt_rational(qq(0)) == as_algebraic(0)
        # sqrt(1/2) = sqrt(2)/2
        assert sqrt_rational(qq(1, 2)) == surd(0, 1, 1, 2, 2)

    def test_large_hidden_square_rejected(self):
        p = 1000003  # prime beyond the trial-division bound
        with pytest.raises(SquareFactorTooLarge):
            split_square(p * p)

    def test_substitution(self):
        rng = random.Random(3)
        for _ in range(100):
            q = qq(rng.randint(1, 4000), rng.randint(1, 4000))
            r = sqrt_rational(q)
            assert r * r == as_algebraic(q)


class TestTextual:
    def test_canonical_forms(self):
        assert str(as_algebraic(qq(-3, 2))) == "-3/2"
        assert str(as_algebraic(7)) == "7"
        assert str(surd(1, 2, -1, 2, 5)) == "(1/2)+(-1/2)*sqrt(5)"

    def test_roundtrip(self):
        rng = random.Random(13)
        for _ in range(200):
            if rng.random() < 0.5:
                v = as_algebraic(qq(rng.randint(-999, 999), rng.randint(1, 999)))
            else:
                v = AlgebraicReal(
                    qq(rng.randint(-99, 99), rng.randint(1, 99)),
                    qq(rng.randint(1, 99), rng.randint(1, 99)) * rng.choice([1, -1]),
                    rng.choice([2, 3, 5, 7, 11]),
                )
            assert parse_number(v.to_text()) == v

    def test_rejects_garbage(self):
        for bad in ("", "1/0", "sqrt(2)", "(1)+(1)*sqrt(4)", "1.5"):
            with pytest.raises(ParseError):
                parse_number(bad)
