"""Surgery constructions: localization traces, the rational-breakpoint
variant, the unipotent C1 splice, element smoothing, Thompson generators.

The worked localization of [[1,0],[1,1]] at 0 is pinned exactly: n = 1,
trace 3, fixed points (-1 +- sqrt5)/2, outside germ the translation by -1;
the rational variant is pinned at N = 2, n = 1/2, fixed points -1 and 1/2.
"""

import random

import pytest

from pwproj import (
    AlgebraicReal,
    Mat2,
    MoebiusClass,
    ProjectivePoint,
    PwpMap,
    RingSpec,
    SmoothnessClass,
    c1_interpolate,
    cut_and_paste,
    qq,
    rational_cut_and_paste,
    smooth_element,
    thompson_generators,
    thompson_relations_hold,
    validate,
)
from pwproj.errors import (
    AffineInput,
    MapsXToInfinity,
    ParabolicTransition,
    IrrationalTransitionData,
    ScaleIsOne,
)
from tests.conftest import random_dyadic, random_sl2_dyadic


def _surd(rn, rd, sn, sd, d):
    return AlgebraicReal(qq(rn, rd), qq(sn, sd), d)


class TestCutAndPaste:
    def test_worked_example(self):
        tr = cut_and_paste(Mat2(1, 0, 1, 1), 0)
        assert not tr.affine
        assert tr.n == 1
        assert tr.tau == 3
        assert tr.q0 == Mat2(1, 1, 1, 2)
        assert tr.xi_minus == _surd(-1, 2, -1, 2, 5)
        assert tr.xi_plus == _surd(-1, 2, 1, 2, 5)
        h = tr.result
        assert h.breakpoints == (_surd(1, 2, -1, 2, 5), _surd(1, 2, 1, 2, 5))
        assert h.pieces[0] == Mat2(1, -1, 0, 1)
        assert h.pieces[1] == Mat2(1, 0, 1, 1)
        assert h.pieces[2] == Mat2(1, -1, 0, 1)
        # continuity at the upper breakpoint: g((1+sqrt5)/2) = (1+sqrt5)/2 - 1
        upper = h.breakpoints[1]
        assert Mat2(1, 0, 1, 1).act_real(upper) == upper - 1

    def test_affine_case(self):
        g = Mat2.diagonal(2)
        tr = cut_and_paste(g, qq(17, 3))
        assert tr.affine
        assert tr.result == PwpMap.global_map(g)
        assert tr.n is None and tr.q0 is None

    def test_breakpoints_fix_conjugated_matrix(self):
        tr = cut_and_paste(Mat2(1, 0, 1, 1), 0)
        conj = tr.g.inverse() * tr.q0 * tr.g
        assert conj == Mat2(2, 1, 1, 1)
        assert conj.classify() is MoebiusClass.HYPERBOLIC
        for b in tr.result.breakpoints:
            assert conj.act(b) == ProjectivePoint.of(b)

    def test_q0_fixes_xi(self):
        tr = cut_and_paste(Mat2(1, 0, 1, 1), 0)
        for xi in (tr.xi_minus, tr.xi_plus):
            assert tr.q0.act(xi) == ProjectivePoint.of(xi)

    def test_maps_x_to_infinity(self):
        with pytest.raises(MapsXToInfinity):
            cut_and_paste(Mat2(0, -1, 1, 0), 0)

    def test_randomized_postconditions(self, rng):
        ring = RingSpec.s_integers({2})
        done = 0
        while done < 25:
            g = random_sl2_dyadic(rng)
            x = random_dyadic(rng, 64, 5)
            if g.act(x).is_infinity:
                continue
            tr = cut_and_paste(g, x)
            h = tr.result
            assert h.ring_membership(ring)
            if tr.affine:
                continue
            gx = tr.g.act_real(x)
            ginf = tr.g.act(ProjectivePoint.infinity()).value
            assert (
                tr.xi_minus < gx < tr.xi_plus < ginf
                or ginf < tr.xi_minus < gx < tr.xi_plus
            )
            lo, hi = h.breakpoints
            assert lo < ProjectivePoint.of(x).value < hi
            conj = tr.g.inverse() * tr.q0 * tr.g
            assert conj.classify() is MoebiusClass.HYPERBOLIC
            for b in (lo, hi):
                assert conj.act(b) == ProjectivePoint.of(b)
            # agreement with g on the inner interval
            step = (hi - lo) / 8
            for j in range(1, 8):
                y = lo + step * j
                assert h(y) == tr.g.act_real(y)
            assert h.fixes_infinity_projectively()
            done += 1


class TestRationalCutAndPaste:
    def test_worked_example(self):
        tr = rational_cut_and_paste(Mat2(1, 0, 1, 1), 0)
        assert tr.big_n == 2
        assert tr.n == qq(1, 2)
        assert tr.q0 == Mat2(1, qq(1, 2), 1, qq(3, 2))
        assert tr.tau == qq(5, 2)
        assert tr.xi_minus == -1 and tr.xi_plus == qq(1, 2)
        assert {str(tr.lambda_minus), str(tr.lambda_plus)} == {"1/2", "2"}
        h = tr.result
        assert h.breakpoints == (AlgebraicReal(qq(-1, 2)), AlgebraicReal(qq(1)))
        assert h.pieces[0] == Mat2(1, qq(-1, 2), 0, 1)
        assert h.pieces[1] == Mat2(1, 0, 1, 1)
        # continuity at 1: g(1) = 1/2 = 1 - 1/2
        assert Mat2(1, 0, 1, 1).act_real(1) == qq(1, 2)

    def test_discriminant_is_square(self):
        for n_int in list(range(2, 12)) + [-2, -3, -7]:
            nn = qq(n_int)
            tau = nn + 1 / nn
            assert tau * tau - 4 == (nn - 1 / nn) ** 2

    def test_errors(self):
        with pytest.raises(AffineInput):
            rational_cut_and_paste(Mat2.diagonal(2), 1)
        with pytest.raises(MapsXToInfinity):
            rational_cut_and_paste(Mat2(0, -1, 1, 0), 0)

    def test_rational_breakpoints_random(self, rng):
        done = 0
        while done < 20:
            g = random_sl2_dyadic(rng)
            if g.is_affine():
                continue
            x = random_dyadic(rng, 64, 5)
            if g.act(x).is_infinity:
                continue
            tr = rational_cut_and_paste(g, x)
            assert tr.xi_minus.is_rational and tr.xi_plus.is_rational
            nn = qq(tr.big_n)
            assert abs(nn - 1 / nn) == (
                tr.lambda_plus - tr.lambda_minus
            ).as_rational()
            for b in tr.result.breakpoints:
                assert b.is_rational
            done += 1


class TestC1Interpolate:
    def test_worked_example_a2(self):
        patch = c1_interpolate(2, 1)
        assert patch.eps1 == qq(1, 2)
        assert patch.u == Mat2(qq(4, 3), qq(1, 3), qq(-1, 3), qq(2, 3))
        p1 = patch.result
        assert p1.breakpoints == (AlgebraicReal(-1), AlgebraicReal(qq(1, 2)))
        assert p1(-1) == -1
        assert p1(qq(1, 2)) == 2
        assert patch.u.derivative_at(-1) == 1
        assert patch.u.derivative_at(qq(1, 2)) == 4
        assert p1.is_c1()

    def test_pole_outside_patch_zone(self):
        patch = c1_interpolate(2, 1)
        pole = patch.u.pole()
        assert pole == 2
        assert not (-patch.eps1 * patch.a <= pole <= patch.eps1)

    def test_worked_example_a3(self):
        patch = c1_interpolate(3, 1)
        assert patch.eps1 == qq(1, 3)
        assert patch.u == Mat2(qq(6, 4), qq(2, 4), qq(-2, 4), qq(2, 4))
        assert patch.result(-1) == -1
        assert patch.result(qq(1, 3)) == 3
        assert patch.u.derivative_at(-1) == 1
        assert patch.u.derivative_at(qq(1, 3)) == 9

    def test_scale_one_rejected(self):
        with pytest.raises(ScaleIsOne):
            c1_interpolate(1, 1)

    def test_identities_random(self, rng):
        for _ in range(50):
            a = qq(rng.randint(1, 40), rng.randint(1, 40))
            if a == 1:
                a += 1
            eps = qq(rng.randint(1, 30), rng.randint(1, 30))
            patch = c1_interpolate(a, eps)
            e1, av = patch.eps1, patch.a
            assert e1 <= patch.eps and e1 * av <= patch.eps
            u = patch.u
            assert u.act_real(-e1 * av) == -e1 * av
            assert u.act_real(e1) == av * av * e1
            assert u.derivative_at(-e1 * av) == 1
            assert u.derivative_at(e1) == av * av
            assert patch.result.is_c1()


class TestSmoothElement:
    def test_smooths_rational_localization(self):
        tr = rational_cut_and_paste(Mat2(1, 0, 1, 1), 0)
        h = tr.result
        sm = smooth_element(h)
        assert sm.is_c1()
        assert all(b.is_rational for b in sm.breakpoints)
        assert sm.ring_membership(RingSpec.rationals())
        # transition data at the upper breakpoint: eigenvalues {2, 1/2},
        # fixed points {1, -1/2}
        t = h.pieces[1].inverse() * h.pieces[2]
        assert t.trace() == qq(5, 2)
        fps = {str(p) for p in t.fixed_points()}
        assert fps == {"1", "-1/2"}
        # still the local germs: x/(x+1) near 0, x - 1/2 near infinity
        assert sm.projective_part(0) == Mat2(1, 0, 1, 1)
        assert sm(qq(1, 100)) == h(qq(1, 100))
        assert sm(1000) == h(1000) == qq(1999, 2)
        assert sm.fixes_infinity_projectively()
        assert sm.projective_part(ProjectivePoint.infinity()) == Mat2(
            1, qq(-1, 2), 0, 1
        )

    def test_agrees_outside_zones(self):
        h = rational_cut_and_paste(Mat2(1, 0, 1, 1), 0).result
        sm = smooth_element(h)
        gaps = [
            (h.breakpoints[i + 1] - h.breakpoints[i]) / 2
            for i in range(len(h.breakpoints) - 1)
        ]
        delta = min(gaps)
        sample = []
        for b in h.breakpoints:
            sample += [b.as_rational() - delta.as_rational(),
                       b.as_rational() + delta.as_rational()]
        sample += [qq(-50), qq(50)]
        for x in sample:
            assert sm(x) == h(x)

    def test_already_smooth_unchanged(self):
        b = thompson_generators()[1]
        assert smooth_element(b) is b

    def test_parabolic_transition_is_already_c1(self):
        # a parabolic transition fixing its breakpoint has derivative 1
        # there, so the breakpoint is C1 and nothing needs patching
        p = Mat2(3, -1, 4, -1)  # parabolic fixing 1/2
        h = validate(
            [qq(1, 2), 1],
            [Mat2.identity(), p, Mat2(1, qq(-1, 3), 0, 1)],
        )
        assert h.smoothness()[0][1] is SmoothnessClass.C1
        assert smooth_element(h).is_c1()

    def test_parabolic_transition_data_rejected(self):
        from pwproj.surgery import _transition_data

        with pytest.raises(ParabolicTransition):
            _transition_data(Mat2(1, 1, 0, 1))

    def test_irrational_breakpoints_rejected(self):
        h = cut_and_paste(Mat2(1, 0, 1, 1), 0).result
        with pytest.raises(IrrationalTransitionData):
            smooth_element(h)

    def test_random_rational_localizations(self, rng):
        done = 0
        while done < 10:
            g = random_sl2_dyadic(rng)
            if g.is_affine():
                continue
            x = random_dyadic(rng, 32, 4)
            if g.act(x).is_infinity:
                continue
            h = rational_cut_and_paste(g, x).result
            sm = smooth_element(h)
            assert sm.is_c1()
            gaps = [
                h.breakpoints[i + 1] - h.breakpoints[i]
                for i in range(len(h.breakpoints) - 1)
            ]
            delta = min(gaps) / 2
            # agreement holds outside the declared zones around breakpoints
            for b in h.breakpoints:
                for y in (b - delta, b + delta):
                    assert sm(y) == h(y)
            margin = delta.as_rational() + 1
            far = max(b.as_rational() for b in h.breakpoints) + margin
            low = min(b.as_rational() for b in h.breakpoints) - margin
            assert sm(far) == h(far)
            assert sm(low) == h(low)
            done += 1


class TestThompson:
    def test_generators_validate(self):
        a, b = thompson_generators()
        assert a == PwpMap.translation(1)
        assert [str(x) for x in b.breakpoints] == ["0", "1/2", "1"]
        assert [str(b(x)) for x in b.breakpoints] == ["0", "1", "2"]

    def test_derivative_pairs(self):
        _, b = thompson_generators()
        pairs = []
        for j, bp in enumerate(b.breakpoints):
            pairs.append(
                (
                    b.pieces[j].derivative_at(bp),
                    b.pieces[j + 1].derivative_at(bp),
                )
            )
        assert pairs == [(1, 1), (4, 4), (1, 1)]
        assert b.is_c1()

    def test_integral(self):
        a, b = thompson_generators()
        z = RingSpec.integers()
        assert a.ring_membership(z) and b.ring_membership(z)

    def test_relations(self):
        assert thompson_relations_hold()

    def test_relator_pointwise(self):
        # commutator evaluated pointwise on a grid must be the identity map
        a, b = thompson_generators()
        ai, bi = a.invert(), b.invert()

        def word(*letters):
            out = PwpMap.identity()
            for w in letters:
                out = w * out
            return out

        u = word(a, bi)
        v = word(ai, b, a)
        c = u.invert() * v.invert() * u * v
        for i in range(-500, 501):
            x = qq(i, 8)
            assert c(x) == x
        assert c.is_identity()
