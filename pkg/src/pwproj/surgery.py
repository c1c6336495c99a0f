"""Constructive surgery on piecewise-projective maps.

cut_and_paste builds, for a matrix g and a point x with g(x) finite, an
increasing bijection of the line that equals g near x and a translation
outside a bounded interval, staying over any ring containing the entries of
g.  The trick is a column operation: q0 = g * T(n) shares the value at
infinity with g, and for suitable integer n it is hyperbolic with its two
fixed points straddling g(x) but not g(infinity); gluing the identity
between those fixed points and q0 outside, then composing with g, yields
the desired element, whose outside germ is the translation by -n.

rational_cut_and_paste chooses n = (N + 1/N - a - d)/c instead, which makes
the trace N + 1/N and the discriminant the rational square (N - 1/N)^2, so
all breakpoints are rational.  c1_interpolate and smooth_element then
upgrade such elements to C1 by splicing a unipotent arc between the identity
and a diagonal scale, which matches values and first derivatives at both
ends.
"""

from dataclasses import dataclass
from typing import Optional

from ._backend import qq
from .errors import (
    AffineInput,
    IrrationalTransitionData,
    MapsXToInfinity,
    MixedRadicands,
    ParabolicTransition,
    ScaleIsOne,
)
from .exactnum import AlgebraicReal, as_algebraic, sqrt_rational
from .moebius import Mat2, MoebiusClass, ProjectivePoint
from .piecewise import PwpMap, SmoothnessClass, validate

_SCAN_LIMIT = 10 ** 6


@dataclass(frozen=True)
class CutPasteTrace:
    """Audit record of one cut-and-paste run.

    For affine inputs the construction is trivial (the result is the global
    map g) and every intermediate field is None.
    """

    g: Mat2
    x: AlgebraicReal
    affine: bool
    n: Optional[AlgebraicReal]
    big_n: Optional[int]  # the integer N of the rational-breakpoint variant
    q0: Optional[Mat2]
    tau: Optional[AlgebraicReal]
    lambda_minus: Optional[AlgebraicReal]
    lambda_plus: Optional[AlgebraicReal]
    xi_minus: Optional[AlgebraicReal]
    xi_plus: Optional[AlgebraicReal]
    result: PwpMap

    def to_json_obj(self):
        def num(v):
            return None if v is None else v.to_text()

        return {
            "g": self.g.to_lists(),
            "x": self.x.to_text(),
            "affine": self.affine,
            "n": num(self.n),
            "N": self.big_n,
            "q0": None if self.q0 is None else self.q0.to_lists(),
            "tau": num(self.tau),
            "lambda_minus": num(self.lambda_minus),
            "lambda_plus": num(self.lambda_plus),
            "xi_minus": num(self.xi_minus),
            "xi_plus": num(self.xi_plus),
            "result": self.result.to_json_obj(),
        }


def _ordering_holds(sign, xi_minus, gx, xi_plus, ginf):
    """xi- < gx < xi+ < ginf for sign +1; ginf < xi- < gx < xi+ mirrored."""
    if sign > 0:
        return xi_minus < gx < xi_plus < ginf
    return ginf < xi_minus < gx < xi_plus


def _localized(g, x, n, root):
    """Assemble the trace data once n (and the root of tau^2-4) is chosen."""
    a, b, c, d = g.entries()
    tau = a + d + n * c
    lam_minus = (tau - root) / 2
    lam_plus = (tau + root) / 2
    xi_minus = (lam_minus - d - n * c) / c
    xi_plus = (lam_plus - d - n * c) / c
    return tau, lam_minus, lam_plus, xi_minus, xi_plus


def _build_result(g, n, xi_minus, xi_plus):
    # q0 fixes xi+-, so g^-1(xi) = xi + n: the glued element is the
    # translation by -n outside [xi- + n, xi+ + n] and g inside.
    outside = Mat2.translation(-n)
    return validate([xi_minus + n, xi_plus + n], [outside, g, outside])


def cut_and_paste(g, x):
    """An element agreeing with g near x and with a translation far away.

    The integer n is scanned upward in absolute value, with sign +1 when
    g(x) < g(inf) and -1 otherwise, from the least value giving trace^2 > 4,
    until the exact separation of g(x) from g(inf) by the fixed points
    holds; the first hit is returned, so output is deterministic and the
    certificate minimal.
    """
    x = as_algebraic(x)
    gx_point = g.act(x)
    if gx_point.is_infinity:
        raise MapsXToInfinity("g maps %s to infinity" % x)
    if g.is_affine():
        return CutPasteTrace(
            g, x, True, None, None, None, None, None, None, None, None,
            PwpMap.global_map(g),
        )
    if g.c.sign() < 0:
        g = -g
    gx = gx_point.value
    ginf = g.a / g.c
    sign = 1 if gx < ginf else -1
    a, b, c, d = g.entries()
    for absn in range(1, _SCAN_LIMIT):
        n = sign * absn
        tau = a + d + n * c
        disc = tau * tau - 4
        if disc.sign() <= 0:
            continue
        root = sqrt_rational(disc.as_rational())
        tau, lam_minus, lam_plus, xi_minus, xi_plus = _localized(g, x, n, root)
        if _ordering_holds(sign, xi_minus, gx, xi_plus, ginf):
            q0 = Mat2(a, b + n * a, c, d + n * c)
            return CutPasteTrace(
                g, x, False, as_algebraic(n), None, q0, tau,
                lam_minus, lam_plus, xi_minus, xi_plus,
                _build_result(g, as_algebraic(n), xi_minus, xi_plus),
            )
    raise AssertionError("no admissible n below the scan limit")


def rational_cut_and_paste(g, x):
    """Cut-and-paste with all breakpoints rational.

    Takes n = (N + 1/N - a - d)/c for an integer |N| >= 2, scanned outward
    as N = 2, -2, 3, -3, ...; then tau = N + 1/N and tau^2 - 4 is the square
    of N - 1/N, so the fixed points and both breakpoints are rational.
    """
    for e in g.entries():
        if not e.is_rational:
            raise MixedRadicands("rational variant needs a matrix over Q")
    x = as_algebraic(x)
    gx_point = g.act(x)
    if gx_point.is_infinity:
        raise MapsXToInfinity("g maps %s to infinity" % x)
    if g.is_affine():
        raise AffineInput("g fixes infinity; use cut_and_paste")
    if g.c.sign() < 0:
        g = -g
    gx = gx_point.value
    ginf = g.a / g.c
    sign = 1 if gx < ginf else -1
    a, b, c, d = g.entries()
    for abs_big in range(2, _SCAN_LIMIT):
        for big_n in (sign * abs_big, -sign * abs_big):
            nn = qq(big_n)
            n = (nn + 1 / nn - (a + d).as_rational()) / c.as_rational()
            root = as_algebraic(abs(nn - 1 / nn))
            n_alg = as_algebraic(n)
            tau, lam_minus, lam_plus, xi_minus, xi_plus = _localized(
                g, x, n_alg, root
            )
            if _ordering_holds(sign, xi_minus, gx, xi_plus, ginf):
                q0 = Mat2(a, b + n_alg * a, c, d + n_alg * c)
                return CutPasteTrace(
                    g, x, False, n_alg, big_n, q0, tau,
                    lam_minus, lam_plus, xi_minus, xi_plus,
                    _build_result(g, n_alg, xi_minus, xi_plus),
                )
    raise AssertionError("no admissible N below the scan limit")


@dataclass(frozen=True)
class SmoothingPatch:
    """The unipotent interpolation between the identity and x -> a^2 x.

    u fixes -eps1*a with derivative 1 and sends eps1 to a^2*eps1 with
    derivative a^2, so the three-piece map p1 = (id, u, diag(a, 1/a)) is a
    C1 diffeomorphism supported in (-eps, eps].
    """

    a: AlgebraicReal
    eps: AlgebraicReal
    eps1: AlgebraicReal
    u: Mat2
    result: PwpMap

    def to_json_obj(self):
        return {
            "a": self.a.to_text(),
            "eps": self.eps.to_text(),
            "eps1": self.eps1.to_text(),
            "u": self.u.to_lists(),
            "result": self.result.to_json_obj(),
        }


def c1_interpolate(a, eps):
    """C1 splice from the identity (left of -eps1*a) to x -> a^2 x (right
    of eps1), with eps1 = min(eps, eps/a)."""
    a = qq(a)
    if a <= 0:
        raise ValueError("scale must be positive")
    if a == 1:
        raise ScaleIsOne("nothing to interpolate")
    eps = qq(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    eps1 = min(eps, eps / a)
    u = Mat2(
        2 * a / (a + 1),
        eps1 * a * (a - 1) / (a + 1),
        (1 - a) / (eps1 * a * (a + 1)),
        2 / (a + 1),
    )
    p0 = Mat2.diagonal(a)
    p1 = validate([-eps1 * a, eps1], [Mat2.identity(), u, p0])
    return SmoothingPatch(
        as_algebraic(a), as_algebraic(eps), as_algebraic(eps1), u, p1
    )


def _transition_data(t):
    """(other fixed point, eigenvalue there) for a hyperbolic rational t
    whose fixed-point data is rational; trace normalized positive."""
    if t.trace().sign() < 0:
        t = -t
    cls = t.classify()
    if cls is MoebiusClass.PARABOLIC:
        raise ParabolicTransition("transition is parabolic")
    if cls is not MoebiusClass.HYPERBOLIC:
        raise IrrationalTransitionData("transition is not hyperbolic")
    disc = t.trace() * t.trace() - 4
    root = sqrt_rational(disc.as_rational())
    if not root.is_rational:
        raise IrrationalTransitionData("transition has irrational eigenvalues")
    return t


def smooth_element(h):
    """Replace every C0 breakpoint by a conjugated unipotent splice.

    Each transition t = left^-1 * right must be hyperbolic with rational
    fixed points and eigenvalues (as produced by rational_cut_and_paste).
    The splice at a breakpoint xi is confined to a zone strictly inside
    (xi - delta, xi + delta) with delta half the minimal breakpoint gap,
    shrinking further until the conjugated patch keeps all poles out; the
    result is C1, agrees with h outside the zones and stays over Q.
    """
    report = h.smoothness()
    c0_indices = [
        j for j, (_, cls) in enumerate(report) if cls is SmoothnessClass.C0
    ]
    if not c0_indices:
        return h
    bps = h.breakpoints
    delta = None
    for i in range(len(bps) - 1):
        gap = (bps[i + 1] - bps[i]) / 2
        if delta is None or gap < delta:
            delta = gap
    if delta is None:
        delta = as_algebraic(1)

    new_bps = list(bps)
    new_pieces = list(h.pieces)
    # Patches are inserted right to left so earlier indices stay valid.
    for j in reversed(c0_indices):
        xi = bps[j]
        if not xi.is_rational:
            raise IrrationalTransitionData("breakpoint %s is irrational" % xi)
        left_piece = h.pieces[j]
        right_piece = h.pieces[j + 1]
        t = _transition_data(left_piece.inverse() * right_piece)
        fps = [p.value for p in t.fixed_points() if not p.is_infinity]
        others = [v for v in fps if v != xi]
        if t.act(xi) != ProjectivePoint.of(xi):
            raise IrrationalTransitionData(
                "transition does not fix its breakpoint"
            )
        other = others[0] if others else None  # None means infinity
        if other is not None and not other.is_rational:
            raise IrrationalTransitionData("fixed point %s is irrational" % other)
        # m sends 0 to the breakpoint and infinity to the other fixed point;
        # pulling back by m turns t into the diagonal scale w -> a^2 w.
        if other is None:
            m = Mat2(1, xi, 0, 1)
            scale = t.a
        else:
            s = 1 / (other - xi)
            m = Mat2(other * s, xi, s, 1)
            scale = t.c * other + t.d
        if not scale.is_rational:
            raise IrrationalTransitionData("eigenvalue is irrational")
        a_val = scale.as_rational()
        patch = None
        eps = delta.as_rational() if delta.is_rational else qq(1)
        for _ in range(64):
            try:
                cand = c1_interpolate(a_val, eps)
            except ScaleIsOne:
                raise ParabolicTransition("unit eigenvalue at %s" % xi)
            lo_w = -cand.eps1 * cand.a
            hi_w = cand.eps1
            # the patch zone must avoid the pole of m in w-coordinates
            m_pole_w = m.inverse().act(ProjectivePoint.infinity())
            if not m_pole_w.is_infinity and lo_w <= m_pole_w.value <= hi_w:
                eps = eps / 2
                continue
            y_lo = m.act_real(lo_w)
            y_hi = m.act_real(hi_w)
            if not (xi - delta < y_lo < xi and xi < y_hi < xi + delta):
                eps = eps / 2
                continue
            mid = left_piece * (m * cand.u * m.inverse())
            pole = mid.pole()
            if pole is not None and y_lo <= pole <= y_hi:
                eps = eps / 2
                continue
            patch = (y_lo, y_hi, mid)
            break
        if patch is None:
            raise AssertionError("patch zone did not stabilize")
        y_lo, y_hi, mid = patch
        new_bps[j : j + 1] = [y_lo, y_hi]
        new_pieces[j + 1 : j + 1] = [mid]
    return validate(new_bps, new_pieces)


def thompson_generators():
    """The translation A and the three-piece C1 element B generating a copy
    of Thompson's group over the integers."""
    a = PwpMap.translation(1)
    b = validate(
        [0, qq(1, 2), 1],
        [
            Mat2.identity(),
            Mat2(1, 0, -1, 1),
            Mat2(3, -1, 1, 0),
            Mat2(1, 1, 0, 1),
        ],
    )
    return a, b


def _word(*letters):
    """Compose word letters left to right (rightmost acts last)."""
    result = PwpMap.identity()
    for letter in letters:
        result = letter.compose(result)
    return result


def thompson_relations_hold():
    """Exact check of the two defining relations of Thompson's group for
    the generators above: [AB^-1, A^-1 B A] and [AB^-1, A^-2 B A^2],
    with words read left to right."""
    a, b = thompson_generators()
    a_inv, b_inv = a.invert(), b.invert()
    u = _word(a, b_inv)
    v1 = _word(a_inv, b, a)
    v2 = _word(a_inv, a_inv, b, a, a)
    return (u * v1 == v1 * u) and (u * v2 == v2 * u)
