"""SL2/PSL2 matrices over exact numbers and their projective-line action.

A :class:`Mat2` has determinant exactly 1 and entries that are rational or
share a single radicand.  The action on the circle ``R ∪ {inf}`` is total;
trace classification, fixed points, derivatives and reduction of exact
upper-half-plane points into the classical fundamental domain of SL2(Z) are
all computed without any rounding.
"""

import enum
import re

from ._backend import QQ, is_rational, qq, qq_ceil
from .errors import (
    IdentityMatrix,
    MixedRadicands,
    NotInUpperHalfPlane,
    NotUnimodular,
    ParseError,
    PoleAtPoint,
)
from .exactnum import AlgebraicReal, as_algebraic, format_number, parse_number, sqrt_rational

_ZERO = as_algebraic(0)
_ONE = as_algebraic(1)


class ProjectivePoint:
    """A point of the projective line: a finite exact real, or infinity."""

    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    @classmethod
    def infinity(cls):
        return _INFINITY

    @classmethod
    def of(cls, x):
        if isinstance(x, ProjectivePoint):
            return x
        return cls(as_algebraic(x))

    @property
    def is_infinity(self):
        return self.value is None

    def finite(self):
        if self.value is None:
            raise PoleAtPoint("point is infinity")
        return self.value

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            other = ProjectivePoint.of(other)
        if self.value is None or other.value is None:
            return self.value is None and other.value is None
        return self.value == other.value

    def __hash__(self):
        return hash(None) if self.value is None else hash(self.value)

    def to_text(self):
        return "inf" if self.value is None else self.value.to_text()

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return "ProjectivePoint(%s)" % self.to_text()


_INFINITY = ProjectivePoint(None)
INFINITY = _INFINITY


def parse_projective_point(text):
    text = text.strip()
    if text == "inf":
        return _INFINITY
    return ProjectivePoint(parse_number(text))


class MoebiusClass(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class Mat2:
    """Determinant-one 2x2 matrix acting on the projective line."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (as_algebraic(e) for e in (a, b, c, d))
        radicands = {e.d for e in (a, b, c, d) if e.d is not None}
        if len(radicands) > 1:
            raise MixedRadicands("matrix entries mix radicands %s" % radicands)
        if a * d - b * c != _ONE:
            raise NotUnimodular("determinant is not 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, n):
        return cls(1, n, 0, 1)

    @classmethod
    def diagonal(cls, a):
        """diag(a, 1/a), the map x -> a^2 x."""
        a = as_algebraic(a)
        return cls(a, 0, 0, 1 / a)

    # -- algebra ---------------------------------------------------------------

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Mat2.identity()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self):
        return self.a + self.d

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def psl2_canonical(self):
        """The sign representative with c > 0, or c = 0 and d > 0."""
        s = self.c.sign()
        if s < 0 or (s == 0 and self.d.sign() < 0):
            return -self
        return self

    def psl2_equal(self, other):
        return self == other or self == -other

    def is_identity_psl2(self):
        return self.psl2_equal(Mat2.identity())

    # -- action ----------------------------------------------------------------

    def act(self, x):
        """Image of a projective point; total on the circle."""
        x = ProjectivePoint.of(x)
        if x.is_infinity:
            if self.c == _ZERO:
                return _INFINITY
            return ProjectivePoint(self.a / self.c)
        v = x.value
        den = self.c * v + self.d
        if not den:
            return _INFINITY
        return ProjectivePoint((self.a * v + self.b) / den)

    def act_real(self, x):
        """Image of a finite point known to avoid the pole."""
        x = as_algebraic(x)
        den = self.c * x + self.d
        if not den:
            raise PoleAtPoint("pole at %s" % x)
        return (self.a * x + self.b) / den

    def pole(self):
        """The preimage of infinity, or None for affine matrices."""
        if self.c == _ZERO:
            return None
        return -self.d / self.c

    def is_affine(self):
        return self.c == _ZERO

    def derivative_at(self, x):
        """Exact derivative 1/(cx+d)^2; positive wherever defined."""
        x = as_algebraic(x)
        den = self.c * x + self.d
        if not den:
            raise PoleAtPoint("derivative undefined at the pole %s" % x)
        return 1 / (den * den)

    def classify(self):
        if self.psl2_equal(Mat2.identity()):
            return MoebiusClass.IDENTITY
        t = self.trace()
        s = (t * t - 4).sign()
        if s < 0:
            return MoebiusClass.ELLIPTIC
        if s == 0:
            return MoebiusClass.PARABOLIC
        return MoebiusClass.HYPERBOLIC

    def fixed_points(self):
        """Real fixed points on the projective line, sorted, infinity last.

        Hyperbolic matrices give two points, parabolic one, elliptic none.
        """
        cls = self.classify()
        if cls is MoebiusClass.IDENTITY:
            raise IdentityMatrix("every point is fixed")
        if cls is MoebiusClass.ELLIPTIC:
            return ()
        if self.c == _ZERO:
            if self.a == self.d:
                return (_INFINITY,)
            finite = self.b / (self.d - self.a)
            return (ProjectivePoint(finite), _INFINITY)
        # Roots of c x^2 + (d-a) x - b, with discriminant trace^2 - 4.
        t = self.trace()
        disc = t * t - 4
        if cls is MoebiusClass.PARABOLIC:
            return (ProjectivePoint((self.a - self.d) / (2 * self.c)),)
        root = sqrt_rational(disc.as_rational())
        lo = (self.a - self.d - root) / (2 * self.c)
        hi = (self.a - self.d + root) / (2 * self.c)
        if lo > hi:
            lo, hi = hi, lo
        return (ProjectivePoint(lo), ProjectivePoint(hi))

    def eigenvalue_at(self, point):
        """Eigenvalue of the eigenvector representing a fixed point."""
        point = ProjectivePoint.of(point)
        if point.is_infinity:
            return self.a
        return self.c * point.value + self.d

    def hyperbolic_axis(self):
        """(attracting, repelling) fixed points of a hyperbolic matrix."""
        if self.classify() is not MoebiusClass.HYPERBOLIC:
            raise ValueError("matrix is not hyperbolic")
        p, q = self.fixed_points()
        lam = self.eigenvalue_at(p)
        if (lam * lam - 1).sign() > 0:
            return p, q
        return q, p

    # -- serialization -----------------------------------------------------------

    def to_lists(self):
        return [
            [format_number(self.a), format_number(self.b)],
            [format_number(self.c), format_number(self.d)],
        ]

    @classmethod
    def from_lists(cls, obj):
        try:
            (a, b), (c, d) = obj
        except (TypeError, ValueError) as exc:
            raise ParseError("matrix must be [[a,b],[c,d]]") from exc
        entries = []
        for e in (a, b, c, d):
            if isinstance(e, str):
                entries.append(parse_number(e))
            elif isinstance(e, int):
                entries.append(as_algebraic(e))
            else:
                raise ParseError("matrix entries must be strings or integers")
        try:
            return cls(*entries)
        except (NotUnimodular, MixedRadicands) as exc:
            raise ParseError(str(exc)) from exc

    def to_text(self):
        rows = self.to_lists()
        return "[[%s,%s],[%s,%s]]" % (rows[0][0], rows[0][1], rows[1][0], rows[1][1])

    def __repr__(self):
        return "Mat2(%s)" % self.to_text()


def parse_matrix(text):
    """Parse '[[a,b],[c,d]]' with entries in canonical textual form."""
    text = text.strip()
    m = re.fullmatch(r"\[\[(.+?),(.+?)\],\[(.+?),(.+?)\]\]", text)
    if not m:
        raise ParseError("cannot parse matrix %r" % text)
    return Mat2.from_lists([[m.group(1), m.group(2)], [m.group(3), m.group(4)]])


def act(g, x):
    return g.act(x)


def classify(g):
    return g.classify()


def fixed_points(g):
    return g.fixed_points()


def derivative_at(g, x):
    return g.derivative_at(x)


def psl2_equal(g, h):
    return g.psl2_equal(h)


# -- circular arcs -------------------------------------------------------------

class Arc:
    """The arc swept from ``a`` to ``b`` in the positive (increasing)
    direction on the circle ``R ∪ {inf}``; endpoints distinct."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a, b = ProjectivePoint.of(a), ProjectivePoint.of(b)
        if a == b:
            raise ValueError("degenerate arc")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("Arc is immutable")

    def contains(self, x, closed=True):
        x = ProjectivePoint.of(x)
        if x == self.a or x == self.b:
            return closed
        a, b = self.a, self.b
        if a.is_infinity:
            return not x.is_infinity and x.value < b.value
        if b.is_infinity:
            return not x.is_infinity and x.value > a.value
        if x.is_infinity:
            return a.value > b.value
        if a.value < b.value:
            return a.value < x.value < b.value
        return x.value > a.value or x.value < b.value

    def image(self, g):
        """The image arc under an orientation-preserving Moebius map."""
        return Arc(g.act(self.a), g.act(self.b))

    def complement(self):
        """The complementary open arc (as an Arc with swapped endpoints)."""
        return Arc(self.b, self.a)

    def to_pair(self):
        return [self.a.to_text(), self.b.to_text()]

    @classmethod
    def from_pair(cls, pair):
        return cls(parse_projective_point(pair[0]), parse_projective_point(pair[1]))

    def __repr__(self):
        return "Arc(%s, %s)" % (self.a, self.b)

    def __eq__(self, other):
        if not isinstance(other, Arc):
            return NotImplemented
        return self.a == other.a and self.b == other.b


def rational_in_arc(a, b):
    """A deterministic rational strictly inside the open arc from a to b.

    Bounded arcs get the first dyadic above the left endpoint at the
    coarsest sufficient precision; arcs reaching or crossing infinity get
    the nearest integer step beyond the finite endpoint.
    """
    a, b = ProjectivePoint.of(a), ProjectivePoint.of(b)
    if a == b:
        raise ValueError("degenerate arc")
    if a.is_infinity:
        return qq(b.value.ceil() - 1)
    if b.is_infinity or a.value > b.value:
        return qq(a.value.floor() + 1)
    lo, hi = a.value, b.value
    scale = 1
    while True:
        num = (lo * scale).floor() + 1
        cand = qq(num, scale)
        if cand < hi:
            return cand
        scale <<= 1


# -- Gauss fundamental-domain reduction -----------------------------------------

class HalfPlanePoint:
    """Exact point x + y*i of the upper half-plane with rational x, y."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x, y = qq(x), qq(y)
        if y <= 0:
            raise NotInUpperHalfPlane("imaginary part must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("HalfPlanePoint is immutable")

    def norm_squared(self):
        return self.x * self.x + self.y * self.y

    def apply(self, m):
        """Exact image under an integer Moebius matrix."""
        a, b, c, d = (e.as_rational() for e in m.entries())
        u = c * self.x + d
        n = u * u + c * c * self.y * self.y
        return HalfPlanePoint(((a * self.x + b) * u + a * c * self.y * self.y) / n,
                              self.y / n)

    def __eq__(self, other):
        if not isinstance(other, HalfPlanePoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def to_text(self):
        return "%s+%si" % (self.x, self.y)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return "HalfPlanePoint(%s)" % self.to_text()


_HALF = qq(1, 2)
_GAUSS_S = None  # built lazily to avoid import-order fuss


def parse_halfplane_point(text):
    """Parse 'a/b+c/di' (Gaussian rational with positive imaginary part)."""
    m = re.fullmatch(
        r"(?P<re>[+-]?\d+(?:/\d+)?)(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i",
        text.strip().replace(" ", ""),
    )
    if not m:
        raise ParseError("cannot parse half-plane point %r" % text)
    x = m.group("re")
    y = m.group("im")
    if "/" in x:
        xn, xd = x.split("/")
        xq = qq(int(xn), int(xd))
    else:
        xq = qq(int(x))
    if "/" in y:
        yn, yd = y.split("/")
        yq = qq(int(yn), int(yd))
    else:
        yq = qq(int(y))
    if m.group("sign") == "-":
        yq = -yq
    try:
        return HalfPlanePoint(xq, yq)
    except NotInUpperHalfPlane:
        raise


def reduce_to_gauss_domain(z):
    """Move an exact upper-half-plane point into |Re| <= 1/2, |z| >= 1.

    Returns ``(m, w)`` with ``m`` in SL2(Z) and ``w = m(z)`` in the closed
    fundamental domain.  Alternates the integer translation that lands the
    real part in (-1/2, 1/2] with the inversion z -> -1/z; points already in
    the closed domain are returned unmoved.
    """
    if not isinstance(z, HalfPlanePoint):
        raise NotInUpperHalfPlane("expected a HalfPlanePoint")
    inversion = Mat2(0, -1, 1, 0)
    m = Mat2.identity()
    while not (abs(z.x) <= _HALF and z.norm_squared() >= 1):
        n = qq_ceil(z.x - _HALF)
        if n != 0:
            t = Mat2.translation(-n)
            z = z.apply(t)
            m = t * m
        if z.norm_squared() < 1:
            z = z.apply(inversion)
            m = inversion * m
    return m, z
