"""Exact arithmetic over the rationals and real quadratic extensions.

Values are either exact rationals or quadratic surds ``r + s*sqrt(D)`` with
``r, s`` rational and ``D >= 2`` squarefree.  All arithmetic is exact; order
is decided without floating point, by algebraic equality tests followed by
adaptive dyadic interval refinement.

Also provides p-adic valuations, membership in the coefficient rings used
throughout the package (``Z``, ``Z[1/S]``, ``Q``, ``Z[sqrt(D)]``) and the
Galois conjugation ``sqrt(D) -> -sqrt(D)`` of a real quadratic field.
"""

import math
import re
from dataclasses import dataclass

from ._backend import QQ, ZERO, is_rational, isqrt, qq, qq_ceil, qq_floor
from .errors import (
    DivisionByZero,
    MixedRadicands,
    NotPrime,
    ParseError,
    SquareFactorTooLarge,
)

INFINITE_VALUATION = math.inf

# Trial-division bound for extracting square factors of radicands.
SQUARE_EXTRACTION_BOUND = 10 ** 6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime("not a prime: %r" % (p,))


def _int_valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(x, p):
    """v_p of an exact rational; ``math.inf`` for zero."""
    _check_prime(p)
    x = _as_qq(x)
    if x == 0:
        return INFINITE_VALUATION
    return _int_valuation(abs(int(x.numerator)), p) - _int_valuation(
        int(x.denominator), p
    )


def _as_qq(x):
    if isinstance(x, AlgebraicReal):
        return x.as_rational()
    if is_rational(x):
        return qq(x)
    raise TypeError("expected an exact rational, got %r" % (x,))


def split_square(m, bound=SQUARE_EXTRACTION_BOUND):
    """Write ``m = k**2 * core`` with ``core`` squarefree, by trial division.

    Square factors whose prime divisors all exceed ``bound`` cannot be found
    by trial division; if the undivided remainder is a perfect square we
    refuse rather than return a non-squarefree core.  A remainder that is
    neither 1, prime-sized nor a perfect square is assumed squarefree.
    """
    if m <= 0:
        raise ValueError("split_square needs a positive integer")
    k, core = 1, 1
    d = 2
    exhausted_by_size = True
    while d * d <= m:
        if d > bound:
            exhausted_by_size = False
            break
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            k *= d ** (e // 2)
            if e % 2:
                core *= d
        d += 1 if d == 2 else 2
    if m > 1:
        if not exhausted_by_size:
            r = isqrt(m)
            if r * r == m:
                raise SquareFactorTooLarge(
                    "square factor %d exceeds trial-division bound %d" % (r, bound)
                )
        core *= m
    return k, core


def sqrt_rational(q):
    """Exact square root of a nonnegative rational as an AlgebraicReal."""
    q = _as_qq(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return AlgebraicReal(ZERO)
    num, den = int(q.numerator), int(q.denominator)
    # sqrt(num/den) = sqrt(num*den)/den
    k, core = split_square(num * den)
    if core == 1:
        return AlgebraicReal(qq(k, den))
    return AlgebraicReal(ZERO, qq(k, den), core)


class AlgebraicReal:
    """Exact real number ``rat + surd*sqrt(d)``; ``d is None`` for rationals.

    Immutable; the radicand is stored only when the surd part is nonzero,
    so equal values always have equal representations.
    """

    __slots__ = ("rat", "surd", "d")

    def __init__(self, rat, surd=ZERO, d=None):
        rat = qq(rat)
        surd = qq(surd)
        if surd == 0:
            d = None
        else:
            if d is None:
                raise ValueError("nonzero surd part needs a radicand")
            if not isinstance(d, int) or d < 2:
                raise ValueError("radicand must be an integer >= 2")
            r = isqrt(d)
            if r * r == d:
                raise ValueError("radicand %d is a perfect square" % d)
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "surd", surd)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicReal is immutable")

    # -- representation ------------------------------------------------------

    @property
    def is_rational(self):
        return self.d is None

    def as_rational(self):
        if self.d is not None:
            raise MixedRadicands("value is irrational: %s" % self)
        return self.rat

    def to_text(self):
        if self.d is None:
            return str(self.rat)
        return "(%s)+(%s)*sqrt(%d)" % (self.rat, self.surd, self.d)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return "AlgebraicReal(%s)" % self.to_text()

    def __hash__(self):
        if self.d is None:
            return hash(self.rat)
        return hash((self.rat, self.surd, self.d))

    def __bool__(self):
        return self.rat != 0 or self.surd != 0

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, AlgebraicReal):
            return x
        if is_rational(x):
            return AlgebraicReal(qq(x))
        return None

    def _join_radicand(self, other):
        if self.d is None:
            return other.d
        if other.d is None or other.d == self.d:
            return self.d
        raise MixedRadicands(
            "cannot combine sqrt(%d) with sqrt(%d)" % (self.d, other.d)
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._join_radicand(other)
        return AlgebraicReal(self.rat + other.rat, self.surd + other.surd, d)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(-self.rat, -self.surd, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._join_radicand(other)
        if d is None:
            return AlgebraicReal(self.rat * other.rat)
        rat = self.rat * other.rat + self.surd * other.surd * d
        surd = self.rat * other.surd + self.surd * other.rat
        return AlgebraicReal(rat, surd, d)

    __rmul__ = __mul__

    def _inverse(self):
        if not self:
            raise DivisionByZero("division by zero")
        if self.d is None:
            return AlgebraicReal(1 / self.rat)
        # 1/(r + s*sqrt(d)) = (r - s*sqrt(d)) / (r^2 - s^2 d); the norm is
        # nonzero because sqrt(d) is irrational.
        norm = self.rat * self.rat - self.surd * self.surd * self.d
        return AlgebraicReal(self.rat / norm, -self.surd / norm, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other._inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self._inverse()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def galois_conjugate(self):
        """The image under sqrt(d) -> -sqrt(d); identity on rationals."""
        return AlgebraicReal(self.rat, -self.surd, self.d)

    # -- order ---------------------------------------------------------------

    def _dyadic_bounds(self, bits):
        """Exact rationals lo <= self <= hi with hi - lo <= |surd| * 2^-bits."""
        if self.d is None:
            return self.rat, self.rat
        n = isqrt(self.d << (2 * bits))
        scale = 1 << bits
        root_lo = qq(n, scale)
        root_hi = qq(n + 1, scale)
        if self.surd > 0:
            return self.rat + self.surd * root_lo, self.rat + self.surd * root_hi
        return self.rat + self.surd * root_hi, self.rat + self.surd * root_lo

    def sign(self):
        if self.rat == 0 and self.surd == 0:
            return 0
        bits = 64
        while True:
            lo, hi = self._dyadic_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        # Distinct squarefree radicands with nonzero surd parts never give
        # equal values, so equality is purely structural.
        return (
            self.rat == other.rat and self.surd == other.surd and self.d == other.d
        )

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return compare(self, other) < 0

    def __le__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return compare(self, other) <= 0

    def __gt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return compare(self, other) > 0

    def __ge__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return compare(self, other) >= 0

    def floor(self):
        """Exact integer floor."""
        if self.d is None:
            return qq_floor(self.rat)
        bits = 64
        while True:
            lo, hi = self._dyadic_bounds(bits)
            flo, fhi = qq_floor(lo), qq_floor(hi)
            if flo == fhi:
                return flo
            # A surd is never an integer, so the bounds eventually land in
            # the same unit interval.
            bits *= 2

    def ceil(self):
        if self.d is None:
            return qq_ceil(self.rat)
        return self.floor() + 1


def as_algebraic(x):
    """Coerce an int, backend rational or AlgebraicReal."""
    v = AlgebraicReal._coerce(x)
    if v is None:
        raise TypeError("cannot interpret %r as an exact real" % (x,))
    return v


def compare(x, y):
    """Exact total order: -1, 0 or +1.

    Equality is decided algebraically; strict order by dyadic interval
    refinement starting at 64 fractional bits and doubling until the two
    intervals separate, which happens because the difference is nonzero.
    """
    x, y = as_algebraic(x), as_algebraic(y)
    if x == y:
        return 0
    if x.d == y.d:
        return (x - y).sign()
    bits = 64
    while True:
        xlo, xhi = x._dyadic_bounds(bits)
        ylo, yhi = y._dyadic_bounds(bits)
        if xhi < ylo:
            return -1
        if xlo > yhi:
            return 1
        bits *= 2


_OP_TABLE = {
    "+": AlgebraicReal.__add__,
    "-": AlgebraicReal.__sub__,
    "−": AlgebraicReal.__sub__,
    "*": AlgebraicReal.__mul__,
    "×": AlgebraicReal.__mul__,
    "/": AlgebraicReal.__truediv__,
    "÷": AlgebraicReal.__truediv__,
}


def arith(x, y, op):
    """Apply one of ``+ - * /`` to two exact reals."""
    fn = _OP_TABLE.get(op)
    if fn is None:
        raise ValueError("unknown operation %r" % op)
    return fn(as_algebraic(x), as_algebraic(y))


# -- coefficient rings --------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    """Descriptor of a coefficient ring: Z, Z[1/S], Q or Z[sqrt(D)]."""

    kind: str  # "Z" | "Z_S" | "Q" | "Z_sqrt"
    primes: frozenset = frozenset()
    d: int = 0

    @classmethod
    def integers(cls):
        return cls("Z")

    @classmethod
    def s_integers(cls, primes):
        primes = frozenset(primes)
        for p in primes:
            _check_prime(p)
        if not primes:
            return cls.integers()
        return cls("Z_S", primes=primes)

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def quadratic_order(cls, d):
        if not isinstance(d, int) or d < 2:
            raise ValueError("radicand must be an integer >= 2")
        r = isqrt(d)
        if r * r == d:
            raise ValueError("radicand %d is a perfect square" % d)
        return cls("Z_sqrt", d=d)

    def to_text(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        if self.kind == "Z_S":
            return "Z[%s]" % ",".join("1/%d" % p for p in sorted(self.primes))
        return "Z[sqrt(%d)]" % self.d

    def __str__(self):
        return self.to_text()

    @classmethod
    def from_text(cls, text):
        text = text.strip()
        if text == "Z":
            return cls.integers()
        if text == "Q":
            return cls.rationals()
        m = re.fullmatch(r"Z\[sqrt\((\d+)\)\]", text)
        if m:
            try:
                return cls.quadratic_order(int(m.group(1)))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        m = re.fullmatch(r"Z\[((?:1/\d+)(?:,1/\d+)*)\]", text.replace(" ", ""))
        if m:
            primes = [int(part[2:]) for part in m.group(1).split(",")]
            try:
                return cls.s_integers(primes)
            except NotPrime as exc:
                raise ParseError(str(exc)) from exc
        raise ParseError("cannot parse ring %r" % text)


def in_ring(x, ring):
    """Membership of an exact rational in Z, Z[1/S] or Q."""
    if ring.kind == "Q":
        _as_qq(x)
        return True
    if ring.kind == "Z_sqrt":
        raise ValueError("in_ring over a quadratic order needs in_ring_algebraic")
    x = _as_qq(x)
    den = int(x.denominator)
    if ring.kind == "Z":
        return den == 1
    for p in ring.primes:
        while den % p == 0:
            den //= p
    return den == 1


def in_ring_algebraic(x, ring):
    """Membership of an AlgebraicReal in any RingSpec."""
    x = as_algebraic(x)
    if ring.kind == "Z_sqrt":
        if x.d not in (None, ring.d):
            return False
        return int(x.rat.denominator) == 1 and int(x.surd.denominator) == 1
    if not x.is_rational:
        return False
    return in_ring(x.rat, ring)


def galois_conjugate(x):
    return as_algebraic(x).galois_conjugate()


# -- textual forms ------------------------------------------------------------

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")
_SURD_RE = re.compile(
    r"\((?P<rat>[+-]?\d+(?:/\d+)?)\)\+\((?P<surd>[+-]?\d+(?:/\d+)?)\)"
    r"\*sqrt\((?P<d>\d+)\)"
)


def _parse_qq(text):
    if "/" in text:
        num, den = text.split("/", 1)
        den_i = int(den)
        if den_i == 0:
            raise ParseError("zero denominator in %r" % text)
        return qq(int(num), den_i)
    return qq(int(text))


def parse_number(text):
    """Parse the canonical textual forms 'a/b' and '(a/b)+(c/d)*sqrt(D)'."""
    text = text.strip()
    m = _RATIONAL_RE.fullmatch(text)
    if m:
        return AlgebraicReal(_parse_qq(text))
    m = _SURD_RE.fullmatch(text)
    if m:
        surd = _parse_qq(m.group("surd"))
        d = int(m.group("d"))
        if surd == 0:
            return AlgebraicReal(_parse_qq(m.group("rat")))
        try:
            return AlgebraicReal(_parse_qq(m.group("rat")), surd, d)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError("cannot parse number %r" % text)


def format_number(x):
    return as_algebraic(x).to_text()
