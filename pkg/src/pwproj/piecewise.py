"""Piecewise-projective homeomorphisms of the real line.

A :class:`PwpMap` is a strictly increasing bijection of the reals given by
finitely many determinant-one Moebius pieces.  Construction always goes
through :func:`validate`, which checks continuity, pole placement and global
bijectivity, merges adjacent pieces that agree in PSL2 (so every stored
breakpoint is genuine) and sign-normalizes the matrices, making the stored
form canonical.

Composition follows the chain rule for local projective parts: the piece of
``h o g`` at ``x`` is the piece of ``h`` at ``g(x)`` times the piece of
``g`` at ``x``.
"""

import enum
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from ._backend import qq
from .errors import (
    AtBreakpointWithoutSide,
    DiscontinuousAtBreakpoint,
    EmptyPrimeSet,
    NotABreakpoint,
    NotBijective,
    NotIncreasing,
    ParseError,
    PoleInsidePiece,
)
from .exactnum import AlgebraicReal, as_algebraic, in_ring_algebraic, parse_number
from .moebius import Mat2, MoebiusClass, ProjectivePoint


class SmoothnessClass(enum.Enum):
    C0 = "C0"
    C1 = "C1"
    PROJECTIVE = "projective"


class PwpMap:
    """Sorted breakpoints plus one matrix per piece; built via validate()."""

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints, pieces):
        object.__setattr__(self, "breakpoints", tuple(breakpoints))
        object.__setattr__(self, "pieces", tuple(pieces))

    def __setattr__(self, name, value):
        raise AttributeError("PwpMap is immutable")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def identity(cls):
        return validate([], [Mat2.identity()])

    @classmethod
    def translation(cls, n):
        return validate([], [Mat2.translation(n)])

    @classmethod
    def global_map(cls, mat):
        """A single affine piece covering the whole line."""
        return validate([], [mat])

    # -- basic queries -----------------------------------------------------------

    def __call__(self, x):
        """Exact value at a finite point."""
        x = as_algebraic(x)
        return self.pieces[bisect_right(self.breakpoints, x)].act_real(x)

    def piece_interval(self, i):
        """(left, right) endpoints of piece i, None at the unbounded ends."""
        left = self.breakpoints[i - 1] if i > 0 else None
        right = self.breakpoints[i] if i < len(self.breakpoints) else None
        return left, right

    def is_identity(self):
        return not self.breakpoints and self.pieces[0].is_identity_psl2()

    def fixes_infinity_projectively(self):
        """True when the two unbounded germs agree, i.e. the map extends
        projectively across infinity on the circle."""
        return self.pieces[0].psl2_equal(self.pieces[-1])

    def __eq__(self, other):
        if not isinstance(other, PwpMap):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.breakpoints, self.pieces))

    def __repr__(self):
        return "PwpMap(%d breakpoints)" % len(self.breakpoints)

    # -- group structure -----------------------------------------------------------

    def compose(self, other):
        """self o other, with pulled-back breakpoint candidates pruned."""
        other_inv = other.invert()
        candidates = list(other.breakpoints)
        candidates.extend(other_inv(b) for b in self.breakpoints)
        candidates.sort()
        dedup = []
        for c in candidates:
            if not dedup or dedup[-1] != c:
                dedup.append(c)
        pieces = []
        for i in range(len(dedup) + 1):
            if i == 0:
                g_idx = 0
                h_idx = 0
            else:
                left = dedup[i - 1]
                g_idx = bisect_right(other.breakpoints, left)
                value = other.pieces[g_idx].act_real(left)
                h_idx = bisect_right(self.breakpoints, value)
            pieces.append(self.pieces[h_idx] * other.pieces[g_idx])
        return validate(dedup, pieces)

    def __mul__(self, other):
        if not isinstance(other, PwpMap):
            return NotImplemented
        return self.compose(other)

    def invert(self):
        new_bps = [self(b) for b in self.breakpoints]
        new_pieces = [p.inverse() for p in self.pieces]
        return validate(new_bps, new_pieces)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        k = abs(k)
        result = PwpMap.identity()
        for _ in range(k):
            result = result.compose(base)
        return result

    # -- local structure -------------------------------------------------------------

    def projective_part(self, x, side=None):
        """The PSL2 representative describing the map near ``x``.

        At a breakpoint (or at infinity when the two unbounded germs differ)
        a side flag 'left' or 'right' is required.
        """
        x = ProjectivePoint.of(x)
        if x.is_infinity:
            if self.fixes_infinity_projectively():
                return self.pieces[0].psl2_canonical()
            if side == "left":
                return self.pieces[-1].psl2_canonical()
            if side == "right":
                return self.pieces[0].psl2_canonical()
            raise AtBreakpointWithoutSide("map breaks at infinity; pass side=")
        v = x.value
        lo = bisect_left(self.breakpoints, v)
        hi = bisect_right(self.breakpoints, v)
        if lo != hi:
            if side == "left":
                return self.pieces[lo].psl2_canonical()
            if side == "right":
                return self.pieces[hi].psl2_canonical()
            raise AtBreakpointWithoutSide("%s is a breakpoint; pass side=" % v)
        return self.pieces[hi].psl2_canonical()

    def smoothness(self):
        """Per breakpoint: C0, C1 (one-sided derivatives agree) or projective."""
        report = []
        for j, b in enumerate(self.breakpoints):
            left, right = self.pieces[j], self.pieces[j + 1]
            if left.psl2_equal(right):
                report.append((b, SmoothnessClass.PROJECTIVE))
                continue
            dl = left.c * b + left.d
            dr = right.c * b + right.d
            cls = SmoothnessClass.C1 if dl * dl == dr * dr else SmoothnessClass.C0
            report.append((b, cls))
        return report

    def is_c1(self):
        return all(cls is not SmoothnessClass.C0 for _, cls in self.smoothness())

    def ring_membership(self, ring):
        """True iff every piece matrix has all entries in the ring.

        A PSL2 class lies over the ring iff either sign representative does,
        since rings are closed under negation.
        """
        return all(
            in_ring_algebraic(e, ring) for p in self.pieces for e in p.entries()
        )

    def breakpoint_witness(self, x, primes):
        """A hyperbolic matrix over Z[1/S] fixing the given breakpoint.

        The transition (left piece)^-1 (right piece) fixes the breakpoint and
        is non-trivial, hence hyperbolic or parabolic.  Hyperbolic transitions
        are their own witness; parabolic ones force a rational breakpoint,
        fixed by a conjugate of diag(p, 1/p).
        """
        primes = frozenset(primes)
        if not primes:
            raise EmptyPrimeSet("need at least one prime")
        x = as_algebraic(x)
        idx = None
        for j, b in enumerate(self.breakpoints):
            if b == x:
                idx = j
                break
        if idx is None:
            raise NotABreakpoint("%s is not a breakpoint" % x)
        t = self.pieces[idx].inverse() * self.pieces[idx + 1]
        cls = t.classify()
        if cls is MoebiusClass.HYPERBOLIC:
            return BreakpointWitness(x, t, Mat2.identity())
        if cls is not MoebiusClass.PARABOLIC:
            raise NotABreakpoint("transition at %s is trivial" % x)
        if not x.is_rational:
            raise NotABreakpoint(
                "parabolic transition with irrational breakpoint %s" % x
            )
        p = min(primes)
        k = _conjugator_to(x.as_rational())
        m = k * Mat2.diagonal(qq(p)) * k.inverse()
        return BreakpointWitness(x, m, k)

    # -- serialization -----------------------------------------------------------------

    def to_json_obj(self):
        bounds = ["-inf"]
        bounds.extend(b.to_text() for b in self.breakpoints)
        bounds.append("+inf")
        return {
            "pieces": [
                {"left": bounds[i], "right": bounds[i + 1], "mat": p.to_lists()}
                for i, p in enumerate(self.pieces)
            ]
        }

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict) or "pieces" not in obj:
            raise ParseError("element must be an object with a 'pieces' list")
        raw = obj["pieces"]
        if not isinstance(raw, list) or not raw:
            raise ParseError("'pieces' must be a non-empty list")
        mats = []
        bps = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict) or not {"left", "right", "mat"} <= set(item):
                raise ParseError("piece %d must have left, right and mat" % i)
            mats.append(Mat2.from_lists(item["mat"]))
        if raw[0]["left"] != "-inf":
            raise ParseError("first piece must start at -inf")
        if raw[-1]["right"] != "+inf":
            raise ParseError("last piece must end at +inf")
        for i in range(len(raw) - 1):
            right = raw[i]["right"]
            left = raw[i + 1]["left"]
            if not isinstance(right, str) or right in ("-inf", "+inf"):
                raise ParseError("piece %d has a bad right endpoint" % i)
            b = parse_number(right)
            if not isinstance(left, str) or parse_number(left) != b:
                raise ParseError("pieces %d and %d are not contiguous" % (i, i + 1))
            bps.append(b)
        return validate(bps, mats)


@dataclass(frozen=True)
class BreakpointWitness:
    """Certificate that a breakpoint is fixed by a hyperbolic S-integral
    matrix; the conjugator is the identity unless the parabolic branch ran."""

    x: AlgebraicReal
    m: Mat2
    k: Mat2

    def to_json_obj(self):
        return {
            "breakpoint": self.x.to_text(),
            "witness": self.m.to_lists(),
            "conjugator": self.k.to_lists(),
        }


def _ext_gcd(a, b):
    """(g, u, v) with u*a + v*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_u, u = u, old_u - quot * u
        old_v, v = v, old_v - quot * v
    return old_r, old_u, old_v


def _conjugator_to(x):
    """An integer matrix k with det 1 and k(0) = x, chosen deterministically.

    Writing x = r/s in lowest terms (s > 0), k has second column (r, s) and
    first column the solution of p*s - q*r = 1 minimizing |q|, ties broken
    toward q >= 0.
    """
    r, s = int(x.numerator), int(x.denominator)
    g, u, v = _ext_gcd(s, r)
    if g < 0:
        g, u, v = -g, -u, -v
    assert g == 1
    p0, q0 = u, -v
    # nearest integer to -q0/s, exactly; the scan below absorbs ties
    t = (s - 2 * q0) // (2 * s)
    best = None
    for tt in (t - 1, t, t + 1):
        q = q0 + tt * s
        key = (abs(q), 0 if q >= 0 else 1)
        if best is None or key < best[0]:
            best = (key, tt)
    t = best[1]
    return Mat2(p0 + t * r, r, q0 + t * s, s)


def validate(breakpoints, pieces):
    """Check the homeomorphism invariants and return the canonical form.

    Raises NotIncreasing for unsorted breakpoints, NotBijective when an
    unbounded piece cannot carry the map to -inf/+inf (only affine germs
    can), PoleInsidePiece when a pole meets a closed piece interval, and
    DiscontinuousAtBreakpoint when adjacent pieces disagree.  Adjacent
    pieces equal in PSL2 are merged, so breakpoints of the result are
    genuine.
    """
    bps = [as_algebraic(b) for b in breakpoints]
    pieces = list(pieces)
    if len(pieces) != len(bps) + 1:
        raise ValueError("need exactly one more piece than breakpoints")
    for i in range(len(bps) - 1):
        if not bps[i] < bps[i + 1]:
            raise NotIncreasing("breakpoints out of order at index %d" % i)
    if not pieces[0].is_affine() or not pieces[-1].is_affine():
        raise NotBijective("unbounded pieces must fix infinity (affine germ)")
    for i, piece in enumerate(pieces):
        pole = piece.pole()
        if pole is None:
            continue
        if i == 0 or i == len(pieces) - 1:
            raise NotBijective("unbounded pieces must fix infinity (affine germ)")
        left, right = bps[i - 1], bps[i]
        if left <= pole <= right:
            raise PoleInsidePiece("piece %d has its pole at %s" % (i, pole))
    for j, b in enumerate(bps):
        lv = pieces[j].act_real(b)
        rv = pieces[j + 1].act_real(b)
        if lv != rv:
            raise DiscontinuousAtBreakpoint(
                "values %s and %s disagree at %s" % (lv, rv, b)
            )
    merged_bps = []
    merged_pieces = [pieces[0]]
    for j, b in enumerate(bps):
        nxt = pieces[j + 1]
        if merged_pieces[-1].psl2_equal(nxt):
            continue
        merged_bps.append(b)
        merged_pieces.append(nxt)
    return PwpMap(merged_bps, [p.psl2_canonical() for p in merged_pieces])


def compose(h, g):
    return h.compose(g)


def invert(h):
    return h.invert()


def projective_part(h, x, side=None):
    return h.projective_part(x, side)


def smoothness(h):
    return h.smoothness()


def ring_membership(h, ring):
    return h.ring_membership(ring)


def breakpoint_witness(h, x, primes):
    return h.breakpoint_witness(x, primes)
