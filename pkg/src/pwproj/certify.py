"""Finite certificates behind the fixed-point arguments.

The p-adic side works at finite ball depth: the projective line over the
p-adics is partitioned into the p^k + p^(k-1) residue balls of depth k, the
invariant (Haar) measure is uniform on them, and any determinant-one
rational matrix pushes that measure forward exactly, via a Cartan
decomposition k1 * diag(p^m, p^-m) * k2 with p-integral k1, k2: the two
outer factors permute balls, the diagonal factor redistributes valuation
shells.

gap_witness packages the one-sided separation between two coefficient
rings: every supplied generator over Z[1/S] is p-integral for a prime p
outside S (so it fixes the canonical Haar point), while the scaling map
diag(p, 1/p) visibly moves that point.  north_south_certificate and
schottky_certificate are the classical contraction and ping-pong data, with
every interval inclusion checked in exact arithmetic.
"""

import math
from dataclasses import dataclass

from ._backend import QQ, qq
from .errors import (
    DepthTooShallow,
    GeneratorOutsideRing,
    IntervalHitsFixedPoint,
    NoSeparatingPrime,
    NotPrime,
    ParseError,
    SharedFixedPoint,
)
from .exactnum import (
    RingSpec,
    as_algebraic,
    is_prime,
)
from .moebius import (
    Arc,
    INFINITY,
    Mat2,
    MoebiusClass,
    ProjectivePoint,
    parse_projective_point,
    rational_in_arc,
)
from .piecewise import PwpMap

_POWER_LIMIT = 10 ** 4


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime("not a prime: %r" % (p,))


def _vp(q, p):
    """Valuation of an exact rational at p; inf for zero."""
    if q == 0:
        return math.inf
    num = abs(int(q.numerator))
    den = int(q.denominator)
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    w = 0
    while den % p == 0:
        den //= p
        w += 1
    return v - w


def in_psl2_zp(g, p):
    """True iff the PSL2 class of g lies in PSL2(Z_p), i.e. all four
    entry valuations are nonnegative (both sign representatives agree)."""
    _check_prime(p)
    return all(_vp(e.as_rational(), p) >= 0 for e in g.entries())


def cartan_decompose(g, p):
    """(k1, diag(p^m, p^-m), k2) with k1, k2 p-integral and det 1, m >= 0.

    Valuation-pivoted row/column reduction over the localization of Z at p;
    the product re-multiplies to g exactly.
    """
    k1, m, k2 = _cartan(g, p)
    return k1, Mat2.diagonal(qq(p) ** m), k2


def _cartan(g, p):
    _check_prime(p)
    vals = [_vp(e.as_rational(), p) for e in g.entries()]
    m = -min(vals)
    if m <= 0:
        # det 1 forces some entry valuation <= 0, so m == 0 here
        return g, 0, Mat2.identity()
    swap = Mat2(0, -1, 1, 0)
    current = g
    left_inv = Mat2.identity()   # g == left_inv * current * right_inv
    right_inv = Mat2.identity()
    order = [(0, "a"), (1, "b"), (2, "c"), (3, "d")]
    pivot = next(i for i, _ in order if vals[i] == -m)
    if pivot >= 2:  # pivot in the bottom row
        current = swap * current
        left_inv = left_inv * swap.inverse()
        pivot -= 2
    if pivot == 1:  # pivot in the right column
        current = current * swap
        right_inv = swap.inverse() * right_inv
    if current.c != as_algebraic(0):
        f = current.c / current.a
        e = Mat2(1, 0, -f, 1)
        current = e * current
        left_inv = left_inv * e.inverse()
    if current.b != as_algebraic(0):
        f = current.b / current.a
        e = Mat2(1, -f, 0, 1)
        current = current * e
        right_inv = e.inverse() * right_inv
    d0 = current.a.as_rational()
    unit = d0 * qq(p) ** m
    k1 = left_inv * Mat2.diagonal(unit) * swap
    k2 = swap.inverse() * right_inv
    if k1 != k1.psl2_canonical():
        k1, k2 = -k1, -k2
    return k1, m, k2


# -- ball measures --------------------------------------------------------------

class BallMeasure:
    """Exact rational masses on the depth-k residue balls of the p-adic
    projective line; masses sum to one."""

    __slots__ = ("p", "depth", "masses")

    def __init__(self, p, depth, masses):
        _check_prime(p)
        if depth < 1:
            raise ValueError("depth must be >= 1")
        expected = set(_labels(p, depth))
        if set(masses) != expected:
            raise ValueError("mass assignment must cover every ball exactly once")
        total = qq(0)
        for v in masses.values():
            if v < 0:
                raise ValueError("masses must be nonnegative")
            total += v
        if total != 1:
            raise ValueError("masses must sum to 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "masses", dict(masses))

    def __setattr__(self, name, value):
        raise AttributeError("BallMeasure is immutable")

    @classmethod
    def uniform(cls, p, depth):
        count = p ** depth + p ** (depth - 1)
        w = qq(1, count)
        return cls(p, depth, {lab: w for lab in _labels(p, depth)})

    def is_uniform(self):
        count = self.p ** self.depth + self.p ** (self.depth - 1)
        w = qq(1, count)
        return all(v == w for v in self.masses.values())

    def permute(self, mat):
        """Pushforward under a p-integral matrix (a ball permutation)."""
        abcd = _mat_mod(mat, self.p, self.depth)
        out = {}
        for lab, mass in self.masses.items():
            out[_act_label(abcd, lab, self.p, self.depth)] = mass
        if len(out) != len(self.masses):
            raise AssertionError("ball action was not a permutation")
        return BallMeasure(self.p, self.depth, out)

    def __eq__(self, other):
        if not isinstance(other, BallMeasure):
            return NotImplemented
        return (
            self.p == other.p
            and self.depth == other.depth
            and self.masses == other.masses
        )

    def label_text(self, lab):
        if lab[0] == "fin":
            return "[%d:1]" % lab[1]
        return "[1:%d]" % (self.p * lab[1])

    def to_json_obj(self):
        ordered = {}
        for lab in _labels(self.p, self.depth):
            ordered[self.label_text(lab)] = str(self.masses[lab])
        return {"p": self.p, "depth": self.depth, "masses": ordered}

    @classmethod
    def from_json_obj(cls, obj):
        try:
            p, depth = int(obj["p"]), int(obj["depth"])
            raw = obj["masses"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("bad ball measure document") from exc
        masses = {}
        for text, mass in raw.items():
            masses[_parse_label(text, p, depth)] = _parse_qq_text(mass)
        try:
            return cls(p, depth, masses)
        except (ValueError, NotPrime) as exc:
            raise ParseError(str(exc)) from exc

    def __repr__(self):
        return "BallMeasure(p=%d, depth=%d)" % (self.p, self.depth)


def _labels(p, depth):
    for x in range(p ** depth):
        yield ("fin", x)
    for y in range(p ** (depth - 1)):
        yield ("inf", y)


def _parse_label(text, p, depth):
    import re

    m = re.fullmatch(r"\[(\d+):1\]", text)
    if m:
        x = int(m.group(1))
        if x < p ** depth:
            return ("fin", x)
    m = re.fullmatch(r"\[1:(\d+)\]", text)
    if m:
        z = int(m.group(1))
        if z % p == 0 and z < p ** depth:
            return ("inf", z // p)
    raise ParseError("bad ball label %r" % text)


def _parse_qq_text(text):
    if not isinstance(text, str):
        raise ParseError("masses must be strings")
    if "/" in text:
        num, den = text.split("/", 1)
        return qq(int(num), int(den))
    return qq(int(text))


def _mat_mod(mat, p, depth):
    pk = p ** depth
    out = []
    for e in mat.entries():
        q = e.as_rational()
        num, den = int(q.numerator), int(q.denominator)
        if den % p == 0:
            raise ValueError("matrix is not p-integral")
        out.append(num * pow(den, -1, pk) % pk)
    return out


def _act_label(abcd, lab, p, depth):
    a, b, c, d = abcd
    pk = p ** depth
    if lab[0] == "fin":
        u, v = lab[1], 1
    else:
        u, v = 1, (p * lab[1]) % pk
    u2 = (a * u + b * v) % pk
    v2 = (c * u + d * v) % pk
    if v2 % p != 0:
        return ("fin", u2 * pow(v2, -1, pk) % pk)
    w = v2 * pow(u2, -1, pk) % pk
    return ("inf", w // p)


def _disk_mass(center, radius_exponent, p):
    """Haar mass of the disk {z : v(z - center) >= radius_exponent}.

    Derived from the shell masses mu{v = s} = p^-|s| (p-1)/(p+1) of the
    ball-uniform measure, using inversion invariance for disks living in
    negative-valuation shells.
    """
    r = radius_exponent
    s = _vp(center, p)
    if s >= r:
        if r >= 1:
            return qq(p) ** (1 - r) / (p + 1)
        return 1 - qq(p) ** r / (p + 1)
    e = min(s, 0)
    return qq(p) ** (1 - r + 2 * e) / (p + 1)


def pushforward_haar(g, p, depth):
    """Exact image of the uniform depth-k measure under g.

    Needs depth >= the Cartan exponent m of g (and >= 1); each depth-k ball
    then pulls back to a genuine p-adic disk whose mass the shell formula
    gives exactly.
    """
    _check_prime(p)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    k1, m, _k2 = _cartan(g, p)
    if depth < m:
        raise DepthTooShallow("depth %d < Cartan exponent %d" % (depth, m))
    if m == 0:
        return BallMeasure.uniform(p, depth)
    big = 2 * m
    masses = {}
    for x in range(p ** depth):
        masses[("fin", x)] = _disk_mass(qq(x, p ** big), depth - big, p)
    for y in range(p ** (depth - 1)):
        masses[("inf", y)] = _disk_mass(qq(p ** (big + 1) * y), depth + big, p)
    base = BallMeasure(p, depth, masses)
    return base.permute(k1)


# -- amenability-gap witnesses ----------------------------------------------------

@dataclass(frozen=True)
class GapWitness:
    """One-sided separation certificate between Z[1/S] and Z[1/S'].

    Every piece matrix of every generator is p-integral for the separating
    prime p (the fixed side), while diag(p, 1/p) moves the uniform measure
    (the moving side).  The certificate re-verifies from its serialization.
    """

    s_primes: frozenset
    s2_primes: frozenset
    p: int
    generators: tuple
    piece_matrices: tuple  # ((generator index, piece index, Mat2), ...)
    moving_element: PwpMap
    moved_measure: BallMeasure

    def to_json_obj(self):
        return {
            "S": sorted(self.s_primes),
            "S2": sorted(self.s2_primes),
            "p": self.p,
            "generators": [g.to_json_obj() for g in self.generators],
            "fixed_side_checks": [
                {
                    "generator": gi,
                    "piece": pi,
                    "mat": mat.to_lists(),
                    "in_psl2_zp": True,
                }
                for gi, pi, mat in self.piece_matrices
            ],
            "moving_element": self.moving_element.to_json_obj(),
            "moved_measure": self.moved_measure.to_json_obj(),
        }


def gap_witness(s_primes, s2_primes, generators):
    """Build the separation certificate for S strictly growing to S'."""
    s_primes = frozenset(s_primes)
    s2_primes = frozenset(s2_primes)
    for q in s_primes | s2_primes:
        _check_prime(q)
    extra = s2_primes - s_primes
    if not extra:
        raise NoSeparatingPrime("S' adds no prime beyond S")
    p = min(extra)
    ring = RingSpec.s_integers(s_primes)
    piece_matrices = []
    for gi, gen in enumerate(generators):
        if not gen.ring_membership(ring):
            raise GeneratorOutsideRing(
                "generator %d has a coefficient outside %s" % (gi, ring)
            )
        for pi, mat in enumerate(gen.pieces):
            if not in_psl2_zp(mat, p):
                raise GeneratorOutsideRing(
                    "generator %d piece %d is not %d-integral" % (gi, pi, p)
                )
            piece_matrices.append((gi, pi, mat))
    moving_mat = Mat2.diagonal(qq(p))
    moved = pushforward_haar(moving_mat, p, 1)
    if moved.is_uniform():
        raise AssertionError("scaling by p^2 must move the uniform measure")
    return GapWitness(
        s_primes,
        s2_primes,
        p,
        tuple(generators),
        tuple(piece_matrices),
        PwpMap.global_map(moving_mat),
        moved,
    )


def verify_gap_witness(obj):
    """Re-run every sub-check of a serialized GapWitness."""
    try:
        s_primes = frozenset(int(q) for q in obj["S"])
        s2_primes = frozenset(int(q) for q in obj["S2"])
        p = int(obj["p"])
        gens = [PwpMap.from_json_obj(g) for g in obj["generators"]]
        checks = obj["fixed_side_checks"]
        moving = PwpMap.from_json_obj(obj["moving_element"])
        moved = BallMeasure.from_json_obj(obj["moved_measure"])
    except (KeyError, TypeError) as exc:
        raise ParseError("bad gap witness document") from exc
    extra = s2_primes - s_primes
    if not extra or p != min(extra):
        return False
    ring = RingSpec.s_integers(s_primes)
    if not all(g.ring_membership(ring) for g in gens):
        return False
    recorded = {(c["generator"], c["piece"]) for c in checks}
    for gi, g in enumerate(gens):
        for pi, mat in enumerate(g.pieces):
            if (gi, pi) not in recorded or not in_psl2_zp(mat, p):
                return False
    for c in checks:
        mat = Mat2.from_lists(c["mat"])
        if not in_psl2_zp(mat, p):
            return False
    if moving != PwpMap.global_map(Mat2.diagonal(qq(p))):
        return False
    if moved != pushforward_haar(Mat2.diagonal(qq(p)), p, 1):
        return False
    return not moved.is_uniform()


# -- dynamics certificates ---------------------------------------------------------

def north_south_certificate(g, interval, neighborhood, power_limit=_POWER_LIMIT):
    """Least k >= 1 with g^k(interval) inside the open target arc.

    The interval is a closed real interval (lo, hi) avoiding both fixed
    points; the target is an Arc containing the attracting point.  Endpoint
    iteration is exact; a witness point in the complement of the target
    certifies that image arcs do not wrap around the circle.
    """
    if g.classify() is not MoebiusClass.HYPERBOLIC:
        raise ValueError("north-south dynamics needs a hyperbolic matrix")
    att, rep = g.hyperbolic_axis()
    lo, hi = as_algebraic(interval[0]), as_algebraic(interval[1])
    if hi < lo:
        raise ValueError("interval endpoints out of order")
    for fp in (att, rep):
        if not fp.is_infinity and lo <= fp.value <= hi:
            raise IntervalHitsFixedPoint("fixed point %s meets the interval" % fp)
    if not neighborhood.contains(att, closed=False):
        raise ValueError("the target must contain the attracting fixed point")
    witness = rational_in_arc(neighborhood.b, neighborhood.a)
    a_pt, b_pt = ProjectivePoint.of(lo), ProjectivePoint.of(hi)
    for k in range(1, power_limit + 1):
        a_pt, b_pt = g.act(a_pt), g.act(b_pt)
        if not neighborhood.contains(a_pt, closed=False):
            continue
        if not neighborhood.contains(b_pt, closed=False):
            continue
        if a_pt != b_pt and Arc(a_pt, b_pt).contains(witness, closed=True):
            continue
        return k
    raise AssertionError("no contraction below the power limit")


@dataclass(frozen=True)
class InclusionCheck:
    """One verified inclusion g^(sign*k)(complement of source) inside target."""

    generator: str
    sign: int
    power_matrix: Mat2
    source: str
    target: str
    image: Arc
    witness: ProjectivePoint

    def to_json_obj(self):
        return {
            "generator": self.generator,
            "sign": self.sign,
            "power_matrix": self.power_matrix.to_lists(),
            "source_complement_of": self.source,
            "target": self.target,
            "image": self.image.to_pair(),
            "witness_outside_target": self.witness.to_text(),
            "holds": True,
        }


_U_NAMES = ("U1_plus", "U1_minus", "U2_plus", "U2_minus")


@dataclass(frozen=True)
class PingPongCertificate:
    """Interval data proving <g1^k, g2^k> free of rank two."""

    g1: Mat2
    g2: Mat2
    power: int
    fixed_points: dict  # name -> ProjectivePoint, names as in _U_NAMES
    neighborhoods: dict  # name -> Arc
    inclusions: tuple
    base_point: ProjectivePoint

    def letter_matrices(self):
        """Word letters: 1, -1 are g1^(+-k); 2, -2 are g2^(+-k)."""
        a = self.g1 ** self.power
        b = self.g2 ** self.power
        return {1: a, -1: a.inverse(), 2: b, -2: b.inverse()}

    def to_json_obj(self):
        return {
            "g1": self.g1.to_lists(),
            "g2": self.g2.to_lists(),
            "k": self.power,
            "fixed_points": {
                name: self.fixed_points[name].to_text() for name in _U_NAMES
            },
            "intervals": {
                name: self.neighborhoods[name].to_pair() for name in _U_NAMES
            },
            "inclusions": [inc.to_json_obj() for inc in self.inclusions],
            "base_point": self.base_point.to_text(),
        }


def schottky_certificate(g1, g2, shrink=0, power_limit=_POWER_LIMIT):
    """Disjoint rational neighborhoods of the four fixed points plus the
    least common power k making all ping-pong inclusions hold exactly.

    ``shrink`` tightens every separator that many extra steps toward its
    fixed point, giving nested smaller neighborhoods (and larger k)."""
    for g in (g1, g2):
        if g.classify() is not MoebiusClass.HYPERBOLIC:
            raise ValueError("both matrices must be hyperbolic")
    att1, rep1 = g1.hyperbolic_axis()
    att2, rep2 = g2.hyperbolic_axis()
    points = [att1, rep1, att2, rep2]
    for i in range(4):
        for j in range(i + 1, 4):
            if points[i] == points[j]:
                raise SharedFixedPoint("fixed-point sets are not disjoint")
    finite = sorted((pt for pt in points if not pt.is_infinity),
                    key=lambda pt: pt.value)
    ordered = list(finite)
    if len(finite) < 4:
        ordered.append(INFINITY)
    # two rational separators inside each gap between cyclically consecutive
    # fixed points; U(point) spans from the previous gap's outer separator
    # to the next gap's inner separator
    inner = []
    outer = []
    for i in range(4):
        lo_pt, hi_pt = ordered[i], ordered[(i + 1) % 4]
        s_lo = ProjectivePoint.of(rational_in_arc(lo_pt, hi_pt))
        s_hi = ProjectivePoint.of(rational_in_arc(s_lo, hi_pt))
        for _ in range(shrink):
            s_lo = ProjectivePoint.of(rational_in_arc(lo_pt, s_lo))
            s_hi = ProjectivePoint.of(rational_in_arc(s_hi, hi_pt))
        inner.append(s_lo)
        outer.append(s_hi)
    neighborhoods = {}
    fixed_names = {}
    for i, pt in enumerate(ordered):
        arc = Arc(outer[(i - 1) % 4], inner[i])
        for name, fp in (
            ("U1_plus", att1),
            ("U1_minus", rep1),
            ("U2_plus", att2),
            ("U2_minus", rep2),
        ):
            if pt == fp:
                neighborhoods[name] = arc
                fixed_names[name] = pt
    opposite = {}
    for name in _U_NAMES:
        pt = fixed_names[name]
        idx = next(i for i, q in enumerate(ordered) if q == pt)
        opposite[name] = ordered[(idx + 2) % 4]
    base_point = ProjectivePoint.of(rational_in_arc(inner[0], outer[0]))

    plan = [
        ("g1", 1, "U1_minus", "U1_plus"),
        ("g1", -1, "U1_plus", "U1_minus"),
        ("g2", 1, "U2_minus", "U2_plus"),
        ("g2", -1, "U2_plus", "U2_minus"),
    ]
    mats = {"g1": g1, "g2": g2}
    powers = {
        ("g1", 1): Mat2.identity(),
        ("g1", -1): Mat2.identity(),
        ("g2", 1): Mat2.identity(),
        ("g2", -1): Mat2.identity(),
    }
    for k in range(1, power_limit + 1):
        for gen, sign in powers:
            step = mats[gen] if sign > 0 else mats[gen].inverse()
            powers[(gen, sign)] = powers[(gen, sign)] * step
        inclusions = []
        for gen, sign, source, target in plan:
            mat = powers[(gen, sign)]
            image = neighborhoods[source].complement().image(mat)
            tgt = neighborhoods[target]
            wit = opposite[target]
            if not (tgt.contains(image.a) and tgt.contains(image.b)):
                break
            if image.contains(wit):
                break
            inclusions.append(
                InclusionCheck(gen, sign, mat, source, target, image, wit)
            )
        else:
            return PingPongCertificate(
                g1, g2, k, fixed_names, neighborhoods,
                tuple(inclusions), base_point,
            )
    raise AssertionError("no common power below the limit")


def verify_pingpong(obj):
    """Re-run every sub-check of a serialized PingPongCertificate."""
    try:
        g1 = Mat2.from_lists(obj["g1"])
        g2 = Mat2.from_lists(obj["g2"])
        k = int(obj["k"])
        fixed = {
            name: parse_projective_point(obj["fixed_points"][name])
            for name in _U_NAMES
        }
        arcs = {name: Arc.from_pair(obj["intervals"][name]) for name in _U_NAMES}
        inclusions = obj["inclusions"]
        base = parse_projective_point(obj["base_point"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad ping-pong certificate") from exc
    if k < 1 or len(inclusions) != 4:
        return False
    mats = {"g1": g1, "g2": g2}
    for name, g in (("U1", g1), ("U2", g2)):
        att, rep = g.hyperbolic_axis()
        if fixed[name + "_plus"] != att or fixed[name + "_minus"] != rep:
            return False
    for name in _U_NAMES:
        if not arcs[name].contains(fixed[name], closed=False):
            return False
    names = list(_U_NAMES)
    for i in range(4):
        for j in range(i + 1, 4):
            a, b = arcs[names[i]], arcs[names[j]]
            if (
                a.contains(b.a) or a.contains(b.b)
                or b.contains(a.a) or b.contains(a.b)
            ):
                return False
    for name in _U_NAMES:
        if arcs[name].contains(base):
            return False
    seen = set()
    for inc in inclusions:
        gen = inc["generator"]
        sign = int(inc["sign"])
        source = inc["source_complement_of"]
        target = inc["target"]
        seen.add((gen, sign))
        mat = Mat2.from_lists(inc["power_matrix"])
        if mat != mats[gen] ** (sign * k):
            return False
        image = arcs[source].complement().image(mat)
        if image != Arc.from_pair(inc["image"]):
            return False
        wit = parse_projective_point(inc["witness_outside_target"])
        if arcs[target].contains(wit):
            return False
        if not (arcs[target].contains(image.a) and arcs[target].contains(image.b)):
            return False
        if image.contains(wit):
            return False
    return seen == {("g1", 1), ("g1", -1), ("g2", 1), ("g2", -1)}
