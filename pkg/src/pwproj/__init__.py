"""Exact-arithmetic toolkit for piecewise-projective homeomorphisms of the
real line over arithmetic rings: construction, composition, smoothing and
finite certificates (p-adic measure motion, ping-pong freeness)."""

from ._backend import BACKEND, QQ, qq
from .errors import PwprojError
from .exactnum import (
    AlgebraicReal,
    RingSpec,
    arith,
    as_algebraic,
    compare,
    galois_conjugate,
    in_ring,
    in_ring_algebraic,
    padic_valuation,
    parse_number,
    sqrt_rational,
)
from .moebius import (
    Arc,
    HalfPlanePoint,
    INFINITY,
    Mat2,
    MoebiusClass,
    ProjectivePoint,
    parse_halfplane_point,
    parse_matrix,
    rational_in_arc,
    reduce_to_gauss_domain,
)
from .piecewise import (
    BreakpointWitness,
    PwpMap,
    SmoothnessClass,
    validate,
)
from .surgery import (
    CutPasteTrace,
    SmoothingPatch,
    c1_interpolate,
    cut_and_paste,
    rational_cut_and_paste,
    smooth_element,
    thompson_generators,
    thompson_relations_hold,
)
from .certify import (
    BallMeasure,
    GapWitness,
    PingPongCertificate,
    cartan_decompose,
    gap_witness,
    in_psl2_zp,
    north_south_certificate,
    pushforward_haar,
    schottky_certificate,
    verify_gap_witness,
    verify_pingpong,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal", "Arc", "BACKEND", "BallMeasure", "BreakpointWitness",
    "CutPasteTrace", "GapWitness", "HalfPlanePoint", "INFINITY", "Mat2",
    "MoebiusClass", "PingPongCertificate", "ProjectivePoint", "PwpMap",
    "PwprojError", "QQ", "RingSpec", "SmoothingPatch", "SmoothnessClass",
    "arith", "as_algebraic", "c1_interpolate", "cartan_decompose", "compare",
    "cut_and_paste", "galois_conjugate", "gap_witness", "in_psl2_zp",
    "in_ring", "in_ring_algebraic", "north_south_certificate",
    "padic_valuation", "parse_halfplane_point", "parse_matrix",
    "parse_number", "pushforward_haar", "qq", "rational_cut_and_paste",
    "rational_in_arc", "reduce_to_gauss_domain", "schottky_certificate",
    "smooth_element", "sqrt_rational", "thompson_generators",
    "thompson_relations_hold", "validate", "verify_gap_witness",
    "verify_pingpong",
]
