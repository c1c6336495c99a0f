"""Command-line front end.

Every command reads exact textual/JSON input, writes a JSON document to
stdout (or to -o FILE) and a one-line human summary to stderr.  Exit codes:
0 success or verified, 1 a check failed or a precondition was violated,
2 malformed input.  No floating point appears anywhere in the I/O.
"""

import argparse
import json
import sys

from . import __version__
from .errors import ParseError, PwprojError
from .exactnum import RingSpec, is_prime, parse_number
from .moebius import parse_halfplane_point, parse_matrix, reduce_to_gauss_domain
from .piecewise import PwpMap
from .surgery import (
    cut_and_paste,
    rational_cut_and_paste,
    smooth_element,
    thompson_generators,
    thompson_relations_hold,
)
from .certify import gap_witness, pushforward_haar, schottky_certificate


def canonical_dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def _parse_prime_set(text):
    text = text.strip()
    if not text:
        return frozenset()
    primes = set()
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit() or not is_prime(int(part)):
            raise ParseError("prime set entries must be primes, got %r" % part)
        primes.add(int(part))
    return frozenset(primes)


def _load_element(path):
    try:
        with open(path, "r", encoding="ascii") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON in %s: %s" % (path, exc)) from exc
    return PwpMap.from_json_obj(doc)


def _emit(args, doc, summary):
    text = canonical_dumps(doc)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)


def _cmd_compose(args):
    if len(args.file) != 2:
        raise ParseError("compose needs exactly two -f elements")
    h = _load_element(args.file[0])
    g = _load_element(args.file[1])
    result = h.compose(g)
    _emit(args, result.to_json_obj(),
          "composed: %d breakpoints" % len(result.breakpoints))
    return 0


def _cmd_invert(args):
    h = _load_element(args.file[0])
    result = h.invert()
    _emit(args, result.to_json_obj(),
          "inverted: %d breakpoints" % len(result.breakpoints))
    return 0


def _cmd_eval(args):
    h = _load_element(args.file[0])
    x = parse_number(args.at)
    value = h(x)
    _emit(args, {"at": x.to_text(), "value": value.to_text()},
          "%s -> %s" % (x, value))
    return 0


def _cmd_verify(args):
    try:
        h = _load_element(args.file[0])
    except ParseError:
        raise
    except PwprojError as exc:
        _emit(args, {"valid": False, "error": type(exc).__name__,
                     "detail": str(exc)}, "invalid: %s" % exc)
        return 1
    doc = {
        "valid": True,
        "breakpoints": [b.to_text() for b in h.breakpoints],
        "pieces": len(h.pieces),
        "fixes_infinity_projectively": h.fixes_infinity_projectively(),
    }
    _emit(args, doc, "valid: %d breakpoints" % len(h.breakpoints))
    return 0


def _cmd_smoothcheck(args):
    h = _load_element(args.file[0])
    report = [
        {"breakpoint": b.to_text(), "class": cls.value}
        for b, cls in h.smoothness()
    ]
    doc = {"breakpoints": report, "all_c1": h.is_c1()}
    _emit(args, doc, "C1 everywhere" if doc["all_c1"] else "has C0 breakpoints")
    return 0


def _trace_doc(trace, ring):
    doc = trace.to_json_obj()
    if ring is not None:
        doc["ring"] = ring.to_text()
        doc["in_ring"] = trace.result.ring_membership(ring)
    return doc


def _cmd_cutpaste(args):
    g = parse_matrix(args.mat)
    x = parse_number(args.at)
    ring = RingSpec.from_text(args.ring) if args.ring else None
    trace = cut_and_paste(g, x)
    _emit(args, _trace_doc(trace, ring),
          "trivial (affine)" if trace.affine
          else "n = %s, breakpoints %s, %s" % (
              trace.n, trace.result.breakpoints[0], trace.result.breakpoints[1]))
    return 0


def _cmd_ratcutpaste(args):
    g = parse_matrix(args.mat)
    x = parse_number(args.at)
    ring = RingSpec.from_text(args.ring) if args.ring else None
    trace = rational_cut_and_paste(g, x)
    _emit(args, _trace_doc(trace, ring),
          "N = %d, n = %s, rational breakpoints %s, %s" % (
              trace.big_n, trace.n,
              trace.result.breakpoints[0], trace.result.breakpoints[1]))
    return 0


def _cmd_smooth(args):
    h = _load_element(args.file[0])
    result = smooth_element(h)
    _emit(args, result.to_json_obj(),
          "smoothed: %d breakpoints, C1 = %s" % (
              len(result.breakpoints), result.is_c1()))
    return 0


def _cmd_witness(args):
    h = _load_element(args.file[0])
    x = parse_number(args.at)
    primes = _parse_prime_set(args.s_primes)
    w = h.breakpoint_witness(x, primes)
    _emit(args, w.to_json_obj(), "witness fixes %s" % x)
    return 0


def _cmd_thompson(args):
    a, b = thompson_generators()
    doc = {"A": a.to_json_obj(), "B": b.to_json_obj()}
    if args.check_relations:
        ok = thompson_relations_hold()
        doc["relations_checked"] = True
        doc["relations_hold"] = ok
        if not ok:
            _emit(args, doc, "relations FAILED")
            return 1
        _emit(args, doc, "relations verified")
        return 0
    doc["relations_checked"] = False
    _emit(args, doc, "generators emitted")
    return 0


def _cmd_gap(args):
    s = _parse_prime_set(args.s_primes)
    s2 = _parse_prime_set(args.s2_primes)
    if args.file:
        gens = [_load_element(path) for path in args.file]
    else:
        gens = list(thompson_generators())
    witness = gap_witness(s, s2, gens)
    _emit(args, witness.to_json_obj(),
          "separating prime %d moves the canonical point" % witness.p)
    return 0


def _cmd_haarpush(args):
    g = parse_matrix(args.mat)
    measure = pushforward_haar(g, args.prime, args.depth)
    _emit(args, measure.to_json_obj(),
          "uniform" if measure.is_uniform() else "moved")
    return 0


def _cmd_pingpong(args):
    if len(args.mat) != 2:
        raise ParseError("pingpong needs exactly two --mat matrices")
    g1 = parse_matrix(args.mat[0])
    g2 = parse_matrix(args.mat[1])
    cert = schottky_certificate(g1, g2)
    _emit(args, cert.to_json_obj(), "free of rank 2 at power %d" % cert.power)
    return 0


def _cmd_reduce(args):
    z = parse_halfplane_point(args.z)
    m, w = reduce_to_gauss_domain(z)
    _emit(args, {"matrix": m.to_lists(), "point": w.to_text()},
          "reduced to %s" % w)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pwp",
        description="exact piecewise-projective homeomorphisms of the line",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        for flag, kwargs in flags.items():
            p.add_argument(*kwargs.pop("names"), **kwargs)
        p.set_defaults(fn=fn)
        return p

    file_flag = {"names": ("-f", "--file"), "action": "append", "default": [],
                 "metavar": "FILE"}
    out_flag = {"names": ("-o",), "dest": "output", "default": None,
                "metavar": "FILE"}

    add("compose", _cmd_compose, f=dict(file_flag), o=dict(out_flag))
    add("invert", _cmd_invert, f=dict(file_flag), o=dict(out_flag))
    add("eval", _cmd_eval, f=dict(file_flag), o=dict(out_flag),
        at={"names": ("--at",), "required": True})
    add("verify", _cmd_verify, f=dict(file_flag), o=dict(out_flag))
    add("smoothcheck", _cmd_smoothcheck, f=dict(file_flag), o=dict(out_flag))
    add("cutpaste", _cmd_cutpaste, o=dict(out_flag),
        mat={"names": ("--mat",), "required": True},
        at={"names": ("--at",), "required": True},
        ring={"names": ("--ring",), "default": None})
    add("ratcutpaste", _cmd_ratcutpaste, o=dict(out_flag),
        mat={"names": ("--mat",), "required": True},
        at={"names": ("--at",), "required": True},
        ring={"names": ("--ring",), "default": None})
    add("smooth", _cmd_smooth, f=dict(file_flag), o=dict(out_flag))
    add("witness", _cmd_witness, f=dict(file_flag), o=dict(out_flag),
        at={"names": ("--at",), "required": True},
        s={"names": ("--S",), "dest": "s_primes", "required": True})
    add("thompson", _cmd_thompson, o=dict(out_flag),
        check={"names": ("--check-relations",), "dest": "check_relations",
               "action": "store_true"})
    add("gap", _cmd_gap, f=dict(file_flag), o=dict(out_flag),
        s={"names": ("--S",), "dest": "s_primes", "required": True},
        s2={"names": ("--S2",), "dest": "s2_primes", "required": True})
    add("haarpush", _cmd_haarpush, o=dict(out_flag),
        mat={"names": ("--mat",), "required": True},
        prime={"names": ("--prime",), "type": int, "required": True},
        depth={"names": ("--depth",), "type": int, "required": True})
    add("pingpong", _cmd_pingpong, o=dict(out_flag),
        mat={"names": ("--mat",), "action": "append", "default": [],
             "metavar": "MAT"})
    add("reduce", _cmd_reduce, o=dict(out_flag),
        z={"names": ("--z",), "required": True})
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    needs_file = args.command in (
        "compose", "invert", "eval", "verify", "smoothcheck", "smooth",
        "witness",
    )
    try:
        if needs_file and not args.file:
            raise ParseError("command %r needs -f FILE" % args.command)
        return args.fn(args)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except PwprojError as exc:
        print("check failed: %s: %s" % (type(exc).__name__, exc),
              file=sys.stderr)
        sys.stdout.write(canonical_dumps(
            {"error": type(exc).__name__, "detail": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
