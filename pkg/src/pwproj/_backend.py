"""Arithmetic backend selection.

Every number in this package is an exact rational (or a pair of rationals
attached to a square root).  The inner loops are therefore bignum rational
arithmetic, and we run them on gmpy2's GMP-backed ``mpq`` when it is
importable, falling back to the standard library's ``fractions.Fraction``
otherwise.  Set ``PWPROJ_BACKEND=python`` or ``PWPROJ_BACKEND=gmpy2`` to
force a choice; the default is ``auto``.

Both backends expose the same protocol (``.numerator`` / ``.denominator``,
arithmetic operators, total order, ``str()`` in lowest terms), so the rest
of the package never needs to know which one is active.
"""

import os

_choice = os.environ.get("PWPROJ_BACKEND", "auto").lower()
if _choice not in ("auto", "gmpy2", "python"):
    raise RuntimeError(
        "PWPROJ_BACKEND must be 'auto', 'gmpy2' or 'python', got %r" % _choice
    )

BACKEND = "python"
if _choice in ("auto", "gmpy2"):
    try:
        import gmpy2 as _gmpy2

        BACKEND = "gmpy2"
    except ImportError:
        if _choice == "gmpy2":
            raise
        _gmpy2 = None
else:
    _gmpy2 = None


if BACKEND == "gmpy2":
    QQ = _gmpy2.mpq

    def isqrt(n):
        return int(_gmpy2.isqrt(n))

    def gcd(a, b):
        return int(_gmpy2.gcd(a, b))

else:
    from fractions import Fraction as QQ
    from math import gcd, isqrt


def qq(num, den=1):
    """Exact rational ``num/den`` in the active backend."""
    return QQ(num, den)


ZERO = qq(0)
ONE = qq(1)


def is_rational(x):
    return isinstance(x, (int, QQ))


def qq_floor(q):
    """Floor of an exact rational, as a Python int."""
    return int(q.numerator) // int(q.denominator)


def qq_ceil(q):
    return -((-int(q.numerator)) // int(q.denominator))
