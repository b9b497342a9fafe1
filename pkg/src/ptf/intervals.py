"""Certified interval arithmetic on top of mpmath's interval context.

Every quantity that is not rational (logarithms, powers of e) is evaluated
as an enclosing interval with directed rounding at a chosen binary
precision.  Comparisons against exact rationals are decided only when the
interval separates the two sides; otherwise the precision is doubled, up to
a ceiling (PTF_MAX_PRECISION_BITS, default 4096), and a comparison that is
still undecided there raises UndecidedComparisonError rather than guessing.

Interval endpoints convert exactly to Fractions (mantissa * 2^exponent), so
all final verdicts are exact rational comparisons.  mpmath's interval
precision is a context global; the helpers here save and restore it, and
are not meant to be called from several threads at once.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Optional, Tuple

import mpmath

from .errors import InvalidInputError, UndecidedComparisonError

iv = mpmath.iv

DEFAULT_START_PRECISION = 128
DEFAULT_MAX_PRECISION = 4096


def max_precision_bits() -> int:
    raw = os.environ.get("PTF_MAX_PRECISION_BITS", "").strip()
    if not raw:
        return DEFAULT_MAX_PRECISION
    try:
        val = int(raw)
    except ValueError as exc:
        raise InvalidInputError(
            f"PTF_MAX_PRECISION_BITS must be an integer, got {raw!r}"
        ) from exc
    if val < 8:
        raise InvalidInputError("PTF_MAX_PRECISION_BITS must be at least 8")
    return val


@contextmanager
def precision(bits: int):
    """Temporarily set the interval context's working precision."""
    old = iv.prec
    iv.prec = bits
    try:
        yield iv
    finally:
        iv.prec = old


def _tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _bc = t
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def bounds(x) -> Tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval value."""
    lo, hi = x._mpi_
    return _tuple_to_fraction(lo), _tuple_to_fraction(hi)


def from_fraction(q: Fraction):
    """Enclosing interval of a rational (exact when it is dyadic)."""
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def log2(x):
    """Interval log base 2."""
    return iv.log(x) / iv.log(iv.mpf(2))


def log2_fraction(q: Fraction):
    """Interval log2 of an exact positive rational (big integers welcome)."""
    if q <= 0:
        raise InvalidInputError("log2 needs a positive argument")
    # log2(a/b) = log2(a) - log2(b) keeps huge integers out of one division
    a = log2(iv.mpf(q.numerator))
    if q.denominator == 1:
        return a
    return a - log2(iv.mpf(q.denominator))


# ---------------------------------------------------------------------------
# adaptive certified comparisons
# ---------------------------------------------------------------------------

Builder = Callable[[], object]  # evaluated inside a precision(...) block


def _try_compare(value_iv, rhs: Fraction) -> Optional[bool]:
    """True if value <= rhs certainly, False if value > rhs certainly."""
    lo, hi = bounds(value_iv)
    if hi <= rhs:
        return True
    if lo > rhs:
        return False
    return None


def decide_leq(
    build: Builder,
    rhs: Fraction,
    start_bits: int = DEFAULT_START_PRECISION,
    max_bits: Optional[int] = None,
) -> Tuple[bool, int]:
    """Certified `value <= rhs`; returns (verdict, precision bits used).

    `build` recomputes the interval value at the context's current
    precision.  Raises UndecidedComparisonError if the ceiling is reached
    while the interval still straddles rhs (value == rhs exactly, or the
    expression is too ill-conditioned for the allowed precision).
    """
    rhs = Fraction(rhs)
    ceiling = max_precision_bits() if max_bits is None else max_bits
    bits = min(start_bits, ceiling)
    while True:
        with precision(bits):
            verdict = _try_compare(build(), rhs)
        if verdict is not None:
            return verdict, bits
        if bits >= ceiling:
            raise UndecidedComparisonError(
                f"comparison undecided at {bits} precision bits"
            )
        bits = min(2 * bits, ceiling)


def decide_geq(
    build: Builder,
    rhs: Fraction,
    start_bits: int = DEFAULT_START_PRECISION,
    max_bits: Optional[int] = None,
) -> Tuple[bool, int]:
    """Certified `value >= rhs`; returns (verdict, precision bits used)."""
    return decide_leq(lambda: -build(), -Fraction(rhs), start_bits, max_bits)


def decide_nonnegative(
    build: Builder,
    start_bits: int = DEFAULT_START_PRECISION,
    max_bits: Optional[int] = None,
) -> Tuple[bool, int]:
    """Certified `value >= 0`; returns (verdict, precision bits used)."""
    return decide_geq(build, Fraction(0), start_bits, max_bits)


def decide_sign(
    build: Builder,
    start_bits: int = DEFAULT_START_PRECISION,
    max_bits: Optional[int] = None,
) -> Tuple[int, int]:
    """Certified sign (+1 or -1) of a provably nonzero value.

    Returns (sign, precision bits used); raises UndecidedComparisonError if
    the value's interval still contains 0 at the precision ceiling (in
    particular whenever the value is exactly zero).
    """
    ceiling = max_precision_bits() if max_bits is None else max_bits
    bits = min(start_bits, ceiling)
    while True:
        with precision(bits):
            lo, hi = bounds(build())
        if lo > 0:
            return 1, bits
        if hi < 0:
            return -1, bits
        if bits >= ceiling:
            raise UndecidedComparisonError(
                f"sign undecided at {bits} precision bits"
            )
        bits = min(2 * bits, ceiling)


def certified_bounds(
    build: Builder,
    width: Fraction,
    start_bits: int = DEFAULT_START_PRECISION,
    max_bits: Optional[int] = None,
) -> Tuple[Fraction, Fraction, int]:
    """Evaluate to an interval of width <= `width`; returns (lo, hi, bits)."""
    ceiling = max_precision_bits() if max_bits is None else max_bits
    bits = min(start_bits, ceiling)
    while True:
        with precision(bits):
            lo, hi = bounds(build())
        if hi - lo <= width:
            return lo, hi, bits
        if bits >= ceiling:
            raise UndecidedComparisonError(
                f"could not reach width {width} at {bits} precision bits"
            )
        bits = min(2 * bits, ceiling)
