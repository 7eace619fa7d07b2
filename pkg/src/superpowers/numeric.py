"""Exact arithmetic helpers: rationals, valuations, exponent polynomials,
tetration and the super-logarithm.

Rationals are :class:`fractions.Fraction`; they are always kept reduced with a
positive denominator, which is all the rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from mpmath.ctx_iv import MPIntervalContext

from .factorization import is_prime

Rational = Fraction
Number = Union[int, Fraction]


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats and decimals are rejected."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational string: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(x: Number) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def valuation(p: int, x: int) -> int:
    """Exponent of the largest power of the prime p dividing x != 0."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    if p < 2 or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = abs(x)
    if p == 2:
        return (x & -x).bit_length() - 1
    v = 0
    # square the divisor while it keeps dividing, then walk back down
    powers = [p]
    while x % powers[-1] == 0:
        x //= powers[-1]
        v += 1 << (len(powers) - 1)
        powers.append(powers[-1] * powers[-1])
    for i in range(len(powers) - 2, -1, -1):
        if x % powers[i] == 0:
            x //= powers[i]
            v += 1 << i
    return v


def rational_valuation(p: int, x: Number) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    vn = valuation(p, x.numerator)
    return vn if vn else -valuation(p, x.denominator)


@dataclass(frozen=True)
class ExponentPolynomial:
    """Integer polynomial ``sum_j coefficients[j] * n**j``.

    Used for the per-prime exponents of a superpower term; differences of two
    of them may carry negative coefficients.
    """

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def __sub__(self, other: "ExponentPolynomial") -> "ExponentPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return ExponentPolynomial(tuple(x - y for x, y in zip(a, b)))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        for j in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[j]:
                return j
        return -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def leading(self) -> int:
        d = self.degree
        return self.coefficients[d] if d >= 0 else 0

    def __call__(self, n: int) -> int:
        return eval_poly(self, n)


def _coeffs(e: ExponentPolynomial | Sequence[int]) -> Sequence[int]:
    return e.coefficients if isinstance(e, ExponentPolynomial) else e


def eval_poly(e: ExponentPolynomial | Sequence[int], n: int) -> int:
    out = 0
    for c in reversed(_coeffs(e)):
        out = out * n + c
    return out


def eval_poly_mod(e: ExponentPolynomial | Sequence[int], n: int, m: int) -> int:
    """Horner evaluation reduced mod m at every step."""
    if m < 1:
        raise ValueError("modulus must be positive")
    n %= m
    out = 0
    for c in reversed(_coeffs(e)):
        out = (out * n + c) % m
    return out


def cauchy_bound(coeffs: Sequence[Number]) -> Fraction:
    """Every real root of the polynomial lies strictly inside (-bound, bound)."""
    deg = max(j for j, c in enumerate(coeffs) if c)
    lead = abs(Fraction(coeffs[deg]))
    return 1 + max((abs(Fraction(c)) / lead for c in coeffs[:deg]), default=Fraction(0))


# -- tetration ------------------------------------------------------------------


class _OverCap:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OVER_CAP"


OVER_CAP = _OverCap()


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi] enclosing an irrational tower value."""

    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def interval_context(prec: int) -> MPIntervalContext:
    """Private interval-arithmetic context (mpmath's shared one is global state)."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def iv_from_rational(ctx: MPIntervalContext, x: Number):
    x = Fraction(x)
    if x.denominator == 1:
        return ctx.mpf(x.numerator)
    return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)


def _endpoint(t) -> Fraction:
    sign, man, exp, _ = t
    if abs(exp) > 1 << 20:
        raise OverflowError("interval endpoint too extreme for an exact rational")
    val = Fraction(int(man)) * (Fraction(2) ** exp)
    return -val if sign else val


def iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval."""
    lo, hi = x._mpi_
    return _endpoint(lo), _endpoint(hi)


def _check_base(C: Number) -> Fraction:
    C = Fraction(C)
    if C <= 1:
        raise ValueError(f"tetration base must exceed 1, got {C}")
    return C


def tetrate(C: Number, l: int, cap: int = 1 << 26):
    """C^^l = C**C**...**C (l copies), with C^^0 = 1.

    Integers (and rationals when l <= 1) are returned exactly.  Results whose
    bit size would exceed ``cap`` come back as :data:`OVER_CAP`.  For a
    non-integer rational base and l >= 2 the tower is irrational and an
    :class:`Interval` enclosure is returned instead.
    """
    C = _check_base(C)
    if l < 0:
        raise ValueError("tetration height must be nonnegative")
    if l == 0:
        return 1
    if C.denominator == 1:
        c = C.numerator
        t = 1
        for _ in range(l):
            if t * (c.bit_length() - 1) > cap:
                return OVER_CAP
            t = c**t
            if t.bit_length() > cap:
                return OVER_CAP
        return t
    if l == 1:
        return C
    ctx = interval_context(96)
    lnC = ctx.log(iv_from_rational(ctx, C))
    t = iv_from_rational(ctx, C)
    ln2 = ctx.log(2)
    for _ in range(l - 1):
        # bits of C**t are about t*log2(C)
        if (t * lnC / ln2 > cap) is True:
            return OVER_CAP
        t = ctx.exp(t * lnC)
    lo, hi = iv_bounds(t)
    return Interval(lo, hi)


def slog(C: Number, n: int) -> int:
    """Largest l >= 0 with C^^l <= n."""
    C = _check_base(C)
    if n < 2:
        raise ValueError(f"slog requires n >= 2, got {n}")
    if C.denominator == 1:
        return _slog_int(C.numerator, n)
    return _slog_rational(C, n)


def _slog_int(c: int, n: int) -> int:
    l, t = 0, 1
    nbits = n.bit_length()
    while True:
        # c**t >= 2**(t*(bits(c)-1)) > n once the exponent reaches bits(n)
        if t * (c.bit_length() - 1) >= nbits:
            return l
        nxt = c**t
        if nxt > n:
            return l
        l, t = l + 1, nxt


def _slog_rational(C: Fraction, n: int, max_prec: int = 1 << 14) -> int:
    # C^^l for non-integer rational C is never an integer, so every comparison
    # against n is eventually decided by tightening the enclosure.
    prec = 64 + 2 * n.bit_length().bit_length()
    while prec <= max_prec:
        result = _slog_rational_at(C, n, prec)
        if result is not None:
            return result
        prec *= 2
    raise ArithmeticError("slog comparison undecided at maximum precision")


def _slog_rational_at(C: Fraction, n: int, prec: int) -> int | None:
    ctx = interval_context(prec)
    lnC = ctx.log(iv_from_rational(ctx, C))
    ln_n = ctx.log(ctx.mpf(n))
    l = 1
    t = iv_from_rational(ctx, C)
    if C > n:
        return 0
    while True:
        # is C^^(l+1) = exp(t * lnC) <= n ?  compare t*lnC against ln n
        e = t * lnC
        le = e <= ln_n
        if le is None:
            return None
        if not le:
            return l
        t = ctx.exp(e)
        l += 1
