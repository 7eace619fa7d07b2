"""Sums of superpowers  s_n = sum_i prod_j x[i][j] ** (n**j).

A :class:`SuperpowerSum` stores one row ``(x_i0, x_i1, ..., x_il)`` per term:
the coefficient first, then the bases of n, n**2, ..., n**l.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb
from typing import Iterable, Sequence

from .factorization import omega
from .numeric import Number, format_rational, parse_rational

DEFAULT_BIT_CAP = 1 << 26


class BitCapExceeded(OverflowError):
    pass


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    bases: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "bases", tuple(Fraction(b) for b in self.bases))

    @property
    def row(self) -> tuple[Fraction, ...]:
        return (self.coeff,) + self.bases


@dataclass(frozen=True)
class SuperpowerSum:
    ell: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        terms = tuple(t if isinstance(t, Term) else Term(t[0], tuple(t[1:])) for t in self.terms)
        for t in terms:
            if len(t.bases) != self.ell:
                raise ValueError(f"term {t} does not have {self.ell} bases")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Number]], ell: int | None = None) -> "SuperpowerSum":
        """Build from rows ``(coeff, base_1, ..., base_l)``."""
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        if ell is None:
            if not rows:
                raise ValueError("ell is required for an empty sum")
            ell = len(rows[0]) - 1
        return cls(ell, tuple(Term(r[0], r[1:]) for r in rows))

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def rows(self) -> list[tuple[Fraction, ...]]:
        return [t.row for t in self.terms]

    def __call__(self, n: int, bit_cap: int = DEFAULT_BIT_CAP) -> Fraction:
        return evaluate(self, n, bit_cap)

    # -- instance file -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "terms": [
                {"coeff": format_rational(t.coeff), "bases": [format_rational(b) for b in t.bases]}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SuperpowerSum":
        try:
            ell = int(data["ell"])
            raw = data["terms"]
            if not isinstance(raw, list) or not raw:
                raise InstanceFormatError("instance needs a nonempty 'terms' list")
            terms = tuple(
                Term(parse_rational(t["coeff"]), tuple(parse_rational(b) for b in t["bases"]))
                for t in raw
            )
            return cls(ell, terms)
        except InstanceFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"malformed instance: {exc}") from exc


def load_instance(path) -> SuperpowerSum:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    return SuperpowerSum.from_json(data)


def dump_instance(S: SuperpowerSum, path) -> None:
    with open(path, "w") as fh:
        json.dump(S.to_json(), fh, indent=2)
        fh.write("\n")


def _size(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def evaluate(S: SuperpowerSum, n: int, bit_cap: int = DEFAULT_BIT_CAP) -> Fraction:
    """Exact s_n.  Raises :class:`BitCapExceeded` if a term would be too large."""
    if n < 1:
        raise ValueError("index n must be >= 1")
    total = Fraction(0)
    for t in S.terms:
        if t.coeff == 0 or any(b == 0 for b in t.bases):
            continue
        bits = _size(t.coeff) + sum(n ** (j + 1) * _size(b) for j, b in enumerate(t.bases))
        if bits > bit_cap:
            raise BitCapExceeded(f"term needs ~{bits} bits, cap is {bit_cap}")
        val = t.coeff
        for j, b in enumerate(t.bases, start=1):
            val *= b ** (n**j)
        total += val
    return total


def prec_key(u: Sequence[Number]) -> tuple:
    """Sort key realising the order: absolute values compared from the last entry down."""
    return tuple(abs(Fraction(x)) for x in reversed(u))


def prec_compare(u: Sequence[Number], v: Sequence[Number]) -> int:
    """-1, 0 or 1 as u precedes, ties with, or follows v."""
    if len(u) != len(v):
        raise ValueError("tuples of different length")
    a, b = prec_key(u), prec_key(v)
    return (a > b) - (a < b)


# -- normalization on even indices -------------------------------------------


class _IdenticallyZero:
    def __repr__(self):
        return "IDENTICALLY_ZERO_ON_EVENS"


IDENTICALLY_ZERO_ON_EVENS = _IdenticallyZero()


@dataclass(frozen=True)
class NormalizedInstance:
    """Integer, merged, column-reduced, order-sorted even-index form.

    On even n:  s_n = u_n * prod_j (deltas[j] / alphas[j]) ** (n**j),
    where u is the sum described by ``entries``.
    """

    ell: int
    entries: tuple[tuple[int, ...], ...]
    alphas: tuple[int, ...]
    deltas: tuple[int, ...]
    omega_slack: int

    @property
    def k(self) -> int:
        return len(self.entries)

    def as_sum(self) -> SuperpowerSum:
        return SuperpowerSum.from_rows(self.entries, self.ell)

    def scale(self, n: int) -> Fraction:
        out = Fraction(1)
        for j, (a, d) in enumerate(zip(self.alphas, self.deltas)):
            out *= Fraction(d, a) ** (n**j)
        return out

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "entries": [list(r) for r in self.entries],
            "alphas": list(self.alphas),
            "deltas": list(self.deltas),
            "omegaSlack": self.omega_slack,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NormalizedInstance":
        return cls(
            int(data["ell"]),
            tuple(tuple(int(x) for x in r) for r in data["entries"]),
            tuple(int(x) for x in data["alphas"]),
            tuple(int(x) for x in data["deltas"]),
            int(data["omegaSlack"]),
        )


def merge_even_terms(S: SuperpowerSum) -> list[tuple[Fraction, ...]]:
    """Drop vanishing terms, fold signs of the bases, merge equal power tuples.

    Returns rows (coeff, |x_1|, ..., |x_l|) valid on even indices, sorted by
    the power-tuple order.  An empty list means s vanishes on every even n.
    """
    merged: dict[tuple[Fraction, ...], Fraction] = {}
    for t in S.terms:
        if t.coeff == 0 or any(b == 0 for b in t.bases):
            continue
        key = tuple(abs(b) for b in t.bases)
        merged[key] = merged.get(key, Fraction(0)) + t.coeff
    rows = [(c,) + key for key, c in merged.items() if c != 0]
    rows.sort(key=lambda r: prec_key(r[1:]))
    return rows


def normalize_even(S: SuperpowerSum):
    """Canonical integer form of s on even indices, or IDENTICALLY_ZERO_ON_EVENS."""
    rows = merge_even_terms(S)
    if not rows:
        return IDENTICALLY_ZERO_ON_EVENS
    cols = list(zip(*rows))
    alphas = tuple(reduce(math.lcm, (x.denominator for x in col), 1) for col in cols)
    ints = [[int(x * a) for x, a in zip(r, alphas)] for r in rows]
    deltas = tuple(reduce(math.gcd, (abs(r[j]) for r in ints), 0) for j in range(S.ell + 1))
    entries = [tuple(r[j] // deltas[j] for j in range(S.ell + 1)) for r in ints]
    entries.sort(key=lambda r: prec_key(r[1:]))
    slack = omega(math.prod(alphas))
    return NormalizedInstance(S.ell, tuple(entries), alphas, deltas, slack)


# -- odd indices and the polynomial-exponent form -------------------------------


def odd_transform(S: SuperpowerSum) -> SuperpowerSum:
    """T with t_{2n} = s_{2n-1} for every n >= 1.

    Each term's exponents (m-1)**h are re-expanded in powers of m, so
    y_j = prod_{h >= j} x_h ** ((-1)**(h-j) * C(h, j)).
    """
    out = []
    for t in S.terms:
        if t.coeff == 0 or any(b == 0 for b in t.bases):
            continue
        row = t.row
        ys = []
        for j in range(S.ell + 1):
            y = Fraction(1)
            for h in range(j, S.ell + 1):
                y *= row[h] ** ((-1) ** (h - j) * comb(h, j))
            ys.append(y)
        out.append(Term(ys[0], tuple(ys[1:])))
    return SuperpowerSum(S.ell, tuple(out))


def inverse_odd_transform_row(row: Sequence[Number]) -> tuple[Fraction, ...]:
    """Map a product form in powers of m = 2n to one in powers of 2n - 1.

    If t_m = prod_j a_j ** (m**j) then t_m = prod_h b_h ** ((m-1)**h) with
    b_h = prod_{j >= h} a_j ** C(j, h).
    """
    ell = len(row) - 1
    a = [Fraction(x) for x in row]
    out = []
    for h in range(ell + 1):
        b = Fraction(1)
        for j in range(h, ell + 1):
            b *= a[j] ** comb(j, h)
        out.append(b)
    return tuple(out)


@dataclass(frozen=True)
class Type2Term:
    """prod_j bases[j] ** f_j(n), with f_j given by integer coefficient lists."""

    bases: tuple[Fraction, ...]
    polys: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.bases) != len(self.polys) or not self.bases:
            raise ValueError("need one polynomial per base")
        if any(Fraction(b) == 0 for b in self.bases):
            raise ValueError("bases must be nonzero")
        object.__setattr__(self, "bases", tuple(Fraction(b) for b in self.bases))
        object.__setattr__(self, "polys", tuple(tuple(int(c) for c in f) for f in self.polys))


@dataclass(frozen=True)
class Type2Spec:
    terms: tuple[Type2Term, ...]

    def evaluate(self, n: int) -> Fraction:
        total = Fraction(0)
        for t in self.terms:
            val = Fraction(1)
            for y, f in zip(t.bases, t.polys):
                val *= y ** sum(c * n**h for h, c in enumerate(f))
            total += val
        return total


def convert_type2(spec: Type2Spec) -> SuperpowerSum:
    """Rewrite sum_i prod_j y_ij ** f_ij(n) as a sum of superpowers."""
    ell = max(1, max(len(f) - 1 for t in spec.terms for f in t.polys))
    rows = []
    for t in spec.terms:
        row = [Fraction(1)] * (ell + 1)
        for y, f in zip(t.bases, t.polys):
            for h, c in enumerate(f):
                row[h] *= y**c
        rows.append(row)
    return SuperpowerSum.from_rows(rows, ell)
