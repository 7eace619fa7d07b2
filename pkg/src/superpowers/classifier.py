"""Bounded or unbounded omega: the product-form dichotomy on each parity.

s has bounded omega exactly when both s_{2n} and s_{2n-1} are single
products  prod_j a_j ** (m**j).  After merging terms with equal power tuples,
distinct positive power tuples give linearly independent sequences, so a
parity is degenerate precisely when one merged term survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numeric import Number, format_rational
from .sequence import (
    DEFAULT_BIT_CAP,
    SuperpowerSum,
    evaluate,
    inverse_odd_transform_row,
    merge_even_terms,
    odd_transform,
)

OMEGA_BOUNDED = "OmegaBounded"
OMEGA_UNBOUNDED = "OmegaUnbounded"


@dataclass(frozen=True)
class Degenerate:
    """s_m = prod_j coeffs[j] ** (m**j) on the parity in question."""

    coeffs: tuple[Fraction, ...]
    kind = "Degenerate"

    def to_json(self):
        return {"kind": self.kind, "coeffs": [format_rational(c) for c in self.coeffs]}


@dataclass(frozen=True)
class NonDegenerate:
    """The two order-largest merged terms, as evidence."""

    evidence: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    kind = "NonDegenerate"

    def to_json(self):
        return {
            "kind": self.kind,
            "evidence": [[format_rational(x) for x in row] for row in self.evidence],
        }


@dataclass(frozen=True)
class IdenticallyZero:
    kind = "IdenticallyZero"

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class ClassificationResult:
    even: Degenerate | NonDegenerate | IdenticallyZero
    odd: Degenerate | NonDegenerate | IdenticallyZero

    @property
    def verdict(self) -> str:
        both = isinstance(self.even, Degenerate) and isinstance(self.odd, Degenerate)
        return OMEGA_BOUNDED if both else OMEGA_UNBOUNDED

    def to_json(self):
        return {"even": self.even.to_json(), "odd": self.odd.to_json(), "verdict": self.verdict}


def classify_even(S: SuperpowerSum):
    rows = merge_even_terms(S)
    if not rows:
        return IdenticallyZero()
    if len(rows) == 1:
        return Degenerate(rows[0])
    return NonDegenerate((rows[-2], rows[-1]))


def classify(S: SuperpowerSum) -> ClassificationResult:
    even = classify_even(S)
    odd = classify_even(odd_transform(S))
    if isinstance(odd, Degenerate):
        odd = Degenerate(inverse_odd_transform_row(odd.coeffs))
    return ClassificationResult(even, odd)


@dataclass(frozen=True)
class CrossValidation:
    ok: bool
    counterexample: int | None = None

    def __bool__(self):
        return self.ok


def cross_validate_degenerate(
    S: SuperpowerSum,
    parity: str,
    coeffs: Sequence[Number] | Degenerate,
    n_check: int,
    bit_cap: int = DEFAULT_BIT_CAP,
) -> CrossValidation:
    """Check s_m == prod_j coeffs[j] ** (m**j) for every m <= n_check of the parity."""
    if isinstance(coeffs, Degenerate):
        coeffs = coeffs.coeffs
    coeffs = [Fraction(c) for c in coeffs]
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    start = 2 if parity == "even" else 1
    for m in range(start, n_check + 1, 2):
        claimed = Fraction(1)
        for j, a in enumerate(coeffs):
            claimed *= a ** (m**j)
        if evaluate(S, m, bit_cap) != claimed:
            return CrossValidation(False, m)
    return CrossValidation(True)


BOUNDED = "Bounded"
UNBOUNDED = "Unbounded"


def corollary_classify(c: Sequence[Number], x: Sequence[Number]) -> tuple[str, str]:
    """Degree-one case  sum_i c_i x_i**n  with positive c_i and nonzero x_i."""
    c = [Fraction(v) for v in c]
    x = [Fraction(v) for v in x]
    if not c or len(c) != len(x):
        raise ValueError("need matching, nonempty c and x")
    if any(v <= 0 for v in c) or any(v == 0 for v in x):
        raise ValueError("c must be positive and x nonzero")
    if len({abs(v) for v in x}) > 1:
        return UNBOUNDED, "the |x_i| are not all equal"
    signed = sum(ci if xi > 0 else -ci for ci, xi in zip(c, x))
    if signed == 0:
        return UNBOUNDED, "sum of signed coefficients is 0, so every odd term vanishes"
    return BOUNDED, "equal |x_i| and nonzero signed coefficient sum"


def corollary_embedding(c: Sequence[Number], x: Sequence[Number]) -> SuperpowerSum:
    return SuperpowerSum.from_rows([(ci, xi) for ci, xi in zip(c, x)], 1)
