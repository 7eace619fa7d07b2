"""Residues of superpower sums at indices far too large to evaluate exactly.

Each term is a coefficient times a product of powers ``base ** E(n)`` where
E is an integer polynomial in n.  Modulo a prime power q**a the q-part of the
term is tracked as an exact exponent (with early exit once it reaches a), and
the unit part is raised to exponents reduced modulo phi(q**(a - V)).  Prime
power residues are then glued together with the CRT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .factorization import FactoredInteger, factor, is_prime
from .numeric import ExponentPolynomial, eval_poly, eval_poly_mod, valuation
from .sequence import NormalizedInstance, SuperpowerSum


@dataclass(frozen=True)
class PowerTerm:
    """coeff * prod_j bases[j] ** exponents[j](n)."""

    coeff: Fraction
    bases: tuple[Fraction, ...]
    exponents: tuple[ExponentPolynomial, ...]


def as_modulus(modulus) -> dict[int, int]:
    """Normalise an int, FactoredInteger or {prime: exponent} map to a factor map."""
    if isinstance(modulus, Mapping):
        fac = {int(q): int(a) for q, a in modulus.items() if a}
    elif isinstance(modulus, FactoredInteger):
        fac = dict(modulus.factors)
    else:
        m = int(modulus)
        if m < 1:
            raise ValueError("modulus must be positive")
        if m == 1:
            return {}
        f = factor(m)
        if not f.complete:
            raise ValueError(f"modulus {m} could not be fully factored")
        fac = dict(f.factors)
    for q, a in fac.items():
        if a < 1 or not is_prime(q):
            raise ValueError(f"bad prime power {q}^{a} in modulus")
    return fac


def crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Combine residues modulo pairwise coprime moduli."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        # x + m*t = r (mod mi)
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return x % m


def pow_mod_prime_power(x: int, E: int, q: int, a: int) -> int:
    """x ** E mod q ** a, without ever forming x ** E."""
    if x == 0:
        raise ValueError("base must be nonzero")
    if a < 1:
        raise ValueError("exponent of the modulus must be >= 1")
    if E < 0:
        raise ValueError("exponent must be nonnegative")
    mod = q**a
    if E == 0:
        return 1 % mod
    v = valuation(q, x)
    u = abs(x) // q**v
    # v*E >= a  <=>  E >= ceil(a/v)
    if v and E >= -(-a // v):
        return 0
    ve = v * E
    rest = q ** (a - ve)
    phi = rest // q * (q - 1)
    res = q**ve * pow(u, E % phi, rest) % mod
    if x < 0 and E % 2:
        res = -res % mod
    return res


def _prime_power_residue(term: PowerTerm, n: int, q: int, a: int) -> int:
    mod = q**a
    c = term.coeff
    if c == 0:
        return 0
    if c.denominator % q == 0:
        raise ValueError(f"coefficient {c} is not {q}-integral")
    V = valuation(q, c.numerator)
    if V >= a:
        return 0
    exps = []
    for b, e in zip(term.bases, term.exponents):
        if b == 0:
            if eval_poly(e, n) > 0:
                return 0
            exps.append(None)
            continue
        if b.denominator % q == 0:
            raise ValueError(f"base {b} is not {q}-integral")
        vb = valuation(q, b.numerator)
        exps.append(vb)
        if vb:
            E = eval_poly(e, n)
            if E < 0:
                raise ValueError("negative exponent on a base divisible by the modulus")
            V += vb * E
            if V >= a:
                return 0
    rest = q ** (a - V)
    phi = rest // q * (q - 1)
    num, den = c.numerator, c.denominator
    sign = -1 if num < 0 else 1
    unit = abs(num) // q ** valuation(q, num) % rest
    unit = unit * pow(den, -1, rest) % rest
    for b, e, vb in zip(term.bases, term.exponents, exps):
        if vb is None:
            continue
        ub = abs(b.numerator) // q**vb
        er = eval_poly_mod(e, n, phi)
        unit = unit * pow(ub, er, rest) * pow(b.denominator, -er, rest) % rest
        if b < 0 and eval_poly_mod(e, n, 2):
            sign = -sign
    return sign * q**V * unit % mod


def eval_terms_mod(terms: Sequence[PowerTerm], n: int, modulus) -> int:
    fac = as_modulus(modulus)
    if not fac:
        return 0
    residues, moduli = [], []
    for q, a in sorted(fac.items()):
        mod = q**a
        residues.append(sum(_prime_power_residue(t, n, q, a) for t in terms) % mod)
        moduli.append(mod)
    return crt(residues, moduli)


def superpower_terms(S: SuperpowerSum | NormalizedInstance) -> list[PowerTerm]:
    if isinstance(S, NormalizedInstance):
        S = S.as_sum()
    monomials = tuple(
        ExponentPolynomial((0,) * j + (1,)) for j in range(1, S.ell + 1)
    )
    return [PowerTerm(t.coeff, t.bases, monomials) for t in S.terms]


def eval_sum_mod(S: SuperpowerSum | NormalizedInstance, n: int, modulus) -> int:
    """s_n modulo ``modulus``; denominators must be coprime to the modulus."""
    if n < 1:
        raise ValueError("index n must be >= 1")
    return eval_terms_mod(superpower_terms(S), n, modulus)


def eval_sigma_mod(params, n: int, modulus) -> int:
    """sigma_n modulo ``modulus`` for witness parameters (see witness.WitnessParams)."""
    if n < params.nP:
        raise ValueError(f"sigma_n is only integral for n >= {params.nP}, got {n}")
    return eval_terms_mod(params.sigma_terms(), n, modulus)


def residue_valuation(residue: int, q: int, a: int) -> int | None:
    """q-adic valuation of a number known modulo q**a; None if it is >= a."""
    residue %= q**a
    if residue == 0:
        return None
    return valuation(q, residue)

