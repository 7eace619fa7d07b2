"""Primitive prime divisors of a^n - b^n and the divisor-count lower bound.

A prime p is primitive for (a, b, n) when p | a^n - b^n but p does not divide
a^m - b^m for any 1 <= m < n.  For coprime a > b >= 1 such a prime exists
except when (a, b, n) = (2, 1, 6) or n = 2 and a + b is a power of two.
Every divisor d > 1 of n then contributes its own primitive prime to
a^n - b^n, which gives omega(a^n - b^n) >= sigma0(n) - 2.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

from .factorization import DEFAULT_BUDGET, SEED, BudgetExceeded, factor, sigma0


@dataclass(frozen=True)
class ZsigmondyQuery:
    a: int
    b: int
    n: int

    def __post_init__(self):
        if not (self.a > self.b >= 1):
            raise ValueError(f"need a > b >= 1, got a={self.a}, b={self.b}")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")

    @property
    def coprime(self) -> bool:
        return math.gcd(self.a, self.b) == 1

    def reduced(self) -> "ZsigmondyQuery":
        g = math.gcd(self.a, self.b)
        return ZsigmondyQuery(self.a // g, self.b // g, self.n)


def _query(a, b=None, n=None) -> ZsigmondyQuery:
    if isinstance(a, ZsigmondyQuery):
        return a
    return ZsigmondyQuery(a, b, n)


def is_exception(a, b=None, n=None) -> bool:
    q = _query(a, b, n)
    if (q.a, q.b, q.n) == (2, 1, 6):
        return True
    s = q.a + q.b
    return q.n == 2 and s & (s - 1) == 0


def _proper_divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted({d for d in small} | {n // d for d in small} - {n})


def primitive_prime_divisors(
    a, b=None, n=None, budget: int = DEFAULT_BUDGET, seed: int = SEED
) -> set[int]:
    """Primes dividing a^n - b^n and no earlier a^m - b^m.

    A common factor g = gcd(a, b) is divided out first (with a warning);
    the scan then runs on (a/g, b/g).
    """
    q = _query(a, b, n)
    if not q.coprime:
        warnings.warn(f"gcd({q.a}, {q.b}) > 1; dividing it out", stacklevel=2)
        q = q.reduced()
    value = q.a**q.n - q.b**q.n
    fac = factor(value, budget, seed)
    if not fac.complete:
        raise BudgetExceeded(fac)
    # p | a^m - b^m and p | a^n - b^n imply p | a^gcd(m,n) - b^gcd(m,n),
    # so only proper divisors of n need checking
    divs = _proper_divisors(q.n)
    return {
        p for p in fac.factors
        if all(pow(q.a, d, p) != pow(q.b, d, p) for d in divs)
    }


@dataclass(frozen=True)
class BoundRow:
    n: int
    omega: int
    sigma0: int
    exception: bool
    primitive: tuple[int, ...]

    @property
    def margin(self) -> int:
        """omega - (sigma0 - 2); nonnegative when the bound holds."""
        return self.omega - (self.sigma0 - 2)


@dataclass(frozen=True)
class BoundReport:
    a: int
    b: int
    rows: tuple[BoundRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.margin >= 0 for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "omega", "sigma0", "margin", "exception", "primitive"])
        for r in self.rows:
            w.writerow([r.n, r.omega, r.sigma0, r.margin, int(r.exception), " ".join(map(str, r.primitive))])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "holds": self.holds,
            "rows": [
                {
                    "n": r.n, "omega": r.omega, "sigma0": r.sigma0, "margin": r.margin,
                    "exception": r.exception, "primitive": list(r.primitive),
                }
                for r in self.rows
            ],
        }


def omega_divisor_bound_check(
    a: int, b: int, n_max: int, n_min: int = 2, budget: int = DEFAULT_BUDGET, seed: int = SEED
) -> BoundReport:
    """omega(a^n - b^n) against sigma0(n) - 2 for n_min <= n <= n_max."""
    if n_min < 2 or n_max < n_min:
        raise ValueError("need 2 <= n_min <= n_max")
    ZsigmondyQuery(a, b, 2)
    if math.gcd(a, b) != 1:
        warnings.warn(f"gcd({a}, {b}) > 1; primitive divisors use the reduced pair", stacklevel=2)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for n in range(n_min, n_max + 1):
            fac = factor(a**n - b**n, budget, seed)
            if not fac.complete:
                raise BudgetExceeded(fac)
            prim = primitive_prime_divisors(a, b, n, budget, seed)
            rows.append(BoundRow(n, len(fac.factors), sigma0(n), is_exception(a, b, n), tuple(sorted(prim))))
    return BoundReport(a, b, tuple(rows))
