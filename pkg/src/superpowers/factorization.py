"""Primality, budgeted factorization, and the omega / sigma0 functions.

Factoring is trial division by small primes followed by Brent's variant of
Pollard rho.  The rho parameters are drawn from a generator seeded with a
hash of the number being split, so results never depend on call order.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

# Splitting iterations allowed per factor() call.  Enough for any |x| < 10**18.
DEFAULT_BUDGET = 2_000_000
SEED = 0x5EED

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981  # bases above suffice below this


class BudgetExceeded(ArithmeticError):
    """Factorization did not complete within the effort budget."""

    def __init__(self, partial: "PartialFactorization"):
        super().__init__(f"factorization incomplete, cofactor {partial.cofactor}")
        self.partial = partial


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


TRIAL_LIMIT = 1 << 12
SMALL_PRIMES = _small_primes(TRIAL_LIMIT)
_SMALL_SET = frozenset(SMALL_PRIMES)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(x: int) -> bool:
    """Miller-Rabin with the first twelve prime bases.

    Deterministic below 3.3 * 10**24 (so for every 64-bit input); above that a
    True answer means "strong probable prime", see :func:`primality`.
    """
    if x < 2:
        raise ValueError(f"is_prime requires x >= 2, got {x}")
    if x in _SMALL_SET:
        return True
    for p in SMALL_PRIMES[:50]:
        if x % p == 0:
            return False
    return all(_strong_probable_prime(x, a) for a in _MR_BASES)


def primality(x: int) -> str:
    """'prime', 'probable-prime' or 'composite'."""
    if not is_prime(x):
        return "composite"
    return "prime" if x < _DETERMINISTIC_LIMIT else "probable-prime"


@dataclass(frozen=True)
class FactoredInteger:
    sign: int
    factors: dict[int, int]

    @property
    def complete(self) -> bool:
        return True

    @property
    def cofactor(self) -> int:
        return 1

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors.items():
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return sorted(self.factors)


@dataclass(frozen=True)
class PartialFactorization:
    """Prime part found so far plus an unsplit cofactor > 1."""

    sign: int
    factors: dict[int, int]
    cofactor: int
    cofactor_composite: bool | None = None  # None: not known either way

    @property
    def complete(self) -> bool:
        return False

    def value(self) -> int:
        out = self.sign * self.cofactor
        for p, e in self.factors.items():
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return sorted(self.factors)


def _rng_for(n: int, seed: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{n}".encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


@dataclass
class _Budget:
    left: int
    spent: int = field(default=0)

    def take(self, amount: int) -> bool:
        if amount > self.left:
            return False
        self.left -= amount
        self.spent += amount
        return True


def _brent_split(n: int, budget: _Budget, seed: int) -> int | None:
    """Return a nontrivial divisor of odd composite n, or None when out of budget."""
    rng = _rng_for(n, seed)
    batch = 128
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(batch, r - k)
                if not budget.take(steps):
                    return None
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += steps
            r *= 2
        if g == n:
            # backtrack one step at a time from the saved point
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # cycle closed without a split; new parameters


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in range(2, n.bit_length() + 1):
        root = iroot(n, k)
        if root < 2:
            break
        if root**k == n:
            return root, k
    return None


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


def factor(x: int, budget: int = DEFAULT_BUDGET, seed: int = SEED):
    """Factor a nonzero integer.

    Returns a :class:`FactoredInteger` when every prime factor was found within
    ``budget`` rho iterations, otherwise a :class:`PartialFactorization`.

    >>> factor(-12)
    FactoredInteger(sign=-1, factors={2: 2, 3: 1})
    """
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"cannot factor the non-integer {x}")
        x = x.numerator
    if x == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if x < 0 else 1
    n = abs(x)
    found: dict[int, int] = {}
    for p in SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1 and n < TRIAL_LIMIT * TRIAL_LIMIT:
        found[n] = found.get(n, 0) + 1
        n = 1

    pool = _Budget(budget)
    stack = [(n, 1)] if n > 1 else []
    stuck: list[int] = []
    while stack:
        m, mult = stack.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + mult
            continue
        pw = _perfect_power(m)
        if pw is not None:
            stack.append((pw[0], mult * pw[1]))
            continue
        d = _brent_split(m, pool, seed)
        if d is None:
            stuck.extend([m] * mult)
            continue
        stack.append((d, mult))
        stack.append((m // d, mult))

    # a stuck cofactor may still share primes found on another branch
    rest = []
    for m in stuck:
        for p in list(found):
            while m % p == 0:
                m //= p
                found[p] += 1
        if m == 1:
            continue
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
        else:
            rest.append(m)
    stuck = rest
    factors = dict(sorted(found.items()))
    if not stuck:
        return FactoredInteger(sign, factors)
    cof = math.prod(stuck)
    return PartialFactorization(sign, factors, cof, True)


def _require_complete(fac):
    if not fac.complete:
        raise BudgetExceeded(fac)
    return fac


def omega(x: int, budget: int = DEFAULT_BUDGET, seed: int = SEED) -> float | int:
    """Number of distinct prime divisors; ``math.inf`` for 0, 0 for +-1."""
    if x == 0:
        return math.inf
    if abs(x) == 1:
        return 0
    return len(_require_complete(factor(x, budget, seed)).factors)


def omega_bound(x: int, budget: int = DEFAULT_BUDGET, seed: int = SEED) -> tuple[float | int, bool]:
    """(omega or lower bound, exact?) -- never raises for nonzero x."""
    if x == 0:
        return math.inf, True
    if abs(x) == 1:
        return 0, True
    fac = factor(x, budget, seed)
    if fac.complete:
        return len(fac.factors), True
    # an unsplit composite cofactor still carries at least one new prime
    return len(fac.factors) + 1, False


def omega_rational(x: Fraction | int, budget: int = DEFAULT_BUDGET, seed: int = SEED) -> float | int:
    """omega(a) + omega(b) for x = a/b in lowest terms."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    return omega(x.numerator, budget, seed) + omega(x.denominator, budget, seed)


def omega_rational_bound(x: Fraction | int, budget: int = DEFAULT_BUDGET, seed: int = SEED) -> tuple[float | int, bool]:
    x = Fraction(x)
    if x == 0:
        return math.inf, True
    a, exact_a = omega_bound(x.numerator, budget, seed)
    b, exact_b = omega_bound(x.denominator, budget, seed)
    return a + b, exact_a and exact_b


def sigma0(n: int, budget: int = DEFAULT_BUDGET, seed: int = SEED) -> int:
    if n < 1:
        raise ValueError(f"sigma0 requires n >= 1, got {n}")
    fac = _require_complete(factor(n, budget, seed))
    return math.prod(e + 1 for e in fac.factors.values())
