"""Witness chains r_0 < r_1 < ... on which omega(sigma_r) keeps growing.

Starting from a normalized, non-degenerate even-index instance, the engine

* extracts the common prime-power part pi_n and the cofactor sigma_n
  (|s_{2n}| = pi_{2n} |sigma_{2n}|),
* computes the constants n_0, lambda, alpha, beta, B, C,
* builds r_0 = 2 n_0 and r_{k+1} = r_k + 2 beta_k, and
* checks every congruence the construction relies on through residues
  (see :mod:`superpowers.residue`), since sigma_{r_1} already has
  astronomically many digits.

Term indices ``i`` are 0-based and follow the sorted order of the normalized
instance, so the dominant term is ``k - 1``.
"""

from __future__ import annotations

import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .factorization import DEFAULT_BUDGET, SMALL_PRIMES, factor, iroot
from .numeric import (
    ExponentPolynomial,
    cauchy_bound,
    eval_poly,
    eval_poly_mod,
    interval_context,
    iv_bounds,
    iv_from_rational,
    slog,
    valuation,
)
from .residue import PowerTerm, eval_sigma_mod, residue_valuation
from .sequence import NormalizedInstance

DEFAULT_K_CAP = 12
DEFAULT_BETA_BITS = 1 << 22
DEFAULT_DISCOVERY_BOUND = 1000
CHECK_NAMES = (
    "params", "recursion", "membership",
    "congP", "congQ", "lemma1", "lemma2", "lemma3", "lemma4", "growth", "slog",
)


class DegenerateInstance(ValueError):
    pass


class SubsetBlowup(ValueError):
    pass


class FactorizationIncomplete(ArithmeticError):
    pass


class WitnessInfeasible(OverflowError):
    pass


@contextmanager
def _all_digits():
    # chain values routinely exceed the default int <-> str digit limit
    old = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def _dec(x: int) -> str:
    with _all_digits():
        return str(x)


def _int(s) -> int:
    with _all_digits():
        return int(s)


# -- thresholds -------------------------------------------------------------------


def positivity_threshold(coeffs) -> int:
    """Smallest t >= 1 with poly(n) > 0 for every integer n >= t.

    The polynomial must have a positive leading coefficient.  A root bound
    settles large n; the gap below it is scanned exactly.
    """
    coeffs = list(coeffs)
    deg = max((j for j, c in enumerate(coeffs) if c), default=-1)
    if deg < 0 or coeffs[deg] <= 0:
        raise ValueError("leading coefficient must be positive")
    top = math.floor(cauchy_bound(coeffs)) + 1
    t = top
    while t > 1 and eval_poly(coeffs, t - 1) > 0:
        t -= 1
    return t


def _lead_index(a: tuple, b: tuple) -> int:
    for j in range(len(a) - 1, 0, -1):
        if a[j] != b[j]:
            return j
    raise ValueError("power tuples coincide")


def _log_ratio(ctx, small: tuple[int, ...], big: tuple[int, ...]):
    """Coefficients g_j (intervals, exact zeros) of log(|T_small(n)| / |T_big(n)|)."""
    g = [ctx.log(iv_from_rational(ctx, Fraction(abs(small[0]), abs(big[0]))))]
    for j in range(1, len(small)):
        if small[j] == big[j]:
            g.append(0)
        else:
            g.append(ctx.log(iv_from_rational(ctx, Fraction(small[j], big[j]))))
    return g


def _eventually_below(ctx, g, lead: int, shift) -> int:
    """An integer n_b with  g(n) + shift < 0  for all n >= n_b (g's leading coeff < 0)."""
    coeffs = [g[0] + shift] + list(g[1:])
    lead_abs = -iv_bounds(coeffs[lead])[1]
    if lead_abs <= 0:
        raise ArithmeticError("leading coefficient not certified negative")
    worst = Fraction(0)
    for c in coeffs[:lead]:
        if isinstance(c, int):
            continue
        lo, hi = iv_bounds(c)
        worst = max(worst, abs(lo), abs(hi))
    return math.floor(1 + worst / lead_abs) + 1


def _term_abs(row: tuple[int, ...], n: int) -> int:
    out = abs(row[0])
    for j, x in enumerate(row[1:], start=1):
        out *= x ** (n**j)
    return out


def subsum_threshold(entries, k_cap: int = DEFAULT_K_CAP) -> int:
    """N such that every nonempty subsum of terms is nonzero for n >= N.

    For each term t the terms below it in the order are summed in absolute
    value; once that falls under |T_t(n)| every subset whose largest member
    is t is nonzero as well, so k - 1 dominance thresholds cover all subsets.
    """
    k = len(entries)
    if k > k_cap:
        raise SubsetBlowup(f"k = {k} exceeds the configured cap {k_cap}")
    ctx = interval_context(128)
    N = 1
    for t in range(1, k):
        bound = 1
        shift = ctx.log(t) if t > 1 else 0
        for i in range(t):
            g = _log_ratio(ctx, entries[i], entries[t])
            bound = max(bound, _eventually_below(ctx, g, _lead_index(entries[i], entries[t]), shift))
        n = bound
        while n > 1 and sum(_term_abs(entries[i], n - 1) for i in range(t)) < _term_abs(entries[t], n - 1):
            n -= 1
        N = max(N, n)
    return N


# -- parameters -------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaForm:
    """sigma_n = sum_i x_{i,0} prod_p p ** delta[p][i](n), pi_n = prod_p p ** e[p][i_p](n)."""

    primes: tuple[int, ...]
    coeffs: tuple[int, ...]
    delta: dict[int, tuple[ExponentPolynomial, ...]]
    pi_exponents: dict[int, ExponentPolynomial]

    def terms(self) -> list[PowerTerm]:
        bases = tuple(Fraction(p) for p in self.primes)
        return [
            PowerTerm(Fraction(c), bases, tuple(self.delta[p][i] for p in self.primes))
            for i, c in enumerate(self.coeffs)
        ]

    def pi(self, n: int) -> int:
        return math.prod(p ** eval_poly(self.pi_exponents[p], n) for p in self.primes)

    def sigma(self, n: int) -> int:
        total = 0
        for i, c in enumerate(self.coeffs):
            val = c
            for p in self.primes:
                e = eval_poly(self.delta[p][i], n)
                if e < 0:
                    raise ValueError(f"sigma_{n} is not integral (negative exponent of {p})")
                val *= p**e
            total += val
        return total


@dataclass(frozen=True)
class WitnessParams:
    instance: NormalizedInstance
    P: tuple[int, ...]
    e_poly: dict[tuple[int, int], ExponentPolynomial]
    i_min: dict[int, int]
    nP: int
    N: int
    A: int
    n0: int
    lam: int
    alpha: int
    beta: int
    B: int
    C: int | None = None

    @property
    def k(self) -> int:
        return self.instance.k

    @property
    def ell(self) -> int:
        return self.instance.ell

    def delta_poly(self, p: int, i: int) -> ExponentPolynomial:
        return self.e_poly[p, i] - self.e_poly[p, self.i_min[p]]

    def sigma_form(self) -> SigmaForm:
        return build_sigma_form(self.instance, self)

    def sigma_terms(self) -> list[PowerTerm]:
        return self.sigma_form().terms()

    def sigma(self, n: int) -> int:
        return self.sigma_form().sigma(n)

    def to_json(self) -> dict:
        return {
            "P": list(self.P),
            "ePoly": {f"{p}:{i}": list(e.coefficients) for (p, i), e in sorted(self.e_poly.items())},
            "iMin": {str(p): i for p, i in sorted(self.i_min.items())},
            "nP": self.nP,
            "NSubsums": self.N,
            "A": _dec(self.A),
            "n0": self.n0,
            "lambda": self.lam,
            "alpha": self.alpha,
            "beta": _dec(self.beta),
            "B": _dec(self.B),
            "C": None if self.C is None else _dec(self.C),
        }

    @classmethod
    def from_json(cls, data: dict, instance: NormalizedInstance) -> "WitnessParams":
        e_poly = {}
        for key, coeffs in data["ePoly"].items():
            p, i = key.split(":")
            e_poly[int(p), int(i)] = ExponentPolynomial(tuple(coeffs))
        return cls(
            instance=instance,
            P=tuple(int(p) for p in data["P"]),
            e_poly=e_poly,
            i_min={int(p): int(i) for p, i in data["iMin"].items()},
            nP=int(data["nP"]),
            N=int(data["NSubsums"]),
            A=_int(data["A"]),
            n0=int(data["n0"]),
            lam=int(data["lambda"]),
            alpha=int(data["alpha"]),
            beta=_int(data["beta"]),
            B=_int(data["B"]),
            C=None if data.get("C") is None else _int(data["C"]),
        )


def _eventual_key(e: ExponentPolynomial) -> tuple[int, ...]:
    return tuple(reversed(e.coefficients))


def build_sigma_form(I: NormalizedInstance, params: WitnessParams) -> SigmaForm:
    delta = {
        p: tuple(params.delta_poly(p, i) for i in range(I.k)) for p in params.P
    }
    pi_exp = {p: params.e_poly[p, params.i_min[p]] for p in params.P}
    return SigmaForm(params.P, tuple(r[0] for r in I.entries), delta, pi_exp)


def _monotonic_from(I: NormalizedInstance, form: SigmaForm, n_lo: int) -> int:
    """Smallest n >= n_lo with |sigma_{2m+2}| > |sigma_{2m}| for every m >= n."""
    k, entries = I.k, I.entries
    ctx = interval_context(128)
    # beyond M1 the lower terms add up to less than a quarter of the top one
    shift = ctx.log(4 * (k - 1))
    M1 = 1
    for i in range(k - 1):
        g = _log_ratio(ctx, entries[i], entries[k - 1])
        M1 = max(M1, _eventually_below(ctx, g, _lead_index(entries[i], entries[k - 1]), shift))
    # beyond M2 the top term's sigma-part at least doubles from 2m to 2m+2
    M2 = 1
    for p in form.primes:
        d = form.delta[p][k - 1]
        if d.is_zero():
            continue
        step = [0] * len(d.coefficients)
        for j, c in enumerate(d.coefficients):
            # c*((2m+2)^j - (2m)^j) expanded in powers of m
            for h in range(j):
                step[h] += c * math.comb(j, h) * 2**h * (2 ** (j - h))
        M2 = max(M2, positivity_threshold(step))
    M = max(-(-M1 // 2), M2, n_lo)
    n = M
    while n > n_lo and abs(form.sigma(2 * n)) > abs(form.sigma(2 * n - 2)):
        n -= 1
    return n


def derive_exponents(
    I: NormalizedInstance,
    k_cap: int = DEFAULT_K_CAP,
    budget: int = DEFAULT_BUDGET,
) -> WitnessParams:
    """P, the exponent polynomials, i_p, n_P and N; the remaining constants are 0.

    Enough for :func:`build_sigma_form`, and cheap even when beta is infeasible.
    """
    if not isinstance(I, NormalizedInstance):
        raise TypeError("expected a NormalizedInstance")
    k = I.k
    if k < 2:
        raise DegenerateInstance("a single merged term has bounded omega")
    N = subsum_threshold(I.entries, k_cap)

    z = math.prod(x for row in I.entries for x in row[1:])
    zf = factor(z, budget)
    if not zf.complete:
        raise FactorizationIncomplete(f"could not factor the base product {z}")
    P = tuple(zf.primes())
    if not P:
        raise DegenerateInstance("all bases are 1")

    e_poly = {}
    i_min = {}
    nP = N
    for p in P:
        for i, row in enumerate(I.entries):
            e_poly[p, i] = ExponentPolynomial((0,) + tuple(valuation(p, x) for x in row[1:]))
        i_min[p] = min(range(k), key=lambda i: (_eventual_key(e_poly[p, i]), i))
        base = e_poly[p, i_min[p]]
        for i in range(k):
            d = e_poly[p, i] - base
            if not d.is_zero():
                nP = max(nP, positivity_threshold(d.coefficients))
    return WitnessParams(I, P, e_poly, i_min, nP, N, 0, 0, 0, 0, 0, 0)


def derive_params(
    I: NormalizedInstance,
    k_cap: int = DEFAULT_K_CAP,
    budget: int = DEFAULT_BUDGET,
    max_beta_bits: int = DEFAULT_BETA_BITS,
) -> WitnessParams:
    """All constants of the construction for a non-degenerate even-index instance."""
    provisional = derive_exponents(I, k_cap, budget)
    k, ell = I.k, I.ell
    P, e_poly, i_min, nP, N = (
        provisional.P, provisional.e_poly, provisional.i_min, provisional.nP, provisional.N,
    )
    form = build_sigma_form(I, provisional)
    top = I.entries[-1]
    A = (abs(top[0]) * math.prod(top[1:])) ** 2 + 1
    n0 = _monotonic_from(I, form, max(nP, N))

    r0 = 2 * n0
    s0 = form.sigma(r0)
    lam = max(valuation(p, s0) for p in P) + max(
        eval_poly(form.delta[p][i], r0) for p in P for i in range(k)
    )
    alpha = k * max(abs(r[0]) for r in I.entries) * math.prod(p**lam for p in P)
    beta_bits = sum(alpha * p.bit_length() for p in P)
    if beta_bits > max_beta_bits:
        raise WitnessInfeasible(f"beta would need about {beta_bits} bits (cap {max_beta_bits})")
    beta = math.prod(p ** (alpha - 1) * (p - 1) for p in P)

    # B must give r_1 < B^(r_0^ell); sigma_{r_0}^2 bounds beta_0 / beta even when
    # the A-bound does not yet hold at r_0.
    X = r0**ell
    target = r0 + 2 * beta * max(A**X, s0 * s0)
    B = max(A + 1, iroot(target, X) + 1)
    return WitnessParams(I, P, e_poly, i_min, nP, N, A, n0, lam, alpha, beta, B)


def tetration_base(params: WitnessParams, r1: int) -> int:
    """C = max(B^ell * ell, r_1^ell + 1); the +1 makes r_1^ell < C strict."""
    ell = params.ell
    return max(params.B**ell * ell, r1**ell + 1)


# -- chain ------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainLink:
    kappa: int
    r: int
    known_primes: dict[int, int]
    beta_kappa: int
    partial: bool = False
    complete: bool = False

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "r": _dec(self.r),
            "knownPrimes": {str(q): v for q, v in sorted(self.known_primes.items())},
            "betaKappa": _dec(self.beta_kappa),
            "partial": self.partial,
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainLink":
        return cls(
            kappa=int(data["kappa"]),
            r=_int(data["r"]),
            known_primes={int(q): int(v) for q, v in data["knownPrimes"].items()},
            beta_kappa=_int(data["betaKappa"]),
            partial=bool(data["partial"]),
            complete=bool(data["complete"]),
        )


@dataclass(frozen=True)
class Check:
    name: str
    link: int
    passed: bool
    moduli: tuple[str, ...] = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "link": self.link,
            "passed": self.passed,
            "moduli": list(self.moduli),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class WitnessCertificate:
    params: WitnessParams
    chain: tuple[ChainLink, ...]
    checks: tuple[Check, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "instance": self.params.instance.to_json(),
            "params": self.params.to_json(),
            "links": [link.to_json() for link in self.chain],
            "checks": [c.to_json() for c in self.checks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WitnessCertificate":
        inst = NormalizedInstance.from_json(data["instance"])
        params = WitnessParams.from_json(data["params"], inst)
        chain = tuple(ChainLink.from_json(d) for d in data["links"])
        checks = tuple(
            Check(c["name"], int(c["link"]), bool(c["passed"]), tuple(c["moduli"]), c.get("detail", ""))
            for c in data.get("checks", [])
        )
        return cls(params, chain, checks)


def beta_kappa(params: WitnessParams, known: dict[int, int]) -> int:
    out = params.beta
    for q, v in sorted(known.items()):
        if q not in params.P:
            out *= q**v * (q - 1)
    return out


def start_chain(params: WitnessParams, budget: int = DEFAULT_BUDGET) -> WitnessCertificate:
    """Link 0: r_0 = 2 n_0 with sigma_{r_0} fully factored."""
    r0 = 2 * params.n0
    s0 = params.sigma(r0)
    fac = factor(s0, budget)
    if not fac.complete:
        raise FactorizationIncomplete(f"sigma_{r0} = {s0} not fully factored within budget")
    known = dict(fac.factors)
    link = ChainLink(0, r0, known, beta_kappa(params, known), partial=False, complete=True)
    return WitnessCertificate(params, (link,))


def certified_valuation(params: WitnessParams, r: int, q: int, start: int = 1, limit: int = 4096) -> int | None:
    """Exact v_q(sigma_r) from residues mod q^a, a doubling until nonzero."""
    a = max(1, start)
    while a <= limit:
        v = residue_valuation(eval_sigma_mod(params, r, {q: a}), q, a)
        if v is not None:
            return v
        a *= 2
    return None


def extend_chain(
    cert: WitnessCertificate,
    allow_partial: bool = False,
    discovery_bound: int = DEFAULT_DISCOVERY_BOUND,
) -> WitnessCertificate:
    """Append r_{k+1} = r_k + 2 beta_k and carry the known primes forward."""
    params = cert.params
    last = cert.chain[-1]
    if not last.complete and not allow_partial:
        raise FactorizationIncomplete(
            f"link {last.kappa} has an incomplete prime set; pass allow_partial=True"
        )
    r = last.r + 2 * last.beta_kappa
    known: dict[int, int] = {}
    candidates = set(last.known_primes) | set(params.P)
    candidates |= {q for q in SMALL_PRIMES if q <= discovery_bound}
    for q in sorted(candidates):
        if eval_sigma_mod(params, r, q) != 0:
            continue
        start = params.alpha if q in params.P else last.known_primes.get(q, 0) + 1
        v = certified_valuation(params, r, q, start)
        if v is not None:
            known[q] = v
    if last.kappa == 0:
        params = replace(params, C=tetration_base(params, r))
    link = ChainLink(
        last.kappa + 1, r, known, beta_kappa(params, known),
        partial=not last.complete or last.partial, complete=False,
    )
    return WitnessCertificate(params, cert.chain + (link,))


def build_certificate(
    I: NormalizedInstance,
    kappa_max: int = 1,
    budget: int = DEFAULT_BUDGET,
    **kw,
) -> WitnessCertificate:
    """Derive parameters, build the chain to ``kappa_max`` and verify it."""
    cert = start_chain(derive_params(I, budget=budget), budget)
    for _ in range(kappa_max):
        cert = extend_chain(cert, allow_partial=True, **kw)
    return verify_chain(cert)


# -- verification -------------------------------------------------------------------


def _log_abs_sigma(params: WitnessParams, form: SigmaForm, r: int):
    """Rigorous (lo, hi) bounds on log|sigma_r|, or None when undecidable."""
    k, entries = params.k, params.instance.entries
    top_exps = {p: eval_poly(form.delta[p][k - 1], r) for p in params.P}
    size = sum(e * p.bit_length() for p, e in top_exps.items())
    if size <= 20000:
        s = abs(form.sigma(r))
        ctx = interval_context(128)
        return iv_bounds(ctx.log(ctx.mpf(s)))
    prec = 2 * max(1, max(top_exps.values()).bit_length()) + 128
    ctx = interval_context(prec)
    log_d = ctx.log(ctx.mpf(abs(entries[-1][0])))
    for p, e in top_exps.items():
        if e:
            log_d += ctx.mpf(e) * ctx.log(p)
    eps = ctx.mpf(0)
    for i in range(k - 1):
        g = _log_ratio(ctx, entries[i], entries[-1])
        val = g[0]
        for j in range(1, len(g)):
            if not isinstance(g[j], int):
                val += g[j] * ctx.mpf(r**j)
        eps += ctx.exp(val)
    if (eps < 1) is not True:
        return None
    log_s = log_d + ctx.log(1 + ctx.mpf([-eps.b, eps.b]))
    return iv_bounds(log_s)


def _less_than_power(x: int, B: int, X: int) -> bool | None:
    """x < B**X, decided from bit lengths or exactly when that is cheap."""
    if x.bit_length() <= X * (B.bit_length() - 1):
        return True
    if x.bit_length() > X * B.bit_length():
        return False
    if X * B.bit_length() <= 1 << 24:
        return x < B**X
    return None


def _residue(params, r, q, a):
    return eval_sigma_mod(params, r, {q: a})


def verify_chain(cert: WitnessCertificate, rederive: bool = True) -> WitnessCertificate:
    """Run every check on adjacent links; returns the certificate with its report."""
    params = cert.params
    chain = cert.chain
    P = params.P
    form = params.sigma_form()
    checks: list[Check] = []

    def add(name, link, ok, moduli=(), detail=""):
        checks.append(Check(name, link, bool(ok), tuple(str(m) for m in moduli), detail))

    if len(chain) < 2:
        add("recursion", 0, False, detail="chain needs at least two links")
        return replace(cert, checks=tuple(checks))

    if rederive:
        try:
            fresh = derive_params(params.instance)
            fresh = replace(fresh, C=tetration_base(fresh, chain[1].r))
            same = fresh == params
            add("params", 0, same, detail="" if same else "parameters differ from a fresh derivation")
        except Exception as exc:  # noqa: BLE001 -- any failure here is a failed check
            add("params", 0, False, detail=f"re-derivation failed: {exc}")

    k = params.k
    lemma1_ok = any(
        not params.delta_poly(p, k - 1).is_zero() and params.delta_poly(p, k - 1).leading() > 0
        for p in P
    )
    add("lemma1", 0, lemma1_ok, detail="some delta e_p of the top term has positive leading coefficient")

    # every link: membership of its known primes and the alpha bound for q in P
    for link in chain:
        bad = []
        for q, v in sorted(link.known_primes.items()):
            if link.kappa == 0:
                s0 = form.sigma(link.r)
                ok = s0 != 0 and valuation(q, s0) == v
            else:
                res = _residue(params, link.r, q, v + 1)
                ok = v >= 1 and res % q**v == 0 and res % q ** (v + 1) != 0
            if not ok:
                bad.append(q)
        add("membership", link.kappa, not bad, [f"{q}^{v + 1}" for q, v in link.known_primes.items()],
            f"valuation mismatch for {bad}" if bad else "")
        bad = [q for q in P if _residue(params, link.r, q, params.alpha) == 0]
        add("lemma3", link.kappa, not bad, [f"{q}^{params.alpha}" for q in P],
            f"sigma divisible by q^alpha for {bad}" if bad else "")

    logs = [_log_abs_sigma(params, form, link.r) for link in chain]

    for prev, nxt in zip(chain, chain[1:]):
        kap = nxt.kappa
        rp, rn = prev.r, nxt.r

        bk = beta_kappa(params, prev.known_primes)
        rec_ok = (
            prev.beta_kappa == bk and rn == rp + 2 * bk and rn % 2 == 0 and rp % 2 == 0
            and rp >= 2 * params.n0 and (rn - chain[0].r) % params.beta == 0
        )
        add("recursion", kap, rec_ok, detail="" if rec_ok else "r_{k+1} != r_k + 2 beta_k")

        moduli = [q ** (params.alpha - 1) * (q - 1) for q in P]
        bad = [
            (p, i, m)
            for m in moduli
            for p in P
            for i in range(k)
            if eval_poly_mod(params.delta_poly(p, i), rn, m) != eval_poly_mod(params.delta_poly(p, i), rp, m)
        ]
        add("congP", kap, not bad, [f"{q}^{params.alpha - 1}*{q - 1}" for q in P],
            f"{len(bad)} exponent congruences fail" if bad else "")

        qstar = {q: v for q, v in prev.known_primes.items() if q not in P}
        bad = [
            (p, i, q)
            for q, v in qstar.items()
            for p in P
            for i in range(k)
            if eval_poly_mod(params.delta_poly(p, i), rn, q**v * (q - 1))
            != eval_poly_mod(params.delta_poly(p, i), rp, q**v * (q - 1))
        ]
        add("congQ", kap, not bad, [f"{q}^{v}*{q - 1}" for q, v in qstar.items()],
            f"{len(bad)} exponent congruences fail" if bad else "")

        bad = [q for q in prev.known_primes if _residue(params, rn, q, 1) != 0]
        add("lemma2", kap, not bad, list(prev.known_primes),
            f"sigma_r not divisible by {bad}" if bad else "")

        bad = []
        mods = []
        for q, v in prev.known_primes.items():
            if q in P and prev.kappa == 0:
                continue
            mods.append(f"{q}^{v + 1}")
            if _residue(params, rp, q, v + 1) != _residue(params, rn, q, v + 1):
                bad.append(q)
        add("lemma4", kap, not bad, mods, f"residues differ for {bad}" if bad else "")

        lp, ln = logs[prev.kappa], logs[kap]
        grow = lp is not None and ln is not None and ln[0] > lp[1]
        detail = "" if grow else "|sigma| growth not certified"
        if grow:
            # sigma_r^2 < A^(r^ell), the bound the B step relies on
            ctx = interval_context(128)
            bound = iv_bounds(ctx.log(params.A) * ctx.mpf(rn**params.ell))[0]
            if not 2 * ln[1] < bound:
                grow = False
                detail = "sigma^2 < A^(r^ell) not certified"
        add("growth", kap, grow, detail=detail)

        slog_ok = True
        detail = ""
        if params.C is None:
            slog_ok, detail = False, "C not set"
        else:
            step = _less_than_power(rn, params.B, rp**params.ell)
            if step is not True:
                slog_ok, detail = False, "r_{k+1} < B^(r_k^ell) not certified"
            elif not slog(params.C, rn) < kap:
                slog_ok, detail = False, f"slog_C(r_{kap}) >= {kap}"
        add("slog", kap, slog_ok, detail=detail)

    return replace(cert, checks=tuple(checks))


@dataclass(frozen=True)
class OmegaBound:
    kappa: int
    proved: int | None
    empirical: int


def omega_lower_bound(cert: WitnessCertificate) -> list[OmegaBound]:
    """Per link: kappa where the construction proves omega >= kappa (None on
    partial links), and the number of primes certified to divide sigma_r."""
    return [
        OmegaBound(link.kappa, None if link.partial else link.kappa, len(link.known_primes))
        for link in cert.chain
    ]


def check_names(checks: Iterable[Check]) -> set[str]:
    return {c.name for c in checks}
