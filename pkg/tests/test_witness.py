import dataclasses
import itertools
import json
import math
import random

import pytest

from conftest import rows_sum
from superpowers.factorization import factor
from superpowers.numeric import ExponentPolynomial, eval_poly, slog
from superpowers.residue import eval_sigma_mod
from superpowers.sequence import evaluate, normalize_even
from superpowers.witness import (
    CHECK_NAMES,
    DegenerateInstance,
    SubsetBlowup,
    WitnessCertificate,
    WitnessInfeasible,
    build_certificate,
    build_sigma_form,
    certified_valuation,
    derive_exponents,
    derive_params,
    extend_chain,
    omega_lower_bound,
    positivity_threshold,
    subsum_threshold,
    verify_chain,
)


@pytest.fixture(scope="module")
def cert23():
    return build_certificate(normalize_even(rows_sum((1, 2), (1, 3))), kappa_max=1)


def test_params_two_three(cert23):
    p = cert23.params
    assert p.P == (2, 3)
    # term 0 is 2^n, term 1 is 3^n
    assert p.e_poly[2, 0] == ExponentPolynomial((0, 1))
    assert p.e_poly[2, 1] == ExponentPolynomial((0, 0))
    assert p.e_poly[3, 0] == ExponentPolynomial((0, 0))
    assert p.e_poly[3, 1] == ExponentPolynomial((0, 1))
    assert p.i_min == {2: 1, 3: 0}
    assert p.n0 == 1 and p.lam == 2 and p.alpha == 72
    assert p.beta == 2**71 * 1 * 3**71 * 2
    assert p.A > (1 * 3) ** 2


def test_sigma_equals_s_for_two_three(cert23):
    form = cert23.params.sigma_form()
    for n in range(1, 15):
        assert form.pi(n) == 1
        assert form.sigma(n) == 2**n + 3**n


def test_chain_values_two_three(cert23):
    p = cert23.params
    r0, r1 = cert23.chain[0].r, cert23.chain[1].r
    assert r0 == 2
    assert cert23.chain[0].known_primes == {13: 1}
    # independent recomputation of beta_0 and r_1
    beta0 = 2**71 * 3**71 * 2 * 13 * 12
    assert cert23.chain[0].beta_kappa == beta0
    assert r1 == 2 * beta0 + 2
    assert p.C > r1 and slog(p.C, r1) == 0
    assert 13 in cert23.chain[1].known_primes


def test_all_checks_pass(cert23):
    assert cert23.passed, [c for c in cert23.checks if not c.passed]
    names = {c.name for c in cert23.checks}
    assert names <= set(CHECK_NAMES)
    assert {"congP", "congQ", "lemma1", "lemma2", "lemma3", "lemma4", "growth", "slog"} <= names
    congQ = [c for c in cert23.checks if c.name == "congQ"][0]
    assert congQ.moduli == ("13^1*12",)
    lemma4 = [c for c in cert23.checks if c.name == "lemma4"][0]
    assert lemma4.moduli == ("13^2",)


def test_lemma2_residue(cert23):
    assert eval_sigma_mod(cert23.params, cert23.chain[1].r, 13) == 0


def test_negative_control_r_plus_two(cert23):
    chain = list(cert23.chain)
    chain[1] = dataclasses.replace(chain[1], r=chain[1].r + 2)
    bad = verify_chain(dataclasses.replace(cert23, chain=tuple(chain), checks=()))
    failed = {c.name for c in bad.failed()}
    assert not bad.passed
    assert "congP" in failed and "recursion" in failed


@pytest.mark.parametrize("field,delta", [("beta_kappa", 1), ("known_primes", None)])
def test_negative_control_link_zero(cert23, field, delta):
    chain = list(cert23.chain)
    if field == "beta_kappa":
        chain[0] = dataclasses.replace(chain[0], beta_kappa=chain[0].beta_kappa + delta)
    else:
        chain[0] = dataclasses.replace(chain[0], known_primes={13: 1, 7: 1})
    bad = verify_chain(dataclasses.replace(cert23, chain=tuple(chain), checks=()))
    assert not bad.passed


def test_tampered_params_fail(cert23):
    p = dataclasses.replace(cert23.params, alpha=cert23.params.alpha + 1)
    bad = verify_chain(dataclasses.replace(cert23, params=p, checks=()))
    assert "params" in {c.name for c in bad.failed()}


def test_certificate_json_roundtrip(cert23):
    text = json.dumps(cert23.to_json())
    back = WitnessCertificate.from_json(json.loads(text))
    assert back.chain == cert23.chain
    again = verify_chain(back)
    assert [c.to_json() for c in again.checks] == [c.to_json() for c in cert23.checks]
    data = json.loads(text)
    assert isinstance(data["links"][1]["r"], str)


def test_omega_lower_bound(cert23):
    bounds = omega_lower_bound(cert23)
    assert bounds[0].proved == 0 and bounds[0].empirical == 1
    assert bounds[1].proved == 1 and bounds[1].empirical >= 1


def test_partial_beyond_first_extension(cert23):
    longer = verify_chain(extend_chain(cert23, allow_partial=True))
    assert longer.chain[2].partial
    assert longer.passed
    assert omega_lower_bound(longer)[2].proved is None
    r0 = longer.chain[0].r
    beta = longer.params.beta
    rs = [link.r for link in longer.chain]
    assert all(r % 2 == 0 and r >= r0 for r in rs)
    assert rs == sorted(set(rs))
    assert all((r - r0) % beta == 0 for r in rs)


def test_membership_of_known_primes(cert23):
    for link in cert23.chain:
        for q in link.known_primes:
            assert eval_sigma_mod(cert23.params, link.r, q) == 0


def test_eval_sigma_mod_examples(cert23):
    p = cert23.params
    assert eval_sigma_mod(p, 2, 13) == 0
    s0 = p.sigma(2)
    for q, v in factor(s0).factors.items():
        m = q ** (v + 1)
        assert eval_sigma_mod(p, 2, m) == s0 % m
    # 2^n + 3^n with n >= 1 is odd
    assert eval_sigma_mod(p, 6, 2) == 1
    with pytest.raises(ValueError):
        eval_sigma_mod(p, 0, 13)


def test_eval_sigma_mod_even_count_of_odd_terms():
    I = normalize_even(rows_sum((1, 3), (1, 5)))
    params = derive_params(I)
    for n in range(2, 12):
        assert eval_sigma_mod(params, n, 2) == 0


def test_certified_valuation_matches_exact(cert23):
    p = cert23.params
    for r in range(2, 40, 2):
        s = p.sigma(r)
        for q in (5, 13, 17):
            want = 0
            while s % q ** (want + 1) == 0:
                want += 1
            assert certified_valuation(p, r, q) == want


def test_single_prime_instance():
    I = normalize_even(rows_sum((1, 2), (2, 4)))
    assert I.entries == ((1, 1), (2, 2))
    assert I.deltas == (1, 2)
    params = derive_params(I)
    assert params.P == (2,)
    cert = build_certificate(I, 1)
    assert cert.passed


def test_sigma_times_pi_is_abs_u():
    rng = random.Random(41)
    cases = [[(1, 6), (2, 2)], [(1, 2, 1), (1, 1, 2)], [(3, 12), (-1, 18), (5, 2)]]
    for _ in range(5):
        cases.append([(rng.randint(1, 5), rng.randint(2, 12)) for _ in range(2)])
    for rows in cases:
        I = normalize_even(rows_sum(*rows))
        if I.k < 2:
            continue
        params = derive_exponents(I)
        form = build_sigma_form(I, params)
        u = I.as_sum()
        for n in range(max(2, params.nP), 21, 2):
            assert abs(form.sigma(n)) * form.pi(n) == abs(evaluate(u, n)), (rows, n)


@pytest.mark.parametrize(
    "rows",
    [
        [(1, 6), (2, 2)],
        [(1, 1), (1, 2)],
        [(1, 2), (-1, 3)],
        [(1, 2, 1), (1, 1, 2)],
    ],
)
def test_other_instances_verify(rows):
    cert = build_certificate(normalize_even(rows_sum(*rows)), 1)
    assert cert.passed, [c for c in cert.checks if not c.passed]


def test_degenerate_rejected():
    with pytest.raises(DegenerateInstance):
        derive_params(normalize_even(rows_sum((6, 4))))


def test_infeasible_beta_reported():
    with pytest.raises(WitnessInfeasible):
        derive_params(normalize_even(rows_sum((5, 2), (-1, 3))))


def test_subset_cap():
    rows = [(1, b) for b in range(2, 16)]
    with pytest.raises(SubsetBlowup):
        derive_params(normalize_even(rows_sum(*rows)), k_cap=12)


def test_positivity_threshold():
    # n^2 - 5n + 6 = (n-2)(n-3) > 0 for n >= 4, also at n = 1
    assert positivity_threshold([6, -5, 1]) == 4
    assert positivity_threshold([0, 1]) == 1
    assert positivity_threshold([-100, 1]) == 101
    with pytest.raises(ValueError):
        positivity_threshold([1, -1])


def test_subsum_threshold_certifies_dominance():
    rng = random.Random(42)
    for _ in range(25):
        k = rng.randint(2, 4)
        rows = [(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 12)) for _ in range(k)]
        I = normalize_even(rows_sum(*rows))
        if I.k < 2:
            continue
        N = subsum_threshold(I.entries)
        for n in range(N, N + 12):
            terms = [row[0] * row[1] ** n for row in I.entries]
            for size in range(1, I.k + 1):
                for sub in itertools.combinations(range(I.k), size):
                    total = sum(terms[i] for i in sub)
                    assert total != 0
                    assert (total > 0) == (terms[max(sub)] > 0)


def test_n0_gives_monotone_sigma():
    for rows in ([(1, 2), (1, 3)], [(7, 1), (1, 2)], [(3, 8), (5, 2)], [(2, 12), (1, 9)], [(1, 2, 1), (1, 1, 2)]):
        I = normalize_even(rows_sum(*rows))
        p = derive_params(I)
        assert p.n0 >= p.nP and p.n0 >= p.N
        vals = [abs(p.sigma(2 * m)) for m in range(p.n0, p.n0 + 8)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_lambda_and_alpha_definitions(cert23):
    p = cert23.params
    r0 = 2 * p.n0
    s0 = p.sigma(r0)
    form = p.sigma_form()
    lam = max(
        (0 if s0 % q else next(v for v in itertools.count() if s0 % q ** (v + 1)))
        for q in p.P
    ) + max(eval_poly(form.delta[q][i], r0) for q in p.P for i in range(p.k))
    assert p.lam == lam
    assert p.alpha == p.k * max(abs(r[0]) for r in p.instance.entries) * math.prod(q**lam for q in p.P)
