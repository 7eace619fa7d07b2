import math
import random
from fractions import Fraction

import pytest

from classifier_fixtures import FIXTURES
from conftest import rows_sum
from superpowers.classifier import (
    BOUNDED,
    OMEGA_BOUNDED,
    OMEGA_UNBOUNDED,
    UNBOUNDED,
    Degenerate,
    IdenticallyZero,
    NonDegenerate,
    classify,
    classify_even,
    corollary_classify,
    corollary_embedding,
    cross_validate_degenerate,
)
from superpowers.factorization import omega_rational
from superpowers.sequence import evaluate


def test_classify_even_examples(two_three):
    assert classify_even(rows_sum((6, 4))) == Degenerate((6, 4))
    assert classify_even(two_three) == NonDegenerate(((1, 2), (1, 3)))
    mixed = rows_sum((3, 2), (5, -2))
    assert classify_even(mixed) == Degenerate((8, 2))
    assert evaluate(mixed, 2) == 32 == 8 * 2**2
    assert classify_even(rows_sum((1, 2), (-1, -2))) == IdenticallyZero()


def test_classify_examples(two_three):
    assert classify(two_three).verdict == OMEGA_UNBOUNDED
    assert classify(rows_sum((6, 4))).verdict == OMEGA_BOUNDED
    res = classify(rows_sum((3, 2), (5, -2)))
    assert res.verdict == OMEGA_BOUNDED
    assert res.even == Degenerate((8, 2))
    # s_{2n-1} = -2^(2n) = -2 * 2^(2n-1)
    assert res.odd == Degenerate((-2, 2))
    for n in range(1, 31):
        assert omega_rational(evaluate(rows_sum((3, 2), (5, -2)), n)) == 1


@pytest.mark.parametrize("label,rows,expected", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_fixture_verdicts(label, rows, expected):
    S = rows_sum(*rows)
    res = classify(S)
    assert res.verdict == (OMEGA_BOUNDED if expected == "B" else OMEGA_UNBOUNDED)
    for parity, comp in (("even", res.even), ("odd", res.odd)):
        if isinstance(comp, Degenerate):
            assert all(c != 0 for c in comp.coeffs)
            assert cross_validate_degenerate(S, parity, comp, 50)


def test_cross_validate_examples(two_three):
    assert cross_validate_degenerate(rows_sum((6, 4)), "even", (6, 4), 20)
    forged = cross_validate_degenerate(two_three, "even", (1, 3), 4)
    assert not forged and forged.counterexample == 2
    assert cross_validate_degenerate(rows_sum((3, 2), (5, -2)), "even", (8, 2), 20)
    with pytest.raises(ValueError):
        cross_validate_degenerate(two_three, "both", (1, 3), 4)


def test_verdict_invariant_under_permutation_and_splitting():
    rng = random.Random(31)
    for label, rows, _ in FIXTURES:
        base = classify(rows_sum(*rows)).verdict
        shuffled = list(rows)
        rng.shuffle(shuffled)
        assert classify(rows_sum(*shuffled)).verdict == base
        first = rows[0]
        half = (Fraction(first[0]) / 2,) + tuple(first[1:])
        split = [half, half] + list(rows[1:])
        assert classify(rows_sum(*split)).verdict == base


def test_unbounded_fixtures_show_varying_omega():
    for label, rows, expected in FIXTURES:
        if expected != "U":
            continue
        S = rows_sum(*rows)
        seen = set()
        for n in range(1, 25):
            seen.add(omega_rational(evaluate(S, n)))
            if len(seen) >= 2:
                break
        assert len(seen) >= 2 or math.inf in seen, label


def test_json_shape(two_three):
    data = classify(rows_sum((Fraction(1, 2), 3))).to_json()
    assert data == {
        "even": {"kind": "Degenerate", "coeffs": ["1/2", "3"]},
        "odd": {"kind": "Degenerate", "coeffs": ["1/2", "3"]},
        "verdict": "OmegaBounded",
    }
    assert classify(two_three).to_json()["even"]["evidence"] == [["1", "2"], ["1", "3"]]


def test_corollary_examples():
    assert corollary_classify((3, 5), (2, -2))[0] == BOUNDED
    assert corollary_classify((1, 1), (2, 3))[0] == UNBOUNDED
    verdict, reason = corollary_classify((1, 1), (2, -2))
    assert verdict == UNBOUNDED and "0" in reason
    with pytest.raises(ValueError):
        corollary_classify((0, 1), (2, 3))
    with pytest.raises(ValueError):
        corollary_classify((1,), (0,))


def test_corollary_agrees_with_classify():
    rng = random.Random(32)
    for _ in range(100):
        k = rng.randint(1, 3)
        c = [Fraction(rng.randint(1, 4), rng.randint(1, 2)) for _ in range(k)]
        mag = rng.randint(1, 4)
        x = [rng.choice([-1, 1]) * (mag if rng.random() < 0.6 else rng.randint(1, 4)) for _ in range(k)]
        verdict, _ = corollary_classify(c, x)
        full = classify(corollary_embedding(c, x)).verdict
        assert (verdict == BOUNDED) == (full == OMEGA_BOUNDED)
