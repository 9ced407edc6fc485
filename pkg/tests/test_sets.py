import itertools
import random
from math import fsum

import pytest

from kempner.progressions import NotKFreeError, ResidueSet
from kempner.sets import (
    KempnerSpec,
    approximate_by_kempner,
    contains,
    enumerate_upto,
    greedy_set,
    iter_members,
    kfree_certificate,
    log_density,
    longest_ap,
)

import oracles

B11 = ResidueSet(11, (0, 1, 2, 4, 5, 7))


def test_spec_validation():
    with pytest.raises(ValueError):
        KempnerSpec(ResidueSet(3, (0, 1, 2)))  # not a proper subset
    with pytest.raises(ValueError):
        KempnerSpec(ResidueSet(3, (0, 1)), shift=-1)


def test_contains_known_cases():
    assert contains(KempnerSpec(B11, shift=1), 12)  # 11 = "10" base 11
    spec = KempnerSpec(ResidueSet(3, (0, 1)))
    assert contains(spec, 3)
    assert not contains(spec, 2)
    assert contains(KempnerSpec(ResidueSet(7, (0, 2, 5))), 19)  # "25" base 7
    assert not contains(KempnerSpec(B11, shift=1), 0)


def test_enumerate_known_cases():
    assert enumerate_upto(KempnerSpec(B11, shift=1), 24) == [
        1, 2, 3, 5, 6, 8, 12, 13, 14, 16, 17, 19, 23, 24,
    ]
    assert enumerate_upto(KempnerSpec(ResidueSet(9, (0,))), 10**6) == [0]
    assert enumerate_upto(KempnerSpec(ResidueSet(3, (0, 1)), shift=1), 14) == [
        1, 2, 4, 5, 10, 11, 13, 14,
    ]


def test_enumerate_matches_digit_filter():
    rng = random.Random(5)
    for _ in range(40):
        b = rng.randrange(2, 12)
        size = rng.randrange(1, b)
        digits = tuple(sorted(rng.sample(range(b), size)))
        shift = rng.randrange(0, 3)
        spec = KempnerSpec(ResidueSet(b, digits), shift=shift)
        limit = rng.randrange(0, 4000)
        assert enumerate_upto(spec, limit) == oracles.digit_filter_members(
            digits, b, shift, limit
        )


def test_membership_duality_sampled():
    spec = KempnerSpec(ResidueSet(7, (0, 2, 5)), shift=1)
    members = set(enumerate_upto(spec, 5000))
    for x in range(5001):
        assert contains(spec, x) == (x in members)


def test_self_similarity():
    rng = random.Random(9)
    spec = KempnerSpec(B11)
    members = enumerate_upto(spec, 10**4)
    for x in rng.sample(members, 40):
        for d in spec.digits.members:
            assert contains(spec, 11 * x + d)


def test_log_density_known_cases():
    assert log_density(KempnerSpec(ResidueSet(3, (0, 1)))) == pytest.approx(
        0.63093, abs=1e-5
    )
    assert log_density(KempnerSpec(ResidueSet(5, (0, 1, 2, 3)))) == pytest.approx(
        0.86135, abs=1e-5
    )
    digits = (0, 1, 3, 7, 17, 24, 25, 28, 29, 35)
    assert log_density(KempnerSpec(ResidueSet(37, digits))) == pytest.approx(
        0.63767, abs=1e-5
    )


# ---------------------------------------------------------------------------
# longest_ap
# ---------------------------------------------------------------------------


def test_longest_ap_small_cases():
    assert longest_ap(()) == (0, None)
    assert longest_ap((7,)) == (1, None)
    assert longest_ap((3, 9)) == (2, (3, 6))
    assert longest_ap((1, 2, 3, 5)) == (3, (1, 1))
    assert longest_ap((1, 2, 4, 8, 16))[0] == 2


def test_longest_ap_on_kempner_truncations():
    # digits {0,2,5} base 7 fail the mod-b test, and the set really does
    # contain progressions: 2, 133, 264 (in base 7: 2, 250, 525)
    spec = KempnerSpec(ResidueSet(7, (0, 2, 5)))
    assert longest_ap(enumerate_upto(spec, 343)) == (3, (2, 131))
    shifted = KempnerSpec(ResidueSet(3, (0, 1)), shift=1)
    assert longest_ap(enumerate_upto(shifted, 1000))[0] == 2


def test_longest_ap_matches_pair_extension_oracle():
    rng = random.Random(13)
    for _ in range(120):
        n = rng.randrange(0, 40)
        vals = rng.sample(range(200), n)
        assert longest_ap(vals)[0] == oracles.int_ap_length(vals)


def test_longest_ap_witness_is_real():
    rng = random.Random(17)
    for _ in range(60):
        vals = sorted(rng.sample(range(300), rng.randrange(3, 50)))
        length, witness = longest_ap(vals)
        if witness is None:
            continue
        start, diff = witness
        have = set(vals)
        assert diff >= 1
        assert all(start + j * diff in have for j in range(length))


# ---------------------------------------------------------------------------
# certificate and the finite-set embedding
# ---------------------------------------------------------------------------


def test_certificate_known_cases():
    assert kfree_certificate(KempnerSpec(B11), 4)
    assert not kfree_certificate(KempnerSpec(ResidueSet(7, (0, 2, 5))), 3)
    assert not kfree_certificate(KempnerSpec(ResidueSet(5, (1, 2))), 3)
    with pytest.raises(ValueError):
        kfree_certificate(KempnerSpec(ResidueSet(2, (0,))), 3)


def test_certificate_soundness_sampled():
    rng = random.Random(3)
    confirmed = 0
    while confirmed < 60:
        b = rng.randrange(3, 21)
        k = rng.choice((3, 4, 5))
        size = rng.randrange(1, min(7, b))
        digits = tuple(sorted({0} | set(rng.sample(range(1, b), size - 1))))
        if len(digits) >= b:
            continue
        spec = KempnerSpec(digits=ResidueSet(b, digits))
        if not kfree_certificate(spec, k):
            continue
        confirmed += 1
        members = enumerate_upto(spec, b**4)
        assert longest_ap(members)[0] < k


def test_approximate_by_kempner_known_cases():
    spec = approximate_by_kempner((1, 2), 3)
    assert spec.digits == ResidueSet(5, (0, 1))
    assert spec.shift == 1
    assert kfree_certificate(spec, 3)
    assert set((1, 2)) <= set(enumerate_upto(spec, 10))

    tiny = approximate_by_kempner((1,), 3)
    assert enumerate_upto(tiny, 100) == [1]

    spec = approximate_by_kempner((1, 2, 4, 5), 3)
    assert spec.digits == ResidueSet(11, (0, 1, 3, 4))
    assert kfree_certificate(spec, 3)
    # the smaller embedding base of the shifted digits works as well
    assert kfree_certificate(KempnerSpec(ResidueSet(9, (0, 1, 3, 4))), 3)


def test_approximate_by_kempner_harmonic_domination():
    rng = random.Random(29)
    done = 0
    while done < 40:
        vals = tuple(sorted(rng.sample(range(1, 40), rng.randrange(1, 8))))
        k = rng.choice((3, 4, 5))
        if oracles.has_int_ap(vals, k):
            continue
        done += 1
        spec = approximate_by_kempner(vals, k)
        assert kfree_certificate(spec, k)
        shifted = [v + 1 - min(vals) for v in vals]
        members = set(enumerate_upto(spec, max(shifted)))
        assert set(shifted) <= members
        assert fsum(1.0 / v for v in shifted) >= fsum(1.0 / v for v in vals)


def test_approximate_by_kempner_rejects_bad_input():
    with pytest.raises(ValueError):
        approximate_by_kempner((), 3)
    with pytest.raises(ValueError):
        approximate_by_kempner((0, 2), 3)
    with pytest.raises(NotKFreeError):
        approximate_by_kempner((2, 4, 6), 3)


# ---------------------------------------------------------------------------
# greedy sequences
# ---------------------------------------------------------------------------


def test_greedy_known_prefixes():
    assert greedy_set(3, 8) == [1, 2, 4, 5, 10, 11, 13, 14]
    assert greedy_set(5, 5) == [1, 2, 3, 4, 6]


def test_greedy_matches_naive_scan():
    for k in (3, 4, 5, 6, 7):
        assert greedy_set(k, 80) == oracles.naive_greedy(k, 80)


def test_greedy_kempner_identity_small():
    for p in (3, 5, 7):
        spec = KempnerSpec(ResidueSet(p, tuple(range(p - 1))), shift=1)
        expected = list(itertools.islice(iter_members(spec), 300))
        assert greedy_set(p, 300) == expected


def test_greedy_validation():
    with pytest.raises(ValueError):
        greedy_set(2, 5)
    with pytest.raises(ValueError):
        greedy_set(3, 0)
