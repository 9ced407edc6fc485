import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kempner.progressions import (
    APWitness,
    NotKFreeError,
    ResidueSet,
    candidate_extensions,
    embedding_base,
    extend_state,
    find_ap_witness,
    find_integer_ap,
    initial_state,
    is_kfree_mod,
    state_from_digits,
)

import oracles


# ---------------------------------------------------------------------------
# is_kfree_mod / find_ap_witness
# ---------------------------------------------------------------------------


def test_kfree_known_cases():
    assert is_kfree_mod(ResidueSet(3, (0, 1)), 3)
    assert not is_kfree_mod(ResidueSet(6, (1, 3, 5)), 3)
    assert not is_kfree_mod(ResidueSet(7, (0, 2, 5)), 3)
    assert is_kfree_mod(ResidueSet(11, (0, 1, 2, 4, 5, 7)), 4)


def test_witness_is_smallest_and_consistent():
    w = find_ap_witness(ResidueSet(7, (0, 2, 5)), 3)
    assert (w.start, w.diff, w.length) == (5, 2, 3)
    assert w.residues(7) == (5, 0, 2)
    # the 2M-bound case: {0,1,3,4} fails exactly at b = 2*max
    w = find_ap_witness(ResidueSet(8, (0, 1, 3, 4)), 3)
    assert (w.start, w.diff, w.length) == (0, 4, 3)
    assert w.residues(8) == (0, 4, 0)
    assert find_ap_witness(ResidueSet(3, (0, 1)), 3) is None


def test_witness_agrees_with_exhaustive_scan():
    rng = random.Random(7)
    for _ in range(300):
        b = rng.randrange(3, 16)
        members = tuple(sorted(rng.sample(range(b), rng.randrange(1, b))))
        k = rng.choice((3, 4, 5))
        w = find_ap_witness(ResidueSet(b, members), k)
        brute = oracles.mod_ap_witness(members, b, k)
        assert (w is None) == (brute is None)
        if w is not None:
            assert all(r in members for r in w.residues(b))


def test_degenerate_inputs():
    assert is_kfree_mod(ResidueSet(5, ()), 3)  # empty set is vacuously free
    assert is_kfree_mod(ResidueSet(9, (4,)), 3)
    with pytest.raises(ValueError):
        is_kfree_mod(ResidueSet(5, (0, 1)), 2)
    with pytest.raises(ValueError):
        ResidueSet(5, (0, 5))
    with pytest.raises(ValueError):
        ResidueSet(5, (2, 2))
    with pytest.raises(ValueError):
        ResidueSet(1, (0,))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_window_matches_bruteforce(data):
    b = data.draw(st.integers(2, 30))
    members = tuple(
        sorted(data.draw(st.sets(st.integers(0, b - 1), max_size=b)))
    )
    k = data.draw(st.integers(3, 5))
    assert is_kfree_mod(ResidueSet(b, members), k) == (
        not oracles.has_mod_ap(members, b, k)
    )


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_monotone_under_subsets_and_k(data):
    b = data.draw(st.integers(3, 20))
    members = tuple(
        sorted(data.draw(st.sets(st.integers(0, b - 1), min_size=1, max_size=b - 1)))
    )
    k = data.draw(st.integers(3, 5))
    if is_kfree_mod(ResidueSet(b, members), k):
        sub = tuple(
            sorted(data.draw(st.sets(st.sampled_from(members), max_size=len(members))))
        )
        assert is_kfree_mod(ResidueSet(b, sub), k)
        assert is_kfree_mod(ResidueSet(b, members), k + 1)


# ---------------------------------------------------------------------------
# SearchState / extend_state
# ---------------------------------------------------------------------------


def _scratch_extensions(members, b, k):
    start = (max(members) + 1) if members else 0
    return tuple(
        t
        for t in range(start, b - 1)
        if not oracles.has_mod_ap(tuple(sorted(members + (t,))), b, k)
    )


def test_root_state_and_first_extension():
    state = initial_state(11, 4)
    assert state.digits.members == (0,)
    assert state.candidates == tuple(range(1, 10))
    child = extend_state(state, 1)
    assert child.digits.members == (0, 1)
    # fewer than k residues cannot carry a 4-term progression
    assert 2 in child.candidates


def test_unreachable_candidate_is_never_produced():
    # {0,1,2} mod 4 carries the progression 0,2,0,2; so 2 never enters T
    assert candidate_extensions(ResidueSet(4, (0, 1)), 4) == ()
    state = initial_state(4, 4)
    for t in state.candidates:
        assert extend_state(state, t).digits.members != (0, 1, 2)


def test_extend_rejects_nonmembers_of_t():
    state = initial_state(7, 3)
    with pytest.raises(ValueError):
        extend_state(state, 6)  # 6 = b-1 is outside the candidate range


def test_extension_at_max_empties_t():
    state = initial_state(9, 3)
    top = state.candidates[-1]
    assert extend_state(state, top).candidates == ()


def test_extend_state_equals_scratch_definition():
    rng = random.Random(11)
    for _ in range(60):
        b = rng.randrange(5, 15)
        k = rng.choice((3, 4))
        state = initial_state(b, k, require_zero=rng.random() < 0.8)
        while state.candidates:
            t = rng.choice(state.candidates)
            state = extend_state(state, t)
            assert state.candidates == _scratch_extensions(
                state.digits.members, b, k
            )


def test_state_from_digits_checks_freeness():
    with pytest.raises(NotKFreeError):
        state_from_digits(6, 3, (1, 3, 5))
    st_ = state_from_digits(11, 4, (0, 1))
    assert st_.candidates == _scratch_extensions((0, 1), 11, 4)


# ---------------------------------------------------------------------------
# embedding_base
# ---------------------------------------------------------------------------


def test_embedding_base_known_cases():
    assert embedding_base((0, 1, 3, 4), 3) == 9
    assert is_kfree_mod(ResidueSet(9, (0, 1, 3, 4)), 3)
    assert not is_kfree_mod(ResidueSet(8, (0, 1, 3, 4)), 3)  # b = 2M fails
    assert embedding_base((0,), 3) == 1
    assert embedding_base((), 4) == 1


def test_embedding_base_rejects_progressions():
    with pytest.raises(NotKFreeError) as err:
        embedding_base((1, 2, 3, 5), 3)
    assert err.value.witness == (1, 1)


def test_find_integer_ap():
    assert find_integer_ap((1, 2, 4, 5, 10), 3) is None
    assert find_integer_ap((3, 7, 11, 15), 4) == (3, 4)


def test_embedding_bound_property():
    rng = random.Random(23)
    done = 0
    while done < 150:
        m = rng.randrange(1, 41)
        vals = tuple(sorted(rng.sample(range(m + 1), rng.randrange(1, min(10, m + 2)))))
        k = rng.choice((3, 4, 5))
        if oracles.has_int_ap(vals, k):
            continue
        done += 1
        top = max(vals)
        assert embedding_base(vals, k) == 2 * top + 1
        for b in (2 * top + 1, 2 * top + 2, 2 * top + 10):
            if b >= 2:
                assert is_kfree_mod(ResidueSet(b, vals), k)
