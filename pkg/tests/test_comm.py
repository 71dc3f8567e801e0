import random

import pytest
from hypothesis import given, strategies as st

from congestlab import comm


def bitlists(n=None):
    size = st.integers(1, 24) if n is None else st.just(n)
    return size.flatmap(lambda k: st.tuples(st.lists(st.integers(0, 1), min_size=k, max_size=k),
                                            st.lists(st.integers(0, 1), min_size=k, max_size=k)))


def test_disj_examples():
    assert comm.disj(comm.bits("0000"), comm.bits("1111")) is True
    assert comm.disj(comm.bits("0100"), comm.bits("0110")) is False


def test_eq_examples():
    assert comm.eq(comm.bits("1010"), comm.bits("1010"))
    assert not comm.eq(comm.bits("1010"), comm.bits("1011"))


def test_length_mismatch_rejected():
    with pytest.raises(comm.InputError):
        comm.disj((0, 1), (0,))
    with pytest.raises(comm.InputError):
        comm.eq((0, 1), (0,))


def test_validate_examples():
    assert not comm.validate_disj_input(comm.bits("111"))
    assert comm.validate_disj_input(comm.bits("110"), comm.bits("011"))
    assert comm.validate_disj_input(comm.bits("0"))


@given(bitlists())
def test_disj_matches_and_oracle(xy):
    x, y = xy
    assert comm.disj(x, y) == (comm.to_int(x) & comm.to_int(y) == 0)
    assert comm.disj(x, y) == comm.disj(y, x)
    assert comm.disj(x, [0] * len(x))


@given(bitlists())
def test_eq_matches_positionwise(xy):
    x, y = xy
    assert comm.eq(x, y) == all(a == b for a, b in zip(x, y))
    assert comm.eq(x, y) == comm.eq(y, x)


def test_row_major_pairs():
    x = comm.from_pairs(4, [(1, 2)])
    assert x[4 * 1 + 2] == 1 and sum(x) == 1
    assert comm.pair_bit(x, 4, 1, 2) == 1


@given(st.lists(st.integers(0, 1), max_size=40))
def test_hex_round_trip(x):
    x = tuple(x)
    h = comm.to_hex(x)
    assert h.startswith(f"{len(x)}:")
    assert comm.from_hex(h) == x
    assert comm.parse_bits(h) == x


def test_parse_bits_forms():
    assert comm.parse_bits("0110") == (0, 1, 1, 0)
    assert comm.parse_bits("4:6") == (0, 1, 1, 0)
    a = comm.parse_bits("seed:7", 16)
    assert a == comm.parse_bits("seed:7", 16) and len(a) == 16
    with pytest.raises(comm.InputError):
        comm.parse_bits("4:6", 5)
    with pytest.raises(comm.InputError):
        comm.from_hex("2:ff")
    with pytest.raises(comm.InputError):
        comm.bits("01x")


def test_sample_pair_balanced_and_admissible():
    rng = random.Random(3)
    seen = {True: 0, False: 0}
    for _ in range(400):
        x, y = comm.sample_pair(16, rng)
        assert comm.validate_disj_input(x, y)
        seen[comm.disj(x, y)] += 1
    assert min(seen.values()) > 150
    x, y = comm.sample_pair(4, rng, disjoint=False)
    assert not comm.disj(x, y)


def test_sample_pair_length_one():
    assert comm.sample_pair(1, random.Random(0)) == ((0,), (0,))
    with pytest.raises(comm.InputError):
        comm.sample_pair(1, random.Random(0), disjoint=False)
