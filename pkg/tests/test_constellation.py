import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equalab.constellation import Constellation


def test_bpsk_points_exact():
    c = Constellation.mpsk(2)
    np.testing.assert_array_equal(c.points, np.array([1.0 + 0j, -1.0 + 0j]))


def test_unit_energy():
    for m in (2, 4, 8, 16):
        c = Constellation.mpsk(m)
        np.testing.assert_allclose(np.abs(c.points), 1.0, atol=1e-15)


def test_points_distinct():
    c = Constellation.mpsk(8)
    assert len(set(np.round(c.points, 12))) == 8


def test_rejects_bad_order():
    for m in (0, 1, 3, 6, 12):
        with pytest.raises(ValueError):
            Constellation.mpsk(m)


def test_gray_adjacent_points_differ_one_bit():
    for m in (4, 8, 16):
        c = Constellation.mpsk(m)
        for i in range(m):
            a, b = c.gray_map[i], c.gray_map[(i + 1) % m]
            assert np.sum(a != b) == 1


def test_gray_map_bijective():
    c = Constellation.mpsk(8)
    patterns = {tuple(row) for row in c.gray_map}
    assert len(patterns) == 8


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 4, 8]), st.integers(0, 10_000))
def test_modulate_demodulate_roundtrip(m, seed):
    c = Constellation.mpsk(m)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=12 * c.bits_per_symbol)
    syms = c.modulate_bits(bits)
    np.testing.assert_array_equal(c.demodulate(syms), bits)


def test_hard_decision_is_nearest():
    c = Constellation.mpsk(4)
    noisy = c.points + 0.3 * np.exp(1j * 0.5)
    dec = c.hard_decision(noisy)
    for got, ref in zip(dec, c.points):
        assert np.all(np.abs(got - noisy) >= np.abs(ref - noisy) - 1e-12)


def test_index_of_exact_points():
    c = Constellation.mpsk(8)
    np.testing.assert_array_equal(c.index_of(c.points), np.arange(8))


def test_bpsk_single_bit_per_symbol():
    c = Constellation.mpsk(2)
    assert c.bits_per_symbol == 1
    np.testing.assert_array_equal(c.modulate_bits([0, 1]), [1.0, -1.0])
