import itertools
import math

import numpy as np
import pytest

from multisurf.companions import build_schmeisser
from multisurf.errors import EmptyInput
from multisurf.invariants import (
    ValueTransform,
    esp_from_monic,
    esp_from_values,
    esp_from_values_batch,
    fit_value_transform,
    monic_from_esp,
)
from multisurf.spectra import eig_sym_tridiag


def esp_brute_force(values, k):
    """Independent oracle: literal sum over all k-subsets."""
    return math.fsum(math.prod(c) for c in itertools.combinations(values, k))


class TestEspFromValues:
    def test_1_2_3(self):
        assert np.array_equal(esp_from_values([1.0, 2.0, 3.0]).s, [6.0, 11.0, 6.0])

    def test_zeros(self):
        assert np.array_equal(esp_from_values(np.zeros(5)).s, np.zeros(5))

    def test_single(self):
        assert np.array_equal(esp_from_values([4.5]).s, [4.5])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            esp_from_values([])

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            m = int(rng.integers(1, 7))
            v = rng.uniform(-1, 1, m)
            s = esp_from_values(v).s
            for k in range(1, m + 1):
                assert s[k - 1] == pytest.approx(esp_brute_force(v, k), abs=1e-13)

    def test_sum_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            v = rng.uniform(-10, 10, int(rng.integers(1, 8)))
            m = len(v)
            assert abs(esp_from_values(v).s[0] - v.sum()) <= 2 * m * np.finfo(float).eps * np.sum(
                np.abs(v)
            )

    def test_permutation_bit_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            v = rng.uniform(-1, 1, 6)
            base = esp_from_values(v).s
            perm = rng.permutation(v)
            assert np.array_equal(esp_from_values(perm).s, base)

    def test_batch_matches_scalar_bitwise(self):
        rng = np.random.default_rng(6)
        vals = np.sort(rng.uniform(-1, 1, (50, 4)), axis=1)
        batch = esp_from_values_batch(vals)
        for row, expect in zip(vals, batch):
            assert np.array_equal(esp_from_values(row).s, expect)


class TestVieteMaps:
    def test_monic_from_esp_123(self):
        p = monic_from_esp(esp_from_values([1.0, 2.0, 3.0]))
        assert np.array_equal(p.coeffs, [-6.0, 11.0, -6.0])

    def test_monic_from_zero_esp(self):
        p = monic_from_esp(esp_from_values(np.zeros(4)))
        assert np.array_equal(p.coeffs, np.zeros(4))

    def test_monic_from_pm1(self):
        p = monic_from_esp(esp_from_values([-1.0, 1.0]))
        assert np.array_equal(p.coeffs, [-1.0, 0.0])

    def test_esp_from_monic_examples(self):
        from multisurf.polycore import MonicPolynomial

        assert np.array_equal(esp_from_monic(MonicPolynomial([-1.0, 0.0])).s, [0.0, -1.0])
        assert np.array_equal(esp_from_monic(MonicPolynomial(np.zeros(3))).s, np.zeros(3))
        assert np.array_equal(
            esp_from_monic(MonicPolynomial([-6.0, 11.0, -6.0])).s, [6.0, 11.0, 6.0]
        )

    def test_roundtrip_bit_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            m = int(rng.integers(2, 7))
            v = rng.uniform(-1, 1, m)
            e = esp_from_values(v)
            assert np.array_equal(esp_from_monic(monic_from_esp(e)).s, e.s)

    def test_root_consistency(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            m = int(rng.integers(2, 7))
            v = np.sort(rng.uniform(-1, 1, m))
            tri, _ = build_schmeisser(monic_from_esp(esp_from_values(v)))
            assert np.max(np.abs(eig_sym_tridiag(tri) - v)) <= 1e-8


class TestValueTransform:
    def test_zero_two_range(self):
        t = fit_value_transform(np.array([0.0, 1.3, 2.0]), margin=0.05)
        assert t.shift == 1.0
        assert t.scale == pytest.approx(2.0 / 1.9, rel=1e-15)
        assert t.forward(0.0) == pytest.approx(-0.95)
        assert t.forward(2.0) == pytest.approx(0.95)

    def test_constant_data(self):
        t = fit_value_transform(np.array([3.25, 3.25]))
        assert t.scale == 1.0 and t.shift == 3.25
        assert t.forward(3.25) == 0.0

    def test_already_scaled(self):
        t = fit_value_transform(np.array([-0.95, 0.1, 0.95]), margin=0.05)
        assert t.forward(-0.95) == pytest.approx(-0.95, abs=1e-15)
        assert t.forward(0.95) == pytest.approx(0.95, abs=1e-15)

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(9)
        vals = rng.uniform(-7, 13, 100)
        t = fit_value_transform(vals)
        back = t.inverse(t.forward(vals))
        assert np.max(np.abs(back - vals) / np.maximum(np.abs(vals), 1)) <= 1e-14

    def test_margin_validated(self):
        with pytest.raises(ValueError):
            fit_value_transform(np.array([0.0, 1.0]), margin=0.7)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            fit_value_transform(np.array([]))

    def test_order_preserved(self):
        t = ValueTransform(scale=2.5, shift=-1.0)
        v = np.array([-3.0, 0.0, 4.0])
        assert np.all(np.diff(t.forward(v)) > 0)
        assert np.all(np.diff(t.inverse(v)) > 0)
