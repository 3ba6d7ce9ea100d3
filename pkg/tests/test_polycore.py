import math

import numpy as np
import pytest

from multisurf.errors import DegenerateLeading, DomainViolation, ZeroDivisor
from multisurf.polycore import (
    ChebyshevPoly1D,
    chebyshev_to_monomial,
    clenshaw_eval,
    horner_eval,
    monomial_to_chebyshev,
    normalize_monic_chebyshev,
    poly_derivative,
    poly_divmod,
)


class TestDerivative:
    def test_constant(self):
        assert np.array_equal(poly_derivative([3.0]), [0.0])

    def test_x_squared_minus_one(self):
        assert np.array_equal(poly_derivative([-1.0, 0.0, 1.0]), [0.0, 2.0])

    def test_x_cubed(self):
        assert np.array_equal(poly_derivative([0.0, 0.0, 0.0, 1.0]), [0.0, 0.0, 3.0])


class TestDivmod:
    def test_x2_minus_1_by_x(self):
        q, r = poly_divmod([-1.0, 0.0, 1.0], [0.0, 1.0])
        assert np.array_equal(q, [0.0, 1.0])
        assert np.array_equal(r, [-1.0])

    def test_self_division(self):
        p = [2.0, -3.0, 1.0]
        q, r = poly_divmod(p, p)
        assert np.array_equal(q, [1.0])
        assert np.array_equal(r, [0.0])

    def test_x3_by_x2(self):
        q, r = poly_divmod([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0])
        assert np.array_equal(q, [0.0, 1.0])
        assert np.array_equal(r, [0.0])

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisor):
            poly_divmod([1.0, 1.0], [0.0])

    def test_division_identity_random(self):
        # divisor leading coefficients kept away from zero: a tiny lead
        # inflates the quotient until reassembly rounding alone exceeds any
        # fixed tolerance (the library only divides by monic-normalized
        # chains, where this cannot happen)
        rng = np.random.default_rng(11)
        for _ in range(200):
            num = rng.uniform(-1, 1, rng.integers(1, 9))
            den = rng.uniform(-1, 1, rng.integers(1, len(num) + 1))
            den[-1] = rng.uniform(0.5, 1.0) * (1 if rng.random() < 0.5 else -1)
            q, r = poly_divmod(num, den)
            rebuilt = np.polynomial.polynomial.polyadd(
                np.polynomial.polynomial.polymul(q, den), r
            )
            rebuilt = np.pad(rebuilt, (0, max(0, len(num) - len(rebuilt))))
            assert len(r) < max(len(den), 2)
            assert np.max(np.abs(rebuilt[: len(num)] - num)) <= 1e-10 * np.max(np.abs(num))


class TestBasisConversion:
    def test_constant_exact(self):
        assert np.array_equal(monomial_to_chebyshev([1.0]).coeffs, [1.0])

    def test_x_squared_exact(self):
        assert np.array_equal(monomial_to_chebyshev([0.0, 0.0, 1.0]).coeffs, [0.5, 0.0, 0.5])

    def test_x_cubed_exact(self):
        assert np.array_equal(
            monomial_to_chebyshev([0.0, 0.0, 0.0, 1.0]).coeffs, [0.0, 0.75, 0.0, 0.25]
        )

    def test_t0_to_monomial(self):
        assert np.array_equal(chebyshev_to_monomial(ChebyshevPoly1D([1.0])), [1.0])

    def test_t2_to_monomial(self):
        assert np.array_equal(
            chebyshev_to_monomial(ChebyshevPoly1D([0.0, 0.0, 1.0])), [-1.0, 0.0, 2.0]
        )

    def test_half_t0_half_t2(self):
        assert np.array_equal(
            chebyshev_to_monomial(ChebyshevPoly1D([0.5, 0.0, 0.5])), [0.0, 0.0, 1.0]
        )

    def test_roundtrip_random(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            deg = int(rng.integers(0, 11))
            coeffs = rng.uniform(-1, 1, deg + 1)
            back = chebyshev_to_monomial(monomial_to_chebyshev(coeffs))
            assert np.max(np.abs(back - coeffs)) <= 1e-12

    def test_evaluation_agreement(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            deg = int(rng.integers(0, 9))
            coeffs = rng.uniform(-1, 1, deg + 1)
            x = float(rng.uniform(-1, 1))
            cheb = monomial_to_chebyshev(coeffs)
            assert clenshaw_eval(cheb, x) == pytest.approx(horner_eval(coeffs, x), abs=1e-12)


class TestNormalizeMonic:
    def test_scalar_division(self):
        out = normalize_monic_chebyshev(ChebyshevPoly1D([1.0, 0.0, 2.0]))
        assert np.array_equal(out.coeffs, [0.5, 0.0, 1.0])

    def test_already_monic(self):
        out = normalize_monic_chebyshev(ChebyshevPoly1D([0.3, -0.2, 1.0]))
        assert np.array_equal(out.coeffs, [0.3, -0.2, 1.0])

    def test_from_monomial_x2(self):
        cheb = monomial_to_chebyshev([0.0, 0.0, 1.0])  # leading coefficient 1/2
        out = normalize_monic_chebyshev(cheb)
        assert np.array_equal(out.coeffs, [1.0, 0.0, 1.0])

    def test_degenerate_leading(self):
        with pytest.raises(DegenerateLeading):
            normalize_monic_chebyshev(ChebyshevPoly1D([1.0, 1e-14]))


class TestClenshaw:
    def test_t1(self):
        assert clenshaw_eval(ChebyshevPoly1D([0.0, 1.0]), 0.3) == 0.3

    def test_t2_at_one(self):
        assert clenshaw_eval(ChebyshevPoly1D([0.0, 0.0, 1.0]), 1.0) == 1.0

    def test_x_squared_series(self):
        assert clenshaw_eval(ChebyshevPoly1D([0.5, 0.0, 0.5]), 0.5) == pytest.approx(0.25, abs=1e-15)

    def test_domain_violation(self):
        with pytest.raises(DomainViolation):
            clenshaw_eval(ChebyshevPoly1D([1.0]), 1.5)

    def test_evaluation_matches_cos_formula(self):
        x = 0.77
        for k in range(8):
            coeffs = np.zeros(k + 1)
            coeffs[k] = 1.0
            assert clenshaw_eval(ChebyshevPoly1D(coeffs), x) == pytest.approx(
                math.cos(k * math.acos(x)), abs=1e-14
            )
