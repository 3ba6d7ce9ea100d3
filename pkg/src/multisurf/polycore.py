"""Univariate polynomials in monomial and Chebyshev bases.

Coefficients are stored ascending everywhere: ``coeffs[k]`` multiplies
``y**k`` (monomial) or ``T_k(y)`` (Chebyshev). Degrees in this package are
tiny (the number of intersecting surfaces), so all routines favor clarity
and reproducibility over throughput.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegenerateLeading, DomainViolation, ZeroDivisor

# Absolute tolerances; degrees stay near machine scale so absolute cutoffs
# close to eps are adequate.
TAU_LEAD = 1e-13
TAU_TRIM_REL = 1e-13
TAU_DOM = 1e-12


@dataclass(frozen=True)
class MonicPolynomial:
    """Monic polynomial ``y**n + sum_k coeffs[k] * y**k``.

    ``coeffs`` holds the n non-leading coefficients ascending; the leading
    1 is implicit.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> np.ndarray:
        """All degree+1 coefficients ascending, trailing 1 explicit."""
        return np.concatenate([self.coeffs, [1.0]])

    def __call__(self, y):
        return horner_eval(self.full_coeffs(), y)


@dataclass(frozen=True)
class ChebyshevPoly1D:
    """Chebyshev series ``sum_k coeffs[k] * T_k(y)`` on [-1, 1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=float)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, y):
        return clenshaw_eval(self, y)


def horner_eval(coeffs, y):
    """Evaluate an ascending monomial coefficient sequence at y via Horner."""
    coeffs = np.asarray(coeffs, dtype=float)
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * y + c
    return acc


def poly_derivative(coeffs) -> np.ndarray:
    """Differentiate an ascending monomial coefficient sequence.

    Output length is max(len-1, 1); the derivative of a constant is (0,).
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if len(coeffs) == 1:
        return np.zeros(1)
    k = np.arange(1, len(coeffs))
    return coeffs[1:] * k


def _trim_leading(coeffs, tol):
    """Drop trailing (highest-degree) entries with magnitude <= tol."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    n = len(coeffs)
    while n > 1 and abs(coeffs[n - 1]) <= tol:
        n -= 1
    return coeffs[:n]


def poly_divmod(num, den):
    """Quotient and remainder of polynomial long division, ascending coeffs.

    Satisfies ``num = quotient * den + remainder`` with
    ``deg(remainder) < deg(den)``. Each output coefficient is accumulated
    with compensated (exactly rounded) summation via ``math.fsum`` so the
    division loop does not build up cancellation error; this matters when
    the quotient chain of near-degenerate divisions is iterated.

    The remainder is trimmed of trailing coefficients below
    ``TAU_TRIM_REL * max|num|`` in magnitude.

    Raises
    ------
    ZeroDivisor
        If ``den`` is numerically zero (all entries <= TAU_LEAD).
    """
    num = np.atleast_1d(np.asarray(num, dtype=float))
    den = _trim_leading(np.asarray(den, dtype=float), TAU_LEAD)
    if len(den) == 1 and abs(den[0]) <= TAU_LEAD:
        raise ZeroDivisor("division by numerically zero polynomial")
    nd = len(den) - 1  # degree of divisor
    lead = den[nd]
    trim_tol = TAU_TRIM_REL * float(np.max(np.abs(num))) if num.size else 0.0

    if len(num) - 1 < nd:
        return np.zeros(1), _trim_leading(num.copy(), trim_tol)

    nq = len(num) - nd  # number of quotient coefficients
    q = np.zeros(nq)
    # q computed top-down: the degree-(t+nd) coefficient of num receives
    # contributions q_u * den_{t+nd-u} from already-known higher q entries.
    for t in range(nq - 1, -1, -1):
        terms = [num[t + nd]]
        for u in range(t + 1, nq):
            j = t + nd - u
            if 0 <= j < nd:
                terms.append(-q[u] * den[j])
        q[t] = math.fsum(terms) / lead
    if nd == 0:
        return q, np.zeros(1)
    r = np.zeros(nd)
    for i in range(nd):
        terms = [num[i]]
        for u in range(nq):
            j = i - u
            if 0 <= j <= nd:
                terms.append(-q[u] * den[j])
        r[i] = math.fsum(terms)
    return q, _trim_leading(r, trim_tol)


@lru_cache(maxsize=None)
def _monomial_to_cheb_table(degree: int) -> tuple:
    """Exact conversion table: column k of row j is the T_k weight of y**j.

    Binomials are kept as exact integers; the power-of-two division happens
    once at the end of each entry.
    """
    rows = []
    for j in range(degree + 1):
        row = [Fraction(0)] * (degree + 1)
        for k in range(j % 2, j + 1, 2):
            half = (j - k) // 2
            binom = math.comb(j, half)
            scale = Fraction(1, 2**j) if k == 0 else Fraction(1, 2 ** (j - 1))
            row[k] = binom * scale
        rows.append(tuple(row))
    return tuple(rows)


def monomial_to_chebyshev(coeffs) -> ChebyshevPoly1D:
    """Re-express an ascending monomial coefficient sequence in the T_k basis."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    deg = len(coeffs) - 1
    table = _monomial_to_cheb_table(deg)
    out = []
    for k in range(deg + 1):
        out.append(float(sum(Fraction(coeffs[j]) * table[j][k] for j in range(deg + 1))))
    return ChebyshevPoly1D(np.array(out))


@lru_cache(maxsize=None)
def _cheb_monomial_coeffs(degree: int) -> tuple:
    """Integer monomial coefficients of T_0..T_degree via the three-term recurrence."""
    rows = [(1,), (0, 1)]
    for k in range(2, degree + 1):
        prev, prev2 = rows[k - 1], rows[k - 2]
        row = [0] * (k + 1)
        for i, c in enumerate(prev):
            row[i + 1] += 2 * c
        for i, c in enumerate(prev2):
            row[i] -= c
        rows.append(tuple(row))
    return tuple(rows[: degree + 1])


def chebyshev_to_monomial(p: ChebyshevPoly1D) -> np.ndarray:
    """Ascending monomial coefficients of a Chebyshev series (exact inverse
    of :func:`monomial_to_chebyshev` up to float round-off)."""
    deg = p.degree
    table = _cheb_monomial_coeffs(deg)
    out = [Fraction(0)] * (deg + 1)
    for k in range(deg + 1):
        bk = Fraction(p.coeffs[k])
        for i, c in enumerate(table[k]):
            out[i] += bk * c
    return np.array([float(v) for v in out])


def normalize_monic_chebyshev(p: ChebyshevPoly1D) -> ChebyshevPoly1D:
    """Scale a Chebyshev series so its leading coefficient is exactly 1.

    Roots are unchanged. Raises DegenerateLeading when the leading
    coefficient is below TAU_LEAD in magnitude.
    """
    lead = p.coeffs[-1]
    if abs(lead) <= TAU_LEAD:
        raise DegenerateLeading(f"leading Chebyshev coefficient {lead!r} below tolerance")
    out = p.coeffs / lead
    out[-1] = 1.0
    return ChebyshevPoly1D(out)


def clenshaw_eval(p: ChebyshevPoly1D, x: float) -> float:
    """Evaluate a Chebyshev series at x in [-1, 1] by the backward Clenshaw
    recurrence.

    Raises DomainViolation when |x| > 1 + TAU_DOM.
    """
    if abs(x) > 1.0 + TAU_DOM:
        raise DomainViolation(f"evaluation point {x} outside [-1, 1]")
    b1 = 0.0
    b2 = 0.0
    for c in p.coeffs[:0:-1]:
        b1, b2 = c + 2.0 * x * b1 - b2, b1
    return p.coeffs[0] + x * b1 - b2
