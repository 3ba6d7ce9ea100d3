"""Companion-matrix builders and perturbation-bound calculators.

Three routes from a small polynomial to an eigenvalue problem:

* Frobenius: sparse Hessenberg matrix from monomial coefficients.
* Schmeisser: real symmetric tridiagonal matrix from monomial
  coefficients, built by a Euclidean-division recursion; exists when all
  roots are real. Its off-diagonal entries double as a crossing
  diagnostic: an entry vanishes exactly where two roots collide.
* Colleague: Hessenberg "symmetric + rank-1" matrix from monic Chebyshev
  coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDerivative,
    DegreeTooSmall,
    NegativeOffdiagonal,
    ZeroDivisor,
)
from .polycore import (
    TAU_LEAD,
    ChebyshevPoly1D,
    MonicPolynomial,
    chebyshev_to_monomial,
    horner_eval,
    poly_derivative,
    poly_divmod,
)
from .spectra import SymTridiagonal, UpperHessenberg, eig_sym_tridiag

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SchmeisserOptions:
    """Tolerances controlling the tridiagonal companion construction.

    ``clamp_negative_offdiag`` replaces squared off-diagonal entries in
    [-negative_tolerance, 0) by zero; larger negatives raise
    NegativeOffdiagonal because they signal genuinely complex roots.
    ``zero_remainder_tolerance`` is relative to the dividend's max-norm and
    triggers the repeated-root block split.
    """

    clamp_negative_offdiag: bool = True
    negative_tolerance: float = 1e-10
    zero_remainder_tolerance: float = 1e-12

    def __post_init__(self):
        if self.negative_tolerance < 0 or self.zero_remainder_tolerance < 0:
            raise ValueError("tolerances must be non-negative")


@dataclass(frozen=True)
class CrossingDiagnostic:
    """Smallest off-diagonal entry of a built Schmeisser matrix and where
    it sits; values near zero flag nearby surface crossings."""

    min_offdiag: float
    offdiag_index: int


def build_frobenius(p: MonicPolynomial) -> UpperHessenberg:
    """Frobenius companion matrix: subdiagonal ones, last column -a_k."""
    n = p.degree
    if n < 1:
        raise DegreeTooSmall("companion matrix needs degree >= 1")
    a = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx + 1, idx] = 1.0
    a[:, n - 1] = -p.coeffs
    return UpperHessenberg(a)


def _schmeisser_bands(coeffs_full: np.ndarray, opts: SchmeisserOptions):
    """Euclidean-division recursion producing (diag, raw squared offdiag).

    ``coeffs_full`` is the full ascending coefficient vector of a monic
    polynomial (leading 1 included). Splits into decoupled blocks when a
    remainder vanishes (repeated roots).
    """
    n = len(coeffs_full) - 1
    y1 = coeffs_full
    y2 = poly_derivative(y1) / n
    d = np.zeros(n)
    c = np.zeros(n - 1) if n > 1 else np.zeros(0)
    for k in range(1, n + 1):
        q, r = poly_divmod(y1, y2)
        d[k - 1] = -q[0]
        if k == n:
            break
        r_full = np.zeros(len(y2) - 1)
        r_full[: len(r)] = r
        if np.max(np.abs(r_full), initial=0.0) <= opts.zero_remainder_tolerance * np.max(
            np.abs(y1)
        ):
            # repeated-root degeneracy: the matrix decouples here and the
            # remaining block is governed by the current divisor
            c[k - 1] = 0.0
            d_rest, c_rest = _schmeisser_bands(y2, opts)
            d[k:] = d_rest
            c[k:] = c_rest
            return d, c
        r_end = r_full[-1]
        if abs(r_end) <= TAU_LEAD:
            raise ZeroDivisor(
                "leading remainder coefficient vanished with a non-negligible remainder"
            )
        c[k - 1] = -r_end
        y1 = y2
        y2 = r_full / r_end
        y2[-1] = 1.0
    return d, c


def build_schmeisser(
    p: MonicPolynomial, opts: SchmeisserOptions | None = None
) -> tuple[SymTridiagonal, CrossingDiagnostic]:
    """Symmetric tridiagonal companion matrix of a real-rooted monic
    polynomial, with the crossing diagnostic read off its off-diagonal.

    The construction runs the Euclidean-division loop on (p, p'/n); the
    negated constant quotient terms form the diagonal and the negated
    leading remainder coefficients form the squared off-diagonal. Division
    uses compensated coefficient accumulation (see
    :func:`multisurf.polycore.poly_divmod`) because the loop is equivalent
    to repeated deconvolution.

    Raises
    ------
    NegativeOffdiagonal
        A squared off-diagonal entry fell below -negative_tolerance; the
        input's roots are not numerically real. Callers should fall back
        to the colleague route or reduce noise.
    ZeroDivisor
        Propagated from a degenerate polynomial division.
    """
    if opts is None:
        opts = SchmeisserOptions()
    n = p.degree
    if n < 1:
        raise DegreeTooSmall("companion matrix needs degree >= 1")
    d, c_raw = _schmeisser_bands(p.full_coeffs(), opts)
    c = c_raw.copy()
    for j, cj in enumerate(c_raw):
        if cj < 0.0:
            if not opts.clamp_negative_offdiag or cj < -opts.negative_tolerance:
                raise NegativeOffdiagonal(
                    f"squared off-diagonal entry {j} is {cj:.3e}; roots look complex"
                )
            c[j] = 0.0
    offdiag = np.sqrt(c)
    if len(offdiag) == 0:
        diagnostic = CrossingDiagnostic(min_offdiag=math.inf, offdiag_index=-1)
    else:
        j = int(np.argmin(offdiag))
        diagnostic = CrossingDiagnostic(min_offdiag=float(offdiag[j]), offdiag_index=j)
    return SymTridiagonal(d, offdiag), diagnostic


def build_colleague(p: ChebyshevPoly1D) -> UpperHessenberg:
    """Colleague matrix of a monic Chebyshev series (leading coefficient
    exactly 1): a symmetric tridiagonal part with 1/2 couplings (sqrt(2)/2
    in the bottom-right pair) minus the rank-1 row carrying the
    coefficients, with b_0 weighted by sqrt(2).

    Raises DegreeTooSmall for degree < 2; the linear case has the closed
    form root -b_0 and needs no matrix.
    """
    if p.coeffs[-1] != 1.0:
        raise ValueError("colleague construction requires a monic-normalized series")
    n = p.degree
    if n < 2:
        raise DegreeTooSmall("colleague matrix needs degree >= 2; use root = -b_0 for degree 1")
    b = p.coeffs[:-1]
    a = np.zeros((n, n))
    for i in range(n - 2):
        a[i, i + 1] = 0.5
        a[i + 1, i] = 0.5
    a[n - 2, n - 1] = _SQRT2 / 2.0
    a[n - 1, n - 2] = _SQRT2 / 2.0
    c_row = np.empty(n)
    c_row[: n - 1] = b[1:][::-1]
    c_row[n - 1] = _SQRT2 * b[0]
    a[0, :] -= 0.5 * c_row
    return UpperHessenberg(a)


def root_perturbation_bound(p, r: float, ell: int, eps: float) -> float:
    """Leading-order bound on the shift of a multiplicity-``ell`` root under
    a coefficient perturbation of size ``eps``:

        eps**(1/ell) * |p^(ell)(r) / ell!| ** (-1/ell).

    Accepts monomials or Chebyshev series; raises DegenerateDerivative when
    the ell-th derivative at the root is numerically zero.
    """
    if ell < 1:
        raise ValueError(f"multiplicity must be >= 1, got {ell}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"perturbation size must be in (0, 1), got {eps}")
    if isinstance(p, ChebyshevPoly1D):
        coeffs = chebyshev_to_monomial(p)
    elif isinstance(p, MonicPolynomial):
        coeffs = p.full_coeffs()
    else:
        coeffs = np.asarray(p, dtype=float)
    for _ in range(ell):
        coeffs = poly_derivative(coeffs)
    val = horner_eval(coeffs, r)
    if abs(val) <= TAU_LEAD:
        raise DegenerateDerivative(
            f"|p^({ell})({r})| = {abs(val):.3e} too small for a conditioning bound"
        )
    return eps ** (1.0 / ell) * abs(val / math.factorial(ell)) ** (-1.0 / ell)


def schmeisser_eig_interval(t: SymTridiagonal, eps_c: float) -> np.ndarray:
    """Per-eigenvalue enclosures [lambda_j - 3*eps_c, lambda_j + 3*eps_c]
    valid for any entrywise perturbation of the matrix bounded by eps_c."""
    if eps_c < 0:
        raise ValueError(f"eps_c must be >= 0, got {eps_c}")
    lam = eig_sym_tridiag(t)
    return np.column_stack([lam - 3.0 * eps_c, lam + 3.0 * eps_c])


def colleague_backward_bound(
    c, eps_h: float, eps_1: float, eps_c: float, n: int | None = None
) -> float:
    """First-order bound on the Chebyshev-coefficient backward error of a
    perturbed colleague matrix:

        (6*||c||*eps_1 + 2*sqrt(n)*eps_c + (5 + 16*sqrt(n)*||c||)*eps_h) * n**2

    where ``c`` is the rank-1 coefficient row and the epsilons bound the
    perturbations of the symmetric part, of e_1, and of c respectively.
    """
    if min(eps_h, eps_1, eps_c) < 0:
        raise ValueError("perturbation bounds must be non-negative")
    c = np.asarray(c, dtype=float)
    if n is None:
        n = len(c)
    norm_c = float(np.linalg.norm(c))
    sqrt_n = math.sqrt(n)
    return (6.0 * norm_c * eps_1 + 2.0 * sqrt_n * eps_c + (5.0 + 16.0 * sqrt_n * norm_c) * eps_h) * n**2
