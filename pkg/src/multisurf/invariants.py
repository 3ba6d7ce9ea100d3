"""Elementary symmetric polynomials of value vectors and the affine
value-axis rescaling that keeps recovered roots inside [-1, 1].

The k-th elementary symmetric polynomial (ESP) of m values is the sum of
all k-fold products. ESPs are the smooth invariants this package fits:
they are insensitive to the ordering of the surface values, and a monic
polynomial whose roots are the values is recovered from them by an
alternating sign flip of the coefficient sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput
from .polycore import MonicPolynomial


@dataclass(frozen=True)
class EspVector:
    """ESP values (s_1, ..., s_m) of an m-value vector."""

    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.atleast_1d(np.asarray(self.s, dtype=float)))

    @property
    def m(self) -> int:
        return len(self.s)


def esp_from_values(values) -> EspVector:
    """All m elementary symmetric polynomials of a value vector.

    Uses the incremental product recurrence (expanding prod(y - v_j) one
    factor at a time), O(m^2). The input is sorted ascending before
    accumulation so the result is bit-identical under input permutations.
    """
    values = np.atleast_1d(np.asarray(values, dtype=float))
    m = len(values)
    if m == 0:
        raise EmptyInput("need at least one value")
    vs = np.sort(values)
    e = np.zeros(m + 1)
    e[0] = 1.0
    for i, v in enumerate(vs):
        for k in range(min(i + 1, m), 0, -1):
            e[k] += v * e[k - 1]
    return EspVector(e[1:])


def esp_from_values_batch(values: np.ndarray) -> np.ndarray:
    """Row-wise ESPs of an (N, m) array of ascending-sorted value rows.

    Accumulation order matches :func:`esp_from_values` exactly, so each row
    of the result is bit-identical to the scalar routine applied to it.
    """
    values = np.asarray(values, dtype=float)
    n, m = values.shape
    e = np.zeros((n, m + 1))
    e[:, 0] = 1.0
    for i in range(m):
        v = values[:, i]
        for k in range(min(i + 1, m), 0, -1):
            e[:, k] += v * e[:, k - 1]
    return e[:, 1:]


def monic_from_esp(e: EspVector) -> MonicPolynomial:
    """Monic polynomial whose roots have the given ESPs.

    The coefficient of y**(m-k) is (-1)**k * s_k; sign flips are exact, so
    round-tripping through :func:`esp_from_monic` is bit-exact.
    """
    s = e.s
    m = e.m
    coeffs = np.empty(m)
    for j in range(m):
        k = m - j
        coeffs[j] = s[k - 1] if k % 2 == 0 else -s[k - 1]
    return MonicPolynomial(coeffs)


def esp_from_monic(p: MonicPolynomial) -> EspVector:
    """Inverse of :func:`monic_from_esp` (exact sign flips)."""
    m = p.degree
    s = np.empty(m)
    for k in range(1, m + 1):
        a = p.coeffs[m - k]
        s[k - 1] = a if k % 2 == 0 else -a
    return EspVector(s)


@dataclass(frozen=True)
class ValueTransform:
    """Affine map taking recorded surface values into [-1+margin, 1-margin].

    ``forward(y) = (y - shift) / scale``; ``inverse`` undoes it. Scale is
    always positive, so both maps preserve value ordering.
    """

    scale: float
    shift: float

    def forward(self, y):
        return (np.asarray(y, dtype=float) - self.shift) / self.scale

    def inverse(self, y):
        return np.asarray(y, dtype=float) * self.scale + self.shift


def fit_value_transform(values, margin: float = 0.05) -> ValueTransform:
    """Fit the affine transform mapping [min, max] of the data onto
    [-1+margin, 1-margin].

    Constant data degenerates to scale 1 with the constant as shift.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyInput("cannot fit a value transform to an empty dataset")
    if not 0.0 < margin < 0.5:
        raise ValueError(f"margin must be in (0, 0.5), got {margin}")
    lo = float(np.min(values))
    hi = float(np.max(values))
    if hi <= lo:
        return ValueTransform(scale=1.0, shift=lo)
    shift = 0.5 * (lo + hi)
    scale = (hi - lo) / (2.0 * (1.0 - margin))
    return ValueTransform(scale=scale, shift=shift)
