"""Multivariate Chebyshev series over a box: least-squares fitting from
scattered samples, evaluation, and 1D interpolation at Chebyshev points.

Series are tensor products of first-kind Chebyshev polynomials composed
with the affine map of each coordinate onto [-1, 1]. Truncation is either
a per-dimension degree cap ("tensor") or a bound on the summed degree
("total"); scattered-data fits solve the design system by Householder QR.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, PointOutsideDomain, RankDeficient

TAU_DOM = 1e-12
RANK_TOL = 1e-10


class OversamplingWarning(UserWarning):
    """Fit quality warning: fewer than 2x as many points as basis terms."""


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned box in R^d given as per-dimension (lo, hi) pairs."""

    bounds: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.bounds, dtype=float))
        if b.ndim != 2 or b.shape[1] != 2:
            raise ValueError(f"bounds must be (d, 2), got shape {b.shape}")
        if np.any(b[:, 0] >= b[:, 1]):
            raise ValueError("every dimension needs lo < hi")
        object.__setattr__(self, "bounds", b)

    def __eq__(self, other):
        return isinstance(other, DomainBox) and np.array_equal(self.bounds, other.bounds)

    def __hash__(self):
        return hash(self.bounds.tobytes())

    @property
    def d(self) -> int:
        return self.bounds.shape[0]

    def map_to_unit(self, points: np.ndarray) -> np.ndarray:
        """Affine map of points in the box onto [-1, 1]^d."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        lo = self.bounds[:, 0]
        hi = self.bounds[:, 1]
        return (2.0 * points - (lo + hi)) / (hi - lo)

    def contains(self, points: np.ndarray, tol: float = TAU_DOM) -> bool:
        t = self.map_to_unit(points)
        return bool(np.all(np.abs(t) <= 1.0 + tol))


@dataclass(frozen=True)
class Truncation:
    """Which multi-indices (k_1, ..., k_d) a series may carry.

    ``tensor``: k_i <= degrees[i] per dimension. ``total``: sum k_i <= n.
    """

    kind: str
    degrees: tuple

    def __post_init__(self):
        if self.kind not in ("tensor", "total"):
            raise ValueError(f"unknown truncation kind {self.kind!r}")
        object.__setattr__(self, "degrees", tuple(int(g) for g in self.degrees))
        if any(g < 0 for g in self.degrees):
            raise ValueError("degrees must be non-negative")

    @classmethod
    def tensor(cls, degrees) -> "Truncation":
        if np.isscalar(degrees):
            degrees = (degrees,)
        return cls("tensor", tuple(degrees))

    @classmethod
    def total(cls, n: int) -> "Truncation":
        return cls("total", (n,))

    def indices(self, d: int) -> np.ndarray:
        """All admitted multi-indices for dimension d, lexicographic order."""
        if self.kind == "tensor":
            if len(self.degrees) != d:
                raise ValueError(
                    f"tensor truncation has {len(self.degrees)} degrees for a {d}-dim domain"
                )
            ranges = [range(g + 1) for g in self.degrees]
            return np.array(list(itertools.product(*ranges)), dtype=int)
        n = self.degrees[0]
        out = [k for k in itertools.product(range(n + 1), repeat=d) if sum(k) <= n]
        return np.array(out, dtype=int)

    def admits(self, index) -> bool:
        if self.kind == "tensor":
            return all(k <= g for k, g in zip(index, self.degrees))
        return sum(index) <= self.degrees[0]


@dataclass(frozen=True)
class ChebyshevSeriesND:
    """Truncated multivariate Chebyshev expansion over a domain box."""

    domain: DomainBox
    truncation: Truncation
    indices: np.ndarray
    coeffs: np.ndarray
    residual: float | None = field(default=None, compare=False)

    def __post_init__(self):
        idx = np.atleast_2d(np.asarray(self.indices, dtype=int))
        co = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if idx.shape[0] != len(co):
            raise ValueError("indices and coeffs length mismatch")
        if idx.shape[1] != self.domain.d:
            raise ValueError("multi-index width does not match domain dimension")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coeffs", co)

    def __eq__(self, other):
        return (
            isinstance(other, ChebyshevSeriesND)
            and self.domain == other.domain
            and self.truncation == other.truncation
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.domain, self.truncation, self.coeffs.tobytes()))

    @property
    def dims(self) -> int:
        return self.domain.d

    def dense_tensor(self) -> np.ndarray:
        """Coefficients scattered into a dense (deg_1+1, ..., deg_d+1) tensor."""
        shape = tuple(self.indices.max(axis=0) + 1)
        c = np.zeros(shape)
        c[tuple(self.indices.T)] = self.coeffs
        return c

    def __call__(self, points):
        return eval_many(self, points)


def _cheb_columns(t: np.ndarray, max_deg: int) -> np.ndarray:
    """T_0..T_max_deg at the mapped coordinates t, via the three-term
    recurrence; shape (len(t), max_deg + 1)."""
    cols = np.empty((len(t), max_deg + 1))
    cols[:, 0] = 1.0
    if max_deg >= 1:
        cols[:, 1] = t
    for k in range(2, max_deg + 1):
        cols[:, k] = 2.0 * t * cols[:, k - 1] - cols[:, k - 2]
    return cols


def _design_matrix(points: np.ndarray, indices: np.ndarray, domain: DomainBox) -> np.ndarray:
    t = domain.map_to_unit(points)
    per_dim = [_cheb_columns(t[:, i], int(indices[:, i].max())) for i in range(domain.d)]
    a = per_dim[0][:, indices[:, 0]]
    for i in range(1, domain.d):
        a = a * per_dim[i][:, indices[:, i]]
    return a


def fit_lsq(points, values, truncation: Truncation, domain: DomainBox) -> ChebyshevSeriesND:
    """Least-squares Chebyshev fit to scattered samples.

    Solves the design system by Householder QR; the returned series carries
    the l2 residual norm. Warns when oversampling is below 2x and raises
    RankDeficient when there are fewer points than basis terms or the
    triangular factor's diagonal collapses below ``RANK_TOL`` relative to
    its largest entry.
    """
    series, residuals = fit_lsq_multi(points, np.asarray(values, dtype=float).reshape(-1, 1),
                                      truncation, domain)
    return series[0]


def fit_lsq_multi(points, values, truncation: Truncation, domain: DomainBox):
    """Fit several right-hand sides sharing one design matrix (one QR).

    ``values`` has shape (n_points, n_series). Returns (list of series,
    residual-norm array).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if len(points) != len(values):
        raise ValueError(f"{len(points)} points but {len(values)} value rows")
    if points.shape[1] != domain.d:
        raise DimensionMismatch(
            f"points are {points.shape[1]}-dimensional, domain is {domain.d}-dimensional"
        )
    if not domain.contains(points):
        raise PointOutsideDomain("fit points must lie inside the domain box")
    indices = truncation.indices(domain.d)
    k = len(indices)
    n = len(points)
    if n < k:
        raise RankDeficient(f"{n} points cannot determine {k} basis coefficients")
    if n < 2 * k:
        warnings.warn(
            f"only {n} points for {k} basis terms (<2x oversampling); "
            "fit quality may be data limited",
            OversamplingWarning,
            stacklevel=2,
        )
    a = _design_matrix(points, indices, domain)
    q, r = np.linalg.qr(a)
    rdiag = np.abs(np.diag(r))
    if rdiag.min() < RANK_TOL * rdiag.max():
        raise RankDeficient(
            f"design matrix numerically rank deficient (diag ratio {rdiag.min() / rdiag.max():.2e})"
        )
    coeffs = solve_triangular(r, q.T @ values)
    resid = np.linalg.norm(a @ coeffs - values, axis=0)
    out = [
        ChebyshevSeriesND(domain, truncation, indices, coeffs[:, j], residual=float(resid[j]))
        for j in range(values.shape[1])
    ]
    return out, resid


def eval_many(series: ChebyshevSeriesND, points) -> np.ndarray:
    """Evaluate a series at an (N, d) point array via per-dimension
    Clenshaw reduction of the dense coefficient tensor."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != series.dims:
        raise DimensionMismatch(
            f"points are {points.shape[1]}-dimensional, series domain is {series.dims}-dimensional"
        )
    if not series.domain.contains(points):
        raise PointOutsideDomain("evaluation point outside the domain box")
    t = series.domain.map_to_unit(points)
    n = len(points)
    c = series.dense_tensor()
    res = np.broadcast_to(c, (n,) + c.shape)
    for axis in range(series.dims - 1, -1, -1):
        x = t[:, axis].reshape((n,) + (1,) * (res.ndim - 2))
        kmax = res.shape[-1]
        b1 = np.zeros(res.shape[:-1])
        b2 = np.zeros(res.shape[:-1])
        for k in range(kmax - 1, 0, -1):
            b1, b2 = res[..., k] + 2.0 * x * b1 - b2, b1
        res = res[..., 0] + x * b1 - b2
    return res


def eval_nd(series: ChebyshevSeriesND, x) -> float:
    """Evaluate at a single d-dimensional point."""
    return float(eval_many(series, np.atleast_2d(np.asarray(x, dtype=float)))[0])


def interpolate_cheb_points_1d(f, n: int, domain: DomainBox) -> ChebyshevSeriesND:
    """Degree-n interpolant of a scalar callback at the n+1 Chebyshev
    points of the second kind, mapped to a 1D domain.

    Coefficients come from the discrete cosine relations on the node set;
    the result matches a least-squares fit on the same nodes to rounding.
    """
    if domain.d != 1:
        raise ValueError("1D interpolation needs a 1D domain")
    if n < 0:
        raise ValueError("degree must be >= 0")
    lo, hi = domain.bounds[0]
    if n == 0:
        mid = 0.5 * (lo + hi)
        coeffs = np.array([float(f(mid))])
    else:
        j = np.arange(n + 1)
        t = np.cos(np.pi * j / n)
        xs = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        fj = np.array([float(f(x)) for x in xs])
        # cosine transform with halved end terms, ends of the output halved
        weights = np.ones(n + 1)
        weights[0] = weights[-1] = 0.5
        kj = np.cos(np.pi * np.outer(j, j) / n)
        coeffs = (2.0 / n) * (kj @ (weights * fj))
        coeffs[0] *= 0.5
        coeffs[-1] *= 0.5
    indices = np.arange(len(coeffs), dtype=int)[:, None]
    return ChebyshevSeriesND(domain, Truncation.tensor((n,)), indices, coeffs)
