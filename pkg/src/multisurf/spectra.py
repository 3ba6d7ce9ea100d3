"""Dense eigensolvers for the small matrices companion-matrix
reconstruction produces, plus closed-form tridiagonal Toeplitz spectra.

Everything here is written out explicitly rather than delegated to LAPACK:
the matrices are m-by-m with m the surface count (single digits), and the
solvers must have fully specified failure behavior (a hard iteration cap
that raises instead of returning a best effort) and structural guarantees
(real output for symmetric tridiagonal input, exact conjugate pairing for
real Hessenberg input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SymTridiagonal:
    """Real symmetric tridiagonal matrix stored as its two bands."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", np.atleast_1d(np.asarray(self.diag, dtype=float)))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag, dtype=float).reshape(-1))
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError(
                f"offdiag length {len(self.offdiag)} != diag length {len(self.diag)} - 1"
            )

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        idx = np.arange(self.n - 1)
        a[idx, idx + 1] = self.offdiag
        a[idx + 1, idx] = self.offdiag
        return a


@dataclass(frozen=True)
class UpperHessenberg:
    """Dense real matrix with zeros below the first subdiagonal."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] > 2 and np.any(np.tril(a, -2) != 0.0):
            raise ValueError("entries below the first subdiagonal must be zero")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def eig_sym_tridiag(t: SymTridiagonal, max_iter_per_eig: int = 50) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric tridiagonal matrix.

    Implicit-shift QL iteration with Wilkinson shifts. The result is real
    by construction: all arithmetic stays in the real field.

    Raises
    ------
    NoConvergence
        If any eigenvalue fails to settle within ``max_iter_per_eig``
        iterations, which signals corrupt input (NaNs, infinities).
    """
    n = t.n
    d = t.diag.copy()
    if n == 1:
        return d
    e = np.concatenate([t.offdiag, [0.0]])

    for l in range(n):
        iterations = 0
        while True:
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter_per_eig:
                raise NoConvergence(
                    f"tridiagonal eigenvalue {l} not converged after {max_iter_per_eig} iterations"
                )
            # Wilkinson shift from the leading 2x2 of the active block.
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d)


def _balance(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling by radix-2 powers (norm equilibration).

    Exact powers of two keep the transform free of rounding error and
    preserve the Hessenberg zero pattern.
    """
    a = a.copy()
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = float(np.sum(np.abs(a[i, :]))) - abs(a[i, i])
            c = float(np.sum(np.abs(a[:, i]))) - abs(a[i, i])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= sqrdx
                g = r * radix
                while c > g:
                    f /= radix
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    a[i, :] *= 1.0 / f
                    a[:, i] *= f
    return a


def eig_hessenberg(h, max_total_iters: int | None = None) -> np.ndarray:
    """All eigenvalues of a real upper Hessenberg matrix, unordered.

    Balances the matrix, then runs Francis double-shift QR with deflation.
    Complex eigenvalues emerge from 2x2 blocks whose roots are formed as
    ``x +- i*y`` with the same x and y, so conjugate pairs are exact.

    The iteration runs in the widest native float the platform offers
    (80-bit extended on x86) and rounds the eigenvalues to double at the
    end: companion matrices can carry coefficient rows of large norm, and
    the extra mantissa bits keep the backward error of the QR sweep from
    being amplified into the roots.

    Raises NoConvergence once the total QR iteration count exceeds
    ``max_total_iters`` (default ``30 * n``).
    """
    if isinstance(h, UpperHessenberg):
        a = h.entries
    else:
        a = UpperHessenberg(np.asarray(h, dtype=float)).entries
    a = a.astype(np.longdouble)
    _eps = float(np.finfo(np.longdouble).eps)
    abs_, sqrt, copysign = np.abs, np.sqrt, np.copysign
    n = a.shape[0]
    if max_total_iters is None:
        max_total_iters = 30 * n
    if n == 1:
        return np.array([complex(a[0, 0])])
    a = _balance(a)
    anorm = np.sum(abs_(np.triu(a, -1)))
    eig = []
    nn = n - 1
    t = np.longdouble(0.0)
    total_its = 0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs_(a[l - 1, l - 1]) + abs_(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs_(a[l, l - 1]) <= _eps * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                eig.append(complex(x + t))
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = sqrt(abs_(q))
                x = x + t
                if q >= 0.0:
                    z = p + copysign(z, p)
                    eig.append(complex(x + z))
                    eig.append(complex(x + z if z == 0.0 else x - w / z))
                else:
                    eig.append(complex(float(x + p), float(z)))
                    eig.append(complex(float(x + p), -float(z)))
                nn -= 2
                break
            total_its += 1
            if total_its > max_total_iters:
                raise NoConvergence(
                    f"Hessenberg QR exceeded {max_total_iters} total iterations"
                )
            if its == 10 or its == 20:
                # exceptional shift to break symmetry-induced stalls
                t = t + x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs_(a[nn, nn - 1]) + abs_(a[nn - 1, nn - 2])
                y = x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs_(p) + abs_(q) + abs_(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs_(a[m, m - 1]) * (abs_(q) + abs_(r))
                v = abs_(p) * (abs_(a[m - 1, m - 1]) + abs_(z) + abs_(a[m + 1, m + 1]))
                if u <= _eps * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
            for i in range(m + 3, nn + 1):
                a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = a[k + 2, k - 1] if k != nn - 1 else np.longdouble(0.0)
                    x = abs_(p) + abs_(q) + abs_(r)
                    if x == 0.0:
                        continue
                    p /= x
                    q /= x
                    r /= x
                s = copysign(sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p2 = a[k, j] + q * a[k + 1, j]
                    if k != nn - 1:
                        p2 += r * a[k + 2, j]
                        a[k + 2, j] -= p2 * z
                    a[k + 1, j] -= p2 * y
                    a[k, j] -= p2 * x
                for i in range(l, min(nn, k + 3) + 1):
                    p2 = x * a[i, k] + y * a[i, k + 1]
                    if k != nn - 1:
                        p2 += z * a[i, k + 2]
                        a[i, k + 2] -= p2 * r
                    a[i, k + 1] -= p2 * q
                    a[i, k] -= p2
    return np.array(eig)


def toeplitz_tridiag_eigs(a: float, b: float, c: float, n: int) -> np.ndarray:
    """Closed-form eigenvalues of the n-by-n tridiagonal Toeplitz matrix
    with diagonal a, superdiagonal b and subdiagonal c:

        lambda_j = a + 2*sqrt(b*c)*cos(j*pi/(n+1)),  j = 1..n.

    Returned in j order (descending cosine). Real when b*c >= 0, complex
    otherwise.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    j = np.arange(1, n + 1)
    cosines = np.cos(j * np.pi / (n + 1))
    prod = b * c
    if prod >= 0.0:
        return a + 2.0 * math.sqrt(prod) * cosines
    return a + 2.0j * math.sqrt(-prod) * cosines


def toeplitz_spectral_radius(a: float, b: float, c: float, n: int) -> float:
    """Spectral radius of the tridiagonal Toeplitz matrix: the larger of
    |lambda_1| and |lambda_n| (the extreme cosine arguments), bounded above
    by |a| + 2*|sqrt(b*c)|. Computed through the same closed form as
    :func:`toeplitz_tridiag_eigs` so it matches max|lambda_j| bit for bit."""
    eigs = toeplitz_tridiag_eigs(a, b, c, n)
    return float(np.max(np.abs(eigs[[0, -1]])))


def min_eigen_gap(eigs) -> float:
    """Smallest consecutive difference of an ascending eigenvalue list;
    +inf when fewer than two eigenvalues exist."""
    eigs = np.atleast_1d(np.asarray(eigs, dtype=float))
    if len(eigs) < 2:
        return math.inf
    return float(np.min(np.diff(eigs)))
