"""End-to-end reconstruction: fit smooth invariant surrogates to a
multi-surface dataset, then recover sorted surface values pointwise as
companion-matrix eigenvalues.

Four methods share one model shape. ``frobenius`` and ``schmeisser`` fit
the m elementary symmetric polynomials; ``colleague`` fits the m monic
Chebyshev coefficients of the same polynomial (an exact affine image of
the ESPs, precomputed per m); ``direct`` fits the value-sorted entry
functions themselves and is the cusp-limited baseline.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .chebfit import ChebyshevSeriesND, DomainBox, Truncation, eval_many, fit_lsq_multi
from .companions import (
    SchmeisserOptions,
    build_colleague,
    build_frobenius,
    build_schmeisser,
)
from .errors import (
    ComplexRootsRejected,
    DataFormatError,
    NumericError,
    ParseError,
    PointOutsideDomain,
)
from .invariants import (
    ValueTransform,
    esp_from_values_batch,
    fit_value_transform,
)
from .polycore import ChebyshevPoly1D, MonicPolynomial
from .spectra import eig_hessenberg, eig_sym_tridiag

_KINDS = ("frobenius", "schmeisser", "colleague", "direct")
_PROJECTIONS = ("real", "magnitude", "reject")
REJECT_IMAG_TOL = 1e-8


@dataclass(frozen=True)
class Method:
    """Reconstruction route plus the policy for projecting stray complex
    eigenvalues back to the real line (ignored by ``direct`` and moot for
    ``schmeisser``, whose eigenvalues are real by construction)."""

    kind: str
    complex_projection: str = "real"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown method {self.kind!r}; expected one of {_KINDS}")
        if self.complex_projection not in _PROJECTIONS:
            raise ValueError(
                f"unknown projection {self.complex_projection!r}; expected one of {_PROJECTIONS}"
            )


FROBENIUS = Method("frobenius")
SCHMEISSER = Method("schmeisser")
COLLEAGUE = Method("colleague")
DIRECT = Method("direct")


@dataclass(frozen=True)
class EspChebMap:
    """Exact affine map from ESP values (s_1..s_m) to the non-leading
    coefficients (b_0..b_{m-1}) of the monic-Chebyshev polynomial with the
    same roots: ``b = s @ matrix.T + offset``.

    Entries are integer multiples of powers of two, computed exactly and
    rounded once.
    """

    m: int
    matrix: np.ndarray
    offset: np.ndarray

    def apply(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return s @ self.matrix.T + self.offset


@lru_cache(maxsize=None)
def symbolic_b_from_esp(m: int) -> EspChebMap:
    """Precompute the ESP-to-monic-Chebyshev coefficient map for m surfaces.

    Composes the alternating Viète signs, the monomial-to-Chebyshev
    conversion table and the leading-coefficient normalization (the T_m
    coefficient of a monic degree-m monomial polynomial is 2**(1-m))."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    from .polycore import _monomial_to_cheb_table

    gamma = _monomial_to_cheb_table(m)
    scale = 2 ** (m - 1)
    matrix = np.zeros((m, m))
    offset = np.zeros(m)
    for t in range(m):
        offset[t] = float(gamma[m][t] * scale)
        for k in range(1, m + 1):
            sign = 1 if k % 2 == 0 else -1
            matrix[t, k - 1] = float(sign * gamma[m - k][t] * scale)
    return EspChebMap(m=m, matrix=matrix, offset=offset)


@dataclass(frozen=True)
class PointDiagnostics:
    """Per-point reconstruction diagnostics: the largest |imaginary part|
    met before projection (data units) and the crossing indicator (NaN for
    non-Schmeisser methods)."""

    max_imag: float
    min_offdiag: float


@dataclass(frozen=True, eq=False)
class FittedModel:
    """Immutable result of :func:`fit_model`: one Chebyshev surrogate per
    invariant (or per sorted entry for ``direct``), the value transform
    that returns eigenvalues to data units, and everything needed to
    serialize and re-evaluate.

    Fit residual norms are evaluation metadata and are not serialized."""

    method: Method
    m: int
    domain: DomainBox
    truncation: Truncation
    transform: ValueTransform
    series: tuple
    residuals: np.ndarray = field(compare=False)
    schmeisser_options: SchmeisserOptions = field(default_factory=SchmeisserOptions, compare=False)

    def with_options(self, **kwargs) -> "FittedModel":
        """Copy with evaluation-time options replaced (projection, clamping)."""
        model = self
        if "complex_projection" in kwargs:
            proj = kwargs.pop("complex_projection")
            model = replace(model, method=Method(model.method.kind, proj))
        if kwargs:
            model = replace(model, schmeisser_options=replace(model.schmeisser_options, **kwargs))
        return model


@dataclass
class ReconstructionReport:
    """Per-point reconstructed sorted values plus diagnostics.

    ``values`` rows are NaN where ``failed`` is set; ``max_imag`` is the
    largest |imaginary part| met before projection (in data units) and
    ``min_offdiag`` the smallest Schmeisser off-diagonal entry (NaN for
    other methods) -- the crossing indicator."""

    method: Method
    points: np.ndarray
    values: np.ndarray
    max_imag: np.ndarray
    min_offdiag: np.ndarray
    failed: np.ndarray
    messages: dict

    @property
    def n_failed(self) -> int:
        return int(np.sum(self.failed))


def fit_model(
    dataset,
    method: Method,
    truncation: Truncation,
    *,
    margin: float = 0.05,
    invariant_noise: tuple | None = None,
    schmeisser_options: SchmeisserOptions | None = None,
) -> FittedModel:
    """Fit the per-invariant Chebyshev surrogates for a dataset.

    ``dataset`` needs ``points`` (N, d), value-sorted ``values`` (N, m) and
    ``domain`` attributes. ``invariant_noise=(eps, seed)`` adds uniform
    noise in [-eps, eps] to the per-point quantities the method fits
    (ESPs, Chebyshev coefficients, or sorted entries for ``direct``)
    before fitting, deterministically per seed.
    """
    points = np.atleast_2d(np.asarray(dataset.points, dtype=float))
    values = np.atleast_2d(np.asarray(dataset.values, dtype=float))
    m = values.shape[1]
    transform = fit_value_transform(values, margin=margin)
    tv = transform.forward(values)
    if method.kind == "direct":
        targets = tv
    else:
        esp = esp_from_values_batch(tv)
        if method.kind == "colleague":
            targets = symbolic_b_from_esp(m).apply(esp)
        else:
            targets = esp
    if invariant_noise is not None:
        eps, seed = invariant_noise
        if eps < 0:
            raise ValueError(f"noise amplitude must be >= 0, got {eps}")
        rng = np.random.default_rng(seed)
        targets = targets + rng.uniform(-eps, eps, size=targets.shape)
    series, residuals = fit_lsq_multi(points, targets, truncation, dataset.domain)
    return FittedModel(
        method=method,
        m=m,
        domain=dataset.domain,
        truncation=truncation,
        transform=transform,
        series=tuple(series),
        residuals=np.asarray(residuals, dtype=float),
        schmeisser_options=schmeisser_options or SchmeisserOptions(),
    )


def _project(eigs: np.ndarray, projection: str):
    """Send complex eigenvalues to the real line; returns (reals, max_imag)."""
    max_imag = float(np.max(np.abs(eigs.imag))) if np.iscomplexobj(eigs) else 0.0
    if projection == "reject" and max_imag > REJECT_IMAG_TOL:
        raise ComplexRootsRejected(
            f"imaginary part {max_imag:.3e} exceeds {REJECT_IMAG_TOL:.0e}"
        )
    if projection == "magnitude":
        return np.sign(eigs.real) * np.abs(eigs), max_imag
    return np.asarray(eigs.real, dtype=float), max_imag


def _recover_row(model: FittedModel, surrogate_row: np.ndarray):
    """Sorted values (still in transformed units) from one row of
    surrogate evaluations, plus (max_imag, min_offdiag) diagnostics."""
    kind = model.method.kind
    if kind == "direct":
        return np.sort(surrogate_row), 0.0, np.nan
    if kind == "colleague":
        if model.m == 1:
            return np.array([-surrogate_row[0]]), 0.0, np.nan
        poly = ChebyshevPoly1D(np.concatenate([surrogate_row, [1.0]]))
        eigs = eig_hessenberg(build_colleague(poly))
        vals, max_imag = _project(eigs, model.method.complex_projection)
        return np.sort(vals), max_imag, np.nan
    esp = surrogate_row
    m = len(esp)
    coeffs = np.empty(m)
    for j in range(m):
        k = m - j
        coeffs[j] = esp[k - 1] if k % 2 == 0 else -esp[k - 1]
    mono = MonicPolynomial(coeffs)
    if kind == "frobenius":
        eigs = eig_hessenberg(build_frobenius(mono))
        vals, max_imag = _project(eigs, model.method.complex_projection)
        return np.sort(vals), max_imag, np.nan
    tri, diag = build_schmeisser(mono, model.schmeisser_options)
    return eig_sym_tridiag(tri), 0.0, diag.min_offdiag


def reconstruct_point(model: FittedModel, x):
    """Reconstruct the m sorted surface values at one point.

    Returns ``(values, PointDiagnostics)``; the imaginary-part diagnostic
    is reported in data units.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if not model.domain.contains(x):
        raise PointOutsideDomain(f"point {x[0]} outside the model domain")
    row = np.array([eval_many(s, x)[0] for s in model.series])
    vals, max_imag, min_off = _recover_row(model, row)
    diag = PointDiagnostics(max_imag=max_imag * model.transform.scale, min_offdiag=min_off)
    return model.transform.inverse(vals), diag


def reconstruct_grid(model: FittedModel, points) -> ReconstructionReport:
    """Reconstruct on many points; per-point failures are recorded in the
    report rather than aborting (values NaN, message kept)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = len(points)
    values = np.full((n, model.m), np.nan)
    max_imag = np.zeros(n)
    min_off = np.full(n, np.nan)
    failed = np.zeros(n, dtype=bool)
    messages: dict = {}
    if n == 0:
        return ReconstructionReport(model.method, points, values, max_imag, min_off, failed, messages)

    unit = model.domain.map_to_unit(points)
    inside = np.all(np.abs(unit) <= 1.0 + 1e-12, axis=1)
    for i in np.nonzero(~inside)[0]:
        failed[i] = True
        messages[i] = "point outside domain"
    idx = np.nonzero(inside)[0]
    if len(idx):
        sur = np.column_stack([eval_many(s, points[idx]) for s in model.series])
        for pos, i in enumerate(idx):
            try:
                vals, im, off = _recover_row(model, sur[pos])
            except NumericError as exc:
                failed[i] = True
                messages[i] = f"{type(exc).__name__}: {exc}"
                continue
            values[i] = model.transform.inverse(vals)
            max_imag[i] = im * model.transform.scale
            min_off[i] = off
    return ReconstructionReport(model.method, points, values, max_imag, min_off, failed, messages)


# --- model serialization -----------------------------------------------------
#
# Single-file binary layout, little endian throughout (documented in the
# repository README):
#
#   magic  b"MSRF"
#   u4     format version (1)
#   u1     method kind   (0 frobenius, 1 schmeisser, 2 colleague, 3 direct)
#   u1     projection    (0 real, 1 magnitude, 2 reject)
#   u4     m             surface count
#   u4     d             domain dimension
#   f8*2d  domain box    (lo, hi) per dimension
#   u1     truncation    (0 tensor, 1 total)
#   u4     n_deg; u4*n_deg degrees
#   f8*2   value transform (scale, shift)
#   u4     n_series (= m); per series:
#            u4 K; u4*(K*d) multi-indices (row major); f8*K coefficients

MODEL_MAGIC = b"MSRF"
MODEL_VERSION = 1


def save_model(model: FittedModel, path) -> None:
    """Write a fitted model to its single-file binary format."""
    out = bytearray()
    out += MODEL_MAGIC
    out += struct.pack("<I", MODEL_VERSION)
    out += struct.pack("<BB", _KINDS.index(model.method.kind),
                       _PROJECTIONS.index(model.method.complex_projection))
    d = model.domain.d
    out += struct.pack("<II", model.m, d)
    out += model.domain.bounds.astype("<f8").tobytes()
    out += struct.pack("<B", 0 if model.truncation.kind == "tensor" else 1)
    out += struct.pack("<I", len(model.truncation.degrees))
    out += np.asarray(model.truncation.degrees, dtype="<u4").tobytes()
    out += struct.pack("<dd", model.transform.scale, model.transform.shift)
    out += struct.pack("<I", len(model.series))
    for s in model.series:
        out += struct.pack("<I", len(s.coeffs))
        out += s.indices.astype("<u4").tobytes()
        out += s.coeffs.astype("<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(bytes(out))


def load_model(path) -> FittedModel:
    """Read a model written by :func:`save_model` (bit-exact roundtrip)."""
    with open(path, "rb") as fh:
        buf = fh.read()
    view = memoryview(buf)
    off = 0

    def take(n):
        nonlocal off
        chunk = view[off:off + n]
        if len(chunk) != n:
            raise ParseError("model file truncated")
        off += n
        return chunk

    if bytes(take(4)) != MODEL_MAGIC:
        raise ParseError("not a multisurf model file (bad magic)")
    (version,) = struct.unpack("<I", take(4))
    if version != MODEL_VERSION:
        raise ParseError(f"unsupported model format version {version}")
    kind_i, proj_i = struct.unpack("<BB", take(2))
    try:
        method = Method(_KINDS[kind_i], _PROJECTIONS[proj_i])
    except IndexError as exc:
        raise ParseError(f"invalid method/projection bytes ({kind_i}, {proj_i})") from exc
    m, d = struct.unpack("<II", take(8))
    bounds = np.frombuffer(take(16 * d), dtype="<f8").reshape(d, 2).copy()
    domain = DomainBox(bounds)
    (trunc_kind,) = struct.unpack("<B", take(1))
    (n_deg,) = struct.unpack("<I", take(4))
    degrees = np.frombuffer(take(4 * n_deg), dtype="<u4").tolist()
    truncation = Truncation("tensor" if trunc_kind == 0 else "total", tuple(degrees))
    scale, shift = struct.unpack("<dd", take(16))
    transform = ValueTransform(scale=scale, shift=shift)
    (n_series,) = struct.unpack("<I", take(4))
    series = []
    for _ in range(n_series):
        (k,) = struct.unpack("<I", take(4))
        indices = np.frombuffer(take(4 * k * d), dtype="<u4").reshape(k, d).astype(int)
        coeffs = np.frombuffer(take(8 * k), dtype="<f8").copy()
        series.append(ChebyshevSeriesND(domain, truncation, indices, coeffs))
    if off != len(buf):
        raise ParseError(f"{len(buf) - off} trailing bytes after model payload")
    if n_series != m:
        raise DataFormatError(f"model declares m={m} but carries {n_series} series")
    return FittedModel(
        method=method,
        m=m,
        domain=domain,
        truncation=truncation,
        transform=transform,
        series=tuple(series),
        residuals=np.full(m, np.nan),
    )
