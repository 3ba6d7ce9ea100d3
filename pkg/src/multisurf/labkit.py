"""Experiment toolkit: multi-surface problem generators, noise injection,
error metrics (including the gap-weighted error emphasizing crossing
fidelity), dataset CSV serialization, and the sweep runner.

All randomness flows through seeded ``numpy.random.default_rng`` (PCG64),
recorded in dataset provenance, so any experiment is reproducible from its
seed."""

from __future__ import annotations

import itertools
import json
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .chebfit import DomainBox, Truncation
from .errors import (
    DimensionMismatch,
    MultisurfError,
    ParseError,
    PointOutsideDomain,
    ShapeMismatch,
    UnknownGenerator,
    ZeroAxis,
)
from .reconstruct import Method, ReconstructionReport, fit_model, reconstruct_grid

# tight-binding constants for the graphene bands: hopping energy (eV) and
# lattice constant (angstrom)
GRAPHENE_GAMMA0 = 2.8
GRAPHENE_LATTICE = 2.46


def graphene_k_point() -> np.ndarray:
    """A Dirac point of the graphene bands: (4*pi/(3*a), 0)."""
    return np.array([4.0 * np.pi / (3.0 * GRAPHENE_LATTICE), 0.0])


@dataclass
class MultiSurfaceDataset:
    """Scattered d-dimensional sample points with m value-sorted surface
    values each.

    Rows of ``values`` are re-sorted ascending on construction, so any
    ordering of the input surfaces yields the same dataset."""

    points: np.ndarray
    values: np.ndarray
    domain: DomainBox
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if len(self.points) != len(self.values):
            raise ShapeMismatch(
                f"{len(self.points)} points but {len(self.values)} value rows"
            )
        if self.points.shape[1] != self.domain.d:
            raise DimensionMismatch(
                f"points are {self.points.shape[1]}-dimensional, "
                f"domain is {self.domain.d}-dimensional"
            )
        if not self.domain.contains(self.points):
            raise PointOutsideDomain("dataset points must lie inside the domain box")
        self.values = np.sort(self.values, axis=1)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def d(self) -> int:
        return self.points.shape[1]


# --- sampling ----------------------------------------------------------------

def sample_points(domain: DomainBox, n_points=None, grid=None, seed=None) -> np.ndarray:
    """Either ``n_points`` i.i.d. uniform points in the box (seeded) or a
    uniform rectangular grid with ``grid`` counts per dimension."""
    if (n_points is None) == (grid is None):
        raise ValueError("specify exactly one of n_points or grid")
    lo = domain.bounds[:, 0]
    hi = domain.bounds[:, 1]
    if n_points is not None:
        rng = np.random.default_rng(seed)
        return lo + (hi - lo) * rng.random((int(n_points), domain.d))
    counts = (int(grid),) * domain.d if np.isscalar(grid) else tuple(int(g) for g in grid)
    if len(counts) != domain.d:
        raise DimensionMismatch(f"grid spec {counts} does not match {domain.d} dimensions")
    axes = [np.linspace(lo[i], hi[i], counts[i]) for i in range(domain.d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.reshape(-1) for m in mesh])


# --- generators ----------------------------------------------------------------

def _sinusoid_1d_surfaces(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    return np.sort(np.column_stack([np.sin(x), np.cos(2.0 * x), np.sin(2.0 * x)]), axis=1)


def _sinusoid_2d_surfaces(points: np.ndarray) -> np.ndarray:
    x, y = points[:, 0], points[:, 1]
    z1 = 2.0 * np.sin(6.0 * (x + y) / 5.0)
    z2 = 2.0 / 3.0 - np.cos(x - y)
    z3 = np.ones_like(x)
    return np.sort(np.column_stack([z1, z2, z3]), axis=1)


def _sinh_conical_surfaces(points: np.ndarray, a: float = 4.0 / 3.0, b: float = 12.0 / 5.0):
    if a == 0.0 or b == 0.0:
        raise ZeroAxis(f"cone axes must be nonzero, got a={a}, b={b}")
    x, y = points[:, 0], points[:, 1]
    z = np.sinh(np.sqrt(a * a * y * y + b * b * x * x) / (a * b))
    return np.column_stack([-z, z])


def _stacked_surfaces(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    four = np.column_stack(
        [np.sin(x), np.cos(2.0 * x), np.sin(2.0 * x), 1.0 / 3.0 + np.cos(2.0 * x / 3.0)]
    )
    return np.sort(four, axis=1)[:, :3]


def _graphene_surfaces(points: np.ndarray) -> np.ndarray:
    kx, ky = points[:, 0], points[:, 1]
    c = np.cos(GRAPHENE_LATTICE * kx / 2.0)
    cp = np.cos(np.sqrt(3.0) * GRAPHENE_LATTICE * ky / 2.0)
    radicand = 1.0 + 4.0 * c * c + 4.0 * c * cp
    # zero at the band-touching points; clip round-off that dips below
    e = GRAPHENE_GAMMA0 * np.sqrt(np.maximum(radicand, 0.0))
    return np.column_stack([-e, e])


def _graphene_domain() -> DomainBox:
    kx = graphene_k_point()[0]
    return DomainBox([(kx - 1.0, kx + 1.0), (-1.0, 1.0)])


@dataclass(frozen=True)
class GeneratorInfo:
    d: int
    m: int
    default_domain: DomainBox
    surfaces: callable


GENERATORS = {
    "sinusoid1d": GeneratorInfo(1, 3, DomainBox([(0.0, 2.0)]), _sinusoid_1d_surfaces),
    "sinusoid2d": GeneratorInfo(
        2, 3, DomainBox([(0.0, 2.0), (0.0, 2.0)]), _sinusoid_2d_surfaces
    ),
    "sinhcone": GeneratorInfo(
        2, 2, DomainBox([(-1.0, 1.0), (-1.0, 1.0)]), _sinh_conical_surfaces
    ),
    "stacked": GeneratorInfo(1, 3, DomainBox([(0.0, 2.0)]), _stacked_surfaces),
    "graphene": GeneratorInfo(2, 2, _graphene_domain(), _graphene_surfaces),
}


def make_dataset(
    name: str, n_points=None, grid=None, seed=0, domain: DomainBox | None = None, **params
) -> MultiSurfaceDataset:
    """Sample a named generator on random points or a grid."""
    if name not in GENERATORS:
        raise UnknownGenerator(
            f"no generator {name!r}; available: {', '.join(sorted(GENERATORS))}"
        )
    info = GENERATORS[name]
    domain = domain or info.default_domain
    pts = sample_points(domain, n_points=n_points, grid=grid, seed=seed)
    values = info.surfaces(pts, **params) if params else info.surfaces(pts)
    provenance = {
        "generator": name,
        "seed": None if seed is None else int(seed),
        "rng": "numpy default_rng (PCG64)",
        "n_points": None if n_points is None else int(n_points),
        "grid": None if grid is None else (int(grid) if np.isscalar(grid) else list(grid)),
        "params": {k: float(v) for k, v in params.items()},
        "noise": 0.0,
    }
    return MultiSurfaceDataset(pts, values, domain, provenance)


def gen_sinusoid_1d(n_points=None, grid=None, seed=0) -> MultiSurfaceDataset:
    """Three intersecting sinusoids sin(x), cos(2x), sin(2x) on [0, 2]."""
    return make_dataset("sinusoid1d", n_points, grid, seed)


def gen_sinusoid_2d(n_points=None, grid=None, seed=0) -> MultiSurfaceDataset:
    """Three intersecting 2D surfaces: 2 sin(6(x+y)/5), 2/3 - cos(x-y), 1."""
    return make_dataset("sinusoid2d", n_points, grid, seed)


def gen_sinh_conical(
    n_points=None, grid=None, seed=0, a: float = 4.0 / 3.0, b: float = 12.0 / 5.0
) -> MultiSurfaceDataset:
    """Two surfaces +-sinh(sqrt((x/a)^2 + (y/b)^2)) meeting in a conical
    cusp at the origin; their symmetric invariants are analytic."""
    return make_dataset("sinhcone", n_points, grid, seed, a=a, b=b)


def gen_stacked(n_points=None, grid=None, seed=0) -> MultiSurfaceDataset:
    """Lowest three of the four sorted sinusoid surfaces (the fourth,
    1/3 + cos(2x/3), is not reconstructed and leaves a cusp in the top
    returned layer near x = 1.32)."""
    return make_dataset("stacked", n_points, grid, seed)


def gen_graphene(n_points=None, grid=None, seed=0) -> MultiSurfaceDataset:
    """Tight-binding conduction and valence bands of monolayer graphene
    over a wave-vector box containing a Dirac point."""
    return make_dataset("graphene", n_points, grid, seed)


# --- noise ----------------------------------------------------------------------

def add_noise(obj, eps: float, seed=None, target: str = "values"):
    """Uniform noise in [-eps, eps], deterministic per seed.

    With a dataset and ``target="values"`` the surface values are perturbed
    and rows re-sorted. With a plain array (per-point invariant
    evaluations) and ``target="invariants"`` the array is perturbed as is.
    """
    if eps < 0:
        raise ValueError(f"noise amplitude must be >= 0, got {eps}")
    if target not in ("values", "invariants"):
        raise ValueError(f"unknown noise target {target!r}")
    rng = np.random.default_rng(seed)
    if isinstance(obj, MultiSurfaceDataset):
        if target != "values":
            raise ValueError(
                "datasets carry surface values; invariant noise is applied at fit "
                "time (see reconstruct.fit_model's invariant_noise)"
            )
        noisy = obj.values + rng.uniform(-eps, eps, size=obj.values.shape)
        provenance = dict(obj.provenance)
        provenance["noise"] = float(eps)
        if seed is not None:
            provenance["noise_seed"] = int(seed) if isinstance(seed, (int, np.integer)) else str(seed)
        return MultiSurfaceDataset(obj.points.copy(), noisy, obj.domain, provenance)
    arr = np.asarray(obj, dtype=float)
    return arr + rng.uniform(-eps, eps, size=arr.shape)


# --- metrics ----------------------------------------------------------------------

@dataclass(frozen=True)
class GapWeightedConfig:
    """Target accuracy floor for the gap-weighted error denominator."""

    eps_w: float = 5e-2

    def __post_init__(self):
        if self.eps_w <= 0:
            raise ValueError(f"eps_w must be > 0, got {self.eps_w}")


def metric_suite(truth, report: ReconstructionReport, cfg: GapWeightedConfig | None = None) -> dict:
    """Error metrics of a reconstruction against the truth.

    ``truth`` is a MultiSurfaceDataset on the same points or a callback
    mapping (N, d) points to (N, m) sorted values. Failed points are
    excluded (their count is reported). The gap-weighted error is the max
    over points and surface pairs of the pairwise-gap error divided by
    (eps_w + |true gap|), which stresses fidelity near crossings.
    """
    cfg = cfg or GapWeightedConfig()
    if isinstance(truth, MultiSurfaceDataset):
        if truth.points.shape != report.points.shape or not np.allclose(
            truth.points, report.points, atol=1e-9, rtol=0.0
        ):
            raise ShapeMismatch("truth dataset points do not match the report points")
        truth_vals = truth.values
    else:
        truth_vals = np.atleast_2d(np.asarray(truth(report.points), dtype=float))
    if truth_vals.shape != report.values.shape:
        raise ShapeMismatch(
            f"truth values {truth_vals.shape} vs reconstructed {report.values.shape}"
        )
    ok = ~report.failed
    t = truth_vals[ok]
    a = report.values[ok]
    if t.size == 0:
        nan = float("nan")
        return {"max_abs": nan, "mae": nan, "rmse": nan, "gap_weighted": nan,
                "n_failed": int(report.n_failed), "n_points": 0}
    err = np.abs(a - t)
    m = t.shape[1]
    gap_weighted = 0.0
    for i, j in itertools.combinations(range(m), 2):
        dt = t[:, j] - t[:, i]
        da = a[:, j] - a[:, i]
        gap_weighted = max(gap_weighted, float(np.max(np.abs(da - dt) / (cfg.eps_w + np.abs(dt)))))
    return {
        "max_abs": float(np.max(err)),
        "mae": float(np.mean(err)),
        "rmse": float(np.sqrt(np.mean(err**2))),
        "gap_weighted": gap_weighted,
        "n_failed": int(report.n_failed),
        "n_points": int(len(t)),
    }


# --- CSV serialization ---------------------------------------------------------

def save_csv(path, dataset: MultiSurfaceDataset) -> None:
    """Write a dataset as CSV: header x1..xd,f1..fm, 17-significant-digit
    decimals (lossless float64 roundtrip), LF newlines. The domain box and
    provenance ride along in '#' comment lines."""
    d, m = dataset.d, dataset.m
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dom = ";".join("%.17g,%.17g" % (lo, hi) for lo, hi in dataset.domain.bounds)
        fh.write(f"# domain = {dom}\n")
        if dataset.provenance:
            fh.write(f"# provenance = {json.dumps(dataset.provenance, sort_keys=True)}\n")
        fh.write(",".join([f"x{i + 1}" for i in range(d)] + [f"f{j + 1}" for j in range(m)]) + "\n")
        for p, v in zip(dataset.points, dataset.values):
            fh.write(",".join("%.17g" % x for x in itertools.chain(p, v)) + "\n")


def save_report_csv(path, report, domain: DomainBox, provenance: dict | None = None) -> None:
    """Write a reconstruction report in dataset CSV format (failed points
    keep their row with NaN values)."""
    d = report.points.shape[1]
    m = report.values.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dom = ";".join("%.17g,%.17g" % (lo, hi) for lo, hi in domain.bounds)
        fh.write(f"# domain = {dom}\n")
        if provenance:
            fh.write(f"# provenance = {json.dumps(provenance, sort_keys=True)}\n")
        fh.write(",".join([f"x{i + 1}" for i in range(d)] + [f"f{j + 1}" for j in range(m)]) + "\n")
        for p, v in zip(report.points, report.values):
            fh.write(",".join("%.17g" % x for x in itertools.chain(p, v)) + "\n")


def load_csv(path, domain: DomainBox | None = None) -> MultiSurfaceDataset:
    """Read a dataset CSV (see :func:`save_csv`).

    Column counts come from the header names. Rows with values out of
    ascending order are accepted, sorted, and counted in
    ``provenance["resorted_rows"]`` with a warning. The domain box is
    taken from the explicit argument, else a '# domain =' comment, else
    the bounding box of the points."""
    file_domain = None
    provenance = {}
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("domain ="):
                    try:
                        pairs = [
                            tuple(float(v) for v in chunk.split(","))
                            for chunk in body[len("domain ="):].strip().split(";")
                        ]
                        file_domain = DomainBox(pairs)
                    except (ValueError, IndexError) as exc:
                        raise ParseError(f"bad domain comment: {exc}", line=lineno) from exc
                elif body.startswith("provenance ="):
                    try:
                        provenance = json.loads(body[len("provenance ="):].strip())
                    except json.JSONDecodeError as exc:
                        raise ParseError(f"bad provenance comment: {exc}", line=lineno) from exc
                continue
            if header is None:
                header = [h.strip() for h in line.split(",")]
                d = sum(1 for h in header if h.startswith("x"))
                m = sum(1 for h in header if h.startswith("f"))
                expected = [f"x{i + 1}" for i in range(d)] + [f"f{j + 1}" for j in range(m)]
                if d == 0 or m == 0 or header != expected:
                    raise ParseError(
                        f"header must be x1..xd,f1..fm, got {','.join(header)}", line=lineno
                    )
                continue
            fields = line.split(",")
            if len(fields) != d + m:
                raise ParseError(
                    f"expected {d + m} fields, found {len(fields)}", line=lineno
                )
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
    if header is None:
        raise ParseError("no header line found", line=0)
    if not rows:
        raise ParseError("no data rows", line=0)
    data = np.array(rows)
    points, values = data[:, :d], data[:, d:]
    resorted = int(np.sum(np.any(np.diff(values, axis=1) < 0, axis=1)))
    if resorted:
        warnings.warn(f"{resorted} rows had non-ascending values and were sorted", stacklevel=2)
    if domain is None:
        domain = file_domain
    if domain is None:
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        degenerate = hi <= lo
        lo = np.where(degenerate, lo - 0.5, lo)
        hi = np.where(degenerate, hi + 0.5, hi)
        domain = DomainBox(np.column_stack([lo, hi]))
    provenance = dict(provenance)
    provenance.setdefault("source", str(path))
    if resorted:
        provenance["resorted_rows"] = resorted
    return MultiSurfaceDataset(points, values, domain, provenance)


# --- sweep runner ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """One experiment sweep: a data source, method x degree x noise grid,
    and an evaluation grid. Everything is deterministic given ``seed``."""

    generator: str | None = None
    data_path: str | None = None
    methods: tuple = ("colleague",)
    degrees: tuple = (40,)
    noises: tuple = (0.0,)
    noise_target: str = "invariants"
    train_points: int | None = 1000
    train_grid: tuple | None = None
    eval_grid: tuple | int = 2000
    seed: int = 0
    projection: str = "real"
    eps_w: float = 5e-2
    margin: float = 0.05
    generator_params: tuple = ()

    def __post_init__(self):
        if (self.generator is None) == (self.data_path is None):
            raise ValueError("specify exactly one of generator or data_path")
        if self.noise_target not in ("values", "invariants"):
            raise ValueError(f"unknown noise target {self.noise_target!r}")


@dataclass
class SweepRow:
    method: str
    degree: int
    noise: float
    max_abs: float
    mae: float
    rmse: float
    gap_weighted: float
    status: str


def run_sweep(spec: SweepSpec) -> list:
    """Run the (method, degree, noise) grid of an experiment spec.

    Returns one SweepRow per combination, in spec order. Failures mark
    their row "failed: ..." instead of aborting the sweep; rows whose grid
    had isolated failed points are marked "partial:k".
    """
    params = dict(spec.generator_params)
    if spec.generator is not None:
        if spec.generator not in GENERATORS:
            raise UnknownGenerator(f"no generator {spec.generator!r}")
        dataset = make_dataset(
            spec.generator,
            n_points=spec.train_points if spec.train_grid is None else None,
            grid=spec.train_grid,
            seed=spec.seed,
            **params,
        )
        info = GENERATORS[spec.generator]
        surfaces = info.surfaces
        truth = (lambda pts: surfaces(pts, **params)) if params else surfaces
        eval_points = sample_points(dataset.domain, grid=spec.eval_grid)
    else:
        dataset = load_csv(spec.data_path)
        truth = dataset
        eval_points = dataset.points

    combos = list(itertools.product(spec.methods, spec.degrees, spec.noises))
    seeds = np.random.SeedSequence(spec.seed).spawn(len(combos))
    cfg = GapWeightedConfig(eps_w=spec.eps_w)
    rows = []
    for (method_name, degree, noise), row_seed in zip(combos, seeds):
        try:
            ds = dataset
            invariant_noise = None
            if noise > 0.0:
                if spec.noise_target == "values":
                    ds = add_noise(dataset, noise, seed=row_seed, target="values")
                else:
                    invariant_noise = (noise, row_seed)
            model = fit_model(
                ds,
                Method(method_name, spec.projection),
                Truncation.total(int(degree)),
                margin=spec.margin,
                invariant_noise=invariant_noise,
            )
            report = reconstruct_grid(model, eval_points)
            metrics = metric_suite(truth, report, cfg)
            status = "ok" if metrics["n_failed"] == 0 else f"partial:{metrics['n_failed']}"
            rows.append(
                SweepRow(
                    method=method_name,
                    degree=int(degree),
                    noise=float(noise),
                    max_abs=metrics["max_abs"],
                    mae=metrics["mae"],
                    rmse=metrics["rmse"],
                    gap_weighted=metrics["gap_weighted"],
                    status=status,
                )
            )
        except MultisurfError as exc:
            rows.append(
                SweepRow(
                    method=method_name,
                    degree=int(degree),
                    noise=float(noise),
                    max_abs=float("nan"),
                    mae=float("nan"),
                    rmse=float("nan"),
                    gap_weighted=float("nan"),
                    status=f"failed: {type(exc).__name__}: {exc}",
                )
            )
    return rows


def write_sweep_csv(rows, path, spec: SweepSpec | None = None, timestamps=None) -> None:
    """Write sweep rows as CSV plus an adjacent .json metadata file
    (spec, seed, timestamps, library version)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,degree,noise,max_abs,mae,rmse,gap_weighted,status\n")
        for r in rows:
            fh.write(
                "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n"
                % (r.method, r.degree, r.noise, r.max_abs, r.mae, r.rmse, r.gap_weighted, r.status)
            )
    meta = {
        "spec": None if spec is None else asdict(spec),
        "seed": None if spec is None else spec.seed,
        "timestamps": timestamps or {"written": time.strftime("%Y-%m-%dT%H:%M:%S%z")},
        "version": __version__,
    }
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
