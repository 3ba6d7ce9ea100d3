"""multisurf: reconstruction of intersecting surfaces from value-sorted
samples via smooth invariant fitting and companion-matrix eigenvalue
recovery.

A union of m surfaces observed only as sorted value tuples has cusps that
cap polynomial approximation at O(1/n). The elementary symmetric
polynomials of the tuple are smooth whenever any smooth ordering exists,
so the package fits those (or their monic-Chebyshev images) with
multivariate Chebyshev least squares and recovers the surface values
pointwise as eigenvalues of Frobenius, Schmeisser tridiagonal, or
Chebyshev colleague matrices."""

__version__ = "0.1.0"

from .chebfit import (  # noqa: F401
    ChebyshevSeriesND,
    DomainBox,
    Truncation,
    eval_many,
    eval_nd,
    fit_lsq,
    interpolate_cheb_points_1d,
)
from .companions import (  # noqa: F401
    CrossingDiagnostic,
    SchmeisserOptions,
    build_colleague,
    build_frobenius,
    build_schmeisser,
    colleague_backward_bound,
    root_perturbation_bound,
    schmeisser_eig_interval,
)
from .errors import MultisurfError  # noqa: F401
from .invariants import (  # noqa: F401
    EspVector,
    ValueTransform,
    esp_from_monic,
    esp_from_values,
    fit_value_transform,
    monic_from_esp,
)
from .labkit import (  # noqa: F401
    GapWeightedConfig,
    MultiSurfaceDataset,
    SweepSpec,
    add_noise,
    gen_graphene,
    gen_sinh_conical,
    gen_sinusoid_1d,
    gen_sinusoid_2d,
    gen_stacked,
    load_csv,
    metric_suite,
    run_sweep,
    save_csv,
)
from .polycore import ChebyshevPoly1D, MonicPolynomial  # noqa: F401
from .reconstruct import (  # noqa: F401
    COLLEAGUE,
    DIRECT,
    FROBENIUS,
    SCHMEISSER,
    FittedModel,
    Method,
    ReconstructionReport,
    fit_model,
    load_model,
    reconstruct_grid,
    reconstruct_point,
    save_model,
    symbolic_b_from_esp,
)
from .spectra import (  # noqa: F401
    SymTridiagonal,
    UpperHessenberg,
    eig_hessenberg,
    eig_sym_tridiag,
    min_eigen_gap,
    toeplitz_spectral_radius,
    toeplitz_tridiag_eigs,
)
