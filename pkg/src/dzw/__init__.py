"""Dynamical zeta workbench.

Orbit zeta functions, transfer-operator determinants, zeta-regularized
determinants and analytic torsion, evaluated and cross-checked on exactly
solvable models (suspension flows over subshifts of finite type, twisted
circle bundles, constant-curvature orbit data).
"""

from ._backend import BACKEND
from .errors import (
    BadDimension,
    BranchCut,
    ConvergenceDomain,
    DegenerateOrbit,
    Diverging,
    FitFailure,
    IndexOutOfRange,
    InvariantError,
    MissingPoincare,
    MissingTrace,
    NonAcyclic,
    PoleAtZero,
    PoleHit,
    SchemaError,
    SingularFactor,
    UnsupportedModel,
    WorkbenchError,
    ZeroMode,
)
from .orbit_model import (
    HolonomyRep,
    OrbitCatalog,
    OrbitPower,
    PoincareSpectrum,
    PrimeOrbit,
    constant_curvature_poincare,
    expand_powers,
    ext_power_trace,
    fuller_index,
    holonomy_trace,
    lefschetz_index,
    sym_power_trace,
)
from .spectral_zeta import (
    HeatExpansion,
    HurwitzFamily,
    SpectrumModel,
    alternating_shifted_sum,
    det_type_fit,
    drop_low_family_modes,
    heat_expansion,
    heat_trace,
    hurwitz_zeta,
    is_odd,
    logdet_asymptotic,
    reg_det,
    spectral_zeta,
    zeta_at_zero,
)
from .symbolic_dynamics import (
    CycleWord,
    EulerProductModel,
    SftEdge,
    SftExactModel,
    SftSystem,
    build_catalog,
    contraction_radius,
    cycle_to_orbit,
    enumerate_prime_cycles,
    exact_orbit_sum,
    period_point_count,
    transfer_determinant,
)
from .torsion import LaplacianSpectra, analytic_torsion, circle_model, fried_residual
from .zeta_series import (
    RegularizedOrbitSum,
    SeriesValue,
    TruncationBudget,
    orbit_zeta,
    reduce_mod_2pi_i,
    regularized_orbit_sum,
    ruelle_from_selberg,
    ruelle_log,
    selberg_log,
)

__version__ = "0.1.0"
