"""Analytic torsion from per-degree Laplacian spectra, and the comparison of
log-torsion against regularized orbit sums.

The built-in circle model is the classical sanity instance: a flat unit line
bundle over the circle twisted by e^{2 pi i a} has Laplacian spectrum
(2 pi / L)^2 (n + a)^2 over n in Z in degrees 0 and 1, and two prime orbits
of length L with scalar holonomies e^{+-2 pi i a}.  The circle is not
hyperbolic; it is used solely because both sides of the torsion/orbit-sum
comparison are exactly computable.  The overall sign between the two sides is
a convention and is carried explicitly (default -1, fixed by this model).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import InvariantError, NonAcyclic
from .orbit_model import HolonomyRep, OrbitCatalog, PrimeOrbit
from .spectral_zeta import HurwitzFamily, SpectrumModel, reg_det
from .symbolic_dynamics import EulerProductModel
from .zeta_series import (
    RegularizedOrbitSum,
    TruncationBudget,
    reduce_mod_2pi_i,
    regularized_orbit_sum,
)


@dataclass(frozen=True)
class LaplacianSpectra:
    """Spectra of the form Laplacians, degree by degree.

    ``per_degree[p]`` is the spectrum model for degree p (0 <= p <= dim); a
    missing degree means an empty spectrum, contributing a trivial factor 1.
    Spectra are strictly positive by construction (acyclicity is a declared
    input property).
    """

    dim: int
    per_degree: tuple[Optional[SpectrumModel], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvariantError("dimension must be >= 1")
        if len(self.per_degree) != self.dim + 1:
            raise InvariantError("per_degree must cover p = 0 .. dim")

    @classmethod
    def from_map(cls, dim: int, degrees: Mapping[int, SpectrumModel]) -> "LaplacianSpectra":
        table: list[Optional[SpectrumModel]] = [None] * (dim + 1)
        for p, model in degrees.items():
            if not 0 <= p <= dim:
                raise InvariantError(f"degree {p} outside 0..{dim}")
            table[p] = model
        return cls(dim=dim, per_degree=tuple(table))


def analytic_torsion(spectra: LaplacianSpectra) -> tuple[float, float]:
    """log tau and tau, with log tau = sum_p p (-1)^p log det(Laplacian_p)."""
    log_tau = 0.0
    for p, model in enumerate(spectra.per_degree):
        if model is None or model.is_empty:
            continue
        sign = p * (-1) ** p
        if sign == 0:
            continue
        log_det, _ = reg_det(model, 0.0)
        log_tau += sign * log_det.real
    return log_tau, math.exp(log_tau)


def fried_residual(
    spectra: LaplacianSpectra,
    catalog: OrbitCatalog,
    budget: TruncationBudget,
    sign_convention: int = -1,
) -> complex:
    """log tau + sign_convention * (regularized orbit sum), reduced mod 2 pi i.

    The representative has imaginary part in (-pi, pi]; callers assert it is
    small.  Uses the catalog's closed form when attached, extrapolation
    otherwise.
    """
    if sign_convention not in (1, -1):
        raise ValueError("sign_convention must be +1 or -1")
    log_tau, _ = analytic_torsion(spectra)
    method = "closed_form" if catalog.exact_model is not None else "extrapolate"
    reg: RegularizedOrbitSum = regularized_orbit_sum(catalog, method, budget)
    total = log_tau + sign_convention * reg.raw
    rep, _ = reduce_mod_2pi_i(total)
    return rep


def circle_model(a: float, circumference: float = 2.0 * math.pi) -> tuple[LaplacianSpectra, OrbitCatalog]:
    """Exactly solvable circle instance: twisted Laplacian spectra plus the
    two-orientation orbit catalog with its finite Euler product attached."""
    if not 0.0 < a < 1.0:
        raise ValueError("twist a must lie in (0, 1)")
    if min(a, 1.0 - a) < 1e-12:
        raise NonAcyclic("integral twist puts a zero mode in the spectrum")
    if not circumference > 0:
        raise ValueError("circumference must be positive")
    scale = (2.0 * math.pi / circumference) ** 2
    model = SpectrumModel(
        families=(
            HurwitzFamily(a=a, scale=scale),
            HurwitzFamily(a=1.0 - a, scale=scale),
        )
    )
    spectra = LaplacianSpectra.from_map(1, {0: model, 1: model})
    primes = [
        PrimeOrbit(
            prime_length=circumference,
            holonomy=HolonomyRep.scalar(cmath.exp(2j * math.pi * a)),
        ),
        PrimeOrbit(
            prime_length=circumference,
            holonomy=HolonomyRep.scalar(cmath.exp(-2j * math.pi * a)),
        ),
    ]
    catalog = OrbitCatalog.build(0, primes)
    catalog = catalog.with_exact_model(EulerProductModel(catalog.primes))
    return spectra, catalog
