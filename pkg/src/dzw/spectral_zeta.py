"""Zeta-regularized determinants from eigenvalue models.

A spectrum model is a finite explicit list of positive eigenvalues plus
"Hurwitz families" lambda_n = c (n+a)^p, n >= 0, with p = 2 (the generic
quadratic case) or p = 1 (linear, covering the Riemann spectrum lambda_n = n).
Everything the workbench needs lives in this class: circle-bundle Laplacians,
their shifted determinants, heat traces and the small-t expansion driving the
large-shift asymptotics of log det.

Determinants of shifted families are exact: for a quadratic family,
det(c(n+a)^2 + w) factors through the Gamma function as
2*pi / (Gamma(a + i r) Gamma(a - i r)) with r = sqrt(w/c) (the branch choice
is irrelevant, the expression is even in r), times c^{1/2 - a}; this is the
unique continuation agreeing with the unshifted Lerch value and with the
convergent derivative sum d/dw log det = sum 1/(lambda + w), and it is
cross-checked in the tests against partial-product and power-series oracles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np
from scipy.special import gamma as _gamma_fn
from scipy.special import loggamma as _loggamma

from .errors import (
    BranchCut,
    FitFailure,
    InvariantError,
    PoleHit,
    UnsupportedModel,
    ZeroMode,
)

EULER_GAMMA = float(np.euler_gamma)
LOG_2PI = math.log(2.0 * math.pi)

# B_{2j} / (2j)! for the Euler-Maclaurin correction terms
_EM_COEFFS = [
    float(Fraction(b) / math.factorial(2 * j))
    for j, b in enumerate(
        [
            Fraction(1, 6),
            Fraction(-1, 30),
            Fraction(1, 42),
            Fraction(-1, 30),
            Fraction(5, 66),
            Fraction(-691, 2730),
            Fraction(7, 6),
            Fraction(-3617, 510),
            Fraction(43867, 798),
            Fraction(-174611, 330),
            Fraction(854513, 138),
            Fraction(-236364091, 2730),
        ],
        start=1,
    )
]


@dataclass(frozen=True)
class HurwitzFamily:
    """Eigenvalue family lambda_n = scale * (n + a)^power for n >= 0."""

    a: float
    scale: float = 1.0
    multiplicity: int = 1
    power: int = 2

    def __post_init__(self):
        if not self.a > 0:
            raise InvariantError("family offset a must be positive")
        if not self.scale > 0:
            raise InvariantError("family scale must be positive")
        if self.multiplicity < 1:
            raise InvariantError("family multiplicity must be >= 1")
        if self.power not in (1, 2):
            raise UnsupportedModel("family power must be 1 or 2")


@dataclass(frozen=True)
class SpectrumModel:
    """Explicit positive eigenvalues plus Hurwitz families."""

    explicit: tuple[tuple[float, int], ...] = ()
    families: tuple[HurwitzFamily, ...] = ()

    def __post_init__(self):
        norm = []
        for lam, mult in self.explicit:
            lam = float(lam)
            mult = int(mult)
            if not lam > 0:
                raise ZeroMode(f"explicit eigenvalue {lam} is not positive")
            if mult < 1:
                raise InvariantError("explicit multiplicity must be >= 1")
            norm.append((lam, mult))
        object.__setattr__(self, "explicit", tuple(norm))
        object.__setattr__(self, "families", tuple(self.families))

    @property
    def is_empty(self) -> bool:
        return not self.explicit and not self.families

    @classmethod
    def from_eigenvalues(cls, values: Sequence[float]) -> "SpectrumModel":
        pairs: dict[float, int] = {}
        for v in values:
            pairs[float(v)] = pairs.get(float(v), 0) + 1
        return cls(explicit=tuple(sorted(pairs.items())))


def drop_low_family_modes(
    m: SpectrumModel, family_index: int, n: int
) -> tuple[SpectrumModel, tuple[float, ...]]:
    """Remove the n lowest eigenvalues of one family (a finite-rank change).

    The remaining family is the same family with offset a + n; the dropped
    eigenvalues are returned so the caller can substitute replacements via
    the explicit list.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    fam = m.families[family_index]
    dropped = tuple(fam.scale * (j + fam.a) ** fam.power for j in range(n))
    new_fam = HurwitzFamily(fam.a + n, fam.scale, fam.multiplicity, fam.power)
    fams = list(m.families)
    fams[family_index] = new_fam
    return SpectrumModel(explicit=m.explicit, families=tuple(fams)), dropped


def hurwitz_zeta(s: complex, a: float) -> complex:
    """Hurwitz zeta by direct summation with Euler-Maclaurin continuation.

    Valid for complex s away from the pole at s = 1 and real a > 0; accurate
    to ~1e-13 for moderate |s| (the workbench never needs |Im s| large).
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleHit("Hurwitz zeta pole at s = 1")
    if s.real >= 0.0:
        m = int(max(30.0, 2.5 * abs(s) + 15.0))
    else:
        # direct terms grow like (n+a)^{-Re s}; keep the cutoff small so the
        # cancellation against the continuation terms stays below ~1e-13
        m = int(max(4.0, 1.8 * abs(s.imag) + 6.0))
    acc = 0.0 + 0.0j
    for n in range(m):
        acc += (n + a) ** (-s)
    w = m + a
    acc += w ** (1.0 - s) / (s - 1.0)
    acc += 0.5 * w ** (-s)
    # correction terms C_j * s(s+1)...(s+2j-2) * w^{-s-2j+1}
    poch = s
    wpow = w ** (-s - 1.0)
    for j, cj in enumerate(_EM_COEFFS, start=1):
        acc += cj * poch * wpow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        wpow /= w * w
    return acc


def spectral_zeta(m: SpectrumModel, s: complex) -> complex:
    """tr(A^{-s}): explicit eigenvalue sum plus Hurwitz-zeta family terms."""
    s = complex(s)
    total = 0.0 + 0.0j
    for lam, mult in m.explicit:
        total += mult * cmath.exp(-s * math.log(lam))
    for f in m.families:
        if abs(f.power * s - 1.0) < 1e-10:
            raise PoleHit(f"family zeta pole at s = {1.0 / f.power}")
        total += (
            f.multiplicity
            * cmath.exp(-s * math.log(f.scale))
            * hurwitz_zeta(f.power * s, f.a)
        )
    return total


def zeta_at_zero(m: SpectrumModel) -> float:
    """Value of the spectral zeta function at s = 0 (heat-trace constant term)."""
    total = float(sum(mult for _, mult in m.explicit))
    for f in m.families:
        total += f.multiplicity * (0.5 - f.a)
    return total


def _family_log_det(f: HurwitzFamily, w: complex) -> complex:
    cut_tol = 1e-14
    if f.power == 2:
        if abs(w.imag) <= cut_tol and w.real <= -f.scale * f.a**2 + cut_tol:
            raise BranchCut(
                f"shift {w} puts the lowest family eigenvalue on the cut"
            )
        r = cmath.sqrt(w / f.scale)
        val = (
            math.log(f.scale) * (0.5 - f.a)
            + LOG_2PI
            - _loggamma(f.a + 1j * r)
            - _loggamma(f.a - 1j * r)
        )
        return f.multiplicity * complex(val)
    b = f.a + w / f.scale
    if abs(b.imag) <= cut_tol and b.real <= cut_tol:
        raise BranchCut(f"shift {w} puts the lowest family eigenvalue on the cut")
    val = math.log(f.scale) * (0.5 - b) + 0.5 * LOG_2PI - _loggamma(b)
    return f.multiplicity * complex(val)


def reg_det(m: SpectrumModel, shift: complex = 0.0) -> tuple[complex, complex]:
    """Zeta-regularized determinant of A + shift, returned as (log det, det).

    The explicit part contributes ordinary logarithms; families use the exact
    Gamma-function forms (Lerch's formula at shift 0).  Raises BranchCut when
    a shifted eigenvalue lands on (-inf, 0].
    """
    w = complex(shift)
    log_det = 0.0 + 0.0j
    for lam, mult in m.explicit:
        z = lam + w
        if abs(z.imag) <= 1e-14 and z.real <= 1e-14:
            raise BranchCut(f"shifted eigenvalue {z} lies on the cut")
        log_det += mult * cmath.log(z)
    for f in m.families:
        log_det += _family_log_det(f, w)
    return log_det, cmath.exp(log_det)


def _gauss_half_sum(tau: float, a: float) -> float:
    """sum_{n>=0} exp(-tau (n+a)^2), truncated below 1e-20 of the peak."""
    n_max = int(math.sqrt(46.0 / tau)) + 2
    total = 0.0
    for n in range(n_max, -1, -1):
        total += math.exp(-tau * (n + a) ** 2)
    return total


def heat_trace(m: SpectrumModel, t: float) -> float:
    """tr(e^{-tA}) for t > 0; linear families sum in closed form."""
    if not t > 0:
        raise ValueError("t must be positive")
    total = 0.0
    for lam, mult in m.explicit:
        total += mult * math.exp(-lam * t)
    for f in m.families:
        tau = f.scale * t
        if f.power == 1:
            total += f.multiplicity * math.exp(-tau * f.a) / -math.expm1(-tau)
        else:
            total += f.multiplicity * _gauss_half_sum(tau, f.a)
    return total


@dataclass(frozen=True)
class HeatExpansion:
    """Small-t expansion sum c_nu t^{alpha_nu} of a heat trace."""

    terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        alphas = [alpha for alpha, _ in self.terms]
        if any(b - a <= 0 for a, b in zip(alphas, alphas[1:])):
            raise InvariantError("heat expansion exponents must strictly increase")


def heat_expansion(m: SpectrumModel) -> HeatExpansion:
    """Power terms of the small-t heat trace.

    Each quadratic family contributes mu*sqrt(pi)/(2 sqrt(c)) at t^{-1/2} and
    mu*(1/2 - a) at t^0; a linear family contributes mu/c at t^{-1} and the
    same constant term.  The explicit part is exponentially small and adds no
    power term.
    """
    acc: dict[float, float] = {}
    for f in m.families:
        if f.power == 2:
            acc[-0.5] = acc.get(-0.5, 0.0) + f.multiplicity * math.sqrt(math.pi) / (
                2.0 * math.sqrt(f.scale)
            )
        else:
            acc[-1.0] = acc.get(-1.0, 0.0) + f.multiplicity / f.scale
        acc[0.0] = acc.get(0.0, 0.0) + f.multiplicity * (0.5 - f.a)
    return HeatExpansion(terms=tuple(sorted(acc.items())))


def logdet_asymptotic(h: HeatExpansion, s: float, branch: int) -> complex:
    """Large-s asymptotics of -log det(A + branch*i*s) from heat coefficients.

    Exponent 0 terms contribute c*(C + log s + branch*i*pi/2) with C Euler's
    constant; negative-integer exponents -k contribute
    c * (-branch*i)^k / k! * (H_k - log s - branch*i*pi/2) * s^k; all other
    exponents contribute c * (branch*i)^{-alpha} Gamma(alpha) s^{-alpha}.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    if not s > 0:
        raise ValueError("s must be positive")
    half_turn = branch * 1j * math.pi / 2.0
    total = 0.0 + 0.0j
    for alpha, c in h.terms:
        if abs(alpha) < 1e-12:
            total += c * (EULER_GAMMA + math.log(s) + half_turn)
        elif alpha < 0 and abs(alpha - round(alpha)) < 1e-12:
            k = int(round(-alpha))
            harmonic = sum(1.0 / j for j in range(1, k + 1))
            total += (
                c
                * (-branch * 1j) ** k
                / factorial(k)
                * (harmonic - math.log(s) - half_turn)
                * s**k
            )
        else:
            total += (
                c * cmath.exp(-alpha * half_turn) * float(_gamma_fn(alpha)) * s ** (-alpha)
            )
    return total


def det_type_fit(
    samples: Sequence[tuple[complex, complex]],
    m: SpectrumModel,
    residual_tol: float = 1e-8,
    max_degree: int = 9,
) -> np.ndarray:
    """Polynomial P with log f(s) = P(s) + log det(A + s) on the samples.

    Least-squares fit of log f - log det, degree chosen as the smallest one
    whose maximal residual stays below residual_tol.  Needs deg + 2 sample
    points per candidate degree; raises FitFailure when even max_degree
    cannot meet the threshold.
    """
    pts = np.asarray([complex(s) for s, _ in samples])
    resid = np.asarray(
        [complex(logf) - reg_det(m, s)[0] for s, logf in samples]
    )
    top = min(max_degree, len(samples) - 2)
    if top < 0:
        raise FitFailure("need at least two sample points")
    for deg in range(top + 1):
        v = np.vander(pts, deg + 1, increasing=True)
        coef, *_ = np.linalg.lstsq(v, resid, rcond=None)
        err = float(np.max(np.abs(v @ coef - resid)))
        if err <= residual_tol:
            return coef
    raise FitFailure(
        f"no polynomial of degree <= {top} fits within {residual_tol:g}"
    )


def is_odd(p: Sequence[complex], tol: float) -> bool:
    """True iff every even-degree coefficient of the polynomial is below tol."""
    return all(abs(c) <= tol for c in list(p)[0::2])


def poly_shift(coeffs: Sequence[complex], delta: complex) -> list[complex]:
    """Coefficients of P(s + delta) from the ascending coefficients of P."""
    n = len(coeffs)
    out = [0.0 + 0.0j] * max(n, 1)
    for i, ci in enumerate(coeffs):
        if ci == 0:
            continue
        for j in range(i + 1):
            out[j] += ci * comb(i, j) * delta ** (i - j)
    return out


def alternating_shifted_sum(polys: Sequence[Sequence[complex]], d: int) -> list[complex]:
    """sum_{l=0}^{d-1} (-1)^l P_l(s + 2l - d + 1), as ascending coefficients."""
    if len(polys) != d:
        raise ValueError("need exactly d polynomials")
    width = max((len(p) for p in polys), default=1)
    total = [0.0 + 0.0j] * width
    for l, p in enumerate(polys):
        shifted = poly_shift(list(p), 2 * l - d + 1)
        for j, cj in enumerate(shifted):
            total[j] += (-1) ** l * cj
    return total
