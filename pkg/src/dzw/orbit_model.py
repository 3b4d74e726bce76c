"""Closed-orbit data model and the index/trace arithmetic attached to it.

An orbit of a hyperbolic flow is stored through the eigenvalues of its linear
return map (unstable eigenvalues outside the unit circle, stable ones inside)
together with the parallel-transport automorphism of a flat unitary bundle
along the orbit.  Every quantity the zeta machinery consumes (Lefschetz and
Fuller indices, traces of symmetric and exterior powers) is a symmetric
function of those eigenvalues, so no matrices for the return maps are kept.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    BadDimension,
    DegenerateOrbit,
    IndexOutOfRange,
    InvariantError,
    MissingTrace,
)

UNITARITY_TOL = 1e-12
DEGENERACY_TOL = 1e-12
CONJUGATE_PAIR_TOL = 1e-9


def _as_complex_tuple(values: Iterable[complex]) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


def _check_conjugate_pairs(values: Sequence[complex], label: str) -> None:
    """Non-real eigenvalues must come in conjugate pairs (real return map)."""
    pool = [v for v in values if abs(v.imag) > CONJUGATE_PAIR_TOL * max(1.0, abs(v))]
    while pool:
        v = pool.pop()
        tol = CONJUGATE_PAIR_TOL * max(1.0, abs(v))
        for i, w in enumerate(pool):
            if abs(w - v.conjugate()) <= tol:
                del pool[i]
                break
        else:
            raise InvariantError(
                f"conjugate pairing: {label} eigenvalue {v} has no conjugate partner"
            )


@dataclass(frozen=True)
class PoincareSpectrum:
    """Eigenvalues of the linear return map, split into unstable and stable parts."""

    unstable: tuple[complex, ...] = ()
    stable: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "unstable", _as_complex_tuple(self.unstable))
        object.__setattr__(self, "stable", _as_complex_tuple(self.stable))
        for mu in self.unstable:
            if not abs(mu) > 1.0:
                raise InvariantError(
                    f"hyperbolicity: unstable eigenvalue {mu} has modulus <= 1"
                )
        for mu in self.stable:
            if not abs(mu) < 1.0:
                raise InvariantError(
                    f"hyperbolicity: stable eigenvalue {mu} has modulus >= 1"
                )
        _check_conjugate_pairs(self.unstable, "unstable")
        _check_conjugate_pairs(self.stable, "stable")

    @property
    def all_eigenvalues(self) -> tuple[complex, ...]:
        return self.unstable + self.stable

    def powered(self, k: int) -> "PoincareSpectrum":
        """Spectrum of the k-th iterate: every eigenvalue raised to the k-th power."""
        if k < 1:
            raise ValueError("power must be >= 1")
        if k == 1:
            return self
        return PoincareSpectrum(
            unstable=tuple(mu**k for mu in self.unstable),
            stable=tuple(mu**k for mu in self.stable),
        )

    def inverse_unstable(self) -> tuple[complex, ...]:
        """Eigenvalues of the inverse of the unstable part (all inside the unit circle)."""
        return tuple(1.0 / mu for mu in self.unstable)

    def unit_inverse_unstable(self) -> tuple[complex, ...]:
        """Rotation (unit-modulus) parts of the inverse unstable eigenvalues."""
        return tuple((1.0 / mu) / abs(1.0 / mu) for mu in self.unstable)


@dataclass(frozen=True)
class HolonomyRep:
    """Unitary holonomy along an orbit, as a matrix or as a sequence of power traces.

    ``matrix`` is stored row-major as a tuple of tuples; ``traces`` maps the
    power k >= 1 to tr(U^k).  Exactly one of the two is present.
    """

    dim: int
    matrix: Optional[tuple[tuple[complex, ...], ...]] = None
    traces: Optional[tuple[tuple[int, complex], ...]] = None
    eigenvalues: Optional[tuple[complex, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise InvariantError("holonomy dimension must be >= 1")
        if (self.matrix is None) == (self.traces is None):
            raise InvariantError("holonomy must have exactly one of matrix/traces")
        if self.matrix is not None:
            if self.dim == 1 and len(self.matrix) == 1 and len(self.matrix[0]) == 1:
                u = complex(self.matrix[0][0])
                object.__setattr__(self, "matrix", ((u,),))
                dev = abs(u.real * u.real + u.imag * u.imag - 1.0)
                if dev > UNITARITY_TOL:
                    raise InvariantError(
                        f"unitarity: |u|^2 deviates from 1 by {dev:.3e}"
                    )
                if self.eigenvalues is None:
                    object.__setattr__(self, "eigenvalues", (u,))
                return
            m = np.array(self.matrix, dtype=complex)
            if m.shape != (self.dim, self.dim):
                raise InvariantError("holonomy matrix shape does not match dim")
            object.__setattr__(
                self, "matrix", tuple(tuple(complex(v) for v in row) for row in m)
            )
            dev = np.max(np.abs(m.conj().T @ m - np.eye(self.dim)))
            if dev > UNITARITY_TOL:
                raise InvariantError(
                    f"unitarity: columns deviate from orthonormal by {dev:.3e}"
                )
            if self.eigenvalues is None:
                eig = tuple(
                    sorted(
                        (complex(z) for z in np.linalg.eigvals(m)),
                        key=lambda z: (z.real, z.imag),
                    )
                )
                object.__setattr__(self, "eigenvalues", eig)
        else:
            for k, t in self.traces:
                if k < 1:
                    raise InvariantError("trace powers must be >= 1")
                if abs(t) > self.dim + 1e-9:
                    raise InvariantError(
                        f"unitary bound: |tr(U^{k})| = {abs(t):.6g} exceeds dim {self.dim}"
                    )

    @classmethod
    def from_matrix(cls, m) -> "HolonomyRep":
        arr = np.array(m, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvariantError("holonomy matrix must be square")
        return cls(dim=arr.shape[0], matrix=tuple(tuple(row) for row in arr))

    @classmethod
    def from_traces(cls, dim: int, traces: Mapping[int, complex]) -> "HolonomyRep":
        items = tuple(sorted((int(k), complex(v)) for k, v in traces.items()))
        return cls(dim=dim, traces=items)

    @classmethod
    def scalar(cls, u: complex) -> "HolonomyRep":
        return cls.from_matrix([[complex(u)]])

    @classmethod
    def identity(cls, dim: int) -> "HolonomyRep":
        return cls.from_matrix(np.eye(dim))

    def trace_power(self, k: int) -> complex:
        """tr(U^k), from eigenvalue powers (matrix form) or the stored sequence."""
        if k < 1:
            raise ValueError("trace power must be >= 1")
        if self.matrix is not None:
            return complex(sum(lam**k for lam in self.eigenvalues))
        for kk, t in self.traces:
            if kk == k:
                return t
        raise MissingTrace(f"trace sequence has no entry for power {k}")


def holonomy_trace(h: HolonomyRep, k: int) -> complex:
    """Trace of the k-th power of a holonomy."""
    return h.trace_power(k)


def lefschetz_index(p: PoincareSpectrum) -> int:
    """Sign of det(1 - P) over the stable and unstable eigenvalues.

    The empty spectrum gives +1.  Raises DegenerateOrbit if any eigenvalue
    sits within 1e-12 of 1.
    """
    prod = 1.0 + 0.0j
    for mu in p.all_eigenvalues:
        f = 1.0 - mu
        if abs(f) < DEGENERACY_TOL:
            raise DegenerateOrbit(f"eigenvalue {mu} is within {DEGENERACY_TOL} of 1")
        prod *= f
    if abs(prod.imag) > 1e-10 * max(1.0, abs(prod)):
        raise InvariantError(
            f"det(1-P) has imaginary residue {prod.imag:.3e}; spectrum not conjugate-closed"
        )
    return 1 if prod.real > 0 else -1


def fuller_index(ind_l: int, m: int) -> Fraction:
    """Exact rational Lefschetz index divided by the multiplicity."""
    if ind_l not in (-1, 1):
        raise ValueError("Lefschetz index must be -1 or +1")
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    return Fraction(ind_l, m)


def sym_power_trace(eigenvalues: Sequence[complex], n: int) -> complex:
    """Complete homogeneous symmetric polynomial h_n of the eigenvalues.

    Computed by Newton's identities from power sums; h_0 = 1 even for an
    empty eigenvalue list (the trivial symmetric power).
    """
    if n < 0:
        raise ValueError("symmetric power index must be >= 0")
    if n == 0:
        return 1.0 + 0.0j
    vals = [complex(v) for v in eigenvalues]
    if not vals:
        return 0.0 + 0.0j
    p = [0.0 + 0.0j] * (n + 1)
    run = list(vals)
    for i in range(1, n + 1):
        p[i] = sum(run)
        if i < n:
            for j in range(len(run)):
                run[j] *= vals[j]
    h = [0.0 + 0.0j] * (n + 1)
    h[0] = 1.0 + 0.0j
    for m in range(1, n + 1):
        acc = 0.0 + 0.0j
        for i in range(1, m + 1):
            acc += p[i] * h[m - i]
        h[m] = acc / m
    return h[n]


def ext_power_trace(eigenvalues: Sequence[complex], l: int) -> complex:
    """Elementary symmetric polynomial e_l of the eigenvalues (trace on the l-th
    exterior power)."""
    if l < 0:
        raise ValueError("exterior power index must be >= 0")
    vals = [complex(v) for v in eigenvalues]
    if l > len(vals):
        raise IndexOutOfRange(
            f"exterior power {l} exceeds eigenvalue count {len(vals)}"
        )
    # coefficients of prod (1 + mu x) up to degree l
    e = [0.0 + 0.0j] * (l + 1)
    e[0] = 1.0 + 0.0j
    top = 0
    for mu in vals:
        top = min(top + 1, l)
        for j in range(top, 0, -1):
            e[j] += mu * e[j - 1]
    return e[l]


def constant_curvature_poincare(
    length: float, rotation_angles: Sequence[float], d: int
) -> PoincareSpectrum:
    """Return-map spectrum of a closed geodesic in constant negative curvature.

    In dimension d (odd) the normal bundle rotates by angles theta_j while the
    flow stretches by e^length, so the unstable eigenvalues are
    e^length * e^{+-i theta_j} and the stable ones e^{-length} * e^{+-i theta_j}.
    """
    if length <= 0:
        raise ValueError("length must be positive")
    if d < 3 or d % 2 == 0:
        raise BadDimension(f"dimension must be an odd integer >= 3, got {d}")
    if len(rotation_angles) != (d - 1) // 2:
        raise BadDimension(
            f"expected {(d - 1) // 2} rotation angles for dimension {d}, "
            f"got {len(rotation_angles)}"
        )
    unstable = []
    stable = []
    grow = math.exp(length)
    for theta in rotation_angles:
        for sign in (1.0, -1.0):
            rot = cmath.exp(1j * sign * theta)
            unstable.append(grow * rot)
            stable.append(rot / grow)
    return PoincareSpectrum(unstable=tuple(unstable), stable=tuple(stable))


@dataclass(frozen=True)
class PrimeOrbit:
    """A prime closed orbit: length, return-map spectrum, holonomies.

    ``count`` is the number of distinct orbits sharing this exact data (real
    length spectra have multiplicities; identical records are merged at
    catalog construction).  ``rotation_angles`` is kept when the orbit was
    built from constant-curvature data, purely so files round-trip.
    """

    prime_length: float
    poincare: PoincareSpectrum = PoincareSpectrum()
    holonomy: HolonomyRep = HolonomyRep.scalar(1.0)
    bundle_holonomy: Optional[HolonomyRep] = None
    count: int = 1
    rotation_angles: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if not self.prime_length > 0:
            raise InvariantError("prime_length must be positive")
        if self.count < 1:
            raise InvariantError("count must be >= 1")

    def merge_key(self):
        return (
            self.prime_length,
            self.poincare,
            self.holonomy,
            self.bundle_holonomy,
            self.rotation_angles,
        )


@dataclass(frozen=True)
class OrbitPower:
    """One term of the expanded orbit sum: the k-th power of a prime orbit."""

    prime: PrimeOrbit
    prime_index: int
    k: int
    length: float
    multiplicity: int
    fuller: Fraction
    trace: complex

    @property
    def count(self) -> int:
        return self.prime.count


@dataclass(frozen=True)
class OrbitCatalog:
    """Prime closed orbits sorted by length, with optional exact-model attachment.

    ``dimension`` is the ambient manifold dimension (odd, >= 3) or 0 for
    abstract/model catalogs.  ``exact_model``, when present, provides closed
    forms for the orbit series (it is ignored for equality and never
    serialized).
    """

    dimension: int
    primes: tuple[PrimeOrbit, ...]
    mode: str = "generic"
    exact_model: object = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.dimension != 0 and (self.dimension < 3 or self.dimension % 2 == 0):
            raise BadDimension(
                f"catalog dimension must be 0 or an odd integer >= 3, got {self.dimension}"
            )
        if self.mode not in ("generic", "constant_curvature"):
            raise InvariantError(f"unknown catalog mode {self.mode!r}")
        lengths = [p.prime_length for p in self.primes]
        if lengths != sorted(lengths):
            raise InvariantError("primes must be sorted ascending by prime_length")
        seen = set()
        for p in self.primes:
            key = p.merge_key()
            if key in seen:
                raise InvariantError(
                    "duplicate prime orbits must be merged with a count at ingestion"
                )
            seen.add(key)

    @classmethod
    def build(
        cls,
        dimension: int,
        primes: Iterable[PrimeOrbit],
        mode: str = "generic",
        exact_model: object = None,
    ) -> "OrbitCatalog":
        """Sort primes by length and merge records identical in all fields."""
        merged: dict = {}
        order: list = []
        for p in primes:
            key = p.merge_key()
            if key in merged:
                old = merged[key]
                merged[key] = PrimeOrbit(
                    prime_length=old.prime_length,
                    poincare=old.poincare,
                    holonomy=old.holonomy,
                    bundle_holonomy=old.bundle_holonomy,
                    count=old.count + p.count,
                    rotation_angles=old.rotation_angles,
                )
            else:
                merged[key] = p
                order.append(key)
        out = [merged[k] for k in order]
        out.sort(key=lambda p: p.prime_length)
        return cls(
            dimension=dimension, primes=tuple(out), mode=mode, exact_model=exact_model
        )

    def with_exact_model(self, model: object) -> "OrbitCatalog":
        return OrbitCatalog(
            dimension=self.dimension, primes=self.primes, mode=self.mode, exact_model=model
        )


def expand_powers(catalog: OrbitCatalog, max_length: float) -> list[OrbitPower]:
    """All orbit powers (prime, k) with k * prime_length <= max_length.

    Deterministic ascending-length order, ties broken by catalog index then k.
    The k-th power has multiplicity k, return-map eigenvalues raised to the
    k-th power, and trace tr(holonomy^k).
    """
    if max_length <= 0:
        raise ValueError("max_length must be positive")
    out: list[OrbitPower] = []
    for idx, prime in enumerate(catalog.primes):
        k = 1
        while k * prime.prime_length <= max_length:
            ind_l = lefschetz_index(prime.poincare.powered(k))
            out.append(
                OrbitPower(
                    prime=prime,
                    prime_index=idx,
                    k=k,
                    length=k * prime.prime_length,
                    multiplicity=k,
                    fuller=fuller_index(ind_l, k),
                    trace=prime.holonomy.trace_power(k),
                )
            )
            k += 1
    out.sort(key=lambda t: (t.length, t.prime_index, t.k))
    return out
