"""Suspension flows over subshifts of finite type, with exact oracles.

A labeled digraph with positive edge weights (roof times) defines a suspension
flow whose closed orbits are the primitive cycles of the graph.  The weighted,
holonomy-twisted transfer matrix gives closed forms for the orbit series, so
these systems serve as the exactly solvable test bed for the zeta machinery.
All orbits here have Lefschetz index +1 unless per-edge expansion factors are
supplied: the model normal bundle is expanding-only.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceDomain, InvariantError, PoleAtZero
from .orbit_model import HolonomyRep, OrbitCatalog, PoincareSpectrum, PrimeOrbit


@dataclass(frozen=True)
class SftEdge:
    src: int
    dst: int
    weight: float = 1.0
    holonomy: HolonomyRep = HolonomyRep.scalar(1.0)
    expansion: Optional[float] = None

    def __post_init__(self):
        if not self.weight > 0:
            raise InvariantError("edge weight (roof time) must be positive")
        if self.expansion is not None and not self.expansion > 1:
            raise InvariantError("edge expansion factor must be > 1")


@dataclass(frozen=True)
class SftSystem:
    """Labeled digraph; parallel edges and self-loops are allowed."""

    n_vertices: int
    edges: tuple[SftEdge, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise InvariantError("need at least one vertex")
        dims = set()
        for e in self.edges:
            if not (0 <= e.src < self.n_vertices and 0 <= e.dst < self.n_vertices):
                raise InvariantError(f"edge {e.src}->{e.dst} references missing vertex")
            dims.add(e.holonomy.dim)
        if len(dims) > 1:
            raise InvariantError("all edge holonomies must share one dimension")

    @property
    def holonomy_dim(self) -> int:
        return self.edges[0].holonomy.dim if self.edges else 1

    def adjacency_counts(self) -> list[list[int]]:
        """Integer matrix counting edges i -> j."""
        a = [[0] * self.n_vertices for _ in range(self.n_vertices)]
        for e in self.edges:
            a[e.src][e.dst] += 1
        return a

    def is_irreducible(self) -> bool:
        """Strong connectivity of the subgraph spanned by edge-active vertices."""
        active = sorted({e.src for e in self.edges} | {e.dst for e in self.edges})
        if not active:
            return True
        succ: dict[int, list[int]] = {v: [] for v in active}
        pred: dict[int, list[int]] = {v: [] for v in active}
        for e in self.edges:
            succ[e.src].append(e.dst)
            pred[e.dst].append(e.src)

        def reach(start, nbr):
            seen = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in nbr[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen

        root = active[0]
        return reach(root, succ) >= set(active) and reach(root, pred) >= set(active)

    def _require_irreducible(self):
        if not self.is_irreducible():
            raise InvariantError("irreducibility: graph is not strongly connected")


@dataclass(frozen=True)
class CycleWord:
    """Primitive closed edge path, rooted at its lexicographically least rotation."""

    edges: tuple[int, ...]

    @property
    def word_length(self) -> int:
        return len(self.edges)

    @staticmethod
    def canonical_rotation(seq: Sequence[int]) -> tuple[int, ...]:
        seq = tuple(seq)
        return min(seq[i:] + seq[:i] for i in range(len(seq)))

    @classmethod
    def from_edges(cls, sys: SftSystem, seq: Sequence[int]) -> "CycleWord":
        seq = tuple(seq)
        if not seq:
            raise InvariantError("cycle word must be nonempty")
        for i, ei in enumerate(seq):
            ej = seq[(i + 1) % len(seq)]
            if sys.edges[ei].dst != sys.edges[ej].src:
                raise InvariantError("edge sequence is not a closed path")
        canon = cls.canonical_rotation(seq)
        for d in range(1, len(canon)):
            if len(canon) % d == 0 and canon[:d] * (len(canon) // d) == canon:
                raise InvariantError("cycle word is not primitive")
        return cls(edges=canon)


def enumerate_prime_cycles(sys: SftSystem, max_word_length: int) -> list[CycleWord]:
    """All primitive cycles up to rotation, with word length <= max_word_length.

    Emitted in deterministic order (ascending length, then lexicographic on
    the canonical rotation).  Words are generated directly in Lyndon form by
    a prenecklace DFS: with p the period of the current prefix, an extension
    edge c at position i is admissible only when c >= path[i-p] (smaller
    edges cannot occur in any prefix of a necklace, so the whole subtree is
    pruned), and a closed path is a Lyndon word exactly when p equals its
    length.  This yields each cycle class once, already primitive and rooted
    at its least rotation, without any per-word canonicalization.
    """
    if max_word_length < 0:
        raise ValueError("max_word_length must be >= 0")
    found: list[tuple[int, tuple[int, ...]]] = []
    out_edges: list[list[int]] = [[] for _ in range(sys.n_vertices)]
    for i, e in enumerate(sys.edges):
        out_edges[e.src].append(i)
    edge_dst = [e.dst for e in sys.edges]
    path: list[int] = []

    def dfs(v: int, p: int, start_v: int):
        if v == start_v and p == len(path):
            found.append((len(path), tuple(path)))
        i = len(path)
        if i < max_word_length:
            prev = path[i - p]
            for ei in out_edges[v]:
                if ei < prev:
                    continue
                path.append(ei)
                dfs(edge_dst[ei], p if ei == prev else i + 1, start_v)
                path.pop()

    if max_word_length >= 1:
        for e0 in range(len(sys.edges)):
            path.append(e0)
            dfs(edge_dst[e0], 1, sys.edges[e0].src)
            path.pop()
    found.sort()
    return [CycleWord(edges=w) for _, w in found]


def period_point_count(sys: SftSystem, n: int) -> int:
    """Exact tr(A^n) for the integer edge-count adjacency matrix A."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = sys.adjacency_counts()
    size = sys.n_vertices
    power = a
    for _ in range(n - 1):
        power = [
            [sum(power[i][k] * a[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)
        ]
    return sum(power[i][i] for i in range(size))


def cycle_to_orbit(sys: SftSystem, w: CycleWord) -> PrimeOrbit:
    """Prime orbit of the suspension flow underlying a primitive cycle.

    Length is the sum of roof times around the cycle; holonomy is the ordered
    product of the edge holonomies rooted at the canonical rotation (traces
    are rotation invariant, the matrices are not).  When every edge on the
    cycle carries an expansion factor the unstable return-map eigenvalue is
    their product; otherwise the spectrum is empty and the Lefschetz index
    is +1 by convention.
    """
    length = 0.0
    for ei in w.edges:
        length += sys.edges[ei].weight
    dim = sys.edges[w.edges[0]].holonomy.dim
    if dim == 1:
        u = 1.0 + 0.0j
        for ei in w.edges:
            u *= sys.edges[ei].holonomy.matrix[0][0]
        hol = HolonomyRep.scalar(u)
    else:
        mat = np.eye(dim, dtype=complex)
        for ei in w.edges:
            mat = np.array(sys.edges[ei].holonomy.matrix, dtype=complex) @ mat
        hol = HolonomyRep.from_matrix(mat)
    expansions = [sys.edges[ei].expansion for ei in w.edges]
    if all(x is not None for x in expansions):
        stretch = 1.0
        for x in expansions:
            stretch *= x
        poincare = PoincareSpectrum(unstable=(complex(stretch),), stable=())
    else:
        poincare = PoincareSpectrum()
    return PrimeOrbit(prime_length=length, poincare=poincare, holonomy=hol)


def build_catalog(sys: SftSystem, max_length: float) -> OrbitCatalog:
    """Orbit catalog of all prime orbits with length <= max_length.

    The transfer-determinant closed form is attached as the catalog's exact
    model.  Requires matrix/scalar edge holonomies (always true here).
    """
    if max_length <= 0:
        raise ValueError("max_length must be positive")
    if not sys.edges:
        return OrbitCatalog.build(0, [], exact_model=SftExactModel(sys))
    min_weight = min(e.weight for e in sys.edges)
    max_words = int(max_length / min_weight + 1e-9)
    primes = []
    for w in enumerate_prime_cycles(sys, max_words):
        orb = cycle_to_orbit(sys, w)
        if orb.prime_length <= max_length * (1 + 1e-12):
            primes.append(orb)
    return OrbitCatalog.build(0, primes, exact_model=SftExactModel(sys))


def _edge_transfer_matrix(sys: SftSystem, s: complex) -> np.ndarray:
    """Edge-indexed block matrix with block U_e e^{-s w_e} at (e', e) for e -> e'."""
    dim = sys.holonomy_dim
    n = len(sys.edges) * dim
    b = np.zeros((n, n), dtype=complex)
    for j, e in enumerate(sys.edges):
        block = np.array(e.holonomy.matrix, dtype=complex) * cmath.exp(-s * e.weight)
        for i, e2 in enumerate(sys.edges):
            if e.dst == e2.src:
                b[i * dim : (i + 1) * dim, j * dim : (j + 1) * dim] = block
    return b


def _vertex_transfer_matrix(sys: SftSystem, s: complex) -> np.ndarray:
    """Vertex-indexed fast path for scalar holonomies: entry (j, i) sums
    u_e e^{-s w_e} over edges i -> j."""
    b = np.zeros((sys.n_vertices, sys.n_vertices), dtype=complex)
    for e in sys.edges:
        u = e.holonomy.matrix[0][0]
        b[e.dst, e.src] += u * cmath.exp(-s * e.weight)
    return b


def transfer_determinant(sys: SftSystem, s: complex, force_edge: bool = False) -> complex:
    """det(I - B(s)) for the holonomy-twisted weighted transfer matrix.

    Scalar holonomies use the vertex-indexed matrix (same determinant by
    Sylvester's identity); matrix holonomies use the edge-indexed blocks.
    """
    if not sys.edges:
        return 1.0 + 0.0j
    if sys.holonomy_dim == 1 and not force_edge:
        b = _vertex_transfer_matrix(sys, s)
    else:
        b = _edge_transfer_matrix(sys, s)
    return complex(np.linalg.det(np.eye(b.shape[0], dtype=complex) - b))


def contraction_radius(sys: SftSystem, sigma: float) -> float:
    """Spectral radius of the entrywise-modulus transfer matrix at Re(s) = sigma.

    The orbit series converges absolutely iff this is < 1 (edge holonomies
    are unitary, so each block has norm exactly e^{-sigma w_e})."""
    if not sys.edges:
        return 0.0
    b = np.zeros((sys.n_vertices, sys.n_vertices))
    for e in sys.edges:
        b[e.dst, e.src] += np.exp(-sigma * e.weight)
    return float(np.max(np.abs(np.linalg.eigvals(b))))


def exact_orbit_sum(sys: SftSystem, s: complex) -> complex:
    """-log det(I - B(s)), principal branch: the exact orbit series of the
    suspension flow inside its convergence region."""
    sys._require_irreducible()
    if contraction_radius(sys, complex(s).real) >= 1.0:
        raise ConvergenceDomain(
            "Re(s) is not above the convergence abscissa of the transfer matrix"
        )
    return -cmath.log(transfer_determinant(sys, s))


class SftExactModel:
    """Closed-form attachment for catalogs generated from an SFT system."""

    def __init__(self, sys: SftSystem):
        self.sys = sys

    def orbit_sum(self, s: complex) -> complex:
        return exact_orbit_sum(self.sys, s)

    def value_at_zero(self) -> complex:
        """Analytic continuation of the orbit series to s = 0."""
        det = transfer_determinant(self.sys, 0.0)
        if abs(det) < 1e-14:
            raise PoleAtZero("transfer determinant vanishes at s = 0")
        return -cmath.log(det)


class EulerProductModel:
    """Closed-form attachment for catalogs whose full Euler product is finite.

    The orbit series equals -sum_c count * log det(1 - e^{-s l} U_c) exactly
    (all Lefschetz indices +1); at s = 0 this is evaluated directly.
    """

    def __init__(self, catalog_primes: Iterable[PrimeOrbit]):
        self.primes = tuple(catalog_primes)

    def _log_factor(self, prime: PrimeOrbit, z: complex) -> complex:
        h = prime.holonomy
        if h.matrix is not None:
            mat = np.array(h.matrix, dtype=complex)
            det = complex(np.linalg.det(np.eye(h.dim, dtype=complex) - z * mat))
            if abs(det) < 1e-14:
                raise PoleAtZero("Euler factor vanishes")
            return cmath.log(det)
        if all(abs(t) == 0.0 for _, t in h.traces):
            return 0.0 + 0.0j
        raise InvariantError(
            "closed form needs matrix-form holonomy (or identically zero traces)"
        )

    def orbit_sum(self, s: complex) -> complex:
        total = 0.0 + 0.0j
        for p in self.primes:
            z = cmath.exp(-s * p.prime_length)
            total -= p.count * self._log_factor(p, z)
        return total

    def value_at_zero(self) -> complex:
        total = 0.0 + 0.0j
        for p in self.primes:
            total -= p.count * self._log_factor(p, 1.0 + 0.0j)
        return total
