import cmath
import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dzw import (
    DegenerateOrbit,
    HolonomyRep,
    IndexOutOfRange,
    MissingTrace,
    OrbitCatalog,
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
from dzw.errors import BadDimension, InvariantError


def brute_h(values, n):
    """Oracle: enumerate the monomials of the complete homogeneous polynomial."""
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for combo in combinations_with_replacement(values, n):
        term = 1.0 + 0.0j
        for v in combo:
            term *= v
        total += term
    return total


def brute_e(values, l):
    """Oracle: enumerate the monomials of the elementary symmetric polynomial."""
    if l == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for combo in combinations(values, l):
        term = 1.0 + 0.0j
        for v in combo:
            term *= v
        total += term
    return total


class TestLefschetzIndex:
    def test_empty_spectrum_is_plus_one(self):
        assert lefschetz_index(PoincareSpectrum()) == 1

    def test_simple_saddle(self):
        # sign((1-2)(1-0.5)) = -1 by direct product
        p = PoincareSpectrum(unstable=(2.0,), stable=(0.5,))
        assert lefschetz_index(p) == -1

    def test_constant_curvature_case(self):
        p = constant_curvature_poincare(1.0, [math.pi / 3], 3)
        direct = np.prod([1 - mu for mu in p.all_eigenvalues])
        assert direct.real > 0  # oracle: the product is manifestly positive
        assert lefschetz_index(p) == 1

    def test_degenerate_raises(self):
        p = PoincareSpectrum(unstable=(1.0 + 1e-14,), stable=())
        with pytest.raises(DegenerateOrbit):
            lefschetz_index(p)

    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=1.1, max_value=3.0),
                st.floats(min_value=0.1, max_value=3.0),
            ),
            min_size=0,
            max_size=3,
        ),
        st.sampled_from([1, 3, 5, 7]),
    )
    @settings(max_examples=60, deadline=None)
    def test_invariant_under_odd_powers(self, pairs, k):
        unstable = []
        stable = []
        for r, theta in pairs:
            unstable += [r * cmath.exp(1j * theta), r * cmath.exp(-1j * theta)]
            stable += [cmath.exp(1j * theta) / r, cmath.exp(-1j * theta) / r]
        p = PoincareSpectrum(unstable=tuple(unstable), stable=tuple(stable))
        assert lefschetz_index(p.powered(k)) == lefschetz_index(p)


class TestFullerIndex:
    def test_prime_orbit(self):
        assert fuller_index(1, 1) == Fraction(1)

    def test_third_power(self):
        assert fuller_index(1, 3) == Fraction(1, 3)

    def test_sign_carries(self):
        assert fuller_index(-1, 2) == Fraction(-1, 2)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            fuller_index(2, 1)
        with pytest.raises(ValueError):
            fuller_index(1, 0)

    def test_matches_lefschetz_for_primes(self):
        p = PoincareSpectrum(unstable=(2.5,), stable=(0.2,))
        ind = lefschetz_index(p)
        assert fuller_index(ind, 1) == Fraction(ind)


class TestHolonomyTrace:
    def test_identity(self):
        assert holonomy_trace(HolonomyRep.identity(2), 5) == pytest.approx(2)

    def test_cube_root_of_unity(self):
        h = HolonomyRep.scalar(cmath.exp(2j * math.pi / 3))
        assert holonomy_trace(h, 3) == pytest.approx(1)

    def test_diagonal_square(self):
        h = HolonomyRep.from_matrix([[1j, 0], [0, -1j]])
        assert holonomy_trace(h, 2) == pytest.approx(-2)

    def test_trace_sequence_lookup_and_missing(self):
        h = HolonomyRep.from_traces(2, {1: 0.5, 2: -1.0})
        assert holonomy_trace(h, 2) == pytest.approx(-1.0)
        with pytest.raises(MissingTrace):
            holonomy_trace(h, 3)

    def test_unitarity_enforced(self):
        with pytest.raises(InvariantError):
            HolonomyRep.from_matrix([[1.0, 0.0], [0.0, 2.0]])

    def test_trace_bound_enforced(self):
        with pytest.raises(InvariantError):
            HolonomyRep.from_traces(2, {1: 3.0})

    @given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=6))
    @settings(max_examples=40, deadline=None)
    def test_power_consistency_random_unitaries(self, dim, k):
        rng = np.random.default_rng(dim * 101 + k)
        q, _ = np.linalg.qr(
            rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        )
        h = HolonomyRep.from_matrix(q)
        eig = np.linalg.eigvals(q)
        assert holonomy_trace(h, k) == pytest.approx(complex(np.sum(eig**k)), abs=1e-10)


class TestSymmetricPowers:
    def test_trivial_rep(self):
        assert sym_power_trace([2.0, 0.5j, -1.0], 0) == 1

    def test_one_dimensional(self):
        mu = 0.3 + 0.4j
        assert sym_power_trace([mu], 4) == pytest.approx(mu**4)

    def test_two_three(self):
        assert sym_power_trace([2.0, 3.0], 2) == pytest.approx(brute_h([2, 3], 2))
        assert brute_h([2, 3], 2) == 19

    def test_against_monomial_enumeration(self):
        vals = [0.4 + 0.1j, -0.3, 0.2 - 0.5j]
        for n in range(7):
            assert sym_power_trace(vals, n) == pytest.approx(
                brute_h(vals, n), abs=1e-12
            )


class TestExteriorPowers:
    def test_trivial(self):
        assert ext_power_trace([5.0, 6.0], 0) == 1

    def test_top_power_is_product(self):
        assert ext_power_trace([2.0, 3.0], 2) == pytest.approx(6)

    def test_rotation_pair(self):
        theta = 0.7
        pair = [cmath.exp(1j * theta), cmath.exp(-1j * theta)]
        assert ext_power_trace(pair, 1) == pytest.approx(2 * math.cos(theta))

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            ext_power_trace([1.0], 2)

    def test_against_monomial_enumeration(self):
        vals = [0.4 + 0.1j, -1.3, 2.2 - 0.5j, 0.9j]
        for l in range(5):
            assert ext_power_trace(vals, l) == pytest.approx(
                brute_e(vals, l), abs=1e-12
            )


@given(
    st.lists(
        st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False),
        min_size=0,
        max_size=6,
    ),
    st.integers(min_value=0, max_value=40),
)
@settings(max_examples=80, deadline=None)
def test_telescoping_identity(mu, n):
    terms = []
    for l in range(min(n, len(mu)) + 1):
        terms.append((-1) ** l * ext_power_trace(mu, l) * sym_power_trace(mu, n - l))
    total = sum(terms)
    scale = max([abs(t) for t in terms] + [1.0])
    expected = 1.0 if n == 0 else 0.0
    assert abs(total - expected) <= 1e-10 * scale


@given(
    st.lists(st.floats(min_value=0.0, max_value=math.pi), min_size=1, max_size=3),
    st.integers(min_value=0, max_value=6),
)
@settings(max_examples=50, deadline=None)
def test_exterior_duality_for_unimodular_spectra(thetas, l):
    vals = []
    for t in thetas:
        vals += [cmath.exp(1j * t), cmath.exp(-1j * t)]
    n = len(vals)
    if l > n:
        return
    prod = np.prod(vals)
    assert abs(prod - 1) < 1e-9
    assert ext_power_trace(vals, l) == pytest.approx(
        ext_power_trace(vals, n - l), abs=1e-10
    )


class TestConstantCurvature:
    def test_no_rotation(self):
        p = constant_curvature_poincare(1.0, [0.0], 3)
        e = math.exp(1.0)
        assert sorted(z.real for z in p.unstable) == pytest.approx([e, e])
        assert sorted(z.real for z in p.stable) == pytest.approx([1 / e, 1 / e])

    def test_quarter_turn(self):
        p = constant_curvature_poincare(2.0, [math.pi / 2], 3)
        want = {1j * math.exp(2.0), -1j * math.exp(2.0)}
        for z in p.unstable:
            assert min(abs(z - w) for w in want) < 1e-12

    def test_dimension_five(self):
        p = constant_curvature_poincare(1.0, [0.0, 0.0], 5)
        assert len(p.unstable) == 4
        assert all(abs(z - math.e) < 1e-12 for z in p.unstable)

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            constant_curvature_poincare(1.0, [0.0], 4)
        with pytest.raises(BadDimension):
            constant_curvature_poincare(1.0, [0.0, 0.1], 3)


class TestHyperbolicityInvariants:
    def test_unstable_inside_circle_rejected(self):
        with pytest.raises(InvariantError):
            PoincareSpectrum(unstable=(0.9,), stable=())

    def test_stable_outside_circle_rejected(self):
        with pytest.raises(InvariantError):
            PoincareSpectrum(unstable=(), stable=(1.5,))

    def test_conjugate_pairing_enforced(self):
        with pytest.raises(InvariantError):
            PoincareSpectrum(unstable=(2.0 + 1.0j,), stable=())


class TestCatalogAndPowers:
    def test_duplicate_primes_merge(self):
        p = PrimeOrbit(prime_length=1.0)
        cat = OrbitCatalog.build(0, [p, p, PrimeOrbit(prime_length=2.0)])
        assert [(o.prime_length, o.count) for o in cat.primes] == [(1.0, 2), (2.0, 1)]

    def test_expand_counts_single_prime(self):
        cat = OrbitCatalog.build(0, [PrimeOrbit(prime_length=1.0)])
        ks = [t.k for t in expand_powers(cat, 3.5)]
        assert ks == [1, 2, 3]

    def test_expand_two_primes(self):
        cat = OrbitCatalog.build(
            0, [PrimeOrbit(prime_length=1.0), PrimeOrbit(prime_length=2.5)]
        )
        got = [(t.prime.prime_length, t.k) for t in expand_powers(cat, 2.6)]
        assert got == [(1.0, 1), (1.0, 2), (2.5, 1)]

    def test_expand_order_and_multiplicity(self):
        cat = OrbitCatalog.build(
            0, [PrimeOrbit(prime_length=1.0), PrimeOrbit(prime_length=2.0)]
        )
        terms = expand_powers(cat, 4.0)
        lengths = [t.length for t in terms]
        assert lengths == sorted(lengths)
        for t in terms:
            assert t.multiplicity == t.k
            assert t.fuller == Fraction(
                lefschetz_index(t.prime.poincare.powered(t.k)), t.k
            )

    def test_golden_mean_against_period_census(self):
        # powers of catalog primes, weighted by word length, recover tr(A^n)
        from dzw.symbolic_dynamics import build_catalog, period_point_count
        from dzw.symbolic_dynamics import SftEdge, SftSystem

        gm = SftSystem(2, (SftEdge(0, 0), SftEdge(0, 1), SftEdge(1, 0)))
        cat = build_catalog(gm, 8.0)
        terms = expand_powers(cat, 8.0)
        for n in range(1, 9):
            total = sum(
                t.count * (t.length / t.k) for t in terms if abs(t.length - n) < 1e-9
            )
            assert total == pytest.approx(period_point_count(gm, n))
