import math

import numpy as np
import pytest

from dzw import (
    HurwitzFamily,
    LaplacianSpectra,
    NonAcyclic,
    OrbitCatalog,
    SpectrumModel,
    TruncationBudget,
    analytic_torsion,
    circle_model,
    fried_residual,
    reduce_mod_2pi_i,
    reg_det,
    zeta_at_zero,
)
from dzw.symbolic_dynamics import EulerProductModel

BUDGET = TruncationBudget(max_length=100.0, max_power=50, max_sym=0)


class TestAnalyticTorsion:
    def test_circle_quarter_twist(self):
        spectra, _ = circle_model(0.25)
        log_tau, tau = analytic_torsion(spectra)
        # oracle: det(Delta_1) = 4 sin^2(pi/4) = 2 via the Gamma/Lerch form,
        # and the only surviving exponent is p(-1)^p = -1 at p = 1
        assert tau == pytest.approx(0.5, abs=1e-12)
        assert log_tau == pytest.approx(-math.log(2.0), abs=1e-12)

    def test_equal_spectra_exponent_arithmetic(self):
        model = SpectrumModel(explicit=((2.0, 1), (5.0, 1)))
        spectra = LaplacianSpectra.from_map(2, {0: model, 1: model, 2: model})
        log_tau, tau = analytic_torsion(spectra)
        # exponents 0, -1, +2 sum to +1
        assert tau == pytest.approx(10.0, abs=1e-10)

    def test_empty_spectra_give_unit_torsion(self):
        spectra = LaplacianSpectra.from_map(3, {})
        assert analytic_torsion(spectra) == (0.0, 1.0)

    def test_finite_alternating_product_oracle(self):
        rng = np.random.default_rng(3)
        models = {}
        want_log = 0.0
        for p in range(4):
            vals = np.exp(rng.uniform(-1, 2, size=4))
            models[p] = SpectrumModel(explicit=tuple((float(v), 1) for v in vals))
            want_log += p * (-1) ** p * float(np.sum(np.log(vals)))
        spectra = LaplacianSpectra.from_map(3, models)
        log_tau, _ = analytic_torsion(spectra)
        assert log_tau == pytest.approx(want_log, abs=1e-11)

    def test_duality_in_the_twist(self):
        s1, _ = circle_model(0.3)
        s2, _ = circle_model(0.7)
        assert analytic_torsion(s1)[0] == pytest.approx(
            analytic_torsion(s2)[0], abs=1e-14
        )

    def test_scaling_relation(self):
        # scaling degree-p eigenvalues by c multiplies log tau by
        # p(-1)^p * zeta(0) * log c
        base = SpectrumModel(families=(HurwitzFamily(0.3),), explicit=((2.0, 2),))
        scale = 2.5
        scaled = SpectrumModel(
            families=(HurwitzFamily(0.3, scale),),
            explicit=((2.0 * scale, 2),),
        )
        spectra_a = LaplacianSpectra.from_map(1, {1: base})
        spectra_b = LaplacianSpectra.from_map(1, {1: scaled})
        delta = analytic_torsion(spectra_b)[0] - analytic_torsion(spectra_a)[0]
        want = -1 * zeta_at_zero(base) * math.log(scale)
        assert delta == pytest.approx(want, abs=1e-9)


class TestCircleModel:
    def test_half_twist_spectra(self):
        spectra, _ = circle_model(0.5)
        model = spectra.per_degree[1]
        _, det = reg_det(model)
        assert det == pytest.approx(4.0, abs=1e-9)

    def test_catalog_has_two_orientations(self):
        _, catalog = circle_model(0.25)
        assert sum(p.count for p in catalog.primes) == 2
        assert all(p.prime_length == pytest.approx(2 * math.pi) for p in catalog.primes)

    def test_half_twist_orientations(self):
        # the two orientation holonomies are conjugates (-1 up to rounding);
        # they are kept as separate primes but weigh the same in every sum
        _, catalog = circle_model(0.5)
        assert sum(p.count for p in catalog.primes) == 2
        for p in catalog.primes:
            assert p.holonomy.matrix[0][0] == pytest.approx(-1.0)

    def test_non_acyclic(self):
        with pytest.raises(NonAcyclic):
            circle_model(1e-13)
        with pytest.raises(ValueError):
            circle_model(1.5)


class TestFriedResidual:
    @pytest.mark.parametrize("a", [0.25, 1.0 / 3.0, 0.37])
    def test_circle_residual_vanishes(self, a):
        spectra, catalog = circle_model(a)
        res = fried_residual(spectra, catalog, BUDGET, sign_convention=-1)
        assert abs(res) <= 1e-12

    def test_known_values_quarter(self):
        spectra, catalog = circle_model(0.25)
        log_tau, _ = analytic_torsion(spectra)
        assert log_tau == pytest.approx(-math.log(2.0), abs=1e-12)
        from dzw import regularized_orbit_sum

        reg = regularized_orbit_sum(catalog, "closed_form", BUDGET)
        assert reg.value == pytest.approx(-math.log(2.0), abs=1e-12)

    def test_trivial_data_gives_zero(self):
        spectra = LaplacianSpectra.from_map(1, {})
        catalog = OrbitCatalog.build(0, [], exact_model=EulerProductModel(()))
        assert fried_residual(spectra, catalog, BUDGET) == 0

    def test_opposite_sign_convention_shifts(self):
        spectra, catalog = circle_model(0.25)
        res = fried_residual(spectra, catalog, BUDGET, sign_convention=+1)
        rep, _ = reduce_mod_2pi_i(complex(-2 * math.log(2.0)))
        assert res == pytest.approx(rep, abs=1e-12)

    def test_residual_reduction_idempotent(self):
        spectra, catalog = circle_model(0.37)
        res = fried_residual(spectra, catalog, BUDGET)
        rep, k = reduce_mod_2pi_i(res)
        assert rep == res and k == 0
