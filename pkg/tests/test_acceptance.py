"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Tolerances are pinned here; any change to them is a contract change.
"""

import math
import time

import numpy as np

from dzw import (
    HurwitzFamily,
    OrbitCatalog,
    PrimeOrbit,
    SpectrumModel,
    TruncationBudget,
    alternating_shifted_sum,
    analytic_torsion,
    build_catalog,
    circle_model,
    constant_curvature_poincare,
    contraction_radius,
    exact_orbit_sum,
    fried_residual,
    heat_expansion,
    is_odd,
    logdet_asymptotic,
    orbit_zeta,
    reg_det,
    ruelle_from_selberg,
    ruelle_log,
    transfer_determinant,
)
from dzw.symbolic_dynamics import (
    SftEdge,
    SftSystem,
    enumerate_prime_cycles,
    period_point_count,
)
from dzw.verify import _mobius, euler_product_det, matrix_holonomy_system


def report(name: str, passed: bool, detail: str):
    print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


def golden_mean():
    return SftSystem(2, (SftEdge(0, 0), SftEdge(0, 1), SftEdge(1, 0)))


def full_two_shift():
    return SftSystem(1, (SftEdge(0, 0), SftEdge(0, 0)))


def test_criterion_1_sft_lefschetz_identity():
    """orbit series vs transfer determinant on golden-mean and full 2-shift."""
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for sys, cutoff in ((golden_mean(), 22.0), (full_two_shift(), 17.0)):
        catalog = build_catalog(sys, cutoff)
        budget = TruncationBudget(max_length=cutoff, max_power=40, max_sym=0)
        log_rho = math.log(contraction_radius(sys, 0.0))
        for j in range(20):
            s = log_rho + 0.5 + 2.5 * j / 19.0
            sv = orbit_zeta(catalog, s, budget)
            diff = abs(sv.value - exact_orbit_sum(sys, s))
            worst = max(worst, diff)
            ok = ok and diff <= max(1e-8, sv.tail_bound)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5.0
    report(
        "1 (SFT Lefschetz identity)",
        ok,
        f"worst |series-exact| {worst:.3e} within max(1e-8, tail); runtime {elapsed:.2f}s < 5s",
    )


def test_criterion_2_euler_product_equals_determinant():
    """Finite Euler product over word length <= 20 vs det(I - B(s))."""
    worst = 0.0
    systems = (
        ("golden-mean", golden_mean()),
        ("two-vertex-full", SftSystem(2, (SftEdge(0, 0), SftEdge(0, 1), SftEdge(1, 0), SftEdge(1, 1)))),
        ("matrix-holonomy", matrix_holonomy_system()),
    )
    for name, sys in systems:
        h = math.log(contraction_radius(sys, 0.0))
        for s in (h + 1.1, h + 1.1 + 0.6j):
            diff = abs(euler_product_det(sys, s, 20) - transfer_determinant(sys, s))
            worst = max(worst, diff)
    report(
        "2 (Euler product = determinant)",
        worst <= 1e-8,
        f"worst residual {worst:.3e} <= 1e-8",
    )


def test_criterion_3_telescoping_wedge_decomposition():
    """Alternating wedge combination with shift l collapses to the plain log."""
    budget = TruncationBudget(max_length=50.0, max_power=70, max_sym=60)
    rng = np.random.default_rng(20260808)
    orbits = [(0.9, 0.8), (0.5, 0.0), (1.7, 2.4)] + [
        (float(0.5 + 1.8 * rng.random()), float(2 * math.pi * rng.random()))
        for _ in range(4)
    ]
    worst = 0.0
    for s in (1.0, 1.3 + 0.4j):
        for l, t in orbits:
            cat = OrbitCatalog.build(
                3,
                [
                    PrimeOrbit(
                        prime_length=l,
                        poincare=constant_curvature_poincare(l, [t], 3),
                        rotation_angles=(t,),
                    )
                ],
                mode="constant_curvature",
            )
            resid = abs(
                ruelle_from_selberg(cat, s, "telescoping_l", budget).value
                - ruelle_log(cat, s, budget).value
            )
            worst = max(worst, resid)
    # paper-shift variant: reported, regression-tracked elsewhere, not asserted
    cat0 = OrbitCatalog.build(
        3,
        [
            PrimeOrbit(
                prime_length=0.9,
                poincare=constant_curvature_poincare(0.9, [0.8], 3),
                rotation_angles=(0.8,),
            )
        ],
        mode="constant_curvature",
    )
    bud0 = TruncationBudget(max_length=10, max_power=60, max_sym=60)
    paper_resid = abs(
        ruelle_from_selberg(cat0, 1.2, "paper_2l", bud0).value
        - ruelle_log(cat0, 1.2, bud0).value
    )
    report(
        "3 (telescoping wedge decomposition)",
        worst <= 1e-9,
        f"worst per-orbit residual {worst:.3e} <= 1e-9 at N_max=60; "
        f"paper-shift residual {paper_resid:.3e} (reported only)",
    )


def test_criterion_4_regularized_determinants():
    """Circle dets 4 and 2, Riemann-spectrum det sqrt(2 pi)."""
    d_half = reg_det(SpectrumModel(families=(HurwitzFamily(0.5), HurwitzFamily(0.5))))[1]
    d_quarter = reg_det(
        SpectrumModel(families=(HurwitzFamily(0.25), HurwitzFamily(0.75)))
    )[1]
    d_riemann = reg_det(SpectrumModel(families=(HurwitzFamily(1.0, power=1),)))[1]
    # independent Euler-Maclaurin oracle for the Riemann spectrum
    bern = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510]
    m = 60
    zp0 = -sum(math.log(n) for n in range(1, m)) + m * math.log(m) - m - 0.5 * math.log(m)
    for j in range(1, 9):
        zp0 += bern[j - 1] / math.factorial(2 * j) * math.factorial(2 * j - 2) * m ** (1 - 2 * j)
    oracle = math.exp(-zp0)
    e1 = abs(d_half - 4.0)
    e2 = abs(d_quarter - 2.0)
    e3 = abs(d_riemann - math.sqrt(2 * math.pi))
    e4 = abs(d_riemann - oracle)
    ok = e1 <= 1e-9 and e2 <= 1e-9 and e3 <= 1e-9 and e4 <= 1e-9
    report(
        "4 (regularized determinants)",
        ok,
        f"|det-4|={e1:.2e}, |det-2|={e2:.2e}, |det-sqrt(2pi)|={e3:.2e}, vs EM oracle {e4:.2e}",
    )


def test_criterion_5_finite_spectrum_consistency():
    """reg_det equals the plain product on 100 random explicit spectra."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        size = int(rng.integers(1, 51))
        vals = np.exp(rng.uniform(-2.0, 3.0, size=size))
        model = SpectrumModel(explicit=tuple((float(v), 1) for v in vals))
        plain = float(np.sum(np.log(vals)))
        log_det, _ = reg_det(model)
        worst = max(worst, abs(log_det.real - plain) / max(1.0, abs(plain)))
    report(
        "5 (finite-spectrum consistency)",
        worst <= 1e-12,
        f"worst relative deviation {worst:.3e} <= 1e-12",
    )


def test_criterion_6_torsion_fried_on_circle():
    """Torsion/orbit-sum residual on the circle with sign convention -1."""
    budget = TruncationBudget(max_length=100.0, max_power=50, max_sym=0)
    worst = 0.0
    for a in (0.25, 1.0 / 3.0, 0.37):
        spectra, catalog = circle_model(a)
        worst = max(worst, abs(fried_residual(spectra, catalog, budget, -1)))
    spectra, _ = circle_model(0.25)
    tau_err = abs(analytic_torsion(spectra)[1] - 0.5)
    ok = worst <= 1e-8 and tau_err <= 1e-9
    report(
        "6 (torsion/Fried on circle)",
        ok,
        f"worst |residual| {worst:.3e} <= 1e-8 mod 2 pi i; |tau-1/2|={tau_err:.2e} <= 1e-9",
    )


def test_criterion_7_logdet_asymptotics():
    """Displayed large-s formula vs direct determinants on the circle family."""
    pair = SpectrumModel(families=(HurwitzFamily(0.3), HurwitzFamily(0.7)))
    h = heat_expansion(pair)
    residuals = []
    for s in (20.0, 40.0, 80.0):
        asym = logdet_asymptotic(h, s, +1) + logdet_asymptotic(h, s, -1)
        direct = -reg_det(pair, 1j * s)[0] - reg_det(pair, -1j * s)[0]
        residuals.append(abs(asym - direct))
    ok = residuals[0] > residuals[1] >= residuals[2] and residuals[2] <= 1e-3
    report(
        "7 (log-det asymptotics)",
        ok,
        f"residuals {residuals[0]:.3e} > {residuals[1]:.3e} >= {residuals[2]:.3e}, final <= 1e-3",
    )


def test_criterion_8_odd_polynomial_symmetry():
    """Alternating shifted sums of symmetric odd families stay odd."""
    rng = np.random.default_rng(11)
    ok = True
    worst = 0.0
    for d in (3, 5):
        for _ in range(5):
            half = [
                [0.0, float(rng.uniform(-1, 1)), 0.0, float(rng.uniform(-1, 1))]
                for _ in range((d + 1) // 2)
            ]
            polys = [half[min(l, d - 1 - l)] for l in range(d)]
            total = alternating_shifted_sum(polys, d)
            even_mass = max((abs(c) for c in total[0::2]), default=0.0)
            worst = max(worst, even_mass)
            ok = ok and is_odd(total, 1e-6)
    report(
        "8 (odd polynomial symmetry)",
        ok,
        f"worst even-coefficient magnitude {worst:.3e} <= 1e-6 for d=3,5",
    )


def test_criterion_9_combinatorial_census():
    """Necklace counts and the divisor-weighted census, exactly, n <= 12."""
    rng = np.random.default_rng(5150)
    ok = True
    for _ in range(10):
        n = int(rng.integers(1, 6))
        edges = tuple(
            SftEdge(i, j) for i in range(n) for j in range(n) if rng.random() < 0.45
        ) or (SftEdge(0, 0),)
        sys = SftSystem(n, edges)
        by_len = [0] * 13
        for w in enumerate_prime_cycles(sys, 12):
            by_len[w.word_length] += 1
        for m in range(1, 13):
            divisors = [d for d in range(1, m + 1) if m % d == 0]
            tr = {d: period_point_count(sys, d) for d in divisors}
            necklace = sum(_mobius(m // d) * tr[d] for d in divisors)
            ok = ok and necklace == m * by_len[m]
            ok = ok and sum(d * by_len[d] for d in divisors) == tr[m]
    report("9 (combinatorial census)", ok, "necklace + census identities exact, n <= 12")
