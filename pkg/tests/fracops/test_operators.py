import math
from unittest import TestCase

import numpy as np

from fpme_lab.errors import DomainError, InvalidArgumentError
from fpme_lab.fracops import (
    Kn_apply,
    Kn_profile,
    TestFunction,
    convdisc_gap,
    extra_term_bounds,
    fit_slope,
    frac_laplacian,
    l1_boundedness,
    periodic_frac_laplacian,
    symbol,
    wavenumbers,
)
from fpme_lab.kernel import JumpKernel, symbol_constant

bump = TestFunction("gaussian_bump", center=1.0, width=0.1)
cosine = TestFunction("cosine_mode", k=math.pi)


class TestFracLaplacian(TestCase):
    def test_matches_closed_form(self):
        for G in (bump, cosine):
            for gamma in (0.5, 1.0, 1.5):
                for u in (1.0, 1.07, 1.3):
                    with self.subTest(family=G.family, gamma=gamma, u=u):
                        exact = float(G.frac_laplacian_exact(u, gamma))
                        self.assertAlmostEqual(
                            exact, frac_laplacian(G, u, gamma), delta=1e-6 * max(1.0, abs(exact))
                        )

    def test_time_factor(self):
        G = TestFunction(width=0.2, time_coefficients=(1.0, 1.0))
        self.assertAlmostEqual(2.0 * frac_laplacian(G, 1.0, 1.0), frac_laplacian(G, 1.0, 1.0, s=1.0))

    def test_constant(self):
        self.assertEqual(0.0, frac_laplacian(TestFunction("cosine_mode", k=0.0), 0.3, 1.0))

    def test_gamma_range(self):
        with self.assertRaises(DomainError):
            frac_laplacian(bump, 1.0, 2.0)


class TestSpectral(TestCase):
    def test_wavenumbers(self):
        np.testing.assert_allclose([0.0, math.pi, 2 * math.pi], wavenumbers(4, 2.0))

    def test_symbol(self):
        xi = np.array([0.0, 1.0, 3.0])

        np.testing.assert_allclose([0.0, 1.0, 9.0], symbol(xi, 2.0))
        np.testing.assert_allclose(symbol_constant(1.2) * xi ** 1.2, symbol(xi, 1.2))

    def test_cosine_eigenfunction(self):
        u = np.arange(64) * (2.0 / 64)
        for gamma in (0.5, 1.0, 1.5):
            with self.subTest(gamma=gamma):
                np.testing.assert_allclose(
                    cosine.frac_laplacian_exact(u, gamma),
                    periodic_frac_laplacian(cosine.spatial(u), 2.0, gamma),
                    atol=1e-12,
                )


class TestDiscreteOperator(TestCase):
    def test_profile_matches_pointwise(self):
        kernel = JumpKernel(1.0, 64)
        profile = Kn_profile(bump, 0.0, 32, kernel)

        for x in (0, 17, 32, 40):
            with self.subTest(x=x):
                self.assertAlmostEqual(profile[x], Kn_apply(bump, 0.0, x, 32, kernel), places=12)

    def test_site_outside_ring(self):
        with self.assertRaises(InvalidArgumentError):
            Kn_apply(bump, 0.0, 64, 32, JumpKernel(1.0, 64))

    def test_convdisc_gap_decreases(self):
        for gamma in (0.5, 1.5):
            gaps = [convdisc_gap(bump, n, gamma, JumpKernel(gamma, 2 * n)) for n in (64, 128, 256, 512)]
            with self.subTest(gamma=gamma):
                self.assertTrue(all(a > b for a, b in zip(gaps, gaps[1:])), gaps)

    def test_convdisc_gap_constant(self):
        self.assertEqual(0.0, convdisc_gap(TestFunction("cosine_mode", k=0.0), 32, 1.0, JumpKernel(1.0, 64)))


class TestDiagnostics(TestCase):
    def test_fit_slope(self):
        self.assertAlmostEqual(-1.0, fit_slope([1, 2, 4, 8], [8, 4, 2, 1]))

    def test_second_difference_bound(self):
        ns = (128, 256, 512, 1024)
        for gamma in (0.5, 1.0, 1.5):
            y2 = [extra_term_bounds(cosine, n, gamma, JumpKernel(gamma, 2 * n), 2).y2 for n in ns]
            with self.subTest(gamma=gamma):
                self.assertAlmostEqual(gamma - 2.0, fit_slope(ns, y2), delta=0.01)

    def test_nearest_neighbour_model_has_no_pair_bound(self):
        self.assertEqual(0.0, extra_term_bounds(bump, 64, 1.0, JumpKernel(1.0, 128), 1).y1)

    def test_l1_boundedness(self):
        report = l1_boundedness(bump, (256, 512, 1024), 1.0)

        self.assertEqual({256, 512, 1024}, set(report.values))
        self.assertGreater(report.maximum, 0.0)
        self.assertLess(report.relative_spread, 0.05)

    def test_l1_constant(self):
        report = l1_boundedness(TestFunction("cosine_mode", k=0.0), (64, 128), 1.0)

        self.assertEqual(0.0, report.maximum)
        self.assertEqual(0.0, report.relative_spread)
