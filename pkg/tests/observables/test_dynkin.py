from unittest import TestCase

import numpy as np

from fpme_lab.dynamics import SimParams, carre_du_champ, exact_generator, simulate
from fpme_lab.errors import InvalidArgumentError
from fpme_lab.fracops import TestFunction, ring_positions
from fpme_lab.kernel import JumpKernel
from fpme_lab.lattice import LatticeConfig
from fpme_lab.observables import (
    MartingaleEstimate,
    extra_term,
    generator_term,
    generator_term_direct,
    martingale_estimate,
    martingale_path,
    principal_term,
    quadratic_variation_bound,
)
from fpme_lab.rates import RateModel
from fpme_lab.utils import make_rng

bump = TestFunction("gaussian_bump", center=1.0, width=0.25)
growing_bump = TestFunction("gaussian_bump", center=0.8, width=0.3, time_coefficients=(1.0, 0.5))


def random_config(size: int, seed: int) -> LatticeConfig:
    return LatticeConfig.from_array(make_rng(seed).integers(0, 2, size))


class TestGeneratorTerm(TestCase):
    def test_matches_exact_generator(self):
        size, n = 8, 4
        for gamma in (0.7, 1.4):
            kernel = JumpKernel(gamma, size)
            weights = bump.value(0.0, ring_positions(size, n))
            for m in (1, 2, 3):
                model = RateModel(m)
                gen = exact_generator(size, kernel, model)
                f = np.array([weights @ LatticeConfig.from_index(i, size).to_array() / n for i in range(1 << size)])
                exact = n ** gamma * (gen.matrix @ f)

                for i in (3, 90, 201):
                    cfg = LatticeConfig.from_index(i, size)
                    with self.subTest(gamma=gamma, m=m, index=i):
                        self.assertAlmostEqual(exact[i], generator_term(cfg, kernel, model, bump, n, 0.0), delta=1e-12)

    def test_fft_matches_direct(self):
        kernel = JumpKernel(1.0, 64)
        for m in (1, 2, 3):
            cfg = random_config(64, m)
            with self.subTest(m=m):
                self.assertAlmostEqual(
                    generator_term_direct(cfg, kernel, RateModel(m), bump, 32, 0.3),
                    generator_term(cfg, kernel, RateModel(m), bump, 32, 0.3),
                    delta=1e-9,
                )

    def test_constant_test_function(self):
        constant = TestFunction("cosine_mode", k=0.0, amplitude=2.0)
        cfg = random_config(16, 4)
        self.assertEqual(0.0, generator_term(cfg, JumpKernel(1.0, 16), RateModel(2), constant, 8, 0.0))

    def test_summation_by_parts(self):
        kernel = JumpKernel(1.3, 64)
        for m in (1, 2):
            model = RateModel(m)
            for seed in range(3):
                cfg = random_config(64, 20 + seed)
                with self.subTest(m=m, seed=seed):
                    split = principal_term(cfg, kernel, model, bump, 32, 0.0)
                    if m >= 2:
                        split += extra_term(cfg, kernel, model, bump, 32, 0.0)
                    self.assertAlmostEqual(generator_term(cfg, kernel, model, bump, 32, 0.0), split, delta=1e-9)

    def test_full_and_empty(self):
        kernel = JumpKernel(1.0, 32)
        for cfg in (LatticeConfig.empty(32), LatticeConfig.full(32)):
            with self.subTest(count=cfg.count):
                self.assertAlmostEqual(0.0, generator_term(cfg, kernel, RateModel(2), bump, 16, 0.0))


class TestMartingale(TestCase):
    def test_path_starts_at_zero(self):
        kernel = JumpKernel(1.0, 32)
        params = SimParams(n=16, T=0.1, gamma=1.0, m=2, seed=2, snapshot_times=(0.0, 0.05, 0.1))
        log = simulate(params, kernel, RateModel(2), random_config(32, 2))
        path = martingale_path(log, growing_bump, 16, kernel, RateModel(2))

        self.assertEqual((3,), path.shape)
        self.assertEqual(0.0, path[0])

    def test_requires_initial_snapshot(self):
        kernel = JumpKernel(1.0, 32)
        params = SimParams(n=16, T=0.1, gamma=1.0, m=2, snapshot_times=(0.1,))
        log = simulate(params, kernel, RateModel(2), random_config(32, 2))

        with self.assertRaises(InvalidArgumentError):
            martingale_path(log, bump, 16, kernel, RateModel(2))

    def test_empty_ensemble(self):
        with self.assertRaises(InvalidArgumentError):
            martingale_estimate([], bump, 16, JumpKernel(1.0, 32), RateModel(2))

    def test_mean_zero(self):
        n, m = 16, 2
        kernel = JumpKernel(1.0, 2 * n)
        model = RateModel(m)
        times = tuple(np.linspace(0.0, 0.05, 33))
        logs = [
            simulate(
                SimParams(n=n, T=0.05, gamma=1.0, m=m, seed=seed, snapshot_times=times),
                kernel,
                model,
                random_config(2 * n, 1000 + seed),
            )
            for seed in range(60)
        ]
        estimate = martingale_estimate(logs, growing_bump, n, kernel, model)

        self.assertEqual(60, estimate.samples)
        self.assertTrue(np.all(estimate.stderr[1:] > 0))
        self.assertTrue(estimate.within(4.0), estimate.mean / np.where(estimate.stderr > 0, estimate.stderr, 1.0))

        with self.subTest("Quadratic variation bound"):
            self.assertEqual(33, estimate.bound.size)
            self.assertEqual(0.0, estimate.bound[0])
            self.assertTrue(np.all(estimate.bound[1:] > 0))
            self.assertLessEqual(estimate.variance_ratio, estimate.variance_allowance(3.0))


class TestMartingaleEstimate(TestCase):
    paths = [[0.0, 1.0, 2.0], [0.0, 3.0, 2.0], [0.0, 2.0, 5.0]]
    bounds = [[0.0, 1.0, 2.0], [0.0, 3.0, 4.0], [0.0, 2.0, 3.0]]

    def test_from_paths(self):
        estimate = MartingaleEstimate.from_paths([0.0, 1.0, 2.0], self.paths, self.bounds)

        self.assertEqual(3, estimate.samples)
        np.testing.assert_allclose([0.0, 2.0, 3.0], estimate.mean)
        np.testing.assert_allclose([0.0, 1.0, 3.0], estimate.variance)
        np.testing.assert_allclose([0.0, np.sqrt(1.0 / 3.0), 1.0], estimate.stderr)
        np.testing.assert_allclose([0.0, 2.0, 3.0], estimate.bound)

        with self.subTest("Standardized mean"):
            self.assertAlmostEqual(2.0 * np.sqrt(3.0), estimate.max_z)
            self.assertFalse(estimate.within(3.0))
            self.assertTrue(estimate.within(3.5))

        with self.subTest("Variance against the bound"):
            self.assertAlmostEqual(1.0, estimate.variance_ratio)
            self.assertAlmostEqual(4.0, estimate.variance_allowance(3.0))

    def test_degenerate(self):
        with self.subTest("No trajectories"):
            with self.assertRaises(InvalidArgumentError):
                MartingaleEstimate.from_paths([0.0, 1.0], np.zeros((0, 2)))

        with self.subTest("No bound recorded"):
            estimate = MartingaleEstimate.from_paths([0.0, 1.0, 2.0], self.paths)
            self.assertIsNone(estimate.bound)
            self.assertEqual(0.0, estimate.variance_ratio)

        with self.subTest("Nonzero mean without spread"):
            estimate = MartingaleEstimate.from_paths([0.0, 1.0], [[0.0, 1.0], [0.0, 1.0]])
            self.assertEqual(float("inf"), estimate.max_z)
            self.assertFalse(estimate.within(100.0))

        with self.subTest("Identically zero"):
            estimate = MartingaleEstimate.from_paths([0.0, 1.0], [[0.0, 0.0], [0.0, 0.0]], np.zeros((2, 2)))
            self.assertEqual(0.0, estimate.max_z)
            self.assertTrue(estimate.within(0.0))
            self.assertEqual(0.0, estimate.variance_ratio)

        with self.subTest("Spread without a bound"):
            estimate = MartingaleEstimate.from_paths([0.0, 1.0], [[0.0, 1.0], [0.0, -1.0]], np.zeros((2, 2)))
            self.assertEqual(float("inf"), estimate.variance_ratio)

        with self.subTest("One trajectory"):
            estimate = MartingaleEstimate.from_paths([0.0, 1.0], [[0.0, 0.0]])
            self.assertEqual(float("inf"), estimate.variance_allowance(3.0))

    def test_quadratic_variation_bound(self):
        n, m = 16, 2
        kernel = JumpKernel(1.0, 2 * n)
        model = RateModel(m)
        params = SimParams(n=n, T=0.1, gamma=1.0, m=m, seed=5, snapshot_times=(0.0, 0.05, 0.1))
        log = simulate(params, kernel, model, random_config(2 * n, 5))

        carre = [carre_du_champ(cfg, kernel, model, bump, n, t) for cfg, t in zip(log.snapshots, log.snapshot_times)]
        expected = np.array(log.snapshot_times) * np.maximum.accumulate(carre)

        np.testing.assert_allclose(expected, quadratic_variation_bound(log, bump, n, kernel, model))
