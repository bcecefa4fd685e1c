import math
from unittest import TestCase

import numpy as np
from scipy.special import zeta

from fpme_lab.errors import DomainError, InvalidArgumentError
from fpme_lab.kernel import (
    JumpKernel,
    check_gamma,
    delta_gamma,
    normalizer,
    riesz_constant,
    symbol_constant,
)
from fpme_lab.utils import make_rng


class TestConstants(TestCase):
    def test_normalizer(self):
        for gamma in (0.3, 0.5, 1.0, 1.5, 1.9):
            with self.subTest(gamma=gamma):
                self.assertAlmostEqual(1.0 / (2.0 * zeta(1.0 + gamma)), normalizer(gamma), places=12)

        with self.subTest("gamma = 1"):
            self.assertAlmostEqual(3.0 / math.pi ** 2, normalizer(1.0), places=13)

    def test_riesz_constant(self):
        with self.subTest("gamma = 1 gives 1 / pi"):
            self.assertAlmostEqual(1.0 / math.pi, riesz_constant(1.0), places=14)

        with self.subTest("Symbol constant at gamma = 1"):
            self.assertAlmostEqual(3.0 / math.pi, symbol_constant(1.0), places=12)

    def test_check_gamma(self):
        for gamma in (0.0, 2.0, -1.0, 2.5):
            with self.subTest(gamma=gamma):
                with self.assertRaises(DomainError):
                    check_gamma(gamma)

    def test_delta_gamma(self):
        self.assertEqual(0.0, delta_gamma(0.5))
        self.assertEqual(0.5, delta_gamma(1.0))
        self.assertEqual(1.0, delta_gamma(1.5))


class TestJumpKernel(TestCase):
    def test_pmf_infinite(self):
        kernel = JumpKernel(1.0, 16)

        with self.subTest("Symmetric"):
            self.assertEqual(kernel.pmf_infinite(3), kernel.pmf_infinite(-3))

        with self.subTest("No mass at zero"):
            self.assertEqual(0.0, kernel.pmf_infinite(0))

        with self.subTest("p(1) = c_gamma"):
            self.assertAlmostEqual(kernel.c_gamma, kernel.pmf_infinite(1))

    def test_folded_pmf(self):
        for gamma in (0.5, 1.0, 1.5):
            for size in (3, 8, 33, 1000):
                with self.subTest(gamma=gamma, size=size):
                    pmf = JumpKernel(gamma, size).folded_pmf
                    self.assertEqual(0.0, pmf[0])
                    self.assertAlmostEqual(1.0, pmf.sum(), places=12)
                    np.testing.assert_allclose(pmf[1:], pmf[1:][::-1], rtol=1e-12)

    def test_folded_pmf_matches_image_sum(self):
        kernel = JumpKernel(1.5, 12)
        shifts = 12 * np.arange(-20000, 20001)
        images = np.array([kernel.pmf_infinite(z + shifts).sum() for z in range(1, 12)])
        np.testing.assert_allclose(images / images.sum(), kernel.folded_pmf[1:], rtol=1e-5)

    def test_large_ring_approaches_infinite_law(self):
        kernel = JumpKernel(1.0, 4096)
        np.testing.assert_allclose(kernel.pmf_infinite([1, 2, 5]), kernel.folded_pmf[[1, 2, 5]], rtol=1e-3)

    def test_sample_jumps(self):
        kernel = JumpKernel(1.0, 8)
        count = 100_000
        jumps = kernel.sample_jumps(make_rng(11), count)

        with self.subTest("Range"):
            self.assertTrue(np.all((jumps >= 1) & (jumps <= 7)))

        with self.subTest("Frequencies"):
            frequencies = np.bincount(jumps, minlength=8) / count
            pmf = kernel.folded_pmf
            sigma = np.sqrt(pmf * (1 - pmf) / count)
            self.assertTrue(np.all(np.abs(frequencies - pmf) <= 4 * sigma + 1e-12))

        with self.subTest("Reproducible"):
            self.assertEqual(kernel.sample_jump(make_rng(5)), kernel.sample_jump(make_rng(5)))

    def test_convolve(self):
        kernel = JumpKernel(0.7, 9)
        values = np.arange(9, dtype=float) ** 2

        direct = np.array([sum(kernel.folded_pmf[(y - x) % 9] * values[y] for y in range(9)) for x in range(9)])
        np.testing.assert_allclose(direct, kernel.convolve(values), atol=1e-12)

    def test_invalid(self):
        with self.subTest("Ring too small"):
            with self.assertRaises(InvalidArgumentError):
                JumpKernel(1.0, 2)

        with self.subTest("gamma out of range"):
            with self.assertRaises(DomainError):
                JumpKernel(2.0, 8)
