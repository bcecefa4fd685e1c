from unittest import TestCase

import numpy as np

from fpme_lab.utils import derive_seed, make_rng, splitmix64


class TestSeeds(TestCase):
    def test_splitmix64(self):
        self.assertEqual(0xE220A8397B1DCDAF, splitmix64(0))
        self.assertLess(splitmix64(2 ** 64 - 1), 2 ** 64)

    def test_derive_seed(self):
        with self.subTest("Deterministic"):
            self.assertEqual(derive_seed(7, 3), derive_seed(7, 3))

        with self.subTest("Distinct streams"):
            seeds = {derive_seed(master, index) for master in range(4) for index in range(64)}
            self.assertEqual(4 * 64, len(seeds))

        with self.subTest("First index"):
            self.assertEqual(splitmix64(7), derive_seed(7, 0))

    def test_make_rng(self):
        np.testing.assert_array_equal(make_rng(12).random(5), make_rng(12).random(5))
        self.assertFalse(np.array_equal(make_rng(12).random(5), make_rng(13).random(5)))
