from unittest import TestCase

import numpy as np

from fpme_lab.kernel import AliasTable
from fpme_lab.utils import make_rng


class TestAliasTable(TestCase):
    def test_reconstruct(self):
        for pmf in ([0.5, 0.5], [0.1, 0.2, 0.3, 0.4], [0.97, 0.01, 0.01, 0.01], [1.0, 0.0, 0.0]):
            with self.subTest(pmf=pmf):
                np.testing.assert_allclose(pmf, AliasTable.build(pmf).reconstruct(), atol=1e-14)

    def test_unnormalised_weights(self):
        np.testing.assert_allclose([0.25, 0.75], AliasTable.build([1.0, 3.0]).reconstruct())

    def test_lookup(self):
        table = AliasTable.build([0.25, 0.75])

        with self.subTest("Coin below prob keeps the column"):
            self.assertEqual(1, table.lookup(np.array([0.9]), np.array([0.0]))[0])

        with self.subTest("Column index never overflows"):
            self.assertLess(table.lookup(np.array([1.0 - 1e-17]), np.array([0.0]))[0], 2)

    def test_draw_frequencies(self):
        pmf = np.array([0.1, 0.2, 0.3, 0.4])
        count = 200_000
        draws = AliasTable.build(pmf).draw(make_rng(3), count)

        frequencies = np.bincount(draws, minlength=4) / count
        sigma = np.sqrt(pmf * (1 - pmf) / count)
        self.assertTrue(np.all(np.abs(frequencies - pmf) < 4 * sigma))
