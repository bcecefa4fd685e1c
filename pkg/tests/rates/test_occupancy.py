from unittest import TestCase

import numpy as np

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.lattice import LatticeConfig, all_configurations
from fpme_lab.rates import Occupancy


class TestOccupancy(TestCase):
    def test_read(self):
        occ = Occupancy(LatticeConfig.from_sites(5, [1, 4]))

        with self.subTest("Single site"):
            self.assertEqual(1, occ(1))
            self.assertEqual(0, occ(2))

        with self.subTest("Wrapped and vector sites"):
            np.testing.assert_array_equal([1, 1, 0], occ(np.array([-1, 6, 7])))

    def test_many_configurations(self):
        occ = Occupancy(all_configurations(3))

        np.testing.assert_array_equal([0, 1, 0, 1, 0, 1, 0, 1], occ(0))
        np.testing.assert_array_equal([0, 0, 0, 0, 1, 1, 1, 1], occ(-1))

    def test_swapped(self):
        occ = Occupancy(LatticeConfig.from_sites(6, [0]))
        swapped = occ.swapped(0, 3)

        with self.subTest("Exchanged sites"):
            self.assertEqual(0, swapped(0))
            self.assertEqual(1, swapped(3))
            self.assertEqual(1, swapped(9))

        with self.subTest("Other sites are untouched"):
            self.assertEqual(0, swapped(1))

        with self.subTest("Original is untouched"):
            self.assertEqual(1, occ(0))

        with self.subTest("Swapping the same pair again restores the configuration"):
            self.assertEqual(1, swapped.swapped(3, 0)(0))

        with self.subTest("Pending exchange survives rewrapping"):
            self.assertEqual(1, Occupancy(swapped)(3))

        with self.subTest("A second distinct exchange is rejected"):
            with self.assertRaises(InvalidArgumentError):
                swapped.swapped(1, 2)

    def test_ring_distance(self):
        occ = Occupancy(np.zeros(10))

        self.assertEqual(1, occ.ring_distance(0, 9))
        self.assertEqual(5, occ.ring_distance(2, 7))
        np.testing.assert_array_equal([0, 3, 4], occ.ring_distance(np.array([4, 1, 0]), np.array([4, 8, 6])))
