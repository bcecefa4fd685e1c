from unittest import TestCase

import numpy as np

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.lattice import LatticeConfig, all_configurations, reduce_site


class TestLatticeConfig(TestCase):
    def test_occupancy(self):
        cfg = LatticeConfig.from_sites(10, [0, 3, 9])

        with self.subTest("Occupied and empty sites"):
            self.assertEqual([1, 0, 0, 1, 0, 0, 0, 0, 0, 1], [cfg[x] for x in range(10)])

        with self.subTest("Sites wrap around the ring"):
            self.assertEqual(1, cfg.occupancy(-1))
            self.assertEqual(1, cfg.occupancy(13))
            self.assertEqual(0, cfg.occupancy(11))

        with self.subTest("Particle count"):
            self.assertEqual(3, cfg.count)

    def test_discrepancy(self):
        cfg = LatticeConfig.from_sites(6, [1])

        self.assertEqual(1, cfg.discrepancy(0, 1))
        self.assertEqual(0, cfg.discrepancy(0, 2))
        self.assertEqual(1, cfg.discrepancy(7, 0))

    def test_exchange(self):
        with self.subTest("Occupied and empty sites swap"):
            cfg = LatticeConfig.from_sites(8, [2])
            cfg.exchange(2, 5)
            self.assertEqual(LatticeConfig.from_sites(8, [5]), cfg)
            self.assertEqual(1, cfg.count)

        with self.subTest("Equal occupancies are unchanged"):
            cfg = LatticeConfig.from_sites(8, [1, 2])
            self.assertEqual(LatticeConfig.from_sites(8, [1, 2]), cfg.exchange(1, 2))

        with self.subTest("Exchange is an involution"):
            cfg = LatticeConfig.from_sites(8, [0, 4, 7])
            original = cfg.copy()
            cfg.exchange(0, 3).exchange(0, 3)
            self.assertEqual(original, cfg)

        with self.subTest("Exchange across word boundaries"):
            cfg = LatticeConfig.from_sites(130, [63])
            cfg.exchange(63, 129)
            self.assertEqual(1, cfg[129])
            self.assertEqual(0, cfg[63])

        with self.subTest("Self exchange is rejected"):
            with self.assertRaises(InvalidArgumentError):
                LatticeConfig.empty(5).exchange(2, 7)

    def test_conversions(self):
        occupancy = np.array([1, 0, 1, 1, 0, 0, 1], dtype=np.uint8)
        cfg = LatticeConfig.from_array(occupancy)

        with self.subTest("Array"):
            np.testing.assert_array_equal(occupancy, cfg.to_array())

        with self.subTest("Index"):
            self.assertEqual(0b1001101, cfg.to_index())
            self.assertEqual(cfg, LatticeConfig.from_index(0b1001101, 7))

        with self.subTest("Hex snapshot"):
            self.assertEqual(cfg, LatticeConfig.from_hex(cfg.to_hex(), 7))

        with self.subTest("Hex snapshot with bits beyond the ring"):
            # site 7 does not exist on a ring of 7 sites
            with self.assertRaises(InvalidArgumentError):
                LatticeConfig.from_hex("cd00000000000000", 7)
            self.assertEqual(cfg, LatticeConfig.from_hex("4d00000000000000", 7))

        with self.subTest("Malformed hex snapshot"):
            for text in ("zz", "4d00"):
                with self.assertRaises(InvalidArgumentError):
                    LatticeConfig.from_hex(text, 7)

        with self.subTest("Invalid occupancies"):
            with self.assertRaises(InvalidArgumentError):
                LatticeConfig.from_array([0, 2, 1])

        with self.subTest("Empty ring"):
            with self.assertRaises(InvalidArgumentError):
                LatticeConfig(0)

    def test_reduce_site(self):
        self.assertEqual(3, reduce_site(-7, 10))
        self.assertEqual(0, reduce_site(20, 10))

    def test_all_configurations(self):
        configs = all_configurations(3)

        self.assertEqual((8, 3), configs.shape)
        np.testing.assert_array_equal([1, 1, 0], configs[3])
        np.testing.assert_array_equal([0, 0, 1], configs[4])
        for index, row in enumerate(configs):
            self.assertEqual(index, LatticeConfig.from_array(row).to_index())
