import csv
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase

import numpy as np

from fpme_lab.errors import InvalidArgumentError, ReportIOError
from fpme_lab.fracops import TestFunction
from fpme_lab.lattice import LatticeConfig
from fpme_lab.observables import (
    SERIES_COLUMNS,
    EmpiricalSeries,
    box_average,
    box_averages,
    default_box_fraction,
    density_profile,
    pair_with_test_function,
    pairing_series,
    write_series_csv,
)
from fpme_lab.utils import make_rng


def random_config(size: int, seed: int) -> LatticeConfig:
    return LatticeConfig.from_array(make_rng(seed).integers(0, 2, size))


class TestPairing(TestCase):
    def test_full_configuration(self):
        G = TestFunction("cosine_mode", k=0.0, amplitude=1.5)
        self.assertAlmostEqual(2.0 * 1.5, pair_with_test_function(LatticeConfig.full(64), G, 0.0, 32))

    def test_single_particle(self):
        G = TestFunction("gaussian_bump", center=1.0, width=0.2, time_coefficients=(1.0, 1.0))
        cfg = LatticeConfig.from_sites(32, [16])

        self.assertAlmostEqual(2.0 / 16, pair_with_test_function(cfg, G, 1.0, 16))

    def test_series(self):
        G = TestFunction()
        configs = [random_config(32, seed) for seed in range(3)]
        series = pairing_series(configs, [0.0, 0.1, 0.2], G, 16, {"n": 16, "gamma": 1.0, "m": 2, "seed": 7})
        rows = series.to_rows()

        self.assertEqual(3, len(rows))
        self.assertEqual(set(SERIES_COLUMNS), set(rows[0]))
        self.assertEqual(7, rows[2]["seed"])
        self.assertIsNone(rows[0]["observable"])
        self.assertAlmostEqual(pair_with_test_function(configs[1], G, 0.1, 16), rows[1]["value"])

    def test_series_validation(self):
        with self.subTest("Lengths"):
            with self.assertRaises(InvalidArgumentError):
                EmpiricalSeries([0.0, 1.0], [1.0])

        with self.subTest("Unsorted"):
            with self.assertRaises(InvalidArgumentError):
                EmpiricalSeries([1.0, 0.0], [1.0, 2.0])

        with self.subTest("Not finite"):
            with self.assertRaises(InvalidArgumentError):
                EmpiricalSeries([0.0], [float("nan")])

    def test_write_series_csv(self):
        meta = {"n": 16, "gamma": 1.0, "m": 2, "observable": "pairing.bump"}
        series = [
            EmpiricalSeries([0.0, 0.5], [0.25, 0.5], dict(meta, seed=1)),
            EmpiricalSeries([0.0, 0.5], [0.75, 1.0], dict(meta, seed=2)),
        ]

        with TemporaryDirectory() as directory:
            path = write_series_csv(series, Path(directory) / "nested" / "series.csv")
            with path.open(newline="") as file:
                lines = list(csv.reader(file))

        self.assertEqual("series.csv", path.name)
        self.assertEqual(list(SERIES_COLUMNS), lines[0])
        self.assertEqual(
            [
                ["0.0", "0.25", "16", "1.0", "2", "1", "pairing.bump"],
                ["0.5", "0.5", "16", "1.0", "2", "1", "pairing.bump"],
                ["0.0", "0.75", "16", "1.0", "2", "2", "pairing.bump"],
                ["0.5", "1.0", "16", "1.0", "2", "2", "pairing.bump"],
            ],
            lines[1:],
        )

    def test_write_series_csv_failure(self):
        with TemporaryDirectory() as directory:
            blocker = Path(directory) / "file"
            blocker.write_text("")
            with self.assertRaises(ReportIOError):
                write_series_csv([EmpiricalSeries([0.0], [1.0])], blocker / "series.csv")


class TestBoxAverages(TestCase):
    def test_matches_pointwise(self):
        cfg = random_config(40, 3)
        for ell in (1, 3, 7, 40):
            averages = box_averages(cfg, ell)
            with self.subTest(ell=ell):
                for x in (0, 13, 35, 39):
                    self.assertAlmostEqual(box_average(cfg, x, ell), averages[x])

    def test_whole_ring(self):
        cfg = random_config(40, 4)
        np.testing.assert_allclose(cfg.count / 40, box_averages(cfg, 40))

    def test_invalid_length(self):
        cfg = random_config(10, 0)

        for ell in (0, 11):
            with self.subTest(ell=ell):
                with self.assertRaises(InvalidArgumentError):
                    box_averages(cfg, ell)

        with self.assertRaises(InvalidArgumentError):
            box_average(cfg, 0, 0)

    def test_density_profile(self):
        cfg = LatticeConfig.full(128)
        field = density_profile(cfg, 64)

        self.assertAlmostEqual(0.125, default_box_fraction(64))
        self.assertEqual(128, field.grid_size)
        self.assertEqual(2.0, field.torus_length)
        np.testing.assert_allclose(1.0, field.values)

        with self.assertRaises(InvalidArgumentError):
            density_profile(cfg, 64, eps=0.001)
