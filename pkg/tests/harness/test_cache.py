import os
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase
from unittest.mock import patch

import numpy as np

from fpme_lab.errors import ReportIOError
from fpme_lab.harness.cache import CACHE_ENV, ResultCache, default_cache_dir, parameter_hash


class TestParameterHash(TestCase):
    def test_stable(self):
        with self.subTest("Key order"):
            self.assertEqual(parameter_hash("stage", {"a": 1, "b": 2}), parameter_hash("stage", {"b": 2, "a": 1}))

        with self.subTest("Numpy values"):
            self.assertEqual(
                parameter_hash("stage", {"x": 1.5, "n": [16, 32]}),
                parameter_hash("stage", {"x": np.float64(1.5), "n": np.array([16, 32])}),
            )

        with self.subTest("Tuples and lists"):
            self.assertEqual(parameter_hash("stage", {"n": (1, 2)}), parameter_hash("stage", {"n": [1, 2]}))

    def test_distinct(self):
        base = parameter_hash("trajectories", {"n": 16})

        self.assertEqual(64, len(base))
        self.assertNotEqual(base, parameter_hash("reference", {"n": 16}))
        self.assertNotEqual(base, parameter_hash("trajectories", {"n": 32}))


class TestResultCache(TestCase):
    def test_fetch_computes_once(self):
        calls = []

        def compute():
            calls.append(1)
            return {"values": np.arange(4.0)}

        with TemporaryDirectory() as directory:
            cache = ResultCache(directory=Path(directory))

            first = cache.fetch("stage", {"n": 8}, compute)
            second = cache.fetch("stage", {"n": 8}, compute)
            other = cache.fetch("stage", {"n": 16}, compute)

            self.assertEqual(2, len(calls))
            np.testing.assert_array_equal(first["values"], second["values"])
            np.testing.assert_array_equal(first["values"], other["values"])
            self.assertTrue(cache.path_for("stage", {"n": 8}).is_file())
            self.assertEqual(Path(directory) / "stage", cache.path_for("stage", {"n": 8}).parent)

    def test_disabled(self):
        calls = []

        def compute():
            calls.append(1)
            return {"values": np.zeros(2)}

        with TemporaryDirectory() as directory:
            cache = ResultCache(directory=Path(directory), enabled=False)

            cache.fetch("stage", {}, compute)
            cache.fetch("stage", {}, compute)

            self.assertEqual(2, len(calls))
            self.assertEqual([], list(Path(directory).iterdir()))
            self.assertIsNone(cache.load("stage", {}))

    def test_unreadable_entry(self):
        with TemporaryDirectory() as directory:
            cache = ResultCache(directory=Path(directory))
            path = cache.path_for("stage", {})
            path.parent.mkdir(parents=True)
            path.write_bytes(b"not an archive")

            self.assertIsNone(cache.load("stage", {}))

    def test_unwritable(self):
        with TemporaryDirectory() as directory:
            blocker = Path(directory) / "blocker"
            blocker.write_text("")
            cache = ResultCache(directory=blocker)

            with self.assertRaises(ReportIOError):
                cache.store("stage", {}, {"values": np.zeros(1)})

    def test_default_directory(self):
        with TemporaryDirectory() as directory:
            with patch.dict(os.environ, {CACHE_ENV: directory}):
                self.assertEqual(Path(directory), default_cache_dir())
                self.assertEqual(Path(directory), ResultCache().root)

        with patch.dict(os.environ, {CACHE_ENV: ""}):
            self.assertEqual(Path.home() / ".cache" / "fpme_lab", default_cache_dir())
