import csv
import io
import json
from contextlib import redirect_stderr
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import TestCase
from unittest.mock import patch

from fpme_lab.harness.cli import EXIT_ERROR, EXIT_FAILED, EXIT_PASSED, build_parser, main
from fpme_lab.harness.report import load_report
from fpme_lab.harness.suites import AUDITS

project_root = Path(__file__).parents[2]

STRICT_OPERATORS = """\
[experiment]
T = 1.0

[test_function.bump]
family = gaussian_bump
width = 0.1

[operators]
n_list = 64, 128
gamma_values = 1.0
slope_tolerance = 0.0
"""


class TestParser(TestCase):
    def test_arguments(self):
        args = build_parser().parse_args(
            ["hydro", "--n", "64", "--n", "128", "--gamma", "1.5", "--format", "csv", "--format", "md", "-q"]
        )

        self.assertEqual("hydro", args.mode)
        self.assertEqual([64, 128], args.n_list)
        self.assertEqual(1.5, args.gamma)
        self.assertEqual(["csv", "md"], args.formats)
        self.assertTrue(args.quiet)
        self.assertFalse(args.no_cache)
        self.assertEqual(1, args.jobs)

    def test_martingale_switch(self):
        cases = {"Not given": ([], None), "On": (["--martingale"], True), "Off": (["--no-martingale"], False)}
        for name, (flags, expected) in cases.items():
            with self.subTest(name):
                self.assertEqual(expected, build_parser().parse_args(["hydro"] + flags).martingale)

        with self.subTest("Exclusive"):
            with redirect_stderr(io.StringIO()):
                with self.assertRaises(SystemExit):
                    build_parser().parse_args(["hydro", "--martingale", "--no-martingale"])

    def test_unknown_mode(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(["plots"])


class TestMain(TestCase):
    def test_passed(self):
        config = project_root / "tests/sample_files/small_audit.ini"

        with TemporaryDirectory() as directory:
            status = main(
                ["rates-audit", "--config", str(config), "--out", directory, "--no-cache", "--format", "json",
                 "--format", "csv", "-q"]
            )

            self.assertEqual(EXIT_PASSED, status)
            report = load_report(Path(directory) / "report.json")
            self.assertEqual("rates-audit", report.mode)
            self.assertEqual(1, report.config["master_seed"])
            self.assertTrue((Path(directory) / "report.csv").is_file())
            self.assertIn("total", json.loads((Path(directory) / "timing.json").read_text()))

    def test_failed(self):
        with TemporaryDirectory() as directory:
            config = Path(directory) / "strict.ini"
            config.write_text(STRICT_OPERATORS)

            status = main(["operators", "--config", str(config), "--out", directory, "--no-cache", "-q"])

            self.assertEqual(EXIT_FAILED, status)
            self.assertFalse(load_report(Path(directory) / "report.json").passed)

    def test_errors(self):
        cases = {
            "Missing file": ["hydro", "--config", "no.such.config"],
            "Invalid override": [
                "hydro",
                "--config",
                str(project_root / "tests/sample_files/small_hydro.ini"),
                "--gamma",
                "2.5",
            ],
        }
        for name, argv in cases.items():
            with self.subTest(name):
                with TemporaryDirectory() as directory:
                    stderr = io.StringIO()
                    with redirect_stderr(stderr):
                        status = main(argv + ["--out", directory, "--no-cache", "-q"])

                    self.assertEqual(EXIT_ERROR, status)
                    self.assertTrue(stderr.getvalue().startswith("fpme-lab: error: "))
                    self.assertFalse((Path(directory) / "report.json").exists())

    def test_runtime_error_in_stage(self):
        config = project_root / "tests/sample_files/small_audit.ini"

        def broken(m, **kwargs):
            return m + "sites"

        with TemporaryDirectory() as directory:
            stderr = io.StringIO()
            with patch.dict(AUDITS, {"symmetry": broken}), redirect_stderr(stderr):
                status = main(["rates-audit", "--config", str(config), "--out", directory, "--no-cache", "-q"])

            self.assertEqual(EXIT_ERROR, status)
            self.assertTrue(stderr.getvalue().startswith("fpme-lab: error: stage 'rates audit' failed"))
            self.assertFalse((Path(directory) / "report.json").exists())

    def test_hydro_martingale_and_series(self):
        config = project_root / "tests/sample_files/small_hydro.ini"

        with TemporaryDirectory() as directory:
            status = main(["hydro", "--config", str(config), "--martingale", "--out", directory, "--no-cache", "-q"])

            self.assertIn(status, (EXIT_PASSED, EXIT_FAILED))
            report = load_report(Path(directory) / "report.json")
            self.assertTrue(report.config["martingale"])
            self.assertTrue(any(check.name == "martingale.bump.n16" for check in report.checks))
            with (Path(directory) / "series.csv").open(newline="") as file:
                rows = list(csv.DictReader(file))
            # n values x trajectories x test functions x snapshot times
            self.assertEqual(2 * 6 * 2 * 3, len(rows))
