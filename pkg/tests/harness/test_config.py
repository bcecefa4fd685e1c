from pathlib import Path
from unittest import TestCase

from fpme_lab.errors import ConfigurationError
from fpme_lab.fracops import TestFunction
from fpme_lab.harness.config import (
    MODES,
    ExperimentConfig,
    SolverSettings,
    config_from_parser,
    load_config,
    vars_of,
)
from fpme_lab.harness.readers import ConfigParser, ValueInterpolation
from fpme_lab.measures import ProfileSpec

project_root = Path(__file__).parents[2]


def parse(text: str) -> ConfigParser:
    parser = ConfigParser(interpolation=ValueInterpolation())
    parser.read_string(text)
    return parser


class TestLoadConfig(TestCase):
    def test_sample_file(self):
        cfg = load_config("tests.sample_files.small_hydro", search_paths=[project_root])

        self.assertEqual("hydro", cfg.mode)
        self.assertEqual((16, 32), cfg.n_list)
        self.assertEqual((0.0, 0.025, 0.05), cfg.snapshot_times)
        self.assertEqual((0.1, 0.05), cfg.deltas)
        self.assertFalse(cfg.martingale)
        self.assertEqual(ProfileSpec("bump", background=0.3, center=1.0, width=0.5, height=0.4), cfg.profile)
        self.assertEqual(["bump", "wave"], [G.label for G in cfg.test_functions])
        self.assertEqual((1.0, 0.5), cfg.test_functions[1].time_coefficients)
        self.assertEqual(SolverSettings(grid_size=64, dt=None), cfg.solver)

    def test_bundled_defaults(self):
        for mode in MODES:
            with self.subTest(mode=mode):
                cfg = load_config(mode=mode)
                self.assertEqual(mode, cfg.mode)

        self.assertEqual(1024, load_config(mode="pde").solver.grid_size)
        self.assertEqual((2, 3, 4), load_config(mode="rates-audit").rates_audit.m_values)
        self.assertTrue(load_config(mode="hydro").martingale)

    def test_overrides(self):
        cfg = load_config(
            "tests.sample_files.small_hydro",
            overrides={
                "gamma": 1.5,
                "n_list": (64, 128),
                "master_seed": None,
                "output_dir": Path("out"),
                "martingale": True,
            },
            search_paths=[project_root],
        )

        self.assertEqual(1.5, cfg.gamma)
        self.assertEqual((64, 128), cfg.n_list)
        self.assertEqual(3, cfg.master_seed)
        self.assertEqual(Path("out"), cfg.output_dir)
        self.assertTrue(cfg.martingale)

    def test_mode_wins_over_file(self):
        cfg = load_config("tests.sample_files.small_audit", mode="rates-audit", search_paths=[project_root])
        self.assertEqual("rates-audit", cfg.mode)

    def test_missing(self):
        with self.subTest("No file"):
            with self.assertRaises(ConfigurationError) as caught:
                load_config("tests.sample_files.missing", search_paths=[project_root])
            self.assertEqual("config", caught.exception.key)

        with self.subTest("Neither file nor mode"):
            with self.assertRaises(ConfigurationError):
                load_config()


class TestConfigErrors(TestCase):
    def assertKey(self, key: str, text: str):
        with self.assertRaises(ConfigurationError) as caught:
            config_from_parser(parse(text))
        self.assertEqual(key, caught.exception.key)
        self.assertTrue(str(caught.exception).startswith(key))

    def test_errors_name_the_key(self):
        cases = {
            "experiment.gama": "[experiment]\ngama = 1.0\n",
            "experiment.gamma": "[experiment]\ngamma = 2.5\n",
            "experiment.m": "[experiment]\nm = two\n",
            "experiment.n_list": "[experiment]\nn_list = 64, 32\n",
            "experiment.T": "[experiment]\nT = 0\n",
            "experiment.snapshot_times": "[experiment]\nT = 1.0\nsnapshot_times = 0.5, 2.0\n",
            "experiment.martingale": "[experiment]\nmartingale = maybe\n",
            "experiment.mode": "[experiment]\nmode = plots\n",
            "experiment.ensemble_size": "[experiment]\nensemble_size = 0\n",
            "solver.grid": "[solver]\ngrid = 64\n",
            "solver.refinements": "[solver]\nrefinements = 1\n",
            "profile": "[profile]\nkind = bump\ncenter = 0.1\n",
            "profile.width": "[profile]\nwidth = wide\n",
            "test_function.bad": "[test_function.bad]\nfamily = box\n",
            "plots": "[plots]\nwidth = 3\n",
        }
        for key, text in cases.items():
            with self.subTest(key=key):
                self.assertKey(key, text)

    def test_duplicate_test_function_names(self):
        with self.assertRaises(ConfigurationError):
            ExperimentConfig(test_functions=(TestFunction(name="a"), TestFunction(width=0.2, name="a")))


class TestExperimentConfig(TestCase):
    def test_defaults(self):
        cfg = ExperimentConfig()

        self.assertEqual("hydro", cfg.mode)
        self.assertEqual((0.0, 0.25, 0.5), cfg.snapshot_times)
        self.assertEqual((0.1, 0.05, 0.02), cfg.deltas)

    def test_snapshot_times_include_endpoints(self):
        cfg = ExperimentConfig(T=1.0, snapshot_times=(0.5, 0.5))
        self.assertEqual((0.0, 0.5, 1.0), cfg.snapshot_times)

    def test_to_dict(self):
        data = ExperimentConfig(mode="pde").to_dict()

        self.assertEqual(["mode", "gamma", "m", "n_list"], list(data)[:4])
        self.assertNotIn("output_dir", data)
        self.assertEqual("pde", data["mode"])
        self.assertEqual([0.0, 0.25, 0.5], data["snapshot_times"])
        self.assertEqual("bump", data["test_functions"][0]["name"])
        self.assertEqual(vars_of(SolverSettings()), data["solver"])

    def test_vars_of(self):
        self.assertEqual(
            {"grid_size": 1024, "dt": None, "dealias": False, "refinements": 2}, vars_of(SolverSettings())
        )

    def test_solver_dt(self):
        cfg = config_from_parser(parse("[solver]\ndt = 0.001\ndealias = yes\n"))

        self.assertEqual(0.001, cfg.solver.dt)
        self.assertTrue(cfg.solver.dealias)
