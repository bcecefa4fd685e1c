import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fpme_lab import __version__
from fpme_lab.dynamics import (
    SimParams,
    bernoulli_vector,
    carre_du_champ,
    dirichlet_form,
    dirichlet_pairing,
    exact_generator,
    simulate,
    stationarity_check,
    transition_frequency_check,
)
from fpme_lab.errors import ConfigurationError, StageError
from fpme_lab.fracops import (
    TestFunction,
    convdisc_gap,
    extra_term_bounds,
    fit_slope,
    frac_laplacian,
    l1_boundedness,
)
from fpme_lab.harness.cache import ResultCache
from fpme_lab.harness.config import ExperimentConfig
from fpme_lab.harness.report import Check, ExperimentReport
from fpme_lab.kernel import JumpKernel, delta_gamma
from fpme_lab.lattice import LatticeConfig
from fpme_lab.measures import MeasureSpec, ProfileSpec, sample_initial
from fpme_lab.observables import (
    EmpiricalSeries,
    MartingaleEstimate,
    martingale_path,
    pairing_series,
    quadratic_variation_bound,
    write_series_csv,
)
from fpme_lab.pde import (
    DensityField,
    SolverConfig,
    energy_norms,
    exact_linear_solution,
    range_check,
    solve_fpme,
    weak_residual_F,
    write_fields_csv,
)
from fpme_lab.rates import (
    RateModel,
    audit_decomposition,
    audit_nearest_neighbour_floor,
    audit_symmetry,
    audit_window_equivalence,
)
from fpme_lab.utils import derive_seed, make_rng

__all__ = [
    "StageClock",
    "TrajectoryTask",
    "run_trajectory",
    "run_hydro_study",
    "run_invariance_suite",
    "run_operator_suite",
    "run_pde_suite",
    "run_rates_audit",
    "SUITES",
]

logger = logging.getLogger(__name__)

STATIONARY_TOLERANCE = 1e-12
BALANCE_TOLERANCE = 1e-13
DIRICHLET_TOLERANCE = 1e-10
LINEAR_EXACTNESS_TOLERANCE = 1e-8
RK4_RATIO = 16.0
RK4_RATIO_SPREAD = 0.3
RK4_ERROR_FLOOR = 1e-11
RK4_MIN_GRID = 8
WEAK_RESIDUAL_TOLERANCE = 1e-4
WEAK_RESIDUAL_SHRINK = 3.0
WEAK_SNAPSHOTS = 64
ENERGY_STABILITY = 0.02
MASS_TOLERANCE = 1e-9
RANGE_TOLERANCE = 1e-8
L1_SPREAD = 0.1
QUADRATURE_TOLERANCE = 1e-6
CARRE_DENSITY = 0.5
MARTINGALE_SIGMAS = 3.0
MARTINGALE_SLOPE_TOLERANCE = 0.4
FLUCTUATION_TOLERANCE = 0.5

# Configuration keys a trajectory depends on.
TRAJECTORY_KEYS = (
    "gamma",
    "m",
    "T",
    "snapshot_times",
    "ensemble_size",
    "master_seed",
    "torus_length",
    "martingale",
    "martingale_steps",
    "profile",
    "test_functions",
)


class StageClock:
    """
    Names the stages of a run and times them.

    Within `with clock("name"):` any exception is re-raised as a StageError
    naming the stage, and the elapsed wall time is added to clock.timings.
    KeyboardInterrupt and SystemExit pass through.
    """

    def __init__(self, timings: Optional[Dict[str, float]] = None):
        self.timings = {} if timings is None else timings

    @contextmanager
    def __call__(self, name: str):
        logger.info("stage %s", name)
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except Exception as error:
            raise StageError(name, error) from error
        finally:
            self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - start


def _map(func: Callable, tasks: Sequence, jobs: int) -> list:
    """func over tasks in task order, in worker processes when jobs > 1."""
    if jobs <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _require_mode(cfg: ExperimentConfig, mode: str) -> None:
    if cfg.mode != mode:
        raise ConfigurationError("experiment.mode", f"expected '{mode}', got '{cfg.mode}'")


def _ratio(numerator: float, denominator: float) -> float:
    if denominator > 0:
        return numerator / denominator
    return 0.0 if numerator == 0 else math.inf


def _relative_change(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _report(cfg: ExperimentConfig, checks, columns, rows, slopes=None, notes=()) -> ExperimentReport:
    return ExperimentReport(
        mode=cfg.mode,
        version=__version__,
        config=cfg.to_dict(),
        checks=tuple(checks),
        columns=tuple(columns),
        rows=tuple(rows),
        slopes=dict(slopes or {}),
        notes=tuple(notes),
    )


@lru_cache(maxsize=8)
def _kernel(gamma: float, ring_size: int) -> JumpKernel:
    return JumpKernel(gamma, ring_size)


@dataclass(frozen=True)
class TrajectoryTask:
    """
    One (n, index) trajectory of a hydrodynamic study, small enough to send
    to a worker process.
    """

    n: int
    index: int
    master_seed: int
    gamma: float
    m: int
    T: float
    torus_length: float
    profile: ProfileSpec
    test_functions: Tuple[TestFunction, ...]
    snapshot_times: Tuple[float, ...]
    report_times: Tuple[float, ...]
    martingale: bool = False

    @property
    def seeds(self) -> Tuple[int, int]:
        """Seeds of the initial configuration and of the dynamics."""
        stream = derive_seed(self.master_seed, self.n)
        return derive_seed(stream, 2 * self.index), derive_seed(stream, 2 * self.index + 1)


def run_trajectory(task: TrajectoryTask) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """
    Pairings <pi_t, G_t> and, if requested, martingale values M_t(G) with
    their bounds t sup Gamma at the report times (one row per test function),
    plus the accepted event count.
    """
    init_seed, dynamics_seed = task.seeds
    measure = MeasureSpec(profile=task.profile, n=task.n, torus_length=task.torus_length)
    init = sample_initial(measure, make_rng(init_seed))

    params = SimParams(
        n=task.n,
        T=task.T,
        gamma=task.gamma,
        m=task.m,
        seed=dynamics_seed,
        snapshot_times=task.snapshot_times,
        torus_length=task.torus_length,
    )
    kernel = _kernel(task.gamma, params.ring_size)
    model = RateModel(task.m)
    log = simulate(params, kernel, model, init)

    picked = [log.snapshot_times.index(t) for t in task.report_times]
    snapshots = [log.snapshots[i] for i in picked]
    pairings = np.array(
        [pairing_series(snapshots, task.report_times, G, task.n).values for G in task.test_functions]
    )

    if task.martingale:
        martingales = np.array(
            [martingale_path(log, G, task.n, kernel, model)[picked] for G in task.test_functions]
        )
        bounds = np.array(
            [quadratic_variation_bound(log, G, task.n, kernel, model)[picked] for G in task.test_functions]
        )
    else:
        martingales = np.zeros_like(pairings)
        bounds = np.zeros_like(pairings)

    return pairings, martingales, bounds, log.accepted


def _simulation_times(cfg: ExperimentConfig) -> Tuple[float, ...]:
    times = set(cfg.snapshot_times)
    if cfg.martingale:
        times |= set(np.linspace(0.0, cfg.T, cfg.martingale_steps + 1).tolist())
    return tuple(sorted(times))


def _tasks(cfg: ExperimentConfig, n: int) -> List[TrajectoryTask]:
    return [
        TrajectoryTask(
            n=n,
            index=index,
            master_seed=cfg.master_seed,
            gamma=cfg.gamma,
            m=cfg.m,
            T=cfg.T,
            torus_length=cfg.torus_length,
            profile=cfg.profile,
            test_functions=cfg.test_functions,
            snapshot_times=_simulation_times(cfg),
            report_times=cfg.snapshot_times,
            martingale=cfg.martingale,
        )
        for index in range(cfg.ensemble_size)
    ]


def _ensemble(cfg: ExperimentConfig, n: int, cache: ResultCache, jobs: int) -> Dict[str, np.ndarray]:
    tasks = _tasks(cfg, n)
    study = cfg.to_dict()
    params = {
        "version": __version__,
        "n": n,
        "study": {key: study[key] for key in TRAJECTORY_KEYS},
    }

    def compute():
        results = _map(run_trajectory, tasks, jobs)
        return {
            "pairings": np.array([result[0] for result in results]),
            "martingales": np.array([result[1] for result in results]),
            "bounds": np.array([result[2] for result in results]),
            "accepted": np.array([result[3] for result in results], dtype=np.int64),
        }

    return cache.fetch("trajectories", params, compute)


def _reference_fields(cfg: ExperimentConfig, cache: ResultCache) -> List[DensityField]:
    """The limit density at the snapshot times: exact for m = 1, solved otherwise."""
    solver = cfg.solver
    params = {
        "version": __version__,
        "profile": cfg.profile.to_dict(),
        "gamma": cfg.gamma,
        "m": cfg.m,
        "times": list(cfg.snapshot_times),
        "grid_size": solver.grid_size,
        "dt": solver.dt,
        "dealias": solver.dealias,
        "torus_length": cfg.torus_length,
    }

    def compute():
        if cfg.m == 1:
            fields = [
                exact_linear_solution(cfg.profile, cfg.gamma, t, solver.grid_size, cfg.torus_length)
                for t in cfg.snapshot_times
            ]
        else:
            fields = solve_fpme(
                cfg.profile,
                SolverConfig(
                    grid_size=solver.grid_size,
                    gamma=cfg.gamma,
                    m=cfg.m,
                    dt=solver.dt,
                    dealias=solver.dealias,
                    torus_length=cfg.torus_length,
                ),
                cfg.snapshot_times,
            )
        return {"values": np.array([rho.values for rho in fields]), "times": np.array(cfg.snapshot_times)}

    arrays = cache.fetch("reference", params, compute)
    return [
        DensityField(values, float(t), cfg.torus_length) for values, t in zip(arrays["values"], arrays["times"])
    ]


def _delta_column(delta: float) -> str:
    return f"exceed_{delta:g}"


def _fluctuation_level(G: TestFunction, b: float, n: int, t: float, torus_length: float) -> float:
    """E|N(0, sigma^2)| for <pi, G_t> under the product measure nu_b."""
    size = int(round(n * torus_length))
    weights = G.value(t, np.arange(size) / n)
    sigma = math.sqrt(b * (1.0 - b) * float(np.sum(weights ** 2))) / n
    return sigma * math.sqrt(2.0 / math.pi)


def run_hydro_study(
    cfg: ExperimentConfig,
    cache: ResultCache = None,
    jobs: int = 1,
    timings: Dict[str, float] = None,
    export_series: bool = False,
) -> ExperimentReport:
    """
    Ensemble study of |<pi_t^n, G_t> - int G_t rho(t, u) du| as n grows.

    Records the mean absolute error E(n, t, G) and exceedance fractions for
    each delta, and checks that E at the final time decreases in n. With
    export_series the pairing of every trajectory goes to series.csv.
    """
    _require_mode(cfg, "hydro")
    cache = cache or ResultCache(enabled=False)
    clock = StageClock(timings)
    labels = [G.label for G in cfg.test_functions]
    times = cfg.snapshot_times

    with clock("reference"):
        fields = _reference_fields(cfg, cache)
        targets = np.array(
            [[rho.pairing(G.value(rho.time, rho.positions)) for rho in fields] for G in cfg.test_functions]
        )

    ensembles = {}
    for n in cfg.n_list:
        with clock(f"simulate n={n}"):
            ensembles[n] = _ensemble(cfg, n, cache, jobs)
            logger.info("n=%d: %d trajectories done", n, cfg.ensemble_size)

    columns = ("n", "t", "test_function", "mean_abs_error", "stderr") + tuple(
        _delta_column(delta) for delta in cfg.deltas
    )
    rows, checks, notes = [], [], []
    slopes = {}
    errors = {}

    with clock("observables"):
        for n in cfg.n_list:
            ensemble = ensembles[n]
            if int(np.sum(ensemble["accepted"])) == 0:
                notes.append(f"zero activity at n={n}: no exchange was accepted in any trajectory")
                logger.warning("zero activity at n=%d", n)

            deviation = np.abs(ensemble["pairings"] - targets[None])
            samples = deviation.shape[0]
            errors[n] = deviation.mean(axis=0)
            stderr = deviation.std(axis=0, ddof=1) / math.sqrt(samples) if samples > 1 else np.zeros_like(errors[n])
            exceed = {delta: (deviation > delta).mean(axis=0) for delta in cfg.deltas}

            for j, t in enumerate(times):
                for g, label in enumerate(labels):
                    row = {
                        "n": n,
                        "t": t,
                        "test_function": label,
                        "mean_abs_error": float(errors[n][g, j]),
                        "stderr": float(stderr[g, j]),
                    }
                    row.update({_delta_column(delta): float(exceed[delta][g, j]) for delta in cfg.deltas})
                    rows.append(row)

        for g, (G, label) in enumerate(zip(cfg.test_functions, labels)):
            final = [float(errors[n][g, -1]) for n in cfg.n_list]

            if len(final) >= 2:
                worst = max(_ratio(b, a) for a, b in zip(final, final[1:]))
                checks.append(Check.compare(f"hydro.{label}.decreasing", worst, "<", 1.0))
                if all(value > 0 for value in final):
                    slopes[f"{label}.mean_abs_error"] = fit_slope(cfg.n_list, final)
            if cfg.n_list[-1] >= 8 * cfg.n_list[0]:
                checks.append(
                    Check.compare(f"hydro.{label}.halving", _ratio(final[-1], final[0]), "<", 0.5)
                )

            if cfg.profile.kind == "constant":
                b = cfg.profile.background
                for n, value in zip(cfg.n_list, final):
                    level = _fluctuation_level(G, b, n, cfg.T, cfg.torus_length)
                    if level > 0:
                        checks.append(
                            Check.compare(
                                f"hydro.{label}.n{n}.fluctuation_level",
                                abs(value / level - 1.0),
                                "<",
                                FLUCTUATION_TOLERANCE,
                            )
                        )

    if cfg.martingale:
        with clock("martingale"):
            # Var M_t <= t sup Gamma = O(max(n^(gamma-2), n^-1)), an upper rate only
            predicted = max(cfg.gamma - 2.0, -1.0)
            for g, label in enumerate(labels):
                variances = []
                for n in cfg.n_list:
                    estimate = MartingaleEstimate.from_paths(
                        times, ensembles[n]["martingales"][:, g, :], ensembles[n]["bounds"][:, g, :]
                    )
                    checks.append(
                        Check.compare(f"martingale.{label}.n{n}", estimate.max_z, "<=", MARTINGALE_SIGMAS)
                    )
                    checks.append(
                        Check.compare(
                            f"martingale.{label}.n{n}.quadratic_bound",
                            estimate.variance_ratio,
                            "<=",
                            estimate.variance_allowance(MARTINGALE_SIGMAS),
                        )
                    )
                    variances.append(float(estimate.variance[-1]))

                if len(variances) >= 2 and all(value > 0 for value in variances):
                    slope = fit_slope(cfg.n_list, variances)
                    slopes[f"{label}.martingale_variance"] = slope
                    checks.append(
                        Check.compare(
                            f"martingale.{label}.variance_slope",
                            slope,
                            "<=",
                            predicted + MARTINGALE_SLOPE_TOLERANCE,
                        )
                    )

    if export_series:
        with clock("series"):
            series = [
                EmpiricalSeries(
                    times,
                    ensembles[n]["pairings"][index, g],
                    {
                        "n": n,
                        "gamma": cfg.gamma,
                        "m": cfg.m,
                        "seed": task.seeds[1],
                        "observable": f"pairing.{label}",
                    },
                )
                for n in cfg.n_list
                for index, task in enumerate(_tasks(cfg, n))
                for g, label in enumerate(labels)
            ]
            path = write_series_csv(series, cfg.output_dir / "series.csv")
            notes.append(f"pairing series written to {path.name}")

    return _report(cfg, checks, columns, rows, slopes, notes)


def _frequency_check(cfg: ExperimentConfig, m: int, checks: list, notes: list) -> None:
    settings = cfg.invariance
    size = settings.frequency_size
    gamma = settings.frequency_gamma
    kernel = _kernel(gamma, size)
    model = RateModel(m)

    rng = make_rng(derive_seed(cfg.master_seed, 1000 + m))
    init = LatticeConfig.from_array(rng.permutation(np.arange(size) < size // 2).astype(np.uint8))

    def run(T: float, seed: int, record: bool):
        params = SimParams(
            n=size, T=T, gamma=gamma, m=m, seed=seed, torus_length=1.0, record_events=record
        )
        return simulate(params, kernel, model, init)

    pilot = run(1.0, derive_seed(cfg.master_seed, 2000 + m), False)
    if pilot.accepted == 0:
        notes.append(f"zero activity for m={m} on {size} sites: frequency check skipped")
        logger.warning("zero activity for m=%d, frequency check skipped", m)
        return

    log = run(settings.frequency_events / pilot.accepted, derive_seed(cfg.master_seed, 3000 + m), True)
    report = transition_frequency_check(log, kernel, model)
    checks.append(Check.compare(f"frequency.m{m}.max_abs_z", report.max_abs_z, "<=", settings.sigmas))


def run_invariance_suite(
    cfg: ExperimentConfig,
    cache: ResultCache = None,
    jobs: int = 1,
    timings: Dict[str, float] = None,
) -> ExperimentReport:
    """
    Exact checks of the generator on small rings: stationarity and detailed
    balance of nu_b, the Dirichlet-form identity, and a sampled comparison of
    simulated transition frequencies with the exact rates.
    """
    _require_mode(cfg, "invariance")
    settings = cfg.invariance
    clock = StageClock(timings)
    checks, rows, notes = [], [], []

    with clock("stationarity"):
        for m in settings.m_values:
            for gamma in settings.gamma_values:
                gen = exact_generator(settings.ring_size, _kernel(gamma, settings.ring_size), RateModel(m))
                for b in settings.densities:
                    report = stationarity_check(gen, b)
                    key = f"m{m}.gamma{gamma:g}.b{b:g}"
                    checks.append(
                        Check.compare(
                            f"stationarity.{key}", report.stationary_residual, "<", STATIONARY_TOLERANCE
                        )
                    )
                    checks.append(
                        Check.compare(
                            f"detailed_balance.{key}", report.detailed_balance_residual, "<", BALANCE_TOLERANCE
                        )
                    )
                    rows.append(
                        {
                            "m": m,
                            "gamma": gamma,
                            "b": b,
                            "stationary_residual": report.stationary_residual,
                            "detailed_balance_residual": report.detailed_balance_residual,
                        }
                    )

    with clock("dirichlet"):
        size = settings.dirichlet_size
        b = settings.densities[0]
        for m in settings.dirichlet_m_values:
            gen = exact_generator(size, _kernel(cfg.gamma, size), RateModel(m))
            nu = bernoulli_vector(size, b)
            rng = make_rng(derive_seed(cfg.master_seed, m))

            worst = 0.0
            for _ in range(settings.dirichlet_samples):
                f = rng.random(nu.size) + 0.1
                f = f / float(f @ nu)
                residual = abs(dirichlet_pairing(gen, f, b) + 0.5 * dirichlet_form(gen, f, b))
                worst = max(worst, residual)

            checks.append(Check.compare(f"dirichlet.m{m}", worst, "<", DIRICHLET_TOLERANCE))

    with clock("frequencies"):
        for m in settings.m_values:
            _frequency_check(cfg, m, checks, notes)

    columns = ("m", "gamma", "b", "stationary_residual", "detailed_balance_residual")
    return _report(cfg, checks, columns, rows, notes=notes)


def _quadrature_points(G: TestFunction) -> List[float]:
    if G.family == "cosine_mode":
        return [0.0, 0.3, 0.7]
    return [G.center + offset * G.width for offset in (0.0, 0.5, 1.0, 2.0)]


def _carre_configuration(cfg: ExperimentConfig, n: int, kernel: JumpKernel) -> LatticeConfig:
    """A nu_{1/2} sample on the ring of the given kernel, fixed by the master seed and n."""
    rng = make_rng(derive_seed(cfg.master_seed, 4000 + n))
    return LatticeConfig.from_array((rng.random(kernel.ring_size) < CARRE_DENSITY).astype(np.uint8))


def run_operator_suite(
    cfg: ExperimentConfig,
    cache: ResultCache = None,
    jobs: int = 1,
    timings: Dict[str, float] = None,
) -> ExperimentReport:
    """
    Convergence of the rescaled discrete operator n^gamma K_n to the
    fractional Laplacian, decay of the extra-term bounds Y1 and Y2, uniform
    L1 bounds and the decay of the carre du champ on a nu_{1/2} sample, for
    every test function and gamma.
    """
    _require_mode(cfg, "operators")
    settings = cfg.operators
    n_list = settings.n_list
    tolerance = settings.slope_tolerance
    clock = StageClock(timings)
    checks, rows, notes = [], [], []
    slopes = {}
    # Y1 scales with m - 1; its decay rate does not depend on m.
    m = max(cfg.m, 2)
    model = RateModel(m)

    for G in cfg.test_functions:
        label = G.label
        for gamma in settings.gamma_values:
            key = f"{label}.gamma{gamma:g}"

            with clock(f"operators {key}"):
                gaps, y1, y2, carre = [], [], [], []
                for n in n_list:
                    kernel = _kernel(gamma, int(round(n * cfg.torus_length)))
                    gaps.append(convdisc_gap(G, n, gamma, kernel, cfg.T))
                    bounds = extra_term_bounds(G, n, gamma, kernel, m, cfg.T)
                    y1.append(bounds.y1)
                    y2.append(bounds.y2)
                    carre.append(
                        carre_du_champ(_carre_configuration(cfg, n, kernel), kernel, model, G, n, cfg.T)
                    )
                l1 = l1_boundedness(G, n_list, gamma, cfg.torus_length, cfg.T)

                for n, gap, a, b, c in zip(n_list, gaps, y1, y2, carre):
                    rows.append(
                        {
                            "test_function": label,
                            "gamma": gamma,
                            "n": n,
                            "convdisc_gap": gap,
                            "y1": a,
                            "y2": b,
                            "l1": l1.values[n],
                            "carre": c,
                        }
                    )

                if G.is_constant:
                    for name in ("convdisc", "y1", "y2", "l1", "carre"):
                        checks.append(Check.trivial(f"operators.{key}.{name}"))
                    notes.append(f"{label} is constant: every operator gap vanishes identically")
                    continue

                if len(n_list) >= 2:
                    worst = max(_ratio(b, a) for a, b in zip(gaps, gaps[1:]))
                    checks.append(Check.compare(f"operators.{key}.convdisc_decreasing", worst, "<", 1.0))
                if n_list[-1] >= 32 * n_list[0]:
                    checks.append(
                        Check.compare(f"operators.{key}.convdisc_quarter", _ratio(gaps[-1], gaps[0]), "<", 0.25)
                    )

                if len(n_list) >= 2:
                    predicted_y1 = max(gamma - 2.0, -1.0, gamma - 1.0 - delta_gamma(gamma))
                    slope_y1 = fit_slope(n_list, y1)
                    slope_y2 = fit_slope(n_list, y2)
                    slopes[f"{key}.convdisc"] = fit_slope(n_list, gaps)
                    slopes[f"{key}.y1"] = slope_y1
                    slopes[f"{key}.y2"] = slope_y2
                    checks.append(Check.compare(f"operators.{key}.y1_slope", slope_y1, "<=", predicted_y1 + tolerance))
                    checks.append(
                        Check.compare(f"operators.{key}.y2_slope", abs(slope_y2 - (gamma - 2.0)), "<=", tolerance)
                    )

                    # max(n^(gamma-2), n^-1) bounds the carre du champ; n^-1 is the sharp rate
                    slope_carre = fit_slope(n_list, carre)
                    slopes[f"{key}.carre"] = slope_carre
                    checks.append(
                        Check.compare(
                            f"operators.{key}.carre_slope", slope_carre, "<=", max(gamma - 2.0, -1.0) + tolerance
                        )
                    )

                checks.append(Check.compare(f"operators.{key}.l1_spread", l1.relative_spread, "<", L1_SPREAD))

                if G.hermite_order == 0:
                    points = _quadrature_points(G)
                    exact = [float(G.time_factor(0.0) * G.frac_laplacian_exact(u, gamma)) for u in points]
                    approx = [frac_laplacian(G, u, gamma) for u in points]
                    scale = max(abs(value) for value in exact)
                    error = max(abs(a - b) for a, b in zip(approx, exact)) / scale
                    checks.append(Check.compare(f"operators.{key}.quadrature", error, "<", QUADRATURE_TOLERANCE))

    columns = ("test_function", "gamma", "n", "convdisc_gap", "y1", "y2", "l1", "carre")
    return _report(cfg, checks, columns, rows, slopes, notes)


def _pde_row(quantity: str, grid_size: int, dt: float, value: float) -> dict:
    return {"quantity": quantity, "grid_size": grid_size, "dt": dt, "value": value}


def _weak_test_function(cfg: ExperimentConfig) -> TestFunction:
    for G in cfg.test_functions:
        if not G.is_constant:
            return G
    return TestFunction("gaussian_bump", center=cfg.profile.center, width=0.1)


def _rk4_errors(g: ProfileSpec, gamma: float, T: float, grid: int, L: float) -> List[Tuple[float, float]]:
    """(dt, sup error against the exact m = 1 solution) at dt_stable / 2 and dt_stable / 4."""
    base = SolverConfig(grid_size=grid, gamma=gamma, m=1, torus_length=L).dt_stable
    exact = exact_linear_solution(g, gamma, T, grid, L)
    errors = []
    for dt in (base / 2.0, base / 4.0):
        (numeric,) = solve_fpme(g, SolverConfig(grid_size=grid, gamma=gamma, m=1, dt=dt, torus_length=L), [T])
        errors.append((dt, float(np.max(np.abs(numeric.values - exact.values)))))
    return errors


def run_pde_suite(
    cfg: ExperimentConfig,
    cache: ResultCache = None,
    jobs: int = 1,
    timings: Dict[str, float] = None,
    export_fields: bool = False,
) -> ExperimentReport:
    """
    Solver verification: exactness and fourth-order convergence for m = 1,
    weak-form residual and its refinement, energy stability, the range of
    the solution and mass conservation.
    """
    _require_mode(cfg, "pde")
    clock = StageClock(timings)
    solver = cfg.solver
    gamma = cfg.gamma
    g = cfg.profile
    L = cfg.torus_length
    checks, rows, notes = [], [], []

    with clock("linear exactness"):
        linear = SolverConfig(grid_size=solver.grid_size, gamma=gamma, m=1, torus_length=L)
        (numeric,) = solve_fpme(g, linear, [cfg.T])
        exact = exact_linear_solution(g, gamma, cfg.T, solver.grid_size, L)
        error = float(np.max(np.abs(numeric.values - exact.values)))
        checks.append(Check.compare("pde.linear_exactness", error, "<", LINEAR_EXACTNESS_TOLERANCE))
        rows.append(_pde_row("linear_sup_error", solver.grid_size, linear.dt, error))

    with clock("rk4 order"):
        # Halve the grid until the time error at dt_stable / 4 clears roundoff.
        grid = solver.grid_size
        order_errors = _rk4_errors(g, gamma, cfg.T, grid, L)
        while order_errors[-1][1] < RK4_ERROR_FLOOR and grid // 2 >= RK4_MIN_GRID:
            grid //= 2
            order_errors = _rk4_errors(g, gamma, cfg.T, grid, L)
        if grid != solver.grid_size:
            notes.append(f"rk4 order measured on {grid} points: finer grids leave only roundoff at stable steps")

        for dt, error in order_errors:
            rows.append(_pde_row("rk4_sup_error", grid, dt, error))
        ratio = _ratio(order_errors[0][1], order_errors[1][1])
        checks.append(
            Check.compare("pde.rk4_ratio_deviation", abs(ratio / RK4_RATIO - 1.0), "<=", RK4_RATIO_SPREAD)
        )

    with clock("weak residual"):
        G = _weak_test_function(cfg)
        m = max(cfg.m, 2)
        levels = solver.refinements
        grids = [max(solver.grid_size >> levels, 16) << level for level in range(levels)]
        coarse_dt = min(
            SolverConfig(grid_size=grid, gamma=gamma, m=m, torus_length=L).dt_stable * 2 ** level
            for level, grid in enumerate(grids)
        )
        residuals = []
        for level, grid in enumerate(grids):
            dt = coarse_dt / 2 ** level
            config = SolverConfig(grid_size=grid, gamma=gamma, m=m, dt=dt, torus_length=L, dealias=solver.dealias)
            fields = solve_fpme(g, config, np.linspace(0.0, cfg.T, WEAK_SNAPSHOTS * 2 ** level + 1))
            residuals.append(abs(weak_residual_F(fields, G, g, cfg.T, gamma, m)))
            rows.append(_pde_row(f"weak_residual_m{m}", grid, dt, residuals[-1]))

        shrink = min(_ratio(coarse, fine) for coarse, fine in zip(residuals, residuals[1:]))
        checks.append(Check.compare("pde.weak_residual", residuals[-1], "<", WEAK_RESIDUAL_TOLERANCE))
        checks.append(Check.compare("pde.weak_residual_shrink", shrink, ">=", WEAK_RESIDUAL_SHRINK))

    with clock("energy"):
        b = g.background
        for m in (1, 2):
            norms = []
            for grid in (solver.grid_size // 2, solver.grid_size):
                config = SolverConfig(grid_size=grid, gamma=gamma, m=m, torus_length=L)
                fields = solve_fpme(g, config, np.linspace(0.0, cfg.T, WEAK_SNAPSHOTS + 1))
                norms.append(energy_norms(fields, b, gamma, m))
                rows.append(_pde_row(f"energy_l2_m{m}", grid, config.dt, norms[-1].l2_dist))
                rows.append(_pde_row(f"energy_sobolev_m{m}", grid, config.dt, norms[-1].sobolev_integral))

            checks.append(
                Check.compare(
                    f"pde.energy_l2_m{m}", _relative_change(norms[0].l2_dist, norms[1].l2_dist), "<", ENERGY_STABILITY
                )
            )
            checks.append(
                Check.compare(
                    f"pde.energy_sobolev_m{m}",
                    _relative_change(norms[0].sobolev_integral, norms[1].sobolev_integral),
                    "<",
                    ENERGY_STABILITY,
                )
            )

    with clock("range"):
        config = SolverConfig(
            grid_size=solver.grid_size,
            gamma=gamma,
            m=cfg.m,
            dt=solver.dt,
            dealias=solver.dealias,
            torus_length=L,
        )
        fields = solve_fpme(g, config, cfg.snapshot_times)
        low = min(range_check(rho)[0] for rho in fields)
        high = max(range_check(rho)[1] for rho in fields)
        drift = max(abs(rho.mass - fields[0].mass) for rho in fields)
        checks.append(Check.compare("pde.range_low", low, ">=", -RANGE_TOLERANCE))
        checks.append(Check.compare("pde.range_high", high, "<=", 1.0 + RANGE_TOLERANCE))
        checks.append(Check.compare("pde.mass_drift", drift, "<", MASS_TOLERANCE))
        rows.append(_pde_row("mass_drift", solver.grid_size, config.dt, drift))

        if export_fields:
            path = write_fields_csv(fields, cfg.output_dir / "fields.csv")
            notes.append(f"density snapshots written to {path.name}")

    columns = ("quantity", "grid_size", "dt", "value")
    return _report(cfg, checks, columns, rows, notes=notes)


def _audit(task: Tuple[str, int, dict]):
    name, m, kwargs = task
    return AUDITS[name](m, **kwargs)


AUDITS = {
    "decomposition": audit_decomposition,
    "nearest_neighbour_floor": audit_nearest_neighbour_floor,
    "symmetry": audit_symmetry,
    "window_equivalence": audit_window_equivalence,
}


def run_rates_audit(
    cfg: ExperimentConfig,
    cache: ResultCache = None,
    jobs: int = 1,
    timings: Dict[str, float] = None,
) -> ExperimentReport:
    """Exhaustive integer audits of the rate identities for every configured m."""
    _require_mode(cfg, "rates-audit")
    settings = cfg.rates_audit
    clock = StageClock(timings)

    tasks = []
    for m in settings.m_values:
        tasks += [
            ("decomposition", m, {"window": settings.window, "max_distance": settings.max_distance}),
            ("nearest_neighbour_floor", m, {"window": settings.floor_window}),
            ("symmetry", m, {}),
            ("window_equivalence", m, {}),
        ]

    with clock("rates audit"):
        results = _map(_audit, tasks, jobs)

    checks = [Check.compare(f"rates.{r.name}.m{r.m}", r.failures, "==", 0) for r in results]
    rows = [r.to_dict() for r in results]
    columns = ("name", "m", "window", "checked", "failures", "passed")
    return _report(cfg, checks, columns, rows)


SUITES = {
    "hydro": run_hydro_study,
    "invariance": run_invariance_suite,
    "operators": run_operator_suite,
    "pde": run_pde_suite,
    "rates-audit": run_rates_audit,
}
