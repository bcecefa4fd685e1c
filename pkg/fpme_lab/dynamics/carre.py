import numpy as np

from fpme_lab.dynamics.pair_sums import pair_sum, pair_sum_direct
from fpme_lab.fracops import TestFunction, ring_positions
from fpme_lab.kernel import JumpKernel
from fpme_lab.rates import Occupancy, RateModel

__all__ = ["carre_du_champ", "carre_du_champ_direct", "carre_terms"]


def carre_terms(eta, values: np.ndarray):
    """
    Separable expansion of xi_{x,y} [G(y) - G(x)]^2, with
    xi = eta(x) + eta(y) - 2 eta(x) eta(y).
    """
    e = Occupancy(eta).eta.astype(float)
    ones = np.ones_like(e)
    g = np.asarray(values, dtype=float)

    occupation = [(e, ones), (ones, e), (-2.0 * e, e)]
    squared = [(ones, g * g), (-2.0 * g, g), (g * g, ones)]

    return [(a1 * a2, b1 * b2) for a1, b1 in occupation for a2, b2 in squared]


def _prefactor(kernel: JumpKernel, n: int) -> float:
    return n ** kernel.gamma / (4.0 * n * n)


def carre_du_champ(
    cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float
) -> float:
    """
    n^gamma (L <pi, G_s>^2 - 2 <pi, G_s> L <pi, G_s>)
      = (n^gamma / 4n^2) sum_{x,y} [G_s(y/n) - G_s(x/n)]^2 p(y-x) c_m [eta(y) - eta(x)]^2.
    """
    if G.is_constant:
        return 0.0
    values = G.value(s, ring_positions(kernel.ring_size, n))
    return _prefactor(kernel, n) * pair_sum(kernel, model, cfg, carre_terms(cfg, values))


def carre_du_champ_direct(
    cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float
) -> float:
    values = G.value(s, ring_positions(kernel.ring_size, n))
    return _prefactor(kernel, n) * pair_sum_direct(kernel, model, cfg, carre_terms(cfg, values))
