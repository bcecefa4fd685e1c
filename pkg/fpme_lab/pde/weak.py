from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.fracops import TestFunction, periodic_frac_laplacian, sobolev_seminorm
from fpme_lab.measures import ProfileSpec
from fpme_lab.pde.field import DensityField

__all__ = [
    "EnergyNorms",
    "weak_residual_F",
    "energy_norms",
    "sup_distance",
    "is_ordered",
]


def _times(fields: Sequence[DensityField]) -> np.ndarray:
    times = np.array([rho.time for rho in fields])
    if times.size and np.any(np.diff(times) <= 0):
        raise InvalidArgumentError("fields must be in strictly increasing time order")
    return times


def weak_residual_F(
    fields: Sequence[DensityField],
    G: TestFunction,
    g: ProfileSpec,
    t: float,
    gamma: float,
    m: int,
) -> float:
    """
    F(t, rho, G, g) = <rho_t, G_t> - <g, G_0> - int_0^t <rho_s, d_s G_s> ds
                      - int_0^t <rho_s^m, -(-Delta)^{gamma/2} G_s> ds,
    spatial pairings by the periodic rectangle rule, time integrals by the
    trapezoid rule over the fields with time <= t.
    """
    times = _times(fields)
    used = [rho for rho, s in zip(fields, times) if s <= t + 1e-12]
    if not used or abs(used[0].time) > 1e-12 or abs(used[-1].time - t) > 1e-12:
        raise InvalidArgumentError(f"fields must start at 0 and include t={t}")

    first = used[0]
    u = first.positions
    phi = G.spatial(u)
    frac_phi = periodic_frac_laplacian(phi, first.torus_length, gamma)
    initial = g.density(u)

    s = np.array([rho.time for rho in used])
    transport = np.array([rho.pairing(phi) for rho in used]) * G.time_derivative(s)
    nonlinear = np.array([rho.step * float(np.dot(rho.values ** m, frac_phi)) for rho in used])
    nonlinear = nonlinear * G.time_factor(s)

    final = used[-1].pairing(phi) * float(G.time_factor(t))
    start = first.step * float(np.dot(initial, phi)) * float(G.time_factor(0.0))

    if len(used) == 1:
        return final - start
    return final - start - trapezoid(transport, s) - trapezoid(nonlinear, s)


@dataclass(frozen=True)
class EnergyNorms:
    l2_dist: float
    sobolev_integral: float


def energy_norms(fields: Sequence[DensityField], b: float, gamma: float, m: int) -> EnergyNorms:
    """
    int_0^T ||rho_s - b||^2 ds and int_0^T [rho_s^m - b^m]^2_{H^{gamma/2}} ds,
    the seminorm taken on the real line with rho = b outside the torus window.
    """
    times = _times(fields)
    if times.size < 2:
        return EnergyNorms(0.0, 0.0)

    l2 = [rho.step * float(np.sum((rho.values - b) ** 2)) for rho in fields]
    seminorms = [
        sobolev_seminorm(rho.values ** m - b ** m, gamma, rho.torus_length, background=0.0)
        for rho in fields
    ]
    return EnergyNorms(float(trapezoid(l2, times)), float(trapezoid(seminorms, times)))


def sup_distance(rho: DensityField, b: float) -> float:
    return float(np.max(np.abs(rho.values - b)))


def is_ordered(lower: Sequence[DensityField], upper: Sequence[DensityField], tol: float = 1e-8) -> bool:
    """True if lower <= upper + tol pointwise at every common time."""
    return all(
        bool(np.all(a.values <= b.values + tol)) for a, b in zip(lower, upper)
    )
