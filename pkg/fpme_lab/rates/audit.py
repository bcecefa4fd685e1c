import logging
from dataclasses import dataclass

import numpy as np

from fpme_lab.errors import CapacityError
from fpme_lab.lattice import all_configurations
from fpme_lab.rates.occupancy import Occupancy
from fpme_lab.rates.rate_model import RateModel

__all__ = [
    "AuditResult",
    "audit_decomposition",
    "audit_nearest_neighbour_floor",
    "audit_symmetry",
    "audit_window_equivalence",
]

logger = logging.getLogger(__name__)

MAX_AUDIT_WINDOW = 20


@dataclass(frozen=True)
class AuditResult:
    """
    Outcome of one exhaustive identity audit.

    AuditResult(name, m, window, checked, failures)

    `checked` counts (configuration, pair) cases; `failures` those where the
    identity did not hold.
    """

    name: str
    m: int
    window: int
    checked: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "m": self.m,
            "window": self.window,
            "checked": self.checked,
            "failures": self.failures,
            "passed": self.passed,
        }


def _configurations(window: int) -> Occupancy:
    if window > MAX_AUDIT_WINDOW:
        raise CapacityError(f"window {window} exceeds {MAX_AUDIT_WINDOW} sites")
    return Occupancy(all_configurations(window))


def _finish(name: str, m: int, window: int, checked: int, failures: int) -> AuditResult:
    result = AuditResult(name, m, window, checked, failures)
    logger.info(
        "audit %s m=%d window=%d: %d cases, %d failures",
        name,
        m,
        window,
        checked,
        failures,
    )
    return result


def audit_decomposition(m: int, window: int = 14, max_distance: int = 5) -> AuditResult:
    """
    Decomposition identity on every configuration of `window` sites and every
    ordered pair with 1 < |x - y| <= max_distance. The identity is polynomial
    in the occupancies, so periodic wrap-around does not affect it.
    """
    model = RateModel(m=m)
    occ = _configurations(window)
    checked = failures = 0

    for x in range(window):
        for d in range(2, max_distance + 1):
            for y in (x + d, x - d):
                holds = model.check_decomposition(occ, x, y)
                checked += holds.size
                failures += int(holds.size - np.count_nonzero(holds))

    return _finish("decomposition", m, window, checked, failures)


def audit_nearest_neighbour_floor(m: int, window: int = 10) -> AuditResult:
    """xi_{x,x+1} c_m(x, x+1) >= xi_{x,x+1} on every configuration of `window` sites."""
    model = RateModel(m=m)
    occ = _configurations(window)
    checked = failures = 0

    for x in range(window):
        xi = occ(x) != occ(x + 1)
        rate = model.c_m(occ, x, x + 1)
        checked += xi.size
        failures += int(np.count_nonzero(xi * rate < xi))

    return _finish("nearest_neighbour_floor", m, window, checked, failures)


def audit_symmetry(m: int, ring_size: int = None) -> AuditResult:
    """
    c_m(x, y) == c_m(y, x) on every configuration of a ring of ring_size sites
    (default 4m + 2), every ordered pair, plus the exchange invariance
    c_m(eta) == c_m(eta^{x,y}) that reversibility rests on.
    """
    ring_size = ring_size or 4 * m + 2
    model = RateModel(m=m)
    occ = _configurations(ring_size)
    checked = failures = 0

    for x in range(ring_size):
        for y in range(x + 1, ring_size):
            forward = model.c_m(occ, x, y)
            backward = model.c_m(occ, y, x)
            exchanged = model.c_m(occ.swapped(x, y), x, y)
            checked += forward.size
            failures += int(
                np.count_nonzero((forward != backward) | (forward != exchanged))
            )

    return _finish("symmetry", m, ring_size, checked, failures)


def audit_window_equivalence(m: int, window: int = None) -> AuditResult:
    """
    Cross-check of the three c_dif representations: the straddling products
    against the window form for 1 < |x - y|, and against the nearest-neighbour
    product form for y = x + 1.
    """
    window = window or min(4 * m + 2, 14)
    model = RateModel(m=m)
    occ = _configurations(window)
    checked = failures = 0

    for x in range(window):
        literal = model.c_dif(occ, x, x + 1)
        nearest = model.c_dif_nearest(occ, x)
        checked += literal.size
        failures += int(np.count_nonzero(literal != nearest))

        for d in range(2, window // 2 + 1):
            y = x + d
            combined = model.c_literal(occ, x, y)
            windows = model.c_dif_window(occ, x, y)
            checked += combined.size
            failures += int(np.count_nonzero(combined != windows))

    return _finish("window_equivalence", m, window, checked, failures)
