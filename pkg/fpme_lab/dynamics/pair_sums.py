"""
Sums over ordered pairs weighted by p(y - x) c_m(x, y).

The literal window rate is a sum of products left(x) * right(y), so for a
weight that is itself a sum of products the whole double sum reduces to
FFT convolutions with the folded kernel. Pairs at ring distance below m,
where the dynamical rate departs from the literal one, are corrected
directly.
"""

from typing import List, Sequence, Tuple

import numpy as np

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.kernel import JumpKernel
from fpme_lab.rates import Occupancy, RateModel

__all__ = ["SeparableTerms", "pair_sum", "pair_sum_direct", "short_range_offsets"]

SeparableTerms = Sequence[Tuple[np.ndarray, np.ndarray]]


def short_range_offsets(size: int, m: int) -> List[int]:
    offsets = {d % size for d in range(1, m)} | {(-d) % size for d in range(1, m)}
    offsets.discard(0)
    return sorted(offsets)


def _check_size(kernel: JumpKernel, occ: Occupancy) -> None:
    if kernel.ring_size != occ.size:
        raise InvalidArgumentError(
            f"configuration has {occ.size} sites, kernel ring has {kernel.ring_size}"
        )


def _weight(terms: SeparableTerms, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return sum(a[x] * b[y] for a, b in terms)


def pair_sum(kernel: JumpKernel, model: RateModel, eta, terms: SeparableTerms) -> float:
    """
    sum_{x != y} p(y - x) c_m(x, y) W(x, y), W(x, y) = sum_t a_t[x] b_t[y].
    """
    occ = Occupancy(eta)
    _check_size(kernel, occ)

    total = 0.0
    for left, right in model.separable_factors(occ):
        for a, b in terms:
            total += float(np.dot(left * a, kernel.convolve(right * b)))

    if model.m >= 2:
        sites = np.arange(occ.size)
        pmf = kernel.folded_pmf
        for z in short_range_offsets(occ.size, model.m):
            partners = (sites + z) % occ.size
            excess = model.c_m(occ, sites, partners) - model.c_literal(occ, sites, partners)
            total += pmf[z] * float(np.sum(excess * _weight(terms, sites, partners)))

    return total


def pair_sum_direct(kernel: JumpKernel, model: RateModel, eta, terms: SeparableTerms) -> float:
    """Same sum, offset by offset, with the dynamical rate evaluated at every pair."""
    occ = Occupancy(eta)
    _check_size(kernel, occ)

    sites = np.arange(occ.size)
    pmf = kernel.folded_pmf
    total = 0.0

    for z in range(1, occ.size):
        partners = (sites + z) % occ.size
        rates = model.c_m(occ, sites, partners)
        total += pmf[z] * float(np.sum(rates * _weight(terms, sites, partners)))

    return total
