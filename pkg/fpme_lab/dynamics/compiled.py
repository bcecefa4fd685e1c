"""
JIT-compiled inner loop of the thinning sampler. Random numbers are drawn
in blocks on the Python side; this loop consumes them in order and stops
before the first candidate that would land beyond the target time.
"""

from numba import njit

from fpme_lab.rates.compiled import flip, occupied, rate_factor_packed

__all__ = ["process_candidates"]


@njit(cache=True)
def process_candidates(
    words,
    size,
    m,
    t,
    target,
    waits,
    xs,
    zs,
    us,
    start,
    accept_scale,
    record,
    event_times,
    event_x,
    event_y,
    n_recorded,
):
    """
    Returns (next_index, t, accepted, n_recorded, max_ratio).

    `t` is the time of the last consumed candidate; the candidate at
    next_index (if any) is still pending.
    """
    accepted = 0
    max_ratio = 0.0
    i = start
    n = waits.shape[0]

    while i < n:
        t_next = t + waits[i]
        if t_next > target:
            break
        t = t_next

        x = xs[i]
        y = (x + zs[i]) % size

        if occupied(words, size, x, x, y, False) != occupied(words, size, y, x, y, False):
            ratio = rate_factor_packed(words, size, m, x, y) * accept_scale
            if ratio > max_ratio:
                max_ratio = ratio

            if us[i] < ratio:
                flip(words, x)
                flip(words, y)
                accepted += 1

                if record:
                    event_times[n_recorded] = t
                    event_x[n_recorded] = x
                    event_y[n_recorded] = y
                    n_recorded += 1

        i += 1

    return i, t, accepted, n_recorded, max_ratio
