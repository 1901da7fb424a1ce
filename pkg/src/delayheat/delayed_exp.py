"""Delayed exponential: the piecewise-polynomial solution of x'(t) = b x(t - tau).

With identity history (x = 1 on [-tau, 0)), the solution is, on the segment
(k-1)*tau <= t < k*tau,

    x(t) = sum_{j=0}^{k}  b^j (t - (j-1) tau)^j / j!

and x = 0 for t < -tau, x = 1 for -tau <= t < 0.  Ties at segment knots
resolve to the higher segment (intervals are half-open on the right).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InputError


@dataclass(frozen=True)
class DelayedExpParams:
    """Coefficient and delay of the pure-delay equation x'(t) = rate * x(t - delay)."""

    rate: float
    delay: float

    def __post_init__(self):
        if not (math.isfinite(self.rate) and math.isfinite(self.delay)):
            raise InputError("rate and delay must be finite")
        if self.delay <= 0.0:
            raise InputError(f"delay must be positive, got {self.delay!r}")


def delayed_exp_segment_index(params, t):
    """Segment index k such that (k-1)*delay <= t < k*delay; 0 on [-delay, 0)."""
    t = float(t)
    if not math.isfinite(t):
        raise InputError(f"t must be finite, got {t!r}")
    if t < -params.delay:
        raise DomainError(f"t={t!r} is below -delay={-params.delay!r}")
    return int(math.floor(t / params.delay)) + 1


def delayed_exp_eval(params, t):
    """Evaluate the delayed exponential at time t."""
    t = float(t)
    if not math.isfinite(t):
        raise InputError(f"t must be finite, got {t!r}")
    if t < -params.delay:
        return 0.0
    k = delayed_exp_segment_index(params, t)
    total = 1.0
    coeff = 1.0  # rate^j / j!, accumulated incrementally
    for j in range(1, k + 1):
        coeff *= params.rate / j
        total += coeff * (t - (j - 1) * params.delay) ** j
    return total
