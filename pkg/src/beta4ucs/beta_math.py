"""Four-parameter beta distribution math.

The density ``Be4(alpha, beta, l, u)`` generalizes the standard beta
distribution to an arbitrary interval ``[l, u]``.  Shapes are restricted to
``alpha, beta >= 1`` so the density has a finite maximum, which lets it be
normalized into a membership function ``f(x) / f(mode)`` taking values in
``[0, 1]``.  With ``alpha == beta == 1`` the density is the uniform
rectangle and the membership function is a crisp interval test.

Conventions:

* ``0^0 == 1`` at the interval endpoints, so the rectangular case has
  density ``1/(u-l)`` at both ``l`` and ``u``.
* The mode of the rectangular case is taken as the interval midpoint.
* For ``alpha > 1`` (resp. ``beta > 1``) the density at ``x == l`` (resp.
  ``x == u``) is the analytic value 0.

All functions are pure and thread-safe.  A module-level counter tracks
special-function (log-gamma) evaluations so callers can verify that crisp
code paths never touch them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betaln

_special_calls = 0


def special_function_calls() -> int:
    """Number of special-function (log-gamma family) evaluations so far."""
    return _special_calls


def reset_special_function_calls() -> None:
    global _special_calls
    _special_calls = 0


@dataclass(frozen=True)
class Beta4Params:
    """Shape pair and interval of a four-parameter beta density.

    ``lower`` and ``upper`` are unbounded reals (they may lie outside the
    normalized data domain ``[0, 1]``), but ``upper > lower`` strictly and
    both shapes must be at least 1.
    """

    alpha: float
    beta: float
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("shape parameters must be finite")
        if self.alpha < 1.0 or self.beta < 1.0:
            raise ValueError("shape parameters must be >= 1")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("interval bounds must be finite")
        if not self.upper > self.lower:
            raise ValueError("upper must be strictly greater than lower")

    @property
    def is_rectangular(self) -> bool:
        # Exact comparison is intentional: every operator that produces a
        # rectangular set assigns exactly 1.0.
        return self.alpha == 1.0 and self.beta == 1.0


def beta_function(alpha: float, beta: float) -> float:
    """Euler beta function ``B(alpha, beta)``, computed via log-gamma."""
    global _special_calls
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValueError("beta_function arguments must be finite")
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("beta_function arguments must be positive")
    _special_calls += 1
    return float(math.exp(betaln(alpha, beta)))


def mode(p: Beta4Params) -> float:
    """Peak location of the density; interval midpoint when rectangular."""
    if p.is_rectangular:
        return 0.5 * (p.lower + p.upper)
    # summing the excesses avoids catastrophic cancellation in alpha+beta-2
    denom = (p.alpha - 1.0) + (p.beta - 1.0)
    m = p.lower + (p.alpha - 1.0) / denom * (p.upper - p.lower)
    return min(max(m, p.lower), p.upper)


def kurtosis(alpha: float, beta: float) -> float:
    """Kurtosis of the beta density; depends only on the shape pair.

    Equals 1.8 for the rectangular case and grows as the peak sharpens.
    """
    if alpha < 1.0 or beta < 1.0:
        raise ValueError("shape parameters must be >= 1")
    s = alpha + beta
    num = 3.0 * (s + 1.0) * (2.0 * s * s + alpha * beta * (s - 6.0))
    den = alpha * beta * (s + 2.0) * (s + 3.0)
    return num / den


def _log_kernel(t1: float, t2: float, am1: float, bm1: float) -> float:
    """log[(x-l)^(a-1) (u-x)^(b-1)] with the 0^0 == 1 convention."""
    out = 0.0
    if am1 > 0.0:
        if t1 <= 0.0:
            return -math.inf
        out += am1 * math.log(t1)
    if bm1 > 0.0:
        if t2 <= 0.0:
            return -math.inf
        out += bm1 * math.log(t2)
    return out


def beta4_pdf(x: float, p: Beta4Params) -> float:
    """Density of ``Be4(alpha, beta, l, u)`` at ``x``; 0 outside ``[l, u]``."""
    global _special_calls
    if x < p.lower or x > p.upper:
        return 0.0
    width = p.upper - p.lower
    if p.is_rectangular:
        return 1.0 / width
    _special_calls += 1
    log_norm = betaln(p.alpha, p.beta) + (p.alpha + p.beta - 1.0) * math.log(width)
    log_kern = _log_kernel(x - p.lower, p.upper - x, p.alpha - 1.0, p.beta - 1.0)
    if log_kern == -math.inf:
        return 0.0
    return float(math.exp(log_kern - log_norm))


def membership(x: float, p: Beta4Params) -> float:
    """Membership degree ``f(x) / f(mode)`` in ``[0, 1]``.

    The normalization constant cancels in the ratio, so the general path
    needs only logs of the kernel terms; the rectangular path is a plain
    interval test with no special-function calls.
    """
    if p.is_rectangular:
        return 1.0 if p.lower <= x <= p.upper else 0.0
    return _membership_general(x, p)


def _membership_general(x: float, p: Beta4Params) -> float:
    # Shares the endpoint conventions of beta4_pdf; exposed separately so
    # the crisp fast path can be checked bit-for-bit against it.
    if x < p.lower or x > p.upper:
        return 0.0
    am1 = p.alpha - 1.0
    bm1 = p.beta - 1.0
    m = mode(p)
    if x == m:
        return 1.0
    log_num = _log_kernel(x - p.lower, p.upper - x, am1, bm1)
    if log_num == -math.inf:
        return 0.0
    # a term whose base rounds to 0 carries a near-zero exponent (the mode
    # can land on an endpoint only when the matching shape excess is within
    # rounding of 0), so the term's true value is ~0: skip it
    log_den = 0.0
    if am1 > 0.0 and m > p.lower:
        log_den += am1 * math.log(m - p.lower)
    if bm1 > 0.0 and m < p.upper:
        log_den += bm1 * math.log(p.upper - m)
    return float(math.exp(log_num - log_den))
