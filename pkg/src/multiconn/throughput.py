"""Throughput and achievable spectral efficiency at a target outage."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.optimize import bisect

from .combiners import Combiner
from .exceptions import BracketError, DomainError
from .link_model import Topology, average_snrs
from .outage import outage_exact_closed, outage_jd_quadrature
from .special_functions import coding_constant_inverse

DEFAULT_RATE_BRACKET = (1e-6, 64.0)
_RATE_XTOL = 1e-6


@dataclass(frozen=True)
class ThroughputResult:
    throughput: float  # bit/s
    achieved_rate: float  # source samples per channel symbol
    method: str  # asymptotic | exact-root


def throughput_from_rate(bandwidth: float, r_c: float, p_out: float) -> float:
    """T = B * R_c * (1 - P_out) in bit/s."""
    if bandwidth <= 0:
        raise DomainError("bandwidth must be positive")
    if r_c < 0:
        raise DomainError("r_c must be nonnegative")
    if not 0.0 <= p_out <= 1.0:
        raise DomainError("p_out must lie in [0, 1]")
    return bandwidth * r_c * (1.0 - p_out)


def achievable_rate_asymptotic(combiner, avg_snrs: Sequence[float],
                               p_out: float, mode: str = "refined") -> float:
    """Invert the high-SNR outage asymptote for the rate at a target outage.

    JD uses the inverse coding constant (refined by default; ``mode="paper"``
    selects the closed Lambert-W approximation). SC, MRC, and SCo have closed
    inverses.
    """
    combiner = Combiner.parse(combiner)
    snrs = [float(g) for g in avg_snrs]
    if not snrs or any(g <= 0 for g in snrs):
        raise DomainError("average SNRs must be positive")
    if not 0.0 < p_out < 1.0:
        raise DomainError("p_out must lie in (0, 1)")
    n = len(snrs)
    if combiner is Combiner.SCO:
        return math.log2(p_out * snrs[0] + 1.0)
    target = p_out * math.prod(snrs)
    if combiner is Combiner.JD:
        if n == 1:
            return math.log2(target + 1.0)
        return coding_constant_inverse(n, target, mode=mode)
    if combiner is Combiner.SC:
        return math.log2(target ** (1.0 / n) + 1.0)
    return math.log2((math.factorial(n) * target) ** (1.0 / n) + 1.0)


def achievable_rate_exact(combiner, topology: Topology, p_out: float,
                          rate_bracket: tuple[float, float] = DEFAULT_RATE_BRACKET,
                          jd_rel_tol: float = 1e-8) -> float:
    """Solve the monotone exact outage curve P_out(R_c) = p_out by bisection.

    Uses the closed forms for SC/MRC/SCo and nested quadrature for JD
    (N <= 4; larger N is refused rather than falling back to a noisy
    Monte-Carlo objective).
    """
    combiner = Combiner.parse(combiner)
    if not 0.0 < p_out < 1.0:
        raise DomainError("p_out must lie in (0, 1)")
    lo, hi = rate_bracket
    if not 0 < lo < hi:
        raise DomainError("rate_bracket must satisfy 0 < lo < hi")
    snrs = average_snrs(topology)

    if combiner is Combiner.JD:
        def exact(r_c: float) -> float:
            return outage_jd_quadrature(snrs, r_c, rel_tol=jd_rel_tol).value
    else:
        def exact(r_c: float) -> float:
            return outage_exact_closed(combiner, snrs, r_c).value

    f_lo = exact(lo) - p_out
    f_hi = exact(hi) - p_out
    if f_lo > 0 or f_hi < 0:
        raise BracketError(
            f"p_out={p_out} is not attainable within rate bracket "
            f"[{lo}, {hi}] (outage range [{f_lo + p_out:.3g}, "
            f"{f_hi + p_out:.3g}])")
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    return float(bisect(lambda r: exact(r) - p_out, lo, hi, xtol=_RATE_XTOL))


def throughput_asymptotic(combiner, avg_snrs: Sequence[float], p_out: float,
                          bandwidth: float, mode: str = "refined") -> ThroughputResult:
    rate = achievable_rate_asymptotic(combiner, avg_snrs, p_out, mode=mode)
    return ThroughputResult(
        throughput=throughput_from_rate(bandwidth, rate, p_out),
        achieved_rate=rate, method="asymptotic")


def throughput_exact(combiner, topology: Topology, p_out: float,
                     rate_bracket: tuple[float, float] = DEFAULT_RATE_BRACKET) -> ThroughputResult:
    rate = achievable_rate_exact(combiner, topology, p_out,
                                 rate_bracket=rate_bracket)
    return ThroughputResult(
        throughput=throughput_from_rate(topology.bandwidth, rate, p_out),
        achieved_rate=rate, method="exact-root")
