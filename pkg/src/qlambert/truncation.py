"""Truncation of the divergent zeta-times-Bernoulli sums near q = 1.

Every expansion in this package carries a tail of the shape

    sum_k  zeta(a - k) * c_k(x) * (log q)^(k + b) / k!

with ``c_k(x)`` a Bernoulli-polynomial factor.  The sums diverge for
generic x, so they are cut either at a fixed index or just before the
terms start to grow again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from mpmath import mp, mpc, mpf

from .context import DomainError, PrecisionContext
from .kernel import BERNOULLI_DEGREE_CAP, _bernoulli_poly, _loggamma, _riemann


@dataclass(frozen=True)
class TruncationPolicy:
    mode: str = "optimal"
    K: int = 0

    def __post_init__(self):
        if self.mode not in ("optimal", "fixed"):
            raise DomainError(f"unknown truncation mode {self.mode!r}")
        if self.mode == "fixed" and self.K < 0:
            raise DomainError("fixed truncation needs K >= 0")

    @classmethod
    def optimal(cls) -> "TruncationPolicy":
        return cls("optimal")

    @classmethod
    def fixed(cls, K: int) -> "TruncationPolicy":
        return cls("fixed", int(K))

    @classmethod
    def parse(cls, text) -> "TruncationPolicy":
        if isinstance(text, TruncationPolicy):
            return text
        if text is None or str(text).lower() == "optimal":
            return cls.optimal()
        return cls.fixed(int(text))


OPTIMAL = TruncationPolicy.optimal()
GROWTH_WINDOW = 4


@dataclass
class SeriesSum:
    total: mpf | mpc
    err: mpf
    terms: int
    stop: str


def truncate(terms: Iterable[tuple[int, object]], policy: TruncationPolicy,
             ctx: PrecisionContext, floor=None) -> SeriesSum:
    """Sum ``(k, term)`` pairs under *policy*.

    ``term is None`` marks an excluded index; exact zeros are structural and
    never trigger the growth test.  Two consecutive structural zeros mean the
    tail vanishes identically (the zero patterns have period two).  In
    optimal mode the error estimate is never below *floor*, the size of the
    exponentially small remainder that survives even a terminating sum.
    """
    total = mpf(0)
    used = 0
    if policy.mode == "fixed":
        last = mpf(0)
        for k, term in terms:
            if k > policy.K:
                break
            if term is None:
                continue
            total += term
            used += 1
            if term != 0:
                last = abs(term)
        return SeriesSum(total, last, used, "fixed")

    eps = ctx.eps
    window: list = []
    zeros = 0
    last_zero = None
    err = None
    stop = "cap"
    for k, term in terms:
        if term is None:
            zeros = 0
            continue
        mag = abs(term)
        if mag == 0:
            zeros = zeros + 1 if last_zero == k - 1 else 1
            last_zero = k
            used += 1
            if zeros >= 2:
                err, stop = mpf(0), "terminated"
                break
            continue
        zeros = 0
        # magnitudes oscillate with period up to four in k (parity of the
        # Bernoulli and zeta factors), so growth is judged against a window
        if len(window) == GROWTH_WINDOW and mag > max(window):
            err, stop = mag, "growth"
            break
        total += term
        used += 1
        window.append(mag)
        if len(window) > GROWTH_WINDOW:
            window.pop(0)
        if len(window) == GROWTH_WINDOW and max(window) <= eps * abs(total):
            err, stop = max(window), "converged"
            break
    if err is None:
        err = window[-1] if window else mpf(0)
    if floor is not None and floor > err:
        err = floor
    return SeriesSum(total, err, used, stop)


def envelope_floor(a, b: int, log_inv_q: mpf) -> mpf:
    """Size of the smallest term of the generic-x envelope of the tail.

    Uses |B_k(x)|/k! <= 2 zeta(k)/(2 pi)^k and the functional equation bound
    |zeta(a-k)| <= 2 |Gamma(1-a+k)| zeta(1-Re a+k) cosh(pi Im a/2) / (2 pi)^(1-Re a+k).
    The smallest envelope term times sqrt of its index (the width of the
    plateau of near-minimal terms) sizes the beyond-all-orders remainder;
    a further factor of four keeps the estimate on the safe side.
    """
    t = float(log_inv_q)
    if t <= 0:
        return mpf(0)
    a_re = float(mpc(a).real)
    a_im = float(mpc(a).imag)
    log_two_pi = math.log(2 * math.pi)
    log_cosh = math.pi * abs(a_im) / 2 + math.log1p(math.exp(-math.pi * abs(a_im))) - math.log(2)

    def log_term(k: int) -> float:
        e = 1 - a_re + k
        with mp.workprec(64):
            log_gamma = float(mp.re(_loggamma(mpc(e, -a_im))))
        return (math.log(4) + log_gamma + log_cosh + math.log(_zeta_bound(e))
                + math.log(_zeta_bound(k)) - (e + k) * log_two_pi + (k + b) * math.log(t))

    # log_term is convex in k (log Gamma plus a linear part): integer ternary search
    lo = max(2, int(math.ceil(a_re)) + 2)
    hi = max(lo + 8, int(8 * math.pi ** 2 / t) + 16)
    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if log_term(m1) <= log_term(m2):
            hi = m2
        else:
            lo = m1
    best_k = min(range(lo, hi + 1), key=log_term)
    return 4 * mp.exp(mpf(log_term(best_k)) + mpf(0.5) * mp.log(best_k))


def _zeta_bound(e: float) -> float:
    if e <= 1.0001:
        return 1.0e4
    return 1.0 + 2.0 ** (-e) + 2.0 ** (1 - e) / (e - 1)


def zeta_bernoulli_terms(a, x, log_q, b: int, *, start: int = 0, skip=(),
                         coeff: Callable[[int], object] | None = None,
                         sign: int = 1, cap: int = BERNOULLI_DEGREE_CAP, ctx=None):
    """Yield ``(k, sign * zeta(a-k) * c_k * log_q^(k+b) / k!)``.

    ``c_k`` defaults to B_k(x).  Indices in *skip* yield ``None``.
    The caller must already run at working precision.
    """
    fact = mpf(1)
    for k in range(1, start + 1):
        fact *= k
    power = log_q ** (start + b)
    for k in range(start, cap + 1):
        if k > start:
            fact *= k
            power *= log_q
        if k in skip:
            yield k, None
            continue
        c = coeff(k) if coeff is not None else _bernoulli_poly(k, x)
        if c == 0:
            yield k, mpf(0)
            continue
        z = _riemann(a - k, ctx)
        if z == 0:
            yield k, mpf(0)
            continue
        yield k, sign * z * c * power / fact
