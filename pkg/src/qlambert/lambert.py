"""The Lambert series L_q(s, x) = sum_k k^s q^(k x) / (1 - q^k) and its relatives."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .context import (DEFAULT_CONTEXT, ConvergenceError, DomainError, EvalResult, Method,
                      PrecisionContext, UnsupportedRegionError, finish)
from .kernel import (_bernoulli_poly, _digamma, _gamma, _hurwitz, _polylog, _riemann,
                     _zeta_sderiv, harmonic)
from .truncation import OPTIMAL, TruncationPolicy, envelope_floor, truncate, zeta_bernoulli_terms

ROUTER_THRESHOLD = mpf("0.5")


@dataclass(frozen=True)
class QPoint:
    q: mpf
    log_q: mpf
    log_inv_q: mpf
    loglog_inv_q: mpf
    bits: int

    @classmethod
    def of(cls, q, ctx: PrecisionContext | None = None) -> "QPoint":
        ctx = ctx or DEFAULT_CONTEXT
        if isinstance(q, QPoint):
            if q.bits >= ctx.work_bits:
                return q
            q = q.q
        with ctx.work():
            qq = ctx.real(q)
            if not 0 < qq < 1:
                raise DomainError(f"nome must satisfy 0 < q < 1, got {mp.nstr(qq, 10)}")
            log_q = mp.log(qq)
            return cls(qq, log_q, -log_q, mp.log(-log_q), ctx.work_bits)

    @property
    def regime(self) -> str:
        if self.q < mpf("0.1"):
            return "near-0"
        if self.q > mpf("0.9"):
            return "near-1"
        return "mid"


_INT_RE = re.compile(r"^\s*[+-]?\d+\s*$")


@dataclass(frozen=True)
class SParameter:
    """The Lambert exponent s; nonpositive integers only as exact ints."""

    value: int | mpf | mpc
    exact: bool

    @classmethod
    def of(cls, s, ctx: PrecisionContext | None = None) -> "SParameter":
        ctx = ctx or DEFAULT_CONTEXT
        if isinstance(s, SParameter):
            return s
        if isinstance(s, bool):
            raise DomainError("s must be a number")
        if isinstance(s, int):
            return cls(s, True)
        if isinstance(s, Fraction) and s.denominator == 1:
            return cls(s.numerator, True)
        if isinstance(s, str) and _INT_RE.match(s):
            return cls(int(s), True)
        v = ctx.number(s)
        # an exactly integral binary value is an integer, not a neighbour of one
        if v.imag == 0 and mp.isint(v.real):
            return cls(int(v.real), True)
        return cls(v, False)

    @property
    def case(self) -> int:
        if self.exact and self.value == 0:
            return 2
        if self.exact and self.value < 0:
            return 3
        return 1

    @property
    def m(self) -> int:
        if self.case != 3:
            raise DomainError("m is defined only for s = -m, m >= 1")
        return -self.value

    @property
    def real(self):
        return self.value if self.exact else self.value.real

    def __neg__(self) -> "SParameter":
        return SParameter(-self.value, self.exact)


def _resolve(s, x, q, ctx):
    ctx = ctx or DEFAULT_CONTEXT
    s = SParameter.of(s, ctx)
    x = ctx.real(x)
    if x <= 0:
        raise DomainError(f"Lambert series needs x > 0, got {mp.nstr(x, 10)}")
    return s, x, QPoint.of(q, ctx), ctx


def _power_int(k: int, s: SParameter):
    if s.exact:
        return mpf(k) ** s.value
    if isinstance(s.value, mpc):
        return mp.exp(s.value * mp.log(k))
    return mp.power(k, s.value)


def _terms_needed(sigma: float, x: float, t: float, bits: int) -> float:
    # smallest k with k^sigma exp(-k x t) below 2^-bits (relative); a few Newton-like passes
    k = max(1.0, bits * math.log(2) / (x * t))
    for _ in range(4):
        k = (bits * math.log(2) + max(sigma, 0.0) * math.log(k + 1) + math.log1p(1 / t)) / (x * t)
    return k + (max(sigma, 0.0) + math.log1p(1 / (x * t))) / (x * t)


def lambert_direct(s, x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """Sum the defining series until the tail bound stays below eps for three terms."""
    s, x, qp, ctx = _resolve(s, x, q, ctx)
    with ctx.work():
        value, err, n = _lambert_direct(s, x, qp, ctx)
    return finish(ctx, value, err, n, Method.DIRECT)


def _lambert_direct(s: SParameter, x: mpf, qp: QPoint, ctx: PrecisionContext):
    sigma = float(s.real)
    need = _terms_needed(sigma, float(x), float(qp.log_inv_q), ctx.precision_bits)
    if need > ctx.max_terms:
        raise ConvergenceError(
            f"direct Lambert sum needs ~{need:.3g} terms, above term cap max_terms={ctx.max_terms}")
    eps = ctx.eps
    q, t = qp.q, qp.log_inv_q
    qx = mp.exp(-x * t)
    qk = mpf(1)
    qxk = mpf(1)
    acc = mpf(0)
    abs_acc = mpf(0)
    quiet = 0
    growth = max(mpf(s.real), mpf(0))
    for k in range(1, ctx.max_terms + 1):
        qk *= q
        qxk *= qx
        kt = k * t
        denom = -mp.expm1(-kt) if kt < 1 else 1 - qk
        term = _power_int(k, s) * qxk / denom
        acc += term
        mag = abs(term)
        abs_acc += mag
        ratio = qx * (1 + mpf(1) / k) ** growth
        # stop on the geometric tail bound, not the term size: near q = 1 the
        # ratio q^x is close to one and the tail dwarfs the last term
        if ratio < 1 and mag * ratio / (1 - ratio) <= eps * abs(acc) / 4:
            quiet += 1
            if quiet >= 3:
                tail = mag * ratio / (1 - ratio)
                rounding = k * mpf(2) ** (-mp.prec) * abs_acc
                return acc, tail + rounding, k
        else:
            quiet = 0
    raise ConvergenceError(f"direct Lambert sum exceeded term cap max_terms={ctx.max_terms}")


def lambert_shift(s, x, q, ctx: PrecisionContext | None = None):
    """Reduce x into (0, 1]: L(s, x) = L(s, reduced_x) - correction."""
    s, x, qp, ctx = _resolve(s, x, q, ctx)
    with ctx.work():
        reduced, corr, _ = _lambert_shift(s, x, qp, ctx)
    return ctx.round(reduced), ctx.round(corr)


def _lambert_shift(s: SParameter, x: mpf, qp: QPoint, ctx):
    if x <= 1:
        return x, mpf(0), mpf(0)
    c = int(mp.ceil(x))
    reduced = x + 1 - c
    corr = mpf(0)
    err = mpf(0)
    neg = -s.value
    for n in range(1, c):
        v, _, tail = _polylog(neg, mp.exp(-(n + x - c) * qp.log_inv_q), ctx)
        corr += v
        err += tail
    return reduced, corr, err


def lambert_asymptotic(s, x, q, policy: TruncationPolicy = OPTIMAL,
                       ctx: PrecisionContext | None = None) -> EvalResult:
    """The q -> 1 expansion for x in (0, 1]; the k-sum is cut per *policy*."""
    s, x, qp, ctx = _resolve(s, x, q, ctx)
    if x > 1:
        raise DomainError("asymptotic path needs x in (0, 1]; apply lambert_shift first")
    policy = TruncationPolicy.parse(policy)
    with ctx.work():
        value, err, n = _lambert_asymptotic(s, x, qp, policy, ctx)
    return finish(ctx, value, err, n, Method.ASYMPTOTIC)


def _lambert_asymptotic(s: SParameter, x: mpf, qp: QPoint, policy, ctx):
    log_q, t, loglog = qp.log_q, qp.log_inv_q, qp.loglog_inv_q
    zeta_at = (lambda z: _riemann(z, ctx)) if x == 1 else (lambda z: _hurwitz(z, x, ctx))
    case = s.case
    if case == 1:
        sv = s.value
        if not s.exact and mpf(s.real) <= -1:
            raise UnsupportedRegionError(
                "non-integer s with Re(s) <= -1 is outside the supported region")
        if s.exact:
            lead = mp.factorial(sv) * zeta_at(sv + 1) / t ** (sv + 1)
        else:
            lead = _gamma(1 + sv) * zeta_at(1 + sv) * mp.exp(-(1 + sv) * loglog)
        a, start, skip = 1 - sv, 0, ()
    elif case == 2:
        lead = (_digamma(x) + loglog) / log_q
        a, start, skip = 1, 1, ()
    else:
        m = s.m
        bm = _bernoulli_poly(m, x)
        h = harmonic(m - 1)
        lead = ((m * _zeta_sderiv(m, x, ctx) + (loglog - mpf(h.numerator) / h.denominator) * bm)
                * log_q ** (m - 1) / mp.factorial(m))
        a, start, skip = 1 + m, 0, (m,)
    terms = zeta_bernoulli_terms(a, x, log_q, -1, start=start, skip=skip, ctx=ctx)
    floor = envelope_floor(a, -1, t) if policy.mode == "optimal" else None
    series = truncate(terms, policy, ctx, floor)
    value = lead - series.total
    err = series.err + ctx.eps * abs(value)
    return value, err, series.terms + 1


def lambert_eval(s, x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """Route to the direct sum for q <= 0.5, else to the asymptotic expansion.

    Falls back to the other path when the first misses the target accuracy.
    """
    s, x, qp, ctx = _resolve(s, x, q, ctx)
    order = ["direct", "asymptotic"] if qp.q <= ROUTER_THRESHOLD else ["asymptotic", "direct"]
    outcomes = []
    for path in order:
        try:
            res = _run_path(path, s, x, qp, ctx)
        except (ConvergenceError, UnsupportedRegionError) as exc:
            outcomes.append((path, exc))
            continue
        if res.err_estimate <= 10 * ctx.eps * abs(res.value):
            return res
        outcomes.append((path, res))
    results = [r for _, r in outcomes if isinstance(r, EvalResult)]
    if results:
        return min(results, key=lambda r: r.err_estimate)
    detail = "; ".join(f"{p}: {e}" for p, e in outcomes)
    raise ConvergenceError(f"both evaluation paths failed ({detail})")


def _run_path(path, s, x, qp, ctx) -> EvalResult:
    if path == "direct":
        return lambert_direct(s, x, qp, ctx)
    with ctx.work():
        reduced, corr, corr_err = _lambert_shift(s, x, qp, ctx)
        value, err, n = _lambert_asymptotic(s, reduced, qp, OPTIMAL, ctx)
    return finish(ctx, value - corr, err + corr_err, n, Method.ASYMPTOTIC)


# ---------------------------------------------------------------------------
# Divisor generating functions and Eisenstein series
# ---------------------------------------------------------------------------

def divisor_gf_asymptotic(m: int, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """Finite q -> 1 forms of sum sigma_m(n) q^n for odd m (either sign).

    err_estimate is 0: the form is exact up to exponentially small terms,
    so its accuracy depends on q rather than on truncation.
    """
    ctx = ctx or DEFAULT_CONTEXT
    if not isinstance(m, int) or m % 2 == 0:
        raise DomainError(f"divisor_gf_asymptotic needs odd m, got {m}")
    qp = QPoint.of(q, ctx)
    with ctx.work():
        log_q = qp.log_q
        if m > 0:
            value = (mp.factorial(m) * _riemann(1 + m, ctx) / log_q ** (1 + m)
                     - _riemann(1 - m, ctx) / log_q - _riemann(-m, ctx) / 2)
            n = 3
        else:
            mm = -m
            h = harmonic(mm - 1)
            one = mpf(1)
            value = ((mm * _zeta_sderiv(mm, one, ctx)
                      + (qp.loglog_inv_q - mpf(h.numerator) / h.denominator) * _bernoulli_poly(mm, one))
                     * log_q ** (mm - 1) / mp.factorial(mm))
            for k in range(0, mm + 2):
                if k == mm:
                    continue
                value -= (_riemann(1 + mm - k, ctx) * _bernoulli_poly(k, one)
                          * log_q ** (k - 1) / mp.factorial(k))
            n = mm + 2
    return finish(ctx, value, 0, n, Method.CLOSED_FORM)


def _check_k(k: int):
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"Eisenstein index needs integer k >= 1, got {k}")


def eisenstein_direct(k: int, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """E_2k(q) = 1 + 2/zeta(1-2k) * L_q(2k-1, 1), with L summed directly."""
    ctx = ctx or DEFAULT_CONTEXT
    _check_k(k)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        lam, err, n = _lambert_direct(SParameter(2 * k - 1, True), mpf(1), qp, ctx)
        scale = 2 / _riemann(1 - 2 * k, ctx)
        value = 1 + scale * lam
    return finish(ctx, value, abs(scale) * err, n, Method.DIRECT)


def _modified_shift(k: int, log_q, ctx):
    return 2 * _riemann(2 - 2 * k, ctx) / (_riemann(1 - 2 * k, ctx) * log_q)


def eisenstein_modified(k: int, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """E~_2k = E_2k + 2 zeta(2-2k) / (zeta(1-2k) log q); differs from E_2k only at k = 1."""
    ctx = ctx or DEFAULT_CONTEXT
    _check_k(k)
    qp = QPoint.of(q, ctx)
    base = eisenstein_direct(k, qp, ctx)
    with ctx.work():
        value = base.value + _modified_shift(k, qp.log_q, ctx)
    return finish(ctx, value, base.err_estimate, base.terms_used, Method.DIRECT)


def eisenstein_asymptotic(k: int, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """Closed form (2 pi i / log q)^(2k) = (-1)^k (2 pi / log q)^(2k)."""
    ctx = ctx or DEFAULT_CONTEXT
    _check_k(k)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        value = (-1) ** k * (2 * mp.pi / qp.log_q) ** (2 * k)
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)
