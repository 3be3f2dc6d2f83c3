"""The q-Pochhammer symbol (a; q)_inf: direct product and q -> 1 forms."""

from __future__ import annotations

import math

from mpmath import mp, mpc, mpf

from .context import (DEFAULT_CONTEXT, ConvergenceError, DomainError, EvalResult, Method,
                      PrecisionContext, finish)
from .kernel import _gamma
from .lambert import QPoint
from .truncation import OPTIMAL, TruncationPolicy, envelope_floor, truncate, zeta_bernoulli_terms


def _product_log(a, qp: QPoint, ctx: PrecisionContext, x=None, bounded=True):
    """log prod_{n>=0} (1 - a q^n) with a tail bound; ``x`` means a = q^x.

    ``bounded=False`` drops the |a| < 1/(1-q) precondition; the product still
    converges but the imaginary part of the log is then only defined mod 2 pi.
    """
    q, t = qp.q, qp.log_inv_q
    mag_a = abs(a)
    if mag_a == 0:
        return mpf(0), mpf(0), 0
    if bounded and mag_a >= 1 / (1 - q):
        raise DomainError("|a| must be below 1/(1-q)")
    need = (ctx.precision_bits * math.log(2) + max(0.0, float(mp.log(mag_a / (1 - q))))) / float(t)
    if need > ctx.max_terms:
        raise ConvergenceError(
            f"direct product needs ~{need:.3g} factors, above term cap max_terms={ctx.max_terms}")
    eps = ctx.eps
    acc = mpf(0)
    u = a
    for n in range(ctx.max_terms):
        if x is not None and (n + x) * t < 1:
            # 1 - q^(n+x) without cancellation
            factor = -mp.expm1(-(n + x) * t)
            acc += mp.log(factor)
        else:
            if u == 1:
                raise DomainError(f"factor 1 - a q^{n} vanishes")
            acc += mp.log1p(-u)
        u *= q
        mu = abs(u)
        if mu < 1:
            tail = mu / ((1 - q) * (1 - mu))
            if tail <= eps / 4:
                rounding = (n + 1) * mpf(2) ** (-mp.prec) * (1 + abs(acc))
                return acc, tail + rounding, n + 1
    raise ConvergenceError(f"direct product exceeded term cap max_terms={ctx.max_terms}")


def pochhammer_direct(a, q, ctx: PrecisionContext | None = None, *, log: bool = False) -> EvalResult:
    """(a; q)_inf = prod (1 - a q^n), accumulated as a sum of logarithms.

    With ``log=True`` the logarithm itself is returned.
    """
    ctx = ctx or DEFAULT_CONTEXT
    qp = QPoint.of(q, ctx)
    with ctx.work():
        a = ctx.number(a)
        logv, tail, n = _product_log(a, qp, ctx)
        value = logv if log else mp.exp(logv)
        err = tail if log else abs(value) * tail
    return finish(ctx, value, err, n, Method.DIRECT)


def pochhammer_qx(x, q, ctx: PrecisionContext | None = None, *, log: bool = False) -> EvalResult:
    """(q^x; q)_inf for real x > 0, keeping 1 - q^(n+x) accurate near q = 1."""
    ctx = ctx or DEFAULT_CONTEXT
    qp = QPoint.of(q, ctx)
    with ctx.work():
        x = ctx.real(x)
        if x <= 0:
            raise DomainError("pochhammer_qx needs x > 0")
        logv, tail, n = _product_log(mp.exp(-x * qp.log_inv_q), qp, ctx, x=x)
        value = logv if log else mp.exp(logv)
        err = tail if log else abs(value) * tail
    return finish(ctx, value, err, n, Method.DIRECT)


def _check_unit_x(x):
    if not 0 < x <= 1:
        raise DomainError(f"asymptotic form needs x in (0, 1], got {mp.nstr(x, 10)}")


def _exponent_sum(x, qp: QPoint, policy, ctx, sign=1, start=0):
    # sum over k != 1 of zeta(2-k) B_k(x) (log q)^(k-1) / k!
    terms = zeta_bernoulli_terms(2, x, qp.log_q, -1, start=start, skip=(1,), sign=sign, ctx=ctx)
    floor = envelope_floor(2, -1, qp.log_inv_q) if policy.mode == "optimal" else None
    return truncate(terms, policy, ctx, floor)


def pochhammer_asymptotic(x, q, policy: TruncationPolicy = OPTIMAL,
                          ctx: PrecisionContext | None = None) -> EvalResult:
    """(q^x; q)_inf from its q -> 1 expansion, x in (0, 1].

    The exponential product over k != 1 is evaluated as exp of the
    truncated exponent sum.
    """
    ctx = ctx or DEFAULT_CONTEXT
    policy = TruncationPolicy.parse(policy)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        x = ctx.real(x)
        _check_unit_x(x)
        series = _exponent_sum(x, qp, policy, ctx)
        prefactor = mp.sqrt(2 * mp.pi) / _gamma(x) * mp.exp((mpf(0.5) - x) * qp.loglog_inv_q)
        value = prefactor * mp.exp(series.total)
        err = abs(value) * (series.err + ctx.eps)
    return finish(ctx, value, err, series.terms + 1, Method.ASYMPTOTIC)


def euler_asymptotic(q, ctx: PrecisionContext | None = None) -> EvalResult:
    """(q; q)_inf ~ sqrt(2 pi / log(1/q)) exp(pi^2 / (6 log q)) q^(-1/24)."""
    ctx = ctx or DEFAULT_CONTEXT
    qp = QPoint.of(q, ctx)
    with ctx.work():
        t = qp.log_inv_q
        value = mp.sqrt(2 * mp.pi / t) * mp.exp(mp.pi ** 2 / (6 * qp.log_q) + t / 24)
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)


def pochhammer_reflection(x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """(q^x; q)_inf (q^(1-x); q)_inf ~ 2 sin(pi x) e^(pi^2/(3 log q)) q^(-(1/6 - x + x^2)/2)."""
    ctx = ctx or DEFAULT_CONTEXT
    qp = QPoint.of(q, ctx)
    with ctx.work():
        x = ctx.real(x)
        if not 0 < x < 1:
            raise DomainError("reflection formula needs 0 < x < 1")
        poly = mpf(1) / 6 - x + x * x
        value = (2 * mp.sinpi(x) * mp.exp(mp.pi ** 2 / (3 * qp.log_q))
                 * mp.exp(poly * qp.log_inv_q / 2))
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)
