"""q-gamma, q-digamma and q-polygamma: direct forms, q -> 1 expansions, reflections.

Nomes q > 1 are mapped to 1/q at entry by the inversion symmetry
Gamma_q(x) = q^((x-1)(x-2)/2) Gamma_{1/q}(x) and its x-derivatives, so the
internal formulas only ever see 0 < q < 1.  Asymptotic paths take x in (0, 1];
larger x are brought down with Gamma_q(x+1) = [x]_q Gamma_q(x).
"""

from __future__ import annotations

import enum
from functools import lru_cache

from mpmath import mp, mpf

from .context import (DEFAULT_CONTEXT, DomainError, EvalResult, Method, PrecisionContext,
                      finish)
from .kernel import _bernoulli_poly, _digamma, _gamma, _polygamma
from .lambert import QPoint, SParameter, _lambert_direct
from .qpochhammer import _product_log
from .truncation import OPTIMAL, TruncationPolicy, envelope_floor, truncate, zeta_bernoulli_terms


class DigammaVariant(str, enum.Enum):
    COMPACT = "compact"
    EXPANDED = "expanded"


def _nome(q, ctx: PrecisionContext):
    """Return (q, QPoint of min(q, 1/q), inverted) or (1, None, False) at q = 1."""
    qq = ctx.real(q.q if isinstance(q, QPoint) else q)
    if qq <= 0:
        raise DomainError(f"q must be positive, got {mp.nstr(qq, 10)}")
    if qq == 1:
        return qq, None, False
    if qq > 1:
        return qq, QPoint.of(1 / qq, ctx), True
    return qq, QPoint.of(q, ctx), False


def _positive_x(x, ctx):
    x = ctx.real(x)
    if x <= 0:
        raise DomainError(f"x must be positive, got {mp.nstr(x, 10)}")
    return x


def _split_x(x):
    # x = x_r + c with x_r in (0, 1] and integer c >= 0
    c = int(mp.ceil(x)) - 1
    return x - c, c


def _check_m(m):
    if int(m) != m or m < 1:
        raise DomainError(f"polygamma order must be an integer >= 1, got {m}")
    return int(m)


# ---------------------------------------------------------------------------
# q-gamma
# ---------------------------------------------------------------------------

def qgamma_direct(x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """(1-q)^(1-x) (q;q)_inf / (q^x;q)_inf, with q > 1 through inversion."""
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.work():
        x = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            return finish(ctx, _gamma(x), 0, 1, Method.CLOSED_FORM)
        t = qp.log_inv_q
        num, e1, n1 = _product_log(qp.q, qp, ctx, x=mpf(1))
        den, e2, n2 = _product_log(mp.exp(-x * t), qp, ctx, x=x)
        logv = (1 - x) * mp.log(-mp.expm1(-t)) + num - den
        if inverted:
            logv += (x - 1) * (x - 2) / 2 * mp.log(qq)
        value = mp.exp(logv)
        err = abs(value) * (e1 + e2)
    return finish(ctx, value, err, n1 + n2, Method.DIRECT)


def _q_bracket(y, t):
    # [y]_q = (1 - q^y)/(1 - q) for q = e^-t
    return mp.expm1(-y * t) / mp.expm1(-t)


def qgamma_asymptotic(x, q, policy: TruncationPolicy = OPTIMAL,
                      ctx: PrecisionContext | None = None) -> EvalResult:
    """Gamma(x) ((log q)/(q-1) q^(x/4))^(x-1) exp(-sum_{k>=3} zeta(2-k) B_k(x) (log q)^(k-1)/k!)."""
    ctx = ctx or DEFAULT_CONTEXT
    policy = TruncationPolicy.parse(policy)
    with ctx.work():
        x0 = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            raise DomainError("the q -> 1 expansion needs q != 1")
        t, log_q = qp.log_inv_q, qp.log_q
        x, shift = _split_x(x0)
        terms = zeta_bernoulli_terms(2, x, log_q, -1, start=3, sign=-1, ctx=ctx)
        floor = envelope_floor(2, -1, t) if policy.mode == "optimal" else None
        series = truncate(terms, policy, ctx, floor)
        logv = (mp.log(_gamma(x)) + (x - 1) * (mp.log(t / -mp.expm1(-t)) + x * log_q / 4)
                + series.total)
        for j in range(shift):
            logv += mp.log(_q_bracket(x + j, t))
        if inverted:
            logv += (x0 - 1) * (x0 - 2) / 2 * mp.log(qq)
        value = mp.exp(logv)
        err = abs(value) * (series.err + ctx.eps)
    return finish(ctx, value, err, series.terms + 1, Method.ASYMPTOTIC)


def qgamma_reflection(x, q, ctx: PrecisionContext | None = None, *, sqrt: bool = False) -> EvalResult:
    """pi/sin(pi x) (q-1)/log q q^(x(x-1)/2), the q -> 1 value of Gamma_q(x) Gamma_q(1-x).

    With ``sqrt=True`` (only at x = 1/2) returns the positive root, the
    q -> 1 value of Gamma_q(1/2) itself.
    """
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.work():
        x = ctx.real(x)
        if not 0 < x < 1:
            raise DomainError("reflection formula needs 0 < x < 1")
        qq, qp, _ = _nome(q, ctx)
        if qp is None:
            ratio = mpf(1)
        else:
            ratio = (qq - 1) / mp.log(qq)
        if sqrt:
            if x != mpf(1) / 2:
                raise DomainError("the square-root form exists only at x = 1/2")
            value = mp.sqrt(mp.pi * ratio / qq ** (mpf(1) / 8))
        else:
            value = mp.pi / mp.sinpi(x) * ratio * qq ** (x * (x - 1) / 2)
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# q-digamma and q-polygamma
# ---------------------------------------------------------------------------

def qdigamma_direct(x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """-log(1-q) + log q * L_q(0, x); q > 1 via psi_q = (x - 3/2) log q + psi_{1/q}."""
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.work():
        x = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            return finish(ctx, _digamma(x), 0, 1, Method.CLOSED_FORM)
        lam, err, n = _lambert_direct(SParameter(0, True), x, qp, ctx)
        value = -mp.log(-mp.expm1(-qp.log_inv_q)) + qp.log_q * lam
        err = qp.log_inv_q * err
        if inverted:
            value += (x - mpf(3) / 2) * mp.log(qq)
    return finish(ctx, value, err, n, Method.DIRECT)


def qpolygamma_direct(m: int, x, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """(log q)^(m+1) L_q(m, x); q > 1 via inversion."""
    ctx = ctx or DEFAULT_CONTEXT
    m = _check_m(m)
    with ctx.work():
        x = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            return finish(ctx, _polygamma(m, x, ctx), 0, 1, Method.CLOSED_FORM)
        lam, err, n = _lambert_direct(SParameter(m, True), x, qp, ctx)
        scale = qp.log_q ** (m + 1)
        value = scale * lam
        err = abs(scale) * err
        if inverted and m == 1:
            value += mp.log(qq)
    return finish(ctx, value, err, n, Method.DIRECT)


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple:
    row = [1]
    for i in range(1, n + 1):
        new = [0] * (i + 1)
        for k in range(1, i + 1):
            new[k] = k * (row[k] if k < i else 0) + row[k - 1]
        new[0] = 0
        row = new
    return tuple(row)


def _shift_derivative(m: int, y, t):
    """d^(m+1)/dy^(m+1) log(1 - q^y) = -(log q)^(m+1) Li_{-m}(q^y), m >= 0.

    Li_{-m}(z) = sum_k k! S(m+1, k+1) (z/(1-z))^(k+1), in closed form.
    """
    w = 1 / mp.expm1(y * t)
    row = _stirling2_row(m + 1)
    li = mpf(0)
    fact = 1
    for k in range(m + 1):
        if k:
            fact *= k
        li += fact * row[k + 1] * w ** (k + 1)
    return -((-t) ** (m + 1)) * li


def qdigamma_asymptotic(x, q, variant: DigammaVariant | str = DigammaVariant.COMPACT,
                        policy: TruncationPolicy = OPTIMAL,
                        ctx: PrecisionContext | None = None) -> EvalResult:
    """The q -> 1 expansion of psi_q(x).

    compact:  psi(x) + log(log q/(q-1)) - sum_{k>=1} zeta(1-k) B_k(x) (log q)^k/k!
    expanded: psi(x) + sum_{k>=1} zeta(1-k) (1 - B_k(x)) (log q)^k/k!
    """
    ctx = ctx or DEFAULT_CONTEXT
    variant = DigammaVariant(variant)
    policy = TruncationPolicy.parse(policy)
    with ctx.work():
        x0 = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            raise DomainError("the q -> 1 expansion needs q != 1")
        t, log_q = qp.log_inv_q, qp.log_q
        x, shift = _split_x(x0)
        if variant is DigammaVariant.COMPACT:
            terms = zeta_bernoulli_terms(1, x, log_q, 0, start=1, sign=-1, ctx=ctx)
            lead = _digamma(x) + mp.log(t / -mp.expm1(-t))
        else:
            terms = zeta_bernoulli_terms(1, x, log_q, 0, start=1, ctx=ctx,
                                         coeff=lambda k: 1 - _bernoulli_poly(k, x))
            lead = _digamma(x)
        floor = envelope_floor(1, 0, t) if policy.mode == "optimal" else None
        series = truncate(terms, policy, ctx, floor)
        value = lead + series.total
        for j in range(shift):
            value += _shift_derivative(0, x + j, t)
        if inverted:
            value += (x0 - mpf(3) / 2) * mp.log(qq)
        err = series.err + ctx.eps * abs(value)
    return finish(ctx, value, err, series.terms + 1, Method.ASYMPTOTIC)


def qpolygamma_asymptotic(m: int, x, q, policy: TruncationPolicy = OPTIMAL,
                          ctx: PrecisionContext | None = None) -> EvalResult:
    """psi^(m)(x) - sum_{k>=0} zeta(1-m-k) B_k(x) (log q)^(m+k)/k!."""
    ctx = ctx or DEFAULT_CONTEXT
    m = _check_m(m)
    policy = TruncationPolicy.parse(policy)
    with ctx.work():
        x0 = _positive_x(x, ctx)
        qq, qp, inverted = _nome(q, ctx)
        if qp is None:
            raise DomainError("the q -> 1 expansion needs q != 1")
        t, log_q = qp.log_inv_q, qp.log_q
        x, shift = _split_x(x0)
        terms = zeta_bernoulli_terms(1 - m, x, log_q, m, sign=-1, ctx=ctx)
        floor = envelope_floor(1 - m, m, t) if policy.mode == "optimal" else None
        series = truncate(terms, policy, ctx, floor)
        value = _polygamma(m, x, ctx) + series.total
        for j in range(shift):
            value += _shift_derivative(m, x + j, t)
        if inverted and m == 1:
            value += mp.log(qq)
        err = series.err + ctx.eps * abs(value)
    return finish(ctx, value, err, series.terms + 1, Method.ASYMPTOTIC)


def reflection_residual(kind: str, m: int, x, q, ctx: PrecisionContext | None = None) -> mpf:
    """|LHS - RHS| of the digamma (kind='digamma') or polygamma reflection, from direct values."""
    ctx = ctx or DEFAULT_CONTEXT
    with ctx.work():
        xv = ctx.real(x)
        if not 0 < xv < 1:
            raise DomainError("reflection needs 0 < x < 1")
        qq = ctx.real(q.q if isinstance(q, QPoint) else q)
        y = 1 - xv
        if kind == "digamma":
            lhs = qdigamma_direct(xv, q, ctx).value - qdigamma_direct(y, q, ctx).value
            rhs = -mp.pi * mp.cot(mp.pi * xv) + (xv - mpf(1) / 2) * mp.log(qq)
        elif kind in ("polygamma", "polygamma_m"):
            m = _check_m(m)
            a = qpolygamma_direct(m, xv, q, ctx).value
            b = qpolygamma_direct(m, y, q, ctx).value
            if m == 1:
                lhs = a + b
                rhs = (mp.pi / mp.sinpi(xv)) ** 2 + mp.log(qq)
            else:
                sgn = (-1) ** m
                lhs = a - sgn * b
                rhs = _polygamma(m, xv, ctx) - sgn * _polygamma(m, y, ctx)
        else:
            raise DomainError(f"unknown reflection kind {kind!r}")
        return ctx.round(abs(lhs - rhs))
