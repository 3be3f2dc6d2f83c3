"""Jacobi theta functions, their q -> 1 forms and logarithmic derivatives.

Conventions: q = e^(-t) with 0 < q < 1 and

    theta_1 = 2 sum_{n>=0} (-1)^n q^((n+1/2)^2) sin((2n+1) z)
    theta_2 = 2 sum_{n>=0} q^((n+1/2)^2) cos((2n+1) z)
    theta_3 = 1 + 2 sum_{n>=1} q^(n^2) cos(2 n z)
    theta_4 = 1 + 2 sum_{n>=1} (-1)^n q^(n^2) cos(2 n z)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .context import (DEFAULT_CONTEXT, ConvergenceError, DomainError, EvalResult,
                      InternalConsistencyError, Method, PoleError, PrecisionContext, finish)
from .lambert import QPoint
from .qpochhammer import _product_log

ROUTES = ("series", "triple_product", "both")


def _check_j(j):
    if j not in (1, 2, 3, 4):
        raise DomainError(f"theta index must be 1..4, got {j}")


@dataclass(frozen=True)
class ThetaArgument:
    """Real z split as z = pi * floor_z_pi + z_pi with 0 <= z_pi < pi."""

    j: int
    z: mpf
    q: mpf
    z_pi: mpf
    floor_z_pi: int

    @classmethod
    def reduce(cls, j: int, z, q, ctx: PrecisionContext | None = None) -> "ThetaArgument":
        ctx = ctx or DEFAULT_CONTEXT
        _check_j(j)
        qp = QPoint.of(q, ctx)
        with ctx.work():
            z = ctx.real(z)
            z_pi, n = _mod_pi(z)
        return cls(j, z, qp.q, z_pi, n)


def _mod_pi(z):
    # z is exact in binary; pi is carried with enough extra bits that the
    # residue keeps full working precision even for large |z|
    extra = (max(0, int(mp.mag(z))) if z else 0) + 16
    with mp.workprec(mp.prec + extra):
        n = int(mp.floor(z / mp.pi))
        r = z - n * mp.pi
        if r < 0:
            n, r = n - 1, r + mp.pi
        elif r >= mp.pi:
            n, r = n + 1, r - mp.pi
    return +r, n


# ---------------------------------------------------------------------------
# Direct evaluation
# ---------------------------------------------------------------------------

def _series(j: int, z, qp: QPoint, ctx: PrecisionContext):
    t = qp.log_inv_q
    y = abs(mp.im(z)) if isinstance(z, mpc) else mpf(0)
    half = j in (1, 2)
    need = float(y / t) + math.sqrt(ctx.work_bits * math.log(2) / float(t)) + 2
    if need > ctx.max_terms:
        raise ConvergenceError(
            f"|Im z| too large: theta series needs ~{need:.3g} terms (max_terms={ctx.max_terms})")
    eps = ctx.eps
    acc = mpf(0) if half else mpf(1)
    scale = mpf(0) if half else mpf(1)
    n = 0 if half else 1
    used = 0
    while True:
        nu = n + mpf(1) / 2 if half else mpf(n)
        freq = 2 * nu
        bound = 2 * mp.exp(-nu * nu * t + freq * y)
        sign = -1 if (j in (1, 4) and n % 2) else 1
        if j == 1:
            term = sign * 2 * mp.exp(-nu * nu * t) * mp.sin(freq * z)
        else:
            term = sign * 2 * mp.exp(-nu * nu * t) * mp.cos(freq * z)
        acc += term
        scale += bound
        used += 1
        # ratio of consecutive bounds; below one past the peak
        ratio = mp.exp(-(2 * nu + 1) * t + 2 * y)
        if ratio < 1:
            tail = bound * ratio / (1 - ratio)
            if tail <= eps * scale / 4:
                err = tail + used * mpf(2) ** (-mp.prec) * scale
                return acc, err, used, scale
        n += 1
        if used > ctx.max_terms:
            raise ConvergenceError(f"theta series exceeded term cap max_terms={ctx.max_terms}")


def _series_accurate(j: int, z, qp: QPoint, ctx: PrecisionContext):
    # near q = 1 the terms are O(1) while theta itself can be exponentially
    # small; redo the sum with as many extra bits as the cancellation ate
    value, err, n, scale = _series(j, z, qp, ctx)
    if value == 0 or scale < abs(value) * 2 ** 16:
        return value, err, n
    extra = min(int(mp.log(scale / abs(value), 2)) + 16, 8 * ctx.work_bits)
    hctx = ctx.with_bits(ctx.precision_bits + extra)
    with hctx.work():
        value, err, m, _ = _series(j, z, QPoint.of(qp.q, hctx), hctx)
    return value, err, n + m


def _triple_product(j: int, z, qp: QPoint, ctx: PrecisionContext):
    if j == 2:
        return _triple_product(1, z + mp.pi / 2, qp, ctx)
    if j == 3:
        return _triple_product(4, z + mp.pi / 2, qp, ctx)
    q2 = QPoint.of(qp.q ** 2, ctx)
    e = mp.expj(2 * z)
    base, e0, n0 = _product_log(q2.q, q2, ctx, x=mpf(1))
    if j == 4:
        # (q^2;q^2) (q e^{2iz};q^2) (q e^{-2iz};q^2)
        l1, e1, n1 = _product_log(qp.q * e, q2, ctx, bounded=False)
        l2, e2, n2 = _product_log(qp.q / e, q2, ctx, bounded=False)
        value = mp.exp(base + l1 + l2)
    else:
        # quasi-period relation with the vanishing factor 1 - e^{-2iz} taken out:
        # -i q^(1/4) e^{iz} (1 - e^{-2iz}) = 2 q^(1/4) sin z
        l1, e1, n1 = _product_log(q2.q * e, q2, ctx, bounded=False)
        l2, e2, n2 = _product_log(q2.q / e, q2, ctx, bounded=False)
        value = 2 * mp.exp(-qp.log_inv_q / 4) * mp.sin(z) * mp.exp(base + l1 + l2)
    err = abs(value) * (e0 + e1 + e2)
    if not isinstance(z, mpc) and isinstance(value, mpc):
        err += abs(value.imag)
        value = value.real
    return value, err, n0 + n1 + n2


def theta_direct(j: int, z, q, ctx: PrecisionContext | None = None,
                 route: str = "series") -> EvalResult:
    """theta_j(z, q) by its defining series or by the triple product.

    ``route="both"`` evaluates both and raises InternalConsistencyError when
    they disagree beyond their combined error estimates.
    """
    ctx = ctx or DEFAULT_CONTEXT
    _check_j(j)
    if route not in ROUTES:
        raise DomainError(f"unknown route {route!r}")
    qp = QPoint.of(q, ctx)
    with ctx.work():
        z = ctx.number(z)
        if isinstance(z, mpc) and z.imag == 0:
            z = z.real
        if route == "triple_product":
            value, err, n = _triple_product(j, z, qp, ctx)
        else:
            value, err, n = _series_accurate(j, z, qp, ctx)
        if route == "both":
            v2, e2, n2 = _triple_product(j, z, qp, ctx)
            tol = 10 * (err + e2) + 10 * ctx.eps * max(abs(value), mpf(1))
            if abs(value - v2) > tol:
                raise InternalConsistencyError(
                    f"theta_{j} routes disagree: |diff| = {mp.nstr(abs(value - v2), 5)}")
            n += n2
    return finish(ctx, value, err, n, Method.DIRECT)


# ---------------------------------------------------------------------------
# q -> 1 closed forms
# ---------------------------------------------------------------------------

def _bracket(z_pi, log_q, sign):
    return mp.exp(z_pi ** 2 / log_q) + sign * mp.exp((mp.pi - z_pi) ** 2 / log_q)


def theta_asymptotic(j: int, z, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """Closed q -> 1 form of theta_j for real z, built on z mod pi.

    theta_3 = sqrt(pi/t) [e^(z_pi^2/log q) + e^((pi - z_pi)^2/log q)], theta_2 the
    same with a minus sign and the factor (-1)^floor(z/pi); theta_4(z) and
    theta_1(z) are theta_3 and theta_2 at z - pi/2.
    """
    ctx = ctx or DEFAULT_CONTEXT
    _check_j(j)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        z = ctx.real(z)
        if j in (1, 4):
            z = z - mp.pi / 2
        z_pi, n = _mod_pi(z)
        c = mp.sqrt(mp.pi / qp.log_inv_q)
        if j in (3, 4):
            value = c * _bracket(z_pi, qp.log_q, 1)
        else:
            value = (-1) ** (n % 2) * c * _bracket(z_pi, qp.log_q, -1)
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# Logarithmic derivatives
# ---------------------------------------------------------------------------

def _pole_check(j, z_pi, eps):
    if j == 1 and (z_pi <= eps or mp.pi - z_pi <= eps):
        raise PoleError("theta_1 vanishes at z = 0 mod pi")
    if j == 2 and abs(z_pi - mp.pi / 2) <= eps:
        raise PoleError("theta_2 vanishes at z = pi/2 mod pi")


def theta_logderiv_direct(j: int, z, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """theta_j'/theta_j by the Lambert-type series

    j=1:  cot z + 4 sum q^(2n)/(1-q^(2n)) sin 2nz
    j=2: -tan z + 4 sum (-1)^n q^(2n)/(1-q^(2n)) sin 2nz
    j=3:          4 sum (-1)^n q^n/(1-q^(2n)) sin 2nz
    j=4:          4 sum q^n/(1-q^(2n)) sin 2nz
    """
    ctx = ctx or DEFAULT_CONTEXT
    _check_j(j)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        z = ctx.real(z)
        z_pi, _ = _mod_pi(z)
        _pole_check(j, z_pi, ctx.eps)
        t = qp.log_inv_q
        if j == 1:
            lead = mp.cot(z_pi)
        elif j == 2:
            lead = -mp.tan(z_pi)
        else:
            lead = mpf(0)
        power = 2 if j in (1, 2) else 1
        alternate = j in (2, 3)
        acc = lead
        scale = abs(lead)
        ratio = mp.exp(-power * t)
        for n in range(1, ctx.max_terms + 1):
            coef = 4 * mp.exp(-power * n * t) / -mp.expm1(-2 * n * t)
            term = coef * mp.sin(2 * n * z_pi)
            if alternate and n % 2:
                term = -term
            acc += term
            scale += coef
            tail = coef * ratio / (1 - ratio)
            if tail <= ctx.eps * scale / 4:
                err = tail + n * mpf(2) ** (-mp.prec) * scale
                return finish(ctx, acc, err, n, Method.DIRECT)
    raise ConvergenceError(f"log-derivative series exceeded term cap max_terms={ctx.max_terms}")


def theta_logderiv_asymptotic(j: int, z, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """(1/log q) [2u + pi coth(pi u/log q)] for j = 2, tanh for j = 3, u = z_pi - pi/2.

    j = 1 and j = 4 use the j = 2 and j = 3 rules at z - pi/2.
    """
    ctx = ctx or DEFAULT_CONTEXT
    _check_j(j)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        z = ctx.real(z)
        if j in (1, 4):
            z = z - mp.pi / 2
        z_pi, _ = _mod_pi(z)
        u = z_pi - mp.pi / 2
        arg = mp.pi * u / qp.log_q
        if j in (1, 2):
            if abs(u) <= ctx.eps:
                raise PoleError(f"theta_{j} vanishes here; coth has a pole")
            hyper = mp.coth(arg)
        else:
            hyper = mp.tanh(arg)
        value = (2 * u + mp.pi * hyper) / qp.log_q
    return finish(ctx, value, 0, 1, Method.CLOSED_FORM)


def eisenstein_from_theta(k: int, q, ctx: PrecisionContext | None = None) -> EvalResult:
    """[(theta_2(0, q^(1/2)) + theta_3(0, q^(1/2))) / (2 sqrt(i))]^(4k), real part."""
    ctx = ctx or DEFAULT_CONTEXT
    if int(k) != k or k < 1:
        raise DomainError(f"k must be an integer >= 1, got {k}")
    k = int(k)
    qp = QPoint.of(q, ctx)
    with ctx.work():
        half = QPoint.of(mp.sqrt(qp.q), ctx)
        t2, e2, n2 = _series_accurate(2, mpf(0), half, ctx)
        t3, e3, n3 = _series_accurate(3, mpf(0), half, ctx)
        base = (t2 + t3) / (2 * mp.expjpi(mpf(1) / 4))
        value = base ** (4 * k)
        err = abs(value) * 4 * k * (e2 + e3) / abs(t2 + t3)
        if abs(value.imag) > 10 * ctx.eps * abs(value):
            raise InternalConsistencyError("theta form of the Eisenstein series is not real")
        value = value.real
    return finish(ctx, value, err, n2 + n3, Method.DIRECT)
