"""Property suites behind ``qlambert verify``; each check reports its worst
residual as a fraction of its tolerance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .context import DEFAULT_CONTEXT, PrecisionContext
from .kernel import _riemann, bernoulli_poly, hurwitz_zeta_sderiv
from .lambert import lambert_asymptotic, lambert_direct
from .qgamma import (qdigamma_asymptotic, qdigamma_direct, qgamma_asymptotic, qgamma_direct,
                     qpolygamma_asymptotic, qpolygamma_direct, reflection_residual)
from .qpochhammer import pochhammer_asymptotic, pochhammer_qx
from .theta import theta_direct, theta_logderiv_direct

LAMBERT_S = (-2, -1, 0, 1, "1.5", 2)
LAMBERT_Q = ("0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9")
LAMBERT_X = ("0.25", "0.5", "0.75", "1")


@dataclass
class Check:
    name: str
    count: int = 0
    worst: float = 0.0
    where: str = ""

    def add(self, residual, tol, where: str):
        """Record one case; ``residual/tol`` above 1 is a failure."""
        self.count += 1
        ratio = float(residual / tol) if tol > 0 else (0.0 if residual == 0 else float("inf"))
        if ratio >= self.worst:
            self.worst, self.where = ratio, where
        return ratio

    @property
    def passed(self) -> bool:
        return self.count > 0 and self.worst <= 1.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.count} cases, worst residual/tol = {self.worst:.3g} ({self.where})"


def _ten_eps(ctx, scale):
    return 10 * ctx.eps * max(abs(scale), mpf(2) ** -ctx.precision_bits)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def check_product_lambert_round_trip(ctx: PrecisionContext) -> Check:
    c = Check("log (q^x;q) = -L_q(-1, x)")
    for q in ("0.2", "0.5", "0.8"):
        for x in ("0.25", "0.5", "1"):
            lp = pochhammer_qx(x, q, ctx, log=True).value
            lam = lambert_direct(-1, x, q, ctx).value
            c.add(abs(lp + lam), _ten_eps(ctx, lp), f"q={q} x={x}")
    return c


def check_digamma_identity(ctx: PrecisionContext) -> Check:
    c = Check("psi_q = -log(1-q) + log q L_q(0, x)")
    for q in ("0.3", "0.7", "0.9"):
        for x in ("0.5", "1", "2.5"):
            v = qdigamma_direct(x, q, ctx).value
            with ctx.work():
                qq = mpf(q)
                ref = -mp.log(1 - qq) + mp.log(qq) * lambert_direct(0, x, q, ctx).value
            c.add(abs(v - ref), _ten_eps(ctx, ref), f"q={q} x={x}")
    return c


def check_polygamma_identity(ctx: PrecisionContext) -> Check:
    c = Check("psi_q^(m) = (log q)^(m+1) L_q(m, x)")
    for m in (1, 2, 3):
        for q in ("0.3", "0.9"):
            for x in ("0.5", "1.5"):
                v = qpolygamma_direct(m, x, q, ctx).value
                with ctx.work():
                    ref = mp.log(mpf(q)) ** (m + 1) * lambert_direct(m, x, q, ctx).value
                c.add(abs(v - ref), _ten_eps(ctx, ref), f"m={m} q={q} x={x}")
    return c


def check_quasi_period(ctx: PrecisionContext) -> Check:
    c = Check("theta_1(z) = -i q^(1/4) e^(iz) theta_4(z + log q/(2i))")
    for z in ("0.3", "1.0"):
        for q in ("0.4", "0.7"):
            t1 = theta_direct(1, z, q, ctx).value
            with ctx.work():
                zz, qq = mpf(z), mpf(q)
                w = mpc(zz, -mp.log(qq) / 2)
                t4 = theta_direct(4, w, q, ctx).value
                rhs = mpc(0, -1) * qq ** (mpf(1) / 4) * mp.expj(zz) * t4
            c.add(abs(t1 - rhs), _ten_eps(ctx, t1), f"z={z} q={q}")
            c.add(abs(rhs.imag), _ten_eps(ctx, t1), f"Im, z={z} q={q}")
    return c


def check_triple_product(ctx: PrecisionContext) -> Check:
    c = Check("theta series = triple product")
    for j in (1, 2, 3, 4):
        for z in ("0", "0.4", "2.8"):
            for q in ("0.2", "0.6", "0.9"):
                a = theta_direct(j, z, q, ctx).value
                b = theta_direct(j, z, q, ctx, route="triple_product").value
                c.add(abs(a - b), _ten_eps(ctx, a), f"j={j} z={z} q={q}")
    return c


def check_theta_shifts(ctx: PrecisionContext) -> Check:
    c = Check("theta shift and (anti)periodicity relations")
    for q in ("0.3", "0.8"):
        for z in ("0.1", "0.9", "2.2"):
            with ctx.work():
                zz = mpf(z)
                zh = zz + mp.pi / 2
                zp = zz + mp.pi
            for route in ("series", "triple_product"):
                t = {j: theta_direct(j, zz, q, ctx, route).value for j in (1, 2, 3, 4)}
                c.add(abs(t[2] - theta_direct(1, zh, q, ctx, route).value), _ten_eps(ctx, t[2]),
                      f"theta_2 shift z={z} q={q} {route}")
                c.add(abs(t[3] - theta_direct(4, zh, q, ctx, route).value), _ten_eps(ctx, t[3]),
                      f"theta_3 shift z={z} q={q} {route}")
                c.add(abs(t[3] - theta_direct(3, zp, q, ctx, route).value), _ten_eps(ctx, t[3]),
                      f"theta_3 period z={z} q={q} {route}")
                c.add(abs(t[1] + theta_direct(1, zp, q, ctx, route).value), _ten_eps(ctx, t[1]),
                      f"theta_1 antiperiod z={z} q={q} {route}")
    return c


def check_qgamma_functional(ctx: PrecisionContext) -> Check:
    c = Check("Gamma_q(x+1) = [x]_q Gamma_q(x)")
    for q in ("0.3", "0.7", "0.9"):
        for x in ("0.5", "1", "1.5"):
            g = qgamma_direct(x, q, ctx).value
            with ctx.work():
                xx, qq = mpf(x), mpf(q)
                g1 = qgamma_direct(xx + 1, q, ctx).value
                ref = (1 - qq ** xx) / (1 - qq) * g
            c.add(abs(g1 - ref), _ten_eps(ctx, ref), f"q={q} x={x}")
    return c


def check_qgamma_inversion(ctx: PrecisionContext) -> Check:
    c = Check("Gamma_q(x) = q^((x-1)(x-2)/2) Gamma_{1/q}(x)")
    for x in ("0.25", "0.5", "0.75"):
        g = qgamma_direct(x, "0.4", ctx).value
        gi = qgamma_direct(x, "2.5", ctx).value
        with ctx.work():
            xx = mpf(x)
            ref = mpf("0.4") ** ((xx - 1) * (xx - 2) / 2) * gi
        c.add(abs(g - ref), _ten_eps(ctx, ref), f"x={x}")
    return c


def identities(ctx: PrecisionContext | None = None) -> list[Check]:
    ctx = ctx or DEFAULT_CONTEXT
    return [check_product_lambert_round_trip(ctx), check_digamma_identity(ctx),
            check_polygamma_identity(ctx), check_quasi_period(ctx), check_triple_product(ctx),
            check_theta_shifts(ctx), check_qgamma_functional(ctx), check_qgamma_inversion(ctx)]


# ---------------------------------------------------------------------------
# overlap: direct against asymptotic, and derivative checks
# ---------------------------------------------------------------------------

def check_lambert_overlap(ctx: PrecisionContext) -> Check:
    c = Check("Lambert direct vs asymptotic within 10 max(err)")
    for s in LAMBERT_S:
        for q in LAMBERT_Q:
            for x in LAMBERT_X:
                d = lambert_direct(s, x, q, ctx)
                a = lambert_asymptotic(s, x, q, ctx=ctx)
                tol = 10 * max(d.err_estimate, a.err_estimate)
                c.add(abs(d.value - a.value), tol, f"s={s} q={q} x={x}")
    return c


def check_pochhammer_overlap(ctx: PrecisionContext) -> Check:
    c = Check("(q^x;q) expansion vs product, q >= 0.8")
    for q in ("0.8", "0.9"):
        for i in range(1, 10):
            x = Fraction(i, 9)
            d = pochhammer_qx(x, q, ctx).value
            a = pochhammer_asymptotic(x, q, ctx=ctx)
            rel = abs(a.value / d - 1)
            c.add(rel, max(a.err_estimate / abs(a.value), mpf("1e-10")), f"q={q} x={x}")
    return c


def check_qgamma_overlap(ctx: PrecisionContext) -> Check:
    c = Check("q-gamma family direct vs asymptotic within 10 max(err)")
    for q in ("0.5", "0.9", "3"):
        for x in ("0.25", "1", "2.5"):
            pairs = [("gamma", qgamma_direct(x, q, ctx), qgamma_asymptotic(x, q, ctx=ctx))]
            for variant in ("compact", "expanded"):
                pairs.append((f"digamma/{variant}", qdigamma_direct(x, q, ctx),
                              qdigamma_asymptotic(x, q, variant, ctx=ctx)))
            for m in (1, 2):
                pairs.append((f"polygamma m={m}", qpolygamma_direct(m, x, q, ctx),
                              qpolygamma_asymptotic(m, x, q, ctx=ctx)))
            for name, d, a in pairs:
                tol = 10 * max(d.err_estimate, a.err_estimate, ctx.eps * abs(d.value))
                c.add(abs(d.value - a.value), tol, f"{name} q={q} x={x}")
    return c


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def check_derivatives(ctx: PrecisionContext) -> Check:
    c = Check("derivative checks at relative 1e-6")
    with ctx.work():
        h = mpf("1e-8")
        x, q = mpf("0.7"), "0.5"
        fd = _central(lambda y: mp.log(qgamma_direct(y, q, ctx).value), x, h)
        psi = qdigamma_direct(x, q, ctx).value
        c.add(abs(fd / psi - 1), mpf("1e-6"), "psi_q vs d log Gamma_q")
        for m in (1, 2, 3):
            prev = (lambda y: qdigamma_direct(y, q, ctx).value) if m == 1 else \
                (lambda y, m=m: qpolygamma_direct(m - 1, y, q, ctx).value)
            fd = _central(prev, x, h)
            v = qpolygamma_direct(m, x, q, ctx).value
            c.add(abs(fd / v - 1), mpf("1e-6"), f"psi_q^({m}) vs finite difference")
        for m in (1, 2, 4):
            for xs in ("0.25", "1"):
                ours = hurwitz_zeta_sderiv(m, xs, ctx)
                ref = mp.zeta(1 - m, mpf(xs), 1)
                c.add(abs(ours / ref - 1), mpf("1e-6"), f"zeta'(1-{m}, {xs}) vs mpmath")
        for j in (1, 2, 3, 4):
            z = mpf("0.7")
            fd = _central(lambda y: mp.log(abs(theta_direct(j, y, q, ctx).value)), z, h)
            v = theta_logderiv_direct(j, z, q, ctx).value
            c.add(abs(fd - v) / max(abs(v), 1), mpf("1e-6"), f"theta_{j}'/theta_{j}")
    return c


def overlap(ctx: PrecisionContext | None = None) -> list[Check]:
    ctx = ctx or DEFAULT_CONTEXT
    return [check_lambert_overlap(ctx), check_pochhammer_overlap(ctx),
            check_qgamma_overlap(ctx), check_derivatives(ctx)]


# ---------------------------------------------------------------------------
# reflections
# ---------------------------------------------------------------------------

def check_reflection_residuals(ctx: PrecisionContext) -> Check:
    c = Check("digamma/polygamma reflection residuals")
    cases = [("digamma", 0, "0.25", "0.9"), ("digamma", 0, "0.5", "0.9"),
             ("digamma", 0, "0.25", "0.95"), ("polygamma", 1, "0.25", "0.9"),
             ("polygamma", 3, "0.25", "0.9")]
    cases += [("polygamma", 2, "0.3", q) for q in ("0.9", "0.95", "0.99")]
    for kind, m, x, q in cases:
        r = reflection_residual(kind, m, x, q, ctx)
        with ctx.work():
            xx = mpf(x)
            if kind == "digamma":
                tol = mpf("1e-8") * (abs(mp.pi * mp.cot(mp.pi * xx)) + 1)
            else:
                tol = mpf("1e-6") * (abs(mp.psi(m, xx)) + abs(mp.psi(m, 1 - xx)))
        c.add(r, tol, f"{kind} m={m} q={q} x={x}")
    return c


def check_pochhammer_reflection_zeros(ctx: PrecisionContext) -> Check:
    # every omitted factor zeta(2-k)[B_k(x) + B_k(1-x)] vanishes exactly, k = 3..12
    c = Check("omitted k >= 3 reflection factors are exact zeros")
    for x in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 7)):
        for k in range(3, 13):
            bsum = bernoulli_poly(k, x) + bernoulli_poly(k, 1 - x)
            with ctx.work():
                z = _riemann(2 - k, ctx)
            factor = 0 if (bsum == 0 or z == 0) else abs(z * mpf(bsum.numerator) / bsum.denominator)
            c.add(factor, 0, f"x={x} k={k}")
    return c


def reflections(ctx: PrecisionContext | None = None) -> list[Check]:
    ctx = ctx or DEFAULT_CONTEXT
    return [check_reflection_residuals(ctx), check_pochhammer_reflection_zeros(ctx)]


SUITES = {"identities": identities, "overlap": overlap, "reflections": reflections}


def run(name: str, ctx: PrecisionContext | None = None) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(ctx)]
    return SUITES[name](ctx)
