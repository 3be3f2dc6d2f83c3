"""Arbitrary-precision special functions consumed by the q-series expansions.

Functions with a leading underscore assume the caller already runs at the
context's working precision (``with ctx.work():``) and return unrounded
values; the public wrappers set the precision and round the result.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from math import comb

from mpmath import mp, mpc, mpf

from .context import (ConvergenceError, DomainError, PoleError, PrecisionContext)

BERNOULLI_DEGREE_CAP = 512

_bern_lock = threading.Lock()
_bern_exact: list[Fraction] | None = None
_bern_mpf: dict[int, list[mpf]] = {}
_bpoly_coeffs: dict[tuple[int, int], list[mpf]] = {}
_zeta_int_cache: dict[tuple[int, int], mpf] = {}


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# ---------------------------------------------------------------------------

def _tangent_numbers(n: int) -> list[int]:
    # Knuth-Buckholtz: T[k] is the k-th tangent number, integers only
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def _bernoulli_table() -> list[Fraction]:
    global _bern_exact
    table = _bern_exact
    if table is None:
        with _bern_lock:
            if _bern_exact is None:
                half = BERNOULLI_DEGREE_CAP // 2
                tan = _tangent_numbers(half)
                b = [Fraction(0)] * (BERNOULLI_DEGREE_CAP + 1)
                b[0] = Fraction(1)
                b[1] = Fraction(-1, 2)
                for k in range(1, half + 1):
                    four = 4 ** k
                    b[2 * k] = Fraction((-1) ** (k - 1) * 2 * k * tan[k], four * (four - 1))
                _bern_exact = b
            table = _bern_exact
    return table


def bernoulli_number(n: int) -> Fraction:
    """Exact B_n = B_n(0), so B_1 = -1/2."""
    if n < 0 or n > BERNOULLI_DEGREE_CAP:
        raise DomainError(f"Bernoulli index {n} outside [0, {BERNOULLI_DEGREE_CAP}]")
    return _bernoulli_table()[n]


def _bernoulli_mpf(n: int) -> mpf:
    prec = mp.prec
    row = _bern_mpf.get(prec)
    if row is None:
        row = [mpf(b.numerator) / b.denominator for b in _bernoulli_table()]
        _bern_mpf[prec] = row
    return row[n]


def _bernoulli_poly_exact(n: int, x: Fraction) -> Fraction:
    b = _bernoulli_table()
    acc = Fraction(0)
    for j in range(n + 1):
        acc = acc * x + comb(n, j) * b[j]
    return acc


def _special_bernoulli(n: int, x) -> Fraction | None:
    # exact values at the points where the expansions cancel structurally
    if x == 0:
        return bernoulli_number(n)
    if x == 1:
        return Fraction(1, 2) if n == 1 else bernoulli_number(n)
    if 2 * x == 1:
        return (Fraction(2) ** (1 - n) - 1) * bernoulli_number(n)
    return None


def _bernoulli_poly(n: int, x: mpf) -> mpf:
    special = _special_bernoulli(n, x)
    if special is not None:
        return mpf(special.numerator) / special.denominator
    key = (n, mp.prec)
    coeffs = _bpoly_coeffs.get(key)
    if coeffs is None:
        table = _bernoulli_table()
        coeffs = [comb(n, j) * mpf(table[j].numerator) / table[j].denominator
                  for j in range(n + 1)]
        _bpoly_coeffs[key] = coeffs
    acc = mpf(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def bernoulli_poly(n: int, x, ctx: PrecisionContext | None = None):
    """B_n(x) from the exponential generating function t e^{xt}/(e^t - 1).

    Exact inputs (int, Fraction) give an exact Fraction; anything else is
    evaluated in floating point at ``ctx`` precision.
    """
    if n < 0 or n > BERNOULLI_DEGREE_CAP:
        raise DomainError(f"Bernoulli degree {n} outside [0, {BERNOULLI_DEGREE_CAP}]")
    if isinstance(x, (int, Fraction)):
        return _bernoulli_poly_exact(n, Fraction(x))
    if ctx is None:
        raise TypeError("floating-point x requires a PrecisionContext")
    with ctx.work():
        v = _bernoulli_poly(n, ctx.real(x))
    return ctx.round(v)


def harmonic(m: int) -> Fraction:
    if m < 0:
        raise DomainError("harmonic number needs m >= 0")
    return sum((Fraction(1, j) for j in range(1, m + 1)), Fraction(0))


def divisor_sigma(s, n: int):
    """Sum of s-th powers of the divisors of n (trial division to sqrt n).

    Integer s returns an exact int (s >= 0) or Fraction (s < 0); other s
    are evaluated at the current mpmath precision.
    """
    if n < 1:
        raise DomainError("divisor_sigma needs n >= 1")
    divisors = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            divisors.append(d)
            if d * d != n:
                divisors.append(n // d)
        d += 1
    if isinstance(s, int):
        if s >= 0:
            return sum(dv ** s for dv in divisors)
        return sum((Fraction(1, dv ** -s) for dv in divisors), Fraction(0))
    return mp.fsum(mp.power(dv, s) for dv in divisors)


# ---------------------------------------------------------------------------
# Gamma, digamma, polygamma
# ---------------------------------------------------------------------------

def _is_nonpositive_integer(z) -> bool:
    if isinstance(z, int):
        return z <= 0
    if isinstance(z, mpc):
        if z.imag != 0:
            return False
        z = z.real
    return z <= 0 and z == mp.floor(z)


def _shift_point() -> int:
    # Stirling tail is ~exp(-2 pi |z|); shift until that is below 2^-prec
    return int(0.12 * mp.prec) + 8


def _loggamma(z):
    """Principal log-gamma by upward shift plus the Stirling series."""
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    big = _shift_point()
    n = max(0, int(mp.ceil(big - z.real)))
    w = z + n
    acc = (w - mpf(0.5)) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    tol = mpf(2) ** (-mp.prec - 4)
    w2 = w * w
    wp = w
    for k in range(1, BERNOULLI_DEGREE_CAP // 2 + 1):
        term = _bernoulli_mpf(2 * k) / (2 * k * (2 * k - 1) * wp)
        acc += term
        if abs(term) < tol * abs(acc):
            break
        wp *= w2
    else:
        raise ConvergenceError("Stirling series did not converge")
    if n:
        if isinstance(z, mpc) or z <= 0:
            acc -= mp.fsum(mp.log(z + j) for j in range(n))
        else:
            prod = mpf(1)
            for j in range(n):
                prod *= z + j
            acc -= mp.log(prod)
    return acc


def _gamma(z):
    if not isinstance(z, mpc) and z < 0:
        # sign of Gamma on the negative axis comes from the shifted product
        n = int(mp.ceil(-z)) + 1
        prod = mpf(1)
        for j in range(n):
            prod *= z + j
        return mp.exp(_loggamma(z + n)) / prod
    return mp.exp(_loggamma(z))


def _digamma(x):
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x}")
    big = _shift_point()
    n = max(0, int(mp.ceil(big - x.real)))
    w = x + n
    acc = mp.log(w) - 1 / (2 * w)
    tol = mpf(2) ** (-mp.prec - 4)
    w2 = w * w
    wp = w2
    for k in range(1, BERNOULLI_DEGREE_CAP // 2 + 1):
        term = _bernoulli_mpf(2 * k) / (2 * k * wp)
        acc -= term
        if abs(term) < tol * abs(acc):
            break
        wp *= w2
    else:
        raise ConvergenceError("digamma asymptotic series did not converge")
    if n:
        acc -= mp.fsum(1 / (x + j) for j in range(n))
    return acc


def _polygamma(m: int, x, ctx: PrecisionContext):
    if m == 0:
        return _digamma(x)
    return (-1) ** (m + 1) * mp.factorial(m) * _hurwitz(m + 1, x, ctx)


def _check_positive(x, what: str):
    if x <= 0:
        raise DomainError(f"{what} requires x > 0, got {x}")


def gamma(x, ctx: PrecisionContext) -> mpf:
    with ctx.work():
        x = ctx.real(x)
        _check_positive(x, "gamma")
        v = _gamma(x)
    return ctx.round(v)


def loggamma(z, ctx: PrecisionContext):
    with ctx.work():
        v = _loggamma(ctx.number(z))
    return ctx.round(v)


def polygamma(m: int, x, ctx: PrecisionContext) -> mpf:
    """psi^(m)(x) for real x > 0; m = 0 is the digamma function."""
    if m < 0:
        raise DomainError("polygamma order must be >= 0")
    with ctx.work():
        x = ctx.real(x)
        _check_positive(x, "polygamma")
        v = _polygamma(m, x, ctx)
    return ctx.round(v)


def digamma(x, ctx: PrecisionContext) -> mpf:
    return polygamma(0, x, ctx)


# ---------------------------------------------------------------------------
# Hurwitz and Riemann zeta
# ---------------------------------------------------------------------------

def _as_int(s):
    """Return s as a Python int when it is exactly an integer, else None."""
    if isinstance(s, int):
        return s
    if isinstance(s, Fraction):
        return s.numerator if s.denominator == 1 else None
    if isinstance(s, mpc):
        if s.imag != 0:
            return None
        s = s.real
    if mp.isint(s):
        return int(s)
    return None


def _hurwitz(s, x, ctx: PrecisionContext):
    """zeta(s, x) for x > 0 by Euler-Maclaurin with a shift of N terms."""
    n_int = _as_int(s)
    if n_int == 1:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if n_int is not None and n_int <= 0:
        return -_bernoulli_poly(1 - n_int, x) / (1 - n_int)
    if n_int is not None:
        s = mpf(n_int)
    base_prec = mp.prec
    big_n = max(int(math.ceil(0.35 * ctx.precision_bits)), int(math.ceil(abs(s))) + 10)
    for _attempt in range(6):
        extra = 10
        if s.real < 0:
            extra += int((1 - s.real) * math.log2(big_n + float(x) + 1)) + 1
        with mp.workprec(base_prec + extra):
            value = _euler_maclaurin(s, x, big_n, mpf(2) ** (-base_prec - 4))
        if value is not None:
            return +value
        big_n *= 2
    raise ConvergenceError(f"Euler-Maclaurin for zeta({s}, {x}) did not converge")


def _euler_maclaurin(s, x, big_n: int, tol):
    head = mp.fsum((j + x) ** (-s) for j in range(big_n))
    w = big_n + x
    w_pow = w ** (-s)
    acc = head + w * w_pow / (s - 1) + w_pow / 2
    w2 = w * w
    rising = s           # (s)_{2k-1}
    w_pow = w_pow / w    # w^{-s-1}
    fact = mpf(2)        # (2k)!
    prev = None
    for k in range(1, BERNOULLI_DEGREE_CAP // 2 + 1):
        term = _bernoulli_mpf(2 * k) / fact * rising * w_pow
        acc += term
        mag = abs(term)
        if mag <= tol * abs(acc):
            return acc
        if prev is not None and mag > prev:
            return None
        prev = mag
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        w_pow /= w2
        fact *= (2 * k + 1) * (2 * k + 2)
    return None


def _zeta_even_exact(n: int) -> mpf:
    b = bernoulli_number(n)
    return abs(mpf(b.numerator) / b.denominator) * (2 * mp.pi) ** n / (2 * mp.factorial(n))


def _riemann(s, ctx: PrecisionContext):
    """Riemann zeta at working precision; exact Bernoulli values at integers."""
    n = _as_int(s)
    if n is not None:
        key = (n, mp.prec)
        hit = _zeta_int_cache.get(key)
        if hit is not None:
            return hit
        if n == 1:
            raise PoleError("Riemann zeta has a pole at s = 1")
        if n == 0:
            v = mpf(-0.5)
        elif n < 0:
            k = 1 - n
            if k > BERNOULLI_DEGREE_CAP:
                v = _riemann_functional(mpf(n), ctx)
            else:
                b = bernoulli_number(k)
                v = (-1) ** (-n) * (mpf(b.numerator) / b.denominator) / k
        elif n % 2 == 0 and n <= BERNOULLI_DEGREE_CAP:
            v = _zeta_even_exact(n)
        else:
            v = _riemann_positive(mpf(n), ctx)
        _zeta_int_cache[key] = v
        return v
    if s.real < 0:
        return _riemann_functional(s, ctx)
    return _riemann_positive(s, ctx)


def _riemann_positive(s, ctx):
    sigma = s.real
    if sigma > 2:
        # few-term direct sum when 2^-prec is reached quickly
        count = int(math.ceil(2 ** ((mp.prec + 4) / (float(sigma) - 1))))
        if count <= 64:
            return mp.fsum(mpf(j) ** (-s) for j in range(1, count + 1))
    return _hurwitz(s, mpf(1), ctx)


def _riemann_functional(s, ctx):
    # zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    one_minus = 1 - s
    return (mpf(2) ** s * mp.pi ** (s - 1) * mp.sinpi(s / 2)
            * _gamma(one_minus) * _riemann(one_minus, ctx))


def hurwitz_zeta(s, x, ctx: PrecisionContext):
    """zeta(s, x) for complex s != 1 and real x > 0; riemann zeta is x = 1."""
    with ctx.work():
        x = ctx.real(x)
        _check_positive(x, "hurwitz_zeta")
        s = s if isinstance(s, int) else ctx.number(s)
        v = _riemann(s, ctx) if x == 1 else _hurwitz(s, x, ctx)
    return ctx.round(v)


def riemann_zeta(s, ctx: PrecisionContext):
    with ctx.work():
        s = s if isinstance(s, int) else ctx.number(s)
        v = _riemann(s, ctx)
    return ctx.round(v)


def _zeta_sderiv(m: int, x, ctx: PrecisionContext):
    """d/ds zeta(s, x) at s = 1 - m by central differences and Richardson."""
    bits = ctx.precision_bits
    fine = ctx.with_bits(bits + 2 * (bits // 3))
    s0 = 1 - m
    with fine.work():
        xx = +x
        h = mpf(2) ** (-(bits // 3))

        def central(step):
            return (_hurwitz(s0 + step, xx, fine) - _hurwitz(s0 - step, xx, fine)) / (2 * step)

        d1, d2, d3 = central(h), central(h / 2), central(h / 4)
        r1 = (4 * d2 - d1) / 3
        r2 = (4 * d3 - d2) / 3
        value = (16 * r2 - r1) / 15
    return +value


def hurwitz_zeta_sderiv(m: int, x, ctx: PrecisionContext) -> mpf:
    """The s-derivative of zeta(s, x) at s = 1 - m, m >= 1."""
    if m < 1:
        raise DomainError("hurwitz_zeta_sderiv needs m >= 1")
    with ctx.work():
        x = ctx.real(x)
        _check_positive(x, "hurwitz_zeta_sderiv")
        v = _zeta_sderiv(m, x, ctx)
    return ctx.round(v)


# ---------------------------------------------------------------------------
# Polylogarithm
# ---------------------------------------------------------------------------

def _polylog(s, z, ctx: PrecisionContext):
    """Li_s(z) = sum z^k / k^s for |z| < 1. Returns (value, terms, tail_bound)."""
    az = abs(z)
    if az >= 1:
        raise DomainError(f"polylog needs |z| < 1, got |z| = {mp.nstr(az, 8)}")
    if az == 0:
        return mpf(0), 0, mpf(0)
    eps = ctx.eps
    growth = max(-mpf(s.real), mpf(0))
    acc = mpf(0)
    zk = mpf(1)
    quiet = 0
    for k in range(1, ctx.max_terms + 1):
        zk *= z
        term = zk * mpf(k) ** (-s)
        acc += term
        ratio = az * (1 + mpf(1) / k) ** growth
        if abs(term) <= eps * abs(acc) and ratio < 1:
            quiet += 1
            if quiet >= 3:
                return acc, k, abs(term) * ratio / (1 - ratio)
        else:
            quiet = 0
    raise ConvergenceError(f"polylog exceeded term cap max_terms={ctx.max_terms}")


def polylog(s, z, ctx: PrecisionContext):
    with ctx.work():
        s = s if isinstance(s, int) else ctx.number(s)
        v, _, _ = _polylog(s, ctx.number(z), ctx)
    return ctx.round(v)
