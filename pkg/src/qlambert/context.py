"""Precision contexts, result records and the package exception hierarchy."""

from __future__ import annotations

import enum
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

# Internal working precision exceeds the requested precision by this many bits;
# results are rounded back before they leave an operation.
EXTRA_BITS = 32
MIN_PRECISION_BITS = 64


class QLambertError(Exception):
    """Base class for all evaluation failures."""


class DomainError(QLambertError, ValueError):
    pass


class PoleError(DomainError):
    pass


class UnsupportedRegionError(DomainError):
    pass


class ConvergenceError(QLambertError, ArithmeticError):
    pass


class InternalConsistencyError(QLambertError, ArithmeticError):
    """Two routes that must agree did not."""


class Method(str, enum.Enum):
    DIRECT = "direct"
    ASYMPTOTIC = "asymptotic"
    AUTO = "auto"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class PrecisionContext:
    precision_bits: int
    max_terms: int
    guard_bits: int = 8

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION_BITS:
            raise DomainError(
                f"precision too low: {self.precision_bits} bits < {MIN_PRECISION_BITS}")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if not 0 <= self.guard_bits < self.precision_bits:
            raise DomainError("guard_bits out of range")

    @property
    def work_bits(self) -> int:
        return self.precision_bits + EXTRA_BITS

    @property
    def eps(self) -> mpf:
        return mpf(2) ** (self.guard_bits - self.precision_bits)

    @property
    def digits(self) -> int:
        return int(self.precision_bits * 0.30103)

    def with_bits(self, precision_bits: int) -> "PrecisionContext":
        return PrecisionContext(precision_bits, self.max_terms, self.guard_bits)

    @contextmanager
    def work(self):
        """Run the enclosed block at this context's internal working precision."""
        with mp.workprec(self.work_bits):
            yield

    def real(self, value) -> mpf:
        """Convert *value* to an mpf at working precision.

        Strings are parsed as decimals at full precision, never through a
        machine double.
        """
        with self.work():
            if isinstance(value, mpf):
                return value
            if isinstance(value, Fraction):
                return mpf(value.numerator) / value.denominator
            if isinstance(value, (mpc, complex)):
                raise DomainError(f"expected a real number, got {value!r}")
            return mpf(value)

    def number(self, value):
        """Like :meth:`real` but complex inputs are kept complex."""
        with self.work():
            if isinstance(value, (mpc, complex)):
                return mpc(value)
            if isinstance(value, str) and "j" in value:
                return _parse_complex(value)
        return self.real(value)

    def round(self, value):
        """Round a working-precision value to ``precision_bits``."""
        with mp.workprec(self.precision_bits):
            return +value


def _parse_complex(text: str) -> mpc:
    # "a+bj" / "a-bj" / "bj" with each part parsed at full precision
    t = text.replace(" ", "").rstrip("j")
    for i in range(len(t) - 1, 0, -1):
        if t[i] in "+-" and t[i - 1] not in "eE":
            return mpc(mpf(t[:i]), mpf(t[i:] or "1"))
    return mpc(0, mpf(t or "1"))


def make_context(precision_bits: int = 256, max_terms: int = 10**6) -> PrecisionContext:
    """Build a context; ``eps`` is ``2**(guard_bits - precision_bits)``."""
    return PrecisionContext(int(precision_bits), int(max_terms))


def bits_for_digits(digits: int) -> int:
    return max(MIN_PRECISION_BITS, int(digits * 3.3219280948873626) + 16)


@dataclass(frozen=True)
class EvalResult:
    value: mpf | mpc
    err_estimate: mpf
    terms_used: int
    method: Method

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be nonnegative")
        if mp.isnan(self.value.real) or mp.isnan(self.value.imag):
            raise ConvergenceError("evaluation produced NaN")

    @property
    def real(self) -> mpf:
        return self.value.real

    def relative_error(self, reference) -> mpf:
        return abs(self.value - reference) / abs(reference)


def finish(ctx: PrecisionContext, value, err, terms: int, method: Method) -> EvalResult:
    if terms > ctx.max_terms:
        raise ConvergenceError(f"term cap max_terms={ctx.max_terms} exceeded ({terms} terms)")
    if isinstance(value, mpc) and value.imag == 0:
        value = value.real
    return EvalResult(ctx.round(value), ctx.round(abs(mpf(err))), int(terms), method)


DEFAULT_CONTEXT = make_context()
