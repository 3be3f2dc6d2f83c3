import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf, mpc

from qlambert import (DomainError, PoleError, ThetaArgument, eisenstein_asymptotic,
                      eisenstein_from_theta, eisenstein_modified, make_context,
                      theta_asymptotic, theta_direct, theta_logderiv_asymptotic,
                      theta_logderiv_direct)

from conftest import rel

CTX = make_context(256)


def test_argument_reduction():
    a = ThetaArgument.reduce(3, 10, "0.5", CTX)
    assert a.floor_z_pi == 3 and 0 <= a.z_pi < mp.pi
    with mp.workprec(300):
        assert abs(a.floor_z_pi * mp.pi + a.z_pi - 10) < mpf(10) ** -70
    neg = ThetaArgument.reduce(1, -1, "0.5", CTX)
    assert neg.floor_z_pi == -1
    with pytest.raises(DomainError):
        ThetaArgument.reduce(5, 0, "0.5", CTX)


def test_theta1_at_zero():
    assert theta_direct(1, 0, "0.5", CTX).value == 0


def test_theta3_small_q():
    assert abs(theta_direct(3, 0, mpf("1e-40"), CTX).value - 1) < mpf(10) ** -35


@given(st.integers(1, 4), st.floats(-6, 6), st.floats(0.05, 0.9))
def test_series_against_mpmath(j, z, q):
    with mp.workprec(300):
        ref = mp.jtheta(j, z, q)
        v = theta_direct(j, z, q, CTX).value
        assert abs(v - ref) <= mpf(10) ** -60 * (1 + abs(ref))


@given(st.integers(1, 4), st.floats(-2, 2), st.floats(-0.5, 0.5), st.floats(0.1, 0.8))
def test_complex_z_against_mpmath(j, re, im, q):
    z = mpc(re, im)
    with mp.workprec(300):
        ref = mp.jtheta(j, z, q)
        v = theta_direct(j, z, q, CTX).value
        assert abs(v - ref) <= mpf(10) ** -60 * (1 + abs(ref))


def test_routes_agree():
    for j in (1, 2, 3, 4):
        s = theta_direct(j, "0.3", "0.6", CTX).value
        t = theta_direct(j, "0.3", "0.6", CTX, route="triple_product").value
        assert rel(s, t) < mpf(10) ** -30
        theta_direct(j, "0.3", "0.6", CTX, route="both")
    with pytest.raises(DomainError):
        theta_direct(1, 0, "0.5", CTX, route="nope")


def test_abstract_constant():
    ctx = make_context(512)
    with mp.workprec(600):
        q = mp.exp(-1 / mp.pi)
        d = theta_direct(4, 0, q, ctx).value
        closed = 2 * mp.pi * mp.exp(-mp.pi ** 3 / 4)
        e = abs(closed / d - 1)
        assert mpf(10) ** -28 <= e <= mpf(10) ** -26
        a = theta_asymptotic(4, 0, q, ctx).value
        assert abs(a / closed - 1) < mpf(10) ** -100


def test_asymptotic_pi_periodic():
    with mp.workprec(300):
        z = mpf("0.4")
        z2 = z + mp.pi
    assert theta_asymptotic(3, z, "0.9", CTX).value == theta_asymptotic(3, z2, "0.9", CTX).value


def test_asymptotic_theta2():
    assert rel(theta_asymptotic(2, "0.4", "0.8", CTX).value, theta_direct(2, "0.4", "0.8", CTX).value) <= mpf(10) ** -8


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_asymptotic_sharpens(j):
    gaps = [rel(theta_asymptotic(j, "0.3", q, CTX).value, theta_direct(j, "0.3", q, CTX).value)
            for q in ("0.5", "0.7", "0.9", "0.95")]
    # strictly shrinking until the gap reaches rounding level
    floor = 10 * CTX.eps
    for a, b in zip(gaps, gaps[1:]):
        assert a > b or (a <= floor and b <= floor)


def test_asymptotic_sign_across_periods():
    # theta_1 changes sign each period; the closed form carries (-1)^floor(z/pi)
    for z in ("0.3", "2", "4", "-1"):
        d = theta_direct(1, z, "0.95", CTX).value
        a = theta_asymptotic(1, z, "0.95", CTX).value
        assert rel(a, d) < mpf(10) ** -70


def test_logderiv_zeros():
    with mp.workprec(300):
        half_pi = mp.pi / 2
    assert abs(theta_logderiv_direct(1, half_pi, "0.5", CTX).value) < mpf(10) ** -70
    assert theta_logderiv_direct(3, 0, "0.5", CTX).value == 0
    assert abs(theta_logderiv_asymptotic(3, half_pi, "0.5", CTX).value) < mpf(10) ** -70


def test_logderiv_finite_difference():
    h = mpf(10) ** -12
    with mp.workprec(300):
        z = mpf("0.7")
        fd = (mp.log(theta_direct(1, z + h, "0.5", CTX).value)
              - mp.log(theta_direct(1, z - h, "0.5", CTX).value)) / (2 * h)
    assert rel(theta_logderiv_direct(1, "0.7", "0.5", CTX).value, fd) <= mpf(10) ** -6


@given(st.integers(1, 4), st.floats(0.1, 3), st.floats(0.05, 0.9))
def test_logderiv_against_mpmath(j, z, q):
    with mp.workprec(300):
        ref = mp.jtheta(j, z, q, 1) / mp.jtheta(j, z, q)
        v = theta_logderiv_direct(j, z, q, CTX).value
        assert abs(v - ref) <= mpf(10) ** -55 * (1 + abs(ref))


def test_logderiv_asymptotic():
    a = theta_logderiv_asymptotic(1, "0.7", "0.9", CTX).value
    assert rel(a, theta_logderiv_direct(1, "0.7", "0.9", CTX).value) <= mpf(10) ** -6
    with mp.workprec(300):
        z2 = mpf("0.7") + mp.pi
    assert theta_logderiv_asymptotic(1, z2, "0.9", CTX).value == a


def test_logderiv_poles():
    with pytest.raises(PoleError):
        theta_logderiv_direct(1, 0, "0.5", CTX)
    with mp.workprec(300):
        half_pi = mp.pi / 2
    with pytest.raises(PoleError):
        theta_logderiv_direct(2, half_pi, "0.5", CTX)


def test_eisenstein_bridge():
    e = eisenstein_from_theta(1, "0.5", CTX).value
    assert e.imag == 0 if hasattr(e, "imag") else True
    assert rel(e, eisenstein_modified(1, "0.5", CTX).value) <= mpf(10) ** -12
    assert rel(eisenstein_from_theta(2, "0.3", CTX).value,
               eisenstein_asymptotic(2, "0.3", CTX).value) <= mpf(10) ** -10
