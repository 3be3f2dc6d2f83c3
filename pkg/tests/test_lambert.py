import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from qlambert import (ConvergenceError, DomainError, Method, QPoint, SParameter,
                      TruncationPolicy, UnsupportedRegionError, divisor_gf_asymptotic,
                      eisenstein_asymptotic, eisenstein_direct, eisenstein_modified,
                      lambert_asymptotic, lambert_direct, lambert_eval, lambert_shift,
                      make_context, pochhammer_direct, qdigamma_direct)
from qlambert import kernel as K

from conftest import rel

CTX = make_context(256)


def oracle_lambert(s, x, q, n=None):
    """Plain partial sums sum k^s q^(kx)/(1-q^k) at 400 bits."""
    with mp.workprec(400):
        q = mpf(q)
        x = mpf(x)
        n = n or int(300 / (x * -mp.log10(q))) + 50
        return mp.fsum(mpf(k) ** s * q ** (k * x) / (1 - q ** k) for k in range(1, n))


def test_qpoint_fields():
    qp = QPoint.of("0.5", CTX)
    with mp.workprec(300):
        assert abs(qp.log_q - mp.log(mpf("0.5"))) < mpf(10) ** -70
        assert abs(qp.log_inv_q + qp.log_q) == 0
        assert abs(qp.loglog_inv_q - mp.log(mp.log(2))) < mpf(10) ** -70
    for bad in (0, 1, "1.5", -0.2):
        with pytest.raises(DomainError):
            QPoint.of(bad, CTX)


def test_sparameter_case_tags():
    assert SParameter.of(1).case == 1
    assert SParameter.of(0).case == 2
    assert SParameter.of(-3).case == 3 and SParameter.of(-3).m == 3
    assert SParameter.of(mpf("1.5")).case == 1
    # no epsilon snapping: a complex value near -2 stays in case 1
    assert SParameter.of(mp.mpc(-2, 1e-30)).case == 1


def test_direct_s0_half():
    r = lambert_direct(0, 1, "0.5", CTX)
    with mp.workprec(300):
        # sum 1/(2^k - 1), partial sums plus a geometric tail bound
        ref = mp.fsum(1 / (mpf(2) ** k - 1) for k in range(1, 400))
        assert abs(r.value - ref) < mpf(10) ** -70
    assert abs(r.value - mpf("1.6066951524152917")) < 1e-15
    assert r.method is Method.DIRECT


def test_direct_sminus1_is_log_euler():
    r = lambert_direct(-1, 1, "0.5", CTX)
    with mp.workprec(300):
        ref = -mp.log(mp.qp(mpf("0.5")))
        assert abs(r.value - ref) < mpf(10) ** -70
    assert str(r.value).startswith("1.24206")


def test_direct_tiny_q():
    ctx = make_context(64)
    r = lambert_direct(0, 1, mpf("1e-30"), ctx)
    assert 0 < r.value <= 2e-30


@given(st.sampled_from([-2, -1, 0, 1, 2, 3]), st.floats(0.1, 3), st.floats(0.05, 0.8))
def test_direct_against_partial_sums(s, x, q):
    r = lambert_direct(s, x, q, CTX)
    assert rel(r.value, oracle_lambert(s, x, q)) < mpf(10) ** -65


def test_direct_cap():
    with pytest.raises(ConvergenceError):
        lambert_direct(1, 1, "0.999", make_context(128, max_terms=1000))


def test_domain_errors():
    with pytest.raises(DomainError):
        lambert_direct(0, -1, "0.5", CTX)
    with pytest.raises(DomainError):
        lambert_asymptotic(0, 1.5, "0.5", ctx=CTX)


def test_asymptotic_s1_q09():
    a = lambert_asymptotic(1, 1, "0.9", ctx=CTX)
    assert rel(a.value, oracle_lambert(1, 1, "0.9")) <= mpf(10) ** -10
    assert a.method is Method.ASYMPTOTIC


def test_asymptotic_s0_gives_qdigamma():
    a = lambert_asymptotic(0, 1, "0.5", ctx=CTX)
    with mp.workprec(300):
        q = mpf("0.5")
        via = -mp.log(1 - q) + a.value * mp.log(q)
    assert rel(via, qdigamma_direct(1, "0.5", CTX).value) <= mpf(10) ** -12


def test_asymptotic_case3_is_log_euler():
    a = lambert_asymptotic(-1, 1, "0.7", ctx=CTX)
    with mp.workprec(300):
        ref = -mp.log(mp.qp(mpf("0.7")))
        assert abs(a.value - ref) <= max(a.err_estimate, mpf(10) ** -70)


@pytest.mark.parametrize("s", [-2, -1, 0, 1, 2, mpf("1.5")])
@pytest.mark.parametrize("x", ["0.25", "0.5", "0.75", "1"])
def test_overlap_q07(s, x):
    d = lambert_direct(s, x, "0.7", CTX)
    a = lambert_asymptotic(s, x, "0.7", ctx=CTX)
    assert abs(d.value - a.value) <= 10 * max(d.err_estimate, a.err_estimate)


def test_fixed_policy_improves_with_k():
    d = lambert_direct(2, "0.3", "0.9", CTX).value
    errs = [rel(lambert_asymptotic(2, "0.3", "0.9", TruncationPolicy.fixed(K), CTX).value, d)
            for K in (0, 2, 4)]
    assert errs[0] > errs[1] > errs[2]


def test_unsupported_region():
    with pytest.raises(UnsupportedRegionError):
        lambert_asymptotic(mpf("-1.5"), 1, "0.9", ctx=CTX)


def test_shift_identity_branch():
    reduced, corr = lambert_shift(0, "0.5", "0.3", CTX)
    assert reduced == mpf("0.5") and corr == 0


def test_shift_x25():
    reduced, corr = lambert_shift(0, "2.5", "0.3", CTX)
    assert reduced == mpf("0.5")
    with mp.workprec(300):
        q = mpf("0.3")
        ref = mp.polylog(0, q ** mpf("0.5")) + mp.polylog(0, q ** mpf("1.5"))
        assert abs(corr - ref) < mpf(10) ** -70
    lhs = lambert_direct(0, "2.5", "0.3", CTX).value
    with mp.workprec(300):
        rhs = lambert_direct(0, "0.5", "0.3", CTX).value - corr
    assert rel(lhs, rhs) < mpf(10) ** -70


def test_shift_integer_x():
    reduced, corr = lambert_shift(1, 3, "0.5", CTX)
    assert reduced == 1
    lhs = lambert_direct(1, 3, "0.5", CTX).value
    with mp.workprec(300):
        rhs = lambert_direct(1, 1, "0.5", CTX).value - corr
    assert rel(lhs, rhs) < mpf(10) ** -70


def test_router():
    assert lambert_eval(1, 1, "0.3", CTX).method is Method.DIRECT
    assert lambert_eval(1, 1, "0.95", CTX).method is Method.ASYMPTOTIC


def test_router_near_threshold_agrees():
    q = mpf("0.5") + mpf(2) ** -200
    d = lambert_direct(1, "0.75", q, CTX)
    a = lambert_eval(1, "0.75", q, CTX)
    b = lambert_asymptotic(1, "0.75", q, ctx=CTX)
    assert abs(d.value - a.value) <= d.err_estimate + a.err_estimate
    assert abs(d.value - b.value) <= 10 * max(d.err_estimate, b.err_estimate)


def test_router_large_x():
    r = lambert_eval(2, "2.3", "0.95", CTX)
    assert rel(r.value, oracle_lambert(2, "2.3", "0.95")) < mpf(10) ** -60


def test_divisor_gf_m1():
    a = divisor_gf_asymptotic(1, "0.5", CTX)
    with mp.workprec(300):
        q = mpf("0.5")
        ref = mp.fsum(K.divisor_sigma(1, n) * q ** n for n in range(1, 400))
    assert rel(a.value, ref) <= mpf(10) ** -6


def test_divisor_gf_m_minus1():
    a = divisor_gf_asymptotic(-1, "0.9", CTX)
    assert rel(a.value, lambert_direct(-1, 1, "0.9", CTX).value) <= mpf(10) ** -8


def test_divisor_gf_fails_near_zero():
    # documented non-goal: the q -> 1 form is wrong as q -> 0
    gaps = [rel(divisor_gf_asymptotic(1, q, CTX).value, lambert_direct(1, 1, q, CTX).value)
            for q in ("0.1", "0.01", "0.0001")]
    assert gaps[0] < gaps[1] < gaps[2]
    assert gaps[2] > mpf("0.5")


def test_divisor_gf_even_rejected():
    with pytest.raises(DomainError):
        divisor_gf_asymptotic(2, "0.5", CTX)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_case3_finite_sum(k):
    # for odd m at x = 1 the optimal k-sum terminates on exact zeros
    m = 2 * k - 1
    a = lambert_asymptotic(-m, 1, "0.8", ctx=CTX)
    b = divisor_gf_asymptotic(-m, "0.8", CTX)
    assert rel(a.value, b.value) < mpf(10) ** -70


def test_eisenstein_q_to_zero():
    assert abs(eisenstein_direct(2, mpf("1e-40"), CTX).value - 1) < mpf(10) ** -35


@pytest.mark.parametrize("k,scale", [(1, -24), (2, 240), (3, -504)])
def test_eisenstein_coefficients(k, scale):
    with mp.workprec(300):
        q = mpf("0.1")
        ref = 1 + scale * mp.fsum(K.divisor_sigma(2 * k - 1, n) * q ** n for n in range(1, 200))
    assert rel(eisenstein_direct(k, "0.1", CTX).value, ref) < mpf(10) ** -30


def test_e8_is_e4_squared():
    e4 = eisenstein_direct(2, "0.3", CTX).value
    e8 = eisenstein_direct(4, "0.3", CTX).value
    with mp.workprec(300):
        assert abs(e8 / e4 ** 2 - 1) < mpf(10) ** -25


def test_e4e6_over_e10():
    e4, e6, e10 = (eisenstein_direct(k, "0.3", CTX).value for k in (2, 3, 5))
    with mp.workprec(300):
        assert abs(e4 * e6 / e10 - 1) < mpf(10) ** -60


def test_modified_eisenstein():
    assert eisenstein_modified(2, "0.37", CTX).value == eisenstein_direct(2, "0.37", CTX).value
    with mp.workprec(300):
        shift = 12 / mp.log(mpf("0.5"))
        diff = eisenstein_modified(1, "0.5", CTX).value - eisenstein_direct(1, "0.5", CTX).value
        assert abs(diff - shift) < mpf(10) ** -70
    e2 = eisenstein_modified(1, mpf("1e-20"), CTX).value
    assert e2 < 1 and e2 > mpf("0.7")


def test_eisenstein_asymptotic_values():
    with mp.workprec(300):
        lq = mp.log(mpf("0.3"))
        assert rel(eisenstein_asymptotic(2, "0.3", CTX).value, (2 * mp.pi / lq) ** 4) < mpf(10) ** -70
        assert eisenstein_asymptotic(1, "0.3", CTX).value < 0
        assert eisenstein_asymptotic(2, "0.3", CTX).value > 0
    assert eisenstein_asymptotic(1, "0.5", CTX).err_estimate == 0


def test_eisenstein_remark_values():
    assert rel(eisenstein_asymptotic(1, "0.5", CTX).value,
               eisenstein_modified(1, "0.5", CTX).value) <= mpf(10) ** -15
    assert rel(eisenstein_asymptotic(3, "0.1", CTX).value,
               eisenstein_modified(3, "0.1", CTX).value) <= mpf(10) ** -4


def test_product_laws_at_half():
    e = {k: eisenstein_modified(k, "0.5", CTX).value for k in (1, 2, 3, 5)}
    with mp.workprec(300):
        assert abs(e[2] * e[3] / e[5] - 1) <= mpf(10) ** -12
        for k in (2, 3):
            assert abs(e[1] ** k / e[k] - 1) <= mpf(10) ** -12


@pytest.mark.parametrize("s", [1, 2, 3])
def test_knopp_leading_term(s):
    ctx = make_context(128)
    ratios = []
    for q in ("0.9", "0.99", "0.999"):
        v = lambert_eval(s, 1, q, ctx).value
        with mp.workprec(200):
            qq = mpf(q)
            ratios.append(v * (1 - qq) ** (1 + s) / (mp.gamma(1 + s) * mp.zeta(1 + s)))
    gaps = [abs(r - 1) for r in ratios]
    assert gaps[0] > gaps[1] > gaps[2]
    # the ratio is 1 - O(log(1/q)); the first-order coefficient is at least
    # (1+s)/2, so at q=0.999 the gap sits near 1.3e-3..2e-3 rather than below 1e-3
    t = -mp.log(mpf("0.999"))
    assert gaps[2] <= 2 * (1 + s) * t
