"""Reproduction tables: each row pits a q -> 1 formula against a direct oracle."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from mpmath import mp, mpf

from .context import QLambertError, make_context
from .lambert import eisenstein_asymptotic, eisenstein_modified, lambert_asymptotic, lambert_direct
from .qgamma import qdigamma_direct, qgamma_direct, qgamma_reflection, reflection_residual
from .qpochhammer import pochhammer_qx, pochhammer_reflection
from .theta import theta_direct
from .truncation import TruncationPolicy

TABLE_IDS = ("abstract_constants", "eisenstein_remark", "example_3_4", "two_term_claim",
             "reflection_suite")
COLUMNS = ("table", "row", "params", "asymptotic", "oracle", "rel_error", "claimed_order",
           "passed", "note")
SHOW_DIGITS = 25
# comparisons run well above every table's evaluation precision
WORK_BITS = 640


@dataclass
class Row:
    table: str
    row: int
    params: str
    asymptotic: str = ""
    oracle: str = ""
    rel_error: str = ""
    claimed_order: str = ""
    passed: bool = False
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _num(v) -> str:
    return mp.nstr(v, SHOW_DIGITS, strip_zeros=False)


def _fill(row: Row, asym, oracle, claimed, lo, hi, note=""):
    with mp.workprec(WORK_BITS):
        rel = abs(asym / oracle - 1) if oracle != 0 else abs(asym)
    row.asymptotic, row.oracle = _num(asym), _num(oracle)
    row.rel_error = mp.nstr(rel, 6)
    row.claimed_order = mp.nstr(mpf(claimed), 3)
    row.passed = bool(lo <= rel <= hi)
    row.note = note
    return row


def _guard(row: Row, fn):
    try:
        with mp.workprec(WORK_BITS):
            return fn(row)
    except QLambertError as exc:
        row.passed = False
        row.note = f"error: {exc}"
        return row


def abstract_constants() -> list[Row]:
    ctx = make_context(512)

    def gamma_row(row):
        g = qgamma_direct("0.25", 2, ctx).value * qgamma_direct("0.75", 2, ctx).value
        with ctx.work():
            closed = mpf(2) ** (mpf(13) / 32) * mp.pi / mp.log(2)
        return _fill(row, closed, g, "1e-25", mpf("1e-26"), mpf("1e-24"),
                     "Gamma_2(1/4) Gamma_2(3/4) vs 2^(13/32) pi/log 2, 512 bits")

    def theta_row(row):
        with ctx.work():
            q = mp.exp(-1 / mp.pi)
            closed = 2 * mp.pi * mp.exp(-mp.pi ** 3 / 4)
        d = theta_direct(4, 0, q, ctx).value
        return _fill(row, closed, d, "1e-27", mpf("1e-28"), mpf("1e-26"),
                     "theta_4(0, e^(-1/pi)) vs 2 pi e^(-pi^3/4), 512 bits")

    return [_guard(Row("abstract_constants", 1, "x=1/4,3/4 q=2"), gamma_row),
            _guard(Row("abstract_constants", 2, "j=4 z=0 q=exp(-1/pi)"), theta_row)]


def eisenstein_remark() -> list[Row]:
    claimed = {"0.1": mpf("1e-5"), "0.3": mpf("1e-12"), "0.5": mpf("1e-15")}
    rows = []
    n = 0
    for q, order in claimed.items():
        for k in range(1, 6):
            n += 1

            def fill(row, k=k, q=q, order=order):
                a = eisenstein_asymptotic(k, q).value
                d = eisenstein_modified(k, q).value
                return _fill(row, a, d, order, 0, 10 * order, "closed form vs modified E_2k")

            rows.append(_guard(Row("eisenstein_remark", n, f"k={k} q={q}"), fill))
    return rows


def example_3_4() -> list[Row]:
    rows = []
    for n, (q, order) in enumerate((("0.001", "1e-5"), ("0.01", "1e-8"), ("0.1", "1e-15")), 1):
        def fill(row, q=q, order=order):
            a = pochhammer_reflection("0.25", q).value
            d = pochhammer_qx("0.25", q).value * pochhammer_qx("0.75", q).value
            o = mpf(order)
            return _fill(row, a, d, order, o / 10, o * 10, "(q^(1/4);q)(q^(3/4);q)")

        rows.append(_guard(Row("example_3_4", n, f"x=1/4 q={q}"), fill))
    return rows


def two_term_claim() -> list[Row]:
    rows = []
    for n, q in enumerate(("0.1", "0.3", "0.5", "0.7", "0.9"), 1):
        def fill(row, q=q):
            d = lambert_direct(1, 1, q).value
            two = lambert_asymptotic(1, 1, q, TruncationPolicy.fixed(0)).value
            three = lambert_asymptotic(1, 1, q, TruncationPolicy.fixed(1)).value
            note = f"with the k=1 term added: rel_error {mp.nstr(abs(three / d - 1), 3)}"
            return _fill(row, two, d, "1e-7", 0, mpf("1e-7"), note)

        rows.append(_guard(Row("two_term_claim", n, f"s=1 x=1 q={q}"), fill))
    return rows


def reflection_suite() -> list[Row]:
    specs = []

    def pair(name, params, claimed, hi, a_fn, d_fn, note=""):
        specs.append((name, params, claimed, hi, a_fn, d_fn, note))

    pair("pochhammer", "x=1/2 q=0.5", "1e-8", mpf("1e-8"),
         lambda: pochhammer_reflection("0.5", "0.5").value,
         lambda: pochhammer_qx("0.5", "0.5").value ** 2)
    pair("pochhammer", "x=1/4 q=0.9", "1e-70", mpf("1e-60"),
         lambda: pochhammer_reflection("0.25", "0.9").value,
         lambda: pochhammer_qx("0.25", "0.9").value * pochhammer_qx("0.75", "0.9").value)
    pair("qgamma", "x=1/2 q=0.9 squared", "1e-8", mpf("1e-8"),
         lambda: qgamma_reflection("0.5", "0.9").value,
         lambda: qgamma_direct("0.5", "0.9").value ** 2)
    pair("qgamma", "x=1/4 q=0.5", "1e-5", mpf("1e-4"),
         lambda: qgamma_reflection("0.25", "0.5").value,
         lambda: qgamma_direct("0.25", "0.5").value * qgamma_direct("0.75", "0.5").value)

    def digamma_pair():
        return qdigamma_direct("0.25", "0.9").value - qdigamma_direct("0.75", "0.9").value

    def digamma_closed():
        with mp.workprec(WORK_BITS):
            return -mp.pi * mp.cot(mp.pi / 4) - mp.log(mpf("0.9")) / 4

    pair("qdigamma", "x=1/4 q=0.9", "1e-8", mpf("1e-8"), digamma_closed, digamma_pair)
    rows = []
    for n, (name, params, claimed, hi, a_fn, d_fn, note) in enumerate(specs, 1):
        def fill(row, a_fn=a_fn, d_fn=d_fn, claimed=claimed, hi=hi, name=name):
            return _fill(row, a_fn(), d_fn(), claimed, 0, hi, name)

        rows.append(_guard(Row("reflection_suite", n, f"{name} {params}"), fill))
    for m, q in ((1, "0.9"), (2, "0.95")):
        n = len(rows) + 1
        x = "0.25" if m == 1 else "0.3"

        def fill(row, m=m, q=q, x=x):
            r = reflection_residual("polygamma", m, x, q)
            with mp.workprec(WORK_BITS):
                xx = mpf(x)
                scale = abs(mp.psi(m, xx)) + abs(mp.psi(m, 1 - xx))
                rel = r / scale
            row.asymptotic, row.oracle = "", ""
            row.rel_error = mp.nstr(rel, 6)
            row.claimed_order = "1e-6"
            row.passed = bool(rel <= mpf("1e-6"))
            row.note = "polygamma reflection residual, direct values"
            return row

        rows.append(_guard(Row("reflection_suite", n, f"polygamma m={m} x={x} q={q}"), fill))
    return rows


TABLES = {"abstract_constants": abstract_constants, "eisenstein_remark": eisenstein_remark,
          "example_3_4": example_3_4, "two_term_claim": two_term_claim,
          "reflection_suite": reflection_suite}


def build(table_id: str) -> list[Row]:
    if table_id not in TABLES:
        raise KeyError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    return TABLES[table_id]()
