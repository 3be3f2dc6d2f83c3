"""Command line: ``qlambert {eval,table,verify,bench}``.

Exit codes: 0 success, 1 verification failure, 2 domain error,
3 convergence failure.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import operator
import sys
import time
from dataclasses import asdict, dataclass, field, fields

from mpmath import mp, mpf

from . import lambert, qgamma, qpochhammer, suites, tables, theta
from .context import (ConvergenceError, DomainError, EvalResult, InternalConsistencyError,
                      PrecisionContext, QLambertError, bits_for_digits, make_context)
from .truncation import TruncationPolicy

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3

FUNCTIONS = ("lambert", "pochhammer", "euler", "qgamma", "qdigamma", "qpolygamma",
             "eisenstein", "theta", "theta_logderiv", "divisor_gf")
METHODS = ("direct", "asym", "auto", "closed")

# parameters each function needs, and the methods it accepts
_NEEDS = {
    "lambert": ({"s", "x"}, {"direct", "asym", "auto"}),
    "pochhammer": (set(), {"direct", "asym", "auto"}),
    "euler": (set(), {"direct", "closed", "asym", "auto"}),
    "qgamma": ({"x"}, {"direct", "asym", "auto", "closed"}),
    "qdigamma": ({"x"}, {"direct", "asym", "auto"}),
    "qpolygamma": ({"m", "x"}, {"direct", "asym", "auto"}),
    "eisenstein": ({"k"}, {"direct", "asym", "closed", "auto"}),
    "theta": ({"j", "z"}, {"direct", "asym", "closed", "auto"}),
    "theta_logderiv": ({"j", "z"}, {"direct", "asym", "closed", "auto"}),
    "divisor_gf": ({"m"}, {"direct", "asym", "closed", "auto"}),
}


# ---------------------------------------------------------------------------
# q expressions
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"exp": mp.exp, "log": mp.log, "sqrt": mp.sqrt}


def eval_q_expr(text: str, ctx: PrecisionContext) -> mpf:
    """Evaluate numbers, pi, e, exp, log, sqrt, + - * / ^ and unary minus at
    working precision.  Decimal literals are read from their source text."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse q expression {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return mpf(ast.get_source_segment(text.replace("^", "**"), node) or node.value)
        if isinstance(node, ast.Name) and node.id in ("pi", "e"):
            return +mp.pi if node.id == "pi" else +mp.e
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](walk(node.args[0]))
        raise DomainError(f"unsupported element in q expression {text!r}")

    with ctx.work():
        return walk(tree)


# ---------------------------------------------------------------------------
# requests and records
# ---------------------------------------------------------------------------

@dataclass
class FunctionRequest:
    fn: str
    method: str = "auto"
    digits: int | None = None
    truncation: str = "optimal"
    q: str | None = None
    q_expr: str | None = None
    s: str | None = None
    m: int | None = None
    x: str | None = None
    z: str | None = None
    a: str | None = None
    j: int | None = None
    k: int | None = None
    variant: str = "compact"
    route: str = "series"

    def validate(self):
        if self.fn not in _NEEDS:
            raise DomainError(f"unknown function {self.fn!r}")
        needs, methods = _NEEDS[self.fn]
        if self.method not in methods:
            raise DomainError(f"method {self.method!r} not available for {self.fn}")
        missing = [p for p in sorted(needs) if getattr(self, p) is None]
        if missing:
            raise DomainError(f"{self.fn} needs --{' --'.join(missing)}")
        if (self.q is None) == (self.q_expr is None):
            raise DomainError("give exactly one of --q and --q-expr")
        if self.fn == "pochhammer" and (self.a is None) == (self.x is None):
            raise DomainError("pochhammer needs exactly one of --a or --x")
        if self.fn == "pochhammer" and self.a is not None and self.method != "direct":
            raise DomainError("pochhammer with general --a has only the direct method")
        TruncationPolicy.parse(self.truncation)

    def context(self) -> PrecisionContext:
        if self.digits is None:
            return make_context()
        if self.digits < 1:
            raise DomainError("--digits must be positive")
        return make_context(bits_for_digits(self.digits))

    def echo(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class ResultRecord:
    request: dict
    value_re: str
    value_im: str
    err_estimate: str
    terms_used: int
    method: str
    digits: int
    wall_time_ns: int = field(default=0, compare=False)

    def serialize(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def parse(cls, text: str) -> "ResultRecord":
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    @classmethod
    def from_result(cls, req: FunctionRequest, res: EvalResult, digits: int,
                    wall_ns: int) -> "ResultRecord":
        v = res.value
        return cls(req.echo(), mp.nstr(mp.re(v), digits, strip_zeros=False),
                   mp.nstr(mp.im(v), digits, strip_zeros=False),
                   mp.nstr(res.err_estimate, 6), res.terms_used, res.method.value, digits,
                   wall_ns)


def _path(req: FunctionRequest, q) -> str:
    if req.method != "auto":
        return {"asym": "asym", "closed": "asym"}.get(req.method, "direct")
    return "direct" if q <= mpf("0.5") else "asym"


def evaluate(req: FunctionRequest, ctx: PrecisionContext | None = None) -> EvalResult:
    """Map a validated request to exactly one module operation."""
    req.validate()
    ctx = ctx or req.context()
    q = eval_q_expr(req.q_expr, ctx) if req.q_expr is not None else ctx.real(req.q)
    policy = TruncationPolicy.parse(req.truncation)
    fn = req.fn
    if fn == "lambert":
        s = req.s
        if req.method == "auto":
            return lambert.lambert_eval(s, req.x, q, ctx)
        if req.method == "direct":
            return lambert.lambert_direct(s, req.x, q, ctx)
        return lambert.lambert_asymptotic(s, req.x, q, policy, ctx)
    path = _path(req, q)
    if fn == "pochhammer":
        if req.a is not None:
            return qpochhammer.pochhammer_direct(req.a, q, ctx)
        if path == "direct":
            return qpochhammer.pochhammer_qx(req.x, q, ctx)
        return qpochhammer.pochhammer_asymptotic(req.x, q, policy, ctx)
    if fn == "euler":
        if path == "direct":
            return qpochhammer.pochhammer_qx(1, q, ctx)
        return qpochhammer.euler_asymptotic(q, ctx)
    if fn == "qgamma":
        if req.method == "closed":
            return qgamma.qgamma_reflection(req.x, q, ctx, sqrt=True)
        if path == "direct":
            return qgamma.qgamma_direct(req.x, q, ctx)
        return qgamma.qgamma_asymptotic(req.x, q, policy, ctx)
    if fn == "qdigamma":
        if path == "direct":
            return qgamma.qdigamma_direct(req.x, q, ctx)
        return qgamma.qdigamma_asymptotic(req.x, q, req.variant, policy, ctx)
    if fn == "qpolygamma":
        if path == "direct":
            return qgamma.qpolygamma_direct(req.m, req.x, q, ctx)
        return qgamma.qpolygamma_asymptotic(req.m, req.x, q, policy, ctx)
    if fn == "eisenstein":
        if path == "direct":
            return lambert.eisenstein_modified(req.k, q, ctx)
        return lambert.eisenstein_asymptotic(req.k, q, ctx)
    if fn == "theta":
        if path == "direct":
            return theta.theta_direct(req.j, req.z, q, ctx, req.route)
        return theta.theta_asymptotic(req.j, req.z, q, ctx)
    if fn == "theta_logderiv":
        if path == "direct":
            return theta.theta_logderiv_direct(req.j, req.z, q, ctx)
        return theta.theta_logderiv_asymptotic(req.j, req.z, q, ctx)
    # divisor_gf
    if path == "direct":
        return lambert.lambert_direct(req.m, 1, q, ctx)
    return lambert.divisor_gf_asymptotic(req.m, q, ctx)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _request_from_args(args) -> FunctionRequest:
    return FunctionRequest(fn=args.fn, method=args.method, digits=args.digits,
                           truncation=args.truncation, q=args.q, q_expr=args.q_expr, s=args.s,
                           m=args.m, x=args.x, z=args.z, a=args.a, j=args.j, k=args.k,
                           variant=args.variant, route=args.route)


def cmd_eval(args, out) -> int:
    req = _request_from_args(args)
    start = time.perf_counter_ns()
    req.validate()
    ctx = req.context()
    res = evaluate(req, ctx)
    wall = time.perf_counter_ns() - start
    digits = req.digits or ctx.digits
    out.write(ResultRecord.from_result(req, res, digits, wall).serialize() + "\n")
    return EXIT_OK


def _write_rows(rows: list[dict], columns, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    out.write(buf.getvalue())


def cmd_table(args, out) -> int:
    rows = tables.build(args.table_id)
    _write_rows([r.as_dict() for r in rows], tables.COLUMNS, args.format, out)
    return EXIT_VERIFY if any(r.note.startswith("error:") for r in rows) else EXIT_OK


def cmd_verify(args, out) -> int:
    checks = suites.run(args.suite)
    for c in checks:
        out.write(c.line() + "\n")
    failed = [c for c in checks if not c.passed]
    total = sum(c.count for c in checks)
    out.write(f"{len(checks) - len(failed)}/{len(checks)} invariants passed ({total} cases)\n")
    for c in failed:
        sys.stderr.write(f"failed invariant: {c.name}\n")
    return EXIT_VERIFY if failed else EXIT_OK


BENCH_COLUMNS = ("fn", "q", "digits", "direct_terms", "direct_ms", "asym_terms", "asym_ms",
                 "term_ratio", "note")


def bench_rows(fn: str, q_list, digits: int, params: dict) -> list[dict]:
    rows = []
    for q in q_list:
        row = {"fn": fn, "q": q, "digits": digits}
        notes = []
        for label, method in (("direct", "direct"), ("asym", "asym")):
            req = FunctionRequest(fn=fn, method=method, digits=digits, q=q, **params)
            start = time.perf_counter_ns()
            try:
                res = evaluate(req)
            except ConvergenceError:
                row[f"{label}_terms"], row[f"{label}_ms"] = "", ""
                notes.append(f"{label}: cap exceeded")
                continue
            row[f"{label}_terms"] = res.terms_used
            row[f"{label}_ms"] = f"{(time.perf_counter_ns() - start) / 1e6:.3f}"
        if row.get("direct_terms") and row.get("asym_terms"):
            row["term_ratio"] = f"{row['direct_terms'] / row['asym_terms']:.1f}"
        else:
            row["term_ratio"] = ""
        row["note"] = "; ".join(notes)
        rows.append(row)
    return rows


def cmd_bench(args, out) -> int:
    params = {k: getattr(args, k) for k in ("s", "m", "x", "z", "j", "k")
              if getattr(args, k) is not None}
    if args.fn == "lambert":
        params.setdefault("s", "1")
        params.setdefault("x", "1")
    q_list = [q.strip() for q in args.q_list.split(",") if q.strip()]
    rows = bench_rows(args.fn, q_list, args.digits, params)
    _write_rows(rows, BENCH_COLUMNS, args.format, out)
    return EXIT_OK


def _add_params(p):
    p.add_argument("--fn", choices=FUNCTIONS, default="lambert")
    p.add_argument("--s")
    p.add_argument("--m", type=int)
    p.add_argument("--x")
    p.add_argument("--z")
    p.add_argument("--a")
    p.add_argument("--j", type=int)
    p.add_argument("--k", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlambert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one function, print one JSON record")
    _add_params(p)
    p.add_argument("--q")
    p.add_argument("--q-expr", dest="q_expr")
    p.add_argument("--digits", type=int)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--truncation", default="optimal", help="'optimal' or an integer K")
    p.add_argument("--variant", choices=("compact", "expanded"), default="compact")
    p.add_argument("--route", choices=theta.ROUTES, default="series")
    p.add_argument("--out")

    p = sub.add_parser("table", help="reproduce an accuracy table")
    p.add_argument("table_id", choices=tables.TABLE_IDS)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("suite", choices=("identities", "overlap", "reflections", "all"))
    p.add_argument("--out")

    p = sub.add_parser("bench", help="direct vs asymptotic cost across q")
    _add_params(p)
    p.add_argument("--q-list", dest="q_list", default="0.2,0.5,0.9,0.99,0.999999")
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    return parser


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = open(args.out, "w", encoding="utf-8") if getattr(args, "out", None) else sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        sys.stderr.write(f"convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    except InternalConsistencyError as exc:
        sys.stderr.write(f"consistency failure: {exc}\n")
        return EXIT_VERIFY
    except QLambertError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
