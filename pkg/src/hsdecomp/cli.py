"""Command-line surface.

Every public operation is reachable from exactly one subcommand. Input is
JSON on --in or stdin; output is a report object on --out or stdout.
Commands that consume an operator accept either a bare operator object or
a previous report whose ``terms_out`` carries one, so subcommands
compose with pipes::

    hsdecomp counterexample --t 0.25 | hsdecomp pd-decompose | hsdecomp zeta-check

Exit codes: 0 success; 1 input validation failure (schema, dimensions,
constructor hypotheses) with a machine-readable error object; 2 numerical
failure (a value-dependent precondition or margin search failed). stderr
carries human-readable diagnostics only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import forms, posdecomp, superop
from .core import DEFAULT_TOL
from .exceptions import InputError, NumericalError
from .posdecomp import SignedLRSum, SignedTerm, ZetaCertificate
from .serialize import (
    canonical_digest,
    jsonify,
    matrix_to_rows,
    obj_to_operator,
    operator_to_obj,
    rows_to_matrix,
    trace_to_obj,
)
from .superop import LRSum

__all__ = ["main"]

_SUBCOMMANDS = (
    "classify",
    "apply",
    "liouville",
    "decompose-basis",
    "decompose-selfadjoint",
    "reduce",
    "adjoint",
    "one-sum",
    "two-sum",
    "pd-decompose",
    "zeta-check",
    "zeta-transform",
    "counterexample",
    "build-ip",
    "form-eval",
    "equiv",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we own the exit codes
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="hsdecomp", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", metavar="FILE", default=None)
        p.add_argument("--out", dest="outfile", metavar="FILE", default=None)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--format", choices=("json", "text"), default="json")
        if name == "counterexample":
            p.add_argument("--t", type=float, required=True)
        if name == "decompose-basis":
            p.add_argument("--variant", choices=("left", "right"), default="left")
        if name in ("zeta-check", "zeta-transform"):
            p.add_argument("--zeta", default=None, metavar="CSV")
        if name in ("one-sum", "two-sum", "pd-decompose", "zeta-check", "zeta-transform"):
            p.add_argument("--mirror", action="store_true")
    return parser


def _read_input(args) -> object:
    if args.infile:
        try:
            with open(args.infile, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.infile}: {exc}") from exc
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON input: {exc}") from exc


def _unwrap_operator_obj(obj) -> dict:
    if isinstance(obj, dict) and "terms" in obj and "dim" in obj:
        return obj
    if isinstance(obj, dict) and isinstance(obj.get("terms_out"), dict):
        return obj["terms_out"]
    raise InputError("input does not contain an operator (need dim/terms or terms_out)")


def _load_operator(args):
    op = obj_to_operator(_unwrap_operator_obj(_read_input(args)))
    return op, canonical_digest(operator_to_obj(op))


def _as_unsigned(op) -> LRSum:
    return op.as_lrsum() if isinstance(op, SignedLRSum) else op


def _as_signed(op) -> SignedLRSum:
    if isinstance(op, SignedLRSum):
        return op
    return SignedLRSum(op.dim, tuple(SignedTerm(1, t.a, t.b) for t in op.terms))


def _mirror_signed(s: SignedLRSum) -> SignedLRSum:
    return SignedLRSum(s.dim, tuple(SignedTerm(t.sign, t.b.T, t.a.T) for t in s.terms))


def _parse_zetas(text: str) -> ZetaCertificate:
    try:
        values = tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise InputError(f"--zeta must be a comma-separated list of numbers: {text!r}") from exc
    return ZetaCertificate(values)


def _report(command, digest, tolerances, *, cls=None, lambda_min=None,
            kernel_dim=None, terms_out=None, trace=None, result=None) -> dict:
    return {
        "command": command,
        "inputs_digest": digest,
        "class": cls,
        "lambda_min": jsonify(lambda_min),
        "kernel_dim": kernel_dim,
        "terms_out": terms_out,
        "trace": trace,
        "result": result,
        "tolerances": tolerances,
        "elapsed_ms": None,
    }


def _tols(args, **extra) -> dict:
    out = {"tol": args.tol}
    out.update(extra)
    return out


def _cmd_classify(args):
    op, digest = _load_operator(args)
    rep = superop.classify_superop(_as_unsigned(op), args.tol)
    return _report(
        "classify", digest, _tols(args),
        cls=rep.kind.value, lambda_min=rep.lambda_min, kernel_dim=rep.kernel_dim,
        result={"witness": jsonify(rep.witness)},
    )


def _cmd_apply(args):
    obj = _read_input(args)
    if not isinstance(obj, dict) or "sum" not in obj or "eta" not in obj:
        raise InputError("apply input must be an object with 'sum' and 'eta'")
    op = _as_unsigned(obj_to_operator(_unwrap_operator_obj(obj["sum"])))
    eta = rows_to_matrix(obj["eta"], op.dim, "eta")
    digest = canonical_digest({"sum": operator_to_obj(op), "eta": matrix_to_rows(eta)})
    out = superop.apply_superop(op, eta)
    return _report("apply", digest, _tols(args), result={"eta_out": matrix_to_rows(out)})


def _cmd_liouville(args):
    op, digest = _load_operator(args)
    m = superop.to_liouville(_as_unsigned(op))
    return _report("liouville", digest, _tols(args), result={"matrix": matrix_to_rows(m)})


def _cmd_decompose_basis(args):
    op, digest = _load_operator(args)
    m = superop.to_liouville(_as_unsigned(op))
    out = superop.from_liouville(m, args.variant)
    return _report(
        "decompose-basis", digest, _tols(args, variant=args.variant),
        terms_out=operator_to_obj(out), result={"term_count": len(out)},
    )


def _cmd_decompose_selfadjoint(args):
    op, digest = _load_operator(args)
    out = superop.selfadjoint_decompose(_as_unsigned(op), args.tol)
    return _report(
        "decompose-selfadjoint", digest, _tols(args),
        terms_out=operator_to_obj(out), result={"term_count": len(out)},
    )


def _cmd_reduce(args):
    op, digest = _load_operator(args)
    out = superop.reduce_terms(_as_unsigned(op), args.tol)
    return _report(
        "reduce", digest, _tols(args),
        terms_out=operator_to_obj(out), result={"term_count": len(out)},
    )


def _cmd_adjoint(args):
    op, digest = _load_operator(args)
    out = superop.adjoint(_as_unsigned(op))
    return _report("adjoint", digest, _tols(args), terms_out=operator_to_obj(out))


def _cmd_one_sum(args):
    op, digest = _load_operator(args)
    s = _as_unsigned(op)
    if args.mirror:
        s = superop.transpose_dual(s)
    if len(s) != 1:
        raise InputError(f"one-sum takes exactly one term, got {len(s)}")
    a_hat, b_hat, trace = posdecomp.one_sum_positive(s.terms[0].a, s.terms[0].b, args.tol)
    out = LRSum.from_pairs([(a_hat, b_hat)], s.dim)
    if args.mirror:
        out = superop.transpose_dual(out)
    return _report(
        "one-sum", digest, _tols(args, mirror=args.mirror),
        terms_out=operator_to_obj(out), trace=trace_to_obj(trace),
    )


def _cmd_two_sum(args):
    op, digest = _load_operator(args)
    s = _as_unsigned(op)
    if args.mirror:
        s = superop.transpose_dual(s)
    if len(s) != 2:
        raise InputError(f"two-sum takes exactly two terms, got {len(s)}")
    (t1, t2) = s.terms
    signed, trace = posdecomp.two_sum_pd(t1.a, t1.b, t2.a, t2.b, args.tol)
    if args.mirror:
        signed = _mirror_signed(signed)
    return _report(
        "two-sum", digest, _tols(args, mirror=args.mirror),
        terms_out=operator_to_obj(signed), trace=trace_to_obj(trace),
    )


def _cmd_pd_decompose(args):
    op, digest = _load_operator(args)
    s = _as_unsigned(op)
    if args.mirror:
        s = superop.transpose_dual(s)
    signed, trace = posdecomp.pd_decompose(s, args.tol)
    if args.mirror:
        signed = _mirror_signed(signed)
    return _report(
        "pd-decompose", digest, _tols(args, mirror=args.mirror),
        terms_out=operator_to_obj(signed), trace=trace_to_obj(trace),
    )


def _cmd_zeta_check(args):
    op, digest = _load_operator(args)
    signed = _as_signed(op)
    if args.mirror:
        signed = _mirror_signed(signed)
    searched = args.zeta is None
    if searched:
        cert = posdecomp.find_zeta_certificate(signed, args.tol)
        if cert is None:
            result = {"ok": False, "zetas": None, "b_margins": None,
                      "a_margin": None, "searched": True}
            return _report("zeta-check", digest,
                           _tols(args, mirror=args.mirror, zeta=None), result=result)
    else:
        cert = _parse_zetas(args.zeta)
    check = posdecomp.zeta_check(signed, cert, args.tol)
    result = {
        "ok": check.ok,
        "zetas": list(cert.zetas),
        "b_margins": jsonify(list(check.b_margins)),
        "a_margin": jsonify(check.a_margin),
        "searched": searched,
    }
    return _report("zeta-check", digest,
                   _tols(args, mirror=args.mirror, zeta=list(cert.zetas)), result=result)


def _cmd_zeta_transform(args):
    op, digest = _load_operator(args)
    signed = _as_signed(op)
    if args.mirror:
        signed = _mirror_signed(signed)
    if args.zeta is not None:
        cert = _parse_zetas(args.zeta)
    else:
        cert = posdecomp.find_zeta_certificate(signed, args.tol)
        if cert is None:
            raise NumericalError("no valid zeta certificate found by the search")
    out = posdecomp.zeta_transform(signed, cert, args.tol)
    if args.mirror:
        out = superop.transpose_dual(out)
    return _report(
        "zeta-transform", digest, _tols(args, mirror=args.mirror, zeta=list(cert.zetas)),
        terms_out=operator_to_obj(out), result={"zetas": list(cert.zetas)},
    )


def _cmd_counterexample(args):
    out = posdecomp.counterexample_superop(args.t)
    digest = canonical_digest({"t": float(args.t)})
    return _report(
        "counterexample", digest, _tols(args, t=float(args.t)),
        terms_out=operator_to_obj(out),
    )


def _cmd_build_ip(args):
    obj = _read_input(args)
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj or "dim" not in obj:
        raise InputError("build-ip input must be an object with 'dim', 'a' and 'b'")
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(obj["a"], list) or not isinstance(obj["b"], list):
        raise InputError("'a' and 'b' must be arrays of matrices")
    a_list = [rows_to_matrix(rows, dim, f"a[{i}]") for i, rows in enumerate(obj["a"])]
    b_list = [rows_to_matrix(rows, dim, f"b[{i}]") for i, rows in enumerate(obj["b"])]
    digest = canonical_digest({
        "dim": dim,
        "a": [matrix_to_rows(a) for a in a_list],
        "b": [matrix_to_rows(b) for b in b_list],
    })
    phi = forms.build_inner_product(a_list, b_list, args.tol)
    fc = forms.classify_form(phi, args.tol)
    return _report(
        "build-ip", digest, _tols(args),
        cls=fc.kind.value, lambda_min=fc.lambda_min,
        terms_out=operator_to_obj(phi.op),
    )


def _cmd_form_eval(args):
    obj = _read_input(args)
    if not isinstance(obj, dict) or not all(k in obj for k in ("sum", "eta", "tau")):
        raise InputError("form-eval input must be an object with 'sum', 'eta' and 'tau'")
    op = _as_unsigned(obj_to_operator(_unwrap_operator_obj(obj["sum"])))
    eta = rows_to_matrix(obj["eta"], op.dim, "eta")
    tau = rows_to_matrix(obj["tau"], op.dim, "tau")
    digest = canonical_digest({
        "sum": operator_to_obj(op),
        "eta": matrix_to_rows(eta),
        "tau": matrix_to_rows(tau),
    })
    value = forms.eval_form(forms.Form(op), eta, tau)
    return _report("form-eval", digest, _tols(args), result={"value": jsonify(value)})


def _cmd_equiv(args):
    obj = _read_input(args)
    if not isinstance(obj, dict) or "sum1" not in obj or "sum2" not in obj:
        raise InputError("equiv input must be an object with 'sum1' and 'sum2'")
    op1 = _as_unsigned(obj_to_operator(_unwrap_operator_obj(obj["sum1"])))
    op2 = _as_unsigned(obj_to_operator(_unwrap_operator_obj(obj["sum2"])))
    digest = canonical_digest({"sum1": operator_to_obj(op1), "sum2": operator_to_obj(op2)})
    res = forms.equivalence_constants(forms.Form(op1), forms.Form(op2), args.tol)
    return _report(
        "equiv", digest, _tols(args),
        result={
            "c_lo": res.c_lo,
            "c_hi": res.c_hi,
            "witness_lo": matrix_to_rows(res.witness_lo),
            "witness_hi": matrix_to_rows(res.witness_hi),
            "operator_norm_bounds": {"lo": res.loose_lo, "hi": res.loose_hi},
        },
    )


_HANDLERS = {
    "classify": _cmd_classify,
    "apply": _cmd_apply,
    "liouville": _cmd_liouville,
    "decompose-basis": _cmd_decompose_basis,
    "decompose-selfadjoint": _cmd_decompose_selfadjoint,
    "reduce": _cmd_reduce,
    "adjoint": _cmd_adjoint,
    "one-sum": _cmd_one_sum,
    "two-sum": _cmd_two_sum,
    "pd-decompose": _cmd_pd_decompose,
    "zeta-check": _cmd_zeta_check,
    "zeta-transform": _cmd_zeta_transform,
    "counterexample": _cmd_counterexample,
    "build-ip": _cmd_build_ip,
    "form-eval": _cmd_form_eval,
    "equiv": _cmd_equiv,
}


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _render_text(report: dict) -> str:
    color = _use_color()
    lines = []
    for key, value in report.items():
        if value is None and key != "elapsed_ms":
            continue
        if key == "terms_out" and isinstance(value, dict):
            lines.append(f"terms_out: {len(value['terms'])} terms (dim {value['dim']})")
        elif key == "trace" and isinstance(value, dict):
            names = ", ".join(s["name"] for s in value["steps"])
            lines.append(f"trace: {names}")
        elif key == "result" and isinstance(value, dict):
            for rk, rv in value.items():
                if isinstance(rv, list) and rv and isinstance(rv[0], list):
                    lines.append(f"result.{rk}: <matrix>")
                else:
                    lines.append(f"result.{rk}: {rv}")
        elif key == "class" and value is not None and color:
            lines.append(f"class: \x1b[1;32m{value}\x1b[0m")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _write(args, text: str) -> None:
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, report: dict) -> None:
    if getattr(args, "format", "json") == "text":
        _write(args, _render_text(report))
    else:
        _write(args, json.dumps(report, indent=2, allow_nan=False) + "\n")


def _emit_error(args, exc: Exception, command: str) -> None:
    obj = {
        "command": command,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    index = getattr(exc, "index", None)
    if index is not None:
        obj["error"]["index"] = index
    _write(args, json.dumps(obj, indent=2) + "\n")
    print(f"hsdecomp {command}: error: {exc}", file=sys.stderr)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        print(f"hsdecomp: error: {exc}", file=sys.stderr)
        return 1
    start = time.perf_counter()
    command = args.command
    try:
        report = _HANDLERS[command](args)
    except InputError as exc:
        _emit_error(args, exc, command)
        return 1
    except NumericalError as exc:
        _emit_error(args, exc, command)
        return 2
    report["elapsed_ms"] = round((time.perf_counter() - start) * 1000.0, 3)
    _emit(args, report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
