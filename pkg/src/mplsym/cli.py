"""Thin command-line client for the symbol service.

Every verb builds the same request models the HTTP API uses and either calls
the in-process handlers or, with --server, posts to a running instance.
Exit codes: 0 success, 1 verification failure, 2 parse/precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys

from fastapi import HTTPException

from . import service


def _load_alphabet(args) -> list[str]:
    if getattr(args, "alphabet", None):
        with open(args.alphabet) as fh:
            return json.load(fh)
    return ["2", "x", "1-x", "1+x"]


def _call(args, method: str, path: str, payload=None, params=None):
    """Dispatch to a remote server or the in-process handlers."""
    if args.server:
        import httpx

        url = args.server.rstrip("/") + path
        if method == "GET":
            r = httpx.get(url, params=params, timeout=600.0)
        else:
            r = httpx.post(url, json=payload, timeout=600.0)
        if r.status_code >= 400:
            detail = r.json().get("detail", r.text) if r.headers.get("content-type", "").startswith("application/json") else r.text
            raise HTTPException(status_code=r.status_code, detail=detail)
        return r.json()
    handler, model = _LOCAL[(method, path.split("/")[1])]
    if method == "GET":
        return handler(**(params or {})).model_dump()
    return handler(model(**payload)).model_dump()


_LOCAL = {
    ("POST", "symbol"): (service.symbol_endpoint, service.SymbolRequest),
    ("POST", "integrate"): (service.integrate_endpoint, service.IntegrateRequest),
    ("POST", "check-identity"): (service.check_identity_endpoint, service.CheckIdentityRequest),
    ("POST", "hpl-reduce"): (service.hpl_reduce_endpoint, service.HplReduceRequest),
    ("POST", "cmzv-symbol"): (service.cmzv_endpoint, service.CmzvRequest),
    ("POST", "eval"): (service.eval_endpoint, service.EvalRequest),
}


def _emit(args, doc: dict, text_lines):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        for line in text_lines(doc):
            print(line)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mplsym", description=__doc__)
    parser.add_argument("--server", help="URL of a running service; default runs in process")
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--precision", type=int, default=40, help="working digits")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("symbol", help="symbol of an expression")
    p.add_argument("expression")
    p.add_argument("--alphabet", help="JSON file with a list of letters")
    p.add_argument("--variables", default="x", help="comma-separated session variables")

    p = sub.add_parser("integrate", help="integrate a symbol back to a function")
    p.add_argument("expression", help="expression whose symbol to integrate (or @file.json of a symbol)")
    p.add_argument("--alphabet")
    p.add_argument("--variables", default="x")
    p.add_argument("--basis", default="hpl", choices=["hpl", "hpl-restricted", "generic"])
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--fix-against", help="target expression for constant fixing")

    p = sub.add_parser("check-identity", help="compare two expressions")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--alphabet")
    p.add_argument("--variables", default="x")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--points", default="1/4,1/3,1/2")

    p = sub.add_parser("hpl-reduce", help="reduce H(a1,...,an;x) over the spanning set")
    p.add_argument("index", help="comma-separated entries from {-1,0,1}, e.g. 0,0,1,1")
    p.add_argument("--points", default="1/4,1/3,1/2")

    p = sub.add_parser("enumerate-dissections", help="count maximal dissections of an n-gon")
    p.add_argument("n_sides", type=int)
    p.add_argument("--arrows", action="store_true", help="include arrow lists")

    p = sub.add_parser("table2", help="arguments R with 1-R in the multiplicative span")
    p.add_argument("--bound", type=int, default=4)
    p.add_argument("--const-bound", type=int, default=2)

    p = sub.add_parser("cmzv-symbol", help="symbol of a colored multiple zeta value")
    p.add_argument("m", help="comma-separated positive indices")
    p.add_argument("s", help="comma-separated signs, e.g. '-- -1,1' (the -- guards the leading minus)")

    p = sub.add_parser("eval", help="evaluate an expression at rational x")
    p.add_argument("expression")
    p.add_argument("x")
    p.add_argument("--variables", default="x")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    try:
        return _run(args)
    except HTTPException as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _run(args) -> int:
    verb = args.verb
    if verb == "serve":
        import uvicorn

        uvicorn.run(service.app, host=args.host, port=args.port)
        return 0

    if verb == "symbol":
        doc = _call(args, "POST", "/symbol", {
            "expression": args.expression,
            "alphabet": _load_alphabet(args),
            "variables": args.variables.split(","),
        })
        _emit(args, doc, lambda d: [
            f"weight {d['symbol']['weight']}, {len(d['symbol']['terms'])} terms over {d['symbol']['alphabet']}",
            d["pretty"],
            "integrability: " + ("vacuous" if d["vacuously_integrable"] else ("ok" if d["integrable"] else "FAIL")),
        ])
        return 0

    if verb == "integrate":
        payload = {
            "alphabet": _load_alphabet(args),
            "variables": args.variables.split(","),
            "basis": args.basis,
            "bound": args.bound,
            "precision": args.precision,
            "fix_constants_against": args.fix_against,
        }
        if args.expression.startswith("@"):
            with open(args.expression[1:]) as fh:
                payload["symbol"] = json.load(fh)
        else:
            payload["expression"] = args.expression
        doc = _call(args, "POST", "/integrate", payload)

        def lines(d):
            out = [f"expression: {d['expression']}"]
            for level in d["levels"]:
                if level["coefficients"]:
                    parts = ", ".join(f"{k}: {v}" for k, v in level["coefficients"].items())
                    out.append(f"  level {tuple(level['partition'])}: {parts}")
            if d["constants"]:
                out.append("  constants: " + ", ".join(f"{k}: {v}" for k, v in d["constants"].items()))
            out.append(f"residual terms: {d['residual_terms']}")
            return out

        _emit(args, doc, lines)
        return 0

    if verb == "check-identity":
        doc = _call(args, "POST", "/check-identity", {
            "lhs": args.lhs,
            "rhs": args.rhs,
            "alphabet": _load_alphabet(args),
            "variables": args.variables.split(","),
            "numeric": args.numeric,
            "points": args.points.split(","),
            "precision": args.precision,
        })
        _emit(args, doc, lambda d: [
            ("equal" if d["equal"] else "NOT equal") + f" (decided at the {d['layer']} level)",
            d["detail"],
        ])
        return 0 if doc["equal"] else 1

    if verb == "hpl-reduce":
        index = [int(t) for t in args.index.split(",")]
        doc = _call(args, "POST", "/hpl-reduce", {
            "index": index,
            "precision": args.precision,
            "verify_points": args.points.split(","),
        })

        def lines(d):
            out = [f"H({','.join(map(str, d['index']))}; x) =", f"  {d['expression']}"]
            for level in d["levels"]:
                if level["coefficients"]:
                    parts = ", ".join(f"{k}: {v}" for k, v in level["coefficients"].items())
                    out.append(f"  level {tuple(level['partition'])}: {parts}")
            if d["constants"]:
                out.append("  constants: " + ", ".join(f"{k}: {v}" for k, v in d["constants"].items()))
            out.append("verification: " + ", ".join(f"x={k}: {v}" for k, v in d["verification"].items()))
            out.append("verified: " + ("yes" if d["verified"] else "NO"))
            return out

        _emit(args, doc, lines)
        return 0 if doc["verified"] else 1

    if verb == "enumerate-dissections":
        if args.server:
            doc = _call(args, "GET", f"/dissections/{args.n_sides}",
                        params={"include_arrows": args.arrows})
        else:
            doc = service.dissections_endpoint(args.n_sides, include_arrows=args.arrows).model_dump()
        _emit(args, doc, lambda d: [str(d["count"])])
        return 0

    if verb == "table2":
        if args.server:
            doc = _call(args, "GET", "/table2", params={"bound": args.bound, "const_bound": args.const_bound})
        else:
            doc = service.table2_endpoint(args.bound, args.const_bound).model_dump()
        _emit(args, doc, lambda d: [
            f"{'s':>2} {'a':>3} {'b':>3} {'g':>3} {'d':>3}  value"
        ] + [
            f"{'+' if r['sign'] > 0 else '-':>2} {r['alpha']:>3} {r['beta']:>3} {r['gamma']:>3} {r['delta']:>3}  {r['value']}"
            + ("  (constant)" if r["constant"] else "")
            for r in d["rows"]
        ])
        return 0

    if verb == "cmzv-symbol":
        doc = _call(args, "POST", "/cmzv-symbol", {
            "m": [int(t) for t in args.m.split(",")],
            "s": [int(t) for t in args.s.split(",")],
        })
        _emit(args, doc, lambda d: [json.dumps(d)])
        return 0

    if verb == "eval":
        doc = _call(args, "POST", "/eval", {
            "expression": args.expression,
            "x": args.x,
            "precision": args.precision,
            "variables": args.variables.split(","),
        })
        _emit(args, doc, lambda d: [d["value"], f"truncation order: {d['truncation_order']}"])
        return 0

    raise ValueError(f"unknown verb {verb}")


if __name__ == "__main__":
    sys.exit(main())
