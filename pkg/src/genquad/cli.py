"""Command-line front end: ``genquad <command> [options]``.

Exit status is 0 on success, 1 for usage, parse and validation errors and
2 when a configured size bound is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from genquad.analyzer import (
    SEARCH_CLASSES,
    candidate_json,
    PipelineConfig,
    find_riccati_solutions,
    solve_by_quadratures,
    xi_gate,
)
from genquad.diff_poly import xi_condition
from genquad.errors import (
    CapabilityError,
    CertificationError,
    GenquadError,
    ParseError,
    PreconditionError,
    TruncationError,
)
from genquad.newton import certify_branch, expand_at_infinity, vieta_check
from genquad.numberfield import DEFAULT_EXTENSION_BOUND
from genquad.parser import ClassificationError, parse, parse_function
from genquad.riccati import D, OrderZeroReduction, reduce_order, riccati_of_homogeneous, riccati_of_linear

EXIT_OK, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2


class UsageError(GenquadError):
    pass


def _need(src, *kinds):
    if src.kind not in kinds:
        raise UsageError(f"expected {' or '.join(kinds)} equation, got a {src.kind} one")
    return src.form


def _search(text: str) -> tuple:
    classes = tuple(c.strip() for c in text.split(",") if c.strip())
    bad = [c for c in classes if c not in SEARCH_CLASSES]
    if bad or not classes:
        raise UsageError(f"--search takes a comma list from {','.join(SEARCH_CLASSES)}")
    return classes


# -- commands: each returns (json payload, text) ----------------------------------------


def cmd_riccati(args):
    L = _need(parse(args.equation, "linear"), "linear")
    R = riccati_of_linear(L)
    return {"equation": L.to_str(), "riccati": R.to_str()}, R.to_str()


def cmd_riccati_hom(args):
    H = _need(parse(args.equation, "homogeneous"), "homogeneous")
    R = riccati_of_homogeneous(H)
    return {"equation": H.to_str(), "degree": H.degree, "riccati": R.to_str()}, R.to_str()


def cmd_xi_check(args):
    H = _need(parse(args.equation, "homogeneous"), "homogeneous")
    g = xi_gate(H)
    out = {
        "equation": H.to_str(),
        "holds": g.holds,
        "witness": g.witness.to_str(),
        "weight": g.weight,
    }
    lines = [
        f"xi-condition {'holds' if g.holds else 'fails'}: top weight {g.weight}, witness {g.witness.to_str()}"
    ]
    if g.holds:
        out["riccati"] = g.riccati.to_str()
        out["shape"] = {"ok": bool(g.shape_ok), "form": g.form.to_str() if g.form else None}
        lines.append(f"riccati: {g.riccati.to_str()}")
        if g.form is not None:
            lines.append(f"shape u^n = Q: {g.form.to_str()}")
        else:
            lines.append("shape u^n = Q: not attained" + (f" ({g.note})" if g.note else ""))
    return out, "\n".join(lines)


def cmd_reduce_order(args):
    L = _need(parse(args.equation, "linear"), "linear")
    u1 = parse_function(args.u1) if args.u1 is not None else None
    red = reduce_order(L, u1)
    text = red.to_str()
    out = {"equation": L.to_str(), "u1": None if u1 is None else u1.to_str(), "reduced": text}
    out["order"] = 0 if isinstance(red, OrderZeroReduction) else red.order
    return out, text


def cmd_puiseux_expand(args):
    C = _need(parse(args.equation, "curve"), "curve")
    branches = expand_at_infinity(C, terms=args.terms, bound=args.bound)
    items, lines = [], []
    if C.note:
        lines.append(f"note: {C.note}")
    for b in branches:
        cert = certify_branch(C, b)
        item = b.to_json()
        item["certificate"] = {
            "residual_valuation": None if cert.residual_valuation is None else str(cert.residual_valuation),
            "bound": None if cert.bound is None else str(cert.bound),
        }
        items.append(item)
        extra = f"  [{b.field.minpoly.to_str(b.field.name)} = 0]" if b.field is not None else ""
        mult = f"  (x{b.multiplicity} conjugates)" if b.multiplicity > 1 else ""
        lines.append(f"z = {b.series.to_str('y')}{extra}{mult}")
    v = vieta_check(C, branches)
    if not v.ok:
        raise CertificationError("product of the branches disagrees with the constant coefficient")
    out = {
        "curve": C.to_str(),
        "degree": C.degree,
        "branches": items,
        "vieta": {"ok": v.ok, "compared_terms": v.compared_terms},
    }
    if C.note:
        out["note"] = C.note
    return out, "\n".join(lines)


def cmd_analyze(args):
    src = parse(args.equation)
    config = PipelineConfig(search=_search(args.search), bound=args.bound)
    if src.kind == "linear":
        L = src.form
        report = solve_by_quadratures(L, config)
        holds, witness, _ = xi_condition(_linear_as_diffpoly(L))
        out = report.to_json()
        out["xi_condition"] = {"holds": holds, "witness": witness.to_str()}
        return out, _report_text(out)
    if src.kind == "homogeneous":
        g = xi_gate(src.form)
        R = riccati_of_homogeneous(src.form)
        cands, notes = [], []
        for cls in config.search:
            if cls == "rational2":
                notes.append("rational2 skipped: the equation is not linear")
                continue
            try:
                found = find_riccati_solutions(R, (cls,), config.bound)
            except CapabilityError as exc:
                notes.append(f"{cls}: {exc}")
                continue
            cands.extend(v for v in found if all(v != w for w in cands))
        out = {
            "equation": src.form.to_str(),
            "riccati": R.to_str(),
            "xi_condition": {"holds": g.holds, "witness": g.witness.to_str()},
            "candidates": [candidate_json(u) for u in cands],
            "status": "candidate-found" if cands else "candidate-not-found-in-search-class",
            "notes": notes,
        }
        return out, _report_text(out)
    raise UsageError(f"analyze needs a linear or homogeneous equation in y, got a {src.kind} one")


def _linear_as_diffpoly(L):
    from genquad.diff_poly import DiffPoly

    n = L.order
    P = DiffPoly()
    for k in range(n + 1):
        P = P + DiffPoly.var(n - k) * L.a(k)
    return P


def _report_text(out: dict) -> str:
    lines = [f"equation: {out['equation']}", f"riccati:  {out['riccati']}"]
    xc = out.get("xi_condition")
    if xc:
        lines.append(f"xi-condition: {'holds' if xc['holds'] else 'fails'} (witness {xc['witness']})")
    for step in out.get("chain", [])[1:]:
        lines.append(f"reduced:  {step['equation']}")
    if "chain" in out:
        chosen = [s["chosen"] for s in out["chain"] if s["chosen"] is not None]
        if chosen:
            lines.append("u-chain:  " + ", ".join(chosen) + _field_note(out["chain"]))
    else:
        lines.extend(f"note:     {n}" for n in out.get("notes", []))
        for c in out["candidates"]:
            lines.append(f"candidate: u = {c['u']}" + _field_note([{"candidates": [c]}]))
    lines.append(f"status:   {out['status']}")
    return "\n".join(lines)


def _field_note(steps) -> str:
    fields = sorted({c["field"] for s in steps for c in s["candidates"] if "field" in c})
    return "".join(f"  [{f} = 0]" for f in fields)


def cmd_dn(args):
    if args.k < 0:
        raise UsageError("dn needs k >= 0")
    P = D(args.k)
    text = P.to_str("u")
    return {"k": args.k, "D": text}, text


COMMANDS = {
    "riccati": (cmd_riccati, "generalized Riccati equation of a linear ODE"),
    "riccati-hom": (cmd_riccati_hom, "Riccati form of a homogeneous equation"),
    "xi-check": (cmd_xi_check, "weighted-degree condition and u^n = Q shape"),
    "reduce-order": (cmd_reduce_order, "reduce the order with a known y1 = exp(int u1)"),
    "puiseux-expand": (cmd_puiseux_expand, "Puiseux branches of P(y, z) = 0 at y = infinity"),
    "analyze": (cmd_analyze, "search for solutions by quadratures"),
    "dn": (cmd_dn, "the k-th polynomial of the D tower"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--terms", type=int, default=6, help="series terms (default 6)")
    common.add_argument(
        "--search", default=",".join(SEARCH_CLASSES), help="candidate classes (default: all)"
    )
    common.add_argument(
        "--bound", type=int, default=DEFAULT_EXTENSION_BOUND, help="extension-degree bound (default 12)"
    )
    common.add_argument("--out", help="also write the output to this file")
    p = argparse.ArgumentParser(prog="genquad", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        if name == "dn":
            sp.add_argument("k", type=int)
        else:
            sp.add_argument("equation")
        if name == "reduce-order":
            sp.add_argument("--u1", help="known logarithmic derivative; omit for the symbolic form")
    return p


def _check_name(exc: Exception) -> str:
    if isinstance(exc, ParseError):
        return "syntax"
    if isinstance(exc, ClassificationError):
        return "classification"
    if isinstance(exc, PreconditionError):
        return "riccati-residual"
    if isinstance(exc, TruncationError):
        return "truncation"
    if isinstance(exc, CertificationError):
        return "certification"
    if isinstance(exc, CapabilityError):
        return "capability-bound"
    return "validation"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.terms < 1 or args.bound < 1:
        print("error [usage]: --terms and --bound must be positive", file=sys.stderr)
        return EXIT_USAGE
    handler = COMMANDS[args.command][0]
    try:
        payload, text = handler(args)
    except UsageError as exc:
        print(f"error [usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"error [{_check_name(exc)}]: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (GenquadError, ValueError) as exc:
        print(f"error [{_check_name(exc)}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rendered = json.dumps(payload, indent=2, sort_keys=True) if args.json else text
    print(rendered)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(rendered + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
