"""Command-line entry point: ``tmfres <subcommand> ...``.

Exit status: 0 on success, 1 on a domain error (or a failed ``verify``),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import brown_gitler as bg
from . import decomposition as dc
from . import ext as ext_mod
from . import ring
from . import verify as vf
from .appendix import resolve_module
from .errors import TmfresError
from .modules import (emit_bruner, find_ses, iso_test, margolis_homology, tensor,
                      validate_module)

FORMATS = ("text", "json", "csv", "svg")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _terms(el) -> list:
    return [list(x) for x in el.sorted_terms()]


def _element_json(el) -> dict:
    return {"ring": el.ring.value, "text": ring.format_element(el), "terms": _terms(el)}


def _emit(args, text: str, payload: dict | None = None):
    if args.format == "json":
        if payload is None:
            raise TmfresError(f"{args.command} has no JSON form")
        payload = {"command": args.command, **payload}
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- subcommands


def cmd_reduce(args):
    el = ring.parse(args.expr, ring.RingId.parse(args.ring))
    _emit(args, ring.format_element(el), {"input": args.expr, "result": _element_json(el)})


def cmd_bgpoly(args):
    fn = bg.bg_poly_gloc if args.glocal else bg.bg_poly
    js = range(1, args.j + 1) if args.table else [args.j]
    rows = [(j, fn(j).value) for j in js]
    if args.table:
        text = "\n".join(f"f_{j} = {ring.format_element(v)}" for j, v in rows)
    else:
        text = ring.format_element(rows[0][1])
    _emit(args, text, {"glocal": args.glocal,
                       "rows": [{"j": j, "result": _element_json(v)} for j, v in rows]})


def cmd_powers(args):
    rows = bg.power_table(args.kmax)
    text = "\n".join(f"x^{k} = {ring.format_element(v)}" for k, v in rows)
    _emit(args, text, {"rows": [{"k": k, "result": _element_json(v)} for k, v in rows]})


def _report_payload(r: dc.DecompositionReport) -> dict:
    return {"report": r.to_json(), "text": str(r)}


def cmd_decompose(args):
    if args.bo is not None:
        r = dc.decompose_bo(args.bo, args.locality)
    else:
        r = dc.decompose_power(args.power, args.locality)
    _emit(args, str(r), _report_payload(r))


def cmd_tmfbar(args):
    series = dc.tmfbar_series(args.n, args.jmax, args.locality)
    text = "\n".join(f"w^{j}: {r}" for j, r in sorted(series.items()))
    _emit(args, text, {"n": args.n, "coefficients": [{"j": j, **_report_payload(r)}
                                                     for j, r in sorted(series.items())]})


def cmd_dual(args):
    if args.kind == "report":
        r = dc.dualize_report(dc.parse_report(args.text, args.locality))
        _emit(args, str(r), _report_payload(r))
    else:
        el = ring.dualize(ring.parse(args.text, ring.RingId.parse(args.ring)))
        _emit(args, ring.format_element(el), {"input": args.text, "result": _element_json(el)})


def _module_json(m) -> dict:
    return {"degrees": list(m.degrees), "bruner": emit_bruner(m)}


def cmd_module(args):
    mods = [resolve_module(f) for f in args.files]
    need = {"parse": 1, "validate": 1, "margolis": 1, "tensor": 2, "iso": 2, "ses": 3}[args.action]
    if args.action == "validate":
        if not mods:
            raise TmfresError("validate needs at least one module")
    elif len(mods) != need:
        raise TmfresError(f"module {args.action} takes {need} module argument(s), got {len(mods)}")
    if args.action == "parse":
        m = mods[0]
        _emit(args, emit_bruner(m), _module_json(m))
    elif args.action == "validate":
        lines, payload, bad = [], [], False
        for name, m in zip(args.files, mods):
            rep = validate_module(m)
            bad |= not rep.ok
            lines.append(f"{name}: {'valid' if rep.ok else 'INVALID'} ({m.dim} generators)")
            lines += [f"  {x}" for x in rep.lines()]
            payload.append({"module": name, "valid": rep.ok, "problems": rep.lines()})
        _emit(args, "\n".join(lines), {"results": payload})
        return 1 if bad else 0
    elif args.action == "tensor":
        m = tensor(mods[0], mods[1])
        _emit(args, emit_bruner(m), _module_json(m))
    elif args.action == "margolis":
        h = margolis_homology(mods[0], args.op)
        text = "\n".join(f"{d} {k}" for d, k in sorted(h.items())) or "0"
        _emit(args, text, {"op": args.op, "homology": [[d, k] for d, k in sorted(h.items())]})
    elif args.action == "iso":
        res = iso_test(mods[0], mods[1], seed=args.seed)
        text = ("isomorphic" if res.found else "not isomorphic") + \
            f" ({res.method or res.reason}; Hom dimension {res.hom_dim})"
        _emit(args, text, {"isomorphic": res.found, "method": res.method, "reason": res.reason,
                           "hom_dim": res.hom_dim})
    elif args.action == "ses":
        rep = find_ses(*mods, homology=args.homology, seed=args.seed)
        _emit(args, rep.certificate(), {"found": rep.found, "failed_degrees": rep.failed_degrees,
                                        "method": rep.method, "reason": rep.reason,
                                        "degree_table": [list(r) for r in rep.degree_table]})
    return 0


def cmd_ext(args):
    m = resolve_module(args.file)
    budget = args.budget if args.budget is not None else ext_mod.DEFAULT_CELL_BUDGET
    res = ext_mod.minimal_resolution(m, args.smax, args.tmax, budget)
    chart = ext_mod.chart_from_resolution(res)
    fmt = args.format.upper()
    if args.chart:
        out_fmt = {"svg": "SVG", "csv": "CSV"}.get(args.chart.rsplit(".", 1)[-1].lower(), "TEXT")
        with open(args.chart, "w") as fh:
            fh.write(ext_mod.chart_emit(chart, out_fmt))
    if args.dump:
        sys.stdout.write(res.dump())
    if fmt == "JSON":
        _emit(args, "", {"s_max": args.smax, "t_max": args.tmax,
                         "dims": [[s, t, d] for (s, t), d in sorted(chart.dims.items())],
                         "products": [[i, s, g, tg] for (i, s, g), tg in
                                      sorted(chart.products.items())]})
    elif not args.dump or args.format != "text":
        sys.stdout.write(ext_mod.chart_emit(chart, fmt))


def cmd_census(args):
    window = dc.Window(args.nmin, args.nmax, args.smin, args.smax)
    census = dc.census_bbt(args.n, window, args.weight_max, args.q1_shift)
    payload = {"n": args.n, "weight_max": args.weight_max,
               "dims": [[n, s, w, d] for (n, s, w), d in sorted(census.dims.items())]}
    if args.compare:
        series = dc.decomposition_series(args.n, window, args.weight_max)
        same = series == census
        payload["matches_decompositions"] = same
        text = census.to_csv() + f"# matches decompositions: {'yes' if same else 'NO'}\n"
    else:
        text = census.to_csv()
    _emit(args, text, payload)


def cmd_verify(args):
    groups = [g for g in vf.GROUPS if getattr(args, g)]
    if args.all or not groups:
        groups = list(vf.GROUPS)
    lines, payload, failed = [], [], False
    for g in groups:
        checks = vf.oracle_checks(args.tmax) if g == "oracle" else vf.GROUPS[g]()
        for c in checks:
            failed |= not c.ok
            lines.append(f"[{g}] {c.line()}")
            payload.append({"group": g, "name": c.name, "ok": c.ok, "detail": c.detail})
    _emit(args, "\n".join(lines), {"ok": not failed, "checks": payload})
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default="text")
    p = _Parser(prog="tmfres", description="Brown-Gitler splittings, A(2)-modules and Ext charts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("reduce", parents=[fmt], help="normal form of a ring expression")
    s.add_argument("expr")
    s.add_argument("--ring", default="R", help="R, Rp (g-local) or Rmody")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("bgpoly", parents=[fmt], help="Brown-Gitler polynomial f_J")
    s.add_argument("j", type=int)
    s.add_argument("--glocal", action="store_true")
    s.add_argument("--table", action="store_true", help="print f_1 .. f_J")
    s.set_defaults(func=cmd_bgpoly)

    s = sub.add_parser("powers", parents=[fmt], help="x^3 .. x^KMAX in normal form")
    s.add_argument("kmax", type=int)
    s.set_defaults(func=cmd_powers)

    s = sub.add_parser("decompose", parents=[fmt], help="summand decomposition")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--bo", type=int)
    g.add_argument("--power", type=int)
    s.add_argument("--locality", choices=("v2", "g"), default="v2")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("tmfbar", parents=[fmt], help="weight pieces of tmf-bar^(x)N")
    s.add_argument("n", type=int)
    s.add_argument("--jmax", type=int, required=True)
    s.add_argument("--locality", choices=("v2", "g"), default="v2")
    s.set_defaults(func=cmd_tmfbar)

    s = sub.add_parser("dual", parents=[fmt], help="apply the duality D")
    s.add_argument("kind", choices=("report", "element"))
    s.add_argument("text")
    s.add_argument("--ring", default="R")
    s.add_argument("--locality", choices=("v2", "g"), default="v2")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("module", parents=[fmt], help="A(2)-module operations")
    s.add_argument("action", choices=("parse", "validate", "tensor", "margolis", "ses", "iso"))
    s.add_argument("files", nargs="*", metavar="FILE",
                   help="Bruner-format file, F, E, or a standard name (F2, BO(1), A2modA1, M1, "
                        "DUAL_BO1, TMF(1)); append @k to suspend")
    s.add_argument("--op", choices=("Q0", "Q1", "Q2", "P21"), default="Q0")
    s.add_argument("--homology", action="store_true", help="read the ses triple as comodules")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_module)

    s = sub.add_parser("ext", parents=[fmt], help="Ext chart by minimal resolution")
    s.add_argument("file")
    s.add_argument("--smax", type=int, required=True)
    s.add_argument("--tmax", type=int, required=True)
    s.add_argument("--chart", metavar="OUT", help="also write the chart (.svg, .csv or text)")
    s.add_argument("--dump", action="store_true", help="print the resolution")
    s.add_argument("--budget", type=int, help="cells per (stage, degree) before BUDGET_EXCEEDED")
    s.set_defaults(func=cmd_ext)

    s = sub.add_parser("census", parents=[fmt], help="g-local Poincare-series census")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--weight-max", type=int, required=True)
    s.add_argument("--nmin", type=int, default=0)
    s.add_argument("--nmax", type=int, default=64)
    s.add_argument("--smin", type=int, default=0)
    s.add_argument("--smax", type=int, default=12)
    s.add_argument("--q1-shift", type=int, default=-3)
    s.add_argument("--compare", action="store_true", help="compare with the decompositions")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("verify", parents=[fmt], help="reproduction checks")
    for name in vf.GROUPS:
        s.add_argument(f"--{name}", action="store_true")
    s.add_argument("--all", action="store_true")
    s.add_argument("--tmax", type=int, default=12, help="window of the oracle comparison")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format in ("csv", "svg") and args.command != "ext" and \
            not (args.format == "csv" and args.command == "census"):
        parser.error(f"--format {args.format} is only available for ext" +
                     (" and census" if args.format == "csv" else ""))
    try:
        return args.func(args) or 0
    except (TmfresError, ValueError, OSError) as exc:
        sys.stderr.write(f"tmfres: error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
