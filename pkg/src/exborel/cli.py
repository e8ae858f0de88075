"""Command-line interface: parse a presentation file, run a pipeline
stage, emit a JSON report plus a human-readable summary.

Commands: check, resolve, yoneda, ditalgebra, gamma, drozd, verify-all.
Exit codes: 0 all requested verdicts pass, 2 parse error, 3 mathematical
failure (with structured diagnostics in the report).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from exborel.linalg import PrimeField, QQ
from exborel.modules import AlgebraError, normal_basis
from exborel.quivers import ParseError, parse_input
from exborel.homological import check_system
from exborel.pipeline import make_pipeline_from_job
from exborel.ainfinity import check_stasheff, check_strict_unit
from exborel.bocs import check_interlaced
from exborel.ditmod import (
    DitPresentation, check_layer_triangular, check_pstrict, drozd_bigraph,
)
from exborel.rightalgebra import RightAlgebra
from exborel.borel import borel_report

SCHEMA_VERSION = "1"


def make_field(spec: str):
    if spec in ("q", "Q"):
        return QQ
    if spec.startswith("fp:"):
        return PrimeField(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown field spec {spec!r} (use q or fp:<prime>)")


def _fr(x):
    return str(Fraction(x))


def _verdict_failures_text(verdict):
    out = []
    for fail in verdict["failures"]:
        axiom, i, j, n = fail["axiom"], fail["i"], fail["j"], fail["n"]
        if axiom in ("ext", "ext1"):
            out.append(f"Ext^{n}(Delta_{i}, Delta_{j}) != 0 violates the "
                       f"order condition")
        elif axiom == "hom":
            out.append(f"Hom(Delta_{i}, Delta_{j}) != 0 violates i <= j")
        else:
            out.append(f"{axiom} at ({i}, {j}, n={n})")
    return out


def cmd_check(pl, report, args):
    verdict = pl.system_verdict().as_dict()
    report["system"] = verdict
    report["diagnostics"] = _verdict_failures_text(verdict)
    return verdict["homological"] and verdict["admissible"] and \
        verdict["strict"]


def cmd_resolve(pl, report, args):
    pl.hs  # built with the pipeline
    res_info = {}
    for i in pl.preorder.elements:
        res = pl.hs.resolution(i)
        res.check_exactness()
        res.check_minimal()
        from exborel.resolutions import resolution_summand_points
        res_info[str(i)] = {
            "length": res.length,
            "terms": [resolution_summand_points(res, pl.algebra, t)
                      for t in range(res.length + 1)],
        }
    bound = max(res_info[str(i)]["length"] for i in pl.preorder.elements)
    ext_table = {}
    for (i, j, n), d in pl.ext_dims_table(max(bound, 1)).items():
        ext_table[f"{i},{j},{n}"] = d
    report["resolutions"] = res_info
    report["ext_dims"] = ext_table
    return True


def cmd_yoneda(pl, report, args):
    pl.build()
    a = pl.yoneda
    ops_dump = {}
    for n, table in sorted(a.ops.items()):
        entries = []
        for tup, val in sorted(table.items(), key=str):
            entries.append({
                "args": [list(map(str, lab)) for lab in tup],
                "value": {str(k): _fr(c) for k, c in sorted(val.items(),
                                                            key=str)},
            })
        ops_dump[str(n)] = entries
    ok, witness = check_stasheff(a)
    oku, msg = check_strict_unit(a)
    report["ainfinity"] = {
        "labels": [list(map(str, lab)) for lab in a.labels],
        "ops": ops_dump,
        "arity_cap": a.arity_cap,
        "stasheff_ok": ok,
        "strict_unit_ok": oku,
    }
    if not ok:
        report["diagnostics"] = [f"Stasheff defect at arity {witness[0]}"]
    if not oku:
        report.setdefault("diagnostics", []).append(str(msg))
    return ok and oku


def cmd_ditalgebra(pl, report, args):
    pl.build()
    pres = pl.presentation
    report["presentation"] = pres.to_json_dict()
    inter = check_interlaced(pres, pl.field)
    tri = check_layer_triangular(pres, pl.field)
    pst = check_pstrict(pres)
    report["interlaced"] = {k: v for k, v in inter.items()
                            if k != "witness"}
    report["triangular"] = {"ok": tri["ok"],
                            "violations": [list(map(str, v))
                                           for v in tri["violations"]]}
    report["pstrict"] = pst
    abar = normal_basis(pres.solid_presentation(), pl.field)
    report["abar_dim"] = abar.dim
    report["ideal_generator_lengths"] = sorted(
        sorted(len(p) for _c, p in gen) for gen in pres.ideal)
    return inter["ok"] and tri["ok"] and pst["ok"]


def cmd_gamma(pl, report, args):
    pl.build()
    ra = RightAlgebra(pl.presentation, pl.field)
    rep = borel_report(ra, pl.algebra, pl.preorder,
                       ext_bound=pl.ext_bound, seed=args.seed)
    report["gamma"] = rep
    return bool(rep["ok"])


def cmd_drozd(pl, report, args):
    pres = drozd_bigraph(pl.algebra)
    report["drozd"] = pres.to_json_dict()
    pst = check_pstrict(pres)
    report["pstrict"] = pst
    report["triangular"] = {"ok": None, "reason": "not evaluated "
                            "(differential external to this construction)"}
    return pst["ok"]


COMMANDS = {
    "check": cmd_check,
    "resolve": cmd_resolve,
    "yoneda": cmd_yoneda,
    "ditalgebra": cmd_ditalgebra,
    "gamma": cmd_gamma,
    "drozd": cmd_drozd,
}


def run(command, config):
    """Run one command (or verify-all); returns (exit_code, report)."""
    args = config
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "field": args.field_obj.name,
        "seed": args.seed,
        "input": args.input,
    }
    try:
        with open(args.input) as fh:
            text = fh.read()
        job = parse_input(text)
    except (ParseError, OSError) as exc:
        report["error"] = {"kind": "parse", "message": str(exc)}
        if isinstance(exc, ParseError):
            report["error"]["line"] = exc.line
            report["error"]["col"] = exc.col
        return 2, report
    try:
        pl = make_pipeline_from_job(job, args.field_obj,
                                    arity_cap=args.arity_cap,
                                    ext_bound=args.ext_bound)
        if args.field_obj is not QQ:
            p = args.field_obj.p
            if p <= pl.algebra.dim * 8:
                report["warning"] = (f"prime {p} is small relative to the "
                                     "algebra; radical computations may "
                                     "misbehave")
        ok_all = True
        cmds = list(COMMANDS) if command == "verify-all" else [command]
        for cmd in cmds:
            ok = COMMANDS[cmd](pl, report, args)
            report.setdefault("verdicts", {})[cmd] = bool(ok)
            ok_all = ok_all and ok
    except (AlgebraError, ParseError) as exc:
        report["error"] = {"kind": "math", "message": str(exc)}
        return 3, report
    return (0 if ok_all else 3), report


def _summary(report, code):
    lines = [f"exborel {report['command']} on {report['input']} "
             f"(field {report['field']})"]
    if "error" in report:
        lines.append(f"  ERROR ({report['error']['kind']}): "
                     f"{report['error']['message']}")
    for cmd, ok in report.get("verdicts", {}).items():
        lines.append(f"  {cmd}: {'pass' if ok else 'FAIL'}")
    for diag in report.get("diagnostics", []):
        lines.append(f"  - {diag}")
    lines.append(f"  exit status {code}")
    return "\n".join(lines)


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="exborel",
        description="exact homological-system and Borel-subalgebra "
                    "computations for quivers with relations")
    ap.add_argument("command", choices=list(COMMANDS) + ["verify-all"])
    ap.add_argument("input", help="presentation file")
    ap.add_argument("--field", default="q", help="q or fp:<prime>")
    ap.add_argument("--ext-bound", type=int, default=None)
    ap.add_argument("--arity-cap", type=int, default=None)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("-o", "--output", default=None,
                    help="write the JSON report here")
    args = ap.parse_args(argv)
    try:
        args.field_obj = make_field(args.field)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, report = run(args.command, args)
    blob = json.dumps(report, sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(blob)
    else:
        sys.stdout.write(blob)
    print(_summary(report, code), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
