"""Batch command-line front end.

Computes the coefficient and characteristic-number tables, runs the
randomized verification suites, and prints the discrepancy ledger.  Exact
values are always primary in every output format; decimal renderings are
annotations computed to the requested number of digits and never feed any
computation.  Output is deterministic byte-for-byte for a fixed
configuration (including the seed, which is recorded in all outputs).

Exit codes: 0 success, 1 a stated identity failed verification, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import genera, torsion, wavefront
from .scalars import DomainError, LogNumber, log_of_factorial
from .serialize import annotate, frac_str, lognumber_json, lognumber_text

EXIT_OK = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE = 2


def _config_dict(args, **extra) -> dict:
    cfg = {
        "seed": args.seed,
        "beta_route": args.beta_route,
        "digits": args.digits,
        "max_n": args.max_n,
    }
    cfg.update(extra)
    return cfg


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit_csv(header: list[str], rows: list[list[str]], config_line: str) -> str:
    buf = io.StringIO()
    buf.write(f"# {config_line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _config_line(args, command: str, **extra) -> str:
    parts = [f"command={command}", f"seed={args.seed}", f"beta_route={args.beta_route}",
             f"digits={args.digits}", f"max_n={args.max_n}"]
    parts += [f"{k}={v}" for k, v in extra.items()]
    return " ".join(parts)


def _check_n(args, n: int) -> None:
    if n < 0 or n > args.max_n:
        raise DomainError(f"n must be between 0 and {args.max_n} (override with --max-n or ARR_MAX_N)")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _grr_row(n: int, k: int, beta_route: str, digits: int) -> dict:
    ch = torsion.chh1_primed(n, k)
    pf = torsion.pushforward_arch(n, k, beta_route)
    t_primed = ch - pf
    t = torsion.t_value(n, k, beta_route)
    row = {
        "n": n,
        "k": k,
        "alpha": frac_str(genera.alpha(n, k)),
        "beta": frac_str(torsion.beta(n, k, beta_route)),
        "pushforward_arch": lognumber_json(pf),
        "chh1_primed": lognumber_json(ch),
        "t_primed": lognumber_json(t_primed),
        "t": lognumber_json(t),
        "decimal": annotate(t, digits),
        "status": "N/A",
    }
    if -n <= k <= 0:
        table = torsion.t_table_value(n, k)
        residual = t - table
        row["t_table"] = lognumber_json(table)
        row["table_residual"] = lognumber_json(residual)
        row["status"] = "MATCH" if not residual else "LEDGER"
    return row


def _grr_row_text(row: dict, digits: int) -> str:
    t = row["t"]
    t_str = t["rational"] if not t["logs"] else None
    return (
        f"n={row['n']} k={row['k']:>3}  alpha={row['alpha']:>8}  beta={row['beta']:>12}  "
        f"t={row.get('_t_text')}  ({row['decimal']})  [{row['status']}]"
    )


def cmd_table(args, out) -> int:
    n = args.n
    _check_n(args, n)
    rows = []
    for k, value in torsion.t_table(n):
        rows.append({"k": k, "t": lognumber_json(value), "decimal": annotate(value, args.digits)})
    if args.format == "json":
        out.write(_emit_json({"command": "table", "config": _config_dict(args, n=n), "rows": rows}))
    elif args.format == "csv":
        out.write(_emit_csv(
            ["k", "t", "decimal"],
            [[str(r["k"]), lognumber_text(torsion.t_table_value(n, r["k"])), r["decimal"]] for r in rows],
            _config_line(args, "table", n=n),
        ))
    else:
        out.write(f"# {_config_line(args, 'table', n=n)}\n")
        out.write(f"principal characteristic numbers, dimension {n}\n")
        for k, value in torsion.t_table(n):
            out.write(f"k={k:>3}  t = {lognumber_text(value):<20} ({annotate(value, args.digits)})\n")
    return EXIT_OK


def cmd_t(args, out) -> int:
    n, k = args.n, args.k
    _check_n(args, n)
    if k < -n:
        raise DomainError(f"k must be >= -n = {-n} (dual metrics are not modeled)")
    row = _grr_row(n, k, args.beta_route, args.digits)
    if args.format == "json":
        out.write(_emit_json({"command": "t", "config": _config_dict(args, n=n, k=k), "result": row}))
    elif args.format == "csv":
        out.write(_emit_csv(
            ["n", "k", "alpha", "beta", "t", "decimal", "status"],
            [[str(n), str(k), row["alpha"], row["beta"],
              lognumber_text(torsion.t_value(n, k, args.beta_route)), row["decimal"], row["status"]]],
            _config_line(args, "t", n=n, k=k),
        ))
    else:
        t = torsion.t_value(n, k, args.beta_route)
        out.write(f"# {_config_line(args, 't', n=n, k=k)}\n")
        out.write(f"t({n},{k}) = {lognumber_text(t)}  ({row['decimal']})\n")
        out.write(f"  alpha = {row['alpha']}, beta[{args.beta_route}] = {row['beta']}\n")
        out.write(f"  t' (Riemann-Roch route) = {lognumber_text(torsion.t_primed_grr(n, k, args.beta_route))}\n")
        if "t_table" in row:
            out.write(f"  closed table = {lognumber_text(torsion.t_table_value(n, k))}  [{row['status']}]\n")
    return EXIT_OK


def cmd_alpha(args, out) -> int:
    n, k = args.n, args.k
    _check_n(args, n)
    result = {
        "alpha": frac_str(genera.alpha(n, k)),
        "alpha_literal": frac_str(genera.alpha_literal(n, k)),
        "closed_form": frac_str(genera.alpha_closed_form(n, k)),
    }
    if args.format == "json":
        out.write(_emit_json({"command": "alpha", "config": _config_dict(args, n=n, k=k), "result": result}))
    elif args.format == "csv":
        out.write(_emit_csv(["n", "k", "alpha", "alpha_literal", "closed_form"],
                            [[str(n), str(k), result["alpha"], result["alpha_literal"], result["closed_form"]]],
                            _config_line(args, "alpha", n=n, k=k)))
    else:
        out.write(f"# {_config_line(args, 'alpha', n=n, k=k)}\n")
        out.write(f"alpha({n},{k})         = {result['alpha']}   (coefficient of x^n; equals the closed form)\n")
        out.write(f"alpha_literal({n},{k}) = {result['alpha_literal']}   (coefficient of x^(n+1))\n")
        out.write(f"closed form binom(n+k,n) = {result['closed_form']}\n")
    return EXIT_OK


def cmd_beta(args, out) -> int:
    n, k = args.n, args.k
    _check_n(args, n)
    bi = genera.beta_integral(n, k)
    bg = genera.beta_genus(n, k)
    result = {
        "beta_integral": frac_str(bi),
        "beta_genus": frac_str(bg),
        "residual": frac_str(bi - bg),
    }
    if args.format == "json":
        out.write(_emit_json({"command": "beta", "config": _config_dict(args, n=n, k=k), "result": result}))
    elif args.format == "csv":
        out.write(_emit_csv(["n", "k", "beta_integral", "beta_genus", "residual"],
                            [[str(n), str(k), result["beta_integral"], result["beta_genus"], result["residual"]]],
                            _config_line(args, "beta", n=n, k=k)))
    else:
        out.write(f"# {_config_line(args, 'beta', n=n, k=k)}\n")
        out.write(f"beta_integral({n},{k}) = {result['beta_integral']}\n")
        out.write(f"beta_genus({n},{k})    = {result['beta_genus']}\n")
        out.write(f"residual (integral - genus) = {result['residual']}\n")
    return EXIT_OK


def cmd_ttilde(args, out) -> int:
    m = args.m
    if m < 0 or m > genera.DEFAULT_MAX_TTILDE:
        raise DomainError(f"m must be between 0 and {genera.DEFAULT_MAX_TTILDE}")
    table = genera.ttilde_table(m)
    values = [frac_str(v) for v in table.values]
    if args.format == "json":
        out.write(_emit_json({"command": "ttilde", "config": _config_dict(args, m=m), "values": values}))
    elif args.format == "csv":
        out.write(_emit_csv(["m", "ttilde"], [[str(i), v] for i, v in enumerate(values)],
                            _config_line(args, "ttilde", m=m)))
    else:
        out.write(f"# {_config_line(args, 'ttilde', m=m)}\n")
        for i, v in enumerate(values):
            out.write(f"Ttd_{i} = {v}\n")
    return EXIT_OK


def _parse_k_range(spec: str, n: int) -> tuple[int, int]:
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(spec)
    if lo > hi:
        raise DomainError(f"empty k range {spec!r}")
    return lo, hi


def cmd_grr(args, out) -> int:
    n = args.n
    _check_n(args, n)
    lo, hi = _parse_k_range(args.k_range, n) if args.k_range else (-n, n)
    if lo < -n:
        raise DomainError(f"k must be >= -n = {-n} (dual metrics are not modeled)")
    rows = [_grr_row(n, k, args.beta_route, args.digits) for k in range(lo, hi + 1)]
    # verification: table rows must match exactly except the documented k=0 case
    failures = [r for r in rows if r["status"] == "LEDGER" and r["k"] != 0]
    if args.format == "json":
        out.write(_emit_json({
            "command": "grr",
            "config": _config_dict(args, n=n, k_range=[lo, hi]),
            "rows": rows,
        }))
    elif args.format == "csv":
        out.write(_emit_csv(
            ["n", "k", "alpha", "beta", "t", "decimal", "status"],
            [[str(n), str(r["k"]), r["alpha"], r["beta"],
              lognumber_text(torsion.t_value(n, r["k"], args.beta_route)), r["decimal"], r["status"]]
             for r in rows],
            _config_line(args, "grr", n=n, k=f"{lo}..{hi}"),
        ))
    else:
        out.write(f"# {_config_line(args, 'grr', n=n, k=f'{lo}..{hi}')}\n")
        for r in rows:
            k = r["k"]
            t = torsion.t_value(n, k, args.beta_route)
            out.write(
                f"k={k:>3}  alpha={r['alpha']:>8}  beta={r['beta']:>12}  "
                f"t' = {lognumber_text(torsion.t_primed_grr(n, k, args.beta_route)):<28} "
                f"t = {lognumber_text(t):<28} ({r['decimal']})  [{r['status']}]\n"
            )
    if failures and args.beta_route == "genus":
        return EXIT_VERIFICATION_FAILURE
    return EXIT_OK


def _ledger_entries(digits: int) -> list[dict]:
    def res(label: str, value: LogNumber) -> dict:
        return {"label": label, "value": lognumber_json(value), "decimal": annotate(value, digits)}

    beta_rows = [
        res(f"beta_integral({n},{k}) - beta_genus({n},{k})",
            LogNumber.from_rational(genera.beta_residual(n, k)))
        for n, k in [(3, 1), (3, -1), (4, 1), (4, 2)]
    ]
    grr_rows = [
        res(f"t_grr({n},0) - t_table({n},0)", torsion.grr_k0_residual(n)) for n in (1, 2, 3, 4)
    ]
    printed, flipped = torsion.duality_residuals(2, -1)
    dual_rows = [
        res("printed sign (-1)^n at (2,-1)", printed),
        res("flipped sign (-1)^(n+1) at (2,-1)", flipped),
    ]
    p31, f31 = torsion.duality_residuals(3, -1, "genus")
    dual_rows.append(res("flipped sign on the printed table at (3,-1)", f31))
    _, f31i = torsion.duality_residuals(3, -1, "integral")
    dual_rows.append(res("flipped sign on the integral-route table at (3,-1)", f31i))
    return [
        {
            "id": "beta-two-route",
            "statement": (
                "The integral characterization of beta and its finite sum in "
                "secondary Todd numbers disagree for n >= 3, k != 0; both are "
                "computed, residuals are reported, nothing is adjudicated."
            ),
            "residuals": beta_rows,
        },
        {
            "id": "grr-k0",
            "statement": (
                "At k = 0 the Riemann-Roch route gives t(n,0) = "
                "(1/2)log n! - (1/2)(Sigma_n + Ttd_n) while the closed table "
                "states -(1/2)Sigma_n; the difference (1/2)(log n! - Ttd_n) "
                "is reported for both."
            ),
            "residuals": grr_rows,
        },
        {
            "id": "duality-sign",
            "statement": (
                "The stated duality t(n,k) = (-1)^n t(n,-k-n-1) contradicts "
                "the closed table already at (2,-1); the flipped sign "
                "(-1)^(n+1) is consistent there and holds identically on the "
                "integral-route table. Both residuals are emitted."
            ),
            "residuals": dual_rows,
        },
    ]


def cmd_ledger(args, out) -> int:
    entries = _ledger_entries(args.digits)
    if args.format == "json":
        out.write(_emit_json({"command": "ledger", "config": _config_dict(args), "entries": entries}))
    elif args.format == "csv":
        rows = []
        for e in entries:
            for r in e["residuals"]:
                rows.append([e["id"], r["label"],
                             lognumber_text(_lognumber_from_json(r["value"])), r["decimal"]])
        out.write(_emit_csv(["id", "label", "residual", "decimal"], rows, _config_line(args, "ledger")))
    else:
        out.write(f"# {_config_line(args, 'ledger')}\n")
        out.write("documented discrepancies (computed residuals, exact)\n")
        for e in entries:
            out.write(f"\n[{e['id']}]\n{e['statement']}\n")
            for r in e["residuals"]:
                out.write(f"  {r['label']} = {lognumber_text(_lognumber_from_json(r['value']))}"
                          f"  ({r['decimal']})\n")
    return EXIT_OK


def _lognumber_from_json(d: dict) -> LogNumber:
    return LogNumber.make(Fraction(d["rational"]), {int(p): Fraction(c) for p, c in d["logs"].items()})


def _law_status(report: wavefront.CheckReport) -> str:
    if not report.applicable:
        return "inapplicable"
    return "pass" if report.passed else "fail"


def cmd_wfs_check(args, out) -> int:
    instances = args.instances
    results = []
    failures: list[str] = []
    thm1_applicable = 0
    thm2_applicable = 0
    for i in range(instances):
        seed = args.seed + i
        inst = wavefront.random_instance(seed, args.dim)
        r1, r2, r3 = wavefront.run_instance(inst)
        thm1_applicable += r1.applicable
        thm2_applicable += r2.applicable
        for rep in (r1, r2, r3):
            if not rep.passed:
                failures.append(f"seed={seed} law={rep.law}: " + "; ".join(rep.witnesses))
        results.append({
            "seed": seed,
            "thm1": _law_status(r1),
            "thm2": _law_status(r2),
            "functoriality": _law_status(r3),
        })
    summary = {
        "instances": instances,
        "all_passed": not failures,
        "thm1_applicable": thm1_applicable,
        "thm2_applicable": thm2_applicable,
        "failures": failures,
    }
    if args.format == "json":
        out.write(_emit_json({
            "command": "wfs-check",
            "config": _config_dict(args, instances=instances, dim=args.dim),
            "summary": summary,
            "results": results,
        }))
    elif args.format == "csv":
        out.write(_emit_csv(
            ["seed", "thm1", "thm2", "functoriality"],
            [[str(r["seed"]), r["thm1"], r["thm2"], r["functoriality"]] for r in results],
            _config_line(args, "wfs-check", instances=instances, dim=args.dim),
        ))
    else:
        out.write(f"# {_config_line(args, 'wfs-check', instances=instances, dim=args.dim)}\n")
        out.write(f"instances: {instances}\n")
        out.write(f"pullback product law applicable/checked: {thm1_applicable}\n")
        out.write(f"pushforward projection law applicable/checked: {thm2_applicable}\n")
        for line in failures:
            out.write(f"FAIL {line}\n")
        out.write("PASS all laws hold on every instance\n" if not failures else "")
    return EXIT_OK if not failures else EXIT_VERIFICATION_FAILURE


def cmd_wfs_file(args, out) -> int:
    _, results = wavefront.load_instance_file(args.path)
    rows = []
    any_fail = False
    for label, rep in results:
        if not rep.applicable:
            status = "INAPPLICABLE"
        elif rep.passed:
            status = "PASS"
        else:
            status = "FAIL"
            any_fail = True
        rows.append({
            "label": label,
            "law": rep.law,
            "status": status,
            "note": rep.hypothesis_note,
            "witnesses": list(rep.witnesses),
        })
    if args.format == "json":
        out.write(_emit_json({
            "command": "wfs-file",
            "config": _config_dict(args, file=os.path.basename(args.path)),
            "results": rows,
        }))
    elif args.format == "csv":
        out.write(_emit_csv(["label", "law", "status", "note"],
                            [[r["label"], r["law"], r["status"], r["note"]] for r in rows],
                            _config_line(args, "wfs-file", file=os.path.basename(args.path))))
    else:
        out.write(f"# {_config_line(args, 'wfs-file', file=os.path.basename(args.path))}\n")
        for r in rows:
            out.write(f"{r['status']:<13} {r['label']} ({r['law']})")
            if r["note"]:
                out.write(f"  [{r['note']}]")
            out.write("\n")
            for w in r["witnesses"]:
                out.write(f"    witness: {w}\n")
    return EXIT_VERIFICATION_FAILURE if any_fail else EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # shared flags are legal both before and after the subcommand; the
    # suppressed copies avoid clobbering values parsed at the top level
    d = argparse.SUPPRESS if suppress else None

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=["text", "json", "csv"], default=default("text"))
    parser.add_argument("--digits", type=int, default=default(12),
                        help="decimal places for display annotations (1..1000)")
    parser.add_argument("--beta-route", choices=["genus", "integral"], default=default("genus"))
    parser.add_argument("--seed", type=int, default=default(0),
                        help="seed for randomized suites, recorded in outputs")
    parser.add_argument("--max-n", type=int,
                        default=default(int(os.environ.get("ARR_MAX_N", genera.DEFAULT_MAX_N))),
                        help="bound override for the dimension (env: ARR_MAX_N)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arr",
        description="Exact verification engine for Riemann-Roch characteristic "
                    "numbers on projective space and the set-level wave-front calculus.",
    )
    _add_common_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common],
                       help="principal characteristic numbers t(n,k), k = 0..-n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("t", parents=[common], help="one t(n,k) with both routes and flags")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_t)

    p = sub.add_parser("alpha", parents=[common],
                       help="Euler-characteristic coefficient, both indexings")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("beta", parents=[common],
                       help="correction coefficient, both routes and residual")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("ttilde", parents=[common], help="secondary Todd numbers 0..m")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_ttilde)

    p = sub.add_parser("grr", parents=[common],
                       help="per-k Riemann-Roch report for dimension n")
    p.add_argument("n", type=int)
    p.add_argument("--k", dest="k_range", default=None, metavar="A..B",
                   help="k range, e.g. -1..3 (default -n..n)")
    p.set_defaults(func=cmd_grr)

    p = sub.add_parser("wfs", help="wave-front calculus verification")
    wsub = p.add_subparsers(dest="wfs_command", required=True)
    pc = wsub.add_parser("check", parents=[common], help="randomized law suite")
    pc.add_argument("--instances", type=int, default=200)
    pc.add_argument("--dim", type=int, default=None, choices=[1, 2, 3, 4])
    pc.set_defaults(func=cmd_wfs_check)
    pf = wsub.add_parser("file", parents=[common],
                         help="run the checks requested by an instance file")
    pf.add_argument("path")
    pf.set_defaults(func=cmd_wfs_file)

    p = sub.add_parser("ledger", parents=[common],
                       help="the documented discrepancies with computed residuals")
    p.set_defaults(func=cmd_ledger)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    # glue "--k -1..1" into "--k=-1..1" so leading-dash ranges parse
    merged: list[str] = []
    i = 0
    while i < len(raw):
        if raw[i] == "--k" and i + 1 < len(raw):
            merged.append(f"--k={raw[i + 1]}")
            i += 2
        else:
            merged.append(raw[i])
            i += 1
    args = parser.parse_args(merged)
    if not 1 <= args.digits <= 1000:
        parser.error("--digits must be between 1 and 1000")
    try:
        return args.func(args, sys.stdout)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
