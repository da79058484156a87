"""Command-line front door: ingestion, tables, verdicts, reports."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import mpmath

from . import golden
from .bounds import bound_report, error_bound, weight_threshold
from .lfunction import build_l_table, l_value, l_value_direct
from .lmfdb import LmfdbClient, resolve_cache_dir
from .mainterm import (PLUS, MINUS, argument_slope_sup, continuous_argument,
                       modulus_on_circle, monotone_weight_threshold, wrapped_argument)
from .manifest import RunManifest
from .newforms import generate_level_one, generate_level7_weight4, parse_newform, save_newform
from .periodpoly import build_even, build_full, build_odd, build_q
from .precision import PrecisionPolicy, to_decimal_string, workbits
from .qseries import LEVEL_ONE_WEIGHTS
from .roots import all_roots, classify
from .zeros import count_on_circle

PARITY_FLAGS = {"+": PLUS, "-": MINUS, "plus": PLUS, "minus": MINUS}


def _policy(args) -> PrecisionPolicy:
    return PrecisionPolicy(working_bits=args.bits, target_bits=max(128, args.bits // 2))


def _parity(flag: str) -> str:
    try:
        return PARITY_FLAGS[flag]
    except KeyError:
        raise SystemExit(f"unknown parity {flag!r}; use + or -")


def cmd_ingest(args) -> int:
    nf = parse_newform(args.newform)
    print(f"ok: {nf.label or '?'} level={nf.level} weight={nf.weight} "
          f"fricke={nf.fricke_sign:+d} coefficients={nf.n_coefficients} ({nf.coeff_kind})")
    return 0


def cmd_gen_level1(args) -> int:
    nf = generate_level_one(args.weight, args.coefficients)
    out = Path(args.out or f"1.{args.weight}.a.a.json")
    save_newform(nf, out)
    print(f"wrote {out}")
    return 0


def cmd_fetch(args) -> int:
    client = LmfdbClient(cache_dir=args.cache, offline=args.offline,
                         base_url=args.base_url, policy=_policy(args))
    with client:
        nf = client.fetch(args.label, embedding=args.embedding)
    print(f"fetched {nf.label}: level={nf.level} weight={nf.weight} fricke={nf.fricke_sign:+d} "
          f"-> {client.cache_path(args.label)}")
    if args.embedding:
        print(f"note: embedding index {args.embedding} of a higher-dimensional orbit")
    return 0


def cmd_lvalue(args) -> int:
    nf = parse_newform(args.newform)
    policy = _policy(args)
    if args.method == "completed":
        value, radius = l_value(nf, args.s, policy)
    else:
        value, radius = l_value_direct(nf, args.s, policy)
    digits = policy.decimal_digits
    print(to_decimal_string(value, digits))
    print(f"radius {radius:.6e}")
    return 0


def cmd_poly(args) -> int:
    nf = parse_newform(args.newform)
    policy = _policy(args)
    table = build_l_table(nf, policy)
    builders = {
        "full": build_full,
        "even": build_even,
        "odd": build_odd,
        "q+": lambda f, t, p: build_q(f, t, PLUS, p),
        "q-": lambda f, t, p: build_q(f, t, MINUS, p),
    }
    poly = builders[args.kind](nf, table, policy)
    digits = policy.decimal_digits
    doc = {
        "label": nf.label,
        "kind": poly.kind,
        "level": nf.level,
        "weight": nf.weight,
        "scale": poly.scale,
        "coefficients": [
            {"degree": d,
             "re": to_decimal_string(mpmath.re(c), digits),
             "im": to_decimal_string(mpmath.im(c), digits),
             "radius": f"{r:.6e}"}
            for d, (c, r) in enumerate(zip(poly.coefficients, poly.radii))
        ],
    }
    out = Path(args.out)
    out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return 0


def cmd_mainterm(args) -> int:
    parity = _parity(args.parity)
    policy = _policy(args)
    out = Path(args.emit_profile)
    sup = argument_slope_sup(args.level, parity, policy)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta", "argument", "radius"])
        with workbits(policy.working_bits):
            for i in range(args.grid + 1):
                th = mpmath.pi * i / args.grid
                if i in (0, args.grid) and (
                        (parity == PLUS and args.level == 16) or (parity == MINUS and args.level == 4)):
                    th = th + (mpmath.mpf(2) ** -40 if i == 0 else -mpmath.mpf(2) ** -40)
                writer.writerow([
                    to_decimal_string(th, 20),
                    to_decimal_string(continuous_argument(args.level, th, parity), 20),
                    to_decimal_string(modulus_on_circle(args.level, th, parity), 20),
                ])
    print(f"wrote {out} (slope sup in [{sup.lower:.6f}, {sup.upper:.6f}])")
    return 0


def _table_rows(which: str, levels, policy) -> list[dict]:
    rows = []
    for n in levels:
        if which == "d+":
            computed = monotone_weight_threshold(n, PLUS, policy)
            reference = golden.reference_d_plus(n)
        elif which == "d-":
            computed = monotone_weight_threshold(n, MINUS, policy)
            reference = golden.reference_d_minus(n)
        elif which == "k+":
            computed = weight_threshold(n, PLUS, policy)
            reference = golden.reference_k_plus(n)
        else:
            computed = weight_threshold(n, MINUS, policy)
            reference = golden.reference_k_minus(n)
        rows.append({
            "N": n,
            "computed": "none" if computed is None else computed,
            "reference": "none" if reference is None else reference,
            "match": computed == reference,
        })
    return rows


def _write_table_csv(path, rows) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["N", "computed", "reference", "match"])
        writer.writeheader()
        writer.writerows(rows)


def _parse_range(spec: str) -> list[int]:
    out = []
    for chunk in spec.split(","):
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return out


def cmd_tables(args) -> int:
    policy = _policy(args)
    start = {"d+": 1, "k+": 1}.get(args.which, 2)
    levels = _parse_range(args.range) if args.range else list(range(start, 31))
    levels = [n for n in levels if n >= start]
    rows = _table_rows(args.which, levels, policy)
    _write_table_csv(args.out, rows)
    bad = [r for r in rows if not r["match"]]
    print(f"wrote {args.out}; {len(bad)} mismatches")
    return 1 if bad else 0


def cmd_locate(args) -> int:
    nf = parse_newform(args.newform)
    parity = _parity(args.parity)
    policy = _policy(args)
    verdict = count_on_circle(nf, parity, policy, route=args.route)
    doc = verdict_to_doc(verdict)
    out = Path(args.report)
    out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out}: on_circle={verdict.on_circle_count} of {verdict.degree}, "
          f"certified={verdict.certified}")
    return 0


def verdict_to_doc(verdict) -> dict:
    return {
        "label": verdict.label,
        "level": verdict.level,
        "weight": verdict.weight,
        "fricke_sign": verdict.fricke_sign,
        "parity": verdict.parity,
        "degree": verdict.degree,
        "on_circle_count": verdict.on_circle_count,
        "exceptional_upper_bound": verdict.exceptional_upper_bound,
        "endpoint_multiplicities": list(verdict.endpoint_multiplicities),
        "certified": verdict.certified,
        "route": verdict.route,
        "predicted_on_circle": verdict.predicted_on_circle,
        "predicted_exceptional_max": verdict.predicted_exceptional_max,
        "notes": list(verdict.notes),
    }


def cmd_roots(args) -> int:
    doc = json.loads(Path(args.coeffs).read_text(encoding="utf-8"))
    from .periodpoly import PeriodContext, PeriodPolynomial
    policy = _policy(args)
    with workbits(policy.working_bits):
        coeffs = tuple(mpmath.mpf(c["re"]) + 1j * mpmath.mpf(c["im"]) for c in doc["coefficients"])
    radii = tuple(float(c["radius"]) for c in doc["coefficients"])
    ctx = PeriodContext(level=doc.get("level", args.level), weight=doc["weight"], fricke_sign=1)
    poly = PeriodPolynomial(kind=doc.get("kind", "full"), context=ctx,
                            coefficients=coeffs, radii=radii, label=doc.get("label"))
    rs = classify(all_roots(poly, policy), args.level or ctx.level, policy=policy)
    digits = policy.decimal_digits
    out_doc = {
        "label": rs.polynomial_label,
        "level": args.level or ctx.level,
        "degree": rs.degree,
        "roots": [
            {"re": to_decimal_string(mpmath.re(r.value), digits),
             "im": to_decimal_string(mpmath.im(r.value), digits),
             "residual": f"{r.residual:.6e}",
             "multiplicity": r.multiplicity,
             "classification": r.classification}
            for r in rs.roots
        ],
        "counts": rs.counts(),
    }
    Path(args.out).write_text(json.dumps(out_doc, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {args.out}: {rs.counts()}")
    return 0


def cmd_emit_figures(args) -> int:
    parity = _parity(args.parity)
    policy = _policy(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    raw_path = outdir / f"argument_raw_N{args.level}_{parity}.csv"
    cor_path = outdir / f"argument_corrected_N{args.level}_{parity}.csv"
    grid = args.grid
    with workbits(policy.working_bits):
        with raw_path.open("w", newline="", encoding="utf-8") as raw_fh, \
                cor_path.open("w", newline="", encoding="utf-8") as cor_fh:
            raw = csv.writer(raw_fh)
            cor = csv.writer(cor_fh)
            raw.writerow(["theta", "wrapped_argument"])
            cor.writerow(["theta", "argument", "radius"])
            for i in range(grid + 1):
                th = mpmath.pi * i / grid
                if i in (0, grid) and (
                        (parity == PLUS and args.level == 16) or (parity == MINUS and args.level == 4)):
                    th = th + (mpmath.mpf(2) ** -40 if i == 0 else -mpmath.mpf(2) ** -40)
                alpha, _ = wrapped_argument(args.level, th, parity)
                raw.writerow([to_decimal_string(th, 20), to_decimal_string(alpha, 20)])
                cor.writerow([
                    to_decimal_string(th, 20),
                    to_decimal_string(continuous_argument(args.level, th, parity), 20),
                    to_decimal_string(modulus_on_circle(args.level, th, parity), 20),
                ])
    print(f"wrote {raw_path} and {cor_path}")
    return 0


# -- verify-all -------------------------------------------------------------

def _offline_fixture_specs() -> list[tuple[str, int, int]]:
    # (kind, weight, coefficient count); coefficient counts cover the
    # 256-bit completed-series budget with headroom
    specs = [("level1", k, 400) for k in LEVEL_ONE_WEIGHTS]
    specs.append(("level7", 4, 400))
    return specs


def _build_fixture(spec):
    kind, weight, m = spec
    if kind == "level1":
        return generate_level_one(weight, m)
    return generate_level7_weight4(m)


def _fixture_verdicts(nf, policy):
    out = []
    for parity in (PLUS, MINUS):
        if parity == MINUS and nf.weight < 6:
            continue
        out.append(count_on_circle(nf, parity, policy, route="both"))
    return out


def _verdict_worker(payload):
    spec, bits = payload
    policy = PrecisionPolicy(working_bits=bits, target_bits=max(128, bits // 2))
    nf = _build_fixture(spec)
    return [verdict_to_doc(v) for v in _fixture_verdicts(nf, policy)]


def cmd_verify_all(args) -> int:
    t0 = time.time()
    policy = _policy(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest.start("verify-all", policy)
    mismatches: list[str] = []

    # 1. threshold tables against the bundled reference values
    table_specs = {
        "d+": ("tables_d_plus.csv", golden.D_PLUS_ACCEPTANCE_LEVELS),
        "d-": ("tables_d_minus.csv", golden.D_MINUS_ACCEPTANCE_LEVELS),
        "k+": ("tables_k_plus.csv", golden.K_PLUS_ACCEPTANCE_LEVELS),
        "k-": ("tables_k_minus.csv", golden.K_MINUS_ACCEPTANCE_LEVELS),
    }
    for which, (fname, levels) in table_specs.items():
        rows = _table_rows(which, levels, policy)
        _write_table_csv(outdir / fname, rows)
        for r in rows:
            if not r["match"]:
                mismatches.append(f"table {which} N={r['N']}: computed {r['computed']} "
                                  f"!= reference {r['reference']}")
        print(f"[verify-all] {which}: {len(rows)} levels, "
              f"{sum(not r['match'] for r in rows)} mismatches", file=sys.stderr)

    # 2. fixture verdicts (bundled offline corpus + any cached newform files)
    specs = _offline_fixture_specs()
    verdict_docs: list[dict] = []
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for docs in pool.map(_verdict_worker, [(s, policy.working_bits) for s in specs]):
                verdict_docs.extend(docs)
    else:
        for spec in specs:
            verdict_docs.extend(_verdict_worker((spec, policy.working_bits)))

    corpus_dir = Path(args.corpus) if args.corpus else resolve_cache_dir(args.cache)
    skipped = []
    if corpus_dir.is_dir():
        for path in sorted(corpus_dir.glob("*.json")):
            try:
                nf = parse_newform(path)
            except Exception as exc:
                mismatches.append(f"corpus file {path.name}: {exc}")
                continue
            manifest.add_input_file(path)
            for v in _fixture_verdicts(nf, policy):
                verdict_docs.append(verdict_to_doc(v))
    else:
        skipped.append(f"no corpus directory {corpus_dir}; remote fixtures skipped")

    verdict_docs.sort(key=lambda d: (d["label"] or "", d["parity"]))
    with (outdir / "verdicts.jsonl").open("w", encoding="utf-8") as fh:
        for doc in verdict_docs:
            fh.write(json.dumps(doc, sort_keys=True) + "\n")

    # 3. verdict-level expectations
    for doc in verdict_docs:
        pred = doc["predicted_on_circle"]
        if pred is not None and doc["certified"] and doc["on_circle_count"] < pred:
            mismatches.append(f"{doc['label']} {doc['parity']}: certified count "
                              f"{doc['on_circle_count']} below guaranteed {pred}")

    (outdir / "mismatches.txt").write_text(
        "".join(line + "\n" for line in mismatches), encoding="utf-8")
    manifest.summary = {
        "tables": {k: len(v[1]) for k, v in table_specs.items()},
        "verdicts": len(verdict_docs),
        "mismatches": len(mismatches),
        "skipped": skipped,
    }
    manifest.write(outdir / "manifest.json")
    for s in skipped:
        print(f"[verify-all] warning: {s}", file=sys.stderr)
    print(f"[verify-all] {len(verdict_docs)} verdicts, {len(mismatches)} mismatches "
          f"({time.time() - t0:.1f}s)", file=sys.stderr)
    print(f"wrote {outdir}/tables_*.csv, verdicts.jsonl, mismatches.txt, manifest.json")
    return 1 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="period-lens",
        description="Period polynomials of newforms: L-values, thresholds, and "
                    "certified counts of zeros on the circle of symmetry.",
    )
    parser.add_argument("--bits", type=int, default=256, help="working precision in bits")
    parser.add_argument("--cache", default=None, help="newform cache directory")
    parser.add_argument("--jobs", type=int, default=os.cpu_count(), help="parallel workers")
    parser.add_argument("--offline", action="store_true", help="never touch the network")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a newform file")
    p.add_argument("newform")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("gen-level1", help="write a level-1 eigenform file")
    p.add_argument("--weight", type=int, required=True, choices=LEVEL_ONE_WEIGHTS)
    p.add_argument("--coefficients", type=int, default=400)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_level1)

    p = sub.add_parser("fetch", help="fetch a newform by label (cached)")
    p.add_argument("label")
    p.add_argument("--embedding", type=int, default=0,
                   help="embedding index for higher-dimensional orbits (default first)")
    p.add_argument("--base-url", default="https://www.lmfdb.org")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("lvalue", help="print one critical L-value")
    p.add_argument("newform")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--method", choices=["completed", "direct"], default="completed")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("poly", help="write period-polynomial coefficients")
    p.add_argument("newform")
    p.add_argument("--kind", choices=["full", "even", "odd", "q+", "q-"], required=True)
    p.add_argument("--out", default="coeffs.json")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("mainterm", help="sample the argument/radius profile")
    p.add_argument("--N", dest="level", type=int, required=True)
    p.add_argument("--parity", required=True)
    p.add_argument("--emit-profile", default="profile.csv")
    p.add_argument("--grid", type=int, default=2048)
    p.set_defaults(func=cmd_mainterm)

    p = sub.add_parser("tables", help="recompute a threshold table")
    p.add_argument("--which", choices=["d+", "d-", "k+", "k-"], required=True)
    p.add_argument("--range", default=None, help="e.g. 1..60 or 2..30,145,146")
    p.add_argument("--out", default="table.csv")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("locate", help="count zeros on the circle of symmetry")
    p.add_argument("newform")
    p.add_argument("--parity", required=True)
    p.add_argument("--route", choices=["main_term", "oracle", "both"], default="both")
    p.add_argument("--report", default="verdict.json")
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("roots", help="all roots of a coefficient file")
    p.add_argument("coeffs")
    p.add_argument("--N", dest="level", type=int, default=None)
    p.add_argument("--out", default="roots.json")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify-all", help="reproduce tables and corpus verdicts")
    p.add_argument("--corpus", default=None, help="directory of cached newform files")
    p.add_argument("--out", default="reports")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("emit-figures", help="argument-function data files")
    p.add_argument("--N", dest="level", type=int, required=True)
    p.add_argument("--parity", required=True)
    p.add_argument("--out", default="figures")
    p.add_argument("--grid", type=int, default=2048)
    p.set_defaults(func=cmd_emit_figures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
