"""Command-line driver.

Subcommands: symbols, roots, scan, strip, count, selftest.  Every run writes
deterministic CSV/JSON (fixed ordering, shortest round-trip floats); the exit
status is 0 exactly when all assertions in scope passed.  Figures are
rendered only when --plot is given.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import harness, parametrix
from .radialode import ContactFamily
from .rootfinder import Box, DiskProblem, find_eigenvalues, mode_cutoff

PROBLEM_SCHEMA = '{"radius": 1.0, "n1": [2.0], "n2": [1.0]}'
FAMILY_SCHEMA = ('{"base": {"radius": 1.0, "coeffs": [1.0]}, '
                 '"amplitude": 1.0, "order": 1}')


def _parse_range(text: str, flag: str):
    try:
        lo, hi = text.split(":")
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise SystemExit(f"error: {flag} expects LO:HI, got {text!r}")
    if hi <= lo:
        raise SystemExit(f"error: {flag} range is empty: {text!r}")
    return lo, hi


def _load_config(path: str, loader, schema: str, parser: argparse.ArgumentParser):
    try:
        with open(path) as fh:
            obj = json.load(fh)
        return loader(obj)
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        parser.error(f"cannot load config {path}: {exc}\nexpected schema: {schema}")


def _mmax(value: str, p: DiskProblem, lam_abs: float) -> int:
    if value == "auto":
        return mode_cutoff(p, lam_abs)
    try:
        m = int(value)
    except ValueError:
        raise SystemExit(f"error: --mmax expects 'auto' or an integer, got {value!r}")
    if m < 0:
        raise SystemExit("error: --mmax must be >= 0")
    return m


def _write_lines(path, lines):
    Path(path).write_text("\n".join(lines) + "\n")


def _write_summary(out_path, summary_path, payload: dict):
    path = summary_path or str(Path(out_path).with_suffix(".summary.json"))
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def _cmd_symbols(args, parser):
    s = args.order
    transport = parametrix.transport_table(s)
    tables = parametrix.ParametrixTables(
        transport.eikonal, transport, parametrix.dn_symbol(s, transport))
    checks = []
    for k, res in enumerate(parametrix.eikonal_residual(s + 3, tables.eikonal)):
        ok = (k == 0) or res.is_zero()
        checks.append({"label": f"eikonal residual k={k}",
                       "ok": bool(ok), "detail": res.to_text()})
    kjs = [(k, j) for j in range(s + 1) for k in range(s - j + 1)]
    for (k, j), res in zip(kjs, parametrix.transport_residual(s, transport)):
        checks.append({"label": f"transport residual k={k} j={j}",
                       "ok": res.is_zero(), "detail": res.to_text()})
    for rep in (parametrix.verify_n_dependence(s), parametrix.degree_report(s)):
        checks.extend({"label": e.label, "ok": e.ok, "detail": e.detail}
                      for e in rep.entries)
    for order in range(1, s + 1):
        try:
            val = parametrix.c_constant(order)
            checks.append({"label": f"boundary-layer constant order {order}",
                           "ok": True, "detail": str(val)})
        except parametrix.RecursionBugError as exc:
            checks.append({"label": f"boundary-layer constant order {order}",
                           "ok": False, "detail": str(exc)})
    payload = {
        "phi": {str(k): tables.eikonal.phi[k].to_text()
                for k in sorted(tables.eikonal.phi)},
        "a": {f"{k},{j}": transport[(k, j)].to_text()
              for k, j in tables.transport.entries()},
        "dn": tables.dn.to_text(),
        "checks": checks,
    }
    ok = all(c["ok"] for c in checks)
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        parts = [f"phi[{k}] = {v}" for k, v in payload["phi"].items()]
        parts += [f"a[{kj}] = {v}" for kj, v in payload["a"].items()]
        parts.append(f"dn = {payload['dn']}")
        parts += [f"[{'ok' if c['ok'] else 'FAIL'}] {c['label']}" for c in checks]
        text = "\n".join(parts) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"symbols: order {s}, {len(checks)} checks, "
          f"{'all ok' if ok else 'FAILURES'}")
    return 0 if ok else 1


def _cmd_roots(args, parser):
    p = _load_config(args.config, DiskProblem.from_json, PROBLEM_SCHEMA, parser)
    re_lo, re_hi = _parse_range(args.re, "--re")
    im_lo, im_hi = _parse_range(args.im, "--im")
    m_max = _mmax(args.mmax, p, math.hypot(re_hi, max(abs(im_lo), abs(im_hi))))
    region = Box(re_lo, re_hi, im_lo, im_hi)
    records = find_eigenvalues(p, region, m_max, jobs=args.jobs)
    _write_lines(args.out, harness.records_to_csv_lines(records))
    _write_summary(args.out, args.summary, harness.summary_dict(
        n_eigenvalues=len(records)))
    if args.plot:
        from . import plots
        plots.eigenvalue_map(records, str(Path(args.out).with_suffix(".png")),
                             title="eigenvalues")
    print(f"roots: {len(records)} records, m <= {m_max}, "
          f"{len(records.unresolved)} unresolved boxes -> {args.out}")
    return 0 if not records.partial else 1


def _cmd_scan(args, parser):
    fam = _load_config(args.family, ContactFamily.from_json, FAMILY_SCHEMA, parser)
    res = harness.scan_free_region(fam, re_max=args.re_max, im_max=args.im_max,
                                   m_max=None if args.mmax == "auto" else int(args.mmax),
                                   jobs=args.jobs)
    _write_lines(args.out, harness.records_to_csv_lines(res.records))
    p = DiskProblem(fam.base.radius, fam.perturbed(), fam.base)
    _write_summary(args.out, args.summary, harness.summary_dict(
        kappa=res.kappa, exponent=res.exponent, calibrated_c=res.calibrated_c,
        n_eigenvalues=len(res.records), n_violations=len(res.violations),
        growth_witness=res.growth_witness, tau=harness.weyl_constant(p)))
    if args.plot:
        from . import plots
        plots.eigenvalue_map(res.records, str(Path(args.out).with_suffix(".png")),
                             curve=(res.calibrated_c, res.exponent),
                             title=f"contact order {fam.order} scan")
    print(f"scan: {len(res.records)} records, kappa={res.kappa:.6g}, "
          f"calibratedC={res.calibrated_c:.6g}, {len(res.violations)} violations")
    return 0 if (res.ok and not res.partial) else 1


def _cmd_strip(args, parser):
    p = _load_config(args.config, DiskProblem.from_json, PROBLEM_SCHEMA, parser)
    cal = _parse_range(args.cal, "--cal")
    chk = _parse_range(args.check, "--check")
    rep = harness.strip_check(p, re_window=chk, cal_window=cal,
                              im_max=args.im_max, jobs=args.jobs)
    everything = list(rep.cal_records) + list(rep.violations)
    _write_lines(args.out, harness.records_to_csv_lines(everything))
    _write_summary(args.out, args.summary, harness.summary_dict(
        calibrated_c=rep.c_value, n_eigenvalues=len(everything),
        n_violations=len(rep.violations)))
    if args.plot:
        from . import plots
        plots.eigenvalue_map(everything, str(Path(args.out).with_suffix(".png")),
                             strip=rep.c_value, title="strip check")
    print(f"strip: C={rep.c_value:.6g}, {len(rep.violations)} violations in "
          f"Re in {rep.re_window}")
    return 0 if (rep.ok and not rep.partial) else 1


def _cmd_count(args, parser):
    p = _load_config(args.config, DiskProblem.from_json, PROBLEM_SCHEMA, parser)
    res = harness.weyl_count(p, c0=args.c0, r_max=args.r_max,
                             im_max=args.im_max,
                             m_max=None if args.mmax == "auto" else int(args.mmax),
                             jobs=args.jobs)
    _write_lines(args.out, harness.records_to_csv_lines(res.records))
    stair_path = str(Path(args.out).with_suffix(".staircase.csv"))
    _write_lines(stair_path, ["r,count"] +
                 [f"{r!r},{n}" for r, n in res.staircase])
    _write_summary(args.out, args.summary, harness.summary_dict(
        n_eigenvalues=res.total, tau=res.tau,
        rel_err_at_rmax=res.rel_err_at_rmax))
    if args.plot:
        from . import plots
        plots.staircase_plot(res.staircase, res.tau,
                             str(Path(args.out).with_suffix(".png")),
                             title="eigenvalue counting")
    print(f"count: N({args.r_max}) = {res.total}, tau = {res.tau:.6g}, "
          f"relErrAtRmax = {res.rel_err_at_rmax:.4f}"
          + (" [PARTIAL]" if res.partial else ""))
    return 0 if not res.partial else 1


def _cmd_selftest(args, parser):
    failures = 0

    def report(name, ok):
        nonlocal failures
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1

    from . import bessel, exactarith, radialode
    import numpy as np

    # exact arithmetic: ring identities on a fixed expression
    z, h = exactarith.SymbolExpr.generator(exactarith.g_z()), \
        exactarith.SymbolExpr.generator(exactarith.g_h())
    rho = exactarith.SymbolExpr.rho()
    expr = (z + rho) * (z - rho)
    report("exactarith difference of squares",
           expr == z * z - rho * rho)
    q = exactarith.divide_by_rho_monomial(rho * rho * z, 1, 1)
    report("exactarith rho-division round trip", q * rho == rho * rho * z)
    report("exactarith derivative", (z * z * h).diff(exactarith.g_z()) ==
           exactarith.ring_ops(z, h, "mul").scale(exactarith.GaussianRational(2)))

    # symbol tables at low order: residuals and structure checks
    rep = parametrix.verify_n_dependence(2)
    report("symbol-table index dependence", rep.ok)
    rep = parametrix.degree_report(2)
    report("symbol-table Laurent orders", rep.ok)
    ok = all(r.is_zero() for r in parametrix.transport_residual(2))
    report("transport residuals vanish", ok)

    # special functions: three-term recurrence at mixed arguments
    ok = True
    for m in (1, 5, 17):
        for x in (0.7, 9.0 + 0.5j, 30.0 - 2.0j):
            jm1 = bessel.bessel_j_pair(m - 1, x).value
            jm = bessel.bessel_j_pair(m, x).value
            jp1 = bessel.bessel_j_pair(m + 1, x).value
            scale = max(abs(jm1), abs(jm), abs(jp1))
            ok = ok and abs(jm1 + jp1 - 2.0 * m / x * jm) <= 1e-10 * scale
    report("bessel recurrence", ok)

    # radial solver vs closed form on the unit disk with n = 1
    prof = radialode.RadialProfile(1.0, (1.0,))
    ok = True
    for m, lam in ((0, 2.0 + 0.0j), (3, 7.0 + 1.0j), (11, 24.0 - 2.0j)):
        sol = radialode.regular_solution(prof, m, lam)
        ref = bessel.bessel_j_pair(m, lam)
        num = np.array([sol.u, sol.du])
        den = np.array([ref.value, lam * ref.derivative])
        num /= np.linalg.norm(num)
        den /= np.linalg.norm(den)
        if abs(np.vdot(den, num)) < 1.0 - 1e-9:
            ok = False
    report("radial solver vs closed form", ok)

    lo = radialode.regular_solution(prof, 2, 30.0 + 6.0j, threshold=1e50)
    hi = radialode.regular_solution(prof, 2, 30.0 + 6.0j, threshold=1e100)
    a = np.array([lo.u, lo.du])
    b = np.array([hi.u, hi.du])
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    report("rescaling threshold invariance", abs(np.vdot(a, b)) > 1.0 - 1e-12)

    print(f"selftest: {'all ok' if failures == 0 else f'{failures} failures'}")
    return 0 if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transeig",
        description="Transmission-eigenvalue experiments on radially "
                    "layered disks.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("symbols", help="exact boundary-symbol tables and checks")
    sp.add_argument("--order", type=int, default=3, choices=range(1, 7))
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_symbols)

    def common(sp, family=False):
        sp.add_argument("--family" if family else "--config", required=True)
        sp.add_argument("--mmax", default="auto")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--out", required=True)
        sp.add_argument("--summary", default=None)
        sp.add_argument("--plot", action="store_true")

    sp = sub.add_parser("roots", help="enumerate eigenvalues in a rectangle")
    common(sp)
    sp.add_argument("--re", default="0.5:60")
    sp.add_argument("--im", default="-12:12")
    sp.set_defaults(func=_cmd_roots)

    sp = sub.add_parser("scan", help="parabolic free-region scan for a contact family")
    common(sp, family=True)
    sp.add_argument("--re-max", type=float, default=80.0)
    sp.add_argument("--im-max", type=float, default=12.0)
    sp.set_defaults(func=_cmd_scan)

    sp = sub.add_parser("strip", help="horizontal-strip check (contact order 0)")
    common(sp)
    sp.add_argument("--cal", default="5:20")
    sp.add_argument("--check", default="20:60")
    sp.add_argument("--im-max", type=float, default=8.0)
    sp.set_defaults(func=_cmd_strip)

    sp = sub.add_parser("count", help="Weyl counting staircase")
    common(sp)
    sp.add_argument("--c0", type=float, default=0.5)
    sp.add_argument("--r-max", type=float, default=40.0)
    sp.add_argument("--im-max", type=float, default=8.0)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("selftest", help="fast invariant suite over all layers")
    sp.set_defaults(func=_cmd_selftest)
    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ValueError, harness.CalibrationError) as exc:
        # Semantic input problems (window floors, contact-order mismatches,
        # empty calibration windows) get the same exit-2 treatment as a
        # malformed config; engine-side errors still surface as tracebacks.
        parser.error(str(exc))


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
