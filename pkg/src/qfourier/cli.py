"""Command-line entry point: ``qfourier <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import groups as _groups
from .algebra import MINUS, PLUS
from .biprojection import is_bishift, make_bishift_abelian
from .blockmap import LimitKind, iterate, norms_monotone, trajectory_csv
from .checks import s3_identities, structural_sweep
from .inequalities import hy_extremal_certify, inequality_sweep, rep_sumset_report
from .ising import critical_beta, phase_scan, scan_csv, BETA_C
from .sampling import random_bipositive, random_element

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
DEMO_TOL = 1e-12


class UsageError(Exception):
    pass


def _num(v):
    if isinstance(v, complex):
        return v.real if v.imag == 0 else [v.real, v.imag]
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _jsonl(rows) -> str:
    return "".join(json.dumps({k: _num(v) for k, v in r.items()}, sort_keys=False) + "\n" for r in rows)


def _csv(rows, columns=None) -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    columns = columns or list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_num(r[c]) if not isinstance(r[c], (dict, list, tuple)) else json.dumps(r[c]) for c in columns])
    return buf.getvalue()


def _pretty(rows) -> str:
    rows = list(rows)
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[str(_num(r[c])) for c in cols] for r in rows]
    width = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, width))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, width)) for row in cells]
    return "\n".join(lines) + "\n"


def _render(rows, fmt: str) -> str:
    return {"jsonl": _jsonl, "csv": _csv, "pretty": _pretty}[fmt](rows)


def _group(spec: str):
    try:
        return _groups.group_from_spec(spec)
    except (ValueError, OSError) as exc:
        raise UsageError(f"unknown group {spec!r}: {exc}") from exc


def _report_rows(reports):
    for r in reports:
        d = r.to_dict()
        d["params"] = json.dumps(d["params"], sort_keys=True)
        yield d


# ---------------------------------------------------------------- commands


def cmd_demo_s3(args):
    rows = s3_identities(coproduct_scale=args.corrupt_coproduct)
    worst = max(r["deviation"] for r in rows)
    for r in rows:
        r["verdict"] = "ok" if r["deviation"] <= DEMO_TOL else "deviation"
    text = _render(rows, args.format)
    if args.format == "pretty":
        text += f"max deviation {worst:.3e}\n"
    return text, EXIT_OK if worst <= DEMO_TOL else EXIT_VIOLATION


def cmd_verify(args):
    group = _group(args.group)
    rng = np.random.default_rng(args.seed)
    reports = structural_sweep(group, args.samples, rng)
    for k in range(args.samples):
        shading = PLUS if k % 2 == 0 else MINUS
        reports.extend(inequality_sweep(random_element(group, shading, rng), random_element(group, shading, rng)))
    bad = sum(r.verdict == "violated" for r in reports)
    if args.format == "pretty":
        counts = {}
        for r in reports:
            key = (r.check, r.verdict)
            counts[key] = counts.get(key, 0) + 1
        rows = [{"check": c, "verdict": v, "count": n} for (c, v), n in sorted(counts.items())]
        text = _render(rows, "pretty") + f"{group.name}: {len(reports)} checks, {bad} violations\n"
    else:
        text = _render(list(_report_rows(reports)), args.format)
    return text, EXIT_OK if bad == 0 else EXIT_VIOLATION


def cmd_flow(args):
    group = _group(args.group)
    if not 0 <= args.lambda_ <= 1:
        raise UsageError("--lambda must lie in [0, 1]")
    rng = np.random.default_rng(args.seed)
    rows, unresolved, first = [], 0, None
    for k in range(args.samples):
        shading = PLUS if k % 2 == 0 else MINUS
        x = random_bipositive(group, shading, rng)
        res = iterate(x, args.lambda_, args.tol, record=args.trajectory and k == 0, track_entropy=False)
        if k == 0:
            first = res
        cls = res.classification
        unresolved += cls.kind is LimitKind.UNRESOLVED
        rows.append({
            "start": k,
            "shading": shading.value,
            "iterations": res.iterations,
            "classification": cls.kind.value,
            "subgroup": " ".join(map(str, sorted(cls.witness.subgroup))) if cls.witness and cls.kind is LimitKind.BIPROJECTION_MULTIPLE else "",
            "scalar": cls.scalar,
            "residual": cls.residual,
            "monotone": norms_monotone(res),
        })
    if args.trajectory:
        text = trajectory_csv(first)
    else:
        text = _render(rows, args.format)
        if args.format == "pretty":
            text += f"{group.name}: {len(rows)} trajectories, {unresolved} unresolved\n"
    return text, EXIT_OK if unresolved == 0 else EXIT_VIOLATION


def cmd_ising_scan(args):
    if not 0 < args.beta_min < args.beta_max:
        raise UsageError("need 0 < --beta-min < --beta-max")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    points = phase_scan(args.beta_min, args.beta_max, args.steps)
    if args.format == "csv":
        text = scan_csv(points)
    else:
        rows = [{"beta": p.beta, "t0": p.t0, "phase": p.phase.value, "iterations": p.iterations,
                 "limit_scalar": p.limit_scalar, "entropy_final": p.entropy_final} for p in points]
        text = _render(rows, args.format)
        if args.format == "pretty":
            est = critical_beta()
            text += f"critical beta: analytic {BETA_C:.12f}, bisection {est:.12f}\n"
    return text, EXIT_OK


def cmd_bishift(args):
    group = _group(args.group)
    if not group.is_abelian():
        raise UsageError(f"{group.name} is not abelian; translated subcharacters need an abelian group")
    subs = _groups.subgroups(group)
    chosen = range(len(subs)) if args.subgroup is None else [args.subgroup]
    rows, failures = [], 0
    for si in chosen:
        if not 0 <= si < len(subs):
            raise UsageError(f"--subgroup must lie in [0, {len(subs) - 1}]")
        h = subs[si]
        if args.character is not None and not 0 <= args.character < len(h):
            raise UsageError(f"--character must lie in [0, {len(h) - 1}] for this subgroup")
        if args.shift is not None and not 0 <= args.shift < group.order:
            raise UsageError(f"--shift must lie in [0, {group.order - 1}]")
        chars = range(len(h)) if args.character is None else [args.character]
        shifts = range(group.order) if args.shift is None else [args.shift]
        for c in chars:
            for s in shifts:
                x = make_bishift_abelian(group, h, c, s)
                cert = is_bishift(x)
                hy = hy_extremal_certify(x)
                ok = cert.is_bishift and cert.consistent and hy.consistent
                failures += not ok
                rows.append({"subgroup": " ".join(map(str, sorted(h))), "character": c, "shift": s,
                             **{k: v for k, v in cert.verdicts.items()},
                             "entropy_value": cert.details["entropy"], "entropy_bound": cert.details["entropy_bound"],
                             "certified": ok})
    return _render(rows, args.format), EXIT_OK if failures == 0 else EXIT_VIOLATION


def cmd_sumset(args):
    group = _group(args.group)
    rows, bad = [], 0
    for r in rep_sumset_report(group):
        bad += not r.matches
        rows.append({"V": " ".join(map(str, r.v)), "W": " ".join(map(str, r.w)), "size_V": r.size_v,
                     "size_W": r.size_w, "value": r.value, "oracle": r.oracle, "match": r.matches})
    return _render(rows, args.format), EXIT_OK if bad == 0 else EXIT_VIOLATION


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfourier", description="Fourier analysis on group subfactor 2-boxes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="pretty"):
        p.add_argument("--format", choices=("csv", "jsonl", "pretty"), default=fmt)
        p.add_argument("--out", help="write output to this file instead of stdout")
        return p

    p = common(sub.add_parser("demo-s3", help="reproduce the S3 projection identities"))
    p.add_argument("--corrupt-coproduct", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_demo_s3)

    p = common(sub.add_parser("verify", help="structural identities and inequality sweep"))
    p.add_argument("--group", default="S3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("flow", help="block-map iteration from random bi-positive starts"))
    p.add_argument("--group", default="Z6")
    p.add_argument("--lambda", dest="lambda_", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--trajectory", action="store_true", help="dump the first trajectory as CSV")
    p.set_defaults(func=cmd_flow)

    p = common(sub.add_parser("ising-scan", help="Z2 Ising phase scan"), fmt="csv")
    p.add_argument("--beta-min", type=float, default=0.05)
    p.add_argument("--beta-max", type=float, default=1.2)
    p.add_argument("--steps", type=int, default=200)
    p.set_defaults(func=cmd_ising_scan)

    p = common(sub.add_parser("bishift", help="certify translated subcharacters on an abelian group"))
    p.add_argument("--group", default="Z6")
    p.add_argument("--subgroup", type=int, help="index into the subgroup list (default: all)")
    p.add_argument("--character", type=int)
    p.add_argument("--shift", type=int)
    p.set_defaults(func=cmd_bishift)

    p = common(sub.add_parser("sumset", help="representation sum-set table"))
    p.add_argument("--group", default="S3")
    p.set_defaults(func=cmd_sumset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"qfourier: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qfourier: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
