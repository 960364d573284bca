"""Batch front-end: certify, verify, fuzz, gadget, oracle and size-report.

Exit codes: 0 accept (or check passed), 1 reject (or check failed), 2 usage or
resource error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from .basic import acyclicity_scheme, centered_h_scheme, kk_free_scheme
from .corpus import random_graph
from .framework import (
    Scheme,
    dump_assignment,
    fuzz_soundness,
    load_assignment,
    measure_certificates,
    run_certification,
)
from .gadgets import (
    GadgetShapeError,
    PairFamily,
    build_gadget,
    find_copies,
    fooling_table,
    hybrid_view_experiment,
    path_tree,
)
from .graph import GraphParseError, LabeledGraph, parse_graph, serialize_graph
from .hfree import h_free_scheme
from .layers import compute_eccs, parse_eps
from .mapschemes import gu_scheme, renaming_scheme, tg_scheme
from .oracles import OracleResourceError, contains, ecc_reference, longest_induced_path
from .paths import p3k_scheme, p4k_scheme, p143k_scheme

SCHEMES = ("p4k", "p3k", "p143k", "h-free", "kk-free", "centered-h", "acyclicity", "tg", "gu", "renaming")


class UsageError(Exception):
    pass


def _read_graph(path: str | None) -> LabeledGraph:
    if path is None:
        raise UsageError("--graph is required")
    try:
        return parse_graph(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except GraphParseError as e:
        raise UsageError(f"{path}: {e}") from None


def build_scheme(args: argparse.Namespace) -> Scheme:
    """Scheme from the config flags; precondition violations become usage errors."""
    name = args.scheme
    try:
        eps = parse_eps(args.eps)
        if name == "p4k":
            return p4k_scheme(args.k, seed=args.seed)
        if name == "p3k":
            return p3k_scheme(args.k, eps, seed=args.seed)
        if name == "p143k":
            return p143k_scheme(args.k, seed=args.seed)
        if name == "h-free":
            return h_free_scheme(_read_graph(args.h_file), args.k, args.mode, seed=args.seed)
        if name == "kk-free":
            return kk_free_scheme(args.q)
        if name == "centered-h":
            return centered_h_scheme(_read_graph(args.h_file), args.center, args.d)
        if name == "acyclicity":
            return acyclicity_scheme()
        if name == "tg":
            return tg_scheme(eps, args.k)
        if name == "gu":
            return gu_scheme(eps, args.k, seed=args.seed)
        if name == "renaming":
            return renaming_scheme()
    except ValueError as e:
        raise UsageError(str(e)) from None
    raise UsageError(f"unknown scheme {name!r}")


def _emit(args: argparse.Namespace, report: dict[str, Any], lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


def _write(out: str | None, name: str, text: str) -> None:
    if out is None:
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)


def _verdict_report(scheme: Scheme, g: LabeledGraph, verdict, sizes, seconds: float) -> tuple[dict, list[str]]:
    report = {
        "scheme": scheme.name,
        "n": g.n,
        "m": g.m,
        "accepted": verdict.accepted,
        "rejecting": {str(v): r for v, r in sorted(verdict.rejecting.items())},
        "max_bits": sizes.max_bits,
        "total_bits": sizes.total_bits,
        "per_field_max": sizes.per_field_max,
        "seconds": round(seconds, 3),
    }
    lines = [f"scheme {scheme.name}", f"graph n={g.n} m={g.m}"]
    lines.append("verdict ACCEPT" if verdict.accepted else f"verdict REJECT at {len(verdict.rejecting)} vertices")
    lines += [f"vertex {v} REJECT {r}" for v, r in sorted(verdict.rejecting.items())]
    lines.append(f"size max_bits={sizes.max_bits} total_bits={sizes.total_bits}")
    lines += [f"size field {k} {v}" for k, v in sizes.per_field_max.items()]
    return report, lines


def cmd_certify(args: argparse.Namespace) -> int:
    scheme = build_scheme(args)
    g = _read_graph(args.graph)
    t0 = time.perf_counter()
    a = scheme.prove(g)
    verdict = run_certification(g, scheme, a, jobs=args.jobs)
    sizes = measure_certificates(a)
    report, lines = _verdict_report(scheme, g, verdict, sizes, time.perf_counter() - t0)
    _write(args.out, "certificates.txt", dump_assignment(a))
    _write(args.out, "verdict.txt", "\n".join(verdict.lines()) + "\n")
    _write(args.out, "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    _emit(args, report, lines)
    return 0 if verdict.accepted else 1


def cmd_verify(args: argparse.Namespace) -> int:
    scheme = build_scheme(args)
    g = _read_graph(args.graph)
    try:
        a = load_assignment(Path(args.certs).read_text(), scheme.fields)
    except OSError as e:
        raise UsageError(f"cannot read {args.certs}: {e.strerror}") from None
    except ValueError as e:
        raise UsageError(f"{args.certs}: {e}") from None
    if set(a.records) != set(g.vertices):
        raise UsageError("certificate dump does not cover exactly the graph's vertices")
    t0 = time.perf_counter()
    verdict = run_certification(g, scheme, a, jobs=args.jobs)
    report, lines = _verdict_report(scheme, g, verdict, measure_certificates(a), time.perf_counter() - t0)
    _write(args.out, "verdict.txt", "\n".join(verdict.lines()) + "\n")
    _emit(args, report, lines)
    return 0 if verdict.accepted else 1


def cmd_fuzz(args: argparse.Namespace) -> int:
    scheme = build_scheme(args)
    g = _read_graph(args.graph)
    t0 = time.perf_counter()
    rep = fuzz_soundness(g, scheme, args.strategy, seed=args.seed, budget=args.budget)
    report = {
        "scheme": scheme.name,
        "strategy": rep.strategy,
        "trials": rep.trials,
        "rejected": rep.rejected,
        "undetected_harmless": rep.undetected_harmless,
        "violations": [{"trial": v.trial, "detail": v.detail} for v in rep.violations],
        "seconds": round(time.perf_counter() - t0, 3),
    }
    lines = [
        f"scheme {scheme.name} strategy {rep.strategy}",
        f"trials {rep.trials} rejected {rep.rejected} harmless {rep.undetected_harmless}",
        f"violations {len(rep.violations)}",
    ]
    lines += [f"violation trial {v.trial}: {v.detail}" for v in rep.violations]
    for v in rep.violations:
        _write(args.out, f"violation-{v.trial}.txt", dump_assignment(_assignment(scheme, v.assignment)))
    _emit(args, report, lines)
    return 0 if rep.ok else 1


def _assignment(scheme: Scheme, records):
    from .framework import CertificateAssignment

    return CertificateAssignment(scheme.fields, records)


def _read_pairs(path: str | None, n: int) -> PairFamily:
    if path is None:
        return PairFamily(n)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise UsageError(f"{path}:{lineno}: expected two integers")
        pairs.append((int(parts[0]), int(parts[1])))
    try:
        return PairFamily(n, pairs)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_gadget(args: argparse.Namespace) -> int:
    if args.k < 1 or args.n < 2:
        raise UsageError("need --k >= 1 and --n >= 2")
    t = path_tree(args.k) if args.tree is None else _read_graph(args.tree)
    a = _read_pairs(args.a, args.n)
    b = _read_pairs(args.b, args.n)
    try:
        inst = build_gadget(args.k, args.n, t, a, b)
    except GadgetShapeError as e:
        raise UsageError(str(e)) from None
    report: dict[str, Any] = {"k": args.k, "n": args.n, "vertices": inst.graph.n, "edges": inst.graph.m, "t_size": t.n}
    lines = [f"gadget k={args.k} n={args.n} |T|={t.n}: {inst.graph.n} vertices, {inst.graph.m} edges"]
    if args.out is not None:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(serialize_graph(inst.graph))
        out.with_name(out.name + ".map").write_text(inst.mapping_text())
        lines.append(f"wrote {out}")
    code = 0
    tname = f"P_{t.n}" if args.tree is None else "T"
    if args.check:
        found = bool(find_copies(inst, t, cap=max(16, t.n)))
        inter = a.intersects(b)
        ok = found == inter
        report.update(contains_t=found, intersect=inter, consistent=ok)
        lines.append(f"{tname} {'FOUND' if found else 'ABSENT'}, intersect={str(inter).lower()}, {'CONSISTENT' if ok else 'INCONSISTENT'}")
        code = code or (0 if ok else 1)
    if args.hybrid:
        same = hybrid_view_experiment(args.k, args.n, a, b, t=t, seed=args.seed)
        report["views_identical"] = same
        lines.append(f"left-half views identical: {str(same).lower()}")
        code = code or (0 if same else 1)
    _emit(args, report, lines)
    return code


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    q = args.query
    if q == "longest-path":
        res = longest_induced_path(g)
        report = {"query": q, "count": res.count, "path": list(res.path)}
        lines = [f"longest induced path: {res.count} vertices", "path " + " ".join(map(str, res.path))]
        _emit(args, report, lines)
        return 0
    if q == "contains":
        h = _read_graph(args.h_file)
        found = contains(g, h, args.mode, cap=max(16, h.n))
        _emit(args, {"query": q, "mode": args.mode, "contains": found}, [f"contains ({args.mode}): {str(found).lower()}"])
        return 0 if found else 1
    if q == "eccs":
        try:
            eps = parse_eps(args.eps)
        except ValueError as e:
            raise UsageError(str(e)) from None
        if args.k < 2:
            raise UsageError("k must be at least 2")
        eccs = compute_eccs(g, args.k, eps)
        report = {"query": q, "eccs": {str(i): [sorted(c) for c in cs] for i, cs in eccs.items()}}
        lines = [f"ECC_{i} " + " | ".join(" ".join(map(str, sorted(c))) for c in cs) for i, cs in sorted(eccs.items())]
        if args.check and eps != "log":
            bad = [i for i, cs in eccs.items() if sorted(cs, key=min) != ecc_reference(g, args.k, eps, i)]
            report["reference_mismatch_layers"] = bad
            lines.append("reference " + ("agrees" if not bad else f"disagrees on layers {bad}"))
            _emit(args, report, lines)
            return 0 if not bad else 1
        _emit(args, report, lines)
        return 0
    raise UsageError(f"unknown query {q!r}")


# bound models for the size table: the size the scheme is designed to fit under
MODELS = {
    "p4k": ("n^1.5*log2(n)^2", lambda n: n**1.5 * math.log2(n) ** 2),
    "p3k": ("n*log2(n)^3", lambda n: n * math.log2(n) ** 3),
}


def cmd_size_report(args: argparse.Namespace) -> int:
    scheme = build_scheme(args)
    sizes = [int(x) for x in args.sizes.split(",") if x]
    if not sizes or min(sizes) < 2:
        raise UsageError("--sizes needs integers >= 2")
    label, model = MODELS.get(args.scheme, ("n", float))
    rows = []
    for n in sizes:
        worst = 0
        for s in range(args.samples):
            g = random_graph(n, args.density, f"{args.seed}:{s}")
            worst = max(worst, measure_certificates(scheme.prove(g)).max_bits)
        rows.append({"n": n, "max_bits": worst, "ratio": worst / model(n)})
    report = {"scheme": scheme.name, "model": label, "density": args.density, "rows": rows}
    lines = [f"scheme {scheme.name} model {label} density {args.density}", "n max_bits bits/model"]
    lines += [f"{r['n']} {r['max_bits']} {r['ratio']:.4f}" for r in rows]
    if args.fooling:
        for n, m, ratio in fooling_table(sizes, args.k, 4 * args.k + 3):
            lines.append(f"fooling n={n} bound={m} ratio={ratio:.5f}")
    _emit(args, report, lines)
    return 0


def _scheme_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", required=True, choices=SCHEMES)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--eps", default="1/2", help="fraction, or 'log' for the quasilinear variant")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--h-file")
    p.add_argument("--mode", choices=("induced", "subgraph"), default="induced")
    p.add_argument("--center", type=int, default=1)
    p.add_argument("--d", type=int, default=1)


def make_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="locert", allow_abbrev=False, description="Local certification of forbidden subgraphs.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out")

    p = sub.add_parser("certify", allow_abbrev=False, help="prove, verify and dump certificates")
    _scheme_flags(p)
    p.add_argument("--graph")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", allow_abbrev=False, help="verify an external certificate dump")
    _scheme_flags(p)
    p.add_argument("--graph")
    p.add_argument("--certs", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", allow_abbrev=False, help="adversarial certificates on a NO-instance")
    _scheme_flags(p)
    p.add_argument("--graph")
    p.add_argument("--strategy", choices=("bitflip", "splice", "relabel", "gadget-hybrid"), default="bitflip")
    p.add_argument("--budget", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("gadget", allow_abbrev=False, help="build the pair-family gadget")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    shape = p.add_mutually_exclusive_group()
    shape.add_argument("--path", action="store_true", help="T is the path on 4k+3 vertices (default)")
    shape.add_argument("--tree", help="edge-list file of T")
    p.add_argument("--a", help="pair file for the level-1 family")
    p.add_argument("--b", help="pair file for the level-2k family")
    p.add_argument("--check", action="store_true")
    p.add_argument("--hybrid", action="store_true")
    common(p)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("oracle", allow_abbrev=False, help="exact brute-force queries")
    p.add_argument("--graph")
    p.add_argument("--query", choices=("longest-path", "contains", "eccs"), required=True)
    p.add_argument("--h-file")
    p.add_argument("--mode", choices=("induced", "subgraph"), default="induced")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--eps", default="1/2")
    p.add_argument("--check", action="store_true", help="compare ECCs with the path-enumeration reference")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("size-report", allow_abbrev=False, help="max certificate bits on random graphs")
    _scheme_flags(p)
    p.add_argument("--sizes", default="16,32,64,128")
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--fooling", action="store_true", help="append the counting lower bound per size")
    common(p)
    p.set_defaults(func=cmd_size_report)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OracleResourceError as e:
        print(f"resource error: {e}", file=sys.stderr)
        return 2
