"""Command-line driver.

Exit codes: 0 when every requested check passes, 1 on a mathematical
falsification, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import graphio
from .bent import PFunc, analyze, parse_function
from .field import FieldCtx, make_field
from .pds import (Kind, NotAPDS, NotSRG, affine_polar_baseline, build_dset, cayley_graph,
                  counted_params, level_sets, pds_report, predict_params, verify_srg)
from .ranklab import from_graph, rank, read_edge_list
from .scheme import NotAScheme, build_relations, scheme_report, verify_amorphic, verify_scheme

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SLOW_ORDER = 2401  # fields above this need --allow-slow for rank work
KINDS = [k.value for k in Kind]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    p: int | None = None
    n: int | None = None
    modulus: tuple[int, ...] | None = None
    fn: str = "quadratic"
    kinds: list[str] = field(default_factory=lambda: list(KINDS))
    fmt: str = "text"
    out: Path | None = None
    exports: list[str] = field(default_factory=list)
    cap: int = 625
    allow_slow: bool = False
    graph: Path | None = None

    def __post_init__(self):
        if self.cap <= 0:
            raise UsageError("--cap must be positive")
        bad = set(self.kinds) - set(KINDS)
        if bad:
            raise UsageError(f"unknown kinds {sorted(bad)}")

    def field_ctx(self) -> FieldCtx:
        if self.p is None or self.n is None:
            raise UsageError("--p and --n are required")
        try:
            return make_field(self.p, self.n, self.modulus)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def function(self, ctx: FieldCtx) -> PFunc:
        try:
            return parse_function(ctx, self.fn)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_jsonable)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    keys = list(rows[0])
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k) for k in keys})
    return buf.getvalue()


def _fmt_table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    keys = list(rows[0])
    cells = [[str(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    out = [line(keys), line(["-" * w for w in widths])] + [line(c) for c in cells]
    return "\n".join(out) + "\n"


def emit(report: dict, rows: list[dict], cfg: RunConfig, text: str, stem: str) -> None:
    if cfg.fmt == "json":
        sys.stdout.write(to_json(report) + "\n")
    elif cfg.fmt == "csv":
        sys.stdout.write(to_csv(rows))
    else:
        sys.stdout.write(text)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / f"{stem}.json").write_text(to_json(report) + "\n")
        (cfg.out / f"{stem}.csv").write_text(to_csv(rows))


def _field_label(ctx: FieldCtx) -> str:
    return f"GF({ctx.p}^{ctx.n})"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

REQUIREMENTS = ("bent", "weakly-regular", "condition-a", "none")


def cmd_analyze(cfg: RunConfig, require: str = "bent") -> int:
    ctx = cfg.field_ctx()
    f = cfg.function(ctx)
    spec, ca = analyze(f)
    report = {
        "function": f.name,
        "field": {"p": ctx.p, "n": ctx.n, "modulus": list(ctx.modulus)},
        "bent": spec.is_bent,
        "regularity": spec.regularity,
        "epsilon": spec.epsilon,
        "mu": spec.mu,
        "condition_a": {
            "f0_zero": ca.f0_zero, "even": ca.even, "homogeneous_l": ca.homogeneous_l,
            "weakly_regular": ca.weakly_regular, "satisfied": ca.satisfied,
        },
    }
    ok = {
        "bent": spec.is_bent,
        "weakly-regular": spec.weakly_regular,
        "condition-a": ca.satisfied,
        "none": True,
    }[require]
    report["required"] = require
    report["verdict"] = "PASS" if ok else "FAIL"
    text = (f"function      {f.name} on {_field_label(ctx)}\n"
            f"bent          {spec.is_bent}\n"
            f"regularity    {spec.regularity}\n"
            f"epsilon       {spec.epsilon}\n"
            f"mu            {spec.mu}\n"
            f"Condition A   {'satisfied' if ca.satisfied else 'violated'} "
            f"(f(0)=0: {ca.f0_zero}, even: {ca.even}, l: {ca.homogeneous_l}, "
            f"weakly regular: {ca.weakly_regular})\n"
            f"verdict       {report['verdict']} (required: {require})\n")
    rows = [{"key": k, "value": json.dumps(v, default=_jsonable)} for k, v in report.items()]
    emit(report, rows, cfg, text, "analyze")
    return EXIT_OK if ok else EXIT_FAIL


def _srg_row(f: PFunc, kind: Kind, eps: int | None, levels, cfg: RunConfig, check_graph: bool) -> tuple[dict, dict]:
    ctx = f.ctx
    predicted = None
    if eps is not None and ctx.n % 2 == 0:
        predicted = predict_params(kind, ctx.p, ctx.n // 2, eps)
    dset = build_dset(levels, kind, f.name)
    row = {"kind": kind.value, "d": len(dset),
           "predicted": predicted.astuple() if predicted else None,
           "counted": None, "srg": None, "latin_type": None, "verdict": "FAIL", "witness": None}
    try:
        counted = counted_params(dset)
    except NotAPDS as exc:
        row["witness"] = str(exc)
        return row, pds_report(f, kind, predicted, None, "FAIL", row["witness"])
    row["counted"] = counted.astuple()
    row["latin_type"] = counted.latin_type
    ok = predicted is None or predicted.agrees_with(counted)
    if not ok:
        row["witness"] = f"predicted {predicted.astuple()} but counted {counted.astuple()}"
    if ok and check_graph:
        g = cayley_graph(dset)
        try:
            s = verify_srg(g)
            row["srg"] = s.astuple()
            ok = s.k == counted.d and (counted.d == 0 or s.lam == counted.lambda1) \
                and (counted.d == ctx.q - 1 or s.mu == counted.lambda2)
        except NotSRG as exc:
            ok, row["witness"] = False, str(exc)
        if cfg.exports and cfg.out is not None:
            graphio.export(g, cfg.out, f"{_stem(f)}_{kind.value}", cfg.exports)
    row["verdict"] = "PASS" if ok else "FAIL"
    rep = pds_report(f, kind, predicted, (counted.lambda1, counted.lambda2), row["verdict"], row["witness"])
    rep["srg"] = row["srg"]
    rep["latin_type"] = row["latin_type"]
    return row, rep


def _stem(f: PFunc) -> str:
    safe = "".join(c if c.isalnum() else "_" for c in f.name)
    return f"{safe}_{f.ctx.p}_{f.ctx.n}"


def cmd_srg(cfg: RunConfig, check_graph: bool = True) -> int:
    ctx = cfg.field_ctx()
    f = cfg.function(ctx)
    if ctx.n % 2:
        raise UsageError("difference sets need an even extension degree")
    spec, ca = analyze(f)
    levels = level_sets(f, spec.epsilon)
    rows, reports = [], []
    for k in cfg.kinds:
        row, rep = _srg_row(f, Kind(k), spec.epsilon, levels, cfg, check_graph)
        rows.append(row)
        reports.append(rep)
    report = {"function": f.name, "field": {"p": ctx.p, "n": ctx.n},
              "regularity": spec.regularity, "epsilon": spec.epsilon,
              "condition_a": ca.satisfied, "results": reports}
    ok = all(r["verdict"] == "PASS" for r in rows)
    head = (f"{f.name} on {_field_label(ctx)}: {spec.regularity}, epsilon={spec.epsilon}, "
            f"Condition A {'satisfied' if ca.satisfied else 'violated'}\n")
    table = _fmt_table([{k: v for k, v in r.items() if k != "witness"} for r in rows])
    notes = "".join(f"{r['kind']}: {r['witness']}\n" for r in rows if r["witness"])
    emit(report, rows, cfg, head + table + notes, "srg")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scheme(cfg: RunConfig) -> int:
    ctx = cfg.field_ctx()
    if ctx.q > 6561:
        raise UsageError(f"field order {ctx.q} exceeds the scheme limit 6561")
    f = cfg.function(ctx)
    if ctx.n % 2:
        raise UsageError("the scheme needs an even extension degree")
    _, ca = analyze(f)
    rel = build_relations(f, require_condition_a=False)
    witness, amorphic = None, None
    try:
        verify_scheme(rel)
        amorphic = verify_amorphic(rel)
    except NotAScheme as exc:
        witness = str(exc)
    report = scheme_report(rel, amorphic)
    report["condition_a"] = ca.satisfied
    ok = ca.satisfied and witness is None and amorphic is not None and amorphic.amorphic
    report["verdict"] = "PASS" if ok else "FAIL"
    report["witness"] = witness
    lines = [f"{f.name} on {_field_label(ctx)}: Condition A "
             f"{'satisfied' if ca.satisfied else 'violated'}",
             f"class sizes ({', '.join(map(str, rel.sizes))})"]
    rows = []
    if witness:
        lines.append(f"not a scheme: {witness}")
    else:
        lines.append("intersection numbers constant (p_ij^k for k = 0..3):")
        for k in range(4):
            lines.append(f"  k={k}: {rel.tensor[:, :, k].tolist()}")
        for fu in amorphic.fusions:
            rows.append({"fusion": fu.name, "params": fu.params, "latin_type": fu.latin_type,
                         "error": fu.error})
        lines.append(_fmt_table(rows).rstrip())
        lines.append(f"common type: {amorphic.tag}")
    lines.append(f"verdict {report['verdict']}")
    emit(report, rows, cfg, "\n".join(lines) + "\n", "scheme")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rank(cfg: RunConfig) -> int:
    if cfg.graph is not None:
        if cfg.p is None:
            raise UsageError("--p is required with --graph")
        try:
            g = read_edge_list(cfg.graph)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {cfg.graph}: {exc}") from exc
        label = str(cfg.graph)
        p = cfg.p
    else:
        ctx = cfg.field_ctx()
        if len(cfg.kinds) != 1:
            raise UsageError("rank needs exactly one --kind")
        if ctx.q > SLOW_ORDER and not cfg.allow_slow:
            raise UsageError(f"rank over {ctx.q} vertices is slow; pass --allow-slow")
        f = cfg.function(ctx)
        spec, _ = analyze(f)
        g = cayley_graph(build_dset(level_sets(f, spec.epsilon), cfg.kinds[0], f.name))
        label, p = g.provenance, ctx.p
    if g.v > SLOW_ORDER and not cfg.allow_slow:
        raise UsageError(f"rank over {g.v} vertices is slow; pass --allow-slow")
    t = time.perf_counter()
    r = rank(from_graph(g, p))
    report = {"p": p, "v": g.v, "rank": r, "graph": label}
    emit(report, [report], cfg, f"{label}: {p}-rank {r} of {g.v} "
         f"({time.perf_counter() - t:.1f}s)\n", "rank")
    return EXIT_OK


# reference (v, k, lambda, mu), type and p-rank of each table row
TABLE_ROWS = [
    # table, construction, p, n, kind, params, rank, slow
    (1, "affine-polar", 5, 4, Kind.D_S, (625, 260, 105, 110), 86, False),
    (1, "hk", 5, 4, Kind.D_S, (625, 260, 105, 110), 104, False),
    (1, "affine-polar", 7, 4, Kind.D_S, (2401, 1050, 455, 462), 237, False),
    (1, "hk", 7, 4, Kind.D_S, (2401, 1050, 455, 462), 335, False),
    (1, "hk", 3, 8, Kind.D_S, (6561, 2214, 729, 756), 566, True),
    (2, "affine-polar", 5, 4, Kind.D_Sprime, (625, 364, 213, 210), 625, False),
    (2, "hk", 5, 4, Kind.D_Sprime, (625, 364, 213, 210), 625, False),
    (2, "affine-polar", 7, 4, Kind.D_Sprime, (2401, 1350, 761, 756), 2401, False),
    (2, "hk", 7, 4, Kind.D_Sprime, (2401, 1350, 761, 756), 2401, False),
]


def _table_dset(construction: str, ctx: FieldCtx, kind: Kind):
    if construction == "affine-polar":
        ds, dsp = affine_polar_baseline(ctx)
        return ds if kind is Kind.D_S else dsp
    f = parse_function(ctx, "hk")
    spec, _ = analyze(f)
    return build_dset(level_sets(f, spec.epsilon), kind, "hk")


def reproduce_tables(allow_slow: bool = False, with_rank: bool = True,
                     graph_dir: Path | None = None) -> list[dict]:
    rows = []
    for table, cons, p, n, kind, params, expected_rank, slow in TABLE_ROWS:
        row = {"table": table, "construction": cons, "field": f"GF({p}^{n})", "kind": kind.value,
               "expected": params, "counted": None, "type": None,
               "expected_rank": expected_rank, "rank": None, "aut": "external", "status": "SKIPPED"}
        rows.append(row)
        if slow and not allow_slow:
            continue
        ctx = make_field(p, n)
        dset = _table_dset(cons, ctx, kind)
        try:
            c = counted_params(dset)
        except NotAPDS as exc:
            row["status"] = f"FAIL ({exc})"
            continue
        row["counted"] = (c.v, c.d, c.lambda1, c.lambda2)
        row["type"] = {"negative-Latin": "n.L.", "Latin": "L.", "both": "L./n.L."}.get(c.latin_type, "-")
        ok = row["counted"] == params
        if with_rank or graph_dir is not None:
            g = cayley_graph(dset)
        if with_rank:
            row["rank"] = rank(from_graph(g, p))
            ok = ok and row["rank"] == expected_rank
        if graph_dir is not None:
            graphio.export(g, graph_dir, f"table{table}_{cons}_{p}_{n}_{kind.value}", ("graph6",))
        row["status"] = "PASS" if ok else "FAIL"
    return rows


def cmd_tables(cfg: RunConfig) -> int:
    graph_dir = cfg.out / "graphs" if (cfg.out is not None and "graph6" in cfg.exports) else None
    rows = reproduce_tables(cfg.allow_slow, graph_dir=graph_dir)
    ok = all(r["status"] in ("PASS", "SKIPPED") for r in rows)
    report = {"rows": rows, "aut_note": "automorphism group orders are not computed; "
                                        "export graph6 and use an external tool"}
    text = _fmt_table(rows) + f"\n|Aut(G)|: {report['aut_note']}\n"
    emit(report, rows, cfg, text, "tables")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _modulus(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("modulus must be comma-separated integers, low degree first") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bentsrg", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic (odd prime)")
    common.add_argument("--n", type=int, help="extension degree")
    common.add_argument("--modulus", type=_modulus,
                        help="monic irreducible modulus, coefficients low degree first")
    common.add_argument("--fn", default="quadratic",
                        help="quadratic[:a=<digits>], hk, sporadic3_6, tracepoly:c,d;...")
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", type=Path, help="directory for JSON/CSV reports and graph exports")
    common.add_argument("--export", dest="exports", action="append", default=[],
                        choices=sorted(graphio.EXPORTERS), help="graph export format (repeatable)")
    common.add_argument("--cap", type=int, default=625, help="group-ring convolution cap")
    common.add_argument("--allow-slow", action="store_true", help="enable rank work above 2401 vertices")

    sub = ap.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="bentness, regularity and Condition A")
    a.add_argument("--require", choices=REQUIREMENTS, default="bent")
    s = sub.add_parser("srg", parents=[common], help="difference sets, parameters and SRG check")
    s.add_argument("--kind", dest="kinds", action="append", choices=KINDS)
    s.add_argument("--no-graph", action="store_true", help="skip the common-neighbour check")
    sub.add_parser("scheme", parents=[common], help="3-class scheme and amorphic check")
    r = sub.add_parser("rank", parents=[common], help="p-rank of a Cayley graph or edge-list file")
    r.add_argument("--kind", dest="kinds", action="append", choices=KINDS)
    r.add_argument("--graph", type=Path, help="edge-list file (0-based, '# vertices N' header)")
    sub.add_parser("tables", parents=[common], help="regenerate the reference SRG tables")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        kinds = getattr(args, "kinds", None)
        if kinds is None:
            kinds = [Kind.D_S.value] if args.command == "rank" else list(KINDS)
        cfg = RunConfig(p=args.p, n=args.n, modulus=args.modulus, fn=args.fn, kinds=kinds,
                        fmt=args.fmt, out=args.out, exports=args.exports, cap=args.cap,
                        allow_slow=args.allow_slow, graph=getattr(args, "graph", None))
        if args.command == "analyze":
            return cmd_analyze(cfg, args.require)
        if args.command == "srg":
            return cmd_srg(cfg, check_graph=not args.no_graph)
        if args.command == "scheme":
            return cmd_scheme(cfg)
        if args.command == "rank":
            return cmd_rank(cfg)
        return cmd_tables(cfg)
    except UsageError as exc:
        print(f"bentsrg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
