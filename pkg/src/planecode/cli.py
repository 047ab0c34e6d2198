"""Command-line entry point: ``planecode build|code|verify|report``.

Every command prints one JSON document (sorted keys) on stdout.  Exit
codes: 0 success, 1 failed check, 2 refused by a budget or guard, 3
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import builders
from .census import (
    COMPLETE,
    HAMMING,
    PROVEN,
    ShardSpec,
    bounded_weight_census,
    full_census,
    read_cwe,
    type_census,
)
from .errors import Infeasible, MalformedInput, NotAPlane, PlanecodeError, VerificationError
from .incidence import build_plane, classify, read_inc, write_inc
from .linear import code_from_system, dual_code, hull

EXIT_OK, EXIT_FAIL, EXIT_GUARD, EXIT_MALFORMED = 0, 1, 2, 3
FULL_CENSUS_SOFT_LIMIT = 10**8


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True, default=_json_default))


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)


def _parse_shard(text: str) -> ShardSpec:
    try:
        s, n = text.split("/")
        return ShardSpec(int(s), int(n))
    except ValueError as exc:
        raise MalformedInput(f"shard must look like s/S, got {text!r}") from exc


def _parse_type(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise MalformedInput(f"type must be comma-separated integers, got {text!r}") from exc


def _load_plane(path):
    return build_plane(read_inc(path))


# --------------------------------------------------------------------------
# build


def cmd_build(args) -> int:
    kind = args.kind
    if kind == "pg2":
        sys_ = builders.pg2_system(args.q)
    elif kind == "hall9":
        sys_ = builders.hall9_system()
    elif kind == "freeplane":
        sys_ = builders.free_plane_stage(args.n, args.point_budget)
    elif kind == "pappus":
        sys_ = builders.build_pappus_config()
    elif kind == "desargues":
        sys_ = builders.build_desargues_config()
    else:
        sys_ = builders.build_pattern(args.name, size=args.size, p=args.p, k=args.k)
    out = args.out or f"{kind if kind != 'pattern' else args.name}.inc"
    write_inc(sys_, out)
    _emit({"kind": kind, "path": str(out), "points": sys_.num_points, "lines": sys_.num_lines,
           "fingerprint": sys_.fingerprint, "verdict": str(classify(sys_))})
    return EXIT_OK


# --------------------------------------------------------------------------
# code


def _cache_path(args, fingerprint, kind, shard):
    if not args.cache_dir:
        return None
    d = Path(args.cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    suffix = "" if shard.count == 1 else f"-s{shard.index}of{shard.count}"
    return d / f"{fingerprint}-p{args.p}-{kind}{'-dual' if args.dual else ''}{suffix}.cwe"


def cmd_code(args) -> int:
    sys_ = read_inc(args.input)
    code = code_from_system(sys_, args.p)
    if args.dual:
        code = dual_code(code)
    action = args.action
    if action == "stats":
        d = dual_code(code)
        h = hull(code)
        _emit({"p": args.p, "length": code.length, "dim": code.dim, "dual_dim": d.dim,
               "hull_dim": h.dim, "hull_equals_dual": h == d, "source": sys_.fingerprint})
        return EXIT_OK
    if action in ("dual", "hull"):
        target = dual_code(code) if action == "dual" else hull(code)
        out = args.out or f"{Path(args.input).stem}-{action}-p{args.p}.csv"
        target.write_csv(out, source=sys_.fingerprint)
        _emit({"action": action, "dim": target.dim, "path": str(out)})
        return EXIT_OK
    if action == "census":
        shard = _parse_shard(args.shard)
        if code.p**code.dim > FULL_CENSUS_SOFT_LIMIT and not args.allow_full:
            raise Infeasible(f"{code.p}^{code.dim} words; pass --allow-full with sharding to force",
                             required=code.p**code.dim)
        cache = _cache_path(args, sys_.fingerprint, args.kind, shard)
        if cache is not None and cache.exists():
            table = read_cwe(cache)
            cached = True
        else:
            table = full_census(code, args.kind, shard, args.budget)
            cached = False
            if cache is not None:
                table.write(cache)
        out = args.out
        if out:
            table.write(out)
        _emit({"kind": table.kind, "entries": len(table.entries), "total": table.total(),
               "shard": f"{shard.index}/{shard.count}", "path": str(out) if out else None, "cached": cached,
               "table": {",".join(map(str, k)) if isinstance(k, tuple) else str(k): v
                         for k, v in sorted(table.entries.items())}})
        return EXIT_OK
    if action == "lowweight":
        t0 = time.perf_counter()
        bc = bounded_weight_census(code, args.wmax, seed=args.seed, max_volume=args.max_volume)
        doc = {"w_max": args.wmax, "status": bc.status, "hamming": {str(k): v for k, v in bc.hamming.items()},
               "info_sets": len(bc.info_sets), "thresholds": bc.thresholds, "volume": bc.volume,
               "runtime_seconds": round(time.perf_counter() - t0, 3)}
        if args.compare is not None:
            found = bc.hamming.get(args.wmax, 0)
            doc["compare"] = {"weight": args.wmax, "found": found, "expected": args.compare,
                              "match": found == args.compare}
        if args.out:
            bc.hamming_table().write(args.out)
            doc["path"] = args.out
        _emit(doc)
        return EXIT_OK if bc.status == PROVEN else EXIT_FAIL
    if action == "typecount":
        j = _parse_type(args.type)
        plane = build_plane(sys_) if args.strategy in ("search", "auto") and not args.dual else None
        n = type_census(code, j, args.strategy, plane=plane, seed=args.seed)
        _emit({"type": list(j), "count": n, "strategy": args.strategy})
        return EXIT_OK
    raise MalformedInput(f"unknown code action {action}")


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    from . import properties, reconstruction
    from .pappus import count_desargues_witnesses, count_pappus

    what = args.what
    if what == "lemma39":
        plane = _load_plane(args.plane)
        reps = reconstruction.lemma39_verify(plane, args.k, seed=args.seed)
        _emit({"reports": [r.__dict__ for r in reps]})
        return EXIT_OK if all(r.ok for r in reps) else EXIT_FAIL
    if what == "theorem42":
        plane = _load_plane(args.plane)
        x = builders.build_pattern(args.pattern, size=args.size, p=args.p, k=args.k)
        rep = reconstruction.theorem42_count(x, plane, pattern_name=args.pattern, plane_name=str(args.plane))
        print(rep.to_json())
        return EXIT_OK if rep.match else EXIT_FAIL
    if what == "pappus":
        plane = _load_plane(args.plane)
        res = count_pappus(plane, threads=args.threads, spot_checks=args.spot_checks, seed=args.seed)
        doc = res.to_record()
        if args.enable_desargues:
            d = count_desargues_witnesses(plane)
            doc["desargues"] = {"witnesses": d.witnesses, "witnesses_closing": d.witnesses_closing,
                                "per_copy": d.per_copy, "copies": d.copies}
        _emit(doc)
        return EXIT_OK if not res.spot_exceptions else EXIT_FAIL
    if what == "lemma32":
        rep = properties.lemma32_check(args.trials, seed=args.seed)
    elif what == "lemma38":
        rep = properties.lemma38_suite(args.kmax)
    elif what == "lemma36":
        rep = properties.lemma36_check(_load_plane(args.plane), seed=args.seed)
    elif what == "lemma31":
        rep = properties.lemma31_check(_load_plane(args.plane), args.trials, seed=args.seed)
    elif what == "minweights":
        rep = properties.minweights_check(_load_plane(args.plane), seed=args.seed)
    else:
        raise MalformedInput(f"unknown verify target {what}")
    _emit(rep.to_record())
    return EXIT_OK if rep.ok else EXIT_FAIL


# --------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    from .plotting import plot_weight_distribution, write_weight_csv

    sys_ = read_inc(args.input)
    code = code_from_system(sys_, args.p)
    if args.dual:
        code = dual_code(code)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{Path(args.input).stem}-p{args.p}{'-dual' if args.dual else ''}"
    if code.p**code.dim <= FULL_CENSUS_SOFT_LIMIT and args.wmax is None:
        hamming = full_census(code, HAMMING).entries
        status = "FULL"
    else:
        wmax = args.wmax if args.wmax is not None else 3 * args.p
        bc = bounded_weight_census(code, wmax, seed=args.seed)
        hamming, status = bc.hamming, bc.status
    csv_path = write_weight_csv(hamming, out / f"{stem}-weights.csv")
    title = f"{Path(args.input).stem}: {'dual ' if args.dual else ''}code over F_{args.p}, dim {code.dim}"
    png_path = plot_weight_distribution(hamming, out / f"{stem}-weights.png", title)
    _emit({"csv": str(csv_path), "png": str(png_path), "status": status,
           "hamming": {str(k): v for k, v in sorted(hamming.items())}})
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="planecode", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write an incidence system as .inc")
    b.add_argument("kind", choices=["pg2", "hall9", "freeplane", "pappus", "desargues", "pattern"])
    b.add_argument("--q", type=int, default=2)
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--point-budget", type=int, default=100_000)
    b.add_argument("--name", default="triangle")
    b.add_argument("--size", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("-o", "--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("code", help="codes of an .inc system")
    c.add_argument("action", choices=["stats", "dual", "hull", "census", "lowweight", "typecount"])
    c.add_argument("input")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--dual", action="store_true", help="work in the dual code")
    c.add_argument("--kind", choices=[HAMMING, COMPLETE], default=COMPLETE)
    c.add_argument("--shard", default="0/1")
    c.add_argument("--budget", type=int, default=10**9)
    c.add_argument("--allow-full", action="store_true", help="permit very large full censuses")
    c.add_argument("--cache-dir")
    c.add_argument("--wmax", type=int, default=0)
    c.add_argument("--max-volume", type=int, default=3 * 10**8)
    c.add_argument("--compare", type=int, help="expected count at weight --wmax")
    c.add_argument("--type")
    c.add_argument("--strategy", choices=["auto", "full", "bounded", "search"], default="auto")
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_code)

    v = sub.add_parser("verify", help="run a named check; exit 0 iff it passes")
    v.add_argument("what", choices=["lemma39", "theorem42", "pappus", "lemma32", "lemma38", "lemma36",
                                    "lemma31", "minweights"])
    v.add_argument("--plane")
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--pattern", default="triangle")
    v.add_argument("--size", type=int)
    v.add_argument("--p", type=int)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--kmax", type=int, default=12)
    v.add_argument("--spot-checks", type=int, default=10_000)
    v.add_argument("--enable-desargues", action="store_true")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="weight distribution as CSV plus a PNG figure")
    r.add_argument("input")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--dual", action="store_true")
    r.add_argument("--wmax", type=int)
    r.add_argument("--out-dir", default="report")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        return args.func(args)
    except (MalformedInput, NotAPlane, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except Infeasible as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except VerificationError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PlanecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
