"""Command-line front end: parse a ring spec, run one command, emit a report.

Exit codes::

    0  the command ran (computational negatives such as "not F-pure" included)
    1  unexpected internal error
    2  usage error or an argument the command cannot use
    3  budget exceeded
    4  malformed ring spec
    5  csv requested for a non-tabular report
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from collections import Counter
from pathlib import Path

from . import __version__
from .cotangent import section_report
from .decompose import decompose, default_degree_bound, ffrt_witness
from .diffops import localization_generation, negative_degree_scan
from .errors import BudgetExceeded
from .frobenius import DEFAULT_GENERATOR_BUDGET, cached_pushforward, f_signature_estimate, fedder_is_fpure, free_rank
from .report import FormatError, Report, emit, to_json
from .specfile import RingSpec, SpecError, parse_ring_spec, print_ring_spec

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_BUDGET, EXIT_SPEC, EXIT_FORMAT = 0, 1, 2, 3, 4, 5

COMMANDS = ("fedder", "free-rank", "fsig", "decompose", "witness", "minop", "locgen", "sections", "verdict")


class UsageError(ValueError):
    pass


def _e_max(command: str, flags: dict) -> int:
    if flags.get("e_max") is not None:
        return int(flags["e_max"])
    return 1 if command == "verdict" else 2


def resolve_bounds(command: str, spec: RingSpec, flags: dict) -> dict:
    """Every bound the command will use, with defaults filled in."""
    ring_weights = spec.weights
    b: dict = {}
    budget = int(flags.get("budget") or DEFAULT_GENERATOR_BUDGET)

    def bound():
        if flags.get("degree_bound") is not None:
            return int(flags["degree_bound"])
        return default_degree_bound(spec.to_ring())

    if command in ("free-rank", "decompose", "locgen"):
        b["e"] = int(flags.get("e") or 1)
    if command in ("fsig", "witness", "minop", "verdict"):
        b["e_max"] = _e_max(command, flags)
    if command in ("decompose", "witness", "verdict"):
        b["degree_bound"] = bound()
    if command in ("minop", "verdict"):
        b["d_min"] = int(flags["d_min"]) if flags.get("d_min") is not None else -4
        b["domain"] = bool(flags.get("domain"))
    if command in ("sections", "verdict"):
        b["m_max"] = int(flags.get("m_max") or 3)
        w = flags.get("window")
        if w:
            b["window"] = sorted({int(j) for j in w}, reverse=True)
        else:
            b["window"] = list(range(-1, -max(ring_weights) - 1, -1))
    if command == "locgen":
        b["t"] = int(flags.get("t") or 2)
        x = flags.get("x") or spec.variables[0]
        if x not in spec.variables:
            raise UsageError(f"--x must name a ring variable, got {x!r}")
        b["x"] = x
    if command != "fedder" and command != "sections":
        b["budget"] = budget
    for k in ("e", "e_max", "m_max", "t"):
        if k in b and b[k] < 1:
            raise UsageError(f"--{k.replace('_', '-')} must be positive")
    if "d_min" in b and b["d_min"] > -1:
        raise UsageError("--d-min must be negative")
    if "degree_bound" in b and b["degree_bound"] < 0:
        raise UsageError("--degree-bound must be nonnegative")
    if "window" in b and any(j >= 0 for j in b["window"]):
        raise UsageError("--window holds negative degrees only")
    return b


def input_hash(spec: RingSpec, command: str, bounds: dict, version: str = __version__) -> str:
    payload = json.dumps(
        {"spec": print_ring_spec(spec), "command": command, "bounds": bounds, "version": version},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


# -- commands -------------------------------------------------------------------
# each returns (result, verdict, table, columns)


def _fedder(R, b):
    if not R.is_hypersurface():
        raise UsageError("fedder needs a hypersurface (exactly one ideal generator)")
    ok = fedder_is_fpure(R)
    return {"fpure": ok}, "F-pure" if ok else "not F-pure", None, None


def _free_rank(R, b):
    rec = free_rank(R, b["e"], b["budget"])
    res = rec.as_dict()
    return res, f"a_{rec.e} = {rec.a_e} free summands of F_*^{rec.e} R (a_e / q^dim = {rec.ratio})", None, None


def _fsig(R, b):
    recs = f_signature_estimate(R, b["e_max"], b["budget"])
    table = [r.as_dict() for r in recs]
    last = recs[-1]
    verdict = f"a_e / q^dim = {last.ratio} at e={last.e}; estimate up to (e_max={b['e_max']})"
    return {"records": table}, verdict, table, ["e", "a_e", "ratio"]


def _classes_table(summands) -> list:
    cnt = Counter(summands)
    rows = []
    for fp in sorted(cnt):
        d = fp.as_dict()
        rows.append({
            "gen_degrees": d["gen_degrees"],
            "hilbert": d["hilbert"],
            "is_free": d["is_free"],
            "multiplicity": cnt[fp],
        })
    return rows


def _decompose(R, b):
    M = cached_pushforward(R, b["e"], b["budget"])
    dec = decompose(M, b["degree_bound"])
    table = _classes_table(dec.summands)
    res = {"summands": len(dec.summands), "free": dec.free_count, "classes": len(table)}
    verdict = (
        f"{len(dec.summands)} indecomposable summands ({dec.free_count} free) in {len(table)} fingerprint "
        f"classes, fingerprints up to (degree_bound={b['degree_bound']})"
    )
    return res, verdict, table, ["gen_degrees", "hilbert", "is_free", "multiplicity"]


def _witness_verdict(W, b) -> str:
    cum = [r[3] for r in W.rows]
    span = f"(e_max={b['e_max']}, degree_bound={b['degree_bound']})"
    if len(cum) > 1 and cum[-1] == cum[-2]:
        return f"cumulative classes stable at {cum[-1]} up to {span}"
    return f"cumulative classes {cum[-1]} up to {span}"


def _witness(R, b):
    W = ffrt_witness(R, b["e_max"], b["degree_bound"], b["budget"])
    table = [{"e": e, "summands": s, "distinct": d, "cumulative_classes": c} for e, s, d, c in W.rows]
    return {"rows": table}, _witness_verdict(W, b), table, ["e", "summands", "distinct", "cumulative_classes"]


def _minop(R, b):
    scan = negative_degree_scan(R, b["e_max"], b["d_min"], b["domain"], b["budget"])
    table = [
        {"e": e, "d": d, "dim": n, "how": how}
        for (e, d), (n, how) in sorted(scan.cells.items(), key=lambda kv: (-kv[0][1], kv[0][0]))
    ]
    witness = list(scan.witness) if scan.witness else None
    verdict = f"negative-degree operators: {scan.summary()}"
    if witness:
        verdict += f" (first found scanning down to d_min={b['d_min']}, e <= {b['e_max']})"
    return {"witness": witness}, verdict, table, ["e", "d", "dim", "how"]


def _locgen(R, b):
    x = R.var(R.variables.index(b["x"]))
    ok = localization_generation(R, x, b["e"], b["t"], b["budget"])
    target = f"1/{b['x']}^{b['t']}"
    if ok:
        verdict = f"{target} is reached from 1/{b['x']} by a level-{b['e']} operator"
    else:
        verdict = f"{target} is not reached from 1/{b['x']} by operators up to (e={b['e']})"
    return {"generates": ok}, verdict, None, None


def _sections(R, b):
    rep = section_report(R, b["m_max"], b["window"])
    table = [{"m": m, "j": j, "dim": rep.table[(m, j)]} for m in range(1, rep.m_max + 1) for j in rep.window]
    res = {"all_zero": rep.all_zero, "notes": {"caveat": rep.caveat}}
    if not rep.sheaf_language:
        res["notes"]["dimension"] = "ring has dimension < 2; numbers are module duals only"
    return res, rep.verdict(), table, ["m", "j", "dim"]


def _verdict(R, b):
    sec_res, sec_v, _, _ = _sections(R, b)
    op_res, op_v, _, _ = _minop(R, b)
    wit_res, wit_v, _, _ = _witness(R, b)
    zero = sec_res["all_zero"]
    absent = op_res["witness"] is None
    parts = [f"sections {sec_v}"]
    if zero:
        parts.append("no negative-degree operators possible for the computed range")
    parts.append(op_v)
    parts.append(wit_v)
    if zero and absent:
        parts.append(
            "if the vanishing persists for all m, FFRT would be contradicted; "
            "this evidence is bounded and proves nothing beyond the stated range"
        )
    elif zero != absent:
        parts.append("sections and operator scan disagree within these bounds")
    table = [
        {"check": "sections", "finding": sec_v},
        {"check": "minop", "finding": op_v},
        {"check": "witness", "finding": wit_v},
    ]
    res = {
        "sections_all_zero": zero,
        "operators_absent": absent,
        "consistent": zero == absent,
        "sections": sec_res,
        "minop": op_res,
        "witness": wit_res,
        "notes": sec_res.get("notes", {}),
    }
    return res, "; ".join(parts), table, ["check", "finding"]


DISPATCH = {
    "fedder": _fedder,
    "free-rank": _free_rank,
    "fsig": _fsig,
    "decompose": _decompose,
    "witness": _witness,
    "minop": _minop,
    "locgen": _locgen,
    "sections": _sections,
    "verdict": _verdict,
}


def run(command: str, spec: RingSpec, flags: dict | None = None) -> Report:
    """Run one command on a parsed spec and return its report."""
    if command not in DISPATCH:
        raise UsageError(f"unknown command {command!r} (choose from {', '.join(COMMANDS)})")
    flags = dict(flags or {})
    bounds = resolve_bounds(command, spec, flags)
    R = spec.to_ring()
    t0 = time.perf_counter()
    result, verdict, table, columns = DISPATCH[command](R, bounds)
    elapsed = time.perf_counter() - t0
    return Report(
        command, spec.label, spec.p, input_hash(spec, command, bounds), bounds, result, verdict,
        table, columns, timing=elapsed, spec_text=print_ring_spec(spec),
    )


def cache_dir(flags: dict) -> Path:
    if flags.get("cache_dir"):
        return Path(flags["cache_dir"])
    env = os.environ.get("FROBFORGE_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "frobforge"


def cached_run(command: str, spec: RingSpec, flags: dict | None = None, use_cache: bool = True) -> Report:
    """:func:`run` through the on-disk report cache."""
    flags = dict(flags or {})
    if command not in DISPATCH:
        raise UsageError(f"unknown command {command!r} (choose from {', '.join(COMMANDS)})")
    key = input_hash(spec, command, resolve_bounds(command, spec, flags))
    path = cache_dir(flags) / f"{key}.json"
    if use_cache and path.is_file():
        try:
            return Report.from_json(path.read_text())
        except (ValueError, KeyError):
            pass  # stale or corrupt entry, recompute
    rep = run(command, spec, flags)
    if use_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(to_json(rep))
            tmp.replace(path)
        except OSError:
            pass
    return rep


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="frobforge",
        description="Frobenius pushforwards, differential operators and cotangent duals of graded rings over F_p.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("spec_file", help="ring spec file ('-' for stdin)")
    ap.add_argument("--e", type=int, help="Frobenius level (default 1)")
    ap.add_argument("--e-max", type=int, help="largest level scanned (default 2; 1 for verdict)")
    ap.add_argument("--d-min", type=int, help="most negative operator degree scanned (default -4)")
    ap.add_argument("--m-max", type=int, help="largest symmetric power (default 3)")
    ap.add_argument("--degree-bound", type=int, help="fingerprint degree window (default from the ring)")
    ap.add_argument("--window", type=int, nargs="+", help="twists j < 0 for sections (default -1..-max weight)")
    ap.add_argument("--t", type=int, help="target power 1/x^t for locgen (default 2)")
    ap.add_argument("--x", help="localizing variable for locgen (default: first variable)")
    ap.add_argument("--domain", action="store_true", help="assert R is a domain; prunes the operator scan")
    ap.add_argument("--budget", type=int, help=f"max digit generators p^(e n) (default {DEFAULT_GENERATOR_BUDGET})")
    ap.add_argument("--format", choices=("human", "json", "csv"), default="human")
    ap.add_argument("--cache-dir", help="report cache directory (default $FROBFORGE_CACHE or ~/.cache/frobforge)")
    ap.add_argument("--no-cache", action="store_true", help="neither read nor write the report cache")
    ap.add_argument("--version", action="version", version=f"frobforge {__version__}")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "spec_file", "format", "no_cache")}
    try:
        text = sys.stdin.read() if args.spec_file == "-" else Path(args.spec_file).read_text()
    except OSError as exc:
        print(f"frobforge: cannot read {args.spec_file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = parse_ring_spec(text)
        rep = cached_run(args.command, spec, flags, use_cache=not args.no_cache)
        out = emit(rep, args.format)
    except SpecError as exc:
        print(f"frobforge: {args.spec_file}: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except BudgetExceeded as exc:
        print(f"frobforge: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FormatError as exc:
        print(f"frobforge: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (UsageError, ValueError) as exc:
        print(f"frobforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last resort
        print(f"frobforge: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
