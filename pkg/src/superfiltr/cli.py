"""Command-line front end.

Subcommands: check, scan, steinberg, ber, decompose, acceptance.  Exit codes
are 0 for success (Yes / all agree / all pass), 2 for a rigorous negative
outcome (No verdict, DISAGREE row, failing criterion) and 1 for errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import acceptance
from .characters import Character, IterationCapExceeded, NotFiltrationCharacter, decompose_good
from .gl_modules import Answer, build, check_good_filtration, check_weyl_filtration, predicted
from .supermatrix import NonInvertible, SuperMatrix, berezinian
from .weights import (
    BlockShape,
    is_prime,
    is_steinberg_weight,
    marko_irreducible,
    steinberg_value,
    steinberg_weight,
)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2
KINDS = ("exterior", "symmetric")
MODES = ("good", "weyl", "both")


class ConfigError(ValueError):
    pass


def _range(value, name) -> tuple[int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 2 or not all(isinstance(v, int) for v in value):
        raise ConfigError(f"{name} must be a pair [lo, hi] of integers")
    lo, hi = value
    if lo > hi:
        raise ConfigError(f"{name} [{lo}, {hi}] is empty")
    return lo, hi


@dataclass(frozen=True)
class ScanConfig:
    """Grid of (kind, mode, shape, p, k); ranges are inclusive."""

    shapes: tuple = ((1, 1),)
    primes: tuple = (3,)
    k_range: tuple = (0, 8)
    r_range: tuple = (1, 1)
    s_range: tuple = (0, 0)
    t_range: tuple = (0, 0)
    kinds: tuple = KINDS
    mode: str = "both"
    seed: int = 0

    def __post_init__(self):
        if not self.shapes:
            raise ConfigError("shapes is empty")
        for sh in self.shapes:
            if len(sh) != 2 or min(sh) < 1:
                raise ConfigError(f"bad shape {sh}")
        if not self.primes:
            raise ConfigError("primes is empty")
        for p in self.primes:
            if not isinstance(p, int) or p < 3 or not is_prime(p):
                raise ConfigError(f"{p} is not an odd prime")
        for name in ("k_range", "r_range", "s_range", "t_range"):
            _range(list(getattr(self, name)), name)
        if self.k_range[0] < 0:
            raise ConfigError("k_range must start at 0 or above")
        if self.r_range[0] < 1:
            raise ConfigError("r_range must start at 1 or above")
        if not self.kinds or any(k not in KINDS for k in self.kinds):
            raise ConfigError(f"kinds must be a nonempty subset of {KINDS}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kw = dict(data)
        for name in ("k_range", "r_range", "s_range", "t_range"):
            if name in kw:
                kw[name] = _range(kw[name], name)
        if "shapes" in kw:
            kw["shapes"] = tuple(tuple(int(x) for x in sh) for sh in kw["shapes"])
        if "primes" in kw:
            kw["primes"] = tuple(kw["primes"])
        if "kinds" in kw:
            kinds = kw["kinds"]
            kw["kinds"] = (kinds,) if isinstance(kinds, str) else tuple(kinds)
        return cls(**kw)

    @classmethod
    def from_toml(cls, path) -> "ScanConfig":
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict(data)

    def modes(self) -> tuple[str, ...]:
        return ("good", "weyl") if self.mode == "both" else (self.mode,)

    def points(self):
        lo, hi = self.k_range
        for kind in self.kinds:
            for mode in self.modes():
                for m, n in self.shapes:
                    for p in self.primes:
                        for k in range(lo, hi + 1):
                            yield kind, mode, m, n, p, k


def _certificate(verdict) -> str:
    if verdict.answer is Answer.NO_NOT_INJECTIVE_OVER_U:
        return f"H1={verdict.degree_one}"
    items = sorted(verdict.multiplicities.items(), key=lambda kv: kv[0].entries, reverse=True)
    parts = [f"{w}x{c}" for w, c in items]
    tag = "neg" if verdict.answer is Answer.NO_NEGATIVE_MULTIPLICITY else "sections"
    return f"{tag}:" + (",".join(parts) if parts else "none")


def evaluate_point(point) -> dict:
    kind, mode, m, n, p, k = point
    shape = BlockShape(m, n, p)
    M = build(kind, shape, k)
    verdict = (check_good_filtration if mode == "good" else check_weyl_filtration)(M)
    pred = predicted(kind, shape, k)
    return {
        "kind": kind,
        "mode": mode,
        "m": m,
        "n": n,
        "p": p,
        "k": k,
        "dim": M.dim,
        "verdict": verdict.answer.value,
        "computed": verdict.is_yes,
        "rigorous": verdict.rigorous,
        "certificate": _certificate(verdict),
        "predicted": pred,
        "agree": verdict.is_yes == pred,
    }


def thread_cap() -> int:
    raw = os.environ.get("SUPERFILTR_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ConfigError(f"SUPERFILTR_THREADS={raw!r} is not an integer") from None


def steinberg_rows(config: ScanConfig) -> list[dict]:
    rows = []
    for m, n in config.shapes:
        for p in config.primes:
            shape = BlockShape(m, n, p)
            for r in range(config.r_range[0], config.r_range[1] + 1):
                for s in range(config.s_range[0], config.s_range[1] + 1):
                    for t in range(config.t_range[0], config.t_range[1] + 1):
                        rows.append(_steinberg_row(shape, r, s, t))
    return rows


def _steinberg_row(shape: BlockShape, r: int, s: int, t: int) -> dict:
    weight = steinberg_weight(shape, r, s, t)
    stein = is_steinberg_weight(shape, r, s, t)
    irr = marko_irreducible(weight)
    return {
        "m": shape.m, "n": shape.n, "p": shape.p, "r": r, "s": s, "t": t,
        "weight": str(weight),
        "value": steinberg_value(shape, r, s, t),
        "steinberg": stein,
        "odd_root_criterion": irr,
        "agree": stein == irr,
    }


def run_scan(config: ScanConfig, threads: int | None = None) -> dict:
    """Evaluate every grid point; rows come back ordered by parameter tuple."""
    points = sorted(config.points())
    cap = thread_cap()
    workers = min(threads, cap) if threads else cap
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate_point, points))
    else:
        rows = [evaluate_point(pt) for pt in points]
    cfg = asdict(config)
    return {
        "config": cfg,
        "seed": config.seed,
        "rows": rows,
        "steinberg": steinberg_rows(config),
        "summary": {
            "points": len(rows),
            "agree": sum(r["agree"] for r in rows),
            "disagree": sum(not r["agree"] for r in rows),
            "rigorous_disagree": sum((not r["agree"]) and r["rigorous"] for r in rows),
        },
    }


TSV_COLUMNS = ("kind", "mode", "m", "n", "p", "k", "dim", "verdict", "rigorous", "certificate", "predicted", "flag")


def report_tsv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(TSV_COLUMNS)
    for row in report["rows"]:
        flag = "AGREE" if row["agree"] else "DISAGREE"
        pred = "Yes" if row["predicted"] else "No"
        writer.writerow([*(row[c] for c in TSV_COLUMNS[:8]), str(row["rigorous"]).lower(), row["certificate"], pred, flag])
    return buf.getvalue()


def scan_exit_code(report: dict) -> int:
    return EXIT_NEGATIVE if report["summary"]["rigorous_disagree"] else EXIT_OK


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    shape = BlockShape(args.m, args.n, args.p)
    M = build(args.kind, shape, args.k)
    mode = "weyl" if args.weyl else "good"
    verdict = (check_weyl_filtration if args.weyl else check_good_filtration)(M)
    out = {
        "kind": args.kind, "mode": mode, "m": args.m, "n": args.n, "p": args.p, "k": args.k,
        "dim": M.dim, **verdict.to_json(), "predicted": predicted(args.kind, shape, args.k),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK if verdict.is_yes else EXIT_NEGATIVE


def cmd_scan(args) -> int:
    config = ScanConfig.from_toml(args.grid)
    report = run_scan(config, threads=args.threads)
    text = report_tsv(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2))
    if args.figure:
        from .plotting import scan_heatmap

        scan_heatmap(report["rows"], args.figure)
    s = report["summary"]
    print(f"# {s['points']} points, {s['agree']} agree, {s['disagree']} disagree "
          f"({s['rigorous_disagree']} rigorous), seed {report['seed']}", file=sys.stderr)
    return scan_exit_code(report)


def cmd_steinberg(args) -> int:
    shape = BlockShape(args.m, args.n, args.p)
    if args.smin > args.smax or args.tmin > args.tmax:
        raise ConfigError("empty s or t range")
    writer = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
    writer.writerow(["r", "s", "t", "value", "steinberg", "odd_root_criterion", "weight"])
    ok = True
    for s in range(args.smin, args.smax + 1):
        for t in range(args.tmin, args.tmax + 1):
            row = _steinberg_row(shape, args.r, s, t)
            ok &= row["agree"]
            writer.writerow([args.r, s, t, row["value"], str(row["steinberg"]).lower(),
                             str(row["odd_root_criterion"]).lower(), row["weight"]])
    return EXIT_OK if ok else EXIT_NEGATIVE


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_ber(args) -> int:
    A = SuperMatrix.from_json(_load_json(args.file))
    value = berezinian(A)
    terms = [[[b + 1 for b in range(mask.bit_length()) if mask >> b & 1], str(c)] for mask, c in sorted(value.coeffs.items())]
    print(json.dumps({"berezinian": terms, "text": repr(value)}, indent=2))
    return EXIT_OK


def cmd_decompose(args) -> int:
    ch = Character.from_json(_load_json(args.file), p=args.p)
    try:
        mult = decompose_good(ch, args.basis)
    except NotFiltrationCharacter as exc:
        print(f"not a filtration character: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except IterationCapExceeded as exc:
        print(f"decomposition did not terminate: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    writer = csv.writer(sys.stdout, delimiter="\t", lineterminator="\n")
    writer.writerow(["weight", "multiplicity"])
    for w, c in sorted(mult.items(), key=lambda kv: kv[0].entries, reverse=True):
        writer.writerow([str(w), c])
    return EXIT_NEGATIVE if any(c < 0 for c in mult.values()) else EXIT_OK


def cmd_acceptance(args) -> int:
    print(f"# seed {args.seed}")
    results = acceptance.run_acceptance(only=args.only, seed=args.seed, echo=print)
    failed = [r for r in results if not r.passed]
    print(f"# {len(results) - len(failed)}/{len(results)} criteria passed")
    if args.json:
        payload = {"seed": args.seed, "results": [
            {"number": r.number, "key": r.key, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
            for r in results]}
        Path(args.json).write_text(json.dumps(payload, indent=2))
    return EXIT_NEGATIVE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superfiltr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="good or Weyl filtration check for one module")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--weyl", action="store_true", help="check for a Weyl filtration instead")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="grid scan from a TOML config")
    p.add_argument("--grid", required=True, help="TOML file")
    p.add_argument("--out", help="TSV output path (default stdout)")
    p.add_argument("--json", help="also write the full report as JSON")
    p.add_argument("--figure", help="write a heatmap (png/pdf/svg)")
    p.add_argument("--threads", type=int, help="worker threads, capped by SUPERFILTR_THREADS")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("steinberg", help="Steinberg criterion over an (s, t) box")
    for name in ("m", "n", "p", "r"):
        p.add_argument(f"--{name}", type=int, required=True)
    for name in ("smin", "smax", "tmin", "tmax"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.set_defaults(func=cmd_steinberg)

    p = sub.add_parser("ber", help="Berezinian of a supermatrix given as JSON")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("decompose", help="expand a character in induced or even characters")
    p.add_argument("--file", required=True)
    p.add_argument("--basis", choices=("induced", "even"), default="induced")
    p.add_argument("--p", type=int, default=3, help="characteristic when the file omits it")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("acceptance", help="run the acceptance criteria")
    p.add_argument("--only", help="comma separated criterion keys or numbers")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--json", help="write results as JSON")
    p.set_defaults(func=cmd_acceptance)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError, OSError, NonInvertible, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
