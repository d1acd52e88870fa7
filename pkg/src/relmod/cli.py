"""Command-line front end.

Exit codes: 0 quasirational up to the bounds (or a clean sweep), 1 usage or
parse error, 2 resource failure, 3 torsion witness, 4 undecided cells.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

from . import corpus
from .coinvariants import sweep_lemma
from .dsl import ParseError, parse_presentation
from .magnus import ResourceError, degree_with_truncation, free_quotient_order_by_magnus, mn_generators
from .presentation import Presentation, PresentationError, is_prime
from .tower import Limits, compute_levels, profile_from_logs, qr_certify, verdict_to_dict

SCHEMA = "report-v1"
EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_WITNESS, EXIT_UNDECIDED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(x) for x in re.split(r"[,\s]+", text.strip()) if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid prime list {text!r}") from None
    if not primes:
        raise argparse.ArgumentTypeError("empty prime list")
    return primes


def _common(parser: argparse.ArgumentParser, presentations: bool = True) -> None:
    parser.add_argument("--primes", type=_prime_list, help="comma-separated primes")
    parser.add_argument("--workers", type=int, default=1, help="worker processes")
    parser.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    if presentations:
        parser.add_argument("inputs", nargs="*", type=Path, help="presentation files")
        parser.add_argument("--corpus", action="append", default=[],
                            help="built-in presentation name, or 'all' (repeatable)")
        parser.add_argument("--mode", choices=("discrete", "pro-p"))
        parser.add_argument("--max-level", type=int, default=3, help="N: levels 1..N")
        parser.add_argument("--max-exp", type=int, default=3, help="K: exponents 1..K")
        parser.add_argument("--max-cosets", type=int, default=100_000)
        parser.add_argument("--timings", action="store_true", help="include timings in JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relmod", description="Relation-module towers of group presentations.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("check-qr", help="bounded quasirationality check"))
    _common(sub.add_parser("tower", help="full tower report with rationalization ranks"))

    deg = sub.add_parser("degree", help="Zassenhaus degree of a word")
    deg.add_argument("word")
    deg.add_argument("--gens", help="generator names, comma separated (default: names in the word)")
    _common(deg, presentations=False)

    mn = sub.add_parser("mn-generators", help="normal generators of the filtration term M_n")
    mn.add_argument("rank", type=int)
    mn.add_argument("level", type=int)
    mn.add_argument("--order", action="store_true", help="also compute |F/M_n| by Magnus closure")
    _common(mn, presentations=False)

    sw = sub.add_parser("lemma-sweep", help="coinvariant/fixed-point sweep over p-group actions")
    sw.add_argument("--max-dim", type=int, default=2)
    sw.add_argument("--max-order-exp", type=int, default=4, help="group order bound p^e")
    sw.add_argument("--samples", type=int, help="randomized sweep with this many instances")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--budget", type=float, help="seconds before the sweep stops (partial report)")
    _common(sw, presentations=False)
    return parser


def _load_inputs(args) -> list[Presentation]:
    over = {"mode": args.mode, "primes": args.primes}
    if args.mode == "pro-p" and not args.primes:
        raise UsageError("pro-p mode needs --primes with a single prime")
    out = []
    for path in args.inputs:
        if not path.exists():
            raise UsageError(f"no such file: {path}")
        pres = parse_presentation(path.read_text(encoding="utf-8"), **over)
        out.append(pres if pres.name else parse_presentation(path.read_text(encoding="utf-8"),
                                                             name=path.stem, **over))
    names = []
    for c in args.corpus:
        names += corpus.names() if c == "all" else [c]
    for name in names:
        try:
            out.append(corpus.load(name, **over))
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if not out:
        raise UsageError("no input presentations (give files or --corpus)")
    return out


def _limits(args) -> Limits:
    if args.max_level < 1 or args.max_exp < 2:
        raise UsageError("need --max-level >= 1 and --max-exp >= 2")
    if args.max_cosets < 1000:
        raise UsageError("--max-cosets must be at least 1000")
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    return Limits(max_cosets=args.max_cosets, cosets_ceiling=max(args.max_cosets, Limits().cosets_ceiling),
                  workers=args.workers)


def _cell_dict(p, n, k, orderG, logQ, certified):
    return {"p": p, "n": n, "k": k, "orderH": orderG * p ** logQ, "orderG": orderG,
            "orderQ": p ** logQ, "logQ": logQ, "certified": certified}


def tower_report(pres: Presentation, p: int, N: int, K: int, limits: Limits) -> dict:
    levels = compute_levels(pres, (p,), N, K, limits)
    cells, profiles, data = [], [], []
    for n in range(1, N + 1):
        res, err, _ = levels[(p, n)]
        if res is None:
            raise ResourceError(err)
        order, logs, cert, _ = res
        cells += [_cell_dict(p, n, k, order, logs[k - 1], cert) for k in range(1, K + 1)]
        prof = profile_from_logs(p, n, logs)
        profiles.append({"p": p, "n": n, "freeRankLowerBound": prof.free_rank_lower_bound,
                         "torsionSummands": list(prof.torsion_summands),
                         "undecidedAboveExp": prof.undecided_above_exp})
        data.append((n, order, prof.free_rank_lower_bound, list(logs)))
    out_levels = []
    for i, (n, order, a, logs) in enumerate(data):
        nxt = data[i + 1][3] if i + 1 < len(data) else None
        surj = None if nxt is None else all(b >= c for b, c in zip(nxt, logs))
        out_levels.append({"n": n, "orderG": order, "rankLowerBound": a, "logs": logs,
                           "surjectsFromNext": surj})
    return {"presentation": pres.name, "p": p, "bounds": {"primes": [p], "N": N, "K": K},
            "cells": cells, "profiles": profiles, "levels": out_levels}


# ---- rendering ----

def _yn(b) -> str:
    return "n/a" if b is None else ("yes" if b else "no")


def _cells_text(cells) -> list[str]:
    lines = ["cells:", f"  {'p':>3} {'n':>3} {'k':>3} {'orderG':>10} {'orderQ':>18} {'orderH':>20} {'logQ':>5}  certified"]
    for c in cells:
        lines.append(f"  {c['p']:>3} {c['n']:>3} {c['k']:>3} {c['orderG']:>10} {c['orderQ']:>18} "
                     f"{c['orderH']:>20} {c['logQ']:>5}  {_yn(c['certified'])}")
    return lines


def _profiles_text(profiles) -> list[str]:
    return ["profiles:"] + [
        f"  p={pr['p']} n={pr['n']} freeRankLowerBound={pr['freeRankLowerBound']} "
        f"torsionSummands={pr['torsionSummands']} undecidedAboveExp={pr['undecidedAboveExp']}"
        for pr in profiles]


def _bounds_text(b) -> str:
    return f"bounds: primes={b['primes']} N={b['N']} K={b['K']}"


def _verdict_text(r: dict) -> list[str]:
    v = r["verdict"]
    lines = [f"presentation: {r['presentation']}", f"verdict: {v['kind']}", f"  {v['wording']}",
             _bounds_text(r["bounds"])]
    w = v["witness"]
    lines.append("witness: none" if w is None else
                 f"witness: p={w['p']} n={w['n']} e={w['e']} multiplicity={w['multiplicity']} summands={w['summands']}")
    lines.append(f"identity method: {r['identityMethod']}")
    lines.append(f"torsion scope: {r['torsionScope']}")
    lines += _cells_text(r["cells"]) + _profiles_text(r["profiles"])
    lines.append("cross-checks:")
    for c in r["crossChecks"]:
        lines.append(f"  {c['name']}: {c['status']}")
        lines += [f"    {d}" for d in c["detail"]]
    lines.append("unevaluated:" + ("" if r["unevaluated"] else " none"))
    lines += [f"  p={u['p']} n={u['n']} {u['kind']}: {u['reason']}" for u in r["unevaluated"]]
    if "timings" in r:
        lines.append("timings: " + " ".join(f"{k}:{v}s" for k, v in r["timings"].items()))
    return lines


def _tower_text(r: dict) -> list[str]:
    lines = [f"presentation: {r['presentation']}", f"prime: {r['p']}", _bounds_text(r["bounds"])]
    lines += _cells_text(r["cells"]) + _profiles_text(r["profiles"]) + ["levels:"]
    lines += [f"  n={lv['n']} orderG={lv['orderG']} rankLowerBound={lv['rankLowerBound']} "
              f"logs={lv['logs']} surjectsFromNext={_yn(lv['surjectsFromNext'])}" for lv in r["levels"]]
    return lines


def render_text(report: dict) -> str:
    lines = [f"{report['schema']} {report['command']}"]
    cmd = report["command"]
    if cmd in ("check-qr", "tower"):
        for r in report["reports"]:
            lines.append("")
            lines += _verdict_text(r) if cmd == "check-qr" else _tower_text(r)
    else:
        for key, value in report.items():
            if key in ("schema", "command"):
                continue
            if isinstance(value, list) and value and not isinstance(value[0], (int, str)):
                lines.append(f"{key}:")
                lines += [f"  {json.dumps(v)}" for v in value]
            elif isinstance(value, list) and key == "generators":
                lines.append(f"{key}:")
                lines += [f"  {v}" for v in value]
            else:
                lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = report["command"]
    if cmd in ("check-qr", "tower"):
        w.writerow(["presentation", "verdict", "p", "n", "k", "orderG", "orderQ", "orderH", "logQ", "certified"])
        for r in report["reports"]:
            kind = r["verdict"]["kind"] if cmd == "check-qr" else ""
            for c in r["cells"]:
                w.writerow([r["presentation"], kind, c["p"], c["n"], c["k"], c["orderG"], c["orderQ"],
                            c["orderH"], c["logQ"], c["certified"]])
    elif cmd == "mn-generators":
        w.writerow(["d", "p", "n", "generator"])
        for g in report["generators"]:
            w.writerow([report["d"], report["p"], report["n"], g])
    else:
        flat = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v)
                for k, v in report.items() if k not in ("schema", "command")}
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
    return buf.getvalue()


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif args.format == "csv":
        text = render_csv(report)
    else:
        text = render_text(report)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _single_prime(args) -> int:
    primes = args.primes or (2,)
    if len(primes) != 1 or not is_prime(primes[0]):
        raise UsageError("give exactly one prime with --primes")
    return primes[0]


# ---- subcommands ----

def cmd_check_qr(args) -> tuple[dict, int]:
    limits = _limits(args)
    reports, codes = [], []
    for pres in _load_inputs(args):
        v = qr_certify(pres, None, args.max_level, args.max_exp, limits)
        if v.red_alert:
            print(f"RED ALERT: cross-check violated for {pres.name}", file=sys.stderr)
        reports.append(verdict_to_dict(v, timings=args.timings))
        if v.kind == "TorsionWitness":
            codes.append(EXIT_WITNESS)
        elif any(u.get("kind") == "resource" for u in v.unevaluated):
            codes.append(EXIT_RESOURCE)
        elif v.kind == "Undecided":
            codes.append(EXIT_UNDECIDED)
        else:
            codes.append(EXIT_OK)
    code = next((c for c in (EXIT_WITNESS, EXIT_RESOURCE, EXIT_UNDECIDED) if c in codes), EXIT_OK)
    return {"schema": SCHEMA, "command": "check-qr", "reports": reports}, code


def cmd_tower(args) -> tuple[dict, int]:
    limits = _limits(args)
    reports = []
    for pres in _load_inputs(args):
        for p in pres.primes:
            reports.append(tower_report(pres, p, args.max_level, args.max_exp, limits))
    return {"schema": SCHEMA, "command": "tower", "reports": reports}, EXIT_OK


def cmd_degree(args) -> tuple[dict, int]:
    p = _single_prime(args)
    if args.gens:
        gens = [g for g in re.split(r"[,\s]+", args.gens) if g]
    else:
        gens = list(dict.fromkeys(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", args.word)))
    if not gens:
        gens = ["x"]
    pres = parse_presentation(f"gens {' '.join(gens)}; rels {args.word};", primes=(p,), mode="pro-p")
    w = pres.relators[0]
    if not w:
        raise UsageError("the word is trivial; it lies in every filtration term")
    deg, L = degree_with_truncation(w, p)
    return {"schema": SCHEMA, "command": "degree", "word": args.word, "p": p,
            "degree": deg, "truncation": L}, EXIT_OK


def cmd_mn_generators(args) -> tuple[dict, int]:
    p = _single_prime(args)
    if args.rank < 1 or args.level < 1:
        raise UsageError("rank and level must be positive")
    names = ["x", "y", "z", "w"] if args.rank <= 4 else [f"x{i}" for i in range(args.rank)]
    level = mn_generators(args.rank, p, args.level)
    report = {"schema": SCHEMA, "command": "mn-generators", "d": args.rank, "p": p, "n": args.level,
              "generators": [w.format(names) for w in level.words]}
    if args.order:
        report["freeQuotientOrder"] = free_quotient_order_by_magnus(args.rank, p, args.level)
    return report, EXIT_OK


def cmd_lemma_sweep(args) -> tuple[dict, int]:
    p = _single_prime(args)
    if args.max_dim < 1 or args.max_order_exp < 0:
        raise UsageError("--max-dim must be positive and --max-order-exp nonnegative")
    rep = sweep_lemma(p, args.max_dim, args.max_order_exp, samples=args.samples, seed=args.seed,
                      budget_seconds=args.budget, workers=args.workers)
    report = {"schema": SCHEMA, "command": "lemma-sweep", **rep.to_dict()}
    if rep.violations:
        print(f"RED ALERT: {len(rep.violations)} lemma violations", file=sys.stderr)
    return report, EXIT_OK if not rep.violations else EXIT_WITNESS


COMMANDS = {"check-qr": cmd_check_qr, "tower": cmd_tower, "degree": cmd_degree,
            "mn-generators": cmd_mn_generators, "lemma-sweep": cmd_lemma_sweep}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        report, code = COMMANDS[args.command](args)
    except (UsageError, ParseError, PresentationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, MemoryError) as exc:
        print(f"resource failure: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
