"""Command line: ``coxsigns {eps,zn,verify,omega,extension}``.

Exit codes: 0 success, 1 a checked property failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .cocycles import ArityError, ExtensionElement, eval_epsilon, eval_epsilon_tilde, eval_Z
from .coxeter import WordError, build_system, format_tuple, format_word, parse_tuple
from .identities import CHECKS, SweepConfig, run_checks
from .omega import classify_restrictions, diff_against_expectations, load_expectations, reports_to_csv
from .rootdata import UnknownTypeError

SUITES = {
    "cocycle": ["cocycle-eps"],
    "all": list(CHECKS),
}


class UsageError(Exception):
    pass


@dataclass
class CommandPlan:
    command: str
    type: str
    n: int
    tuple_text: str | None
    backend: str
    cfg: SweepConfig
    fmt: str
    output: str | None
    jobs: int
    suite: str | None = None
    against_paper: bool = False
    orbits: bool = False


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _system(text):
    try:
        return build_system(text)
    except UnknownTypeError as e:
        raise UsageError(f"--type: {e}") from None


def _tuple(system, text, n):
    if text is None:
        raise UsageError("--tuple is required")
    try:
        ts = parse_tuple(system, text)
    except WordError as e:
        raise UsageError(f"--tuple: {e}") from None
    if n is not None and len(ts) != n:
        raise UsageError(f"--tuple: expected {n} comma-separated entries for -n {n}, got {len(ts)}")
    return ts


def run_eps(plan: CommandPlan) -> tuple[str, int]:
    W = _system(plan.type)
    ts = _tuple(W, plan.tuple_text, plan.n)
    values = {}
    for b in ("chamber", "inversion"):
        if plan.backend in (b, "both"):
            values[b] = int(eval_epsilon(plan.n, ts, backend=b))
    agree = len(set(values.values())) == 1
    value = next(iter(values.values()))
    orbits = {str(k): int(v) for k, v in sorted(eval_epsilon_tilde(plan.n, ts).items())} if plan.orbits else None
    obj = {"type": W.descriptor, "n": plan.n, "tuple": format_tuple(ts), "value": value, "backends": values, "agree": agree}
    if orbits is not None:
        obj["orbits"] = orbits
    if plan.fmt == "json":
        text = _dump(obj)
    elif plan.fmt == "csv":
        text = _csv(["type", "n", "tuple", "value", "agree"], [[W.descriptor, plan.n, obj["tuple"], value, agree]])
    else:
        field = "F2" if plan.n % 2 else "Z"
        lines = [f"{value}"]
        if len(values) == 2:
            lines.append(f"# epsilon_{plan.n} in {field}; backends {'agree' if agree else 'DISAGREE'}: {values}")
        if orbits is not None:
            lines.append(f"# by wall orbit: {orbits}")
        text = "\n".join(lines) + "\n"
    return text, 0 if agree else 1


def run_zn(plan: CommandPlan) -> tuple[str, int]:
    W = _system(plan.type)
    ts = _tuple(W, plan.tuple_text, plan.n)
    z = eval_Z(plan.n, ts)
    if plan.fmt == "json":
        return z.to_json() + "\n", 0
    obj = z.to_json_obj()
    if plan.fmt == "csv":
        return _csv(["root", "plus", "minus"], [[json.dumps(w["root"]), w["plus"], w["minus"]] for w in obj["walls"]]), 0
    if not obj["walls"]:
        return "0\n", 0
    lines = [f"{w['plus']:+d} D+{w['root']}  {w['minus']:+d} D-{w['root']}" for w in obj["walls"]]
    return "\n".join(lines) + "\n", 0


def run_verify(plan: CommandPlan) -> tuple[str, int]:
    _system(plan.type)
    names = SUITES.get(plan.suite, [plan.suite])
    for name in names:
        if name not in CHECKS:
            raise UsageError(f"unknown suite {plan.suite!r}; choose from {', '.join(sorted(set(SUITES) | set(CHECKS)))}")
    try:
        results = run_checks(plan.type, names, [plan.n], plan.cfg, jobs=plan.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    ok = all(r.passed for r in results)
    if plan.fmt == "json":
        text = _dump({"type": plan.type, "n": plan.n, "passed": ok, "results": [r.to_json_obj() for r in results]})
    elif plan.fmt == "csv":
        rows = [[r.name, r.type, r.n, r.mode, r.checked, r.passed, " | ".join(r.failures)] for r in results]
        text = _csv(["check", "type", "n", "mode", "checked", "passed", "failures"], rows)
    else:
        lines = []
        for r in results:
            lines.append(r.line())
            lines.extend(f"    counterexample: {f}" for f in r.failures)
        lines.append("all passed" if ok else "FAILURES found")
        text = "\n".join(lines) + "\n"
    return text, 0 if ok else 1


def _omega_types(text):
    if text == "all":
        return sorted(load_expectations()["types"])
    return [t.strip() for t in text.split(",") if t.strip()]


def run_omega(plan: CommandPlan) -> tuple[str, int]:
    reports, problems = [], []
    expectations = load_expectations() if plan.against_paper else None
    for t in _omega_types(plan.type):
        W = _system(t)
        if len(W.factors) != 1 or not W.factors[0].is_weyl:
            raise UsageError(f"--type: {t} is not an irreducible Weyl type")
        r = classify_restrictions(W)
        reports.append(r)
        if expectations is not None:
            problems += diff_against_expectations(r, expectations)
    if plan.fmt == "json":
        obj = [r.to_json_obj() for r in reports]
        if plan.against_paper:
            obj = {"reports": obj, "mismatches": problems}
        text = _dump(obj)
    elif plan.fmt == "csv":
        text = reports_to_csv(reports)
    else:
        lines = []
        for r in reports:
            head = f"{r.type}: Omega = {r.omega_shape}"
            if r.perp_type:
                head += f", W(Omega) of type {r.perp_type}"
            lines.append(head + f", {r.wall_orbits} wall orbit(s)")
            if r.omega_shape == "1":
                lines.append("  Omega has odd order; nothing to classify")
                continue
            for s in r.subgroups:
                coords = "" if s.coordinates is None else " coords=(" + ",".join(map(str, s.coordinates)) + ")"
                gens = "; ".join(s.generators) or "-"
                lines.append(f"  {s.name:<10} order {s.order} index {s.index}  {s.verdict:<10}{coords}  gens: {gens}")
        if plan.against_paper:
            lines.extend(f"MISMATCH {p}" for p in problems)
            lines.append("matches expectations" if not problems else f"{len(problems)} mismatch(es)")
        text = "\n".join(lines) + "\n"
    return text, 1 if problems else 0


def run_extension(plan: CommandPlan) -> tuple[str, int]:
    W = _system(plan.type)
    ts = _tuple(W, plan.tuple_text, None)
    if len(ts) < 1:
        raise UsageError("--tuple: need at least one entry")
    acc = ExtensionElement({}, ts[0])
    for x in ts[1:]:
        acc = acc * ExtensionElement({}, x)
    walls = [{"root": W.root_json(w), "coefficient": c} for w, c in sorted(acc.chain.items())]
    walls.sort(key=lambda d: json.dumps(d["root"]))
    obj = {"type": W.descriptor, "factors": format_tuple(ts), "chain": walls, "element": format_word(acc.x)}
    if plan.fmt == "json":
        return _dump(obj), 0
    if plan.fmt == "csv":
        return _csv(["root", "coefficient"], [[json.dumps(w["root"]), w["coefficient"]] for w in walls]), 0
    chain = " ".join(f"{w['coefficient']:+d}[H{w['root']}]" for w in walls) or "0"
    return f"({chain}, {obj['element']})\n", 0


RUNNERS = {"eps": run_eps, "zn": run_zn, "verify": run_verify, "omega": run_omega, "extension": run_extension}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", "-t", required=True, help='type descriptor, e.g. A3, I2(5), A1xA2 (omega also takes "all")')
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="coxsigns", description="Higher sign cocycles of finite Coxeter groups.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("eps", "evaluate epsilon_n"), ("zn", "evaluate Z_n as a chain of half-spaces")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("-n", type=int, required=True)
        q.add_argument("--tuple", required=True, help='words separated by commas, e.g. "1 2, 2"')
        if name == "eps":
            q.add_argument("--backend", choices=["chamber", "inversion", "both"], default="both")
            q.add_argument("--orbits", action="store_true", help="also print the refinement by wall orbit")

    q = sub.add_parser("verify", parents=[common], help="run a property sweep")
    q.add_argument("suite", help=f"one of: {', '.join(sorted(set(SUITES) | set(CHECKS)))}")
    q.add_argument("-n", type=int, default=3)
    q.add_argument("--samples", type=int, default=10_000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--exhaustive", action="store_true", help="enumerate every tuple regardless of size")
    q.add_argument("--jobs", type=int, default=None, help="worker processes (default: $COXSIGNS_JOBS or 1)")

    q = sub.add_parser("omega", parents=[common], help="classify epsilon_3 on Omega and its subgroups")
    q.add_argument("--against-paper", action="store_true", help="diff against the shipped expectation table")

    q = sub.add_parser("extension", parents=[common], help="multiply (0, x1)(0, x2)... in the extension by walls")
    q.add_argument("--tuple", required=True)
    return p


def _jobs(value):
    if value is not None:
        return value
    env = os.environ.get("COXSIGNS_JOBS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise UsageError(f"COXSIGNS_JOBS must be an integer, got {env!r}") from None


def make_plan(args) -> CommandPlan:
    n = getattr(args, "n", 3)
    if args.command in ("eps", "zn", "verify") and n < 1:
        raise UsageError(f"-n must be positive, got {n}")
    samples = getattr(args, "samples", 10_000)
    if samples < 1:
        raise UsageError(f"--samples must be positive, got {samples}")
    jobs = _jobs(getattr(args, "jobs", None)) if args.command == "verify" else 1
    if jobs < 1:
        raise UsageError(f"--jobs must be positive, got {jobs}")
    cfg = SweepConfig(samples=samples, seed=getattr(args, "seed", 0), exhaustive=getattr(args, "exhaustive", False))
    return CommandPlan(
        command=args.command,
        type=args.type,
        n=n,
        tuple_text=getattr(args, "tuple", None),
        backend=getattr(args, "backend", "both"),
        cfg=cfg,
        fmt=args.format,
        output=args.output,
        jobs=jobs,
        suite=getattr(args, "suite", None),
        against_paper=getattr(args, "against_paper", False),
        orbits=getattr(args, "orbits", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        plan = make_plan(args)
        text, code = RUNNERS[plan.command](plan)
    except (UsageError, ArityError) as e:
        print(f"coxsigns {args.command}: error: {e}", file=sys.stderr)
        return 2
    if plan.output:
        with open(plan.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
