"""Command-line interface.

Exit codes: 0 success, 1 failed verification or a manipulation was found,
2 usage errors, 3 parse errors.  Output is deterministic: identical inputs
and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .caw import solve_caw
from .fileio import ParseError, emit_instance, emit_matching, parse_instance, parse_matching
from .generator import generated_instance
from .oracles import (
    find_dominator,
    manipulation_search,
    pareto_stable_set,
    rationality_violations,
    strongly_blocking_pairs,
    two_phase_baseline,
    weakly_stable_set,
)
from .smiw import (
    SmiwInstance,
    UNMATCHED,
    UtilityAssignment,
    canonical_assignment,
    solve_smiw,
    threshold_without_man,
)

__all__ = ["cli_main", "main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretomatch",
        description="Strategyproof Pareto-stable matching with weak preferences.",
        epilog=(
            "College instance files may carry 'college <j> utility: <i>:<int> ...' "
            "lines, switching group preferences to additive-utility mode; students "
            "missing from a line default to the canonical rank-difference utility. "
            "Exit codes: 0 success, 1 failed verification or manipulation found, "
            "2 usage error, 3 parse error."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute the mechanism's matching")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--utilities",
        help=(
            "file of 'woman <j> utility: <i>:<int> ...' lines overriding the "
            "canonical utility assignment (marriage instances only); women "
            "without a line, and unlisted men, keep their canonical values"
        ),
    )

    p = sub.add_parser("verify", help="check a matching file against an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--matching", required=True)
    p.add_argument("--check", choices=["ir", "stable", "pareto", "all"], default="all")

    p = sub.add_parser("enumerate", help="list the weakly or Pareto-stable matchings")
    p.add_argument("--input", required=True)
    p.add_argument("--set", choices=["stable", "pareto"], required=True)

    p = sub.add_parser("manipulate", help="sweep every misreport for one agent")
    p.add_argument("--input", required=True)
    p.add_argument("--agent", type=int, required=True)
    p.add_argument("--mechanism", choices=["paper", "two-phase"], default="paper")

    p = sub.add_parser("threshold", help="threshold of a woman's item without one man")
    p.add_argument("--input", required=True)
    p.add_argument("--item", type=int, required=True)
    p.add_argument("--exclude-man", type=int, required=True)

    p = sub.add_parser("baseline", help="run the two-phase baseline mechanism")
    p.add_argument("--input", required=True)

    p = sub.add_parser("gen", help="print a random instance, reproducible from the seed")
    p.add_argument("--kind", choices=["smiw", "caw"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tie-prob", type=float, default=0.3)
    p.add_argument("--max-cap", type=int, default=2)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc


class _UsageError(Exception):
    pass


def _load_instance(path: str):
    return parse_instance(_read(path))


def _parse_utility_override(text: str, instance: SmiwInstance) -> UtilityAssignment:
    tables = [dict(t) for t in canonical_assignment(instance).per_woman]
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        m = re.fullmatch(r"woman\s+(\d+)\s+utility\s*:\s*(.+)", body)
        if not m:
            raise ParseError("expected 'woman <j> utility: <i>:<int> ...'", number)
        j = int(m.group(1))
        if not 1 <= j <= instance.n_women:
            raise ParseError(f"unknown index {j}", number)
        for token in m.group(2).split():
            entry = re.fullmatch(r"(\d+):(-?\d+)", token)
            if not entry:
                raise ParseError(f"bad utility entry {token!r}", number)
            i, value = int(entry.group(1)), int(entry.group(2))
            if not 1 <= i <= instance.n_men:
                raise ParseError(f"unknown index {i}", number)
            tables[j - 1][i] = value
    return UtilityAssignment(tuple(tables))


def _cmd_solve(args) -> int:
    instance = _load_instance(args.input)
    if isinstance(instance, SmiwInstance):
        utilities = None
        if args.utilities:
            utilities = _parse_utility_override(_read(args.utilities), instance)
        outcome = solve_smiw(instance, utilities)
    else:
        if args.utilities:
            raise _UsageError("--utilities applies to SMIW inputs only; "
                              "college tables belong in the instance file")
        outcome = solve_caw(instance)
    sys.stdout.write(emit_matching(outcome))
    return 0


def _cmd_verify(args) -> int:
    instance = _load_instance(args.input)
    outcome = parse_matching(_read(args.matching), instance)
    violations: list[str] = []
    if args.check in ("ir", "stable", "all"):
        violations.extend(rationality_violations(instance, outcome))
    if args.check in ("stable", "all"):
        for i, j in strongly_blocking_pairs(instance, outcome):
            left = "man" if isinstance(instance, SmiwInstance) else "student"
            right = "woman" if isinstance(instance, SmiwInstance) else "college"
            violations.append(f"blocking pair ({left} {i}, {right} {j})")
    if args.check in ("pareto", "all"):
        if outcome not in weakly_stable_set(instance):
            violations.append("pareto: matching is not weakly stable")
        else:
            dominator = find_dominator(instance, outcome)
            if dominator is not None:
                body = emit_matching(dominator).splitlines()[1:]
                violations.append("pareto: dominated by: " + "; ".join(body))
    for v in violations:
        sys.stdout.write(v + "\n")
    return 1 if violations else 0


def _cmd_enumerate(args) -> int:
    instance = _load_instance(args.input)
    chosen = weakly_stable_set(instance) if args.set == "stable" else pareto_stable_set(instance)
    blocks = sorted(emit_matching(m) for m in chosen)
    sys.stdout.write("\n".join(blocks))
    return 0


def _cmd_manipulate(args) -> int:
    instance = _load_instance(args.input)
    if args.mechanism == "two-phase":
        if not isinstance(instance, SmiwInstance):
            raise _UsageError("--mechanism two-phase applies to SMIW inputs only")
        mechanism = two_phase_baseline
    else:
        mechanism = None
    left = "man" if isinstance(instance, SmiwInstance) else "student"
    n_left = instance.n_men if isinstance(instance, SmiwInstance) else instance.n_students
    if not 1 <= args.agent <= n_left:
        raise _UsageError(f"agent index {args.agent} out of range")
    reports = manipulation_search(instance, args.agent, mechanism)
    improving = [r for r in reports if r.improved]
    for r in improving:
        tiers = " | ".join(
            " ".join("_" if a == UNMATCHED else str(a) for a in sorted(t))
            for t in r.misreport.tiers
        )
        got = "_" if r.misreport_result == UNMATCHED else r.misreport_result
        had = "_" if r.truthful_result == UNMATCHED else r.truthful_result
        sys.stdout.write(
            f"improving misreport for {left} {r.agent}: {tiers} "
            f"=> partner {got} (truthful {had})\n"
        )
    return 1 if improving else 0


def _cmd_threshold(args) -> int:
    instance = _load_instance(args.input)
    if not isinstance(instance, SmiwInstance):
        raise _UsageError("threshold applies to SMIW inputs only")
    if not 1 <= args.exclude_man <= instance.n_men:
        raise _UsageError(f"man index {args.exclude_man} out of range")
    if not 1 <= args.item <= instance.n_women:
        raise _UsageError(f"item index {args.item} out of range")
    pair = threshold_without_man(instance, args.exclude_man, args.item)
    sys.stdout.write(f"{pair.weight} {pair.priority}\n")
    return 0


def _cmd_baseline(args) -> int:
    instance = _load_instance(args.input)
    if not isinstance(instance, SmiwInstance):
        raise _UsageError("baseline applies to SMIW inputs only")
    sys.stdout.write(emit_matching(two_phase_baseline(instance)))
    return 0


def _cmd_gen(args) -> int:
    if not 0.0 <= args.tie_prob <= 1.0:
        raise _UsageError("--tie-prob must be in [0, 1]")
    if args.max_cap < 1:
        raise _UsageError("--max-cap must be positive")
    instance = generated_instance(args.kind, args.n, args.seed, args.tie_prob, args.max_cap)
    sys.stdout.write(emit_instance(instance))
    return 0


_HANDLERS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
    "manipulate": _cmd_manipulate,
    "threshold": _cmd_threshold,
    "baseline": _cmd_baseline,
    "gen": _cmd_gen,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except (_UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
