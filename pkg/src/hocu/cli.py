"""Command-line driver: ``hocu run``, ``hocu corpus`` and ``hocu print``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .corpus import run_corpus
from .dsl import ParseError, parse, print_problem
from .terms import KernelTypeError
from .unifier import BOUND_REACHED, EXHAUSTED, SearchConfig, SearchEnd, solve
from .validate import compare_solution_sets, validate

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def _read(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _config(args) -> SearchConfig:
    return SearchConfig(args.max_bindings, args.max_solutions, args.strategy)


def cmd_run(args) -> int:
    try:
        pf = _read(args.file)
    except (ParseError, KernelTypeError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.erase:
        pf = pf.erased()
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    solutions, status = [], EXHAUSTED
    for item in solve(pf.problem(), _config(args), trace):
        if isinstance(item, SearchEnd):
            status = item.status
            continue
        solutions.append(item)
        label = "pre-solution" if item.is_pre_solution else "solution"
        print(f"{label} {len(solutions)}:")
        for line in item.lines() or ["(empty substitution)"]:
            print(f"  {line}")
    if solutions:
        print(f"{len(solutions)} solution(s) ({status})")
    else:
        print(f"no solutions ({status})")

    code = EXIT_OK
    sig = pf.signature()
    if pf.expected is not None:
        cmp = compare_solution_sets([s.substitution for s in solutions], pf.expected, sig.alphabet)
        if cmp.ok:
            print("expectations met")
        else:
            for s in cmp.missing:
                print(f"missing expected solution: {'; '.join(s.lines())}")
            for s in cmp.unexpected:
                print(f"unexpected solution: {'; '.join(s.lines())}")
            code = EXIT_BOUND if status == BOUND_REACHED else EXIT_MISMATCH
    elif status == BOUND_REACHED and not solutions:
        code = EXIT_BOUND
    for k, cand in enumerate(pf.rejected, 1):
        report = validate(cand, pf.equations, sig)
        if report.ok:
            print(f"rejected candidate {k}: ACCEPTED")
            code = code or EXIT_MISMATCH
        else:
            print(f"rejected candidate {k}: refused ({', '.join(sorted(report.kinds))})")
    return code


def cmd_corpus(args) -> int:
    summary = run_corpus(_config(args))
    for line in summary.lines():
        print(line)
    return EXIT_OK if summary.passed else EXIT_MISMATCH


def cmd_print(args) -> int:
    try:
        pf = _read(args.file)
    except (ParseError, KernelTypeError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(print_problem(pf))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hocu", description="Higher-order coloured unification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-bindings", type=int, default=10, metavar="N")
        p.add_argument("--max-solutions", type=int, default=50, metavar="N")
        p.add_argument("--strategy", choices=("iterative", "dfs"), default="iterative")

    run = sub.add_parser("run", help="solve the equations of a problem file")
    run.add_argument("file")
    search_flags(run)
    run.add_argument("--trace", action="store_true", help="log rule applications on stderr")
    run.add_argument("--erase", action="store_true", help="solve the colour-erased problem")
    run.set_defaults(func=cmd_run)

    corpus = sub.add_parser("corpus", help="check every bundled problem")
    search_flags(corpus)
    corpus.set_defaults(func=cmd_corpus)

    pr = sub.add_parser("print", help="reprint a problem file in canonical form")
    pr.add_argument("file")
    pr.set_defaults(func=cmd_print)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"hocu: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
