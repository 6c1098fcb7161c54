"""The bundled regression corpus of worked problems.

Each ``.hocu`` file under ``corpus/`` carries its expected solution set
and, optionally, candidates that must be refused.  A file may also have a
golden derivation trace under ``corpus/traces/<id>.trace``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

from .colours import ColourTerm
from .dsl import ProblemFile, parse
from .terms import App, Const, Lam, Term
from .unifier import SearchConfig, solve_all
from .validate import compare_solution_sets, validate

# colouring convention per phenomenon: primary occurrences get the
# constant, the variable standing for the shared meaning its negation
CONVENTIONS = {
    "ellipsis": "pe on source parallel elements, ~pe on the ellipsis variable",
    "focus": "pf on focused occurrences, ~pf on the focus semantic value",
    "parallel": "ps on every parallel element occurrence, ~ps on the anaphor",
    "binding": "colour variables on c-commanded pronouns, ~pf elsewhere",
    "none": "uncoloured",
}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    phenomenon: str
    convention: str


ENTRIES = (
    CorpusEntry("01-ellipsis-uncoloured", "VP ellipsis, plain unification", CONVENTIONS["none"]),
    CorpusEntry("02-ellipsis", "VP ellipsis", CONVENTIONS["ellipsis"]),
    CorpusEntry("03-colour-variable", "colour variable absorbs a constant", "constants a, b"),
    CorpusEntry("04-colour-clash", "colour clash", "constants a, b"),
    CorpusEntry("05-focus", "focus semantic value", CONVENTIONS["focus"]),
    CorpusEntry("06-focus-uncoloured", "focus semantic value, plain unification", CONVENTIONS["none"]),
    CorpusEntry("07-second-occurrence", "second occurrence expression", CONVENTIONS["parallel"]),
    CorpusEntry("08-second-occurrence-uncoloured", "second occurrence expression, plain", CONVENTIONS["none"]),
    CorpusEntry("09-adverbial", "adverbial quantification", CONVENTIONS["parallel"]),
    CorpusEntry("10-adverbial-uncoloured", "adverbial quantification, plain", CONVENTIONS["none"]),
    CorpusEntry("11-ellipsis-and-focus", "interaction of ellipsis and focus", CONVENTIONS["ellipsis"]),
    CorpusEntry("12-crossover-bound", "weak crossover, c-commanded pronoun", CONVENTIONS["binding"]),
    CorpusEntry("13-crossover-free", "weak crossover, focused pronoun", CONVENTIONS["binding"]),
    CorpusEntry("14-flex-rigid", "imitation and projection", CONVENTIONS["none"]),
    CorpusEntry("15-variant-clash", "coloured variants of one variable", "constants c, d"),
)


def _dir():
    return resources.files("hocu") / "corpus"


def entry_text(entry_id: str) -> str:
    return (_dir() / f"{entry_id}.hocu").read_text(encoding="utf-8")


def load(entry_id: str) -> ProblemFile:
    return parse(entry_text(entry_id))


def golden_trace(entry_id: str) -> Optional[list[str]]:
    path = _dir() / "traces" / f"{entry_id}.trace"
    if not path.is_file():
        return None
    return path.read_text(encoding="utf-8").splitlines()


_FRESH = re.compile(r"\b([HcB])(\d+)\b")


def canonical_trace(lines: Iterable[str]) -> list[str]:
    """Rename fresh names (H1, c1, B1, ...) by order of first appearance."""
    names: dict[str, str] = {}
    counts: dict[str, int] = {}

    def rename(m: re.Match) -> str:
        name = m.group()
        if name not in names:
            counts[m.group(1)] = counts.get(m.group(1), 0) + 1
            names[name] = f"{m.group(1)}{counts[m.group(1)]}"
        return names[name]

    return [_FRESH.sub(rename, line) for line in lines]


def run_trace(pf: ProblemFile, cfg: SearchConfig = SearchConfig()) -> list[str]:
    lines: list[str] = []
    solve_all(pf.problem(), cfg, trace=lines.append)
    return lines


@dataclass(frozen=True)
class EntryResult:
    id: str
    passed: bool
    problems: tuple[str, ...]


def check_entry(entry_id: str, cfg: SearchConfig = SearchConfig()) -> EntryResult:
    pf = load(entry_id)
    sig = pf.signature()
    lines: list[str] = []
    result = solve_all(pf.problem(), cfg, trace=lines.append)
    problems = []
    for k, sol in enumerate(result.solutions, 1):
        report = validate(sol, pf.equations, sig)
        if not report.ok:
            problems.append(f"solution {k} fails validation: {report}")
    if pf.expected is not None:
        cmp = compare_solution_sets([s.substitution for s in result.solutions], pf.expected, sig.alphabet)
        problems += [f"missing: {'; '.join(s.lines())}" for s in cmp.missing]
        problems += [f"unexpected: {'; '.join(s.lines())}" for s in cmp.unexpected]
    for k, cand in enumerate(pf.rejected, 1):
        if validate(cand, pf.equations, sig).ok:
            problems.append(f"rejected candidate {k} validates")
    golden = golden_trace(entry_id)
    if golden is not None and canonical_trace(lines) != canonical_trace(golden):
        problems.append("trace differs from the golden trace")
    return EntryResult(entry_id, not problems, tuple(problems))


@dataclass(frozen=True)
class CorpusSummary:
    results: tuple[EntryResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(f"{'PASS' if r.passed else 'FAIL'} {r.id}")
            out += [f"  {p}" for p in r.problems]
        return out


def run_corpus(cfg: SearchConfig = SearchConfig(), ids: Optional[Sequence[str]] = None) -> CorpusSummary:
    ids = ids or [e.id for e in ENTRIES]
    return CorpusSummary(tuple(check_entry(i, cfg) for i in ids))


class PathError(ValueError):
    pass


def encode_por(term: Term, markers: Iterable[tuple[int, ...]], colour: ColourTerm) -> Term:
    """Colour the constant occurrences at ``markers``.

    A path steps into ``App`` nodes with 0 (function) or 1 (argument) and
    into ``Lam`` nodes with 0 (body).
    """

    def at(t: Term, path: tuple[int, ...], full: tuple[int, ...]) -> Term:
        if not path:
            if not isinstance(t, Const):
                raise PathError(f"path {full} does not address a constant")
            return Const(t.name, t.type, colour)
        step, rest = path[0], path[1:]
        if isinstance(t, App) and step in (0, 1):
            return App(at(t.fun, rest, full), t.arg) if step == 0 else App(t.fun, at(t.arg, rest, full))
        if isinstance(t, Lam) and step == 0:
            return Lam(t.type, at(t.body, rest, full), t.hint)
        raise PathError(f"path {full} leaves the term")

    for path in markers:
        path = tuple(path)
        term = at(term, path, path)
    return term
