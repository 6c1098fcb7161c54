"""Independent checking of candidate unifiers.

Nothing here touches the search.  A candidate is checked by applying it to
the original equations and comparing normal forms, after checking the two
legality conditions on the substitution itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .colours import (
    CConst,
    ColourAlphabet,
    ColourTerm,
    colour_vars,
    equivalent,
    format_colour,
    formula_entails,
    substitute,
)
from .csubst import CSubstitution, Key, apply, check_legal
from .pretty import format_annotation, format_term
from .terms import (
    Const,
    Lam,
    Signature,
    Term,
    alpha_beta_eta_equal,
    free_vars,
    map_colours,
    normalize,
    replace_free,
    symbols,
    unarrow,
)

MAX_GROUNDINGS = 4096
BOTTOM_PREFIX = "bot_"


@dataclass(frozen=True)
class Failure:
    kind: str  # monochromicity | erasure | type | not-equal | forbidden | unsatisfiable
    message: str
    equation: Optional[int] = None


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[Failure, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def kinds(self) -> set[str]:
        return {f.kind for f in self.failures}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{f.kind}: {f.message}" for f in self.failures)


def _bottom(ty) -> Term:
    """``\\x1..xn. bot_b`` for a variable of type ``b1 -> .. -> bn -> b``."""
    args, base = unarrow(ty)
    body: Term = Const(BOTTOM_PREFIX + base.name, base)
    for a in reversed(args):
        body = Lam(a, body)
    return body


def _candidate_parts(candidate) -> tuple[CSubstitution, tuple, tuple]:
    if isinstance(candidate, CSubstitution):
        return candidate, (), ()
    return candidate.substitution, tuple(candidate.residual_colours), tuple(candidate.flex_flex)


def _colour_names(s: CSubstitution, equations: Sequence, residual: Iterable) -> list[str]:
    seen: dict[str, None] = {}

    def note(c: Optional[ColourTerm]) -> None:
        for v in colour_vars(c):
            seen.setdefault(v)

    for (_, c), m in s.term_part.items():
        note(c)
        for sym in symbols(m):
            note(sym.colour)
    for v, c in s.colour_part.items():
        seen.setdefault(v)
        note(c)
    for eq in equations:
        for t in (eq.lhs, eq.rhs):
            for sym in symbols(t):
                note(sym.colour)
    for d, c in residual:
        note(d)
        note(c)
    return list(seen)


def _groundings(names: list[str], s: CSubstitution, alphabet: Optional[ColourAlphabet]):
    """Ground values for every colour variable the colour part leaves open."""
    bound = {v: c for v, c in s.colour_part.items()}
    open_names = [v for v in names if v not in bound]
    constants = alphabet.constants if alphabet is not None else ()
    for values in itertools.islice(itertools.product(constants, repeat=len(open_names)), MAX_GROUNDINGS):
        g = {v: CConst(k) for v, k in zip(open_names, values)}
        full = {v: substitute(c, g) for v, c in bound.items()}
        full.update(g)
        yield full


def validate(candidate, equations: Sequence, sig: Signature) -> ValidationReport:
    """Check that ``candidate`` (a ``CSubstitution`` or a search result
    carrying one) is a legal coloured unifier of ``equations``.

    Variables left open by a pre-solution are closed with constant
    functions onto fresh bottom constants; open colour variables are
    grounded over the alphabet in every way the residual constraints allow.
    """
    s, residual, flex = _candidate_parts(candidate)
    alphabet = sig.alphabet
    allowed = set(sig.constants)

    flex_names = {v.name for e in flex for t in (e.lhs, e.rhs) for v in free_vars(t)}
    flex_names |= {v.name for m in s.term_part.values() for v in free_vars(m) if v.name not in sig.variables}

    def close(t: Term) -> Term:
        if not flex_names:
            return t
        return normalize(replace_free(t, lambda v: _bottom(v.type) if v.name in flex_names else None))

    failures: list[Failure] = []
    names = _colour_names(s, equations, residual)
    admissible = 0
    for grounding in _groundings(names, s, alphabet):

        def ground(c: Optional[ColourTerm]) -> Optional[ColourTerm]:
            return substitute(c, grounding)

        if not all(formula_entails(ground(d), ground(c), alphabet) for d, c in residual):
            continue
        admissible += 1
        inst = CSubstitution({k: close(map_colours(m, ground)) for k, m in s.term_part.items()}, grounding)
        failures += _check(inst, equations, sig, alphabet, allowed, close, grounding)
        if failures:
            break
    if admissible == 0:
        failures.append(Failure("unsatisfiable", "no grounding of the colour variables satisfies the constraints"))
    return ValidationReport(tuple(failures))


def _check(s, equations, sig, alphabet, allowed, close, grounding) -> list[Failure]:
    out = [Failure(v.condition, v.message) for v in check_legal(s, sig)]
    for key, m in s.term_part.items():
        for sym in symbols(m):
            if isinstance(sym, Const) and sym.name not in allowed and not sym.name.startswith(BOTTOM_PREFIX):
                out.append(Failure("forbidden", f"{_key_text(key)} mentions undeclared constant {sym.name}"))
    if out:
        return out
    for i, eq in enumerate(equations):
        lhs, rhs = close(apply(s, eq.lhs)), close(apply(s, eq.rhs))
        if not alpha_beta_eta_equal(lhs, rhs, alphabet, uncoloured_matches_any=True):
            where = ", ".join(f"{v} := {format_colour(c)}" for v, c in grounding.items())
            suffix = f" under {where}" if where else ""
            out.append(
                Failure("not-equal", f"equation {i}: {format_term(lhs)} differs from {format_term(rhs)}{suffix}", i)
            )
    return out


def _key_text(key: Key) -> str:
    return key[0] + format_annotation(key[1])


# golden comparison


def _colour_match(a: Optional[ColourTerm], b: Optional[ColourTerm], alphabet) -> bool:
    if a is None or b is None:
        return a is b
    return equivalent(a, b, alphabet)


def same_substitution(a: CSubstitution, b: CSubstitution, alphabet: Optional[ColourAlphabet]) -> bool:
    """Strict equality up to alpha-renaming and colour equivalence."""
    if len(a.term_part) != len(b.term_part) or set(a.colour_part) != set(b.colour_part):
        return False
    for v, c in a.colour_part.items():
        if not equivalent(c, b.colour_part[v], alphabet):
            return False
    unmatched = list(b.term_part.items())
    for (name, colour), m in a.term_part.items():
        for j, ((name2, colour2), n) in enumerate(unmatched):
            if name == name2 and _colour_match(colour, colour2, alphabet):
                try:
                    same = alpha_beta_eta_equal(m, n, alphabet)
                except TypeError:
                    same = False
                if same:
                    del unmatched[j]
                    break
        else:
            return False
    return True


@dataclass(frozen=True)
class Comparison:
    missing: tuple[CSubstitution, ...]
    unexpected: tuple[CSubstitution, ...]

    @property
    def ok(self) -> bool:
        return not self.missing and not self.unexpected


def compare_solution_sets(
    emitted: Sequence[CSubstitution], expected: Sequence[CSubstitution], alphabet: Optional[ColourAlphabet]
) -> Comparison:
    left = list(emitted)
    missing = []
    for e in expected:
        for j, s in enumerate(left):
            if same_substitution(s, e, alphabet):
                del left[j]
                break
        else:
            missing.append(e)
    return Comparison(tuple(missing), tuple(left))
