"""Coloured substitutions: a term part keyed by (variable, colour) pairs and a
colour part binding colour variables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .colours import ColourTerm, CVar, format_colour, formula_entails, is_ground, substitute
from .pretty import format_annotation, format_term
from .terms import FreeVar, Signature, Term, erase, map_colours, normalize, replace_free, symbols, type_of

Key = tuple[str, Optional[ColourTerm]]


@dataclass(frozen=True)
class CSubstitution:
    term_part: Mapping[Key, Term] = field(default_factory=dict)
    colour_part: Mapping[str, ColourTerm] = field(default_factory=dict)

    def erased(self) -> "CSubstitution":
        """The classical substitution underneath (meaningful when legal)."""
        return CSubstitution({(name, None): erase(m) for (name, _), m in self.term_part.items()})

    def lines(self) -> list[str]:
        """Serialized form, one binding per line in a fixed key order."""
        out = [
            f"{name}{format_annotation(c)} = {format_term(m)}"
            for (name, c), m in sorted(self.term_part.items(), key=lambda kv: _key_text(kv[0]))
        ]
        out += [f"{v} := {format_colour(c)}" for v, c in sorted(self.colour_part.items())]
        return out


def _key_text(key: Key) -> str:
    return key[0] + format_annotation(key[1])


@dataclass(frozen=True)
class Violation:
    condition: str  # "erasure" | "monochromicity" | "type"
    keys: tuple[Key, ...]
    message: str


def check_legal(s: CSubstitution, sig: Optional[Signature] = None) -> list[Violation]:
    """Violations of the two legality conditions (and of typing); empty if legal."""
    alphabet = sig.alphabet if sig is not None else None
    out: list[Violation] = []
    by_name: dict[str, list[Key]] = {}
    for key, m in s.term_part.items():
        by_name.setdefault(key[0], []).append(key)
        if sig is not None and key[0] in sig.variables and type_of(m) != sig.variables[key[0]][0]:
            out.append(Violation("type", (key,), f"{_key_text(key)} is bound to a term of type {type_of(m)}"))
    for name, keys in by_name.items():
        erasures = [normalize(erase(s.term_part[k])) for k in keys]
        if any(e != erasures[0] for e in erasures[1:]):
            out.append(Violation("erasure", tuple(keys), f"coloured variants of {name} have different colour erasures"))
    for key, m in s.term_part.items():
        c = substitute(key[1], s.colour_part)
        if c is None or not is_ground(c):
            continue
        for sym in symbols(m):
            d = substitute(sym.colour, s.colour_part)
            if d is None or not is_ground(d):
                continue
            if alphabet is None:
                ok = d == c
            else:
                ok = formula_entails(d, c, alphabet)
            if not ok:
                out.append(
                    Violation(
                        "monochromicity",
                        (key,),
                        f"{_key_text(key)} is not {format_colour(c)}-monochrome: it contains "
                        f"{sym.name}{format_annotation(d)}",
                    )
                )
                break
    return out


def apply(s: CSubstitution, term: Term) -> Term:
    """Instantiate ``term`` and return its normal form."""

    def colour(c: Optional[ColourTerm]) -> Optional[ColourTerm]:
        return substitute(c, s.colour_part)

    def image(v: FreeVar) -> Term:
        if (v.name, v.colour) in s.term_part:
            return s.term_part[(v.name, v.colour)]
        c = colour(v.colour)
        if (v.name, c) in s.term_part:
            return s.term_part[(v.name, c)]
        return FreeVar(v.name, v.type, c)

    return normalize(map_colours(replace_free(term, image), colour))


def compose(outer: CSubstitution, inner: CSubstitution) -> CSubstitution:
    """``apply(compose(o, i), M) == apply(o, apply(i, M))``."""
    term_part: dict[Key, Term] = {k: apply(outer, m) for k, m in inner.term_part.items()}
    for k, m in outer.term_part.items():
        if k not in term_part and not (isinstance(k[1], CVar) and k[1].name in inner.colour_part):
            term_part[k] = m
    colour_part = {v: substitute(c, outer.colour_part) for v, c in inner.colour_part.items()}
    for v, c in outer.colour_part.items():
        colour_part.setdefault(v, c)
    return CSubstitution(term_part, colour_part)


def restrict(s: CSubstitution, names: set[str], colour_names: set[str]) -> CSubstitution:
    return CSubstitution(
        {k: m for k, m in s.term_part.items() if k[0] in names},
        {v: c for v, c in s.colour_part.items() if v in colour_names},
    )
