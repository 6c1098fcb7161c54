"""Concrete syntax for terms, in the same notation the problem parser reads.

    like(dan_pe, golf)     R_~pe(dan_pe)     \\x y. ex_~pf(y, x, i_(pe | ps))
"""

from __future__ import annotations

from typing import Optional

from .colours import ColourTerm, format_colour
from .terms import BoundVar, Const, FreeVar, Lam, SimpleType, Term, spine, symbols


def format_type(ty: SimpleType) -> str:
    return str(ty)


def format_annotation(c: Optional[ColourTerm]) -> str:
    # compound formulae already print parenthesized
    return "" if c is None else "_" + format_colour(c)


def format_term(t: Term, typed: bool = False) -> str:
    """Print ``t``; with ``typed`` every binder carries its type."""
    taken = {s.name for s in symbols(t)}
    return _fmt(t, [], taken, typed)


def _fresh(hint: str, avoid: set[str]) -> str:
    if hint not in avoid:
        return hint
    n = 1
    while f"{hint}{n}" in avoid:
        n += 1
    return f"{hint}{n}"


def _fmt(t: Term, names: list[str], taken: set[str], typed: bool) -> str:
    if isinstance(t, Lam):
        binders = []
        scope = list(names)
        while isinstance(t, Lam):
            name = _fresh(t.hint, taken | set(scope))
            binders.append(f"{name}:{format_type(t.type)}" if typed else name)
            scope.insert(0, name)
            t = t.body
        return "\\" + " ".join(binders) + ". " + _fmt(t, scope, taken, typed)
    head, args = spine(t)
    match head:
        case Const(name, _, c) | FreeVar(name, _, c):
            text = name + format_annotation(c)
        case BoundVar(i, _):
            text = names[i] if i < len(names) else f"#{i}"
        case _:
            text = "(" + _fmt(head, names, taken, typed) + ")"
    if args:
        text += "(" + ", ".join(_fmt(a, names, taken, typed) for a in args) + ")"
    return text
