"""Coloured simply-typed lambda terms.

Bound variables are de Bruijn indices, so alpha-equivalent terms are equal
as Python values.  ``Lam.hint`` only remembers a preferred binder name for
printing and takes no part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

from .colours import ColourAlphabet, ColourStore, ColourTerm, equivalent


class KernelTypeError(TypeError):
    def __init__(self, message: str, node: object = None):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    arg: "SimpleType"
    res: "SimpleType"

    def __str__(self) -> str:
        left = f"({self.arg})" if isinstance(self.arg, Arrow) else str(self.arg)
        return f"{left} -> {self.res}"


SimpleType = Union[Base, Arrow]


def arrow(*types: SimpleType) -> SimpleType:
    """``arrow(a, b, c)`` is ``a -> (b -> c)``."""
    out = types[-1]
    for t in reversed(types[:-1]):
        out = Arrow(t, out)
    return out


def unarrow(ty: SimpleType) -> tuple[list[SimpleType], Base]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.arg)
        ty = ty.res
    return args, ty


@dataclass(frozen=True)
class Const:
    name: str
    type: SimpleType
    colour: Optional[ColourTerm] = None


@dataclass(frozen=True)
class FreeVar:
    name: str
    type: SimpleType
    colour: Optional[ColourTerm] = None


@dataclass(frozen=True)
class BoundVar:
    index: int
    type: SimpleType


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    type: SimpleType
    body: "Term"
    hint: str = field(default="x", compare=False)


Term = Union[Const, FreeVar, BoundVar, App, Lam]
Symbol = Union[Const, FreeVar]


@dataclass
class Signature:
    base_types: tuple[str, ...] = ()
    constants: dict[str, tuple[SimpleType, Optional[ColourTerm]]] = field(default_factory=dict)
    variables: dict[str, tuple[SimpleType, Optional[ColourTerm]]] = field(default_factory=dict)
    alphabet: Optional[ColourAlphabet] = None

    def names(self) -> set[str]:
        return set(self.constants) | set(self.variables) | set(self.base_types)


def app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def type_of(t: Term) -> SimpleType:
    match t:
        case Const(type=ty) | FreeVar(type=ty) | BoundVar(type=ty):
            return ty
        case App(fun, _):
            ft = type_of(fun)
            if not isinstance(ft, Arrow):
                raise KernelTypeError(f"cannot apply a term of type {ft}", t)
            return ft.res
        case Lam(ty, body):
            return Arrow(ty, type_of(body))
    raise TypeError(f"not a term: {t!r}")


def typecheck(t: Term, sig: Optional[Signature] = None, ctx: Sequence[SimpleType] = ()) -> SimpleType:
    """Type of ``t``; ``ctx[0]`` is the innermost binder's type."""
    match t:
        case Const(name, ty):
            if sig is not None:
                if name not in sig.constants:
                    raise KernelTypeError(f"undeclared constant {name}", t)
                if sig.constants[name][0] != ty:
                    raise KernelTypeError(f"constant {name} used at {ty}, declared {sig.constants[name][0]}", t)
            return ty
        case FreeVar(name, ty):
            if sig is not None:
                if name not in sig.variables:
                    raise KernelTypeError(f"undeclared variable {name}", t)
                if sig.variables[name][0] != ty:
                    raise KernelTypeError(f"variable {name} used at {ty}, declared {sig.variables[name][0]}", t)
            return ty
        case BoundVar(i, ty):
            if i >= len(ctx):
                raise KernelTypeError(f"dangling bound variable #{i}", t)
            if ctx[i] != ty:
                raise KernelTypeError(f"bound variable #{i} used at {ty}, bound at {ctx[i]}", t)
            return ty
        case App(fun, arg):
            ft = typecheck(fun, sig, ctx)
            at = typecheck(arg, sig, ctx)
            if not isinstance(ft, Arrow):
                raise KernelTypeError(f"type mismatch: head of type {ft} is not a function", t)
            if ft.arg != at:
                raise KernelTypeError(f"type mismatch: expected argument of type {ft.arg}, got {at}", t)
            return ft.res
        case Lam(ty, body):
            return Arrow(ty, typecheck(body, sig, (ty, *ctx)))
    raise TypeError(f"not a term: {t!r}")


# de Bruijn plumbing


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    match t:
        case BoundVar(i, ty):
            return BoundVar(i + d, ty) if i >= cutoff else t
        case App(fun, arg):
            return App(shift(fun, d, cutoff), shift(arg, d, cutoff))
        case Lam(ty, body, hint):
            return Lam(ty, shift(body, d, cutoff + 1), hint)
    return t


def _subst(t: Term, j: int, s: Term) -> Term:
    match t:
        case BoundVar(i, _):
            return s if i == j else t
        case App(fun, arg):
            return App(_subst(fun, j, s), _subst(arg, j, s))
        case Lam(ty, body, hint):
            return Lam(ty, _subst(body, j + 1, shift(s, 1)), hint)
    return t


def instantiate(body: Term, arg: Term) -> Term:
    """Body of a binder with its variable replaced by ``arg``."""
    return shift(_subst(body, 0, shift(arg, 1)), -1)


def normalize(t: Term) -> Term:
    """Eta-long beta-normal form."""
    if isinstance(t, Lam):
        return Lam(t.type, normalize(t.body), t.hint)
    head, args = spine(t)
    if isinstance(head, Lam):
        return normalize(app(instantiate(head.body, args[0]), *args[1:]))
    return _eta_expand(app(head, *(normalize(a) for a in args)))


def _eta_expand(neutral: Term) -> Term:
    ty = type_of(neutral)
    if not isinstance(ty, Arrow):
        return neutral
    var = _eta_expand(BoundVar(0, ty.arg))
    return Lam(ty.arg, _eta_expand(App(shift(neutral, 1), var)), _hint_for(ty.arg))


def _hint_for(ty: SimpleType) -> str:
    return "P" if isinstance(ty, Arrow) else "z"


def is_normal(t: Term) -> bool:
    """True for eta-long beta-normal terms."""
    if isinstance(t, Lam):
        return is_normal(t.body)
    head, args = spine(t)
    if isinstance(head, Lam) or isinstance(type_of(t), Arrow):
        return False
    return all(is_normal(a) for a in args)


def erase(t: Term) -> Term:
    return map_colours(t, lambda c: None)


def map_colours(t: Term, fn: Callable[[Optional[ColourTerm]], Optional[ColourTerm]]) -> Term:
    match t:
        case Const(name, ty, c):
            return Const(name, ty, fn(c))
        case FreeVar(name, ty, c):
            return FreeVar(name, ty, fn(c))
        case App(fun, arg):
            return App(map_colours(fun, fn), map_colours(arg, fn))
        case Lam(ty, body, hint):
            return Lam(ty, map_colours(body, fn), hint)
    return t


def symbols(t: Term) -> Iterator[Symbol]:
    """Constant and free-variable occurrences, left to right."""
    match t:
        case Const() | FreeVar():
            yield t
        case App(fun, arg):
            yield from symbols(fun)
            yield from symbols(arg)
        case Lam(_, body):
            yield from symbols(body)


def free_vars(t: Term) -> Iterator[FreeVar]:
    return (s for s in symbols(t) if isinstance(s, FreeVar))


def replace_free(t: Term, fn: Callable[[FreeVar], Optional[Term]]) -> Term:
    """Replace free-variable occurrences by closed terms (no renormalization)."""
    match t:
        case FreeVar():
            out = fn(t)
            return t if out is None else out
        case App(fun, arg):
            return App(replace_free(fun, fn), replace_free(arg, fn))
        case Lam(ty, body, hint):
            return Lam(ty, replace_free(body, fn), hint)
    return t


def _same(a: Term, b: Term, colours_equal: Callable[[Optional[ColourTerm], Optional[ColourTerm]], bool]) -> bool:
    match a, b:
        case Const(n1, t1, c1), Const(n2, t2, c2):
            return n1 == n2 and t1 == t2 and colours_equal(c1, c2)
        case FreeVar(n1, t1, c1), FreeVar(n2, t2, c2):
            return n1 == n2 and t1 == t2 and colours_equal(c1, c2)
        case BoundVar(), BoundVar():
            return a == b
        case App(f1, a1), App(f2, a2):
            return _same(f1, f2, colours_equal) and _same(a1, a2, colours_equal)
        case Lam(t1, b1), Lam(t2, b2):
            return t1 == t2 and _same(b1, b2, colours_equal)
    return False


def alpha_beta_eta_equal(
    a: Term, b: Term, alphabet: Optional[ColourAlphabet] = None, uncoloured_matches_any: bool = False
) -> bool:
    """Equality of normal forms, comparing annotations as colours.

    Ground annotations compare by logical equivalence over ``alphabet``; a
    colour variable equals only itself.  With ``uncoloured_matches_any`` an
    unannotated symbol matches a peer of any colour.
    """
    if type_of(a) != type_of(b):
        raise KernelTypeError(f"cannot compare terms of types {type_of(a)} and {type_of(b)}")

    def colours_equal(c1: Optional[ColourTerm], c2: Optional[ColourTerm]) -> bool:
        if c1 is None or c2 is None:
            return c1 is c2 or uncoloured_matches_any
        return equivalent(c1, c2, alphabet)

    return _same(normalize(a), normalize(b), colours_equal)


def monochrome_constraints(t: Term, colour: Optional[ColourTerm], store: ColourStore) -> Optional[ColourStore]:
    """Assert ``d |= colour`` for every annotated symbol of ``t``."""
    if colour is None:
        return store
    for sym in symbols(t):
        if sym.colour is not None:
            store = store.entail(sym.colour, colour)
            if store is None:
                return None
    return store
