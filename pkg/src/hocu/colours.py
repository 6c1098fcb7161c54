"""Colour annotations: constants, variables and boolean colour formulae.

A ground formula is interpreted over a finite alphabet where exactly one
constant holds at a time, so ``~d`` means "any other constant".  Every
ground formula therefore denotes a set of alphabet constants, and
entailment between ground formulae is set inclusion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union


class AlphabetError(ValueError):
    """A colour constant that is not part of the active alphabet."""


@dataclass(frozen=True)
class ColourAlphabet:
    constants: tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.constants)
        object.__setattr__(self, "constants", names)
        if len(names) < 2:
            raise AlphabetError("a colour alphabet needs at least two constants")
        if any(not n for n in names):
            raise AlphabetError("colour constant names must be nonempty")
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate colour constants in {names}")

    def __contains__(self, name: object) -> bool:
        return name in self.constants

    def __iter__(self) -> Iterator[str]:
        return iter(self.constants)

    def __len__(self) -> int:
        return len(self.constants)


@dataclass(frozen=True)
class CConst:
    name: str


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class CNot:
    arg: "ColourTerm"


@dataclass(frozen=True)
class CAnd:
    left: "ColourTerm"
    right: "ColourTerm"


@dataclass(frozen=True)
class COr:
    left: "ColourTerm"
    right: "ColourTerm"


ColourTerm = Union[CConst, CVar, CNot, CAnd, COr]


def colour_vars(c: Optional[ColourTerm]) -> Iterator[str]:
    """Variable names in ``c``, left to right, possibly repeated."""
    match c:
        case CVar(name):
            yield name
        case CNot(arg):
            yield from colour_vars(arg)
        case CAnd(left, right) | COr(left, right):
            yield from colour_vars(left)
            yield from colour_vars(right)


def is_ground(c: ColourTerm) -> bool:
    return next(colour_vars(c), None) is None


def denote(c: ColourTerm, alphabet: Optional[ColourAlphabet]) -> frozenset[str]:
    """The set of alphabet constants that satisfy the ground formula ``c``."""
    match c:
        case CConst(name):
            if alphabet is None or name not in alphabet:
                raise AlphabetError(f"colour {name!r} is not in the declared alphabet")
            return frozenset((name,))
        case CNot(arg):
            inner = denote(arg, alphabet)
            return frozenset(alphabet.constants) - inner
        case CAnd(left, right):
            return denote(left, alphabet) & denote(right, alphabet)
        case COr(left, right):
            return denote(left, alphabet) | denote(right, alphabet)
        case CVar(name):
            raise ValueError(f"colour variable {name} has no denotation")
    raise TypeError(f"not a colour term: {c!r}")


def entails(ground: ColourTerm, formula: ColourTerm, alphabet: Optional[ColourAlphabet]) -> bool:
    """``ground |= formula`` for a single colour constant ``ground``."""
    if not isinstance(ground, CConst):
        raise TypeError(f"entails expects a colour constant on the left, got {ground!r}")
    if alphabet is None or ground.name not in alphabet:
        raise AlphabetError(f"colour {ground.name!r} is not in the declared alphabet")
    return ground.name in denote(formula, alphabet)


def formula_entails(d: ColourTerm, c: ColourTerm, alphabet: ColourAlphabet) -> bool:
    """Entailment between ground formulae: every constant satisfying d satisfies c."""
    return denote(d, alphabet) <= denote(c, alphabet)


def equivalent(a: ColourTerm, b: ColourTerm, alphabet: Optional[ColourAlphabet]) -> bool:
    """Ground formulae are equal when they denote the same constants; a
    variable equals only itself."""
    if a == b:
        return True
    if alphabet is None or not (is_ground(a) and is_ground(b)):
        return False
    return denote(a, alphabet) == denote(b, alphabet)


def substitute(c: Optional[ColourTerm], bindings: Mapping[str, ColourTerm]) -> Optional[ColourTerm]:
    if c is None or not bindings:
        return c
    match c:
        case CVar(name):
            return bindings.get(name, c)
        case CConst():
            return c
        case CNot(arg):
            return CNot(substitute(arg, bindings))
        case CAnd(left, right):
            return CAnd(substitute(left, bindings), substitute(right, bindings))
        case COr(left, right):
            return COr(substitute(left, bindings), substitute(right, bindings))
    raise TypeError(f"not a colour term: {c!r}")


def format_colour(c: ColourTerm) -> str:
    match c:
        case CConst(name) | CVar(name):
            return name
        case CNot(arg):
            return "~" + format_colour(arg)
        case CAnd(left, right):
            return f"({format_colour(left)} & {format_colour(right)})"
        case COr(left, right):
            return f"({format_colour(left)} | {format_colour(right)})"
    raise TypeError(f"not a colour term: {c!r}")


def _first_mention(terms: Iterable[Optional[ColourTerm]]) -> list[str]:
    seen: dict[str, None] = {}
    for t in terms:
        for v in colour_vars(t):
            seen.setdefault(v)
    return list(seen)


@dataclass(frozen=True)
class ColourStore:
    """Colour equations, entailment constraints and variable bindings.

    Stores are never mutated; every operation returns a new store, or
    ``None`` when the constraints became unsatisfiable.
    """

    alphabet: Optional[ColourAlphabet]
    bindings: Mapping[str, ColourTerm] = field(default_factory=dict)
    equations: tuple[tuple[ColourTerm, ColourTerm], ...] = ()
    entailments: tuple[tuple[ColourTerm, ColourTerm], ...] = ()

    def resolve(self, c: Optional[ColourTerm]) -> Optional[ColourTerm]:
        return substitute(c, self.bindings)

    def unify(self, a: ColourTerm, b: ColourTerm) -> Optional["ColourStore"]:
        return unify_colours(a, b, self)

    def entail(self, annotation: ColourTerm, bound: ColourTerm) -> Optional["ColourStore"]:
        return assert_entailment(annotation, bound, self)

    def mentioned_vars(self) -> list[str]:
        terms: list[Optional[ColourTerm]] = []
        for lhs, rhs in self.equations + self.entailments:
            terms += [lhs, rhs]
        return _first_mention(terms)

    def unbound_vars(self) -> list[str]:
        return _first_mention(self.resolve(v) for v in map(CVar, self.mentioned_vars()))

    def pending(self) -> list[tuple[ColourTerm, ColourTerm]]:
        """Entailments whose truth still depends on unbound variables."""
        out = []
        for d, c in self.entailments:
            d, c = self.resolve(d), self.resolve(c)
            if not (is_ground(d) and is_ground(c)) and d != c:
                out.append((d, c))
        return out

    def _holds(self, d: ColourTerm, c: ColourTerm) -> Optional[bool]:
        d, c = self.resolve(d), self.resolve(c)
        if d == c:
            return True
        if is_ground(d) and is_ground(c):
            return formula_entails(d, c, self.alphabet)
        return None

    def _bind(self, name: str, value: ColourTerm) -> Optional["ColourStore"]:
        step = {name: value}
        bindings = {k: substitute(v, step) for k, v in self.bindings.items()}
        bindings[name] = value
        store = ColourStore(self.alphabet, bindings, self.equations, self.entailments)
        for d, c in store.entailments:
            if store._holds(d, c) is False:
                return None
        return store


def _check_constants(c: ColourTerm, alphabet: Optional[ColourAlphabet]) -> None:
    match c:
        case CConst(name):
            if alphabet is None or name not in alphabet:
                raise AlphabetError(f"colour {name!r} is not in the declared alphabet")
        case CNot(arg):
            _check_constants(arg, alphabet)
        case CAnd(left, right) | COr(left, right):
            _check_constants(left, alphabet)
            _check_constants(right, alphabet)


def unify_colours(a: ColourTerm, b: ColourTerm, store: ColourStore) -> Optional[ColourStore]:
    """Solve ``a = b`` in ``store``; ``None`` signals a colour clash."""
    _check_constants(a, store.alphabet)
    _check_constants(b, store.alphabet)
    ra, rb = store.resolve(a), store.resolve(b)
    recorded = ColourStore(store.alphabet, store.bindings, store.equations + ((a, b),), store.entailments)
    if ra == rb:
        return recorded
    if isinstance(ra, CVar):
        if ra.name in set(colour_vars(rb)):
            return None
        return recorded._bind(ra.name, rb)
    if isinstance(rb, CVar):
        if rb.name in set(colour_vars(ra)):
            return None
        return recorded._bind(rb.name, ra)
    if is_ground(ra) and is_ground(rb):
        return recorded if equivalent(ra, rb, store.alphabet) else None
    # variables nested inside formulae are not solved symbolically
    return None


def assert_entailment(annotation: ColourTerm, bound: ColourTerm, store: ColourStore) -> Optional[ColourStore]:
    """Record ``annotation |= bound``; checked now if ground, else on binding."""
    _check_constants(annotation, store.alphabet)
    _check_constants(bound, store.alphabet)
    if store._holds(annotation, bound) is False:
        return None
    return ColourStore(store.alphabet, store.bindings, store.equations, store.entailments + ((annotation, bound),))


def solve_store(store: ColourStore, alphabet: Optional[ColourAlphabet] = None) -> list[dict[str, ColourTerm]]:
    """All groundings of the store's unbound variables to alphabet constants.

    Variables are taken in first-mention order and constants in alphabet
    order.  Each returned map also carries the (grounded) values of the
    variables that were already bound.
    """
    alphabet = alphabet or store.alphabet
    constants = alphabet.constants if alphabet is not None else ()
    free = store.unbound_vars()
    out = []
    for values in itertools.product(constants, repeat=len(free)):
        ground = {v: CConst(k) for v, k in zip(free, values)}
        full = {k: substitute(v, ground) for k, v in store.bindings.items()}
        full.update(ground)
        if all(equivalent(substitute(l, full), substitute(r, full), alphabet) for l, r in store.equations) and all(
            formula_entails(substitute(d, full), substitute(c, full), alphabet) for d, c in store.entailments
        ):
            out.append(full)
    return out
