"""The ``.hocu`` problem format.

    colours pe, pf;
    types e, t;
    const like : e -> e -> t;
    const dan : e @ pe;
    var R : e -> t @ ~pe;
    eq like(dan, golf) = R(dan);
    expect { R_~pe = \\x. like(x, golf); }

Declared colours (after ``@``) are the defaults for unannotated
occurrences; ``name_colour`` overrides them at a single occurrence.
Single capital letters, optionally followed by digits, are colour
variables.  ``(`` directly after a term opens an argument list, while a
``(`` preceded by whitespace starts a parenthesized term, so both
``like(dan, golf)`` and ``like dan golf`` parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .colours import AlphabetError, CAnd, CConst, CNot, ColourAlphabet, ColourTerm, COr, CVar, format_colour
from .csubst import CSubstitution, Key
from .pretty import format_annotation, format_term
from .terms import (
    App,
    Arrow,
    Base,
    BoundVar,
    Const,
    FreeVar,
    Lam,
    Signature,
    SimpleType,
    Term,
    erase,
    type_of,
)
from .unifier import Problem, TermEq

COLOUR_VAR = re.compile(r"[A-Z][0-9]*\Z")
KEYWORDS = {"colours", "types", "const", "var", "eq", "expect", "reject", "none"}


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message, self.line, self.col = message, line, col


class ResolutionError(ParseError):
    pass


class DslTypeError(ParseError):
    pass


# lexing

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|\#[^\n]*)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9']*)"
    r"|(?P<sym>->|:=|[()\,;:=\\.@~&|{}_])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | sym | eof
    text: str
    line: int
    col: int
    spaced: bool  # whitespace (or a comment) precedes the token


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start, spaced = 0, 1, 0, True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group()
        if m.lastgroup == "ws":
            spaced = True
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rfind("\n") + 1
        else:
            tokens.append(Token(m.lastgroup, chunk, line, col, spaced))
            spaced = False
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, True))
    return tokens


# surface syntax


@dataclass(frozen=True)
class SName:
    name: str
    annotation: Optional[ColourTerm]
    tok: Token


@dataclass(frozen=True)
class SApp:
    fun: object
    args: tuple
    tok: Token


@dataclass(frozen=True)
class SLam:
    binders: tuple  # (name, SimpleType | None)
    body: object
    tok: Token


@dataclass
class ProblemFile:
    alphabet: Optional[tuple[str, ...]] = None
    base_types: tuple[str, ...] = ()
    constants: dict[str, tuple[SimpleType, Optional[ColourTerm]]] = field(default_factory=dict)
    variables: dict[str, tuple[SimpleType, Optional[ColourTerm]]] = field(default_factory=dict)
    equations: tuple[TermEq, ...] = ()
    expected: Optional[tuple[CSubstitution, ...]] = None
    rejected: tuple[CSubstitution, ...] = ()

    def colour_alphabet(self) -> Optional[ColourAlphabet]:
        return ColourAlphabet(self.alphabet) if self.alphabet else None

    def signature(self) -> Signature:
        return Signature(self.base_types, dict(self.constants), dict(self.variables), self.colour_alphabet())

    def problem(self) -> Problem:
        return Problem(self.equations, self.signature())

    def erased(self) -> "ProblemFile":
        """The same problem with every colour removed and no expectations."""
        return ProblemFile(
            self.alphabet,
            self.base_types,
            {k: (ty, None) for k, (ty, _) in self.constants.items()},
            {k: (ty, None) for k, (ty, _) in self.variables.items()},
            tuple(TermEq(erase(e.lhs), erase(e.rhs)) for e in self.equations),
        )


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.file = ProblemFile()

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, message: str, tok: Optional[Token] = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.col)

    # declarations

    def parse(self) -> ProblemFile:
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.text == "colours":
                self.colours()
            elif kw.text == "types":
                self.types()
            elif kw.text in ("const", "var"):
                self.symbol_decl()
            elif kw.text == "eq":
                self.advance()
                lhs, rhs = self.equation()
                self.expect(";")
                self.file.equations += (TermEq(lhs, rhs),)
            elif kw.text == "expect":
                self.advance()
                if self.at("none"):
                    self.advance()
                    self.expect(";")
                    self.file.expected = self.file.expected or ()
                else:
                    self.file.expected = (self.file.expected or ()) + (self.block(),)
            elif kw.text == "reject":
                self.advance()
                self.file.rejected += (self.block(),)
            else:
                self.error(f"expected a declaration, found {kw.text!r}")
        return self.file

    def names_list(self) -> list[Token]:
        out = [self.ident()]
        while self.at(","):
            self.advance()
            out.append(self.ident())
        self.expect(";")
        return out

    def colours(self) -> None:
        kw = self.advance()
        if self.file.alphabet is not None:
            self.error("colours declared twice", kw)
        names = self.names_list()
        for t in names:
            if COLOUR_VAR.match(t.text):
                self.error(f"{t.text} has the shape of a colour variable", t)
        try:
            self.file.alphabet = ColourAlphabet(tuple(t.text for t in names)).constants
        except AlphabetError as exc:
            self.error(str(exc), kw)

    def types(self) -> None:
        self.advance()
        for t in self.names_list():
            if t.text in self.file.base_types:
                self.error(f"type {t.text} declared twice", t, ResolutionError)
            self.file.base_types += (t.text,)

    def symbol_decl(self) -> None:
        kind = self.advance().text
        name = self.ident()
        if name.text in self.file.constants or name.text in self.file.variables:
            self.error(f"{name.text} declared twice", name, ResolutionError)
        self.expect(":")
        ty = self.type_()
        colour = None
        if self.at("@"):
            self.advance()
            colour = self.colour()
        self.expect(";")
        table = self.file.constants if kind == "const" else self.file.variables
        table[name.text] = (ty, colour)

    def block(self) -> CSubstitution:
        self.expect("{")
        term_part: dict[Key, Term] = {}
        colour_part: dict[str, ColourTerm] = {}
        while not self.at("}"):
            name = self.ident("binding")
            if self.at(":="):
                self.advance()
                if not COLOUR_VAR.match(name.text):
                    self.error(f"{name.text} is not a colour variable", name, ResolutionError)
                colour_part[name.text] = self.colour()
            else:
                if name.text not in self.file.variables:
                    self.error(f"undeclared variable {name.text}", name, ResolutionError)
                ty, default = self.file.variables[name.text]
                colour = self.annotation() if self.at("_") and not self.tok.spaced else default
                self.expect("=")
                term_part[(name.text, colour)] = self.check(self.term(), ty, [])
            self.expect(";")
        self.advance()
        return CSubstitution(term_part, colour_part)

    # types and colours

    def type_(self) -> SimpleType:
        if self.at("("):
            self.advance()
            left = self.type_()
            self.expect(")")
        else:
            t = self.ident("type")
            if t.text not in self.file.base_types:
                self.error(f"undeclared type {t.text}", t, ResolutionError)
            left = Base(t.text)
        if self.at("->"):
            self.advance()
            return Arrow(left, self.type_())
        return left

    def colour(self) -> ColourTerm:
        out = self.colour_and()
        while self.at("|"):
            self.advance()
            out = COr(out, self.colour_and())
        return out

    def colour_and(self) -> ColourTerm:
        out = self.colour_not()
        while self.at("&"):
            self.advance()
            out = CAnd(out, self.colour_not())
        return out

    def colour_not(self) -> ColourTerm:
        if self.at("~"):
            self.advance()
            return CNot(self.colour_not())
        if self.at("("):
            self.advance()
            out = self.colour()
            self.expect(")")
            return out
        t = self.ident("colour")
        if self.file.alphabet is not None and t.text in self.file.alphabet:
            return CConst(t.text)
        if COLOUR_VAR.match(t.text):
            return CVar(t.text)
        self.error(f"undeclared colour {t.text}", t, ResolutionError)

    def annotation(self) -> ColourTerm:
        self.expect("_")
        return self.colour_not()

    # terms

    def equation(self) -> tuple[Term, Term]:
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        try:
            left = self.synth(lhs, [])
        except DslTypeError:
            right = self.synth(rhs, [])
            return self.check(lhs, type_of(right), []), right
        return left, self.check(rhs, type_of(left), [])

    def term(self):
        if self.at("\\"):
            tok = self.advance()
            binders = []
            while not self.at("."):
                name = self.ident("binder")
                ty = None
                if self.at(":"):
                    self.advance()
                    ty = self.type_()
                binders.append((name.text, ty))
            if not binders:
                self.error("a lambda needs at least one binder", tok)
            self.expect(".")
            return SLam(tuple(binders), self.term(), tok)
        tok = self.tok
        head = self.atom()
        args = []
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS or self.at("(") or self.at("\\"):
            if self.at("\\"):
                args.append(self.term())
                break
            args.append(self.atom())
        return SApp(head, tuple(args), tok) if args else head

    def atom(self):
        tok = self.tok
        if self.at("("):
            self.advance()
            out = self.term()
            self.expect(")")
        else:
            name = self.ident("term")
            annotation = self.annotation() if self.at("_") and not self.tok.spaced else None
            out = SName(name.text, annotation, name)
        while self.at("(") and not self.tok.spaced:
            self.advance()
            args = [self.term()]
            while self.at(","):
                self.advance()
                args.append(self.term())
            self.expect(")")
            out = SApp(out, tuple(args), tok)
        return out

    # elaboration

    def synth(self, node, ctx: list[tuple[str, SimpleType]]) -> Term:
        if isinstance(node, SName):
            for i, (name, ty) in enumerate(ctx):
                if name == node.name:
                    if node.annotation is not None:
                        self.error(f"bound variable {name} cannot carry a colour", node.tok, ResolutionError)
                    return BoundVar(i, ty)
            for table, cls in ((self.file.constants, Const), (self.file.variables, FreeVar)):
                if node.name in table:
                    ty, default = table[node.name]
                    colour = node.annotation if node.annotation is not None else default
                    return cls(node.name, ty, colour)
            self.error(f"undeclared name {node.name}", node.tok, ResolutionError)
        if isinstance(node, SApp):
            out = self.synth(node.fun, ctx)
            for arg in node.args:
                ft = type_of(out)
                if not isinstance(ft, Arrow):
                    self.error(f"type mismatch: {format_term(out)} has type {ft} and takes no argument", node.tok, DslTypeError)
                out = App(out, self.check(arg, ft.arg, ctx))
            return out
        if any(ty is None for _, ty in node.binders):
            self.error("cannot infer the type of an unannotated binder here", node.tok, DslTypeError)
        return self._lam(node, None, ctx)

    def _lam(self, node: SLam, expected: Optional[SimpleType], ctx) -> Term:
        scope = list(ctx)
        types = []
        for name, ty in node.binders:
            if expected is not None:
                if not isinstance(expected, Arrow):
                    self.error(f"type mismatch: a lambda cannot have type {expected}", node.tok, DslTypeError)
                if ty is not None and ty != expected.arg:
                    self.error(f"type mismatch: binder {name} has type {ty}, expected {expected.arg}", node.tok, DslTypeError)
                ty, expected = expected.arg, expected.res
            types.append((name, ty))
            scope.insert(0, (name, ty))
        body = self.check(node.body, expected, scope) if expected is not None else self.synth(node.body, scope)
        for name, ty in reversed(types):
            body = Lam(ty, body, name)
        return body

    def check(self, node, expected: SimpleType, ctx) -> Term:
        if isinstance(node, SLam):
            return self._lam(node, expected, ctx)
        out = self.synth(node, ctx)
        if type_of(out) != expected:
            tok = node.tok
            self.error(f"type mismatch: {format_term(out)} has type {type_of(out)}, expected {expected}", tok, DslTypeError)
        return out


def parse(text: str) -> ProblemFile:
    """Parse and type-check a problem file."""
    return _Parser(text).parse()


# printing


def _decl(kind: str, name: str, ty: SimpleType, colour: Optional[ColourTerm]) -> str:
    suffix = f" @ {format_colour(colour)}" if colour is not None else ""
    return f"{kind} {name} : {ty}{suffix};"


def _block(kind: str, s: CSubstitution) -> list[str]:
    out = [f"{kind} {{"]
    for (name, colour), m in sorted(s.term_part.items(), key=lambda kv: kv[0][0] + format_annotation(kv[0][1])):
        out.append(f"  {name}{format_annotation(colour)} = {_explicit(m)};")
    out += [f"  {v} := {format_colour(c)};" for v, c in sorted(s.colour_part.items())]
    return out + ["}"]


def _explicit(t: Term) -> str:
    # every annotation is printed, so declared defaults never kick in
    return format_term(t, typed=True)


def print_problem(pf: ProblemFile) -> str:
    lines = []
    if pf.alphabet:
        lines.append(f"colours {', '.join(pf.alphabet)};")
    if pf.base_types:
        lines.append(f"types {', '.join(pf.base_types)};")
    lines += [_decl("const", n, ty, c) for n, (ty, c) in pf.constants.items()]
    lines += [_decl("var", n, ty, c) for n, (ty, c) in pf.variables.items()]
    lines += [f"eq {_explicit(e.lhs)} = {_explicit(e.rhs)};" for e in pf.equations]
    if pf.expected == ():
        lines.append("expect none;")
    for s in pf.expected or ():
        lines += _block("expect", s)
    for s in pf.rejected:
        lines += _block("reject", s)
    return "\n".join(lines) + "\n"
