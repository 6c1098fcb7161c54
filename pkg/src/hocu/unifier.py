"""Higher-order coloured pre-unification.

Equations are kept in eta-long beta-normal form.  Deterministic rules
(deletion, abstraction and application decomposition, colour and term
variable elimination) run eagerly in that priority order; a flex/rigid
equation then branches over its general bindings, imitation first and
projections left to right.

Search is bounded by binding depth: variables of the input have depth 0,
and a variable introduced by a general binding for a depth-``k`` variable
has depth ``k + 1``.  A variable may only be bound by a general binding
while its depth is below ``SearchConfig.max_bindings``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

from .colours import (
    CConst,
    ColourStore,
    ColourTerm,
    CVar,
    colour_vars,
    denote,
    format_colour,
    formula_entails,
    is_ground,
    solve_store,
)
from .csubst import CSubstitution, Key
from .pretty import format_annotation, format_term
from .terms import (
    App,
    Arrow,
    BoundVar,
    Const,
    FreeVar,
    KernelTypeError,
    Lam,
    Signature,
    Term,
    app,
    erase,
    free_vars,
    instantiate,
    map_colours,
    monochrome_constraints,
    normalize,
    replace_free,
    spine,
    symbols,
    type_of,
    unarrow,
)

EXHAUSTED = "search space exhausted"
BOUND_REACHED = "bound reached"
CAP_REACHED = "solution cap reached"


@dataclass(frozen=True)
class TermEq:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class ColourEq:
    lhs: ColourTerm
    rhs: ColourTerm


Equation = Union[TermEq, ColourEq]


def format_equation(eq: Equation) -> str:
    if isinstance(eq, ColourEq):
        return f"{format_colour(eq.lhs)} =c {format_colour(eq.rhs)}"
    return f"{format_term(eq.lhs)} = {format_term(eq.rhs)}"


@dataclass(frozen=True)
class SearchConfig:
    max_bindings: int = 10
    max_solutions: int = 50
    strategy: str = "iterative"

    def __post_init__(self) -> None:
        if self.max_bindings < 0:
            raise ValueError("max_bindings must be non-negative")
        if self.max_solutions < 1:
            raise ValueError("max_solutions must be positive")
        if self.strategy not in ("iterative", "dfs"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class Step:
    rule: str
    index: int
    binding: Optional[str] = None

    def __str__(self) -> str:
        text = f"RULE {self.rule} ON {self.index}"
        return text + (f" BINDING {self.binding}" if self.binding else "")


@dataclass(frozen=True)
class Solution:
    """A unifier restricted to the problem's own variables.

    ``residual_colours`` lists entailments on colour variables left
    unbound; ``flex_flex`` is nonempty for pre-solutions.
    """

    substitution: CSubstitution
    trace: tuple[Step, ...] = ()
    residual_colours: tuple[tuple[ColourTerm, ColourTerm], ...] = ()
    flex_flex: tuple[TermEq, ...] = ()

    @property
    def is_pre_solution(self) -> bool:
        return bool(self.flex_flex)

    def lines(self) -> list[str]:
        out = self.substitution.lines()
        out += [f"constraint {format_colour(d)} |= {format_colour(c)}" for d, c in self.residual_colours]
        out += [f"residual {format_equation(eq)}" for eq in self.flex_flex]
        return out


@dataclass(frozen=True)
class SearchEnd:
    status: str


@dataclass(frozen=True)
class Problem:
    equations: tuple[TermEq, ...]
    sig: Signature


@dataclass(frozen=True)
class ProblemState:
    equations: tuple[Equation, ...]
    store: ColourStore
    images: tuple[tuple[Key, Term], ...]
    forbidden: frozenset[str] = frozenset()
    solved: tuple[tuple[FreeVar, Term], ...] = ()
    depth: Mapping[str, int] = field(default_factory=dict)
    counters: Mapping[str, int] = field(default_factory=dict)
    steps: tuple[Step, ...] = ()


_SKIP = object()


def _head(t: Term) -> Term:
    return spine(t)[0]


def _is_flex(t: Term) -> bool:
    return isinstance(_head(t), FreeVar)


def _is_rigid(t: Term) -> bool:
    return isinstance(_head(t), Const)


def _colour_key(c: Optional[ColourTerm], store: ColourStore) -> object:
    c = store.resolve(c)
    if c is None:
        return None
    if is_ground(c):
        return ("ground", denote(c, store.alphabet))
    return ("open", c)


class _Search:
    def __init__(self, problem: Problem, cfg: SearchConfig, trace: Optional[Callable[[str], None]]):
        self.problem = problem
        self.cfg = cfg
        self.trace = trace
        self.reserved = problem.sig.names() | set(_problem_colour_vars(problem))
        self.cut = False

    # bookkeeping

    def emit(self, line: str) -> None:
        if self.trace is not None:
            self.trace(line)

    def record(self, state: ProblemState, step: Step) -> ProblemState:
        state = replace(state, steps=state.steps + (step,))
        if self.trace is not None:
            self.trace(str(step))
            eqs = " ; ".join(format_equation(e) for e in state.equations) or "(none)"
            self.trace(f"EQS {eqs}")
        return state

    def fail(self, reason: str, index: int) -> None:
        self.emit(f"FAIL {reason} ON {index}")

    def fresh(self, state: ProblemState, prefix: str) -> tuple[str, ProblemState]:
        n = state.counters.get(prefix, 0)
        while True:
            n += 1
            name = f"{prefix}{n}"
            if name not in self.reserved:
                break
        return name, replace(state, counters={**state.counters, prefix: n})

    # deterministic rules; each returns _SKIP, a new state, or None on failure

    def delete(self, state: ProblemState, i: int, eq: Equation):
        if not isinstance(eq, TermEq) or eq.lhs != eq.rhs:
            return _SKIP
        return self.record(_drop(state, i), Step("delete", i))

    def decompose_abstraction(self, state: ProblemState, i: int, eq: Equation):
        if not isinstance(eq, TermEq) or not (isinstance(eq.lhs, Lam) or isinstance(eq.rhs, Lam)):
            return _SKIP
        binder = eq.lhs.type if isinstance(eq.lhs, Lam) else eq.rhs.type
        name, state = self.fresh(state, "c")
        c = Const(name, binder)

        def open_(t: Term) -> Term:
            return normalize(instantiate(t.body, c) if isinstance(t, Lam) else App(t, c))

        new = TermEq(open_(eq.lhs), open_(eq.rhs))
        state = replace(state, equations=_splice(state.equations, i, [new]), forbidden=state.forbidden | {name})
        return self.record(state, Step("decompose_abs", i))

    def decompose_application(self, state: ProblemState, i: int, eq: Equation):
        if not isinstance(eq, TermEq) or not (_is_rigid(eq.lhs) and _is_rigid(eq.rhs)):
            return _SKIP
        (h1, args1), (h2, args2) = spine(eq.lhs), spine(eq.rhs)
        if h1.name != h2.name or len(args1) != len(args2):
            self.fail("clash", i)
            return None
        new: list[Equation] = []
        if h1.colour is not None and h2.colour is not None:
            new.append(ColourEq(h1.colour, h2.colour))
        new += [TermEq(a, b) for a, b in zip(args1, args2)]
        state = replace(state, equations=_splice(state.equations, i, new))
        return self.record(state, Step("decompose_app", i))

    def eliminate_colour(self, state: ProblemState, i: int, eq: Equation):
        if not isinstance(eq, ColourEq):
            return _SKIP
        store = state.store.unify(eq.lhs, eq.rhs)
        if store is None:
            self.fail("colour-clash", i)
            return None
        lhs, rhs = state.store.resolve(eq.lhs), state.store.resolve(eq.rhs)
        binding = None
        if lhs != rhs:
            var, value = (lhs, rhs) if isinstance(lhs, CVar) else (rhs, lhs)
            if isinstance(var, CVar):
                binding = f"{var.name} := {format_colour(value)}"
        state = _resolve_colours(replace(_drop(state, i), store=store))
        return self.record(state, Step("colour_elim", i, binding))

    def eliminate_term(self, state: ProblemState, i: int, eq: Equation):
        if not isinstance(eq, TermEq):
            return _SKIP
        for var, other in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
            if not isinstance(var, FreeVar):
                continue
            if _occurs_rigidly(var.name, other):
                self.fail("occurs", i)
                return None
            if any(v.name == var.name for v in free_vars(other)):
                continue
            if any(s.name in state.forbidden for s in symbols(other) if isinstance(s, Const)):
                continue
            return self.bind(state, var, other, i, "eliminate", drop=True)
        return _SKIP

    def bind(self, state: ProblemState, var: FreeVar, value: Term, i: int, rule: str, drop: bool):
        """Eliminate ``var`` everywhere, instantiating its other coloured
        occurrences with fresh-coloured variants of ``value``."""
        store = monochrome_constraints(value, var.colour, state.store)
        if store is None:
            self.fail("monochromicity", i)
            return None
        state = replace(state, store=store)
        if drop:
            state = _drop(state, i)
        main = _colour_key(var.colour, store)
        variants: dict[object, Term] = {main: value}
        solved = [(var, value)]
        for occ in _occurrences(state, var.name):
            key = _colour_key(occ.colour, state.store)
            if key in variants:
                continue
            variant, state = self.variant(state, value, state.store.resolve(occ.colour))
            variants[key] = variant
            solved.append((FreeVar(var.name, var.type, occ.colour), variant))

        def image(v: FreeVar) -> Optional[Term]:
            if v.name != var.name:
                return None
            return variants[_colour_key(v.colour, state.store)]

        def inst(t: Term) -> Term:
            return normalize(replace_free(t, image))

        equations = tuple(TermEq(inst(e.lhs), inst(e.rhs)) if isinstance(e, TermEq) else e for e in state.equations)
        images = tuple((k, inst(t)) for k, t in state.images)
        state = replace(state, equations=equations, images=images, solved=state.solved + tuple(solved))
        label = f"{var.name}{format_annotation(var.colour)} = {format_term(value)}"
        return self.record(state, Step(rule, i, label))

    def variant(self, state: ProblemState, value: Term, colour: Optional[ColourTerm]) -> tuple[Term, ProblemState]:
        if colour is None:
            return erase(value), state
        fresh: list[str] = []

        def recolour(c: Optional[ColourTerm]) -> Optional[ColourTerm]:
            nonlocal state
            if c is None:
                return None
            name, state = self.fresh(state, "B")
            fresh.append(name)
            return CVar(name)

        out = map_colours(value, recolour)
        store = state.store
        for name in fresh:
            store = store.entail(CVar(name), colour)
        return out, replace(state, store=store)

    # search

    def simplify(self, state: ProblemState) -> Optional[ProblemState]:
        rules = (
            self.delete,
            self.decompose_abstraction,
            self.decompose_application,
            self.eliminate_colour,
            self.eliminate_term,
        )
        while True:
            for rule in rules:
                for i, eq in enumerate(state.equations):
                    out = rule(state, i, eq)
                    if out is _SKIP:
                        continue
                    if out is None:
                        return None
                    state = out
                    break
                else:
                    continue
                break
            else:
                return state

    def general_bindings(self, state: ProblemState, var: FreeVar, head: Const) -> list[tuple[str, Term, ProblemState]]:
        """Imitation (unless ``head`` is forbidden) and type-correct projections."""
        arg_types, base = unarrow(var.type)
        n = len(arg_types)
        c = state.store.resolve(var.colour)
        heads: list[tuple[str, Term]] = []
        if head.name not in state.forbidden:
            d = state.store.resolve(head.colour)
            if c is None or d is None or not is_ground(c):
                heads.append(("imitate", Const(head.name, head.type, d)))
            elif is_ground(d):
                if formula_entails(d, c, state.store.alphabet):
                    heads.append(("imitate", Const(head.name, head.type, d)))
            else:
                heads.append(("imitate", Const(head.name, head.type, c)))
        for k, ty in enumerate(arg_types):
            if unarrow(ty)[1] == base:
                heads.append(("project", BoundVar(n - 1 - k, ty)))

        depth = state.depth.get(var.name, 0) + 1
        out = []
        for kind, h in heads:
            st = state
            args = []
            for gamma in unarrow(type_of(h))[0]:
                name, st = self.fresh(st, "H")
                if c is None:
                    e = None
                elif is_ground(c):
                    e = c
                else:
                    e_name, st = self.fresh(st, "B")
                    e = CVar(e_name)
                ty = gamma
                for a in reversed(arg_types):
                    ty = Arrow(a, ty)
                h_var = FreeVar(name, ty, e)
                args.append(app(h_var, *(BoundVar(n - 1 - k, a) for k, a in enumerate(arg_types))))
                st = replace(st, depth={**st.depth, name: depth})
            body = app(h, *args)
            for k in reversed(range(n)):
                body = Lam(arg_types[k], body, _BINDER_NAMES[k] if k < len(_BINDER_NAMES) else f"x{k}")
            out.append((kind, normalize(body), st))
        return out

    def dfs(self, state: ProblemState, bound: int) -> Iterator[Solution]:
        state = self.simplify(state)
        if state is None:
            return
        pick = _flex_rigid(state)
        if pick is None:
            sol = self.finalize(state)
            if sol is not None:
                self.emit("PRESOLUTION" if sol.is_pre_solution else "SOLUTION")
                yield sol
            return
        i, var, head = pick
        bindings = self.general_bindings(state, var, head)
        if not bindings:
            self.fail("no-binding", i)
            return
        if state.depth.get(var.name, 0) >= bound:
            self.cut = True
            self.emit(f"CUT {var.name} AT DEPTH {bound}")
            return
        for kind, binding, st in bindings:
            st = self.bind(st, var, binding, i, kind, drop=False)
            if st is not None:
                yield from self.dfs(st, bound)

    def finalize(self, state: ProblemState) -> Optional[Solution]:
        store = _tighten(state.store)
        if not solve_store(_relevant(store)):
            self.emit("FAIL colour-unsat ON -1")
            return None
        term_part: dict[Key, Term] = {}
        for (name, colour), t in state.images:
            t = normalize(map_colours(t, store.resolve))
            var_type = self.problem.sig.variables[name][0] if name in self.problem.sig.variables else type_of(t)
            if t != normalize(FreeVar(name, var_type, store.resolve(colour))):
                term_part[(name, colour)] = t
        colour_part = {}
        for v in _problem_colour_vars(self.problem):
            value = store.resolve(CVar(v))
            if value != CVar(v):
                colour_part[v] = value
        visible: set[str] = set()
        for (_, colour), t in term_part.items():
            visible.update(colour_vars(store.resolve(colour)))
            for s in symbols(t):
                visible.update(colour_vars(s.colour))
        for value in colour_part.values():
            visible.update(colour_vars(value))
        residual = tuple((d, c) for d, c in store.pending() if visible & (set(colour_vars(d)) | set(colour_vars(c))))
        flex = tuple(
            TermEq(map_colours(e.lhs, store.resolve), map_colours(e.rhs, store.resolve))
            for e in state.equations
            if isinstance(e, TermEq)
        )
        return Solution(CSubstitution(term_part, colour_part), state.steps, residual, flex)


_BINDER_NAMES = "xyzwuv"


def _drop(state: ProblemState, i: int) -> ProblemState:
    return replace(state, equations=state.equations[:i] + state.equations[i + 1 :])


def _splice(eqs: tuple[Equation, ...], i: int, new: Sequence[Equation]) -> tuple[Equation, ...]:
    return eqs[:i] + tuple(new) + eqs[i + 1 :]


def _resolve_colours(state: ProblemState) -> ProblemState:
    r = state.store.resolve
    eqs = tuple(
        TermEq(map_colours(e.lhs, r), map_colours(e.rhs, r)) if isinstance(e, TermEq) else ColourEq(r(e.lhs), r(e.rhs))
        for e in state.equations
    )
    return replace(state, equations=eqs)


def _occurrences(state: ProblemState, name: str) -> Iterator[FreeVar]:
    for e in state.equations:
        if isinstance(e, TermEq):
            for t in (e.lhs, e.rhs):
                yield from (v for v in free_vars(t) if v.name == name)
    for _, t in state.images:
        yield from (v for v in free_vars(t) if v.name == name)


def _occurs_rigidly(name: str, t: Term) -> bool:
    """True if ``name`` occurs in ``t`` outside the arguments of free
    variables, where no instantiation can remove it."""
    while isinstance(t, Lam):
        t = t.body
    head, args = spine(t)
    if isinstance(head, FreeVar):
        return head.name == name
    return any(_occurs_rigidly(name, a) for a in args)


def _flex_rigid(state: ProblemState) -> Optional[tuple[int, FreeVar, Const]]:
    for i, e in enumerate(state.equations):
        if not isinstance(e, TermEq):
            continue
        for flex, rigid in ((e.lhs, e.rhs), (e.rhs, e.lhs)):
            if _is_flex(flex) and _is_rigid(rigid):
                return i, _head(flex), _head(rigid)
    return None


def _tighten(store: ColourStore) -> ColourStore:
    """Bind each unbound colour variable that its ground bounds pin to a
    single alphabet constant."""
    changed = True
    while changed and store.alphabet is not None:
        changed = False
        for v in store.unbound_vars():
            allowed = set(store.alphabet.constants)
            for d, c in store.pending():
                if d == CVar(v) and is_ground(c):
                    allowed &= denote(c, store.alphabet)
                elif c == CVar(v) and is_ground(d):
                    allowed = {k for k in allowed if denote(d, store.alphabet) <= {k}}
            if len(allowed) == 1:
                tightened = store.unify(CVar(v), CConst(allowed.pop()))
                if tightened is not None:
                    store, changed = tightened, True
                    break
    return store


def _relevant(store: ColourStore) -> ColourStore:
    """The store restricted to its undecided entailments."""
    return ColourStore(store.alphabet, {}, (), tuple(store.pending()))


def _problem_colour_vars(problem: Problem) -> list[str]:
    seen: dict[str, None] = {}
    for eq in problem.equations:
        for t in (eq.lhs, eq.rhs):
            for s in symbols(t):
                for v in colour_vars(s.colour):
                    seen.setdefault(v)
    return list(seen)


def initial_state(problem: Problem) -> ProblemState:
    equations = []
    for eq in problem.equations:
        if type_of(eq.lhs) != type_of(eq.rhs):
            raise KernelTypeError(f"equation sides have types {type_of(eq.lhs)} and {type_of(eq.rhs)}")
        equations.append(TermEq(normalize(eq.lhs), normalize(eq.rhs)))
    images: dict[Key, Term] = {}
    for eq in problem.equations:
        for t in (eq.lhs, eq.rhs):
            for v in free_vars(t):
                images.setdefault((v.name, v.colour), v)
    return ProblemState(tuple(equations), ColourStore(problem.sig.alphabet), tuple(images.items()))


def solution_key(sol: Solution, alphabet) -> str:
    """Canonical text identifying a solution up to alpha-renaming,
    equivalence of ground colours and renaming of open colour variables."""
    names: dict[str, str] = {}

    def canon(c: Optional[ColourTerm]) -> Optional[ColourTerm]:
        if c is None:
            return None
        if is_ground(c):
            return CConst("{" + ",".join(sorted(denote(c, alphabet))) + "}")
        if isinstance(c, CVar):
            return CVar(names.setdefault(c.name, f"?{len(names)}"))
        return c

    parts = []
    for (name, colour), t in sorted(sol.substitution.term_part.items(), key=lambda kv: (kv[0][0], format_annotation(kv[0][1]))):
        parts.append(f"{name}{format_annotation(colour)}={format_term(map_colours(t, canon))}")
    for v, c in sorted(sol.substitution.colour_part.items()):
        parts.append(f"{v}:={format_colour(canon(c))}")
    for d, c in sol.residual_colours:
        parts.append(f"{format_colour(canon(d))}|={format_colour(canon(c))}")
    for e in sol.flex_flex:
        parts.append(format_equation(TermEq(map_colours(e.lhs, canon), map_colours(e.rhs, canon))))
    return "\n".join(parts)


def solve(
    problem: Problem, cfg: SearchConfig = SearchConfig(), trace: Optional[Callable[[str], None]] = None
) -> Iterator[Union[Solution, SearchEnd]]:
    """Stream distinct solutions, ending with a ``SearchEnd`` marker."""
    search = _Search(problem, cfg, trace)
    start = initial_state(problem)
    alphabet = problem.sig.alphabet
    seen: set[str] = set()
    bounds = range(cfg.max_bindings + 1) if cfg.strategy == "iterative" else [cfg.max_bindings]
    for bound in bounds:
        search.cut = False
        search.emit(f"DEPTH {bound}")
        for sol in search.dfs(start, bound):
            key = solution_key(sol, alphabet)
            if key in seen:
                continue
            seen.add(key)
            yield sol
            if len(seen) >= cfg.max_solutions:
                yield SearchEnd(CAP_REACHED)
                return
        if not search.cut:
            yield SearchEnd(EXHAUSTED)
            return
    yield SearchEnd(BOUND_REACHED)


@dataclass(frozen=True)
class SearchResult:
    solutions: tuple[Solution, ...]
    status: str


def solve_all(
    problem: Problem, cfg: SearchConfig = SearchConfig(), trace: Optional[Callable[[str], None]] = None
) -> SearchResult:
    solutions = []
    status = EXHAUSTED
    for item in solve(problem, cfg, trace):
        if isinstance(item, SearchEnd):
            status = item.status
        else:
            solutions.append(item)
    return SearchResult(tuple(solutions), status)
