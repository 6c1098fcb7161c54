import pytest

from hocu.colours import CConst, CNot
from hocu.corpus import ENTRIES, entry_text
from hocu.dsl import DslTypeError, ParseError, ResolutionError, parse, print_problem, tokenize
from hocu.terms import App, Base, Const, FreeVar, app, arrow

HEAD = "colours pe, pf; types e, t; const like : e -> e -> t; const dan : e; const golf : e; var R : e -> t @ ~pe;\n"


def test_basic_problem():
    pf = parse(HEAD + "eq like(dan_pe, golf) = R(dan_pe);")
    (eq,) = pf.equations
    E, T = Base("e"), Base("t")
    assert eq.lhs == app(Const("like", arrow(E, E, T)), Const("dan", E, CConst("pe")), Const("golf", E))
    assert eq.rhs == App(FreeVar("R", arrow(E, T), CNot(CConst("pe"))), Const("dan", E, CConst("pe")))
    assert pf.expected is None and pf.rejected == ()


def test_juxtaposition_and_argument_lists_agree():
    a = parse(HEAD + "eq like(dan, golf) = R(dan);")
    b = parse(HEAD + "eq like dan golf = R dan;")
    assert a.equations == b.equations


def test_parenthesized_argument_after_space():
    pf = parse(HEAD + "eq like dan (golf) = R (dan);")
    assert pf.equations == parse(HEAD + "eq like(dan, golf) = R(dan);").equations


def test_declared_colour_is_the_default():
    pf = parse("colours pe, pf; types e; const a : e @ pe; var x : e; eq x = a;")
    assert pf.equations[0].rhs == Const("a", Base("e"), CConst("pe"))


def test_occurrence_annotation_overrides_default():
    pf = parse("colours pe, pf; types e; const a : e @ pe; var x : e; eq x = a_pf;")
    assert pf.equations[0].rhs.colour == CConst("pf")


def test_expect_none():
    pf = parse("types e; const a : e; const b : e; eq a = b; expect none;")
    assert pf.expected == ()


def test_empty_equation_list():
    pf = parse("types e;")
    assert pf.equations == () and pf.problem().equations == ()


def test_comments_are_ignored():
    pf = parse("# a comment\ntypes e; # trailing\nconst a : e;\neq a = a;")
    assert len(pf.equations) == 1


def test_undeclared_colour_constant():
    with pytest.raises(ParseError) as exc:
        parse("colours pf, ps;\ntypes e;\nconst a : e;\nvar x : e;\neq x = a_~pe;")
    assert exc.value.line == 5 and "pe" in str(exc.value)


def test_undeclared_name():
    with pytest.raises(ResolutionError) as exc:
        parse("types e;\neq a = a;")
    assert (exc.value.line, exc.value.col) == (2, 4)


def test_annotated_bound_variable():
    with pytest.raises(ParseError) as exc:
        parse("colours pe, pf; types e; const f : e -> e; var x : e -> e;\neq x = \\y. f(y_pe);")
    assert exc.value.line == 2


def test_type_mismatch():
    with pytest.raises(DslTypeError) as exc:
        parse("types e, t; const a : e; const p : t;\neq a = p;")
    assert exc.value.line == 2


def test_missing_semicolon():
    with pytest.raises(ParseError):
        parse("types e const a : e;")


def test_colour_name_shaped_like_variable():
    with pytest.raises(ParseError):
        parse("colours A;")


def test_tokens_record_position():
    toks = tokenize("eq  x")
    assert [(t.text, t.line, t.col) for t in toks[:2]] == [("eq", 1, 1), ("x", 1, 5)]


@pytest.mark.parametrize("entry", [e.id for e in ENTRIES])
def test_print_parse_round_trip(entry):
    pf = parse(entry_text(entry))
    again = parse(print_problem(pf))
    assert again == pf
    assert print_problem(again) == print_problem(pf)


def test_erased_problem_drops_colours():
    pf = parse(HEAD + "eq like(dan_pe, golf) = R(dan_pe);").erased()
    from hocu.terms import symbols

    assert all(sym.colour is None for eq in pf.equations for t in (eq.lhs, eq.rhs) for sym in symbols(t))
    assert pf.variables["R"][1] is None
