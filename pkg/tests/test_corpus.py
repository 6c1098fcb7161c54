import pytest

from hocu.colours import CConst
from hocu.corpus import ENTRIES, PathError, canonical_trace, check_entry, encode_por, golden_trace, load, run_trace
from hocu.terms import Base, BoundVar, Const, Lam, app, arrow


@pytest.mark.parametrize("entry", [e.id for e in ENTRIES])
def test_entry_passes(entry):
    result = check_entry(entry)
    assert result.passed, result.problems


def test_entries_are_bundled():
    assert len(ENTRIES) == 15
    for e in ENTRIES:
        load(e.id)


def test_crossover_trace_matches_golden():
    assert canonical_trace(run_trace(load("12-crossover-bound"))) == canonical_trace(golden_trace("12-crossover-bound"))


def test_crossover_trace_contents():
    lines = canonical_trace(run_trace(load("12-crossover-bound")))
    assert "EQS H1_~pf(i_pf, c1) = c1 ; H2_~pf(i_pf, c1) = i_pf ; H3_~pf(i_pf, c1) = i_A" in lines
    bindings = [l.split(" BINDING ")[1] for l in lines if " BINDING " in l]
    assert "H3_~pf = \\x y. i_~pf" in bindings
    assert "A := ~pf" in bindings and "A := pf" in bindings


def test_canonical_trace_renames_by_first_appearance():
    assert canonical_trace(["H7 c4 H3", "B9 H7"]) == ["H1 c1 H2", "B1 H1"]


def test_golden_trace_missing():
    assert golden_trace("14-flex-rigid") is None


def test_encode_por():
    e, t = Base("e"), Base("t")
    like = Const("like", arrow(e, e, t))
    term = app(like, Const("dan", e), Const("golf", e))
    # App(App(like, dan), golf): dan sits at fun, arg
    coloured = encode_por(term, [(0, 1)], CConst("pe"))
    assert coloured == app(like, Const("dan", e, CConst("pe")), Const("golf", e))
    lam = Lam(e, app(like, BoundVar(0, e), Const("golf", e)))
    assert encode_por(lam, [(0, 1)], CConst("pf")).body.arg.colour == CConst("pf")


def test_encode_por_bad_paths():
    e = Base("e")
    with pytest.raises(PathError):
        encode_por(Const("a", e), [(0,)], CConst("pe"))
    with pytest.raises(PathError):
        encode_por(Lam(e, BoundVar(0, e)), [(0,)], CConst("pe"))
