import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hocu.colours import CConst, ColourAlphabet, ColourStore, CNot, COr, CVar
from hocu.terms import (
    App,
    Arrow,
    Base,
    BoundVar,
    Const,
    FreeVar,
    KernelTypeError,
    Lam,
    Signature,
    alpha_beta_eta_equal,
    app,
    arrow,
    erase,
    is_normal,
    monochrome_constraints,
    normalize,
    symbols,
    typecheck,
)
from generators import TermGen, kernel_signature, SMALL_TYPES

E, T = Base("e"), Base("t")
PE, PF = CConst("pe"), CConst("pf")
ALPHA = ColourAlphabet(("pe", "pf", "ps"))
like = Const("like", arrow(E, E, T))
dan, golf = Const("dan", E), Const("golf", E)
SIG = Signature(("e", "t"), {"like": (arrow(E, E, T), None), "dan": (E, None), "golf": (E, None)}, {}, ALPHA)


def test_arrow_prints_right_associated():
    assert str(arrow(E, E, T)) == "e -> e -> t"
    assert str(arrow(arrow(E, T), T)) == "(e -> t) -> t"


class TestTypecheck:
    def test_application(self):
        assert typecheck(app(like, dan, golf), SIG) == T

    def test_identity(self):
        assert typecheck(Lam(E, BoundVar(0, E))) == Arrow(E, E)

    def test_non_function_head(self):
        with pytest.raises(KernelTypeError) as exc:
            typecheck(App(dan, golf), SIG)
        assert exc.value.node == App(dan, golf)

    def test_undeclared(self):
        with pytest.raises(KernelTypeError):
            typecheck(Const("mary", E), SIG)

    def test_argument_mismatch(self):
        with pytest.raises(KernelTypeError):
            typecheck(App(like, Lam(E, BoundVar(0, E))), SIG)


class TestNormalize:
    def test_beta(self):
        a = Const("a", E, CConst("c"))
        assert normalize(App(Lam(E, BoundVar(0, E)), a)) == a

    def test_second_projection(self):
        i_pf, c = Const("i", E, PF), Const("c", E)
        proj = Lam(E, Lam(E, BoundVar(0, E)))
        assert normalize(app(proj, i_pf, c)) == c

    def test_eta_long_fixed_point(self):
        f = Const("f", arrow(E, T))
        t = Lam(E, App(f, BoundVar(0, E)))
        assert normalize(t) == t

    def test_eta_expands(self):
        f = Const("f", arrow(E, T))
        assert normalize(f) == Lam(E, App(f, BoundVar(0, E)))

    def test_higher_order_eta(self):
        q = Const("q", arrow(arrow(E, T), T))
        P = FreeVar("P", arrow(E, T))
        assert normalize(App(q, P)) == App(q, Lam(E, App(P, BoundVar(0, E))))

    def test_capture_avoidance(self):
        # (\x. \y. x) y0 with y0 a bound variable of the context
        k = Lam(E, Lam(E, BoundVar(1, E)))
        t = Lam(E, App(k, BoundVar(0, E)))
        assert normalize(t) == Lam(E, Lam(E, BoundVar(1, E)))


class TestEquality:
    def test_alpha(self):
        a = Lam(E, app(like, BoundVar(0, E), golf), "x")
        b = Lam(E, app(like, BoundVar(0, E), golf), "y")
        assert alpha_beta_eta_equal(a, b)

    def test_annotation_mismatch(self):
        assert not alpha_beta_eta_equal(Const("a", E, PE), Const("a", E, PF), ALPHA)

    def test_beta_redex(self):
        r = Lam(E, app(like, BoundVar(0, E), golf))
        assert alpha_beta_eta_equal(App(r, dan), app(like, dan, golf))

    def test_equivalent_ground_colours(self):
        a = Const("a", E, CNot(PE))
        b = Const("a", E, COr(CConst("pf"), CConst("ps")))
        assert alpha_beta_eta_equal(a, b, ALPHA)

    def test_variable_colour(self):
        assert not alpha_beta_eta_equal(Const("a", E, CVar("A")), Const("a", E, PE), ALPHA)

    def test_uncoloured_wildcard(self):
        assert not alpha_beta_eta_equal(Const("a", E), Const("a", E, PE), ALPHA)
        assert alpha_beta_eta_equal(Const("a", E), Const("a", E, PE), ALPHA, uncoloured_matches_any=True)

    def test_type_mismatch(self):
        with pytest.raises(KernelTypeError):
            alpha_beta_eta_equal(dan, like)


class TestErase:
    def test_constants(self):
        t = app(like, Const("dan", E, PE), golf)
        assert erase(t) == app(like, dan, golf)

    def test_idempotent(self):
        t = app(like, Const("dan", E, PE), golf)
        assert erase(erase(t)) == erase(t)

    def test_variables(self):
        f = FreeVar("f", arrow(E, T), CVar("A"))
        assert erase(Lam(E, App(f, BoundVar(0, E)))) == Lam(E, App(FreeVar("f", arrow(E, T)), BoundVar(0, E)))


class TestMonochrome:
    def store(self):
        return ColourStore(ALPHA)

    def test_ellipsis_solution(self):
        npe = CNot(PE)
        t = Lam(E, app(Const("like", arrow(E, E, T), npe), BoundVar(0, E), Const("golf", E, npe)))
        assert monochrome_constraints(t, npe, self.store()) is not None

    def test_primary_occurrence(self):
        t = Lam(E, app(like, Const("dan", E, PE), golf))
        assert monochrome_constraints(t, CNot(PE), self.store()) is None

    def test_bound_only(self):
        assert monochrome_constraints(Lam(E, BoundVar(0, E)), PE, self.store()) is not None


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2**31), st.sampled_from(SMALL_TYPES), st.integers(1, 6))
def test_normal_form_properties(seed, ty, depth):
    t = TermGen(seed).term(ty, depth)
    sig = kernel_signature()
    n = normalize(t)
    assert normalize(n) == n
    assert is_normal(n)
    assert typecheck(n, sig) == typecheck(t, sig)
    assert erase(n) == normalize(erase(t))
    # beta can copy or drop arguments but never invents an annotation
    assert {s.colour for s in symbols(n)} <= {s.colour for s in symbols(t)}


def test_is_normal_rejects_redex_and_short_forms():
    f = Const("f", arrow(E, T))
    assert not is_normal(f)
    assert not is_normal(App(Lam(E, App(f, BoundVar(0, E))), dan))
    assert is_normal(App(f, dan))
