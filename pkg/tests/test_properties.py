"""Randomized checks over generated matching problems F(args) = N."""

import pytest

from generators import erase_problem, erasure_covered, matching_problems
from hocu.unifier import EXHAUSTED, solve_all
from hocu.validate import validate

PROBLEMS = matching_problems(200, seed=0)


@pytest.fixture(scope="module")
def results():
    return [(p, solve_all(p), solve_all(erase_problem(p))) for p in PROBLEMS]


def test_every_emitted_solution_validates(results):
    bad = [(p, s) for p, r, _ in results for s in r.solutions if not validate(s, p.equations, p.sig).ok]
    assert bad == []


def test_erasure_soundness(results):
    bad = [(p, s) for p, r, e in results for s in r.solutions if not erasure_covered(s, e.solutions)]
    assert bad == []


def test_searches_terminate(results):
    assert all(r.status == EXHAUSTED and e.status == EXHAUSTED for _, r, e in results)


def test_some_problems_have_solutions(results):
    assert sum(bool(r.solutions) for _, r, _ in results) > 50


def test_byte_identical_reruns(results):
    for p, r, _ in results[:50]:
        assert [s.lines() for s in solve_all(p).solutions] == [s.lines() for s in r.solutions]


def test_generator_stays_within_bounds():
    from generators import MAX_DEPTH, term_depth

    for p in PROBLEMS:
        assert len(p.sig.constants) <= 6 and len(p.sig.alphabet.constants) <= 3
        assert all(term_depth(t) <= MAX_DEPTH for e in p.equations for t in (e.lhs, e.rhs))
