import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcartan.cartan import q_cartan_monomial
from qcartan.cycleinv import InvariantTuple, derived_invariants
from qcartan.homalg import (
    ComplexSpec,
    Verdict,
    compare_invariants,
    dim_hom_projectives,
    endo_cartan,
    stalk,
)

from conftest import pres

TILTING = [
    ComplexSpec("T1", {0: (2,)}),
    ComplexSpec("T2", {0: (0, 2), -1: (1,)}),
    ComplexSpec("T3", {0: (0,)}),
]


def test_dim_hom(lambda5):
    C1 = q_cartan_monomial(lambda5).evaluate(1)
    assert dim_hom_projectives(C1, 0, 1) == 2
    assert dim_hom_projectives(C1, 2, 1) == 1
    assert dim_hom_projectives([[1, 0], [0, 1]], 1, 1) == 1
    with pytest.raises(IndexError):
        dim_hom_projectives(C1, 3, 0)


def test_endo_tilting(lambda5, lambda6):
    C1 = q_cartan_monomial(lambda5).evaluate(1)
    E = endo_cartan(C1, TILTING)
    assert E == [[1, 1, 1], [1, 1, 1], [1, 1, 2]]
    assert E == q_cartan_monomial(lambda6).evaluate(1)


def test_endo_stalks_return_cartan(lambda5):
    C1 = q_cartan_monomial(lambda5).evaluate(1)
    assert endo_cartan(C1, [stalk(f"P{i}", i) for i in range(3)]) == C1


matrices = st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=3, max_size=3)
complexes = st.lists(
    st.dictionaries(st.integers(-3, 3), st.lists(st.integers(0, 2), min_size=1, max_size=3).map(tuple), min_size=1, max_size=3),
    min_size=1,
    max_size=4,
)


@given(matrices, complexes, st.integers(-5, 5))
def test_endo_shift_invariance(C1, terms, k):
    cx = [ComplexSpec(f"T{i}", t) for i, t in enumerate(terms)]
    assert endo_cartan(C1, [c.shifted(k) for c in cx]) == endo_cartan(C1, cx)


@given(matrices, complexes)
def test_endo_single_shift_sign(C1, terms):
    cx = [ComplexSpec(f"T{i}", t) for i, t in enumerate(terms)]
    E = endo_cartan(C1, cx)
    E2 = endo_cartan(C1, [cx[0].shifted(1)] + cx[1:])
    assert E2[0][0] == E[0][0]
    assert all(E2[0][j] == -E[0][j] for j in range(1, len(cx)))


def test_compare(lambda5, lambda6):
    a, b = derived_invariants(lambda5), derived_invariants(lambda6)
    assert a.as_tuple() == b.as_tuple() == (3, 0, 1, (1, 1, 0), 0)
    assert compare_invariants(a, b).verdict is Verdict.NOT_DISTINGUISHED
    tri = derived_invariants(
        pres("vertices 1 2 3\narrow a 1 -> 2\narrow b 2 -> 3\narrow c 3 -> 1\nzero a b\nzero b c\nzero c a")
    )
    cmp = compare_invariants(a, tri)
    assert cmp.verdict is Verdict.DISTINGUISHED
    assert set(cmp.differing) == {"oc", "ec", "snf_q1", "det_q1"}
    assert compare_invariants(a, a).verdict is Verdict.NOT_DISTINGUISHED


tuples = st.builds(
    InvariantTuple,
    st.integers(1, 4),
    st.integers(0, 2),
    st.integers(0, 2),
    st.lists(st.integers(0, 3), max_size=3).map(tuple),
    st.integers(-2, 8),
)


@given(tuples, tuples)
def test_compare_symmetric(a, b):
    x, y = compare_invariants(a, b), compare_invariants(b, a)
    assert x == y
    assert (x.verdict is Verdict.NOT_DISTINGUISHED) == (a == b)


def test_empty_term_rejected():
    with pytest.raises(ValueError):
        ComplexSpec("bad", {0: ()})
