import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcartan.polymat import (
    ONE,
    Q,
    ZERO,
    QMatrix,
    QPoly,
    Tracker,
    UnimodularityError,
    apply_col_combination,
    apply_row_combination,
    cyclotomic_factor,
    det_cofactor,
    integer_det,
    integer_snf,
    mat_det,
    poly_add,
    poly_eval,
    poly_mul,
    render_poly,
)

polys = st.lists(st.integers(-5, 5), max_size=5).map(QPoly)


def P(*c):
    return QPoly(c)


def qm(rows, labels=None):
    return QMatrix([[QPoly.coerce(x) for x in r] for r in rows], labels)


def test_add_examples():
    assert poly_add(P(1, 0, 1), P(0, 1)) == P(1, 1, 1)
    assert poly_add(P(3, 2), ZERO) == P(3, 2)
    assert poly_add(P(1, 1), P(-1, -1)).is_zero()


def test_mul_examples():
    assert poly_mul(P(1, 1), P(1, -1)) == P(1, 0, -1)
    assert poly_mul(P(2, 0, 5), ONE) == P(2, 0, 5)
    assert poly_mul(P(1, 1), P(1, -1, 1, -1)) == P(1, 0, 0, 0, -1)


def test_eval_examples():
    assert poly_eval(P(1, 0, 1), 1) == 2
    assert poly_eval(cyclotomic_factor(2), 1) == 0
    assert poly_eval(P(1, 0, 0, 1, 0, 0, 1, 0, 0, 1), 1) == 4


def test_cyclotomic_factor():
    assert cyclotomic_factor(1) == P(1, 1)
    assert cyclotomic_factor(2) == P(1, 0, -1)
    assert cyclotomic_factor(3) == P(1, 0, 0, 1)


def test_render():
    assert render_poly(P(1, 0, 1)) == "1 + q^2"
    assert render_poly(P(1, 0, -1)) == "1 - q^2"
    assert render_poly(ZERO) == "0"
    assert render_poly(P(0, -2, 3)) == "-2q + 3q^2"


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert (a - a).is_zero()


@given(polys, polys, st.integers(-3, 3))
def test_eval_is_homomorphism(a, b, x):
    assert poly_eval(a * b, x) == poly_eval(a, x) * poly_eval(b, x)
    assert poly_eval(a + b, x) == poly_eval(a, x) + poly_eval(b, x)


@given(polys, polys)
def test_divexact(a, b):
    if not b.is_zero():
        assert (a * b).divexact(b) == a


def test_det_examples():
    assert mat_det(qm([[P(1, 0, 1), Q], [Q, 1]])) == ONE
    t = P(1, 0, 0, 1)
    CB = qm([[t, Q, Q * Q], [Q * Q, t, Q], [Q, Q * Q, t]])
    assert mat_det(CB) == P(1, 0, 0, 1, 0, 0, 1, 0, 0, 1)
    assert det_cofactor(CB) == mat_det(CB)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(polys, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_cofactor(rows):
    m = QMatrix(rows)
    assert mat_det(m) == det_cofactor(m)


def test_row_shear():
    m = apply_row_combination(QMatrix.identity(["u", "v"]), 1, [(1, 1), (0, -Q)])
    assert m.same_entries(qm([[1, 0], [-Q, 1]]))
    m = apply_row_combination(QMatrix.identity(["u", "v"]), 0, [(0, 1), (1, -Q)])
    assert m.same_entries(qm([[1, -Q], [0, 1]]))


def test_two_cycle_shear_pair():
    C = qm([[1, Q], [Q, 1]])
    W = apply_row_combination(C, 1, [(1, 1), (0, -Q)])
    W = apply_col_combination(W, 1, [(1, 1), (0, -Q)])
    assert W == qm([[1, 0], [0, P(1, 0, -1)]])


def test_col_shear_path():
    C = qm([[1, Q], [0, 1]], ["1", "2"])
    assert apply_col_combination(C, 1, [(1, 1), (0, -Q)]) == QMatrix.identity(["1", "2"])


def test_target_coefficient_must_be_one():
    with pytest.raises(UnimodularityError):
        apply_row_combination(QMatrix.identity(["a", "b"]), 0, [(0, 2)])
    with pytest.raises(UnimodularityError):
        apply_col_combination(QMatrix.identity(["a", "b"]), 0, [(1, Q)])


def test_repeated_indices_merge():
    m = apply_row_combination(QMatrix.identity(["a", "b"]), 0, [(0, 1), (1, Q), (1, Q)])
    assert m[0, 1] == P(0, 2)


ops = st.lists(
    st.tuples(st.booleans(), st.integers(0, 2), st.integers(0, 2), polys), max_size=8
)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(polys, min_size=3, max_size=3), min_size=3, max_size=3), ops)
def test_tracker_invariant(rows, seq):
    C = QMatrix(rows, ["a", "b", "c"])
    W = C
    tr = Tracker.start(C.labels)
    for is_row, t, s, c in seq:
        if s == t:
            continue
        f = apply_row_combination if is_row else apply_col_combination
        W = f(W, t, [(t, 1), (s, c)], tr)
    assert tr.P @ C @ tr.Q == W
    assert mat_det(tr.P) == ONE and mat_det(tr.Q) == ONE


def _minor_det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * _minor_det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))


def _snf_oracle(m):
    """Invariant factors from determinantal divisors d_k = gcd of k-minors."""
    n = len(m)
    d = [1]
    for k in range(1, n + 1):
        g = 0
        for rs in itertools.combinations(range(n), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, _minor_det([[m[i][j] for j in cs] for i in rs]))
        d.append(g)
    return tuple(d[k] // d[k - 1] if d[k] else 0 for k in range(1, n + 1))


def test_snf_examples():
    assert integer_snf([[2, 2, 1], [2, 2, 1], [1, 1, 1]]) == (1, 1, 0)
    assert integer_snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1, 1)
    assert integer_snf([[2, 0, 0], [0, 0, 0], [0, 0, 1]]) == (1, 2, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_snf_matches_determinantal_divisors(m):
    assert integer_snf(m) == _snf_oracle(m)
    assert integer_det(m) == _minor_det(m)


def test_matrix_entry_orientation():
    m = QMatrix([[ONE, Q], [ZERO, ONE]], ["1", "2"])
    assert m.entry("1", "2") == Q
    assert m.transpose().entry("2", "1") == Q
    assert m.evaluate(1) == [[1, 1], [0, 1]]
