import pytest

from qcartan.cartan import q_cartan_graded, q_cartan_monomial
from qcartan.cycleinv import cycle_inventory
from qcartan.normalform import diagonal_multiset, q_normal_form, q_normal_form_cover, reduce_cover
from qcartan.polymat import ONE, QMatrix, QPoly, integer_snf, mat_det
from qcartan.quiver import MeshRelation, PreconditionError, random_gentle
from qcartan.skewedgentle import (
    build_cover,
    cover_q_cartan,
    random_special_set,
    special_extension,
    validate_special_set,
)

from conftest import load, pres

q = QPoly((0, 1))


def test_admissible_example():
    assert validate_special_set(load("skewed.qvr")) == []


def test_valency_four_is_local_violation(lambda5):
    bad = validate_special_set(lambda5.with_special(["2"]))
    assert bad and bad[0].clause == "local"


def test_global_violation_from_loop():
    # a u -> v -> u two-cycle with only one zero relation
    p = pres("vertices u v\narrow a u -> v\narrow b v -> u\nzero a b\nspecial v")
    bad = validate_special_set(p)
    assert bad and all(v.clause == "global" for v in bad)
    ext = special_extension(p)
    assert len(ext.arrows) == 3


def test_cover_example():
    p = load("skewed.qvr")
    cover, cmap = build_cover(p)
    assert cover.vertices == ("1", "2.p", "2.m", "3")
    assert {(a.name, a.source, a.target) for a in cover.arrows} == {
        ("a.p", "1", "2.p"),
        ("a.m", "1", "2.m"),
        ("b.p", "2.p", "3"),
        ("b.m", "2.m", "3"),
    }
    assert cover.relations == (MeshRelation(("a.p", "b.p"), ("a.m", "b.m")),)
    assert cmap.vertex_fibers["2"] == ("2.p", "2.m")
    C = cover_q_cartan(p)
    q2 = QPoly((0, 0, 1))
    expected = [[1, q, q, q2], [0, 1, 0, q], [0, 0, 1, q], [0, 0, 0, 1]]
    assert C == QMatrix([[QPoly.coerce(x) for x in r] for r in expected], cover.vertices)
    assert mat_det(C) == ONE
    cert = q_normal_form_cover(p)
    assert cert.D == QMatrix.identity(cover.vertices)


def test_empty_special_set(lambda5):
    cover, cmap = build_cover(lambda5)
    assert cover == lambda5
    assert all(v == (k,) for k, v in cmap.vertex_fibers.items())
    assert cover_q_cartan(lambda5) == q_cartan_monomial(lambda5)


def test_arrow_between_special_vertices():
    p = pres(
        "vertices 1 2 3 4\narrow a 1 -> 2\narrow b 2 -> 3\narrow c 3 -> 4\n"
        "zero a b\nzero b c\nspecial 2 3"
    )
    assert validate_special_set(p) == []
    cover, cmap = build_cover(p)
    assert cmap.arrow_fibers["b"] == ("b.pp", "b.pm", "b.mp", "b.mm")
    assert len(cover.arrows) == 8


def test_inadmissible_cover_raises(lambda5):
    with pytest.raises(PreconditionError):
        build_cover(lambda5.with_special(["2"]))


def _random_instances(count):
    seed = 0
    while count:
        p = random_gentle(1 + seed % 8, seed)
        sp = random_special_set(p, seed)
        seed += 1
        if sp:
            count -= 1
            yield p.with_special(sp)


def test_cover_properties_random():
    for p in _random_instances(40):
        base = p.with_special(())
        Cb, Cc = q_cartan_monomial(base), cover_q_cartan(p)
        assert mat_det(Cc) == mat_det(Cb)
        red = reduce_cover(p)
        pad = diagonal_multiset(q_normal_form(base).D)
        pad[ONE.coeffs] += len(p.special)
        assert diagonal_multiset(red.certificate.D) == pad
        s_base = integer_snf(Cb.evaluate(1))
        s_cov = integer_snf(Cc.evaluate(1))
        assert sorted(s_cov) == sorted(s_base + (1,) * len(p.special))
        assert red.nontrivial_lengths() == cycle_inventory(base).lengths()


def test_cover_roundtrip_of_vertex_counts():
    for p in _random_instances(20):
        cover, cmap = build_cover(p)
        assert len(cover.vertices) == len(p.vertices) + len(p.special)
        assert sum(len(f) for f in cmap.vertex_fibers.values()) == len(cover.vertices)
        for v in cover.vertices:
            assert cmap.base_of_vertex(v) in p.vertices
