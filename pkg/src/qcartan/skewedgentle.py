"""Admissible special vertex sets and the covering quiver obtained by doubling
them.

Naming of lifted objects: a special vertex ``v`` becomes ``v.p`` and ``v.m``.
An arrow with one special endpoint gets lifts ``a.p``/``a.m`` (sign of that
endpoint); with two special endpoints ``a.pp``, ``a.pm``, ``a.mp``, ``a.mm``
(source sign first).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .cartan import q_cartan, q_cartan_graded
from .quiver import (
    Arrow,
    MeshRelation,
    PreconditionError,
    Presentation,
    Violation,
    ZeroRelation,
    check_finite_dimensional,
    valency,
    validate_gentle,
)

SIGNS = ("p", "m")


@dataclass(frozen=True)
class CoverMap:
    vertex_fibers: dict[str, tuple[str, ...]]
    arrow_fibers: dict[str, tuple[str, ...]]

    def base_of_vertex(self, v: str) -> str:
        for b, fib in self.vertex_fibers.items():
            if v in fib:
                return b
        raise KeyError(v)


def vertex_lifts(v: str, special) -> tuple[str, ...]:
    return (f"{v}.p", f"{v}.m") if v in special else (v,)


def special_loop_name(p: Presentation, v: str) -> str:
    name = f"eps.{v}"
    while p.has_arrow(name):
        name += "_"
    return name


def _local_violation(p: Presentation, v: str) -> Violation | None:
    val = valency(p, v)
    if val <= 1:
        return None
    ins, outs = p.in_arrows(v), p.out_arrows(v)
    if val == 2 and len(ins) == 1 and len(outs) == 1 and not ins[0].is_loop:
        if (ins[0].name, outs[0].name) in p.zero_pairs():
            return None
        return Violation("local", f"vertex {v}", "valency 2 without a zero relation at the vertex")
    return Violation("local", f"vertex {v}", f"valency {val} cannot carry a special loop")


def special_extension(p: Presentation) -> Presentation:
    """Add a square-zero loop at every special vertex.

    Existing relations are kept and the new compositions through the loop
    are nonzero: the only completion compatible with gentleness.
    """
    arrows = list(p.arrows)
    rels = list(p.relations)
    for v in p.special:
        eps = special_loop_name(p, v)
        arrows.append(Arrow(eps, v, v))
        rels.append(ZeroRelation((eps, eps)))
    return Presentation(p.vertices, arrows, rels, (), p.name + "_sp")


def validate_special_set(p: Presentation) -> list[Violation]:
    bad = validate_gentle(p.with_special(()))
    if bad:
        raise PreconditionError(f"underlying presentation is not gentle: {bad[0]}")
    out = [viol for v in p.special if (viol := _local_violation(p, v)) is not None]
    if out:
        return out
    ext = special_extension(p)
    out += [Violation("global", f"Q^sp {viol.where}", viol.message) for viol in validate_gentle(ext)]
    fd = check_finite_dimensional(ext)
    if not fd:
        out.append(
            Violation("global", "Q^sp", f"paths of arbitrary length, cycle {' '.join(fd.witness)}")
        )
        return out
    if p.special:
        c = q_cartan(p.with_special(()))
        for v in p.special:
            d = c.entry(v, v)
            if not d.is_one():
                out.append(Violation("global", f"vertex {v}", f"diagonal Cartan entry {d} is not 1"))
    return out


def _lift_arrow(a: Arrow, special) -> list[tuple[str, str, str]]:
    """(lifted name, lifted source, lifted target) for arrow ``a``."""
    s_sp, t_sp = a.source in special, a.target in special
    if not s_sp and not t_sp:
        return [(a.name, a.source, a.target)]
    if s_sp and t_sp:
        return [
            (f"{a.name}.{x}{y}", f"{a.source}.{x}", f"{a.target}.{y}")
            for x, y in itertools.product(SIGNS, SIGNS)
        ]
    if s_sp:
        return [(f"{a.name}.{x}", f"{a.source}.{x}", a.target) for x in SIGNS]
    return [(f"{a.name}.{y}", a.source, f"{a.target}.{y}") for y in SIGNS]


def build_cover(p: Presentation, check: bool = True) -> tuple[Presentation, CoverMap]:
    if check:
        bad = validate_special_set(p)
        if bad:
            raise PreconditionError(f"special set is not admissible: {bad[0]}")
    if not p.special:
        base = p.with_special(())
        return base, CoverMap(
            {v: (v,) for v in p.vertices}, {a.name: (a.name,) for a in p.arrows}
        )
    special = set(p.special)
    vfib = {v: vertex_lifts(v, special) for v in p.vertices}
    cover_vertices = [x for v in p.vertices for x in vfib[v]]
    lifts = {a.name: _lift_arrow(a, special) for a in p.arrows}
    cover_arrows = [Arrow(*t) for a in p.arrows for t in lifts[a.name]]
    rels = []
    for r in p.relations:
        if not isinstance(r, ZeroRelation) or len(r.path) != 2:
            raise PreconditionError("cover construction needs length-2 zero relations")
        a, b = r.path
        mid = p.arrow(a).target
        if mid not in special:
            for (na, _, ta), (nb, sb, _) in itertools.product(lifts[a], lifts[b]):
                if ta == sb:
                    rels.append(ZeroRelation((na, nb)))
            continue
        # through a special middle vertex: the two lifts via mid.p and mid.m agree
        for start in vfib[p.arrow(a).source]:
            for end in vfib[p.arrow(b).target]:
                paths = []
                for m in vfib[mid]:
                    la = [n for n, s, t in lifts[a] if s == start and t == m]
                    lb = [n for n, s, t in lifts[b] if s == m and t == end]
                    paths.append((la[0], lb[0]))
                rels.append(MeshRelation(paths[0], paths[1]))
    cover = Presentation(cover_vertices, cover_arrows, rels, (), p.name + "_cover")
    return cover, CoverMap(vfib, {k: tuple(n for n, _, _ in v) for k, v in lifts.items()})


def cover_q_cartan(p: Presentation, max_degree: int | None = None):
    cover, _ = build_cover(p)
    if not p.special:
        return q_cartan(cover, max_degree)
    return q_cartan_graded(cover, max_degree)


def random_special_set(p: Presentation, seed: int) -> tuple[str, ...]:
    """A random admissible special set, grown one vertex at a time."""
    rng = random.Random(seed)
    base = p.with_special(())
    cands = [v for v in base.vertices if valency(base, v) >= 1 and _local_violation(base, v) is None]
    rng.shuffle(cands)
    chosen: list[str] = []
    for v in cands[: rng.randint(0, len(cands))]:
        if not validate_special_set(base.with_special(chosen + [v])):
            chosen.append(v)
    return base.with_special(chosen).special
