"""Quivers with homogeneous relations: data model, gentle/special-biserial
validators, finite-dimensionality check and a seeded random gentle generator.

Paths are read left to right: ``ab`` is defined when ``target(a) == source(b)``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PresentationError(ValueError):
    """Malformed presentation (dangling names, bad relation, duplicates)."""


class PreconditionError(ValueError):
    """An operation was called on a presentation outside its domain."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Path:
    """A path from ``start`` to ``end``; ``arrows == ()`` is the trivial path."""

    start: str
    end: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return " ".join(self.arrows) if self.arrows else f"e_{self.start}"


@dataclass(frozen=True)
class ZeroRelation:
    path: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.path)


@dataclass(frozen=True)
class MeshRelation:
    """Commutativity relation ``left = right`` between two parallel paths."""

    left: tuple[str, ...]
    right: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.left)


Relation = ZeroRelation | MeshRelation


@dataclass(frozen=True)
class Violation:
    clause: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.clause}] {self.where}: {self.message}"


@dataclass(frozen=True)
class Presentation:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()
    relations: tuple[Relation, ...] = ()
    special: tuple[str, ...] = ()
    name: str = "Q"
    _arrow_map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "relations", tuple(self.relations))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise PresentationError("duplicate vertex name")
        if any(not v for v in self.vertices):
            raise PresentationError("empty vertex name")
        amap = {}
        for a in self.arrows:
            if a.name in amap:
                raise PresentationError(f"duplicate arrow name {a.name!r}")
            if a.source not in vset or a.target not in vset:
                raise PresentationError(f"arrow {a.name!r} references an unknown vertex")
            amap[a.name] = a
        object.__setattr__(self, "_arrow_map", amap)
        sp = set(self.special)
        if not sp <= vset:
            raise PresentationError(f"special vertices {sorted(sp - vset)} are not declared")
        # keep the special set in vertex order so presentations compare canonically
        object.__setattr__(self, "special", tuple(v for v in self.vertices if v in sp))
        for rel in self.relations:
            self._check_relation(rel)

    def _check_relation(self, rel: Relation) -> None:
        if isinstance(rel, ZeroRelation):
            if len(rel.path) < 2:
                raise PresentationError("zero relation must have length >= 2")
            self.path_endpoints(rel.path)
        elif isinstance(rel, MeshRelation):
            if len(rel.left) != len(rel.right):
                raise PresentationError("mesh paths must have equal length")
            if len(rel.left) < 2:
                raise PresentationError("mesh relation must have length >= 2")
            if rel.left == rel.right:
                raise PresentationError("mesh paths must be distinct")
            if self.path_endpoints(rel.left) != self.path_endpoints(rel.right):
                raise PresentationError("mesh paths must share source and target")
        else:
            raise PresentationError(f"unknown relation {rel!r}")

    # -- lookups -----------------------------------------------------------

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_map[name]
        except KeyError:
            raise PresentationError(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._arrow_map

    def path_endpoints(self, arrows: Sequence[str]) -> tuple[str, str]:
        if not arrows:
            raise PresentationError("empty path")
        first = self.arrow(arrows[0])
        cur = first
        for name in arrows[1:]:
            nxt = self.arrow(name)
            if cur.target != nxt.source:
                raise PresentationError(f"path {' '.join(arrows)} is not composable at {name!r}")
            cur = nxt
        return first.source, cur.target

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def is_monomial(self) -> bool:
        return all(isinstance(r, ZeroRelation) for r in self.relations)

    def zero_pairs(self) -> set[tuple[str, str]]:
        return {r.path for r in self.relations if isinstance(r, ZeroRelation) and len(r.path) == 2}

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    # -- derived presentations --------------------------------------------

    def without_arrows(self, names: Iterable[str]) -> Presentation:
        drop = set(names)
        return Presentation(
            self.vertices,
            [a for a in self.arrows if a.name not in drop],
            [r for r in self.relations if not drop & set(_relation_arrows(r))],
            self.special,
            self.name,
        )

    def restrict(self, keep: Iterable[str]) -> Presentation:
        """Full subquiver on ``keep``; arrows and relations leaving it are dropped."""
        keep = set(keep)
        drop = [a.name for a in self.arrows if a.source not in keep or a.target not in keep]
        p = self.without_arrows(drop)
        return Presentation(
            [v for v in self.vertices if v in keep],
            p.arrows,
            p.relations,
            [v for v in self.special if v in keep],
            self.name,
        )

    def with_special(self, special: Iterable[str]) -> Presentation:
        return Presentation(self.vertices, self.arrows, self.relations, tuple(special), self.name)

    def with_relations(self, relations: Iterable[Relation]) -> Presentation:
        return Presentation(self.vertices, self.arrows, tuple(relations), self.special, self.name)


def _relation_arrows(rel: Relation) -> tuple[str, ...]:
    if isinstance(rel, ZeroRelation):
        return rel.path
    return rel.left + rel.right


def valency(p: Presentation, v: str) -> int:
    """In-degree plus out-degree; a loop counts twice."""
    if v not in p.vertices:
        raise PresentationError(f"unknown vertex {v!r}")
    return sum((a.source == v) + (a.target == v) for a in p.arrows)


def validate_special_biserial(p: Presentation) -> list[Violation]:
    out: list[Violation] = []
    for rel in p.relations:
        if isinstance(rel, MeshRelation):
            out.append(Violation("mesh", " ".join(rel.left), "mesh generator present"))
    zero = p.zero_pairs()
    for v in p.vertices:
        n_out, n_in = len(p.out_arrows(v)), len(p.in_arrows(v))
        if n_out > 2:
            out.append(Violation("i", f"vertex {v}", f"starting point of {n_out} arrows"))
        if n_in > 2:
            out.append(Violation("i", f"vertex {v}", f"end point of {n_in} arrows"))
    for a in p.arrows:
        nonzero_after = [b.name for b in p.out_arrows(a.target) if (a.name, b.name) not in zero]
        nonzero_before = [c.name for c in p.in_arrows(a.source) if (c.name, a.name) not in zero]
        if len(nonzero_after) > 1:
            out.append(Violation("ii", f"arrow {a.name}", f"nonzero continuations {nonzero_after}"))
        if len(nonzero_before) > 1:
            out.append(Violation("ii", f"arrow {a.name}", f"nonzero predecessors {nonzero_before}"))
    return out


def validate_gentle(p: Presentation) -> list[Violation]:
    out = validate_special_biserial(p)
    for rel in p.relations:
        if isinstance(rel, ZeroRelation) and rel.length != 2:
            out.append(Violation("iii", " ".join(rel.path), f"relation of length {rel.length}"))
    zero = p.zero_pairs()
    for a in p.arrows:
        zero_after = [b.name for b in p.out_arrows(a.target) if (a.name, b.name) in zero]
        zero_before = [c.name for c in p.in_arrows(a.source) if (c.name, a.name) in zero]
        if len(zero_after) > 1:
            out.append(Violation("iv", f"arrow {a.name}", f"zero continuations {zero_after}"))
        if len(zero_before) > 1:
            out.append(Violation("iv", f"arrow {a.name}", f"zero predecessors {zero_before}"))
    return out


def is_gentle(p: Presentation) -> bool:
    return not validate_gentle(p)


def zero_successor(p: Presentation) -> dict[str, str]:
    """The partial map sending an arrow ``a`` to the arrow ``b`` with ``ab`` in I."""
    bad = validate_gentle(p)
    if bad:
        raise PreconditionError(f"presentation is not gentle: {bad[0]}")
    sigma = {a: b for a, b in sorted(p.zero_pairs())}
    assert len(set(sigma.values())) == len(sigma), "zero successor map is not injective"
    return sigma


@dataclass(frozen=True)
class FiniteDimResult:
    ok: bool
    witness: tuple[str, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _monomial_cycle(p: Presentation) -> tuple[str, ...] | None:
    """An arrow word that can be repeated forever without meeting a zero
    generator, or None.  States are nonzero paths of length L-1 where L is the
    longest generator; an infinite nonzero path exists iff the state graph
    has a directed cycle."""
    gens = {r.path for r in p.relations if isinstance(r, ZeroRelation)}
    longest = max((len(g) for g in gens), default=2)
    width = max(1, longest - 1)

    def nonzero_tail(path: tuple[str, ...]) -> bool:
        n = len(path)
        return not any(path[n - k:] in gens for k in range(2, min(n, longest) + 1))

    states: list[tuple[str, ...]] = [(a.name,) for a in p.arrows]
    for _ in range(width - 1):
        states = [
            s + (b.name,)
            for s in states
            for b in p.out_arrows(p.arrow(s[-1]).target)
            if nonzero_tail(s + (b.name,))
        ]

    def successors(s):
        for b in p.out_arrows(p.arrow(s[-1]).target):
            ext = s + (b.name,)
            if nonzero_tail(ext):
                yield ext[1:], b.name

    color: dict[tuple[str, ...], int] = {}
    for root in states:
        if root in color:
            continue
        stack = [(root, successors(root))]
        trail: list[str] = []
        color[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt, label in it:
                c = color.get(nxt, 0)
                if c == 1:
                    # back edge: the cycle is the trail segment from nxt onwards
                    pos = [s for s, _ in stack].index(nxt)
                    return tuple(trail[pos:] + [label])
                if c == 0:
                    color[nxt] = 1
                    trail.append(label)
                    stack.append((nxt, successors(nxt)))
                    break
            else:
                color[node] = 2
                stack.pop()
                if trail:
                    trail.pop()
    return None


def check_finite_dimensional(p: Presentation, max_degree: int | None = None) -> FiniteDimResult:
    if p.is_monomial():
        cyc = _monomial_cycle(p)
        if cyc is None:
            return FiniteDimResult(True)
        return FiniteDimResult(False, cyc, "oriented cycle avoiding all zero relations")
    from .cartan import DegreeCapExceeded, q_cartan_graded

    try:
        q_cartan_graded(p, max_degree)
    except DegreeCapExceeded as exc:
        return FiniteDimResult(False, (), str(exc))
    return FiniteDimResult(True)


def random_gentle(n_vertices: int, seed: int) -> Presentation:
    """Deterministic random gentle, finite-dimensional presentation.

    Arrows are inserted greedily; each insertion picks a random valid choice of
    zero/nonzero for the new length-2 compositions, and candidates that break
    gentleness or finite dimension are rejected.
    """
    if n_vertices < 1:
        raise ValueError("n_vertices must be positive")
    rng = random.Random(seed)
    verts = [str(i + 1) for i in range(n_vertices)]
    arrows: list[Arrow] = []
    zero: list[tuple[str, str]] = []
    target_arrows = rng.randint(0, 2 * n_vertices)
    for attempt in range(8 * n_vertices):
        if len(arrows) >= target_arrows:
            break
        u, w = rng.choice(verts), rng.choice(verts)
        if sum(a.source == u for a in arrows) >= 2 or sum(a.target == w for a in arrows) >= 2:
            continue
        x = Arrow(f"a{len(arrows)}", u, w)
        trial = arrows + [x]
        pairs = sorted(
            {(y.name, x.name) for y in trial if y.target == u}
            | {(x.name, z.name) for z in trial if z.source == w}
        )
        choices = list(itertools.product((False, True), repeat=len(pairs)))
        rng.shuffle(choices)
        for choice in choices:
            rels = zero + [pr for pr, z in zip(pairs, choice) if z]
            cand = Presentation(verts, trial, [ZeroRelation(r) for r in rels], name="random")
            if validate_gentle(cand) or not check_finite_dimensional(cand):
                continue
            arrows, zero = trial, rels
            break
    return Presentation(
        verts, arrows, [ZeroRelation(r) for r in zero], name=f"gen_{n_vertices}_{seed}"
    )
