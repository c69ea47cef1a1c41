"""q-Cartan matrices.

Two independent engines:

* ``q_cartan_monomial`` enumerates paths avoiding the zero generators;
* ``q_cartan_graded`` builds each graded piece ``e_i A_n`` as a quotient of
  ``e_i A_{n-1} (x) KQ_1`` by exact rational linear algebra, which handles mesh
  relations as well.

``graded_dimension`` is a third, deliberately naive route (free paths modulo
the span of all ``p g s``) used to cross-check the graded engine at small
degrees.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Sequence

from .polymat import QMatrix, QPoly
from .quiver import (
    MeshRelation,
    Path,
    PreconditionError,
    Presentation,
    ZeroRelation,
    check_finite_dimensional,
)


class DegreeCapExceeded(RuntimeError):
    """The graded pieces did not vanish below the degree cap."""

    def __init__(self, max_degree: int, dims: int):
        super().__init__(
            f"degree cap {max_degree} reached with {dims} nonzero paths in that degree; "
            "presentation is presumably infinite-dimensional"
        )
        self.max_degree = max_degree


def default_max_degree(p: Presentation) -> int:
    return 2 * (len(p.arrows) + 1) * len(p.vertices)


# -- monomial engine --------------------------------------------------------

def _zero_generators(p: Presentation) -> tuple[set[tuple[str, ...]], int]:
    gens = set()
    for r in p.relations:
        if not isinstance(r, ZeroRelation):
            raise PreconditionError("monomial engine needs zero relations only")
        gens.add(r.path)
    return gens, max((len(g) for g in gens), default=0)


def _nonzero_paths_from(p: Presentation, start: str) -> list[Path]:
    gens, longest = _zero_generators(p)
    found = [Path(start, start)]
    stack: list[tuple[tuple[str, ...], str]] = [((), start)]
    while stack:
        word, end = stack.pop()
        for a in p.out_arrows(end):
            ext = word + (a.name,)
            n = len(ext)
            if any(ext[n - k:] in gens for k in range(2, min(n, longest) + 1)):
                continue
            found.append(Path(start, a.target, ext))
            stack.append((ext, a.target))
    return found


def _require_finite_monomial(p: Presentation) -> None:
    _zero_generators(p)
    fd = check_finite_dimensional(p)
    if not fd:
        raise PreconditionError(
            f"presentation is not finite-dimensional (witness cycle: {' '.join(fd.witness)})"
        )


def nonzero_paths_monomial(p: Presentation, source: str, target: str) -> list[Path]:
    """All paths ``source -> target`` with no zero generator as a subpath,
    including the trivial path when ``source == target``."""
    _require_finite_monomial(p)
    for v in (source, target):
        if v not in p.vertices:
            raise PreconditionError(f"unknown vertex {v!r}")
    paths = [x for x in _nonzero_paths_from(p, source) if x.end == target]
    return sorted(paths, key=lambda x: (x.length, x.arrows))


def all_nonzero_paths(p: Presentation) -> list[Path]:
    _require_finite_monomial(p)
    return [x for v in p.vertices for x in _nonzero_paths_from(p, v)]


def q_cartan_monomial(p: Presentation) -> QMatrix:
    _require_finite_monomial(p)
    idx = {v: i for i, v in enumerate(p.vertices)}
    n = len(p.vertices)
    counts = [[defaultdict(int) for _ in range(n)] for _ in range(n)]
    for v in p.vertices:
        for path in _nonzero_paths_from(p, v):
            counts[idx[path.start]][idx[path.end]][path.length] += 1
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = counts[i][j]
            top = max(c, default=-1)
            row.append(QPoly([c.get(d, 0) for d in range(top + 1)]))
        rows.append(row)
    return QMatrix(rows, p.vertices)


# -- exact linear algebra ----------------------------------------------------

class _Echelon:
    """Incrementally maintained reduced row echelon form over Q with sparse
    rows (dict column -> Fraction)."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        vec = {k: v for k, v in vec.items() if v}
        for col in sorted(vec):
            c = vec.get(col)
            if c and col in self.rows:
                for k, x in self.rows[col].items():
                    vec[k] = vec.get(k, 0) - c * x
                vec = {k: v for k, v in vec.items() if v}
        return vec

    def add(self, vec: dict[int, Fraction]) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        lead = min(vec)
        inv = 1 / Fraction(vec[lead])
        vec = {k: v * inv for k, v in vec.items()}
        for col, row in self.rows.items():
            c = row.get(lead)
            if c:
                for k, x in vec.items():
                    row[k] = row.get(k, 0) - c * x
                self.rows[col] = {k: v for k, v in row.items() if v}
        self.rows[lead] = vec
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rational_rank(vectors: Sequence[dict[int, int | Fraction]]) -> int:
    ech = _Echelon()
    for v in vectors:
        ech.add({k: Fraction(x) for k, x in v.items()})
    return ech.rank


def _generators(p: Presentation) -> list[tuple[int, list[tuple[int, tuple[str, ...]]]]]:
    gens = []
    for r in p.relations:
        if isinstance(r, ZeroRelation):
            gens.append((len(r.path), [(1, r.path)]))
        elif isinstance(r, MeshRelation):
            gens.append((len(r.left), [(1, r.left), (-1, r.right)]))
    return gens


# -- naive graded dimension --------------------------------------------------

def _free_paths(p: Presentation, length: int) -> list[tuple[str, str, tuple[str, ...]]]:
    layer = [(v, v, ()) for v in p.vertices]
    for _ in range(length):
        layer = [(s, a.target, w + (a.name,)) for s, e, w in layer for a in p.out_arrows(e)]
    return layer


def graded_dimension(p: Presentation, degree: int) -> list[list[int]]:
    """``dim (e_i A e_j)_n`` for all vertex pairs, as free paths of length n
    minus the rank of the relation span ``{p g s}`` in that degree."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    n = len(p.vertices)
    idx = {v: i for i, v in enumerate(p.vertices)}
    free = _free_paths(p, degree)
    coord: dict[tuple[str, ...] | tuple[str, str], int] = {}
    blocks: dict[tuple[int, int], list[int]] = defaultdict(list)
    for s, e, w in free:
        key = w if w else ("", s)
        coord[key] = len(coord)
        blocks[idx[s], idx[e]].append(coord[key])
    rows: dict[tuple[int, int], list[dict[int, int]]] = defaultdict(list)
    by_length: dict[int, list] = {}
    for glen, terms in _generators(p):
        if glen > degree:
            continue
        g_src, g_tgt = p.path_endpoints(terms[0][1])
        for a in range(degree - glen + 1):
            prefixes = by_length.setdefault(a, _free_paths(p, a))
            suffixes = by_length.setdefault(degree - glen - a, _free_paths(p, degree - glen - a))
            for ps, pe, pw in prefixes:
                if pe != g_src:
                    continue
                for ss, se, sw in suffixes:
                    if ss != g_tgt:
                        continue
                    vec: dict[int, int] = defaultdict(int)
                    for c, w in terms:
                        vec[coord[pw + w + sw]] += c
                    rows[idx[ps], idx[se]].append(dict(vec))
    dims = [[0] * n for _ in range(n)]
    for (i, j), cols in blocks.items():
        dims[i][j] = len(cols) - rational_rank(rows.get((i, j), []))
    return dims


# -- incremental graded engine ----------------------------------------------

class _GradedModule:
    """The graded right module ``e_i A`` built degree by degree.

    ``basis[m]`` lists (end vertex, representative word) for a basis of
    ``e_i A_m``; ``mult[m][(k, arrow)]`` expresses basis element k of degree m
    times ``arrow`` in the degree m+1 basis.
    """

    def __init__(self, p: Presentation, start: str, gens):
        self.p = p
        self.gens = gens
        self.basis: list[list[tuple[str, tuple[str, ...]]]] = [[(start, ())]]
        self.mult: list[dict[tuple[int, str], dict[int, Fraction]]] = []
        self._out = {v: [a.name for a in p.out_arrows(v)] for v in p.vertices}
        self._src = {a.name: a.source for a in p.arrows}
        self._tgt = {a.name: a.target for a in p.arrows}

    def _times_word(self, level: int, vec: dict[int, Fraction], word: Sequence[str]):
        for step, x in enumerate(word):
            table = self.mult[level + step]
            out: dict[int, Fraction] = defaultdict(Fraction)
            for k, c in vec.items():
                for kk, cc in table[(k, x)].items():
                    out[kk] += c * cc
            vec = {k: c for k, c in out.items() if c}
            if not vec:
                break
        return vec

    def grow(self) -> int:
        """Compute the next degree; returns its dimension."""
        m = len(self.basis) - 1
        cur = self.basis[m]
        cands = [(k, x) for k, (end, _) in enumerate(cur) for x in self._out[end]]
        cidx = {c: n for n, c in enumerate(cands)}
        ech = _Echelon()
        for glen, terms in self.gens:
            a = m + 1 - glen
            if a < 0:
                continue
            g_src = self._src[terms[0][1][0]]
            for k, (end, _) in enumerate(self.basis[a]):
                if end != g_src:
                    continue
                row: dict[int, Fraction] = defaultdict(Fraction)
                for coef, word in terms:
                    head = self._times_word(a, {k: Fraction(1)}, word[:-1])
                    for kk, c in head.items():
                        row[cidx[(kk, word[-1])]] += coef * c
                ech.add(row)
        free_cols = [c for c in range(len(cands)) if c not in ech.rows]
        new_index = {c: n for n, c in enumerate(free_cols)}
        table: dict[tuple[int, str], dict[int, Fraction]] = {}
        for c, (k, x) in enumerate(cands):
            if c in new_index:
                table[(k, x)] = {new_index[c]: Fraction(1)}
            else:
                table[(k, x)] = {new_index[j]: -v for j, v in ech.rows[c].items() if j != c}
        self.mult.append(table)
        self.basis.append([(self._tgt[cands[c][1]], cur[cands[c][0]][1] + (cands[c][1],)) for c in free_cols])
        return len(free_cols)


def q_cartan_graded(p: Presentation, max_degree: int | None = None) -> QMatrix:
    """q-Cartan matrix for any homogeneous presentation (zero and mesh
    generators).  Raises :class:`DegreeCapExceeded` if some degree
    ``<= max_degree`` is never reached with all pieces zero."""
    if max_degree is None:
        max_degree = default_max_degree(p)
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    gens = _generators(p)
    idx = {v: i for i, v in enumerate(p.vertices)}
    n = len(p.vertices)
    modules = [_GradedModule(p, v, gens) for v in p.vertices]
    degree = 0
    # all modules advance together: the first degree with total dimension 0 stops
    while True:
        degree += 1
        total = sum(mod.grow() for mod in modules)
        if total == 0:
            break
        if degree >= max_degree:
            raise DegreeCapExceeded(max_degree, total)
    rows = []
    for i, mod in enumerate(modules):
        coeffs = [[0] * (degree + 1) for _ in range(n)]
        for d, layer in enumerate(mod.basis):
            for end, _ in layer:
                coeffs[idx[end]][d] += 1
        rows.append([QPoly(c) for c in coeffs])
    return QMatrix(rows, p.vertices)


def q_cartan(p: Presentation, max_degree: int | None = None) -> QMatrix:
    """Monomial engine when it applies, graded engine otherwise."""
    if p.is_monomial() and check_finite_dimensional(p):
        return q_cartan_monomial(p)
    return q_cartan_graded(p, max_degree)
