"""Constructive unimodular reduction of q-Cartan matrices of gentle algebras
and of their skewed-gentle covers to diagonal form.

The working matrix always has the full size of the original (cover) Cartan
matrix.  Vertices that have been split off keep a single diagonal entry; the
block on the remaining ("active") vertices is at every step the q-Cartan
matrix of the current, smaller presentation, which is re-checked after each
step when ``verify`` is on.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .cartan import q_cartan, q_cartan_graded, q_cartan_monomial
from .polymat import (
    ONE,
    ZERO,
    QMatrix,
    QPoly,
    Tracker,
    UniCertificate,
    apply_col_combination,
    apply_row_combination,
    cyclotomic_factor,
    mat_det,
)
from .quiver import PreconditionError, Presentation, valency, validate_gentle
from .skewedgentle import build_cover, vertex_lifts


class StuckError(RuntimeError):
    """No reduction rule applies (must not happen for valid input)."""


_NEG_Q = QPoly((0, -1))


def _neg_q_power(k: int) -> QPoly:
    return _NEG_Q ** k


def _zero_pred(p: Presentation, arrow: str) -> bool:
    zero = p.zero_pairs()
    a = p.arrow(arrow)
    return any((b.name, arrow) in zero for b in p.in_arrows(a.source))


def _zero_succ(p: Presentation, arrow: str) -> bool:
    zero = p.zero_pairs()
    a = p.arrow(arrow)
    return any((arrow, b.name) in zero for b in p.out_arrows(a.target))


def removal_mode(p: Presentation, arrow: str) -> str | None:
    """``"col"`` if the arrow can be removed by column operations, ``"row"`` for
    the dual row version, None when it is not removable.  Cover reductions
    additionally require the anchoring endpoint to be non-special."""
    a = p.arrow(arrow)
    if a.is_loop:
        return None
    if not _zero_pred(p, arrow) and a.source not in p.special:
        return "col"
    if not _zero_succ(p, arrow) and a.target not in p.special:
        return "row"
    return None


def _walk(p: Presentation, arrow: str, forward: bool) -> list[tuple[int, str]]:
    """Vertices ``(i, v_i)`` met along the maximal path through ``arrow``.

    Forward: starting with ``arrow`` and continuing along nonzero
    compositions; at a special vertex the path passes through its zero
    relation (which is a mesh relation in the cover).  Backward is the mirror.
    """
    zero = p.zero_pairs()
    special = set(p.special)
    cur = p.arrow(arrow)
    i = 1
    v = cur.target if forward else cur.source
    seen = [(1, v)]
    limit = 2 * len(p.arrows) + 2
    while True:
        if forward:
            outs = p.out_arrows(v)
            if v in special:
                nxt = outs
            else:
                nxt = [b for b in outs if (cur.name, b.name) not in zero]
        else:
            ins = p.in_arrows(v)
            if v in special:
                nxt = ins
            else:
                nxt = [b for b in ins if (b.name, cur.name) not in zero]
        if not nxt:
            return seen
        assert len(nxt) == 1, f"path through {arrow} is not unique at {v}"
        cur = nxt[0]
        i += 1
        v = cur.target if forward else cur.source
        seen.append((i, v))
        if i > limit:
            raise PreconditionError(f"path through {arrow} does not terminate")


def _arrow_removal(p: Presentation, W: QMatrix, arrow: str, track: Tracker | None):
    mode = removal_mode(p, arrow)
    if mode is None:
        raise PreconditionError(f"arrow {arrow} is not removable")
    a = p.arrow(arrow)
    anchor = a.source if mode == "col" else a.target
    coeffs: dict[str, QPoly] = {}
    for i, v in _walk(p, arrow, forward=(mode == "col")):
        assert v != anchor, f"maximal path through {arrow} returns to {anchor}"
        for y in vertex_lifts(v, p.special):
            coeffs[y] = coeffs.get(y, ZERO) + QPoly.monomial(i)
    k0 = W.index(anchor)
    apply = apply_col_combination if mode == "col" else apply_row_combination
    for y, c in coeffs.items():
        ky = W.index(y)
        W = apply(W, ky, [(ky, ONE), (k0, -c)], track)
    return p.without_arrows([arrow]), W, mode


def _cycle_through(p: Presentation, v: str) -> list[str] | None:
    """Arrows ``p0, p1, ..., ps`` of the full-zero cycle whose first
    composition ``p0 p1`` sits at ``v``; None if ``v`` is not such a vertex."""
    ins, outs = p.in_arrows(v), p.out_arrows(v)
    if len(ins) != 1 or len(outs) != 1 or ins[0].is_loop:
        return None
    zero = p.zero_pairs()
    sigma = dict(zero)
    p0 = ins[0].name
    if (p0, outs[0].name) not in zero:
        return None
    cycle = [p0]
    cur = sigma.get(p0)
    while cur is not None and cur != p0 and len(cycle) <= len(p.arrows):
        cycle.append(cur)
        cur = sigma.get(cur)
    return cycle if cur == p0 else None


def _cycle_reduction(p: Presentation, W: QMatrix, v: str, track: Tracker | None):
    if v in p.special:
        raise PreconditionError(f"vertex {v} is special")
    cycle = _cycle_through(p, v)
    if cycle is None:
        raise PreconditionError(f"vertex {v} does not carry a full-zero cycle of valency 2")
    # v_1 = v, v_{i+1} = target(p_i); v_{s+1} = v_0 and v_{s+2} = v again
    verts = [v] + [p.arrow(x).target for x in cycle[1:]] + [v]
    s1 = len(cycle)
    for w in verts[1:-1]:
        assert w != v, "cycle revisits the reduction vertex"
    kv = W.index(v)
    row_terms = []
    for i in range(1, s1 + 1):
        for y in vertex_lifts(verts[i - 1], p.special):
            row_terms.append((W.index(y), _neg_q_power(i - 1)))
    W = apply_row_combination(W, kv, row_terms, track)
    col_terms = []
    for i in range(1, s1 + 1):
        for y in vertex_lifts(verts[i], p.special):
            col_terms.append((W.index(y), _neg_q_power(s1 - i)))
    W = apply_col_combination(W, kv, col_terms, track)
    entry = cyclotomic_factor(s1)
    for k in range(W.n):
        if k != kv:
            assert not W[kv, k] and not W[k, kv], (
                f"residue after reducing the cycle at {v}: row {W[kv, k]}, column {W[k, kv]}"
            )
    assert W[kv, kv] == entry, f"diagonal entry {W[kv, kv]} at {v}, expected {entry}"
    return p.restrict([u for u in p.vertices if u != v]), W, entry, tuple(cycle)


def _split_special(p: Presentation, W: QMatrix, v: str, track: Tracker | None):
    """Split off a special source (column operations) or sink (row operations)."""
    ins, outs = p.in_arrows(v), p.out_arrows(v)
    lifts = [W.index(y) for y in vertex_lifts(v, p.special)]
    active = [W.index(y) for u in p.vertices if u != v for y in vertex_lifts(u, p.special)]
    if not ins:
        for k in lifts:
            assert all(not W[i, k] for i in range(W.n) if i != k) and W[k, k].is_one()
        for j in active:
            terms = [(j, ONE)] + [(k, -W[k, j]) for k in lifts if W[k, j]]
            if len(terms) > 1:
                W = apply_col_combination(W, j, terms, track)
    elif not outs:
        for k in lifts:
            assert all(not W[k, j] for j in range(W.n) if j != k) and W[k, k].is_one()
        for i in active:
            terms = [(i, ONE)] + [(k, -W[i, k]) for k in lifts if W[i, k]]
            if len(terms) > 1:
                W = apply_row_combination(W, i, terms, track)
    else:
        raise PreconditionError(f"special vertex {v} is neither a source nor a sink")
    return p.restrict([u for u in p.vertices if u != v]), W


@dataclass
class Step:
    rule: str
    target: str
    entry: QPoly | None = None
    detail: str = ""

    def __str__(self) -> str:
        extra = f" -> {self.entry}" if self.entry is not None else ""
        return f"{self.rule} {self.target}{extra}{(' ' + self.detail) if self.detail else ''}"


@dataclass
class Reduction:
    """Outcome of a full reduction: the certificate plus the step log."""

    certificate: UniCertificate
    cartan: QMatrix
    steps: list[Step] = field(default_factory=list)
    entries: list[QPoly] = field(default_factory=list)

    def nontrivial_lengths(self) -> list[int]:
        """The k of every diagonal entry ``1 - (-q)^k``, sorted."""
        out = []
        for e in self.entries:
            if not e.is_one():
                k = e.degree
                assert e == cyclotomic_factor(k), f"unexpected diagonal entry {e}"
                out.append(k)
        return sorted(out)

    def sorted_entries(self) -> list[QPoly]:
        return sorted(self.entries, key=lambda e: (e.degree, e.coeffs))


class _Reducer:
    def __init__(self, base: Presentation, C: QMatrix, verify: bool):
        self.p = base
        self.W = C
        self.C = C
        self.track = Tracker.start(C.labels)
        self.final: dict[str, QPoly] = {}
        self.steps: list[Step] = []
        self.verify = verify

    def finalize(self, v: str, entry: QPoly) -> None:
        for y in vertex_lifts(v, self.p.special):
            self.final[y] = entry

    def check(self) -> None:
        W = self.W
        cover, _ = build_cover(self.p, check=False)
        if self.p.special:
            expected = q_cartan_graded(cover)
        else:
            expected = q_cartan_monomial(cover)
        act = {y: k for k, y in enumerate(cover.vertices)}
        for i, x in enumerate(W.labels):
            for j, y in enumerate(W.labels):
                if x in act and y in act:
                    want = expected[act[x], act[y]]
                elif i == j:
                    want = self.final[x]
                else:
                    want = ZERO
                assert W[i, j] == want, (
                    f"working matrix entry ({x},{y}) = {W[i, j]} but the current "
                    f"presentation gives {want}"
                )

    def _isolated(self):
        for v in self.p.vertices:
            if valency(self.p, v) == 0:
                return v, ONE
            arrows = [a for a in self.p.arrows if a.source == v or a.target == v]
            if len(arrows) == 1 and arrows[0].is_loop:
                return v, self.W.entry(v, v)
        return None

    def step(self) -> None:
        p = self.p
        iso = self._isolated()
        if iso is not None:
            v, entry = iso
            assert entry == ONE or entry == cyclotomic_factor(1)
            for y in vertex_lifts(v, p.special):
                ky = self.W.index(y)
                assert all(not self.W[ky, j] and not self.W[j, ky] for j in range(self.W.n) if j != ky)
            self.finalize(v, entry)
            self.p = p.restrict([u for u in p.vertices if u != v])
            self.steps.append(Step("strip" if entry == ONE else "loop", v, entry))
            return
        for v in sorted(p.special):
            if valency(p, v) == 1:
                self.finalize(v, ONE)
                self.p, self.W = _split_special(p, self.W, v, self.track)
                self.steps.append(Step("split", v, ONE))
                return
        for name in sorted(a.name for a in p.arrows):
            if removal_mode(p, name):
                self.p, self.W, mode = _arrow_removal(p, self.W, name, self.track)
                self.steps.append(Step("remove", name, None, mode))
                return
        for v in sorted(p.vertices):
            if v not in p.special and _cycle_through(p, v) is not None:
                self.p, self.W, entry, cyc = _cycle_reduction(p, self.W, v, self.track)
                self.final[v] = entry
                self.steps.append(Step("cycle", v, entry, " ".join(cyc)))
                return
        raise StuckError(f"no reduction rule applies to {p.vertices} with arrows "
                         f"{[a.name for a in p.arrows]}")

    def run(self) -> Reduction:
        if self.verify:
            self.check()
        while self.p.vertices:
            self.step()
            if self.verify:
                self.check()
        D = self.W
        assert D.is_diagonal()
        cert = UniCertificate(self.track.P, self.track.Q, D)
        return Reduction(cert, self.C, self.steps, D.diagonal())


def _require_gentle(p: Presentation) -> None:
    bad = validate_gentle(p.with_special(()))
    if bad:
        raise PreconditionError(f"presentation is not gentle: {bad[0]}")


def reduce_gentle(p: Presentation, verify: bool = True) -> Reduction:
    _require_gentle(p)
    base = p.with_special(())
    return _Reducer(base, q_cartan_monomial(base), verify).run()


def q_normal_form(p: Presentation) -> UniCertificate:
    """Certificate ``P C Q = D`` with D diagonal for a gentle presentation
    (any special set on ``p`` is ignored)."""
    red = reduce_gentle(p)
    chk = verify_certificate(red.cartan, red.certificate)
    assert chk.ok, chk.failures
    return red.certificate


def reduce_cover(base: Presentation, cover: Presentation | None = None, verify: bool = True) -> Reduction:
    _require_gentle(base)
    built, _ = build_cover(base)
    if cover is not None and cover != built:
        raise PreconditionError("cover does not match the cover built from the base")
    C = q_cartan_graded(built) if base.special else q_cartan(built)
    return _Reducer(base, C, verify).run()


def q_normal_form_cover(base: Presentation, cover: Presentation | None = None, cover_map=None) -> UniCertificate:
    """Certificate for the q-Cartan matrix of the skewed-gentle cover of
    ``base`` (with its special set)."""
    red = reduce_cover(base, cover)
    chk = verify_certificate(red.cartan, red.certificate)
    assert chk.ok, chk.failures
    return red.certificate


def arrow_removal_step(p: Presentation, C: QMatrix, arrow: str, track: Tracker | None = None):
    """Remove one arrow by the column (or dual row) transformation.

    ``C`` must be the q-Cartan matrix of ``p`` (its labels may include extra,
    already split-off vertices).  Returns the presentation without the arrow
    and the transformed matrix.
    """
    if p.special:
        raise PreconditionError("use the cover reduction for presentations with special vertices")
    q, W, _ = _arrow_removal(p, C, arrow, track)
    return q, W


def cycle_reduction_step(p: Presentation, C: QMatrix, v: str, track: Tracker | None = None):
    """Split off vertex ``v`` of a full-zero cycle.

    Returns the presentation with ``v`` and its two arrows removed, the
    transformed matrix (same size as ``C``; row and column of ``v`` are zero
    apart from the diagonal), and the emitted diagonal entry.
    """
    if p.special:
        raise PreconditionError("use the cover reduction for presentations with special vertices")
    q, W, entry, _ = _cycle_reduction(p, C, v, track)
    return q, W, entry


@dataclass
class CertificateCheck:
    ok: bool
    failures: list[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(C: QMatrix, cert: UniCertificate) -> CertificateCheck:
    failures = []
    if not (C.n == cert.P.n == cert.Q.n == cert.D.n):
        return CertificateCheck(False, ["dimension mismatch"])
    dp, dq = mat_det(cert.P), mat_det(cert.Q)
    if not dp.is_one():
        failures.append(f"det P = {dp}, not 1")
    if not dq.is_one():
        failures.append(f"det Q = {dq}, not 1")
    prod = cert.P @ C.relabel(cert.P.labels) @ cert.Q
    for i in range(C.n):
        for j in range(C.n):
            if prod[i, j] != cert.D[i, j]:
                failures.append(f"(PCQ)[{i},{j}] = {prod[i, j]} but D[{i},{j}] = {cert.D[i, j]}")
    if not cert.D.is_diagonal():
        failures.append("D is not diagonal")
    return CertificateCheck(not failures, failures)


def diagonal_multiset(D: QMatrix) -> Counter:
    return Counter(e.coeffs for e in D.diagonal())
