"""Integer polynomials in q, square matrices over them, and tracked unimodular
row/column operations.

Everything here is exact: Python integers throughout, no floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


class UnimodularityError(ValueError):
    """A requested row/column combination is not a determinant-1 operation."""


class QPoly:
    """Dense polynomial in ``q`` with integer coefficients.

    ``coeffs[n]`` is the coefficient of ``q**n``.  Trailing zeros are stripped,
    so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(int(c) for c in cs)

    @classmethod
    def const(cls, c: int) -> QPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> QPoly:
        return cls([0] * degree + [coeff])

    @classmethod
    def coerce(cls, x) -> QPoly:
        if isinstance(x, QPoly):
            return x
        if isinstance(x, int):
            return cls((x,))
        return cls(x)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPoly((other,))
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> QPoly:
        other = QPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> QPoly:
        return self + (-QPoly.coerce(other))

    def __rsub__(self, other) -> QPoly:
        return QPoly.coerce(other) - self

    def __mul__(self, other) -> QPoly:
        other = QPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QPoly:
        if k < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x: int) -> int:
        return poly_eval(self, x)

    def shift(self, k: int) -> QPoly:
        """Multiply by ``q**k``."""
        if not self.coeffs:
            return self
        return QPoly([0] * k + list(self.coeffs))

    def divexact(self, divisor: QPoly) -> QPoly:
        """Quotient of an exact division in Z[q].

        Raises AssertionError when the division leaves a remainder or needs a
        non-integral coefficient; callers only divide when exactness is a
        mathematical certainty, so a failure here is a bug.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = divisor.coeffs
        dl = d[-1]
        qdeg = len(rem) - len(d)
        if qdeg < 0:
            assert not rem, f"inexact division {self} / {divisor}"
            return ZERO
        quot = [0] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            top = rem[k + len(d) - 1]
            if top:
                c, r = divmod(top, dl)
                assert r == 0, f"inexact division {self} / {divisor}"
                quot[k] = c
                for i, di in enumerate(d):
                    rem[k + i] -= c * di
        assert not any(rem), f"inexact division {self} / {divisor}"
        return QPoly(quot)

    def __repr__(self) -> str:
        return f"QPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        return render_poly(self)


ZERO = QPoly()
ONE = QPoly((1,))
Q = QPoly((0, 1))


def render_poly(p: QPoly) -> str:
    """Human form, lowest degree first: ``1 + q^2``, ``-q + 2q^3``, ``0``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for n, c in enumerate(p.coeffs):
        if not c:
            continue
        mag = abs(c)
        if n == 0:
            body = str(mag)
        else:
            mono = "q" if n == 1 else f"q^{n}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def poly_add(a: QPoly, b: QPoly) -> QPoly:
    return a + b


def poly_mul(a: QPoly, b: QPoly) -> QPoly:
    return a * b


def poly_eval(a: QPoly, x: int) -> int:
    acc = 0
    for c in reversed(a.coeffs):
        acc = acc * x + c
    return acc


def cyclotomic_factor(k: int) -> QPoly:
    """The polynomial ``1 - (-q)**k``."""
    return ONE - QPoly.monomial(k, (-1) ** k)


class QMatrix:
    """Square matrix over Z[q] whose rows and columns are both indexed by
    ``labels`` (vertex names)."""

    __slots__ = ("labels", "rows")

    def __init__(self, rows: Sequence[Sequence], labels: Sequence[str] | None = None):
        n = len(rows)
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError("label count does not match matrix size")
        if len(set(labels)) != n:
            raise ValueError("labels must be pairwise distinct")
        conv = []
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            conv.append(tuple(QPoly.coerce(x) for x in r))
        self.rows: tuple[tuple[QPoly, ...], ...] = tuple(conv)
        self.labels = labels

    @classmethod
    def identity(cls, labels: Sequence[str]) -> QMatrix:
        n = len(labels)
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], labels)

    @property
    def n(self) -> int:
        return len(self.rows)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __getitem__(self, ij: tuple[int, int]) -> QPoly:
        i, j = ij
        return self.rows[i][j]

    def entry(self, src: str, tgt: str) -> QPoly:
        return self.rows[self.index(src)][self.index(tgt)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.rows == other.rows and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((self.rows, self.labels))

    def same_entries(self, other: QMatrix) -> bool:
        """Entrywise equality ignoring labels."""
        return self.rows == other.rows

    def __matmul__(self, other: QMatrix) -> QMatrix:
        n = self.n
        if other.n != n:
            raise ValueError("size mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = ZERO
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return QMatrix(out, self.labels)

    def transpose(self) -> QMatrix:
        return QMatrix([list(c) for c in zip(*self.rows)], self.labels)

    def evaluate(self, x: int) -> list[list[int]]:
        return [[poly_eval(p, x) for p in r] for r in self.rows]

    def diagonal(self) -> list[QPoly]:
        return [self.rows[i][i] for i in range(self.n)]

    def is_diagonal(self) -> bool:
        return all(not self.rows[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    def relabel(self, labels: Sequence[str]) -> QMatrix:
        return QMatrix(self.rows, labels)

    def submatrix(self, labels: Sequence[str]) -> QMatrix:
        idx = [self.index(l) for l in labels]
        return QMatrix([[self.rows[i][j] for j in idx] for i in idx], labels)

    def to_lists(self) -> list[list[list[int]]]:
        return [[list(p.coeffs) for p in r] for r in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(p) for p in r) for r in self.rows)
        return f"QMatrix([{body}], labels={list(self.labels)})"


@dataclass(frozen=True)
class UniCertificate:
    """Witness that ``P @ C @ Q == D`` with ``det P == det Q == 1``."""

    P: QMatrix
    Q: QMatrix
    D: QMatrix


@dataclass
class Tracker:
    """Accumulates the left and right transforms of a sequence of unimodular
    operations, so that ``P @ C_original @ Q`` equals the working matrix."""

    P: QMatrix
    Q: QMatrix
    n_ops: int = field(default=0)

    @classmethod
    def start(cls, labels: Sequence[str]) -> Tracker:
        return cls(QMatrix.identity(labels), QMatrix.identity(labels))


def _merge_terms(terms, n: int) -> dict[int, QPoly]:
    coeffs: dict[int, QPoly] = {}
    for idx, c in terms:
        if not 0 <= idx < n:
            raise IndexError(f"index {idx} out of range")
        coeffs[idx] = coeffs.get(idx, ZERO) + QPoly.coerce(c)
    return {i: c for i, c in coeffs.items() if c}


def _combine_rows(rows, target: int, coeffs: dict[int, QPoly]):
    n = len(rows)
    new_row = []
    for j in range(n):
        acc = ZERO
        for i, c in coeffs.items():
            x = rows[i][j]
            if x:
                acc = acc + c * x
        new_row.append(acc)
    out = [list(r) for r in rows]
    out[target] = new_row
    return out


def _check_unimodular(target: int, coeffs: dict[int, QPoly]) -> None:
    # The elementary matrix differs from the identity in one row (column) only,
    # so its determinant is the coefficient on the target itself.
    c = coeffs.get(target, ZERO)
    if not c.is_one():
        raise UnimodularityError(
            f"coefficient on the target must be 1 for a determinant-1 operation, got {c}"
        )


def apply_row_combination(
    m: QMatrix,
    target: int,
    terms: Iterable[tuple[int, QPoly | int]],
    track: Tracker | None = None,
) -> QMatrix:
    """Replace row ``target`` by ``sum(c * row_i for i, c in terms)``.

    Repeated indices in ``terms`` have their coefficients added.  The merged
    coefficient on ``target`` must be exactly 1.
    """
    coeffs = _merge_terms(terms, m.n)
    _check_unimodular(target, coeffs)
    out = QMatrix(_combine_rows(m.rows, target, coeffs), m.labels)
    if track is not None:
        track.P = QMatrix(_combine_rows(track.P.rows, target, coeffs), track.P.labels)
        track.n_ops += 1
    return out


def apply_col_combination(
    m: QMatrix,
    target: int,
    terms: Iterable[tuple[int, QPoly | int]],
    track: Tracker | None = None,
) -> QMatrix:
    """Column analogue of :func:`apply_row_combination`; the transform is
    accumulated into ``track.Q`` by right multiplication."""
    coeffs = _merge_terms(terms, m.n)
    _check_unimodular(target, coeffs)
    cols = list(zip(*m.rows))
    out = QMatrix([list(c) for c in zip(*_combine_rows(cols, target, coeffs))], m.labels)
    if track is not None:
        qcols = list(zip(*track.Q.rows))
        new_q = [list(c) for c in zip(*_combine_rows(qcols, target, coeffs))]
        track.Q = QMatrix(new_q, track.Q.labels)
        track.n_ops += 1
    return out


def mat_det(m: QMatrix) -> QPoly:
    """Determinant by fraction-free (Bareiss) elimination over Z[q]."""
    n = m.n
    if n == 0:
        return ONE
    a = [list(r) for r in m.rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]).divexact(prev)
            a[i][k] = ZERO
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def det_cofactor(m: QMatrix | Sequence[Sequence]) -> QPoly:
    """Laplace expansion along the first row; exponential, meant for n <= 5."""
    rows = [list(map(QPoly.coerce, r)) for r in (m.rows if isinstance(m, QMatrix) else m)]

    def rec(mat):
        n = len(mat)
        if n == 0:
            return ONE
        if n == 1:
            return mat[0][0]
        total = ZERO
        for j, x in enumerate(mat[0]):
            if not x:
                continue
            minor = [r[:j] + r[j + 1:] for r in mat[1:]]
            term = x * rec(minor)
            total = total + (term if j % 2 == 0 else -term)
        return total

    return rec(rows)


def integer_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_snf(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors of a square integer matrix.

    Returned nonnegative and divisibility ordered (d1 | d2 | ...), zeros last.
    """
    a = [list(map(int, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                f = a[i][t] // p
                if f:
                    for j in range(t, cols):
                        a[i][j] -= f * a[t][j]
                if a[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                f = a[t][j] // p
                if f:
                    for i in range(t, rows):
                        a[i][j] -= f * a[i][t]
                if a[t][j]:
                    clean = False
            if clean:
                break
        if best is None:
            break
        diag.append(abs(a[t][t]))
    diag += [0] * (min(rows, cols) - len(diag))
    # gcd/lcm sweep turns any diagonal form into the divisibility chain
    nz = [d for d in diag if d]
    for i in range(len(nz)):
        for j in range(i + 1, len(nz)):
            g = gcd(nz[i], nz[j])
            nz[i], nz[j] = g, nz[i] * nz[j] // g
    return tuple(nz + [0] * (len(diag) - len(nz)))
