"""Cartan matrices of endomorphism rings of complexes of projectives via the
alternating sum formula, and comparison of derived invariants.

Differentials are not modelled.  The formula gives ``dim Hom(T_a, T_b)`` in
the homotopy category only when the complexes are summands of a tilting
complex; that is the caller's assertion and is not checked here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .cycleinv import InvariantTuple


@dataclass(frozen=True)
class ComplexSpec:
    """Bounded complex of projectives given by its terms only.

    ``terms`` maps a degree to the vertex indices of the indecomposable
    projective summands in that degree (a multiset, so repeats are allowed).
    """

    name: str
    terms: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for d, summands in self.terms.items():
            if not summands:
                raise ValueError(f"complex {self.name}: empty term in degree {d}")

    def shifted(self, k: int) -> ComplexSpec:
        return ComplexSpec(self.name, {d + k: s for d, s in self.terms.items()})


def stalk(name: str, vertex: int, degree: int = 0) -> ComplexSpec:
    return ComplexSpec(name, {degree: (vertex,)})


def dim_hom_projectives(C1: Sequence[Sequence[int]], a: int, b: int) -> int:
    """``dim Hom(P_a, P_b)``, which is the Cartan entry ``c_{b a}``."""
    n = len(C1)
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError(f"vertex index out of range: {a}, {b}")
    return C1[b][a]


def endo_cartan(C1: Sequence[Sequence[int]], complexes: Sequence[ComplexSpec]) -> list[list[int]]:
    """Entry (a, b) is ``sum (-1)^(r-s) dim Hom(T_a^r, T_b^s)``."""
    out = []
    for ta in complexes:
        row = []
        for tb in complexes:
            total = 0
            for r, xs in ta.terms.items():
                for s, ys in tb.terms.items():
                    sign = -1 if (r - s) % 2 else 1
                    total += sign * sum(dim_hom_projectives(C1, x, y) for x in xs for y in ys)
            row.append(total)
        out.append(row)
    return out


class Verdict(enum.Enum):
    DISTINGUISHED = "DISTINGUISHED"
    NOT_DISTINGUISHED = "NOT_DISTINGUISHED"


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    differing: tuple[str, ...]


_FIELDS = ("simples", "oc", "ec", "snf_q1", "det_q1")


def compare_invariants(a: InvariantTuple, b: InvariantTuple) -> Comparison:
    """Any differing component proves the algebras are not derived
    equivalent; agreement on all of them proves nothing."""
    diff = tuple(f for f in _FIELDS if getattr(a, f) != getattr(b, f))
    return Comparison(Verdict.DISTINGUISHED if diff else Verdict.NOT_DISTINGUISHED, diff)
