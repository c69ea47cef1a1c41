"""Line-oriented text format for presentations and complex specifications.

Presentation files::

    quiver lambda5
    vertices 1 2 3
    arrow alpha 1 -> 2
    zero alpha delta
    mesh delta alpha = beta gamma
    special 2

Complex files (vertex names refer to a presentation)::

    complex T2
    term 0 1 3
    term -1 2

``#`` starts a comment.  Paths are written left to right.
"""
from __future__ import annotations

import re
from typing import Sequence

from .homalg import ComplexSpec
from .quiver import Arrow, MeshRelation, Presentation, ZeroRelation

_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            yield lineno, toks


def parse_presentation(text: str) -> Presentation:
    name = "Q"
    vertices: list[str] = []
    arrows: dict[str, Arrow] = {}
    relations = []
    special: list[str] = []
    seen_name = False
    for ln, toks in _lines(text):
        kw, kcol = toks[0]
        args = toks[1:]

        def err(tok, msg):
            raise ParseError(ln, tok[1] if tok else kcol, msg)

        def vertex(tok):
            if tok[0] not in vertices:
                err(tok, f"unknown vertex {tok[0]!r}")
            return tok[0]

        def path(tks):
            names = []
            for t in tks:
                if t[0] not in arrows:
                    err(t, f"unknown arrow {t[0]!r}")
                names.append(t[0])
            for prev, cur in zip(tks, tks[1:]):
                if arrows[prev[0]].target != arrows[cur[0]].source:
                    err(cur, f"path is not composable at {cur[0]!r}")
            return tuple(names)

        if kw == "quiver":
            if len(args) != 1:
                err(args[1] if len(args) > 1 else None, "expected: quiver <name>")
            if seen_name:
                err(args[0], "duplicate quiver line")
            name, seen_name = args[0][0], True
        elif kw == "vertices":
            if not args:
                err(None, "expected at least one vertex")
            for t in args:
                if t[0] in vertices:
                    err(t, f"duplicate vertex {t[0]!r}")
                if t[0] in ("->", "="):
                    err(t, f"invalid vertex name {t[0]!r}")
                vertices.append(t[0])
        elif kw == "arrow":
            if len(args) != 4 or args[2][0] != "->":
                err(args[0] if args else None, "expected: arrow <name> <source> -> <target>")
            aname = args[0][0]
            if aname in arrows:
                err(args[0], f"duplicate arrow {aname!r}")
            arrows[aname] = Arrow(aname, vertex(args[1]), vertex(args[3]))
        elif kw == "zero":
            if len(args) < 2:
                err(args[0] if args else None, "relation length < 2")
            relations.append(ZeroRelation(path(args)))
        elif kw == "mesh":
            eq = [i for i, t in enumerate(args) if t[0] == "="]
            if len(eq) != 1:
                err(None, "expected: mesh <arrows> = <arrows>")
            left, right = args[: eq[0]], args[eq[0] + 1:]
            if not left or not right:
                err(args[eq[0]], "mesh paths must be nonempty")
            if len(left) != len(right):
                err(args[eq[0]], "mesh paths must have equal length")
            if len(left) < 2:
                err(left[0], "relation length < 2")
            lp, rp = path(left), path(right)
            if lp == rp:
                err(right[0], "mesh paths must be distinct")
            if (arrows[lp[0]].source, arrows[lp[-1]].target) != (
                arrows[rp[0]].source,
                arrows[rp[-1]].target,
            ):
                err(right[0], "mesh paths must share source and target")
            relations.append(MeshRelation(lp, rp))
        elif kw == "special":
            for t in args:
                v = vertex(t)
                if v in special:
                    err(t, f"duplicate special vertex {v!r}")
                special.append(v)
        else:
            err(toks[0], f"unknown keyword {kw!r}")
    if not vertices:
        raise ParseError(1, 1, "no vertices declared")
    return Presentation(vertices, list(arrows.values()), relations, special, name)


def emit_presentation(p: Presentation) -> str:
    lines = [f"quiver {p.name}", "vertices " + " ".join(p.vertices)]
    lines += [f"arrow {a.name} {a.source} -> {a.target}" for a in p.arrows]
    for r in p.relations:
        if isinstance(r, ZeroRelation):
            lines.append("zero " + " ".join(r.path))
        else:
            lines.append("mesh " + " ".join(r.left) + " = " + " ".join(r.right))
    if p.special:
        lines.append("special " + " ".join(p.special))
    return "\n".join(lines) + "\n"


def parse_complexes(text: str, vertices: Sequence[str]) -> list[ComplexSpec]:
    index = {v: i for i, v in enumerate(vertices)}
    out: list[tuple[str, dict[int, list[int]]]] = []
    for ln, toks in _lines(text):
        kw, kcol = toks[0]
        if kw == "complex":
            if len(toks) != 2:
                raise ParseError(ln, kcol, "expected: complex <name>")
            out.append((toks[1][0], {}))
        elif kw == "term":
            if not out:
                raise ParseError(ln, kcol, "term before any complex line")
            if len(toks) < 3:
                raise ParseError(ln, kcol, "expected: term <degree> <vertex>+")
            try:
                deg = int(toks[1][0])
            except ValueError:
                raise ParseError(ln, toks[1][1], f"bad degree {toks[1][0]!r}") from None
            for tok, col in toks[2:]:
                if tok not in index:
                    raise ParseError(ln, col, f"unknown vertex {tok!r}")
                out[-1][1].setdefault(deg, []).append(index[tok])
        else:
            raise ParseError(ln, kcol, f"unknown keyword {kw!r}")
    return [ComplexSpec(n, {d: tuple(v) for d, v in sorted(t.items())}) for n, t in out]
