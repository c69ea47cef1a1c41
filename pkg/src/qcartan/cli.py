"""Command line interface.

Exit codes: 0 success, 1 validation failure, 2 parse error, 3 degree cap
exceeded or infinite-dimensional input, 4 internal assertion.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cartan import DegreeCapExceeded, q_cartan, q_cartan_graded, q_cartan_monomial
from .cycleinv import cycle_inventory, derived_invariants, q_determinant_formula
from .dsl import ParseError, emit_presentation, parse_complexes, parse_presentation
from .homalg import compare_invariants, endo_cartan
from .normalform import StuckError, reduce_cover, reduce_gentle, verify_certificate
from .polymat import QMatrix, QPoly, det_cofactor, integer_det, integer_snf, mat_det, poly_eval
from .quiver import (
    PreconditionError,
    PresentationError,
    check_finite_dimensional,
    is_gentle,
    random_gentle,
    validate_gentle,
    validate_special_biserial,
)
from .report import Report, digest, emit_json, emit_text
from .skewedgentle import build_cover, validate_special_set

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4
COFACTOR_LIMIT = 7


class ValidationFailure(Exception):
    """Input is well formed but fails a required structural check."""


class InfiniteDimensional(Exception):
    pass


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _int_matrix(rows, labels) -> QMatrix:
    return QMatrix([[QPoly.const(x) for x in r] for r in rows], labels)


def _load(path: str, inputs: list[bytes]):
    data = Path(path).read_bytes()
    inputs.append(data)
    try:
        return parse_presentation(data.decode())
    except PresentationError as exc:
        raise ParseError(1, 1, str(exc)) from None


def _target(p, use_cover: bool):
    if use_cover and p.special:
        cover, _ = build_cover(p)
        return cover
    return p.with_special(())


def _cartan(p, engine: str = "auto", max_degree: int | None = None) -> QMatrix:
    if engine == "graded":
        return q_cartan_graded(p, max_degree)
    if engine == "monomial" or p.is_monomial():
        fd = check_finite_dimensional(p)
        if not fd:
            raise InfiniteDimensional(f"oriented cycle without zero relations: {' '.join(fd.witness)}")
        return q_cartan_monomial(p)
    return q_cartan(p, max_degree)


def cmd_validate(args, rep, inputs):
    p = _load(args.file, inputs)
    base = p.with_special(())
    sb = validate_special_biserial(base)
    gen = validate_gentle(base)
    fd = check_finite_dimensional(base)
    r = rep.results
    r["vertices"] = len(p.vertices)
    r["arrows"] = len(p.arrows)
    r["special biserial"] = _yes(not sb)
    r["gentle"] = _yes(not gen)
    r["finite-dimensional"] = _yes(bool(fd))
    if not fd:
        r["witness"] = " ".join(fd.witness) or fd.message
    bad = [str(v) for v in gen]
    ok = not gen and bool(fd)
    if p.special and not gen:
        sp = validate_special_set(p)
        r["special set admissible"] = _yes(not sp)
        bad += [str(v) for v in sp]
        ok = ok and not sp
    if bad:
        r["violations"] = bad
    return EXIT_OK if ok else EXIT_INVALID


def cmd_cartan(args, rep, inputs):
    p = _load(args.file, inputs)
    t = _target(p, args.cover)
    engine = args.engine
    if args.cover and p.special and engine == "monomial":
        raise PreconditionError("cover presentations carry mesh relations; use the graded engine")
    C = _cartan(t, engine, args.max_degree)
    rep.results["cartan"] = C
    rep.results["at q=1"] = _int_matrix(C.evaluate(1), C.labels)
    return EXIT_OK


def cmd_det(args, rep, inputs):
    p = _load(args.file, inputs)
    t = _target(p, args.cover)
    C = _cartan(t)
    direct = mat_det(C)
    r = rep.results
    r["direct"] = direct
    if C.n <= COFACTOR_LIMIT:
        cof = det_cofactor(C)
        assert cof == direct, f"Bareiss {direct} and cofactor {cof} disagree"
        r["cofactor"] = cof
    else:
        rep.diagnostics.append(f"cofactor expansion skipped for n = {C.n}")
    base = p.with_special(())
    if is_gentle(base):
        formula = q_determinant_formula(cycle_inventory(base))
        r["formula"] = formula
        r["agree"] = formula == direct
        assert formula == direct, f"determinant {direct} differs from product formula {formula}"
    r["det at q=1"] = poly_eval(direct, 1)
    return EXIT_OK


def _gentle(p):
    base = p.with_special(())
    bad = validate_gentle(base)
    if bad:
        raise ValidationFailure(f"presentation is not gentle: {bad[0]}")
    fd = check_finite_dimensional(base)
    if not fd:
        raise InfiniteDimensional(f"oriented cycle without zero relations: {' '.join(fd.witness)}")
    return base


def cmd_cycles(args, rep, inputs):
    base = _gentle(_load(args.file, inputs))
    rep.results["cycles"] = cycle_inventory(base)
    rep.results["invariants"] = derived_invariants(base)
    return EXIT_OK


def cmd_normal_form(args, rep, inputs):
    p = _load(args.file, inputs)
    _gentle(p)
    red = reduce_cover(p) if p.special else reduce_gentle(p)
    chk = verify_certificate(red.cartan, red.certificate)
    assert chk.ok, "; ".join(chk.failures)
    r = rep.results
    r["diagonal"] = red.entries
    r["sorted"] = red.sorted_entries()
    r["steps"] = [str(s) for s in red.steps]
    if args.emit_certificate:
        r["cartan"] = red.cartan
        r["certificate"] = red.certificate
    r["verified"] = chk.ok
    return EXIT_OK


def cmd_snf(args, rep, inputs):
    p = _load(args.file, inputs)
    t = _target(p, args.cover)
    C1 = _cartan(t).evaluate(1)
    rep.results["at q=1"] = _int_matrix(C1, t.vertices)
    rep.results["snf"] = list(integer_snf(C1))
    rep.results["det"] = integer_det(C1)
    return EXIT_OK


def cmd_cover(args, rep, inputs):
    p = _load(args.file, inputs)
    _gentle(p)
    bad = validate_special_set(p)
    if bad:
        raise ValidationFailure(f"special set is not admissible: {bad[0]}")
    cover, _ = build_cover(p, check=False)
    rep.results["cover"] = emit_presentation(cover)
    return EXIT_OK


def cmd_endo(args, rep, inputs):
    p = _load(args.file, inputs)
    text = Path(args.complexes).read_bytes()
    inputs.append(text)
    cx = parse_complexes(text.decode(), p.vertices)
    if not cx:
        raise ParseError(1, 1, "no complexes declared")
    C1 = _cartan(_target(p, args.cover)).evaluate(1)
    E = endo_cartan(C1, cx)
    rep.results["endo cartan"] = _int_matrix(E, [c.name for c in cx])
    rep.results["det"] = integer_det(E)
    rep.results["snf"] = list(integer_snf(E))
    return EXIT_OK


def cmd_compare(args, rep, inputs):
    a = _gentle(_load(args.a, inputs))
    b = _gentle(_load(args.b, inputs))
    ia, ib = derived_invariants(a), derived_invariants(b)
    cmp = compare_invariants(ia, ib)
    rep.results[a.name] = ia
    rep.results[b.name if b.name != a.name else b.name + " (2)"] = ib
    rep.results["verdict"] = cmp
    return EXIT_OK


def cmd_gen(args, rep, inputs):
    inputs.append(f"{args.vertices} {args.seed}".encode())
    rep.results["presentation"] = emit_presentation(random_gentle(args.vertices, args.seed))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    ap = argparse.ArgumentParser(prog="qcartan", description="q-Cartan matrices of gentle and skewed-gentle algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True, cover=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if file:
            sp.add_argument("file")
        if cover:
            sp.add_argument("--cover", action="store_true", help="work on the skewed-gentle cover")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "check gentleness, finiteness and the special set")
    sp = add("cartan", cmd_cartan, "q-Cartan matrix", cover=True)
    sp.add_argument("--engine", choices=("monomial", "graded", "auto"), default="auto")
    sp.add_argument("--max-degree", type=int, default=None)
    add("det", cmd_det, "determinant, direct and by cycle formula", cover=True)
    add("cycles", cmd_cycles, "cycles with full zero relations")
    sp = add("normal-form", cmd_normal_form, "unimodular diagonal form")
    sp.add_argument("--emit-certificate", action="store_true")
    add("snf", cmd_snf, "Smith normal form at q=1", cover=True)
    add("cover", cmd_cover, "emit the skewed-gentle cover")
    sp = add("endo", cmd_endo, "Cartan matrix of an endomorphism ring", cover=True)
    sp.add_argument("--complexes", required=True)
    sp = add("compare", cmd_compare, "compare derived invariants", file=False)
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("gen", cmd_gen, "random gentle presentation", file=False)
    sp.add_argument("--vertices", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    return ap


_RAW = {"cover": "cover", "gen": "presentation"}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    inputs: list[bytes] = []
    rep = Report(argv, "")
    try:
        code = args.fn(args, rep, inputs)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except (DegreeCapExceeded, InfiniteDimensional) as exc:
        print(f"not finite-dimensional: {exc}", file=err)
        return EXIT_CAP
    except (ValidationFailure, PreconditionError, PresentationError) as exc:
        print(f"validation failed: {exc}", file=err)
        return EXIT_INVALID
    except (AssertionError, StuckError) as exc:
        print(f"internal assertion: {exc}", file=err)
        return EXIT_INTERNAL
    rep.input_digest = digest(inputs)
    if args.format == "json":
        out.write(emit_json(rep))
    elif args.command in _RAW:
        out.write(rep.results[_RAW[args.command]])
    else:
        out.write(emit_text(rep))
    return code


def main() -> None:
    sys.exit(run())
