"""Command-line interface: ``hsolve <command> <file|catalog-name|all> [options]``.

Exit codes: 0 ok, 1 input or validation error, 2 a structural property that
should hold for the input failed, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebra import lower_central_series, validate
from .double import certify_connection, double, literal_bracket_defects, nabla_plus
from .errors import HsolveError, InputError, InternalError, PropertyViolation
from .exterior import CEComplex, Multivector, betti_numbers, duality_sign
from .fileformat import IDENT, AlgebraFile, from_algebra, parse_linear_expr, parse_rational, parse_text, serialize
from .linalg import Subspace
from .positivity import (certify_exceptional, exceptional_directions, height_coefficients, is_transversal_kahler,
                         level_data)
from .report import StructureReport, digest, format_multivector, format_subspace, format_vector
from .structures import (SphereDirection, check_hypercomplex, h_filtration, i_filtration, induced_structure,
                         is_abelian_structure, is_h_solvable, is_integrable, normalized_structure)

COMMANDS = ("validate", "series", "betti", "integrability", "filtration", "hsolvable", "double",
            "exceptional", "certify-connection", "transversal-kahler")
MAX_COMBINATIONS = 10 ** 7


@dataclass(frozen=True)
class Options:
    height: int = 1
    direction: tuple[Fraction, Fraction, Fraction] | None = None
    strict_paper_bracket: bool = False
    form: str | None = None
    subspace: str | None = None
    max_combinations: int = MAX_COMBINATIONS


# ---------------------------------------------------------------------------
# option parsing helpers


def parse_direction(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise InputError(f"direction needs three comma-separated rationals, got {text!r}")
    try:
        d = tuple(parse_rational(p) for p in parts)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if not any(d):
        raise InputError("direction must be nonzero")
    return d


_WEDGE_TERM_RE = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*((?:" + IDENT + r")\*?(?:\s*\^\s*(?:" + IDENT
                            + r")\*?)*)\s*")


def parse_form(text: str, names) -> Multivector:
    """``x*^y* - 1/2 z*^t*`` (stars optional) as a 2-form."""
    n = len(names)
    terms = []
    pos, first = 0, True
    while pos < len(text) or first:
        m = _WEDGE_TERM_RE.match(text, pos)
        sign, num, mono = m.groups()
        if not mono or (sign is None and not first):
            raise InputError(f"malformed form at column {pos + 1}: {text!r}")
        factors = [f.strip().rstrip("*") for f in mono.split("^")]
        if len(factors) != 2:
            raise InputError(f"form term {mono!r} is not of degree 2")
        for f in factors:
            if f not in names:
                raise InputError(f"unknown basis element {f!r} in form")
        c = (Fraction(num) if num else Fraction(1)) * (-1 if sign == "-" else 1)
        terms.append((c, tuple(names.index(f) for f in factors)))
        pos, first = m.end(), False
    return Multivector.from_terms(n, terms, kind="form")


def parse_subspace(text: str, names) -> Subspace:
    n = len(names)
    vecs = []
    for chunk in text.split(","):
        coeffs, err = parse_linear_expr(chunk, names)
        if err is not None:
            raise InputError(f"malformed subspace vector {chunk.strip()!r}")
        vecs.append(tuple(coeffs.get(k, Fraction(0)) for k in range(n)))
    return Subspace.span(vecs, n)


# ---------------------------------------------------------------------------
# commands


def _need_I(af: AlgebraFile):
    I = af.operator("I")
    if I is None:
        raise InputError(f"{af.name or 'input'} declares no operator I")
    return I


def _need_H(af: AlgebraFile):
    H = af.structure()
    if H is None:
        raise InputError(f"{af.name or 'input'} has no hypercomplex structure (operators I and J)")
    return H


def _witness_names(names, idx):
    return None if idx is None else [names[i] for i in idx]


def cmd_validate(af, g, opts, rep):
    jac = validate(g)
    cx = CEComplex(g)
    d2 = cx.d_squared_zero()
    if bool(jac) != d2:
        raise InternalError("Jacobi check and d^2 = 0 disagree")
    rep.result.update(dimension=g.dim, jacobi=bool(jac), d_squared_zero=d2,
                      operators=sorted(set(af.operators) | ({"K"} if af.structure() else set())),
                      hypercomplex_structure=af.structure() is not None)


def cmd_series(af, g, opts, rep):
    lcs = lower_central_series(g)
    nil = lcs[-1].is_zero()
    rep.result.update(lower_central_series_dims=[t.dim for t in lcs], nilpotent=nil,
                      nilpotency_step=len(lcs) - 1 if nil else None,
                      terms=[format_subspace(t, g.basis_names) for t in lcs[1:]])


def cmd_betti(af, g, opts, rep):
    cx = CEComplex(g)
    b = betti_numbers(cx)
    rep.result.update(betti_numbers=b, euler_characteristic=sum((-1) ** k * x for k, x in enumerate(b)),
                      duality_sign=duality_sign(cx))


def cmd_integrability(af, g, opts, rep):
    names = g.basis_names
    verdicts = {}
    for nm in ("I", "J", "K"):
        op = af.operator(nm)
        if op is None:
            continue
        res = is_integrable(g, op)
        verdicts[nm] = {
            "integrable": res.integrable,
            "witness": _witness_names(names, res.witness),
            "nijenhuis": None if res.value is None else format_vector(res.value, names),
            "abelian": is_abelian_structure(g, op) if res.integrable else None,
        }
    if not verdicts:
        raise InputError(f"{af.name or 'input'} declares no structure operators")
    rep.result["structures"] = verdicts
    if opts.direction is not None:
        H = _need_H(af)
        d = SphereDirection(*opts.direction)
        L = normalized_structure(H, d)
        entry = {"direction": [d.a, d.b, d.c], "normalizable": L is not None}
        if L is not None:
            res = is_integrable(g, L)
            entry.update(integrable=res.integrable, witness=_witness_names(names, res.witness))
        rep.result["induced"] = entry
    if "abelian_structure_expected" in af.flags and verdicts.get("I", {}).get("abelian") is not True:
        rep.status = "property_violation"
        rep.messages.append("I was flagged abelian but is not an abelian complex structure")
    if "hypercomplex" in af.flags and not all(v["integrable"] for v in verdicts.values()):
        rep.status = "property_violation"
        rep.messages.append("flagged hypercomplex but not all of I, J, K are integrable")


def cmd_filtration(af, g, opts, rep):
    names = g.basis_names
    I = af.operator("I")
    failures = []
    if I is not None:
        fi = i_filtration(g, I)
        rep.result["i_filtration"] = {"dims": fi.dims, "terms": [format_subspace(t, names) for t in fi.terms],
                                      "failures": fi.failures}
        failures += fi.failures
    H = af.structure()
    if H is not None:
        fh = h_filtration(g, H)
        rep.result["h_filtration"] = {"dims": fh.dims, "terms": [format_subspace(t, names) for t in fh.terms],
                                      "failures": fh.failures, "reached_zero": fh.reached_zero}
        failures += fh.failures
    if I is None and H is None:
        raise InputError(f"{af.name or 'input'} declares no structure operators")
    if failures:
        rep.status = "property_violation"
        rep.messages.extend(failures)


def cmd_hsolvable(af, g, opts, rep):
    H = _need_H(af)
    check_hypercomplex(g, H)
    verdict = is_h_solvable(g, H)
    rep.result.update(h_solvable=str(verdict), solvable=verdict.solvable, steps=verdict.steps,
                      dims=h_filtration(g, H).dims)
    if "abelian_structure_expected" in af.flags and not verdict:
        rep.status = "property_violation"
        rep.messages.append("an abelian hypercomplex structure must be H-solvable")


def _certificate_data(cert, names):
    return {
        "torsion_free": cert.torsion_free, "flat": cert.flat, "complex_linear": cert.complex_linear,
        "torsion_witness": list(cert.torsion_witness) if cert.torsion_witness else None,
        "curvature_witness": list(cert.curvature_witness) if cert.curvature_witness else None,
        "linearity_witness": list(cert.linearity_witness) if cert.linearity_witness else None,
        "residuals": {k: format_vector(v, names) for k, v in cert.residuals.items()},
    }


def cmd_double(af, g, opts, rep):
    I = _need_I(af)
    conn = nabla_plus(g, I)
    cert = certify_connection(g, I, conn)
    rep.result["connection"] = _certificate_data(cert, g.basis_names)
    if not cert.ok:
        expected = "abelian_structure_expected" in af.flags
        rep.status = "property_violation" if expected else "input_error"
        rep.messages.append("nabla^+ is not torsion-free, flat and complex-linear; the double needs such a connection")
        return
    g2, H2 = double(g, I, conn, name=f"{af.name}-double" if af.name else "")
    out = from_algebra(g2, {"I": H2.I, "J": H2.J, "K": H2.K}, flags=("hypercomplex",))
    verdict = is_h_solvable(g2, H2)
    D = Subspace.span([g2.basis_bracket(i, j) for i in range(g2.dim) for j in range(i + 1, g2.dim)], g2.dim)
    rep.result.update(algebra=serialize(out), dimension=g2.dim, h_solvable=str(verdict),
                      abelian_structure_I=is_abelian_structure(g2, H2.I),
                      derived_algebra=format_subspace(D, g2.basis_names))
    if opts.strict_paper_bracket:
        lit = literal_bracket_defects(g, I, conn)
        rep.result["paper_bracket"] = {
            "bilinear": lit.bilinear, "antisymmetric": lit.antisymmetric, "jacobi": lit.jacobi,
            "bilinearity_witness": lit.bilinearity_witness and list(lit.bilinearity_witness),
            "antisymmetry_witness": lit.antisymmetry_witness and list(lit.antisymmetry_witness),
            "jacobi_witness": lit.jacobi_witness and list(lit.jacobi_witness),
        }
    if not verdict:
        rep.status = "property_violation"
        rep.messages.append("the quaternionic double is not H-solvable")


def cmd_exceptional(af, g, opts, rep):
    H = _need_H(af)
    check_hypercomplex(g, H)
    if opts.height < 0:
        raise InputError("--height must be non-negative")
    n_coeffs = len(height_coefficients(opts.height))
    for lv in level_data(g, H):
        size = n_coeffs ** len(lv.images)
        if opts.height and size > opts.max_combinations:
            raise InputError(f"level {lv.level}: {n_coeffs}^{len(lv.images)} coefficient combinations "
                             f"exceed the search limit of {opts.max_combinations}")
    entries = exceptional_directions(g, H, opts.height)
    failures = certify_exceptional(g, H, entries)
    rep.result.update(height=opts.height, count=len(entries), certified=not failures, entries=[
        {"level": e.level, "cycle": format_multivector(e.cycle, g.basis_names),
         "direction": list(e.direction), "positivity": e.positivity} for e in entries])
    if failures:
        rep.status = "property_violation"
        rep.messages.extend(failures)


def cmd_certify_connection(af, g, opts, rep):
    I = _need_I(af)
    cert = certify_connection(g, I, nabla_plus(g, I))
    rep.result["nabla_plus"] = _certificate_data(cert, g.basis_names)
    if "abelian_structure_expected" in af.flags and not cert.ok:
        rep.status = "property_violation"
        rep.messages.append("nabla^+ of an abelian complex structure must be torsion-free, flat and complex-linear")


def cmd_transversal_kahler(af, g, opts, rep):
    if opts.form is None or opts.subspace is None:
        raise InputError("transversal-kahler needs --form and --subspace")
    omega = parse_form(opts.form, g.basis_names)
    f = parse_subspace(opts.subspace, g.basis_names)
    if opts.direction is None:
        L, s = _need_I(af).matrix, Fraction(1)
    else:
        L, s = induced_structure(_need_H(af), SphereDirection(*opts.direction))
    res = is_transversal_kahler(CEComplex(g), omega, f, L, s)
    rep.result.update(transversal_kahler=res.ok, closed=res.closed, type_11=res.type_11,
                      kernel_matches=res.kernel_matches, transversally_positive=res.transversally_positive,
                      diagnostics=res.diagnostics)


HANDLERS = {
    "validate": cmd_validate, "series": cmd_series, "betti": cmd_betti,
    "integrability": cmd_integrability, "filtration": cmd_filtration, "hsolvable": cmd_hsolvable,
    "double": cmd_double, "exceptional": cmd_exceptional, "certify-connection": cmd_certify_connection,
    "transversal-kahler": cmd_transversal_kahler,
}


def resolve(target: str) -> tuple[str, str]:
    """``(text, origin)`` for a file path or catalog name."""
    p = Path(target)
    if p.is_file():
        return p.read_text(encoding="utf-8"), str(p)
    if target in catalog.names():
        return catalog.text(target), f"catalog:{target}"
    raise InputError(f"{target!r} is neither a readable file nor a catalog entry "
                     f"(known: {', '.join(catalog.names())})")


def run(command: str, target: str, opts: Options = Options()) -> StructureReport:
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    text, origin = resolve(target)
    rep = StructureReport(command, target, digest(text))
    try:
        af = parse_text(text, origin)
        rep.name = af.name or target
        HANDLERS[command](af, af.algebra(), opts, rep)
    except PropertyViolation as exc:
        rep.status = "property_violation"
        rep.messages.append(str(exc))
    except InternalError as exc:
        rep.status = "internal_error"
        rep.messages.append(str(exc))
    except HsolveError as exc:
        rep.status = "input_error"
        rep.messages.append(str(exc))
    return rep


def _run_rendered(args) -> tuple[int, str, dict]:
    command, target, opts, fmt = args
    rep = run(command, target, opts)
    return rep.exit_code, rep.render(fmt), rep.to_data()


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # bad flags are input errors (exit 1), not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hsolve", description="Exact computations on nilpotent Lie algebras with "
                "complex and hypercomplex structures.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", help="AlgebraFile path, catalog name, or 'all' for every catalog entry")
    p.add_argument("--height", type=int, default=1, help="coefficient height bound for exceptional")
    p.add_argument("--direction", help="a,b,c for the structure aI + bJ + cK")
    p.add_argument("--strict-paper-bracket", action="store_true",
                   help="also evaluate the double bracket with [a,b] in the first slot")
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--form", help="2-form for transversal-kahler, e.g. 'x*^y* + z*^t*'")
    p.add_argument("--subspace", help="comma-separated vectors spanning f for transversal-kahler")
    p.add_argument("--max-combinations", type=int, default=MAX_COMBINATIONS,
                   help="refuse exceptional searches larger than this")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for 'all'")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        direction = parse_direction(args.direction) if args.direction else None
        opts = Options(args.height, direction, args.strict_paper_bracket, args.form, args.subspace,
                       args.max_combinations)
        if args.target == "all":
            jobs = [(args.command, nm, opts, args.format) for nm in catalog.names()]
            if args.jobs > 1:
                with ProcessPoolExecutor(args.jobs) as pool:
                    results = list(pool.map(_run_rendered, jobs))
            else:
                results = [_run_rendered(j) for j in jobs]
            if args.format == "structured":
                sys.stdout.write(json.dumps({"reports": [r[2] for r in results]}, sort_keys=True, indent=2) + "\n")
            else:
                sys.stdout.write("".join(r[1] for r in results))
            return max(r[0] for r in results)
        rep = run(args.command, args.target, opts)
    except InputError as exc:
        print(f"hsolve: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything unexpected is an internal error
        print(f"hsolve: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(rep.render(args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
