"""Line-oriented text format for Lie algebras with structure operators.

Example::

    # Kodaira surface algebra
    name: kodaira
    basis: x y z t
    flags: abelian_structure_expected
    [x, y] = z
    operator I:
      0 -1  0  0
      1  0  0  0
      0  0  0 -1
      0  0  1  0

Column ``j`` of an operator matrix is the image of the ``j``-th basis
vector.  ``K`` is derived as ``IJ`` when ``I`` and ``J`` are given without it.
The grammar in EBNF is in the README.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .algebra import LieAlgebra, validate
from .errors import InputError, ParseError
from .structures import HypercomplexStructure, LinearOperator, quaternion_relation_defects

FLAGS = ("abelian_structure_expected", "hypercomplex")
IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_IDENT_RE = re.compile(IDENT + r"\Z")
_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?\Z")
_BRACKET_RE = re.compile(r"\[\s*(" + IDENT + r")\s*,\s*(" + IDENT + r")\s*\]\s*=(.*)\Z")
_OPERATOR_RE = re.compile(r"operator\s+(" + IDENT + r")\s*:\s*\Z")
_TERM_RE = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(" + IDENT + r")?\s*")


@dataclass
class AlgebraFile:
    name: str
    basis: tuple[str, ...]
    brackets: dict[tuple[int, int], dict[int, Fraction]] = field(default_factory=dict)
    operators: dict[str, tuple[tuple[Fraction, ...], ...]] = field(default_factory=dict)
    flags: frozenset[str] = frozenset()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def algebra(self) -> LieAlgebra:
        entries = [(i, j, k, c) for (i, j), img in self.brackets.items() for k, c in img.items()]
        return LieAlgebra.build(self.basis, entries, self.name)

    def operator(self, name: str) -> LinearOperator | None:
        if name in self.operators:
            return LinearOperator(self.operators[name], name)
        if name == "K" and "I" in self.operators and "J" in self.operators:
            return LinearOperator(la.matmul(self.operators["I"], self.operators["J"]), "K")
        return None

    def structure(self) -> HypercomplexStructure | None:
        I, J, K = (self.operator(nm) for nm in "IJK")
        if I is None or J is None:
            return None
        return HypercomplexStructure(I, J, K)


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def parse_linear_expr(text: str, names, offset: int = 0) -> tuple[dict[int, Fraction], int | None]:
    """Parse ``1/2 y - 3 t + z`` (or ``0``) into ``{index: coeff}``.

    Returns ``(coeffs, error_column)`` where ``error_column`` is the 0-based
    position (shifted by ``offset``) of the first bad token, else ``None``.
    """
    lookup = {nm: i for i, nm in enumerate(names)}
    out: dict[int, Fraction] = {}
    if text.strip() == "0":
        return out, None
    pos, first = 0, True
    while True:
        m = _TERM_RE.match(text, pos)
        sign, num, ident = m.groups()
        if ident is not None and ident not in lookup:
            return out, offset + m.start(3)
        if ident is None or (sign is None and not first):
            return out, offset + len(text) - len(text[pos:].lstrip())
        k = lookup[ident]
        c = (Fraction(num) if num else Fraction(1)) * (-1 if sign == "-" else 1)
        out[k] = out.get(k, Fraction(0)) + c
        if not out[k]:
            del out[k]
        pos, first = m.end(), False
        if pos == len(text):
            return out, None


def parse(source: str | Path, *, origin: str | None = None) -> AlgebraFile:
    """Parse the text itself, or the file when given a :class:`~pathlib.Path`."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
        origin = origin or str(source)
    else:
        text = source
    return parse_text(text, origin)


def parse_text(text: str, origin: str | None = None) -> AlgebraFile:
    def fail(msg, line, col=None):
        raise ParseError(msg, line, col, origin)

    name = ""
    basis: tuple[str, ...] | None = None
    basis_line = None
    flags: set[str] = set()
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    bracket_lines: dict[tuple[int, int], int] = {}
    operators: dict[str, list] = {}
    operator_lines: dict[str, int] = {}
    pending: str | None = None  # operator whose rows are being read

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if not body:
            continue
        if pending is not None and len(operators[pending]) < len(basis):
            row = body.split()
            if len(row) != len(basis):
                fail(f"operator {pending} row has {len(row)} entries, expected {len(basis)}",
                     lineno, indent + 1)
            vals = []
            col = indent
            for tok in row:
                col = line.index(tok, col)
                try:
                    vals.append(parse_rational(tok))
                except ValueError:
                    fail(f"bad rational {tok!r}", lineno, col + 1)
                col += len(tok)
            operators[pending].append(tuple(vals))
            continue
        pending = None
        if body.startswith("name:"):
            name = body[5:].strip()
            if not name or any(ch.isspace() for ch in name):
                fail("name must be a single non-empty word", lineno, indent + 6)
        elif body.startswith("basis:"):
            if basis is not None:
                fail("basis declared twice", lineno, indent + 1)
            names = body[6:].split()
            if not names:
                fail("empty basis", lineno, indent + 7)
            for nm in names:
                if not _IDENT_RE.match(nm):
                    fail(f"bad basis name {nm!r}", lineno, line.index(nm) + 1)
            if len(set(names)) != len(names):
                fail("duplicate basis name", lineno, indent + 7)
            basis, basis_line = tuple(names), lineno
        elif body.startswith("flags:"):
            for fl in body[6:].split():
                if fl not in FLAGS:
                    fail(f"unknown flag {fl!r}", lineno, line.index(fl) + 1)
                flags.add(fl)
        elif body.startswith("["):
            if basis is None:
                fail("bracket before basis declaration", lineno, indent + 1)
            m = _BRACKET_RE.match(body)
            if not m:
                fail("malformed bracket line, expected '[a, b] = expr'", lineno, indent + 1)
            a, b, rhs = m.groups()
            for nm in (a, b):
                if nm not in basis:
                    fail(f"unknown basis element {nm!r}", lineno, line.index(nm) + 1)
            i, j = basis.index(a), basis.index(b)
            if i == j:
                fail(f"[{a}, {a}] is always zero and may not be declared", lineno, indent + 1)
            rhs_offset = indent + m.start(3)
            coeffs, err = parse_linear_expr(rhs, basis, rhs_offset)
            if err is not None:
                fail("malformed linear combination", lineno, err + 1)
            if i > j:
                i, j = j, i
                coeffs = {k: -c for k, c in coeffs.items()}
            if (i, j) in brackets:
                fail(f"bracket [{basis[i]}, {basis[j]}] declared twice "
                     f"(first on line {bracket_lines[(i, j)]})", lineno, indent + 1)
            brackets[(i, j)] = dict(sorted(coeffs.items()))
            bracket_lines[(i, j)] = lineno
        elif body.startswith("operator"):
            if basis is None:
                fail("operator before basis declaration", lineno, indent + 1)
            m = _OPERATOR_RE.match(body)
            if not m:
                fail("malformed operator header, expected 'operator NAME:'", lineno, indent + 1)
            op = m.group(1)
            if op in operators:
                fail(f"operator {op} declared twice", lineno, indent + 1)
            operators[op] = []
            operator_lines[op] = lineno
            pending = op
        else:
            fail(f"unrecognized line {body!r}", lineno, indent + 1)

    if basis is None:
        fail("missing 'basis:' declaration", len(lines) or 1)
    for op, rows in operators.items():
        if len(rows) != len(basis):
            fail(f"operator {op} has {len(rows)} rows, expected {len(basis)}", operator_lines[op])

    af = AlgebraFile(name, basis, {k: brackets[k] for k in sorted(brackets)},
                     {k: tuple(v) for k, v in operators.items()}, frozenset(flags))
    _check_semantics(af, bracket_lines, basis_line, operator_lines, origin)
    return af


def _check_semantics(af: AlgebraFile, bracket_lines, basis_line, operator_lines, origin):
    g = af.algebra()
    rep = validate(g)
    if not rep:
        i, j, k = rep.triple
        lines = [bracket_lines[p] for p in ((i, j), (i, k), (j, k)) if p in bracket_lines]
        line = min(lines) if lines else basis_line
        residual = " ".join(la.format_q(x) for x in rep.residual)
        raise ParseError(f"Jacobi identity fails on ({', '.join(rep.names)}); residual ({residual})",
                         line, 1, origin)
    ops = {nm: af.operator(nm) for nm in af.operators}
    for nm in ("I", "J", "K"):
        op = ops.get(nm)
        if op is not None and not op.is_almost_complex():
            raise ParseError(f"operator {nm} does not square to -Id", operator_lines[nm], 1, origin)
    if "I" in ops and "J" in ops:
        defects = quaternion_relation_defects(ops["I"], ops["J"], af.operator("K"))
        if defects:
            line = operator_lines.get("K", operator_lines["J"])
            raise ParseError("quaternionic relations fail: " + ", ".join(defects), line, 1, origin)
    elif "K" in ops:
        raise ParseError("operator K given without both I and J", operator_lines["K"], 1, origin)
    if "hypercomplex" in af.flags and af.structure() is None:
        raise ParseError("flag 'hypercomplex' needs operators I and J", basis_line, 1, origin)
    if "abelian_structure_expected" in af.flags and "I" not in ops:
        raise ParseError("flag 'abelian_structure_expected' needs operator I", basis_line, 1, origin)


# ---------------------------------------------------------------------------
# serialization


def format_linear(coeffs, names) -> str:
    """Canonical ``1/2 y - 3 t``; ``0`` for the empty combination."""
    parts = []
    for k in sorted(coeffs):
        c = Fraction(coeffs[k])
        if not c:
            continue
        mag = abs(c)
        term = names[k] if mag == 1 else f"{la.format_q(mag)} {names[k]}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) or "0"


def serialize(af: AlgebraFile) -> str:
    out = []
    if af.name:
        out.append(f"name: {af.name}")
    out.append("basis: " + " ".join(af.basis))
    if af.flags:
        out.append("flags: " + " ".join(sorted(af.flags)))
    for (i, j) in sorted(af.brackets):
        img = af.brackets[(i, j)]
        if any(img.values()):
            out.append(f"[{af.basis[i]}, {af.basis[j]}] = {format_linear(img, af.basis)}")
    order = sorted(af.operators, key=lambda nm: ("IJK".index(nm) if nm in "IJK" and len(nm) == 1 else 3, nm))
    for nm in order:
        M = af.operators[nm]
        cells = [[la.format_q(x) for x in row] for row in M]
        width = max(len(c) for row in cells for c in row)
        out.append(f"operator {nm}:")
        out.extend("  " + " ".join(c.rjust(width) for c in row) for row in cells)
    return "\n".join(out) + "\n"


def from_algebra(algebra: LieAlgebra, operators: dict[str, LinearOperator] | None = None,
                 flags=(), name: str | None = None) -> AlgebraFile:
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, k, c in algebra.constants:
        brackets.setdefault((i, j), {})[k] = c
    ops = {nm: op.matrix for nm, op in (operators or {}).items()}
    for nm, M in ops.items():
        if len(M) != algebra.dim:
            raise InputError(f"operator {nm} does not match the algebra dimension")
    return AlgebraFile(algebra.name if name is None else name, algebra.basis_names,
                       brackets, ops, frozenset(flags))
