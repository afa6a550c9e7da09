"""Command line front end: parse algebra files, run solvers, render reports.

Algebra file grammar (line oriented, '#' starts a comment):

    dim <n>
    vars <name1> ... <namen>
    <generator>            # one per line: sum of terms
    term  := [coef]['*'] [var['^'exp] ...] d/d<var>   |   [coef]['*'] euler
    coef  := integer | p/q

Endo files for `lieder verify` list one `<basis element> -> <image>` pair per
line in the same term grammar; unmentioned basis elements map to zero.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .algebra import (
    AlgebraSpec,
    CapExceeded,
    GradedAlgebra,
    MissingConstants,
    MissingEuler,
    NotInAlgebra,
    close_and_grade,
)
from .derspaces import (
    BudgetTooSmall,
    Endo,
    SolutionSpace,
    centroid_violation,
    derivation_violation,
    inner_derivations,
    mderivation_check,
    quasicentroid_violation,
    solve_centroid,
    solve_derivations,
    solve_generalized,
    solve_mder_minus2,
    solve_quasicentroid,
    solve_quasiderivations,
)
from .polyvec import PolyVectorField, euler, make_field
from .structure import TheoremReport, run_all_checks

SPECIES_KEYS = ("der", "c", "qc", "qder", "gender", "mder2")

_THEOREM_LABELS = {
    "GRADING_LEMMA": "grading",
    "CENTRALIZER_ZERO": "centralizer = 0",
    "H1_ZERO": "H1 = 0",
    "CENTROID_FORM": "centroid form",
    "C_EQ_QC": "C = QC",
    "QDER_SPLIT": "QDer split",
    "GENDER_SUM": "GenDer = QDer + QC",
    "MAIN_DECOMP": "GenDer decomposition",
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class UnknownVariable(ParseError):
    pass


class NonsensePower(ParseError):
    pass


@dataclass(frozen=True)
class AnalysisRequest:
    input_path: str
    species_list: tuple[str, ...] = ("der", "c", "qc", "qder", "gender")
    ambient_cap: int | None = None  # defaults to max algebra degree + 3
    degree_cap: int = 12
    tuple_budget: int = 100_000
    output_format: str = "text"
    theorem_checks: bool = True

    def __post_init__(self) -> None:
        if not self.species_list:
            raise ValueError("species_list must not be empty")
        for s in self.species_list:
            if s not in SPECIES_KEYS:
                raise ValueError(f"unknown species {s!r}")


# -- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<ddvar>d/d[A-Za-z_]\w*)"
    r"|(?P<number>\d+)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Token(kind, m.group(), pos + 1))
        pos = m.end()
    return out


class _TermParser:
    def __init__(self, tokens: list[_Token], lineno: int, names: list[str]):
        self.tokens = tokens
        self.lineno = lineno
        self.names = names
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            col = last.col + len(last.text) if last else 1
            raise ParseError("unexpected end of line", self.lineno, col)
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        col = tok.col if tok else 1
        raise ParseError(message, self.lineno, col)

    def parse_field(self, n: int) -> PolyVectorField:
        items = []
        sign = 1
        tok = self.peek()
        if tok and tok.kind == "op" and tok.text in "+-":
            self.take()
            sign = -1 if tok.text == "-" else 1
        items.extend(self.parse_term(n, sign))
        while self.peek() is not None:
            tok = self.take()
            if tok.kind != "op" or tok.text not in "+-":
                self.fail(f"expected '+' or '-', got {tok.text!r}", tok)
            sign = -1 if tok.text == "-" else 1
            items.extend(self.parse_term(n, sign))
        return make_field(n, items)

    def parse_coefficient(self) -> Fraction:
        num = int(self.take().text)
        tok = self.peek()
        if tok and tok.kind == "op" and tok.text == "/":
            self.take()
            dtok = self.take()
            if dtok.kind != "number":
                self.fail("expected a denominator", dtok)
            den = int(dtok.text)
            if den == 0:
                self.fail("zero denominator", dtok)
            return Fraction(num, den)
        return Fraction(num)

    def parse_term(self, n: int, sign: int):
        coeff = Fraction(sign)
        tok = self.peek()
        if tok is None:
            self.fail("empty term")
        if tok.kind == "number":
            coeff *= self.parse_coefficient()
            tok = self.peek()
            if tok and tok.kind == "op" and tok.text == "*":
                self.take()
                tok = self.peek()
        if tok is not None and tok.kind == "name" and tok.text == "euler":
            self.take()
            return [(coeff * t.coeff, t.exponents, t.direction) for t in euler(n).terms]
        exps = [0] * n
        while True:
            tok = self.peek()
            if tok is None:
                self.fail("term is missing its d/d<var> part")
            if tok.kind == "ddvar":
                self.take()
                var = tok.text[3:]
                if var not in self.names:
                    raise UnknownVariable(
                        f"unknown variable {var!r}", self.lineno, tok.col
                    )
                direction = self.names.index(var) + 1
                return [(coeff, tuple(exps), direction)]
            if tok.kind != "name":
                self.fail(f"expected a variable or d/d<var>, got {tok.text!r}", tok)
            self.take()
            if tok.text not in self.names:
                raise UnknownVariable(
                    f"unknown variable {tok.text!r}", self.lineno, tok.col
                )
            idx = self.names.index(tok.text)
            power = 1
            nxt = self.peek()
            if nxt and nxt.kind == "op" and nxt.text == "^":
                self.take()
                ptok = self.take()
                neg = False
                if ptok.kind == "op" and ptok.text == "-":
                    neg = True
                    ptok = self.take()
                if ptok.kind != "number":
                    self.fail("expected an exponent", ptok)
                power = int(ptok.text)
                if neg:
                    raise NonsensePower(
                        f"negative exponent on {tok.text!r}", self.lineno, ptok.col
                    )
            exps[idx] += power


@dataclass(frozen=True)
class ParsedAlgebraFile:
    spec: AlgebraSpec
    var_names: tuple[str, ...]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def parse_source(text: str) -> ParsedAlgebraFile:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty file", 1, 1)
    lineno, header = lines[0]
    m = re.fullmatch(r"\s*dim\s+(\d+)\s*", header)
    if not m:
        raise ParseError("expected 'dim <n>'", lineno, 1)
    n = int(m.group(1))
    if n < 1:
        raise ParseError("dimension must be positive", lineno, 1)
    if len(lines) < 2:
        raise ParseError("expected 'vars <names>' after the dim line", lineno, 1)
    lineno, varline = lines[1]
    parts = varline.split()
    if not parts or parts[0] != "vars":
        raise ParseError("expected 'vars <names>'", lineno, 1)
    names = parts[1:]
    if len(names) != n:
        raise ParseError(f"expected {n} variable names, got {len(names)}", lineno, 1)
    for name in names:
        if not re.fullmatch(r"[A-Za-z_]\w*", name) or name == "euler":
            raise ParseError(f"bad variable name {name!r}", lineno, 1)
    if len(set(names)) != n:
        raise ParseError("variable names must be distinct", lineno, 1)
    generators = []
    for lineno, line in lines[2:]:
        parser = _TermParser(_tokenize(line, lineno), lineno, names)
        generators.append(parser.parse_field(n))
    return ParsedAlgebraFile(AlgebraSpec(n, tuple(generators)), tuple(names))


def parse_algebra_file(text: str) -> AlgebraSpec:
    """Parse algebra file text into an AlgebraSpec (canonical generators)."""
    return parse_source(text).spec


def parse_field_text(text: str, names, lineno: int = 1) -> PolyVectorField:
    """Parse a single field expression in the generator grammar."""
    parser = _TermParser(_tokenize(text, lineno), lineno, list(names))
    return parser.parse_field(len(list(names)))


# -- formatting ---------------------------------------------------------------


def default_names(n: int) -> tuple[str, ...]:
    return ("x", "y", "z")[:n] if n <= 3 else tuple(f"x{i+1}" for i in range(n))


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_field(x: PolyVectorField, names) -> str:
    """Render a field in the generator grammar; re-parsing gives it back."""
    if x.is_zero():
        return "0"
    pieces = []
    for k, t in enumerate(x.terms):
        mag = abs(t.coeff)
        factors = []
        for i, e in enumerate(t.exponents):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        factors.append(f"d/d{names[t.direction - 1]}")
        body = " ".join(factors)
        coef = "" if mag == 1 else format_rational(mag) + " "
        if k == 0:
            pieces.append(("-" if t.coeff < 0 else "") + coef + body)
        else:
            pieces.append(("- " if t.coeff < 0 else "+ ") + coef + body)
    return " ".join(pieces)


def _format_matrix_lines(matrix, indent: str) -> list[str]:
    return [
        indent + "[" + "  ".join(format_rational(v) for v in row) + "]"
        for row in matrix
    ]


# -- analysis -----------------------------------------------------------------

_COMPONENT_NAMES = {1: ("f",), 2: ("f", "g"), 3: ("f", "h", "g")}


def _solve_species(algebra: GradedAlgebra, key: str, tuple_budget: int) -> SolutionSpace:
    if key == "der":
        return solve_derivations(algebra)
    if key == "c":
        return solve_centroid(algebra)
    if key == "qc":
        return solve_quasicentroid(algebra)
    if key == "qder":
        return solve_quasiderivations(algebra)
    if key == "gender":
        return solve_generalized(algebra)
    if key == "mder2":
        return solve_mder_minus2(algebra, 3, tuple_budget)
    raise ValueError(f"unknown species {key!r}")


def run(request: AnalysisRequest) -> tuple[int, str]:
    """Close, solve and check; returns (exit_code, rendered report).

    Exit codes: 0 success, 1 hypothesis or verification failure, 2 input error.
    """
    try:
        text = Path(request.input_path).read_text()
    except OSError as exc:
        return 2, f"error: cannot read {request.input_path}: {exc}"
    try:
        parsed = parse_source(text)
    except ParseError as exc:
        return 2, f"error: {request.input_path}: {exc}"
    spec = replace(parsed.spec, degree_cap=request.degree_cap)
    try:
        algebra = close_and_grade(spec)
    except CapExceeded as exc:
        return 2, f"error: {exc}"
    except (MissingConstants, MissingEuler) as exc:
        return 1, f"hypothesis failure: {exc}"

    spaces: dict[str, SolutionSpace] = {}
    wanted = list(request.species_list)
    if request.theorem_checks:
        for key in ("der", "c", "qc", "qder", "gender"):
            if key not in wanted:
                wanted.append(key)
    for key in wanted:
        spaces[key] = _solve_species(algebra, key, request.tuple_budget)
    spaces["ad"] = inner_derivations(algebra)

    reports: list[TheoremReport] = []
    if request.theorem_checks:
        reports = run_all_checks(
            algebra, spaces=spaces, ambient_cap=request.ambient_cap
        )

    failures = [r for r in reports if r.conclusion_holds is False]
    code = 1 if failures else 0
    shown = {k: spaces[k] for k in request.species_list}
    if request.output_format == "json":
        return code, _render_json(algebra, parsed.var_names, shown, reports)
    return code, _render_text(algebra, parsed.var_names, shown, reports)


def _render_text(algebra, names, spaces, reports) -> str:
    out = []
    out.append(
        f"algebra on R^{algebra.n} (vars {' '.join(names)}): dim {algebra.dim}"
    )
    out.append(
        f"  truncation: degree cap {algebra.degree_cap}; results describe the"
        " degree-capped closure"
    )
    out.append("  basis:")
    for i, b in enumerate(algebra.basis):
        tag = "  (adjoined by closure)" if algebra.adjoined[i] else ""
        out.append(
            f"    [{i}] degree {algebra.degrees[i]:>2}: {format_field(b, names)}{tag}"
        )
    grading = ", ".join(
        f"{d}: {len(r)}" for d, r in sorted(algebra.grading.items())
    )
    out.append(f"  grading: {grading}")
    flags = ", ".join(f"{k}={v}" for k, v in algebra.flags.as_dict().items())
    out.append(f"  flags: {flags}")
    if spaces:
        out.append("spaces:")
    for key, sol in spaces.items():
        blocks = ", ".join(
            f"{d}: {b.dim}" for d, b in sorted(sol.degree_blocks.items())
        )
        extra = "" if sol.exhaustive else "  [budget truncated: over-approximation]"
        out.append(f"  {key}: dim {sol.space.dim}; degree blocks {{{blocks}}}{extra}")
        if sol.space.dim * algebra.dim**2 * sol.arity <= 4000:
            comps = _COMPONENT_NAMES[sol.arity]
            dim2 = algebra.dim**2
            for bi, vec in enumerate(sol.space.basis):
                out.append(f"    basis[{bi}]:")
                for ci, comp in enumerate(comps):
                    endo = Endo.from_vec(algebra, vec[ci * dim2 : (ci + 1) * dim2])
                    out.append(f"      {comp}:")
                    out.extend(_format_matrix_lines(endo.matrix, "        "))
        else:
            out.append("    (bases omitted; use --format json)")
    if reports:
        out.append("theorems:")
    for r in reports:
        verdict = (
            "N/A"
            if r.conclusion_holds is None
            else ("PASS" if r.conclusion_holds else "FAIL")
        )
        label = _THEOREM_LABELS.get(r.theorem_id, r.theorem_id)
        note = f"  ({r.notes})" if r.notes else ""
        out.append(f"  {label}: {verdict}{note}")
    return "\n".join(out)


def _render_json(algebra, names, spaces, reports) -> str:
    def space_payload(sol: SolutionSpace):
        return {
            "dim": sol.space.dim,
            "arity": sol.arity,
            "basis": [
                [format_rational(v) for v in vec] for vec in sol.space.basis
            ],
            "degree_blocks": {
                str(d): {
                    "dim": b.dim,
                    "basis": [[format_rational(v) for v in vec] for vec in b.basis],
                }
                for d, b in sorted(sol.degree_blocks.items())
            },
            "exhaustive": sol.exhaustive,
        }

    payload = {
        "algebra": {
            "n": algebra.n,
            "vars": list(names),
            "dim": algebra.dim,
            "degree_cap": algebra.degree_cap,
            "basis": [format_field(b, names) for b in algebra.basis],
            "degrees": list(algebra.degrees),
            "adjoined": [
                format_field(b, names)
                for b, adj in zip(algebra.basis, algebra.adjoined)
                if adj
            ],
            "grading": {
                str(d): len(r) for d, r in sorted(algebra.grading.items())
            },
            "flags": algebra.flags.as_dict(),
        },
        "spaces": {key: space_payload(sol) for key, sol in spaces.items()},
        "theorems": [
            {
                "id": r.theorem_id,
                "hypotheses": [[name, ok] for name, ok in r.hypotheses_checked],
                "holds": "not_applicable"
                if r.conclusion_holds is None
                else r.conclusion_holds,
                "notes": r.notes,
            }
            for r in reports
        ],
    }
    return json.dumps(payload, indent=2)


# -- verify -------------------------------------------------------------------


def _parse_endo_file(
    text: str, algebra: GradedAlgebra, names
) -> Endo:
    images: dict[int, PolyVectorField] = {}
    scales: dict[int, Fraction] = {}
    for lineno, line in _content_lines(text):
        if "->" not in line:
            raise ParseError("expected '<basis element> -> <image>'", lineno, 1)
        lhs_text, rhs_text = line.split("->", 1)
        lhs = parse_field_text(lhs_text, names, lineno)
        rhs = parse_field_text(rhs_text, names, lineno)
        lhs_coords = algebra.coordinates(lhs)  # NotInAlgebra propagates
        support = [k for k, v in enumerate(lhs_coords) if v]
        if len(support) != 1:
            raise ParseError(
                "left side must be a multiple of a single basis element of the"
                " closed algebra",
                lineno,
                1,
            )
        k = support[0]
        if k in images:
            raise ParseError(
                f"basis element [{k}] assigned twice", lineno, 1
            )
        images[k] = rhs
        scales[k] = lhs_coords[k]
    scaled = {
        k: (Fraction(1) / scales[k]) * img for k, img in images.items()
    }
    return Endo.from_images(algebra, scaled)


def run_verify(
    algebra_path: str,
    endo_path: str,
    species: str,
    degree_cap: int = 12,
    tuple_budget: int = 100_000,
) -> tuple[int, str]:
    try:
        text = Path(algebra_path).read_text()
        endo_text = Path(endo_path).read_text()
    except OSError as exc:
        return 2, f"error: {exc}"
    try:
        parsed = parse_source(text)
        spec = replace(parsed.spec, degree_cap=degree_cap)
        algebra = close_and_grade(spec)
    except (ParseError, CapExceeded) as exc:
        return 2, f"error: {exc}"
    except (MissingConstants, MissingEuler) as exc:
        return 1, f"hypothesis failure: {exc}"
    try:
        endo = _parse_endo_file(endo_text, algebra, parsed.var_names)
    except ParseError as exc:
        return 2, f"error: {endo_path}: {exc}"
    except NotInAlgebra:
        return 1, "FAILED: the map does not send the algebra into itself"

    names = parsed.var_names
    m = None
    if species.startswith("mder:"):
        m = int(species.split(":", 1)[1])
        species = "mder"
    if species == "der":
        bad = derivation_violation(algebra, endo)
        kind = "a derivation"
    elif species == "centroid":
        bad = centroid_violation(algebra, endo)
        kind = "a centroid element"
    elif species == "qc":
        bad = quasicentroid_violation(algebra, endo)
        kind = "a quasicentroid element"
    elif species == "mder":
        kind = f"a {m}-derivation"
        try:
            ok = mderivation_check(algebra, endo, m, tuple_budget)
        except BudgetTooSmall as exc:
            return 2, f"inconclusive: {exc}"
        bad = None if ok else ()
    else:
        return 2, f"error: unknown verification species {species!r}"
    if bad is None:
        return 0, f"VERIFIED: the map is {kind}"
    at = (
        f" (first violated pair: {format_field(algebra.basis[bad[0]], names)},"
        f" {format_field(algebra.basis[bad[1]], names)})"
        if bad
        else ""
    )
    return 1, f"FAILED: the map is not {kind}{at}"


# -- entry point --------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lieder",
        description="analyze derivation-type endomorphism spaces of polynomial"
        " vector field algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="close an algebra, solve species, check theorems")
    a.add_argument("file")
    a.add_argument(
        "--compute",
        default="der,c,qc,qder,gender",
        help=f"comma separated subset of {','.join(SPECIES_KEYS)}",
    )
    a.add_argument("--degree-cap", type=int, default=12)
    a.add_argument("--ambient-cap", type=int, default=None)
    a.add_argument("--tuple-budget", type=int, default=100_000)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--no-theorems", action="store_true")

    v = sub.add_parser("verify", help="verify an endomorphism against a species")
    v.add_argument("file")
    v.add_argument("--endo", required=True)
    v.add_argument(
        "--as",
        dest="species",
        required=True,
        help="one of der, centroid, qc, mder:<m>",
    )
    v.add_argument("--degree-cap", type=int, default=12)
    v.add_argument("--tuple-budget", type=int, default=100_000)

    args = parser.parse_args(argv)
    if args.command == "analyze":
        try:
            request = AnalysisRequest(
                input_path=args.file,
                species_list=tuple(
                    s.strip() for s in args.compute.split(",") if s.strip()
                ),
                ambient_cap=args.ambient_cap,
                degree_cap=args.degree_cap,
                tuple_budget=args.tuple_budget,
                output_format=args.format,
                theorem_checks=not args.no_theorems,
            )
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        code, report = run(request)
        print(report)
        return code
    code, report = run_verify(
        args.file,
        args.endo,
        args.species,
        degree_cap=args.degree_cap,
        tuple_budget=args.tuple_budget,
    )
    print(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
