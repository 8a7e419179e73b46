"""Command-line front end: ``tanaka <verb> ...``.

Every report has a machine-readable JSON section followed by a human
summary.  The environment variable ``TANAKA_REPORT`` selects what is
printed: ``full`` (default), ``json`` or ``summary``.

Exit codes: 0 success, 1 the mathematics says no (closure fails, axioms
violated, coset misses the chart, ...), 2 malformed input or usage.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebra import (LieAlgebraError, check_axioms, is_solvable, killing_form, nilpotency_step,
                      stratification_step)
from .contact import (ContactError, MatrixModel, NoIntersection, R_chart, H_chart, coordinate_symbols,
                      development_action, integrate_development, twisted_velocity, ul_coset_project)
from .io import (DescriptionError, algebra_to_data, description_from_data, dumps, orientation_of, parse_json,
                 read_text)
from .linalg import Subspace, det
from .modification import (ModificationError, classify_3d, closure_equations, is_modification_subalgebra,
                           modified_brackets, parse_sigma, solve_closure)
from .poly import PolyError
from .prolongation import (ProlongationError, ProlongedAlgebra, ad_subspace, aut_pg_algebra, derivation_algebra,
                           diagonal_derivations, largest_ideal_in, tanaka_prolong)
from .scalars import format_scalar

__all__ = ["main", "UsageError", "Report"]

EXIT_OK, EXIT_NEGATIVE, EXIT_MALFORMED = 0, 1, 2
REPORT_MODES = ("full", "json", "summary")


class UsageError(ValueError):
    """Bad flags or flag values (exit code 2)."""


class Negative(Exception):
    """A computation finished with a negative mathematical answer (exit code 1)."""


class Report:
    def __init__(self):
        self.data = {}
        self.lines = []

    def render(self, mode):
        out = []
        if mode in ("full", "json"):
            out.append(dumps(self.data).rstrip("\n"))
        if mode in ("full", "summary"):
            if mode == "full":
                out.append("")
            out.extend(self.lines)
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# argument helpers

_RATIONAL = re.compile(r"^\s*-?\d+(/\d+)?\s*$")
_DECIMAL = re.compile(r"^\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*$")


def parse_bindings(items, decimals=False):
    """``["a=0,b=1/2", "c=1"]`` -> ``{"a": 0, "b": 1/2, "c": 1}``; decimals only if allowed."""
    out = {}
    for item in items or ():
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise UsageError(f"binding {part!r} must look like name=value")
            name, value = (s.strip() for s in part.split("=", 1))
            if not name.isidentifier():
                raise UsageError(f"invalid parameter name {name!r}")
            if name in out:
                raise UsageError(f"parameter {name!r} bound twice")
            if _RATIONAL.match(value):
                out[name] = Fraction(value.strip())
            elif decimals and _DECIMAL.match(value):
                out[name] = float(value)
            else:
                kind = "a number" if decimals else "an integer or fraction such as 1/2 (no decimals)"
                raise UsageError(f"value of {name!r} must be {kind}, got {value!r}")
    return out


def _labels_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _load_json(path):
    text = read_text(path)
    return text, parse_json(text, str(path))


def _load_algebra(path, validate=True):
    text, data = _load_json(path)
    alg, split = description_from_data(data, text, str(path), validate=validate)
    return alg, split, data


def _scalar_rows(M):
    return [[format_scalar(x) for x in row] for row in M]


def _vector_terms(labels, v):
    return [[labels[k], format_scalar(x)] for k, x in enumerate(v) if x != 0]


def _vector_text(labels, v):
    parts = [f"{format_scalar(x)}*{labels[k]}" if format_scalar(x) != "1" else labels[k]
             for k, x in enumerate(v) if x != 0]
    return " + ".join(parts) if parts else "0"


def _prolonged(alg, split, args):
    """A rigid ProlongedAlgebra from a description: the stored splitting, or a fresh prolongation."""
    if split is not None:
        return ProlongedAlgebra.from_algebra(alg, split)
    p = tanaka_prolong(alg, args.g0, args.max_degree)
    if p.algebra is None:
        raise Negative(f"prolongation has no zero layer up to degree {args.max_degree}; layers {p.layer_vector()}")
    return p


def _sigma_resolver(base_alg, base_split, sigma_path):
    def resolve(name):
        if base_alg is not None and base_alg.name == name:
            if base_split is None:
                raise DescriptionError(f"base {name!r} given on the command line has no splitting")
            return base_alg, base_split
        if name in catalog.ALGEBRA_NAMES:
            return catalog.bundled_description(name)
        path = Path(sigma_path).parent / (name if name.endswith(".json") else name + ".json")
        if path.exists():
            alg, split, _ = _load_algebra(path)
            return alg, split
        raise KeyError(name)
    return resolve


def _load_sigma(path, base_alg=None, base_split=None):
    text = read_text(path)
    return parse_sigma(text, str(path), _sigma_resolver(base_alg, base_split, path))


def _bind(m, args):
    bindings = parse_bindings(args.bind)
    unknown = set(bindings) - set(m.parameters)
    if unknown:
        raise UsageError(f"unknown parameter(s) {sorted(unknown)}; sigma declares {list(m.parameters)}")
    missing = set(m.parameters) - set(bindings)
    if missing:
        raise UsageError(f"unbound parameter(s) {sorted(missing)}; use --bind name=value")
    return m.specialize(bindings) if m.parameters else m


# ---------------------------------------------------------------------------
# verbs

def cmd_check(args, rep):
    alg, _split, _ = _load_algebra(args.file, validate=False)
    bad = check_axioms(alg)
    step = stratification_step(alg) if alg.degrees is not None and not bad else None
    rep.data = {
        "name": alg.name,
        "dim": alg.dim,
        "violations": [{"kind": v.kind, "indices": [alg.labels[i] for i in v.indices], "detail": v.detail}
                       for v in bad],
        "stratified": step is not None,
        "step": step,
    }
    rep.lines.append(f"{alg.name or args.file}: dimension {alg.dim}, {len(bad)} violation(s)")
    for v in bad:
        rep.lines.append(f"  {v.kind} at ({', '.join(alg.labels[i] for i in v.indices)}): {v.detail}")
    if step is not None:
        rep.lines.append(f"stratified of step {step}")
    return EXIT_NEGATIVE if bad else EXIT_OK


def cmd_derive(args, rep):
    alg, _split, _ = _load_algebra(args.file)
    space = derivation_algebra(alg) if args.g0 == "full" else diagonal_derivations(alg)
    rep.data = {
        "name": alg.name,
        "g0": args.g0,
        "dim": space.dim,
        "derivations": [{"name": lab, "matrix": _scalar_rows(m)} for lab, m in zip(space.labels, space.basis)],
    }
    rep.lines.append(f"strata-preserving derivations ({args.g0}): dim {space.dim}")
    first = alg.layer_indices(-1)
    for lab, m in zip(space.labels, space.basis):
        block = [[format_scalar(m[r, c]) for c in first] for r in first]
        rep.lines.append(f"  {lab}: first-layer block {block}")
    return EXIT_OK


def cmd_prolong(args, rep):
    alg, _split, _ = _load_algebra(args.file)
    p = tanaka_prolong(alg, args.g0, args.max_degree)
    layers = p.layer_vector()
    rep.data = {
        "name": alg.name,
        "g0": args.g0,
        "max_degree": args.max_degree,
        "rigid": p.rigid,
        "zero_degree": p.zero_degree,
        "layers": {str(d): k for d, k in sorted(p.layer_dims.items())},
        "dim": p.dim,
    }
    layer_text = "[" + ",".join(str(k) for k in layers) + "]"
    if p.rigid:
        rep.lines.append(f"rigid at degree {p.zero_degree}; layers {layer_text}; dim {p.dim}")
    else:
        rep.lines.append(f"no zero layer up to degree {args.max_degree}; layers {layer_text}; "
                         f"dim through degree {args.max_degree}: {p.dim}")
    if p.algebra is not None:
        p.algebra.name = f"{alg.name}-prolonged" if alg.name else "prolonged"
        desc = algebra_to_data(p.algebra, p.splitting)
        rep.data["algebra"] = desc
        rep.data["killing_determinant"] = format_scalar(det(killing_form(p.algebra)))
        rep.lines.append(f"Killing form determinant {rep.data['killing_determinant']}")
        if args.output:
            Path(args.output).write_text(dumps(desc))
            rep.lines.append(f"wrote {args.output}")
    return EXIT_OK


def cmd_modify(args, rep):
    base_alg, base_split, base_data = _load_algebra(args.base)
    m = _load_sigma(args.sigma, base_alg, base_split)
    target = m.p.algebra if base_split is not None else m.p.g
    if (base_alg.labels, base_alg.degrees, base_alg.structure_table()) != \
            (target.labels, target.degrees, target.structure_table()):
        raise DescriptionError(f"{args.base} does not match the base algebra of {args.sigma}")
    mm = _bind(m, args)
    check = is_modification_subalgebra(mm)
    if not check:
        a, b, res = check.witness
        rep.data = {"closes": False,
                    "witness": {"pair": [a, b], "residual": [[k, format_scalar(v)] for k, v in res.items()]}}
        rep.lines.append(f"graph of sigma is not a subalgebra: [{a},{b}] has q-residual "
                         + ", ".join(f"{format_scalar(v)}*{k}" for k, v in res.items()))
        return EXIT_NEGATIVE
    s = modified_brackets(mm)
    step = nilpotency_step(s.algebra)
    orient = {key for key in orientation_of(base_data) if key[1] < len(m.g_labels)}
    rep.data = {
        "closes": True,
        "bracket_generating": s.bracket_generating,
        "nilpotency_step": step,
        "solvable": is_solvable(s.algebra),
        "algebra": algebra_to_data(s.algebra, orientation=orient),
    }
    rep.lines.append(f"modification {m.name or args.sigma} closes; s has dimension {s.algebra.dim}")
    rep.lines.extend(s.algebra.bracket_lines(orient, descending=True))
    rep.lines.append("nilpotent of step %d" % step if step is not None else
                     ("solvable, not nilpotent" if rep.data["solvable"] else "not solvable"))
    if not s.bracket_generating:
        rep.lines.append("warning: first layer of s is not bracket generating")
    if args.output:
        Path(args.output).write_text(dumps(rep.data["algebra"]))
        rep.lines.append(f"wrote {args.output}")
    return EXIT_OK


def cmd_closure_eqs(args, rep):
    base = _load_algebra(args.base)[:2] if args.base else (None, None)
    m = _load_sigma(args.sigma, *base)
    eqs = closure_equations(m)
    rep.data = {"name": m.name, "parameters": list(m.parameters), "equations": [str(e) for e in eqs]}
    rep.lines.append(f"{len(eqs)} closure equation(s) in {list(m.parameters)}")
    rep.lines.extend(f"  {e} = 0" for e in eqs)
    if args.solve:
        zero = _labels_list(args.zero) if args.zero else []
        unknown = set(zero) - set(m.parameters)
        if unknown:
            raise UsageError(f"unknown parameter(s) in --zero: {sorted(unknown)}")
        sol, free = solve_closure(eqs, m.parameters, zero)
        rep.data["solution"] = {k: str(v) for k, v in sorted(sol.items())}
        rep.data["free"] = free
        rep.lines.append("solution: " + (", ".join(f"{k} = {v}" for k, v in sorted(sol.items())) or "none needed"))
        rep.lines.append(f"free parameters: {free}")
    return EXIT_OK


def _contact_model(args, rep, data):
    M = MatrixModel.from_data(data)
    chart = args.chart or "R"
    if chart not in M.charts:
        raise UsageError(f"model has no chart {chart!r}; charts: {list(M.charts)}")
    pt = parse_bindings(args.at, decimals=True)
    names = ("x1", "x2", "x3") if chart == "H" else ("y1", "y2", "y3")
    if set(pt) != set(names):
        raise UsageError(f"--at must bind exactly {', '.join(names)}")
    coords = [pt[n] for n in names]
    mat = (H_chart if chart == "H" else R_chart)(*coords)
    try:
        g, q = ul_coset_project(M, mat)
    except NoIntersection as exc:
        rep.data = {"model": M.name, "chart": chart, "point": [str(c) for c in coords], "intersects": False}
        rep.lines.append(f"coset misses the unipotent chart: {exc}")
        return EXIT_NEGATIVE
    fmt = (lambda x: repr(float(x))) if any(isinstance(x, float) for x in g.flat) else format_scalar
    image = [g[0, 1], g[1, 2], g[0, 2]]
    rep.data = {"model": M.name, "chart": chart, "point": [str(c) for c in coords], "intersects": True,
                "g": [[fmt(x) for x in row] for row in g], "q": [[fmt(x) for x in row] for row in q],
                "H": [fmt(x) for x in image]}
    rep.lines.append(f"{chart}({', '.join(str(c) for c in coords)}) -> H({', '.join(fmt(x) for x in image)})")
    return EXIT_OK


def cmd_contact_map(args, rep):
    text, data = _load_json(args.file)
    if isinstance(data, dict) and "generators" in data:
        return _contact_model(args, rep, data)
    base = _load_algebra(args.base)[:2] if args.base else (None, None)
    m = _bind(_load_sigma(args.file, *base), args)
    if not is_modification_subalgebra(m):
        raise Negative("graph of sigma is not a subalgebra; no modification group")
    g = m.p.g
    _decl, x = coordinate_symbols(g.dim)
    A = development_action(m, None, x)
    v = twisted_velocity(g, A, x)
    gamma = integrate_development(g, A, x)
    psi = gamma.subs({"t": 1})
    rep.data = {"name": m.name, "velocity": v.to_data(), "gamma": gamma.to_data(), "psi": psi.to_data()}
    rep.lines.append("velocity v(t):")
    rep.lines.extend("  " + s for s in v.lines())
    rep.lines.append("gamma(t):")
    rep.lines.extend("  " + s for s in gamma.lines())
    if args.at:
        pt = parse_bindings(args.at)
        names = {f"x{k + 1}" for k in range(g.dim)}
        if not set(pt) <= names:
            raise UsageError(f"--at accepts only {sorted(names)}")
        full = {n: pt.get(n, Fraction(0)) for n in names}
        val = [e.evaluate(full) for e in psi.entries]
        rep.data["psi_at"] = {lab: format_scalar(c) for lab, c in zip(g.labels, val)}
        rep.lines.append("Psi at the given point: (" + ", ".join(format_scalar(c) for c in val) + ")")
    return EXIT_OK


def cmd_classify3(args, rep):
    _text, data = _load_json(args.file)
    if isinstance(data, dict) and "sigma" in data:
        base = _load_algebra(args.base)[:2] if args.base else (None, None)
        m = _bind(_load_sigma(args.file, *base), args)
        s = modified_brackets(m)
        alg, pol = s.algebra, s.polarization
    else:
        alg, _split, _ = _load_algebra(args.file)
        if not args.polarization:
            raise UsageError("--polarization is required for an algebra description")
        pol = Subspace.coordinate(alg.dim, [alg.index(lab) for lab in _labels_list(args.polarization)])
    cls = classify_3d(alg, pol)
    rep.data = {"label": cls.label, "alpha": None if cls.alpha is None else format_scalar(cls.alpha),
                "basis": None if cls.basis is None else
                [_vector_terms(alg.labels, cls.basis[:, c]) for c in range(3)]}
    rep.lines.append(f"class {cls}")
    if cls.basis is not None:
        for c in range(3):
            rep.lines.append(f"  f{c + 1} = {_vector_text(alg.labels, cls.basis[:, c])}")
    else:
        rep.lines.append("  no rational normalizing basis (needs a square root)")
    return EXIT_OK


def cmd_catalog(args, rep):
    if args.list:
        rep.data = {"entries": list(catalog.CATALOG_NAMES)}
        rep.lines.extend(catalog.CATALOG_NAMES)
        return EXIT_OK
    names = args.names or list(catalog.CATALOG_NAMES)
    for n in names:
        if n not in catalog.CATALOG_NAMES:
            raise UsageError(f"unknown catalog entry {n!r}; try 'tanaka catalog --list'")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for n in names:
        path = out / f"{n}.json"
        path.write_text(catalog.bundled_text(n))
        written.append(str(path))
    rep.data = {"written": written}
    rep.lines.extend(f"wrote {w}" for w in written)
    return EXIT_OK


def cmd_autpg(args, rep):
    alg, split, _ = _load_algebra(args.file)
    p = _prolonged(alg, split, args)
    aut = aut_pg_algebra(p)
    adq = ad_subspace(p.algebra, p.q_indices)
    equal = aut.subspace() == adq
    rep.data = {"dim": aut.dim, "ad_q_dim": adq.dim, "equals_ad_q": equal}
    rep.lines.append(f"aut(p,g) has dim {aut.dim}; ad(q) has dim {adq.dim}; "
                     + ("they coincide" if equal else "they differ"))
    return EXIT_OK


def cmd_ideal_in_q(args, rep):
    alg, split, _ = _load_algebra(args.file)
    p = _prolonged(alg, split, args)
    ideal = largest_ideal_in(p, p.q_subspace())
    rep.data = {"dim": ideal.dim, "basis": [_vector_terms(p.algebra.labels, v) for v in ideal.vectors()]}
    rep.lines.append(f"largest ideal of p inside q has dim {ideal.dim}")
    rep.lines.extend("  " + _vector_text(p.algebra.labels, v) for v in ideal.vectors())
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="tanaka", description="Exact computations with stratified Lie algebras.")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def g0_flags(p, default_cap=10):
        p.add_argument("--g0", choices=("full", "diagonal"), default="full",
                       help="degree-0 part: all strata-preserving derivations or the diagonal ones")
        p.add_argument("--max-degree", type=int, default=default_cap, help="highest prolongation degree computed")

    p = sub.add_parser("check", help="verify antisymmetry, Jacobi and grading of a description")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("derive", help="strata-preserving derivations")
    p.add_argument("file")
    p.add_argument("--g0", choices=("full", "diagonal"), default="full")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("prolong", help="Tanaka prolongation")
    p.add_argument("file")
    g0_flags(p)
    p.add_argument("-o", "--output", help="write the prolonged algebra description here")
    p.set_defaults(func=cmd_prolong)

    p = sub.add_parser("modify", help="graph of sigma: closure test and modified brackets")
    p.add_argument("base", help="description of g (or of the prolonged algebra)")
    p.add_argument("--sigma", required=True, help="sigma file")
    p.add_argument("--bind", action="append", help="parameter values, e.g. a=0,b=1/2")
    p.add_argument("-o", "--output", help="write the modified algebra description here")
    p.set_defaults(func=cmd_modify)

    p = sub.add_parser("closure-eqs", help="polynomial closure equations of a parametric sigma")
    p.add_argument("sigma")
    p.add_argument("--base", help="description resolving the sigma file's base")
    p.add_argument("--solve", action="store_true", help="solve equations that become linear")
    p.add_argument("--zero", help="parameters set to zero before solving, comma separated")
    p.set_defaults(func=cmd_closure_eqs)

    p = sub.add_parser("contact-map", help="development ODE and Psi, or a matrix-model coset projection")
    p.add_argument("file", help="sigma file, or a matrix model")
    p.add_argument("--base")
    p.add_argument("--bind", action="append")
    p.add_argument("--at", action="append", help="evaluation point, e.g. x1=1 or y1=0.3,y2=0,y3=1")
    p.add_argument("--chart", choices=("H", "R"), help="chart of the matrix model (default R)")
    p.set_defaults(func=cmd_contact_map)

    p = sub.add_parser("classify3", help="class of a three-dimensional polarized algebra")
    p.add_argument("file", help="algebra description or sigma file")
    p.add_argument("--polarization", help="comma-separated labels spanning the plane")
    p.add_argument("--base")
    p.add_argument("--bind", action="append")
    p.set_defaults(func=cmd_classify3)

    p = sub.add_parser("catalog", help="write bundled descriptions to files")
    p.add_argument("names", nargs="*")
    p.add_argument("--out", default=".", help="target directory")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("autpg", help="aut(p,g) versus ad(q)")
    p.add_argument("file")
    g0_flags(p)
    p.set_defaults(func=cmd_autpg)

    p = sub.add_parser("ideal-in-q", help="largest ideal of p contained in q")
    p.add_argument("file")
    g0_flags(p)
    p.set_defaults(func=cmd_ideal_in_q)
    return ap


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    mode = os.environ.get("TANAKA_REPORT", "full")
    if mode not in REPORT_MODES:
        print(f"tanaka: TANAKA_REPORT must be one of {REPORT_MODES}, got {mode!r}", file=stderr)
        return EXIT_MALFORMED
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    if getattr(args, "max_degree", 1) is not None and getattr(args, "max_degree", 1) < 1:
        print("tanaka: --max-degree must be at least 1", file=stderr)
        return EXIT_MALFORMED
    rep = Report()
    try:
        code = args.func(args, rep)
    except Negative as exc:
        rep.data.setdefault("error", str(exc))
        rep.lines.append(str(exc))
        code = EXIT_NEGATIVE
    except (ModificationError, NoIntersection) as exc:
        rep.data = {"error": str(exc)}
        rep.lines.append(str(exc))
        code = EXIT_NEGATIVE
    except (DescriptionError, UsageError, ProlongationError, ContactError, LieAlgebraError, PolyError,
            json.JSONDecodeError) as exc:
        print(f"tanaka {args.verb}: {exc}", file=stderr)
        return EXIT_MALFORMED
    stdout.write(rep.render(mode))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
