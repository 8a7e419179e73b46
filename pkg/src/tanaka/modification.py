"""Modifications: graphs ``s = {X + σX}`` of linear maps ``σ: g -> q`` inside ``p = g ⊕ q``.

``σ`` is a ``(dim q) x (dim g)`` matrix of :class:`~tanaka.poly.MultiPoly`
entries in declared parameters, so the same object describes a single map
or a whole ansatz family.  Brackets are computed in ``p`` with polynomial
coordinates; the graph closes exactly when the *residual*

    q-part of [X + σX, Y + σY]  -  σ(g-part of [X + σX, Y + σY])

vanishes for all basis pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .algebra import (GradedLieAlgebra, bracket_span, grading_derivation, is_solvable, killing_form,
                      stratification_step)
from .io import DescriptionError, description_from_data, parse_json
from .linalg import Subspace, det, nullspace, solve_affine, zeros
from .poly import MultiPoly, PolyError, parse_poly
from .prolongation import DerivationSpace, ProlongedAlgebra, semidirect
from .scalars import GaussianRational, as_scalar, format_scalar, is_real, real_part

__all__ = [
    "ModificationError",
    "Modification",
    "ClosureResult",
    "ModifiedAlgebra",
    "ThreeDClass",
    "is_modification_subalgebra",
    "modified_brackets",
    "symbolic_brackets",
    "closure_equations",
    "solve_closure",
    "semidirect_R",
    "functional_modification",
    "ultra_rigid_criterion",
    "classify_3d",
    "parse_sigma",
    "sigma_to_data",
]


class ModificationError(ValueError):
    pass


def _poly(x, params):
    if isinstance(x, MultiPoly):
        return x.with_vars(params)
    return MultiPoly.const(as_scalar(x), params)


class Modification:
    """A splitting ``p = g ⊕ q`` together with a (possibly parametric) ``σ: g -> q``."""

    def __init__(self, p: ProlongedAlgebra, sigma, parameters=(), name=""):
        p._require_algebra()
        self.p = p
        self.parameters = tuple(parameters)
        self.name = name
        ng, nq = len(p.g_indices), len(p.q_indices)
        sigma = np.asarray(sigma, dtype=object)
        if sigma.shape != (nq, ng):
            raise ModificationError(f"sigma must be a {nq}x{ng} matrix, got shape {sigma.shape}")
        self.sigma = np.empty((nq, ng), dtype=object)
        for idx, x in np.ndenumerate(sigma):
            px = _poly(x, self.parameters)
            extra = set(px.variables()) - set(self.parameters)
            if extra:
                raise ModificationError(f"sigma entry uses undeclared parameters {sorted(extra)}")
            self.sigma[idx] = px

    @property
    def algebra(self) -> GradedLieAlgebra:
        return self.p.algebra

    @property
    def g_labels(self):
        return [self.algebra.labels[i] for i in self.p.g_indices]

    @property
    def q_labels(self):
        return [self.algebra.labels[i] for i in self.p.q_indices]

    def specialize(self, bindings) -> "Modification":
        """Substitute scalar values for every parameter."""
        bindings = {k: as_scalar(v) for k, v in (bindings or {}).items()}
        unknown = set(bindings) - set(self.parameters)
        if unknown:
            raise ModificationError(f"unknown parameters {sorted(unknown)}")
        missing = set(self.parameters) - set(bindings)
        if missing:
            raise ModificationError(f"unbound parameters {sorted(missing)}")
        sig = np.empty(self.sigma.shape, dtype=object)
        for idx, x in np.ndenumerate(self.sigma):
            sig[idx] = x.evaluate(bindings) if x.terms else Fraction(0)
        return Modification(self.p, sig, (), self.name)

    def sigma_scalars(self):
        """σ as a scalar matrix (requires no parameters)."""
        if any(x.variables() for x in self.sigma.flat):
            raise ModificationError("sigma still depends on parameters")
        out = zeros(*self.sigma.shape)
        for idx, x in np.ndenumerate(self.sigma):
            out[idx] = x.constant_value()
        return out

    def graph_vectors(self):
        """``f_i = e_i + σ(e_i)`` as vectors of p with polynomial entries."""
        N = self.algebra.dim
        gi, qi = self.p.g_indices, self.p.q_indices
        zero = MultiPoly({}, self.parameters)
        out = []
        for c, i in enumerate(gi):
            v = np.empty(N, dtype=object)
            v.fill(zero)
            v[i] = MultiPoly.const(1, self.parameters)
            for r, k in enumerate(qi):
                v[k] = self.sigma[r, c]
            out.append(v)
        return out

    def _split(self, z):
        gi, qi = self.p.g_indices, self.p.q_indices
        zg = np.array([_poly(z[i], self.parameters) for i in gi], dtype=object)
        zq = np.array([_poly(z[k], self.parameters) for k in qi], dtype=object)
        return zg, zq

    def pair_data(self):
        """Yield ``(i, j, g-part, residual)`` for all basis pairs ``i < j``."""
        fs = self.graph_vectors()
        for i, j in combinations(range(len(fs)), 2):
            z = self.algebra.bracket(fs[i], fs[j])
            zg, zq = self._split(z)
            res = zq - self.sigma.dot(zg) if len(zq) else zq
            yield i, j, zg, res

    def first_layer(self):
        return [c for c, i in enumerate(self.p.g_indices) if self.p.g.degrees[i] == -1]

    def to_data(self):
        return sigma_to_data(self)


@dataclass
class ClosureResult:
    closed: bool
    witness: tuple | None = None      # (label_i, label_j, residual dict {q-label: value})

    def __bool__(self):
        return self.closed


@dataclass
class ModifiedAlgebra:
    algebra: GradedLieAlgebra         # in the basis f_i = e_i + σ(e_i); no degrees
    polarization: Subspace            # span of f_i for e_i in the first layer
    bracket_generating: bool


def is_modification_subalgebra(m: Modification, bindings=None) -> ClosureResult:
    """Closure test of the graph of σ, with the first failing pair as witness."""
    mm = m.specialize(bindings or {}) if m.parameters or bindings else m
    labels = mm.g_labels
    for i, j, _zg, res in mm.pair_data():
        bad = {mm.q_labels[r]: x.constant_value() for r, x in enumerate(res) if x != 0}
        if bad:
            return ClosureResult(False, (labels[i], labels[j], bad))
    return ClosureResult(True, None)


def symbolic_brackets(m: Modification):
    """``{(i, j): g-part}`` of ``[f_i, f_j]`` with polynomial entries in the parameters.

    These are the structure constants of ``s`` in the f-basis wherever the
    graph closes.
    """
    return {(i, j): zg for i, j, zg, _res in m.pair_data()}


def _span_generated(alg, sub):
    span = sub
    while True:
        nxt = span + bracket_span(alg, sub, span)
        if nxt == span:
            return span
        span = nxt


def modified_brackets(m: Modification, bindings=None, labels=None) -> ModifiedAlgebra:
    """Structure constants of ``s`` in the basis ``f_i``; raises if σ does not close."""
    mm = m.specialize(bindings or {}) if m.parameters or bindings else m
    check = is_modification_subalgebra(mm)
    if not check:
        a, b, res = check.witness
        raise ModificationError(f"graph of sigma is not a subalgebra: residual at [{a},{b}] = "
                                + ", ".join(f"{k}: {format_scalar(v)}" for k, v in res.items()))
    n = len(mm.g_labels)
    table = {}
    for (i, j), zg in symbolic_brackets(mm).items():
        d = {k: x.constant_value() for k, x in enumerate(zg) if x != 0}
        if d:
            table[(i, j)] = d
    labels = labels or [f"f{k + 1}" for k in range(n)]
    alg = GradedLieAlgebra(labels, table, None, f"{m.name}-modified" if m.name else "modified",
                           m.algebra.scalars)
    pol = Subspace.coordinate(n, mm.first_layer())
    gen = _span_generated(alg, pol).dim == n
    return ModifiedAlgebra(alg, pol, gen)


def closure_equations(m: Modification):
    """Distinct monic polynomial equations in the parameters whose common zeros are the closing σ."""
    seen = {}
    for _i, _j, _zg, res in m.pair_data():
        for x in res:
            if x == 0:
                continue
            lead = x.sorted_terms()[0][1]
            e = (x / lead).with_vars(m.parameters)
            key = frozenset(e.terms.items())
            seen.setdefault(key, e)
    return sorted(seen.values(), key=lambda e: (e.degree(), str(e)))


def solve_closure(equations, parameters, zero=()):
    """Solve closure equations that become linear after substitution.

    Parameters listed in ``zero`` are set to 0 first.  Linear equations are
    solved, their solution substituted, and the process repeats; an equation
    ``c*x^k`` in a single parameter forces ``x = 0``.  Returns
    ``(solution, free)``: a dict expressing solved parameters as polynomials
    in the free ones, and the list of free parameters.  Raises
    :class:`ModificationError` if nonlinear equations remain or the system
    is inconsistent.
    """
    params = list(parameters)
    sol = {z: MultiPoly({}, params) for z in zero}
    eqs = [e.subs(sol) for e in equations]
    while True:
        eqs = [e for e in eqs if e != 0]
        if not eqs:
            break
        linear = [e for e in eqs if e.degree() <= 1]
        if not linear:
            powers = {mono[0][0] for e in eqs if len(e.terms) == 1
                      for mono in e.terms if len(mono) == 1}
            if powers:
                new = {x: MultiPoly({}, params) for x in sorted(powers)}
                sol = {k: v.subs(new) for k, v in sol.items()}
                sol.update(new)
                eqs = [e.subs(new) for e in eqs]
                continue
            raise ModificationError("remaining closure equations are not linear: "
                                    + "; ".join(str(e) for e in eqs))
        unknown = [p for p in params if p not in sol]
        A = zeros(len(linear), len(unknown))
        b = zeros(len(linear))
        for r, e in enumerate(linear):
            for c, p in enumerate(unknown):
                A[r, c] = e.coeff(p, 1).subs({q: 0 for q in unknown}).constant_value() if e.degree(p) >= 1 else Fraction(0)
            b[r] = -e.subs({q: 0 for q in unknown}).constant_value()
        res = solve_affine(A, b)
        if res is None:
            raise ModificationError("closure equations are inconsistent")
        # pivot parameters in terms of the free ones
        from .linalg import rref
        aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
        R, piv = rref(aug)
        new = {}
        for row, pc in zip(R, piv):
            expr = MultiPoly.const(row[-1], params)
            for c, p in enumerate(unknown):
                if c != pc and row[c] != 0:
                    expr = expr - row[c] * MultiPoly.var(p, params)
            new[unknown[pc]] = expr
        sol = {k: v.subs(new) for k, v in sol.items()}
        sol.update(new)
        eqs = [e.subs(new) for e in eqs]
    free = [p for p in params if p not in sol]
    return sol, free


# ---------------------------------------------------------------------------
# g ⋊ R and the kernel criterion

def semidirect_R(g, label="D") -> ProlongedAlgebra:
    """``g ⋊ R`` with R acting through the grading derivation (j on layer -j)."""
    if stratification_step(g) is None:
        raise ModificationError("g ⋊ R requires a stratified algebra")
    return semidirect(g, DerivationSpace(g, [grading_derivation(g)], [label]))


def functional_modification(g, sigma, p=None) -> Modification:
    """Modification of ``g ⋊ R`` given by a functional ``σ`` on ``g`` (a coordinate vector)."""
    p = p or semidirect_R(g)
    row = np.array([as_scalar(x) if not isinstance(x, MultiPoly) else x for x in sigma], dtype=object)
    params = sorted({v for x in row if isinstance(x, MultiPoly) for v in x.variables()})
    return Modification(p, row.reshape(1, -1), params, f"{g.name}-functional")


def ultra_rigid_criterion(g, sigma) -> bool:
    """Kernel test: σ vanishes on every layer of degree <= -2."""
    if stratification_step(g) is None:
        raise ModificationError("criterion requires a stratified algebra")
    return all(sigma[i] == 0 for i, d in enumerate(g.degrees) if d <= -2)


# ---------------------------------------------------------------------------
# three-dimensional classification

@dataclass
class ThreeDClass:
    label: str                    # A1, A2, A3, A4, B, C or D
    alpha: Fraction | None = None  # only for A4
    basis: np.ndarray | None = None  # columns f1, f2, f3 in the input coordinates, when rational

    def __str__(self):
        return self.label if self.alpha is None else f"{self.label}(alpha={format_scalar(self.alpha)})"


NORMAL_FORMS = {
    "A1": {(0, 1): {2: 1}},
    "A2": {(0, 1): {2: 1}, (0, 2): {1: 1}},
    "A3": {(0, 1): {2: 1}, (0, 2): {1: -1}},
    "B": {(0, 1): {2: 1}, (0, 2): {1: -1}, (1, 2): {0: 1}},
    "C": {(0, 1): {2: 1}, (0, 2): {0: -1}, (1, 2): {1: 1}},
    "D": {(0, 1): {2: 1}, (0, 2): {1: 1}, (1, 2): {0: -1}},
}


def normal_form(label, alpha=None):
    """The three-dimensional normal-form algebra ``f1, f2, f3`` of a class label."""
    if label == "A4":
        table = {(0, 1): {2: 1}, (0, 2): {1: as_scalar(alpha), 2: 1}}
    else:
        table = NORMAL_FORMS[label]
    return GradedLieAlgebra(["f1", "f2", "f3"], table, None, f"case-{label}")


def _not_real():
    raise ModificationError("classify_3d requires rational data")


def _realify(alg):
    """Same algebra with Fraction constants; Gaussian constants must have zero imaginary part."""
    table = {}
    for key, vec in alg.structure_table().items():
        table[key] = {k: real_part(c) if is_real(c) else _not_real() for k, c in vec.items()}
    return GradedLieAlgebra(alg.labels, table, alg.degrees, alg.name, "rational", validate=False)


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _coords(B, v):
    sol = solve_affine(B, v)
    return sol.particular


def _verify_basis(alg, P, label, alpha):
    if P is None:
        return None
    try:
        alg2 = alg.change_basis(P, ["f1", "f2", "f3"])
    except (ZeroDivisionError, ValueError):
        return None
    target = normal_form(label, alpha)
    return P if alg2.structure_table() == target.structure_table() else None


def classify_3d(alg, polarization: Subspace) -> ThreeDClass:
    """Class of a three-dimensional algebra polarized by a bracket-generating plane."""
    if alg.dim != 3:
        raise ModificationError("classify_3d requires a three-dimensional algebra")
    if polarization.dim != 2 or polarization.ambient != 3:
        raise ModificationError("polarization must be a plane")
    alg = _realify(alg)
    polarization = Subspace(3, [np.array([real_part(x) if is_real(x) else _not_real() for x in v], dtype=object)
                                for v in polarization.vectors()])
    u1, u2 = polarization.vectors()
    w = alg.bracket(u1, u2)
    if polarization.contains(w):
        raise ModificationError("polarization is not bracket generating")

    if is_solvable(alg):
        ker = nullspace(alg.ad(w))
        inter = ker & polarization
        if inter.dim == 0:
            raise ModificationError("no first-layer vector commutes with the bracket; not of the expected form")
        e2 = inter.vectors()[0]
        e1 = next(v for v in (u1, u2) if not Subspace(3, [e2]).contains(v))
        e3 = alg.bracket(e1, e2)
        B = np.array([e1, e2, e3], dtype=object).T
        c = _coords(B, alg.bracket(e1, e3))
        if c[0] != 0:
            raise ModificationError("unexpected [e1,e3] component along e1")
        alpha, beta = c[1], c[2]
        if beta != 0:
            a = Fraction(1) / beta
            P = np.array([a * e1, e2, a * e3], dtype=object).T
            al = alpha / (beta * beta)
            return ThreeDClass("A4", al, _verify_basis(alg, P, "A4", al))
        if alpha == 0:
            return ThreeDClass("A1", None, _verify_basis(alg, B, "A1", None))
        label = "A2" if alpha > 0 else "A3"
        r = _rational_sqrt(abs(alpha))
        P = None if r is None else np.array([e1 / r, e2, e3 / r], dtype=object).T
        return ThreeDClass(label, None, _verify_basis(alg, P, label, None))

    K = killing_form(alg)
    if det(K) == 0:
        raise ModificationError("algebra is neither solvable nor simple")
    m1, m2, m3 = K[0, 0], det(K[:2, :2]), det(K)
    if m1 < 0 and m2 > 0 and m3 < 0:
        label = "B"
    else:
        V = np.array([u1, u2], dtype=object).T
        imgs = [alg.bracket(w, u) for u in (u1, u2)]
        M = zeros(2, 2)
        for col, img in enumerate(imgs):
            sol = solve_affine(V, img)
            if sol is None:
                raise ModificationError("ad of [f1,f2] does not preserve the polarization")
            M[:, col] = sol.particular
        d = det(M)
        label = "C" if d < 0 else "D"
    return ThreeDClass(label, None, _simple_basis(alg, u1, u2, w, label))


def _simple_basis(alg, u1, u2, w, label):
    """Rational basis realizing the normal form of a simple class, if one is found."""
    V = np.array([u1, u2], dtype=object).T
    M = zeros(2, 2)
    for col, u in enumerate((u1, u2)):
        M[:, col] = solve_affine(V, alg.bracket(w, u)).particular
    d = det(M)
    lam = _rational_sqrt(abs(d))
    if lam is None or lam == 0:
        return None
    f3 = w / lam
    if label == "C":
        vecs = []
        for ev in (lam, -lam):
            ns = nullspace(M - ev * np.array([[1, 0], [0, 1]], dtype=object))
            if ns.dim != 1:
                return None
            vecs.append(V @ ns.vectors()[0])
        v1, v2 = vecs
        kappa = _coords(np.array([f3], dtype=object).T, alg.bracket(v1, v2))[0]
        P = np.array([v1 / kappa, v2, f3], dtype=object).T
        return _verify_basis(alg, P, "C", None)
    # rotations: f2 = ±[f3, f1], then rescale so that [f1, f2] = f3
    for sign in (1, -1):
        for f3s in (f3, -f3):
            f1 = u1
            f2 = sign * alg.bracket(f3s, f1)
            kappa = _coords(np.array([f3s], dtype=object).T, alg.bracket(f1, f2))[0]
            if kappa == 0:
                continue
            r = _rational_sqrt(Fraction(1) / kappa) if kappa > 0 else None
            if r is None:
                continue
            P = np.array([r * f1, r * f2, f3s], dtype=object).T
            ok = _verify_basis(alg, P, label, None)
            if ok is not None:
                return ok
    return None


# ---------------------------------------------------------------------------
# sigma files

def parse_sigma(text, source="", resolve_base=None):
    """Parse a σ file into a :class:`Modification`.

    ``resolve_base(name)`` maps a base name to ``(algebra, splitting)``;
    the default looks names up in the bundled catalog.
    """
    data = parse_json(text, source)

    def err(msg, path=""):
        return DescriptionError(msg, path, source=source)

    if not isinstance(data, dict):
        raise err("expected a JSON object", "$")
    allowed = {"name", "base", "splitting", "sigma", "parameters"}
    for k in data:
        if k not in allowed:
            raise err(f"unknown field {k!r}", "$")
    for k in ("base", "splitting", "sigma"):
        if k not in data:
            raise err(f"missing field {k!r}", "$")
    params = data.get("parameters", [])
    if not isinstance(params, list) or not all(isinstance(p, str) and p.isidentifier() and p != "i" for p in params):
        raise err("parameters must be a list of identifiers (not 'i')", "$.parameters")
    if len(set(params)) != len(params):
        raise err("duplicate parameter names", "$.parameters")
    base = data["base"]
    if isinstance(base, str):
        if resolve_base is None:
            from .catalog import bundled_description
            resolve_base = bundled_description
        try:
            alg, base_split = resolve_base(base)
        except KeyError:
            raise err(f"unknown base algebra {base!r}", "$.base") from None
    elif isinstance(base, dict):
        alg, base_split = description_from_data(base, text, source)
    else:
        raise err("base must be a name or an inline description", "$.base")
    split = data["splitting"]
    if not isinstance(split, list) or not all(isinstance(s, str) for s in split):
        raise err("splitting must be a list of labels", "$.splitting")
    for s in split:
        if s not in alg.labels:
            raise err(f"unknown label {s!r} in splitting", "$.splitting")
    if base_split is not None and list(base_split) != list(split):
        raise err("splitting does not match the base algebra's splitting", "$.splitting")
    try:
        p = ProlongedAlgebra.from_algebra(alg, split)
    except ValueError as exc:
        raise err(str(exc), "$.splitting") from None
    glabels = [alg.labels[i] for i in p.g_indices]
    qlabels = [alg.labels[i] for i in p.q_indices]
    sigma = np.empty((len(qlabels), len(glabels)), dtype=object)
    sigma.fill(MultiPoly({}, params))
    entries = data["sigma"]
    if not isinstance(entries, list):
        raise err("sigma must be a list", "$.sigma")
    seen = set()
    for t, entry in enumerate(entries):
        path = f"$.sigma[{t}]"
        if not isinstance(entry, dict) or set(entry) != {"from", "to"}:
            raise err("sigma entries need exactly the fields 'from' and 'to'", path)
        src = entry["from"]
        if src not in glabels:
            raise err(f"unknown g label {src!r}", path + ".from")
        if src in seen:
            raise err(f"sigma of {src!r} given twice", path)
        seen.add(src)
        c = glabels.index(src)
        if not isinstance(entry["to"], list):
            raise err("'to' must be a list of [q-label, coefficient] pairs", path + ".to")
        for u, term in enumerate(entry["to"]):
            tp = f"{path}.to[{u}]"
            if not (isinstance(term, list) and len(term) == 2 and isinstance(term[0], str)
                    and isinstance(term[1], (str, int)) and not isinstance(term[1], bool)):
                raise err("expected a [q-label, coefficient] pair", tp)
            if term[0] not in qlabels:
                raise err(f"unknown q label {term[0]!r}", tp)
            try:
                val = parse_poly(str(term[1]), params)
            except (PolyError, ZeroDivisionError) as exc:
                raise err(str(exc), tp) from None
            extra = set(val.variables()) - set(params)
            if extra:
                raise err(f"undeclared parameter(s) {sorted(extra)}", tp)
            if alg.scalars == "rational" and any(isinstance(x, GaussianRational) and x.im != 0
                                                 for x in val.terms.values()):
                raise err("non-rational coefficient for a rational base", tp)
            r = qlabels.index(term[0])
            sigma[r, c] = sigma[r, c] + val
    return Modification(p, sigma, params, data.get("name", ""))


def sigma_to_data(m: Modification, base=None):
    """σ-file dict; ``base`` defaults to the inline description of ``p``."""
    from .io import algebra_to_data
    entries = []
    for c, lab in enumerate(m.g_labels):
        to = [[m.q_labels[r], str(m.sigma[r, c]).replace(" ", "")]
              for r in range(len(m.q_labels)) if m.sigma[r, c] != 0]
        if to:
            entries.append({"from": lab, "to": to})
    data = {"name": m.name,
            "base": base if base is not None else algebra_to_data(m.algebra),
            "splitting": m.q_labels,
            "sigma": entries}
    if m.parameters:
        data["parameters"] = list(m.parameters)
    return data
