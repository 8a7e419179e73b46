"""Exponential-coordinate machinery for explicit contact maps.

* :func:`bch` — ``log(exp x · exp y)`` in a nilpotent algebra via the Dynkin
  series, truncated at the nilpotency step (the truncation is exact).
* :func:`left_translation_differential` — ``dL_γ v = Σ B⁺ₙ/n! ad_γⁿ v``.
  The Bernoulli numbers use the convention ``B₁ = +1/2``, so the first terms
  read ``v + ½[γ,v] + 1/12[γ,[γ,v]]``.  The more common ``B₁ = −1/2``
  convention gives the right-translation formula instead.
* :func:`twisted_velocity`, :func:`integrate_development`, :func:`psi_to_G` —
  the development ODE ``γ' = dL_γ(exp(tA) x)``, ``γ(0) = 0``, solved exactly
  layer by layer, and its time-one map.
* :class:`MatrixModel` and :func:`ul_coset_project` — factor ``m = g·q`` with
  ``g`` unit upper triangular and ``q`` lower triangular, which realizes
  ``(sQ) ∩ G`` in ``SL(3)`` models.

Polynomial vectors use the variable ``t`` and coordinates ``x1, ..., xn``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from .algebra import GradedLieAlgebra, nilpotency_step, stratification_step
from .io import description_from_data
from .linalg import as_matrix, det, eye, zeros
from .poly import MultiPoly
from .scalars import as_scalar, parse_scalar

__all__ = [
    "ContactError",
    "NoIntersection",
    "PolyVector",
    "bernoulli_plus",
    "dl_coefficients",
    "dynkin_coefficients",
    "bch",
    "left_translation_differential",
    "coordinate_symbols",
    "development_action",
    "twisted_velocity",
    "development_rhs",
    "integrate_development",
    "psi_to_G",
    "jacobian",
    "check_unit_jacobian",
    "unipotent_exp",
    "unipotent_log",
    "H_chart",
    "R_chart",
    "MatrixModel",
    "ul_coset_project",
]

FLOAT_TOL = 1e-12


class ContactError(ValueError):
    """A precondition of the contact-map machinery is violated."""


class NoIntersection(Exception):
    """The coset ``mQ`` does not meet the unipotent chart (a required minor vanishes)."""


# ---------------------------------------------------------------------------
# polynomial vectors

@dataclass
class PolyVector:
    """Coordinates of an element of ``alg`` as polynomials."""

    alg: GradedLieAlgebra
    entries: np.ndarray
    vars: tuple = field(default=())

    def __post_init__(self):
        ents = np.empty(self.alg.dim, dtype=object)
        if len(self.entries) != self.alg.dim:
            raise ContactError(f"vector of length {len(self.entries)} for an algebra of dimension {self.alg.dim}")
        for k, x in enumerate(self.entries):
            ents[k] = (x if isinstance(x, MultiPoly) else MultiPoly.const(x)).with_vars(self.vars)
        self.entries = ents

    def __getitem__(self, k):
        return self.entries[k]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, PolyVector):
            other = other.entries
        return len(other) == len(self.entries) and all(a == b for a, b in zip(self.entries, other))

    def map(self, f) -> "PolyVector":
        return PolyVector(self.alg, np.array([f(x) for x in self.entries], dtype=object), self.vars)

    def subs(self, bindings) -> "PolyVector":
        vars = tuple(v for v in self.vars if v not in bindings)
        return PolyVector(self.alg, np.array([x.subs(bindings) for x in self.entries], dtype=object), vars)

    def lines(self):
        """``label: polynomial`` lines in basis order."""
        return [f"{lab}: {x}" for lab, x in zip(self.alg.labels, self.entries)]

    def to_data(self):
        return {lab: str(x) for lab, x in zip(self.alg.labels, self.entries)}


def coordinate_symbols(n, prefix="x", extra=("t",)):
    """Variables ``extra + (x1, ..., xn)`` and the coordinate polynomials ``x1..xn`` over them."""
    names = tuple(f"{prefix}{k + 1}" for k in range(n))
    decl = tuple(extra) + names
    return decl, [MultiPoly.var(v, decl) for v in names]


# ---------------------------------------------------------------------------
# series coefficients

@lru_cache(maxsize=None)
def bernoulli_plus(n: int) -> Fraction:
    """Bernoulli number with ``B₁ = +1/2``: 1, 1/2, 1/6, 0, -1/30, 0, 1/42, ..."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    # B⁺ₙ = 1 - Σ_{k<n} C(n,k) B⁺ₖ / (n - k + 1)
    return Fraction(1) - sum(Fraction(math.comb(n, k)) * bernoulli_plus(k) / (n - k + 1) for k in range(n))


def dl_coefficients(step: int):
    """Coefficients ``B⁺ₙ/n!`` for ``n < step``: 1, 1/2, 1/12, 0, -1/720, ..."""
    return [bernoulli_plus(n) / math.factorial(n) for n in range(step)]


@lru_cache(maxsize=None)
def dynkin_coefficients(max_len: int):
    """``{word: coefficient}`` of ``log(e^X e^Y) = Σ c_w [w]`` with ``[w]`` right-nested.

    Words are strings over ``"XY"`` of length at most ``max_len``; the
    Dynkin form ``Σ (-1)^{n-1}/n · 1/(|w| Π rᵢ! sᵢ!)`` is accumulated over
    all block decompositions ``X^{r1}Y^{s1}…X^{rn}Y^{sn}``.
    """
    coeffs = {}

    def blocks(remaining):
        for r in range(remaining + 1):
            for s in range(remaining + 1 - r):
                if r + s:
                    yield r, s

    def rec(word, n, weight, remaining):
        if n:
            c = Fraction((-1) ** (n - 1), n) * weight / len(word)
            coeffs[word] = coeffs.get(word, Fraction(0)) + c
        if remaining == 0:
            return
        for r, s in blocks(remaining):
            rec(word + "X" * r + "Y" * s, n + 1,
                weight / (math.factorial(r) * math.factorial(s)), remaining - r - s)

    rec("", 0, Fraction(1), max_len)
    return {w: c for w, c in coeffs.items() if c != 0}


def _require_step(alg):
    s = nilpotency_step(alg)
    if s is None:
        raise ContactError(f"algebra {alg.name or ''} is not nilpotent".replace("  ", " "))
    return s


def _as_vec(x, n):
    v = np.asarray(x, dtype=object)
    if v.shape != (n,):
        raise ContactError(f"expected a vector of length {n}")
    return v


def bch(alg, x, y, step=None):
    """``log(exp x · exp y)`` in a nilpotent algebra; entries may be scalars or polynomials."""
    s = step or _require_step(alg)
    x, y = _as_vec(x, alg.dim), _as_vec(y, alg.dim)
    letters = {"X": x, "Y": y}
    nested = {}

    def value(word):
        if word not in nested:
            if len(word) == 1:
                nested[word] = letters[word]
            else:
                nested[word] = alg.bracket(letters[word[0]], value(word[1:]))
        return nested[word]

    total = None
    for word, c in sorted(dynkin_coefficients(s).items(), key=lambda wc: (len(wc[0]), wc[0])):
        # right-nested brackets ending in XX or YY... vanish only when the last two letters agree
        if len(word) >= 2 and word[-1] == word[-2]:
            continue
        term = value(word) * c
        total = term if total is None else total + term
    return total


def left_translation_differential(alg, gamma, v, step=None):
    """``dL_γ v = v + ½[γ,v] + 1/12[γ,[γ,v]] + 0 − 1/720 ad_γ⁴ v + …`` (exact, stops at the step)."""
    s = step or _require_step(alg)
    g = gamma.entries if isinstance(gamma, PolyVector) else _as_vec(gamma, alg.dim)
    w = v.entries if isinstance(v, PolyVector) else _as_vec(v, alg.dim)
    total = w.copy()
    term = w
    for n, c in enumerate(dl_coefficients(s)):
        if n == 0:
            continue
        term = alg.bracket(g, term)
        if c != 0:
            total = total + term * c
    if isinstance(gamma, PolyVector) or isinstance(v, PolyVector):
        vars = gamma.vars if isinstance(gamma, PolyVector) else v.vars
        return PolyVector(alg, total, vars)
    return total


# ---------------------------------------------------------------------------
# development ODE

def _nilpotent_exp(A, t):
    """``exp(t A)`` for a nilpotent object matrix, as a finite sum; raises otherwise."""
    n = A.shape[0]
    power = np.array([[MultiPoly.const(1 if i == j else 0) for j in range(n)] for i in range(n)], dtype=object)
    out = power.copy()
    tk = MultiPoly.const(1)
    for k in range(1, n + 1):
        power = power.dot(A)
        if all(x == 0 for x in power.flat):
            return out
        tk = tk * t
        out = out + power * (tk * Fraction(1, math.factorial(k)))
    if all(x == 0 for x in power.dot(A).flat):
        return out
    raise ContactError("action matrix is not nilpotent; no exact polynomial exponential")


def development_action(m, bindings=None, x=None):
    """Action matrix ``Σ xᵢ ad(σ eᵢ)|_g`` of a modification whose q is a degree-0 derivation space.

    ``x`` defaults to the coordinate polynomials over ``(t, x1..xn)``.
    """
    mm = m.specialize(bindings or {}) if m.parameters or bindings else m
    p = mm.p
    if any(p.algebra.degrees[k] != 0 for k in p.q_indices):
        raise ContactError("development formula needs q concentrated in degree 0")
    gi = list(p.g_indices)
    n = len(gi)
    if x is None:
        _decl, x = coordinate_symbols(n)
    sig = mm.sigma_scalars()
    A = np.empty((n, n), dtype=object)
    A.fill(MultiPoly.const(0))
    for c in range(n):
        for r, k in enumerate(p.q_indices):
            if sig[r, c] == 0:
                continue
            ad = p.algebra.ad_basis(k)
            for i, gi_i in enumerate(gi):
                for j, gi_j in enumerate(gi):
                    if ad[gi_i, gi_j] != 0:
                        A[i, j] = A[i, j] + x[c] * (sig[r, c] * ad[gi_i, gi_j])
    return A


def twisted_velocity(alg, action, x, t="t"):
    """``v(t) = exp(t·A)(Σ xᵢeᵢ)``, polynomial in ``t``; ``A`` must be nilpotent."""
    n = alg.dim
    A = np.asarray(action, dtype=object)
    if A.shape != (n, n):
        raise ContactError(f"action must be {n}x{n}")
    xs = [x_ if isinstance(x_, MultiPoly) else MultiPoly.const(as_scalar(x_)) for x_ in x]
    decl = _decl_of([*xs, *A.flat], t)
    T = MultiPoly.var(t, decl)
    A = np.array([[a if isinstance(a, MultiPoly) else MultiPoly.const(as_scalar(a)) for a in row] for row in A],
                 dtype=object)
    E = _nilpotent_exp(A, T)
    return PolyVector(alg, E.dot(np.array(xs, dtype=object)), decl)


def _decl_of(polys, t="t"):
    names = [t]
    for p in polys:
        if isinstance(p, MultiPoly):
            for v in p.vars:
                if v not in names:
                    names.append(v)
    return tuple(names)


def _check_graded(alg):
    if alg.degrees is None or stratification_step(alg) is None:
        raise ContactError("development integration needs a stratified algebra")


def development_rhs(alg, action, x, gamma_prefix="gamma"):
    """Right-hand side ``dL_Γ v(t)`` with symbolic unknowns ``gamma1..gamman`` for ``Γ``."""
    _check_graded(alg)
    v = twisted_velocity(alg, action, x)
    decl = v.vars + tuple(f"{gamma_prefix}{k + 1}" for k in range(alg.dim))
    G = np.array([MultiPoly.var(f"{gamma_prefix}{k + 1}", decl) for k in range(alg.dim)], dtype=object)
    V = np.array([e.with_vars(decl) for e in v.entries], dtype=object)
    return PolyVector(alg, left_translation_differential(alg, G, V), decl)


def integrate_development(alg, action, x, t="t", check=True):
    """Exact polynomial solution of ``γ' = dL_γ(exp(tA) x)``, ``γ(0) = 0``.

    Layers are integrated from degree -1 downwards; the component of
    ``dL_γ v`` in a layer only involves γ on strictly shallower layers, so
    each step is a plain antiderivative in ``t``.
    """
    _check_graded(alg)
    step = _require_step(alg)
    v = twisted_velocity(alg, action, x, t)
    decl = v.vars
    gamma = np.array([MultiPoly({}, decl) for _ in range(alg.dim)], dtype=object)
    for d in sorted(alg.degree_set(), reverse=True):
        rhs = left_translation_differential(alg, gamma, v.entries, step)
        for k in alg.layer_indices(d):
            gamma[k] = rhs[k].with_vars(decl).integrate(t)
    result = PolyVector(alg, gamma, decl)
    if check:
        rhs = left_translation_differential(alg, gamma, v.entries, step)
        bad = [alg.labels[k] for k in range(alg.dim) if gamma[k].diff(t) != rhs[k]]
        if bad:
            raise ContactError(f"development ODE residual nonzero at {bad}")
    return result


def psi_to_G(alg, action, x, t="t", check_jacobian=True):
    """Time-one map ``Ψ(x) = γ(1)``; optionally asserts the unit-Jacobian structure."""
    gamma = integrate_development(alg, action, x, t)
    psi = gamma.subs({t: 1})
    if check_jacobian:
        xvars = [v for v in psi.vars if v != t]
        if all(isinstance(e, MultiPoly) and e.degree() == 1 and len(e.terms) == 1 for e in x):
            coords = [next(iter(e.terms))[0][0] for e in x]
            if set(coords) <= set(xvars):
                check_unit_jacobian(psi, coords)
    return psi


def jacobian(vec, coords):
    J = np.empty((len(vec), len(coords)), dtype=object)
    for i, e in enumerate(vec):
        for j, c in enumerate(coords):
            J[i, j] = e.diff(c)
    return J


def _poly_det(M):
    n = M.shape[0]
    total = MultiPoly.const(0)
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = MultiPoly.const(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * M[i, j]
            if term == 0:
                break
        total = total + term
    return total


def check_unit_jacobian(psi: PolyVector, coords):
    """Jacobian of ``Ψ`` in ``coords`` is block lower triangular by layer with determinant-1 diagonal blocks."""
    alg = psi.alg
    J = jacobian(psi.entries, coords)
    degs = alg.degrees
    for i in range(alg.dim):
        for j in range(alg.dim):
            if degs[j] < degs[i] and J[i, j] != 0:
                raise ContactError(f"Jacobian entry ({alg.labels[i]}, {coords[j]}) breaks the layer structure")
    for d in alg.degree_set():
        idx = alg.layer_indices(d)
        block = J[np.ix_(idx, idx)]
        if _poly_det(block) != 1:
            raise ContactError(f"diagonal Jacobian block of degree {d} has determinant {_poly_det(block)}")
    return True


# ---------------------------------------------------------------------------
# matrix models

def unipotent_exp(N):
    """``exp N`` for a nilpotent matrix, exactly."""
    N = as_matrix(N)
    n = N.shape[0]
    out, power = eye(n), eye(n)
    for k in range(1, n + 1):
        power = power.dot(N)
        out = out + power * Fraction(1, math.factorial(k))
    if any(x != 0 for x in power.dot(N).flat):
        raise ContactError("matrix is not nilpotent")
    return out


def unipotent_log(U):
    """``log U`` for a unipotent matrix, exactly."""
    U = as_matrix(U)
    n = U.shape[0]
    N = U - eye(n)
    out, power = zeros(n, n), eye(n)
    for k in range(1, n + 1):
        power = power.dot(N)
        out = out + power * Fraction((-1) ** (k + 1), k)
    if any(x != 0 for x in power.dot(N).flat):
        raise ContactError("matrix is not unipotent")
    return out


def H_chart(x1, x2, x3):
    """Heisenberg chart ``[[1, x1, x3], [0, 1, x2], [0, 0, 1]]``."""
    return np.array([[1, x1, x3], [0, 1, x2], [0, 0, 1]], dtype=object)


def R_chart(y1, y2, y3):
    """Rigid-motion chart ``[[cos y1, sin y1, y3], [-sin y1, cos y1, y2], [0, 0, 1]]`` (floating)."""
    c, s = math.cos(y1), math.sin(y1)
    return np.array([[c, s, float(y3)], [-s, c, float(y2)], [0.0, 0.0, 1.0]], dtype=object)


CHARTS = {"H": H_chart, "R": R_chart}


@dataclass
class MatrixModel:
    """Matrix realization of an algebra with named group charts."""

    name: str
    size: int
    algebra: GradedLieAlgebra
    generators: dict
    charts: dict

    def __post_init__(self):
        labels = self.algebra.labels
        if list(self.generators) != list(labels):
            raise ContactError(f"generators {list(self.generators)} must match the algebra basis {labels}")
        mats = [self.generators[lab] for lab in labels]
        for m in mats:
            if m.shape != (self.size, self.size):
                raise ContactError("generator has the wrong size")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                comm = mats[i].dot(mats[j]) - mats[j].dot(mats[i])
                want = zeros(self.size, self.size)
                for k, c in self.algebra.bracket_basis(i, j).items():
                    want = want + mats[k] * c
                if any(a != b for a, b in zip(comm.flat, want.flat)):
                    raise ContactError(f"generators violate [{labels[i]},{labels[j]}]")
        for c in self.charts:
            if c not in CHARTS:
                raise ContactError(f"unknown chart {c!r}")

    @classmethod
    def from_data(cls, data):
        alg, _ = description_from_data(data["algebra"], allow_splitting=False)
        gens = {}
        for g in data["generators"]:
            gens[g["name"]] = as_matrix([[parse_scalar(str(x)) for x in row] for row in g["matrix"]])
        return cls(data["name"], int(data["size"]), alg, gens, dict(data.get("charts", {})))

    def chart(self, name, *coords):
        if name not in self.charts:
            raise ContactError(f"model has no chart {name!r}")
        return CHARTS[name](*coords)

    def project(self, m, tol=FLOAT_TOL):
        return ul_coset_project(self, m, tol)


def _is_float_matrix(m):
    return any(isinstance(x, (float, np.floating)) for x in m.flat)


def ul_coset_project(model, m, tol=FLOAT_TOL):
    """Factor ``m = g·q`` with ``g`` unit upper triangular and ``q`` lower triangular.

    Reversing rows and columns (``J m J``) turns this into a Doolittle LU
    factorization without pivoting; it exists iff every trailing principal
    minor of ``m`` is nonzero.  Exact for rational entries; for floating
    entries a pivot below ``tol`` (relative to the matrix scale) counts as
    zero.  Raises :class:`NoIntersection` when the factorization fails and
    :class:`ContactError` for a singular ``m``.  ``model`` may be ``None``.
    """
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ContactError("matrix must be square")
    if model is not None and n != model.size:
        raise ContactError(f"matrix size {n} does not match the model size {model.size}")
    floating = _is_float_matrix(m)
    if floating:
        mf = np.array(m, dtype=float)
        scale = max(1.0, float(np.max(np.abs(mf))))
        if abs(np.linalg.det(mf)) <= tol * scale ** n:
            raise ContactError("matrix is singular")
        a = mf[::-1, ::-1].copy()
    else:
        mm = as_matrix(m)
        if det(mm) == 0:
            raise ContactError("matrix is singular")
        a = mm[::-1, ::-1].copy()
        scale = 1
    L = np.eye(n) if floating else eye(n)
    U = np.zeros((n, n)) if floating else zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            U[i, j] = a[i, j] - sum((L[i, k] * U[k, j] for k in range(i)), 0.0 if floating else Fraction(0))
        piv = U[i, i]
        if (abs(piv) <= tol * scale) if floating else piv == 0:
            raise NoIntersection(f"trailing principal minor of order {i + 1} vanishes")
        for j in range(i + 1, n):
            L[j, i] = (a[j, i] - sum((L[j, k] * U[k, i] for k in range(i)), 0.0 if floating else Fraction(0))) / piv
    g = L[::-1, ::-1]
    q = U[::-1, ::-1]
    if not floating:
        g, q = as_matrix(g), as_matrix(q)
    return g, q
