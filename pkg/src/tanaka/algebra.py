"""Finite-dimensional Lie algebras given by exact structure constants.

:class:`GradedLieAlgebra` stores ``[e_i, e_j]`` for ``i < j`` only; the other
orientation is implied.  An optional integer degree per basis vector turns
it into a graded algebra (negative degrees for the stratified part,
nonnegative ones for prolongation layers).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from .linalg import Subspace, is_zero, solve_affine, zeros
from .scalars import as_scalar

__all__ = [
    "LieAlgebraError",
    "Violation",
    "GradedLieAlgebra",
    "check_axioms",
    "check_structure_constants",
    "bracket_span",
    "is_stratified",
    "stratification_step",
    "lower_central_series",
    "derived_series",
    "nilpotency_step",
    "is_nilpotent",
    "is_solvable",
    "killing_form",
    "grading_derivation",
    "is_derivation",
    "ideal_generated",
    "quotient",
    "from_matrices",
    "abelian",
    "heisenberg",
    "free_nilpotent",
]


class LieAlgebraError(ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True)
class Violation:
    kind: str          # "antisymmetry", "jacobi", "grading", "index"
    indices: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at {self.indices}: {self.detail}" if self.detail else f"{self.kind} at {self.indices}"


def _as_coeff_dict(value, n):
    if isinstance(value, dict):
        return {int(k): as_scalar(c) for k, c in value.items() if c != 0}
    vec = list(value)
    if len(vec) != n:
        raise LieAlgebraError(f"bracket vector of length {len(vec)} in dimension {n}")
    return {k: as_scalar(c) for k, c in enumerate(vec) if c != 0}


def check_structure_constants(n, brackets, degrees=None):
    """Brute-force axiom check of a raw bracket table.

    ``brackets`` maps ``(i, j)`` to the coordinates of ``[e_i, e_j]`` (a
    dict ``{k: c}`` or a length-``n`` sequence).  Both orientations may be
    present; missing pairs are completed antisymmetrically.  Returns the list
    of :class:`Violation` found (empty for a valid Lie algebra).
    """
    out = []
    raw = {}
    for (i, j), v in brackets.items():
        if not (0 <= i < n and 0 <= j < n):
            out.append(Violation("index", (i, j), "basis index out of range"))
            continue
        coeffs = _as_coeff_dict(v, n)
        bad = [k for k in coeffs if not 0 <= k < n]
        if bad:
            out.append(Violation("index", (i, j, bad[0]), "basis index out of range"))
            continue
        raw[(i, j)] = coeffs
    for (i, j), v in raw.items():
        if i == j and v:
            for k in sorted(v):
                out.append(Violation("antisymmetry", (i, i, k), f"[e{i},e{i}] has coefficient {v[k]}"))
            continue
        w = raw.get((j, i))
        if w is not None and i < j:
            for k in sorted(set(v) | set(w)):
                if v.get(k, 0) + w.get(k, 0) != 0:
                    out.append(Violation("antisymmetry", (i, j, k),
                                         f"c_ij^k={v.get(k, 0)}, c_ji^k={w.get(k, 0)}"))
    if out:
        return out
    table = {}
    for (i, j), v in raw.items():
        if i < j:
            table[(i, j)] = v
        elif i > j and (j, i) not in raw:
            table[(j, i)] = {k: -c for k, c in v.items()}
    if degrees is not None:
        for (i, j), v in table.items():
            for k in v:
                if degrees[k] != degrees[i] + degrees[j]:
                    out.append(Violation("grading", (i, j, k),
                                         f"deg {degrees[i]}+{degrees[j]} -> component of degree {degrees[k]}"))
    out.extend(_jacobi_violations(n, table))
    return out


def _br_basis(table, i, j):
    if i < j:
        return table.get((i, j), {})
    if i > j:
        return {k: -c for k, c in table.get((j, i), {}).items()}
    return {}


def _br_vec_basis(table, v, k):
    out = {}
    for i, c in v.items():
        for m, d in _br_basis(table, i, k).items():
            out[m] = out.get(m, 0) + c * d
    return out


def _jacobi_violations(n, table):
    out = []
    for i, j, k in combinations(range(n), 3):
        acc = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, x in _br_vec_basis(table, _br_basis(table, a, b), c).items():
                acc[m] = acc.get(m, 0) + x
        bad = {m: x for m, x in acc.items() if x != 0}
        if bad:
            out.append(Violation("jacobi", (i, j, k), f"residual {bad}"))
    return out


class GradedLieAlgebra:
    """Lie algebra with basis labels, sparse structure constants and optional degrees.

    Construction validates antisymmetry, Jacobi and (when degrees are
    given) grading compatibility, raising :class:`LieAlgebraError` with the
    full violation report otherwise.
    """

    def __init__(self, labels, brackets=None, degrees=None, name="", scalars="rational", validate=True):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise LieAlgebraError("duplicate basis labels")
        self.degrees = None if degrees is None else tuple(int(d) for d in degrees)
        if self.degrees is not None and len(self.degrees) != n:
            raise LieAlgebraError("degree map length does not match dimension")
        self.name = name
        self.scalars = scalars
        brackets = dict(brackets or {})
        if validate:
            bad = check_structure_constants(n, brackets, self.degrees)
            if bad:
                raise LieAlgebraError(f"invalid structure constants ({len(bad)} violations): {bad[0]}", bad)
        table = {}
        for (i, j), v in brackets.items():
            v = _as_coeff_dict(v, n)
            if i < j:
                table[(i, j)] = v
            elif i > j and (j, i) not in brackets:
                table[(j, i)] = {k: -c for k, c in v.items()}
        self._table = {key: v for key, v in table.items() if v}

    # basics ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.dim

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown basis label {label!r}") from None

    def basis_vector(self, i):
        if isinstance(i, str):
            i = self.index(i)
        v = zeros(self.dim)
        v[i] = Fraction(1)
        return v

    def vector(self, **coeffs):
        """``alg.vector(e1=1, e3=Fraction(1, 2))``."""
        v = zeros(self.dim)
        for k, c in coeffs.items():
            v[self.index(k)] = as_scalar(c) if not hasattr(c, "terms") else c
        return v

    def structure_table(self):
        """Copy of the stored ``{(i, j): {k: c}}`` table (``i < j``)."""
        return {key: dict(v) for key, v in self._table.items()}

    def bracket_basis(self, i, j):
        return _br_basis(self._table, i, j)

    def bracket(self, x, y):
        """Bilinear bracket of coordinate vectors; entries may be scalars or polynomials."""
        n = self.dim
        if len(x) != n or len(y) != n:
            raise LieAlgebraError(f"bracket of vectors of length {len(x)}, {len(y)} in dimension {n}")
        out = np.empty(n, dtype=object)
        out.fill(Fraction(0))
        for (i, j), v in self._table.items():
            xi, xj, yi, yj = x[i], x[j], y[i], y[j]
            if (xi == 0 or yj == 0) and (xj == 0 or yi == 0):
                continue
            c = xi * yj - xj * yi
            if c == 0:
                continue
            for k, s in v.items():
                out[k] = out[k] + s * c
        return out

    @cached_property
    def _ad(self):
        mats = []
        for i in range(self.dim):
            m = zeros(self.dim, self.dim)
            for j in range(self.dim):
                for k, c in _br_basis(self._table, i, j).items():
                    m[k, j] = c
            mats.append(m)
        return mats

    def ad_basis(self, i):
        """Matrix of ``ad(e_i)`` (columns are images of basis vectors)."""
        return self._ad[i].copy()

    def ad(self, x):
        m = zeros(self.dim, self.dim)
        for i, c in enumerate(x):
            if c != 0:
                m = m + c * self._ad[i]
        return m

    def structure_constants(self):
        """Dense array ``c[i, j, k]`` with ``[e_i, e_j] = sum_k c[i, j, k] e_k``."""
        c = zeros(self.dim, self.dim, self.dim)
        for (i, j), v in self._table.items():
            for k, s in v.items():
                c[i, j, k] = s
                c[j, i, k] = -s
        return c

    # grading -----------------------------------------------------------
    def _require_degrees(self):
        if self.degrees is None:
            raise LieAlgebraError("operation requires a degree map")

    def degree_set(self):
        self._require_degrees()
        return sorted(set(self.degrees))

    def layer_indices(self, d):
        self._require_degrees()
        return [i for i, e in enumerate(self.degrees) if e == d]

    def layer(self, d) -> Subspace:
        return Subspace.coordinate(self.dim, self.layer_indices(d))

    def negative_indices(self):
        self._require_degrees()
        return [i for i, e in enumerate(self.degrees) if e < 0]

    # transformations -----------------------------------------------------
    def change_basis(self, P, labels=None, name=None, degrees=None):
        """Algebra in the basis whose i-th vector is column i of ``P``."""
        from .linalg import inverse
        P = np.asarray(P, dtype=object)
        Pinv = inverse(P)
        n = self.dim
        cols = [P[:, i] for i in range(n)]
        table = {}
        for i in range(n):
            for j in range(i + 1, n):
                w = Pinv @ self.bracket(cols[i], cols[j])
                d = {k: c for k, c in enumerate(w) if c != 0}
                if d:
                    table[(i, j)] = d
        return GradedLieAlgebra(labels or self.labels, table, degrees, name or self.name, self.scalars)

    def __eq__(self, other):
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return (self.labels == other.labels and self.degrees == other.degrees
                and self._table == other._table)

    def __hash__(self):
        return hash((self.labels, self.degrees))

    def __repr__(self):
        nm = f"{self.name!r}, " if self.name else ""
        return f"GradedLieAlgebra({nm}dim={self.dim})"

    def bracket_lines(self, orientation=None, descending=False):
        """Human-readable ``[a,b] = ...`` lines for nonzero brackets.

        Pairs ``(i, j)`` (``i < j``) listed in ``orientation`` are printed as
        ``[b,a]``; ``descending`` lists result terms from the highest index.
        """
        from .scalars import format_scalar
        lines = []
        for (i, j) in sorted(self._table):
            terms = []
            sign = 1
            if orientation and (i, j) in orientation:
                i, j, sign = j, i, -1
            vec = self._table[(min(i, j), max(i, j))]
            for k in sorted(vec, reverse=descending):
                c = sign * vec[k]
                cs = format_scalar(c)
                if cs == "1":
                    terms.append(f"+ {self.labels[k]}")
                elif cs == "-1":
                    terms.append(f"- {self.labels[k]}")
                elif cs.startswith("-") and "i" not in cs:
                    terms.append(f"- {cs[1:]}*{self.labels[k]}")
                elif "i" in cs:
                    terms.append(f"+ ({cs})*{self.labels[k]}")
                else:
                    terms.append(f"+ {cs}*{self.labels[k]}")
            rhs = " ".join(terms)
            rhs = rhs[2:] if rhs.startswith("+ ") else "-" + rhs[2:]
            lines.append(f"[{self.labels[i]},{self.labels[j]}] = {rhs}")
        return lines


def check_axioms(alg):
    """Violation list for an algebra or a raw ``(n, brackets[, degrees])`` tuple; empty means valid."""
    if isinstance(alg, GradedLieAlgebra):
        return check_structure_constants(alg.dim, alg.structure_table(), alg.degrees)
    return check_structure_constants(*alg)


def is_derivation(alg, M) -> bool:
    M = np.asarray(M, dtype=object)
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = M @ alg.bracket(alg.basis_vector(i), alg.basis_vector(j))
            rhs = alg.bracket(M[:, i], alg.basis_vector(j)) + alg.bracket(alg.basis_vector(i), M[:, j])
            if not is_zero(lhs - rhs):
                return False
    return True


# ---------------------------------------------------------------------------
# series and structure

def bracket_span(alg, U: Subspace, W: Subspace) -> Subspace:
    """Span of ``[u, w]`` over basis vectors of U and W."""
    vecs = [alg.bracket(u, w) for u in U.basis for w in W.basis]
    return Subspace(alg.dim, vecs)


def stratification_step(alg):
    """Step ``s`` if the degree map is a stratification ``-s..-1``, else ``None``."""
    alg._require_degrees()
    degs = sorted(set(alg.degrees))
    if not degs:
        return None
    s = -degs[0]
    if degs != list(range(-s, 0)):
        return None
    if check_structure_constants(alg.dim, alg.structure_table(), alg.degrees):
        return None
    first = alg.layer(-1)
    for j in range(1, s):
        if bracket_span(alg, first, alg.layer(-j)) != alg.layer(-j - 1):
            return None
    return s


def is_stratified(alg) -> bool:
    return stratification_step(alg) is not None


def lower_central_series(alg, max_terms=None):
    """``[g, g^(k)]`` chain until it stabilizes; starts with g itself."""
    full = Subspace.full(alg.dim)
    chain = [full]
    while True:
        nxt = bracket_span(alg, full, chain[-1])
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)
        if max_terms and len(chain) >= max_terms:
            return chain


def derived_series(alg):
    chain = [Subspace.full(alg.dim)]
    while True:
        nxt = bracket_span(alg, chain[-1], chain[-1])
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def nilpotency_step(alg):
    """Smallest s with vanishing (s+1)-fold brackets, or ``None`` if not nilpotent."""
    chain = lower_central_series(alg)
    if chain[-1].dim != 0:
        return None
    return len(chain) - 1


def is_nilpotent(alg) -> bool:
    return nilpotency_step(alg) is not None


def is_solvable(alg) -> bool:
    return derived_series(alg)[-1].dim == 0


def killing_form(alg):
    n = alg.dim
    ads = [alg.ad_basis(i) for i in range(n)]
    K = zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            t = np.sum(ads[i] * ads[j].T)
            K[i, j] = K[j, i] = t if t != 0 else Fraction(0)
    return K


def grading_derivation(alg):
    """Diagonal map acting by ``j`` on vectors of degree ``-j``.

    This is the convention under which ``exp(tD)`` expands negative layers;
    the dilation ``lambda**deg`` used by :func:`tanaka.prolongation.dilation`
    is its inverse direction, ``dilation(e**t) = exp(-tD)``.
    """
    alg._require_degrees()
    D = zeros(alg.dim, alg.dim)
    for i, d in enumerate(alg.degrees):
        D[i, i] = Fraction(-d)
    return D


def ideal_generated(alg, vectors) -> Subspace:
    I = Subspace(alg.dim, vectors)
    full = Subspace.full(alg.dim)
    while True:
        nxt = I + bracket_span(alg, full, I)
        if nxt == I:
            return I
        I = nxt


def quotient(alg, ideal: Subspace, name=""):
    """Quotient by an ideal, on the non-pivot coordinates of its echelon basis."""
    full = Subspace.full(alg.dim)
    if not ideal.contains_subspace(bracket_span(alg, full, ideal)):
        raise LieAlgebraError("subspace is not an ideal")
    keep = [i for i in range(alg.dim) if i not in ideal.pivots]
    pos = {old: new for new, old in enumerate(keep)}
    table = {}
    for a, b in combinations(range(len(keep)), 2):
        w = ideal.reduce(alg.bracket(alg.basis_vector(keep[a]), alg.basis_vector(keep[b])))
        d = {pos[k]: c for k, c in enumerate(w) if c != 0}
        if d:
            table[(a, b)] = d
    degrees = None if alg.degrees is None else [alg.degrees[i] for i in keep]
    return GradedLieAlgebra([alg.labels[i] for i in keep], table, degrees, name or alg.name, alg.scalars)


def from_matrices(labels, mats, degrees=None, name="", scalars="rational"):
    """Structure constants of the span of ``mats`` under the commutator."""
    mats = [np.asarray(m, dtype=object) for m in mats]
    n = len(mats)
    B = np.array([m.flatten() for m in mats], dtype=object).T
    table = {}
    for i, j in combinations(range(n), 2):
        c = mats[i] @ mats[j] - mats[j] @ mats[i]
        sol = solve_affine(B, c.flatten())
        if sol is None:
            raise LieAlgebraError(f"commutator of {labels[i]} and {labels[j]} leaves the span")
        if sol.homogeneous.dim:
            raise LieAlgebraError("matrices are linearly dependent")
        d = {k: x for k, x in enumerate(sol.particular) if x != 0}
        if d:
            table[(i, j)] = d
    return GradedLieAlgebra(labels, table, degrees, name, scalars)


# ---------------------------------------------------------------------------
# small constructors

def abelian(n, degree=-1, name=""):
    return GradedLieAlgebra([f"e{i + 1}" for i in range(n)], {}, [degree] * n, name or f"abelian{n}")


def heisenberg(name="heisenberg3"):
    """Three-dimensional Heisenberg algebra with ``[e1, e2] = e3``."""
    return GradedLieAlgebra(["e1", "e2", "e3"], {(0, 1): {2: 1}}, [-1, -1, -2], name)


def _word_commutator(a, b, step):
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) > step:
                continue
            for w, s in ((u + v, 1), (v + u, -1)):
                c = out.get(w, 0) + s * x * y
                if c == 0:
                    out.pop(w, None)
                else:
                    out[w] = c
    return out


def free_nilpotent(rank, step, name=""):
    """Free nilpotent Lie algebra realized by commutators in the truncated tensor algebra."""
    gens = [{(i,): Fraction(1)} for i in range(rank)]
    layers = [gens]
    for k in range(2, step + 1):
        cand = [_word_commutator(g, b, step) for g in gens for b in layers[-1]]
        allwords = sorted({w for c in cand for w in c})
        idx = {w: t for t, w in enumerate(allwords)}
        chosen, span = [], Subspace(len(allwords))
        for c in cand:
            v = zeros(len(allwords))
            for w, x in c.items():
                v[idx[w]] = x
            if not span.contains(v):
                span = span + Subspace(len(allwords), [v])
                chosen.append(c)
        if not chosen:
            break
        layers.append(chosen)
    elems, degrees = [], []
    for k, layer in enumerate(layers):
        elems.extend(layer)
        degrees.extend([-(k + 1)] * len(layer))
    n = len(elems)
    by_len = {}
    for t, e in enumerate(elems):
        by_len.setdefault(-degrees[t], []).append(t)
    table = {}
    for i, j in combinations(range(n), 2):
        c = _word_commutator(elems[i], elems[j], step)
        if not c:
            continue
        L = -degrees[i] - degrees[j]
        cols = by_len[L]
        words = sorted({w for t in cols for w in elems[t]} | set(c))
        widx = {w: r for r, w in enumerate(words)}
        A = zeros(len(words), len(cols))
        for col, t in enumerate(cols):
            for w, x in elems[t].items():
                A[widx[w], col] = x
        b = zeros(len(words))
        for w, x in c.items():
            b[widx[w]] = x
        sol = solve_affine(A, b)
        table[(i, j)] = {cols[col]: x for col, x in enumerate(sol.particular) if x != 0}
    labels = [f"e{i + 1}" for i in range(n)]
    return GradedLieAlgebra(labels, table, degrees, name or f"free{rank}{step}")


def random_stratified(rng, max_dim=6, max_step=4, min_dim=2, coeffs=(-2, -1, 1, 2)):
    """Random stratified algebra of dimension in ``[min_dim, max_dim]`` and step ``<= max_step``.

    A free nilpotent algebra of rank 2 or 3 is cut down by ideals generated
    by random homogeneous vectors of degree ``<= -2`` (so the first layer
    still generates), then written in a random basis adapted to the layers.
    ``rng`` is a :class:`random.Random`.
    """
    if max_dim < min_dim or min_dim < 2:
        raise ValueError("need 2 <= min_dim <= max_dim")
    while True:
        rank = rng.choice([r for r in (2, 3) if r <= max_dim])
        step = rng.choice([1] + [k for k in range(2, max_step + 1) for _ in range(3)])
        g = free_nilpotent(rank, step)
        extra_cuts = rng.choice((0, 0, 1))
        while g.dim > max_dim or extra_cuts > 0:
            deep = [d for d in g.degree_set() if d <= -2]
            if not deep:
                break
            d = rng.choice(deep)
            idx = g.layer_indices(d)
            v = zeros(g.dim)
            for k in idx:
                v[k] = Fraction(rng.choice((0,) + tuple(coeffs)))
            if is_zero(v):
                v[rng.choice(idx)] = Fraction(1)
            g = quotient(g, ideal_generated(g, [v]))
            if g.dim <= max_dim:
                extra_cuts -= 1
        if min_dim <= g.dim <= max_dim:
            break
    n = g.dim
    P = zeros(n, n)
    from .linalg import rank as _rank
    for d in g.degree_set():
        idx = g.layer_indices(d)
        while True:
            B = zeros(len(idx), len(idx))
            for a in range(len(idx)):
                for b in range(len(idx)):
                    B[a, b] = Fraction(rng.choice((0, 0) + tuple(coeffs))) if a != b else Fraction(rng.choice(coeffs))
            if _rank(B) == len(idx):
                break
        for a, ia in enumerate(idx):
            for b, ib in enumerate(idx):
                P[ia, ib] = B[a, b]
    return g.change_basis(P, [f"e{i + 1}" for i in range(n)], f"random{n}", list(g.degrees))
