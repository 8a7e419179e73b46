"""Derivation algebras, Tanaka prolongations and related constructions.

A degree-``k`` element (``k >= 0``) of the prolongation of a stratified
algebra ``g`` is stored concretely as the linear map it induces on ``g``:
``u(e_i)`` is a vector in the already constructed part of ``p`` of degree
``deg(e_i) + k``.  Layer ``k`` is the solution space of the Leibniz system

    u[X, Y] = [uX, Y] + [X, uY]        (X, Y in g),

and brackets between nonnegative layers are recovered from the action on
``g`` through the Jacobi identity ``[[a, b], X] = [a, [b, X]] - [b, [a, X]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .algebra import GradedLieAlgebra, is_derivation, stratification_step
from .linalg import Subspace, is_zero, nullspace_rows, solve_affine, zeros
from .scalars import as_scalar

__all__ = [
    "ProlongationError",
    "DerivationSpace",
    "ProlongedAlgebra",
    "derivations",
    "derivation_algebra",
    "diagonal_derivations",
    "extend_derivation",
    "tanaka_prolong",
    "semidirect",
    "largest_ideal_in",
    "aut_pg_algebra",
    "ad_subspace",
    "dilation",
    "is_automorphism",
]


class ProlongationError(ValueError):
    pass


def _add(acc, vec, c=1):
    for k, x in vec.items():
        y = acc.get(k, 0) + c * x
        if y == 0:
            acc.pop(k, None)
        else:
            acc[k] = y


# ---------------------------------------------------------------------------
# derivation spaces

class DerivationSpace:
    """Linear space of derivations of ``alg`` spanned by ``basis`` (n x n matrices)."""

    def __init__(self, alg, basis, labels=None, check=True):
        self.alg = alg
        self.basis = [np.asarray(m, dtype=object) for m in basis]
        n = alg.dim
        self.labels = list(labels) if labels is not None else [f"d{r + 1}" for r in range(len(self.basis))]
        if len(self.labels) != len(self.basis):
            raise ProlongationError("one label per derivation is required")
        self._flat = Subspace(n * n, [m.flatten() for m in self.basis])
        if self._flat.dim != len(self.basis):
            raise ProlongationError("derivation matrices are linearly dependent")
        if check:
            for lab, m in zip(self.labels, self.basis):
                if m.shape != (n, n):
                    raise ProlongationError(f"{lab}: expected a {n}x{n} matrix")
                if not is_derivation(alg, m):
                    raise ProlongationError(f"{lab} is not a derivation")

    @property
    def dim(self):
        return len(self.basis)

    def subspace(self) -> Subspace:
        return self._flat

    def contains(self, m) -> bool:
        return self._flat.contains(np.asarray(m, dtype=object).flatten())

    def coordinates(self, m):
        """Coefficients of ``m`` in this basis (raises if ``m`` is not in the span)."""
        n = self.alg.dim
        B = np.array([b.flatten() for b in self.basis], dtype=object).T.reshape(n * n, self.dim) \
            if self.dim else zeros(n * n, 0)
        sol = solve_affine(B, np.asarray(m, dtype=object).flatten())
        if sol is None:
            raise ProlongationError("matrix is not in the derivation space")
        return sol.particular

    def is_closed(self) -> bool:
        return all(self.contains(a @ b - b @ a) for a, b in combinations(self.basis, 2))

    def structure(self):
        """``{(r, s): {t: c}}`` with ``[d_r, d_s] = sum c d_t`` (commutator)."""
        out = {}
        for r, s in combinations(range(self.dim), 2):
            a, b = self.basis[r], self.basis[s]
            coords = self.coordinates(a @ b - b @ a)
            d = {t: c for t, c in enumerate(coords) if c != 0}
            if d:
                out[(r, s)] = d
        return out

    def preserves_first_layer(self) -> bool:
        first = set(self.alg.layer_indices(-1))
        return all(m[r, c] == 0 for m in self.basis for c in first for r in range(self.alg.dim) if r not in first)

    def __repr__(self):
        return f"DerivationSpace(dim={self.dim})"


def derivations(alg, allowed=None, order=None):
    """Nullspace of the Leibniz system for matrices supported on ``allowed`` entries.

    ``allowed`` is a set of ``(row, col)`` positions (default: all);
    ``order`` fixes the unknown ordering, which determines the echelon basis.
    Returns a list of matrices.
    """
    n = alg.dim
    if allowed is None:
        allowed = {(r, c) for r in range(n) for c in range(n)}
    unknowns = list(order) if order is not None else sorted(allowed, key=lambda rc: (rc[1], rc[0]))
    var = {rc: v for v, rc in enumerate(unknowns)}
    rows = []
    for i, j in combinations(range(n), 2):
        eqs = {}
        # D[e_i, e_j]
        for c, x in alg.bracket_basis(i, j).items():
            for m in range(n):
                if (m, c) in var:
                    eqs.setdefault(m, {})
                    _add(eqs[m], {var[(m, c)]: x})
        # -[D e_i, e_j] - [e_i, D e_j]
        for r in range(n):
            if (r, i) in var:
                for m, x in alg.bracket_basis(r, j).items():
                    eqs.setdefault(m, {})
                    _add(eqs[m], {var[(r, i)]: -x})
            if (r, j) in var:
                for m, x in alg.bracket_basis(i, r).items():
                    eqs.setdefault(m, {})
                    _add(eqs[m], {var[(r, j)]: -x})
        rows.extend(e for e in eqs.values() if e)
    ns = nullspace_rows(rows, len(unknowns))
    mats = []
    for v in ns.basis:
        m = zeros(n, n)
        for (r, c), x in zip(unknowns, v):
            m[r, c] = x
        mats.append(m)
    return mats


def _first_layer_order(alg, allowed):
    """Unknown order with first-layer columns first.

    The nullspace basis is echelon-reduced in this order, so each basis
    derivation is a unit matrix on the first-layer block whenever the
    first-layer block determines the derivation (bracket generation).
    """
    first = set(alg.layer_indices(-1))
    return sorted(allowed, key=lambda rc: (rc[1] not in first, rc[1], rc[0]))


def derivation_algebra(g, labels=None) -> DerivationSpace:
    """Strata-preserving derivations: Leibniz maps with ``u(g_-1) ⊆ g_-1``."""
    if stratification_step(g) is None:
        raise ProlongationError("derivation_algebra requires a stratified algebra")
    n = g.dim
    first = set(g.layer_indices(-1))
    allowed = {(r, c) for r in range(n) for c in range(n) if not (c in first and r not in first)}
    mats = derivations(g, allowed, _first_layer_order(g, allowed))
    return DerivationSpace(g, mats, labels, check=False)


def diagonal_derivations(g, labels=None) -> DerivationSpace:
    """Strata-preserving derivations acting diagonally on the first-layer basis vectors."""
    if stratification_step(g) is None:
        raise ProlongationError("diagonal_derivations requires a stratified algebra")
    n = g.dim
    first = set(g.layer_indices(-1))
    allowed = {(r, c) for r in range(n) for c in range(n)
               if not (c in first and r != c)}
    mats = derivations(g, allowed, _first_layer_order(g, allowed))
    return DerivationSpace(g, mats, labels, check=False)


def extend_derivation(g, block):
    """Unique strata-preserving derivation whose first-layer block is ``block``.

    ``block`` is a square matrix on the first-layer basis (columns are
    images).  Raises :class:`ProlongationError` if no derivation extends it.
    """
    first = g.layer_indices(-1)
    block = np.asarray(block, dtype=object)
    if block.shape != (len(first), len(first)):
        raise ProlongationError(f"expected a {len(first)}x{len(first)} block")
    der = derivation_algebra(g)
    cols = [np.array([m[r, c] for c in first for r in first], dtype=object) for m in der.basis]
    A = np.array(cols, dtype=object).T if cols else zeros(len(first) ** 2, 0)
    b = np.array([block[a, c] for c in range(len(first)) for a in range(len(first))], dtype=object)
    sol = solve_affine(A, b)
    if sol is None:
        raise ProlongationError("first-layer map does not extend to a derivation")
    out = zeros(g.dim, g.dim)
    for x, m in zip(sol.particular, der.basis):
        if x != 0:
            out = out + x * m
    return out


# ---------------------------------------------------------------------------
# prolongation

@dataclass
class ProlongedAlgebra:
    """A graded algebra ``p = g ⊕ q`` with ``q`` the nonnegative part.

    ``algebra`` is ``None`` when the prolongation was cut at ``max_degree``
    with a nonzero top layer: brackets landing beyond the cap are unknown, so
    no Lie algebra can be assembled.  ``layer_dims`` is always available.
    """

    g: GradedLieAlgebra
    algebra: GradedLieAlgebra | None
    layer_dims: dict
    rigid: bool
    zero_degree: int | None = None
    max_degree: int | None = None
    actions: list = field(default_factory=list, repr=False)

    @property
    def dim(self):
        return sum(self.layer_dims.values())

    @property
    def g_indices(self):
        return list(range(self.g.dim))

    @property
    def q_indices(self):
        return list(range(self.g.dim, self.dim))

    @property
    def splitting(self):
        """Labels of the basis vectors forming ``q``."""
        self._require_algebra()
        return [self.algebra.labels[i] for i in self.q_indices]

    def layer_vector(self):
        """Layer dimensions in increasing degree, from ``-s`` up to the last nonzero layer."""
        degs = sorted(d for d, k in self.layer_dims.items() if k)
        return [self.layer_dims[d] for d in range(degs[0], degs[-1] + 1)]

    def q_subspace(self) -> Subspace:
        return Subspace.coordinate(self.dim, self.q_indices)

    def _require_algebra(self):
        if self.algebra is None:
            raise ProlongationError("prolongation is not finite within the degree cap; no algebra available")

    @classmethod
    def from_algebra(cls, p, q_labels=None):
        """Wrap a graded algebra whose negative part is ``g`` and whose nonnegative part is ``q``.

        Basis vectors of negative degree must come first.  If ``q_labels`` is
        given it must name exactly the nonnegative-degree vectors.
        """
        p._require_degrees()
        neg = [i for i, d in enumerate(p.degrees) if d < 0]
        nonneg = [i for i, d in enumerate(p.degrees) if d >= 0]
        if neg != list(range(len(neg))):
            raise ProlongationError("negative-degree basis vectors must come first")
        if q_labels is not None and sorted(p.index(x) for x in q_labels) != nonneg:
            raise ProlongationError("splitting must list exactly the nonnegative-degree basis vectors")
        table = {key: v for key, v in p.structure_table().items() if key[1] < len(neg)}
        g = GradedLieAlgebra(p.labels[:len(neg)], table, p.degrees[:len(neg)], p.name + "-negative", p.scalars)
        if stratification_step(g) is None:
            raise ProlongationError("negative part is not stratified")
        dims = {}
        for d in p.degrees:
            dims[d] = dims.get(d, 0) + 1
        top = max(p.degrees)
        dims[top + 1] = 0
        return cls(g, p, dims, True, top + 1, top + 1)


def _layer_targets(g, layer_offsets, layer_sizes, degree):
    if degree < 0:
        return g.layer_indices(degree)
    off = layer_offsets[degree]
    return list(range(off, off + layer_sizes[degree]))


def _bracket_with_g(g, actions, t, b):
    """``[e_t, e_b]`` as a global vector, for ``t`` any computed index and ``b`` in g."""
    n = g.dim
    if t < n:
        return dict(g.bracket_basis(t, b))
    return dict(actions[t - n].get(b, {}))


def _compute_layer(g, k, actions, layer_offsets, layer_sizes):
    n = g.dim
    first = set(g.layer_indices(-1))
    unknowns = []
    for i in sorted(range(n), key=lambda i: (i not in first, i)):
        for t in _layer_targets(g, layer_offsets, layer_sizes, g.degrees[i] + k):
            unknowns.append((i, t))
    var = {u: v for v, u in enumerate(unknowns)}
    by_source = {}
    for (i, t), v in var.items():
        by_source.setdefault(i, []).append((t, v))
    rows = []
    for a, b in combinations(range(n), 2):
        eq = {}
        for c, x in g.bracket_basis(a, b).items():
            for t, v in by_source.get(c, ()):
                eq.setdefault(t, {})
                _add(eq[t], {v: x})
        for t, v in by_source.get(a, ()):
            for m, x in _bracket_with_g(g, actions, t, b).items():
                eq.setdefault(m, {})
                _add(eq[m], {v: -x})
        for t, v in by_source.get(b, ()):
            for m, x in _bracket_with_g(g, actions, t, a).items():
                eq.setdefault(m, {})
                _add(eq[m], {v: x})
        rows.extend(e for e in eq.values() if e)
    ns = nullspace_rows(rows, len(unknowns))
    elems = []
    for vec in ns.basis:
        act = {}
        for (i, t), x in zip(unknowns, vec):
            if x != 0:
                act.setdefault(i, {})[t] = x
        elems.append(act)
    return elems


def tanaka_prolong(g, g0="full", max_degree=10, labels=None):
    """Layer-by-layer prolongation of ``g`` with degree-zero part ``g0``.

    ``g0`` is ``"full"`` (all strata-preserving derivations),
    ``"diagonal"``, a :class:`DerivationSpace`, or a list of matrices.
    Layers ``1..max_degree`` are computed, stopping early at the first zero
    layer (then ``rigid`` is true).  ``labels`` optionally names the
    nonnegative basis vectors; the default is ``q{k}_{r}``.
    """
    if stratification_step(g) is None:
        raise ProlongationError("tanaka_prolong requires a stratified algebra")
    if max_degree < 0:
        raise ProlongationError("max_degree must be nonnegative")
    if isinstance(g0, str):
        if g0 == "full":
            space = derivation_algebra(g)
        elif g0 == "diagonal":
            space = diagonal_derivations(g)
        else:
            raise ProlongationError(f"unknown g0 filter {g0!r}")
    elif isinstance(g0, DerivationSpace):
        space = g0
    else:
        space = DerivationSpace(g, [np.asarray(m, dtype=object) for m in g0])
    if not space.preserves_first_layer():
        raise ProlongationError("g0 contains a map that does not preserve the first layer")
    if not space.is_closed():
        raise ProlongationError("g0 is not closed under commutator")

    n = g.dim
    actions = []
    layer_offsets, layer_sizes = {}, {}
    layer_offsets[0] = n
    layer_sizes[0] = space.dim
    for m in space.basis:
        act = {}
        for i in range(n):
            col = {r: m[r, i] for r in range(n) if m[r, i] != 0}
            if col:
                act[i] = col
        actions.append(act)
    dims = {}
    for d in g.degrees:
        dims[d] = dims.get(d, 0) + 1
    dims[0] = space.dim
    rigid = space.dim == 0
    zero_degree = 0 if rigid else None
    k = 0
    while not rigid and k < max_degree:
        k += 1
        layer_offsets[k] = n + len(actions)
        elems = _compute_layer(g, k, actions, layer_offsets, layer_sizes)
        layer_sizes[k] = len(elems)
        dims[k] = len(elems)
        actions.extend(elems)
        if not elems:
            rigid, zero_degree = True, k
    top = k
    if rigid and zero_degree is not None and zero_degree not in dims:
        dims[zero_degree] = 0

    algebra = None
    if rigid or top == 0:
        algebra = _assemble(g, actions, layer_offsets, layer_sizes, top if not rigid else zero_degree - 1,
                            labels, space.labels)
    return ProlongedAlgebra(g, algebra, dims, rigid, zero_degree, max_degree, actions)


def _assemble(g, actions, offsets, sizes, top, labels, g0_labels):
    n = g.dim
    total = n + len(actions)
    deg_of = list(g.degrees)
    for k in range(0, top + 1):
        deg_of.extend([k] * sizes.get(k, 0))
    if labels is None:
        labels = []
        for k in range(0, top + 1):
            if k == 0 and g0_labels is not None:
                labels.extend(g0_labels)
            else:
                labels.extend(f"q{k}_{r + 1}" for r in range(sizes.get(k, 0)))
    labels = list(g.labels) + list(labels)
    if len(labels) != total:
        raise ProlongationError("wrong number of labels for the nonnegative part")

    table = {}
    for (i, j), v in g.structure_table().items():
        table[(i, j)] = v
    for t in range(n, total):
        for b in range(n):
            vec = actions[t - n].get(b, {})
            if vec:
                table[(b, t)] = {m: -x for m, x in vec.items()}

    def bracket_nonneg_with(t, y):
        """[e_t, y] for global vector y, using g-actions and already known nonneg brackets."""
        out = {}
        for s, c in y.items():
            if s < n:
                _add(out, actions[t - n].get(s, {}), c)
            elif s != t:
                key = (min(t, s), max(t, s))
                if key not in table and key not in done:
                    raise ProlongationError("internal ordering error in bracket assembly")
                vec = table.get(key, {})
                _add(out, vec, c if t < s else -c)
        return out

    # flattened maps of each layer, for coordinate resolution
    def flat(act):
        out = {}
        for i, vec in act.items():
            for m, x in vec.items():
                out[(i, m)] = x
        return out

    layer_flat = {}
    for k in range(0, top + 1):
        off = offsets[k]
        layer_flat[k] = [flat(actions[t - n]) for t in range(off, off + sizes[k])]

    def resolve(mapping, k):
        if k > top:
            if any(mapping.values()):
                raise ProlongationError(f"bracket lands in degree {k} beyond a zero layer")
            return {}
        elems = layer_flat[k]
        keys = sorted(set(mapping) | {key for e in elems for key in e})
        idx = {key: r for r, key in enumerate(keys)}
        A = zeros(len(keys), len(elems))
        for col, e in enumerate(elems):
            for key, x in e.items():
                A[idx[key], col] = x
        b = zeros(len(keys))
        for key, x in mapping.items():
            b[idx[key]] = x
        sol = solve_affine(A, b)
        if sol is None:
            raise ProlongationError(f"bracket of nonnegative elements is not in layer {k}")
        off = offsets[k]
        return {off + r: x for r, x in enumerate(sol.particular) if x != 0}

    nonneg = list(range(n, total))
    pairs = sorted(combinations(nonneg, 2), key=lambda p: (deg_of[p[0]] + deg_of[p[1]], p))
    done = set()
    for t1, t2 in pairs:
        mapping = {}
        for x in range(n):
            a = bracket_nonneg_with(t1, _bracket_with_g(g, actions, t2, x))
            b = bracket_nonneg_with(t2, _bracket_with_g(g, actions, t1, x))
            _add(a, b, -1)
            for m, c in a.items():
                mapping[(x, m)] = c
        vec = resolve(mapping, deg_of[t1] + deg_of[t2])
        if vec:
            table[(t1, t2)] = vec
        done.add((t1, t2))
    return GradedLieAlgebra(labels, table, deg_of, g.name + "-prolonged" if g.name else "", g.scalars)


def semidirect(g, h, labels=None):
    """``g ⋊ h`` with ``h`` a space of derivations in degree 0 acting by ``[D, X] = D X``."""
    if not isinstance(h, DerivationSpace):
        h = DerivationSpace(g, list(h), labels)
    if not h.is_closed():
        raise ProlongationError("derivation space is not closed under commutator")
    n = g.dim
    table = dict(g.structure_table())
    for r, m in enumerate(h.basis):
        for b in range(n):
            col = {k: -m[k, b] for k in range(n) if m[k, b] != 0}
            if col:
                table[(b, n + r)] = col
    for (r, s), vec in h.structure().items():
        table[(n + r, n + s)] = {n + t: c for t, c in vec.items()}
    degrees = None if g.degrees is None else list(g.degrees) + [0] * h.dim
    alg = GradedLieAlgebra(list(g.labels) + list(labels or h.labels), table, degrees,
                           f"{g.name}-semidirect" if g.name else "", g.scalars)
    dims = {}
    for d in alg.degrees or ():
        dims[d] = dims.get(d, 0) + 1
    dims.setdefault(0, 0)
    dims[1] = 0
    return ProlongedAlgebra(g, alg, dims, True, 1, 1)


def largest_ideal_in(p, sub: Subspace) -> Subspace:
    """Largest ideal of ``p`` contained in ``sub`` (iterated stabilizer)."""
    alg = p.algebra if isinstance(p, ProlongedAlgebra) else p
    if isinstance(p, ProlongedAlgebra):
        p._require_algebra()
    n = alg.dim
    ads = [alg.ad_basis(i) for i in range(n)]
    I = sub
    while True:
        if I.dim == 0:
            return I
        ann = I.annihilator()
        B = I.basis.T
        rows = []
        for ad in ads:
            M = ann.basis @ ad @ B if ann.dim else zeros(0, I.dim)
            rows.extend(M[r] for r in range(M.shape[0]))
        if rows:
            from .linalg import nullspace
            coeffs = nullspace(np.array(rows, dtype=object))
        else:
            coeffs = Subspace.full(I.dim)
        nxt = Subspace(n, [B @ c for c in coeffs.basis])
        if nxt == I:
            return I
        I = nxt


def ad_subspace(alg, indices) -> Subspace:
    """Span of ``ad(e_i)`` for the given basis indices, as flattened matrices."""
    n = alg.dim
    return Subspace(n * n, [alg.ad_basis(i).flatten() for i in indices])


def aut_pg_algebra(p: ProlongedAlgebra) -> DerivationSpace:
    """Derivations ``D`` of ``p`` with ``D(q) ⊆ q`` and ``D(g_-1 ⊕ q) ⊆ g_-1 ⊕ q``."""
    p._require_algebra()
    alg = p.algebra
    n = alg.dim
    q = set(p.q_indices)
    big = q | set(p.g.layer_indices(-1))
    allowed = {(r, c) for r in range(n) for c in range(n)
               if not (c in q and r not in q) and not (c in big and r not in big)}
    mats = derivations(alg, allowed)
    return DerivationSpace(alg, mats, check=False)


def dilation(alg, lam):
    """Diagonal map ``X -> lam**deg(X) X``; an automorphism of any graded algebra."""
    if isinstance(alg, ProlongedAlgebra):
        alg._require_algebra()
        alg = alg.algebra
    lam = as_scalar(lam)
    if lam == 0:
        raise ProlongationError("dilation factor must be nonzero")
    alg._require_degrees()
    M = zeros(alg.dim, alg.dim)
    for i, d in enumerate(alg.degrees):
        M[i, i] = lam ** d if d >= 0 else Fraction(1) / lam ** (-d)
    return M


def is_automorphism(alg, M) -> bool:
    M = np.asarray(M, dtype=object)
    n = alg.dim
    for i, j in combinations(range(n), 2):
        lhs = M @ alg.bracket(alg.basis_vector(i), alg.basis_vector(j))
        rhs = alg.bracket(M[:, i], M[:, j])
        if not is_zero(lhs - rhs):
            return False
    from .linalg import det
    return det(M) != 0

