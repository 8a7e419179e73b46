"""Bundled algebras, σ maps and the E(2) matrix model.

Every entry can be rebuilt from first principles by the ``build_*``
functions below (matrix realizations, derivation spaces, explicit σ maps);
the JSON files under ``tanaka/data`` are their canonical serializations.
Loading an entry through :func:`load` re-verifies it: algebras pass the
axiom check on parse, σ maps must close and reproduce their expected
bracket table.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import numpy as np

from .algebra import GradedLieAlgebra, from_matrices, heisenberg
from .io import algebra_to_data, dumps, parse_description
from .modification import (Modification, ModificationError, closure_equations, is_modification_subalgebra,
                           normal_form, parse_sigma, semidirect_R, sigma_to_data, solve_closure, symbolic_brackets)
from .poly import MultiPoly, symbols
from .prolongation import ProlongedAlgebra, derivation_algebra, semidirect
from .scalars import GaussianRational, I

__all__ = [
    "ALGEBRA_NAMES",
    "SIGMA_NAMES",
    "CATALOG_NAMES",
    "bundled_text",
    "bundled_description",
    "bundled_prolonged",
    "load",
    "build_all",
    "write_bundled",
    "expected_table",
    "verify_modification",
]

ALGEBRA_NAMES = (
    "heisenberg3",
    "f24",
    "sl3-graded",
    "su21-graded",
    "f24-prolonged",
    "heisenberg3-semidirect-R",
    "ultra-rigid",
    "ultra-rigid-semidirect-R",
)
SIGMA_NAMES = ("heis-sl3-A", "heis-sl3-B", "heis-sl3-C", "heis-su21-D", "f24-abc", "ultra-rigid-template")
MODEL_NAMES = ("e2-matrix-model",)
CATALOG_NAMES = ALGEBRA_NAMES + SIGMA_NAMES + MODEL_NAMES

F = Fraction


# ---------------------------------------------------------------------------
# builders

def _E(i, j, n=3, c=1):
    m = np.empty((n, n), dtype=object)
    m.fill(Fraction(0))
    m[i - 1, j - 1] = Fraction(c) if not isinstance(c, GaussianRational) else c
    return m


def _cmat(rows):
    return np.array([[x if isinstance(x, GaussianRational) else GaussianRational(x) for x in r] for r in rows],
                    dtype=object)


def build_f24():
    """Free nilpotent algebra of rank 2 and step 4 in the published orientation."""
    t = {(1, 0): {2: 1}, (2, 0): {3: 1}, (2, 1): {4: 1}, (3, 0): {5: 1},
         (4, 0): {6: 1}, (3, 1): {6: 1}, (4, 1): {7: 1}}
    return GradedLieAlgebra([f"e{i}" for i in range(1, 9)], t, [-1, -1, -2, -3, -3, -4, -4, -4], "f24")


# pairs printed as [e_j, e_i] with j > i in the bundled F24 file
F24_ORIENTATION = {(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (1, 3), (1, 4)}

SL3_LABELS = ["e1", "e2", "e3", "h1", "h2", "n21", "n32", "n31"]


def sl3_matrices():
    """sl(3) basis: Heisenberg part strictly upper triangular, q lower triangular."""
    return [_E(1, 2), _E(2, 3), _E(1, 3), _E(1, 1) - _E(2, 2), _E(2, 2) - _E(3, 3),
            _E(2, 1), _E(3, 2), _E(3, 1)]


def build_sl3():
    return from_matrices(SL3_LABELS, sl3_matrices(), [-1, -1, -2, 0, 0, 1, 1, 2], "sl3-graded")


SU21_LABELS = ["X", "Y", "Z", "H", "U", "thetaX", "thetaY", "thetaZ"]


def su21_matrices():
    i = I
    return [
        _cmat([[0, i, 0], [-i, 0, -i], [0, -i, 0]]),
        _cmat([[0, 1, 0], [1, 0, 1], [0, -1, 0]]),
        _cmat([[2 * i, 0, 2 * i], [0, 0, 0], [-2 * i, 0, -2 * i]]),
        _cmat([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        _cmat([[i, 0, 0], [0, -2 * i, 0], [0, 0, i]]),
        _cmat([[0, -i, 0], [i, 0, -i], [0, -i, 0]]),
        _cmat([[0, -1, 0], [-1, 0, 1], [0, -1, 0]]),
        _cmat([[2 * i, 0, -2 * i], [0, 0, 0], [2 * i, 0, -2 * i]]),
    ]


SU21_J = _cmat([[1, 0, 0], [0, -1, 0], [0, 0, -1]])


def build_su21():
    return from_matrices(SU21_LABELS, su21_matrices(), [-1, -1, -2, 0, 0, 1, 1, 2], "su21-graded",
                         "gaussian-rational")


def build_f24_prolonged():
    """``f24 ⋊ Der``; Der is spanned by extensions of the elementary maps E11, E21, E12, E22."""
    g = build_f24()
    der = derivation_algebra(g, ["d11", "d21", "d12", "d22"])
    p = semidirect(g, der)
    p.algebra.name = "f24-prolonged"
    return p


def build_ultra_rigid():
    """Eight-dimensional step-3 algebra whose only strata-preserving derivations are multiples of the grading."""
    t = {(0, 1): {3: 1}, (0, 2): {4: 1}, (1, 2): {5: 1},
         (0, 4): {6: -1}, (1, 4): {7: 1}, (1, 5): {6: 1}, (2, 3): {7: 1}, (2, 5): {7: 1}}
    return GradedLieAlgebra([f"e{i}" for i in range(1, 9)], t, [-1, -1, -1, -2, -2, -2, -3, -3], "ultra-rigid")


def _named_semidirect(g, name):
    p = semidirect_R(g)
    p.algebra.name = name
    return p


def build_algebra(name):
    """``(GradedLieAlgebra, splitting or None)`` for a bundled algebra name."""
    if name == "heisenberg3":
        return heisenberg(), None
    if name == "f24":
        return build_f24(), None
    if name == "sl3-graded":
        return build_sl3(), SL3_LABELS[3:]
    if name == "su21-graded":
        return build_su21(), SU21_LABELS[3:]
    if name == "f24-prolonged":
        p = build_f24_prolonged()
        return p.algebra, p.splitting
    if name == "heisenberg3-semidirect-R":
        p = _named_semidirect(heisenberg(), name)
        return p.algebra, p.splitting
    if name == "ultra-rigid":
        return build_ultra_rigid(), None
    if name == "ultra-rigid-semidirect-R":
        p = _named_semidirect(build_ultra_rigid(), name)
        return p.algebra, p.splitting
    raise KeyError(name)


def _zero_sigma(p, params):
    s = np.empty((len(p.q_indices), len(p.g_indices)), dtype=object)
    s.fill(MultiPoly({}, params))
    return s


def build_sigma(name) -> Modification:
    if name.startswith("heis-sl3-"):
        alg, split = build_algebra("sl3-graded")
        p = ProlongedAlgebra.from_algebra(alg, split)
        q = {lab: r for r, lab in enumerate(p.splitting)}
        if name == "heis-sl3-A":
            params = ("alpha", "beta")
            alpha, beta = symbols("alpha beta")
            s = _zero_sigma(p, params)
            s[q["h1"], 0] = beta * F(2, 3)
            s[q["h2"], 0] = beta * F(1, 3)
            s[q["n21"], 0] = alpha
            return Modification(p, s, params, name)
        s = _zero_sigma(p, ())
        if name == "heis-sl3-B":
            s[q["n21"], 0] = s[q["n32"], 1] = s[q["n31"], 2] = MultiPoly.const(-1)
        elif name == "heis-sl3-C":
            s[q["n21"], 1] = MultiPoly.const(F(1, 2))
            s[q["h1"], 2] = MultiPoly.const(F(1, 2))
        else:
            raise KeyError(name)
        return Modification(p, s, (), name)
    if name == "heis-su21-D":
        alg, split = build_algebra("su21-graded")
        p = ProlongedAlgebra.from_algebra(alg, split)
        q = {lab: r for r, lab in enumerate(p.splitting)}
        s = _zero_sigma(p, ())
        c = MultiPoly.const
        s[q["thetaX"], 0] = c(F(-1, 16))
        s[q["thetaY"], 0] = c(GaussianRational(0, F(9, 16)))
        s[q["thetaX"], 1] = c(GaussianRational(0, F(-9, 16)))
        s[q["thetaY"], 1] = c(F(-1, 16))
        s[q["H"], 2] = c(GaussianRational(0, F(-9, 4)))
        s[q["U"], 2] = c(F(1, 4))
        s[q["thetaZ"], 2] = c(F(-5, 16))
        return Modification(p, s, (), name)
    if name == "f24-abc":
        p = build_f24_prolonged()
        params = ("a", "b", "c")
        a, b, c = symbols("a b c")
        s = _zero_sigma(p, params)
        q = {lab: r for r, lab in enumerate(p.splitting)}
        s[q["d11"], 0] = a
        s[q["d21"], 0] = c
        s[q["d22"], 0] = b
        return Modification(p, s, params, name)
    if name == "ultra-rigid-template":
        g = build_ultra_rigid()
        p = _named_semidirect(g, "ultra-rigid-semidirect-R")
        params = tuple(f"s{i + 1}" for i in range(g.dim))
        s = _zero_sigma(p, params)
        for i, v in enumerate(symbols(" ".join(params))):
            s[0, i] = v
        return Modification(p, s, params, name)
    raise KeyError(name)


def e2_model_data():
    """Matrix realization of the E(2) modification inside SL(3), as a JSON-ready dict."""
    def rows(m):
        return [[str(x) for x in r] for r in m]
    gens = {"f1": _E(1, 2) - _E(2, 1), "f2": _E(2, 3), "f3": _E(1, 3)}
    alg = normal_form("A3")
    alg.name = "e2"
    return {
        "name": "e2-matrix-model",
        "size": 3,
        "algebra": algebra_to_data(alg),
        "generators": [{"name": k, "matrix": rows(v)} for k, v in gens.items()],
        "charts": {
            "H": "[[1, x1, x3], [0, 1, x2], [0, 0, 1]]",
            "R": "[[cos y1, sin y1, y3], [-sin y1, cos y1, y2], [0, 0, 1]]",
        },
    }


def build_all():
    """Canonical text of every bundled file, keyed by catalog name."""
    out = {}
    for name in ALGEBRA_NAMES:
        alg, split = build_algebra(name)
        orient = F24_ORIENTATION if name == "f24" else None
        out[name] = dumps(algebra_to_data(alg, split, orient))
    for name in SIGMA_NAMES:
        m = build_sigma(name)
        out[name] = dumps(sigma_to_data(m, base=m.algebra.name))
    out["e2-matrix-model"] = dumps(e2_model_data())
    return out


def write_bundled(directory):
    """Write every bundled file as ``<name>.json`` into ``directory``; returns the paths."""
    from pathlib import Path
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in build_all().items():
        path = d / f"{name}.json"
        path.write_text(text)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# loading and verification

def bundled_text(name) -> str:
    if name not in CATALOG_NAMES:
        raise KeyError(name)
    return resources.files("tanaka").joinpath("data").joinpath(f"{name}.json").read_text()


def bundled_description(name):
    """``(algebra, splitting)`` parsed from a bundled algebra file."""
    if name not in ALGEBRA_NAMES:
        raise KeyError(name)
    return parse_description(bundled_text(name), f"{name}.json")


def bundled_prolonged(name) -> ProlongedAlgebra:
    alg, split = bundled_description(name)
    if split is None:
        raise KeyError(f"{name} has no splitting")
    return ProlongedAlgebra.from_algebra(alg, split)


def expected_table(name):
    """Expected f-basis brackets ``{(i, j): {k: coefficient}}`` of a catalog σ, with polynomial coefficients."""
    if name == "heis-sl3-A":
        alpha, beta = symbols("alpha beta")
        return {(0, 1): {2: MultiPoly.const(1)}, (0, 2): {1: alpha, 2: beta}}
    if name in ("heis-sl3-B",):
        return _const_table(normal_form("B"))
    if name == "heis-sl3-C":
        return _const_table(normal_form("C"))
    if name == "heis-su21-D":
        return _const_table(normal_form("D"))
    if name == "f24-abc":
        a, b, c = symbols("a b c")
        one = MultiPoly.const(1)
        # published relations, rewritten with the smaller index on the left
        rel = {
            (1, 0): {2: one, 1: -b},
            (2, 0): {3: one, 2: -(a + b)},
            (2, 1): {4: one},
            (3, 0): {5: one, 4: -c, 3: -(2 * a + b)},
            (3, 1): {6: one},
            (4, 0): {6: one, 4: -(a + 2 * b)},
            (0, 5): {6: 2 * c, 5: 3 * a + b},
            (0, 6): {7: c, 6: 2 * (a + b)},
            (0, 7): {7: a + 3 * b},
            (4, 1): {7: one},
        }
        out = {}
        for (i, j), vec in rel.items():
            if i < j:
                out[(i, j)] = vec
            else:
                out[(j, i)] = {k: -x for k, x in vec.items()}
        return out
    raise KeyError(name)


def _const_table(alg):
    return {key: {k: MultiPoly.const(c) for k, c in vec.items()} for key, vec in alg.structure_table().items()}


def verify_modification(m: Modification, name):
    """Check closure (as polynomial identities) and the expected bracket table; raises on mismatch."""
    if name == "ultra-rigid-template":
        sol, free = solve_closure(closure_equations(m), m.parameters)
        deep = {f"s{i + 1}" for i, d in enumerate(m.p.g.degrees) if d <= -2}
        if set(sol) != deep or any(v != 0 for v in sol.values()):
            raise ModificationError(f"{name}: closing sigma differ from the kernel criterion: {sol}")
        return True
    if m.parameters:
        if closure_equations(m):
            raise ModificationError(f"{name}: graph does not close identically in the parameters")
    elif not is_modification_subalgebra(m):
        raise ModificationError(f"{name}: graph of sigma does not close")
    want = expected_table(name)
    got = symbolic_brackets(m)
    for (i, j), zg in got.items():
        exp = want.get((i, j), {})
        for k, x in enumerate(zg):
            e = exp.get(k, 0)
            if x != e:
                raise ModificationError(f"{name}: [f{i + 1},f{j + 1}] coefficient of f{k + 1} is {x}, expected {e}")
    return True


def load(name):
    """Load and verify a catalog entry.

    Algebra names return ``(GradedLieAlgebra, splitting)``; σ names return a
    verified :class:`Modification`; ``e2-matrix-model`` returns a
    :class:`tanaka.contact.MatrixModel`.
    """
    if name in ALGEBRA_NAMES:
        return bundled_description(name)
    if name in SIGMA_NAMES:
        m = parse_sigma(bundled_text(name), f"{name}.json")
        verify_modification(m, name)
        return m
    if name in MODEL_NAMES:
        from .contact import MatrixModel
        return MatrixModel.from_data(json.loads(bundled_text(name)))
    raise KeyError(f"unknown catalog entry {name!r}")
