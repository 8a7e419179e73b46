"""Sparse multivariate polynomials with exact coefficients.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name, so two
polynomials compare equal exactly when their term maps agree, whatever
variable lists they were declared with.  The declared ``vars`` tuple only
fixes the graded-lexicographic order used for printing and serialization.
"""
from __future__ import annotations

import ast
from fractions import Fraction

from .scalars import GaussianRational, as_scalar, format_scalar

__all__ = ["MultiPoly", "PolyError", "as_poly", "parse_poly", "symbols"]


class PolyError(ValueError):
    pass


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _merge_vars(a, b):
    if a == b:
        return a
    seen = set(a)
    return a + tuple(v for v in b if v not in seen)


_SCALAR_TYPES = (int, Fraction, GaussianRational)


class MultiPoly:
    """Immutable polynomial over Q or Q(i)."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms=None, vars=()):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c != 0:
                    clean[tuple(sorted((v, e) for v, e in mono if e))] = c
        used = {v for mono in clean for v, _ in mono}
        vars = tuple(vars)
        extra = sorted(used.difference(vars))
        self.vars = vars + tuple(extra)
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def var(cls, name: str, vars=()):
        vars = tuple(vars) if vars else (name,)
        if name not in vars:
            vars = vars + (name,)
        return cls({((name, 1),): Fraction(1)}, vars)

    @classmethod
    def const(cls, c, vars=()):
        return cls({(): as_scalar(c)}, vars)

    def with_vars(self, vars):
        """Same polynomial, declared over ``vars`` (undeclared used variables are appended)."""
        p = MultiPoly.__new__(MultiPoly)
        used = {v for mono in self.terms for v, _ in mono}
        vars = tuple(vars)
        p.vars = vars + tuple(sorted(used.difference(vars)))
        p.terms = self.terms
        return p

    # arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, _SCALAR_TYPES):
            return MultiPoly({(): other} if other != 0 else {}, self.vars)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            s = terms.get(m, 0) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly._raw(terms, _merge_vars(self.vars, o.vars))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            if other == 0:
                return MultiPoly._raw({}, self.vars)
            return MultiPoly._raw({m: c * other for m, c in self.terms.items()}, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = terms.get(m, 0) + c1 * c2
                if s == 0:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return MultiPoly._raw(terms, _merge_vars(self.vars, other.vars))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (Fraction(1) / other if not isinstance(other, GaussianRational) else 1 / other)
        if isinstance(other, MultiPoly) and other.is_constant():
            return self / other.constant_value()
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = MultiPoly._raw({(): Fraction(1)}, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @classmethod
    def _raw(cls, terms, vars):
        p = cls.__new__(cls)
        p.terms = terms
        p.vars = vars
        return p

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, _SCALAR_TYPES):
            if other == 0:
                return not self.terms
            return self.terms == {(): other}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # queries ------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> tuple:
        """Variables that actually occur, in declared order."""
        used = {v for m in self.terms for v, _ in m}
        return tuple(v for v in self.vars if v in used)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var``, or total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def coeff(self, var: str, k: int) -> "MultiPoly":
        """Coefficient of ``var**k`` as a polynomial in the remaining variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == k:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return MultiPoly._raw(out, self.vars)

    # calculus -----------------------------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if e:
                if e == 1:
                    del d[var]
                else:
                    d[var] = e - 1
                out[tuple(sorted(d.items()))] = c * e
        return MultiPoly._raw(out, self.vars)

    def integrate(self, var: str) -> "MultiPoly":
        """Definite integral from 0 to ``var``."""
        if var not in self.vars:
            raise PolyError(f"unknown variable {var!r}; declared {self.vars}")
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0) + 1
            d[var] = e
            out[tuple(sorted(d.items()))] = c / e if isinstance(c, GaussianRational) else Fraction(c) / e
        return MultiPoly._raw(out, self.vars)

    def subs(self, bindings: dict) -> "MultiPoly":
        """Substitute polynomials or scalars for variables."""
        if not bindings:
            return self
        for name in bindings:
            if not isinstance(name, str):
                raise PolyError(f"binding key must be a variable name, got {name!r}")
        vals = {k: (v if isinstance(v, MultiPoly) else MultiPoly.const(v)) for k, v in bindings.items()}
        new_vars = tuple(v for v in self.vars if v not in vals)
        for v in vals.values():
            new_vars = _merge_vars(new_vars, v.vars)
        result = MultiPoly._raw({}, new_vars)
        cache = {}
        for m, c in self.terms.items():
            keep = []
            term = MultiPoly._raw({(): c}, new_vars)
            for v, e in m:
                if v in vals:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = vals[v] ** e
                    term = term * cache[key]
                else:
                    keep.append((v, e))
            if keep:
                term = term * MultiPoly._raw({tuple(keep): Fraction(1)}, new_vars)
            result = result + term
        return result.with_vars(new_vars)

    def evaluate(self, bindings: dict):
        """Substitute scalars for every occurring variable and return the scalar."""
        p = self.subs(bindings)
        if not p.is_constant():
            raise PolyError(f"unbound variables {p.variables()} in evaluation")
        return p.constant_value()

    # ordering and output ------------------------------------------------
    def _sort_key(self, mono):
        d = dict(mono)
        exps = tuple(d.get(v, 0) for v in self.vars)
        return (sum(exps), exps)

    def sorted_terms(self):
        """Terms in graded-lexicographic order (highest first) over the declared variables."""
        return sorted(self.terms.items(), key=lambda mc: self._sort_key(mc[0]), reverse=True)

    def to_json(self):
        """Sorted term list ``[[coeff, [[var, exp], ...]], ...]``."""
        out = []
        for m, c in self.sorted_terms():
            d = dict(m)
            out.append([format_scalar(c), [[v, d[v]] for v in self.vars if v in d]])
        return out

    @classmethod
    def from_json(cls, data, vars=()):
        terms = {}
        for c, mono in data:
            terms[tuple(sorted((v, int(e)) for v, e in mono))] = as_scalar(c)
        return cls(terms, vars)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            d = dict(m)
            mono = "*".join(v if d[v] == 1 else f"{v}^{d[v]}" for v in self.vars if v in d)
            if isinstance(c, GaussianRational) and c.im != 0:
                cs = "(" + format_scalar(c) + ")"
                neg = False
            else:
                c = c.re if isinstance(c, GaussianRational) else c
                neg = c < 0
                cs = format_scalar(abs(c))
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"MultiPoly({self})"


def as_poly(x, vars=()) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    return MultiPoly.const(as_scalar(x), vars)


def symbols(names, vars=None):
    """``symbols("t x1 x2")`` -> tuple of variable polynomials sharing one declaration."""
    if isinstance(names, str):
        names = names.split()
    decl = tuple(vars) if vars is not None else tuple(names)
    return tuple(MultiPoly.var(n, decl) for n in names)


def parse_poly(text: str, vars=()) -> MultiPoly:
    """Parse expressions such as ``"2/3*beta - alpha"`` or ``"x1^2 + i*x2"``.

    Division is allowed by constants only; ``i`` is the imaginary unit.
    """
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolyError(f"cannot parse polynomial {text!r}") from exc
    return _eval_poly(tree.body, text, tuple(vars)).with_vars(vars)


def _eval_poly(node, text, vars):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return MultiPoly.const(node.value, vars)
    if isinstance(node, ast.Name):
        if node.id == "i":
            return MultiPoly.const(GaussianRational(0, 1), vars)
        return MultiPoly.var(node.id, vars)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_poly(node.operand, text, vars)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval_poly(node.left, text, vars)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise PolyError(f"exponent must be a non-negative integer in {text!r}")
            return a ** node.right.value
        b = _eval_poly(node.right, text, vars)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if not b.is_constant():
                raise PolyError(f"division by a non-constant in {text!r}")
            try:
                return a / b.constant_value()
            except ZeroDivisionError as exc:
                raise PolyError(f"division by zero in {text!r}") from exc
    raise PolyError(f"unsupported expression {text!r}")

