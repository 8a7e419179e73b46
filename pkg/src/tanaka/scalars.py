"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

Rational values are plain :class:`~fractions.Fraction` objects, which are
always stored in lowest terms with a positive denominator.  Gaussian
rationals a + b*i are :class:`GaussianRational` instances with Fraction
parts.  Both interoperate with ``int``.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from numbers import Rational

__all__ = [
    "GaussianRational",
    "I",
    "ScalarError",
    "as_scalar",
    "format_scalar",
    "parse_scalar",
    "is_real",
    "real_part",
    "conjugate",
]


class ScalarError(ValueError):
    """Malformed scalar input or an illegal operation such as division by zero."""


class GaussianRational:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self.re)}, {format_scalar(self.im)})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def as_scalar(x):
    """Coerce ints, Fractions, rational strings and Gaussian rationals to a canonical scalar."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        raise ScalarError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_scalar(x)
    raise ScalarError(f"not an exact scalar: {x!r}")


def is_real(x) -> bool:
    return not isinstance(x, GaussianRational) or x.im == 0


def real_part(x) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.re
    return Fraction(x)


def conjugate(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def _format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text form: ``p/q`` (``p`` when integral) or ``a+b*i``."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _format_rational(x.re)
        im = x.im
        mag = "" if abs(im) == 1 else _format_rational(abs(im)) + "*"
        if x.re == 0:
            return ("-" if im < 0 else "") + mag + "i"
        return _format_rational(x.re) + ("-" if im < 0 else "+") + mag + "i"
    return _format_rational(Fraction(x))


def parse_scalar(text: str):
    """Parse ``"3"``, ``"-1/2"``, ``"1/2+3/4*i"``, ``"-i"`` and similar.

    The result is a Fraction unless the text mentions ``i``.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ScalarError(f"cannot parse scalar {text!r}") from exc
    value = _eval_scalar(tree.body, text)
    return value


def _eval_scalar(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name) and node.id == "i":
        return GaussianRational(0, 1)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_scalar(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        a = _eval_scalar(node.left, text)
        b = _eval_scalar(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if b == 0:
            raise ScalarError(f"division by zero in {text!r}")
        return a / b
    raise ScalarError(f"not an exact scalar expression: {text!r}")
