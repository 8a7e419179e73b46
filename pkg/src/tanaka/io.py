"""JSON algebra descriptions.

An algebra description looks like::

    {
      "name": "heisenberg3",
      "scalars": "rational",
      "basis": [{"name": "e1", "degree": -1}, ...],
      "brackets": [{"left": "e1", "right": "e2", "result": [["e3", "1"]]}]
    }

Omitted bracket pairs are zero and the opposite orientation is implied.
Descriptions of prolonged algebras may carry an extra ``"splitting"`` list
naming the basis vectors of the nonnegative part.  Any other field is an
error.  Errors carry a JSON path and, when it can be located, the line and
column in the source text.
"""
from __future__ import annotations

import json
from pathlib import Path

from .algebra import GradedLieAlgebra, LieAlgebraError
from .scalars import GaussianRational, ScalarError, format_scalar, parse_scalar

__all__ = [
    "DescriptionError",
    "locate",
    "parse_json",
    "parse_description",
    "description_from_data",
    "algebra_to_data",
    "dumps",
    "serialize_description",
    "load_description",
    "read_text",
    "orientation_of",
]

SCALAR_DOMAINS = ("rational", "gaussian-rational")


class DescriptionError(ValueError):
    """Malformed input, with an optional JSON path and ``line:column`` position."""

    def __init__(self, message, path="", line=None, column=None, source=""):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}:{self.column}"
        if self.path:
            where += f" ({self.path})"
        return f"{where}: {self.message}"


def locate(text, token):
    """1-based ``(line, column)`` of the first occurrence of ``token`` in ``text``, or ``(None, None)``."""
    if not text:
        return None, None
    pos = text.find(token)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Ctx:
    def __init__(self, text, source):
        self.text = text
        self.source = source

    def error(self, message, path, token=None):
        line = col = None
        if token is not None:
            line, col = locate(self.text, token)
        return DescriptionError(message, path, line, col, self.source)


def parse_json(text, source=""):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"invalid JSON: {exc.msg}", "", exc.lineno, exc.colno, source) from None


def _check_fields(ctx, obj, path, required, optional=()):
    if not isinstance(obj, dict):
        raise ctx.error("expected a JSON object", path)
    for key in obj:
        if key not in required and key not in optional:
            raise ctx.error(f"unknown field {key!r}", path, f'"{key}"')
    for key in required:
        if key not in obj:
            raise ctx.error(f"missing field {key!r}", path)


def description_from_data(data, text="", source="", allow_splitting=True, validate=True):
    """Validate decoded JSON and build ``(algebra, splitting_labels_or_None)``.

    With ``validate=False`` the Lie axioms are not checked, so that callers
    can report every violation themselves.
    """
    ctx = _Ctx(text, source)
    optional = ("splitting",) if allow_splitting else ()
    _check_fields(ctx, data, "$", ("name", "scalars", "basis", "brackets"), optional)
    name = data["name"]
    if not isinstance(name, str):
        raise ctx.error("name must be a string", "$.name")
    scalars = data["scalars"]
    if scalars not in SCALAR_DOMAINS:
        raise ctx.error(f"scalars must be one of {SCALAR_DOMAINS}, got {scalars!r}", "$.scalars", scalars)
    basis = data["basis"]
    if not isinstance(basis, list) or not basis:
        raise ctx.error("basis must be a non-empty list", "$.basis")
    labels, degrees = [], []
    for i, entry in enumerate(basis):
        p = f"$.basis[{i}]"
        _check_fields(ctx, entry, p, ("name",), ("degree",))
        lab = entry["name"]
        if not isinstance(lab, str) or not lab:
            raise ctx.error("basis name must be a non-empty string", p + ".name")
        if lab in labels:
            raise ctx.error(f"duplicate basis label {lab!r}", p + ".name", f'"name": "{lab}"')
        labels.append(lab)
        deg = entry.get("degree")
        if deg is not None and (not isinstance(deg, int) or isinstance(deg, bool)):
            raise ctx.error("degree must be an integer", p + ".degree")
        degrees.append(deg)
    if any(d is None for d in degrees) and not all(d is None for d in degrees):
        raise ctx.error("either every basis entry has a degree or none does", "$.basis")
    degrees = None if degrees[0] is None else degrees
    index = {lab: i for i, lab in enumerate(labels)}

    def lookup(lab, path):
        if not isinstance(lab, str):
            raise ctx.error("label must be a string", path)
        if lab not in index:
            raise ctx.error(f"unknown basis label {lab!r}", path, f'"{lab}"')
        return index[lab]

    brackets = data["brackets"]
    if not isinstance(brackets, list):
        raise ctx.error("brackets must be a list", "$.brackets")
    table, seen = {}, {}
    for b, entry in enumerate(brackets):
        p = f"$.brackets[{b}]"
        _check_fields(ctx, entry, p, ("left", "right", "result"))
        i = lookup(entry["left"], p + ".left")
        j = lookup(entry["right"], p + ".right")
        if i == j:
            raise ctx.error(f"bracket of {labels[i]!r} with itself", p)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ctx.error(f"bracket [{labels[key[0]]},{labels[key[1]]}] given twice (also at brackets[{seen[key]}])", p)
        seen[key] = b
        res = entry["result"]
        if not isinstance(res, list):
            raise ctx.error("result must be a list of [label, coefficient] pairs", p + ".result")
        vec = {}
        for t, term in enumerate(res):
            tp = f"{p}.result[{t}]"
            if not (isinstance(term, list) and len(term) == 2):
                raise ctx.error("result term must be a [label, coefficient] pair", tp)
            k = lookup(term[0], tp + "[0]")
            coeff = term[1]
            if not isinstance(coeff, (str, int)) or isinstance(coeff, bool):
                raise ctx.error(f"coefficient must be a scalar string, got {coeff!r}", tp + "[1]")
            try:
                c = parse_scalar(str(coeff))
            except ScalarError as exc:
                raise ctx.error(str(exc), tp + "[1]", f'"{coeff}"') from None
            if isinstance(c, GaussianRational) and scalars == "rational":
                if c.im != 0:
                    raise ctx.error(f"non-rational coefficient {coeff!r} in a rational description", tp + "[1]", f'"{coeff}"')
                c = c.re
            if k in vec:
                raise ctx.error(f"label {term[0]!r} repeated in result", tp)
            vec[k] = c
        if i > j:
            vec = {k: -c for k, c in vec.items()}
        table[key] = vec
    try:
        alg = GradedLieAlgebra(labels, table, degrees, name, scalars, validate=validate)
    except LieAlgebraError as exc:
        raise DescriptionError(str(exc), "$.brackets", source=source) from None
    splitting = None
    if "splitting" in data:
        sp = data["splitting"]
        if not isinstance(sp, list):
            raise ctx.error("splitting must be a list of labels", "$.splitting")
        splitting = [labels[lookup(s, f"$.splitting[{t}]")] for t, s in enumerate(sp)]
    return alg, splitting


def parse_description(text, source="", allow_splitting=True, validate=True):
    """Parse JSON text to ``(GradedLieAlgebra, splitting_or_None)``."""
    return description_from_data(parse_json(text, source), text, source, allow_splitting, validate)


def read_text(path):
    path = Path(path)
    try:
        return path.read_text()
    except OSError as exc:
        raise DescriptionError(f"cannot read file: {exc.strerror}", source=str(path)) from None


def load_description(path, validate=True):
    return parse_description(read_text(path), str(path), validate=validate)


def algebra_to_data(alg, splitting=None, orientation=None):
    """Canonical description dict.

    ``orientation`` optionally maps an unordered pair ``(i, j)`` (``i < j``)
    to ``(j, i)`` to print a bracket in the reversed order, as some bundled
    files follow a published convention.
    """
    basis = []
    for i, lab in enumerate(alg.labels):
        entry = {"name": lab}
        if alg.degrees is not None:
            entry["degree"] = alg.degrees[i]
        basis.append(entry)
    brackets = []
    for (i, j) in sorted(alg.structure_table()):
        vec = alg.bracket_basis(i, j)
        left, right, sign = i, j, 1
        if orientation and (i, j) in orientation:
            left, right, sign = j, i, -1
        res = [[alg.labels[k], format_scalar(sign * vec[k])] for k in sorted(vec)]
        brackets.append({"left": alg.labels[left], "right": alg.labels[right], "result": res})
    data = {"name": alg.name, "scalars": alg.scalars, "basis": basis, "brackets": brackets}
    if splitting is not None:
        data["splitting"] = list(splitting)
    return data


def dumps(data) -> str:
    """Byte-stable JSON text: two-space indent, short leaf lists kept on one line."""
    return _dump(data, 0) + "\n"


def _is_leaf_list(x):
    return isinstance(x, list) and all(not isinstance(y, (dict, list)) or
                                       (isinstance(y, list) and all(not isinstance(z, (dict, list)) for z in y))
                                       for y in x)


def _dump(x, indent):
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(x, dict):
        if not x:
            return "{}"
        if len(x) <= 3 and all(not isinstance(v, dict) and (not isinstance(v, list) or _is_leaf_list(v))
                               for v in x.values()):
            return "{" + ", ".join(f"{json.dumps(k)}: {json.dumps(v, separators=(', ', ': '))}"
                                   for k, v in x.items()) + "}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, list):
        if not x:
            return "[]"
        if _is_leaf_list(x):
            return json.dumps(x, separators=(", ", ": "))
        items = [f"{pad}{_dump(v, indent + 1)}" for v in x]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return json.dumps(x)


def serialize_description(alg, splitting=None, orientation=None) -> str:
    return dumps(algebra_to_data(alg, splitting, orientation))


def orientation_of(data):
    """Pairs ``(i, j)`` with ``i < j`` that a description writes as ``[e_j, e_i]``."""
    labels = [b["name"] for b in data["basis"]]
    out = set()
    for entry in data["brackets"]:
        i, j = labels.index(entry["left"]), labels.index(entry["right"])
        if i > j:
            out.add((j, i))
    return out
