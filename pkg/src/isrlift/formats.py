"""File formats and value grammar.

Matrix files::

    isr-matrix v1 <rows> <cols> <field>
    <row> <col> <value>

with field one of rational / gaussian / float, 1-based indices, unlisted
entries zero, duplicates rejected.  Rationals are "p/q" with "/q" omitted
when the denominator is 1; Gaussian rationals are "p/q+r/si" (both parts
always written); floats use shortest round-trip notation, with an optional
imaginary part "a+bi" for complex data.

Graph files::

    isr-graph v1 <n> [loops]
    <u> <v> [weight]

load as a symmetric weight matrix (default weight 1, self loops only with
the "loops" header flag).  Blank lines and '#' comments are allowed in
both formats.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .exact import GaussianRational, Matrix, Poly, RatFun

MATRIX_MAGIC = "isr-matrix"
GRAPH_MAGIC = "isr-graph"
FORMAT_VERSION = "v1"
FIELDS = ("rational", "gaussian", "float")

_RAT_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    return str(x)


def parse_gaussian(text: str) -> GaussianRational:
    """Accepts 'p/q', 'p/qi', and the full 'p/q+r/si' form."""
    text = text.strip().replace(" ", "")
    if text.endswith("i"):
        body = text[:-1]
        # split at the sign that separates real and imaginary parts
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE/+-":
                re_part, im_part = body[:pos], body[pos:]
                if im_part in ("+", "-"):
                    im_part += "1"
                return GaussianRational(parse_rational(re_part), parse_rational(im_part))
        if body in ("", "+", "-"):
            body += "1"
        return GaussianRational(0, parse_rational(body))
    return GaussianRational(parse_rational(text), 0)


def format_gaussian(x: GaussianRational) -> str:
    im = format_rational(x.im)
    sign = "+" if not im.startswith("-") else ""
    return f"{format_rational(x.re)}{sign}{im}i"


def parse_float_value(text: str):
    """Float literal with an optional imaginary part (complex data)."""
    text = text.strip().replace(" ", "")
    if text.endswith("i"):
        body = text[:-1]
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                return complex(float(body[:pos]), float(body[pos:]))
        return complex(0.0, float(body))
    return float(text)


def format_float_value(x) -> str:
    if isinstance(x, complex):
        if x.imag == 0.0:
            return repr(x.real)
        im = repr(x.imag)
        sign = "+" if not im.startswith("-") else ""
        return f"{repr(x.real)}{sign}{im}i"
    return repr(float(x))


def _parse_value(text, field, lineno):
    try:
        if field == "rational":
            return parse_rational(text)
        if field == "gaussian":
            return parse_gaussian(text)
        return parse_float_value(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad {field} value {text!r}: {exc}", line=lineno) from None


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def read_matrix_text(text: str):
    """Parse matrix-file text; returns (matrix, field).

    Rational / gaussian fields produce an exact `Matrix`, float fields a
    float or complex ndarray.
    """
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty matrix file") from None
    parts = header.split()
    if len(parts) != 5 or parts[0] != MATRIX_MAGIC or parts[1] != FORMAT_VERSION:
        raise ParseError(
            f"expected header '{MATRIX_MAGIC} {FORMAT_VERSION} <rows> <cols> <field>'",
            line=lineno,
        )
    try:
        rows, cols = int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError("rows/cols must be integers", line=lineno) from None
    field = parts[4]
    if field not in FIELDS:
        raise ParseError(f"unknown field {field!r} (expected one of {FIELDS})", line=lineno)
    if rows < 1 or cols < 1:
        raise ParseError("rows and cols must be positive", line=lineno)
    seen = {}
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected '<row> <col> <value>'", line=lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("row and col must be integers", line=lineno) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) out of range", line=lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate entry ({i}, {j})", line=lineno)
        seen[(i, j)] = _parse_value(parts[2], field, lineno)
    if field == "float":
        cplx = any(isinstance(v, complex) for v in seen.values())
        out = np.zeros((rows, cols), dtype=np.complex128 if cplx else np.float64)
        for (i, j), v in seen.items():
            out[i - 1, j - 1] = v
        return out, field
    zero = Fraction(0)
    data = [[seen.get((i + 1, j + 1), zero) for j in range(cols)] for i in range(rows)]
    return Matrix(data), field


def write_matrix_text(m, field=None) -> str:
    """Render a matrix in file format; nonzero entries only, row-major."""
    if isinstance(m, Matrix):
        if field is None:
            field = "gaussian" if m.entry_level() == 1 else "rational"
        if field == "rational" and m.entry_level() > 0:
            field = "gaussian"
        rows, cols = m.rows, m.cols
        entries = []
        for i in range(rows):
            for j in range(cols):
                v = m[i, j]
                if not v:
                    continue
                if field == "rational":
                    entries.append((i + 1, j + 1, format_rational(v)))
                else:
                    g = v if isinstance(v, GaussianRational) else GaussianRational(v, 0)
                    entries.append((i + 1, j + 1, format_gaussian(g)))
    else:
        arr = np.asarray(m)
        field = "float"
        rows, cols = arr.shape
        entries = []
        for i in range(rows):
            for j in range(cols):
                v = arr[i, j]
                if v == 0:
                    continue
                v = complex(v) if np.iscomplexobj(arr) else float(v)
                entries.append((i + 1, j + 1, format_float_value(v)))
    out = [f"{MATRIX_MAGIC} {FORMAT_VERSION} {rows} {cols} {field}"]
    out.extend(f"{i} {j} {v}" for i, j, v in entries)
    return "\n".join(out) + "\n"


def read_matrix(path):
    with open(path, "r", encoding="utf-8") as fh:
        return read_matrix_text(fh.read())


def read_graph_text(text: str):
    """Parse graph-file text into a symmetric weight matrix.

    Integer / rational weights produce an exact `Matrix`; any float weight
    switches the whole matrix to float.
    """
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty graph file") from None
    parts = header.split()
    if len(parts) not in (3, 4) or parts[0] != GRAPH_MAGIC or parts[1] != FORMAT_VERSION:
        raise ParseError(
            f"expected header '{GRAPH_MAGIC} {FORMAT_VERSION} <n> [loops]'", line=lineno
        )
    try:
        n = int(parts[2])
    except ValueError:
        raise ParseError("vertex count must be an integer", line=lineno) from None
    if n < 1:
        raise ParseError("vertex count must be positive", line=lineno)
    loops = False
    if len(parts) == 4:
        if parts[3] != "loops":
            raise ParseError(f"unknown header flag {parts[3]!r}", line=lineno)
        loops = True
    edges = {}
    any_float = False
    for lineno, line in lines:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError("expected '<u> <v> [weight]'", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("vertices must be integers", line=lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex out of range in edge ({u}, {v})", line=lineno)
        if u == v and not loops:
            raise ParseError(
                f"self loop ({u}, {v}) without the 'loops' header flag", line=lineno
            )
        key = (min(u, v), max(u, v))
        if key in edges:
            raise ParseError(f"duplicate edge ({u}, {v})", line=lineno)
        if len(parts) == 3:
            w = parts[2]
            if _RAT_RE.match(w):
                edges[key] = parse_rational(w)
            else:
                edges[key] = _parse_value(w, "float", lineno)
                any_float = True
        else:
            edges[key] = Fraction(1)
    if any_float:
        out = np.zeros((n, n))
        for (u, v), w in edges.items():
            out[u - 1, v - 1] = float(w)
            out[v - 1, u - 1] = float(w)
        return out
    zero = Fraction(0)
    data = [[zero] * n for _ in range(n)]
    for (u, v), w in edges.items():
        data[u - 1][v - 1] = w
        data[v - 1][u - 1] = w
    return Matrix(data)


def read_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return read_graph_text(fh.read())


def parse_index_spec(spec: str):
    """Comma list of 1-based indices and inclusive ranges: '1,3-5,8'."""
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk[1:]:
            lo, _, hi = chunk.partition("-")
            try:
                lo_i, hi_i = int(lo), int(hi)
            except ValueError:
                raise ValueError(f"bad index range {chunk!r}") from None
            if hi_i < lo_i:
                raise ValueError(f"empty index range {chunk!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            try:
                out.append(int(chunk))
            except ValueError:
                raise ValueError(f"bad index {chunk!r}") from None
    if not out:
        raise ValueError("empty index set")
    if len(set(out)) != len(out):
        raise ValueError("repeated indices in index set")
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# polynomial / rational-function rendering

VAR = "λ"  # lambda


def _coeff_str(c, constant=False):
    """Parens only disambiguate coefficient-power juxtaposition."""
    if isinstance(c, GaussianRational):
        return f"({format_gaussian(c)})"
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return str(c) if constant else f"({c})"
    return str(c)


def poly_str(p: Poly, var: str = VAR) -> str:
    """Human form, descending powers: 'λ^2 - 1'."""
    if p.is_zero:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        if k == 0:
            neg = _is_negative(c)
            body = _coeff_str(-c if neg else c, constant=True)
        else:
            power = var if k == 1 else f"{var}^{k}"
            neg = _is_negative(c)
            mag = -c if neg else c
            body = power if mag == 1 else f"{_coeff_str(mag)}{power}"
        terms.append(("-" if neg else "+", body))
    sign, body = terms[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _is_negative(c):
    if isinstance(c, Fraction):
        return c < 0
    if isinstance(c, GaussianRational):
        if c.im == 0:
            return c.re < 0
        return False
    return False


def ratfun_str(f: RatFun, var: str = VAR) -> str:
    """'num / den' with the denominator omitted when it is 1."""
    num = poly_str(f.num, var)
    if f.is_polynomial:  # canonical form keeps the denominator monic, so it is 1
        return num
    den = poly_str(f.den, var)
    if " " in num:
        num = f"({num})"
    if " " in den:
        den = f"({den})"
    return f"{num} / {den}"
