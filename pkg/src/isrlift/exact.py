"""Exact scalar, polynomial, and rational-function arithmetic.

Scalars are arbitrary-precision rationals (`fractions.Fraction`) or
Gaussian rationals (rational real + imaginary parts).  Polynomials in the
spectral variable and quotients of them form the value types of the exact
isospectral reduction.  Dense matrices over any of these scalars support
fraction-free (Bareiss) determinants, Gauss-Jordan inversion, reduced row
echelon form / nullspaces, and Faddeev-LeVerrier characteristic
polynomials.

All values are immutable after construction; every operation is a pure
function, so sharing across threads is safe.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DimensionMismatch, SingularMatrix

__all__ = [
    "GaussianRational",
    "Poly",
    "RatFun",
    "Matrix",
    "LAMBDA",
    "poly_gcd",
    "poly_lcm",
    "poly_exact_div",
    "rational_roots",
    "exact_det",
    "char_poly",
    "char_poly_via_det",
    "exact_inverse",
    "rref",
    "nullspace",
    "solve",
]


def _as_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class GaussianRational:
    """Complex scalar with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_rational(re)
        self.im = _as_rational(im)

    @property
    def is_real(self):
        return self.im == 0

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm_sq(self):
        return self.re * self.re + self.im * self.im

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
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
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm_sq()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

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

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


def _as_coeff(c):
    """Normalize a polynomial coefficient; real Gaussians demote to Fraction."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, GaussianRational):
        return c.re if c.im == 0 else c
    raise TypeError(f"unsupported polynomial coefficient {type(c).__name__}")


class Poly:
    """Dense univariate polynomial; coefficients stored lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def scale(self, c):
        return Poly(tuple(a * c for a in self.coeffs))

    def monic(self):
        if self.is_zero:
            return self
        lc = self.leading
        return self if lc == 1 else self.scale(1 / lc)

    def conjugate(self):
        return Poly(tuple(c.conjugate() for c in self.coeffs))

    def shift_up(self, k):
        """Multiply by the variable to the k-th power."""
        if self.is_zero:
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return Poly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return Poly()
        a, b = self.coeffs, o.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = Poly((Fraction(1),))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(o.coeffs) + 1, 0)
        dlead = o.leading
        dlen = len(o.coeffs)
        while len(rem) >= dlen and any(rem):
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) < dlen:
                break
            f = rem[-1] / dlead
            shift = len(rem) - dlen
            q[shift] = f
            for i, c in enumerate(o.coeffs):
                rem[shift + i] = rem[shift + i] - f * c
            rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)
        if isinstance(other, Poly):
            return RatFun(self, other)
        return NotImplemented

    def __call__(self, x):
        """Evaluate by Horner's rule; the result type follows x."""
        if not self.coeffs:
            return 0 * x
        acc = self.coeffs[-1] + 0 * x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


LAMBDA = Poly((0, 1))


def _as_poly(p):
    if isinstance(p, Poly):
        return p
    if isinstance(p, (int, Fraction, GaussianRational)):
        return Poly((p,))
    raise TypeError(f"cannot interpret {type(p).__name__} as a polynomial")


def poly_exact_div(a: Poly, b: Poly) -> Poly:
    """Divide a by b, requiring a zero remainder."""
    q, r = divmod(_as_poly(a), _as_poly(b))
    if not r.is_zero:
        raise ArithmeticError("polynomial division is not exact")
    return q


def _int_primitive(coeffs):
    """Clear denominators and content from Fraction coefficients."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_prem(a, b):
    """Pseudo-remainder of integer coefficient lists (associate of the true one)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db or not r:
            return r
        lead = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= lead * bc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; gcd(0, 0) is the zero polynomial."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero:
        return b.monic() if not b.is_zero else Poly()
    if b.is_zero:
        return a.monic()
    rational = all(isinstance(c, Fraction) for c in a.coeffs) and all(
        isinstance(c, Fraction) for c in b.coeffs
    )
    if rational:
        # primitive PRS over the integers avoids coefficient blowup
        x = _int_primitive(a.coeffs)
        y = _int_primitive(b.coeffs)
        if len(x) < len(y):
            x, y = y, x
        while y:
            r = _int_prem(x, y)
            g = 0
            for c in r:
                g = math.gcd(g, abs(c))
            if g > 1:
                r = [c // g for c in r]
            x, y = y, r
        return Poly([Fraction(c) for c in x]).monic()
    # Gaussian-rational coefficients: plain Euclid over the field
    x, y = a.monic(), b.monic()
    while not y.is_zero:
        r = x % y
        x, y = y, (r.monic() if not r.is_zero else Poly())
    return x.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero or b.is_zero:
        return Poly()
    g = poly_gcd(a, b)
    return (poly_exact_div(a, g) * b).monic()


def _small_divisors(n, bound=10**7, max_count=400):
    """Positive divisors of |n|, or None when n is too composite to bother."""
    n = abs(n)
    if n == 0 or n > bound:
        return None
    divs = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            divs.append(d)
            if d != n // d:
                divs.append(n // d)
            if len(divs) > max_count:
                return None
        d += 1
    return sorted(divs)


def rational_roots(p: Poly):
    """Extract rational roots of p exactly (with multiplicity).

    Returns (roots, remainder) with p = remainder * prod (x - r).  Roots are
    only searched when the integerized leading/trailing coefficients have a
    modest number of divisors; otherwise the polynomial is returned intact
    and the caller falls back to numeric root-finding.
    """
    p = _as_poly(p)
    if p.is_zero or p.degree == 0:
        return [], p
    if not all(isinstance(c, Fraction) for c in p.coeffs):
        return [], p
    roots = []
    # factor out roots at zero first
    k = 0
    while k < len(p.coeffs) and not p.coeffs[k]:
        k += 1
    if k:
        roots.extend([Fraction(0)] * k)
        p = Poly(p.coeffs[k:])
    if p.degree < 1:
        return roots, p
    ints = _int_primitive(p.coeffs)
    num_divs = _small_divisors(ints[0])
    den_divs = _small_divisors(ints[-1])
    if num_divs is None or den_divs is None:
        return roots, p
    candidates = set()
    for a in num_divs:
        for b in den_divs:
            candidates.add(Fraction(a, b))
            candidates.add(Fraction(-a, b))
    for r in sorted(candidates):
        while p.degree >= 1 and p(r) == 0:
            p = poly_exact_div(p, Poly((-r, Fraction(1))))
            roots.append(r)
        if p.degree < 1:
            break
    return roots, p


class RatFun:
    """Reduced rational function: numerator over a monic denominator.

    Normalization is canonical, so equality is plain syntactic comparison
    of the reduced parts.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            den = Poly((Fraction(1),))
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = poly_exact_div(num, g)
                den = poly_exact_div(den, g)
            lc = den.leading
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.degree == 0

    def conjugate(self):
        return RatFun(self.num.conjugate(), self.den.conjugate())

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, Poly)):
            return RatFun(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"rational function has a pole at {x!r}")
        return self.num(x) / d

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"


_LEVELS = {Fraction: 0, GaussianRational: 1, Poly: 2, RatFun: 3}


def _as_entry(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, GaussianRational, Poly, RatFun)):
        return x
    raise TypeError(f"unsupported exact matrix entry {type(x).__name__}")


def _entry_conj(x):
    return x.conjugate()


def entry_abs_float(x) -> float:
    """Approximate magnitude of an exact scalar, for residual reporting."""
    if isinstance(x, Fraction):
        return abs(float(x))
    if isinstance(x, GaussianRational):
        return math.sqrt(float(x.norm_sq()))
    raise TypeError(f"no magnitude for {type(x).__name__}")


class Matrix:
    """Immutable dense matrix over exact scalars (row-major tuples)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data):
        data = tuple(tuple(_as_entry(x) for x in row) for row in rows_data)
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged rows in matrix construction")
        self.data = data

    @classmethod
    def identity(cls, n):
        return cls(
            [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    @classmethod
    def zeros(cls, r, c):
        return cls([[Fraction(0)] * c for _ in range(r)])

    @classmethod
    def diagonal(cls, values):
        values = list(values)
        n = len(values)
        return cls(
            [[values[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.data[i][j] == other.data[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return Matrix(
            [
                [self.data[i][j] + other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix subtraction shape mismatch")
        return Matrix(
            [
                [self.data[i][j] - other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self):
        return Matrix([[-x for x in row] for row in self.data])

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            return NotImplemented
        scalar = _as_entry(scalar) if isinstance(scalar, int) else scalar
        return Matrix([[x * scalar for x in row] for row in self.data])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        ot = tuple(zip(*other.data)) if other.data else ()
        out = []
        for row in self.data:
            out_row = []
            for col in ot:
                acc = None
                for a, b in zip(row, col):
                    term = a * b
                    acc = term if acc is None else acc + term
                out_row.append(acc if acc is not None else Fraction(0))
            out.append(out_row)
        if not out or not ot:
            return Matrix.zeros(self.rows, other.cols)
        return Matrix(out)

    def transpose(self):
        return Matrix(tuple(zip(*self.data))) if self.data else Matrix.zeros(self.cols, 0)

    def conj_transpose(self):
        if not self.data:
            return Matrix.zeros(self.cols, 0)
        return Matrix(tuple(tuple(_entry_conj(x) for x in col) for col in zip(*self.data)))

    @property
    def H(self):
        return self.conj_transpose()

    def is_hermitian(self):
        return self.is_square and self == self.conj_transpose()

    def submatrix(self, row_idx, col_idx):
        """Rows and columns by 0-based index lists, order preserved."""
        return Matrix([[self.data[i][j] for j in col_idx] for i in row_idx])

    def map(self, fn):
        return Matrix([[fn(x) for x in row] for row in self.data])

    def trace(self):
        if not self.is_square:
            raise DimensionMismatch("trace of a non-square matrix")
        acc = None
        for i in range(self.rows):
            x = self.data[i][i]
            acc = x if acc is None else acc + x
        return acc if acc is not None else Fraction(0)

    def max_entry_abs(self) -> float:
        return max(
            (entry_abs_float(x) for row in self.data for x in row), default=0.0
        )

    def entry_level(self):
        lvl = 0
        for row in self.data:
            for x in row:
                lvl = max(lvl, _LEVELS[type(x)])
        return lvl

    def to_numpy(self):
        """Dense float64/complex128 array; only for scalar-entried matrices."""
        import numpy as np

        cplx = any(
            isinstance(x, GaussianRational) and x.im != 0
            for row in self.data
            for x in row
        )
        if cplx:
            out = np.empty((self.rows, self.cols), dtype=np.complex128)
            for i, row in enumerate(self.data):
                for j, x in enumerate(row):
                    out[i, j] = complex(x) if isinstance(x, GaussianRational) else float(x)
        else:
            out = np.empty((self.rows, self.cols), dtype=np.float64)
            for i, row in enumerate(self.data):
                for j, x in enumerate(row):
                    x = x.re if isinstance(x, GaussianRational) else x
                    out[i, j] = float(x)
        return out

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.data]!r})"


def _field_div(a, b):
    """Exact division used by elimination: ring-exact for Poly, field otherwise."""
    if isinstance(a, Poly) or isinstance(b, Poly):
        return poly_exact_div(_as_poly(a), _as_poly(b))
    return a / b


def _bareiss_det(rows, n):
    """Fraction-free elimination; rows is a mutable list of lists."""
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not rows[k][k]:
            pivot_row = None
            for i in range(k + 1, n):
                if rows[i][k]:
                    pivot_row = i
                    break
            if pivot_row is None:
                return Fraction(0), 1
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pkk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            for j in range(k + 1, n):
                num = rows[i][j] * pkk - rik * rows[k][j]
                rows[i][j] = _field_div(num, prev)
            rows[i][k] = Fraction(0)
        prev = pkk
    return rows[n - 1][n - 1], sign


def exact_det(m: Matrix):
    """Exact determinant by fraction-free (Bareiss) elimination.

    Rational-function matrices are cleared to polynomial rows first so the
    elimination runs over the polynomial ring; the result type matches the
    entry type (scalar in, scalar out; RatFun in, RatFun out).
    """
    if not m.is_square:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    lvl = m.entry_level()
    if lvl == 3:
        # clear per-row denominators, track the product of multipliers
        rows = []
        mult = Poly((Fraction(1),))
        for row in m.data:
            entries = [x if isinstance(x, RatFun) else RatFun(_as_poly(x)) for x in row]
            l = Poly((Fraction(1),))
            for e in entries:
                l = poly_lcm(l, e.den)
            rows.append([e.num * poly_exact_div(l, e.den) for e in entries])
            mult = mult * l
        det, sign = _bareiss_det(rows, n)
        det = _as_poly(det) if not isinstance(det, Poly) else det
        return RatFun(det if sign == 1 else -det, mult)
    rows = [list(row) for row in m.data]
    det, sign = _bareiss_det(rows, n)
    if lvl == 2 and not isinstance(det, Poly):
        det = _as_poly(det)
    return det if sign == 1 else -det


def char_poly(m: Matrix) -> Poly:
    """Characteristic polynomial det(xI - m) by the Faddeev-LeVerrier recurrence."""
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return Poly((Fraction(1),))
    if m.entry_level() > 1:
        raise TypeError("char_poly expects a scalar-entried matrix")
    mk = Matrix.identity(n)
    am = m @ mk
    cs = []
    for k in range(1, n + 1):
        ck = -am.trace() / k
        cs.append(ck)
        if k < n:
            mk = am + Matrix.identity(n) * ck
            am = m @ mk
    coeffs = list(reversed(cs)) + [Fraction(1)]
    return Poly(coeffs)


def char_poly_via_det(m: Matrix) -> Poly:
    """Independent route: expand det(xI - m) by fraction-free elimination."""
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = m.rows
    shifted = Matrix(
        [
            [
                Poly((-m[i, j], Fraction(1))) if i == j else Poly((-m[i, j],))
                for j in range(n)
            ]
            for i in range(n)
        ]
    ) if n else Matrix.zeros(0, 0)
    det = exact_det(shifted)
    return _as_poly(det)


def exact_inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the entry field; raises SingularMatrix."""
    if not m.is_square:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return Matrix.zeros(0, 0)
    lift = (lambda x: x if isinstance(x, RatFun) else RatFun(_as_poly(x))) if m.entry_level() >= 2 else (lambda x: x)
    a = [[lift(x) for x in row] for row in m.data]
    one = lift(Fraction(1))
    zero = lift(Fraction(0))
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            raise SingularMatrix("matrix is singular (identically zero determinant)")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = a[col][col]
        for j in range(n):
            a[col][j] = a[col][j] / p
            inv[col][j] = inv[col][j] / p
        for i in range(n):
            if i == col:
                continue
            f = a[i][col]
            if not f:
                continue
            for j in range(n):
                a[i][j] = a[i][j] - f * a[col][j]
                inv[i][j] = inv[i][j] - f * inv[col][j]
    return Matrix(inv)


def rref(m: Matrix):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    a = [list(row) for row in m.data]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(nrows):
            if i == r:
                continue
            f = a[i][col]
            if not f:
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return Matrix(a) if a else m, pivots


def nullspace(m: Matrix):
    """Basis of the exact right nullspace, one length-cols vector per element."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, fc]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, rhs):
    """One exact solution of m x = rhs (list of entries); raises if inconsistent."""
    aug = Matrix([list(row) + [rhs[i]] for i, row in enumerate(m.data)])
    red, pivots = rref(aug)
    if m.cols in pivots:
        raise SingularMatrix("inconsistent linear system")
    x = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r, m.cols]
    return x
