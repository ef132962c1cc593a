"""Exact scalar, polynomial and matrix arithmetic.

Every number in plovlab is a :class:`fractions.Fraction`; nothing here ever
touches floating point.  The two containers defined below are deliberately
small:

* :class:`QPoly`, a univariate polynomial with rational coefficients,
* :class:`RatMatrix`, a dense rational matrix.

On top of them sit the handful of algorithms the dynamics code needs:
characteristic polynomials, rank and kernel, cyclotomic detection and Newton
interpolation.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import comb, factorial, gcd
from typing import Iterable, Sequence

Rational = Fraction


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial.

    Compares below every integer and absorbs addition, so that
    ``deg(p * q) == deg(p) + deg(q)`` holds without special cases.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf-degree")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "MINUS_INFINITY"


MINUS_INFINITY = _MinusInfinity()


class QPoly:
    """Polynomial in one variable with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``n**i``; trailing zeros are trimmed
    so the zero polynomial has no coefficients at all.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "QPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "QPoly":
        return cls([0] * degree + [c])

    @classmethod
    def x(cls) -> "QPoly":
        return cls([0, 1])

    @classmethod
    def binomial(cls, shift: int, j: int) -> "QPoly":
        """The polynomial ``n -> C(n + shift, j)``."""
        p = cls([1])
        for t in range(j):
            p = p * cls([shift - t, 1])
        return p.scale(Fraction(1, factorial(j)))

    @property
    def degree(self):
        if not self.coeffs:
            return MINUS_INFINITY
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.constant(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = QPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c) -> "QPoly":
        c = to_rational(c)
        return QPoly(c * x for x in self.coeffs)

    def derivative(self) -> "QPoly":
        return QPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lc = other.coeffs[-1]
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c:
                t = c / lc
                quo[i - dq] = t
                for j, oc in enumerate(other.coeffs):
                    rem[i - dq + j] -= t * oc
        return QPoly(quo), QPoly(rem[:dq])

    __divmod__ = divmod

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading_coefficient)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __repr__(self):
        return f"QPoly({self.to_string()!r})"

    def to_string(self, var: str = "n") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = format_rational(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    __str__ = to_string


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: QPoly) -> QPoly:
    """Product of the distinct irreducible factors of ``p`` (monic)."""
    if p.degree == MINUS_INFINITY or p.degree == 0:
        return QPoly([1])
    return (p // poly_gcd(p, p.derivative())).monic()


# --- number theory for cyclotomic detection -------------------------------


def euler_phi(k: int) -> int:
    result, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> QPoly:
    """The k-th cyclotomic polynomial, from x^k - 1 = prod_{e | k} Phi_e."""
    if k < 1:
        raise ValueError("cyclotomic index must be positive")
    p = QPoly([-1] + [0] * (k - 1) + [1])
    for e in range(1, k):
        if k % e == 0:
            p = p // cyclotomic(e)
    return p


def cyclotomic_search_bound(h: int) -> int:
    """Largest index that can have ``euler_phi(k) <= h``.

    phi(k) >= sqrt(k/2) for every k >= 1, so phi(k) <= h forces k <= 2*h*h.
    """
    return 2 * h * h


def cyclotomic_order(q: QPoly) -> int | None:
    """Return k if ``q`` is the k-th cyclotomic polynomial, else None.

    ``q`` must be monic with integer coefficients.  Only indices with
    ``euler_phi(k) == deg q`` and ``k <= 2 * deg(q)**2`` are searched, which
    covers every candidate.
    """
    if not q.is_monic() or not q.is_integral():
        raise PreconditionError("cyclotomic_order needs a monic integer polynomial")
    deg = q.degree
    for k in range(1, cyclotomic_search_bound(deg) + 1):
        if euler_phi(k) == deg and cyclotomic(k) == q:
            return k
    return None


def strip_cyclotomic_factors(p: QPoly) -> tuple[dict[int, int], QPoly]:
    """Divide every cyclotomic factor out of a monic polynomial.

    Returns ``(multiplicities, remainder)`` where ``multiplicities[k]`` is the
    power of Phi_k dividing ``p``; the remainder is monic and has no
    cyclotomic factor.
    """
    rem = p.monic()
    found: dict[int, int] = {}
    h = rem.degree if rem.degree != MINUS_INFINITY else 0
    for k in range(1, cyclotomic_search_bound(max(h, 1)) + 1):
        if rem.degree == 0:
            break
        if euler_phi(k) > rem.degree:
            continue
        phi = cyclotomic(k)
        while rem.degree >= phi.degree:
            quo, r = rem.divmod(phi)
            if not r.is_zero():
                break
            rem = quo
            found[k] = found.get(k, 0) + 1
    return found, rem


# --- interpolation ----------------------------------------------------------


def interpolate(points: Sequence[tuple[int, object]]) -> QPoly:
    """Unique polynomial of degree < len(points) through ``points``.

    Uses Newton divided differences in exact arithmetic.
    """
    if not points:
        raise PreconditionError("interpolation needs at least one point")
    xs = [to_rational(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise PreconditionError("interpolation abscissae must be distinct")
    table = [to_rational(y) for _, y in points]
    coef = [table[0]]
    m = len(xs)
    for level in range(1, m):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(m - level)
        ]
        coef.append(table[0])
    # Horner on the Newton form.
    poly = QPoly([coef[-1]])
    for i in range(m - 2, -1, -1):
        poly = poly * QPoly([-xs[i], 1]) + coef[i]
    return poly


# --- matrices ---------------------------------------------------------------


class RatMatrix:
    """Immutable dense matrix of Fractions (row-major)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence]):
        rows = [tuple(to_rational(x) for x in row) for row in data]
        if not rows or not rows[0]:
            raise DimensionError("matrices must be non-empty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged matrix rows")
        self._data: tuple[tuple[Fraction, ...], ...] = tuple(rows)
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def _wrap(cls, rows) -> "RatMatrix":
        # trusted constructor: rows already tuples of Fractions
        m = cls.__new__(cls)
        m._data = tuple(tuple(r) for r in rows)
        m.rows = len(m._data)
        m.cols = len(m._data[0])
        return m

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._wrap([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RatMatrix":
        return cls._wrap([[Fraction(0)] * c for _ in range(r)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        return cls(list(zip(*columns)))

    @classmethod
    def block_diag(cls, a: "RatMatrix", b: "RatMatrix") -> "RatMatrix":
        z = Fraction(0)
        out = [list(r) + [z] * b.cols for r in a._data]
        out += [[z] * a.cols + list(r) for r in b._data]
        return cls._wrap(out)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._data for x in r)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = ", ".join(
            "[" + ", ".join(format_rational(x) for x in r) + "]" for r in self._data
        )
        return f"RatMatrix([{body}])"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return RatMatrix._wrap(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return RatMatrix._wrap(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def __neg__(self):
        return RatMatrix._wrap([[-a for a in r] for r in self._data])

    def scale(self, c) -> "RatMatrix":
        c = to_rational(c)
        return RatMatrix._wrap([[c * a for a in r] for r in self._data])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._data))
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols])
        return RatMatrix._wrap(out)

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), Fraction(0)) for r in self._data)

    def __pow__(self, e: int) -> "RatMatrix":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        out = RatMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def transpose(self) -> "RatMatrix":
        return RatMatrix._wrap(list(zip(*self._data)))

    T = property(transpose)

    def kron(self, other: "RatMatrix") -> "RatMatrix":
        out = []
        for r in self._data:
            for s in other._data:
                out.append([a * b for a in r for b in s])
        return RatMatrix._wrap(out)

    def trace(self) -> Fraction:
        return sum((self._data[i][i] for i in range(min(self.shape))), Fraction(0))

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in self._data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            p = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        """Determinant by Bareiss fraction-free elimination."""
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        m = [list(r) for r in self._data]
        sign = 1
        prev = Fraction(1)
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return Fraction(0)
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def inverse(self) -> "RatMatrix":
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = RatMatrix._wrap(
            [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._data)]
        )
        m, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix._wrap([row[n:] for row in m])


def rank_and_nullspace(m: RatMatrix) -> tuple[int, list[tuple[Fraction, ...]]]:
    """Rank and a basis of the right kernel ``{v : m v = 0}``."""
    red, pivots = m.rref()
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return len(pivots), basis


def char_poly(m: RatMatrix) -> QPoly:
    """det(x I - m), by Hessenberg reduction followed by the standard recurrence.

    O(n^3) field operations, no square roots, exact over Q.
    """
    if not m.is_square:
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = m.rows
    h = [list(r) for r in m.tolist()]
    # similarity transform to upper Hessenberg form
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        pv = h[j + 1][j]
        for i in range(j + 2, n):
            f = h[i][j] / pv
            if f == 0:
                continue
            h[i] = [a - f * b for a, b in zip(h[i], h[j + 1])]
            for row in h:
                row[j + 1] += f * row[i]
    # p_k = char poly of the leading k x k block
    polys = [QPoly([1])]
    x = QPoly.x()
    for k in range(1, n + 1):
        p = (x - h[k - 1][k - 1]) * polys[k - 1]
        prod = Fraction(1)
        for i in range(1, k):
            prod *= h[k - i][k - i - 1]
            if prod == 0:
                break
            p = p - polys[k - i - 1].scale(prod * h[k - i - 1][k - 1])
        polys.append(p)
    return polys[n]


def eval_matrix_poly(p: QPoly, m: RatMatrix) -> RatMatrix:
    """p(m) by Horner's rule."""
    out = RatMatrix.zeros(m.rows, m.cols)
    ident = RatMatrix.identity(m.rows)
    for c in reversed(p.coeffs):
        out = out @ m + ident.scale(c)
    return out


def multinomial(counts: Iterable[int]) -> int:
    total, out = 0, 1
    for c in counts:
        total += c
        out *= comb(total, c)
    return out


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_is_zero(v) -> bool:
    return all(a == 0 for a in v)
