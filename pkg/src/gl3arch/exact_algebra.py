"""Exact arithmetic over Q(i): scalars, sparse polynomials and linear algebra.

Everything here is immutable after construction.  Rationals are stdlib
``Fraction`` (arbitrary precision), so factorials of any size are safe.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part given twice")
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, complex):
            raise TypeError("floating complex values are not exact")
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        if hasattr(self, "im"):
            raise AttributeError("GaussianRational is immutable")
        object.__setattr__(self, name, value)

    # construction helpers
    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        return x if isinstance(x, GaussianRational) else cls(x)

    # arithmetic
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if not o.im:
            return GaussianRational(self.re * o.re, self.im * o.re)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison / hashing
    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return GaussianRational(x)
    return NotImplemented


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

GR = GaussianRational


def gr(x) -> GaussianRational:
    return GaussianRational.coerce(x)


def i_power(k: int) -> GaussianRational:
    """``sqrt(-1)**k`` for any integer k."""
    return (ONE, I, -ONE, -I)[k % 4]


def is_in_i_power_times_q(x: GaussianRational, k: int) -> bool:
    """True when ``x`` lies in ``sqrt(-1)**k * Q``."""
    return (x / i_power(k)).is_real()


# ---------------------------------------------------------------------------
# Polynomials


Monomial = Tuple[int, ...]


class MultiPoly:
    """Sparse polynomial in a fixed ordered list of variables over Q(i)."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Monomial, object]] = None):
        self.variables = tuple(variables)
        clean: Dict[Monomial, GaussianRational] = {}
        n = len(self.variables)
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise ValueError("exponent vector length does not match variables")
                if any(e < 0 for e in mono):
                    raise ValueError("negative exponent")
                c = gr(c)
                if c:
                    prev = clean.get(mono)
                    c = c if prev is None else prev + c
                    if c:
                        clean[mono] = c
                    else:
                        del clean[mono]
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, variables, c) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unbound variable {name!r}")
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {mono: ONE})

    @classmethod
    def linear(cls, variables, coeffs: Mapping[str, object]) -> "MultiPoly":
        variables = tuple(variables)
        terms = {}
        for name, c in coeffs.items():
            if name not in variables:
                raise KeyError(f"unbound variable {name!r}")
            mono = tuple(1 if v == name else 0 for v in variables)
            terms[mono] = c
        return cls(variables, terms)

    def zero_like(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {})

    def one_like(self) -> "MultiPoly":
        return MultiPoly._raw(self.variables, {(0,) * len(self.variables): ONE})

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono)
            s = c if s is None else s + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = gr(c)
        if not c:
            return self.zero_like()
        return MultiPoly._raw(self.variables, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        terms: Dict[Monomial, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(mono)
                p = c1 * c2
                terms[mono] = p if s is None else s + p
        return MultiPoly._raw(self.variables, {m: c for m, c in terms.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        return self == MultiPoly.constant(self.variables, other)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, mono: Monomial) -> GaussianRational:
        return self.terms.get(tuple(mono), ZERO)

    def total_degrees(self) -> set:
        return {sum(m) for m in self.terms}

    def derivative(self, name: str) -> "MultiPoly":
        k = self.variables.index(name)
        terms = {}
        for mono, c in self.terms.items():
            e = mono[k]
            if e:
                m = list(mono)
                m[k] = e - 1
                terms[tuple(m)] = c * e
        return MultiPoly._raw(self.variables, terms)

    def derivation(self, images: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Apply the derivation sending each variable v to ``images[v]``."""
        out = self.zero_like()
        for name, image in images.items():
            if image:
                d = self.derivative(name)
                if d:
                    out = out + d * image
        return out

    def substitute(self, mapping: Mapping[str, "MultiPoly"], target_variables: Optional[Sequence[str]] = None) -> "MultiPoly":
        """Replace each variable by a polynomial in ``target_variables``."""
        for name in self.variables:
            if name not in mapping:
                if any(m[self.variables.index(name)] for m in self.terms):
                    raise KeyError(f"unbound variable {name!r}")
        extra = set(mapping) - set(self.variables)
        if extra:
            raise KeyError(f"unbound variable {sorted(extra)[0]!r}")
        if target_variables is None:
            images = [mapping[v] for v in self.variables if v in mapping]
            target_variables = images[0].variables if images else self.variables
        target_variables = tuple(target_variables)
        one = MultiPoly._raw(target_variables, {(0,) * len(target_variables): ONE})
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(k: int, e: int) -> MultiPoly:
            key = (k, e)
            if key not in powers:
                if e == 0:
                    powers[key] = one
                else:
                    powers[key] = power(k, e - 1) * mapping[self.variables[k]]
            return powers[key]

        out = MultiPoly._raw(target_variables, {})
        for mono, c in self.terms.items():
            term = one.scale(c)
            for k, e in enumerate(mono):
                if e:
                    term = term * power(k, e)
            out = out + term
        return out

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, mono) if e]
            parts.append("(" + str(c) + ")" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts)


def poly_substitute(p: MultiPoly, mapping: Mapping[str, MultiPoly], target_variables=None) -> MultiPoly:
    return p.substitute(mapping, target_variables)


# ---------------------------------------------------------------------------
# Linear algebra


class ExactMatrix:
    """Dense matrix over Q(i)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[object]], cols: Optional[int] = None):
        rows = [tuple(gr(x) for x in row) for row in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, r, c):
        return cls([[ZERO] * c for _ in range(r)], c)

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __add__(self, other):
        return ExactMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other):
        return ExactMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.cols)

    def scale(self, c):
        c = gr(c)
        return ExactMatrix([[a * c for a in r] for r in self.entries], self.cols)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ot = other.transpose().entries
            return ExactMatrix([[_dot(r, c) for c in ot] for r in self.entries], other.cols)
        vec = [gr(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return [_dot(r, vec) for r in self.entries]

    def apply(self, vec):
        return self @ vec

    def det(self) -> GaussianRational:
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        a = [list(r) for r in self.entries]
        n = self.rows
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            piv = a[c][c]
            d = d * piv
            inv = piv.inverse()
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def rank(self) -> int:
        return len(_echelon(_to_sparse(self.entries), self.cols)[0])

    def kernel(self) -> List[List[GaussianRational]]:
        return sparse_kernel(_to_sparse(self.entries), self.cols)

    def solve(self, b) -> List[GaussianRational]:
        """Return one exact x with A x = b; raises if inconsistent."""
        b = [gr(x) for x in b]
        if len(b) != self.rows:
            raise ValueError("shape mismatch")
        aug = [{**r, self.cols: bi} if bi else r for r, bi in zip(_to_sparse(self.entries), b)]
        pivots, rows = _echelon(aug, self.cols + 1, reduce=True)
        x = [ZERO] * self.cols
        for (col, piv), row in zip(pivots, rows):
            if col == self.cols:
                raise ValueError("inconsistent linear system")
            rhs = row.get(self.cols)
            if rhs is not None:
                x[col] = _gi_to_gr(rhs) / _gi_to_gr(piv)
        if self @ x != b:
            raise AssertionError("solve failed certification")
        return x

    def inverse(self) -> "ExactMatrix":
        n = self.rows
        cols = [self.solve([ONE if i == j else ZERO for i in range(n)]) for j in range(n)]
        return ExactMatrix(cols, n).transpose()

    def __repr__(self):
        return "ExactMatrix(" + repr([[str(x) for x in r] for r in self.entries]) + ")"


def _dot(r, c) -> GaussianRational:
    acc_re = Fraction(0)
    acc_im = Fraction(0)
    for a, b in zip(r, c):
        if a and b:
            acc_re += a.re * b.re - a.im * b.im
            acc_im += a.re * b.im + a.im * b.re
    return GaussianRational(acc_re, acc_im)


# Sparse fraction-free elimination.  Rows are dicts col -> (a, b) meaning a+bi
# with a, b integers; each row is kept primitive (content gcd 1).

GI = Tuple[int, int]


def _gi_mul(x: GI, y: GI) -> GI:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gi_to_gr(x: GI) -> GaussianRational:
    return GaussianRational(x[0], x[1])


def _row_to_gi(row: Mapping[int, GaussianRational]) -> Dict[int, GI]:
    den = 1
    for c in row.values():
        for q in (c.re, c.im):
            d = q.denominator
            den = den * d // gcd(den, d)
    out = {}
    for k, c in row.items():
        out[k] = (int(c.re * den), int(c.im * den))
    return _primitive(out)


def _primitive(row: Dict[int, GI]) -> Dict[int, GI]:
    g = 0
    for a, b in row.values():
        g = gcd(g, gcd(a, b))
        if g == 1:
            return row
    if g > 1:
        row = {k: (a // g, b // g) for k, (a, b) in row.items()}
    return row


def _to_sparse(entries) -> List[Dict[int, GaussianRational]]:
    return [{j: x for j, x in enumerate(r) if x} for r in entries]


def _eliminate(target: Dict[int, GI], pivot_row: Dict[int, GI], col: int) -> Dict[int, GI]:
    """Return piv*target - target[col]*pivot_row, made primitive."""
    alpha = target[col]
    piv = pivot_row[col]
    out: Dict[int, GI] = {}
    for k, v in target.items():
        out[k] = _gi_mul(piv, v)
    for k, v in pivot_row.items():
        p = _gi_mul(alpha, v)
        cur = out.get(k)
        if cur is None:
            out[k] = (-p[0], -p[1])
        else:
            out[k] = (cur[0] - p[0], cur[1] - p[1])
    out = {k: v for k, v in out.items() if v != (0, 0)}
    return _primitive(out)


def _echelon(rows: Iterable[Mapping[int, GaussianRational]], ncols: int, reduce: bool = True):
    """Fraction-free row echelon form; returns (pivots, rows)."""
    work = [_row_to_gi(r) for r in rows if r]
    by_pivot: Dict[int, Dict[int, GI]] = {}
    for row in work:
        while row:
            col = min(row)
            if col in by_pivot:
                row = _eliminate(row, by_pivot[col], col)
            else:
                by_pivot[col] = row
                break
    order = sorted(by_pivot)
    if reduce:
        for idx in range(len(order) - 1, -1, -1):
            col = order[idx]
            prow = by_pivot[col]
            for other in order[:idx]:
                r = by_pivot[other]
                if col in r:
                    by_pivot[other] = _eliminate(r, prow, col)
    pivots = [(c, by_pivot[c][c]) for c in order]
    return pivots, [by_pivot[c] for c in order]


def sparse_kernel(rows: Iterable[Mapping[int, object]], ncols: int) -> List[List[GaussianRational]]:
    """Exact kernel basis of a sparse system (rows: dict col -> scalar)."""
    rows = [{k: gr(v) for k, v in r.items() if v} for r in rows]
    pivots, reduced = _echelon(rows, ncols, reduce=True)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for (c, piv), row in zip(pivots, reduced):
            a = row.get(f)
            if a is not None:
                v[c] = -_gi_to_gr(a) / _gi_to_gr(piv)
        basis.append(v)
    # certify
    for v in basis:
        for r in rows:
            s = ZERO
            for k, x in r.items():
                if v[k]:
                    s = s + x * v[k]
            if s:
                raise AssertionError("kernel certification failed")
    return basis


def kernel(A: ExactMatrix) -> List[List[GaussianRational]]:
    return A.kernel()


def solve(A: ExactMatrix, b) -> List[GaussianRational]:
    return A.solve(b)


class Coordinatizer:
    """Exact coordinates of polynomials with respect to a fixed basis.

    The basis polynomials must be linearly independent; coordinates of a
    polynomial outside their span raise ``ValueError``.
    """

    def __init__(self, basis: Sequence[MultiPoly]):
        self.basis = list(basis)
        monos = sorted({m for p in self.basis for m in p.terms})
        self.monomials = monos
        self.index = {m: k for k, m in enumerate(monos)}
        n = len(self.basis)
        # Augmented rows [coefficients over monomials | identity]
        rows = []
        for j, p in enumerate(self.basis):
            r = {self.index[m]: c for m, c in p.terms.items()}
            r[len(monos) + j] = ONE
            rows.append(r)
        pivots, reduced = _echelon(rows, len(monos) + n, reduce=True)
        if any(c >= len(monos) for c, _ in pivots):
            raise ValueError("basis polynomials are linearly dependent")
        self._pivots = [(c, _gi_to_gr(p)) for c, p in pivots]
        self._rows = [{k: _gi_to_gr(v) for k, v in r.items()} for r in reduced]
        self._nmono = len(monos)

    def coordinates(self, p: MultiPoly) -> List[GaussianRational]:
        n = len(self.basis)
        coords = [ZERO] * n
        vals = dict(p.terms)
        for mono in vals:
            if mono not in self.index:
                raise ValueError("polynomial is outside the span of the basis")
        # p = sum_j x_j basis_j.  Each reduced row says: sum_m R[m]*mono_m
        # equals combination sum_j R[nmono+j]*basis_j, with only one pivot
        # monomial per row after full reduction.
        residual = {self.index[m]: c for m, c in vals.items()}
        for (col, piv), row in zip(self._pivots, self._rows):
            a = residual.get(col)
            if not a:
                continue
            f = a / piv
            for k, v in row.items():
                if k < self._nmono:
                    nv = residual.get(k, ZERO) - f * v
                    if nv:
                        residual[k] = nv
                    else:
                        residual.pop(k, None)
                else:
                    coords[k - self._nmono] = coords[k - self._nmono] + f * v
        if residual:
            raise ValueError("polynomial is outside the span of the basis")
        return coords

    def combine(self, coords: Sequence[object]) -> MultiPoly:
        out = self.basis[0].zero_like() if self.basis else None
        for c, p in zip(coords, self.basis):
            c = gr(c)
            if c:
                out = out + p.scale(c)
        return out
