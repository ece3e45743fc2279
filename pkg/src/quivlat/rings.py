"""Exact linear algebra over a small family of computable commutative rings.

Supported rings and their element representations:

* ``Z``          -- the integers, plain ``int``
* ``Q``          -- the rationals, ``fractions.Fraction``
* ``F:p``        -- the prime field F_p, ``int`` in ``[0, p)``
* ``Zmod:m``     -- Z/m for any m >= 2, ``int`` in ``[0, m)``
* ``Feps:p:n``   -- F_p[e]/(e^n), a length-``n`` tuple of coefficient ints

All arithmetic is exact.  Intermediate entries of integer reductions can
grow far beyond machine word size, so everything stays on Python ints.

The normal form produced by :func:`normal_form` is a two-sided canonical
form ``left * M * right`` with invertible transforms: reduced row echelon
over the fields, the classical divisibility-chain diagonal over Z, and the
same diagonal shape with canonical ideal generators over Z/m and the
truncated polynomial rings (both principal ideal rings).  Row spans over
the latter two are canonicalised separately by a Howell-form pass, which
is what :func:`kernel_basis` uses for its generating sets; the Howell form
of a row span may need more rows than the input matrix has, so it cannot
serve as the shape-preserving two-sided form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    IncompatibleBase,
    IncompatibleRing,
    NotComputable,
    NotProjective,
    ParseError,
)

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid far beyond any modulus we meet
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _factorize(m: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division; moduli here are small."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            k = 0
            while m % d == 0:
                m //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True)
class RingSpec:
    """One of the supported coefficient rings.

    kind is "Z", "Q", "F" (prime field, parameter p), "Zmod" (parameter m)
    or "Feps" (truncated polynomials, parameters p and n).
    """

    kind: str
    p: int = 0
    m: int = 0
    n: int = 0

    def __post_init__(self):
        if self.kind in ("Z", "Q"):
            if self.p or self.m or self.n:
                raise ParseError("%s takes no parameters" % self.kind)
        elif self.kind == "F":
            if not _is_prime(self.p):
                raise ParseError("F:%d needs a prime" % self.p)
        elif self.kind == "Zmod":
            if self.m < 2:
                raise ParseError("Zmod needs modulus >= 2")
        elif self.kind == "Feps":
            if not _is_prime(self.p):
                raise ParseError("Feps:%d:%d needs a prime" % (self.p, self.n))
            if self.n < 1:
                raise ParseError("Feps truncation order must be >= 1")
        else:
            raise ParseError("unknown ring kind %r" % (self.kind,))

    # -- textual spec ------------------------------------------------------

    def __str__(self) -> str:
        if self.kind == "F":
            return "F:%d" % self.p
        if self.kind == "Zmod":
            return "Zmod:%d" % self.m
        if self.kind == "Feps":
            return "Feps:%d:%d" % (self.p, self.n)
        return self.kind

    @staticmethod
    def parse(text: str) -> "RingSpec":
        parts = text.strip().split(":")
        try:
            if parts[0] == "Z" and len(parts) == 1:
                return ZZ
            if parts[0] == "Q" and len(parts) == 1:
                return QQ
            if parts[0] == "F" and len(parts) == 2:
                return RingSpec("F", p=int(parts[1]))
            if parts[0] == "Zmod" and len(parts) == 2:
                return RingSpec("Zmod", m=int(parts[1]))
            if parts[0] == "Feps" and len(parts) == 3:
                return RingSpec("Feps", p=int(parts[1]), n=int(parts[2]))
        except ValueError as exc:
            raise ParseError("bad ring spec %r" % text) from exc
        raise ParseError("bad ring spec %r" % text)

    # -- structural properties --------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "F")

    @property
    def is_domain(self) -> bool:
        return self.kind in ("Z", "Q", "F")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("F", "Zmod", "Feps")

    @property
    def size(self) -> int:
        if self.kind == "F":
            return self.p
        if self.kind == "Zmod":
            return self.m
        if self.kind == "Feps":
            return self.p ** self.n
        raise IncompatibleRing("ring %s is not finite" % self)

    def elements(self):
        """Iterate every element of a finite ring, deterministically."""
        if self.kind == "F":
            return range(self.p)
        if self.kind == "Zmod":
            return range(self.m)
        if self.kind == "Feps":
            return (tuple(reversed(t)) for t in
                    itertools.product(range(self.p), repeat=self.n))
        raise IncompatibleRing("ring %s is not finite" % self)

    # -- element arithmetic ------------------------------------------------

    @property
    def zero(self):
        if self.kind == "Q":
            return _FRACTION_ZERO
        if self.kind == "Feps":
            return (0,) * self.n
        return 0

    @property
    def one(self):
        if self.kind == "Q":
            return _FRACTION_ONE
        if self.kind == "Feps":
            return (1,) + (0,) * (self.n - 1)
        return 1

    def canon(self, x):
        """Canonical representative of x, accepting liberal input forms."""
        k = self.kind
        if k == "Z":
            if isinstance(x, bool) or not isinstance(x, int):
                raise ParseError("integer entry expected, got %r" % (x,))
            return x
        if k == "Q":
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int) and not isinstance(x, bool):
                return Fraction(x)
            raise ParseError("rational entry expected, got %r" % (x,))
        if k in ("F", "Zmod"):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ParseError("integer entry expected, got %r" % (x,))
            return x % (self.p if k == "F" else self.m)
        # Feps: accept an int (constant) or a coefficient sequence
        if isinstance(x, int) and not isinstance(x, bool):
            return (x % self.p,) + (0,) * (self.n - 1)
        coeffs = tuple(int(c) % self.p for c in x)
        if len(coeffs) > self.n:
            if any(coeffs[self.n:]):
                raise ParseError("coefficient list longer than truncation order")
            coeffs = coeffs[: self.n]
        return coeffs + (0,) * (self.n - len(coeffs))

    def add(self, a, b):
        k = self.kind
        if k == "F":
            return (a + b) % self.p
        if k == "Zmod":
            return (a + b) % self.m
        if k == "Feps":
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        return a + b

    def neg(self, a):
        k = self.kind
        if k == "F":
            return -a % self.p
        if k == "Zmod":
            return -a % self.m
        if k == "Feps":
            p = self.p
            return tuple(-x % p for x in a)
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        k = self.kind
        if k == "F":
            return a * b % self.p
        if k == "Zmod":
            return a * b % self.m
        if k == "Feps":
            p, n = self.p, self.n
            out = [0] * n
            for i, ai in enumerate(a):
                if ai:
                    for j in range(n - i):
                        bj = b[j]
                        if bj:
                            out[i + j] = (out[i + j] + ai * bj) % p
            return tuple(out)
        return a * b

    def dot(self, xs, ys) -> object:
        """Sum of products; one reduction at the end where that is cheaper."""
        k = self.kind
        if k == "F":
            return sum(x * y for x, y in zip(xs, ys)) % self.p
        if k == "Zmod":
            return sum(x * y for x, y in zip(xs, ys)) % self.m
        if k == "Feps":
            p, n = self.p, self.n
            out = [0] * n
            for a, b in zip(xs, ys):
                for i, ai in enumerate(a):
                    if ai:
                        for j in range(n - i):
                            if b[j]:
                                out[i + j] += ai * b[j]
            return tuple(c % p for c in out)
        total = self.zero
        for x, y in zip(xs, ys):
            total += x * y
        return total

    def is_zero(self, a) -> bool:
        if self.kind == "Feps":
            return not any(a)
        return a == 0

    def is_unit(self, a) -> bool:
        k = self.kind
        if k == "Z":
            return a in (1, -1)
        if k in ("Q", "F"):
            return not self.is_zero(a)
        if k == "Zmod":
            return math.gcd(a, self.m) == 1
        return a[0] != 0

    def inv(self, a):
        k = self.kind
        if k == "Z":
            if a in (1, -1):
                return a
            raise IncompatibleRing("%r is not an integer unit" % a)
        if k == "Q":
            return _FRACTION_ONE / a
        if k == "F":
            return pow(a, -1, self.p)
        if k == "Zmod":
            return pow(a, -1, self.m)
        # power series inversion, coefficient by coefficient
        if a[0] == 0:
            raise IncompatibleRing("non-unit in truncated ring")
        p, n = self.p, self.n
        c0inv = pow(a[0], -1, p)
        out = [c0inv] + [0] * (n - 1)
        for kk in range(1, n):
            acc = 0
            for i in range(1, kk + 1):
                acc += a[i] * out[kk - i]
            out[kk] = (-c0inv * acc) % p
        return tuple(out)

    # -- divisibility and ideals -------------------------------------------

    def _val(self, a) -> int:
        """e-adic valuation in a truncated ring; n means zero."""
        for i, c in enumerate(a):
            if c:
                return i
        return self.n

    def solve_scalar(self, a, c):
        """Some x with a*x = c, or None."""
        if self.is_zero(c):
            return self.zero
        k = self.kind
        if self.is_zero(a):
            return None
        if k == "Z":
            return c // a if c % a == 0 else None
        if k in ("Q", "F"):
            return self.mul(self.inv(a), c)
        if k == "Zmod":
            m = self.m
            g = math.gcd(a, m)
            if c % g:
                return None
            mg = m // g
            if mg == 1:
                return 0
            return (c // g) * pow(a // g, -1, mg) % mg
        va, vc = self._val(a), self._val(c)
        if va > vc:
            return None
        unit = tuple(a[va:]) + (0,) * va
        quot = self.mul(self.inv(unit), c)
        return tuple(quot[va:]) + (0,) * va

    def divides(self, a, b) -> bool:
        return self.solve_scalar(a, b) is not None

    def gcdex(self, a, b):
        """Return (g, s, t, u, v) with s*a + t*b = g, u*a + v*b = 0 and
        s*v - t*u a unit, so the 2x2 transform is invertible."""
        if self.is_zero(b):
            return a, self.one, self.zero, self.zero, self.one
        if self.is_zero(a):
            return b, self.zero, self.one, self.one, self.zero
        k = self.kind
        if k in ("Q", "F"):
            return a, self.one, self.zero, self.neg(self.mul(b, self.inv(a))), self.one
        if k == "Z":
            g, s, t = _egcd(a, b)
            return g, s, t, -(b // g), a // g
        if k == "Zmod":
            m = self.m
            g, s, t = _egcd(a, b)
            return g % m, s % m, t % m, (-(b // g)) % m, (a // g) % m
        va, vb = self._val(a), self._val(b)
        if va <= vb:
            q = self.solve_scalar(a, b)
            return a, self.one, self.zero, self.neg(q), self.one
        q = self.solve_scalar(b, a)
        return b, self.zero, self.one, self.one, self.neg(q)

    def canonical_gen(self, x):
        """The canonical generator of the ideal (x)."""
        k = self.kind
        if k == "Z":
            return abs(x)
        if k in ("Q", "F"):
            return self.zero if self.is_zero(x) else self.one
        if k == "Zmod":
            return math.gcd(x, self.m) % self.m
        v = self._val(x)
        if v >= self.n:
            return self.zero
        return tuple(1 if i == v else 0 for i in range(self.n))

    def ann_gen(self, x):
        """Canonical generator of the annihilator ideal of x."""
        k = self.kind
        if k in ("Z", "Q", "F"):
            return self.one if self.is_zero(x) else self.zero
        if k == "Zmod":
            m = self.m
            return (m // math.gcd(x, m)) % m
        v = self._val(x)
        w = self.n - v
        if w >= self.n:
            return self.one if v >= self.n else self.zero
        return tuple(1 if i == w else 0 for i in range(self.n))

    def unit_to_canonical(self, x):
        """A unit u with u*x equal to canonical_gen(x)."""
        k = self.kind
        if self.is_zero(x):
            return self.one
        if k == "Z":
            return -1 if x < 0 else 1
        if k in ("Q", "F"):
            return self.inv(x)
        if k == "Zmod":
            m = self.m
            g = math.gcd(x, m)
            d = x // g
            mg = m // g
            w = 0 if mg == 1 else pow(d, -1, mg)
            for kk in range(g + 1):
                cand = w + kk * mg
                if math.gcd(cand % m, m) == 1:
                    return cand % m
            raise IncompatibleRing("no unit lift found")  # pragma: no cover
        v = self._val(x)
        unit_part = tuple(x[v:]) + (0,) * v
        return self.inv(unit_part)

    def pivot_size(self, x) -> int:
        """Selection weight for pivoting; 1 exactly on units."""
        k = self.kind
        if k == "Z":
            return abs(x)
        if k in ("Q", "F"):
            return 1
        if k == "Zmod":
            return math.gcd(x, self.m)
        return self._val(x) + 1

    # -- JSON entry forms ---------------------------------------------------

    def entry_from_json(self, value):
        if self.kind == "Q" and isinstance(value, str):
            num, _, den = value.partition("/")
            try:
                return Fraction(int(num), int(den or "1"))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError("bad rational literal %r" % value) from exc
        if self.kind == "Feps" and isinstance(value, (list, tuple)):
            return self.canon(value)
        if isinstance(value, int) and not isinstance(value, bool):
            return self.canon(value)
        raise ParseError("bad entry %r for ring %s" % (value, self))

    def entry_to_json(self, x):
        if self.kind == "Q":
            return int(x) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
        if self.kind == "Feps":
            return list(x)
        return x


ZZ = RingSpec("Z")
QQ = RingSpec("Q")
_FRACTION_ZERO = Fraction(0)
_FRACTION_ONE = Fraction(1)


def GF(p: int) -> RingSpec:
    return RingSpec("F", p=p)


def Zmod(m: int) -> RingSpec:
    return RingSpec("Zmod", m=m)


def Feps(p: int, n: int) -> RingSpec:
    return RingSpec("Feps", p=p, n=n)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable matrix with canonicalised entries over a RingSpec."""

    ring: RingSpec
    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        data = self.entries
        if len(data) != self.rows:
            raise DimensionMismatch(
                "expected %d rows, got %d" % (self.rows, len(data)))
        canon = self.ring.canon
        fixed = []
        for row in data:
            row = tuple(canon(x) for x in row)
            if len(row) != self.cols:
                raise DimensionMismatch(
                    "expected %d columns, got %d" % (self.cols, len(row)))
            fixed.append(row)
        object.__setattr__(self, "entries", tuple(fixed))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(ring: RingSpec, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return ExactMatrix(ring, len(rows), ncols, tuple(rows))

    @staticmethod
    def zeros(ring: RingSpec, rows: int, cols: int) -> "ExactMatrix":
        z = ring.zero
        return ExactMatrix(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(ring: RingSpec, size: int) -> "ExactMatrix":
        z, o = ring.zero, ring.one
        return ExactMatrix(
            ring, size, size,
            tuple(tuple(o if i == j else z for j in range(size)) for i in range(size)))

    # -- basic operations ----------------------------------------------------

    def _check_same_shape(self, other: "ExactMatrix"):
        if self.ring != other.ring:
            raise IncompatibleRing("mixed rings %s and %s" % (self.ring, other.ring))
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape %dx%d vs %dx%d" % (
                self.rows, self.cols, other.rows, other.cols))

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        add = self.ring.add
        data = tuple(tuple(add(a, b) for a, b in zip(ra, rb))
                     for ra, rb in zip(self.entries, other.entries))
        return ExactMatrix(self.ring, self.rows, self.cols, data)

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.add(other.neg())

    def neg(self) -> "ExactMatrix":
        neg = self.ring.neg
        data = tuple(tuple(neg(a) for a in row) for row in self.entries)
        return ExactMatrix(self.ring, self.rows, self.cols, data)

    def scale(self, c) -> "ExactMatrix":
        c = self.ring.canon(c)
        mul = self.ring.mul
        data = tuple(tuple(mul(c, a) for a in row) for row in self.entries)
        return ExactMatrix(self.ring, self.rows, self.cols, data)

    def mul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise IncompatibleRing("mixed rings %s and %s" % (self.ring, other.ring))
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions %d vs %d" % (self.cols, other.rows))
        if self.cols == 0:
            return ExactMatrix.zeros(self.ring, self.rows, other.cols)
        dot = self.ring.dot
        bt = tuple(zip(*other.entries))
        data = tuple(tuple(dot(row, col) for col in bt) for row in self.entries)
        return ExactMatrix(self.ring, self.rows, other.cols, data)

    def transpose(self) -> "ExactMatrix":
        if self.rows and self.cols:
            data = tuple(zip(*self.entries))
        else:
            # degenerate shapes still need the right number of empty rows
            data = tuple(() for _ in range(self.cols))
        return ExactMatrix(self.ring, self.cols, self.rows, data)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise IncompatibleRing("mixed rings")
        if self.rows != other.rows:
            raise DimensionMismatch("row counts %d vs %d" % (self.rows, other.rows))
        data = tuple(ra + rb for ra, rb in zip(self.entries, other.entries))
        return ExactMatrix(self.ring, self.rows, self.cols + other.cols, data)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring:
            raise IncompatibleRing("mixed rings")
        if self.cols != other.cols:
            raise DimensionMismatch("column counts %d vs %d" % (self.cols, other.cols))
        return ExactMatrix(self.ring, self.rows + other.rows, self.cols,
                           self.entries + other.entries)

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        z = self.ring.is_zero
        return all(z(x) for row in self.entries for x in row)

    def to_json(self) -> list:
        conv = self.ring.entry_to_json
        return [conv(x) for row in self.entries for x in row]


def block_diag(ring: RingSpec, blocks: Sequence[ExactMatrix]) -> ExactMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    z = ring.zero
    data = [[z] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        if b.ring != ring:
            raise IncompatibleRing("mixed rings in block sum")
        for i in range(b.rows):
            data[r0 + i][c0:c0 + b.cols] = b.entries[i]
        r0 += b.rows
        c0 += b.cols
    return ExactMatrix(ring, rows, cols, tuple(tuple(r) for r in data))


# ---------------------------------------------------------------------------
# two-sided diagonalisation with tracked transforms


class _Worksheet:
    """Mutable matrix plus whichever transforms the caller asked for.

    Maintains N = left * M * right, left_inv = left^-1, right_inv = right^-1.
    """

    def __init__(self, mat: ExactMatrix, need_left, need_right,
                 need_left_inv, need_right_inv):
        self.ring = mat.ring
        self.rows = mat.rows
        self.cols = mat.cols
        self.n = [list(row) for row in mat.entries]
        ident = lambda k: [[self.ring.one if i == j else self.ring.zero
                            for j in range(k)] for i in range(k)]
        self.left = ident(mat.rows) if need_left else None
        self.left_inv = ident(mat.rows) if need_left_inv else None
        self.right = ident(mat.cols) if need_right else None
        self.right_inv = ident(mat.cols) if need_right_inv else None

    # row ops: N <- E N, left <- E left, left_inv <- left_inv E^-1

    def swap_rows(self, i, j):
        if i == j:
            return
        self.n[i], self.n[j] = self.n[j], self.n[i]
        if self.left is not None:
            self.left[i], self.left[j] = self.left[j], self.left[i]
        if self.left_inv is not None:
            for row in self.left_inv:
                row[i], row[j] = row[j], row[i]

    def scale_row(self, i, u):
        ring = self.ring
        mul = ring.mul
        self.n[i] = [mul(u, x) for x in self.n[i]]
        if self.left is not None:
            self.left[i] = [mul(u, x) for x in self.left[i]]
        if self.left_inv is not None:
            uinv = ring.inv(u)
            for row in self.left_inv:
                row[i] = mul(row[i], uinv)

    def addmul_row(self, i, j, c):
        """row_i += c * row_j"""
        ring = self.ring
        add, mul = ring.add, ring.mul
        self.n[i] = [add(x, mul(c, y)) for x, y in zip(self.n[i], self.n[j])]
        if self.left is not None:
            self.left[i] = [add(x, mul(c, y))
                            for x, y in zip(self.left[i], self.left[j])]
        if self.left_inv is not None:
            nc = ring.neg(c)
            for row in self.left_inv:
                row[j] = add(row[j], mul(nc, row[i]))

    def rows2(self, i, j, s, t, u, v):
        """(row_i, row_j) <- (s,t; u,v) (row_i, row_j); determinant a unit."""
        ring = self.ring
        add, mul = ring.add, ring.mul

        def combine(ri, rj):
            new_i = [add(mul(s, x), mul(t, y)) for x, y in zip(ri, rj)]
            new_j = [add(mul(u, x), mul(v, y)) for x, y in zip(ri, rj)]
            return new_i, new_j

        self.n[i], self.n[j] = combine(self.n[i], self.n[j])
        if self.left is not None:
            self.left[i], self.left[j] = combine(self.left[i], self.left[j])
        if self.left_inv is not None:
            det = ring.sub(mul(s, v), mul(t, u))
            dinv = ring.inv(det)
            a, b = mul(dinv, v), ring.neg(mul(dinv, t))
            c, d = ring.neg(mul(dinv, u)), mul(dinv, s)
            for row in self.left_inv:
                x, y = row[i], row[j]
                row[i] = add(mul(x, a), mul(y, c))
                row[j] = add(mul(x, b), mul(y, d))

    # column ops: N <- N F, right <- right F, right_inv <- F^-1 right_inv

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.n:
            row[i], row[j] = row[j], row[i]
        if self.right is not None:
            for row in self.right:
                row[i], row[j] = row[j], row[i]
        if self.right_inv is not None:
            ri = self.right_inv
            ri[i], ri[j] = ri[j], ri[i]

    def scale_col(self, j, u):
        ring = self.ring
        mul = ring.mul
        for row in self.n:
            row[j] = mul(row[j], u)
        if self.right is not None:
            for row in self.right:
                row[j] = mul(row[j], u)
        if self.right_inv is not None:
            uinv = ring.inv(u)
            self.right_inv[j] = [mul(uinv, x) for x in self.right_inv[j]]

    def addmul_col(self, j, k, c):
        """col_j += c * col_k"""
        ring = self.ring
        add, mul = ring.add, ring.mul
        for row in self.n:
            row[j] = add(row[j], mul(c, row[k]))
        if self.right is not None:
            for row in self.right:
                row[j] = add(row[j], mul(c, row[k]))
        if self.right_inv is not None:
            nc = ring.neg(c)
            ri = self.right_inv
            ri[k] = [add(x, mul(nc, y)) for x, y in zip(ri[k], ri[j])]

    def cols2(self, i, j, s, t, u, v):
        """(col_i, col_j) <- (col_i, col_j) (s,u; t,v): col_i' = s c_i + t c_j."""
        ring = self.ring
        add, mul = ring.add, ring.mul
        for row in self.n:
            x, y = row[i], row[j]
            row[i] = add(mul(s, x), mul(t, y))
            row[j] = add(mul(u, x), mul(v, y))
        if self.right is not None:
            for row in self.right:
                x, y = row[i], row[j]
                row[i] = add(mul(s, x), mul(t, y))
                row[j] = add(mul(u, x), mul(v, y))
        if self.right_inv is not None:
            det = ring.sub(mul(s, v), mul(t, u))
            dinv = ring.inv(det)
            a, b = mul(dinv, v), ring.neg(mul(dinv, u))
            c, d = ring.neg(mul(dinv, t)), mul(dinv, s)
            ri = self.right_inv
            new_i = [add(mul(a, x), mul(b, y)) for x, y in zip(ri[i], ri[j])]
            new_j = [add(mul(c, x), mul(d, y)) for x, y in zip(ri[i], ri[j])]
            ri[i], ri[j] = new_i, new_j

    # -- the reduction -------------------------------------------------------

    def _find_pivot(self, s):
        ring = self.ring
        best = None
        best_size = None
        for i in range(s, self.rows):
            row = self.n[i]
            for j in range(s, self.cols):
                x = row[j]
                if ring.is_zero(x):
                    continue
                size = ring.pivot_size(x)
                if size == 1:
                    return i, j
                if best_size is None or size < best_size:
                    best, best_size = (i, j), size
        return best

    def _clear_position(self, s):
        ring = self.ring
        while True:
            for i in range(s + 1, self.rows):
                b = self.n[i][s]
                if ring.is_zero(b):
                    continue
                a = self.n[s][s]
                q = ring.solve_scalar(a, b)
                if q is not None:
                    self.addmul_row(i, s, ring.neg(q))
                else:
                    g, sx, tx, ux, vx = ring.gcdex(a, b)
                    self.rows2(s, i, sx, tx, ux, vx)
            for j in range(s + 1, self.cols):
                b = self.n[s][j]
                if ring.is_zero(b):
                    continue
                a = self.n[s][s]
                q = ring.solve_scalar(a, b)
                if q is not None:
                    self.addmul_col(j, s, ring.neg(q))
                else:
                    g, sx, tx, ux, vx = ring.gcdex(a, b)
                    self.cols2(s, j, sx, tx, ux, vx)
            if not any(not ring.is_zero(self.n[i][s])
                       for i in range(s + 1, self.rows)):
                if not any(not ring.is_zero(self.n[s][j])
                           for j in range(s + 1, self.cols)):
                    return

    def diagonalize(self):
        ring = self.ring
        limit = min(self.rows, self.cols)
        for s in range(limit):
            piv = self._find_pivot(s)
            if piv is None:
                break
            self.swap_rows(s, piv[0])
            self.swap_cols(s, piv[1])
            self._clear_position(s)
        # divisibility chain, zeros sinking to the end
        changed = True
        while changed:
            changed = False
            for i in range(limit - 1):
                a, b = self.n[i][i], self.n[i + 1][i + 1]
                if ring.divides(a, b):
                    continue
                self.addmul_row(i, i + 1, ring.one)
                self._clear_position(i)
                changed = True
        # canonical generators on the diagonal
        for i in range(limit):
            d = self.n[i][i]
            if ring.is_zero(d):
                continue
            u = ring.unit_to_canonical(d)
            if u != ring.one:
                self.scale_row(i, u)

    def rref(self):
        """Reduced row echelon over a field; column transforms untouched."""
        ring = self.ring
        lead = 0
        for j in range(self.cols):
            piv = None
            for i in range(lead, self.rows):
                if not ring.is_zero(self.n[i][j]):
                    piv = i
                    break
            if piv is None:
                continue
            self.swap_rows(lead, piv)
            v = self.n[lead][j]
            if v != ring.one:
                self.scale_row(lead, ring.inv(v))
            for i in range(self.rows):
                if i != lead and not ring.is_zero(self.n[i][j]):
                    self.addmul_row(i, lead, ring.neg(self.n[i][j]))
            lead += 1
            if lead == self.rows:
                break

    def diagonal(self):
        return [self.n[i][i] for i in range(min(self.rows, self.cols))]

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.rows, self.cols,
                           tuple(tuple(r) for r in self.n))

    def left_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.rows, self.rows,
                           tuple(tuple(r) for r in self.left))

    def left_inv_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.rows, self.rows,
                           tuple(tuple(r) for r in self.left_inv))

    def right_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.cols, self.cols,
                           tuple(tuple(r) for r in self.right))

    def right_inv_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.cols, self.cols,
                           tuple(tuple(r) for r in self.right_inv))


def _diagonal_sheet(mat: ExactMatrix, need_left=False, need_right=False,
                    need_left_inv=False, need_right_inv=False) -> _Worksheet:
    ws = _Worksheet(mat, need_left, need_right, need_left_inv, need_right_inv)
    ws.diagonalize()
    return ws


# ---------------------------------------------------------------------------
# public normal-form API


@dataclass(frozen=True)
class NormalFormResult:
    """Canonical form nf = left * input * right with invertible transforms."""

    nf: ExactMatrix
    left: ExactMatrix
    right: ExactMatrix
    kind: str
    left_inverse: ExactMatrix
    right_inverse: ExactMatrix


def normal_form(mat: ExactMatrix) -> NormalFormResult:
    """Canonical two-sided form over the matrix ring.

    Over Q and F_p this is the reduced row echelon form (kind
    "ReducedEchelon", right transform the identity).  Over Z it is the
    divisibility-chain diagonal with nonnegative entries (kind "Smith").
    Over Z/m and the truncated rings it is the divisibility-chain diagonal
    with canonical ideal generators (kind "Howell").
    """
    ring = mat.ring
    if ring.is_field:
        ws = _Worksheet(mat, True, False, True, False)
        ws.rref()
        ident = ExactMatrix.identity(ring, mat.cols)
        return NormalFormResult(ws.matrix(), ws.left_matrix(), ident,
                                "ReducedEchelon", ws.left_inv_matrix(), ident)
    ws = _diagonal_sheet(mat, True, True, True, True)
    kind = "Smith" if ring.kind == "Z" else "Howell"
    return NormalFormResult(ws.matrix(), ws.left_matrix(), ws.right_matrix(),
                            kind, ws.left_inv_matrix(), ws.right_inv_matrix())


def solve(a: ExactMatrix, b: ExactMatrix) -> Optional[ExactMatrix]:
    """Some X with a*X = b, or None when the system is unsolvable."""
    if a.ring != b.ring:
        raise IncompatibleRing("mixed rings %s and %s" % (a.ring, b.ring))
    if a.rows != b.rows:
        raise DimensionMismatch("row counts %d vs %d" % (a.rows, b.rows))
    ring = a.ring
    ws = _diagonal_sheet(a, need_left=True, need_right=True)
    c = ws.left_matrix().mul(b)
    limit = min(a.rows, a.cols)
    y = [[ring.zero] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        d = ws.n[i][i] if i < limit else ring.zero
        for jc in range(b.cols):
            rhs = c.entries[i][jc]
            if ring.is_zero(d):
                if not ring.is_zero(rhs):
                    return None
                continue
            val = ring.solve_scalar(d, rhs)
            if val is None:
                return None
            y[i][jc] = val
    ymat = ExactMatrix(ring, a.cols, b.cols, tuple(tuple(r) for r in y))
    return ws.right_matrix().mul(ymat)


def is_invertible(mat: ExactMatrix) -> bool:
    if mat.rows != mat.cols:
        return False
    ring = mat.ring
    ws = _diagonal_sheet(mat)
    return all(ring.is_unit(d) for d in ws.diagonal())


def invert(mat: ExactMatrix) -> ExactMatrix:
    if mat.rows != mat.cols:
        raise DimensionMismatch("only square matrices invert")
    out = solve(mat, ExactMatrix.identity(mat.ring, mat.rows))
    if out is None or not out.mul(mat).sub(ExactMatrix.identity(mat.ring, mat.rows)).is_zero():
        raise IncompatibleRing("matrix is not invertible")
    return out


# ---------------------------------------------------------------------------
# Howell canonicalisation of row spans (principal ideal rings)


def _reduce_entry(ring: RingSpec, x, pivot):
    """Canonical residue of x modulo the ideal (pivot)."""
    if ring.kind == "Zmod":
        g = math.gcd(pivot, ring.m)
        return x % g if g else x
    # truncated ring: drop coefficients at or above the pivot valuation
    v = ring._val(pivot)
    return tuple(c if i < v else 0 for i, c in enumerate(x))


def _lead_index(ring: RingSpec, row) -> int:
    for j, x in enumerate(row):
        if not ring.is_zero(x):
            return j
    return len(row)


def howell_rows(ring: RingSpec, rows: Iterable[Sequence]) -> list[tuple]:
    """Howell-canonical generating rows for the span of the given rows.

    Only meaningful over Z/m and the truncated rings, where row spans
    classify submodules of free modules.  The result is canonical: any two
    generating sets of the same span produce identical output.
    """
    if ring.kind not in ("Zmod", "Feps"):
        raise IncompatibleRing("Howell form needs a finite principal ideal ring")
    width = None
    work = []
    for row in rows:
        row = tuple(ring.canon(x) for x in row)
        width = len(row) if width is None else width
        if len(row) != width:
            raise DimensionMismatch("ragged rows")
        if any(not ring.is_zero(x) for x in row):
            work.append(list(row))
    if width is None:
        return []

    def triangulate(items):
        # one echelon slot per leading column, merged by gcdex transforms
        slots: dict[int, list] = {}
        queue = list(items)
        while queue:
            row = queue.pop()
            lead = _lead_index(ring, row)
            if lead == width:
                continue
            if lead not in slots:
                slots[lead] = row
                continue
            other = slots[lead]
            a, b = other[lead], row[lead]
            g, s, t, u, v = ring.gcdex(a, b)
            new_a = [ring.add(ring.mul(s, x), ring.mul(t, y))
                     for x, y in zip(other, row)]
            new_b = [ring.add(ring.mul(u, x), ring.mul(v, y))
                     for x, y in zip(other, row)]
            slots[lead] = new_a
            queue.append(new_b)
        return slots

    slots = triangulate(work)
    # saturate: annihilator multiples of each pivot row stay in the span
    while True:
        extra = []
        for lead, row in slots.items():
            ann = ring.ann_gen(row[lead])
            if ring.is_zero(ann):
                continue
            cand = [ring.mul(ann, x) for x in row]
            clead = _lead_index(ring, cand)
            if clead == width:
                continue
            # reduce against existing slots to test novelty
            red = list(cand)
            while True:
                rl = _lead_index(ring, red)
                if rl == width or rl not in slots:
                    break
                piv = slots[rl][rl]
                q = ring.solve_scalar(piv, red[rl])
                if q is None:
                    break
                red = [ring.sub(x, ring.mul(q, y))
                       for x, y in zip(red, slots[rl])]
            if _lead_index(ring, red) < width:
                extra.append(cand)
        if not extra:
            break
        merged = list(slots.values()) + extra
        slots = triangulate(merged)
    # normalise pivots and reduce entries above each pivot
    order = sorted(slots)
    out = [slots[lead] for lead in order]
    for idx, row in enumerate(out):
        lead = order[idx]
        u = ring.unit_to_canonical(row[lead])
        if u != ring.one:
            out[idx] = row = [ring.mul(u, x) for x in row]
    for idx in range(len(out)):
        for above in range(idx):
            lead = order[idx]
            piv = out[idx][lead]
            x = out[above][lead]
            target = _reduce_entry(ring, x, piv)
            diff = ring.sub(x, target)
            q = ring.solve_scalar(piv, diff)
            if q is not None and not ring.is_zero(q):
                out[above] = [ring.sub(a, ring.mul(q, b))
                              for a, b in zip(out[above], out[idx])]
    return [tuple(r) for r in out]


# ---------------------------------------------------------------------------
# kernels, cokernels, module presentations


def kernel_basis(a: ExactMatrix) -> ExactMatrix:
    """Matrix whose columns generate {x : a*x = 0}.

    Over the fields and Z the columns are a basis of the kernel (free).
    Over Z/m and the truncated rings they are the Howell-canonical
    generating set of the kernel submodule.
    """
    ring = a.ring
    ws = _diagonal_sheet(a, need_right=True)
    limit = min(a.rows, a.cols)
    right = ws.right_matrix()
    gens = []
    for j in range(a.cols):
        d = ws.n[j][j] if j < limit else ring.zero
        g = ring.ann_gen(d)
        if ring.is_zero(g):
            continue
        col = right.column(j)
        if g == ring.one:
            gens.append(col)
        else:
            gens.append(tuple(ring.mul(g, x) for x in col))
    if ring.kind in ("Zmod", "Feps"):
        gens = howell_rows(ring, gens)
    if not gens:
        return ExactMatrix.zeros(ring, a.cols, 0)
    data = tuple(zip(*gens))
    return ExactMatrix(ring, a.cols, len(gens), data)


def kernel_data(a: ExactMatrix) -> tuple:
    """Kernel presentation plus generating vectors aligned with its factors.

    The kernel of a map of free modules decomposes as one summand per
    diagonal entry d of the two-sided normal form, namely the annihilator
    ideal of (d), which is cyclic: generated by ann_gen(d) and isomorphic
    to R modulo the annihilator of that generator.  A non-zero-divisor d
    (every nonzero d over a domain) contributes nothing.  The k-th returned
    vector generates the summand of the k-th invariant factor (torsion in
    chain order, then one vector per free summand), matching cokernel_data.
    """
    ring = a.ring
    ws = _diagonal_sheet(a, need_right=True)
    limit = min(a.rows, a.cols)
    right = ws.right_matrix()
    torsion_factors = []
    torsion_gens = []
    free_gens = []
    for j in range(a.cols):
        d = ws.n[j][j] if j < limit else ring.zero
        g = ring.ann_gen(d)
        if ring.is_zero(g):
            continue
        col = right.column(j)
        if ring.is_unit(g):
            free_gens.append(col)
        else:
            torsion_factors.append(ring.ann_gen(g))
            torsion_gens.append(tuple(ring.mul(g, x) for x in col))
    factors = tuple(torsion_factors) + (ring.zero,) * len(free_gens)
    pres = ModulePresentation.from_invariant_factors(ring, factors)
    return pres, torsion_gens + free_gens


@dataclass(frozen=True)
class ModulePresentation:
    """Finitely presented module R^generators / column span of relations.

    invariant_factors lists canonical ideal generators in divisibility
    order with units omitted; a zero stands for a free summand and zeros
    come last.
    """

    ring: RingSpec
    generators: int
    relations: ExactMatrix
    invariant_factors: tuple

    @property
    def is_free(self) -> bool:
        return all(self.ring.is_zero(d) for d in self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if self.ring.is_zero(d))

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    @staticmethod
    def from_invariant_factors(ring: RingSpec, factors: Sequence) -> "ModulePresentation":
        """Presentation of a direct sum of cyclic modules R/(d)."""
        factors = [ring.canon(d) for d in factors]
        rel = ExactMatrix(ring, len(factors), len(factors),
                          tuple(tuple(factors[i] if i == j else ring.zero
                                      for j in range(len(factors)))
                                for i in range(len(factors))))
        return cokernel(rel)


def _chain_factors(ring: RingSpec, diag: Sequence) -> tuple:
    """Invariant factors from a canonical diagonal: drop units, zeros last."""
    torsion = [d for d in diag if not ring.is_zero(d) and not ring.is_unit(d)]
    free = sum(1 for d in diag if ring.is_zero(d))
    return tuple(torsion + [ring.zero] * free)


def cokernel(a: ExactMatrix) -> ModulePresentation:
    """Presentation of R^rows / (column span of a), invariant factors canonical."""
    ring = a.ring
    ws = _diagonal_sheet(a)
    limit = min(a.rows, a.cols)
    diag = [ws.n[i][i] if i < limit else ring.zero for i in range(a.rows)]
    return ModulePresentation(ring, a.rows, a, _chain_factors(ring, diag))


def cokernel_data(a: ExactMatrix) -> tuple[ModulePresentation, list[tuple]]:
    """Cokernel presentation plus preimage vectors of its generators.

    The k-th returned vector maps onto the k-th listed invariant-factor
    generator of the cokernel under the projection R^rows -> coker.
    """
    ring = a.ring
    ws = _diagonal_sheet(a, need_left_inv=True)
    limit = min(a.rows, a.cols)
    diag = [ws.n[i][i] if i < limit else ring.zero for i in range(a.rows)]
    left_inv = ws.left_inv_matrix()
    torsion_idx = [i for i, d in enumerate(diag)
                   if not ring.is_zero(d) and not ring.is_unit(d)]
    free_idx = [i for i, d in enumerate(diag) if ring.is_zero(d)]
    reps = [left_inv.column(i) for i in torsion_idx + free_idx]
    pres = ModulePresentation(ring, a.rows, a, _chain_factors(ring, diag))
    return pres, reps


def cokernel_projection(a: ExactMatrix) -> Optional[ExactMatrix]:
    """Projection matrix onto the cokernel of a when that cokernel is free.

    Returns a (free rank x rows) matrix pi with pi * a = 0 whose rows map
    R^rows onto coker(a), or None when the cokernel has a torsion summand
    and no such free presentation exists.
    """
    ring = a.ring
    ws = _diagonal_sheet(a, need_left=True)
    limit = min(a.rows, a.cols)
    diag = [ws.n[i][i] if i < limit else ring.zero for i in range(a.rows)]
    if any(not ring.is_zero(d) and not ring.is_unit(d) for d in diag):
        return None
    left = ws.left_matrix()
    free_rows = tuple(left.entries[i] for i, d in enumerate(diag) if ring.is_zero(d))
    return ExactMatrix(ring, len(free_rows), a.rows, free_rows)


def constant_rank(pres: ModulePresentation) -> Optional[int]:
    """Local free rank when the module is projective of constant rank.

    Returns None when projective with differing local ranks (possible only
    over Z/m with composite m); raises NotProjective otherwise.
    """
    ring = pres.ring
    factors = pres.invariant_factors
    if ring.kind in ("Z", "Q", "F", "Feps"):
        # local or domain cases: projective means free here
        for d in factors:
            if not ring.is_zero(d):
                raise NotProjective(
                    "invariant factor %r obstructs projectivity over %s" % (d, ring))
        return pres.free_rank
    ranks = []
    for q, k in _factorize(ring.m):
        qk = q ** k
        rank = 0
        for d in factors:
            if ring.is_zero(d):
                rank += 1
                continue
            v = 0
            x = d
            while x % q == 0:
                x //= q
                v += 1
            if v >= k:
                rank += 1
            elif v > 0:
                raise NotProjective(
                    "factor %r is %d-divisible but not fully at %d^%d" % (d, q, q, k))
        ranks.append(rank)
    if all(r == ranks[0] for r in ranks):
        return ranks[0]
    return None


# ---------------------------------------------------------------------------
# ring homomorphisms


_HOM_KINDS = (
    "Identity",
    "IntToRationals",
    "IntToPrimeField",
    "IntToIntegersMod",
    "IntToTruncatedPoly",
    "IntegersModToIntegersMod",
    "TruncatedPolyToPrimeField",
    "TruncatedPolyTruncate",
    "PrimeFieldToTruncatedPoly",
)


@dataclass(frozen=True)
class RingHom:
    """A supported unital homomorphism between two RingSpecs."""

    kind: str
    source: RingSpec
    target: RingSpec

    def __post_init__(self):
        if self.kind not in _HOM_KINDS:
            raise ParseError("unknown hom kind %r" % (self.kind,))
        s, t = self.source, self.target
        ok = {
            "Identity": s == t,
            "IntToRationals": s.kind == "Z" and t.kind == "Q",
            "IntToPrimeField": s.kind == "Z" and t.kind == "F",
            "IntToIntegersMod": s.kind == "Z" and t.kind == "Zmod",
            "IntToTruncatedPoly": s.kind == "Z" and t.kind == "Feps",
            "IntegersModToIntegersMod":
                s.kind == "Zmod" and t.kind == "Zmod" and s.m % t.m == 0,
            "TruncatedPolyToPrimeField":
                s.kind == "Feps" and t.kind == "F" and s.p == t.p,
            "TruncatedPolyTruncate":
                s.kind == "Feps" and t.kind == "Feps" and s.p == t.p and t.n <= s.n,
            "PrimeFieldToTruncatedPoly":
                s.kind == "F" and t.kind == "Feps" and s.p == t.p,
        }[self.kind]
        if not ok:
            raise IncompatibleBase(
                "no %s hom from %s to %s" % (self.kind, s, t))

    def apply(self, x):
        k = self.kind
        if k == "Identity":
            return x
        if k in ("IntToRationals", "IntToPrimeField", "IntToIntegersMod",
                 "IntToTruncatedPoly", "PrimeFieldToTruncatedPoly"):
            return self.target.canon(x)
        if k == "IntegersModToIntegersMod":
            return x % self.target.m
        if k == "TruncatedPolyToPrimeField":
            return x[0]
        return self.target.canon(x[: self.target.n])

    @property
    def is_surjective(self) -> bool:
        return self.kind not in ("IntToRationals", "PrimeFieldToTruncatedPoly")

    @property
    def has_nilpotent_kernel(self) -> bool:
        """Surjective with nonzero nilpotent kernel.

        For Z/m -> Z/m' this holds exactly when every prime of m divides
        m' and m != m' (the prime-power towers p^k -> p^j, j < k, are the
        typical case).  For truncations it holds exactly when the order
        genuinely drops.
        """
        k = self.kind
        if k == "IntegersModToIntegersMod":
            if self.source.m == self.target.m:
                return False
            rad = 1
            for q, _ in _factorize(self.source.m):
                rad *= q
            return self.target.m % rad == 0
        if k == "TruncatedPolyToPrimeField":
            return self.source.n > 1  # kernel (e), nilpotent; zero when n == 1
        if k == "TruncatedPolyTruncate":
            return self.target.n < self.source.n
        return False

    @property
    def is_bijective(self) -> bool:
        return self.kind == "Identity" or (
            self.kind == "TruncatedPolyToPrimeField" and self.source.n == 1) or (
            self.kind == "TruncatedPolyTruncate" and self.source.n == self.target.n) or (
            self.kind == "IntegersModToIntegersMod" and self.source.m == self.target.m)

    def section(self, x):
        """Canonical preimage of x for the surjective kinds."""
        k = self.kind
        if k == "Identity":
            return x
        if k == "IntegersModToIntegersMod":
            return x  # representative in [0, m') lifted as the same integer
        if k == "TruncatedPolyToPrimeField":
            return self.source.canon(x)
        if k == "TruncatedPolyTruncate":
            return self.source.canon(x)
        raise NotComputable("no canonical section for %s" % k)


def identity_hom(ring: RingSpec) -> RingHom:
    return RingHom("Identity", ring, ring)


def canonical_hom(source: RingSpec, target: RingSpec) -> RingHom:
    """The canonical hom between two supported rings, when one exists."""
    if source == target:
        return identity_hom(source)
    s, t = source.kind, target.kind
    if s == "Z":
        kind = {"Q": "IntToRationals", "F": "IntToPrimeField",
                "Zmod": "IntToIntegersMod", "Feps": "IntToTruncatedPoly"}.get(t)
        if kind:
            return RingHom(kind, source, target)
    if s == "Zmod" and t == "Zmod" and source.m % target.m == 0:
        return RingHom("IntegersModToIntegersMod", source, target)
    if s == "Feps" and t == "F" and source.p == target.p:
        return RingHom("TruncatedPolyToPrimeField", source, target)
    if s == "Feps" and t == "Feps" and source.p == target.p and target.n <= source.n:
        return RingHom("TruncatedPolyTruncate", source, target)
    if s == "F" and t == "Feps" and source.p == target.p:
        return RingHom("PrimeFieldToTruncatedPoly", source, target)
    raise IncompatibleBase("no canonical hom from %s to %s" % (source, target))


def apply_hom(hom: RingHom, mat: ExactMatrix) -> ExactMatrix:
    """Entrywise transport of a matrix along a ring hom."""
    if mat.ring != hom.source:
        raise IncompatibleBase(
            "matrix over %s, hom expects %s" % (mat.ring, hom.source))
    f = hom.apply
    data = tuple(tuple(f(x) for x in row) for row in mat.entries)
    return ExactMatrix(hom.target, mat.rows, mat.cols, data)


def presentation_base_change(pres: ModulePresentation, hom: RingHom) -> ModulePresentation:
    """Invariant factors of M tensored along the hom, recanonicalised."""
    if pres.ring != hom.source:
        raise IncompatibleBase("presentation over %s, hom expects %s" % (
            pres.ring, hom.source))
    tring = hom.target
    mapped = [tring.canonical_gen(hom.apply(d)) for d in pres.invariant_factors]
    kept = [d for d in mapped if d != tring.one]
    return ModulePresentation(tring, pres.generators,
                              apply_hom(hom, pres.relations),
                              _chain_factors(tring, kept))
