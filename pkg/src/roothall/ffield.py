"""Exact arithmetic in small finite fields F_q and dense linear algebra over them.

Elements of F_{p^n} are coefficient vectors over Z/p reduced modulo a fixed
irreducible polynomial; each element is packed into an integer code
sum(c_i * p^i) in 0..q-1.  Matrices store row-major code bytes and dispatch
the hot loops to the selected kernel backend.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from . import _kernels
from .errors import ConfigError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p^n, or raise ConfigError."""
    if q < 2:
        raise ConfigError(f"field size must be >= 2, got {q}")
    for p in range(2, q + 1):
        if not _is_prime(p):
            continue
        if q % p:
            continue
        n, m = 0, q
        while m % p == 0:
            m //= p
            n += 1
        if m == 1:
            return p, n
        raise ConfigError(f"{q} is not a prime power")
    raise ConfigError(f"{q} is not a prime power")


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_rem(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial mod (constant-first coeffs)."""
    a = list(a)
    d = len(mod) - 1
    while len(a) > d:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - d
            for i in range(d + 1):
                a[shift + i] = (a[shift + i] - lead * mod[i]) % p
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            div = [0] * d + [1]
            c = code
            for i in range(d):
                div[i] = c % p
                c //= p
            if _poly_rem(list(poly), div, p) == [0]:
                return False
    return True


def _find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest (by low coefficients) monic irreducible of degree n."""
    if n == 1:
        return (0,)
    for code in range(p**n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        poly = coeffs + [1]
        if _is_irreducible(poly, p):
            return tuple(coeffs)
    raise ConfigError(f"no irreducible polynomial of degree {n} over F_{p}")  # pragma: no cover


class FieldSpec:
    """F_q with fixed canonical modulus and precomputed operation tables."""

    def __init__(self, q: int):
        p, n = _prime_power(q)
        self.q = q
        self.p = p
        self.n = n
        self.modulus = _find_modulus(p, n)
        self._mod_poly = list(self.modulus) + [1]
        self._build_tables()

    def _code_to_coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def _coeffs_to_code(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + (c % self.p)
        return code

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        add = bytearray(q * q)
        mul = bytearray(q * q)
        neg = bytearray(q)
        vecs = [self._code_to_coeffs(c) for c in range(q)]
        for a in range(q):
            va = vecs[a]
            neg[a] = self._coeffs_to_code([(-x) % p for x in va])
            for b in range(a, q):
                vb = vecs[b]
                s = self._coeffs_to_code([(x + y) % p for x, y in zip(va, vb)])
                add[a * q + b] = s
                add[b * q + a] = s
                prod = _poly_mul_mod(list(va), list(vb), p)
                prod = _poly_rem(prod, self._mod_poly, p) if self.n > 1 else [prod[0] % p]
                m = self._coeffs_to_code(prod + [0] * self.n)
                mul[a * q + b] = m
                mul[b * q + a] = m
        inv = bytearray(q)
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
            else:  # pragma: no cover
                raise ConfigError(f"element {a} has no inverse; modulus not irreducible?")
        self.add_table = bytes(add)
        self.mul_table = bytes(mul)
        self.neg_table = bytes(neg)
        self.inv_table = bytes(inv)

    def elem(self, code: int) -> "FieldElem":
        return FieldElem(self, code % self.q)

    def from_int(self, value: int) -> "FieldElem":
        """Embed an integer via the prime subfield (value mod p)."""
        return FieldElem(self, value % self.p)

    def elements(self) -> Iterable["FieldElem"]:
        return (FieldElem(self, c) for c in range(self.q))

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))

    def __repr__(self) -> str:
        return f"F{self.q}"


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Field for a prime power q with a fixed, deterministic modulus choice."""
    return FieldSpec(q)


class FieldElem:
    """Element of a FieldSpec; wraps the packed code, exposes the coefficient vector."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field._code_to_coeffs(self.code)

    def _check(self, other: "FieldElem") -> None:
        if self.field.q != other.field.q:
            raise ConfigError("field mismatch")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field, self.field.add_table[self.code * self.field.q + other.code])

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.field, self.field.neg_table[self.code])

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field, self.field.mul_table[self.code * self.field.q + other.code])

    def inv(self) -> "FieldElem":
        if self.code == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return FieldElem(self.field, self.field.inv_table[self.code])

    def is_zero(self) -> bool:
        return self.code == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElem)
            and other.field.q == self.field.q
            and other.code == self.code
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.code))

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.code})"


class Matrix:
    """Dense matrix over a FieldSpec; immutable, hashable, exact."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data: bytes):
        if len(data) != rows * cols:
            raise ValueError(f"matrix data length {len(data)} != {rows}x{cols}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, bytes(rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        data = bytearray(n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(field, n, n, bytes(data))

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Matrix":
        """Build from integer entries (reduced via the prime subfield)."""
        r = len(rows)
        c = cols if cols is not None else (len(rows[0]) if r else 0)
        data = bytearray(r * c)
        for i, row in enumerate(rows):
            if len(row) != c:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                data[i * c + j] = v % field.p if not isinstance(v, FieldElem) else v.code
        return cls(field, r, c, bytes(data))

    @classmethod
    def from_codes(cls, field: FieldSpec, rows: int, cols: int, codes: Sequence[int]) -> "Matrix":
        return cls(field, rows, cols, bytes(codes))

    # -- basic ops -----------------------------------------------------------

    def entry(self, i: int, j: int) -> int:
        return self.data[i * self.cols + j]

    def entry_elem(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.field, self.entry(i, j))

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(self.data[i * self.cols : (i + 1) * self.cols])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        data = _kernels.mat_mul(
            self.rows, self.cols, other.cols, self.data, other.data, f.mul_table, f.add_table, f.q
        )
        return Matrix(f, self.rows, other.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols, _kernels.mat_add(self.data, other.data, f.add_table, f.q))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, _kernels.mat_neg(self.data, self.field.neg_table))

    def scale(self, c: int) -> "Matrix":
        f = self.field
        return Matrix(f, self.rows, self.cols, _kernels.scal_mul(c, self.data, f.mul_table, f.q))

    def axpy(self, c: int, other: "Matrix") -> "Matrix":
        """c*self + other."""
        f = self.field
        return Matrix(f, self.rows, self.cols, _kernels.axpy(c, self.data, other.data, f.mul_table, f.add_table, f.q))

    def transpose(self) -> "Matrix":
        r, c = self.rows, self.cols
        data = bytearray(r * c)
        for i in range(r):
            for j in range(c):
                data[j * r + i] = self.data[i * c + j]
        return Matrix(self.field, c, r, bytes(data))

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and other.rows == self.rows
            and other.cols == self.cols
            and other.data == self.data
            and other.field.q == self.field.q
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix<F{self.field.q} {self.rows}x{self.cols}: {body}>"

    # -- slicing -------------------------------------------------------------

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        c = self.cols
        data = b"".join(self.data[i * c : (i + 1) * c] for i in idx)
        return Matrix(self.field, len(idx), c, data)

    def take_cols(self, idx: Sequence[int]) -> "Matrix":
        data = bytearray(self.rows * len(idx))
        for i in range(self.rows):
            base = i * self.cols
            for jj, j in enumerate(idx):
                data[i * len(idx) + jj] = self.data[base + j]
        return Matrix(self.field, self.rows, len(idx), bytes(data))

    # -- elimination ---------------------------------------------------------

    def rank(self) -> int:
        f = self.field
        return _kernels.rank(
            self.rows, self.cols, self.data, f.add_table, f.mul_table, f.neg_table, f.inv_table, f.q
        )

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        f = self.field
        data, pivots = _kernels.rref(
            self.rows, self.cols, self.data, f.add_table, f.mul_table, f.neg_table, f.inv_table, f.q
        )
        return Matrix(f, self.rows, self.cols, data), pivots

    def kernel_basis(self) -> "Matrix":
        """Matrix whose columns span {x : self @ x = 0}."""
        red, pivots = self.rref()
        n = self.cols
        free = [j for j in range(n) if j not in pivots]
        f = self.field
        data = bytearray(n * len(free))
        w = len(free)
        for k, fc in enumerate(free):
            data[fc * w + k] = 1
            for r, pc in enumerate(pivots):
                v = red.entry(r, fc)
                if v:
                    data[pc * w + k] = f.neg_table[v]
        return Matrix(f, n, w, bytes(data))

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """One solution X of self @ X = rhs, or None if inconsistent."""
        if rhs.rows != self.rows:
            raise ValueError("rhs row mismatch")
        aug = hstack([self, rhs])
        red, pivots = aug.rref()
        n = self.cols
        for p in pivots:
            if p >= n:
                return None
        data = bytearray(n * rhs.cols)
        for r, p in enumerate(pivots):
            for j in range(rhs.cols):
                data[p * rhs.cols + j] = red.entry(r, n + j)
        return Matrix(self.field, n, rhs.cols, bytes(data))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        aug = hstack([self, Matrix.identity(self.field, self.rows)])
        red, pivots = aug.rref()
        if tuple(pivots[: self.rows]) != tuple(range(self.rows)):
            raise ValueError("matrix is singular")
        return red.take_cols(range(self.rows, 2 * self.rows))

    def column_space_basis(self) -> "Matrix":
        """Columns of self forming a basis of the column space (pivot columns)."""
        _, pivots = self.rref()
        return self.take_cols(pivots)


def hstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if not mats:
        raise ValueError("hstack of nothing")
    rows = mats[0].rows
    f = mats[0].field
    cols = sum(m.cols for m in mats)
    data = bytearray(rows * cols)
    off = 0
    for m in mats:
        if m.rows != rows:
            raise ValueError("row mismatch in hstack")
        for i in range(rows):
            data[i * cols + off : i * cols + off + m.cols] = m.data[i * m.cols : (i + 1) * m.cols]
        off += m.cols
    return Matrix(f, rows, cols, bytes(data))


def vstack(mats: Sequence[Matrix]) -> Matrix:
    mats = list(mats)
    if not mats:
        raise ValueError("vstack of nothing")
    cols = mats[0].cols
    f = mats[0].field
    if any(m.cols != cols for m in mats):
        raise ValueError("col mismatch in vstack")
    data = b"".join(m.data for m in mats)
    return Matrix(f, sum(m.rows for m in mats), cols, data)


def block_matrix(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack([hstack(list(row)) for row in grid])


def block_diag(field: FieldSpec, mats: Sequence[Matrix]) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    data = bytearray(rows * cols)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            data[(r0 + i) * cols + c0 : (r0 + i) * cols + c0 + m.cols] = m.data[i * m.cols : (i + 1) * m.cols]
        r0 += m.rows
        c0 += m.cols
    return Matrix(field, rows, cols, bytes(data))


def complete_basis(base: Matrix, candidates: Matrix) -> list[int]:
    """Indices of candidate columns extending base's columns to a basis of the joint span."""
    _, pivots = hstack([base, candidates]).rref()
    return [p - base.cols for p in pivots if p >= base.cols]
