"""Exact linear algebra over the integers and over GF(2).

Everything here works on small dense matrices with Python integers, so there
is no overflow.  Empty shapes (0 x n, n x 0) are ordinary values and every
routine accepts them.
"""
from __future__ import annotations

from dataclasses import dataclass
from operator import mul
from typing import Iterable, Optional, Sequence


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible."""


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples.

    Vectors are columns.  ``IntMatrix([[1, 2], [3, 4]])`` builds a 2 x 2
    matrix; empty matrices need an explicit ``shape``.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable[int]] = (), shape: Optional[tuple[int, int]] = None):
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if shape is None:
            nrows = len(rows)
            ncols = len(rows[0]) if rows else 0
        else:
            nrows, ncols = shape
            if nrows and ncols and len(rows) != nrows:
                raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
            if not nrows and rows and any(rows):
                raise DimensionError("shape says 0 rows but data is not empty")
            if not nrows:
                rows = ()
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged matrix rows")
        if nrows and not ncols:
            rows = tuple(() for _ in range(nrows))
        self.rows = nrows
        self.cols = ncols
        self._data = rows
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "IntMatrix":
        # trusted constructor: rows is already a tuple of int tuples of the right shape
        m = object.__new__(cls)
        m.rows = nrows
        m.cols = ncols
        m._data = rows
        m._hash = None
        return m

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], shape=(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], shape=(n, n))

    @classmethod
    def diag(cls, entries: Sequence[int], shape: Optional[tuple[int, int]] = None) -> "IntMatrix":
        if shape is None:
            shape = (len(entries), len(entries))
        m = [[0] * shape[1] for _ in range(shape[0])]
        for i, d in enumerate(entries):
            m[i][i] = d
        return cls(m, shape=shape)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(nrows)], shape=(nrows, len(columns)))

    @classmethod
    def block_diag(cls, *blocks: "IntMatrix") -> "IntMatrix":
        nr = sum(b.rows for b in blocks)
        nc = sum(b.cols for b in blocks)
        m = [[0] * nc for _ in range(nr)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    m[r0 + i][c0 + j] = b._data[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls(m, shape=(nr, nc))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return IntMatrix([a + b for a, b in zip(self._data, other._data)],
                         shape=(self.rows, self.cols + other.cols))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return IntMatrix(self._data + other._data, shape=(self.rows + other.rows, self.cols))

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self._data[i][j] for j in cols] for i in rows], shape=(len(rows), len(cols)))

    # arithmetic -----------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        if not self.rows:
            return IntMatrix._raw(tuple(() for _ in range(self.cols)), self.cols, 0)
        return IntMatrix._raw(tuple(zip(*self._data)), self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other._data)) if other.rows else [() for _ in range(other.cols)]
        out = tuple(tuple(sum(map(mul, r, c)) for c in ocols) for r in self._data)
        return IntMatrix._raw(out, self.rows, other.cols)

    def _check_same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        out = tuple(tuple(map(int.__add__, r, s)) for r, s in zip(self._data, other._data))
        return IntMatrix._raw(out, self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        out = tuple(tuple(map(int.__sub__, r, s)) for r, s in zip(self._data, other._data))
        return IntMatrix._raw(out, self.rows, self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def __mul__(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self._data], shape=self.shape)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._data))
        return self._hash

    def __lt__(self, other: "IntMatrix") -> bool:
        return (self.shape, self._data) < (other.shape, other._data)

    def __repr__(self) -> str:
        if not self.rows or not self.cols:
            return f"IntMatrix(shape={self.shape})"
        return f"IntMatrix({self.tolist()})"

    # predicates -----------------------------------------------------------

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def as_matrix(m) -> IntMatrix:
    """Coerce nested lists (or an ``IntMatrix``) to an ``IntMatrix``."""
    if isinstance(m, IntMatrix):
        return m
    return IntMatrix(m)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ M @ right == diag(d)`` padded with zeros to ``shape``."""

    d: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x != 0)

    def diagonal_matrix(self) -> IntMatrix:
        return IntMatrix.diag(self.d, self.shape)


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _pivot(a, t, m, n):
    best = None
    for i in range(t, m):
        for j in range(t, n):
            v = a[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting takes the nonzero entry of least absolute value in the active
    block, ties broken by lowest row then lowest column, so the output is a
    deterministic function of the input.
    """
    M = as_matrix(M)
    m, n = M.shape
    a = M.tolist()
    L = IntMatrix.identity(m).tolist()
    R = IntMatrix.identity(n).tolist()
    d = []
    for t in range(min(m, n)):
        while True:
            piv = _pivot(a, t, m, n)
            if piv is None:
                break
            _, pi, pj = piv
            if pi != t:
                _swap_rows(a, t, pi)
                _swap_rows(L, t, pi)
            if pj != t:
                _swap_cols(a, t, pj)
                _swap_cols(R, t, pj)
            p = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    L[i] = [x - q * y for x, y in zip(L[i], L[t])]
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                    for r in R:
                        r[j] -= q * r[t]
            if any(a[i][t] for i in range(t + 1, m)) or any(a[t][j] for j in range(t + 1, n)):
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            i = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            L[t] = [x + y for x, y in zip(L[t], L[i])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]
        d.append(a[t][t])
        if a[t][t] == 0:
            d.extend([0] * (min(m, n) - t - 1))
            break
    return SmithDecomposition(
        d=tuple(d),
        left=IntMatrix(L, shape=(m, m)),
        right=IntMatrix(R, shape=(n, n)),
        shape=(m, n),
    )


# ---------------------------------------------------------------------------
# Hermite normal form (used to canonicalise lattice bases)


def column_hermite_basis(B: IntMatrix) -> IntMatrix:
    """Canonical basis of the column lattice of ``B``.

    Columns come out in echelon form: each basis column has a positive pivot
    in a row strictly below the pivot of the previous column, and entries of
    earlier columns in a later pivot row are reduced into ``[0, pivot)``.
    """
    n = B.rows
    remaining = [list(c) for c in B.columns() if any(c)]
    basis = []
    pivots = []
    for c in range(n):
        active = [v for v in remaining if v[c]]
        if not active:
            continue
        others = [v for v in remaining if not v[c]]
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[c]))
            p = active[0]
            nxt = [p]
            for v in active[1:]:
                q = v[c] // p[c]
                w = [x - q * y for x, y in zip(v, p)]
                if w[c]:
                    nxt.append(w)
                elif any(w):
                    others.append(w)
            active = nxt
        p = active[0]
        if p[c] < 0:
            p = [-x for x in p]
        basis.append(p)
        pivots.append(c)
        remaining = others
    for k, pk in enumerate(pivots):
        for l in range(k):
            q = basis[l][pk] // basis[k][pk]
            if q:
                basis[l] = [x - q * y for x, y in zip(basis[l], basis[k])]
    return IntMatrix.from_columns(basis, n)


# ---------------------------------------------------------------------------
# kernels, cokernels, linear systems


def kernel_basis(M) -> IntMatrix:
    """Columns form a saturated Z-basis of ``ker M``, in Hermite form."""
    M = as_matrix(M)
    snf = smith_normal_form(M)
    r = snf.rank
    cols = [snf.right.col(j) for j in range(r, M.cols)]
    return column_hermite_basis(IntMatrix.from_columns(cols, M.cols))


def cokernel_presentation(M) -> tuple[int, tuple[int, ...]]:
    """``coker M = Z^free_rank + sum Z/t`` for t in the returned torsion."""
    M = as_matrix(M)
    snf = smith_normal_form(M)
    torsion = tuple(x for x in snf.d if x > 1)
    return M.rows - snf.rank, torsion


def solve_linear(M, b) -> Optional[IntMatrix]:
    """Some integer ``X`` with ``M @ X == b``, or ``None`` if there is none."""
    M, b = as_matrix(M), as_matrix(b)
    if M.rows != b.rows:
        raise DimensionError(f"system {M.shape} with right-hand side {b.shape}")
    snf = smith_normal_form(M)
    c = snf.left @ b
    y = [[0] * b.cols for _ in range(M.cols)]
    for i in range(M.rows):
        di = snf.d[i] if i < len(snf.d) else 0
        for j in range(b.cols):
            v = c[i, j]
            if di == 0:
                if v != 0:
                    return None
            else:
                q, rem = divmod(v, di)
                if rem:
                    return None
                y[i][j] = q
    return snf.right @ IntMatrix(y, shape=(M.cols, b.cols))


def unimodular_inverse(M) -> IntMatrix:
    M = as_matrix(M)
    if not M.is_square():
        raise DimensionError("inverse of a non-square matrix")
    X = solve_linear(M, IntMatrix.identity(M.rows))
    if X is None or X @ M != IntMatrix.identity(M.rows):
        raise ValueError("matrix is not invertible over Z")
    return X


def complete_to_basis(R: IntMatrix) -> IntMatrix:
    """Unimodular ``U`` whose last columns are the (saturated) columns of ``R``."""
    n, k = R.shape
    snf = smith_normal_form(R)
    if snf.rank != k or any(x != 1 for x in snf.d):
        raise ValueError("columns do not span a direct summand")
    linv = unimodular_inverse(snf.left)
    head = [linv.col(j) for j in range(k, n)]
    return IntMatrix.from_columns(head + R.columns(), n)


def vectorize(M: IntMatrix) -> list[int]:
    return [x for r in M.tolist() for x in r]


# ---------------------------------------------------------------------------
# GF(2)


class F2Matrix:
    """Matrix over GF(2); each row is an int bitmask (bit j is column j)."""

    __slots__ = ("rows", "cols", "_bits")

    def __init__(self, data: Iterable[Iterable[int]] = (), shape: Optional[tuple[int, int]] = None):
        rows = [list(r) for r in data]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        self.rows, self.cols = shape
        bits = []
        for r in rows:
            if len(r) != self.cols:
                raise DimensionError("ragged F2 matrix")
            v = 0
            for j, x in enumerate(r):
                if x % 2:
                    v |= 1 << j
            bits.append(v)
        if len(bits) != self.rows:
            raise DimensionError("row count does not match shape")
        self._bits = tuple(bits)

    @classmethod
    def from_bits(cls, bits: Sequence[int], cols: int) -> "F2Matrix":
        out = cls((), shape=(0, cols))
        out.rows = len(bits)
        out._bits = tuple(bits)
        return out

    @classmethod
    def from_int(cls, M: IntMatrix) -> "F2Matrix":
        return cls(M.tolist(), shape=M.shape)

    def tolist(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(self.cols)] for b in self._bits]

    @property
    def T(self) -> "F2Matrix":
        out = []
        for j in range(self.cols):
            v = 0
            for i, b in enumerate(self._bits):
                if b >> j & 1:
                    v |= 1 << i
            out.append(v)
        return F2Matrix.from_bits(out, self.rows)

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for b in self._bits:
            acc = 0
            j = 0
            while b:
                if b & 1:
                    acc ^= other._bits[j]
                b >>= 1
                j += 1
            out.append(acc)
        return F2Matrix.from_bits(out, other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return self.shape == other.shape and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.shape, self._bits))

    def __repr__(self) -> str:
        return f"F2Matrix({self.tolist()}, shape={self.shape})"

    def is_zero(self) -> bool:
        return not any(self._bits)


def _f2_echelon(bits: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = list(bits)
    pivots = []
    r = 0
    for c in range(cols):
        mask = 1 << c
        p = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def f2_rank(M: F2Matrix) -> int:
    return len(_f2_echelon(M._bits, M.cols)[1])


def f2_kernel_basis(M: F2Matrix) -> F2Matrix:
    """Rows of the result form a basis of ``{x : M x = 0}`` over GF(2)."""
    rows, pivots = _f2_echelon(M._bits, M.cols)
    free = [c for c in range(M.cols) if c not in pivots]
    out = []
    for f in free:
        v = 1 << f
        for r, p in zip(rows, pivots):
            if r >> f & 1:
                v |= 1 << p
        out.append(v)
    return F2Matrix.from_bits(out, M.cols)


def f2_in_row_space(M: F2Matrix, vec: int) -> bool:
    rows, pivots = _f2_echelon(M._bits, M.cols)
    for r, p in zip(rows, pivots):
        if vec >> p & 1:
            vec ^= r
    return vec == 0
