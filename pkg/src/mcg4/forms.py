"""Symmetric bilinear forms over Z and their isometries.

Convention used throughout the package: vectors are columns, the pairing is
``lambda(x, y) = x^T Q y`` and a linear map ``A`` acts by ``x -> A x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .linalg import (
    DimensionError,
    IntMatrix,
    as_matrix,
    complete_to_basis,
    kernel_basis,
    solve_linear,
)


class FormError(ValueError):
    """Invalid Gram matrix."""


class EnumerationUnsupported(RuntimeError):
    """The isometry group is infinite or outside what can be enumerated."""


class InternalInconsistency(RuntimeError):
    """A result failed its own post-condition check; indicates a bug."""


@dataclass(frozen=True)
class SymmetricForm:
    gram: IntMatrix

    def __post_init__(self):
        if not self.gram.is_square():
            raise FormError(f"Gram matrix must be square, got shape {self.gram.shape}")
        if not self.gram.is_symmetric():
            raise FormError("Gram matrix is not symmetric")

    @property
    def n(self) -> int:
        return self.gram.rows

    def pair(self, x, y) -> int:
        q = self.gram
        return sum(x[i] * q[i, j] * y[j] for i in range(self.n) for j in range(self.n))

    def __repr__(self) -> str:
        return f"SymmetricForm({self.gram.tolist()})"


@dataclass(frozen=True)
class Isometry:
    a: IntMatrix
    form: SymmetricForm = field(compare=False, repr=False)

    def __post_init__(self):
        if not is_isometry(self.form, self.a):
            raise FormError("matrix is not an isometry of the form")


def make_form(gram) -> SymmetricForm:
    try:
        m = as_matrix(gram)
    except DimensionError as exc:
        raise FormError(str(exc)) from exc
    return SymmetricForm(m)


def empty_form() -> SymmetricForm:
    return SymmetricForm(IntMatrix([], shape=(0, 0)))


def hyperbolic() -> SymmetricForm:
    return SymmetricForm(IntMatrix([[0, 1], [1, 0]]))


def direct_sum(*forms: SymmetricForm) -> SymmetricForm:
    return SymmetricForm(IntMatrix.block_diag(*(f.gram for f in forms)))


def e8() -> SymmetricForm:
    """Positive definite E8 (Cartan matrix, Bourbaki labelling)."""
    c = [[2 * (i == j) for j in range(8)] for i in range(8)]
    for i, j in [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]:
        c[i][j] = c[j][i] = -1
    return SymmetricForm(IntMatrix(c))


def radical_basis(f: SymmetricForm) -> IntMatrix:
    """Saturated basis (columns, Hermite form) of the radical ``ker Q``."""
    return kernel_basis(f.gram)


def corank(f: SymmetricForm) -> int:
    return radical_basis(f).cols


def is_nondegenerate(f: SymmetricForm) -> bool:
    return f.gram.det() != 0


def is_even(f: SymmetricForm) -> bool:
    return all(f.gram[i, i] % 2 == 0 for i in range(f.n))


def is_unimodular(f: SymmetricForm) -> bool:
    return abs(f.gram.det()) == 1


def _leading_minors(q: IntMatrix) -> list[int]:
    return [q.submatrix(range(k), range(k)).det() for k in range(1, q.rows + 1)]


def definiteness(f: SymmetricForm) -> Optional[int]:
    """+1 positive definite, -1 negative definite, ``None`` otherwise.

    The empty form counts as positive definite.  Uses Sylvester's criterion,
    so degenerate forms are never reported definite.
    """
    minors = _leading_minors(f.gram)
    if all(m > 0 for m in minors):
        return 1
    if all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors)):
        return -1
    return None


def signature(f: SymmetricForm) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia, via exact rational LDL^T."""
    n = f.n
    a = [[Fraction(f.gram[i, j]) for j in range(n)] for i in range(n)]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # x_i -> x_i + x_j makes the diagonal entry nonzero
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        pos += d > 0
        neg += d < 0
        active.remove(piv)
        for i in active:
            m = a[i][piv] / d
            for j in active:
                a[i][j] -= m * a[piv][j]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg


def is_isometry(f: SymmetricForm, a) -> bool:
    """``A^T Q A == Q`` and ``A`` invertible over Z."""
    a = as_matrix(a)
    if a.shape != f.gram.shape:
        raise DimensionError(f"matrix shape {a.shape} does not match form of rank {f.n}")
    if a.T @ f.gram @ a != f.gram:
        return False
    return abs(a.det()) == 1


def is_rel_boundary(f: SymmetricForm, a) -> bool:
    """Isometry inducing the identity on boundary homology.

    Two conditions: ``A`` fixes every radical vector, and ``A^T`` induces the
    identity on ``coker Q`` (``A^T - I`` lies in ``Q * Mat``).
    """
    a = as_matrix(a)
    rad = radical_basis(f)
    if a @ rad != rad:
        return False
    return solve_linear(f.gram, a.T - IntMatrix.identity(f.n)) is not None


def split_radical(f: SymmetricForm) -> tuple[IntMatrix, SymmetricForm, int]:
    """Adapted basis ``U`` with ``U^T Q U = Qbar + 0_k``.

    Returns ``(U, Qbar, k)``; the last ``k`` columns of ``U`` span the radical.
    """
    rad = radical_basis(f)
    k = rad.cols
    u = complete_to_basis(rad)
    g = u.T @ f.gram @ u
    m = f.n - k
    return u, SymmetricForm(g.submatrix(range(m), range(m))), k
