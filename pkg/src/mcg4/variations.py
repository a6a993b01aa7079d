"""Form variations: integer matrices ``V`` with ``V + V^T = V Q V^T``.

With the project-wide conventions (columns are vectors, ``Q`` is the adjoint
of the form) the variations of ``Q`` form a group under

    V1 * V2 = V1 + (I - V1 Q) V2,

with identity ``0`` and inverse ``-(I - V^T Q) V``.  The map
``xi(V) = I - V Q`` is a homomorphism onto a group of isometries; its kernel
is the set of skew ``V`` with ``V Q = 0``, i.e. ``R B R^T`` for ``R`` a basis
of the radical and ``B`` skew.
"""
from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .forms import (
    FormError,
    InternalInconsistency,
    Isometry,
    SymmetricForm,
    direct_sum,
    hyperbolic,
    is_isometry,
    is_rel_boundary,
    make_form,
    radical_basis,
)
from .linalg import (
    DimensionError,
    F2Matrix,
    IntMatrix,
    as_matrix,
    f2_in_row_space,
    solve_linear,
    unimodular_inverse,
    vectorize,
)

__all__ = [
    "FixStatus",
    "FormVariation",
    "MemberSampler",
    "SkewForm",
    "TorsorData",
    "compose",
    "conjugate",
    "fix_permutation_trivial",
    "identity_variation",
    "inverse",
    "is_rel_boundary",
    "is_variation",
    "kernel_basis_of_xi",
    "lift_isometry",
    "membership_defect",
    "s_map",
    "stabilize_variation",
    "xi",
]


def _form(q) -> SymmetricForm:
    return q if isinstance(q, SymmetricForm) else make_form(q)


def membership_defect(q: SymmetricForm, v: IntMatrix) -> IntMatrix:
    """``V + V^T - V Q V^T``; zero exactly for variations."""
    return v + v.T - v @ q.gram @ v.T


def is_variation(q, v) -> bool:
    q, v = _form(q), as_matrix(v)
    if v.shape != q.gram.shape:
        raise DimensionError(f"variation of shape {v.shape} for a form of rank {q.n}")
    return membership_defect(q, v).is_zero()


@dataclass(frozen=True)
class FormVariation:
    v: IntMatrix
    form: SymmetricForm

    def __post_init__(self):
        if not isinstance(self.v, IntMatrix):
            object.__setattr__(self, "v", as_matrix(self.v))
        if not isinstance(self.form, SymmetricForm):
            object.__setattr__(self, "form", make_form(self.form))
        if not is_variation(self.form, self.v):
            raise FormError("matrix is not a variation of the form")

    def __repr__(self) -> str:
        return f"FormVariation({self.v.tolist()})"


@dataclass(frozen=True)
class SkewForm:
    b: IntMatrix

    def __post_init__(self):
        b = self.b
        if not b.is_square():
            raise FormError("skew form must be square")
        if not (b + b.T).is_zero() or any(b[i, i] for i in range(b.rows)):
            raise FormError("matrix is not skew-symmetric with zero diagonal")

    @property
    def k(self) -> int:
        return self.b.rows

    @classmethod
    def zero(cls, k: int) -> "SkewForm":
        return cls(IntMatrix.zeros(k, k))


def identity_variation(q) -> FormVariation:
    q = _form(q)
    return FormVariation(IntMatrix.zeros(q.n, q.n), q)


def _same_form(v1: FormVariation, v2: FormVariation) -> SymmetricForm:
    if v1.form.gram != v2.form.gram:
        raise FormError("variations belong to different forms")
    return v1.form


def compose(v1: FormVariation, v2: FormVariation) -> FormVariation:
    q = _same_form(v1, v2)
    ident = IntMatrix.identity(q.n)
    return FormVariation(v1.v + (ident - v1.v @ q.gram) @ v2.v, q)


def inverse(v: FormVariation) -> FormVariation:
    q = v.form
    ident = IntMatrix.identity(q.n)
    return FormVariation(-((ident - v.v.T @ q.gram) @ v.v), q)


def xi(v: FormVariation) -> Isometry:
    return Isometry(IntMatrix.identity(v.form.n) - v.v @ v.form.gram, v.form)


def _unit_skew(k: int, a: int, b: int) -> IntMatrix:
    m = [[0] * k for _ in range(k)]
    m[a][b], m[b][a] = 1, -1
    return IntMatrix(m, shape=(k, k))


def kernel_basis_of_xi(q) -> list[FormVariation]:
    """Basis ``R E_ab R^T`` (``a < b``) of the kernel of ``xi``."""
    q = _form(q)
    r = radical_basis(q)
    k = r.cols
    return [FormVariation(r @ _unit_skew(k, a, b) @ r.T, q) for a, b in itertools.combinations(range(k), 2)]


def s_map(q, kappa) -> FormVariation:
    """Variation ``R B R^T`` attached to a skew form on the radical.

    ``R`` is the saturated radical basis; ``R^T`` restricted to the dual
    lattice is the evaluation on radical classes, so it plays the role of the
    dual lift.
    """
    q = _form(q)
    b = kappa.b if isinstance(kappa, SkewForm) else SkewForm(as_matrix(kappa)).b
    r = radical_basis(q)
    if b.rows != r.cols:
        raise DimensionError(f"skew form has size {b.rows}, but the radical has rank {r.cols}")
    return FormVariation(r @ b @ r.T, q)


# ---------------------------------------------------------------------------
# lifting isometries


def _symmetrizer(r: IntMatrix) -> IntMatrix:
    """Matrix of ``C -> C R^T + R C^T`` on vectorized ``n x k`` matrices."""
    n, k = r.shape
    cols = []
    for i in range(n):
        for j in range(k):
            c = [[0] * k for _ in range(n)]
            c[i][j] = 1
            cm = IntMatrix(c, shape=(n, k))
            img = cm @ r.T + r @ cm.T
            cols.append(vectorize(img))
    return IntMatrix.from_columns(cols, n * n)


def lift_isometry(q, a) -> Optional[FormVariation]:
    """A variation ``V`` with ``xi(V) = A``, or ``None`` when none exists.

    Solutions of ``V Q = I - A`` form a coset ``V0 + C R^T``, and on that
    coset the membership defect is ``E(V0) + C R^T + R C^T``, which is linear
    in ``C``.  Both steps are exact integer linear systems, so ``None`` is a
    proof that ``A`` is not in the image.
    """
    q = _form(q)
    a = a.a if isinstance(a, Isometry) else as_matrix(a)
    if not is_isometry(q, a):
        raise FormError("matrix is not an isometry of the form")
    n = q.n
    ident = IntMatrix.identity(n)
    x0 = solve_linear(q.gram, (ident - a).T)
    if x0 is None:
        return None
    v0 = x0.T
    defect = membership_defect(q, v0)
    r = radical_basis(q)
    k = r.cols
    if defect.is_zero():
        v = v0
    elif k == 0:
        return None
    else:
        rhs = IntMatrix.from_columns([[-x for x in vectorize(defect)]], n * n)
        sol = solve_linear(_symmetrizer(r), rhs)
        if sol is None:
            return None
        c = IntMatrix([[sol[i * k + j, 0] for j in range(k)] for i in range(n)], shape=(n, k))
        v = v0 + c @ r.T
    if not is_variation(q, v) or ident - v @ q.gram != a:
        raise InternalInconsistency("lifted matrix failed the variation check")
    return FormVariation(v, q)


# ---------------------------------------------------------------------------
# transport and stabilization


def conjugate(psi, v: FormVariation, target=None) -> FormVariation:
    """Transport ``V`` along an isometry ``psi`` to ``psi V psi^T``.

    The target form defaults to ``psi^{-T} Q psi^{-1}``; when it is given
    explicitly, ``psi`` must carry ``Q`` onto it.
    """
    psi = as_matrix(psi)
    q = v.form
    if psi.shape != q.gram.shape:
        raise DimensionError("isometry and variation have different sizes")
    try:
        inv = unimodular_inverse(psi)
    except ValueError as exc:
        raise FormError("transport matrix is not unimodular") from exc
    if target is None:
        target = SymmetricForm(inv.T @ q.gram @ inv)
    else:
        target = _form(target)
        if psi.T @ target.gram @ psi != q.gram:
            raise FormError("matrix is not an isometry between the two forms")
    return FormVariation(psi @ v.v @ psi.T, target)


def stabilize_variation(v: FormVariation, copies: int = 1) -> FormVariation:
    """``V + 0`` over the form with ``copies`` hyperbolic planes added."""
    q = direct_sum(v.form, *([hyperbolic()] * copies))
    return FormVariation(IntMatrix.block_diag(v.v, IntMatrix.zeros(2 * copies, 2 * copies)), q)


# ---------------------------------------------------------------------------
# spin-structure permutation


class FixStatus(enum.Enum):
    YES = "yes"
    NO = "no"
    UNCHECKED = "unchecked"


@dataclass(frozen=True)
class TorsorData:
    """Affine model ``t -> c + L t`` (mod 2) of the relative ``w_2`` classes.

    ``c`` has length ``n`` and ``L`` is ``n x m``; the points of the image are
    cohomology classes written in the dual basis, on which an isometry ``A``
    acts by ``A^T``.
    """

    c: tuple[int, ...]
    lin: IntMatrix = field(default_factory=lambda: IntMatrix([], shape=(0, 0)))

    @classmethod
    def from_lists(cls, c: Sequence[int], lin: Sequence[Sequence[int]] = ()) -> "TorsorData":
        lin = list(lin)
        shape = (len(c), len(lin[0]) if lin else 0)
        return cls(tuple(int(x) % 2 for x in c), IntMatrix(lin, shape=shape) if lin else IntMatrix([], shape=shape))


def fix_permutation_trivial(q, spin: bool, a, torsor_data: Optional[TorsorData] = None) -> FixStatus:
    """Whether ``A`` permutes the rel-boundary spin structures trivially.

    Spin manifolds always answer yes.  Otherwise the answer needs the affine
    torsor model; without it the result is ``UNCHECKED``.
    """
    q = _form(q)
    a = a.a if isinstance(a, Isometry) else as_matrix(a)
    if spin:
        return FixStatus.YES
    if torsor_data is None:
        return FixStatus.UNCHECKED
    n = q.n
    c, lin = torsor_data.c, torsor_data.lin
    if len(c) != n or lin.rows not in (0, n) or (lin.rows == 0 and lin.cols):
        raise FormError("torsor data has the wrong size for this form")
    act = F2Matrix.from_int(a.T)
    cvec = F2Matrix([[x] for x in c], shape=(n, 1))
    lmat = F2Matrix.from_int(lin) if lin.rows == n else F2Matrix([[] for _ in range(n)], shape=(n, 0))
    span = lmat.T  # rows span im L
    moved_c = act @ cvec
    diff_c = _col_bits(moved_c) ^ _col_bits(cvec)
    if not f2_in_row_space(span, diff_c):
        raise FormError("torsor data is not preserved by the isometry")
    image_l = act @ lmat
    for j in range(lmat.cols):
        if not f2_in_row_space(span, _col_bits(image_l, j)):
            raise FormError("torsor data is not preserved by the isometry")
    if diff_c == 0 and image_l == lmat:
        return FixStatus.YES
    return FixStatus.NO


def _col_bits(m: F2Matrix, j: int = 0) -> int:
    bits = 0
    for i, row in enumerate(m.tolist()):
        if row[j]:
            bits |= 1 << i
    return bits


# ---------------------------------------------------------------------------
# sampling


def _small_vectors(n: int, box: int):
    for v in itertools.product(range(-box, box + 1), repeat=n):
        if any(v):
            yield v


def _reflection(q: IntMatrix, v: Sequence[int]) -> Optional[IntMatrix]:
    n = q.rows
    qv = [sum(q[i, j] * v[j] for j in range(n)) for i in range(n)]
    norm = sum(v[i] * qv[i] for i in range(n))
    if norm not in (1, -1, 2, -2):
        return None
    return IntMatrix([[int(i == j) - (2 * v[i] * qv[j]) // norm for j in range(n)] for i in range(n)])


def _transvections(q: SymmetricForm) -> list[IntMatrix]:
    r = radical_basis(q)
    n = q.n
    out = []
    for rad in r.columns():
        for j in range(n):
            row = q.gram.row(j)
            out.append(IntMatrix([[int(i == l) + rad[i] * row[l] for l in range(n)] for i in range(n)]))
    return out


class MemberSampler:
    """Random variations of a fixed form.

    Elements are products of a few lifted generators (reflections in small
    vectors of norm 1 or 2 and transvections along the radical, whenever they
    fix the boundary and lift) with a kernel element ``s_map(B)`` for a random
    small skew ``B``.
    """

    def __init__(self, q, seed: int = 0, box: int = 1, max_generators: int = 24, skew_bound: int = 2):
        self.form = _form(q)
        self.rng = random.Random(seed)
        self.skew_bound = skew_bound
        self.k = radical_basis(self.form).cols
        candidates = []
        if self.form.n <= 6:
            candidates = [a for v in _small_vectors(self.form.n, box) if (a := _reflection(self.form.gram, v)) is not None]
        elif self.form.n:
            candidates = [a for v in _small_vectors_sparse(self.form.n) if (a := _reflection(self.form.gram, v)) is not None]
        candidates += _transvections(self.form)
        gens = []
        seen = set()
        for a in candidates:
            if a in seen or not is_isometry(self.form, a) or not is_rel_boundary(self.form, a):
                continue
            seen.add(a)
            lifted = lift_isometry(self.form, a)
            if lifted is not None:
                gens.append(lifted)
            if len(gens) >= max_generators:
                break
        self.generators = gens

    def _skew(self) -> FormVariation:
        k, bnd = self.k, self.skew_bound
        if k < 2:
            return identity_variation(self.form)
        m = [[0] * k for _ in range(k)]
        for i, j in itertools.combinations(range(k), 2):
            x = self.rng.randint(-bnd, bnd)
            m[i][j], m[j][i] = x, -x
        return s_map(self.form, SkewForm(IntMatrix(m, shape=(k, k))))

    def sample(self) -> FormVariation:
        v = self._skew()
        if self.generators:
            for _ in range(self.rng.randint(0, 3)):
                g = self.rng.choice(self.generators)
                if self.rng.random() < 0.5:
                    g = inverse(g)
                v = compose(v, g) if self.rng.random() < 0.5 else compose(g, v)
        return v


def _small_vectors_sparse(n: int):
    """Vectors with at most two nonzero entries, each of them +-1."""
    for i in range(n):
        for s in (1, -1):
            v = [0] * n
            v[i] = s
            yield tuple(v)
    for i, j in itertools.combinations(range(n), 2):
        for s, t in itertools.product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = s, t
            yield tuple(v)
