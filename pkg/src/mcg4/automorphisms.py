"""Isometry groups of integral lattices.

Definite forms have finite isometry groups; they are built here as a
stabilizer chain on the standard basis.  The orbit of ``e_i`` under the
pointwise stabilizer of ``e_1 .. e_{i-1}`` is found by asking the backtracking
kernel (:mod:`mcg4._kernels`) which candidate images extend to a full
isometry.  The group order is the product of orbit lengths, so groups far too
large to list (E8 has 696729600 elements) still get an exact order,
membership test and uniform sampler.

Binary indefinite forms with square discriminant are isotropic and have at
most eight isometries; they are handled by permuting the two isotropic lines.
Everything else that is indefinite or degenerate has an infinite group and
raises :class:`EnumerationUnsupported` when asked for a list.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from . import _kernels
from .forms import (
    EnumerationUnsupported,
    FormError,
    Isometry,
    SymmetricForm,
    definiteness,
    is_isometry,
    is_nondegenerate,
    is_rel_boundary,
    make_form,
    split_radical,
)
from .linalg import IntMatrix, as_matrix, smith_normal_form, unimodular_inverse

DEFAULT_MAX_ORDER = 100_000


# ---------------------------------------------------------------------------
# short vectors


def _ldl(gram: IntMatrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    n = gram.rows
    a = [[Fraction(gram[i, j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise FormError("form is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= mu[i][j] * a[i][k]
    return d, mu


def short_vectors(gram, bound: int) -> list[tuple[int, ...]]:
    """All nonzero ``x`` with ``x^T Q x <= bound`` for positive definite ``Q``.

    Fincke-Pohst enumeration.  Coordinate ranges come from floating square
    roots widened by one, and every partial sum is then pruned exactly, so
    rounding can only cost time, never vectors.
    """
    if isinstance(gram, SymmetricForm):
        gram = gram.gram
    gram = as_matrix(gram)
    n = gram.rows
    if n == 0:
        return []
    d, mu = _ldl(gram)
    x = [0] * n
    out = []

    def rec(i: int, remaining: Fraction) -> None:
        c = sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = math.sqrt(float(remaining / d[i]))
        lo = math.floor(float(-c) - r) - 1
        hi = math.ceil(float(-c) + r) + 1
        for xi in range(lo, hi + 1):
            t = d[i] * (xi + c) ** 2
            if t > remaining:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, remaining - t)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    out.sort()
    return out


def _norm(gram: IntMatrix, v: Sequence[int]) -> int:
    n = gram.rows
    return sum(v[i] * gram[i, j] * v[j] for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# the group object


@dataclass
class _Level:
    images: dict  # image of the base vector -> transversal element
    inverses: dict


class IsometryGroup:
    """A finite isometry group stored as a stabilizer chain on ``e_1 .. e_n``.

    Level ``i`` maps each possible image of ``e_i`` (for elements fixing the
    earlier basis vectors) to one group element realizing it.  Every element
    factors uniquely as ``t_1 t_2 ... t_n`` with ``t_i`` taken from level ``i``.
    """

    def __init__(self, form: SymmetricForm, levels: list[_Level]):
        self.form = form
        self._levels = levels

    @classmethod
    def from_elements(cls, form: SymmetricForm, elements: Sequence[IntMatrix]) -> "IsometryGroup":
        """Chain for an explicitly listed finite group."""
        n = form.n
        current = list(elements)
        levels = []
        for i in range(n):
            reps: dict = {}
            for g in sorted(current):
                reps.setdefault(g.col(i), g)
            levels.append(_Level(reps, {v: unimodular_inverse(g) for v, g in reps.items()}))
            e = tuple(int(j == i) for j in range(n))
            current = [g for g in current if g.col(i) == e]
        return cls(form, levels)

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def order(self) -> int:
        return math.prod(len(l.images) for l in self._levels)

    def orbit_lengths(self) -> list[int]:
        return [len(l.images) for l in self._levels]

    def identity(self) -> IntMatrix:
        return IntMatrix.identity(self.n)

    def sift(self, a) -> Optional[list[IntMatrix]]:
        """Factor ``a`` as ``t_1 ... t_n`` through the chain, or ``None``."""
        g = a if isinstance(a, IntMatrix) else IntMatrix(a)
        if g.shape != (self.n, self.n):
            return None
        factors = []
        for i, level in enumerate(self._levels):
            v = g.col(i)
            t = level.images.get(v)
            if t is None:
                return None
            factors.append(t)
            g = level.inverses[v] @ g
        return factors if g == self.identity() else None

    def __contains__(self, a) -> bool:
        return self.sift(a) is not None

    def generators(self) -> list[IntMatrix]:
        ident = self.identity()
        gens = {t for l in self._levels for t in l.images.values() if t != ident}
        return sorted(gens)

    def random_element(self, rng: random.Random) -> IntMatrix:
        g = self.identity()
        for level in self._levels:
            key = rng.choice(sorted(level.images))
            g = g @ level.images[key]
        return g

    def elements(self) -> Iterator[IntMatrix]:
        """All elements, in chain order (not sorted)."""
        choices = [list(l.images.values()) for l in self._levels]
        for combo in itertools.product(*choices):
            g = self.identity()
            for t in combo:
                g = g @ t
            yield g


# ---------------------------------------------------------------------------
# construction


@dataclass(frozen=True)
class SearchProblem:
    """Candidate images of the standard basis under isometries of a definite form.

    ``pool`` holds the short vectors, ``table`` the prepared search over
    them and ``basis[j]`` the pool index of the ``j``-th basis vector.
    """

    pool: list
    table: object
    basis: list
    candidates: list


def search_problem(form: SymmetricForm, backend: Optional[str] = None) -> SearchProblem:
    q = form.gram
    if definiteness(form) == -1:
        q = q * -1
    n = q.rows
    norms = sorted({q[i, i] for i in range(n)})
    pool = [v for v in short_vectors(q, max(norms)) if _norm(q, v) in norms]
    index = {v: k for k, v in enumerate(pool)}
    qv = [[sum(q[i, j] * v[j] for j in range(n)) for i in range(n)] for v in pool]
    inner = [[sum(a[i] * w[i] for i in range(n)) for w in pool] for a in qv]
    by_norm = {m: [k for k, v in enumerate(pool) if inner[k][k] == m] for m in norms}
    flat, offsets = [], [0]
    for j in range(n):
        flat.extend(by_norm[q[j, j]])
        offsets.append(len(flat))
    basis = [index[tuple(int(i == j) for i in range(n))] for j in range(n)]
    table = _kernels.search_table(inner, offsets, flat, q.tolist(), backend=backend)
    candidates = [flat[offsets[j]:offsets[j + 1]] for j in range(n)]
    return SearchProblem(pool, table, basis, candidates)


def _definite_group(form: SymmetricForm, backend: Optional[str] = None) -> IsometryGroup:
    prob = search_problem(form, backend)
    n = form.n
    levels = []
    for i in range(n):
        prefix = prob.basis[:i]
        images = {}
        for cand in prob.candidates[i]:
            sol = prob.table.find_completion(prefix + [cand])
            if sol is not None:
                t = IntMatrix.from_columns([prob.pool[k] for k in sol], n)
                images[prob.pool[cand]] = t
        levels.append(_Level(images, {v: unimodular_inverse(t) for v, t in images.items()}))
    return IsometryGroup(form, levels)


def _isotropic_lines(q: IntMatrix) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    a, b, c = q[0, 0], q[0, 1], q[1, 1]
    disc = b * b - a * c
    if disc <= 0:
        return None
    s = math.isqrt(disc)
    if s * s != disc:
        return None

    def prim(x, y):
        g = math.gcd(x, y)
        return (x // g, y // g)

    if a != 0:
        return prim(-b + s, a), prim(-b - s, a)
    return (1, 0), prim(c, -2 * b)


def binary_isotropic_isometries(form: SymmetricForm) -> list[IntMatrix]:
    """All isometries of a nondegenerate binary form with square discriminant.

    An isometry permutes the two isotropic lines up to sign, so it is one of
    eight rational maps; the integral isometries among them are returned.
    """
    lines = _isotropic_lines(form.gram)
    if lines is None:
        raise EnumerationUnsupported("binary form is not isotropic; its isometry group is infinite")
    u, w = lines
    det = u[0] * w[1] - u[1] * w[0]
    out = set()
    for (p, r) in [(u, w), (w, u)]:
        for s1, s2 in itertools.product((1, -1), repeat=2):
            t = [[s1 * p[0], s2 * r[0]], [s1 * p[1], s2 * r[1]]]
            # A = T S^{-1} with S = [u w]
            sinv = [[w[1], -w[0]], [-u[1], u[0]]]
            num = [[sum(t[i][k] * sinv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
            if any(x % det for row in num for x in row):
                continue
            a = IntMatrix([[x // det for x in row] for row in num])
            if is_isometry(form, a):
                out.add(a)
    return sorted(out)


def isometry_group(f, backend: Optional[str] = None) -> IsometryGroup:
    """Full isometry group of a form whose group is finite.

    Raises :class:`EnumerationUnsupported` when the group is infinite.
    """
    f = f if isinstance(f, SymmetricForm) else make_form(f)
    n = f.n
    if n == 0:
        return IsometryGroup(f, [])
    if not is_nondegenerate(f):
        _, qbar, k = split_radical(f)
        if qbar.n == 0 and k == 1:
            return IsometryGroup.from_elements(f, [IntMatrix([[1]]), IntMatrix([[-1]])])
        raise EnumerationUnsupported("degenerate form: the isometry group is infinite")
    if definiteness(f) is not None:
        return _definite_group(f, backend=backend)
    if n == 2:
        return IsometryGroup.from_elements(f, binary_isotropic_isometries(f))
    raise EnumerationUnsupported("indefinite form of rank at least 3: the isometry group is infinite")


def enumerate_isometries(f, max_order: int = DEFAULT_MAX_ORDER) -> list[Isometry]:
    """Every isometry of ``f``, sorted lexicographically by entries.

    Raises :class:`EnumerationUnsupported` if the group is infinite or has
    more than ``max_order`` elements; :func:`isometry_group` still handles
    the large finite case.
    """
    f = f if isinstance(f, SymmetricForm) else make_form(f)
    group = isometry_group(f)
    if group.order > max_order:
        raise EnumerationUnsupported(
            f"isometry group has order {group.order}, above max_order={max_order}"
        )
    return [Isometry(a, f) for a in sorted(group.elements())]


# ---------------------------------------------------------------------------
# isometries acting trivially on the boundary


class DiscriminantAction:
    """Action ``A -> A^T`` of isometries on ``coker Q`` for nondegenerate ``Q``.

    In Smith coordinates ``coker Q = sum Z/d_i``; an isometry acts through the
    matrix ``L A^T L^{-1}`` with row ``i`` read modulo ``d_i``.
    """

    def __init__(self, form: SymmetricForm):
        snf = smith_normal_form(form.gram)
        self._left = snf.left
        self._left_inv = unimodular_inverse(snf.left)
        self._idx = [i for i, d in enumerate(snf.d) if d > 1]
        self._mod = [snf.d[i] for i in self._idx]

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(self._mod)

    def image(self, a: IntMatrix) -> tuple[tuple[int, ...], ...]:
        m = self._left @ a.T @ self._left_inv
        return tuple(
            tuple(m[i, j] % d for j in self._idx) for i, d in zip(self._idx, self._mod)
        )

    def compose(self, x, y):
        k = len(self._mod)
        return tuple(
            tuple(sum(x[i][l] * y[l][j] for l in range(k)) % self._mod[i] for j in range(k))
            for i in range(k)
        )

    def closure(self, gens: Sequence[IntMatrix]) -> set:
        """The finite group generated by the images of ``gens``."""
        k = len(self._mod)
        ident = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        images = {self.image(g) for g in gens}
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in images:
                    y = self.compose(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen


def rel_boundary_order_nondegenerate(form: SymmetricForm, group: Optional[IsometryGroup] = None) -> int:
    """Order of the subgroup acting trivially on ``coker Q``."""
    group = group or isometry_group(form)
    action = DiscriminantAction(form)
    if not action.torsion:
        return group.order
    image = action.closure(group.generators())
    return group.order // len(image)


@dataclass(frozen=True)
class AutBoundaryDescription:
    """Shape of the group of isometries fixing boundary homology.

    In a basis adapted to the radical the group consists of block matrices
    ``[[A, 0], [N, I]]``: ``A`` runs over the rel-boundary isometries of the
    nondegenerate quotient and ``N`` over a free abelian group of rank
    ``translation_rank``.
    """

    rank: int
    corank: int
    quotient_order: Optional[int]
    translation_rank: int

    @property
    def finite(self) -> bool:
        return self.quotient_order is not None and self.translation_rank == 0

    @property
    def order(self) -> Optional[int]:
        return self.quotient_order if self.finite else None

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "corank": self.corank,
            "quotient_order": self.quotient_order,
            "translation_rank": self.translation_rank,
            "finite": self.finite,
            "order": self.order,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AutBoundaryDescription":
        return cls(d["rank"], d["corank"], d["quotient_order"], d["translation_rank"])


def describe_aut_boundary(f) -> AutBoundaryDescription:
    f = f if isinstance(f, SymmetricForm) else make_form(f)
    _, qbar, k = split_radical(f)
    m = qbar.n
    try:
        quotient = rel_boundary_order_nondegenerate(qbar)
    except EnumerationUnsupported:
        quotient = None
    return AutBoundaryDescription(rank=f.n, corank=k, quotient_order=quotient, translation_rank=m * k)


def rel_boundary_isometries(f, max_order: int = DEFAULT_MAX_ORDER) -> list[IntMatrix]:
    """Sorted list of rel-boundary isometries when that group is finite and small."""
    f = f if isinstance(f, SymmetricForm) else make_form(f)
    desc = describe_aut_boundary(f)
    if not desc.finite:
        raise EnumerationUnsupported("the group of rel-boundary isometries is infinite or not enumerable")
    if desc.corank:
        # zero form: only the identity fixes the radical pointwise
        return [IntMatrix.identity(f.n)]
    group = isometry_group(f)
    if group.order > max_order:
        raise EnumerationUnsupported(f"isometry group has order {group.order}, above max_order={max_order}")
    return sorted(a for a in group.elements() if is_rel_boundary(f, a))
