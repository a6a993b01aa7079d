"""Mod-2 Steenrod squares on ``H*(K(Z^n, 2); Z/2) = F2[x_1, ..., x_n]``.

Generators sit in degree 2.  ``Sq^1`` vanishes on every class here (they
are reductions of integral classes) and ``Sq^2`` is determined by
``Sq^2(x_i) = x_i^2`` and the Cartan formula.

The second half computes the ``d_2`` differentials of the twisted
Atiyah-Hirzebruch (James) spectral sequence in total degree at most 6.  They
are the transposes of ``Sq^2_w = Sq^2 + w *`` in monomial bases, with
``w = 0`` for spin and ``w = x_1`` otherwise; from them come the ``E_3``
terms that control the bordism groups in degrees 4 and 5.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .linalg import (
    F2Matrix,
    IntMatrix,
    column_hermite_basis,
    f2_in_row_space,
    f2_kernel_basis,
    f2_rank,
    smith_normal_form,
    solve_linear,
)

MAX_DEGREE = 6

Monomial = tuple[int, ...]


class F2Poly:
    """Polynomial over GF(2) in ``n`` variables of degree 2.

    Stored as the set of monomials (exponent tuples) with coefficient 1.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Iterable[Monomial] = ()):
        self.n = n
        acc: set = set()
        for t in terms:
            t = tuple(t)
            if len(t) != n or any(e < 0 for e in t):
                raise ValueError(f"bad monomial {t} for {n} variables")
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def zero(cls, n: int) -> "F2Poly":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "F2Poly":
        return cls(n, [(0,) * n])

    @classmethod
    def gen(cls, n: int, i: int) -> "F2Poly":
        """The generator ``x_{i+1}`` (0-based index)."""
        return cls(n, [tuple(int(j == i) for j in range(n))])

    @classmethod
    def monomial(cls, exps: Monomial) -> "F2Poly":
        return cls(len(exps), [exps])

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {2 * sum(t) for t in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Common degree of a nonzero homogeneous polynomial, else ``None``."""
        d = self.degrees()
        return next(iter(d)) if len(d) == 1 else None

    def _check(self, other: "F2Poly") -> None:
        if not isinstance(other, F2Poly) or other.n != self.n:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other: "F2Poly") -> "F2Poly":
        self._check(other)
        out = F2Poly(self.n)
        out.terms = self.terms ^ other.terms
        return out

    def __mul__(self, other: "F2Poly") -> "F2Poly":
        self._check(other)
        acc: set = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {tuple(x + y for x, y in zip(a, b))}
        out = F2Poly(self.n)
        out.terms = frozenset(acc)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, F2Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, self.terms))

    def __repr__(self) -> str:
        return f"F2Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(monomial_name(t) for t in sorted(self.terms, reverse=True))


def monomial_name(t: Monomial) -> str:
    parts = []
    for i, e in enumerate(t):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts) or "1"


def _split(t: Monomial) -> tuple[int, Monomial]:
    i = next(k for k, e in enumerate(t) if e)
    rest = list(t)
    rest[i] -= 1
    return i, tuple(rest)


@lru_cache(maxsize=None)
def _sq1_monomial(t: Monomial) -> frozenset:
    if not any(t):
        return frozenset()
    i, rest = _split(t)
    # Sq1(x_i) = 0, so the Cartan formula leaves x_i * Sq1(rest)
    acc: set = set()
    for m in _sq1_monomial(rest):
        m = list(m)
        m[i] += 1
        acc ^= {tuple(m)}
    return frozenset(acc)


@lru_cache(maxsize=None)
def _sq2_monomial(t: Monomial) -> frozenset:
    if not any(t):
        return frozenset()
    i, rest = _split(t)
    n = len(t)
    xi = F2Poly.gen(n, i)
    rest_p = F2Poly.monomial(rest)
    sq2_rest = F2Poly(n)
    sq2_rest.terms = _sq2_monomial(rest)
    sq1_rest = F2Poly(n)
    sq1_rest.terms = _sq1_monomial(rest)
    sq1_xi = F2Poly(n)
    sq1_xi.terms = _sq1_monomial(tuple(int(j == i) for j in range(n)))
    # Cartan: Sq2(x y) = Sq2(x) y + Sq1(x) Sq1(y) + x Sq2(y)
    total = (xi * xi) * rest_p + sq1_xi * sq1_rest + xi * sq2_rest
    return total.terms


def _homogeneous(p: F2Poly) -> None:
    if not p.is_homogeneous():
        raise ValueError("operation needs a homogeneous polynomial")


def sq1(p: F2Poly) -> F2Poly:
    _homogeneous(p)
    out = F2Poly(p.n)
    acc: set = set()
    for t in p.terms:
        acc ^= _sq1_monomial(t)
    out.terms = frozenset(acc)
    return out


def sq2(p: F2Poly) -> F2Poly:
    """``Sq^2`` of a homogeneous polynomial."""
    _homogeneous(p)
    out = F2Poly(p.n)
    acc: set = set()
    for t in p.terms:
        acc ^= _sq2_monomial(t)
    out.terms = frozenset(acc)
    return out


def sq2_w(p: F2Poly, w: F2Poly) -> F2Poly:
    """Twisted square ``Sq^2(p) + w p``; ``w`` must be zero or of degree 2."""
    if not w.is_zero() and w.degree != 2:
        raise ValueError("twisting class must have degree 2")
    return sq2(p) + w * p


def monomial_basis(n: int, degree: int) -> list[Monomial]:
    """Monomials of the given degree, lexicographically descending.

    Odd degrees have no classes, so the list is empty.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if degree % 2:
        return []
    k = degree // 2
    out = [t for t in itertools.product(range(k, -1, -1), repeat=n) if sum(t) == k]
    return sorted(out, reverse=True)


def twist_class(n: int, spin: bool) -> F2Poly:
    return F2Poly.zero(n) if spin else F2Poly.gen(n, 0)


def sq2_w_matrix(n: int, w: F2Poly, degree: int) -> F2Matrix:
    """Matrix of ``Sq^2_w`` from ``degree - 2`` to ``degree`` (columns = sources)."""
    src = monomial_basis(n, degree - 2) if degree >= 2 else []
    dst = monomial_basis(n, degree)
    pos = {t: i for i, t in enumerate(dst)}
    cols = []
    for t in src:
        img = sq2_w(F2Poly.monomial(t), w)
        cols.append({pos[m] for m in img.terms})
    rows = [[int(i in c) for c in cols] for i in range(len(dst))]
    return F2Matrix(rows, shape=(len(dst), len(src)))


@dataclass(frozen=True)
class D2Matrices:
    """Second differentials in degrees ``r <= 6``.

    ``r1[r]`` is ``d_2: E^{r,1} -> E^{r-2,2}``, both with GF(2) coefficients.
    ``r0[r]`` is ``d_2: E^{r,0} -> E^{r-2,1}``; its source is the integral
    lattice ``H_r(K; Z)`` and the matrix acts after reduction mod 2.
    """

    n: int
    w: F2Poly
    r1: dict
    r0: dict


def d2_matrices(n: int, w: F2Poly) -> D2Matrices:
    if w.n != n:
        raise ValueError("twisting class has the wrong number of variables")
    r1, r0 = {}, {}
    for r in range(2, MAX_DEGREE + 1):
        m = sq2_w_matrix(n, w, r).T
        r1[r] = m
        r0[r] = m
    return D2Matrices(n, w, r1, r0)


def _reduced_kernel_lattice(m: F2Matrix) -> IntMatrix:
    """Basis of ``{v in Z^N : m (v mod 2) = 0}``, Hermite form."""
    size = m.cols
    gens = [[2 * int(i == j) for i in range(size)] for j in range(size)]
    for row in f2_kernel_basis(m).tolist():
        gens.append(row)
    return column_hermite_basis(IntMatrix.from_columns(gens, size))


@dataclass(frozen=True)
class SSReport:
    n: int
    spin: bool
    w: str
    e3_22_dim: int
    e3_22_generators: tuple[str, ...]
    e3_40_free_rank: int
    e3_40_index2_count: int
    e3_40_index2_monomials: tuple[str, ...]
    e3_40_basis: tuple[tuple[int, ...], ...]
    e3_41_dim: int
    d2_squared_zero: bool
    omega4_summands: tuple[str, ...]
    omega5_zero: bool
    offdiagonal_count: int = field(default=0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "spin": self.spin,
            "w": self.w,
            "e3_22_dim": self.e3_22_dim,
            "e3_22_generators": list(self.e3_22_generators),
            "e3_40_free_rank": self.e3_40_free_rank,
            "e3_40_index2_count": self.e3_40_index2_count,
            "e3_40_index2_monomials": list(self.e3_40_index2_monomials),
            "e3_40_basis": [list(v) for v in self.e3_40_basis],
            "e3_41_dim": self.e3_41_dim,
            "d2_squared_zero": self.d2_squared_zero,
            "omega4_summands": list(self.omega4_summands),
            "omega5_zero": self.omega5_zero,
            "offdiagonal_count": self.offdiagonal_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SSReport":
        d = dict(d)
        for key in ("e3_22_generators", "e3_40_index2_monomials", "omega4_summands"):
            d[key] = tuple(d[key])
        d["e3_40_basis"] = tuple(tuple(v) for v in d["e3_40_basis"])
        return cls(**d)

    def to_text(self) -> str:
        return "\n".join([
            f"n: {self.n}",
            f"spin: {str(self.spin).lower()}",
            f"w: {self.w}",
            f"E3^(2,2) dim: {self.e3_22_dim}" + (
                f" (generated by {', '.join(self.e3_22_generators)})" if self.e3_22_generators else ""
            ),
            f"E3^(4,0) free rank: {self.e3_40_free_rank}",
            f"E3^(4,0) index-2 generators: {self.e3_40_index2_count}",
            f"E3^(4,0) off-diagonal duals: {self.offdiagonal_count}",
            f"E3^(4,1) dim: {self.e3_41_dim}",
            f"Omega_4 summands: {' + '.join(self.omega4_summands)}",
            f"omega5_zero: {str(self.omega5_zero).lower()}",
        ])


def _dual_name(t: Monomial) -> str:
    return f"[{monomial_name(t)}]*"


def e3_report(n: int, spin: bool) -> SSReport:
    """``E_3`` terms in total degrees 4 and 5, by exact linear algebra."""
    if n < 1:
        raise ValueError("need at least one generator")
    w = twist_class(n, spin)
    d2 = d2_matrices(n, w)
    h2 = monomial_basis(n, 2)
    h4 = monomial_basis(n, 4)

    d41 = d2.r1[4]
    rank41 = f2_rank(d41)
    e22 = len(h2) - rank41
    image41 = d41.T  # rows span the image
    gens22 = tuple(
        _dual_name(t) for i, t in enumerate(h2) if not f2_in_row_space(image41, 1 << i)
    )

    lattice = _reduced_kernel_lattice(d2.r0[4])
    snf = smith_normal_form(lattice)
    index2 = sum(1 for x in snf.d if x == 2)
    markers = []
    offdiag = 0
    for i, t in enumerate(h4):
        unit = tuple(int(j == i) for j in range(len(h4)))
        if not _in_lattice(lattice, unit):
            markers.append(_dual_name(t))
        elif max(t) == 1:
            offdiag += 1

    d60 = d2.r0[6]
    composite = d41 @ d60
    ker41 = d41.cols - rank41
    e41 = ker41 - f2_rank(d60)

    summands = ["Omega4^TOPSpin", "E3^(4,0)"] + ([] if spin else ["E3^(2,2)"])
    return SSReport(
        n=n,
        spin=spin,
        w=str(w),
        e3_22_dim=e22,
        e3_22_generators=gens22,
        e3_40_free_rank=lattice.cols,
        e3_40_index2_count=index2,
        e3_40_index2_monomials=tuple(markers),
        e3_40_basis=tuple(lattice.columns()),
        e3_41_dim=e41,
        d2_squared_zero=composite.is_zero(),
        omega4_summands=tuple(summands),
        omega5_zero=e41 == 0,
        offdiagonal_count=offdiag,
    )


def _in_lattice(basis: IntMatrix, v: tuple[int, ...]) -> bool:
    return solve_linear(basis, IntMatrix.from_columns([v], len(v))) is not None
