"""Mapping class group reports for homological models of 4-manifolds.

A model records the intersection form, whether the manifold is spin, the
number of boundary components and (optionally) what is known about each
boundary component.  :func:`analyze` turns it into an :class:`MCGReport`:

* the spin-structure factor ``(Z/2)^(r-1)`` (spin case only),
* the Torelli part ``Z^C(b,2)``, where ``b`` is the corank of the form,
* the group of isometries fixing boundary homology, enumerated when finite.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .automorphisms import (
    AutBoundaryDescription,
    describe_aut_boundary,
    rel_boundary_isometries,
)
from .forms import (
    EnumerationUnsupported,
    FormError,
    InternalInconsistency,
    SymmetricForm,
    corank,
    direct_sum,
    hyperbolic,
    is_even,
    is_nondegenerate,
    make_form,
)
from .linalg import IntMatrix
from .variations import SkewForm, lift_isometry

# groups up to this size are checked element by element when counting lifts
LIFT_CHECK_LIMIT = 5000

FIX_CAVEAT = (
    "fix condition unchecked: the quotient is the group of rel-boundary isometries "
    "that lift to variations (the image of xi); their action on boundary spin "
    "structures was not verified independently"
)


class ModelError(ValueError):
    """Invalid manifold model; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class Tri(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BoundaryComponentInfo:
    label: str
    heegaard_genus: Optional[int] = None
    admits_gdt: Tri = Tri.UNKNOWN
    seifert_base_genus: Optional[int] = None
    seifert_euler: Optional[Fraction] = None

    def __post_init__(self):
        if not isinstance(self.admits_gdt, Tri):
            object.__setattr__(self, "admits_gdt", Tri(self.admits_gdt))
        if self.heegaard_genus is not None:
            if self.heegaard_genus < 0:
                raise ModelError("must be nonnegative", "heegaard_genus")
            if self.heegaard_genus <= 1:
                if self.admits_gdt is Tri.NO:
                    raise ModelError(
                        "Heegaard genus at most one always admits a generalized Dehn twist", "admits_gdt"
                    )
                object.__setattr__(self, "admits_gdt", Tri.YES)
        if self.seifert_base_genus is not None and self.seifert_base_genus < 0:
            raise ModelError("must be nonnegative", "seifert_base_genus")
        if self.seifert_euler is not None and not isinstance(self.seifert_euler, Fraction):
            object.__setattr__(self, "seifert_euler", Fraction(self.seifert_euler))

    def to_dict(self) -> dict:
        d = {"label": self.label, "admits_gdt": self.admits_gdt.value}
        if self.heegaard_genus is not None:
            d["heegaard_genus"] = self.heegaard_genus
        if self.seifert_base_genus is not None:
            d["seifert_base_genus"] = self.seifert_base_genus
        if self.seifert_euler is not None:
            d["seifert_euler"] = [self.seifert_euler.numerator, self.seifert_euler.denominator]
        return d

    @classmethod
    def from_dict(cls, d: dict, where: str = "components[0]") -> "BoundaryComponentInfo":
        if not isinstance(d, dict):
            raise ModelError("expected an object", where)
        unknown = set(d) - {"label", "heegaard_genus", "admits_gdt", "seifert_base_genus", "seifert_euler"}
        if unknown:
            raise ModelError(f"unknown field(s) {sorted(unknown)}", where)
        label = d.get("label")
        if not isinstance(label, str):
            raise ModelError("must be a string", f"{where}.label")
        gdt = d.get("admits_gdt", "unknown")
        if gdt not in ("yes", "no", "unknown"):
            raise ModelError('must be "yes", "no" or "unknown"', f"{where}.admits_gdt")
        genus = _opt_int(d, "heegaard_genus", where)
        base = _opt_int(d, "seifert_base_genus", where)
        euler = None
        if d.get("seifert_euler") is not None:
            pair = d["seifert_euler"]
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
            ):
                raise ModelError("must be a pair [a, b] of integers", f"{where}.seifert_euler")
            if pair[1] == 0:
                raise ModelError("denominator must be nonzero", f"{where}.seifert_euler")
            euler = Fraction(pair[0], pair[1])
        try:
            return cls(label, genus, Tri(gdt), base, euler)
        except ModelError as exc:
            raise ModelError(str(exc), where) from None


def _opt_int(d: dict, key: str, where: str) -> Optional[int]:
    x = d.get(key)
    if x is None:
        return None
    if not isinstance(x, int) or isinstance(x, bool):
        raise ModelError("must be an integer", f"{where}.{key}")
    return x


@dataclass(frozen=True)
class ManifoldModel:
    form: SymmetricForm
    spin: bool
    boundary_components: int
    components: Optional[tuple[BoundaryComponentInfo, ...]] = None
    name: str = ""

    def __post_init__(self):
        r = self.boundary_components
        if r < 0:
            raise ModelError("must be nonnegative", "boundary_components")
        if r == 0 and corank(self.form) != 0:
            raise ModelError("a closed manifold has a nondegenerate intersection form", "gram")
        if r == 0 and self.spin and not is_even(self.form):
            raise ModelError("a closed spin manifold has an even intersection form", "spin")
        if self.components is not None:
            object.__setattr__(self, "components", tuple(self.components))
            if len(self.components) != r:
                raise ModelError(
                    f"has {len(self.components)} entries but boundary_components is {r}", "components"
                )

    @property
    def corank(self) -> int:
        return corank(self.form)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "gram": self.form.gram.tolist(),
            "spin": self.spin,
            "boundary_components": self.boundary_components,
        }
        if self.components is not None:
            d["components"] = [c.to_dict() for c in self.components]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ManifoldModel":
        if not isinstance(d, dict):
            raise ModelError("model must be a JSON object")
        unknown = set(d) - {"name", "gram", "spin", "boundary_components", "components"}
        if unknown:
            raise ModelError(f"unknown field(s) {sorted(unknown)}")
        name = d.get("name", "")
        if not isinstance(name, str):
            raise ModelError("must be a string", "name")
        gram = d.get("gram")
        if not isinstance(gram, list) or not all(
            isinstance(row, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in row)
            for row in gram
        ):
            raise ModelError("must be a list of integer rows", "gram")
        try:
            form = make_form(gram)
        except FormError as exc:
            raise ModelError(str(exc), "gram") from None
        spin = d.get("spin")
        if not isinstance(spin, bool):
            raise ModelError("must be true or false", "spin")
        r = d.get("boundary_components")
        if not isinstance(r, int) or isinstance(r, bool):
            raise ModelError("must be an integer", "boundary_components")
        comps = d.get("components")
        if comps is not None:
            if not isinstance(comps, list):
                raise ModelError("must be a list", "components")
            comps = tuple(BoundaryComponentInfo.from_dict(c, f"components[{i}]") for i, c in enumerate(comps))
        return cls(form, spin, r, comps, name)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class MCGReport:
    name: str
    rank: int
    corank: int
    spin: bool
    boundary_components: int
    theta_rank: int
    torelli_free_rank: int
    aut_description: dict
    extension: dict
    order: Optional[int]
    structure: str
    caveats: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "corank": self.corank,
            "spin": self.spin,
            "boundary_components": self.boundary_components,
            "theta_rank": self.theta_rank,
            "torelli_free_rank": self.torelli_free_rank,
            "aut_description": dict(self.aut_description),
            "extension": dict(self.extension),
            "order": self.order,
            "structure": self.structure,
            "caveats": list(self.caveats),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MCGReport":
        d = dict(d)
        d["caveats"] = tuple(d.get("caveats", ()))
        d["notes"] = tuple(d.get("notes", ()))
        return cls(**d)

    def to_text(self) -> str:
        lines = [
            f"model: {self.name or '(unnamed)'}",
            f"rank: {self.rank}",
            f"corank: {self.corank}",
            f"spin: {str(self.spin).lower()}",
            f"boundary components: {self.boundary_components}",
            f"theta rank: {self.theta_rank}",
            f"torelli free rank: {self.torelli_free_rank}",
            f"aut_boundary: {_aut_text(self.aut_description)}",
            f"group: {self.structure}",
            f"order: {self.order if self.order is not None else 'infinite or not certified'}",
        ]
        lines += [f"caveat: {c}" for c in self.caveats]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def _aut_text(desc: dict) -> str:
    if desc["finite"]:
        return f"finite of order {desc['order']}"
    q = desc["quotient_order"]
    t = desc["translation_rank"]
    if q is None:
        return f"not enumerated (quotient not enumerable, translations of rank {t})"
    return f"infinite (quotient of order {q}, translations of rank {t})"


def _binom2(b: int) -> int:
    return b * (b - 1) // 2


def theta_rank(m: ManifoldModel) -> int:
    return max(m.boundary_components - 1, 0) if m.spin else 0


def torelli(m: ManifoldModel) -> tuple[int, int]:
    """(free rank, rank of the 2-torsion) of the Torelli group."""
    return _binom2(m.corank), theta_rank(m)


def _lift_count(form: SymmetricForm, desc: AutBoundaryDescription) -> int:
    """Number of rel-boundary isometries in the image of xi (finite case)."""
    if desc.order <= LIFT_CHECK_LIMIT:
        return sum(1 for a in rel_boundary_isometries(form) if lift_isometry(form, a) is not None)
    if is_nondegenerate(form):
        # V = (I - A) Q^{-1} is integral and a variation for every such A
        return desc.order
    raise EnumerationUnsupported("too many isometries to certify lifts one by one")


def _structure(order: Optional[int], torelli_rank: int, theta: int, desc: AutBoundaryDescription) -> str:
    if order is not None:
        if order == 1:
            return "trivial group"
        if order == 2:
            return "Z/2"
        return f"finite group of order {order}"
    parts = []
    if theta:
        parts.append(f"(Z/2)^{theta}" if theta > 1 else "Z/2")
    parts.append(f"extension of the rel-boundary isometries by Z^{torelli_rank}")
    infinite = torelli_rank or desc.translation_rank
    head = "infinite" if infinite else "not certified"
    return f"{head}: " + " x ".join(parts)


def analyze(m: ManifoldModel) -> MCGReport:
    form = m.form
    b = m.corank
    theta = theta_rank(m)
    tor = _binom2(b)
    desc = describe_aut_boundary(form)
    caveats = []
    if not m.spin:
        caveats.append(FIX_CAVEAT)
    order = None
    quotient_order = None
    if desc.finite:
        try:
            quotient_order = _lift_count(form, desc)
        except EnumerationUnsupported:
            quotient_order = None
        if m.spin and quotient_order is not None and quotient_order != desc.order:
            caveats.append(
                "some rel-boundary isometries do not lift to variations, which is impossible "
                "for a spin manifold; check the spin flag (the form is odd)"
                if not is_even(form) else
                "some rel-boundary isometries do not lift to variations"
            )
    if b <= 1 and quotient_order is not None:
        order = 2**theta * quotient_order
    notes = []
    if b <= 1:
        notes.append(
            "corank at most one: the Torelli part vanishes and the group is the quotient"
            + (" times the spin-structure factor" if m.spin else "")
        )
    for info in m.components or ():
        flag = gdt_parity_flag(info)
        if flag:
            notes.append(flag)
    extension = {
        "kernel": f"Z^{tor}",
        "kernel_rank": tor,
        "quotient": "rel-boundary isometries preserving boundary spin structures",
        "quotient_order": quotient_order,
        "theta_group": f"(Z/2)^{theta}",
    }
    if order is not None and (tor or not desc.finite):
        raise InternalInconsistency("finite order reported for an infinite group")
    return MCGReport(
        name=m.name,
        rank=form.n,
        corank=b,
        spin=m.spin,
        boundary_components=m.boundary_components,
        theta_rank=theta,
        torelli_free_rank=tor,
        aut_description=desc.to_dict(),
        extension=extension,
        order=order,
        structure=_structure(order, tor, theta, desc),
        caveats=tuple(caveats),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# smooth realizability


class RealizabilityKind(enum.Enum):
    ALL = "all"
    SUBGROUP_AT_LEAST = "subgroup_at_least"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ThetaRealizability:
    """Which spin-structure classes are realized by collar twists.

    For ``SUBGROUP_AT_LEAST`` the generators are arcs ``(base, target)``
    between boundary components, named by label; their duals span the
    realized subgroup.  That answer is a lower bound and is flagged
    ``conservative``.
    """

    kind: RealizabilityKind
    generators: tuple[tuple[str, str], ...] = ()
    conservative: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "generators": [list(g) for g in self.generators],
            "conservative": self.conservative,
        }


def theta_realizable_smoothly(m: ManifoldModel) -> ThetaRealizability:
    if not m.spin:
        raise ModelError("only defined for spin models", "spin")
    r = m.boundary_components
    if r <= 1:
        return ThetaRealizability(RealizabilityKind.ALL)
    if m.components is None:
        return ThetaRealizability(RealizabilityKind.UNKNOWN)
    twistable = [c for c in m.components if c.admits_gdt is Tri.YES]
    if len(twistable) >= r - 1:
        return ThetaRealizability(RealizabilityKind.ALL)
    base = next(c for c in m.components if c.admits_gdt is not Tri.YES)
    gens = tuple((base.label, c.label) for c in twistable)
    return ThetaRealizability(RealizabilityKind.SUBGROUP_AT_LEAST, gens, conservative=True)


def seifert_kappa(g: int) -> SkewForm:
    """Standard symplectic ``2g x 2g`` skew form."""
    if g < 1:
        raise ValueError("base genus must be at least 1")
    block = IntMatrix([[0, 1], [-1, 0]])
    return SkewForm(IntMatrix.block_diag(*([block] * g)))


PARITY_NOTE = "fiber-rotation twist has Theta = 0 for this component"


def gdt_parity_flag(info: BoundaryComponentInfo) -> Optional[str]:
    e = info.seifert_euler
    if e is None:
        return None
    if e.numerator % 2 and e.denominator % 2:
        return f"{info.label}: {PARITY_NOTE}"
    return None


def stabilize_model(m: ManifoldModel, g: int) -> ManifoldModel:
    if g < 0:
        raise ValueError("number of hyperbolic summands must be nonnegative")
    form = direct_sum(m.form, *([hyperbolic()] * g))
    name = f"{m.name}#{g}H" if m.name and g else m.name
    return replace(m, form=form, name=name)
