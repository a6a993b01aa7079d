"""Built-in model catalog with expected report fragments.

Extra models can be dropped into the directory named by ``MCG4_CATALOG_DIR``:
every ``*.json`` file there is a model file, optionally carrying an
``"expected"`` object that the regression suite compares against the report.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .forms import e8
from .mcg import ManifoldModel, ModelError

CATALOG_ENV = "MCG4_CATALOG_DIR"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    model: dict
    expected: dict = field(default_factory=dict)

    def load(self) -> ManifoldModel:
        return ManifoldModel.from_dict(self.model)


def _sphere(label: str) -> dict:
    return {"label": label, "heegaard_genus": 0, "admits_gdt": "yes"}


_BUILTIN = [
    CatalogEntry(
        "S3xI",
        {"name": "S3xI", "gram": [], "spin": True, "boundary_components": 2,
         "components": [_sphere("S3-0"), _sphere("S3-1")]},
        {"order": 2, "structure": "Z/2", "theta_rank": 1, "torelli_free_rank": 0},
    ),
    CatalogEntry(
        "D4",
        {"name": "D4", "gram": [], "spin": True, "boundary_components": 1,
         "components": [_sphere("S3")]},
        {"order": 1, "structure": "trivial group", "theta_rank": 0, "torelli_free_rank": 0},
    ),
    CatalogEntry(
        "CP2-minus-disk",
        {"name": "CP2-minus-disk", "gram": [[1]], "spin": False, "boundary_components": 1,
         "components": [_sphere("S3")]},
        {"order": 2, "structure": "Z/2", "theta_rank": 0, "torelli_free_rank": 0},
    ),
    CatalogEntry(
        "E8-minus-disk",
        {"name": "E8-minus-disk", "gram": e8().gram.tolist(), "spin": True, "boundary_components": 1,
         "components": [_sphere("S3")]},
        # order of the Weyl group of E8; every isometry acts trivially on the
        # (zero) discriminant group
        {"order": 696729600, "theta_rank": 0, "torelli_free_rank": 0},
    ),
    CatalogEntry(
        "S2xD2",
        {"name": "S2xD2", "gram": [[0]], "spin": True, "boundary_components": 1,
         "components": [{"label": "S2xS1", "heegaard_genus": 1, "admits_gdt": "yes"}]},
        {"order": 1, "structure": "trivial group", "corank": 1, "torelli_free_rank": 0},
    ),
    CatalogEntry(
        "H",
        {"name": "H", "gram": [[0, 1], [1, 0]], "spin": True, "boundary_components": 1,
         "components": [_sphere("S3")]},
        {"order": 4, "theta_rank": 0, "torelli_free_rank": 0},
    ),
]


def _load_dir(path: Path) -> list[CatalogEntry]:
    out = []
    for f in sorted(path.glob("*.json")):
        try:
            data = json.loads(f.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ModelError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", str(f)) from None
        if not isinstance(data, dict):
            raise ModelError("model must be a JSON object", str(f))
        expected = data.pop("expected", {})
        data.setdefault("name", f.stem)
        try:
            ManifoldModel.from_dict(data)
        except ModelError as exc:
            raise ModelError(str(exc), str(f)) from None
        out.append(CatalogEntry(data["name"], data, expected))
    return out


def entries() -> list[CatalogEntry]:
    """Built-in entries followed by those from ``MCG4_CATALOG_DIR``."""
    out = list(_BUILTIN)
    extra = os.environ.get(CATALOG_ENV)
    if extra:
        path = Path(extra)
        if path.is_dir():
            known = {e.name for e in out}
            out += [e for e in _load_dir(path) if e.name not in known]
    return out


def names() -> list[str]:
    return [e.name for e in entries()]


def get(name: str) -> CatalogEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)
