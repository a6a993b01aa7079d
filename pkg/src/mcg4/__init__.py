"""Mapping class group invariants of simply connected 4-manifolds with boundary.

Everything is computed from homological data with exact integer and GF(2)
linear algebra.
"""
from ._kernels import BACKEND
from .automorphisms import IsometryGroup, enumerate_isometries, isometry_group
from .forms import (
    EnumerationUnsupported,
    FormError,
    Isometry,
    SymmetricForm,
    direct_sum,
    e8,
    hyperbolic,
    make_form,
)
from .james import F2Poly, e3_report, sq2, sq2_w
from .mcg import ManifoldModel, MCGReport, analyze, stabilize_model, torelli
from .variations import FormVariation, SkewForm, compose, inverse, lift_isometry, xi

__version__ = "0.1.0"
