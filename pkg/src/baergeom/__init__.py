"""Finite geometry toolkit for ruled cubic surfaces of PG(4,q) and tangent Baer subplanes of PG(2,q^2)."""

from .gf import ExtensionEmbedding, FieldElement, FieldSpec
from .projgeom import PG, Projectivity, Subspace
from .varieties import (
    Conic,
    ReconstructionError,
    RuledCubicSurface,
    SectionClassifier,
    SectionKind,
    TwistedCubic,
    make_ruled_cubic_surface,
    recover_ruling,
)
from .bruckbose import BruckBoseMap, RegularSpread, make_regular_spread
from .baer import BaerPencil, BaerSubline, BaerSubplane, make_tangent_baer_subplane

__all__ = [
    "BaerPencil",
    "BaerSubline",
    "BaerSubplane",
    "BruckBoseMap",
    "Conic",
    "ExtensionEmbedding",
    "FieldElement",
    "FieldSpec",
    "PG",
    "Projectivity",
    "ReconstructionError",
    "RegularSpread",
    "RuledCubicSurface",
    "SectionClassifier",
    "SectionKind",
    "Subspace",
    "TwistedCubic",
    "make_regular_spread",
    "make_ruled_cubic_surface",
    "make_tangent_baer_subplane",
    "recover_ruling",
]
