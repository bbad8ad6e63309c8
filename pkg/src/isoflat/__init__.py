"""Exact chord-diagram kernel for meromorphic differentials with simple poles and real periods."""

__version__ = "0.1.0"

from .numbers import ComplexExact, QuadExt
from .homology import HomologyModel, Submodule, make_model
from .period import PeriodHom, classify_leaf_closure, image_closure
from .chord import ChordDiagram, DecoratedDiagram, classify_13, decorate, enumerate_diagrams
from .schiffer import SchifferMove, apply, applicable_moves
from .connect13 import Certificate, connect, verify

__all__ = [
    "QuadExt",
    "ComplexExact",
    "HomologyModel",
    "Submodule",
    "make_model",
    "PeriodHom",
    "image_closure",
    "classify_leaf_closure",
    "ChordDiagram",
    "DecoratedDiagram",
    "decorate",
    "classify_13",
    "enumerate_diagrams",
    "SchifferMove",
    "apply",
    "applicable_moves",
    "Certificate",
    "connect",
    "verify",
]
