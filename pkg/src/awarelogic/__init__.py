"""Toolkit for epistemic logics of awareness and unawareness.

Covers three families of models for knowledge with bounded awareness:
classical Kripke structures, Kripke structures augmented with awareness
sets, single-agent generalized standard models with subjective state
spaces, and multi-space structures with a three-valued valuation and
projection maps between spaces. On top of the model layer: parsing and
printing for the object languages, truth evaluation (two- and
three-valued), translations between the model families, bounded
validity checking and countermodel search, Hilbert-style proof
checking, and the event algebra on truth/falsity set pairs.
"""

from .syntax import (
    Formula,
    Top,
    Prop,
    Not,
    And,
    Know,
    Aware,
    XKnow,
    NImp,
    parse,
    render,
)
from .structures import (
    ClassSpec,
    KripkeStructure,
    AwarenessStructure,
    Generated,
    Explicit,
    Gsm,
    HmsStructure,
    TruthValue,
)

__version__ = "0.1.0"

__all__ = [
    "Formula",
    "Top",
    "Prop",
    "Not",
    "And",
    "Know",
    "Aware",
    "XKnow",
    "NImp",
    "parse",
    "render",
    "ClassSpec",
    "KripkeStructure",
    "AwarenessStructure",
    "Generated",
    "Explicit",
    "Gsm",
    "HmsStructure",
    "TruthValue",
    "__version__",
]
