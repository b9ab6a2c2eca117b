"""Galilean intelligibility: count ontological variables and fused empirical
constants of a statement and score ``I = 1 - N_E / N_O``."""

from .errors import (
    AnnotationInvalid, CycleError, GalileanError, InvalidSpec, ParseError,
    UnboundSymbol, ZeroVariables,
)
from .expr import Statement, parse_expression, parse_statement, render
from .intelligibility import (
    AnalysisResult, ComparisonVerdict, FusedConstantGroup, fuse_constants,
    intelligibility, score, significantly_different,
)
from .netintel import NetworkSpec, load_network_spec, nn_asymptotic_score, nn_score
from .ontology import (
    AnnotationSet, Concept, ConceptKind, StatementRegion, bind_symbols,
    classify_statement, load_annotations, prepare, validate,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationInvalid", "CycleError", "GalileanError", "InvalidSpec", "ParseError",
    "UnboundSymbol", "ZeroVariables", "Statement", "parse_expression", "parse_statement",
    "render", "AnalysisResult", "ComparisonVerdict", "FusedConstantGroup", "fuse_constants",
    "intelligibility", "score", "significantly_different", "NetworkSpec",
    "load_network_spec", "nn_asymptotic_score", "nn_score", "AnnotationSet", "Concept",
    "ConceptKind", "StatementRegion", "bind_symbols", "classify_statement",
    "load_annotations", "prepare", "validate",
]
