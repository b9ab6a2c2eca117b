"""Externally declared ontology for statement symbols.

An :class:`AnnotationSet` says which concept each surface symbol stands for,
which symbols are auxiliary definitions to be inlined, and which function
names are ontologically neutral operators (``D``, ``grad``, ``avg``...).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import expr as ex
from .errors import AnnotationInvalid, CycleError, ParseError, UnboundSymbol

__all__ = [
    "ConceptKind", "Concept", "AnnotationSet", "ValidationReport", "LeafTag",
    "BoundStatement", "StatementRegion", "validate", "load_annotations",
    "bind_symbols", "classify_statement",
]


class ConceptKind(str, enum.Enum):
    VARIABLE = "variable"
    EMPIRICAL_CONSTANT = "empirical_constant"
    MATHEMATICAL_CONSTANT = "mathematical_constant"


@dataclass(frozen=True)
class Concept:
    id: str
    kind: ConceptKind
    measurable: bool = False
    grounding: str = ""

    @property
    def grounded(self) -> bool:
        # pi, e, i and friends are neutral
        return self.kind is not ConceptKind.MATHEMATICAL_CONSTANT


@dataclass(frozen=True)
class AnnotationSet:
    concepts: tuple = ()
    bindings: Mapping[str, str] = field(default_factory=dict)
    auxiliaries: Mapping[str, str] = field(default_factory=dict)
    operators: frozenset = frozenset()
    # problems found while reading a file that cannot be represented above
    load_issues: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        object.__setattr__(self, "operators", frozenset(self.operators))

    def concept(self, concept_id: str) -> Concept:
        for c in self.concepts:
            if c.id == concept_id:
                return c
        raise KeyError(concept_id)

    @property
    def concept_map(self) -> dict:
        return {c.id: c for c in self.concepts}

    @classmethod
    def from_dict(cls, data) -> "AnnotationSet":
        """Build from the decoded JSON object; schema problems become ``load_issues``."""
        issues = []
        if not isinstance(data, dict):
            return cls(load_issues=("annotation file must hold a JSON object",))
        allowed = {"concepts", "bindings", "auxiliaries", "operators"}
        for key in sorted(set(data) - allowed):
            issues.append(f"unknown key {key!r}")

        concepts = []
        for i, raw in enumerate(_as_list(data.get("concepts", []), "concepts", issues)):
            if not isinstance(raw, dict):
                issues.append(f"concepts[{i}] is not an object")
                continue
            for key in sorted(set(raw) - {"id", "kind", "measurable", "grounding"}):
                issues.append(f"concepts[{i}]: unknown key {key!r}")
            cid = raw.get("id")
            if not isinstance(cid, str) or not cid:
                issues.append(f"concepts[{i}]: missing or non-string id")
                continue
            try:
                kind = ConceptKind(raw.get("kind"))
            except ValueError:
                issues.append(f"concept {cid!r}: unknown kind {raw.get('kind')!r}")
                continue
            measurable = raw.get("measurable", False)
            if not isinstance(measurable, bool):
                issues.append(f"concept {cid!r}: measurable must be true or false")
                measurable = bool(measurable)
            grounding = raw.get("grounding", "")
            if not isinstance(grounding, str):
                issues.append(f"concept {cid!r}: grounding must be a string")
                grounding = str(grounding)
            concepts.append(Concept(cid, kind, measurable, grounding))

        bindings = {}
        for i, raw in enumerate(_as_list(data.get("bindings", []), "bindings", issues)):
            pair = _pair(raw, "bindings", i, ("symbol", "concept"), issues)
            if pair is None:
                continue
            sym, cid = pair
            if sym in bindings:
                issues.append(f"duplicate symbol declaration {sym!r} in bindings")
                continue
            bindings[sym] = cid

        auxiliaries = {}
        for i, raw in enumerate(_as_list(data.get("auxiliaries", []), "auxiliaries", issues)):
            pair = _pair(raw, "auxiliaries", i, ("symbol", "definition"), issues)
            if pair is None:
                continue
            sym, definition = pair
            if sym in auxiliaries:
                issues.append(f"duplicate symbol declaration {sym!r} in auxiliaries")
                continue
            auxiliaries[sym] = definition

        operators = []
        for i, raw in enumerate(_as_list(data.get("operators", []), "operators", issues)):
            if not isinstance(raw, str):
                issues.append(f"operators[{i}] is not a string")
            elif raw in operators:
                issues.append(f"duplicate symbol declaration {raw!r} in operators")
            else:
                operators.append(raw)

        return cls(tuple(concepts), bindings, auxiliaries, frozenset(operators),
                   tuple(issues))

    def to_dict(self) -> dict:
        return {
            "concepts": [{"id": c.id, "kind": c.kind.value, "measurable": c.measurable,
                          "grounding": c.grounding} for c in self.concepts],
            "bindings": [{"symbol": s, "concept": c} for s, c in self.bindings.items()],
            "auxiliaries": [{"symbol": s, "definition": d}
                            for s, d in self.auxiliaries.items()],
            "operators": sorted(self.operators),
        }


def _as_list(value, key, issues):
    if isinstance(value, list):
        return value
    issues.append(f"{key!r} must be a list")
    return []


def _pair(raw, section, i, keys, issues):
    if not isinstance(raw, dict):
        issues.append(f"{section}[{i}] is not an object")
        return None
    for key in sorted(set(raw) - set(keys)):
        issues.append(f"{section}[{i}]: unknown key {key!r}")
    values = [raw.get(k) for k in keys]
    if not all(isinstance(v, str) and v for v in values):
        issues.append(f"{section}[{i}]: {keys[0]!r} and {keys[1]!r} must be non-empty strings")
        return None
    return tuple(values)


def load_annotations(path) -> AnnotationSet:
    """Read an annotation file.  Raises :class:`AnnotationInvalid` on malformed JSON."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AnnotationInvalid([f"not valid JSON: {exc}"]) from None
    return AnnotationSet.from_dict(data)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self):
        if self.violations:
            raise AnnotationInvalid(self.violations)


def validate(annotations: AnnotationSet) -> ValidationReport:
    """Collect every violation of the annotation invariants.  Never raises."""
    out = list(annotations.load_issues)
    seen = set()
    for c in annotations.concepts:
        if c.id in seen:
            out.append(f"duplicate concept id {c.id!r}")
        seen.add(c.id)
        if c.kind is ConceptKind.MATHEMATICAL_CONSTANT and c.measurable:
            out.append(f"mathematical constant {c.id!r} cannot be measurable")

    for sym, cid in annotations.bindings.items():
        if cid not in seen:
            out.append(f"dangling concept id {cid!r} (bound from {sym!r})")

    sections = {"bindings": set(annotations.bindings),
                "auxiliaries": set(annotations.auxiliaries),
                "operators": set(annotations.operators)}
    names = list(sections)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for sym in sorted(sections[a] & sections[b]):
                out.append(f"duplicate symbol declaration {sym!r} in {a} and {b}")

    for sym in sorted(set().union(*sections.values())):
        if not ex.IDENT_RE.fullmatch(sym):
            out.append(f"symbol {sym!r} is not a valid identifier")

    parsed = {}
    for sym, definition in annotations.auxiliaries.items():
        try:
            parsed[sym] = ex.parse_expression(definition)
        except ParseError as exc:
            out.append(f"auxiliary parse failure {sym!r}: {exc}")
    graph = {k: ex.free_symbols(v) & parsed.keys() for k, v in parsed.items()}
    cycle = ex.find_cycle(graph)
    if cycle is not None:
        out.append("auxiliary cycle " + "→".join(cycle))
    return ValidationReport(tuple(out))


# -- binding -----------------------------------------------------------------

class LeafTag(str, enum.Enum):
    VARIABLE = "variable"
    EMPIRICAL_CONSTANT = "empirical_constant"
    MATHEMATICAL_CONSTANT = "mathematical_constant"
    NUMERIC_LITERAL = "numeric_literal"
    NEUTRAL_OPERATOR = "neutral_operator"


_TAG_FOR_KIND = {
    ConceptKind.VARIABLE: LeafTag.VARIABLE,
    ConceptKind.EMPIRICAL_CONSTANT: LeafTag.EMPIRICAL_CONSTANT,
    ConceptKind.MATHEMATICAL_CONSTANT: LeafTag.MATHEMATICAL_CONSTANT,
}


@dataclass(frozen=True)
class BoundStatement:
    """A statement whose every symbol and function name carries a tag.

    ``tags`` maps each name to its :class:`LeafTag`; ``concepts`` maps bound
    names to their :class:`Concept`.  Numbers are implicitly
    ``NUMERIC_LITERAL``.
    """

    statement: ex.Statement
    tags: Mapping[str, LeafTag]
    concepts: Mapping[str, Concept]

    def tag(self, node) -> LeafTag:
        if isinstance(node, ex.Number):
            return LeafTag.NUMERIC_LITERAL
        return self.tags[node.name]

    def grounded_concepts(self) -> dict:
        return {c.id: c for c in self.concepts.values() if c.grounded}


def bind_symbols(stmt: ex.Statement, annotations: AnnotationSet) -> BoundStatement:
    """Tag every leaf of an auxiliary-free statement.

    Raises :class:`UnboundSymbol` listing every name that is neither bound
    nor a declared operator.
    """
    cmap = annotations.concept_map
    tags, concepts, missing = {}, {}, []
    names = ex.free_symbols(stmt) | ex.applied_functions(stmt)
    for name in sorted(names):
        if name in annotations.bindings and annotations.bindings[name] in cmap:
            concept = cmap[annotations.bindings[name]]
            tags[name] = _TAG_FOR_KIND[concept.kind]
            concepts[name] = concept
        elif name in annotations.operators:
            tags[name] = LeafTag.NEUTRAL_OPERATOR
        else:
            missing.append(name)
    if missing:
        raise UnboundSymbol(missing)
    return BoundStatement(stmt, tags, concepts)


def prepare(stmt: ex.Statement, annotations: AnnotationSet) -> BoundStatement:
    """Validate, inline auxiliaries and bind in one step."""
    report = validate(annotations)
    report.raise_if_invalid()
    try:
        inlined = ex.inline_auxiliaries(stmt, annotations.auxiliaries)
    except CycleError as exc:  # pragma: no cover - validate catches cycles first
        raise AnnotationInvalid([str(exc)]) from None
    return bind_symbols(inlined, annotations)


# -- classification ----------------------------------------------------------

class StatementRegion(str, enum.Enum):
    QUANTITATIVE_FACT = "QuantitativeFact"
    PURE_MATHEMATICAL = "PureMathematical"
    ONTOLOGICAL_NON_EMPIRICAL = "OntologicalNonEmpirical"
    EMPIRICAL_MATHEMATICAL = "EmpiricalMathematical"


def _side_is_neutral(bound: BoundStatement, side) -> bool:
    for node in ex.walk(side):
        if isinstance(node, (ex.Symbol, ex.Apply)):
            if bound.tag(node) not in (LeafTag.MATHEMATICAL_CONSTANT,
                                       LeafTag.NEUTRAL_OPERATOR):
                return False
    return True


def _single_measurable(bound: BoundStatement, side) -> bool:
    if not isinstance(side, ex.Symbol):
        return False
    concept = bound.concepts.get(side.name)
    return concept is not None and concept.grounded and concept.measurable


def classify_statement(bound: BoundStatement) -> StatementRegion:
    grounded = bound.grounded_concepts()
    if not grounded:
        return StatementRegion.PURE_MATHEMATICAL
    stmt = bound.statement
    for a, b in ((stmt.left, stmt.right), (stmt.right, stmt.left)):
        if _single_measurable(bound, a) and _side_is_neutral(bound, b):
            return StatementRegion.QUANTITATIVE_FACT
    measurable = [c for c in grounded.values() if c.measurable]
    if len(measurable) < 2:
        return StatementRegion.ONTOLOGICAL_NON_EMPIRICAL
    return StatementRegion.EMPIRICAL_MATHEMATICAL
