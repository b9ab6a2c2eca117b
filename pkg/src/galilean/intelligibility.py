"""Constant fusion, variable/constant counting and the intelligibility score.

The score of an empirical statement is ``I = 1 - N_E / N_O`` where ``N_O``
counts distinct grounded variable concepts and ``N_E`` counts independent
fused clusters of empirical constants.

Fusion works on a flattened canonical form.  Nested ``+``/``-`` chains become
one n-ary :class:`CSum` with signed terms and nested ``*``/``/`` chains become
one n-ary :class:`CProduct` whose factors carry an exponent sign of +1 or -1.
A node is *constant-pure* when every leaf is an empirical constant, a
mathematical constant, a neutral operator or a literal.  Clusters are:

* every maximal constant-pure subtree outside a sum or product chain
  (a constant exponent over a variable base, a constant function argument,
  a constant side of the statement);
* within each n-ary sum, the union of all constant-pure terms;
* within each n-ary product, the union of all constant-pure factors.

Clusters are identified by their member set of empirical-constant concept
ids.  A cluster whose member set is exactly covered by strictly smaller
clusters is a derived combination (it can be rebuilt from those) and does
not count.  Distributive expansion is never applied.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from . import expr as ex
from .errors import ZeroVariables
from .ontology import (
    AnnotationSet, BoundStatement, ConceptKind, LeafTag, StatementRegion,
    classify_statement, prepare,
)

__all__ = [
    "CAtom", "CSum", "CProduct", "CPower", "CApply", "CFused",
    "canonicalize", "canonical_form", "render_canonical", "constant_clusters",
    "FusedConstantGroup", "fuse_constants", "fused_form", "collapse_clusters",
    "fuse_canonical", "prune_derived",
    "AnalysisResult", "intelligibility", "score", "score_bound",
    "ComparisonVerdict", "significantly_different", "format_decimal",
    "SUB_FLOOR_WARNING",
]

SUB_FLOOR_WARNING = "below the N_O >= 2 floor for empirical statements"


# -- canonical form ----------------------------------------------------------

@dataclass(frozen=True)
class CAtom:
    """A leaf.  ``members`` is non-empty only for an empirical constant."""

    expr: object
    const: bool
    members: frozenset = frozenset()
    variable: str | None = None


@dataclass(frozen=True)
class CSum:
    terms: tuple  # ((sign, node), ...)

    @cached_property
    def const(self):
        return all(t.const for _, t in self.terms)

    @cached_property
    def members(self):
        return frozenset().union(*(t.members for _, t in self.terms))


@dataclass(frozen=True)
class CProduct:
    factors: tuple  # ((exponent_sign, node), ...)

    @cached_property
    def const(self):
        return all(f.const for _, f in self.factors)

    @cached_property
    def members(self):
        return frozenset().union(*(f.members for _, f in self.factors))


@dataclass(frozen=True)
class CPower:
    base: object
    exponent: object

    @cached_property
    def const(self):
        return self.base.const and self.exponent.const

    @cached_property
    def members(self):
        return self.base.members | self.exponent.members


@dataclass(frozen=True)
class CApply:
    name: str
    args: tuple
    name_const: bool = True
    name_members: frozenset = frozenset()

    @cached_property
    def const(self):
        return self.name_const and all(a.const for a in self.args)

    @cached_property
    def members(self):
        return self.name_members.union(*(a.members for a in self.args))


@dataclass(frozen=True)
class CFused:
    """A cluster already fused into a single opaque constant."""

    members: frozenset
    witness: object = field(default=None, compare=False)
    const = True


_MINUS_ONE = ex.Number(-1)


def _leaf(bound: BoundStatement, node) -> CAtom:
    tag = bound.tag(node)
    if tag is LeafTag.VARIABLE:
        return CAtom(node, False, frozenset(), bound.concepts[node.name].id)
    if tag is LeafTag.EMPIRICAL_CONSTANT:
        return CAtom(node, True, frozenset({bound.concepts[node.name].id}))
    return CAtom(node, True)


def _flatten_sum(bound, node, sign, out):
    if isinstance(node, ex.BinaryOp) and node.op in "+-":
        _flatten_sum(bound, node.left, sign, out)
        _flatten_sum(bound, node.right, sign if node.op == "+" else -sign, out)
    elif isinstance(node, ex.Negate):
        _flatten_sum(bound, node.operand, -sign, out)
    else:
        out.append((sign, canonicalize(node, bound)))


def _flatten_product(bound, node, exp, out):
    if isinstance(node, ex.BinaryOp) and node.op in "*/":
        _flatten_product(bound, node.left, exp, out)
        _flatten_product(bound, node.right, exp if node.op == "*" else -exp, out)
    elif isinstance(node, ex.Negate):
        out.append((1, CAtom(_MINUS_ONE, True)))
        _flatten_product(bound, node.operand, exp, out)
    else:
        out.append((exp, canonicalize(node, bound)))


def canonicalize(node, bound: BoundStatement):
    """Flatten an expression of ``bound`` into canonical n-ary form."""
    if isinstance(node, (ex.Number, ex.Symbol)):
        return _leaf(bound, node)
    if isinstance(node, ex.Negate) or (isinstance(node, ex.BinaryOp) and node.op in "+-"):
        terms = []
        _flatten_sum(bound, node, 1, terms)
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return CSum(tuple(terms))
    if isinstance(node, ex.BinaryOp) and node.op in "*/":
        factors = []
        _flatten_product(bound, node, 1, factors)
        return CProduct(tuple(factors))
    if isinstance(node, ex.BinaryOp):
        return CPower(canonicalize(node.left, bound), canonicalize(node.right, bound))
    tag = bound.tags[node.name]
    args = tuple(canonicalize(a, bound) for a in node.args)
    if tag is LeafTag.VARIABLE:
        return CApply(node.name, args, False)
    if tag is LeafTag.EMPIRICAL_CONSTANT:
        return CApply(node.name, args, True, frozenset({bound.concepts[node.name].id}))
    return CApply(node.name, args)


def canonical_form(bound: BoundStatement) -> tuple:
    """Canonical ``(left, right)`` of a bound statement, for inspection."""
    return tuple(canonicalize(side, bound) for side in bound.statement.sides())


def to_expression(node):
    """Convert a canonical node back into a plain :mod:`expr` tree."""
    if isinstance(node, CAtom):
        return node.expr
    if isinstance(node, CFused):
        return node.witness if node.witness is not None else ex.Symbol("fused")
    if isinstance(node, CPower):
        return ex.BinaryOp("^", to_expression(node.base), to_expression(node.exponent))
    if isinstance(node, CApply):
        return ex.Apply(node.name, tuple(to_expression(a) for a in node.args))
    if isinstance(node, CSum):
        return _chain(node.terms, "+", "-", negate_first=lambda e: ex.Negate(e))
    return _chain(node.factors, "*", "/", negate_first=lambda e: ex.BinaryOp("/", ex.Number(1), e))


def _chain(items, pos_op, neg_op, negate_first):
    result = None
    for sign, child in items:
        e = to_expression(child)
        if result is None:
            result = e if sign > 0 else negate_first(e)
        else:
            result = ex.BinaryOp(pos_op if sign > 0 else neg_op, result, e)
    return result


def render_canonical(node) -> str:
    """Human-oriented rendering; fused clusters appear as ``[a,b]``."""
    if isinstance(node, CAtom):
        return ex.render(node.expr)
    if isinstance(node, CFused):
        return "[" + ",".join(sorted(node.members)) + "]"
    if isinstance(node, CPower):
        return f"({render_canonical(node.base)})^({render_canonical(node.exponent)})"
    if isinstance(node, CApply):
        return f"{node.name}(" + ", ".join(render_canonical(a) for a in node.args) + ")"
    if isinstance(node, CSum):
        parts = [("+ " if s > 0 else "- ") + render_canonical(t) for s, t in node.terms]
        return "sum(" + " ".join(parts) + ")"
    parts = [render_canonical(f) + ("" if s > 0 else "^-1") for s, f in node.factors]
    return "prod(" + " ".join(parts) + ")"


# -- clusters ----------------------------------------------------------------

@dataclass(frozen=True)
class _Cluster:
    members: frozenset
    items: tuple        # canonical nodes (with signs) forming the cluster
    kind: str           # "node", "sum" or "product"

    def witness(self):
        if self.kind == "node":
            return to_expression(self.items[0][1])
        if self.kind == "sum":
            return to_expression(CSum(self.items))
        return to_expression(CProduct(self.items))


def _collect(node, out: list):
    if node.const:
        out.append(_Cluster(node.members, ((1, node),), "node"))
        return
    if isinstance(node, (CSum, CProduct)):
        items = node.terms if isinstance(node, CSum) else node.factors
        const = tuple((s, c) for s, c in items if c.const)
        if const:
            members = frozenset().union(*(c.members for _, c in const))
            out.append(_Cluster(members, const, "sum" if isinstance(node, CSum) else "product"))
        for _, child in items:
            if not child.const:
                _collect(child, out)
    elif isinstance(node, CPower):
        _collect(node.base, out)
        _collect(node.exponent, out)
    elif isinstance(node, CApply):
        for a in node.args:
            _collect(a, out)


def _clusters(canon_sides) -> list:
    out: list = []
    for side in canon_sides:
        _collect(side, out)
    return out


def constant_clusters(bound: BoundStatement) -> list:
    """Every distinct non-empty cluster member set, derived ones included,
    in order of first appearance."""
    seen = []
    for c in _clusters(canonical_form(bound)):
        if c.members and c.members not in seen:
            seen.append(c.members)
    return seen


def prune_derived(member_sets: Iterable[frozenset]) -> list:
    """Drop member sets that equal the union of strictly smaller ones present."""
    sets = list(dict.fromkeys(member_sets))
    keep = []
    for s in sets:
        covered = frozenset().union(*(t for t in sets if t < s))
        if covered != s:
            keep.append(s)
    return keep


@dataclass(frozen=True)
class FusedConstantGroup:
    members: frozenset
    witness: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValueError("a fused group needs at least one member")

    def sort_key(self):
        return (len(self.members), sorted(self.members))


def fuse_constants(bound: BoundStatement) -> frozenset:
    """Independent fused empirical-constant groups of a bound statement."""
    return _groups_from_clusters(_clusters(canonical_form(bound)))


def _groups_from_clusters(clusters) -> frozenset:
    first = {}
    for c in clusters:
        if c.members and c.members not in first:
            first[c.members] = c
    return frozenset(FusedConstantGroup(m, first[m].witness())
                     for m in prune_derived(first))


def _replace(node):
    # literal-only clusters stay as they are
    if node.const:
        return CFused(node.members, to_expression(node)) if node.members else node
    if isinstance(node, (CSum, CProduct)):
        items = node.terms if isinstance(node, CSum) else node.factors
        const = tuple((s, c) for s, c in items if c.const)
        members = frozenset().union(*(c.members for _, c in const))
        if not members:
            return type(node)(tuple((s, _replace(c)) for s, c in items))
        rest = tuple((s, _replace(c)) for s, c in items if not c.const)
        wrap = CSum if isinstance(node, CSum) else CProduct
        fused = CFused(members, to_expression(wrap(const)))
        return type(node)(((1, fused),) + rest)
    if isinstance(node, CPower):
        return CPower(_replace(node.base), _replace(node.exponent))
    if isinstance(node, CApply):
        return CApply(node.name, tuple(_replace(a) for a in node.args),
                      node.name_const, node.name_members)
    return node


def collapse_clusters(canon_sides) -> tuple:
    """Collapse every cluster of canonical sides into one :class:`CFused` leaf."""
    return tuple(_replace(side) for side in canon_sides)


def fused_form(bound: BoundStatement) -> tuple:
    """Canonical form with every cluster collapsed to one :class:`CFused` leaf."""
    return collapse_clusters(canonical_form(bound))


def fuse_canonical(canon_sides) -> frozenset:
    """Fuse an already-canonical (possibly already fused) pair of sides."""
    return _groups_from_clusters(_clusters(canon_sides))


# -- scoring -----------------------------------------------------------------

def intelligibility(n_e: int, n_o: int) -> Fraction:
    """``1 - n_e/n_o`` as an exact rational.  Undefined (error) for ``n_o == 0``."""
    if n_o < 0 or n_e < 0:
        raise ValueError("counts must be natural numbers")
    if n_o == 0:
        raise ZeroVariables("no grounded variables: intelligibility is undefined")
    return 1 - Fraction(n_e, n_o)


def format_decimal(value: Fraction, places: int = 6) -> str:
    """Deterministic decimal text, rounded half-even, trailing zeros dropped."""
    value = Fraction(value)
    scaled = round(value * 10 ** places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:].rstrip("0")
    text = f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
    return "0" if text == "-0" else text


@dataclass(frozen=True)
class AnalysisResult:
    name: str
    n_o: int
    n_e: int
    intelligibility: Fraction
    variables: frozenset
    groups: tuple
    region: StatementRegion
    warnings: tuple = ()

    def to_dict(self) -> dict:
        i = self.intelligibility
        return {
            "name": self.name,
            "N_O": self.n_o,
            "N_E": self.n_e,
            "I": {"num": i.numerator, "den": i.denominator},
            "I_decimal": format_decimal(i),
            "region": self.region.value,
            "groups": [sorted(g.members) for g in self.groups],
            "variables": sorted(self.variables),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisResult":
        return cls(
            name=data["name"],
            n_o=data["N_O"],
            n_e=data["N_E"],
            intelligibility=Fraction(data["I"]["num"], data["I"]["den"]),
            variables=frozenset(data.get("variables", ())),
            groups=tuple(FusedConstantGroup(frozenset(g)) for g in data["groups"]),
            region=StatementRegion(data["region"]),
            warnings=tuple(data.get("warnings", ())),
        )


def score_bound(bound: BoundStatement, name: str = "") -> AnalysisResult:
    variables = frozenset(c.id for c in bound.concepts.values()
                          if c.kind is ConceptKind.VARIABLE)
    groups = tuple(sorted(fuse_constants(bound), key=FusedConstantGroup.sort_key))
    n_o, n_e = len(variables), len(groups)
    value = intelligibility(n_e, n_o)
    warnings = (SUB_FLOOR_WARNING,) if n_o < 2 else ()
    return AnalysisResult(name, n_o, n_e, value, variables, groups,
                          classify_statement(bound), warnings)


def score(stmt: ex.Statement, annotations: AnnotationSet, name: str = "") -> AnalysisResult:
    """Score one statement against its annotations.

    Raises ``AnnotationInvalid``, ``UnboundSymbol`` or ``ZeroVariables``.
    """
    return score_bound(prepare(stmt, annotations), name)


# -- comparison --------------------------------------------------------------

class ComparisonVerdict(str, enum.Enum):
    FIRST_MORE_TRANSPARENT = "FirstMoreTransparent"
    SECOND_MORE_TRANSPARENT = "SecondMoreTransparent"
    NOT_SIGNIFICANT = "NotSignificant"


def _perturbed(n_e: int, n_o: int) -> list:
    out = []
    for de in (-1, 0, 1):
        for do in (-1, 0, 1):
            out.append(intelligibility(max(n_e + de, 0), max(n_o + do, 1)))
    return out


def significantly_different(a, b) -> ComparisonVerdict:
    """Compare two results (anything with ``n_e`` and ``n_o``) under +/-1 count noise.

    Each count of each result is perturbed independently by -1, 0 or +1
    (clamped to ``n_e >= 0``, ``n_o >= 1``).  One side wins only if it is
    strictly more intelligible on all 81 combinations.
    """
    ia, ib = _perturbed(a.n_e, a.n_o), _perturbed(b.n_e, b.n_o)
    if min(ia) > max(ib):
        return ComparisonVerdict.FIRST_MORE_TRANSPARENT
    if max(ia) < min(ib):
        return ComparisonVerdict.SECOND_MORE_TRANSPARENT
    return ComparisonVerdict.NOT_SIGNIFICANT
