"""Domain types for multi-jurisdiction requirement catalogs, plus catalog validation.

A catalog holds jurisdictions (countries, states, organisations), the
regulations belonging to them, the products under development, the
requirements with their applicability scopes, and the refinement edges
declaring that one requirement is a stronger version of another.

Validation never raises: every violation becomes an entry in the returned
report, and a catalog is usable by the other modules only when the report
carries zero errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Union


class AllScope:
    """Singleton marker: a scope covering every entity of the referenced type.

    The marker expands against the catalog's current entity set at query
    time, so adding a jurisdiction or product widens existing ALL scopes.
    """

    _instance: AllScope | None = None

    def __new__(cls) -> AllScope:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ALL"


ALL = AllScope()

Scope = Union[AllScope, frozenset[str]]


def scope_contains(scope: Scope, entity_id: str) -> bool:
    """True when the scope covers the given entity id."""
    return scope is ALL or entity_id in scope


def expand_scope(scope: Scope, universe: Iterable[str]) -> frozenset[str]:
    """Resolve a scope to concrete ids against the current entity universe."""
    if scope is ALL:
        return frozenset(universe)
    return scope


def _as_scope(value) -> Scope:
    if isinstance(value, AllScope):
        return ALL
    return frozenset(value)


class Kind(str, Enum):
    """Requirement kind: regulation-derived (RL) or regulation-independent (RFN)."""

    RL = "RL"
    RFN = "RFN"


def _as_kind(value) -> Kind:
    if isinstance(value, Kind):
        return value
    return Kind(str(value).upper())


@dataclass(frozen=True)
class Jurisdiction:
    """A country, state, or organisation with its own regulation set."""

    id: str
    name: str = ""


@dataclass(frozen=True)
class Regulation:
    """A law or standard belonging to one or more jurisdictions."""

    id: str
    title: str = ""
    jurisdictions: Scope = ALL

    def __post_init__(self) -> None:
        object.__setattr__(self, "jurisdictions", _as_scope(self.jurisdictions))


@dataclass(frozen=True)
class Product:
    """A software component or system under development."""

    id: str
    name: str = ""


@dataclass(frozen=True)
class Requirement:
    """One requirement with provenance and applicability scopes.

    RL requirements cite the regulations they derive from and carry no
    human-factor tags; RFN requirements cite no regulations and may carry
    free-form human-factor tags.
    """

    id: str
    kind: Kind
    title: str = ""
    derived_from: frozenset[str] = frozenset()
    human_factors: frozenset[str] = frozenset()
    applies_to_products: Scope = ALL
    applies_to_jurisdictions: Scope = ALL

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", _as_kind(self.kind))
        object.__setattr__(self, "derived_from", frozenset(self.derived_from))
        object.__setattr__(self, "human_factors", frozenset(self.human_factors))
        object.__setattr__(self, "applies_to_products", _as_scope(self.applies_to_products))
        object.__setattr__(
            self, "applies_to_jurisdictions", _as_scope(self.applies_to_jurisdictions)
        )


@dataclass(frozen=True)
class RefinementEdge:
    """Declares that `stronger` subsumes `weaker` (weaker is a weaker version)."""

    stronger: str
    weaker: str


@dataclass(frozen=True)
class Catalog:
    """The complete model. Immutable; collections are kept sorted by id."""

    version: int = 1
    jurisdictions: tuple[Jurisdiction, ...] = ()
    regulations: tuple[Regulation, ...] = ()
    products: tuple[Product, ...] = ()
    requirements: tuple[Requirement, ...] = ()
    refinements: tuple[RefinementEdge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "jurisdictions", tuple(sorted(self.jurisdictions, key=lambda e: e.id))
        )
        object.__setattr__(
            self, "regulations", tuple(sorted(self.regulations, key=lambda e: e.id))
        )
        object.__setattr__(self, "products", tuple(sorted(self.products, key=lambda e: e.id)))
        object.__setattr__(
            self, "requirements", tuple(sorted(self.requirements, key=lambda e: e.id))
        )
        object.__setattr__(
            self,
            "refinements",
            tuple(sorted(self.refinements, key=lambda e: (e.stronger, e.weaker))),
        )

    @cached_property
    def jurisdiction_ids(self) -> frozenset[str]:
        return frozenset(j.id for j in self.jurisdictions)

    @cached_property
    def regulation_ids(self) -> frozenset[str]:
        return frozenset(r.id for r in self.regulations)

    @cached_property
    def product_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.products)

    @cached_property
    def requirement_ids(self) -> frozenset[str]:
        return frozenset(r.id for r in self.requirements)

    @cached_property
    def requirements_by_id(self) -> dict[str, Requirement]:
        out: dict[str, Requirement] = {}
        for req in self.requirements:
            out.setdefault(req.id, req)
        return out

    @cached_property
    def regulations_by_id(self) -> dict[str, Regulation]:
        out: dict[str, Regulation] = {}
        for reg in self.regulations:
            out.setdefault(reg.id, reg)
        return out


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


# Issue codes emitted by validate().
DUP_ID = "DUP_ID"
DUP_EDGE = "DUP_EDGE"
EMPTY_ID = "EMPTY_ID"
EMPTY_SCOPE = "EMPTY_SCOPE"
KIND_FIELDS = "KIND_FIELDS"
SELF_EDGE = "SELF_EDGE"
UNKNOWN_REF = "UNKNOWN_REF"
CYCLE = "CYCLE"
RL_COVERAGE = "RL_COVERAGE"
# Emitted by analysis.consistency_diagnostics, merged into reports by the CLI.
IMPLICATION_VIOLATED = "IMPLICATION_VIOLATED"


@dataclass(frozen=True)
class Issue:
    """One violation: a code, a human-readable message, and the offending ids."""

    severity: Severity
    code: str
    message: str
    ids: tuple[str, ...] = ()

    def sort_key(self) -> tuple[str, tuple[str, ...]]:
        return (self.code, self.ids)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def _error(code: str, message: str, ids: tuple[str, ...]) -> Issue:
    return Issue(Severity.ERROR, code, message, ids)


def _warning(code: str, message: str, ids: tuple[str, ...]) -> Issue:
    return Issue(Severity.WARNING, code, message, ids)


def _check_ids(entities, label: str, issues: list[Issue]) -> None:
    seen: set[str] = set()
    flagged: set[str] = set()
    for entity in entities:
        if not entity.id:
            issues.append(_error(EMPTY_ID, f"{label} with empty id", (entity.id,)))
        elif entity.id in seen and entity.id not in flagged:
            issues.append(
                _error(DUP_ID, f"duplicate {label} id: {entity.id}", (entity.id,))
            )
            flagged.add(entity.id)
        seen.add(entity.id)


def _check_refs(
    owner_id: str, refs: Iterable[str], known: frozenset[str], what: str, issues: list[Issue]
) -> None:
    for ref in sorted(refs):
        if ref not in known:
            issues.append(
                _error(
                    UNKNOWN_REF,
                    f"{owner_id} references unknown {what}: {ref}",
                    (owner_id, ref),
                )
            )


def _kind_problems(req: Requirement) -> list[str]:
    problems = []
    if req.kind is Kind.RL:
        if not req.derived_from:
            problems.append("RL requirement must cite at least one regulation")
        if req.human_factors:
            problems.append("RL requirement must not carry human-factor tags")
    else:
        if req.derived_from:
            problems.append("RFN requirement must not cite regulations")
    return problems


def _cycle_components(nodes: Iterable[str], edges: set[tuple[str, str]]) -> list[list[str]]:
    """Strongly connected components of size >= 2, via iterative Tarjan."""
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for stronger, weaker in sorted(edges):
        adjacency[stronger].append(weaker)

    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    components: list[list[str]] = []

    for root in sorted(adjacency):
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_pos = work.pop()
            if child_pos == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            children = adjacency[node]
            while child_pos < len(children):
                child = children[child_pos]
                child_pos += 1
                if child not in index:
                    work.append((node, child_pos))
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    components.append(sorted(component))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return components


def validate(catalog: Catalog) -> ValidationReport:
    """Check every catalog invariant and report all violations.

    Violations are data, not exceptions. The report ordering is
    deterministic: issues sorted by code, then by offending ids.
    """
    errors: list[Issue] = []
    warnings: list[Issue] = []

    _check_ids(catalog.jurisdictions, "jurisdiction", errors)
    _check_ids(catalog.regulations, "regulation", errors)
    _check_ids(catalog.products, "product", errors)
    _check_ids(catalog.requirements, "requirement", errors)

    jurisdiction_ids = catalog.jurisdiction_ids
    regulation_ids = catalog.regulation_ids
    product_ids = catalog.product_ids
    requirement_ids = catalog.requirement_ids

    for reg in catalog.regulations:
        if reg.jurisdictions is not ALL:
            if not reg.jurisdictions:
                errors.append(
                    _error(
                        EMPTY_SCOPE,
                        f"regulation {reg.id} belongs to no jurisdiction",
                        (reg.id,),
                    )
                )
            _check_refs(reg.id, reg.jurisdictions, jurisdiction_ids, "jurisdiction", errors)

    for req in catalog.requirements:
        problems = _kind_problems(req)
        if problems:
            errors.append(
                _error(KIND_FIELDS, f"{req.id}: " + "; ".join(problems), (req.id,))
            )
        _check_refs(req.id, req.derived_from, regulation_ids, "regulation", errors)
        if req.applies_to_products is not ALL:
            _check_refs(req.id, req.applies_to_products, product_ids, "product", errors)
        if req.applies_to_jurisdictions is not ALL:
            _check_refs(
                req.id, req.applies_to_jurisdictions, jurisdiction_ids, "jurisdiction", errors
            )

    seen_edges: set[tuple[str, str]] = set()
    flagged_edges: set[tuple[str, str]] = set()
    usable_edges: set[tuple[str, str]] = set()
    for edge in catalog.refinements:
        pair = (edge.stronger, edge.weaker)
        if pair in seen_edges:
            if pair not in flagged_edges:
                errors.append(
                    _error(DUP_EDGE, f"duplicate refinement edge {pair[0]} -> {pair[1]}", pair)
                )
                flagged_edges.add(pair)
            continue
        seen_edges.add(pair)
        if edge.stronger == edge.weaker:
            errors.append(
                _error(SELF_EDGE, f"refinement self-edge on {edge.stronger}", (edge.stronger,))
            )
            continue
        broken = False
        for endpoint in (edge.stronger, edge.weaker):
            if endpoint not in requirement_ids:
                errors.append(
                    _error(
                        UNKNOWN_REF,
                        f"refinement edge {pair[0]} -> {pair[1]} "
                        f"references unknown requirement: {endpoint}",
                        (endpoint, pair[0], pair[1]),
                    )
                )
                broken = True
        if not broken:
            usable_edges.add(pair)

    for component in _cycle_components(requirement_ids, usable_edges):
        errors.append(
            _error(
                CYCLE,
                "refinement cycle through: " + ", ".join(component),
                tuple(component),
            )
        )

    for req in catalog.requirements:
        if req.kind is not Kind.RL:
            continue
        covering: set[str] = set()
        for reg_id in req.derived_from:
            reg = catalog.regulations_by_id.get(reg_id)
            if reg is None:
                continue
            covering |= expand_scope(reg.jurisdictions, jurisdiction_ids)
        applicable = expand_scope(req.applies_to_jurisdictions, jurisdiction_ids)
        uncovered = sorted(applicable - covering)
        if uncovered:
            warnings.append(
                _warning(
                    RL_COVERAGE,
                    f"{req.id} applies to jurisdictions not covered by its "
                    "cited regulations: " + ", ".join(uncovered),
                    (req.id, *uncovered),
                )
            )

    return ValidationReport(
        errors=tuple(sorted(errors, key=Issue.sort_key)),
        warnings=tuple(sorted(warnings, key=Issue.sort_key)),
    )
