"""Set constructions over a validated catalog.

All functions are pure: they read the immutable catalog and return new
values, so repeated calls give identical results and concurrent readers
need no locking.

The constructions:

* projection -- the requirements of one (product, jurisdiction) pair,
  optionally restricted to one kind;
* product union -- everything a product must satisfy across all
  jurisdictions;
* jurisdiction union -- all regulation-derived requirements a jurisdiction
  imposes across all products;
* shared regulations -- the regulations common to every jurisdiction (the
  core) and each jurisdiction's private complement;
* per-jurisdiction minimum -- the regulation-derived requirements demanded
  of every product in a jurisdiction (intersection over products);
* general/specific partition -- the split of one product's requirements
  into the part identical across jurisdictions and each jurisdiction's
  remainder.

The general part of a partition is computed as the intersection of the
per-jurisdiction projections, which makes "the general part is the same
in every jurisdiction" a construction guarantee rather than an input
assumption.

RFN requirements reuse the same applicability machinery as RL ones;
human-factor tags never affect set membership, only reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import EmptyCatalogError, UnknownIdError
from .model import Catalog, Kind, scope_contains


@dataclass(frozen=True)
class RequirementSet:
    """A duplicate-free set of requirement ids iterated in ascending order."""

    members: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def of(cls, ids: Iterable[str]) -> RequirementSet:
        return cls(frozenset(ids))

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, requirement_id: object) -> bool:
        return requirement_id in self.members

    def __bool__(self) -> bool:
        return bool(self.members)

    def __or__(self, other: RequirementSet) -> RequirementSet:
        return RequirementSet(self.members | other.members)

    def __and__(self, other: RequirementSet) -> RequirementSet:
        return RequirementSet(self.members & other.members)

    def __sub__(self, other: RequirementSet) -> RequirementSet:
        return RequirementSet(self.members - other.members)

    def issubset(self, other: RequirementSet) -> bool:
        return self.members <= other.members

    def isdisjoint(self, other: RequirementSet) -> bool:
        return self.members.isdisjoint(other.members)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class Partition:
    """General part plus per-jurisdiction specific parts of one projection.

    For every jurisdiction j present: general and specific[j] are disjoint,
    and their union is exactly the j-projection of the partitioned set.
    """

    general: RequirementSet
    specific: Mapping[str, RequirementSet]


class SharedRegulations(NamedTuple):
    core: frozenset[str]
    complements: dict[str, frozenset[str]]


def _require(catalog: Catalog, entity_id: str, known: frozenset[str], what: str) -> None:
    if entity_id not in known:
        raise UnknownIdError(f"unknown {what}: {entity_id!r}")


def _as_kind_filter(kind) -> Kind | None:
    if kind is None or isinstance(kind, Kind):
        return kind
    return Kind(str(kind).upper())


def requirements_for(
    catalog: Catalog,
    product_id: str,
    jurisdiction_id: str,
    kind_filter: Kind | str | None = None,
) -> RequirementSet:
    """Project the catalog onto one (product, jurisdiction) pair.

    A requirement is included when its product scope covers the product and
    its jurisdiction scope covers the jurisdiction; ALL scopes cover
    everything. `kind_filter` restricts to one requirement kind.
    """
    _require(catalog, product_id, catalog.product_ids, "product")
    _require(catalog, jurisdiction_id, catalog.jurisdiction_ids, "jurisdiction")
    kind = _as_kind_filter(kind_filter)
    return RequirementSet.of(
        req.id
        for req in catalog.requirements
        if (kind is None or req.kind is kind)
        and scope_contains(req.applies_to_products, product_id)
        and scope_contains(req.applies_to_jurisdictions, jurisdiction_id)
    )


def product_union(catalog: Catalog, product_id: str) -> RequirementSet:
    """Everything the product must satisfy: the union of its projections
    over all jurisdictions."""
    _require(catalog, product_id, catalog.product_ids, "product")
    members: set[str] = set()
    for jurisdiction in catalog.jurisdictions:
        members |= requirements_for(catalog, product_id, jurisdiction.id).members
    return RequirementSet.of(members)


def jurisdiction_rl(catalog: Catalog, jurisdiction_id: str) -> RequirementSet:
    """All regulation-derived requirements the jurisdiction imposes on any
    product: the union of its RL projections over all products."""
    _require(catalog, jurisdiction_id, catalog.jurisdiction_ids, "jurisdiction")
    members: set[str] = set()
    for product in catalog.products:
        members |= requirements_for(catalog, product.id, jurisdiction_id, Kind.RL).members
    return RequirementSet.of(members)


def jurisdiction_regulations(catalog: Catalog, jurisdiction_id: str) -> frozenset[str]:
    """The regulation ids belonging to one jurisdiction."""
    _require(catalog, jurisdiction_id, catalog.jurisdiction_ids, "jurisdiction")
    return frozenset(
        reg.id for reg in catalog.regulations if scope_contains(reg.jurisdictions, jurisdiction_id)
    )


def shared_regulations(catalog: Catalog) -> SharedRegulations:
    """Split the regulations into the core common to every jurisdiction and
    each jurisdiction's private complement.

    For every jurisdiction j: core and complements[j] are disjoint and
    their union is exactly j's regulation set. Intersecting over zero
    jurisdictions is undefined, so an empty catalog is an error rather
    than a silently fabricated universe.
    """
    if not catalog.jurisdictions:
        raise EmptyCatalogError("shared regulations need at least one jurisdiction")
    per_jurisdiction = {
        j.id: jurisdiction_regulations(catalog, j.id) for j in catalog.jurisdictions
    }
    sets = iter(per_jurisdiction.values())
    core = next(sets)
    for regs in sets:
        core &= regs
    complements = {jid: regs - core for jid, regs in per_jurisdiction.items()}
    return SharedRegulations(core, complements)


def rl_min(catalog: Catalog, jurisdiction_id: str) -> RequirementSet:
    """The regulation-derived requirements demanded of every product in the
    jurisdiction: the intersection of the RL projections over all products."""
    if not catalog.products:
        raise EmptyCatalogError("the per-jurisdiction minimum needs at least one product")
    _require(catalog, jurisdiction_id, catalog.jurisdiction_ids, "jurisdiction")
    result: frozenset[str] | None = None
    for product in catalog.products:
        projection = requirements_for(catalog, product.id, jurisdiction_id, Kind.RL).members
        result = projection if result is None else result & projection
    return RequirementSet(result if result is not None else frozenset())


def partition_general_specific(
    catalog: Catalog, product_id: str, kind: Kind | str
) -> Partition:
    """Split one product's requirements of one kind into the part shared by
    every jurisdiction and each jurisdiction's specific remainder.

    The general part is the intersection of the per-jurisdiction
    projections; specific[j] is the j-projection minus the general part.
    """
    if not catalog.jurisdictions:
        raise EmptyCatalogError("partitioning needs at least one jurisdiction")
    _require(catalog, product_id, catalog.product_ids, "product")
    kind = _as_kind_filter(kind)
    projections = {
        j.id: requirements_for(catalog, product_id, j.id, kind) for j in catalog.jurisdictions
    }
    sets = iter(projections.values())
    general = next(sets).members
    for projection in sets:
        general &= projection.members
    return Partition(
        general=RequirementSet(general),
        specific={jid: RequirementSet(proj.members - general) for jid, proj in projections.items()},
    )
