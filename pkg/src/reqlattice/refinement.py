"""The stronger/weaker relation between requirements and the strongest-set
optimisation built on it.

A refinement edge `a -> b` declares b a weaker version of a: whoever
satisfies a automatically satisfies b. "Weaker version" means reachability
over declared edges, not just a direct edge; with only raw edges the
optimisation below would depend on processing order. The edge set is
acyclic (validation rejects cycles), so reachability is a strict partial
order and "strongest" is well defined.

`optimize` builds the strongest set iteratively: starting from an empty
result, each input requirement is skipped when it is already present or
weaker than a member, inserted while evicting every member it dominates
when it is stronger, and simply inserted when unrelated. The outcome is
the set of maximal elements of the input, i.e. an antichain, and is
independent of the processing order. `oracle_maximal` recomputes the same
set by brute force over pairwise reachability and exists purely as an
independent correctness check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import algebra
from .algebra import RequirementSet
from .errors import CatalogInvalidError, UnknownIdError
from .model import Catalog, validate


@dataclass(frozen=True)
class RefinementGraph:
    """Declared stronger->weaker edges plus their transitive closure."""

    nodes: frozenset[str]
    direct: Mapping[str, frozenset[str]]
    closure: Mapping[str, frozenset[str]]

    @classmethod
    def from_edges(
        cls, nodes: Iterable[str], edges: Iterable[tuple[str, str]]
    ) -> RefinementGraph:
        """Build the graph for an acyclic edge set.

        Raises ValueError on a cycle or an edge endpoint outside `nodes`.
        """
        node_set = frozenset(nodes)
        adjacency: dict[str, set[str]] = {n: set() for n in node_set}
        indegree: dict[str, int] = {n: 0 for n in node_set}
        for stronger, weaker in edges:
            if stronger not in node_set or weaker not in node_set:
                raise ValueError(f"edge endpoint outside node set: {stronger} -> {weaker}")
            if weaker not in adjacency[stronger]:
                adjacency[stronger].add(weaker)
                indegree[weaker] += 1

        # Kahn topological order; reachability accumulates in reverse.
        ready = sorted(n for n, d in indegree.items() if d == 0)
        order: list[str] = []
        while ready:
            node = ready.pop()
            order.append(node)
            for child in adjacency[node]:
                indegree[child] -= 1
                if indegree[child] == 0:
                    ready.append(child)
        if len(order) != len(node_set):
            raise ValueError("refinement edges contain a cycle")

        reachable: dict[str, frozenset[str]] = {}
        for node in reversed(order):
            weaker: set[str] = set()
            for child in adjacency[node]:
                weaker.add(child)
                weaker |= reachable[child]
            reachable[node] = frozenset(weaker)

        return cls(
            nodes=node_set,
            direct={n: frozenset(children) for n, children in adjacency.items()},
            closure=reachable,
        )

    def _check_known(self, requirement_id: str) -> None:
        if requirement_id not in self.nodes:
            raise UnknownIdError(f"unknown requirement: {requirement_id!r}")


def build_graph(catalog: Catalog) -> RefinementGraph:
    """Materialise the refinement relation of a catalog.

    Refuses catalogs with validation errors: reachability over broken or
    cyclic edges is undefined.
    """
    report = validate(catalog)
    if not report.ok:
        raise CatalogInvalidError(
            "catalog has validation errors: "
            + "; ".join(issue.code for issue in report.errors)
        )
    return RefinementGraph.from_edges(
        catalog.requirement_ids,
        [(edge.stronger, edge.weaker) for edge in catalog.refinements],
    )


def is_weaker(graph: RefinementGraph, a: str, b: str) -> bool:
    """True when `a` is a weaker version of `b` (b reaches a). Irreflexive."""
    graph._check_known(a)
    graph._check_known(b)
    return a in graph.closure[b]


def optimize(
    graph: RefinementGraph,
    members: RequirementSet | Iterable[str],
    *,
    order: Sequence[str] | None = None,
) -> RequirementSet:
    """Drop every requirement that has a stronger version in the input.

    Iterative build-up: per requirement, skip / insert-and-evict / insert,
    as described in the module docstring. `order` overrides the default
    ascending-id processing order; the result is the same for any
    permutation, which the test suite checks, so the parameter exists only
    to exercise that property.
    """
    pending = sorted(members if isinstance(members, RequirementSet) else set(members))
    for requirement_id in pending:
        graph._check_known(requirement_id)
    if order is not None:
        if sorted(order) != pending:
            raise ValueError("order must be a permutation of the input set")
        pending = list(order)

    closure = graph.closure
    result: set[str] = set()
    for req in pending:
        if req in result or any(req in closure[member] for member in result):
            continue
        dominated = {member for member in result if member in closure[req]}
        result -= dominated
        result.add(req)
    return RequirementSet.of(result)


def oracle_maximal(
    graph: RefinementGraph, members: RequirementSet | Iterable[str]
) -> RequirementSet:
    """Brute-force strongest set: keep r iff no other input member reaches r.

    Correctness oracle only. Deliberately quadratic and deliberately blind
    to the precomputed closure: reachability is recomputed here with a
    plain stack walk over the declared edges.
    """
    ids = sorted(members if isinstance(members, RequirementSet) else set(members))
    for requirement_id in ids:
        graph._check_known(requirement_id)

    def walk(start: str) -> set[str]:
        seen: set[str] = set()
        stack = [start]
        while stack:
            node = stack.pop()
            for child in graph.direct[node]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return seen

    reach = {requirement_id: walk(requirement_id) for requirement_id in ids}
    return RequirementSet.of(
        r for r in ids if not any(r in reach[q] for q in ids if q != r)
    )


def strongest_rl(catalog: Catalog, graph: RefinementGraph, jurisdiction_id: str) -> RequirementSet:
    """The jurisdiction's regulation-derived requirements with every weaker
    version removed."""
    return optimize(graph, algebra.jurisdiction_rl(catalog, jurisdiction_id))


def strongest_product(catalog: Catalog, graph: RefinementGraph, product_id: str) -> RequirementSet:
    """The product's complete requirement set with every weaker version removed."""
    return optimize(graph, algebra.product_union(catalog, product_id))


def strongest_global(catalog: Catalog, graph: RefinementGraph) -> RequirementSet:
    """The strongest set over every requirement applicable to at least one
    (product, jurisdiction) pair."""
    members: set[str] = set()
    for product in catalog.products:
        members |= algebra.product_union(catalog, product.id).members
    return optimize(graph, members)
