from __future__ import annotations

import random

from catgen import random_digraph
from reqlattice.model import (
    ALL,
    CYCLE,
    DUP_EDGE,
    DUP_ID,
    EMPTY_ID,
    EMPTY_SCOPE,
    KIND_FIELDS,
    RL_COVERAGE,
    SELF_EDGE,
    UNKNOWN_REF,
    Catalog,
    Jurisdiction,
    Kind,
    Product,
    RefinementEdge,
    Regulation,
    Requirement,
    Severity,
    expand_scope,
    scope_contains,
    validate,
)


def rfn(rid: str, **kwargs) -> Requirement:
    return Requirement(rid, Kind.RFN, **kwargs)


def codes(issues) -> list[str]:
    return [issue.code for issue in issues]


def test_empty_catalog_is_vacuously_valid():
    report = validate(Catalog())
    assert report.errors == ()
    assert report.warnings == ()
    assert report.ok


def test_all_scope_is_a_singleton_and_expands_at_query_time():
    assert scope_contains(ALL, "anything")
    assert not scope_contains(frozenset({"a"}), "b")
    assert expand_scope(ALL, ["x", "y"]) == {"x", "y"}
    assert expand_scope(frozenset({"a"}), ["x", "y"]) == {"a"}


def test_two_cycle_reports_one_cycle_error():
    catalog = Catalog(
        requirements=[rfn("r1"), rfn("r2")],
        refinements=[RefinementEdge("r1", "r2"), RefinementEdge("r2", "r1")],
    )
    report = validate(catalog)
    assert codes(report.errors) == [CYCLE]
    assert report.errors[0].ids == ("r1", "r2")


def test_rl_requirement_without_citation_is_kind_fields():
    catalog = Catalog(requirements=[Requirement("r1", Kind.RL)])
    report = validate(catalog)
    assert codes(report.errors) == [KIND_FIELDS]
    assert report.errors[0].ids == ("r1",)


def test_rl_with_human_factors_and_rfn_with_citation_are_kind_fields():
    catalog = Catalog(
        regulations=[Regulation("g", jurisdictions=ALL)],
        requirements=[
            Requirement("r1", Kind.RL, derived_from={"g"}, human_factors={"habit"}),
            Requirement("r2", Kind.RFN, derived_from={"g"}),
        ],
    )
    report = validate(catalog)
    assert codes(report.errors) == [KIND_FIELDS, KIND_FIELDS]
    assert [issue.ids for issue in report.errors] == [("r1",), ("r2",)]


def test_duplicate_ids_reported_once_per_id():
    catalog = Catalog(
        jurisdictions=[Jurisdiction("C1"), Jurisdiction("C1"), Jurisdiction("C1")],
        products=[Product("P1"), Product("P1")],
    )
    report = validate(catalog)
    assert codes(report.errors) == [DUP_ID, DUP_ID]
    assert {issue.ids for issue in report.errors} == {("C1",), ("P1",)}


def test_broken_references_reported():
    catalog = Catalog(
        jurisdictions=[Jurisdiction("C1")],
        regulations=[Regulation("g", jurisdictions={"C1", "C9"})],
        requirements=[
            Requirement(
                "r1",
                Kind.RL,
                derived_from={"g", "ghost"},
                applies_to_products={"P9"},
                applies_to_jurisdictions={"C1"},
            )
        ],
    )
    report = validate(catalog)
    assert codes(report.errors) == [UNKNOWN_REF, UNKNOWN_REF, UNKNOWN_REF]
    assert {issue.ids for issue in report.errors} == {
        ("g", "C9"),
        ("r1", "ghost"),
        ("r1", "P9"),
    }


def test_edge_problems_reported():
    catalog = Catalog(
        requirements=[rfn("r1"), rfn("r2")],
        refinements=[
            RefinementEdge("r1", "r1"),
            RefinementEdge("r1", "r2"),
            RefinementEdge("r1", "r2"),
            RefinementEdge("r2", "zz"),
        ],
    )
    report = validate(catalog)
    assert sorted(codes(report.errors)) == [DUP_EDGE, SELF_EDGE, UNKNOWN_REF]


def test_empty_ids_and_empty_regulation_scope():
    catalog = Catalog(
        jurisdictions=[Jurisdiction("")],
        regulations=[Regulation("g", jurisdictions=frozenset())],
    )
    report = validate(catalog)
    assert sorted(codes(report.errors)) == [EMPTY_ID, EMPTY_SCOPE]


def test_rl_coverage_warning_names_uncovered_jurisdictions():
    catalog = Catalog(
        jurisdictions=[Jurisdiction("C1"), Jurisdiction("C2")],
        regulations=[Regulation("s1", jurisdictions={"C1"})],
        requirements=[
            Requirement("r1", Kind.RL, derived_from={"s1"}, applies_to_jurisdictions=ALL)
        ],
    )
    report = validate(catalog)
    assert report.errors == ()
    assert codes(report.warnings) == [RL_COVERAGE]
    assert report.warnings[0].ids == ("r1", "C2")
    assert report.warnings[0].severity is Severity.WARNING


def test_all_scoped_regulation_covers_every_jurisdiction():
    catalog = Catalog(
        jurisdictions=[Jurisdiction("C1"), Jurisdiction("C2")],
        regulations=[Regulation("g", jurisdictions=ALL)],
        requirements=[
            Requirement("r1", Kind.RL, derived_from={"g"}, applies_to_jurisdictions=ALL)
        ],
    )
    assert validate(catalog).warnings == ()


def test_report_ordering_is_sorted_by_code_then_ids():
    catalog = Catalog(
        requirements=[rfn("a"), rfn("b"), Requirement("c", Kind.RL), Requirement("d", Kind.RL)],
        refinements=[RefinementEdge("a", "b"), RefinementEdge("b", "a")],
    )
    report = validate(catalog)
    keys = [issue.sort_key() for issue in report.errors]
    assert keys == sorted(keys)
    assert validate(catalog) == report


def _has_back_edge(nodes: list[str], edges: list[tuple[str, str]]) -> bool:
    # Independent oracle: recursive three-colour DFS.
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        adjacency[a].append(b)
    state: dict[str, int] = {}

    def visit(node: str) -> bool:
        state[node] = 1
        for child in adjacency[node]:
            if state.get(child, 0) == 1:
                return True
            if state.get(child, 0) == 0 and visit(child):
                return True
        state[node] = 2
        return False

    return any(state.get(n, 0) == 0 and visit(n) for n in nodes)


def test_cycle_error_iff_dfs_finds_back_edge():
    rng = random.Random(1701)
    for _ in range(200):
        nodes, edges = random_digraph(rng, max_nodes=7, edge_prob=rng.uniform(0.05, 0.4))
        catalog = Catalog(
            requirements=[rfn(n) for n in nodes],
            refinements=[RefinementEdge(a, b) for a, b in edges],
        )
        report = validate(catalog)
        found_cycle = CYCLE in codes(report.errors)
        assert found_cycle == _has_back_edge(nodes, edges), (nodes, edges)


def test_catalog_collections_are_normalised_and_immutable():
    catalog = Catalog(
        products=[Product("P2"), Product("P1")],
        requirements=[rfn("b"), rfn("a")],
    )
    assert [p.id for p in catalog.products] == ["P1", "P2"]
    assert [r.id for r in catalog.requirements] == ["a", "b"]
    assert catalog == Catalog(
        products=[Product("P1"), Product("P2")],
        requirements=[rfn("a"), rfn("b")],
    )
