"""Catalog file format and graph-view export.

Catalog files are single UTF-8 JSON documents (extension `.reqcat.json`)
with exactly the top-level keys version, jurisdictions, regulations,
products, requirements, refinements. The schema is strict: unknown keys,
wrong types, and a version other than 1 are rejected, because compliance
data should fail loudly rather than silently drop fields. An ALL scope is
written as the literal string "all" in place of an id array.

`save` is canonical: fixed key order, arrays sorted by id, inner id lists
sorted, 2-space indentation, trailing newline. Loading a saved catalog
returns an equal catalog, and saving a loaded document canonicalises it.

Graph views (extension `.dot`, UTF-8, LF) render the architectural
dependencies as digraph text:

* country-centred: the focus jurisdiction's regulations split into the
  shared core and the jurisdiction-only complement, feeding the
  general/specific partitions of each product, with the RFN partitions
  alongside;
* product-centred: the focus product's complete requirement set decomposed
  into its per-jurisdiction RL/RFN projections;
* global: every (product, jurisdiction) RL projection feeding the
  per-jurisdiction minimum and strongest sets, which feed the overall
  strongest set.

Load/save/export are pure with respect to the catalog; output is
byte-identical across runs.
"""

from __future__ import annotations

import json
from enum import Enum
from dataclasses import dataclass
from pathlib import Path

from . import algebra, refinement
from .errors import (
    FocusForbiddenError,
    FocusRequiredError,
    ParseError,
    SchemaError,
    UnknownIdError,
)
from .model import (
    ALL,
    Catalog,
    Jurisdiction,
    Kind,
    Product,
    RefinementEdge,
    Regulation,
    Requirement,
    Scope,
)

CATALOG_VERSION = 1
CATALOG_EXTENSION = ".reqcat.json"

_TOP_KEYS = ("version", "jurisdictions", "regulations", "products", "requirements", "refinements")


def _check_keys(obj: dict, required: tuple[str, ...], optional: tuple[str, ...], where: str) -> None:
    for key in obj:
        if key not in required and key not in optional:
            raise SchemaError(f"{where}: unknown key {key!r}")
    for key in required:
        if key not in obj:
            raise SchemaError(f"{where}: missing key {key!r}")


def _str_field(obj: dict, key: str, where: str, default: str | None = None) -> str:
    value = obj.get(key, default)
    if not isinstance(value, str):
        raise SchemaError(f"{where}.{key}: expected string, got {type(value).__name__}")
    return value


def _id_list(value, where: str) -> frozenset[str]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected array of strings, got {type(value).__name__}")
    seen = []
    for item in value:
        if not isinstance(item, str):
            raise SchemaError(f"{where}: expected array of strings")
        if item in seen:
            raise SchemaError(f"{where}: duplicate entry {item!r}")
        seen.append(item)
    return frozenset(seen)


def _scope_field(obj: dict, key: str, where: str) -> Scope:
    if key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if value == "all":
        return ALL
    return _id_list(value, f"{where}.{key}")


def _object_list(value, where: str) -> list[dict]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected array, got {type(value).__name__}")
    for i, item in enumerate(value):
        if not isinstance(item, dict):
            raise SchemaError(f"{where}[{i}]: expected object, got {type(item).__name__}")
    return value


def _parse_jurisdiction(obj: dict, where: str) -> Jurisdiction:
    _check_keys(obj, ("id",), ("name",), where)
    return Jurisdiction(
        id=_str_field(obj, "id", where),
        name=_str_field(obj, "name", where, default=""),
    )


def _parse_regulation(obj: dict, where: str) -> Regulation:
    _check_keys(obj, ("id", "jurisdictions"), ("title",), where)
    return Regulation(
        id=_str_field(obj, "id", where),
        title=_str_field(obj, "title", where, default=""),
        jurisdictions=_scope_field(obj, "jurisdictions", where),
    )


def _parse_product(obj: dict, where: str) -> Product:
    _check_keys(obj, ("id",), ("name",), where)
    return Product(
        id=_str_field(obj, "id", where),
        name=_str_field(obj, "name", where, default=""),
    )


def _parse_requirement(obj: dict, where: str) -> Requirement:
    _check_keys(
        obj,
        ("id", "kind", "applies_to_products", "applies_to_jurisdictions"),
        ("title", "derived_from", "human_factors"),
        where,
    )
    kind = _str_field(obj, "kind", where)
    if kind not in (Kind.RL.value, Kind.RFN.value):
        raise SchemaError(f"{where}.kind: expected \"RL\" or \"RFN\", got {kind!r}")
    return Requirement(
        id=_str_field(obj, "id", where),
        kind=Kind(kind),
        title=_str_field(obj, "title", where, default=""),
        derived_from=_id_list(obj.get("derived_from", []), f"{where}.derived_from"),
        human_factors=_id_list(obj.get("human_factors", []), f"{where}.human_factors"),
        applies_to_products=_scope_field(obj, "applies_to_products", where),
        applies_to_jurisdictions=_scope_field(obj, "applies_to_jurisdictions", where),
    )


def _parse_refinement(obj: dict, where: str) -> RefinementEdge:
    _check_keys(obj, ("stronger", "weaker"), (), where)
    return RefinementEdge(
        stronger=_str_field(obj, "stronger", where),
        weaker=_str_field(obj, "weaker", where),
    )


def loads(text: str | bytes) -> Catalog:
    """Parse and schema-check a catalog document.

    Semantic validation is the caller's job: run model.validate on the
    result before analysing it.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"catalog is not valid UTF-8: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed catalog document at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc

    if not isinstance(document, dict):
        raise SchemaError(f"top level: expected object, got {type(document).__name__}")
    _check_keys(document, _TOP_KEYS, (), "top level")
    version = document["version"]
    if not isinstance(version, int) or isinstance(version, bool) or version != CATALOG_VERSION:
        raise SchemaError(f"version: expected {CATALOG_VERSION}, got {version!r}")

    return Catalog(
        version=version,
        jurisdictions=[
            _parse_jurisdiction(obj, f"jurisdictions[{i}]")
            for i, obj in enumerate(_object_list(document["jurisdictions"], "jurisdictions"))
        ],
        regulations=[
            _parse_regulation(obj, f"regulations[{i}]")
            for i, obj in enumerate(_object_list(document["regulations"], "regulations"))
        ],
        products=[
            _parse_product(obj, f"products[{i}]")
            for i, obj in enumerate(_object_list(document["products"], "products"))
        ],
        requirements=[
            _parse_requirement(obj, f"requirements[{i}]")
            for i, obj in enumerate(_object_list(document["requirements"], "requirements"))
        ],
        refinements=[
            _parse_refinement(obj, f"refinements[{i}]")
            for i, obj in enumerate(_object_list(document["refinements"], "refinements"))
        ],
    )


def load(source) -> Catalog:
    """Load a catalog from a path, a file-like object, or raw bytes."""
    if isinstance(source, (str, Path)):
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
        return loads(data)
    if hasattr(source, "read"):
        return loads(source.read())
    return loads(source)


def _scope_json(scope: Scope):
    if scope is ALL:
        return "all"
    return sorted(scope)


def to_document(catalog: Catalog) -> dict:
    """The canonical plain-dict form of a catalog (fixed key order, sorted arrays)."""
    return {
        "version": catalog.version,
        "jurisdictions": [{"id": j.id, "name": j.name} for j in catalog.jurisdictions],
        "regulations": [
            {"id": r.id, "title": r.title, "jurisdictions": _scope_json(r.jurisdictions)}
            for r in catalog.regulations
        ],
        "products": [{"id": p.id, "name": p.name} for p in catalog.products],
        "requirements": [
            {
                "id": q.id,
                "kind": q.kind.value,
                "title": q.title,
                "derived_from": sorted(q.derived_from),
                "human_factors": sorted(q.human_factors),
                "applies_to_products": _scope_json(q.applies_to_products),
                "applies_to_jurisdictions": _scope_json(q.applies_to_jurisdictions),
            }
            for q in catalog.requirements
        ],
        "refinements": [
            {"stronger": e.stronger, "weaker": e.weaker} for e in catalog.refinements
        ],
    }


def dumps(catalog: Catalog) -> str:
    return json.dumps(to_document(catalog), indent=2, ensure_ascii=False) + "\n"


def save(catalog: Catalog) -> bytes:
    """Canonical byte serialisation; load(save(c)) == c."""
    return dumps(catalog).encode("utf-8")


def save_file(catalog: Catalog, path) -> None:
    Path(path).write_bytes(save(catalog))


class ViewKind(str, Enum):
    COUNTRY_CENTRED = "country"
    PRODUCT_CENTRED = "product"
    GLOBAL = "global"


@dataclass(frozen=True)
class GraphView:
    """A renderable dependency view: labelled nodes and directed edges."""

    kind: ViewKind
    nodes: tuple[tuple[str, str], ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        node_ids = [node_id for node_id, _ in self.nodes]
        if len(node_ids) != len(set(node_ids)):
            raise ValueError("duplicate node ids in graph view")
        known = set(node_ids)
        for src, dst in self.edges:
            if src not in known or dst not in known:
                raise ValueError(f"edge endpoint missing from view: {src} -> {dst}")


def _label_ids(ids) -> str:
    ids = sorted(ids)
    return ", ".join(ids) if ids else "(none)"


def _country_view(catalog: Catalog, jurisdiction_id: str) -> GraphView:
    core, complements = algebra.shared_regulations(catalog)
    nodes = [
        ("complement", f"Jurisdiction-only regulations [{jurisdiction_id}]: "
                       + _label_ids(complements[jurisdiction_id])),
        ("core", "Shared regulations: " + _label_ids(core)),
    ]
    edges = []
    for product in catalog.products:
        rl = algebra.partition_general_specific(catalog, product.id, Kind.RL)
        rfn = algebra.partition_general_specific(catalog, product.id, Kind.RFN)
        pid = product.id
        nodes.extend(
            [
                (f"rl_general__{pid}", f"RL general [{pid}]: " + _label_ids(rl.general)),
                (
                    f"rl_specific__{pid}",
                    f"RL specific [{pid}, {jurisdiction_id}]: "
                    + _label_ids(rl.specific[jurisdiction_id]),
                ),
                (f"rfn_general__{pid}", f"RFN general [{pid}]: " + _label_ids(rfn.general)),
                (
                    f"rfn_specific__{pid}",
                    f"RFN specific [{pid}, {jurisdiction_id}]: "
                    + _label_ids(rfn.specific[jurisdiction_id]),
                ),
            ]
        )
        edges.append(("core", f"rl_general__{pid}"))
        edges.append(("complement", f"rl_specific__{pid}"))
    return GraphView(ViewKind.COUNTRY_CENTRED, tuple(sorted(nodes)), tuple(sorted(edges)))


def _product_view(catalog: Catalog, product_id: str) -> GraphView:
    union = algebra.product_union(catalog, product_id)
    nodes = [("union", f"All requirements [{product_id}]: " + _label_ids(union))]
    edges = []
    for jurisdiction in catalog.jurisdictions:
        jid = jurisdiction.id
        rl = algebra.requirements_for(catalog, product_id, jid, Kind.RL)
        rfn = algebra.requirements_for(catalog, product_id, jid, Kind.RFN)
        nodes.append((f"rl__{jid}", f"RL [{product_id}, {jid}]: " + _label_ids(rl)))
        nodes.append((f"rfn__{jid}", f"RFN [{product_id}, {jid}]: " + _label_ids(rfn)))
        edges.append((f"rl__{jid}", "union"))
        edges.append((f"rfn__{jid}", "union"))
    return GraphView(ViewKind.PRODUCT_CENTRED, tuple(sorted(nodes)), tuple(sorted(edges)))


def _global_view(catalog: Catalog, graph: refinement.RefinementGraph) -> GraphView:
    nodes: list[tuple[str, str]] = []
    edges: list[tuple[str, str]] = []
    if catalog.products and catalog.jurisdictions:
        for jurisdiction in catalog.jurisdictions:
            jid = jurisdiction.id
            minimum = algebra.rl_min(catalog, jid)
            strongest = refinement.strongest_rl(catalog, graph, jid)
            nodes.append((f"rl_min__{jid}", f"RL minimum [{jid}]: " + _label_ids(minimum)))
            nodes.append((f"rl_star__{jid}", f"RL strongest [{jid}]: " + _label_ids(strongest)))
            edges.append((f"rl_star__{jid}", "star"))
            for product in catalog.products:
                pid = product.id
                projection = algebra.requirements_for(catalog, pid, jid, Kind.RL)
                nodes.append(
                    (f"proj__{pid}__{jid}", f"RL [{pid}, {jid}]: " + _label_ids(projection))
                )
                edges.append((f"proj__{pid}__{jid}", f"rl_min__{jid}"))
                edges.append((f"proj__{pid}__{jid}", f"rl_star__{jid}"))
        overall = refinement.strongest_global(catalog, graph)
        nodes.append(("star", "Strongest overall: " + _label_ids(overall)))
    return GraphView(ViewKind.GLOBAL, tuple(sorted(nodes)), tuple(sorted(edges)))


def build_view(
    catalog: Catalog,
    graph: refinement.RefinementGraph,
    kind: ViewKind | str,
    focus: str | None = None,
) -> GraphView:
    """Assemble one of the three dependency views over a validated catalog."""
    kind = ViewKind(kind)
    if kind is ViewKind.COUNTRY_CENTRED:
        if focus is None:
            raise FocusRequiredError("country-centred view needs a jurisdiction focus")
        if focus not in catalog.jurisdiction_ids:
            raise UnknownIdError(f"unknown jurisdiction: {focus!r}")
        return _country_view(catalog, focus)
    if kind is ViewKind.PRODUCT_CENTRED:
        if focus is None:
            raise FocusRequiredError("product-centred view needs a product focus")
        if focus not in catalog.product_ids:
            raise UnknownIdError(f"unknown product: {focus!r}")
        return _product_view(catalog, focus)
    if focus is not None:
        raise FocusForbiddenError("global view takes no focus")
    return _global_view(catalog, graph)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(view: GraphView) -> str:
    """Render a view as digraph text with deterministic node ordering."""
    lines = [f"digraph {view.kind.name.lower()} {{", "  rankdir=LR;", "  node [shape=box];"]
    for node_id, label in view.nodes:
        lines.append(f"  {_dot_quote(node_id)} [label={_dot_quote(label)}];")
    for src, dst in view.edges:
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_view(
    catalog: Catalog,
    graph: refinement.RefinementGraph,
    kind: ViewKind | str,
    focus: str | None = None,
) -> str:
    return render_dot(build_view(catalog, graph, kind, focus))
