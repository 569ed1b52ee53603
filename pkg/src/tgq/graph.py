"""Temporal property-graph store.

The store keeps a discrete time domain (the sorted distinct timestamps seen
in the data), per-element existence intervals, and per-attribute value
series. A loaded graph is immutable and safe for concurrent reads; all query
machinery is built on three primitives here:

- ``value_at(t, ref, attr)`` evaluates the data function for one element at
  one time point (with optional carry-forward of the last observed value),
- ``snapshot(t)`` materialises the static graph alive at one time point,
- ``exists_at(ref, t)`` tests interval cover.

Elements may exist over several disjoint intervals (churn). Graph objects
(named subgraphs) are first-class elements: their attribute values may be
recorded directly or aggregated from members.
"""

from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .config import Config
from .errors import (
    ABSENT_ELEMENT,
    CONSISTENCY_ERROR,
    MISSING_VALUE,
    SCHEMA_ERROR,
    TgqError,
    VALIDATION_ERROR,
)


class ElemKind(str, Enum):
    NODE = "node"
    EDGE = "edge"
    OBJECT = "object"


class AttrKind(str, Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"
    BOOLEAN = "boolean"


@dataclass(frozen=True, order=True)
class GraphElementRef:
    """A reference to a node, edge, or graph object by kind and id."""

    kind: ElemKind
    id: str

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.id}"

    @staticmethod
    def parse(token: str) -> "GraphElementRef":
        kind, _, ident = token.partition(":")
        try:
            return GraphElementRef(ElemKind(kind), ident)
        except ValueError:
            raise TgqError(
                SCHEMA_ERROR, f"bad element reference '{token}' (want kind:id)"
            ) from None


def node_ref(ident: str) -> GraphElementRef:
    return GraphElementRef(ElemKind.NODE, ident)


def edge_ref(ident: str) -> GraphElementRef:
    return GraphElementRef(ElemKind.EDGE, ident)


def object_ref(ident: str) -> GraphElementRef:
    return GraphElementRef(ElemKind.OBJECT, ident)


@dataclass(frozen=True)
class TimeInterval:
    """Contiguous, inclusive range of time-domain indices."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise TgqError(VALIDATION_ERROR, f"interval start {self.start} > end {self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def indices(self) -> range:
        return range(self.start, self.end + 1)

    def contains(self, t: int) -> bool:
        return self.start <= t <= self.end


@dataclass(frozen=True)
class EdgeDef:
    src: str
    dst: str
    directed: bool
    intervals: tuple  # tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ObjectDef:
    nodes: frozenset
    edges: frozenset


@dataclass(frozen=True)
class GraphSubset:
    """A named, kind-homogeneous set of element references."""

    name: str
    members: tuple  # tuple[GraphElementRef, ...], sorted


@dataclass
class Snapshot:
    """Static view of the graph at one time index."""

    t: int
    nodes: tuple
    edges: tuple  # tuple[(edge_id, src, dst, directed), ...]
    adjacency: dict  # node -> tuple of neighbours (undirected view)
    out_adjacency: dict  # node -> tuple of successors (directed edges + both ways for undirected)
    in_adjacency: dict

    def has_node(self, ident: str) -> bool:
        return ident in self.adjacency

    def neighbours(self, ident: str, direction: str = "any") -> tuple:
        table = {
            "any": self.adjacency,
            "out": self.out_adjacency,
            "in": self.in_adjacency,
        }[direction]
        return table.get(ident, ())


class TemporalGraph:
    """Immutable temporal graph; construct via :func:`load`."""

    def __init__(
        self,
        time_labels,
        nodes,
        edges,
        objects,
        subsets,
        attrs,
        attr_kinds,
        external_series,
    ):
        self.time_labels = tuple(time_labels)
        self.time_index = {label: i for i, label in enumerate(self.time_labels)}
        self.nodes = dict(nodes)  # id -> tuple of (start,end) index intervals
        self.edges = dict(edges)  # id -> EdgeDef
        self.objects = dict(objects)  # id -> ObjectDef
        self.subsets = dict(subsets)  # name -> GraphSubset
        # (kind, id, attr) -> ((t_index, value), ...) sorted by t_index
        self.attrs = dict(attrs)
        self.attr_kinds = dict(attr_kinds)  # attr name -> AttrKind
        self.external_series = dict(external_series)  # name -> {t_index: float}
        self._snapshots: dict = {}
        self._node_edges: dict = {}
        for edge_id, e in self.edges.items():
            self._node_edges.setdefault(e.src, []).append(edge_id)
            if e.dst != e.src:
                self._node_edges.setdefault(e.dst, []).append(edge_id)
        for lst in self._node_edges.values():
            lst.sort()

    # -- basic structure ---------------------------------------------------

    @property
    def n_times(self) -> int:
        return len(self.time_labels)

    def full_interval(self) -> TimeInterval:
        if not self.time_labels:
            raise TgqError(VALIDATION_ERROR, "graph has an empty time domain")
        return TimeInterval(0, self.n_times - 1)

    def index_of(self, label) -> int:
        key = _norm_label(label)
        if key not in self.time_index:
            raise TgqError(VALIDATION_ERROR, f"time label {label!r} not in the time domain")
        return self.time_index[key]

    def label_of(self, t: int):
        return self.time_labels[t]

    def node_ids(self) -> list:
        return sorted(self.nodes)

    def edge_ids(self) -> list:
        return sorted(self.edges)

    def object_ids(self) -> list:
        return sorted(self.objects)

    def all_refs(self, kinds=(ElemKind.NODE, ElemKind.EDGE)) -> list:
        refs = []
        if ElemKind.NODE in kinds:
            refs.extend(node_ref(i) for i in self.node_ids())
        if ElemKind.EDGE in kinds:
            refs.extend(edge_ref(i) for i in self.edge_ids())
        if ElemKind.OBJECT in kinds:
            refs.extend(object_ref(i) for i in self.object_ids())
        return refs

    def has_ref(self, ref: GraphElementRef) -> bool:
        table = {
            ElemKind.NODE: self.nodes,
            ElemKind.EDGE: self.edges,
            ElemKind.OBJECT: self.objects,
        }[ref.kind]
        return ref.id in table

    def subset(self, name: str) -> GraphSubset:
        if name not in self.subsets:
            raise TgqError(VALIDATION_ERROR, f"unknown subset '{name}'")
        return self.subsets[name]

    def object_members(self, ident: str) -> ObjectDef:
        if ident not in self.objects:
            raise TgqError(VALIDATION_ERROR, f"unknown graph object '{ident}'")
        return self.objects[ident]

    # -- existence ---------------------------------------------------------

    def _intervals_of(self, ref: GraphElementRef):
        if ref.kind == ElemKind.NODE:
            if ref.id not in self.nodes:
                raise TgqError(VALIDATION_ERROR, f"unknown node '{ref.id}'")
            return self.nodes[ref.id]
        if ref.kind == ElemKind.EDGE:
            if ref.id not in self.edges:
                raise TgqError(VALIDATION_ERROR, f"unknown edge '{ref.id}'")
            return self.edges[ref.id].intervals
        return None  # objects: existence derived from members

    def exists_at(self, ref: GraphElementRef, t: int) -> bool:
        if ref.kind == ElemKind.OBJECT:
            members = self.object_members(ref.id)
            return any(self.exists_at(node_ref(n), t) for n in members.nodes)
        return _covered(self._intervals_of(ref), t)

    def existence_points(self, ref: GraphElementRef, interval: TimeInterval) -> list:
        return [t for t in interval.indices() if self.exists_at(ref, t)]

    # -- data function -----------------------------------------------------

    def attr_kind(self, attr: str) -> AttrKind:
        if attr not in self.attr_kinds:
            raise TgqError(VALIDATION_ERROR, f"attribute '{attr}' is not declared by the data")
        return self.attr_kinds[attr]

    def value_at(self, t: int, ref: GraphElementRef, attr: str, cfg: Config):
        """Evaluate the data function: the value of ``attr`` for ``ref`` at ``t``."""
        value, _ = self.value_at_info(t, ref, attr, cfg)
        return value

    def value_at_info(self, t: int, ref: GraphElementRef, attr: str, cfg: Config):
        """Like :meth:`value_at` but also reports whether the value was
        aggregated from a graph object's members rather than recorded."""
        self.attr_kind(attr)
        if not self.exists_at(ref, t):
            raise TgqError(
                ABSENT_ELEMENT, f"{ref} does not exist at t={self.label_of(t)}"
            )
        if ref.kind != ElemKind.OBJECT:
            return self._series_value(t, ref, attr, cfg), False
        # Recorded object attribute wins; otherwise aggregate over members.
        try:
            return self._series_value(t, ref, attr, cfg), False
        except TgqError as err:
            if err.code != MISSING_VALUE:
                raise
        return self._aggregate_members(t, ref, attr, cfg), True

    def defined_at(self, t: int, ref: GraphElementRef, attr: str, cfg: Config) -> bool:
        try:
            self.value_at(t, ref, attr, cfg)
            return True
        except TgqError as err:
            if err.code in (ABSENT_ELEMENT, MISSING_VALUE):
                return False
            raise

    def _series_value(self, t: int, ref: GraphElementRef, attr: str, cfg: Config):
        series = self.attrs.get((ref.kind, ref.id, attr), ())
        times = [rec[0] for rec in series]
        pos = bisect_right(times, t)
        if pos and times[pos - 1] == t:
            return series[pos - 1][1]
        if pos and cfg.carries_forward(attr):
            t_rec, value = series[pos - 1]
            # The last observed value persists only while the element stays
            # alive: both points must fall in the same existence interval.
            if ref.kind != ElemKind.OBJECT:
                for s, e in self._intervals_of(ref):
                    if s <= t_rec and t <= e:
                        return value
            else:
                if all(
                    self.exists_at(ref, u) for u in range(t_rec, t + 1)
                ):
                    return value
        raise TgqError(
            MISSING_VALUE, f"no value of '{attr}' for {ref} at t={self.label_of(t)}"
        )

    def _aggregate_members(self, t: int, ref: GraphElementRef, attr: str, cfg: Config):
        members = self.object_members(ref.id)
        values = []
        for n in sorted(members.nodes):
            r = node_ref(n)
            if self.defined_at(t, r, attr, cfg):
                values.append(self.value_at(t, r, attr, cfg))
        for e in sorted(members.edges):
            r = edge_ref(e)
            if self.defined_at(t, r, attr, cfg):
                values.append(self.value_at(t, r, attr, cfg))
        if not values:
            raise TgqError(
                MISSING_VALUE,
                f"no member of {ref} has a value of '{attr}' at t={self.label_of(t)}",
            )
        kind = self.attr_kind(attr)
        if kind == AttrKind.NUMERIC:
            return sum(values) / len(values)
        # mode with deterministic tie-break (lexicographic; False < True)
        counts: dict = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]

    # -- snapshots -----------------------------------------------------------

    def snapshot(self, t: int) -> Snapshot:
        if not 0 <= t < self.n_times:
            raise TgqError(VALIDATION_ERROR, f"time index {t} outside the domain")
        cached = self._snapshots.get(t)
        if cached is not None:
            return cached
        nodes = tuple(i for i in self.node_ids() if _covered(self.nodes[i], t))
        edges = []
        adjacency: dict = {n: set() for n in nodes}
        out_adj: dict = {n: set() for n in nodes}
        in_adj: dict = {n: set() for n in nodes}
        for edge_id in self.edge_ids():
            e = self.edges[edge_id]
            if not _covered(e.intervals, t):
                continue
            edges.append((edge_id, e.src, e.dst, e.directed))
            adjacency[e.src].add(e.dst)
            adjacency[e.dst].add(e.src)
            out_adj[e.src].add(e.dst)
            in_adj[e.dst].add(e.src)
            if not e.directed:
                out_adj[e.dst].add(e.src)
                in_adj[e.src].add(e.dst)
        snap = Snapshot(
            t=t,
            nodes=nodes,
            edges=tuple(edges),
            adjacency={n: tuple(sorted(v)) for n, v in adjacency.items()},
            out_adjacency={n: tuple(sorted(v)) for n, v in out_adj.items()},
            in_adjacency={n: tuple(sorted(v)) for n, v in in_adj.items()},
        )
        self._snapshots[t] = snap
        return snap

    def edges_between(self, a: str, b: str, t: int) -> list:
        """Ids of edges alive at t joining nodes a and b (either direction)."""
        out = []
        for edge_id in self._node_edges.get(a, ()):
            e = self.edges[edge_id]
            if {e.src, e.dst} == {a, b} or (a == b and e.src == e.dst == a):
                if _covered(e.intervals, t):
                    out.append(edge_id)
        return out

    def edges_between_any(self, a: str, targets, t: int) -> list:
        """Ids of edges alive at t joining node a to any node in ``targets``."""
        out = []
        for edge_id in self._node_edges.get(a, ()):
            e = self.edges[edge_id]
            other = e.dst if e.src == a else e.src
            if other in targets and _covered(e.intervals, t):
                out.append(edge_id)
        return out

    # -- equality / dump -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.time_labels == other.time_labels
            and self.nodes == other.nodes
            and self.edges == other.edges
            and self.objects == other.objects
            and self.subsets == other.subsets
            and self.attrs == other.attrs
            and self.attr_kinds == other.attr_kinds
            and self.external_series == other.external_series
        )

    def stats(self) -> dict:
        return {
            "nodes": len(self.nodes),
            "edges": len(self.edges),
            "objects": len(self.objects),
            "subsets": len(self.subsets),
            "attributes": len(self.attr_kinds),
            "external_series": len(self.external_series),
            "time_points": self.n_times,
        }

    def dump(self) -> str:
        """Serialize back to canonical JSON lines; ``load`` of the dump
        reproduces an equal graph."""
        lines = []
        for ident in self.node_ids():
            for s, e in self.nodes[ident]:
                lines.append(
                    {"type": "node", "id": ident,
                     "start": self.label_of(s), "end": self.label_of(e)}
                )
        for ident in self.edge_ids():
            e = self.edges[ident]
            for s, t_ in e.intervals:
                lines.append(
                    {"type": "edge", "id": ident, "src": e.src, "dst": e.dst,
                     "directed": e.directed,
                     "start": self.label_of(s), "end": self.label_of(t_)}
                )
        for ident in self.object_ids():
            o = self.objects[ident]
            lines.append(
                {"type": "object", "id": ident,
                 "nodes": sorted(o.nodes), "edges": sorted(o.edges)}
            )
        for name in sorted(self.subsets):
            lines.append(
                {"type": "subset", "name": name,
                 "members": [str(m) for m in self.subsets[name].members]}
            )
        for (kind, ident, attr) in sorted(self.attrs, key=lambda k: (k[0].value, k[1], k[2])):
            for t, value in self.attrs[(kind, ident, attr)]:
                lines.append(
                    {"type": "attr", "elem": f"{kind.value}:{ident}", "name": attr,
                     "t": self.label_of(t), "value": value}
                )
        for name in sorted(self.external_series):
            for t in sorted(self.external_series[name]):
                lines.append(
                    {"type": "series", "name": name,
                     "t": self.label_of(t), "value": self.external_series[name][t]}
                )
        return "\n".join(json.dumps(rec, sort_keys=True) for rec in lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

_RECORD_TYPES = {"node", "edge", "attr", "subset", "object", "series"}


def load(stream: Iterable) -> TemporalGraph:
    """Build a TemporalGraph from an iterable of event records.

    ``stream`` yields either JSON-lines text lines or already-decoded dicts.
    The time domain is the sorted set of distinct timestamps appearing
    anywhere in the records; an omitted interval ``end`` means "until the
    last timestamp".
    """
    records = []
    for lineno, item in enumerate(stream, start=1):
        if isinstance(item, (bytes, str)):
            text = item.decode("utf-8") if isinstance(item, bytes) else item
            if not text.strip():
                continue
            try:
                rec = json.loads(text)
            except json.JSONDecodeError as err:
                raise TgqError(
                    SCHEMA_ERROR, f"line {lineno}: invalid JSON ({err.msg})", line=lineno
                ) from None
        else:
            rec = item
        if not isinstance(rec, dict):
            raise TgqError(SCHEMA_ERROR, f"line {lineno}: record must be an object", line=lineno)
        records.append((lineno, rec))

    # Pass 1: collect every timestamp so intervals can be index-resolved.
    labels = set()
    for lineno, rec in records:
        rtype = rec.get("type")
        if rtype not in _RECORD_TYPES:
            raise TgqError(
                SCHEMA_ERROR, f"line {lineno}: unknown record type {rtype!r}", line=lineno
            )
        if rtype in ("node", "edge"):
            labels.add(_norm_label(_require(rec, "start", lineno)))
            if rec.get("end") is not None:
                labels.add(_norm_label(rec["end"]))
        elif rtype in ("attr", "series"):
            labels.add(_norm_label(_require(rec, "t", lineno)))
    time_labels = _sort_labels(labels)
    index = {label: i for i, label in enumerate(time_labels)}
    last = len(time_labels) - 1

    def interval_of(rec, lineno):
        start = index[_norm_label(rec["start"])]
        end = index[_norm_label(rec["end"])] if rec.get("end") is not None else last
        if start > end:
            raise TgqError(
                SCHEMA_ERROR, f"line {lineno}: interval start after end", line=lineno
            )
        return (start, end)

    nodes: dict = {}
    edge_meta: dict = {}
    edge_ivals: dict = {}
    objects: dict = {}
    subset_raw: dict = {}
    attr_raw: list = []
    attr_kinds: dict = {}
    external: dict = {}

    for lineno, rec in records:
        rtype = rec["type"]
        if rtype == "node":
            ident = _require_str(rec, "id", lineno)
            nodes.setdefault(ident, []).append(interval_of(rec, lineno))
        elif rtype == "edge":
            ident = _require_str(rec, "id", lineno)
            src = _require_str(rec, "src", lineno)
            dst = _require_str(rec, "dst", lineno)
            directed = bool(rec.get("directed", False))
            meta = (src, dst, directed)
            if edge_meta.setdefault(ident, meta) != meta:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: edge '{ident}' re-declared with different endpoints",
                    line=lineno,
                )
            edge_ivals.setdefault(ident, []).append(interval_of(rec, lineno))
        elif rtype == "object":
            ident = _require_str(rec, "id", lineno)
            members = rec.get("nodes")
            if not isinstance(members, list) or not members:
                raise TgqError(
                    SCHEMA_ERROR, f"line {lineno}: object needs a non-empty 'nodes' list",
                    line=lineno,
                )
            objects[ident] = (lineno, [str(n) for n in members],
                              [str(e) for e in rec.get("edges", [])] if rec.get("edges") is not None else None)
        elif rtype == "subset":
            name = _require_str(rec, "name", lineno)
            members = rec.get("members")
            if not isinstance(members, list) or not members:
                raise TgqError(
                    SCHEMA_ERROR, f"line {lineno}: subset needs a non-empty 'members' list",
                    line=lineno,
                )
            subset_raw[name] = (lineno, [str(m) for m in members])
        elif rtype == "attr":
            elem = _require_str(rec, "elem", lineno)
            name = _require_str(rec, "name", lineno)
            t = index[_norm_label(_require(rec, "t", lineno))]
            value = _require(rec, "value", lineno)
            kind = _value_kind(value, lineno)
            declared = attr_kinds.setdefault(name, kind)
            if declared != kind:
                raise TgqError(
                    SCHEMA_ERROR,
                    f"line {lineno}: attribute '{name}' is {declared.value} "
                    f"but got a {kind.value} value",
                    line=lineno,
                )
            if kind == AttrKind.NUMERIC:
                value = float(value)
            attr_raw.append((lineno, GraphElementRef.parse(elem), name, t, value))
        elif rtype == "series":
            name = _require_str(rec, "name", lineno)
            t = index[_norm_label(_require(rec, "t", lineno))]
            value = _require(rec, "value", lineno)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TgqError(
                    SCHEMA_ERROR, f"line {lineno}: series values must be numeric", line=lineno
                )
            if t in external.setdefault(name, {}):
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: duplicate point t={rec['t']} in series '{name}'",
                    line=lineno,
                )
            external[name][t] = float(value)

    nodes = {i: _merge_intervals(v) for i, v in nodes.items()}
    edges = {}
    for ident, (src, dst, directed) in edge_meta.items():
        edges[ident] = EdgeDef(src, dst, directed, _merge_intervals(edge_ivals[ident]))

    # Consistency: edge endpoints must exist over the edge's whole lifetime.
    for ident, e in sorted(edges.items()):
        for endpoint in (e.src, e.dst):
            if endpoint not in nodes:
                raise TgqError(
                    CONSISTENCY_ERROR, f"edge '{ident}' references unknown node '{endpoint}'"
                )
        for s, t_ in e.intervals:
            for t in range(s, t_ + 1):
                if not (_covered(nodes[e.src], t) and _covered(nodes[e.dst], t)):
                    raise TgqError(
                        CONSISTENCY_ERROR,
                        f"edge '{ident}' is alive at t={time_labels[t]} "
                        "but an endpoint is not",
                    )

    resolved_objects = {}
    for ident, (lineno, member_nodes, member_edges) in sorted(objects.items()):
        node_set = frozenset(member_nodes)
        for n in member_nodes:
            if n not in nodes:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: object '{ident}' references unknown node '{n}'",
                    line=lineno,
                )
        if member_edges is None:
            # Default: the induced edges among the member nodes.
            member_edges = [
                eid for eid, e in sorted(edges.items())
                if e.src in node_set and e.dst in node_set
            ]
        for eid in member_edges:
            if eid not in edges:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: object '{ident}' references unknown edge '{eid}'",
                    line=lineno,
                )
            e = edges[eid]
            if e.src not in node_set or e.dst not in node_set:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: object '{ident}' edge '{eid}' joins non-member nodes",
                    line=lineno,
                )
        resolved_objects[ident] = ObjectDef(node_set, frozenset(member_edges))

    subsets = {}
    for name, (lineno, member_tokens) in sorted(subset_raw.items()):
        refs = sorted(GraphElementRef.parse(tok) for tok in member_tokens)
        kinds = {r.kind for r in refs}
        if len(kinds) > 1:
            raise TgqError(
                CONSISTENCY_ERROR,
                f"line {lineno}: subset '{name}' mixes element kinds", line=lineno,
            )
        for r in refs:
            table = {"node": nodes, "edge": edges, "object": resolved_objects}[r.kind.value]
            if r.id not in table:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: subset '{name}' references unknown {r.kind.value} '{r.id}'",
                    line=lineno,
                )
        subsets[name] = GraphSubset(name, tuple(refs))

    attrs: dict = {}
    for lineno, ref, name, t, value in attr_raw:
        if ref.kind == ElemKind.OBJECT:
            if ref.id not in resolved_objects:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: attribute on unknown object '{ref.id}'", line=lineno,
                )
            alive = any(
                _covered(nodes[n], t) for n in resolved_objects[ref.id].nodes
            )
        elif ref.kind == ElemKind.NODE:
            if ref.id not in nodes:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: attribute on unknown node '{ref.id}'", line=lineno,
                )
            alive = _covered(nodes[ref.id], t)
        else:
            if ref.id not in edges:
                raise TgqError(
                    CONSISTENCY_ERROR,
                    f"line {lineno}: attribute on unknown edge '{ref.id}'", line=lineno,
                )
            alive = _covered(edges[ref.id].intervals, t)
        if not alive:
            raise TgqError(
                CONSISTENCY_ERROR,
                f"line {lineno}: attribute '{name}' recorded at t={time_labels[t]} "
                f"but {ref} does not exist there",
                line=lineno,
            )
        series = attrs.setdefault((ref.kind, ref.id, name), {})
        if t in series and series[t] != value:
            raise TgqError(
                CONSISTENCY_ERROR,
                f"line {lineno}: conflicting values of '{name}' for {ref} "
                f"at t={time_labels[t]}",
                line=lineno,
            )
        series[t] = value

    attrs_sorted = {
        key: tuple(sorted(series.items())) for key, series in attrs.items()
    }

    return TemporalGraph(
        time_labels=time_labels,
        nodes={i: tuple(v) for i, v in sorted(nodes.items())},
        edges=dict(sorted(edges.items())),
        objects=resolved_objects,
        subsets=subsets,
        attrs=attrs_sorted,
        attr_kinds=dict(sorted(attr_kinds.items())),
        external_series={k: dict(v) for k, v in sorted(external.items())},
    )


def load_path(path: str) -> TemporalGraph:
    """Load from a .jsonl (default) or .csv file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return load(_csv_records(text))
    return load(text.splitlines())


def _csv_records(text: str):
    """CSV variant of the ingest format: same columns, empty cells omitted.

    ``members``/``nodes``/``edges`` cells hold ';'-separated lists; other
    cells are interpreted as JSON scalars where possible.
    """
    reader = csv.DictReader(io.StringIO(text))
    list_cols = {"members", "nodes", "edges"}
    for row in reader:
        rec = {}
        for key, cell in row.items():
            if key is None or cell is None or cell == "":
                continue
            if key in list_cols and row.get("type") in ("subset", "object"):
                rec[key] = cell.split(";")
            else:
                try:
                    rec[key] = json.loads(cell)
                except json.JSONDecodeError:
                    rec[key] = cell
        if rec:
            yield rec


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _norm_label(label):
    """Canonical timestamp token: integral numbers collapse to int."""
    if isinstance(label, bool):
        raise TgqError(SCHEMA_ERROR, "boolean is not a valid timestamp")
    if isinstance(label, (int, float)):
        as_float = float(label)
        return int(as_float) if as_float.is_integer() else as_float
    return str(label)


def _sort_labels(labels):
    numeric = [x for x in labels if isinstance(x, (int, float))]
    textual = [x for x in labels if isinstance(x, str)]
    return tuple(sorted(numeric) + sorted(textual))


def _merge_intervals(intervals):
    """Merge overlapping or touching index intervals into a sorted tuple."""
    merged = []
    for s, e in sorted(intervals):
        if merged and s <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], e))
        else:
            merged.append((s, e))
    return tuple(merged)


def _covered(intervals, t: int) -> bool:
    return any(s <= t <= e for s, e in intervals)


def _value_kind(value, lineno: int) -> AttrKind:
    if isinstance(value, bool):
        return AttrKind.BOOLEAN
    if isinstance(value, (int, float)):
        return AttrKind.NUMERIC
    if isinstance(value, str):
        return AttrKind.CATEGORICAL
    raise TgqError(
        SCHEMA_ERROR, f"line {lineno}: unsupported attribute value {value!r}", line=lineno
    )


def _require(rec: dict, key: str, lineno: int):
    if key not in rec or rec[key] is None:
        raise TgqError(
            SCHEMA_ERROR, f"line {lineno}: missing required field '{key}'", line=lineno
        )
    return rec[key]


def _require_str(rec: dict, key: str, lineno: int) -> str:
    return str(_require(rec, key, lineno))
