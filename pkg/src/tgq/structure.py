"""Structural tasks: connection finding, connection-constrained search,
connection timing, and structural pattern characterisation/search.

Four structural behaviours are summarised:

- PAIR_OVER_TIME: how the connection between two elements changes over an
  interval, as a presence bitstring classified into ALWAYS / NEVER /
  APPEARING / DISAPPEARING / INTERMITTENT,
- SNAPSHOT_CONFIG: the shape of connections within a node set at one time
  point, as a small metric vector (density, components, triangles, mean
  degree, 4-cliques),
- PAIRS_AGGREGATE: the frequency table of pair presence classes over a set,
- CONFIG_OVER_TIME: the trend of each snapshot metric over an interval.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import Config
from .errors import (
    ABSENT_ELEMENT,
    EMPTY_SCOPE,
    FAMILY_MISMATCH,
    KIND_MISMATCH,
    TgqError,
    VALIDATION_ERROR,
)
from .graph import (
    ElemKind,
    GraphElementRef,
    TemporalGraph,
    TimeInterval,
    node_ref,
)
from .patterns import classify_trend
from .relations import are_adjacent, shortest_connection
from .search import (
    GroupCandidate,
    SearchSpace,
    check_budget,
    group_candidates,
    time_points,
    time_windows,
)

METRIC_NAMES = ("density", "components", "triangles", "mean_degree", "cliques4")


class PresenceClass(str, Enum):
    ALWAYS = "ALWAYS"
    NEVER = "NEVER"
    APPEARING = "APPEARING"
    DISAPPEARING = "DISAPPEARING"
    INTERMITTENT = "INTERMITTENT"


class StructScopeKind(str, Enum):
    PAIR_OVER_TIME = "PAIR_OVER_TIME"
    SNAPSHOT_CONFIG = "SNAPSHOT_CONFIG"
    PAIRS_AGGREGATE = "PAIRS_AGGREGATE"
    CONFIG_OVER_TIME = "CONFIG_OVER_TIME"


@dataclass(frozen=True)
class ConnectionSpec:
    """How "connected" is meant: direct edge or path, optionally bounded,
    direction-aware, and filtered by an edge-attribute predicate."""

    mode: str = "adjacent"  # "adjacent" | "path"
    max_distance: Optional[int] = None
    direction: str = "any"  # "any" | "out" | "in"
    edge_attr: Optional[str] = None
    edge_constraint: Optional[object] = None  # ValueConstraint on edge_attr

    def __post_init__(self):
        if self.mode not in ("adjacent", "path"):
            raise TgqError(VALIDATION_ERROR, f"unknown connection mode '{self.mode}'")
        if self.direction not in ("any", "out", "in"):
            raise TgqError(VALIDATION_ERROR, f"unknown direction '{self.direction}'")
        if self.max_distance is not None and self.max_distance < 1:
            raise TgqError(VALIDATION_ERROR, "max distance must be >= 1")
        if (self.edge_attr is None) != (self.edge_constraint is None):
            raise TgqError(VALIDATION_ERROR, "edge predicate needs attr and constraint")

    def to_dict(self) -> dict:
        out: dict = {"mode": self.mode, "direction": self.direction}
        if self.max_distance is not None:
            out["max_distance"] = self.max_distance
        if self.edge_attr is not None:
            out["edge_attr"] = self.edge_attr
            out["edge_constraint"] = self.edge_constraint.to_dict()
        return out


@dataclass(frozen=True)
class StructuralPattern:
    scope: StructScopeKind
    presence_class: Optional[PresenceClass] = None
    presence_bits: Optional[str] = None
    metrics: Optional[tuple] = None  # tuple of (name, value), sorted
    class_frequencies: Optional[tuple] = None  # tuple of (class name, count)
    metric_trends: Optional[tuple] = None  # tuple of (name, TrendClass name)
    motif: Optional[str] = None

    def metrics_dict(self) -> dict:
        return dict(self.metrics or ())

    def trends_dict(self) -> dict:
        return dict(self.metric_trends or ())

    def to_dict(self) -> dict:
        out: dict = {"kind": "structural", "scope": self.scope.value}
        if self.presence_class is not None:
            out["class"] = self.presence_class.value
            out["bits"] = self.presence_bits
        if self.metrics is not None:
            out["metrics"] = {k: v for k, v in self.metrics}
            out["motif"] = self.motif
        if self.class_frequencies is not None:
            out["frequencies"] = {k: v for k, v in self.class_frequencies}
        if self.metric_trends is not None:
            out["metric_trends"] = {k: v for k, v in self.metric_trends}
        return out


# Literals for structural search / comparison sides.


@dataclass(frozen=True)
class PresenceLiteral:
    cls: PresenceClass

    def to_dict(self) -> dict:
        return {"kind": "presence_literal", "class": self.cls.value}


@dataclass(frozen=True)
class ConfigLiteral:
    metrics: tuple  # tuple of (name, value) to pin

    def to_dict(self) -> dict:
        return {"kind": "config_literal", "metrics": {k: v for k, v in self.metrics}}


@dataclass(frozen=True)
class ConfigTrendLiteral:
    trends: tuple  # tuple of (metric name, trend class name)

    def to_dict(self) -> dict:
        return {"kind": "config_trend_literal", "trends": {k: v for k, v in self.trends}}


# ---------------------------------------------------------------------------
# Elementary connection tasks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConnectionReport:
    adjacent: bool
    distance: Optional[int]
    path: Optional[tuple]
    edges: tuple

    def to_dict(self) -> dict:
        return {
            "connected": self.distance is not None,
            "adjacent": self.adjacent,
            "distance": self.distance,
            "path": list(self.path) if self.path is not None else None,
            "edges": list(self.edges),
        }


def find_connection(
    graph: TemporalGraph, cfg: Config, g1: GraphElementRef, g2: GraphElementRef, t: int
) -> ConnectionReport:
    """(How) is g1 connected to g2 at t: adjacency flag plus the shortest
    path witness, or nothing when the snapshot keeps them apart."""
    for g in (g1, g2):
        if not graph.exists_at(g, t):
            raise TgqError(ABSENT_ELEMENT, f"{g} does not exist at t={graph.label_of(t)}")
    adjacent, edges = are_adjacent(graph, t, g1, g2)
    dist, path = shortest_connection(graph, t, g1, g2)
    return ConnectionReport(adjacent, dist, tuple(path) if path else None, tuple(edges))


def _edge_ok(graph, cfg, edge_id: str, t: int, spec: ConnectionSpec) -> bool:
    if spec.edge_attr is None:
        return True
    ref = GraphElementRef(ElemKind.EDGE, edge_id)
    if not graph.defined_at(t, ref, spec.edge_attr, cfg):
        return False
    return spec.edge_constraint.test(graph.value_at(t, ref, spec.edge_attr, cfg))


def _spec_neighbours(graph, cfg, node: str, t: int, spec: ConnectionSpec) -> list:
    """Nodes one qualifying edge away from ``node`` at t."""
    out = set()
    snap = graph.snapshot(t)
    for edge_id, src, dst, directed in snap.edges:
        if not _edge_ok(graph, cfg, edge_id, t, spec):
            continue
        if spec.direction == "any" or not directed:
            if src == node:
                out.add(dst)
            elif dst == node:
                out.add(src)
        elif spec.direction == "out" and src == node:
            out.add(dst)
        elif spec.direction == "in" and dst == node:
            out.add(src)
    return sorted(out)


def _spec_reachable(graph, cfg, start: str, t: int, spec: ConnectionSpec) -> dict:
    """node -> distance over qualifying edges, bounded by max_distance."""
    dist = {start: 0}
    frontier = [start]
    depth = 0
    while frontier and (spec.max_distance is None or depth < spec.max_distance):
        depth += 1
        nxt = []
        for u in frontier:
            for v in _spec_neighbours(graph, cfg, u, t, spec):
                if v not in dist:
                    dist[v] = depth
                    nxt.append(v)
        frontier = nxt
    return dist


def _connected_per_spec(graph, cfg, g1: GraphElementRef, g2: GraphElementRef,
                        t: int, spec: ConnectionSpec) -> bool:
    starts = _nodes_of(graph, g1, t)
    targets = set(_nodes_of(graph, g2, t))
    if not starts or not targets:
        return False
    if spec.mode == "adjacent":
        for a in starts:
            for b in _spec_neighbours(graph, cfg, a, t, spec):
                if b in targets:
                    return True
        return False
    for a in starts:
        reach = _spec_reachable(graph, cfg, a, t, spec)
        if any(b in reach and reach[b] > 0 for b in targets):
            return True
    return False


def _nodes_of(graph, ref: GraphElementRef, t: int) -> list:
    if ref.kind == ElemKind.NODE:
        return [ref.id] if graph.snapshot(t).has_node(ref.id) else []
    if ref.kind == ElemKind.OBJECT:
        snap = graph.snapshot(t)
        return sorted(n for n in graph.object_members(ref.id).nodes if snap.has_node(n))
    raise TgqError(FAMILY_MISMATCH, f"connection tasks apply to nodes and objects, not {ref}")


def find_connected(
    graph: TemporalGraph,
    cfg: Config,
    g1: GraphElementRef,
    spec: ConnectionSpec,
    t: Optional[int] = None,
) -> list:
    """Elements connected to g1 in the given way; (element, t) pairs.

    A fixed t requires g1 to exist there; a free t unions over every time
    point where g1 exists. Candidates share g1's kind.
    """
    if t is not None and not graph.exists_at(g1, t):
        raise TgqError(ABSENT_ELEMENT, f"{g1} does not exist at t={graph.label_of(t)}")
    times = [t] if t is not None else [
        ti for ti in range(graph.n_times) if graph.exists_at(g1, ti)
    ]
    if g1.kind == ElemKind.NODE:
        candidates = [node_ref(n) for n in graph.node_ids()]
    else:
        candidates = [GraphElementRef(ElemKind.OBJECT, o) for o in graph.object_ids()]
    out = []
    for ti in times:
        for g2 in candidates:
            if g2 == g1 or not graph.exists_at(g2, ti):
                continue
            if _connected_per_spec(graph, cfg, g1, g2, ti, spec):
                out.append((g2, ti))
    out.sort(key=lambda p: (p[1], p[0]))
    return out


def find_connected_pairs(
    graph: TemporalGraph,
    cfg: Config,
    spec: ConnectionSpec,
    t: Optional[int] = None,
) -> list:
    """All node pairs connected in the given way; unordered unless the
    direction is constrained."""
    times = time_points(graph, t)
    names = graph.node_ids()
    check_budget(len(times) * len(names) * max(1, len(names) - 1) // 2, cfg,
                 "connected-pair search")
    ordered = spec.direction != "any"
    out = []
    for ti in times:
        snap = graph.snapshot(ti)
        alive = [n for n in names if snap.has_node(n)]
        for i, a in enumerate(alive):
            others = alive if ordered else alive[i + 1:]
            for b in others:
                if a == b:
                    continue
                if _connected_per_spec(graph, cfg, node_ref(a), node_ref(b), ti, spec):
                    out.append((node_ref(a), node_ref(b), ti))
    out.sort(key=lambda p: (p[2], p[0], p[1]))
    return out


def connection_times(
    graph: TemporalGraph,
    cfg: Config,
    g1: GraphElementRef,
    g2: GraphElementRef,
    spec: ConnectionSpec,
) -> list:
    """Time indices at which both exist and the connection holds."""
    out = []
    for t in range(graph.n_times):
        if not (graph.exists_at(g1, t) and graph.exists_at(g2, t)):
            continue
        if _connected_per_spec(graph, cfg, g1, g2, t, spec):
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Structural behaviour patterns
# ---------------------------------------------------------------------------


def classify_presence(bits: str) -> PresenceClass:
    """Decision rules over a presence bitstring: solid runs at the edges
    name the class, anything with more than one switch is intermittent."""
    if "0" not in bits:
        return PresenceClass.ALWAYS
    if "1" not in bits:
        return PresenceClass.NEVER
    ones = bits.count("1")
    if bits.endswith("1" * ones):
        return PresenceClass.APPEARING
    if bits.startswith("1" * ones):
        return PresenceClass.DISAPPEARING
    return PresenceClass.INTERMITTENT


def pair_over_time(
    graph: TemporalGraph,
    cfg: Config,
    g1: GraphElementRef,
    g2: GraphElementRef,
    interval: TimeInterval,
    spec: Optional[ConnectionSpec] = None,
) -> StructuralPattern:
    spec = spec or ConnectionSpec()
    bits = []
    for t in interval.indices():
        on = (
            graph.exists_at(g1, t)
            and graph.exists_at(g2, t)
            and _connected_per_spec(graph, cfg, g1, g2, t, spec)
        )
        bits.append("1" if on else "0")
    bitstring = "".join(bits)
    return StructuralPattern(
        StructScopeKind.PAIR_OVER_TIME,
        presence_class=classify_presence(bitstring),
        presence_bits=bitstring,
    )


def snapshot_metrics(graph: TemporalGraph, members, t: int) -> dict:
    """Metric vector of the induced simple graph on ``members`` at t."""
    node_ids = set()
    for m in members:
        if m.kind != ElemKind.NODE:
            raise TgqError(
                FAMILY_MISMATCH, "snapshot configuration is defined over node sets"
            )
        node_ids.add(m.id)
    snap = graph.snapshot(t)
    alive = sorted(n for n in node_ids if snap.has_node(n))
    if not alive:
        raise TgqError(EMPTY_SCOPE, f"no member is alive at t={graph.label_of(t)}")
    alive_set = set(alive)
    adj = {n: set() for n in alive}
    for n in alive:
        for m in snap.neighbours(n):
            if m in alive_set and m != n:
                adj[n].add(m)
    n = len(alive)
    m_count = sum(len(v) for v in adj.values()) // 2
    density = (2 * m_count / (n * (n - 1))) if n > 1 else 0.0
    components = 0
    seen: set = set()
    for start in alive:
        if start in seen:
            continue
        components += 1
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    triangles = sum(
        1 for a, b, c in itertools.combinations(alive, 3)
        if b in adj[a] and c in adj[a] and c in adj[b]
    )
    cliques4 = sum(
        1 for quad in itertools.combinations(alive, 4)
        if all(y in adj[x] for x, y in itertools.combinations(quad, 2))
    )
    mean_degree = (2 * m_count / n) if n else 0.0
    return {
        "density": density,
        "components": float(components),
        "triangles": float(triangles),
        "mean_degree": mean_degree,
        "cliques4": float(cliques4),
    }


def snapshot_config(
    graph: TemporalGraph, cfg: Config, members, t: int
) -> StructuralPattern:
    metrics = snapshot_metrics(graph, members, t)
    motif = "clique" if metrics["density"] == 1.0 and len(members) > 1 else None
    return StructuralPattern(
        StructScopeKind.SNAPSHOT_CONFIG,
        metrics=tuple(sorted(metrics.items())),
        motif=motif,
    )


def pairs_aggregate(
    graph: TemporalGraph,
    cfg: Config,
    members,
    interval: TimeInterval,
    spec: Optional[ConnectionSpec] = None,
) -> StructuralPattern:
    refs = sorted(members)
    if len(refs) < 2:
        raise TgqError(EMPTY_SCOPE, "pair aggregation needs at least two members")
    counts: dict = {}
    for a, b in itertools.combinations(refs, 2):
        p = pair_over_time(graph, cfg, a, b, interval, spec)
        counts[p.presence_class.value] = counts.get(p.presence_class.value, 0) + 1
    return StructuralPattern(
        StructScopeKind.PAIRS_AGGREGATE,
        class_frequencies=tuple(sorted(counts.items())),
    )


def config_over_time(
    graph: TemporalGraph,
    cfg: Config,
    members,
    interval: TimeInterval,
    metrics: tuple = METRIC_NAMES,
) -> StructuralPattern:
    series: dict = {name: [] for name in metrics}
    for t in interval.indices():
        try:
            vector = snapshot_metrics(graph, members, t)
        except TgqError as err:
            if err.code == EMPTY_SCOPE:
                continue
            raise
        for name in metrics:
            series[name].append((t, vector[name]))
    if not any(series.values()):
        raise TgqError(EMPTY_SCOPE, "no member is alive anywhere in the interval")
    trends = tuple(
        (name, classify_trend(series[name], cfg).cls.value) for name in metrics
    )
    return StructuralPattern(StructScopeKind.CONFIG_OVER_TIME, metric_trends=trends)


# Scope objects mirroring the four behaviours, used by the planner and compare.


@dataclass(frozen=True)
class StructScope:
    kind: StructScopeKind
    g1: Optional[GraphElementRef] = None
    g2: Optional[GraphElementRef] = None
    group: Optional[GroupCandidate] = None
    t: Optional[int] = None
    interval: Optional[TimeInterval] = None
    connection: Optional[ConnectionSpec] = None
    metrics: tuple = METRIC_NAMES


def structural_characterize(graph: TemporalGraph, cfg: Config, scope: StructScope) -> StructuralPattern:
    if scope.kind == StructScopeKind.PAIR_OVER_TIME:
        if scope.g1 is None or scope.g2 is None or scope.interval is None:
            raise TgqError(VALIDATION_ERROR, "pair behaviour needs two elements and an interval")
        return pair_over_time(graph, cfg, scope.g1, scope.g2, scope.interval, scope.connection)
    if scope.kind == StructScopeKind.SNAPSHOT_CONFIG:
        if scope.group is None or scope.t is None:
            raise TgqError(VALIDATION_ERROR, "configuration needs a node set and a time point")
        return snapshot_config(graph, cfg, scope.group.members, scope.t)
    if scope.kind == StructScopeKind.PAIRS_AGGREGATE:
        if scope.group is None or scope.interval is None:
            raise TgqError(VALIDATION_ERROR, "pair aggregation needs a node set and an interval")
        return pairs_aggregate(graph, cfg, scope.group.members, scope.interval, scope.connection)
    if scope.group is None or scope.interval is None:
        raise TgqError(VALIDATION_ERROR, "configuration trend needs a node set and an interval")
    return config_over_time(graph, cfg, scope.group.members, scope.interval, scope.metrics)


# ---------------------------------------------------------------------------
# Structural similarity and search
# ---------------------------------------------------------------------------


def struct_match_score(target, candidate, cfg: Config):
    """(score, opposite) of a structural candidate against a target pattern
    or literal. Presence classes match exactly; configuration vectors match
    by relative metric proximity; trends per metric-class agreement."""
    if isinstance(target, PresenceLiteral):
        target = StructuralPattern(
            StructScopeKind.PAIR_OVER_TIME, presence_class=target.cls
        )
    if isinstance(target, ConfigLiteral):
        if not _is_struct(candidate, StructScopeKind.SNAPSHOT_CONFIG):
            raise TgqError(KIND_MISMATCH, "configuration literal vs other candidate")
        return _metric_proximity(dict(target.metrics), candidate.metrics_dict()), False
    if isinstance(target, ConfigTrendLiteral):
        if not _is_struct(candidate, StructScopeKind.CONFIG_OVER_TIME):
            raise TgqError(KIND_MISMATCH, "configuration-trend literal vs other candidate")
        return _trend_table_detail(dict(target.trends), candidate.trends_dict())
    if not isinstance(target, StructuralPattern) or not isinstance(candidate, StructuralPattern):
        raise TgqError(
            KIND_MISMATCH,
            f"cannot compare {type(target).__name__} with {type(candidate).__name__}",
        )
    if target.scope != candidate.scope:
        raise TgqError(KIND_MISMATCH, "structural patterns describe different behaviours")
    if target.scope == StructScopeKind.PAIR_OVER_TIME:
        same = target.presence_class == candidate.presence_class
        return (1.0 if same else 0.0), _presence_opposite(
            target.presence_class, candidate.presence_class
        )
    if target.scope == StructScopeKind.SNAPSHOT_CONFIG:
        return _metric_proximity(target.metrics_dict(), candidate.metrics_dict()), False
    if target.scope == StructScopeKind.PAIRS_AGGREGATE:
        from .patterns import _frequency_similarity

        return _frequency_similarity(
            dict(target.class_frequencies), dict(candidate.class_frequencies)
        ), False
    return _trend_table_detail(target.trends_dict(), candidate.trends_dict())


_PRESENCE_OPPOSITES = {
    (PresenceClass.ALWAYS, PresenceClass.NEVER),
    (PresenceClass.NEVER, PresenceClass.ALWAYS),
    (PresenceClass.APPEARING, PresenceClass.DISAPPEARING),
    (PresenceClass.DISAPPEARING, PresenceClass.APPEARING),
}

_OPPOSITE_TREND_NAMES = {
    ("INCREASING", "DECREASING"), ("DECREASING", "INCREASING"),
    ("PEAK", "TROUGH"), ("TROUGH", "PEAK"),
}


def _presence_opposite(c1, c2) -> bool:
    return (c1, c2) in _PRESENCE_OPPOSITES


def _is_struct(candidate, kind) -> bool:
    return isinstance(candidate, StructuralPattern) and candidate.scope == kind


def _metric_proximity(target: dict, candidate: dict) -> float:
    """Mean relative closeness over the metrics the target specifies."""
    if not target:
        return 1.0
    total = 0.0
    for name, want in target.items():
        if name not in candidate:
            raise TgqError(KIND_MISMATCH, f"candidate lacks metric '{name}'")
        have = candidate[name]
        scale = max(abs(want), abs(have), 1e-9)
        total += 1.0 - min(1.0, abs(want - have) / scale)
    return total / len(target)


def _trend_table_detail(target: dict, candidate: dict):
    if not target:
        return 1.0, False
    hits = 0
    opposites = 0
    for name, want in target.items():
        if name not in candidate:
            raise TgqError(KIND_MISMATCH, f"candidate lacks metric trend '{name}'")
        have = candidate[name]
        if want == have:
            hits += 1
        elif (want, have) in _OPPOSITE_TREND_NAMES:
            opposites += 1
    return hits / len(target), opposites == len(target)


@dataclass(frozen=True)
class StructMatch:
    ref_desc: str
    time_key: object
    pattern: StructuralPattern
    score: float


def structural_search(
    graph: TemporalGraph,
    cfg: Config,
    target,
    space: SearchSpace,
    fixed_t: Optional[int] = None,
    fixed_interval: Optional[TimeInterval] = None,
    connection: Optional[ConnectionSpec] = None,
    threshold: Optional[float] = None,
) -> list:
    """Find the references whose structural behaviour approximates the
    target. The target's scope decides what gets enumerated: node pairs for
    presence patterns, node sets for configurations."""
    thr = cfg.similarity_threshold if threshold is None else threshold
    kind = _target_scope(target)
    matches = []
    if kind == StructScopeKind.PAIR_OVER_TIME:
        windows = time_windows(graph, fixed_interval, space.window_min_len)
        names = graph.node_ids()
        pairs = list(itertools.combinations(names, 2))
        check_budget(len(pairs) * len(windows), cfg, "structural search")
        for window in windows:
            for a, b in pairs:
                candidate = pair_over_time(
                    graph, cfg, node_ref(a), node_ref(b), window, connection
                )
                score, _ = struct_match_score(target, candidate, cfg)
                if score >= thr:
                    matches.append(StructMatch(
                        f"node:{a}|node:{b}", window, candidate, score
                    ))
    elif kind == StructScopeKind.SNAPSHOT_CONFIG:
        times = time_points(graph, fixed_t)
        jobs = []
        for t in times:
            for grp in group_candidates(graph, space, at=t):
                jobs.append((grp, t))
        check_budget(len(jobs), cfg, "structural search")
        for grp, t in jobs:
            try:
                candidate = snapshot_config(graph, cfg, grp.members, t)
            except TgqError as err:
                if err.code in (EMPTY_SCOPE,):
                    continue
                raise
            score, _ = struct_match_score(target, candidate, cfg)
            if score >= thr:
                matches.append(StructMatch(grp.name, t, candidate, score))
    else:
        windows = time_windows(graph, fixed_interval, space.window_min_len)
        jobs = []
        for window in windows:
            for grp in group_candidates(graph, space, context=window):
                jobs.append((grp, window))
        check_budget(len(jobs), cfg, "structural search")
        for grp, window in jobs:
            try:
                if kind == StructScopeKind.PAIRS_AGGREGATE:
                    candidate = pairs_aggregate(graph, cfg, grp.members, window, connection)
                else:
                    candidate = config_over_time(graph, cfg, grp.members, window)
            except TgqError as err:
                if err.code == EMPTY_SCOPE:
                    continue
                raise
            score, _ = struct_match_score(target, candidate, cfg)
            if score >= thr:
                matches.append(StructMatch(grp.name, window, candidate, score))
    matches.sort(key=lambda m: (-m.score, _tkey(m.time_key), m.ref_desc))
    return matches


def _tkey(key):
    if isinstance(key, TimeInterval):
        return (1, key.start, key.end)
    return (0, key, 0)


def _target_scope(target) -> StructScopeKind:
    if isinstance(target, (PresenceLiteral,)):
        return StructScopeKind.PAIR_OVER_TIME
    if isinstance(target, ConfigLiteral):
        return StructScopeKind.SNAPSHOT_CONFIG
    if isinstance(target, ConfigTrendLiteral):
        return StructScopeKind.CONFIG_OVER_TIME
    if isinstance(target, StructuralPattern):
        return target.scope
    raise TgqError(KIND_MISMATCH, "not a structural search target")


@dataclass(frozen=True)
class StructScopeSide:
    """Comparison side resolving to a structural pattern (duck-typed like
    the attribute sides in the task engine)."""

    scope: StructScope

    def resolve(self, graph: TemporalGraph, cfg: Config):
        from .tasks import Resolved

        pattern = structural_characterize(graph, cfg, self.scope)
        time_key = self.scope.t if self.scope.t is not None else self.scope.interval
        if self.scope.group is not None:
            ref_key = self.scope.group.name
        elif self.scope.g1 is not None:
            ref_key = f"{self.scope.g1}|{self.scope.g2}"
        else:
            ref_key = None
        desc: dict = {"struct": self.scope.kind.value, "pattern": pattern.to_dict()}
        if self.scope.g1 is not None:
            desc["pair"] = [str(self.scope.g1), str(self.scope.g2)]
        if self.scope.group is not None:
            desc["group"] = self.scope.group.name
        if self.scope.t is not None:
            desc["t"] = graph.label_of(self.scope.t)
        if self.scope.interval is not None:
            desc["interval"] = {
                "start": graph.label_of(self.scope.interval.start),
                "end": graph.label_of(self.scope.interval.end),
            }
        return Resolved(pattern, time_key, ref_key, desc)


@dataclass(frozen=True)
class SeekSideStructConfig:
    """Synoptic structural relation-seeking side: snapshot configurations
    over enumerated node sets."""

    fixed_group: Optional[GroupCandidate] = None
    fixed_t: Optional[int] = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config, space: SearchSpace) -> list:
        from .tasks import Binding

        out = []
        for t in time_points(graph, self.fixed_t):
            groups = (
                [self.fixed_group] if self.fixed_group
                else group_candidates(graph, space, at=t)
            )
            for grp in groups:
                try:
                    p = snapshot_config(graph, cfg, grp.members, t)
                except TgqError as err:
                    if err.code == EMPTY_SCOPE:
                        continue
                    raise
                out.append(Binding(t, grp, p))
        return out
