"""Attribute-based task families: lookup, behaviour characterisation,
pattern search, direct and inverse comparison, and relation seeking.

Each task-matrix cell is one binding pattern of these operations: fixed
fields are constraints, omitted fields are search targets. Everything is
evaluated against the immutable graph, and results come back in canonical
order (time index, then element id) so serialized output is reproducible
byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import Config
from .errors import (
    EMPTY_SCOPE,
    KIND_MISMATCH,
    TgqError,
    UNRESOLVED_SIDE,
    VALIDATION_ERROR,
)
from .graph import GraphElementRef, TemporalGraph, TimeInterval
from .patterns import (
    AspectAxis,
    AspectFreqLiteral,
    AspectTrendLiteral,
    AspectualPattern,
    DistLiteral,
    DistributionPattern,
    TrendLiteral,
    TrendPattern,
    aspectual,
    distribution,
    match_score,
    trend,
)
from .relations import (
    RelationFamily,
    RelationSpec,
    allen_relation,
    eval_relation,
    point_relation,
    set_relation,
    shortest_connection,
)
from .search import (
    GroupCandidate,
    SearchSpace,
    check_budget,
    element_candidates,
    group_candidates,
    time_points,
    time_windows,
)
from . import structure

ATTR_PATTERNS = (TrendPattern, DistributionPattern, AspectualPattern,
                 TrendLiteral, DistLiteral, AspectFreqLiteral, AspectTrendLiteral)


class Quadrant(str, Enum):
    Q2_DIST_AT_T = "Q2"
    Q3_TREND_OF_G = "Q3"
    Q4_ASPECTUAL = "Q4"


@dataclass(frozen=True)
class BehaviorScope:
    quadrant: Quadrant
    element: Optional[GraphElementRef] = None
    group: Optional[GroupCandidate] = None
    time_point: Optional[int] = None
    interval: Optional[TimeInterval] = None
    axis: Optional[AspectAxis] = None

    def validate(self) -> None:
        if self.quadrant == Quadrant.Q3_TREND_OF_G:
            missing = self.element is None or self.interval is None
        elif self.quadrant == Quadrant.Q2_DIST_AT_T:
            missing = self.group is None or self.time_point is None
        else:
            missing = self.group is None or self.interval is None or self.axis is None
        if missing:
            raise TgqError(
                VALIDATION_ERROR,
                f"scope for {self.quadrant.value} is not fully constrained",
            )


@dataclass(frozen=True)
class ValueConstraint:
    """A closed-form value test: comparison, enumeration, or range."""

    op: str  # eq ne lt le gt ge in between
    values: tuple

    def test(self, v) -> bool:
        if self.op == "eq":
            return v == self.values[0]
        if self.op == "ne":
            return v != self.values[0]
        if self.op == "in":
            return v in self.values
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TgqError(
                KIND_MISMATCH, f"constraint '{self.op}' needs a numeric attribute"
            )
        if self.op == "lt":
            return v < self.values[0]
        if self.op == "le":
            return v <= self.values[0]
        if self.op == "gt":
            return v > self.values[0]
        if self.op == "ge":
            return v >= self.values[0]
        if self.op == "between":
            return self.values[0] <= v <= self.values[1]
        raise TgqError(VALIDATION_ERROR, f"unknown constraint op '{self.op}'")

    def to_dict(self) -> dict:
        return {"op": self.op, "values": list(self.values)}


# ---------------------------------------------------------------------------
# Lookup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LookupResult:
    t: int
    ref: GraphElementRef
    attr: str
    value: object
    aggregated: bool


def direct_lookup(
    graph: TemporalGraph, cfg: Config, t: int, ref: GraphElementRef, attr: str
) -> LookupResult:
    value, aggregated = graph.value_at_info(t, ref, attr, cfg)
    return LookupResult(t, ref, attr, value, aggregated)


def inverse_lookup(
    graph: TemporalGraph,
    cfg: Config,
    attr: str,
    constraint: ValueConstraint,
    t: Optional[int] = None,
    ref: Optional[GraphElementRef] = None,
    interval: Optional[TimeInterval] = None,
    members=None,
) -> list:
    """All (t, element, value) satisfying the constraint, narrowed by any
    supplied reference constraints. Elements range over nodes and edges;
    graph objects participate only when passed explicitly."""
    if t is not None:
        times = [t]
    elif interval is not None:
        times = list(interval.indices())
    else:
        times = time_points(graph)
    if ref is not None:
        elements = [ref]
    elif members is not None:
        elements = list(members)
    else:
        elements = graph.all_refs()
    hits = []
    for ti in times:
        for el in elements:
            if not graph.defined_at(ti, el, attr, cfg):
                continue
            value = graph.value_at(ti, el, attr, cfg)
            if constraint.test(value):
                hits.append((ti, el, value))
    hits.sort(key=lambda h: (h[0], h[1]))
    return hits


# ---------------------------------------------------------------------------
# Characterisation and pattern search
# ---------------------------------------------------------------------------


def characterize(graph: TemporalGraph, cfg: Config, scope: BehaviorScope, attr: str):
    scope.validate()
    if scope.quadrant == Quadrant.Q3_TREND_OF_G:
        return trend(graph, cfg, scope.element, scope.interval, attr)
    if scope.quadrant == Quadrant.Q2_DIST_AT_T:
        return distribution(graph, cfg, scope.group.members, scope.time_point, attr)
    return aspectual(graph, cfg, scope.group.members, scope.interval, attr, scope.axis)


@dataclass(frozen=True)
class SearchMatch:
    ref_name: str
    members: Optional[tuple]
    time_key: object  # int for Q2, TimeInterval otherwise
    pattern: object
    score: float


def pattern_search(
    graph: TemporalGraph,
    cfg: Config,
    target,
    quadrant: Quadrant,
    attr: str,
    space: SearchSpace,
    fixed_element: Optional[GraphElementRef] = None,
    fixed_group: Optional[GroupCandidate] = None,
    fixed_t: Optional[int] = None,
    fixed_interval: Optional[TimeInterval] = None,
    axis: Optional[AspectAxis] = None,
    threshold: Optional[float] = None,
) -> list:
    """Enumerate candidate scopes, characterize each, and keep those whose
    behaviour approximates the target pattern."""
    thr = cfg.similarity_threshold if threshold is None else threshold
    matches = []
    if quadrant == Quadrant.Q3_TREND_OF_G:
        elements = [fixed_element] if fixed_element else element_candidates(
            graph, space.subset_family
        )
        windows = time_windows(graph, fixed_interval, space.window_min_len)
        check_budget(len(elements) * len(windows), cfg, "pattern search")
        for el in elements:
            for window in windows:
                candidate = trend(graph, cfg, el, window, attr)
                score, _ = match_score(target, candidate, cfg)
                if score >= thr:
                    matches.append(SearchMatch(str(el), None, window, candidate, score))
    elif quadrant == Quadrant.Q2_DIST_AT_T:
        times = time_points(graph, fixed_t)
        pairs = []
        for ti in times:
            groups = [fixed_group] if fixed_group else group_candidates(
                graph, space, at=ti
            )
            pairs.extend((grp, ti) for grp in groups)
        check_budget(len(pairs), cfg, "pattern search")
        for grp, ti in pairs:
            try:
                candidate = distribution(graph, cfg, grp.members, ti, attr)
            except TgqError as err:
                if err.code == EMPTY_SCOPE:
                    continue
                raise
            score, _ = match_score(target, candidate, cfg)
            if score >= thr:
                matches.append(SearchMatch(grp.name, grp.members, ti, candidate, score))
    else:
        axis = axis or _axis_of(target)
        windows = time_windows(graph, fixed_interval, space.window_min_len)
        pairs = []
        for window in windows:
            groups = [fixed_group] if fixed_group else group_candidates(
                graph, space, context=window
            )
            pairs.extend((grp, window) for grp in groups)
        check_budget(len(pairs), cfg, "pattern search")
        for grp, window in pairs:
            try:
                candidate = aspectual(graph, cfg, grp.members, window, attr, axis)
            except TgqError as err:
                if err.code == EMPTY_SCOPE:
                    continue
                raise
            score, _ = match_score(target, candidate, cfg)
            if score >= thr:
                matches.append(SearchMatch(grp.name, grp.members, window, candidate, score))
    matches.sort(key=lambda m: (-m.score, _time_sort_key(m.time_key), m.ref_name))
    return matches


def _axis_of(target) -> AspectAxis:
    if isinstance(target, AspectualPattern):
        return target.axis
    if isinstance(target, AspectFreqLiteral):
        return AspectAxis.TRENDS_OVER_GRAPH
    if isinstance(target, AspectTrendLiteral):
        return AspectAxis.DISTRIBUTION_OVER_TIME
    raise TgqError(VALIDATION_ERROR, "aspectual search needs an axis")


def _time_sort_key(key):
    if key is None:
        return (2, 0, 0)
    if isinstance(key, TimeInterval):
        return (1, key.start, key.end)
    return (0, key, 0)


def _ref_sort_key(ref_key):
    return "" if ref_key is None else str(ref_key)


# ---------------------------------------------------------------------------
# Comparison sides
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Resolved:
    payload: object
    time_key: object
    ref_key: object
    desc: dict


@dataclass(frozen=True)
class LookupSide:
    t: int
    ref: GraphElementRef
    attr: str

    def resolve(self, graph: TemporalGraph, cfg: Config) -> Resolved:
        res = direct_lookup(graph, cfg, self.t, self.ref, self.attr)
        return Resolved(
            res.value, self.t, str(self.ref),
            {"t": graph.label_of(self.t), "element": str(self.ref),
             "attr": self.attr, "value": res.value, "aggregated": res.aggregated},
        )


@dataclass(frozen=True)
class ScopeSide:
    scope: BehaviorScope
    attr: str

    def resolve(self, graph: TemporalGraph, cfg: Config) -> Resolved:
        pattern = characterize(graph, cfg, self.scope, self.attr)
        time_key = (
            self.scope.time_point
            if self.scope.quadrant == Quadrant.Q2_DIST_AT_T
            else self.scope.interval
        )
        ref_key = (
            str(self.scope.element)
            if self.scope.element is not None
            else self.scope.group.name
        )
        return Resolved(
            pattern, time_key, ref_key,
            {"scope": _scope_desc(graph, self.scope), "attr": self.attr,
             "pattern": pattern.to_dict()},
        )


@dataclass(frozen=True)
class LiteralSide:
    payload: object  # plain value, attribute pattern, or structural pattern

    def resolve(self, graph: TemporalGraph, cfg: Config) -> Resolved:
        desc = (
            {"literal": self.payload.to_dict()}
            if hasattr(self.payload, "to_dict")
            else {"literal": self.payload}
        )
        return Resolved(self.payload, None, None, desc)


def _scope_desc(graph: TemporalGraph, scope: BehaviorScope) -> dict:
    out: dict = {"quadrant": scope.quadrant.value}
    if scope.element is not None:
        out["element"] = str(scope.element)
    if scope.group is not None:
        out["group"] = scope.group.name
    if scope.time_point is not None:
        out["t"] = graph.label_of(scope.time_point)
    if scope.interval is not None:
        out["interval"] = {
            "start": graph.label_of(scope.interval.start),
            "end": graph.label_of(scope.interval.end),
        }
    if scope.axis is not None:
        out["axis"] = scope.axis.value
    return out


@dataclass(frozen=True)
class CompareReport:
    lhs: dict
    rhs: dict
    relation: str
    holds: Optional[bool]
    score: Optional[float]
    opposite: bool
    label: str

    def to_dict(self) -> dict:
        out = {"lhs": self.lhs, "rhs": self.rhs, "relation": self.relation,
               "label": self.label}
        if self.holds is not None:
            out["holds"] = self.holds
        if self.score is not None:
            out["score"] = self.score
            out["opposite"] = self.opposite
        return out


def pattern_pair_detail(p1, p2, cfg: Config):
    """(score, opposite) for two resolved patterns, attribute or structural."""
    if isinstance(p1, ATTR_PATTERNS) and isinstance(p2, ATTR_PATTERNS):
        return match_score(p1, p2, cfg)
    return structure.struct_match_score(p1, p2, cfg)


def direct_compare(
    graph: TemporalGraph,
    cfg: Config,
    lhs,
    rhs,
    relation: Optional[RelationSpec] = None,
) -> CompareReport:
    a = _resolve_side(lhs, graph, cfg, "lhs")
    b = _resolve_side(rhs, graph, cfg, "rhs")
    label = _geometry_label(a, b)
    if _is_plain_value(a.payload) and _is_plain_value(b.payload):
        if relation is not None:
            res = eval_relation(relation, a.payload, b.payload, cfg)
            return CompareReport(a.desc, b.desc, relation.op, res.holds, None, False, label)
        tag = _derive_value_tag(a.payload, b.payload)
        return CompareReport(a.desc, b.desc, tag, None, None, False, label)
    if _is_plain_value(a.payload) or _is_plain_value(b.payload):
        raise TgqError(KIND_MISMATCH, "cannot compare a value with a pattern")
    score, flag = pattern_pair_detail(a.payload, b.payload, cfg)
    if relation is not None and relation.family == RelationFamily.PATTERN:
        holds = {
            "same": score >= cfg.similarity_threshold,
            "different": score < cfg.similarity_threshold,
            "opposite": flag,
        }[relation.op]
        return CompareReport(a.desc, b.desc, relation.op, holds, score, flag, label)
    if flag:
        tag = "opposite"
    else:
        tag = "same" if score >= cfg.similarity_threshold else "different"
    return CompareReport(a.desc, b.desc, tag, None, score, flag, label)


def _resolve_side(side, graph, cfg, which: str) -> Resolved:
    try:
        return side.resolve(graph, cfg)
    except TgqError as err:
        raise TgqError(err.code, f"{which} side: {err.message}", **err.details) from None


def _is_plain_value(payload) -> bool:
    return isinstance(payload, (int, float, str, bool))


def _derive_value_tag(a, b) -> str:
    if isinstance(a, bool) or isinstance(b, bool) or isinstance(a, str) or isinstance(b, str):
        return "eq" if a == b else "ne"
    if a == b:
        return "eq"
    return "lt" if a < b else "gt"


def _geometry_label(a: Resolved, b: Resolved) -> str:
    """Reference geometry of a comparison: same element across time is
    evolutionary, across elements is contextual, no movement is static.
    Literal sides have no reference geometry and read as static."""
    if a.ref_key is None or b.ref_key is None:
        return "STATIC"
    if a.ref_key == b.ref_key:
        if a.time_key == b.time_key:
            return "STATIC"
        return "EVOLUTIONARY"
    return "CONTEXTUAL"


# ---------------------------------------------------------------------------
# Inverse comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Binding:
    time_key: object  # int | TimeInterval | None
    ref_key: object  # GraphElementRef | GroupCandidate | None
    payload: object

    def sort_key(self):
        return (_time_sort_key(self.time_key), _binding_ref_name(self.ref_key))

    def describe(self, graph: TemporalGraph) -> dict:
        out: dict = {}
        if isinstance(self.time_key, TimeInterval):
            out["interval"] = {
                "start": graph.label_of(self.time_key.start),
                "end": graph.label_of(self.time_key.end),
            }
        elif self.time_key is not None:
            out["t"] = graph.label_of(self.time_key)
        if self.ref_key is not None:
            out["ref"] = _binding_ref_name(self.ref_key)
        if self.payload is not None:
            out["found"] = (
                self.payload.to_dict() if hasattr(self.payload, "to_dict") else self.payload
            )
        return out


def _binding_ref_name(ref_key) -> str:
    if ref_key is None:
        return ""
    if isinstance(ref_key, GroupCandidate):
        return ref_key.name
    return str(ref_key)


@dataclass(frozen=True)
class FindSide:
    """Inverse-lookup side: bindings are the (t, g) pairs whose value
    satisfies the constraint."""

    attr: str
    constraint: ValueConstraint
    fixed_t: Optional[int] = None
    fixed_ref: Optional[GraphElementRef] = None
    interval: Optional[TimeInterval] = None
    members: Optional[tuple] = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config) -> list:
        hits = inverse_lookup(
            graph, cfg, self.attr, self.constraint,
            t=self.fixed_t, ref=self.fixed_ref,
            interval=self.interval, members=self.members,
        )
        return [Binding(t, ref, value) for t, ref, value in hits]


@dataclass(frozen=True)
class SearchSide:
    """Pattern-search side: bindings are the scopes matching the pattern."""

    target: object
    quadrant: Quadrant
    attr: str
    space: SearchSpace
    fixed_element: Optional[GraphElementRef] = None
    fixed_group: Optional[GroupCandidate] = None
    fixed_t: Optional[int] = None
    fixed_interval: Optional[TimeInterval] = None
    axis: Optional[AspectAxis] = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config) -> list:
        matches = pattern_search(
            graph, cfg, self.target, self.quadrant, self.attr, self.space,
            fixed_element=self.fixed_element, fixed_group=self.fixed_group,
            fixed_t=self.fixed_t, fixed_interval=self.fixed_interval, axis=self.axis,
        )
        out = []
        for m in matches:
            ref_key = (
                GroupCandidate(m.ref_name, m.members)
                if m.members is not None
                else GraphElementRef.parse(m.ref_name)
            )
            out.append(Binding(m.time_key, ref_key, m.pattern))
        return out


@dataclass(frozen=True)
class FixedSide:
    """A fully specified reference (the reduced comparison forms)."""

    time_key: object = None
    ref_key: object = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config) -> list:
        return [Binding(self.time_key, self.ref_key, None)]


@dataclass(frozen=True)
class PairReport:
    lhs: dict
    rhs: dict
    relations: dict

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "relations": self.relations}


def inverse_compare(
    graph: TemporalGraph,
    cfg: Config,
    lhs,
    rhs,
    families: Optional[tuple] = None,
    all_pairs: bool = False,
) -> list:
    """Resolve both sides to reference bindings and report the temporal /
    set / structural relations between them. Default is the first pair in
    canonical order; ``all_pairs`` reports the full product."""
    b1 = lhs.resolve_bindings(graph, cfg)
    b2 = rhs.resolve_bindings(graph, cfg)
    if not b1:
        raise TgqError(UNRESOLVED_SIDE, "lhs constraint matched nothing")
    if not b2:
        raise TgqError(UNRESOLVED_SIDE, "rhs constraint matched nothing")
    b1.sort(key=Binding.sort_key)
    b2.sort(key=Binding.sort_key)
    pairs = [(x, y) for x in b1 for y in b2] if all_pairs else [(b1[0], b2[0])]
    reports = []
    for x, y in pairs:
        reports.append(
            PairReport(x.describe(graph), y.describe(graph),
                       _pair_relations(graph, cfg, x, y, families))
        )
    return reports


def _pair_relations(graph, cfg, x: Binding, y: Binding, families) -> dict:
    requested = families or ("temporal", "graph")
    out: dict = {}
    if "temporal" in requested:
        tag = _temporal_tag(x.time_key, y.time_key)
        if tag is not None:
            out["temporal"] = tag
    if "graph" in requested and x.ref_key is not None and y.ref_key is not None:
        if isinstance(x.ref_key, GroupCandidate) and isinstance(y.ref_key, GroupCandidate):
            out["set"] = set_relation(
                {str(m) for m in x.ref_key.members},
                {str(m) for m in y.ref_key.members},
            )
        else:
            out["element"] = (
                "same" if _binding_ref_name(x.ref_key) == _binding_ref_name(y.ref_key)
                else "different"
            )
    if "structural" in requested:
        out["structural"] = _structural_tag(graph, cfg, x, y)
    return out


def _temporal_tag(k1, k2):
    if k1 is None or k2 is None:
        return None
    if isinstance(k1, TimeInterval) or isinstance(k2, TimeInterval):
        i1 = k1 if isinstance(k1, TimeInterval) else TimeInterval(k1, k1)
        i2 = k2 if isinstance(k2, TimeInterval) else TimeInterval(k2, k2)
        return allen_relation(i1, i2)
    return point_relation(k1, k2)


def _structural_tag(graph, cfg, x: Binding, y: Binding) -> dict:
    from .errors import MISSING_TIME_CONTEXT

    if not (isinstance(x.time_key, int) and x.time_key == y.time_key):
        raise TgqError(
            MISSING_TIME_CONTEXT,
            "structural relation between found references needs a shared time point",
        )
    g1 = _as_element(graph, x.ref_key)
    g2 = _as_element(graph, y.ref_key)
    dist, path = shortest_connection(graph, x.time_key, g1, g2)
    return {"connected": dist is not None, "distance": dist, "path": path}


def _as_element(graph, ref_key) -> GraphElementRef:
    if isinstance(ref_key, GraphElementRef):
        return ref_key
    raise TgqError(
        KIND_MISMATCH, "structural relations apply to element references"
    )


# ---------------------------------------------------------------------------
# Relation seeking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxRelation:
    """A side constraint on the time or graph references of a binding pair."""

    target: str  # "time" | "graph"
    spec: RelationSpec
    t_context: Optional[int] = None  # explicit snapshot for structural tests

    def holds(self, graph, cfg, x: Binding, y: Binding) -> bool:
        if self.target == "time":
            if x.time_key is None or y.time_key is None:
                raise TgqError(VALIDATION_ERROR, "no time references to relate")
            if self.spec.family == RelationFamily.TEMPORAL_POINT:
                return eval_relation(self.spec, x.time_key, y.time_key, cfg).holds
            i1 = x.time_key if isinstance(x.time_key, TimeInterval) else TimeInterval(x.time_key, x.time_key)
            i2 = y.time_key if isinstance(y.time_key, TimeInterval) else TimeInterval(y.time_key, y.time_key)
            return eval_relation(self.spec, i1, i2, cfg).holds
        if self.spec.family == RelationFamily.VALUE:
            return eval_relation(
                self.spec, _binding_ref_name(x.ref_key), _binding_ref_name(y.ref_key), cfg
            ).holds
        if self.spec.family == RelationFamily.SET:
            s1 = _member_names(x.ref_key)
            s2 = _member_names(y.ref_key)
            return eval_relation(self.spec, s1, s2, cfg).holds
        # structural: use the explicit time context, else a shared bound point
        t = self.t_context
        if t is None and isinstance(x.time_key, int) and x.time_key == y.time_key:
            t = x.time_key
        if not isinstance(x.ref_key, GraphElementRef) or not isinstance(y.ref_key, GraphElementRef):
            raise TgqError(KIND_MISMATCH, "structural relations apply to element references")
        return eval_relation(self.spec, x.ref_key, y.ref_key, cfg, graph=graph, t=t).holds


def _member_names(ref_key) -> set:
    if isinstance(ref_key, GroupCandidate):
        return {str(m) for m in ref_key.members}
    return {str(ref_key)}


@dataclass(frozen=True)
class SeekSideValues:
    """Elementary relation-seeking side: attribute values with optional
    fixed references and an optional value constraint."""

    attr: str
    fixed_t: Optional[int] = None
    fixed_ref: Optional[GraphElementRef] = None
    constraint: Optional[ValueConstraint] = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config, space: SearchSpace) -> list:
        times = time_points(graph, self.fixed_t)
        elements = (
            [self.fixed_ref] if self.fixed_ref else element_candidates(graph, space.subset_family)
        )
        out = []
        for t in times:
            for el in elements:
                if not graph.defined_at(t, el, self.attr, cfg):
                    continue
                value = graph.value_at(t, el, self.attr, cfg)
                if self.constraint is not None and not self.constraint.test(value):
                    continue
                out.append(Binding(t, el, value))
        return out


@dataclass(frozen=True)
class SeekSidePatterns:
    """Synoptic relation-seeking side: behaviour patterns over enumerated
    scopes, optionally filtered by a target pattern."""

    quadrant: Quadrant
    attr: str
    axis: Optional[AspectAxis] = None
    fixed_element: Optional[GraphElementRef] = None
    fixed_group: Optional[GroupCandidate] = None
    fixed_t: Optional[int] = None
    fixed_interval: Optional[TimeInterval] = None
    target: Optional[object] = None

    def resolve_bindings(self, graph: TemporalGraph, cfg: Config, space: SearchSpace) -> list:
        out = []
        if self.quadrant == Quadrant.Q3_TREND_OF_G:
            elements = (
                [self.fixed_element] if self.fixed_element
                else element_candidates(graph, space.subset_family)
            )
            windows = time_windows(graph, self.fixed_interval, space.window_min_len)
            check_budget(len(elements) * len(windows), cfg, "relation seeking")
            for el in elements:
                for w in windows:
                    out.append(Binding(w, el, trend(graph, cfg, el, w, self.attr)))
        elif self.quadrant == Quadrant.Q2_DIST_AT_T:
            for t in time_points(graph, self.fixed_t):
                groups = (
                    [self.fixed_group] if self.fixed_group
                    else group_candidates(graph, space, at=t)
                )
                for grp in groups:
                    try:
                        p = distribution(graph, cfg, grp.members, t, self.attr)
                    except TgqError as err:
                        if err.code == EMPTY_SCOPE:
                            continue
                        raise
                    out.append(Binding(t, grp, p))
        else:
            windows = time_windows(graph, self.fixed_interval, space.window_min_len)
            check_budget(len(windows), cfg, "relation seeking")
            for w in windows:
                groups = (
                    [self.fixed_group] if self.fixed_group
                    else group_candidates(graph, space, context=w)
                )
                for grp in groups:
                    try:
                        p = aspectual(graph, cfg, grp.members, w, self.attr, self.axis)
                    except TgqError as err:
                        if err.code == EMPTY_SCOPE:
                            continue
                        raise
                    out.append(Binding(w, grp, p))
        if self.target is not None:
            out = [
                b for b in out
                if pattern_pair_detail(self.target, b.payload, cfg)[0] >= cfg.similarity_threshold
            ]
        return out


@dataclass(frozen=True)
class SeekPair:
    lhs: Binding
    rhs: Binding
    detail: dict


def relation_seek(
    graph: TemporalGraph,
    cfg: Config,
    relation: RelationSpec,
    side1,
    side2,
    aux: tuple = (),
    space: Optional[SearchSpace] = None,
) -> list:
    """Find binding pairs whose values/patterns stand in the requested
    relation, subject to every auxiliary relation on their references."""
    space = space or SearchSpace()
    b1 = side1.resolve_bindings(graph, cfg, space)
    b2 = side2.resolve_bindings(graph, cfg, space)
    check_budget(max(len(b1), len(b2)), cfg, "relation seeking")
    check_budget(len(b1) * len(b2), cfg, "relation seeking (pairs)")
    symmetric = side1 == side2

    def qualified(x: Binding, y: Binding):
        detail = _main_relation_detail(relation, x, y, cfg)
        if detail is None:
            return None
        for a in aux:
            if not a.holds(graph, cfg, x, y):
                return None
        return detail

    results = []
    for x in b1:
        for y in b2:
            if symmetric and (x.time_key, _binding_ref_name(x.ref_key)) == (
                y.time_key, _binding_ref_name(y.ref_key)
            ):
                continue
            detail = qualified(x, y)
            if detail is None:
                continue
            if symmetric and (y.sort_key(), x.sort_key()) < (x.sort_key(), y.sort_key()):
                if qualified(y, x) is not None:
                    continue  # mirrored pair will be reported in canonical order
            results.append(SeekPair(x, y, detail))
    results.sort(key=lambda p: (p.lhs.sort_key(), p.rhs.sort_key()))
    return results


def _main_relation_detail(relation: RelationSpec, x: Binding, y: Binding, cfg: Config):
    if relation.family == RelationFamily.VALUE:
        res = eval_relation(relation, x.payload, y.payload, cfg)
        return {"relation": relation.op} if res.holds else None
    if relation.family == RelationFamily.PATTERN:
        score, flag = pattern_pair_detail(x.payload, y.payload, cfg)
        holds = {
            "same": score >= cfg.similarity_threshold,
            "different": score < cfg.similarity_threshold,
            "opposite": flag,
        }[relation.op]
        return {"relation": relation.op, "score": score} if holds else None
    raise TgqError(
        VALIDATION_ERROR,
        f"relation seeking relates values or patterns, not {relation.family.value}",
    )
