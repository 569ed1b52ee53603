"""Query AST: one constructor per task family.

Nodes store surface-level tokens (time labels, reference ids) rather than
resolved indices; the planner binds them to the loaded graph. Every node
pretty-prints to a canonical form that reparses to an equal node, which is
what the round-trip tests pin down.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional


def format_value(v) -> str:
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    return json.dumps(v)


def format_label(label) -> str:
    if isinstance(label, (int, float)) and not isinstance(label, bool):
        return format_value(label)
    return json.dumps(label)


# -- references ---------------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    kind: str  # node | edge | object | subset
    id: str

    def pp(self) -> str:
        return f"{self.kind}:{self.id}"


@dataclass(frozen=True)
class GroupRef:
    kind: str  # subset | nodes | edges
    name: Optional[str] = None

    def pp(self) -> str:
        if self.kind == "subset":
            return f"subset:{self.name}"
        return self.kind.upper()


@dataclass(frozen=True)
class TimeRef:
    label: object

    def pp(self) -> str:
        return f"t={format_label(self.label)}"


@dataclass(frozen=True)
class IntervalRef:
    start: object
    end: object

    def pp(self) -> str:
        return f"[{format_label(self.start)}, {format_label(self.end)}]"


_CMP_TOKENS = {"eq": "=", "ne": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}


@dataclass(frozen=True)
class Predicate:
    attr: str
    op: str  # eq ne lt le gt ge in between
    values: tuple

    def pp(self) -> str:
        if self.op == "in":
            inner = ", ".join(format_value(v) for v in self.values)
            return f"{self.attr} IN {{{inner}}}"
        if self.op == "between":
            return (f"{self.attr} BETWEEN {format_value(self.values[0])} "
                    f"AND {format_value(self.values[1])}")
        return f"{self.attr} {_CMP_TOKENS[self.op]} {format_value(self.values[0])}"


# -- pattern literals ---------------------------------------------------------


@dataclass(frozen=True)
class TrendLit:
    cls: str  # INCREASING | DECREASING | ...

    def pp(self) -> str:
        return self.cls


@dataclass(frozen=True)
class DistLit:
    hint: str  # UNIFORM | CONCENTRATED | ...

    def pp(self) -> str:
        return f"DIST {self.hint}"


@dataclass(frozen=True)
class AspectFreqLit:
    entries: tuple  # ((trend class, count), ...) sorted

    def pp(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self.entries)
        return f"ASPECT TRENDS_OVER_GRAPH {{{inner}}}"


@dataclass(frozen=True)
class AspectTrendLit:
    mean_cls: str
    stddev_cls: str

    def pp(self) -> str:
        return f"ASPECT DISTRIBUTION_OVER_TIME {self.mean_cls} {self.stddev_cls}"


@dataclass(frozen=True)
class PresenceLit:
    cls: str  # ALWAYS | NEVER | APPEARING | DISAPPEARING | INTERMITTENT

    def pp(self) -> str:
        return self.cls


@dataclass(frozen=True)
class ConfigLit:
    metrics: tuple  # ((name, value), ...) sorted

    def pp(self) -> str:
        inner = ", ".join(f"{k}={format_value(v)}" for k, v in self.metrics)
        return f"CONFIG {inner}"


@dataclass(frozen=True)
class ConfigTrendLit:
    trends: tuple  # ((metric, trend class), ...) sorted

    def pp(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.trends)
        return f"CONFIGTREND {inner}"


@dataclass(frozen=True)
class PairsAggLit:
    entries: tuple  # ((presence class, count), ...) sorted

    def pp(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self.entries)
        return f"PAIRSAGG {{{inner}}}"


# -- shared clause shapes -----------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    name: str  # EACH_NODE | EACH_EDGE | SUBSETS | COMPONENTS | KHOP | PAIRS
    k: Optional[int] = None
    center: Optional[Ref] = None

    def pp(self) -> str:
        if self.name == "KHOP":
            out = f"KHOP {self.k}"
            if self.center is not None:
                out += f" {self.center.pp()}"
            return out
        return self.name


@dataclass(frozen=True)
class ConnSpecLit:
    mode: str = "ADJACENT"  # ADJACENT | PATH
    k: Optional[int] = None
    direction: Optional[str] = None  # OUT | IN
    pred: Optional[Predicate] = None

    def pp(self) -> str:
        out = self.mode
        if self.k is not None:
            out += f" <= {self.k}"
        if self.direction is not None:
            out += f" DIR {self.direction}"
        if self.pred is not None:
            out += f" WITH {self.pred.pp()}"
        return out


def _tail(at=None, for_ref=None, in_group=None, during=None, windows=None,
          over=None) -> str:
    parts = []
    if at is not None:
        parts.append(f"AT {at.pp()}")
    if for_ref is not None:
        parts.append(f"FOR {for_ref.pp()}")
    if in_group is not None:
        parts.append(f"IN {in_group.pp()}")
    if during is not None:
        parts.append(f"DURING {during.pp()}")
    if windows is not None:
        parts.append(f"WINDOWS {windows}")
    if over is not None:
        parts.append(f"OVER {over.pp()}")
    return (" " + " ".join(parts)) if parts else ""


# -- queries ------------------------------------------------------------------


@dataclass(frozen=True)
class Lookup:
    attr: str
    ref: Ref
    at: TimeRef

    def pp(self) -> str:
        return f"LOOKUP {self.attr} OF {self.ref.pp()} AT {self.at.pp()}"


@dataclass(frozen=True)
class Find:
    targets: tuple  # variable names among (t, g)
    predicate: Predicate
    at: Optional[TimeRef] = None
    for_ref: Optional[Ref] = None
    in_group: Optional[GroupRef] = None
    during: Optional[IntervalRef] = None

    def pp(self) -> str:
        head = f"FIND {','.join(self.targets)} WHERE {self.predicate.pp()}"
        return head + _tail(self.at, self.for_ref, self.in_group, self.during)


@dataclass(frozen=True)
class Characterize:
    kind: str  # TREND | DIST | ASPECT
    axis: Optional[str]  # TRENDS_OVER_GRAPH | DISTRIBUTION_OVER_TIME
    attr: str
    element: Optional[Ref] = None
    group: Optional[GroupRef] = None
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None

    def pp(self) -> str:
        kind = self.kind if self.axis is None else f"{self.kind} {self.axis}"
        target = self.element.pp() if self.element is not None else self.group.pp()
        return (f"CHARACTERIZE {kind} ON {self.attr} OF {target}"
                + _tail(self.at, None, None, self.during))


@dataclass(frozen=True)
class Search:
    pattern: object  # a pattern literal node
    attr: str
    family: Optional[FamilySpec] = None
    of_target: Optional[object] = None  # Ref | GroupRef: fixed reference, free time
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None
    windows: Optional[int] = None

    def pp(self) -> str:
        where = (f"OVER {self.family.pp()}" if self.family is not None
                 else f"OF {self.of_target.pp()}")
        return (f"SEARCH {self.pattern.pp()} ON {self.attr} {where}"
                + _tail(self.at, None, None, self.during, self.windows))


# comparison sides


@dataclass(frozen=True)
class SideLookup:
    attr: str
    ref: Ref
    at: TimeRef

    def pp(self) -> str:
        return f"{self.attr} OF {self.ref.pp()} AT {self.at.pp()}"


@dataclass(frozen=True)
class SideCharac:
    kind: str
    axis: Optional[str]
    attr: str
    element: Optional[Ref] = None
    group: Optional[GroupRef] = None
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None

    def pp(self) -> str:
        kind = self.kind if self.axis is None else f"{self.kind} {self.axis}"
        target = self.element.pp() if self.element is not None else self.group.pp()
        return f"{kind} ON {self.attr} OF {target}" + _tail(self.at, None, None, self.during)


@dataclass(frozen=True)
class SideFind:
    find: Find

    def pp(self) -> str:
        return self.find.pp()


@dataclass(frozen=True)
class SideSearch:
    search: Search

    def pp(self) -> str:
        return self.search.pp()


@dataclass(frozen=True)
class SideValue:
    value: object

    def pp(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True)
class SidePattern:
    pattern: object

    def pp(self) -> str:
        return self.pattern.pp()


@dataclass(frozen=True)
class SideTime:
    at: TimeRef

    def pp(self) -> str:
        return f"T={format_label(self.at.label)}"


@dataclass(frozen=True)
class SideInterval:
    interval: IntervalRef

    def pp(self) -> str:
        return self.interval.pp()


@dataclass(frozen=True)
class SideRef:
    ref: object  # Ref | GroupRef
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None

    def pp(self) -> str:
        return self.ref.pp() + _tail(self.at, None, None, self.during)


@dataclass(frozen=True)
class StructScopeNode:
    kind: str  # PAIR | CONFIG | PAIRS | CONFIGTREND
    g1: Optional[Ref] = None
    g2: Optional[Ref] = None
    group: Optional[GroupRef] = None
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None
    conn: Optional[ConnSpecLit] = None
    metrics: Optional[tuple] = None  # CONFIGTREND metric restriction

    def pp(self) -> str:
        if self.kind == "PAIR":
            out = f"PAIR({self.g1.pp()}, {self.g2.pp()})"
        else:
            out = f"{self.kind}"
            if self.metrics:
                out += " " + ",".join(self.metrics)
            out += f" OF {self.group.pp()}"
        if self.conn is not None:
            out += f" USING {self.conn.pp()}"
        return out + _tail(self.at, None, None, self.during)


@dataclass(frozen=True)
class SideStruct:
    scope: StructScopeNode

    def pp(self) -> str:
        return f"STRUCT {self.scope.pp()}"


@dataclass(frozen=True)
class RelOp:
    op: str  # cmp token name, SAME/DIFFERENT/OPPOSITE, or WITHIN
    delta: Optional[float] = None

    def pp(self) -> str:
        if self.op == "within":
            return f"WITHIN({format_value(self.delta)})"
        return _CMP_TOKENS.get(self.op, self.op.upper())


@dataclass(frozen=True)
class Compare:
    lhs: object
    rhs: object
    relation: Optional[RelOp] = None
    families: tuple = ()  # TEMPORAL | GRAPH | STRUCTURAL, inverse mode only
    all_pairs: bool = False

    def pp(self) -> str:
        out = f"COMPARE {self.lhs.pp()} WITH {self.rhs.pp()}"
        if self.relation is not None:
            out += f" USING {self.relation.pp()}"
        if self.families:
            out += f" USING {','.join(self.families)}"
        if self.all_pairs:
            out += " ALLPAIRS"
        return out


# relation seeking


@dataclass(frozen=True)
class Term:
    kind: str  # VALUE | TREND | DIST | ASPECT | CONFIG | CONFIGTREND
    var: str
    attr: Optional[str] = None
    axis: Optional[str] = None

    def pp(self) -> str:
        if self.kind == "VALUE":
            return f"{self.attr}({self.var})"
        if self.kind == "ASPECT":
            return f"ASPECT({self.axis}, {self.attr}, {self.var})"
        if self.kind in ("CONFIG", "CONFIGTREND"):
            return f"{self.kind}({self.var})"
        return f"{self.kind}({self.attr}, {self.var})"


@dataclass(frozen=True)
class SeekPredNode:
    lhs: Term
    rel: RelOp
    rhs: Term

    def pp(self) -> str:
        return f"{self.lhs.pp()} {self.rel.pp()} {self.rhs.pp()}"


@dataclass(frozen=True)
class Assign:
    var: str
    value: object  # TimeRef | IntervalRef | Ref | GroupRef

    def pp(self) -> str:
        if isinstance(self.value, TimeRef):
            return f"{self.var} = {format_label(self.value.label)}"
        return f"{self.var} = {self.value.pp()}"


@dataclass(frozen=True)
class RefRel:
    var1: str
    op: str  # BEFORE/SAMETIME/AFTER, allen tags, = !=, set ops
    var2: str

    def pp(self) -> str:
        token = {"eq": "=", "ne": "!="}.get(self.op, self.op.upper())
        return f"{self.var1} {token} {self.var2}"


@dataclass(frozen=True)
class StructRel:
    op: str  # ADJACENT | CONNECTED | DISTANCE | CONFIGEQUAL
    var1: str
    var2: str
    t: Optional[object] = None  # time label
    k: Optional[int] = None  # DISTANCE bound

    def pp(self) -> str:
        args = f"{self.var1}, {self.var2}"
        if self.t is not None:
            args += f", {format_label(self.t)}"
        out = f"{self.op}({args})"
        if self.k is not None:
            out += f" <= {self.k}"
        return out


@dataclass(frozen=True)
class Seek:
    targets: tuple
    main: SeekPredNode
    clauses: tuple = ()  # Assign | RefRel | StructRel
    family: Optional[FamilySpec] = None
    windows: Optional[int] = None

    def pp(self) -> str:
        out = f"SEEK {','.join(self.targets)} WHERE {self.main.pp()}"
        for clause in self.clauses:
            out += f" AND {clause.pp()}"
        return out + _tail(None, None, None, None, self.windows, self.family)


# structural queries


@dataclass(frozen=True)
class Connection:
    g1: Ref
    g2: Ref
    at: Optional[TimeRef] = None

    def pp(self) -> str:
        return f"CONNECTED({self.g1.pp()}, {self.g2.pp()})" + _tail(self.at)


@dataclass(frozen=True)
class Neighbors:
    g1: Ref
    spec: ConnSpecLit
    at: Optional[TimeRef] = None

    def pp(self) -> str:
        return f"NEIGHBORS({self.g1.pp()}, {self.spec.pp()})" + _tail(self.at)


@dataclass(frozen=True)
class Pairs:
    spec: ConnSpecLit
    at: Optional[TimeRef] = None

    def pp(self) -> str:
        return f"PAIRS({self.spec.pp()})" + _tail(self.at)


@dataclass(frozen=True)
class Times:
    g1: Ref
    g2: Ref
    spec: ConnSpecLit = ConnSpecLit()

    def pp(self) -> str:
        inner = f"{self.g1.pp()}, {self.g2.pp()}"
        if self.spec != ConnSpecLit():
            inner += f", {self.spec.pp()}"
        return f"TIMES WHERE CONNECTED({inner})"


@dataclass(frozen=True)
class StructCharacterize:
    scope: StructScopeNode

    def pp(self) -> str:
        return f"STRUCT CHARACTERIZE {self.scope.pp()}"


@dataclass(frozen=True)
class StructSearch:
    pattern: object  # PresenceLit | ConfigLit | ConfigTrendLit | PairsAggLit
    family: FamilySpec
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None
    windows: Optional[int] = None

    def pp(self) -> str:
        return (f"STRUCT SEARCH {self.pattern.pp()} OVER {self.family.pp()}"
                + _tail(self.at, None, None, self.during, self.windows))


# correlation


@dataclass(frozen=True)
class GraphSeries:
    attr: str
    target: object  # Ref | GroupRef
    at: Optional[TimeRef] = None
    during: Optional[IntervalRef] = None
    agg: Optional[str] = None  # mean | median | min | max | sum

    def pp(self) -> str:
        out = f"{self.attr} OF {self.target.pp()}"
        if self.agg is not None:
            out += f" AGG {self.agg}"
        return out + _tail(self.at, None, None, self.during)


@dataclass(frozen=True)
class ExternalSeries:
    name: str

    def pp(self) -> str:
        return f"SERIES {self.name}"


@dataclass(frozen=True)
class Correlate:
    lhs: object
    rhs: object
    lag: int = 0
    mode: Optional[str] = None  # POOLED | PERELEMENT

    def pp(self) -> str:
        out = f"CORRELATE {self.lhs.pp()} WITH {self.rhs.pp()}"
        if self.lag:
            out += f" LAG {self.lag}"
        if self.mode is not None:
            out += f" {self.mode}"
        return out


QUERY_NODES = (
    Lookup, Find, Characterize, Search, Compare, Seek,
    Connection, Neighbors, Pairs, Times, StructCharacterize, StructSearch,
    Correlate,
)
