"""Candidate enumeration for search-style tasks.

Free graph references are never quantified over all 2^N subsets; they range
over declared families (single elements, named subsets, connected
components, k-hop balls), and free time references over single points or
contiguous windows. Enumeration is capped so a runaway search fails fast
instead of hanging.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import Config
from .errors import SEARCH_SPACE_EXCEEDED, TgqError, VALIDATION_ERROR
from .graph import ElemKind, TemporalGraph, TimeInterval, node_ref


class SubsetFamily(str, Enum):
    EACH_NODE = "EACH_NODE"
    EACH_EDGE = "EACH_EDGE"
    NAMED_SUBSETS = "SUBSETS"
    CONNECTED_COMPONENTS = "COMPONENTS"
    KHOP = "KHOP"


class TimeFamily(str, Enum):
    EACH_POINT = "EACH_POINT"
    ALL_WINDOWS = "ALL_WINDOWS"


@dataclass(frozen=True)
class SearchSpace:
    subset_family: SubsetFamily = SubsetFamily.EACH_NODE
    time_family: TimeFamily = TimeFamily.EACH_POINT
    khop_k: int = 1
    khop_center: Optional[str] = None  # node id; None enumerates every centre
    window_min_len: int = 1

    def __post_init__(self):
        if self.khop_k < 1:
            raise TgqError(VALIDATION_ERROR, "k-hop radius must be >= 1")
        if self.window_min_len < 1:
            raise TgqError(VALIDATION_ERROR, "window length must be >= 1")


@dataclass(frozen=True)
class GroupCandidate:
    """A candidate set of elements with a stable name for reporting."""

    name: str
    members: tuple  # tuple[GraphElementRef, ...], sorted


def check_budget(count: int, cfg: Config, what: str) -> None:
    if count > cfg.search_max_candidates:
        raise TgqError(
            SEARCH_SPACE_EXCEEDED,
            f"{what}: {count} candidates exceed the cap of {cfg.search_max_candidates}",
            count=count,
        )


def element_candidates(graph: TemporalGraph, family: SubsetFamily) -> list:
    """Single-element candidates for element-shaped free references."""
    if family == SubsetFamily.EACH_NODE:
        return graph.all_refs((ElemKind.NODE,))
    if family == SubsetFamily.EACH_EDGE:
        return graph.all_refs((ElemKind.EDGE,))
    raise TgqError(
        VALIDATION_ERROR,
        f"family {family.value} does not enumerate single elements",
    )


def group_candidates(
    graph: TemporalGraph,
    space: SearchSpace,
    context: Optional[TimeInterval] = None,
    at: Optional[int] = None,
) -> list:
    """Element-set candidates for subset-shaped free references.

    Components and k-hop balls are structural, so they need a time context:
    a single point, or an interval whose union graph (an element counts if
    alive anywhere in it) defines connectivity.
    """
    fam = space.subset_family
    if fam == SubsetFamily.NAMED_SUBSETS:
        return [
            GroupCandidate(f"subset:{name}", graph.subsets[name].members)
            for name in sorted(graph.subsets)
        ]
    if fam in (SubsetFamily.EACH_NODE, SubsetFamily.EACH_EDGE):
        return [
            GroupCandidate(str(ref), (ref,))
            for ref in element_candidates(graph, fam)
        ]
    adjacency, alive = _union_adjacency(graph, context, at)
    if fam == SubsetFamily.CONNECTED_COMPONENTS:
        out = []
        seen: set = set()
        for start in sorted(alive):
            if start in seen:
                continue
            comp = _reach(adjacency, start)
            seen |= comp
            members = tuple(node_ref(n) for n in sorted(comp))
            out.append(GroupCandidate(f"component:{min(comp)}", members))
        return out
    # KHOP
    centres = [space.khop_center] if space.khop_center else sorted(alive)
    out = []
    for centre in centres:
        if centre not in alive:
            continue
        ball = _reach(adjacency, centre, space.khop_k)
        members = tuple(node_ref(n) for n in sorted(ball))
        out.append(GroupCandidate(f"khop:{centre}", members))
    return out


def time_points(graph: TemporalGraph, fixed: Optional[int] = None) -> list:
    if fixed is not None:
        return [fixed]
    return list(range(graph.n_times))


def time_windows(
    graph: TemporalGraph,
    fixed: Optional[TimeInterval] = None,
    min_len: int = 1,
) -> list:
    if fixed is not None:
        return [fixed]
    t = graph.n_times
    return [
        TimeInterval(s, e)
        for s in range(t)
        for e in range(s + min_len - 1, t)
    ]


def _union_adjacency(graph, context: Optional[TimeInterval], at: Optional[int]):
    if at is not None:
        snap = graph.snapshot(at)
        return {n: set(snap.neighbours(n)) for n in snap.nodes}, set(snap.nodes)
    if context is None:
        context = graph.full_interval()
    adjacency: dict = {}
    alive: set = set()
    for t in context.indices():
        snap = graph.snapshot(t)
        alive.update(snap.nodes)
        for n in snap.nodes:
            adjacency.setdefault(n, set()).update(snap.neighbours(n))
    return adjacency, alive


def _reach(adjacency: dict, start: str, limit: Optional[int] = None) -> set:
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier and (limit is None or depth < limit):
        depth += 1
        nxt = []
        for u in frontier:
            for v in adjacency.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen
