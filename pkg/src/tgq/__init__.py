"""tgq: a temporal property-graph store and task-oriented query engine.

The library half exposes the graph store plus the task operations (lookup,
behaviour characterisation, pattern search, comparison, relation seeking,
structural tasks, correlation discovery); the DSL half parses and plans the
query language the CLI speaks.
"""

from .config import Config, load_config, parse_config_text
from .errors import ParseError, TgqError
from .graph import (
    ElemKind,
    GraphElementRef,
    GraphSubset,
    TemporalGraph,
    TimeInterval,
    edge_ref,
    load,
    load_path,
    node_ref,
    object_ref,
)
from .dsl import parse, plan
from .dsl.planner import run_query

__version__ = "0.1.0"

__all__ = [
    "Config",
    "ElemKind",
    "GraphElementRef",
    "GraphSubset",
    "ParseError",
    "TemporalGraph",
    "TgqError",
    "TimeInterval",
    "edge_ref",
    "load",
    "load_config",
    "load_path",
    "node_ref",
    "object_ref",
    "parse",
    "parse_config_text",
    "plan",
    "run_query",
    "__version__",
]
