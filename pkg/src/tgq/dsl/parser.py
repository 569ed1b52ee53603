"""Hand-written recursive-descent parser for the query language.

The tokenizer tracks line/column so syntax errors point at the offending
spot and carry the token set the parser would have accepted. Keywords are
case-insensitive; identifiers and reference ids are case-sensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from . import ast
from .validate import validate

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
  | (?P<ref>[A-Za-z_][A-Za-z0-9_]*:[A-Za-z0-9_.\-]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|=|<|>|\(|\)|\[|\]|\{|\}|,|:)
    """,
    re.VERBOSE,
)

TREND_CLASSES = {
    "INCREASING", "DECREASING", "CONSTANT", "PEAK", "TROUGH",
    "FLUCTUATING", "DEGENERATE",
}
DIST_CLASSES = {"UNIFORM", "CONCENTRATED", "BIMODAL", "SKEWED_LEFT", "SKEWED_RIGHT"}
PRESENCE_CLASSES = {"ALWAYS", "NEVER", "APPEARING", "DISAPPEARING", "INTERMITTENT"}
AXES = {"TRENDS_OVER_GRAPH", "DISTRIBUTION_OVER_TIME"}
FAMILIES = {"EACH_NODE", "EACH_EDGE", "SUBSETS", "COMPONENTS", "KHOP", "PAIRS"}
REF_KINDS = {"node", "edge", "object", "subset"}
ALLEN_WORDS = {
    "BEFORE", "MEETS", "OVERLAPS", "STARTS", "DURING", "FINISHES", "EQUALS",
    "AFTER", "MET_BY", "OVERLAPPED_BY", "STARTED_BY", "CONTAINS", "FINISHED_BY",
}
SET_WORDS = {"SETEQ", "SUBSETOF", "SUPERSETOF", "DISJOINT", "INTERSECTS"}
TIME_WORDS = {"SAMETIME"} | ALLEN_WORDS
STRUCT_FUNCS = {"ADJACENT", "CONNECTED", "DISTANCE", "CONFIGEQUAL"}
CMP_OPS = {"=": "eq", "!=": "ne", "<": "lt", "<=": "le", ">": "gt", ">=": "ge"}
METRICS = {"density", "components", "triangles", "mean_degree", "cliques4"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUMBER | STRING | REF | OP | EOF
    value: object
    line: int
    col: int

    @property
    def upper(self) -> str:
        return self.value.upper() if isinstance(self.value, str) else ""


def tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col,
                             found=text[pos])
        groups = m.groupdict()
        raw = m.group(0)
        if groups["ws"] is None:
            if groups["string"] is not None:
                value = re.sub(r"\\(.)", r"\1", raw[1:-1])
                tokens.append(Token("STRING", value, line, col))
            elif groups["number"] is not None:
                num = float(raw) if ("." in raw or "e" in raw or "E" in raw) else int(raw)
                tokens.append(Token("NUMBER", num, line, col))
            elif groups["ref"] is not None:
                tokens.append(Token("REF", raw, line, col))
            elif groups["ident"] is not None:
                tokens.append(Token("IDENT", raw, line, col))
            else:
                tokens.append(Token("OP", raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(Token("EOF", None, line, col))
    return tokens


def parse(text: str):
    """Parse a query to its AST and validate it.

    Raises ParseError for syntax problems (with position and expectations)
    and TgqError(VALIDATION_ERROR) for well-formed but inconsistent asts.
    """
    if not isinstance(text, str):
        raise ParseError("query must be text", 1, 1)
    node = _Parser(tokenize(text)).parse_query()
    validate(node)
    return node


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    # -- plumbing ---------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, expected) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok.kind == "EOF" else str(tok.value)
        return ParseError(f"unexpected {found!r}", tok.line, tok.col,
                          expected=set(expected), found=found)

    def at_kw(self, *words) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.upper in words

    def take_kw(self, *words) -> bool:
        if self.at_kw(*words):
            self.advance()
            return True
        return False

    def expect_kw(self, word: str) -> None:
        if not self.take_kw(word):
            raise self.error({word})

    def at_op(self, *ops) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.value in ops

    def take_op(self, *ops) -> bool:
        if self.at_op(*ops):
            self.advance()
            return True
        return False

    def expect_op(self, op: str) -> None:
        if not self.take_op(op):
            raise self.error({op})

    def expect_kind(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.error({kind})
        return self.advance()

    def expect_eof(self) -> None:
        if self.peek().kind != "EOF":
            raise self.error({"end of query"})

    # -- shared pieces ------------------------------------------------------

    def ident(self, what: str = "identifier") -> str:
        if self.peek().kind != "IDENT":
            raise self.error({what})
        return self.advance().value

    def elem_ref(self) -> ast.Ref:
        tok = self.expect_kind("REF")
        kind, _, ident = tok.value.partition(":")
        if kind not in REF_KINDS:
            raise ParseError(f"unknown reference kind '{kind}'", tok.line, tok.col,
                             expected=REF_KINDS, found=kind)
        return ast.Ref(kind, ident)

    def group_ref(self) -> ast.GroupRef:
        if self.take_kw("NODES"):
            return ast.GroupRef("nodes")
        if self.take_kw("EDGES"):
            return ast.GroupRef("edges")
        ref = self.elem_ref()
        if ref.kind != "subset":
            raise self.error({"subset:<name>", "NODES", "EDGES"})
        return ast.GroupRef("subset", ref.id)

    def any_target(self):
        """An element reference or a group reference."""
        if self.at_kw("NODES", "EDGES"):
            return self.group_ref()
        ref = self.elem_ref()
        if ref.kind == "subset":
            return ast.GroupRef("subset", ref.id)
        return ref

    def label(self):
        tok = self.peek()
        if tok.kind == "NUMBER":
            return self.advance().value
        if tok.kind == "STRING":
            return self.advance().value
        raise self.error({"time label"})

    def time_ref(self) -> ast.TimeRef:
        # canonical `t=2`; a bare label is accepted
        if self.peek().kind == "IDENT" and self.peek().upper == "T" \
                and self.peek(1).kind == "OP" and self.peek(1).value == "=":
            self.advance()
            self.advance()
        return ast.TimeRef(self.label())

    def interval_ref(self) -> ast.IntervalRef:
        self.expect_op("[")
        start = self.label()
        self.expect_op(",")
        end = self.label()
        self.expect_op("]")
        return ast.IntervalRef(start, end)

    def value(self):
        tok = self.peek()
        if tok.kind in ("NUMBER", "STRING"):
            return self.advance().value
        if self.take_kw("TRUE"):
            return True
        if self.take_kw("FALSE"):
            return False
        raise self.error({"value"})

    def predicate(self) -> ast.Predicate:
        attr = self.ident("attribute")
        if self.take_kw("IN"):
            self.expect_op("{")
            values = [self.value()]
            while self.take_op(","):
                values.append(self.value())
            self.expect_op("}")
            return ast.Predicate(attr, "in", tuple(values))
        if self.take_kw("BETWEEN"):
            lo = self.value()
            self.expect_kw("AND")
            hi = self.value()
            return ast.Predicate(attr, "between", (lo, hi))
        tok = self.peek()
        if tok.kind == "OP" and tok.value in CMP_OPS:
            self.advance()
            return ast.Predicate(attr, CMP_OPS[tok.value], (self.value(),))
        raise self.error(set(CMP_OPS) | {"IN", "BETWEEN"})

    def family(self) -> ast.FamilySpec:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.upper not in FAMILIES:
            raise self.error(FAMILIES)
        name = self.advance().upper
        if name == "KHOP":
            k = int(self.expect_kind("NUMBER").value)
            center = self.elem_ref() if self.peek().kind == "REF" else None
            return ast.FamilySpec("KHOP", k, center)
        return ast.FamilySpec(name)

    def conn_spec(self) -> ast.ConnSpecLit:
        if self.take_kw("ADJACENT"):
            mode, k = "ADJACENT", None
        elif self.take_kw("PATH"):
            mode = "PATH"
            k = None
            if self.take_op("<="):
                k = int(self.expect_kind("NUMBER").value)
        else:
            raise self.error({"ADJACENT", "PATH"})
        direction = None
        if self.take_kw("DIR"):
            if self.take_kw("OUT"):
                direction = "OUT"
            elif self.take_kw("IN"):
                direction = "IN"
            else:
                raise self.error({"OUT", "IN"})
        pred = None
        if self.take_kw("WITH"):
            pred = self.predicate()
        return ast.ConnSpecLit(mode, k, direction, pred)

    # -- tail clauses -------------------------------------------------------

    def tail_clauses(self, allowed: str) -> dict:
        """AT / FOR / IN / DURING / WINDOWS / OVER in any order."""
        out: dict = {}
        while True:
            if "a" in allowed and self.at_kw("AT") and "at" not in out:
                self.advance()
                out["at"] = self.time_ref()
            elif "f" in allowed and self.at_kw("FOR") and "for_ref" not in out:
                self.advance()
                out["for_ref"] = self.elem_ref()
            elif "i" in allowed and self.at_kw("IN") and "in_group" not in out:
                self.advance()
                out["in_group"] = self.group_ref()
            elif "d" in allowed and self.at_kw("DURING") and "during" not in out:
                self.advance()
                out["during"] = self.interval_ref()
            elif "w" in allowed and self.at_kw("WINDOWS") and "windows" not in out:
                self.advance()
                out["windows"] = int(self.expect_kind("NUMBER").value)
            elif "o" in allowed and self.at_kw("OVER") and "family" not in out:
                self.advance()
                out["family"] = self.family()
            else:
                return out

    # -- pattern literals -----------------------------------------------------

    def attr_pattern_literal(self):
        if self.peek().upper in TREND_CLASSES:
            return ast.TrendLit(self.advance().upper)
        if self.take_kw("DIST"):
            tok = self.peek()
            if tok.kind != "IDENT" or tok.upper not in DIST_CLASSES:
                raise self.error(DIST_CLASSES)
            return ast.DistLit(self.advance().upper)
        if self.take_kw("ASPECT"):
            axis = self.axis()
            if axis == "TRENDS_OVER_GRAPH":
                return ast.AspectFreqLit(self.freq_entries(TREND_CLASSES))
            mean_cls = self.trend_class()
            std_cls = self.trend_class()
            return ast.AspectTrendLit(mean_cls, std_cls)
        raise self.error(TREND_CLASSES | {"DIST", "ASPECT"})

    def trend_class(self) -> str:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.upper not in TREND_CLASSES:
            raise self.error(TREND_CLASSES)
        return self.advance().upper

    def axis(self) -> str:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.upper not in AXES:
            raise self.error(AXES)
        return self.advance().upper

    def freq_entries(self, classes) -> tuple:
        self.expect_op("{")
        entries = []
        while True:
            tok = self.peek()
            if tok.kind != "IDENT" or tok.upper not in classes:
                raise self.error(classes)
            cls = self.advance().upper
            self.expect_op(":")
            count = int(self.expect_kind("NUMBER").value)
            entries.append((cls, count))
            if not self.take_op(","):
                break
        self.expect_op("}")
        return tuple(sorted(entries))

    def struct_pattern_literal(self):
        if self.peek().upper in PRESENCE_CLASSES:
            return ast.PresenceLit(self.advance().upper)
        if self.take_kw("CONFIG"):
            return ast.ConfigLit(self.metric_values())
        if self.take_kw("CONFIGTREND"):
            return ast.ConfigTrendLit(self.metric_trends())
        if self.take_kw("PAIRSAGG"):
            return ast.PairsAggLit(self.freq_entries(PRESENCE_CLASSES))
        raise self.error(PRESENCE_CLASSES | {"CONFIG", "CONFIGTREND", "PAIRSAGG"})

    def metric_name(self) -> str:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.value not in METRICS:
            raise self.error(METRICS)
        return self.advance().value

    def metric_values(self) -> tuple:
        entries = []
        while True:
            name = self.metric_name()
            self.expect_op("=")
            entries.append((name, float(self.expect_kind("NUMBER").value)))
            if not self.take_op(","):
                break
        return tuple(sorted(entries))

    def metric_trends(self) -> tuple:
        entries = []
        while True:
            name = self.metric_name()
            self.expect_op("=")
            entries.append((name, self.trend_class()))
            if not self.take_op(","):
                break
        return tuple(sorted(entries))

    # -- queries ---------------------------------------------------------------

    def parse_query(self):
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error({"a query keyword"})
        word = tok.upper
        handlers = {
            "LOOKUP": self.q_lookup,
            "FIND": self.q_find,
            "CHARACTERIZE": self.q_characterize,
            "SEARCH": self.q_search,
            "COMPARE": self.q_compare,
            "SEEK": self.q_seek,
            "CONNECTED": self.q_connected,
            "NEIGHBORS": self.q_neighbors,
            "PAIRS": self.q_pairs,
            "TIMES": self.q_times,
            "STRUCT": self.q_struct,
            "CORRELATE": self.q_correlate,
        }
        if word not in handlers:
            raise self.error(set(handlers))
        node = handlers[word]()
        self.expect_eof()
        return node

    def q_lookup(self) -> ast.Lookup:
        self.expect_kw("LOOKUP")
        attr = self.ident("attribute")
        self.expect_kw("OF")
        ref = self.elem_ref()
        self.expect_kw("AT")
        return ast.Lookup(attr, ref, self.time_ref())

    def q_find(self) -> ast.Find:
        self.expect_kw("FIND")
        targets = [self.ident("target")]
        while self.take_op(","):
            targets.append(self.ident("target"))
        self.expect_kw("WHERE")
        pred = self.predicate()
        tail = self.tail_clauses("afid")
        return ast.Find(tuple(targets), pred, **tail)

    def charac_head(self):
        if self.take_kw("TREND"):
            return "TREND", None
        if self.take_kw("DIST"):
            return "DIST", None
        if self.take_kw("ASPECT"):
            return "ASPECT", self.axis()
        raise self.error({"TREND", "DIST", "ASPECT"})

    def q_characterize(self) -> ast.Characterize:
        self.expect_kw("CHARACTERIZE")
        kind, axis = self.charac_head()
        self.expect_kw("ON")
        attr = self.ident("attribute")
        self.expect_kw("OF")
        target = self.any_target()
        tail = self.tail_clauses("ad")
        element = target if isinstance(target, ast.Ref) else None
        group = target if isinstance(target, ast.GroupRef) else None
        return ast.Characterize(kind, axis, attr, element, group, **tail)

    def q_search(self) -> ast.Search:
        self.expect_kw("SEARCH")
        pattern = self.attr_pattern_literal()
        self.expect_kw("ON")
        attr = self.ident("attribute")
        family = of_target = None
        if self.take_kw("OVER"):
            family = self.family()
        elif self.take_kw("OF"):
            of_target = self.any_target()
        else:
            raise self.error({"OVER", "OF"})
        tail = self.tail_clauses("adw")
        return ast.Search(pattern, attr, family, of_target, **tail)

    # comparison

    def q_compare(self) -> ast.Compare:
        self.expect_kw("COMPARE")
        lhs = self.compare_side()
        self.expect_kw("WITH")
        rhs = self.compare_side()
        relation = None
        families: list = []
        while self.take_kw("USING"):
            got = self.using_clause()
            if isinstance(got, ast.RelOp):
                relation = got
            else:
                families.extend(got)
        all_pairs = self.take_kw("ALLPAIRS")
        return ast.Compare(lhs, rhs, relation, tuple(families), all_pairs)

    def using_clause(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.value in CMP_OPS:
            self.advance()
            return ast.RelOp(CMP_OPS[tok.value])
        if self.at_kw("SAME", "DIFFERENT", "OPPOSITE"):
            return ast.RelOp(self.advance().upper)
        if self.take_kw("WITHIN"):
            self.expect_op("(")
            delta = float(self.expect_kind("NUMBER").value)
            self.expect_op(")")
            return ast.RelOp("within", delta)
        families = []
        while True:
            if self.at_kw("TEMPORAL", "GRAPH", "STRUCTURAL"):
                families.append(self.advance().upper)
            elif self.take_kw("SET"):
                families.append("GRAPH")
            else:
                raise self.error(
                    {"TEMPORAL", "GRAPH", "SET", "STRUCTURAL", "SAME", "DIFFERENT",
                     "OPPOSITE", "WITHIN"} | set(CMP_OPS)
                )
            if not self.take_op(","):
                return families

    def compare_side(self):
        tok = self.peek()
        if tok.kind == "NUMBER" or tok.kind == "STRING" or self.at_kw("TRUE", "FALSE"):
            return ast.SideValue(self.value())
        if self.at_op("["):
            return ast.SideInterval(self.interval_ref())
        if tok.kind == "REF":
            ref = self.any_target()
            tail = self.tail_clauses("ad")
            return ast.SideRef(ref, **tail)
        if self.at_kw("NODES", "EDGES"):
            group = self.group_ref()
            tail = self.tail_clauses("ad")
            return ast.SideRef(group, **tail)
        if tok.kind == "IDENT" and tok.upper == "T" \
                and self.peek(1).kind == "OP" and self.peek(1).value == "=":
            self.advance()
            self.advance()
            return ast.SideTime(ast.TimeRef(self.label()))
        if self.at_kw("FIND"):
            return ast.SideFind(self.q_find())
        if self.at_kw("SEARCH"):
            return ast.SideSearch(self.q_search())
        if self.at_kw("STRUCT"):
            self.advance()
            return ast.SideStruct(self.struct_scope())
        if tok.upper in TREND_CLASSES or tok.upper in PRESENCE_CLASSES:
            if tok.upper in TREND_CLASSES:
                return ast.SidePattern(ast.TrendLit(self.advance().upper))
            return ast.SidePattern(ast.PresenceLit(self.advance().upper))
        if self.at_kw("CONFIG", "CONFIGTREND", "PAIRSAGG"):
            return ast.SidePattern(self.struct_pattern_literal())
        if self.at_kw("DIST"):
            if self.peek(1).kind == "IDENT" and self.peek(1).upper in DIST_CLASSES:
                return ast.SidePattern(self.attr_pattern_literal())
            return self.charac_side()
        if self.at_kw("ASPECT"):
            # literal when the axis is followed by a brace or a trend class
            after_axis = self.peek(2)
            if after_axis.kind == "OP" and after_axis.value == "{":
                return ast.SidePattern(self.attr_pattern_literal())
            if after_axis.kind == "IDENT" and after_axis.upper in TREND_CLASSES:
                return ast.SidePattern(self.attr_pattern_literal())
            return self.charac_side()
        if self.at_kw("TREND"):
            return self.charac_side()
        if tok.kind == "IDENT":
            attr = self.advance().value
            self.expect_kw("OF")
            ref = self.elem_ref()
            self.expect_kw("AT")
            return ast.SideLookup(attr, ref, self.time_ref())
        raise self.error({"a comparison side"})

    def charac_side(self) -> ast.SideCharac:
        kind, axis = self.charac_head()
        self.expect_kw("ON")
        attr = self.ident("attribute")
        self.expect_kw("OF")
        target = self.any_target()
        tail = self.tail_clauses("ad")
        element = target if isinstance(target, ast.Ref) else None
        group = target if isinstance(target, ast.GroupRef) else None
        return ast.SideCharac(kind, axis, attr, element, group, **tail)

    # relation seeking

    def q_seek(self) -> ast.Seek:
        self.expect_kw("SEEK")
        targets = [self.ident("target")]
        while self.take_op(","):
            targets.append(self.ident("target"))
        self.expect_kw("WHERE")
        main = self.seek_pred()
        clauses = []
        while self.take_kw("AND"):
            clauses.append(self.seek_clause())
        tail = self.tail_clauses("wo")
        return ast.Seek(tuple(targets), main, tuple(clauses),
                        tail.get("family"), tail.get("windows"))

    def seek_pred(self) -> ast.SeekPredNode:
        lhs = self.seek_term()
        rel = self.seek_relop()
        rhs = self.seek_term()
        return ast.SeekPredNode(lhs, rel, rhs)

    def seek_term(self) -> ast.Term:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error({"a term"})
        word = tok.upper
        if word in ("TREND", "DIST"):
            self.advance()
            self.expect_op("(")
            attr = self.ident("attribute")
            self.expect_op(",")
            var = self.ident("variable")
            self.expect_op(")")
            return ast.Term(word, var, attr)
        if word == "ASPECT":
            self.advance()
            self.expect_op("(")
            axis = self.axis()
            self.expect_op(",")
            attr = self.ident("attribute")
            self.expect_op(",")
            var = self.ident("variable")
            self.expect_op(")")
            return ast.Term("ASPECT", var, attr, axis)
        if word in ("CONFIG", "CONFIGTREND"):
            self.advance()
            self.expect_op("(")
            var = self.ident("variable")
            self.expect_op(")")
            return ast.Term(word, var)
        attr = self.advance().value
        self.expect_op("(")
        var = self.ident("variable")
        self.expect_op(")")
        return ast.Term("VALUE", var, attr)

    def seek_relop(self) -> ast.RelOp:
        tok = self.peek()
        if tok.kind == "OP" and tok.value in CMP_OPS:
            self.advance()
            return ast.RelOp(CMP_OPS[tok.value])
        if self.at_kw("SAME", "DIFFERENT", "OPPOSITE"):
            return ast.RelOp(self.advance().upper)
        if self.take_kw("WITHIN"):
            self.expect_op("(")
            delta = float(self.expect_kind("NUMBER").value)
            self.expect_op(")")
            return ast.RelOp("within", delta)
        raise self.error(set(CMP_OPS) | {"SAME", "DIFFERENT", "OPPOSITE", "WITHIN"})

    def seek_clause(self):
        tok = self.peek()
        if tok.kind == "IDENT" and tok.upper in STRUCT_FUNCS:
            op = self.advance().upper
            self.expect_op("(")
            var1 = self.ident("variable")
            self.expect_op(",")
            var2 = self.ident("variable")
            t = None
            if self.take_op(","):
                t = self.label()
            self.expect_op(")")
            k = None
            if op == "DISTANCE":
                self.expect_op("<=")
                k = int(self.expect_kind("NUMBER").value)
            return ast.StructRel(op, var1, var2, t, k)
        var1 = self.ident("variable")
        tok = self.peek()
        if tok.kind == "IDENT" and (tok.upper in TIME_WORDS or tok.upper in SET_WORDS):
            op = self.advance().upper.lower()
            var2 = self.ident("variable")
            return ast.RefRel(var1, op, var2)
        if self.take_op("!="):
            return ast.RefRel(var1, "ne", self.ident("variable"))
        self.expect_op("=")
        nxt = self.peek()
        if nxt.kind == "IDENT" and nxt.upper not in ("TRUE", "FALSE"):
            return ast.RefRel(var1, "eq", self.ident("variable"))
        if nxt.kind == "REF":
            ref = self.any_target()
            return ast.Assign(var1, ref)
        if nxt.kind == "OP" and nxt.value == "[":
            return ast.Assign(var1, self.interval_ref())
        return ast.Assign(var1, ast.TimeRef(self.label()))

    # structural queries

    def q_connected(self) -> ast.Connection:
        self.expect_kw("CONNECTED")
        self.expect_op("(")
        g1 = self.elem_ref()
        self.expect_op(",")
        g2 = self.elem_ref()
        self.expect_op(")")
        tail = self.tail_clauses("a")
        return ast.Connection(g1, g2, **tail)

    def q_neighbors(self) -> ast.Neighbors:
        self.expect_kw("NEIGHBORS")
        self.expect_op("(")
        g1 = self.elem_ref()
        self.expect_op(",")
        spec = self.conn_spec()
        self.expect_op(")")
        tail = self.tail_clauses("a")
        return ast.Neighbors(g1, spec, **tail)

    def q_pairs(self) -> ast.Pairs:
        self.expect_kw("PAIRS")
        self.expect_op("(")
        spec = self.conn_spec()
        self.expect_op(")")
        tail = self.tail_clauses("a")
        return ast.Pairs(spec, **tail)

    def q_times(self) -> ast.Times:
        self.expect_kw("TIMES")
        self.expect_kw("WHERE")
        self.expect_kw("CONNECTED")
        self.expect_op("(")
        g1 = self.elem_ref()
        self.expect_op(",")
        g2 = self.elem_ref()
        spec = ast.ConnSpecLit()
        if self.take_op(","):
            spec = self.conn_spec()
        self.expect_op(")")
        return ast.Times(g1, g2, spec)

    def q_struct(self):
        self.expect_kw("STRUCT")
        if self.take_kw("CHARACTERIZE"):
            return ast.StructCharacterize(self.struct_scope())
        if self.take_kw("SEARCH"):
            pattern = self.struct_pattern_literal()
            self.expect_kw("OVER")
            family = self.family()
            tail = self.tail_clauses("adw")
            return ast.StructSearch(pattern, family, **tail)
        raise self.error({"CHARACTERIZE", "SEARCH"})

    def struct_scope(self) -> ast.StructScopeNode:
        if self.take_kw("PAIR"):
            self.expect_op("(")
            g1 = self.elem_ref()
            self.expect_op(",")
            g2 = self.elem_ref()
            self.expect_op(")")
            conn = None
            if self.take_kw("USING"):
                conn = self.conn_spec()
            tail = self.tail_clauses("ad")
            return ast.StructScopeNode("PAIR", g1, g2, None, conn=conn, **tail)
        if self.take_kw("CONFIG"):
            kind, metrics = "CONFIG", None
        elif self.take_kw("CONFIGTREND"):
            kind = "CONFIGTREND"
            metrics = None
            if not self.at_kw("OF"):
                names = [self.metric_name()]
                while self.take_op(","):
                    names.append(self.metric_name())
                metrics = tuple(names)
        elif self.take_kw("PAIRS"):
            kind, metrics = "PAIRS", None
        else:
            raise self.error({"PAIR", "CONFIG", "PAIRS", "CONFIGTREND"})
        self.expect_kw("OF")
        group = self.group_ref()
        conn = None
        if kind == "PAIRS" and self.take_kw("USING"):
            conn = self.conn_spec()
        tail = self.tail_clauses("ad")
        return ast.StructScopeNode(kind, None, None, group, conn=conn,
                                   metrics=metrics, **tail)

    # correlation

    def q_correlate(self) -> ast.Correlate:
        self.expect_kw("CORRELATE")
        lhs = self.series_spec()
        self.expect_kw("WITH")
        rhs = self.series_spec()
        lag = 0
        if self.take_kw("LAG"):
            lag = int(self.expect_kind("NUMBER").value)
        mode = None
        if self.at_kw("POOLED", "PERELEMENT"):
            mode = self.advance().upper
        return ast.Correlate(lhs, rhs, lag, mode)

    def series_spec(self):
        if self.take_kw("SERIES"):
            return ast.ExternalSeries(self.ident("series name"))
        attr = self.ident("attribute")
        self.expect_kw("OF")
        target = self.any_target()
        agg = None
        if self.take_kw("AGG"):
            tok = self.peek()
            if tok.kind != "IDENT" or tok.value not in ("mean", "median", "min", "max", "sum"):
                raise self.error({"mean", "median", "min", "max", "sum"})
            agg = self.advance().value
        tail = self.tail_clauses("ad")
        return ast.GraphSeries(attr, target, agg=agg, **tail)
