"""Plain-text formats for elections, bribery instances, graphs, and set systems.

Election::

    candidates: a,b,c
    2* a > b > c      # weight prefix is optional
    c > b > a

Instance: an election (inline, or ``election: <path>``) followed by::

    preferred: c
    k: 2
    rule: kborda
    budget: 4
    prices: unit            # or: aon 3,5   or: table + one ``price:`` line per voter

``price:`` lines hold ``unit``, ``aon <q>``, or a comma list ``0,1,4,...``.
``#`` starts a comment everywhere.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .election import (
    AllOrNothingPrice,
    BriberyInstance,
    Election,
    TablePrice,
    UnitPrice,
    Voter,
)
from .errors import ParseError
from .reductions import Graph, SetCoverInput
from .rules import RuleSpec

NAME_RE = re.compile(r"[^\s,>*#:]+")
KEY_RE = re.compile(r"^\s*([A-Za-z_]+)\s*:(.*)$")


@dataclass(frozen=True)
class _Line:
    number: int
    text: str  # comment stripped
    raw: str

    def col(self, fragment: str, start: int = 0) -> int:
        at = self.raw.find(fragment, start) if fragment else -1
        return at + 1 if at >= 0 else 1


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield _Line(i, body, raw)


def _int(line: _Line, token: str, what: str, minimum: int = 0) -> int:
    token = token.strip()
    if not re.fullmatch(r"[+-]?\d+", token):
        raise ParseError(f"{what} must be an integer, got {token!r}", line.number, line.col(token))
    value = int(token)
    if value < minimum:
        raise ParseError(f"{what} must be >= {minimum}, got {value}", line.number, line.col(token))
    return value


def _int_list(line: _Line, body: str, what: str) -> list[int]:
    items = [x for x in body.split(",")]
    if not body.strip() or any(not x.strip() for x in items):
        raise ParseError(f"{what} must be a comma-separated list of integers", line.number, line.col(body.strip()))
    return [_int(line, x, what) for x in items]


# -- elections -----------------------------------------------------------------


class _ElectionBuilder:
    def __init__(self):
        self.names: Optional[list[str]] = None
        self.lookup: dict[str, int] = {}
        self.voters: list[Voter] = []
        self.first_line: Optional[_Line] = None

    def candidates(self, line: _Line, body: str):
        if self.names is not None:
            raise ParseError("candidates declared twice", line.number, 1)
        names = [x.strip() for x in body.split(",")]
        columns = []
        offset = line.raw.index(":") + 1
        for name in names:
            at = line.raw.find(name, offset) if name else -1
            columns.append(at + 1 if at >= 0 else offset + 1)
            offset = max(offset, at + len(name)) if at >= 0 else offset
        seen = set()
        for name, col in zip(names, columns):
            if not NAME_RE.fullmatch(name):
                raise ParseError(f"invalid candidate name {name!r}", line.number, col)
            if name in seen:
                raise ParseError(f"duplicate candidate {name!r}", line.number, col)
            seen.add(name)
        self.names = names
        self.lookup = {n: i for i, n in enumerate(names)}
        self.first_line = line

    def vote(self, line: _Line):
        if self.names is None:
            raise ParseError("vote before the candidates line", line.number, 1)
        body = line.text.strip()
        weight = 1
        if "*" in body:
            w, body = body.split("*", 1)
            weight = _int(line, w, "voter weight", minimum=1)
        names = [x.strip() for x in body.split(">")]
        order = []
        offset = 0
        for name in names:
            at = line.raw.find(name, offset)
            offset = max(offset, at + len(name)) if at >= 0 else offset
            if name not in self.lookup:
                raise ParseError(f"unknown candidate {name!r}", line.number, at + 1 if at >= 0 else 1)
            order.append(self.lookup[name])
        if len(set(order)) != len(order):
            dup = next(n for n in names if names.count(n) > 1)
            raise ParseError(f"candidate {dup!r} ranked twice", line.number, line.col(dup))
        if len(order) != len(self.names):
            missing = [n for n in self.names if self.lookup[n] not in order]
            raise ParseError(f"vote does not rank {', '.join(missing)}", line.number, 1)
        self.voters.append(Voter(tuple(order), weight))

    def build(self, where: int) -> Election:
        if self.names is None:
            raise ParseError("missing 'candidates:' line", where, 1)
        if not self.voters:
            raise ParseError("election has no voters", where, 1)
        return Election(tuple(self.names), tuple(self.voters))


def parse_election(text: str) -> Election:
    builder = _ElectionBuilder()
    last = 1
    for line in _lines(text):
        last = line.number
        key = KEY_RE.match(line.text)
        if key and key.group(1) == "candidates":
            builder.candidates(line, key.group(2))
        elif key:
            raise ParseError(f"unexpected key {key.group(1)!r} in an election file", line.number, 1)
        else:
            builder.vote(line)
    return builder.build(last)


def format_election(election: Election) -> str:
    out = [f"candidates: {','.join(election.candidates)}"]
    for v in election.voters:
        out.append(f"{v.weight}* " + " > ".join(election.candidates[c] for c in v.order))
    return "\n".join(out) + "\n"


# -- instances -----------------------------------------------------------------


def _parse_price(line: _Line, body: str):
    body = body.strip()
    if body == "unit":
        return UnitPrice()
    if body.startswith("aon"):
        return AllOrNothingPrice(_int(line, body[3:], "all-or-nothing price"))
    return TablePrice(tuple(_int_list(line, body, "price table")))


def parse_instance(text: str, base_dir: Optional[Path] = None) -> BriberyInstance:
    builder = _ElectionBuilder()
    fields: dict[str, tuple[_Line, str]] = {}
    price_lines: list[tuple[_Line, str]] = []
    external: Optional[Election] = None
    last = 1
    for line in _lines(text):
        last = line.number
        key = KEY_RE.match(line.text)
        if not key:
            if external is not None:
                raise ParseError("inline votes together with an election file", line.number, 1)
            builder.vote(line)
            continue
        name, body = key.group(1), key.group(2).strip()
        if name == "candidates":
            if external is not None:
                raise ParseError("inline candidates together with an election file", line.number, 1)
            builder.candidates(line, key.group(2))
        elif name == "election":
            if builder.names is not None or external is not None:
                raise ParseError("election given twice", line.number, 1)
            path = Path(body)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            try:
                external = parse_election(path.read_text())
            except OSError as exc:
                raise ParseError(f"cannot read election file {body!r}: {exc.strerror}", line.number, line.col(body)) from exc
        elif name == "price":
            price_lines.append((line, body))
        elif name in ("preferred", "k", "rule", "budget", "prices"):
            if name in fields:
                raise ParseError(f"{name!r} given twice", line.number, 1)
            fields[name] = (line, body)
        else:
            raise ParseError(f"unknown key {name!r}", line.number, 1)

    election = external if external is not None else builder.build(last)
    for name in ("preferred", "k", "rule", "budget", "prices"):
        if name not in fields:
            raise ParseError(f"missing '{name}:' line", last, 1)

    line, body = fields["preferred"]
    if body not in election.candidates:
        raise ParseError(f"unknown preferred candidate {body!r}", line.number, line.col(body))
    preferred = election.index(body)

    line, body = fields["k"]
    k = _int(line, body, "committee size", minimum=1)
    if k > election.m:
        raise ParseError(f"committee size {k} exceeds {election.m} candidates", line.number, line.col(body))

    line, body = fields["rule"]
    try:
        rule = RuleSpec.parse(body)
    except ValueError as exc:
        raise ParseError(str(exc), line.number, line.col(body)) from exc
    t = rule.t
    if t is not None and t > election.m:
        raise ParseError(f"approval threshold {t} exceeds {election.m} candidates", line.number, line.col(body))

    line, body = fields["budget"]
    budget = _int(line, body, "budget")

    line, body = fields["prices"]
    n = election.n
    if body == "unit":
        prices = [UnitPrice()] * n
    elif body.startswith("aon"):
        qs = _int_list(line, body[3:], "all-or-nothing prices")
        if len(qs) != n:
            raise ParseError(f"{len(qs)} all-or-nothing prices for {n} voters", line.number, line.col(body))
        prices = [AllOrNothingPrice(q) for q in qs]
    elif body == "table":
        if len(price_lines) != n:
            raise ParseError(f"{len(price_lines)} 'price:' lines for {n} voters", line.number, 1)
        prices = [_parse_price(pl, pb) for pl, pb in price_lines]
    else:
        raise ParseError("prices must be 'unit', 'aon q1,...', or 'table'", line.number, line.col(body))
    if body != "table" and price_lines:
        pl = price_lines[0][0]
        raise ParseError("'price:' lines need 'prices: table'", pl.number, 1)

    try:
        return BriberyInstance(election, preferred, k, rule, tuple(prices), budget)
    except ValueError as exc:
        where = price_lines[0][0] if price_lines else line
        raise ParseError(str(exc), where.number, 1) from exc


def _format_price(pf) -> str:
    if isinstance(pf, UnitPrice):
        return "unit"
    if isinstance(pf, AllOrNothingPrice):
        return f"aon {pf.q}"
    return ",".join(str(x) for x in pf.values)


def format_instance(instance: BriberyInstance, header: str = "") -> str:
    e = instance.election
    out = [f"# {line}" if line else "#" for line in header.splitlines()]
    out.append(format_election(e).rstrip("\n"))
    out += [
        f"preferred: {e.candidates[instance.preferred]}",
        f"k: {instance.committee_size}",
        f"rule: {instance.rule}",
        f"budget: {instance.budget}",
    ]
    prices = instance.prices
    if all(isinstance(pf, UnitPrice) for pf in prices):
        out.append("prices: unit")
    elif all(isinstance(pf, AllOrNothingPrice) for pf in prices):
        out.append("prices: aon " + ",".join(str(pf.q) for pf in prices))
    else:
        out.append("prices: table")
        out += [f"price: {_format_price(pf)}" for pf in prices]
    return "\n".join(out) + "\n"


def instance_digest(instance: BriberyInstance) -> str:
    return hashlib.sha256(format_instance(instance).encode()).hexdigest()


# -- graphs and set systems -------------------------------------------------------


def parse_graph(text: str) -> Graph:
    vertices = None
    edges: list[tuple[int, int]] = []
    colors: dict[int, int] = {}
    last = 1
    for line in _lines(text):
        last = line.number
        parts = line.text.split()
        tag = parts[0]
        if tag == "v" and len(parts) == 2:
            if vertices is not None:
                raise ParseError("vertex count given twice", line.number, 1)
            vertices = _int(line, parts[1], "vertex count")
            continue
        if vertices is None:
            raise ParseError("the first line must be 'v <count>'", line.number, 1)
        if tag == "e" and len(parts) == 3:
            a = _int(line, parts[1], "vertex")
            b = _int(line, parts[2], "vertex")
            for x, token in ((a, parts[1]), (b, parts[2])):
                if x >= vertices:
                    raise ParseError(f"vertex {x} out of range", line.number, line.col(token, 1))
            if a == b:
                raise ParseError(f"self-loop at vertex {a}", line.number, 1)
            if (min(a, b), max(a, b)) in edges:
                raise ParseError(f"duplicate edge {a} {b}", line.number, 1)
            edges.append((min(a, b), max(a, b)))
        elif tag == "c" and len(parts) == 3:
            v = _int(line, parts[1], "vertex")
            if v >= vertices:
                raise ParseError(f"vertex {v} out of range", line.number, line.col(parts[1], 1))
            colors[v] = _int(line, parts[2], "color", minimum=1)
        else:
            raise ParseError(f"expected 'e i j' or 'c i color', got {line.text.strip()!r}", line.number, 1)
    if vertices is None:
        raise ParseError("missing 'v <count>' line", last, 1)
    color_tuple = None
    if colors:
        missing = [v for v in range(vertices) if v not in colors]
        if missing:
            raise ParseError(f"vertex {missing[0]} has no color", last, 1)
        color_tuple = tuple(colors[v] for v in range(vertices))
    return Graph(vertices, tuple(edges), color_tuple)


def format_graph(graph: Graph) -> str:
    out = [f"v {graph.vertices}"] + [f"e {a} {b}" for a, b in graph.edges]
    if graph.colors is not None:
        out += [f"c {v} {c}" for v, c in enumerate(graph.colors)]
    return "\n".join(out) + "\n"


def parse_set_cover(text: str, h: int) -> SetCoverInput:
    universe = None
    sets = []
    last = 1
    for line in _lines(text):
        last = line.number
        parts = line.text.split(None, 1)
        if parts[0] == "u" and len(parts) == 2 and universe is None:
            universe = _int(line, parts[1], "universe size", minimum=1)
        elif parts[0] == "s" and len(parts) == 2:
            if universe is None:
                raise ParseError("the first line must be 'u <r>'", line.number, 1)
            members = _int_list(line, parts[1], "set members")
            for x in members:
                if x >= universe:
                    raise ParseError(f"element {x} outside the universe", line.number, line.col(str(x), 1))
            sets.append(frozenset(members))
        else:
            raise ParseError(f"expected 'u <r>' or 's i1,i2,...', got {line.text.strip()!r}", line.number, 1)
    if universe is None:
        raise ParseError("missing 'u <r>' line", last, 1)
    if not sets:
        raise ParseError("no sets given", last, 1)
    return SetCoverInput(universe, tuple(sets), h)


def format_set_cover(inst: SetCoverInput) -> str:
    out = [f"u {inst.universe}"] + ["s " + ",".join(str(x) for x in sorted(s)) for s in inst.sets]
    return "\n".join(out) + "\n"


# -- run records -----------------------------------------------------------------


def run_record(instance: BriberyInstance, report, version: str, include_timing: bool = True) -> str:
    record = {
        "digest": instance_digest(instance),
        "version": version,
        **report.to_record(include_timing),
    }
    if record["witness_committee"] is not None:
        names = instance.election.candidates
        record["witness_committee"] = [names[c] for c in record["witness_committee"]]
    return json.dumps(record, sort_keys=False)
