"""Text formats for manifold specs and webs, with line/column diagnostics.

Manifold documents::

    doc      := "{" [ entry ("," entry)* [","] ] "}"
    entry    := key ":" value
    key      := "n" | "generators" | "markings" | "relators" | "circles"
    value    := int | string | "[" [ value ("," value)* [","] ] "]" | doc
    circle   := "{" "w" ":" string [ "," "h" ":" bit ] "}"

Web expressions::

    web      := component ( "," component )*
    component:= arc | knot | vertex
    arc      := "arc(" marking "->" marking ";" "w=" word ";" "s=(" int "," int ")" [ ";" "h=" bit ] ")"
    knot     := "knot(" "w=" word [ ";" "h=" bit ] ")"
    vertex   := ("sink" | "source") [ "[" label [ ";" "anchor=" word ] "]" ]
                "(" edge ( "," edge )* ")"
    edge     := "(" "w=" word "->" ( marking ":" int | label [ "." int ] ) [ ";" "h=" bit ] ")"
    marking  := "e" int
    label    := "v" int | identifier
    word     := empty | "1" | letter ( "*" letter )*
    letter   := "g" int [ "^" int ]

``#`` starts a comment running to the end of the line.  A vertex without a
label is named ``v<i>`` where i counts vertices in order of appearance.  An
inter-vertex edge without a slot is paired with the matching reference on the
other vertex (the k-th reference from a to b pairs with the k-th from b to a).
For a sink the edge word runs from the far end into the vertex; for a source
it runs from the vertex out to the far end.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .errors import ParseError, SkeinError
from .groups import Circle, GroupPresentation, MarkedManifoldSpec, Word, validate_manifold
from .skein import Edge, FramedKnot, MarkingEnd, StatedArc, Vertex, VertexEnd, Web, GroupoidPath

_TOKEN_RE = re.compile(
    r"""
    (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<arrow>->)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\](),:;=*^.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


class _Lexer:
    def __init__(self, text: str, source: str = ""):
        self.text = text
        self.source = source
        self.tokens: list[Token] = []
        pos = 0
        while True:
            while pos < len(text):
                if text[pos].isspace():
                    pos += 1
                elif text[pos] == "#":
                    nl = text.find("\n", pos)
                    pos = len(text) if nl < 0 else nl
                else:
                    break
            if pos >= len(text):
                break
            mt = _TOKEN_RE.match(text, pos)
            if not mt:
                self.fail(f"unexpected character {text[pos]!r}", pos)
            self.tokens.append(Token(mt.lastgroup, mt.group(), pos))
            pos = mt.end()
        self.i = 0

    def location(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, msg: str, pos: int):
        line, col = self.location(pos)
        raise ParseError(msg, line, col, self.source)

    def peek(self) -> Token:
        return self.tokens[self.i] if self.i < len(self.tokens) else Token("eof", "", len(self.text))

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != "string"

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        tok = self.peek()
        if text is not None and (tok.text != text or tok.kind == "string"):
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        if kind is not None and tok.kind != kind:
            self.fail(f"expected {kind}, found {tok.text or 'end of input'!r}", tok.pos)
        self.i += 1
        return tok

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(f"unexpected {tok.text!r} after the end of the expression", tok.pos)

    def integer(self) -> tuple[int, int]:
        tok = self.take(kind="int")
        return int(tok.text), tok.pos

    def bit(self) -> int:
        val, pos = self.integer()
        if val not in (0, 1):
            self.fail(f"spin bit must be 0 or 1, got {val}", pos)
        return val


# words -----------------------------------------------------------------------

_GEN_RE = re.compile(r"^g(\d+)$")
_WORD_STOP = {";", ")", "->", ",", "]"}


def _word(lx: _Lexer) -> Word:
    tok = lx.peek()
    if tok.kind == "eof" or tok.text in _WORD_STOP:
        return Word()
    if tok.kind == "int" and tok.text == "1":
        lx.take()
        return Word()
    letters: list[tuple[int, int]] = []
    while True:
        tok = lx.take()
        m = _GEN_RE.match(tok.text) if tok.kind == "ident" else None
        if not m or int(m.group(1)) < 1:
            lx.fail(f"expected a generator g1, g2, ..., found {tok.text or 'end of input'!r}", tok.pos)
        g = int(m.group(1))
        power = 1
        if lx.at("^"):
            lx.take()
            power, ppos = lx.integer()
            if power == 0:
                lx.fail("exponent 0 is not allowed", ppos)
        letters.extend([(g, 1 if power > 0 else -1)] * abs(power))
        if not lx.at("*"):
            return Word(tuple(letters))
        lx.take()


def parse_word_text(text: str, source: str = "") -> Word:
    lx = _Lexer(text, source)
    w = _word(lx)
    lx.expect_end()
    return w


def format_word(w: Word) -> str:
    return str(w)


# manifold documents -----------------------------------------------------------


@dataclass
class _Node:
    value: Any
    pos: int


def _value(lx: _Lexer) -> _Node:
    tok = lx.peek()
    if tok.kind == "int":
        lx.take()
        return _Node(int(tok.text), tok.pos)
    if tok.kind == "string":
        lx.take()
        return _Node(bytes(tok.text[1:-1], "utf-8").decode("unicode_escape"), tok.pos)
    if lx.at("["):
        lx.take()
        items = []
        while not lx.at("]"):
            items.append(_value(lx))
            if not lx.at(","):
                break
            lx.take()
        lx.take("]")
        return _Node(items, tok.pos)
    if lx.at("{"):
        return _object(lx)
    lx.fail(f"expected a value, found {tok.text or 'end of input'!r}", tok.pos)


def _object(lx: _Lexer) -> _Node:
    start = lx.take("{")
    entries: dict[str, tuple[_Node, int]] = {}
    while not lx.at("}"):
        key = lx.peek()
        if key.kind not in ("ident", "string"):
            lx.fail(f"expected a key, found {key.text or 'end of input'!r}", key.pos)
        lx.take()
        name = key.text.strip('"')
        if name in entries:
            lx.fail(f"duplicate key {name!r}", key.pos)
        lx.take(":")
        entries[name] = (_value(lx), key.pos)
        if not lx.at(","):
            break
        lx.take()
    lx.take("}")
    return _Node(entries, start.pos)


def _require(lx: _Lexer, node: _Node, kind: type, what: str):
    if not isinstance(node.value, kind) or isinstance(node.value, bool):
        lx.fail(f"{what} must be {'an integer' if kind is int else 'a ' + kind.__name__}", node.pos)
    return node.value


def _word_from_string(lx: _Lexer, node: _Node) -> Word:
    text = _require(lx, node, str, "word")
    inner = _Lexer(text)
    try:
        w = _word(inner)
        inner.expect_end()
    except ParseError as exc:
        # report against the enclosing document, inside the string literal
        lx.fail(str(exc).split(": ", 1)[-1], node.pos + exc.column)
    return w


_MANIFOLD_KEYS = ("n", "generators", "markings", "relators", "circles")


def parse_manifold(text: str, source: str = "") -> MarkedManifoldSpec:
    lx = _Lexer(text, source)
    root = _object(lx)
    lx.expect_end()
    entries = root.value
    for name, (_, kpos) in entries.items():
        if name not in _MANIFOLD_KEYS:
            lx.fail(f"unknown key {name!r} (expected one of {', '.join(_MANIFOLD_KEYS)})", kpos)
    for name in ("n", "generators"):
        if name not in entries:
            lx.fail(f"missing required key {name!r}", root.pos)
    n = _require(lx, entries["n"][0], int, "n")
    m = _require(lx, entries["generators"][0], int, "generators")
    k = _require(lx, entries["markings"][0], int, "markings") if "markings" in entries else 1
    relators = []
    if "relators" in entries:
        for item in _require(lx, entries["relators"][0], list, "relators"):
            relators.append(_word_from_string(lx, item))
    circles = []
    if "circles" in entries:
        for item in _require(lx, entries["circles"][0], list, "circles"):
            fields = _require(lx, item, dict, "circle")
            for name, (_, kpos) in fields.items():
                if name not in ("w", "h"):
                    lx.fail(f"unknown circle key {name!r}", kpos)
            if "w" not in fields:
                lx.fail("circle needs a word 'w'", item.pos)
            w = _word_from_string(lx, fields["w"][0])
            h = 0
            if "h" in fields:
                h = _require(lx, fields["h"][0], int, "h")
            circles.append(Circle(w, h))
    spec = MarkedManifoldSpec(n, GroupPresentation(m, tuple(relators)), k, tuple(circles))
    report = validate_manifold(spec)
    if not report.ok:
        line, col = lx.location(root.pos)
        raise ParseError("; ".join(report.errors), line, col, source)
    return spec


def format_manifold(spec: MarkedManifoldSpec) -> str:
    parts = [f"n:{spec.n}", f"generators:{spec.m}", f"markings:{spec.k}"]
    if spec.group.relators:
        parts.append("relators:[" + ", ".join(f'"{r}"' for r in spec.group.relators) + "]")
    if spec.circles:
        parts.append("circles:[" + ", ".join(f'{{w:"{c.word}", h:{c.spin}}}' for c in spec.circles) + "]")
    return "{" + ", ".join(parts) + "}"


# webs ------------------------------------------------------------------------


def _marking(lx: _Lexer) -> int:
    tok = lx.take(kind="ident")
    m = re.match(r"^e(\d+)$", tok.text)
    if not m:
        lx.fail(f"expected a marking e0, e1, ..., found {tok.text!r}", tok.pos)
    return int(m.group(1))


def _state(lx: _Lexer, n: int | None) -> int:
    val, pos = lx.integer()
    if val < 1 or (n is not None and val > n):
        upper = n if n is not None else "n"
        lx.fail(f"state {val} out of range 1..{upper}", pos)
    return val


def _spin_suffix(lx: _Lexer) -> int:
    if lx.at(";"):
        lx.take()
        lx.take("h")
        lx.take("=")
        return lx.bit()
    return 0


def _arc(lx: _Lexer, n: int | None) -> StatedArc:
    lx.take("(")
    src = _marking(lx)
    lx.take("->")
    dst = _marking(lx)
    lx.take(";")
    lx.take("w")
    lx.take("=")
    w = _word(lx)
    lx.take(";")
    lx.take("s")
    lx.take("=")
    lx.take("(")
    i = _state(lx, n)
    lx.take(",")
    j = _state(lx, n)
    lx.take(")")
    h = _spin_suffix(lx)
    lx.take(")")
    return StatedArc(GroupoidPath(src, dst, w), i, j, h)


def _knot(lx: _Lexer) -> FramedKnot:
    lx.take("(")
    lx.take("w")
    lx.take("=")
    w = _word(lx)
    h = _spin_suffix(lx)
    lx.take(")")
    return FramedKnot(w, h)


@dataclass
class _RawEdge:
    word: Word
    target: Any  # MarkingEnd, or (label, slot or None, pos)
    spin: int


def _edge(lx: _Lexer, n: int | None) -> _RawEdge:
    lx.take("(")
    lx.take("w")
    lx.take("=")
    w = _word(lx)
    lx.take("->")
    tok = lx.take(kind="ident")
    if re.match(r"^e\d+$", tok.text):
        lx.take(":")
        target: Any = MarkingEnd(int(tok.text[1:]), _state(lx, n))
    else:
        slot = None
        if lx.at("."):
            lx.take()
            slot, spos = lx.integer()
            if slot < 1:
                lx.fail(f"slot {slot} must be >= 1", spos)
        target = (tok.text, slot, tok.pos)
    h = _spin_suffix(lx)
    lx.take(")")
    return _RawEdge(w, target, h)


def _vertex(lx: _Lexer, n: int | None, kind: str, default_id: str):
    vid, anchor, id_pos = default_id, Word(), lx.peek().pos
    if lx.at("["):
        lx.take()
        tok = lx.take(kind="ident")
        vid, id_pos = tok.text, tok.pos
        if lx.at(";"):
            lx.take()
            lx.take("anchor")
            lx.take("=")
            anchor = _word(lx)
        lx.take("]")
    lx.take("(")
    edges = [_edge(lx, n)]
    while lx.at(","):
        lx.take()
        edges.append(_edge(lx, n))
    lx.take(")")
    return vid, kind, edges, anchor, id_pos


def _resolve(lx: _Lexer, raw: list) -> dict[str, Vertex]:
    ids = {}
    for vid, _, _, _, pos in raw:
        if vid in ids:
            lx.fail(f"duplicate vertex id {vid!r}", pos)
        ids[vid] = True
    # explicit slots first, then pair the remaining references in order
    resolved: dict[tuple[str, int], VertexEnd] = {}
    pending: dict[tuple[str, str], list[int]] = {}
    for vid, _, edges, _, _ in raw:
        for t, e in enumerate(edges, start=1):
            if isinstance(e.target, MarkingEnd):
                continue
            other, slot, pos = e.target
            if other not in ids:
                lx.fail(f"edge points at unknown vertex {other!r}", pos)
            if slot is not None:
                resolved[(vid, t)] = VertexEnd(other, slot)
            else:
                pending.setdefault((vid, other), []).append(t)
    for (a, b), slots in pending.items():
        back = pending.get((b, a), [])
        if len(back) != len(slots):
            pos = next(e.target[2] for v, _, es, _, _ in raw if v == a for e in es if not isinstance(e.target, MarkingEnd) and e.target[0] == b)
            lx.fail(f"vertices {a} and {b} reference each other a different number of times", pos)
        for s, t in zip(slots, back):
            resolved[(a, s)] = VertexEnd(b, t)
    out = {}
    for vid, kind, edges, anchor, _ in raw:
        final = tuple(
            Edge(e.word, e.target if isinstance(e.target, MarkingEnd) else resolved[(vid, t)], e.spin)
            for t, e in enumerate(edges, start=1)
        )
        out[vid] = Vertex(vid, kind, final, anchor)
    return out


def parse_web(text: str, n: int | None = None, source: str = "") -> Web:
    """Parse a web expression; with ``n`` given, states are range-checked."""
    lx = _Lexer(text, source)
    if lx.peek().kind == "eof":
        lx.fail("empty web expression", 0)
    items: list = []
    raw_vertices: list = []
    while True:
        tok = lx.take(kind="ident")
        if tok.text == "arc":
            items.append(_arc(lx, n))
        elif tok.text == "knot":
            items.append(_knot(lx))
        elif tok.text in ("sink", "source"):
            raw = _vertex(lx, n, tok.text, f"v{len(raw_vertices)}")
            raw_vertices.append(raw)
            items.append(raw[0])
        else:
            lx.fail(f"expected arc, knot, sink or source, found {tok.text!r}", tok.pos)
        if not lx.at(","):
            break
        lx.take()
    lx.expect_end()
    vertices = _resolve(lx, raw_vertices)
    comps = tuple(vertices[c] if isinstance(c, str) else c for c in items)
    return Web(comps)


def _spin_text(h: int) -> str:
    return f"; h={h}" if h else ""


def format_component(c, default_id: str | None = None) -> str:
    if isinstance(c, StatedArc):
        p = c.path
        return f"arc(e{p.src}->e{p.dst}; w={p.core}; s=({c.state_end},{c.state_start}){_spin_text(c.spin)})"
    if isinstance(c, FramedKnot):
        return f"knot(w={c.word}{_spin_text(c.spin)})"
    if isinstance(c, Vertex):
        head = c.kind
        if c.id != default_id or c.anchor:
            head += f"[{c.id}" + (f"; anchor={c.anchor}" if c.anchor else "") + "]"
        edges = []
        for e in c.edges:
            if isinstance(e.end, MarkingEnd):
                target = f"e{e.end.marking}:{e.end.state}"
            else:
                target = f"{e.end.vertex}.{e.end.slot}"
            edges.append(f"(w={e.word} -> {target}{_spin_text(e.spin)})")
        return f"{head}({', '.join(edges)})"
    raise SkeinError(f"cannot format {c!r}")


def format_web(web: Web) -> str:
    out = []
    count = 0
    for c in web.components:
        if isinstance(c, Vertex):
            out.append(format_component(c, f"v{count}"))
            count += 1
        else:
            out.append(format_component(c))
    return ", ".join(out)
