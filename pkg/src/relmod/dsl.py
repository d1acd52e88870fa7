"""Reader and printer for the presentation text format.

Example::

    # Z + Z/2
    name: z-plus-z2
    mode: discrete
    primes: 2, 3
    gens x y;
    rels y^2, [x,y];

Word expressions are juxtapositions of terms; a term is a generator name,
``(expr)``, a left-normed commutator ``[a, b, ...]`` or ``1``, each optionally
followed by ``^n`` (``n`` may be negative).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .presentation import DISCRETE_DEFAULT_PRIMES, Presentation, PresentationError
from .words import Word, commutator, product_of


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[;,\[\]()^]))")
_HEADER = re.compile(r"^\s*(mode|primes|name)\s*:(.*)$")


def _tokenize(text: str):
    headers: dict[str, tuple[str, int]] = {}
    toks: list[_Tok] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        m = _HEADER.match(line)
        if m:
            headers[m.group(1)] = (m.group(2).strip(), lineno)
            continue
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
            kind = m.lastgroup
            col = m.start(kind) + 1
            toks.append(_Tok(kind, m.group(kind), lineno, col))
            pos = m.end()
    return headers, toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0
        self.names: list[str] = []

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str):
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else None
            raise ParseError(msg + " at end of input", last.line if last else 1, last.col if last else 1)
        raise ParseError(msg, t.line, t.col)

    def take(self, kind: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t is None or t.kind != kind or (text is not None and t.text != text):
            self.error(f"expected {text or kind}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text and t.kind in ("sym", "name")

    def presentation(self):
        self.take("name", "gens")
        while self.peek() is not None and self.peek().kind == "name":
            t = self.take("name")
            if t.text in self.names:
                raise ParseError(f"generator {t.text!r} declared twice", t.line, t.col)
            self.names.append(t.text)
        self.take("sym", ";")
        self.take("name", "rels")
        rels = []
        if not self.at(";"):
            rels.append(self.expr())
            while self.at(","):
                self.i += 1
                rels.append(self.expr())
        self.take("sym", ";")
        if self.peek() is not None:
            self.error("trailing input")
        return self.names, rels

    def expr(self) -> Word:
        terms = []
        while True:
            t = self.peek()
            if t is None or t.text in (",", ";", "]", ")"):
                break
            terms.append(self.term())
        if not terms:
            self.error("empty word expression")
        return product_of(terms)

    def term(self) -> Word:
        t = self.peek()
        if t.kind == "name":
            self.i += 1
            if t.text not in self.names:
                raise ParseError(f"undeclared generator {t.text!r}", t.line, t.col)
            w = Word.gen(self.names.index(t.text))
        elif t.kind == "int" and t.text == "1":
            self.i += 1
            w = Word.identity()
        elif t.text == "(":
            self.i += 1
            w = self.expr()
            self.take("sym", ")")
        elif t.text == "[":
            self.i += 1
            parts = [self.expr()]
            while self.at(","):
                self.i += 1
                parts.append(self.expr())
            self.take("sym", "]")
            if len(parts) < 2:
                raise ParseError("commutator needs at least two entries", t.line, t.col)
            w = commutator(*parts)
        else:
            self.error(f"unexpected token {t.text!r}")
        while self.at("^"):
            self.i += 1
            w = w ** int(self.take("int").text)
        return w


def parse_presentation(text: str, **overrides) -> Presentation:
    """Parse presentation text; keyword arguments override header values."""
    headers, toks = _tokenize(text)
    names, rels = _Parser(toks).presentation()
    mode = headers.get("mode", ("discrete", 0))[0]
    name = headers.get("name", ("", 0))[0]
    if "primes" in headers:
        raw, line = headers["primes"]
        try:
            primes = tuple(int(x) for x in re.split(r"[,\s]+", raw) if x)
        except ValueError:
            raise ParseError(f"invalid prime list {raw!r}", line, 1) from None
    else:
        primes = DISCRETE_DEFAULT_PRIMES if mode == "discrete" else ()
    kw = dict(generators=tuple(names), relators=tuple(rels), primes=primes, mode=mode, name=name)
    kw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Presentation(**kw)
    except PresentationError as exc:
        raise ParseError(str(exc)) from None


def format_presentation(pres: Presentation, header: bool = True) -> str:
    lines = []
    if header:
        if pres.name:
            lines.append(f"name: {pres.name}")
        lines.append(f"mode: {pres.mode}")
        lines.append("primes: " + ", ".join(map(str, pres.primes)))
    lines.append("gens " + " ".join(pres.generators) + ";")
    rels = ", ".join(pres.format_word(r) for r in pres.relators)
    lines.append(f"rels {rels};" if rels else "rels ;")
    return "\n".join(lines) + "\n"
