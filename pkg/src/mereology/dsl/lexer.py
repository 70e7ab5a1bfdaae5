"""Tokenizer for ``.msys`` sources."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .diagnostics import SourceSpan, parse_error

KEYWORDS = frozenset(
    """
    system part of constraint on behaviors grid where simulate init update horizon
    step in let generator project by join meet query expect allows ensures
    compatible determines entails leq laws and or not implies forall exists
    true false abs
    """.split()
)

# longest first so that ":=" wins over ":" and "..." never arises
SYMBOLS = (
    ":=", "..", "->", "<=", ">=", "!=", "==",
    "{", "}", "(", ")", "[", "]", ",", ":", "=", "<", ">", "+", "-", "*", "/", ".",
)

# Unicode spellings accepted as aliases of ASCII operators
ALIASES = {
    "≠": "!=",  # not equal
    "≤": "<=",
    "≥": ">=",
    "→": "->",
    "−": "-",  # minus sign
    "×": "*",
}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, NUMBER, STRING, EOF, a keyword, or a symbol
    text: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind in ("IDENT", "NUMBER", "STRING"):
            return f"{self.kind.lower()} {self.text!r}"
        return f"{self.text!r}"


def _is_ident_start(c: str) -> bool:
    return c == "_" or ("a" <= c <= "z") or ("A" <= c <= "Z")


def _is_ident_char(c: str) -> bool:
    return _is_ident_start(c) or c.isdigit() and c.isascii()


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.byte = 0
        self.line = 1
        self.col = 1

    def _here(self):
        return self.pos, self.byte, self.line, self.col

    def _span(self, start) -> SourceSpan:
        _, byte, line, col = start
        return SourceSpan(byte, self.byte, line, col)

    def _advance(self, n: int = 1):
        for _ in range(n):
            c = self.text[self.pos]
            self.pos += 1
            self.byte += len(c.encode("utf-8", "surrogatepass"))
            if c == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1

    def _peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def tokens(self) -> Iterator[Token]:
        while True:
            self._skip_blank()
            start = self._here()
            c = self._peek()
            if not c:
                yield Token("EOF", "", self._span(start))
                return
            if _is_ident_start(c):
                while _is_ident_char(self._peek()):
                    self._advance()
                word = self.text[start[0]:self.pos]
                yield Token(word if word in KEYWORDS else "IDENT", word, self._span(start))
            elif c.isascii() and c.isdigit():
                yield self._number(start)
            elif c == '"':
                yield self._string(start)
            elif c in ALIASES:
                self._advance()
                yield Token(ALIASES[c], c, self._span(start))
            else:
                for sym in SYMBOLS:
                    if self.text.startswith(sym, self.pos):
                        self._advance(len(sym))
                        yield Token(sym, sym, self._span(start))
                        break
                else:
                    self._advance()
                    raise parse_error(f"unexpected character {c!r}", self._span(start))

    def _skip_blank(self):
        while True:
            c = self._peek()
            if c in (" ", "\t", "\r", "\n"):
                self._advance()
            elif c == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
            else:
                return

    def _number(self, start) -> Token:
        while self._peek().isascii() and self._peek().isdigit():
            self._advance()
        # "1..5" is a range, so a dot only starts a fraction when a digit follows
        if self._peek() == "." and self._peek(1).isascii() and self._peek(1).isdigit():
            self._advance()
            while self._peek().isascii() and self._peek().isdigit():
                self._advance()
        if _is_ident_start(self._peek()):
            self._advance()
            raise parse_error("malformed number", self._span(start))
        return Token("NUMBER", self.text[start[0]:self.pos], self._span(start))

    def _string(self, start) -> Token:
        self._advance()
        out = []
        while True:
            c = self._peek()
            if c in ("", "\n"):
                raise parse_error("unterminated string", self._span(start))
            self._advance()
            if c == '"':
                return Token("STRING", "".join(out), self._span(start))
            if c == "\\" and self._peek() in ('"', "\\"):
                out.append(self._peek())
                self._advance()
            else:
                out.append(c)


def tokenize(text: str) -> list[Token]:
    return list(Lexer(text).tokens())
