"""Lexer for the ``.vopt`` problem format."""
import re
from dataclasses import dataclass
from enum import Enum, auto
from typing import List

from domain.core.errors import ParseError


class TokenKind(Enum):
    NUMBER = auto()
    IDENT = auto()
    SYMBOL = auto()
    SEPARATOR = auto()
    EOF = auto()


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == TokenKind.EOF:
            return "end of input"
        if self.kind == TokenKind.SEPARATOR:
            return "end of line" if self.text == "\n" else "';'"
        return f"'{self.text}'"


TOKEN_PATTERN = re.compile(
    r"(?P<comment>\#[^\n]*)"
    r"|(?P<newline>\n)"
    r"|(?P<space>[ \t\r]+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<symbol>[\[\](),;+\-*/^=])"
)

OPENING = {"[": "]", "(": ")"}
CLOSING = {"]", ")"}


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens.

    Newlines become separators only outside brackets, so a section may span
    several lines inside ``[...]`` or ``(...)``.

    Raises:
        ParseError: on a character that starts no token
    """
    tokens: List[Token] = []
    line, line_start, depth = 1, 0, 0
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup
        value = match.group()
        if kind == "newline":
            if depth == 0:
                tokens.append(Token(TokenKind.SEPARATOR, "\n", line, column))
            line += 1
            line_start = match.end()
        elif kind == "number":
            tokens.append(Token(TokenKind.NUMBER, value, line, column))
        elif kind == "ident":
            tokens.append(Token(TokenKind.IDENT, value, line, column))
        elif kind == "symbol":
            if value == ";":
                tokens.append(Token(TokenKind.SEPARATOR, value, line, column))
            else:
                if value in OPENING:
                    depth += 1
                elif value in CLOSING:
                    depth = max(0, depth - 1)
                tokens.append(Token(TokenKind.SYMBOL, value, line, column))
        position = match.end()
    tokens.append(Token(TokenKind.EOF, "", line, len(text) - line_start + 1))
    return tokens
