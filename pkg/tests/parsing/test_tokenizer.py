"""Tests for the .vopt lexer."""
import pytest

from domain.core.errors import ParseError
from domain.parsing.tokenizer import TokenKind, tokenize


class TestTokenize:
    """Tests for tokenize()."""

    def test_kinds_and_positions(self):
        tokens = tokenize("vars x\nobjective [x^2]")

        assert [t.kind for t in tokens[:3]] == [TokenKind.IDENT, TokenKind.IDENT, TokenKind.SEPARATOR]
        assert (tokens[3].text, tokens[3].line, tokens[3].column) == ("objective", 2, 1)
        assert tokens[-1].kind == TokenKind.EOF

    def test_newline_inside_brackets_is_not_a_separator(self):
        tokens = tokenize("objective [x,\n y]")

        assert TokenKind.SEPARATOR not in [t.kind for t in tokens]
        assert tokens[-2].line == 2

    def test_comments_are_skipped(self):
        tokens = tokenize("# header\nvars x # trailing")

        assert [t.text for t in tokens if t.kind == TokenKind.IDENT] == ["vars", "x"]

    def test_semicolon_is_a_separator(self):
        assert tokenize("vars x; coneC")[2].kind == TokenKind.SEPARATOR

    def test_scientific_numbers(self):
        numbers = [t.text for t in tokenize("1e-9, .5, 2.5E+3, 7.") if t.kind == TokenKind.NUMBER]

        assert numbers == ["1e-9", ".5", "2.5E+3", "7."]

    def test_unexpected_character_has_position(self):
        with pytest.raises(ParseError) as error:
            tokenize("vars x\nobjective [x $ 1]")

        assert (error.value.line, error.value.column) == (2, 14)
