"""Minimal Java lexer.

Produces a flat token stream with line numbers and source offsets: enough
structure for brace matching, declaration headers, and comment attachment.
This is deliberately not a full grammar; the extractor only needs lexical
shape (see extractor.py for the exclusions that make this viable).
"""

from __future__ import annotations

from dataclasses import dataclass

ID = "id"
NUM = "num"
STR = "str"
PUNCT = "punct"
LINE_COMMENT = "line_comment"
BLOCK_COMMENT = "block_comment"
DOC_COMMENT = "doc_comment"

COMMENT_KINDS = frozenset({LINE_COMMENT, BLOCK_COMMENT, DOC_COMMENT})

# Multi-char operators that must stay single tokens for structural parsing.
# '>>' is intentionally split so nested generics close one '>' at a time.
_MULTI = ("->", "...", "::")


class JavaLexError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int       # 1-based line of the first character
    end_line: int   # last line (differs for block comments / text blocks)
    start: int      # offset into the source
    end: int        # offset one past the last character

    @property
    def is_comment(self) -> bool:
        return self.kind in COMMENT_KINDS


def _is_id_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_id_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def lex(source: str) -> list[Token]:
    """Tokenize Java source; raises JavaLexError on unterminated literals."""
    tokens: list[Token] = []
    i = 0
    line = 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                j = source.find("\n", i)
                if j == -1:
                    j = n
                tokens.append(Token(LINE_COMMENT, source[i + 2:j], line, line, i, j))
                i = j
                continue
            if nxt == "*":
                j = source.find("*/", i + 2)
                if j == -1:
                    raise JavaLexError("unterminated block comment", line)
                body = source[i + 2:j]
                kind = DOC_COMMENT if body.startswith("*") and body != "*" else BLOCK_COMMENT
                end_line = line + source.count("\n", i, j + 2)
                tokens.append(Token(kind, body.lstrip("*"), line, end_line, i, j + 2))
                line = end_line
                i = j + 2
                continue
        if ch == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j == -1:
                    raise JavaLexError("unterminated text block", line)
                end = j + 3
                end_line = line + source.count("\n", i, end)
                tokens.append(Token(STR, source[i:end], line, end_line, i, end))
                line = end_line
                i = end
                continue
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == '"':
                    break
                if source[j] == "\n":
                    raise JavaLexError("unterminated string literal", line)
                j += 1
            else:
                raise JavaLexError("unterminated string literal", line)
            tokens.append(Token(STR, source[i:j + 1], line, line, i, j + 1))
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == "'":
                    break
                if source[j] == "\n":
                    raise JavaLexError("unterminated char literal", line)
                j += 1
            else:
                raise JavaLexError("unterminated char literal", line)
            tokens.append(Token(STR, source[i:j + 1], line, line, i, j + 1))
            i = j + 1
            continue
        if _is_id_start(ch):
            j = i + 1
            while j < n and _is_id_part(source[j]):
                j += 1
            tokens.append(Token(ID, source[i:j], line, line, i, j))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            # good enough for numeric literals incl. hex, underscores, suffixes
            while j < n and (source[j].isalnum() or source[j] in "._xXbBlLfFdDeE"):
                if source[j] == "." and not (j + 1 < n and (source[j + 1].isdigit() or source[j + 1] in "fFdDeE")):
                    break
                j += 1
            tokens.append(Token(NUM, source[i:j], line, line, i, j))
            i = j
            continue
        matched = False
        for op in _MULTI:
            if source.startswith(op, i):
                tokens.append(Token(PUNCT, op, line, line, i, i + len(op)))
                i += len(op)
                matched = True
                break
        if matched:
            continue
        tokens.append(Token(PUNCT, ch, line, line, i, i + 1))
        i += 1
    return tokens
