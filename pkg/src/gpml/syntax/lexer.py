from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Union

from ..errors import LexError

KEYWORDS = frozenset("""
    MATCH WHERE TRAIL ACYCLIC SIMPLE ANY ALL SHORTEST GROUP SAME ALL_DIFFERENT IS
    DIRECTED SOURCE DESTINATION OF NULL AND OR NOT SUM COUNT AVG MIN MAX TRUE FALSE
""".split())

# Longest first: edge openers/closers are single tokens, so "-[" never lexes as
# "-" followed by "[". Write "- [" to follow an abbreviated edge with a bracket.
SYMBOLS = sorted("""
    <-[ <~[ -[ ~[ ]-> ]~> ]- ]~ <-> <- -> <~ ~> ~ - |+| | & ! % : , . ( ) [ ] { } ?
    * + / = <> <= >= < >
""".split(), key=len, reverse=True)

EDGE_OPENERS = frozenset({"<-[", "<~[", "-[", "~["})
EDGE_CLOSERS = frozenset({"]->", "]~>", "]-", "]~"})
EDGE_ABBREVIATIONS = frozenset({"<->", "<-", "->", "<~", "~>", "~", "-"})

_WS = re.compile(r"\s+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+(\.[0-9]+)?")


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD IDENT INT DECIMAL STRING SYMBOL EOF
    value: Union[str, int, Decimal]
    start: int
    end: int

    def is_(self, kind: str, value=None) -> bool:
        return self.kind == kind and (value is None or self.value == value)

    def __repr__(self) -> str:
        return f"{self.kind}({self.value!r})@{self.start}"


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; the list always ends with an EOF token."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        m = _WS.match(text, i)
        if m:
            i = m.end()
            continue
        c = text[i]
        if c == "'":
            j, buf = i + 1, []
            while True:
                if j >= n:
                    raise LexError(i, "unterminated string literal", text)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        buf.append("'")
                        j += 2
                        continue
                    break
                buf.append(text[j])
                j += 1
            tokens.append(Token("STRING", "".join(buf), i, j + 1))
            i = j + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            if word.upper() in KEYWORDS:
                tokens.append(Token("KEYWORD", word.upper(), i, m.end()))
            else:
                tokens.append(Token("IDENT", word, i, m.end()))
            i = m.end()
            continue
        m = _NUMBER.match(text, i)
        if m:
            lit = m.group()
            if m.group(1):
                tokens.append(Token("DECIMAL", Decimal(lit), i, m.end()))
            else:
                tokens.append(Token("INT", int(lit), i, m.end()))
            i = m.end()
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("SYMBOL", sym, i, i + len(sym)))
                i += len(sym)
                break
        else:
            raise LexError(i, f"illegal character {c!r}", text)
    tokens.append(Token("EOF", "", n, n))
    return tokens
