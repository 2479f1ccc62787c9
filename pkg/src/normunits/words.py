"""Words over a finite generating set and a small parser for them.

A word is a tuple of nonzero ints: ``+(i+1)`` is generator ``i`` and
``-(i+1)`` its inverse.  The textual syntax is juxtaposition of generator
names, capitalised names for inverses, ``^n`` for positive powers,
parentheses, ``[x,y]`` for the commutator ``x^-1 y^-1 x y``, and ``1`` for
the empty word.  A relator may be written as an equation ``u = v``, which
is normalised to ``u v^-1``.
"""

from __future__ import annotations

import re
from typing import Sequence

from .errors import ParseError

Word = tuple[int, ...]


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    return inverse(u) + inverse(v) + tuple(u) + tuple(v)


def power(word: Sequence[int], n: int) -> Word:
    return tuple(word) * n


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    for x in word:
        name = names[abs(x) - 1]
        parts.append(name if x > 0 else name.upper())
    return "".join(parts)


class _Parser:
    def __init__(self, text: str, names: Sequence[str], line: int | None):
        self.names = list(names)
        self.line = line
        lookup = {}
        for i, name in enumerate(self.names):
            lookup[name] = i + 1
            lookup[name.upper()] = -(i + 1)
        if len(lookup) != 2 * len(self.names):
            raise ValueError(f"generator names clash with their inverses: {names}")
        self.lookup = lookup
        alts = sorted(lookup, key=len, reverse=True)
        self.token_re = re.compile(
            r"\s*(?:(?P<name>" + "|".join(map(re.escape, alts)) + r")"
            r"|(?P<int>\d+)|(?P<op>[\^\(\)\[\],=*]))"
        )
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens = []
        i = 0
        text = text.rstrip()
        while i < len(text):
            m = self.token_re.match(text, i)
            if m is None or m.end() == i:
                raise ParseError(f"unexpected character {text[i:].lstrip()[:1]!r}", self.line)
            kind = m.lastgroup
            tokens.append((kind, m.group(kind)))
            i = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'}, found {tok[1]!r}", self.line)
        self.pos += 1
        return tok

    def relator(self) -> Word:
        lhs = self.expr()
        if self.peek()[1] == "=":
            self.take("=")
            rhs = self.expr()
            lhs = lhs + inverse(rhs)
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input at {self.peek()[1]!r}", self.line)
        return lhs

    def expr(self) -> Word:
        out: Word = ()
        while True:
            kind, value = self.peek()
            if kind == "name" or value in ("(", "[") or (kind == "int" and value == "1"):
                out = out + self.factor()
            elif value == "*":
                self.take("*")
            else:
                return out

    def factor(self) -> Word:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            kind, value = self.take()
            if kind != "int":
                raise ParseError(f"exponent must be a positive integer, got {value!r}", self.line)
            n = int(value)
            if n < 1:
                raise ParseError("exponent must be positive", self.line)
            base = power(base, n)
        return base

    def atom(self) -> Word:
        kind, value = self.take()
        if kind == "name":
            return (self.lookup[value],)
        if kind == "int" and value == "1":
            return ()
        if value == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if value == "[":
            u = self.expr()
            self.take(",")
            v = self.expr()
            self.take("]")
            return commutator(u, v)
        raise ParseError(f"unexpected token {value!r}", self.line)


def parse_word(text: str, names: Sequence[str], line: int | None = None) -> Word:
    """Parse ``text`` as a relator (an equation is turned into ``lhs rhs^-1``)."""
    return _Parser(text, names, line).relator()
