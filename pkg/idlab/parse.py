"""
Polynomial input grammar for the command line.

    expr        := ['+'|'-'] term (('+'|'-') term)*
    term        := coefficient ('*'? monomial)? | monomial
    monomial    := power ('*'? power)*
    power       := name ('^' int)?
    coefficient := int ('/' positive-int)?

Whitespace is ignored; the Unicode minus sign is read as '-'.
"""

import re
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction

from idlab.errors import PolySyntaxError, UnknownVariable
from idlab.exact import MultiPoly


class Token(Enum):
    NUMBER = auto()
    NAME = auto()
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()
    CARET = auto()
    END = auto()


TOKEN_PATTERN = re.compile(
    r'(?P<NUMBER>\d+)|(?P<NAME>[A-Za-z_]\w*)|(?P<PLUS>\+)|(?P<MINUS>[-−])|(?P<STAR>\*)|(?P<SLASH>/)|(?P<CARET>\^)')
SPACE = re.compile(r'\s*')


@dataclass(frozen=True)
class Lexeme:
    kind: Token
    text: str
    position: int


def tokenize(text) -> list[Lexeme]:
    tokens = []
    pos = SPACE.match(text).end()
    while pos < len(text):
        m = TOKEN_PATTERN.match(text, pos)
        if m is None:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append(Lexeme(Token[m.lastgroup], m.group(), pos))
        pos = SPACE.match(text, m.end()).end()
    tokens.append(Lexeme(Token.END, '', len(text)))
    return tokens


@dataclass(frozen=True)
class PolyExpr:
    source: str
    poly: MultiPoly

    def render(self) -> str:
        return self.poly.render()


class PolyParser:
    """Recursive descent over the token list; one parser per input text."""

    def __init__(self, text, variables):
        self.text = text
        self.variables = tuple(variables)
        self.gens = dict(zip(self.variables, MultiPoly.gens(self.variables)))
        self.tokens = tokenize(text)
        self.index = 0

    def __repr__(self):
        return f"PolyParser({self.text!r}, variables={self.variables})"

    def peek(self, offset=0) -> Lexeme:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Lexeme:
        token = self.peek()
        self.index += 1
        return token

    def expect(self, kind, what) -> Lexeme:
        token = self.peek()
        if token.kind is not kind:
            found = 'end of input' if token.kind is Token.END else repr(token.text)
            raise PolySyntaxError(f"expected {what}, found {found}", token.position)
        return self.advance()

    def parse(self) -> MultiPoly:
        if self.peek().kind is Token.END:
            raise PolySyntaxError("empty polynomial", 0)
        negate = False
        if self.peek().kind in (Token.PLUS, Token.MINUS):
            negate = self.advance().kind is Token.MINUS
        total = self.term()
        if negate:
            total = -total
        while self.peek().kind in (Token.PLUS, Token.MINUS):
            op = self.advance()
            term = self.term()
            total = total - term if op.kind is Token.MINUS else total + term
        self.expect(Token.END, "'+', '-' or end of input")
        return total

    def term(self) -> MultiPoly:
        token = self.peek()
        match token.kind:
            case Token.NUMBER:
                coefficient = self.coefficient()
                if self.peek().kind is Token.STAR:
                    self.advance()
                    return coefficient * self.monomial()
                if self.peek().kind is Token.NAME:
                    return coefficient * self.monomial()
                return MultiPoly.constant(coefficient, self.variables)
            case Token.NAME:
                return self.monomial()
        raise PolySyntaxError("expected a coefficient or a variable", token.position)

    def coefficient(self) -> Fraction:
        numerator = int(self.advance().text)
        if self.peek().kind is not Token.SLASH:
            return Fraction(numerator)
        self.advance()
        token = self.expect(Token.NUMBER, 'a denominator')
        if int(token.text) == 0:
            raise PolySyntaxError("zero denominator", token.position)
        return Fraction(numerator, int(token.text))

    def monomial(self) -> MultiPoly:
        result = self.power()
        while True:
            if self.peek().kind is Token.STAR and self.peek(1).kind is Token.NAME:
                self.advance()
            elif self.peek().kind is not Token.NAME:
                return result
            result = result * self.power()

    def power(self) -> MultiPoly:
        token = self.expect(Token.NAME, 'a variable')
        if token.text not in self.gens:
            raise UnknownVariable(f"unknown variable {token.text!r} at offset {token.position}; "
                                  f"declared: {', '.join(self.variables)}")
        base = self.gens[token.text]
        if self.peek().kind is not Token.CARET:
            return base
        self.advance()
        return base ** int(self.expect(Token.NUMBER, 'an exponent').text)


def parse_poly(text, variables=('z',)) -> PolyExpr:
    """Parse `text` as a polynomial over the declared `variables`."""
    return PolyExpr(text, PolyParser(text, variables).parse())
