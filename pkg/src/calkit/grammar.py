"""Text form for exact polynomials.

Grammar (whitespace insignificant)::

    poly     :=  [sign] term { sign term }
    term     :=  factor { "*" factor }
    factor   :=  rational | variable | msym , optionally followed by "^" integer
    rational :=  digits [ "/" digits ]
    variable :=  "x" index            (1-based: x1 .. xN)
    msym     :=  "m[" parts "]"       (monomial symmetric polynomial of a partition)

Examples: ``3/2*x1^2*x2 - x3``, ``m[2,1] + 4*m[1,1,1]``.
"""

from __future__ import annotations

from fractions import Fraction

from .exactcore import Poly, monomial_symmetric


class PolyParseError(ValueError):
    """Parse failure carrying the offending position (0-based)."""

    def __init__(self, position: int, expected: str):
        self.position = position
        self.expected = expected
        super().__init__(f"position {position}: expected {expected}")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, char: str) -> bool:
        if self.peek() == char:
            self.pos += 1
            return True
        return False

    def expect(self, char: str, what: str) -> None:
        if not self.take(char):
            raise PolyParseError(self.pos, what)

    def integer(self, what: str = "integer") -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise PolyParseError(start, what)
        return int(self.text[start: self.pos])

    def rational(self) -> Fraction:
        num = self.integer("number")
        if self.take("/"):
            den = self.integer("denominator")
            if den == 0:
                raise PolyParseError(self.pos, "nonzero denominator")
            return Fraction(num, den)
        return Fraction(num)


def parse_poly(text: str, num_vars: int) -> Poly:
    """Parse ``text`` into a polynomial in ``num_vars`` variables."""
    scanner = _Scanner(text)
    result = Poly.zero(num_vars)
    first = True
    while True:
        scanner.skip_ws()
        if scanner.pos >= len(scanner.text):
            if first:
                raise PolyParseError(scanner.pos, "a term")
            break
        if scanner.take("+"):
            sign = 1
        elif scanner.take("-"):
            sign = -1
        elif first:
            sign = 1
        else:
            raise PolyParseError(scanner.pos, "'+' or '-'")
        result = result + _parse_term(scanner, num_vars) * sign
        first = False
    return result


def _parse_term(scanner: _Scanner, num_vars: int) -> Poly:
    term = _parse_factor(scanner, num_vars)
    while scanner.take("*"):
        term = term * _parse_factor(scanner, num_vars)
    return term


def _parse_factor(scanner: _Scanner, num_vars: int) -> Poly:
    ch = scanner.peek()
    if ch.isdigit():
        base = Poly.const(num_vars, scanner.rational())
    elif ch == "x":
        scanner.pos += 1
        index = scanner.integer("variable index")
        if not 1 <= index <= num_vars:
            raise PolyParseError(scanner.pos, f"variable index between 1 and {num_vars}")
        base = Poly.variable(num_vars, index - 1)
    elif ch == "m":
        scanner.pos += 1
        scanner.expect("[", "'[' after m")
        parts = [scanner.integer("partition part")]
        while scanner.take(","):
            parts.append(scanner.integer("partition part"))
        scanner.expect("]", "']' closing the partition")
        if len([q for q in parts if q]) > num_vars:
            raise PolyParseError(scanner.pos, f"at most {num_vars} partition parts")
        base = monomial_symmetric(num_vars, parts)
    else:
        raise PolyParseError(scanner.pos, "a number, variable, or m[...]")
    if scanner.take("^"):
        base = base ** scanner.integer("exponent")
    return base


def format_scalar(value: Fraction) -> str:
    """Exact rational as ``p`` or ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def poly_to_text(p: Poly) -> str:
    """Canonical text form, terms in descending graded-lex order."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for exps, coeff in p.sorted_terms():
        factors = [f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(exps) if e]
        magnitude = abs(coeff)
        if magnitude != 1 or not factors:
            factors.insert(0, format_scalar(magnitude))
        body = "*".join(factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
