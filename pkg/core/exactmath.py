"""
Exact integer, rational and polynomial arithmetic.

Python ints carry the arbitrary-precision integers and fractions.Fraction the
normalized rationals; this module adds the sparse bivariate polynomials in
(m, n), the small univariate quartics of the range tests, and the integer
helpers the search oracle needs. Nothing in here ever rounds.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import FormulaSyntaxError

Exponent = Tuple[int, int]
IntLike = Union[int, "BivariatePoly"]


# ============================================================================
# Bivariate polynomials in (m, n)
# ============================================================================

class BivariatePoly:
    """
    Sparse integer polynomial sum(c_ij * m^i * n^j).

    The coefficient map never stores zeros, so equality of polynomials is
    plain equality of the maps. Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None):
        clean: Dict[Exponent, int] = {}
        for (i, j), coefficient in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            if coefficient:
                clean[(int(i), int(j))] = int(coefficient)
        self._terms = clean

    @classmethod
    def constant(cls, value: int) -> "BivariatePoly":
        return cls({(0, 0): value})

    @classmethod
    def var_m(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def var_n(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Highest i + j over the stored terms; -1 for the zero polynomial"""
        return max((i + j for i, j in self._terms), default=-1)

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degrees = {i + j for i, j in self._terms}
        if degree is None:
            return len(degrees) <= 1
        return degrees <= {degree}

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: IntLike) -> "BivariatePoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "BivariatePoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_sub(self, other)

    def __rsub__(self, other: IntLike) -> "BivariatePoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_sub(other, self)

    def __neg__(self) -> "BivariatePoly":
        return poly_neg(self)

    def __mul__(self, other: IntLike) -> "BivariatePoly":
        if isinstance(other, int):
            return poly_scale(self, other)
        if isinstance(other, BivariatePoly):
            return poly_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivariatePoly":
        return poly_pow(self, exponent)

    def __call__(self, m: int, n: int) -> int:
        return poly_eval(self, m, n)

    # -- comparison and display --------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BivariatePoly.constant(other)
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"BivariatePoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # printed order: ascending power of m, as in "n^2+2mn+2m^2"
        ordered = sorted(self._terms.items(), key=lambda item: (item[0][0], -item[0][1]))
        pieces = []
        for index, ((i, j), coefficient) in enumerate(ordered):
            monomial = _monomial_text("m", i) + _monomial_text("n", j)
            magnitude = abs(coefficient)
            body = str(magnitude) if (magnitude != 1 or not monomial) else ""
            body += monomial
            if coefficient < 0:
                pieces.append(f"-{body}")
            else:
                pieces.append(body if index == 0 else f"+{body}")
        return "".join(pieces)


def _monomial_text(symbol: str, power: int) -> str:
    if power == 0:
        return ""
    if power == 1:
        return symbol
    return f"{symbol}^{power}"


def _coerce(value):
    if isinstance(value, BivariatePoly):
        return value
    if isinstance(value, int):
        return BivariatePoly.constant(value)
    return NotImplemented


def poly_add(p: BivariatePoly, q: BivariatePoly) -> BivariatePoly:
    """Coefficient-wise sum; cancelled terms are dropped"""
    result = dict(p._terms)
    for key, coefficient in q._terms.items():
        result[key] = result.get(key, 0) + coefficient
    return BivariatePoly(result)


def poly_neg(p: BivariatePoly) -> BivariatePoly:
    return BivariatePoly({key: -c for key, c in p._terms.items()})


def poly_sub(p: BivariatePoly, q: BivariatePoly) -> BivariatePoly:
    return poly_add(p, poly_neg(q))


def poly_scale(p: BivariatePoly, factor: int) -> BivariatePoly:
    return BivariatePoly({key: c * factor for key, c in p._terms.items()})


def poly_mul(p: BivariatePoly, q: BivariatePoly) -> BivariatePoly:
    """Exact convolution of the two coefficient maps"""
    result: Dict[Exponent, int] = {}
    for (i1, j1), c1 in p._terms.items():
        for (i2, j2), c2 in q._terms.items():
            key = (i1 + i2, j1 + j2)
            result[key] = result.get(key, 0) + c1 * c2
    return BivariatePoly(result)


def poly_pow(p: BivariatePoly, exponent: int) -> BivariatePoly:
    if exponent < 0:
        raise ValueError("negative exponent")
    result = BivariatePoly.constant(1)
    for _ in range(exponent):
        result = poly_mul(result, p)
    return result


def poly_product(factors: Iterable[BivariatePoly]) -> BivariatePoly:
    result = BivariatePoly.constant(1)
    for factor in factors:
        result = poly_mul(result, factor)
    return result


def poly_eval(p: BivariatePoly, m: int, n: int) -> int:
    """Exact value of p at the integer point (m, n)"""
    if not p._terms:
        return 0
    top_i = max(i for i, _ in p._terms)
    top_j = max(j for _, j in p._terms)
    m_powers = [1]
    for _ in range(top_i):
        m_powers.append(m_powers[-1] * m)
    n_powers = [1]
    for _ in range(top_j):
        n_powers.append(n_powers[-1] * n)
    return sum(c * m_powers[i] * n_powers[j] for (i, j), c in p._terms.items())


# ============================================================================
# Formula parsing: the printed notation "4(n^2+2mn+2m^2)^3", "16mn(n+m)"
# ============================================================================

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[mn])|(?P<op>[()+\-^]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    stripped_end = len(text.rstrip())
    while position < stripped_end:
        match = _TOKEN.match(text, position)
        if not match or match.end() == position:
            raise FormulaSyntaxError(text, position, "unexpected character")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


class _FormulaParser:
    """
    Recursive descent over
        expr  := [+|-] term ((+|-) term)*
        term  := power power*
        power := atom [^ INT]
        atom  := INT | m | n | ( expr )
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def _take(self) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise FormulaSyntaxError(self.text, len(self.text), "unexpected end of formula")
        self.index += 1
        return token

    def _starts_atom(self) -> bool:
        token = self._peek()
        return token is not None and (token[0] in ("int", "var") or token[1] == "(")

    def expect_end(self):
        if self._peek() is not None:
            raise FormulaSyntaxError(self.text, self._position(), "trailing input")

    def expr(self) -> BivariatePoly:
        sign = 1
        token = self._peek()
        if token is not None and token[1] in "+-" and token[0] == "op":
            self._take()
            sign = -1 if token[1] == "-" else 1
        result = poly_scale(poly_product(self.term()), sign)
        while True:
            token = self._peek()
            if token is None or token[1] not in ("+", "-"):
                return result
            self._take()
            value = poly_product(self.term())
            result = result + value if token[1] == "+" else result - value

    def term(self) -> List[BivariatePoly]:
        """The multiplicands of one product, powers already expanded"""
        if not self._starts_atom():
            raise FormulaSyntaxError(self.text, self._position(), "expected a factor")
        factors: List[BivariatePoly] = []
        while self._starts_atom():
            atom = self.atom()
            exponent = 1
            token = self._peek()
            if token is not None and token[1] == "^":
                self._take()
                kind, value, position = self._take()
                if kind != "int":
                    raise FormulaSyntaxError(self.text, position, "exponent must be an integer")
                exponent = int(value)
            factors.extend([atom] * exponent if exponent else [BivariatePoly.constant(1)])
        return factors

    def atom(self) -> BivariatePoly:
        kind, value, position = self._take()
        if kind == "int":
            return BivariatePoly.constant(int(value))
        if kind == "var":
            return BivariatePoly.var_m() if value == "m" else BivariatePoly.var_n()
        if value == "(":
            inner = self.expr()
            closing = self._peek()
            if closing is None or closing[1] != ")":
                raise FormulaSyntaxError(self.text, self._position(), "missing ')'")
            self._take()
            return inner
        raise FormulaSyntaxError(self.text, position, f"unexpected {value!r}")


def parse_poly(text: str) -> BivariatePoly:
    """Parse a formula in the printed notation into its expanded polynomial"""
    parser = _FormulaParser(text)
    result = parser.expr()
    parser.expect_end()
    return result


def parse_factors(text: str) -> Tuple[int, List[BivariatePoly]]:
    """
    Split a printed product such as "16mn(n+m)(n+2m)(n^2+2mn+2m^2)" into its
    leading integer constant and the list of non-constant factors.
    """
    parser = _FormulaParser(text)
    multiplicands = parser.term()
    parser.expect_end()
    constant = 1
    factors = []
    for factor in multiplicands:
        if factor.total_degree() <= 0:
            constant *= factor.terms.get((0, 0), 0)
        else:
            factors.append(factor)
    return constant, factors


# ============================================================================
# Univariate polynomials (the range quartics)
# ============================================================================

@dataclass(frozen=True)
class UnivariatePoly:
    """q(t) = sum(c_k t^k); coefficients stored lowest degree first"""

    coefficients: Tuple[int, ...]

    @classmethod
    def from_descending(cls, *coefficients: int) -> "UnivariatePoly":
        """Build from the printed order, e.g. (12, 24, 16, 4, -3)"""
        return cls(tuple(int(c) for c in reversed(coefficients)))

    @property
    def degree(self) -> int:
        for k in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[k]:
                return k
        return -1

    def evaluate(self, t: Fraction) -> Fraction:
        result = Fraction(0)
        for coefficient in reversed(self.coefficients):
            result = result * t + coefficient
        return result

    def sign_at(self, t: Fraction) -> int:
        return quartic_sign_at(self, t)

    def reflect(self) -> "UnivariatePoly":
        """q(-t)"""
        return UnivariatePoly(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coefficients)))

    def half_reciprocal(self) -> "UnivariatePoly":
        """
        Primitive numerator of q(1/(2t)) * (2t)^d.
        Its positive roots are 1/(2s) for the positive roots s of q; for even d
        the sign at every t != 0 matches the sign of q at 1/(2t).
        """
        d = self.degree
        flipped = [0] * (d + 1)
        for k in range(d + 1):
            flipped[d - k] = self.coefficients[k] * 2 ** (d - k)
        return UnivariatePoly(tuple(flipped)).primitive()

    def primitive(self) -> "UnivariatePoly":
        content = gcd_many(self.coefficients)
        if content in (0, 1):
            return self
        return UnivariatePoly(tuple(c // content for c in self.coefficients))

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly(tuple(k * c for k, c in enumerate(self.coefficients))[1:] or (0,))

    def __str__(self) -> str:
        return self.render("t")

    def render(self, symbol: str = "t") -> str:
        pieces = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            coefficient = self.coefficients[k]
            if not coefficient:
                continue
            power = "" if k == 0 else (symbol if k == 1 else f"{symbol}^{k}")
            magnitude = abs(coefficient)
            body = (str(magnitude) if (magnitude != 1 or not power) else "") + power
            if coefficient < 0:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"+{body}" if pieces else body)
        return "".join(pieces) or "0"


def quartic_sign_at(q: UnivariatePoly, t: Fraction) -> int:
    """
    Sign of q(t) without leaving the integers: with t = p/s in lowest terms,
    sign(q(t)) = sign(sum c_k p^k s^(d-k)) because s^d > 0.
    """
    t = Fraction(t)
    numerator, denominator = t.numerator, t.denominator
    d = len(q.coefficients) - 1
    total = 0
    numerator_power = 1
    for k, coefficient in enumerate(q.coefficients):
        total += coefficient * numerator_power * denominator ** (d - k)
        numerator_power *= numerator
    return (total > 0) - (total < 0)


# -- Sturm chains over the rationals --------------------------------------

def _trim(coefficients: List[Fraction]) -> List[Fraction]:
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    return coefficients


def _remainder(dividend: List[Fraction], divisor: List[Fraction]) -> List[Fraction]:
    remainder = list(dividend)
    lead = divisor[-1]
    shift = len(remainder) - len(divisor)
    while shift >= 0 and remainder:
        factor = remainder[-1] / lead
        for k, coefficient in enumerate(divisor):
            remainder[k + shift] -= factor * coefficient
        remainder.pop()
        _trim(remainder)
        shift = len(remainder) - len(divisor)
    return remainder


def _evaluate_fractions(coefficients: Sequence[Fraction], t: Fraction) -> Fraction:
    result = Fraction(0)
    for coefficient in reversed(coefficients):
        result = result * t + coefficient
    return result


def sturm_chain(q: UnivariatePoly) -> List[List[Fraction]]:
    first = _trim([Fraction(c) for c in q.coefficients])
    chain = [first]
    if len(first) <= 1:
        return chain
    second = _trim([Fraction(c) for c in q.derivative().coefficients])
    while second:
        chain.append(second)
        second = _trim([-c for c in _remainder(chain[-2], chain[-1])])
    return chain


def _sign_variations(chain: List[List[Fraction]], t: Fraction) -> int:
    values = [_evaluate_fractions(p, t) for p in chain]
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(q: UnivariatePoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of q in the half-open interval (lo, hi]"""
    chain = sturm_chain(q)
    return _sign_variations(chain, Fraction(lo)) - _sign_variations(chain, Fraction(hi))


def bisect_root(q: UnivariatePoly, lo: Fraction, hi: Fraction,
                tolerance: Fraction) -> Tuple[Fraction, Fraction]:
    """
    Shrink a sign-change bracket [lo, hi] of q to width <= tolerance by exact
    rational bisection. Returns the final bracket (lo == hi on an exact hit).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    sign_lo = quartic_sign_at(q, lo)
    sign_hi = quartic_sign_at(q, hi)
    if sign_lo == 0:
        return lo, lo
    if sign_hi == 0:
        return hi, hi
    if sign_lo == sign_hi:
        raise ValueError(f"no sign change of {q} on [{lo}, {hi}]")
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        sign_mid = quartic_sign_at(q, mid)
        if sign_mid == 0:
            return mid, mid
        if sign_mid == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ============================================================================
# Integer helpers
# ============================================================================

def gcd_many(values: Iterable[int]) -> int:
    """Nonnegative gcd of all inputs; 0 for an empty or all-zero input"""
    return math.gcd(*(int(v) for v in values))


def exact_sqrt(value: int) -> Optional[int]:
    """The integer square root when value is a perfect square, else None"""
    if value < 0:
        return None
    root = math.isqrt(value)
    return root if root * root == value else None


def is_square(value: int) -> bool:
    return exact_sqrt(value) is not None


def factorize(value: int) -> Dict[int, int]:
    """Trial-division factorization; intended for the oracle's edge sizes"""
    if value < 1:
        raise ValueError("factorize expects a positive integer")
    factors: Dict[int, int] = {}
    remaining = value
    divisor = 2
    while divisor * divisor <= remaining:
        while remaining % divisor == 0:
            factors[divisor] = factors.get(divisor, 0) + 1
            remaining //= divisor
        divisor += 1 if divisor == 2 else 2
    if remaining > 1:
        factors[remaining] = factors.get(remaining, 0) + 1
    return factors


def divisors_of_square(value: int) -> List[int]:
    """Sorted divisors of value^2, built from the factorization of value"""
    divisors = [1]
    for prime, exponent in factorize(value).items():
        divisors = [d * prime ** k for d in divisors for k in range(2 * exponent + 1)]
    return sorted(divisors)
