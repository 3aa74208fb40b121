"""
The nine-length bi-orthogonal monoclinic parallelepiped.

Edge x is orthogonal to both y and z; the (x, y) and (x, z) faces are
rectangles with diagonals a and b, the (y, z) face is a parallelogram with
diagonals c1 and c2, and the body diagonals are d1 (paired with c1) and d2
(paired with c2).
"""

from dataclasses import dataclass, astuple, fields
from typing import List, Sequence, Tuple

from core.errors import ZeroPipedError
from core.exactmath import gcd_many

FIELD_NAMES = ("x", "y", "z", "a", "b", "c1", "c2", "d1", "d2")

EQUATION_LABELS = (
    "x^2 + y^2 = a^2",
    "x^2 + z^2 = b^2",
    "x^2 + c1^2 = d1^2",
    "x^2 + c2^2 = d2^2",
    "2y^2 + 2z^2 = c1^2 + c2^2",
    "2y^2 + 2b^2 = d1^2 + d2^2",
    "2a^2 + 2z^2 = d1^2 + d2^2",
)


@dataclass(frozen=True)
class MonoclinicPiped:
    x: int
    y: int
    z: int
    a: int
    b: int
    c1: int
    c2: int
    d1: int
    d2: int

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise TypeError(f"{f.name} must be an int, got {type(value).__name__}")
            if value < 0:
                raise ValueError(f"{f.name} must be nonnegative, got {value}")

    @classmethod
    def from_sequence(cls, values: Sequence[int]) -> "MonoclinicPiped":
        if len(values) != 9:
            raise ValueError(f"a piped has nine lengths, got {len(values)}")
        return cls(*(int(v) for v in values))

    def as_tuple(self) -> Tuple[int, ...]:
        return astuple(self)

    def to_dict(self):
        return dict(zip(FIELD_NAMES, self.as_tuple()))

    def scaled(self, factor: int) -> "MonoclinicPiped":
        return MonoclinicPiped(*(v * factor for v in self.as_tuple()))

    def is_zero(self) -> bool:
        return not any(self.as_tuple())


@dataclass(frozen=True)
class EquationReport:
    """One boolean per defining equation, in the order of EQUATION_LABELS"""
    passes: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.passes) != 7:
            raise ValueError(f"an equation report has 7 entries, got {len(self.passes)}")

    @property
    def all_pass(self) -> bool:
        return all(self.passes)

    def failed_equations(self) -> List[int]:
        """1-based numbers of the equations that do not hold"""
        return [k for k, ok in enumerate(self.passes, 1) if not ok]


def verify_equations(p: MonoclinicPiped) -> EquationReport:
    """Check the seven defining equations exactly over the integers"""
    x2, y2, z2 = p.x * p.x, p.y * p.y, p.z * p.z
    a2, b2 = p.a * p.a, p.b * p.b
    c12, c22 = p.c1 * p.c1, p.c2 * p.c2
    d12, d22 = p.d1 * p.d1, p.d2 * p.d2
    return EquationReport((
        x2 + y2 == a2,
        x2 + z2 == b2,
        x2 + c12 == d12,
        x2 + c22 == d22,
        2 * y2 + 2 * z2 == c12 + c22,
        2 * y2 + 2 * b2 == d12 + d22,
        2 * a2 + 2 * z2 == d12 + d22,
    ))


def realizability_issues(p: MonoclinicPiped) -> List[str]:
    """Every reason the lengths fail to describe an actual solid; empty when they do"""
    issues = []
    failed = verify_equations(p).failed_equations()
    if failed:
        issues.append(f"equations {', '.join(f'Eq{k}' for k in failed)} fail")
    for name in ("x", "y", "z"):
        if getattr(p, name) <= 0:
            issues.append(f"edge {name} is not positive")
    if not (p.y - p.z) ** 2 < p.c1 * p.c1 < (p.y + p.z) ** 2:
        issues.append("c1 violates the parallelogram bound")
    if p.c1 == p.c2:
        issues.append("c1 == c2: rectangular cross-section")
    return issues


def is_realizable(p: MonoclinicPiped) -> bool:
    """
    True when the lengths describe an actual solid: all equations hold, the
    edges are positive, the (y, z) face is a genuine parallelogram and it is
    not a rectangle (c1 != c2).
    """
    return not realizability_issues(p)


def primitive_reduce(p: MonoclinicPiped) -> Tuple[MonoclinicPiped, int]:
    """Divide out the content; returns (primitive piped, content)"""
    content = gcd_many(p.as_tuple())
    if content == 0:
        raise ZeroPipedError()
    if content == 1:
        return p, 1
    return MonoclinicPiped(*(v // content for v in p.as_tuple())), content


def canonicalize(p: MonoclinicPiped) -> MonoclinicPiped:
    """
    Normal form under the two symmetries of the equations:
    (y, a) <-> (z, b) so that y <= z, and (c1, d1) <-> (c2, d2) so that c1 <= c2.
    Ties keep the original order.
    """
    x, y, z, a, b, c1, c2, d1, d2 = p.as_tuple()
    if y > z:
        y, a, z, b = z, b, y, a
    if c1 > c2:
        c1, d1, c2, d2 = c2, d2, c1, d1
    return MonoclinicPiped(x, y, z, a, b, c1, c2, d1, d2)


def is_primitive_canonical(p: MonoclinicPiped) -> bool:
    return gcd_many(p.as_tuple()) == 1 and canonicalize(p) == p
