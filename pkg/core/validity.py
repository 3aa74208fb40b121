"""
Validity ranges for m/n.

Each family is valid on a union of open intervals whose endpoints are
rationals, infinities, or real roots of quartics. A quartic root is handled
as a bracketed root: a rational bracket of half-width 10^-6 around the
printed decimal, containing exactly one root. Membership is decided by exact
comparison outside the bracket and by the sign of the quartic inside it; no
floating point is involved. The printed decimals only anchor the brackets and
are cross-checked by self_check.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Tuple

from core.errors import SelfCheckError, UndefinedRatioError
from core.exactmath import (
    UnivariatePoly,
    bisect_root,
    poly_eval,
    quartic_sign_at,
    sturm_count,
)
from core.families import FamilyId, linear_factors

logger = logging.getLogger(__name__)

BRACKET_HALF_WIDTH = Fraction(1, 10 ** 6)
BISECTION_TOLERANCE = Fraction(1, 10 ** 10)
AGREEMENT_TOLERANCE = Fraction(1, 10 ** 9)


class BoundKind(str, Enum):
    RATIONAL = "rational"
    QUARTIC_ROOT = "quartic_root"
    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"


class RootTransform(str, Enum):
    """How the bound's quartic is obtained from the printed radicand"""
    IDENTITY = "identity"
    REFLECTED = "reflected"                # root of radicand(-t)
    HALF_RECIPROCAL = "half_reciprocal"    # t = 1/(2s), s a root of the radicand

    def apply(self, radicand: UnivariatePoly) -> UnivariatePoly:
        if self is RootTransform.REFLECTED:
            return radicand.reflect()
        if self is RootTransform.HALF_RECIPROCAL:
            return radicand.half_reciprocal()
        return radicand


class Classification(str, Enum):
    VALID = "Valid"
    OUT_OF_RANGE = "OutOfRange"
    DEGENERATE_PARAMETER = "DegenerateParameter"
    UNDEFINED_RATIO = "UndefinedRatio"


@dataclass(frozen=True)
class RangeBound:
    kind: BoundKind
    value: Optional[Fraction] = None
    label: str = ""
    radicand: Optional[UnivariatePoly] = None
    transform: RootTransform = RootTransform.IDENTITY
    approx: str = ""
    inside_sign: int = 0

    @classmethod
    def rational(cls, value) -> "RangeBound":
        return cls(kind=BoundKind.RATIONAL, value=Fraction(value))

    @classmethod
    def quartic_root(cls, label: str, radicand: UnivariatePoly, approx: str,
                     inside_sign: int,
                     transform: RootTransform = RootTransform.IDENTITY) -> "RangeBound":
        return cls(kind=BoundKind.QUARTIC_ROOT, label=label, radicand=radicand,
                   transform=transform, approx=approx, inside_sign=inside_sign)

    @property
    def quartic(self) -> UnivariatePoly:
        """The quartic whose real root this bound is"""
        return self.transform.apply(self.radicand)

    @property
    def anchor(self) -> Fraction:
        return Fraction(Decimal(self.approx))

    @property
    def bracket(self) -> Tuple[Fraction, Fraction]:
        anchor = self.anchor
        return anchor - BRACKET_HALF_WIDTH, anchor + BRACKET_HALF_WIDTH

    def describe(self) -> str:
        if self.kind is BoundKind.RATIONAL:
            return str(self.value)
        if self.kind is BoundKind.PLUS_INFINITY:
            return "+inf"
        if self.kind is BoundKind.MINUS_INFINITY:
            return "-inf"
        return f"{self.label}~{self.approx}"


PLUS_INFINITY = RangeBound(kind=BoundKind.PLUS_INFINITY)
MINUS_INFINITY = RangeBound(kind=BoundKind.MINUS_INFINITY)


def _exceeds_lower(t: Fraction, bound: RangeBound) -> bool:
    """t > bound"""
    if bound.kind is BoundKind.MINUS_INFINITY:
        return True
    if bound.kind is BoundKind.PLUS_INFINITY:
        return False
    if bound.kind is BoundKind.RATIONAL:
        return t > bound.value
    lo, hi = bound.bracket
    if t <= lo:
        return False
    if t >= hi:
        return True
    return quartic_sign_at(bound.quartic, t) == bound.inside_sign


def _below_upper(t: Fraction, bound: RangeBound) -> bool:
    """t < bound"""
    if bound.kind is BoundKind.PLUS_INFINITY:
        return True
    if bound.kind is BoundKind.MINUS_INFINITY:
        return False
    if bound.kind is BoundKind.RATIONAL:
        return t < bound.value
    lo, hi = bound.bracket
    if t >= hi:
        return False
    if t <= lo:
        return True
    return quartic_sign_at(bound.quartic, t) == bound.inside_sign


@dataclass(frozen=True)
class RangeInterval:
    """Open interval (lower, upper) with a rational witness strictly inside"""
    lower: RangeBound
    upper: RangeBound
    witness: Fraction

    def contains(self, t: Fraction) -> bool:
        return _exceeds_lower(t, self.lower) and _below_upper(t, self.upper)

    def describe(self) -> str:
        return f"({self.lower.describe()}, {self.upper.describe()})"


@dataclass(frozen=True)
class RangeSpec:
    family_id: FamilyId
    intervals: Tuple[RangeInterval, ...] = field(default_factory=tuple)

    def contains(self, t: Fraction) -> bool:
        return any(interval.contains(t) for interval in self.intervals)

    def quartic_bounds(self) -> List[Tuple[RangeBound, RangeInterval, str]]:
        """(bound, adjacent interval, side) for every quartic-root endpoint"""
        found = []
        for interval in self.intervals:
            if interval.lower.kind is BoundKind.QUARTIC_ROOT:
                found.append((interval.lower, interval, "lower"))
            if interval.upper.kind is BoundKind.QUARTIC_ROOT:
                found.append((interval.upper, interval, "upper"))
        return found

    def rational_endpoints(self) -> List[Fraction]:
        points = set()
        for interval in self.intervals:
            for bound in (interval.lower, interval.upper):
                if bound.kind is BoundKind.RATIONAL:
                    points.add(bound.value)
        return sorted(points)


# ============================================================================
# Transcribed ranges
# ============================================================================

_Q = UnivariatePoly.from_descending
_R = RangeBound.rational
_root = RangeBound.quartic_root

# P1 r1 radicand, reused for r2 = 1/(2 r1)
_P1_R1_RADICAND = _Q(12, 24, 16, 4, -3)

RANGE_TABLE: Dict[FamilyId, RangeSpec] = {
    FamilyId.P1: RangeSpec(FamilyId.P1, (
        RangeInterval(_R(-1), _root("r4", _Q(52, 104, 80, 28, 3), "-0.81999264776", +1),
                      Fraction(-9, 10)),
        RangeInterval(_root("r3", _Q(12, 56, 80, 52, 13), "-0.60976156477", +1), _R(Fraction(-1, 2)),
                      Fraction(-11, 20)),
        RangeInterval(_R(0), _root("r1", _P1_R1_RADICAND, "0.28126795021", -1),
                      Fraction(1, 4)),
        RangeInterval(_root("r2", _P1_R1_RADICAND, "1.77766432195", -1,
                            RootTransform.HALF_RECIPROCAL), PLUS_INFINITY,
                      Fraction(2)),
    )),
    FamilyId.P2: RangeSpec(FamilyId.P2, (
        RangeInterval(_R(Fraction(-3, 2)),
                      _root("r3", _Q(208, 832, 1256, 848, 213), "-1.31999264776", +1),
                      Fraction(-7, 5)),
        RangeInterval(_R(Fraction(-1, 2)),
                      _root("r2", _Q(48, 192, 280, 176, 27), "-0.21873204978", -1),
                      Fraction(-3, 10)),
        RangeInterval(_root("r1", _Q(48, 64, -40, -112, -53), "1.27766432195", +1), PLUS_INFINITY,
                      Fraction(2)),
    )),
    FamilyId.P3: RangeSpec(FamilyId.P3, (
        RangeInterval(_R(Fraction(-5, 4)), _R(Fraction(-3, 4)), Fraction(-1)),
        RangeInterval(_R(Fraction(-1, 4)), _R(0), Fraction(-1, 8)),
        RangeInterval(_R(0), _root("r1", _Q(768, 2304, 2464, 1104, -37), "0.0312679502117", -1),
                      Fraction(1, 64)),
        RangeInterval(_root("r2", _Q(768, 256, -1120, -1328, -453), "1.52766432195", +1),
                      PLUS_INFINITY, Fraction(2)),
    )),
    FamilyId.P4: RangeSpec(FamilyId.P4, (
        RangeInterval(_R(Fraction(-4, 3)),
                      _root("r4", _Q(4212, 14040, 17712, 10020, 2083), "-1.15332598109", +1),
                      Fraction(-6, 5)),
        RangeInterval(_root("r3", _Q(108, 648, 1296, 1132, 373), "-0.94309489810", +1),
                      _R(Fraction(-5, 6)), Fraction(-9, 10)),
        # printed radicand vanishes at +0.0520...; the bound is its mirror image
        RangeInterval(_R(Fraction(-1, 3)),
                      _root("r2", _Q(324, -1080, 1296, -660, 31), "-0.052065383121", -1,
                            RootTransform.REFLECTED),
                      Fraction(-1, 10)),
        RangeInterval(_root("r1", _Q(324, 216, -432, -636, -241), "1.44433098861", +1),
                      PLUS_INFINITY, Fraction(2)),
    )),
}


def range_spec(family_id) -> RangeSpec:
    return RANGE_TABLE[FamilyId.parse(family_id)]


def contains_ratio(family_id, t: Fraction) -> bool:
    return range_spec(family_id).contains(Fraction(t))


def contains(family_id, m: int, n: int) -> bool:
    """Whether m/n lies in one of the family's open validity intervals"""
    if n == 0:
        raise UndefinedRatioError(m)
    return range_spec(family_id).contains(Fraction(m, n))


def is_degenerate(family_id, m: int, n: int) -> bool:
    """Some linear factor of the family's Z vanishes at (m, n)"""
    if m == 0 and n == 0:
        return True
    return any(poly_eval(f, m, n) == 0 for f in linear_factors(family_id, "Z"))


def classify(family_id, m: int, n: int) -> Classification:
    if n == 0:
        return Classification.UNDEFINED_RATIO
    if is_degenerate(family_id, m, n):
        return Classification.DEGENERATE_PARAMETER
    if contains(family_id, m, n):
        return Classification.VALID
    return Classification.OUT_OF_RANGE


# ============================================================================
# Realizability locus
# ============================================================================

# Family F at m/n = t gives the P1 shape at t + shift (P2(m, n) is P1(2m + n, 2n) up to scale, ...)
P1_SHIFT: Dict[FamilyId, Fraction] = {
    FamilyId.P1: Fraction(0),
    FamilyId.P2: Fraction(1, 2),
    FamilyId.P3: Fraction(1, 4),
    FamilyId.P4: Fraction(1, 3),
}


def p1_ratio(family_id, t: Fraction) -> Fraction:
    return Fraction(t) + P1_SHIFT[FamilyId.parse(family_id)]


def p1_mirror(s: Fraction) -> Fraction:
    """P1 at s and at -1 - s give the same shape, with (c1, d1) and (c2, d2) exchanged"""
    return -1 - Fraction(s)


def realizable_ratio(family_id, t: Fraction) -> bool:
    """
    Exact test of whether the family's piped at m/n = t is realizable.

    The printed P1 ranges hold one of each mirror pair s, -1 - s, so a ratio
    is realizable exactly when its P1 ratio or that ratio's mirror is in range.
    The printed ranges of the other families are subsets of this locus except
    for P3, whose (-5/4, -3/4) also spans the P1 gap (r4, r3) shifted by -1/4.
    """
    s = p1_ratio(family_id, t)
    return contains_ratio(FamilyId.P1, s) or contains_ratio(FamilyId.P1, p1_mirror(s))


# ============================================================================
# Self check of the quartic brackets
# ============================================================================

@dataclass
class BoundCheck:
    bound: str
    side: str
    approx: str
    bracket_sign_change: bool = False
    roots_in_bracket: int = 0
    witness_sign_ok: bool = False
    refined_root: Optional[Fraction] = None
    agrees_with_decimal: bool = False

    @property
    def passed(self) -> bool:
        return (self.bracket_sign_change and self.roots_in_bracket == 1
                and self.witness_sign_ok and self.agrees_with_decimal)

    def to_dict(self):
        return {
            'bound': self.bound,
            'side': self.side,
            'approx': self.approx,
            'refined_root': f"{float(self.refined_root):.12f}" if self.refined_root is not None else None,
            'passed': self.passed,
        }


@dataclass
class SelfCheckReport:
    family_id: str
    checks: List[BoundCheck] = field(default_factory=list)
    witnesses_contained: bool = True

    @property
    def passed(self) -> bool:
        return self.witnesses_contained and all(c.passed for c in self.checks)


def check_bound(family_label: str, bound: RangeBound, interval: RangeInterval,
                side: str) -> BoundCheck:
    """
    Stage (i): the quartic changes sign across the bracket and has exactly one
    root in it. Stage (ii): the quartic has inside_sign at the interval's
    witness and at the bracket end facing the interval. Stage (iii): bisection
    to 10^-10 lands within 10^-9 of the printed decimal.
    Raises SelfCheckError naming the family, bound and stage.
    """
    check = BoundCheck(bound=bound.label, side=side, approx=bound.approx)
    quartic = bound.quartic
    lo, hi = bound.bracket

    if bound.transform is not RootTransform.IDENTITY and quartic.degree != 4:
        raise SelfCheckError(family_label, bound.label, "i", f"derived quartic {quartic} is not of degree 4")

    sign_lo = quartic_sign_at(quartic, lo)
    sign_hi = quartic_sign_at(quartic, hi)
    check.bracket_sign_change = sign_lo * sign_hi < 0
    if not check.bracket_sign_change:
        raise SelfCheckError(family_label, bound.label, "i",
                             f"{quartic} has signs {sign_lo}, {sign_hi} at the ends of [{float(lo)}, {float(hi)}]")
    check.roots_in_bracket = sturm_count(quartic, lo, hi)
    if check.roots_in_bracket != 1:
        raise SelfCheckError(family_label, bound.label, "i",
                             f"{check.roots_in_bracket} roots of {quartic} inside the bracket")

    inner_sign = sign_hi if side == "lower" else sign_lo
    witness_sign = quartic_sign_at(quartic, interval.witness)
    check.witness_sign_ok = witness_sign == bound.inside_sign and inner_sign == bound.inside_sign
    if not check.witness_sign_ok:
        raise SelfCheckError(family_label, bound.label, "ii",
                             f"expected sign {bound.inside_sign}, got {witness_sign} at witness "
                             f"{interval.witness} and {inner_sign} at the inner bracket end")

    root_lo, root_hi = bisect_root(quartic, lo, hi, BISECTION_TOLERANCE)
    check.refined_root = (root_lo + root_hi) / 2
    check.agrees_with_decimal = abs(check.refined_root - bound.anchor) <= AGREEMENT_TOLERANCE
    if not check.agrees_with_decimal:
        raise SelfCheckError(family_label, bound.label, "iii",
                             f"refined root {float(check.refined_root):.12f} differs from {bound.approx}")
    return check


def self_check_spec(spec: RangeSpec, label: Optional[str] = None) -> SelfCheckReport:
    family_label = label or spec.family_id.value
    report = SelfCheckReport(family_id=family_label)
    for bound, interval, side in spec.quartic_bounds():
        report.checks.append(check_bound(family_label, bound, interval, side))
        logger.debug(f"{family_label} {bound.label}: bracket confirmed at {bound.approx}")
    for interval in spec.intervals:
        if not interval.contains(interval.witness):
            report.witnesses_contained = False
            raise SelfCheckError(family_label, interval.describe(), "ii",
                                 f"witness {interval.witness} is not inside its interval")
    logger.info(f"Self-check of {family_label} ranges passed ({len(report.checks)} quartic bounds)")
    return report


def self_check(family_id) -> SelfCheckReport:
    return self_check_spec(range_spec(family_id))
