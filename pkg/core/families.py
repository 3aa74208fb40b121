"""
The four integer parametrizations of the monoclinic piped.

Each family is kept as data: the nine formulas exactly as printed, from which
the factor lists and the expanded signed polynomials are derived. The
symbolic checks below then prove the seven equations as polynomial
identities in (m, n).
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
import logging
from typing import Dict, List, Mapping, Tuple

from core.errors import DegenerateParameterError, UnknownFamilyError
from core.exactmath import BivariatePoly, parse_factors, poly_eval, poly_product
from core.piped import MonoclinicPiped

logger = logging.getLogger(__name__)

POLY_NAMES = ("X", "Y", "Z", "A", "B", "C1", "C2", "D1", "D2")
FAMILY_DEGREE = 6


class FamilyId(str, Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"

    @classmethod
    def parse(cls, value) -> "FamilyId":
        if isinstance(value, FamilyId):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise UnknownFamilyError(value) from None


# Printed formulas, one block per family (signed; evaluate() applies |...|).
FAMILY_TABLE: Dict[FamilyId, Dict[str, str]] = {
    FamilyId.P1: {
        "X": "4(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        "Y": "3(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        "Z": "16mn(n+m)(n+2m)(n^2+2mn+2m^2)",
        "C1": "(n^2+4mn+2m^2)(n^2+4mn+6m^2)(3n^2+4mn+2m^2)",
        "C2": "(n^2-2m^2)(n^2+2m^2)(3n^2+8mn+6m^2)",
        "D1": "(n^2+4mn+2m^2)(5n^4+16mn^3+28m^2n^2+32m^3n+20m^4)",
        "D2": "(n^2-2m^2)(5n^4+24mn^3+52m^2n^2+48m^3n+20m^4)",
        "A": "5(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        "B": "4(n^2+2mn+2m^2)^3",
    },
    FamilyId.P2: {
        "X": "4(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        "Y": "3(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        "Z": "32n(n+m)(n+2m)(3n+2m)(5n^2+8mn+4m^2)",
        "C1": "(7n^2+12mn+4m^2)(9n^2+20mn+12m^2)(11n^2+12mn+4m^2)",
        "C2": "(n^2-4mn-4m^2)(3n^2+4mn+4m^2)(17n^2+28mn+12m^2)",
        "D1": "(7n^2+12mn+4m^2)(101n^4+312mn^3+424m^2n^2+288m^3n+80m^4)",
        "D2": "(n^2-4mn-4m^2)(149n^4+488mn^3+616m^2n^2+352m^3n+80m^4)",
        "A": "5(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        "B": "4(5n^2+8mn+4m^2)^3",
    },
    FamilyId.P3: {
        "X": "4(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        "Y": "3(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        "Z": "32n(n+4m)(3n+4m)(5n+4m)(13n^2+24mn+16m^2)",
        "C1": "(17n^2+40mn+16m^2)(19n^2+56mn+48m^2)(33n^2+40mn+16m^2)",
        "C2": "(7n^2-8mn-16m^2)(9n^2+8mn+16m^2)(43n^2+88mn+48m^2)",
        "D1": "(17n^2+40mn+16m^2)(725n^4+2384mn^3+3808m^2n^2+3328m^3n+1280m^4)",
        "D2": "(7n^2-8mn-16m^2)(965n^4+3856mn^3+6112m^2n^2+4352m^3n+1280m^4)",
        "A": "5(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        "B": "4(13n^2+24mn+16m^2)^3",
    },
    FamilyId.P4: {
        "X": "4(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        "Y": "3(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        "Z": "48n(n+3m)(4n+3m)(5n+6m)(17n^2+30mn+18m^2)",
        "C1": "9(3n^2+8mn+6m^2)(23n^2+48mn+18m^2)(41n^2+48mn+18m^2)",
        "C2": "3(7n^2-12mn-18m^2)(11n^2+12mn+18m^2)(19n^2+36mn+18m^2)",
        "D1": "(23n^2+48mn+18m^2)(1205n^4+3912mn^3+5940m^2n^2+4752m^3n+1620m^4)",
        "D2": "(7n^2-12mn-18m^2)(1685n^4+6288mn^3+9180m^2n^2+6048m^3n+1620m^4)",
        "A": "5(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        "B": "4(17n^2+30mn+18m^2)^3",
    },
}


@dataclass(frozen=True)
class FactoredForm:
    """A printed formula split into leading constant and factor list"""
    printed: str
    constant: int
    factors: Tuple[BivariatePoly, ...]

    @classmethod
    def from_printed(cls, printed: str) -> "FactoredForm":
        constant, factors = parse_factors(printed)
        return cls(printed=printed, constant=constant, factors=tuple(factors))

    def expand(self) -> BivariatePoly:
        return self.constant * poly_product(self.factors)

    def linear_factors(self) -> List[BivariatePoly]:
        return [f for f in self.factors if f.total_degree() == 1]


@dataclass(frozen=True)
class ParamFamily:
    id: FamilyId
    formulas: Mapping[str, FactoredForm]
    degree: int = FAMILY_DEGREE
    label: str = field(default="")

    @classmethod
    def from_table(cls, family_id: FamilyId, printed: Mapping[str, str],
                   label: str = "") -> "ParamFamily":
        missing = set(POLY_NAMES) - set(printed)
        if missing:
            raise ValueError(f"family {family_id.value} lacks formulas {sorted(missing)}")
        formulas = {name: FactoredForm.from_printed(printed[name]) for name in POLY_NAMES}
        return cls(id=family_id, formulas=formulas, label=label or family_id.value)

    @cached_property
    def polys(self) -> Dict[str, BivariatePoly]:
        """The nine signed, expanded polynomials"""
        return {name: form.expand() for name, form in self.formulas.items()}

    def __getattr__(self, name: str) -> BivariatePoly:
        # family(P1).B style access to the expanded polynomials
        if name in POLY_NAMES:
            return self.polys[name]
        raise AttributeError(name)

    def with_formula(self, name: str, printed: str) -> "ParamFamily":
        """Copy of this family with one formula replaced (mutation tests)"""
        if name not in POLY_NAMES:
            raise KeyError(name)
        formulas = dict(self.formulas)
        formulas[name] = FactoredForm.from_printed(printed)
        return replace(self, formulas=formulas, label=f"{self.label}*")

    def with_poly(self, name: str, poly: BivariatePoly) -> "ParamFamily":
        """Copy with one expanded polynomial replaced by an arbitrary one"""
        if name not in POLY_NAMES:
            raise KeyError(name)
        formulas = dict(self.formulas)
        formulas[name] = FactoredForm(printed=str(poly), constant=1, factors=(poly,))
        return replace(self, formulas=formulas, label=f"{self.label}*")


_FAMILIES: Dict[FamilyId, ParamFamily] = {}


def family(family_id) -> ParamFamily:
    """The transcribed family for an id such as "P1" or FamilyId.P1"""
    fid = FamilyId.parse(family_id)
    if fid not in _FAMILIES:
        _FAMILIES[fid] = ParamFamily.from_table(fid, FAMILY_TABLE[fid])
        logger.debug(f"Loaded family {fid.value} from its printed formulas")
    return _FAMILIES[fid]


def all_families() -> List[ParamFamily]:
    return [family(fid) for fid in FamilyId]


def evaluate_family(fam: ParamFamily, m: int, n: int) -> MonoclinicPiped:
    if m == 0 and n == 0:
        raise DegenerateParameterError(m, n)
    polys = fam.polys
    return MonoclinicPiped(*(abs(poly_eval(polys[name], m, n)) for name in POLY_NAMES))


def evaluate(family_id, m: int, n: int) -> MonoclinicPiped:
    """
    Lengths at the integer point (m, n): each field is |poly(m, n)|.
    The result always satisfies the seven equations; whether it is a real
    solid is decided by is_realizable (exactly from the ratio: validity.realizable_ratio).
    """
    return evaluate_family(family(family_id), m, n)


def linear_factors(family_id, name: str = "Z") -> List[BivariatePoly]:
    return family(family_id).formulas[name].linear_factors()


# ============================================================================
# Symbolic identity checks
# ============================================================================

@dataclass(frozen=True)
class IdentityReport:
    family_id: str
    passes: Tuple[bool, ...]
    residuals: Mapping[int, BivariatePoly]

    @property
    def all_pass(self) -> bool:
        return all(self.passes)

    def to_dict(self):
        return {
            'family': self.family_id,
            'passes': list(self.passes),
            'residuals': {k: str(v) for k, v in self.residuals.items()},
        }


def equation_residuals(polys: Mapping[str, BivariatePoly]) -> List[BivariatePoly]:
    """Left side minus right side of each equation, as polynomials"""
    X, Y, Z = polys["X"], polys["Y"], polys["Z"]
    A, B = polys["A"], polys["B"]
    C1, C2, D1, D2 = polys["C1"], polys["C2"], polys["D1"], polys["D2"]
    X2 = X * X
    return [
        X2 + Y * Y - A * A,
        X2 + Z * Z - B * B,
        X2 + C1 * C1 - D1 * D1,
        X2 + C2 * C2 - D2 * D2,
        2 * (Y * Y) + 2 * (Z * Z) - C1 * C1 - C2 * C2,
        2 * (Y * Y) + 2 * (B * B) - D1 * D1 - D2 * D2,
        2 * (A * A) + 2 * (Z * Z) - D1 * D1 - D2 * D2,
    ]


def verify_family_identities(fam: ParamFamily) -> IdentityReport:
    residuals = equation_residuals(fam.polys)
    passes = tuple(r.is_zero() for r in residuals)
    failures = {k: r for k, r in enumerate(residuals, 1) if not r.is_zero()}
    if failures:
        logger.warning(f"Family {fam.label}: equations {sorted(failures)} have nonzero residuals")
    else:
        logger.debug(f"Family {fam.label}: all seven identities hold")
    return IdentityReport(family_id=fam.label, passes=passes, residuals=failures)


def verify_identities(family_id) -> IdentityReport:
    return verify_family_identities(family(family_id))


def ratio_345_holds(fam: ParamFamily) -> bool:
    """3X = 4Y and 4A = 5X as polynomial identities"""
    X, Y, A = fam.polys["X"], fam.polys["Y"], fam.polys["A"]
    return 3 * X == 4 * Y and 4 * A == 5 * X


def ratio_345_check(family_id) -> bool:
    return ratio_345_holds(family(family_id))
