from dataclasses import replace
from decimal import Decimal
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from core.errors import SelfCheckError, UndefinedRatioError
from core.exactmath import UnivariatePoly
from core.families import FamilyId, evaluate
from core.piped import is_realizable
from core.validity import (
    AGREEMENT_TOLERANCE,
    BoundKind,
    Classification,
    RangeSpec,
    RootTransform,
    classify,
    contains,
    contains_ratio,
    p1_mirror,
    p1_ratio,
    range_spec,
    realizable_ratio,
    self_check,
    self_check_spec,
)

ANCHORS = {
    "0.28126795021", "1.77766432195", "-0.60976156477", "-0.81999264776",
    "1.27766432195", "-0.21873204978", "-1.31999264776", "0.0312679502117",
    "1.52766432195", "1.44433098861", "-0.052065383121", "-0.94309489810",
    "-1.15332598109",
}


def _bound(fid, label):
    for bound, _, _ in range_spec(fid).quartic_bounds():
        if bound.label == label:
            return bound
    raise LookupError(label)


def _mutate_bound(fid, label, **changes) -> RangeSpec:
    """Copy of the family's ranges with one quartic bound altered"""
    spec = range_spec(fid)
    intervals = []
    for interval in spec.intervals:
        lower, upper = interval.lower, interval.upper
        if lower.kind is BoundKind.QUARTIC_ROOT and lower.label == label:
            lower = replace(lower, **changes)
        if upper.kind is BoundKind.QUARTIC_ROOT and upper.label == label:
            upper = replace(upper, **changes)
        intervals.append(replace(interval, lower=lower, upper=upper))
    return RangeSpec(spec.family_id, tuple(intervals))


# ============================================================================
# Classification examples
# ============================================================================

@pytest.mark.parametrize("fid, m, n, expected", [
    ("P1", 1, 4, Classification.VALID),
    ("P1", 1, 3, Classification.OUT_OF_RANGE),
    ("P1", 0, 1, Classification.DEGENERATE_PARAMETER),
    ("P1", -1, 1, Classification.DEGENERATE_PARAMETER),
    ("P1", 1, 0, Classification.UNDEFINED_RATIO),
    ("P1", 0, 0, Classification.UNDEFINED_RATIO),
    ("P1", 2, 1, Classification.VALID),
    ("P2", -3, 2, Classification.DEGENERATE_PARAMETER),
    ("P3", -1, 5, Classification.VALID),
    ("P3", -1, 1, Classification.VALID),
    ("P3", 0, 1, Classification.OUT_OF_RANGE),
    ("P4", -1, 3, Classification.DEGENERATE_PARAMETER),
    ("P4", -1, 10, Classification.VALID),
])
def test_classify_examples(fid, m, n, expected):
    assert classify(fid, m, n) is expected


def test_classification_values():
    assert [c.value for c in Classification] == ["Valid", "OutOfRange", "DegenerateParameter", "UndefinedRatio"]


def test_contains_undefined_ratio():
    with pytest.raises(UndefinedRatioError):
        contains("P1", 1, 0)


def test_rational_bounds_are_open():
    assert not contains_ratio("P3", Fraction(-5, 4))
    assert contains_ratio("P3", Fraction(-5, 4) + Fraction(1, 10 ** 12))
    assert not contains_ratio("P1", Fraction(-1, 2))


def test_membership_outside_brackets():
    # P1 r2 is a lower bound near 1.7777, P4 r2 an upper bound near -0.0521
    assert contains_ratio("P1", Fraction(17777, 10000))
    assert not contains_ratio("P1", Fraction(17776, 10000))
    assert contains_ratio("P4", Fraction(-6, 100))
    assert not contains_ratio("P4", Fraction(-5, 100))


@pytest.mark.parametrize("fid, label, side", [
    ("P1", "r1", "upper"),
    ("P1", "r2", "lower"),
    ("P2", "r3", "upper"),
    ("P4", "r2", "upper"),
    ("P3", "r2", "lower"),
])
def test_membership_inside_brackets(fid, label, side):
    anchor = Fraction(Decimal(_bound(fid, label).approx))
    nudge = Fraction(5, 10 ** 7)
    below, above = anchor - nudge, anchor + nudge
    if side == "upper":
        assert contains_ratio(fid, below) and not contains_ratio(fid, above)
    else:
        assert contains_ratio(fid, above) and not contains_ratio(fid, below)


def test_effective_quartics():
    assert _bound("P1", "r2").transform is RootTransform.HALF_RECIPROCAL
    assert _bound("P1", "r2").quartic == UnivariatePoly.from_descending(-12, 8, 16, 12, 3)
    assert _bound("P4", "r2").transform is RootTransform.REFLECTED
    assert _bound("P4", "r2").quartic == UnivariatePoly.from_descending(324, 1080, 1296, 660, 31)
    assert _bound("P2", "r1").quartic == _bound("P2", "r1").radicand


def test_interval_counts():
    assert [len(range_spec(fid).intervals) for fid in FamilyId] == [4, 3, 4, 4]


# ============================================================================
# Self check and the printed decimals
# ============================================================================

@pytest.mark.parametrize("fid", list(FamilyId))
def test_self_check_passes(fid):
    report = self_check(fid)
    assert report.passed
    assert all(check.roots_in_bracket == 1 for check in report.checks)


def test_thirteen_anchors_agree():
    seen = set()
    for fid in FamilyId:
        for check in self_check(fid).checks:
            seen.add(check.approx)
            assert abs(check.refined_root - Fraction(Decimal(check.approx))) <= AGREEMENT_TOLERANCE
    assert seen == ANCHORS


def test_misplaced_decimal_fails_stage_i():
    spec = _mutate_bound("P1", "r1", approx="0.29")
    with pytest.raises(SelfCheckError) as info:
        self_check_spec(spec, label="P1*")
    assert (info.value.family, info.value.bound, info.value.stage) == ("P1*", "r1", "i")


def test_wrong_quartic_fails_stage_i():
    spec = _mutate_bound("P2", "r2", radicand=UnivariatePoly.from_descending(48, 192, 280, 176, 28))
    with pytest.raises(SelfCheckError) as info:
        self_check_spec(spec)
    assert info.value.stage == "i"


def test_flipped_inside_sign_fails_stage_ii():
    spec = _mutate_bound("P4", "r1", inside_sign=-1)
    with pytest.raises(SelfCheckError) as info:
        self_check_spec(spec)
    assert (info.value.bound, info.value.stage) == ("r1", "ii")


def test_imprecise_decimal_fails_stage_iii():
    spec = _mutate_bound("P1", "r1", approx="0.28126845021")
    with pytest.raises(SelfCheckError) as info:
        self_check_spec(spec)
    assert info.value.stage == "iii"


# ============================================================================
# Ranges against geometry
# ============================================================================

def _grid():
    for fid in FamilyId:
        for n in range(1, 41):
            for m in range(-40, 41):
                if gcd(m, n) == 1:
                    yield fid, m, n


@pytest.fixture(scope="module")
def grid_verdicts():
    return [
        (fid, m, n, classify(fid, m, n) is Classification.VALID, is_realizable(evaluate(fid, m, n)))
        for fid, m, n in _grid()
    ]


def test_realizable_ratio_matches_geometry_on_grid(grid_verdicts):
    mismatches = [(fid.value, m, n) for fid, m, n, _, realizable in grid_verdicts
                  if realizable_ratio(fid, Fraction(m, n)) != realizable]
    assert mismatches == []


@pytest.mark.parametrize("fid", [FamilyId.P1, FamilyId.P2, FamilyId.P4])
def test_in_range_implies_realizable(grid_verdicts, fid):
    assert [(m, n) for f, m, n, valid, realizable in grid_verdicts
            if f is fid and valid and not realizable] == []


def test_p3_ranges_overshoot_between_shifted_roots(grid_verdicts):
    # (r4, r3) of P1, moved by the P3 shift of -1/4
    low = Fraction(Decimal(_bound("P1", "r4").approx)) - Fraction(1, 4)
    high = Fraction(Decimal(_bound("P1", "r3").approx)) - Fraction(1, 4)
    overshoot = [(m, n) for f, m, n, valid, realizable in grid_verdicts
                 if f is FamilyId.P3 and valid and not realizable]
    assert (-1, 1) in overshoot
    assert all(low < Fraction(m, n) < high for m, n in overshoot)
    band = [(m, n) for f, m, n, valid, _ in grid_verdicts
            if f is FamilyId.P3 and valid and low < Fraction(m, n) < high]
    assert sorted(band) == sorted(overshoot)


def test_realizable_outside_ranges(grid_verdicts):
    missed = {(f.value, m, n) for f, m, n, valid, realizable in grid_verdicts if realizable and not valid}
    assert {("P1", -3, 1), ("P1", -5, 4), ("P1", -1, 10), ("P3", 0, 1)} <= missed
    for family_id, m, n in missed:
        s = p1_ratio(family_id, Fraction(m, n))
        assert contains_ratio("P1", s) or contains_ratio("P1", p1_mirror(s))


@pytest.mark.parametrize("m, n", [(1, 4), (2, 1), (-9, 10), (1, 40), (-4, 7)])
def test_mirror_of_valid_p1_ratio_is_out_of_range(m, n):
    assert classify("P1", m, n) is Classification.VALID
    mirror = p1_mirror(Fraction(m, n))
    assert classify("P1", mirror.numerator, mirror.denominator) is Classification.OUT_OF_RANGE
    assert realizable_ratio("P1", mirror)


@pytest.mark.parametrize("fid", list(FamilyId))
def test_rational_endpoints_never_valid(fid):
    for point in range_spec(fid).rational_endpoints():
        assert classify(fid, point.numerator, point.denominator) is not Classification.VALID


@pytest.mark.parametrize("fid", list(FamilyId))
def test_witnesses_are_valid(fid):
    for interval in range_spec(fid).intervals:
        w = interval.witness
        assert classify(fid, w.numerator, w.denominator) is Classification.VALID


# ============================================================================
# Ratio invariance
# ============================================================================

nonzero = st.integers(-60, 60).filter(lambda v: v != 0)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(list(FamilyId)), st.integers(-60, 60), nonzero)
def test_membership_ignores_common_sign(fid, m, n):
    assert contains(fid, -m, -n) == contains(fid, m, n)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(list(FamilyId)), st.integers(-60, 60), nonzero, st.integers(-9, 9).filter(lambda k: k != 0))
def test_membership_depends_on_ratio_only(fid, m, n, k):
    assert contains(fid, k * m, k * n) == contains(fid, m, n)
    assert classify(fid, k * m, k * n) is classify(fid, m, n)
