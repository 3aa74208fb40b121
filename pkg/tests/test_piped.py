import pytest
from hypothesis import assume, given, settings, strategies as st

from core.errors import ZeroPipedError
from core.families import evaluate
from core.piped import (
    EQUATION_LABELS,
    EquationReport,
    MonoclinicPiped,
    canonicalize,
    is_primitive_canonical,
    is_realizable,
    primitive_reduce,
    realizability_issues,
    verify_equations,
)
from tests.conftest import FIXTURE_CANONICAL, FIXTURE_PRIMITIVE, FIXTURE_RAW


def test_fixture_passes_all_equations(fixture_piped):
    report = verify_equations(fixture_piped)
    assert report.all_pass
    assert report.failed_equations() == []
    assert len(EQUATION_LABELS) == 7


def test_spot_identity():
    x, y, z, a, b, c1, c2, d1, d2 = FIXTURE_PRIMITIVE
    assert 2 * (y * y + z * z) == c1 * c1 + c2 * c2 == 120952962


def test_failed_equations_are_numbered(fixture_piped):
    broken = MonoclinicPiped(*FIXTURE_PRIMITIVE[:8], FIXTURE_PRIMITIVE[8] + 1)
    assert verify_equations(broken).failed_equations() == [4, 6, 7]


def test_report_arity():
    with pytest.raises(ValueError):
        EquationReport((True,) * 6)


def test_fixture_is_realizable(fixture_piped):
    assert is_realizable(fixture_piped)


def test_degenerate_lengths_not_realizable():
    assert verify_equations(MonoclinicPiped(4, 3, 0, 5, 4, 3, 3, 5, 5)).all_pass
    assert not is_realizable(MonoclinicPiped(4, 3, 0, 5, 4, 3, 3, 5, 5))


def test_equation_failure_not_realizable():
    broken = MonoclinicPiped(FIXTURE_PRIMITIVE[0] + 1, *FIXTURE_PRIMITIVE[1:])
    assert not verify_equations(broken).all_pass
    assert not is_realizable(broken)


def test_primitive_reduce_fixture():
    primitive, content = primitive_reduce(MonoclinicPiped(*FIXTURE_RAW))
    assert content == 8
    assert primitive.as_tuple() == FIXTURE_PRIMITIVE


def test_primitive_reduce_scaled(fixture_piped):
    primitive, content = primitive_reduce(fixture_piped.scaled(3))
    assert (primitive, content) == (fixture_piped, 3)
    assert primitive_reduce(fixture_piped) == (fixture_piped, 1)


def test_primitive_reduce_zero():
    with pytest.raises(ZeroPipedError):
        primitive_reduce(MonoclinicPiped(*(0,) * 9))


def test_canonicalize_swaps_diagonals(fixture_piped, canonical_piped):
    assert canonicalize(fixture_piped) == canonical_piped
    assert canonicalize(canonical_piped) == canonical_piped
    assert is_primitive_canonical(canonical_piped)
    assert not is_primitive_canonical(fixture_piped)
    assert not is_primitive_canonical(canonical_piped.scaled(2))


def test_canonicalize_swaps_faces():
    x, y, z, a, b, c1, c2, d1, d2 = FIXTURE_CANONICAL
    swapped = MonoclinicPiped(x, z, y, b, a, c2, c1, d2, d1)
    assert canonicalize(swapped).as_tuple() == FIXTURE_CANONICAL


def test_canonicalize_keeps_ties():
    p = MonoclinicPiped(5, 12, 12, 13, 13, 12, 12, 13, 13)
    assert canonicalize(p) == p


def test_lengths_are_validated():
    with pytest.raises(ValueError):
        MonoclinicPiped(1, 2, 3, 4, 5, 6, 7, 8, -9)
    with pytest.raises(TypeError):
        MonoclinicPiped(1, 2, 3, 4, 5, 6, 7, 8, 9.0)
    with pytest.raises(TypeError):
        MonoclinicPiped(True, 2, 3, 4, 5, 6, 7, 8, 9)
    with pytest.raises(ValueError):
        MonoclinicPiped.from_sequence([1, 2, 3])


def test_to_dict_field_order(fixture_piped):
    assert list(fixture_piped.to_dict()) == ["x", "y", "z", "a", "b", "c1", "c2", "d1", "d2"]


def test_rectangle_is_not_realizable():
    # with x > 0 an all-integer rectangle would be a perfect cuboid
    flat_box = MonoclinicPiped(0, 3, 4, 3, 4, 5, 5, 5, 5)
    assert verify_equations(flat_box).all_pass
    assert realizability_issues(flat_box) == ["edge x is not positive", "c1 == c2: rectangular cross-section"]
    assert not is_realizable(flat_box.scaled(7))


def test_realizability_issues_name_failed_equations():
    brick = MonoclinicPiped(44, 117, 240, 125, 244, 267, 267, 271, 271)
    issues = realizability_issues(brick)
    assert issues[0] == "equations Eq3, Eq4, Eq6, Eq7 fail"
    assert issues[-1] == "c1 == c2: rectangular cross-section"
    assert realizability_issues(MonoclinicPiped(*FIXTURE_PRIMITIVE)) == []


# ============================================================================
# Properties
# ============================================================================

# P1 at 0 < m/n <= 1/4 lies inside its first range
in_range_params = st.integers(4, 200).flatmap(lambda n: st.tuples(st.integers(1, n // 4), st.just(n)))
realizable_pipeds = in_range_params.map(lambda mn: evaluate("P1", *mn))
any_pipeds = st.tuples(*[st.integers(0, 40)] * 9).map(MonoclinicPiped.from_sequence)


def _swap_faces(p: MonoclinicPiped) -> MonoclinicPiped:
    return MonoclinicPiped(p.x, p.z, p.y, p.b, p.a, p.c1, p.c2, p.d1, p.d2)


def _swap_diagonals(p: MonoclinicPiped) -> MonoclinicPiped:
    return MonoclinicPiped(p.x, p.y, p.z, p.a, p.b, p.c2, p.c1, p.d2, p.d1)


@settings(max_examples=100, deadline=None)
@given(realizable_pipeds)
def test_generated_pipeds_are_realizable(p):
    assert is_realizable(p)


@settings(max_examples=100, deadline=None)
@given(realizable_pipeds, st.integers(0, 8), st.sampled_from([-1, 1]))
def test_unit_perturbation_breaks_an_equation(p, index, delta):
    values = list(p.as_tuple())
    values[index] += delta
    assert not verify_equations(MonoclinicPiped(*values)).all_pass


@settings(max_examples=200, deadline=None)
@given(st.one_of(realizable_pipeds, any_pipeds))
def test_swaps_permute_equation_results(p):
    passes = verify_equations(p).passes
    faces = verify_equations(_swap_faces(p)).passes
    diagonals = verify_equations(_swap_diagonals(p)).passes
    # 1-based: faces exchange 1<->2 and 6<->7, diagonals exchange 3<->4
    assert faces == (passes[1], passes[0], passes[2], passes[3], passes[4], passes[6], passes[5])
    assert diagonals == (passes[0], passes[1], passes[3], passes[2], passes[4], passes[5], passes[6])
    assert sorted(faces) == sorted(diagonals) == sorted(passes)


@settings(max_examples=200, deadline=None)
@given(st.one_of(realizable_pipeds, any_pipeds), st.integers(1, 12))
def test_reduce_and_canonicalize_commute(p, k):
    assume(not p.is_zero())
    scaled = p.scaled(k)
    reduced, _ = primitive_reduce(scaled)
    assert canonicalize(reduced) == primitive_reduce(canonicalize(scaled))[0]
    assert canonicalize(canonicalize(reduced)) == canonicalize(reduced)


@settings(max_examples=100, deadline=None)
@given(realizable_pipeds)
def test_second_diagonal_restates_and_bounds(p):
    for q in (p, canonicalize(primitive_reduce(p)[0])):
        assert q.c2 * q.c2 == 2 * q.y * q.y + 2 * q.z * q.z - q.c1 * q.c1
        assert (q.y - q.z) ** 2 < q.c2 * q.c2 < (q.y + q.z) ** 2
