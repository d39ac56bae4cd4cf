import pytest

from km_forge import errors, models
from km_forge.omega import (BOT_MAP, DEFAULT_CONSTANTS, INF, IOTA, TOP_MAP, OmegaElement, Piece, PiecewiseMap,
                            canonical_form_violations, constant, dense_over_zero, enumerate_fragment, f0_member,
                            filter_membership_violations, normalize, omega_impl, omega_meet, omega_name,
                            pointwise_mismatches, pw_impl, pw_join, pw_leq, pw_meet, pw_values, quotient_equiv,
                            remark_counterexample, shift, soundness_violations, tail_kind_violations,
                            verify_onestep_omega)

CONST, SHIFT = models.PieceKind.CONST, models.PieceKind.SHIFT


def pieces(f):
    return [(p.start, p.kind, p.value) for p in f.pieces]


@pytest.mark.parametrize("text, idx", [("0", INF), ("1", 1), ("1/2", 2), ("1/17", 17)])
def test_parse_elements(text, idx):
    x = OmegaElement.parse(text)
    assert x.idx == idx
    assert str(x) == text


@pytest.mark.parametrize("text", ["2", "1/0", "1/x", "-1"])
def test_parse_rejects(text):
    with pytest.raises(errors.DomainError):
        OmegaElement.parse(text)


def test_chain_operations():
    half, third = OmegaElement(idx=2), OmegaElement(idx=3)
    assert third <= half and not half <= third
    assert omega_meet(half, third) == third
    assert omega_impl(half, third) == third
    assert omega_impl(third, half).idx == 1
    assert omega_name(INF) == "0"


def test_canonical_form():
    assert str(IOTA) == "n>=1: 1/n"
    assert str(shift(2)) == "n>=1: 1/(n+2)"
    # explicit values that follow the tail are absorbed into it
    f = normalize([Piece(start=1, kind=CONST, value=1), Piece(start=2, kind=SHIFT, value=0)])
    assert f == IOTA
    g = normalize([Piece(start=1, kind=CONST, value=2), Piece(start=3, kind=CONST, value=2)])
    assert g == constant(2)
    h = normalize([Piece(start=1, kind=CONST, value=3), Piece(start=2, kind=CONST, value=2),
                   Piece(start=3, kind=SHIFT, value=0)])
    assert pieces(h) == [(1, CONST, 3), (2, SHIFT, 0)]


@pytest.mark.parametrize("bad", [
    [Piece(start=2, kind=CONST, value=1)],
    [Piece(start=1, kind=CONST, value=1), Piece(start=1, kind=CONST, value=2)],
    [Piece(start=1, kind=SHIFT, value=-1)],
])
def test_normalize_rejects(bad):
    with pytest.raises(errors.DomainError):
        normalize(bad)


def test_shift_rejects_negative_offsets():
    with pytest.raises(errors.DomainError):
        shift(-1)


def test_iota_implies_constant():
    f = pw_impl(IOTA, constant(3))
    assert pieces(f) == [(1, CONST, 3), (3, CONST, 1)]
    assert f0_member(f) == (True, 3)


@pytest.mark.parametrize("n0", [1, 2, 5])
def test_iota_implies_shift_is_the_shift(n0):
    assert pw_impl(IOTA, shift(n0)) == shift(n0)


def test_lattice_operations():
    assert pw_meet(IOTA, constant(2)) == normalize([Piece(start=1, kind=CONST, value=2),
                                                    Piece(start=2, kind=SHIFT, value=0)])
    assert pw_join(IOTA, constant(2)) == normalize([Piece(start=1, kind=CONST, value=1),
                                                    Piece(start=2, kind=CONST, value=2)])
    assert pw_meet(IOTA, BOT_MAP) == BOT_MAP
    assert pw_join(IOTA, TOP_MAP) == TOP_MAP
    assert pw_leq(shift(3), IOTA)
    assert not pw_leq(IOTA, shift(3))
    assert pw_leq(BOT_MAP, IOTA)


@pytest.mark.parametrize("operation", ["meet", "join", "impl"])
@pytest.mark.parametrize("f, g", [
    (IOTA, constant(4)),
    (shift(2), constant(3)),
    (constant(3), shift(1)),
    (shift(1), shift(3)),
    (pw_impl(IOTA, constant(3)), shift(2)),
])
def test_symbolic_operations_match_pointwise(operation, f, g):
    assert pointwise_mismatches(operation, f, g, horizon=60) == []


def test_breakpoints_of_large_constants_are_found_symbolically():
    big = 10**6
    assert pieces(pw_impl(IOTA, constant(big))) == [(1, CONST, big), (big, CONST, 1)]
    assert pieces(pw_meet(IOTA, constant(big))) == [(1, CONST, big), (big, SHIFT, 0)]
    assert pieces(pw_join(shift(3), constant(big))) == [(1, SHIFT, 3), (big - 3, CONST, big)]


def test_pw_values():
    assert pw_values(IOTA, 4).tolist() == [1, 2, 3, 4]
    assert pw_values(pw_impl(IOTA, constant(3)), 4).tolist() == [3, 3, 1, 1]
    assert pw_values(BOT_MAP, 2).tolist() == [INF, INF]


def test_canonical_form_violations():
    maps = enumerate_fragment(2).maps
    assert canonical_form_violations(maps) == []
    unfolded = PiecewiseMap(pieces=(Piece(start=1, kind=CONST, value=1), Piece(start=2, kind=SHIFT, value=0)))
    assert normalize(unfolded.pieces) == IOTA
    assert len(canonical_form_violations([unfolded])) == 2


def test_filter_membership():
    assert f0_member(pw_impl(IOTA, constant(5)))[0]
    assert not f0_member(constant(2))[0]
    assert filter_membership_violations(DEFAULT_CONSTANTS) == []


@pytest.mark.slow
def test_operations_sound_to_horizon_1000():
    assert soundness_violations(enumerate_fragment(2).maps, horizon=1000) == []


def test_dense_over_zero():
    assert dense_over_zero(IOTA)
    assert dense_over_zero(constant(7))
    assert not dense_over_zero(BOT_MAP)
    assert not dense_over_zero(OmegaElement(idx=INF))


def test_quotient_relation():
    assert quotient_equiv(IOTA, IOTA)
    assert not quotient_equiv(constant(1), constant(2))
    # maps agreeing from some point on are identified
    assert quotient_equiv(constant(1), pw_impl(IOTA, constant(3)))
    assert f0_member(IOTA) == (False, None)


def test_fragment():
    fragment = enumerate_fragment(1, constants=(INF, 1, 2))
    assert fragment.maps[:4] == (IOTA, BOT_MAP, TOP_MAP, constant(2))
    assert [str(phi) for phi in fragment.provenance[:4]] == ["p0", "p1", "p2", "p3"]
    assert fragment.levels[0] == 4
    assert len(set(fragment.maps)) == len(fragment.maps)
    assert tail_kind_violations(fragment.maps) == []


def test_verify_onestep_omega():
    report = verify_onestep_omega(depth=1)
    assert report.passed, report.violations
    assert [g.name for g in report.checks] == ["non-principal", "constants-separated", "iota-least",
                                               "iota-identity", "tail-kinds", "congruence"]
    assert report.constants == ["0", "1", "1/2", "1/3", "1/5"]
    assert verify_onestep_omega(depth=1, extra_constants=[7]).constants[-1] == "1/7"
    with pytest.raises(errors.DomainError):
        verify_onestep_omega(depth=0)


@pytest.mark.parametrize("n0", [1, 2, 3])
def test_remark_counterexample(n0):
    report = remark_counterexample(n0)
    assert report.passed
    assert report.fixed_by_iota and report.below_constant and report.constant_in_filter
    assert report.collapsed_pair == (omega_name(n0), "1")


def test_remark_counterexample_values():
    report = remark_counterexample(2)
    assert report.collapsed_pair == ("1/2", "1")
    assert report.delta0 == "n>=1: 1/(n+2)"
    with pytest.raises(errors.DomainError):
        remark_counterexample(0)
