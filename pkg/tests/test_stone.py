import pytest

from km_forge import errors
from km_forge.algebra import FinitePoset, chain, from_poset
from km_forge.stone import (compare_with_onestep, delta_subalgebra, duality_roundtrip, open_statement_check, sigma,
                            sigma_plus, sigma_plus_report, spectrum)


def test_spectrum_of_three_chain(chain3):
    spec = spectrum(chain3)
    assert spec.generators == (1, 2)
    assert spec.primes == (frozenset({1, 2}), frozenset({2}))
    assert spec.order.tolist() == [[True, False], [True, True]]
    assert spec.poset().labels == ("up(1/2)", "up(1)")
    report = spec.report()
    assert report.sigma == {"0": [], "1/2": [0], "1": [0, 1]}


def test_spectrum_of_boolean_algebra(boolean4):
    spec = spectrum(boolean4)
    assert len(spec.primes) == 2
    assert spec.poset().is_isomorphic(FinitePoset.antichain(2))


def test_spectrum_of_degenerate_algebra():
    with pytest.raises(errors.Degenerate):
        spectrum(chain(1))


@pytest.mark.parametrize("algebra", ["chain3", "boolean4"])
def test_stone_map_is_an_isomorphism(algebra, request):
    H = request.getfixturevalue(algebra)
    s = sigma(H)
    assert s.is_bijective and s.is_homomorphism


def test_sigma_plus(chain3, boolean4):
    assert sigma_plus(chain3, chain3.bot) == frozenset({0})
    assert sigma_plus(chain3, chain3.top) == frozenset({0, 1})
    assert sigma_plus(boolean4, boolean4.bot) == frozenset({0, 1})


@pytest.mark.parametrize("algebra", ["chain3", "boolean4"])
def test_sigma_plus_is_sigma_of_delta(algebra, request):
    H = request.getfixturevalue(algebra)
    for a in H.elements:
        report = sigma_plus_report(H, a)
        assert report.is_up_set
        assert report.equals_sigma_of_delta


def test_delta_subalgebra(chain3):
    D = delta_subalgebra(chain3, chain3.bot)
    assert D.algebra.n == 3
    assert D.embedding.is_bijective
    assert D.closure.generators[D.adjoined] == D.sigma(chain3.element("1/2"))


@pytest.mark.parametrize("algebra", ["chain3", "boolean4"])
def test_compare_with_onestep(algebra, request):
    H = request.getfixturevalue(algebra)
    for a in H.elements:
        report = compare_with_onestep(H, a)
        assert report.agree
        assert report.delta_subalgebra_size == H.n


def test_open_statement_check(chain3):
    report = open_statement_check(chain3, chain3.bot, depth=1, nvars=2)
    assert report.instances > 0
    assert report.bound.depth == 1 and report.bound.nvars == 2
    assert report.passed
    for found in report.counterexamples:
        assert set(found) == {"formula", "p1"}


def test_open_statement_exhausted_once_sweep_closes(chain2):
    # one variable over the two-element up-set algebra: 0, 1, p0 and p0 -> 0, all reached by depth 1
    assert not open_statement_check(chain2, chain2.bot, depth=1, nvars=1).exhausted
    assert open_statement_check(chain2, chain2.bot, depth=2, nvars=1).exhausted


@pytest.mark.parametrize("poset", [FinitePoset.chain(2), FinitePoset.antichain(2), FinitePoset.chain(3),
                                   FinitePoset(points=0, leq=())])
def test_duality_roundtrip(poset):
    assert duality_roundtrip(poset)


def test_spectrum_of_up_sets_recovers_the_poset():
    P = FinitePoset.from_relation([[True, True, True], [False, True, False], [False, False, True]])
    assert spectrum(from_poset(P)).poset().is_isomorphic(P)
