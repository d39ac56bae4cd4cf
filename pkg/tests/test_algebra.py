import numpy as np
import pytest

from km_forge import errors, models
from km_forge.algebra import (ElementOracle, FiniteHeytingAlgebra, FinitePoset, Filter, Homomorphism, boolean, catalog,
                              chain, enumerate_posets, filter_generated, from_order, from_poset, is_isomorphic,
                              iter_homomorphisms, principal_filter, quotient_by_filter, validate)


def test_chain_names_and_operations(chain3):
    assert chain3.names == ("0", "1/2", "1")
    assert (chain3.bot, chain3.top) == (0, 2)
    m = chain3.element("1/2")
    assert chain3.ops.impl[m, chain3.bot] == chain3.bot
    assert chain3.ops.impl[chain3.top, m] == m
    assert chain3.neg(m) == chain3.bot
    assert validate(chain3).passed


def test_tables_are_read_only(chain3):
    with pytest.raises(ValueError):
        chain3.ops.meet[0, 0] = 1


def test_boolean_algebra_from_antichain(boolean4):
    assert boolean4.names == ("{}", "{0}", "{1}", "{0,1}")
    a, b = boolean4.element("{0}"), boolean4.element("{1}")
    assert boolean4.ops.join[a, b] == boolean4.top
    assert boolean4.ops.meet[a, b] == boolean4.bot
    assert boolean4.neg(a) == b
    assert boolean4.index_of({1}) == b


def test_element_lookup(chain3):
    assert chain3.element("1") == 2
    assert chain3.element(1) == 1
    with pytest.raises(errors.ElementNotFound):
        chain3.element("1/3")
    with pytest.raises(errors.ElementNotFound):
        chain3.element(3)


def test_from_order_rejects_non_distributive_lattice(m3_order):
    with pytest.raises(errors.AlgebraValidationError) as e:
        from_order(m3_order, names=["0", "a", "b", "c", "1"], label="M3")
    assert e.value.report is not None
    assert not e.value.report.passed
    assert e.value.exit_code == models.ExitCode.INPUT_ERROR
    check = e.value.report.checks[0]
    assert check.group == models.AxiomGroup.DISTRIBUTIVITY
    assert check.witness == ["a", "b", "c"]


def test_from_order_rejects_non_lattice():
    # two incomparable points with nothing below them
    with pytest.raises(errors.AlgebraValidationError) as e:
        from_order(np.eye(2, dtype=bool))
    assert e.value.report.checks[0].group == models.AxiomGroup.LATTICE


def test_from_order_rejects_cycles():
    with pytest.raises(errors.AlgebraValidationError) as e:
        from_order(np.ones((2, 2), dtype=bool))
    assert e.value.report.checks[0].group == models.AxiomGroup.ORDER


def test_validate_reports_broken_residuation(chain3):
    impl = np.array(chain3.impl)
    impl[1, 0] = 1
    broken = FiniteHeytingAlgebra.from_tables(chain3.leq, chain3.meet, chain3.join, impl, 0, 2, check=False)
    report = validate(broken)
    failed = {c.group for c in report.checks if not c.passed}
    assert models.AxiomGroup.RESIDUATION in failed
    assert models.AxiomGroup.DISTRIBUTIVITY not in failed
    with pytest.raises(errors.AlgebraValidationError):
        FiniteHeytingAlgebra.from_tables(chain3.leq, chain3.meet, chain3.join, impl, 0, 2)


def test_validate_rejects_out_of_range_entries(chain3):
    meet = np.array(chain3.meet)
    meet[0, 0] = 7
    broken = FiniteHeytingAlgebra.from_tables(chain3.leq, meet, chain3.join, chain3.impl, 0, 2, check=False)
    with pytest.raises(errors.AlgebraFormatError):
        validate(broken)


def test_empty_poset_is_degenerate():
    H = from_poset(FinitePoset(points=0, leq=()))
    assert H.degenerate
    assert H.bot == H.top


def test_poset_rejects_non_order():
    with pytest.raises(ValueError):
        FinitePoset.from_relation(np.array([[True, True], [True, True]]))


def test_filters(chain3):
    m = chain3.element("1/2")
    F = principal_filter(chain3, m)
    assert F.members == frozenset({1, 2})
    assert F.is_principal and F.is_proper and F.least == m
    assert F.violations() == []
    assert filter_generated(chain3, [1, 2]).members == F.members
    broken = Filter.of(chain3, [1])
    assert "does not contain top" in broken.violations()


def test_quotient_by_principal_filter(chain3):
    Q, pi = quotient_by_filter(chain3, principal_filter(chain3, 1), label="collapsed")
    assert Q.n == 2
    assert Q.label == "collapsed"
    assert pi.map == (0, 1, 1)
    assert pi.is_surjective
    assert validate(Q).passed


def test_homomorphisms(chain2, chain3):
    f = Homomorphism.verified(chain2, chain3, [0, 2])
    assert f.is_injective and not f.is_surjective
    with pytest.raises(errors.NotAHomomorphism):
        Homomorphism.verified(chain2, chain3, [0, 1])
    assert [h.map for h in iter_homomorphisms(chain3, chain2)] == [(0, 1, 1)]
    identity = Homomorphism.identity(chain3)
    assert identity.then(identity).map == identity.map
    assert identity.inverse().map == identity.map
    with pytest.raises(errors.ContractViolation):
        f.inverse()


def test_is_isomorphic(chain3, boolean4):
    relabeled = from_order(np.array(chain3.leq)[::-1, ::-1], names=["top", "mid", "bot"])
    iso = is_isomorphic(chain3, relabeled)
    assert iso is not None and iso.map == (2, 1, 0)
    assert is_isomorphic(chain3, boolean4) is None
    assert is_isomorphic(chain(4), boolean4) is None


def test_enumerate_posets_counts_isomorphism_classes():
    # 1, 2, 5 and 16 posets on 1 to 4 points
    counts = [p.points for p in enumerate_posets(4)]
    assert [counts.count(k) for k in (1, 2, 3, 4)] == [1, 2, 5, 16]


def test_catalog():
    assert len(catalog(1, 2)) == 1
    sizes = sorted(H.n for H in catalog(2, 3))
    assert sizes == [2, 3, 4]
    # the 4-chain is not an up-set algebra of a 2-point poset
    assert any(H.label == "chain-4" for H in catalog(2, 4))


def test_boolean_helper():
    assert boolean(3).n == 8


def test_oracle_without_operations_cannot_be_built():
    class MeetOnly(ElementOracle):
        def meet(self, x, y):
            return min(x, y)

    with pytest.raises(TypeError):
        MeetOnly()
