import pytest

from km_forge import errors, models
from km_forge.algebra import Homomorphism, chain, is_isomorphic, validate
from km_forge.density import delta_min
from km_forge.enrichment import (build_fa, build_iota_algebra, collapse_violations, commute_iso, compose_witnesses,
                                 dense_in_iota, evaluation_homomorphism, extend_hom, free_extension,
                                 free_one_generator, km_completion, one_step, one_step_report, trivial_witness,
                                 variety_preservation, witness_for_onestep)


@pytest.fixture
def step3(chain3):
    return one_step(chain3, chain3.bot)


def test_iota_algebra_of_three_chain(chain3):
    E = build_iota_algebra(chain3, chain3.bot)
    assert E.size == 5
    assert E.dense_index == (1, 2)
    assert E.algebra.name(E.iota) == "(1/2,1)"
    assert sorted(E.algebra.names) == ["(0,0)", "(1,1)", "(1,1/2)", "(1/2,1)", "(1/2,1/2)"]
    assert E.provenance_mismatches() == []
    assert validate(E.algebra).passed
    assert {E.algebra.name(x) for x in dense_in_iota(E)} == {"(1/2,1)", "(1/2,1/2)", "(1,1)", "(1,1/2)"}


def test_filter_of_three_chain(chain3):
    F = build_fa(build_iota_algebra(chain3, chain3.bot))
    A = F.algebra
    assert [A.name(x) for x in F.basis] == ["(1,1/2)"]
    assert set(F.names()) == {"(1,1/2)", "(1,1)"}
    assert F.violations() == []


def test_one_step_on_three_chain(chain3, step3):
    A = step3.enriched.algebra
    classes = sorted(sorted(A.name(x) for x in cls) for cls in step3.classes)
    assert classes == [["(0,0)"], ["(1,1)", "(1,1/2)"], ["(1/2,1)", "(1/2,1/2)"]]
    assert step3.quotient.n == 3
    assert step3.delta_class == step3.embedding(chain3.element("1/2"))
    assert step3.embedding.is_bijective
    assert step3.quotient.label == "chain-3[D(0)]"
    assert collapse_violations(step3) == []


def test_one_step_report(step3):
    report = one_step_report(step3)
    assert report.passed and report.collapses_to_base
    assert report.dense_index == ["1/2", "1"]
    assert report.iota == "(1/2,1)"
    assert report.fa_basis == ["(1,1/2)"]
    assert len(report.classes) == 3
    assert {r.name: r.provenance for r in report.elements}["(1/2,1)"] == "p0"


def test_one_step_on_two_chain(chain2):
    step = one_step(chain2, chain2.bot)
    assert step.enriched.dense_index == (1,)
    assert step.fa.members == frozenset({step.enriched.algebra.top})
    assert step.quotient.n == 2
    assert step.delta_class == step.embedding(chain2.top)


def test_one_step_at_top_is_identity(chain3):
    step = one_step(chain3, chain3.top)
    assert step.quotient is chain3
    assert step.embedding.map == (0, 1, 2)
    assert step.delta_class == chain3.top


@pytest.mark.parametrize("algebra", ["chain3", "boolean4"])
def test_one_step_collapses_at_every_element(algebra, request):
    H = request.getfixturevalue(algebra)
    for a in H.elements:
        step = one_step(H, a)
        assert collapse_violations(step) == []
        assert is_isomorphic(step.quotient, H) is not None
        assert step.delta_class == step.embedding(delta_min(H, a))


def test_one_step_cap(chain3):
    with pytest.raises(errors.CapExceeded) as e:
        one_step(chain3, chain3.bot, cap=3)
    assert e.value.cap == 3
    assert e.value.exit_code == models.ExitCode.CAP_EXCEEDED


def test_free_algebra(chain2, chain3):
    E = free_one_generator(chain2)
    assert E.size == 4
    assert E.anchor is None
    assert E.provenance_mismatches() == []
    identity = Homomorphism.identity(chain3)
    F = free_one_generator(chain3)
    for h in chain3.elements:
        assert free_extension(F, identity, h).map == evaluation_homomorphism(F, h).map


def test_extend_hom(chain3, step3):
    identity = Homomorphism.identity(chain3)
    g = extend_hom(step3, identity, delta_min(chain3, chain3.bot))
    assert g(step3.delta_class) == chain3.element("1/2")
    assert step3.embedding.then(g).map == identity.map
    assert g.is_bijective


def test_extend_hom_rejects_wrong_delta(chain3, step3):
    with pytest.raises(errors.DeltaMismatch):
        extend_hom(step3, Homomorphism.identity(chain3), chain3.top)


def test_extend_hom_along_onto_map(chain3, chain2, step3):
    f = Homomorphism.verified(chain3, chain2, [0, 1, 1])
    g = extend_hom(step3, f, delta_min(chain2, f(chain3.bot)))
    assert step3.embedding.then(g).map == f.map


def test_witnesses(chain2, chain3, step3):
    witness = witness_for_onestep(step3)
    assert witness.violations() == []
    assert witness.index == (1, 2)
    composed = compose_witnesses(trivial_witness(Homomorphism.identity(chain3)), witness)
    assert composed.index_kind == models.IndexKind.PRODUCT
    assert composed.violations() == []
    with pytest.raises(errors.ContractViolation):
        trivial_witness(Homomorphism.verified(chain2, chain3, [0, 2]))
    big = trivial_witness(Homomorphism.identity(chain(4)))
    with pytest.raises(errors.CapExceeded):
        compose_witnesses(big, big)


def test_extend_hom_checks_witness(chain3, step3):
    identity = Homomorphism.identity(chain3)
    witness = trivial_witness(identity)
    assert extend_hom(step3, identity, 1, witness=witness).is_bijective
    onto = Homomorphism.verified(chain3, chain(2), [0, 1, 1])
    with pytest.raises(errors.NotWellDefined):
        extend_hom(step3, identity, 1, witness=trivial_witness(onto))


@pytest.mark.parametrize("a, b", [("0", "1/2"), ("1/2", "0"), ("0", "0"), ("0", "1")])
def test_commute_iso(chain3, a, b):
    iso = commute_iso(chain3, chain3.element(a), chain3.element(b))
    assert iso.forward.is_bijective
    assert iso.forward.then(iso.backward).map == tuple(iso.first_then_second.quotient.elements)
    report = iso.report()
    assert (report.first, report.second) == (a, b)
    assert report.fixes_base
    assert report.deltas_match
    assert report.passed


def test_km_completion(chain3):
    completion = km_completion(chain3)
    assert completion.rounds == 1
    assert completion.steps == 3
    report = completion.report()
    assert report.delta == {"0": "1/2", "1/2": "1", "1": "1"}
    assert report.matches_least_dense


def test_variety_preserved(chain3, boolean4):
    for H in (chain3, boolean4):
        for a in H.elements:
            assert variety_preservation(H, one_step(H, a).quotient, nvars=1, depth=2) == []
