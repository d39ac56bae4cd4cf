import pytest

from km_forge import models, suites
from km_forge.algebra import catalog, principal_filter
from km_forge.suites import CATALOG_WIDE, PER_ALGEBRA, run_suite, verify_all


@pytest.fixture(scope="module")
def small_catalog():
    return catalog(2, 3)


@pytest.fixture
def config():
    return models.RunConfig(command="test", depth=1, nvars=1, poset_max=2, chain_max=3)


def test_every_suite_has_a_check():
    assert set(PER_ALGEBRA) | set(CATALOG_WIDE) == set(models.SuiteName)


@pytest.mark.parametrize("suite", [
    models.SuiteName.AXIOMS,
    models.SuiteName.STRUCTURE,
    models.SuiteName.TERMS,
    models.SuiteName.DENSE,
    models.SuiteName.DELTA_IDENTITY,
    models.SuiteName.KM,
    models.SuiteName.ONE_STEP,
    models.SuiteName.FREE,
    models.SuiteName.WORKED_EXAMPLE,
    models.SuiteName.TRANSPORT,
    models.SuiteName.COMPLETION,
    models.SuiteName.OMEGA,
])
def test_suite_passes_on_small_catalog(suite, small_catalog, config):
    result = run_suite(suite, small_catalog, config)
    assert result.passed, result.violations
    assert result.instances > 0
    assert result.bound.poset_max == 2


def test_duality_suite_records_no_findings(small_catalog, config):
    result = run_suite(models.SuiteName.DUALITY, small_catalog, config)
    assert result.passed
    assert result.findings == []


def test_structure_suite_catches_a_wrong_generated_filter(monkeypatch, small_catalog, config):
    monkeypatch.setattr(suites, "filter_generated", lambda H, gens: principal_filter(H, H.bot))
    result = run_suite(models.SuiteName.STRUCTURE, small_catalog, config)
    assert not result.passed
    assert any("filter generated by" in v.message for v in result.violations)


def test_terms_suite_catches_a_lossy_printer(monkeypatch, small_catalog, config):
    monkeypatch.setattr(suites, "to_text", lambda f: "p0")
    result = run_suite(models.SuiteName.TERMS, small_catalog, config)
    assert not result.passed


def test_verify_all_selected_suites(config):
    report = verify_all(config, [models.SuiteName.DENSE, models.SuiteName.KM])
    assert report.passed
    assert [s.suite for s in report.suites] == [models.SuiteName.DENSE, models.SuiteName.KM]
    assert len(report.algebras) == 3


@pytest.mark.slow
@pytest.mark.parametrize("suite", list(models.SuiteName))
def test_full_suite(suite):
    config = models.RunConfig(command="test", depth=2, nvars=2, poset_max=3, chain_max=4)
    result = run_suite(suite, catalog(config.poset_max, config.chain_max), config)
    assert result.passed, result.violations


@pytest.mark.slow
def test_verify_all_in_parallel_matches_serial():
    serial = models.RunConfig(command="test", depth=1, nvars=1, poset_max=2, chain_max=3)
    parallel = serial.model_copy(update={"jobs": 2})
    suites = [models.SuiteName.ONE_STEP, models.SuiteName.ISO]
    assert verify_all(serial, suites).to_json() == verify_all(parallel, suites).to_json()


@pytest.mark.slow
@pytest.mark.parametrize("suite", [models.SuiteName.AXIOMS, models.SuiteName.DENSE, models.SuiteName.SCHEMAS,
                                   models.SuiteName.STRUCTURE, models.SuiteName.DUALITY])
def test_suite_on_five_point_posets_and_eight_chain(suite):
    config = models.RunConfig(command="test", depth=3, nvars=2, poset_max=5, chain_max=8)
    result = run_suite(suite, catalog(config.poset_max, config.chain_max), config)
    assert result.passed, result.violations


@pytest.mark.slow
@pytest.mark.parametrize("suite", [models.SuiteName.DELTA_IDENTITY, models.SuiteName.ONE_STEP,
                                   models.SuiteName.WITNESS, models.SuiteName.COMPLETION, models.SuiteName.KM,
                                   models.SuiteName.COMPARE, models.SuiteName.OPEN_STATEMENT])
def test_suite_on_four_point_posets_and_six_chain(suite):
    config = models.RunConfig(command="test", depth=3, nvars=2, poset_max=4, chain_max=6)
    result = run_suite(suite, catalog(config.poset_max, config.chain_max), config)
    assert result.passed, result.violations
    assert result.bound.depth == 3


@pytest.mark.slow
@pytest.mark.parametrize("suite", [models.SuiteName.FREE, models.SuiteName.ISO, models.SuiteName.VARIETY])
def test_suite_on_three_point_posets_and_four_chain_at_depth_three(suite):
    config = models.RunConfig(command="test", depth=3, nvars=2, poset_max=3, chain_max=4)
    result = run_suite(suite, catalog(config.poset_max, config.chain_max), config)
    assert result.passed, result.violations


@pytest.mark.slow
def test_omega_suite_to_the_full_horizon():
    config = models.RunConfig(command="test", depth=2)
    result = run_suite(models.SuiteName.OMEGA, [], config)
    assert result.passed, result.violations
    assert suites.OMEGA_HORIZON == 1000
