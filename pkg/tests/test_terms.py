import numpy as np
import pytest

from km_forge import errors, models
from km_forge.formulas import Var, parse
from km_forge.terms import (Valuation, check_schema, enumerate_term_functions, evaluate, holds_identity,
                            monotonicity_violations)


def test_evaluate_scalar_and_vectorized(chain3):
    f = parse("p0 -> p1")
    assert evaluate(f, chain3, [1, 0]) == 0
    assert evaluate(f, chain3, {0: 0, 1: 0}) == chain3.top
    values = evaluate(f, chain3, [np.array([1, 2]), np.array([0, 1])])
    assert values.tolist() == [0, 1]


def test_evaluate_missing_variable(chain3):
    with pytest.raises(errors.MissingVariable):
        evaluate(parse("p0 & p1"), chain3, [0])


def test_valuation_names(chain3):
    valuation = Valuation(algebra=chain3, assignment=(1, 2))
    assert valuation.evaluate(Var(1)) == 2
    assert valuation.named() == {"p0": "1/2", "p1": "1"}


def test_peirce_fails_in_the_three_chain(chain3):
    result = holds_identity(chain3, parse("((p0 -> p1) -> p0) -> p0"), parse("1"))
    assert not result.holds
    assert result.counterexample == {"p0": "1/2", "p1": "0"}


def test_excluded_middle(chain3, boolean4):
    lem = parse("p0 | ~p0"), parse("1")
    assert holds_identity(boolean4, *lem).holds
    assert not holds_identity(chain3, *lem).holds


def test_holds_identity_arity(chain3):
    with pytest.raises(errors.ArityMismatch):
        holds_identity(chain3, parse("p0 & p1"), parse("p1 & p0"), nvars=1)
    assert holds_identity(chain3, parse("p0 & p1"), parse("p1 & p0"), nvars=3).holds


def test_term_functions_are_distinct(chain3):
    sweep = enumerate_term_functions([chain3], 1, 2)
    keys = {fn.tables[0].tobytes() for fn in sweep.functions}
    assert len(keys) == len(sweep.functions)
    assert len(sweep.functions) <= 3 ** 3
    assert sweep.collisions == []


def test_term_function_sweep_closes(chain2):
    assert len(enumerate_term_functions([chain2], 1, 1).functions) == 4
    assert not enumerate_term_functions([chain2], 1, 1).closed
    assert enumerate_term_functions([chain2], 1, 2).closed


def test_term_function_collisions_between_algebras(chain3, boolean4):
    sweep = enumerate_term_functions([boolean4, chain3], 1, 2)
    texts = {(str(lhs), str(rhs)) for lhs, rhs in sweep.collisions}
    assert sweep.collision_count > 0
    assert texts


def test_term_function_cap(chain3):
    with pytest.raises(errors.CapExceeded):
        enumerate_term_functions([chain3], 2, 2, cap=5)


@pytest.mark.parametrize("schema", list(models.SchemaId))
@pytest.mark.parametrize("algebra", ["chain3", "boolean4"])
def test_schemas_hold(schema, algebra, request):
    H = request.getfixturevalue(algebra)
    report = check_schema(schema, H, models.Bounds(depth=1, nvars=2))
    assert report.passed, report.violations
    assert report.instances > 0


def test_triple_schemas_count_all_triples(chain3):
    report = check_schema("eqlemma", chain3)
    assert report.instances == 27
    assert report.schema_id == models.SchemaId.EQLEMMA
    assert '"schema": "eqlemma"' in report.to_json()


def test_unknown_schema(chain3):
    with pytest.raises(ValueError):
        check_schema("nope", chain3)


def test_monotonicity(chain3, boolean4):
    assert monotonicity_violations(chain3) == []
    assert monotonicity_violations(boolean4) == []
