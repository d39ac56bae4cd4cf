"""Exhaustive property suites over a catalog of small algebras, as run by ``verify-all``.

Each suite checks one family of stated properties. Failed contracts become violations; observations about
open questions (sigma(a)+ against Delta, the open statement, H[Delta(a)] against the sigma(a)+
subalgebra) become findings and never fail a suite.
"""
import contextlib
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

from km_forge import errors, models, terms
from km_forge.algebra import (FiniteHeytingAlgebra, Homomorphism, catalog, chain, enumerate_posets, filter_generated,
                              is_isomorphic, iter_homomorphisms, principal_filter, quotient_by_filter, validate)
from km_forge.density import (check_delta_identity, delta_min, delta_table, delta_transport, dense_characterizations,
                              dense_over, km_axiom_failures, km_axiom_report, km_from_heyting, km_from_table,
                              push_filter)
from km_forge.enrichment import (build_iota_algebra, build_fa, collapse_violations, commute_iso, compose_witnesses,
                                 evaluation_homomorphism, free_extension, free_one_generator, km_completion, one_step,
                                 trivial_witness, variety_preservation, witness_for_onestep)
from km_forge.formulas import enumerate_terms, parse, to_text
from km_forge.omega import (DEFAULT_HORIZON, PW_OPS, canonical_form_violations, enumerate_fragment,
                            filter_membership_violations, remark_counterexample, soundness_violations,
                            verify_onestep_omega)
from km_forge.stone import (compare_with_onestep, duality_roundtrip, open_statement_check, sigma, sigma_plus,
                            spectrum)

logger = logging.getLogger(__name__)

# violations and findings kept per suite
MAX_RECORDED = 50
# transport and witness composition run on algebras up to these sizes
TRANSPORT_MAX = 4
WITNESS_SOURCE_MAX = 3
# tables tried when checking that only the least dense element satisfies the KM identities
KM_TABLE_LIMIT = 4096
# the omega operations are compared with the chain at every n up to the horizon, on maps up to this depth
OMEGA_HORIZON = DEFAULT_HORIZON
OMEGA_SOUNDNESS_DEPTH = 2

# identities of intuitionistic logic, checked in every algebra
IPC_IDENTITIES = (
    ("p0 -> p0", "1"),
    ("p0 & (p0 -> p1)", "p0 & p1"),
    ("p0 -> (p1 -> p0)", "1"),
    ("(p0 | p1) -> p2", "(p0 -> p2) & (p1 -> p2)"),
    ("p0 & (p1 | p2)", "(p0 & p1) | (p0 & p2)"),
    ("~~~p0", "~p0"),
    ("~(p0 | p1)", "~p0 & ~p1"),
    ("p0 -> (p1 & p2)", "(p0 -> p1) & (p0 -> p2)"),
)


def _record(result: models.SuiteResult, code: str, message: str, **witness):
    if len(result.violations) < MAX_RECORDED:
        result.violations.append(models.Violation(code=code, message=message, witness=witness))


def _note(result: models.SuiteResult, finding: str):
    if len(result.findings) < MAX_RECORDED:
        result.findings.append(finding)


@contextlib.contextmanager
def _guard(result: models.SuiteResult, H: Optional[FiniteHeytingAlgebra] = None, **witness):
    """Record contract failures raised inside the block as violations; capacity errors propagate."""
    try:
        yield
    except errors.ContractViolation as e:
        if H is not None:
            witness["algebra"] = H.describe()
        _record(result, e.code, e.message, **witness)


# Per-algebra checks


def check_axioms(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    report = validate(H)
    result.instances += len(report.checks)
    for v in report.violations:
        _record(result, v.code, v.message, algebra=H.describe())
    for failure in terms.monotonicity_violations(H):
        _record(result, errors.AxiomViolation.code, failure, algebra=H.describe())


def _filter_violations(H: FiniteHeytingAlgebra) -> List[str]:
    """filter_generated gives the least filter over its generators; a is dense over itself only at the top."""
    out = []
    if filter_generated(H, []).members != frozenset({H.top}):
        out.append("the filter generated by nothing is not {1}")
    for a, b in itertools.combinations_with_replacement(H.elements, 2):
        F = filter_generated(H, [a, b])
        if a not in F or b not in F or F.violations():
            out.append(f"filter generated by {H.name(a)}, {H.name(b)} is not a filter over them")
        for c in H.elements:
            G = principal_filter(H, c)
            if a in G and b in G and not F.members <= G.members:
                out.append(f"filter generated by {H.name(a)}, {H.name(b)} is not inside the one of {H.name(c)}")
    for a in H.elements:
        if (a in dense_over(H, a)) != (a == H.top):
            out.append(f"{H.name(a)} is dense over itself" if a != H.top else "1 is not dense over itself")
    return out


def check_structure(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a in H.elements:
        result.instances += 1
        for failure in dense_over(H, a).violations() + principal_filter(H, a).violations():
            _record(result, errors.ContractViolation.code, failure, algebra=H.describe(), anchor=H.name(a))
        with _guard(result, H, anchor=H.name(a)):
            quotient_by_filter(H, principal_filter(H, a))
    for failure in _filter_violations(H):
        _record(result, errors.ContractViolation.code, failure, algebra=H.describe())
    with _guard(result, H):
        result.instances += 1
        Q, projection = quotient_by_filter(H, principal_filter(H, H.top))
        if not projection.is_bijective or is_isomorphic(Q, H) is None:
            _record(result, errors.ContractViolation.code, "quotient by {1} is not isomorphic to the algebra",
                    algebra=H.describe())
    with _guard(result, H):
        iso = is_isomorphic(H, H)
        if iso is None:
            _record(result, errors.ContractViolation.code, "no isomorphism onto itself", algebra=H.describe())
    if H.n <= TRANSPORT_MAX:
        for f in iter_homomorphisms(H, H):
            result.instances += 1
            if f.check():
                _record(result, errors.NotAHomomorphism.code, "search returned a non-homomorphism",
                        algebra=H.describe(), map=list(f.map))


def check_terms(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for lhs, rhs in IPC_IDENTITIES:
        outcome = terms.holds_identity(H, parse(lhs), parse(rhs), nvars=3)
        result.instances += H.n ** 3
        if not outcome.holds:
            _record(result, errors.TheoremViolation.code, f"{lhs} = {rhs} fails", algebra=H.describe(),
                    counterexample=outcome.counterexample)
    for f in enumerate_terms(2, 1):
        result.instances += 1
        if not terms.holds_identity(H, f, f).holds:
            _record(result, errors.TheoremViolation.code, f"{to_text(f)} differs from itself", algebra=H.describe())
    excluded_middle = terms.holds_identity(H, parse("p0 | ~p0"), parse("1")).holds
    boolean = all(H.neg(H.neg(x)) == x for x in H.elements)
    if excluded_middle != boolean:
        _record(result, errors.TheoremViolation.code, "excluded middle disagrees with double negation",
                algebra=H.describe())


def check_schemas(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    bounds = models.Bounds(depth=config.depth, nvars=config.nvars)
    sweep = terms.enumerate_term_functions([H], config.nvars, config.depth)
    for schema in models.SchemaId:
        report = terms.check_schema(schema, H, bounds, sweep=sweep)
        result.instances += report.instances
        for v in report.violations:
            _record(result, v.code, v.message, algebra=H.describe(), **v.witness)


def check_dense(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a, d in itertools.product(H.elements, repeat=2):
        result.instances += 1
        c = dense_characterizations(H, a, d)
        if not c.agree:
            _record(result, errors.TheoremViolation.code, "dense characterizations disagree",
                    algebra=H.describe(), anchor=H.name(a), element=H.name(d))
    with _guard(result, H):
        delta_table(H)


def check_delta_identity_suite(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    delta = delta_table(H)
    for a, a2 in itertools.product(H.elements, repeat=2):
        result.instances += 1
        if check_delta_identity(H, a, a2) != (a2 == delta[a]):
            _record(result, errors.TheoremViolation.code, "delta identity does not single out the least dense element",
                    algebra=H.describe(), a=H.name(a), candidate=H.name(a2))


def check_km(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    with _guard(result, H):
        km = km_from_heyting(H)
        km_from_table(H, km.delta)
        result.instances += 1
    report = km_axiom_report(H)
    for v in report.violations:
        _record(result, v.code, v.message, algebra=H.describe())
    if H.n ** H.n <= KM_TABLE_LIMIT:
        least = delta_table(H)
        for table in itertools.product(H.elements, repeat=H.n):
            result.instances += 1
            if table != least and all(c.passed for c in km_axiom_failures(H, table)):
                _record(result, errors.ContractViolation.code, "a second table satisfies the KM identities",
                        algebra=H.describe(), table=[H.name(x) for x in table])


def check_one_step(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a in H.elements:
        with _guard(result, H, anchor=H.name(a)):
            step = one_step(H, a, config.cap)
            result.instances += step.enriched.size
            for failure in collapse_violations(step):
                _record(result, errors.TheoremViolation.code, failure, algebra=H.describe(), anchor=H.name(a))
            for eta in step.enriched.provenance_mismatches():
                _record(result, errors.ContractViolation.code, "provenance disagrees with the map",
                        algebra=H.describe(), anchor=H.name(a), element=step.enriched.algebra.name(eta))


def check_free(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    with _guard(result, H):
        E = free_one_generator(H, config.cap)
        result.instances += E.size
        for eta in E.provenance_mismatches():
            _record(result, errors.ContractViolation.code, "provenance disagrees with the map",
                    algebra=H.describe(), element=E.algebra.name(eta))
        identity = Homomorphism.identity(H)
        for h in H.elements:
            result.instances += 1
            evaluation = evaluation_homomorphism(E, h)
            extension = free_extension(E, identity, h)
            if extension.map != evaluation.map:
                _record(result, errors.NotWellDefined.code, "extension differs from evaluation",
                        algebra=H.describe(), point=H.name(h))


def check_iso(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a, b in itertools.combinations_with_replacement(H.elements, 2):
        with _guard(result, H, a=H.name(a), b=H.name(b)):
            commute_iso(H, a, b, config.cap)
            result.instances += 1


def check_witness(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a in H.elements:
        with _guard(result, H, anchor=H.name(a)):
            step = one_step(H, a, config.cap)
            witness = witness_for_onestep(step)
            result.instances += 1
            if H.n > WITNESS_SOURCE_MAX:
                continue
            identity = trivial_witness(Homomorphism.identity(H))
            compose_witnesses(identity, witness, max_source=WITNESS_SOURCE_MAX)
            onto = trivial_witness(Homomorphism.identity(step.quotient))
            compose_witnesses(witness, onto, max_source=WITNESS_SOURCE_MAX)
            for b in step.quotient.elements:
                second = witness_for_onestep(one_step(step.quotient, b, config.cap))
                compose_witnesses(witness, second, max_source=WITNESS_SOURCE_MAX)
                result.instances += 1


def check_completion(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    with _guard(result, H):
        completion = km_completion(H, config.round_cap, config.cap)
        result.instances += completion.steps
        if completion.rounds != 1:
            _record(result, errors.ContractViolation.code, f"stable only after {completion.rounds} rounds",
                    algebra=H.describe())
        mapped = tuple(completion.embedding(d) for d in delta_table(H))
        if mapped != tuple(completion.km(completion.embedding(x)) for x in H.elements):
            _record(result, errors.DeltaMismatch.code, "completion moves the least dense elements",
                    algebra=H.describe())


def check_variety(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a in H.elements:
        with _guard(result, H, anchor=H.name(a)):
            Q = one_step(H, a, config.cap).quotient
            result.instances += 1
            for identity in variety_preservation(H, Q, config.nvars, config.depth):
                _record(result, errors.TheoremViolation.code, f"{identity} holds in the base only",
                        algebra=H.describe(), anchor=H.name(a))


def check_duality(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    if H.degenerate:
        return
    with _guard(result, H):
        spec = spectrum(H)
        s = sigma(H, spec)
        for a in H.elements:
            result.instances += 1
            plus = sigma_plus(H, a, spec)
            if s.target.up_sets[s(delta_min(H, a))] != plus:
                _note(result, f"{H.describe()}: sigma({H.name(a)})+ differs from sigma of the least dense element")


def check_compare(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    for a in H.elements:
        if H.degenerate:
            continue
        report = compare_with_onestep(H, a, config.cap)
        result.instances += 1
        if not report.agree:
            _note(result, f"{H.describe()} at {H.name(a)}: H[Delta(a)] and the sigma(a)+ subalgebra disagree")


def check_open_statement(H: FiniteHeytingAlgebra, config: models.RunConfig, result: models.SuiteResult):
    if H.degenerate:
        return
    for a in H.elements:
        report = open_statement_check(H, a, config.depth, config.nvars)
        result.instances += report.instances
        for found in report.counterexamples:
            _note(result, f"{H.describe()} at {H.name(a)}: open statement fails for {found}")


PER_ALGEBRA: Dict[models.SuiteName, Callable] = {
    models.SuiteName.AXIOMS: check_axioms,
    models.SuiteName.STRUCTURE: check_structure,
    models.SuiteName.TERMS: check_terms,
    models.SuiteName.SCHEMAS: check_schemas,
    models.SuiteName.DENSE: check_dense,
    models.SuiteName.DELTA_IDENTITY: check_delta_identity_suite,
    models.SuiteName.KM: check_km,
    models.SuiteName.ONE_STEP: check_one_step,
    models.SuiteName.FREE: check_free,
    models.SuiteName.ISO: check_iso,
    models.SuiteName.WITNESS: check_witness,
    models.SuiteName.COMPLETION: check_completion,
    models.SuiteName.VARIETY: check_variety,
    models.SuiteName.DUALITY: check_duality,
    models.SuiteName.COMPARE: check_compare,
    models.SuiteName.OPEN_STATEMENT: check_open_statement,
}


# Suites over the whole catalog


def check_transport(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig, result: models.SuiteResult):
    """Homomorphisms between small catalog members carry least dense elements whenever the density hypothesis
    holds, and push dense filters to filters."""
    small = [H for H in algebras if H.n <= TRANSPORT_MAX]
    for H, T in itertools.product(small, repeat=2):
        for f in iter_homomorphisms(H, T):
            for a in H.elements:
                result.instances += 1
                with _guard(result, H, target=T.describe(), anchor=H.name(a)):
                    outcome = delta_transport(f, a)
                    if outcome.hypothesis and not outcome.commutes:
                        _record(result, errors.TheoremViolation.code, "hypothesis holds but Delta is not preserved",
                                algebra=H.describe(), target=T.describe(), anchor=H.name(a), map=list(f.map))
                    push_filter(f, dense_over(H, a))


def check_formula_text(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig,
                       result: models.SuiteResult):
    """Printing a formula and parsing it back gives the formula."""
    for f in enumerate_terms(config.nvars, min(config.depth, 2)):
        result.instances += 1
        text = to_text(f)
        try:
            back = parse(text)
        except errors.ParseError as e:
            _record(result, e.code, f"{text} does not parse back: {e.message}")
            continue
        if back != f:
            _record(result, errors.ContractViolation.code, f"{text} parses to {to_text(back)}")


def check_worked_example(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig,
                         result: models.SuiteResult):
    """The 3-chain at 0 and the free algebra over the 2-chain, against hand-computed values."""
    H = chain(3)
    bot, middle = H.bot, H.element("1/2")
    with _guard(result, H):
        E = build_iota_algebra(H, bot, config.cap)
        F = build_fa(E)
        step = one_step(H, bot, config.cap)
        expected = {
            "H[iota] has 5 elements": E.size == 5,
            "filter basis is (1,1/2)": [E.algebra.name(x) for x in F.basis] == ["(1,1/2)"],
            "quotient has 3 classes": step.quotient.n == 3,
            "[iota] is the image of 1/2": step.delta_class == step.embedding(middle),
            "free algebra over the 2-chain has 4 elements": free_one_generator(chain(2), config.cap).size == 4,
        }
        for statement, holds in expected.items():
            result.instances += 1
            if not holds:
                _record(result, errors.TheoremViolation.code, f"worked example: expected {statement}")


def check_omega(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig, result: models.SuiteResult):
    report = verify_onestep_omega(config.depth)
    result.instances += sum(group.instances for group in report.checks)
    for v in report.violations:
        _record(result, v.code, v.message)
    demo = remark_counterexample(2)
    result.instances += 1
    if demo.violations or tuple(demo.collapsed_pair) != ("1/2", "1"):
        _record(result, errors.TheoremViolation.code, "counterexample at n0 = 2 does not collapse 1/2 with 1")


def check_omega_maps(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig,
                     result: models.SuiteResult):
    """Canonical forms, filter membership and pointwise soundness of the operations up to OMEGA_HORIZON."""
    fragment = enumerate_fragment(min(config.depth, OMEGA_SOUNDNESS_DEPTH))
    maps = fragment.maps
    result.instances += len(maps) * 2 + len(fragment.constants) + len(maps) ** 2 * len(PW_OPS)
    failures = (canonical_form_violations(maps) + filter_membership_violations(fragment.constants)
                + soundness_violations(maps, OMEGA_HORIZON))
    for failure in failures:
        _record(result, errors.TheoremViolation.code, failure)


def check_posets(algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig, result: models.SuiteResult):
    for P in enumerate_posets(config.poset_max):
        result.instances += 1
        if not duality_roundtrip(P):
            _record(result, errors.ContractViolation.code, f"spectrum of the up-sets of a {P.points}-point poset "
                                                           "is not the poset")


CATALOG_WIDE: Dict[models.SuiteName, List[Callable]] = {
    models.SuiteName.TRANSPORT: [check_transport],
    models.SuiteName.WORKED_EXAMPLE: [check_worked_example],
    models.SuiteName.TERMS: [check_formula_text],
    models.SuiteName.OMEGA: [check_omega, check_omega_maps],
    models.SuiteName.DUALITY: [check_posets],
}


def _run_member(suite: models.SuiteName, H: FiniteHeytingAlgebra, config: models.RunConfig) -> models.SuiteResult:
    result = models.SuiteResult(suite=suite)
    PER_ALGEBRA[suite](H, config, result)
    return result


def _merge(into: models.SuiteResult, part: models.SuiteResult):
    into.instances += part.instances
    for v in part.violations:
        if len(into.violations) < MAX_RECORDED:
            into.violations.append(v)
    for f in part.findings:
        _note(into, f)


def run_suite(suite: models.SuiteName, algebras: Sequence[FiniteHeytingAlgebra], config: models.RunConfig,
              executor: Optional[ProcessPoolExecutor] = None) -> models.SuiteResult:
    """Run one suite over the algebras; results are merged in catalog order whatever the worker scheduling."""
    suite = models.SuiteName(suite)
    result = models.SuiteResult(suite=suite, bound=models.Bounds(cap=config.cap, depth=config.depth,
                                                                 nvars=config.nvars, poset_max=config.poset_max,
                                                                 chain_max=config.chain_max))
    for check in CATALOG_WIDE.get(suite, []):
        check(algebras, config, result)
    if suite in PER_ALGEBRA:
        if executor is None:
            parts = [_run_member(suite, H, config) for H in algebras]
        else:
            parts = list(executor.map(_run_member, itertools.repeat(suite), algebras, itertools.repeat(config)))
        for part in parts:
            _merge(result, part)
    logger.info("Suite %s: %d instances, %d violations, %d findings", suite, result.instances,
                len(result.violations), len(result.findings))
    return result


def verify_all(config: models.RunConfig, suites: Optional[Sequence[models.SuiteName]] = None) -> models.VerifyAllReport:
    """Every suite over catalog(poset_max, chain_max).

    Raises:
        CapExceeded: some construction outgrew the closure cap.
    """
    algebras = catalog(config.poset_max, config.chain_max)
    suites = list(suites or models.SuiteName)
    report = models.VerifyAllReport(
        bound=models.Bounds(cap=config.cap, depth=config.depth, nvars=config.nvars, poset_max=config.poset_max,
                            chain_max=config.chain_max),
        algebras=[H.describe() for H in algebras],
    )
    logger.info("Verifying %d suites over %d algebras", len(suites), len(algebras))
    executor = ProcessPoolExecutor(max_workers=config.jobs) if config.jobs > 1 else None
    try:
        for suite in suites:
            result = run_suite(suite, algebras, config, executor)
            report.suites.append(result)
            if not result.passed:
                report.violations.append(models.Violation(
                    code=result.violations[0].code,
                    message=f"suite {suite}: {len(result.violations)} violations",
                    witness={"first": result.violations[0].message},
                ))
    finally:
        if executor is not None:
            executor.shutdown()
    return report
