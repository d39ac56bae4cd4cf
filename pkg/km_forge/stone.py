"""Prime spectra of finite Heyting algebras, the Stone map and the up-set sigma(a)+ adjoined for a.

sigma(a)+ is sigma(a) together with the maximal prime filters outside it. The subalgebra of up-sets it
generates with sigma(H) is compared here with the one-step enrichment at a.
"""
import logging
from functools import cached_property
from typing import FrozenSet, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from km_forge import errors, models, terms
from km_forge.algebra import (DEFAULT_CAP, AlgebraOracle, FiniteHeytingAlgebra, FinitePoset, GeneratedSubalgebra,
                              Homomorphism, UpSetAlgebra, from_poset, generated_subalgebra)
from km_forge.density import delta_min
from km_forge.enrichment import one_step
from km_forge.formulas import to_text

logger = logging.getLogger(__name__)


class Spectrum(BaseModel):
    """Prime filters of a finite algebra under inclusion; the prime p is the up-set of generators[p]."""
    model_config = ConfigDict(frozen=True)

    algebra: FiniteHeytingAlgebra
    generators: Tuple[int, ...]
    primes: Tuple[FrozenSet[int], ...]

    @cached_property
    def order(self) -> np.ndarray:
        k = len(self.primes)
        return np.array([[self.primes[p] <= self.primes[q] for q in range(k)] for p in range(k)], dtype=bool)

    def poset(self) -> FinitePoset:
        return FinitePoset.from_relation(self.order, labels=[f"up({self.algebra.name(g)})" for g in self.generators])

    def report(self) -> models.SpectrumReport:
        H = self.algebra
        return models.SpectrumReport(
            algebra=H.describe(),
            primes=[[H.name(x) for x in sorted(p)] for p in self.primes],
            order=self.order.tolist(),
            sigma={H.name(h): [p for p, prime in enumerate(self.primes) if h in prime] for h in H.elements},
        )


def _is_prime(H: FiniteHeytingAlgebra, members: FrozenSet[int]) -> bool:
    if H.bot in members:
        return False
    J = H.ops.join
    return all(x in members or y in members for x in H.elements for y in H.elements if int(J[x, y]) in members)


def spectrum(H: FiniteHeytingAlgebra) -> Spectrum:
    """All prime filters of H.

    Every filter of a finite algebra is the up-set of its meet, so the filters are enumerated as the
    principal ones and filtered for primality.

    Raises:
        Degenerate: H has one element.
    """
    if H.degenerate:
        raise errors.Degenerate(f"{H.describe()} has no prime filters")
    generators, primes = [], []
    for x in H.elements:
        members = H.up_set(x)
        if _is_prime(H, members):
            generators.append(x)
            primes.append(members)
    logger.debug("Spectrum of %s: %d prime filters", H.describe(), len(primes))
    return Spectrum(algebra=H, generators=tuple(generators), primes=tuple(primes))


def sigma(H: FiniteHeytingAlgebra, spec: Optional[Spectrum] = None) -> Homomorphism:
    """h -> the set of primes containing h, into the up-sets of the spectrum.

    Raises:
        ContractViolation: the map is not an isomorphism.
    """
    spec = spec or spectrum(H)
    U = from_poset(spec.poset(), label=f"upsets(spec {H.describe()})")
    mapping = [U.index_of(p for p, prime in enumerate(spec.primes) if h in prime) for h in H.elements]
    f = Homomorphism.verified(H, U, mapping)
    if not f.is_bijective:
        raise errors.ContractViolation(f"Stone map of {H.describe()} is not an isomorphism")
    return f


def sigma_plus(H: FiniteHeytingAlgebra, a: int, spec: Optional[Spectrum] = None) -> FrozenSet[int]:
    """sigma(a) with the maximal primes outside it added.

    Raises:
        ContractViolation: the result is not an up-set of the spectrum.
    """
    spec = spec or spectrum(H)
    inside = {p for p, prime in enumerate(spec.primes) if a in prime}
    outside = [p for p in range(len(spec.primes)) if p not in inside]
    order = spec.order
    maximal = {p for p in outside if not any(order[p, q] and q != p for q in outside)}
    result = frozenset(inside | maximal)
    if not spec.poset().is_up_set(result):
        raise errors.ContractViolation(f"sigma({H.name(a)})+ is not an up-set")
    return result


def sigma_plus_report(H: FiniteHeytingAlgebra, a: int) -> models.SigmaPlusReport:
    spec = spectrum(H)
    plus = sigma_plus(H, a, spec)
    s = sigma(H, spec)
    target: UpSetAlgebra = s.target
    report = models.SigmaPlusReport(
        algebra=H.describe(),
        anchor=H.name(a),
        sigma_plus=sorted(plus),
        is_up_set=spec.poset().is_up_set(plus),
        equals_sigma_of_delta=target.up_sets[s(delta_min(H, a))] == plus,
    )
    if not report.equals_sigma_of_delta:
        logger.warning("sigma(%s)+ differs from sigma of the least dense element in %s", H.name(a), H.describe())
    return report


class DeltaSubalgebra(BaseModel):
    """Up-sets generated by sigma(H) and sigma(a)+; variable 0 of a provenance is sigma(a)+ and
    variable k + 1 is sigma(k)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigma: Homomorphism
    anchor: int
    closure: GeneratedSubalgebra
    embedding: Homomorphism

    @property
    def algebra(self) -> FiniteHeytingAlgebra:
        return self.closure.algebra

    @property
    def adjoined(self) -> int:
        return 0


def delta_subalgebra(H: FiniteHeytingAlgebra, a: int, cap: int = DEFAULT_CAP) -> DeltaSubalgebra:
    """Raises:
        CapExceeded: the closure exceeds cap elements.
    """
    spec = spectrum(H)
    s = sigma(H, spec)
    U: UpSetAlgebra = s.target
    plus = U.index_of(sigma_plus(H, a, spec))
    closure = generated_subalgebra(AlgebraOracle(U), [plus] + list(s.map), cap=cap,
                                   label=f"{H.describe()} with sigma({H.name(a)})+")
    embedding = Homomorphism.verified(H, closure.algebra, [closure.index_of(v) for v in s.map])
    return DeltaSubalgebra(sigma=s, anchor=a, closure=closure, embedding=embedding)


def compare_with_onestep(H: FiniteHeytingAlgebra, a: int, cap: int = DEFAULT_CAP) -> models.CompareReport:
    """Map H[Delta(a)] to the sigma(a)+ subalgebra, sending H along sigma and [iota] to sigma(a)+.

    Disagreement between the two constructions is a finding, reported and logged, never raised.
    """
    step = one_step(H, a, cap)
    D = delta_subalgebra(H, a, cap)
    E, T = step.enriched, D.algebra
    assignment = [D.adjoined] + list(D.embedding.map)
    values = [terms.evaluate(phi, T, assignment) for phi in E.provenance]

    report = models.CompareReport(algebra=H.describe(), anchor=H.name(a), delta_subalgebra_size=T.n)
    mapping = []
    for cls in step.classes:
        images = {values[eta] for eta in cls}
        if len(images) != 1:
            break
        mapping.append(images.pop())
    else:
        f = Homomorphism(source=step.quotient, target=T, map=tuple(mapping))
        report.well_defined = f.is_homomorphism
        report.injective = f.is_injective
        report.surjective = f.is_surjective
        report.mapping = f.named()
    if not report.agree:
        logger.warning("H[Delta(%s)] and the sigma(%s)+ subalgebra disagree on %s", H.name(a), H.name(a), H.describe())
    return report


def open_statement_check(H: FiniteHeytingAlgebra, a: int, depth: int = 2, nvars: int = 2) -> models.OpenStatementReport:
    """Search for phi and parameters h with phi(sigma(a)+, sigma(h)) not the whole spectrum such that no d
    with sigma(a)+ inside sigma(d) has phi(sigma(d), sigma(h)) not the whole spectrum.

    Formulas are swept up to depth over variables p0 (the up-set) and p1.. (the parameters), one per term
    function on the up-set algebra. Counterexamples are recorded findings.
    """
    spec = spectrum(H)
    s = sigma(H, spec)
    U: UpSetAlgebra = s.target
    plus = U.index_of(sigma_plus(H, a, spec))
    sweep = terms.enumerate_term_functions([U], nvars, depth)
    candidates = np.array([x for x in sorted(set(s.map)) if U.ops.leq[plus, x]], dtype=np.int64)

    report = models.OpenStatementReport(algebra=H.describe(), anchor=H.name(a),
                                        bound=models.Bounds(depth=depth, nvars=nvars),
                                        exhausted=sweep.closed)
    columns = U.n ** (nvars - 1)
    inverse = s.inverse()
    for fn in sweep.functions:
        T = fn.tables[0].reshape(U.n, columns)
        open_at_plus = T[plus] != U.top
        if len(candidates):
            escapes = (T[candidates] != U.top).any(axis=0)
        else:
            escapes = np.zeros(columns, dtype=bool)
        report.instances += columns
        for p in np.flatnonzero(open_at_plus & ~escapes):
            params = np.unravel_index(int(p), (U.n,) * (nvars - 1)) if nvars > 1 else ()
            found = {"formula": to_text(fn.formula)}
            found.update({f"p{i + 1}": H.name(inverse(int(v))) for i, v in enumerate(params)})
            report.counterexamples.append(found)
    if report.counterexamples:
        logger.warning("Open statement fails %d times on %s at %s", len(report.counterexamples), H.describe(),
                       H.name(a))
    return report


def duality_roundtrip(P: FinitePoset) -> bool:
    """Whether the spectrum of the up-sets of P is isomorphic to P."""
    if P.points == 0:
        return True
    return spectrum(from_poset(P)).poset().is_isomorphic(P)
