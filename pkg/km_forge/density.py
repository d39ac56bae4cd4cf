"""Dense-over-a filters, the least dense element and KM-algebras."""
import logging
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from km_forge import errors, models, utils
from km_forge.algebra import Filter, FiniteHeytingAlgebra, Homomorphism

logger = logging.getLogger(__name__)


def dense_table(H: FiniteHeytingAlgebra) -> np.ndarray:
    """out[a, d] iff d is dense over a, i.e. a <= d and d -> a = a."""
    L, M, J, I = H.ops
    e = np.arange(H.n)
    return utils.readonly(L & (I.T == e[:, None]))


def dense_over(H: FiniteHeytingAlgebra, a: int) -> Filter:
    return Filter.of(H, np.flatnonzero(dense_table(H)[a]).tolist())


def dense_characterizations(H: FiniteHeytingAlgebra, a: int, d: int) -> models.DenseCharacterization:
    """Three equivalent readings of "d is dense over a": the definition, d -> a <= d, and d = h | (h -> a)
    for some h (the least such h is reported)."""
    L, M, J, I = H.ops
    witnesses = np.flatnonzero(J[np.arange(H.n), I[:, a]] == d)
    return models.DenseCharacterization(
        element=H.name(d),
        dense=bool(L[a, d] and I[d, a] == a),
        implication_below=bool(L[I[d, a], d]),
        join_form=len(witnesses) > 0,
        join_witness=H.name(int(witnesses[0])) if len(witnesses) else None,
    )


def delta_min(H: FiniteHeytingAlgebra, a: int) -> int:
    """The least element dense over a."""
    dense = np.flatnonzero(dense_table(H)[a]).tolist()
    least = H.meet_all(dense)
    if least not in dense:
        raise errors.ContractViolation(f"dense filter over {H.name(a)} in {H.describe()} has no least element")
    return least


def delta_table(H: FiniteHeytingAlgebra) -> Tuple[int, ...]:
    return tuple(delta_min(H, a) for a in H.elements)


class KMAlgebra(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: FiniteHeytingAlgebra
    delta: Tuple[int, ...]

    @cached_property
    def delta_array(self) -> np.ndarray:
        return utils.readonly(np.array(self.delta, dtype=np.int64))

    def __call__(self, x: int) -> int:
        return self.delta[x]

    def named(self) -> dict:
        return {self.base.name(x): self.base.name(d) for x, d in enumerate(self.delta)}


def km_axiom_failures(H: FiniteHeytingAlgebra, delta: Sequence[int]) -> List[models.KMAxiomCheck]:
    """One check per KM identity, with the first failing element (and y) as witness."""
    L, M, J, I = H.ops
    D = np.asarray(delta, dtype=np.int64)
    if D.shape != (H.n,) or ((D < 0) | (D >= H.n)).any():
        raise errors.AlgebraFormatError(f"a delta table needs one element of {H.describe()} per element")
    x = np.arange(H.n)
    checks = []
    for axiom, bad in (
        (models.KMAxiom.INFLATIONARY, ~L[x, D[x]]),
        (models.KMAxiom.RETRACTIVE, I[D[x], x] != x),
        (models.KMAxiom.BOUNDED, ~L[D[x][:, None], J[x[None, :], I[x[None, :], x[:, None]]]]),
    ):
        hit = utils.first_true(bad)
        checks.append(models.KMAxiomCheck(axiom=axiom, passed=hit is None,
                                          witness=[H.name(v) for v in hit] if hit else []))
    return checks


def km_from_heyting(H: FiniteHeytingAlgebra) -> KMAlgebra:
    """Delta as the least dense element, with the KM identities verified.

    Raises:
        AxiomViolation: some KM identity fails.
    """
    delta = delta_table(H)
    for check in km_axiom_failures(H, delta):
        if not check.passed:
            raise errors.AxiomViolation(f"{check.axiom} fails in {H.describe()} at {', '.join(check.witness)}")
    return KMAlgebra(base=H, delta=delta)


def km_from_table(H: FiniteHeytingAlgebra, delta: Sequence[int]) -> KMAlgebra:
    """A KM structure from a given delta table.

    Raises:
        AxiomViolation: the table breaks a KM identity.
        ContractViolation: the table satisfies the identities but is not the least dense element.
    """
    for check in km_axiom_failures(H, delta):
        if not check.passed:
            raise errors.AxiomViolation(f"{check.axiom} fails in {H.describe()} at {', '.join(check.witness)}")
    least = delta_table(H)
    if tuple(delta) != least:
        x = next(i for i, (d, m) in enumerate(zip(delta, least)) if d != m)
        raise errors.ContractViolation(
            f"KM table sends {H.name(x)} to {H.name(delta[x])}, least dense element is {H.name(least[x])}")
    return KMAlgebra(base=H, delta=tuple(int(d) for d in delta))


def km_axiom_report(H: FiniteHeytingAlgebra, delta: Optional[Sequence[int]] = None) -> models.KMAxiomReport:
    delta = tuple(delta) if delta is not None else delta_table(H)
    checks = km_axiom_failures(H, delta)
    report = models.KMAxiomReport(
        algebra=H.describe(),
        delta={H.name(x): H.name(d) for x, d in enumerate(delta)},
        checks=checks,
        matches_least_dense=delta == delta_table(H),
    )
    for check in checks:
        if not check.passed:
            report.violations.append(models.Violation(code=errors.AxiomViolation.code, message=str(check.axiom),
                                                      witness={"elements": check.witness}))
    if all(c.passed for c in checks) and not report.matches_least_dense:
        report.violations.append(models.Violation(code=errors.ContractViolation.code,
                                                  message="KM table differs from the least dense elements"))
    return report


def check_delta_identity(H: FiniteHeytingAlgebra, a: int, a2: int) -> bool:
    """(a -> h) & ((h -> a) -> a) = a2 -> h for every h; true exactly when a2 is the least dense element over a."""
    L, M, J, I = H.ops
    h = np.arange(H.n)
    return bool((M[I[a, h], I[I[h, a], a]] == I[a2, h]).all())


def push_filter(f: Homomorphism, F: Filter) -> Filter:
    """The filter of f's target generated by the image of F.

    Raises:
        ContractViolation: F has a least element b but f(b) is not the least element of the result.
    """
    T = f.target
    image = sorted({f(x) for x in F.members})
    members = np.flatnonzero(T.ops.leq[image].any(axis=0)).tolist()
    pushed = Filter.of(T, members)
    if F.least is not None and pushed.least != f(F.least):
        raise errors.ContractViolation(f"image of the least element {F.algebra.name(F.least)} is not least")
    return pushed


def delta_transport(f: Homomorphism, a: int) -> models.DeltaTransport:
    """Whether every element dense over f(a) lies above the image of one dense over a, and whether f then
    carries the least dense element over a to the least dense element over f(a)."""
    H, T = f.source, f.target
    dense_source = np.flatnonzero(dense_table(H)[a])
    dense_target = np.flatnonzero(dense_table(T)[f(a)])
    image = f.array[dense_source]
    hypothesis = bool(T.ops.leq[image[:, None], dense_target[None, :]].any(axis=0).all())
    commutes = delta_min(T, f(a)) == f(delta_min(H, a))
    return models.DeltaTransport(element=H.name(a), hypothesis=hypothesis, commutes=commutes)


def dense_report(H: FiniteHeytingAlgebra, a: int) -> models.DenseReport:
    F = dense_over(H, a)
    report = models.DenseReport(
        algebra=H.describe(),
        anchor=H.name(a),
        members=F.names(),
        least=H.name(F.least) if F.least is not None else None,
        characterizations=[dense_characterizations(H, a, d) for d in H.elements],
    )
    for c in report.characterizations:
        if not c.agree:
            report.violations.append(models.Violation(code=errors.TheoremViolation.code,
                                                      message=f"dense characterizations disagree at {c.element}"))
    return report


def delta_report(H: FiniteHeytingAlgebra, a: Optional[int] = None) -> models.DeltaReport:
    elements = [a] if a is not None else list(H.elements)
    return models.DeltaReport(algebra=H.describe(), delta={H.name(x): H.name(delta_min(H, x)) for x in elements})
