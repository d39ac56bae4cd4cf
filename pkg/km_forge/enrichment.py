"""One-step enrichment H[Delta(a)] and the machinery around it.

H[iota] is the subalgebra of the power of H indexed by the elements dense over a, generated by the constant
maps and the inclusion iota. Its quotient by the filter generated by the elements iota -> delta, delta
dense over a, adjoins a least dense element over a to H.

Element provenance follows one convention throughout: variable 0 is iota (or the identity map i of the
free algebra) and variable k + 1 is the constant map of element k.
"""
import logging
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from km_forge import errors, models, terms, utils
from km_forge.algebra import (DEFAULT_CAP, Filter, FiniteHeytingAlgebra, Homomorphism, PowerOracle,
                              filter_generated, generated_subalgebra, is_isomorphic, quotient_by_filter, same_algebra)
from km_forge.density import dense_table, delta_min, delta_table, km_from_heyting, KMAlgebra
from km_forge.formulas import Formula, to_text

logger = logging.getLogger(__name__)

# largest source algebra for composed witnesses
DEFAULT_MAX_SOURCE = 3


class EnrichedAlgebra(BaseModel):
    """A subalgebra of H^I generated by the constant maps and one more map, with provenance per element.

    For H[iota] the index I lists the elements dense over the anchor; for the free algebra H[i] it is all
    of H and there is no anchor.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: FiniteHeytingAlgebra
    anchor: Optional[int] = None
    dense_index: Tuple[int, ...]
    elements: Tuple[Tuple[int, ...], ...]
    provenance: Tuple[Formula, ...]
    iota: int
    # constants[h] is the element holding the constant map of h
    constants: Tuple[int, ...]
    algebra: FiniteHeytingAlgebra

    @cached_property
    def values(self) -> np.ndarray:
        return utils.readonly(np.array(self.elements, dtype=np.int64).reshape(len(self.elements), -1))

    @cached_property
    def element_index(self) -> Dict[Tuple[int, ...], int]:
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, values: Sequence[int]) -> int:
        key = tuple(int(v) for v in values)
        if key not in self.element_index:
            raise errors.ElementNotFound(f"map {key} is not in {self.algebra.describe()}")
        return self.element_index[key]

    def point(self, d: int) -> int:
        """Column of the index point d."""
        return self.dense_index.index(d)

    def assignment(self, generator, constants: Sequence[int]) -> list:
        return [generator] + list(constants)

    def provenance_values(self, eta: int) -> np.ndarray:
        """Provenance of eta evaluated at every index point."""
        H = self.base
        points = np.array(self.dense_index, dtype=np.int64)
        values = terms.evaluate(self.provenance[eta], H, self.assignment(points, list(H.elements)))
        return np.broadcast_to(np.asarray(values), points.shape)

    def provenance_mismatches(self) -> List[int]:
        return [eta for eta in range(self.size) if not np.array_equal(self.provenance_values(eta), self.values[eta])]

    def record(self, eta: int) -> models.ElementRecord:
        return models.ElementRecord(name=self.algebra.name(eta), values=[self.base.name(v) for v in self.elements[eta]],
                                    provenance=to_text(self.provenance[eta]))


def _enrich(H: FiniteHeytingAlgebra, index: Sequence[int], anchor: Optional[int], cap: int, label: str) -> EnrichedAlgebra:
    oracle = PowerOracle(H, len(index))
    generator = tuple(int(d) for d in index)
    constants = [oracle.constant(h) for h in H.elements]
    closure = generated_subalgebra(oracle, [generator] + constants, cap=cap, label=label)
    return EnrichedAlgebra(
        base=H,
        anchor=anchor,
        dense_index=generator,
        elements=closure.elements,
        provenance=closure.provenance,
        iota=closure.index_of(generator),
        constants=tuple(closure.index_of(c) for c in constants),
        algebra=closure.algebra,
    )


def build_iota_algebra(H: FiniteHeytingAlgebra, a: int, cap: int = DEFAULT_CAP) -> EnrichedAlgebra:
    """H[iota] inside the maps from the elements dense over a to H.

    Raises:
        CapExceeded: the closure exceeds cap elements.
    """
    index = np.flatnonzero(dense_table(H)[a]).tolist()
    E = _enrich(H, index, a, cap, label=f"{H.describe()}[iota at {H.name(a)}]")
    logger.debug("H[iota] for %s at %s: %d index points, %d elements", H.describe(), H.name(a), len(index), E.size)
    return E


def free_one_generator(H: FiniteHeytingAlgebra, cap: int = DEFAULT_CAP) -> EnrichedAlgebra:
    """H[i] inside the maps H -> H: generated by the constant maps and the identity map i.

    Raises:
        CapExceeded: the closure exceeds cap elements.
    """
    return _enrich(H, list(H.elements), None, cap, label=f"{H.describe()}[i]")


def dense_in_iota(E: EnrichedAlgebra) -> FrozenSet[int]:
    """Elements of H[iota] whose every value is dense over the anchor."""
    dense = dense_table(E.base)[E.anchor]
    return frozenset(np.flatnonzero(dense[E.values].all(axis=1)).tolist())


def build_fa(E: EnrichedAlgebra) -> Filter:
    """The filter generated by iota -> delta over all delta dense over the anchor.

    Raises:
        GeneratorMismatch: the filter differs from the one generated by iota -> d for constant dense d, or
            its generating set is not closed under meets.
    """
    A = E.algebra
    I, M = A.ops.impl, A.ops.meet
    full = sorted({int(I[E.iota, delta]) for delta in dense_in_iota(E)})
    constant = sorted({int(I[E.iota, E.constants[d]]) for d in E.dense_index})
    F = filter_generated(A, full)
    if F.members != filter_generated(A, constant).members:
        raise errors.GeneratorMismatch(f"filter of {A.describe()} depends on the choice of generators")
    generating = set(full)
    for x in full:
        for y in full:
            if int(M[x, y]) not in generating:
                raise errors.GeneratorMismatch(f"{A.name(x)} & {A.name(y)} leaves the generating set")
    return F


class OneStepResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    enriched: EnrichedAlgebra
    anchor: int
    fa: Filter
    quotient: FiniteHeytingAlgebra
    pi: Homomorphism
    embedding: Homomorphism
    delta_class: int

    @property
    def base(self) -> FiniteHeytingAlgebra:
        return self.enriched.base

    @property
    def classes(self) -> List[List[int]]:
        return self.pi.fibers()


def _require(ok: bool, part: models.TheoremPart, message: str):
    if not ok:
        raise errors.TheoremViolation(message, part=part)


def verify_one_step(step: OneStepResult):
    """Assert parts (a), (b), (c), partool, findone and iota -> eta = iota -> eta(1) on every table entry.

    Raises:
        TheoremViolation: naming the failed part.
    """
    E, H, Q = step.enriched, step.base, step.quotient
    A = E.algebra
    a, emb, pi = step.anchor, step.embedding, step.pi
    Part = models.TheoremPart

    dense_q = dense_table(Q)[emb(a)]
    _require(bool(dense_q[step.delta_class]) and bool(Q.ops.leq[step.delta_class, dense_q].all()),
             Part.LEAST_DELTA_CLASS, f"[iota] is not the least element dense over [{H.name(a)}]")
    in_iota = dense_in_iota(E)
    for eta in A.elements:
        if dense_q[pi(eta)] and eta not in in_iota:
            _require(False, Part.LEAST_DELTA_CLASS, f"[{A.name(eta)}] is dense but {A.name(eta)} is not")

    _require(emb.is_injective, Part.INJECTIVE, f"{H.describe()} does not embed")
    for h in H.elements:
        _require((emb(h) == Q.top) == (h == H.top), Part.INJECTIVE, f"{H.name(h)} falls into the filter")

    for b in H.elements:
        _require(delta_min(Q, emb(b)) == emb(delta_min(H, b)), Part.DELTA_PRESERVED,
                 f"least dense element over {H.name(b)} is not preserved")

    if E.anchor is None or H.degenerate:
        return
    L, M, I = H.ops.leq, H.ops.meet, H.ops.impl
    V = E.values
    points = np.array(E.dense_index)
    e = np.arange(H.n)
    # [h, x, y]: h & x = h & y over index points x, y
    same = M[e[:, None, None], points[None, :, None]] == M[e[:, None, None], points[None, None, :]]
    images = M[e[None, :, None, None], V[:, None, :, None]] != M[e[None, :, None, None], V[:, None, None, :]]
    hit = utils.first_true(same[None] & images)
    _require(hit is None, Part.PARTOOL,
             f"h & eta(x) differs from h & eta(y) at {hit and (A.name(hit[0]), H.name(hit[1]))}")

    top = E.point(H.top)
    for delta in sorted(in_iota):
        at_top = int(V[delta, top])
        _require(bool(L[at_top, V[delta, E.point(at_top)]]), Part.FINDONE, f"delta(1) > delta(delta(1)) for {A.name(delta)}")

    IA = A.ops.impl
    for eta in A.elements:
        _require(IA[E.iota, eta] == IA[E.iota, E.constants[int(V[eta, top])]], Part.IOTA_IDENTITY,
                 f"iota -> {A.name(eta)} differs from iota -> its value at 1")


def _trivial_step(H: FiniteHeytingAlgebra, cap: int) -> OneStepResult:
    E = _enrich(H, [H.top], H.top, cap, label=f"{H.describe()}[iota at {H.name(H.top)}]")
    pi = Homomorphism.verified(E.algebra, H, [int(E.values[eta, 0]) for eta in range(E.size)])
    return OneStepResult(enriched=E, anchor=H.top, fa=filter_generated(E.algebra, []), quotient=H, pi=pi,
                         embedding=Homomorphism.identity(H), delta_class=H.top)


def one_step(H: FiniteHeytingAlgebra, a: int, cap: int = DEFAULT_CAP) -> OneStepResult:
    """H[Delta(a)] = H[iota] / F_a, verified before it is returned.

    The anchor top needs no enrichment: the step is the identity on H.

    Raises:
        CapExceeded: H[iota] exceeds cap elements.
        TheoremViolation: a stated property of the construction fails.
    """
    if a == H.top:
        step = _trivial_step(H, cap)
    else:
        E = build_iota_algebra(H, a, cap)
        F = build_fa(E)
        Q, pi = quotient_by_filter(E.algebra, F, label=f"{H.describe()}[D({H.name(a)})]")
        embedding = Homomorphism(source=H, target=Q, map=tuple(pi(c) for c in E.constants))
        if not embedding.is_homomorphism:
            raise errors.TheoremViolation(f"constants of {H.describe()} do not map homomorphically",
                                          part=models.TheoremPart.INJECTIVE)
        step = OneStepResult(enriched=E, anchor=a, fa=F, quotient=Q, pi=pi, embedding=embedding,
                             delta_class=pi(E.iota))
        logger.debug("One step on %s at %s: %d elements, %d classes", H.describe(), H.name(a), E.size, Q.n)
    verify_one_step(step)
    return step


def collapse_violations(step: OneStepResult) -> List[str]:
    """Finite collapse: the quotient is isomorphic to H, sending [iota] to the least dense element over a."""
    H, Q = step.base, step.quotient
    expected = delta_min(H, step.anchor)
    out = []
    if not step.embedding.is_bijective:
        out.append("embedding is not onto")
    elif step.embedding.inverse()(step.delta_class) != expected:
        out.append("inverse of the embedding misplaces [iota]")
    iso = is_isomorphic(Q, H)
    if iso is None:
        out.append("quotient is not isomorphic to the base")
    elif delta_min(H, iso(step.embedding(step.anchor))) != iso(step.delta_class):
        out.append("isomorphism does not carry [iota] to the least dense element")
    return out


def one_step_report(step: OneStepResult) -> models.OneStepReport:
    E, Q, A = step.enriched, step.quotient, step.enriched.algebra
    report = models.OneStepReport(
        algebra=step.base.describe(),
        anchor=step.base.name(step.anchor),
        dense_index=[step.base.name(d) for d in E.dense_index],
        iota=A.name(E.iota),
        elements=[E.record(eta) for eta in range(E.size)],
        fa_basis=[A.name(x) for x in step.fa.basis],
        fa_members=step.fa.names(),
        classes=[[A.name(x) for x in cls] for cls in step.classes],
        delta_class=Q.name(step.delta_class),
        embedding=step.embedding.named(),
    )
    findings = collapse_violations(step)
    report.collapses_to_base = not findings
    report.violations = [models.Violation(code=errors.TheoremViolation.code, message=m) for m in findings]
    return report


# Universal property of H[i]


def evaluation_homomorphism(E: EnrichedAlgebra, point: int) -> Homomorphism:
    """Evaluation of the maps of E at an index point.

    Raises:
        NotAHomomorphism: evaluation does not preserve the operations.
    """
    column = E.point(point)
    return Homomorphism.verified(E.algebra, E.base, E.values[:, column].tolist())


def _provenance_map(E: EnrichedAlgebra, target: FiniteHeytingAlgebra, f: Homomorphism, value: int) -> List[int]:
    assignment = E.assignment(value, list(f.map))
    return [terms.evaluate(phi, target, assignment) for phi in E.provenance]


def free_extension(E: EnrichedAlgebra, f: Homomorphism, value: int) -> Homomorphism:
    """The extension of f: H -> H' to H[i] sending i to value.

    Raises:
        NotWellDefined: the extension is not a homomorphism.
    """
    mapping = _provenance_map(E, f.target, f, value)
    extension = Homomorphism(source=E.algebra, target=f.target, map=tuple(mapping))
    failures = extension.check()
    if failures:
        raise errors.NotWellDefined(f"sending i to {f.target.name(value)}: {failures[0]}")
    return extension


class Witness(BaseModel):
    """Certificate that f: A -> B stays in the variety generated by A with constants.

    S is a subalgebra of A^I containing the diagonal, given by a membership oracle, and q: S -> B is onto
    with q(diagonal(x)) = f(x).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    homomorphism: Homomorphism
    index_kind: models.IndexKind
    index: Tuple[Any, ...]
    contains: Callable[[Any], bool]
    project: Callable[[Any], int]
    diagonal: Callable[[int], Any]

    @property
    def source(self) -> FiniteHeytingAlgebra:
        return self.homomorphism.source

    @property
    def target(self) -> FiniteHeytingAlgebra:
        return self.homomorphism.target

    def violations(self) -> List[str]:
        out = []
        for x in self.source.elements:
            d = self.diagonal(x)
            if not self.contains(d):
                out.append(f"diagonal of {self.source.name(x)} is outside S")
            elif self.project(d) != self.homomorphism(x):
                out.append(f"q(diagonal of {self.source.name(x)}) != f({self.source.name(x)})")
        return out


def witness_for_onestep(step: OneStepResult) -> Witness:
    """S = H[iota] over the dense index, q = the quotient map."""
    E = step.enriched
    width = len(E.dense_index)
    witness = Witness(
        homomorphism=step.embedding,
        index_kind=models.IndexKind.FINITE,
        index=E.dense_index,
        contains=lambda t: tuple(t) in E.element_index,
        project=lambda t: step.pi(E.element_index[tuple(t)]),
        diagonal=lambda x: (x,) * width,
    )
    failures = witness.violations()
    if failures:
        raise errors.ContractViolation(f"one-step witness: {failures[0]}")
    return witness


def trivial_witness(f: Homomorphism) -> Witness:
    """A single index point with S = A; valid for onto f."""
    if not f.is_surjective:
        raise errors.ContractViolation("a single index point only witnesses onto homomorphisms")
    return Witness(
        homomorphism=f,
        index_kind=models.IndexKind.FINITE,
        index=(0,),
        contains=lambda t: len(t) == 1 and 0 <= t[0] < f.source.n,
        project=lambda t: f(t[0]),
        diagonal=lambda x: (x,),
    )


def compose_witnesses(w1: Witness, w2: Witness, max_source: int = DEFAULT_MAX_SOURCE) -> Witness:
    """Witness for g after f from witnesses for f: A -> B and g: B -> C.

    Elements of the composed S are J-tuples of elements of S1 (so maps on I x J); membership requires
    every column in S1 and the projected tuple in S2.

    Raises:
        CapExceeded: A has more than max_source elements.
    """
    if w1.source.n > max_source:
        raise errors.CapExceeded(f"composed witnesses are limited to {max_source}-element sources", cap=max_source)
    if not same_algebra(w1.target, w2.source):
        raise errors.ContractViolation("composed witnesses do not meet")

    def contains(u) -> bool:
        return (len(u) == len(w2.index) and all(w1.contains(s) for s in u)
                and w2.contains(tuple(w1.project(s) for s in u)))

    witness = Witness(
        homomorphism=w1.homomorphism.then(w2.homomorphism),
        index_kind=models.IndexKind.PRODUCT,
        index=tuple((i, j) for i in w1.index for j in w2.index),
        contains=contains,
        project=lambda u: w2.project(tuple(w1.project(s) for s in u)),
        diagonal=lambda x: (w1.diagonal(x),) * len(w2.index),
    )
    failures = witness.violations()
    if failures:
        raise errors.ContractViolation(f"composed witness: {failures[0]}")
    return witness


# Extension along H -> H[Delta(a)]


def extend_hom(step: OneStepResult, f: Homomorphism, target_delta: int,
               witness: Optional[Witness] = None) -> Homomorphism:
    """The unique extension of f: H -> H' to H[Delta(a)] sending [iota] to target_delta.

    The class of phi(iota, h1, ...) goes to phi(target_delta, f(h1), ...).

    Raises:
        DeltaMismatch: target_delta is not the least element dense over f(a).
        NotWellDefined: members of one class disagree, or the result is not a homomorphism.
    """
    H, T, E = step.base, f.target, step.enriched
    if not same_algebra(f.source, H):
        raise errors.ContractViolation("extended homomorphism must start at the enriched algebra's base")
    if witness is not None:
        failures = witness.violations()
        if failures or witness.homomorphism.map != f.map:
            raise errors.NotWellDefined(f"witness does not certify the homomorphism: {failures[:1]}")
    expected = delta_min(T, f(step.anchor))
    if target_delta != expected:
        raise errors.DeltaMismatch(f"{T.name(target_delta)} is not the least element dense over "
                                   f"{T.name(f(step.anchor))}; expected {T.name(expected)}")

    values = _provenance_map(E, T, f, target_delta)
    mapping = []
    for cls in step.classes:
        images = {values[eta] for eta in cls}
        if len(images) != 1:
            raise errors.NotWellDefined(f"class of {E.algebra.name(cls[0])} has images "
                                        f"{sorted(T.name(v) for v in images)}")
        mapping.append(images.pop())
    extension = Homomorphism(source=step.quotient, target=T, map=tuple(mapping))
    failures = extension.check()
    if failures:
        raise errors.NotWellDefined(failures[0])
    if step.embedding.then(extension).map != f.map:
        raise errors.ContractViolation("extension does not restrict to the given homomorphism")
    return extension


class IsoCommute(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    first: OneStepResult
    first_then_second: OneStepResult
    second: OneStepResult
    second_then_first: OneStepResult
    forward: Homomorphism
    backward: Homomorphism

    def report(self) -> models.IsoCommuteReport:
        H = self.first.base
        into_ab = self.first.embedding.then(self.first_then_second.embedding)
        into_ba = self.second.embedding.then(self.second_then_first.embedding)
        AB, BA = self.first_then_second.quotient, self.second_then_first.quotient
        deltas_match = all(self.forward(delta_min(AB, into_ab(x))) == delta_min(BA, into_ba(x))
                           for x in (self.first.anchor, self.second.anchor))
        return models.IsoCommuteReport(algebra=H.describe(), first=H.name(self.first.anchor),
                                       second=H.name(self.second.anchor), forward=self.forward.named(),
                                       fixes_base=into_ab.then(self.forward).map == into_ba.map,
                                       deltas_match=deltas_match)


def _double_step(H: FiniteHeytingAlgebra, a: int, b: int, cap: int) -> Tuple[OneStepResult, OneStepResult]:
    step = one_step(H, a, cap)
    return step, one_step(step.quotient, step.embedding(b), cap)


def _extend_twice(outer: OneStepResult, inner: OneStepResult, f: Homomorphism) -> Homomorphism:
    T = f.target
    a = outer.anchor
    g = extend_hom(outer, f, delta_min(T, f(a)))
    b = inner.anchor
    return extend_hom(inner, g, delta_min(T, g(b)))


def commute_iso(H: FiniteHeytingAlgebra, a: int, b: int, cap: int = DEFAULT_CAP) -> IsoCommute:
    """The isomorphism H[D(a)][D(b)] -> H[D(b)][D(a)] fixing H and matching the adjoined elements.

    Raises:
        ContractViolation: the two extensions do not compose to identities.
    """
    ab_first, ab = _double_step(H, a, b, cap)
    ba_first, ba = _double_step(H, b, a, cap)
    into_ab = ab_first.embedding.then(ab.embedding)
    into_ba = ba_first.embedding.then(ba.embedding)
    forward = _extend_twice(ab_first, ab, into_ba)
    backward = _extend_twice(ba_first, ba, into_ab)

    AB, BA = ab.quotient, ba.quotient
    if forward.then(backward).map != tuple(AB.elements) or backward.then(forward).map != tuple(BA.elements):
        raise errors.ContractViolation(f"extensions between double enrichments of {H.describe()} are not inverse")
    if into_ab.then(forward).map != into_ba.map:
        raise errors.ContractViolation("isomorphism moves the embedded base")
    for x in (a, b):
        if forward(delta_min(AB, into_ab(x))) != delta_min(BA, into_ba(x)):
            raise errors.ContractViolation(f"isomorphism does not match the adjoined element for {H.name(x)}")
    return IsoCommute(first=ab_first, first_then_second=ab, second=ba_first, second_then_first=ba,
                      forward=forward, backward=backward)


# Iteration to a KM-algebra


class KMCompletion(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    km: KMAlgebra
    embedding: Homomorphism
    rounds: int
    steps: int

    def report(self) -> models.KMReport:
        """Delta read back in H through the embedding."""
        H = self.embedding.source
        back = self.embedding.inverse()
        delta = {H.name(x): H.name(back(self.km(self.embedding(x)))) for x in H.elements}
        return models.KMReport(algebra=H.describe(), rounds=self.rounds, steps=self.steps, delta=delta,
                               matches_least_dense=tuple(back(self.km(self.embedding(x))) for x in H.elements)
                               == delta_table(H))


def _preserves_delta(f: Homomorphism) -> bool:
    return all(f(delta_min(f.source, x)) == delta_min(f.target, f(x)) for x in f.source.elements)


def km_completion(H: FiniteHeytingAlgebra, round_cap: int = 8, cap: int = DEFAULT_CAP) -> KMCompletion:
    """Adjoin least dense elements for every element, round after round, until a round changes nothing.

    Each round enriches at every element of the current algebra in ascending order. A round is a no-op when
    its embedding is onto and preserves every least dense element.

    Raises:
        RoundCapExceeded: no stable round within round_cap rounds.
        ContractViolation: the result disagrees with the least dense elements of H.
    """
    current = H
    embedding = Homomorphism.identity(H)
    steps = 0
    for rounds in range(1, round_cap + 1):
        start = current
        round_embedding = Homomorphism.identity(start)
        for x in start.elements:
            step = one_step(current, round_embedding(x), cap)
            round_embedding = round_embedding.then(step.embedding)
            current = step.quotient
            steps += 1
        embedding = embedding.then(round_embedding)
        if round_embedding.is_bijective and _preserves_delta(round_embedding):
            km = km_from_heyting(current)
            if not embedding.is_bijective or not _preserves_delta(embedding):
                raise errors.ContractViolation(f"completion of {H.describe()} disagrees with its least dense elements")
            logger.debug("Completion of %s stable after %d rounds, %d steps", H.describe(), rounds, steps)
            return KMCompletion(km=km, embedding=embedding, rounds=rounds, steps=steps)
    raise errors.RoundCapExceeded(f"completion of {H.describe()} not stable after {round_cap} rounds", rounds=round_cap)


def variety_preservation(H: FiniteHeytingAlgebra, Q: FiniteHeytingAlgebra, nvars: int = 2, depth: int = 3) -> List[str]:
    """Identities up to the bounds that hold in H but fail in Q."""
    sweep = terms.enumerate_term_functions([H, Q], nvars, depth)
    return [f"{to_text(lhs)} = {to_text(rhs)}" for lhs, rhs in sweep.collisions]
