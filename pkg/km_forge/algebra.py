"""Finite Heyting algebras as table-backed immutable values.

Elements are dense integer indices and every operation is a table lookup. The numpy views in
``FiniteHeytingAlgebra.ops`` are read-only and built once per algebra.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import cached_property, reduce
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from km_forge import errors, models, utils
from km_forge.formulas import BOT, TOP, Formula, Impl, Join, Meet, Var

logger = logging.getLogger(__name__)

DEFAULT_CAP = models.DEFAULT_CAP

BoolTable = Tuple[Tuple[bool, ...], ...]
IntTable = Tuple[Tuple[int, ...], ...]


def _tuples(array: np.ndarray) -> tuple:
    return tuple(tuple(row) for row in array.tolist())


def is_partial_order(rel: np.ndarray) -> bool:
    """Reflexive, antisymmetric and transitive."""
    if not rel[np.diag_indices_from(rel)].all():
        return False
    if (rel & rel.T).sum() > len(rel):
        return False
    closure = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    return not (closure & ~rel).any()


def cover_relation(leq: np.ndarray) -> np.ndarray:
    """out[i, j] iff j covers i."""
    lt = leq.copy()
    lt[np.diag_indices_from(lt)] = False
    between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
    return lt & ~between


class FinitePoset(BaseModel):
    model_config = ConfigDict(frozen=True)

    points: int
    leq: BoolTable
    labels: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_partial_order(self) -> "FinitePoset":
        if len(self.leq) != self.points or any(len(row) != self.points for row in self.leq):
            raise ValueError(f"order table must be {self.points}x{self.points}")
        if self.points and not is_partial_order(self.order):
            raise ValueError("relation is not a partial order")
        if self.labels and len(self.labels) != self.points:
            raise ValueError("one label per point")
        return self

    @classmethod
    def from_relation(cls, rel: np.ndarray, labels: Sequence[str] = ()) -> "FinitePoset":
        rel = np.asarray(rel, dtype=bool).reshape(len(rel), len(rel))
        return cls(points=len(rel), leq=_tuples(rel), labels=tuple(labels))

    @classmethod
    def chain(cls, k: int) -> "FinitePoset":
        i = np.arange(k)
        return cls.from_relation(i[:, None] <= i[None, :])

    @classmethod
    def antichain(cls, k: int) -> "FinitePoset":
        return cls.from_relation(np.eye(k, dtype=bool))

    @cached_property
    def order(self) -> np.ndarray:
        return utils.readonly(np.array(self.leq, dtype=bool).reshape(self.points, self.points))

    def label(self, p: int) -> str:
        return self.labels[p] if self.labels else str(p)

    def is_up_set(self, points: Iterable[int]) -> bool:
        members = set(points)
        return all(self.order[p, q] <= (q in members) for p in members for q in range(self.points))

    def up_sets(self) -> List[FrozenSet[int]]:
        """All up-sets, ordered by size and then lexicographically."""
        return [frozenset(c) for r in range(self.points + 1)
                for c in itertools.combinations(range(self.points), r) if self.is_up_set(c)]

    def down_sets(self) -> List[FrozenSet[int]]:
        complement = set(range(self.points))
        return [frozenset(complement - u) for u in self.up_sets()]

    def extended(self, below: FrozenSet[int]) -> "FinitePoset":
        """A copy with one new point placed above exactly the points of the down-set `below`."""
        k = self.points
        rel = np.zeros((k + 1, k + 1), dtype=bool)
        rel[:k, :k] = self.order
        rel[k, k] = True
        for p in below:
            rel[p, k] = True
        return FinitePoset.from_relation(rel)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.points))
        g.add_edges_from(zip(*np.nonzero(cover_relation(self.order))))
        return g

    def is_isomorphic(self, other: "FinitePoset") -> bool:
        return self.points == other.points and nx.is_isomorphic(self.graph(), other.graph())


class AlgebraArrays(NamedTuple):
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    impl: np.ndarray


class FiniteHeytingAlgebra(BaseModel):
    """A finite Heyting algebra given by its order and operation tables.

    Instances are built through ``from_tables``, ``from_order``, ``from_poset`` or ``chain`` and checked by
    ``validate`` unless the caller opts out; an unchecked instance is only a candidate.
    """
    model_config = ConfigDict(frozen=True)

    names: Tuple[str, ...]
    leq: BoolTable
    meet: IntTable
    join: IntTable
    impl: IntTable
    bot: int
    top: int
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(self.n)

    @property
    def degenerate(self) -> bool:
        return self.n == 1

    @cached_property
    def ops(self) -> AlgebraArrays:
        n = self.n
        dtype = utils.table_dtype(n)
        return AlgebraArrays(
            leq=utils.readonly(np.array(self.leq, dtype=bool).reshape(n, n)),
            meet=utils.readonly(np.array(self.meet, dtype=dtype).reshape(n, n)),
            join=utils.readonly(np.array(self.join, dtype=dtype).reshape(n, n)),
            impl=utils.readonly(np.array(self.impl, dtype=dtype).reshape(n, n)),
        )

    @cached_property
    def name_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @classmethod
    def from_tables(cls, leq, meet, join, impl, bot: int, top: int, names: Optional[Sequence[str]] = None,
                    label: str = "", check: bool = True) -> "FiniteHeytingAlgebra":
        leq = np.asarray(leq, dtype=bool)
        n = len(leq)
        algebra = cls(
            names=tuple(names) if names is not None else tuple(str(i) for i in range(n)),
            leq=_tuples(leq),
            meet=_tuples(np.asarray(meet)),
            join=_tuples(np.asarray(join)),
            impl=_tuples(np.asarray(impl)),
            bot=int(bot),
            top=int(top),
            label=label,
        )
        if check:
            report = validate(algebra)
            if not report.passed:
                raise errors.AlgebraValidationError(report.violations[0].message, report=report)
        return algebra

    def name(self, x: int) -> str:
        return self.names[x]

    def element(self, ref: Union[int, str]) -> int:
        """Resolve an element by name, or by index when no element carries that name."""
        if isinstance(ref, str):
            if ref in self.name_index:
                return self.name_index[ref]
            try:
                ref = int(ref)
            except ValueError:
                raise errors.ElementNotFound(f"no element named {ref!r} in {self.describe()}")
        if not 0 <= ref < self.n:
            raise errors.ElementNotFound(f"element index {ref} out of range for {self.describe()}")
        return int(ref)

    def le(self, x: int, y: int) -> bool:
        return bool(self.ops.leq[x, y])

    def biimp(self, x, y):
        m, i = self.ops.meet, self.ops.impl
        return m[i[x, y], i[y, x]]

    def neg(self, x):
        return self.ops.impl[x, self.bot]

    def up_set(self, x: int) -> FrozenSet[int]:
        return frozenset(np.flatnonzero(self.ops.leq[x, :]).tolist())

    def down_set(self, x: int) -> FrozenSet[int]:
        return frozenset(np.flatnonzero(self.ops.leq[:, x]).tolist())

    def meet_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda x, y: int(self.ops.meet[x, y]), xs, self.top)

    def join_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda x, y: int(self.ops.join[x, y]), xs, self.bot)

    def minimal(self, xs: Iterable[int]) -> Tuple[int, ...]:
        xs = sorted(set(xs))
        return tuple(x for x in xs if not any(y != x and self.ops.leq[y, x] for y in xs))

    def describe(self) -> str:
        return self.label or f"algebra of {self.n} elements"


class UpSetAlgebra(FiniteHeytingAlgebra):
    """The algebra of up-sets of a finite poset, remembering which up-set every element is."""
    poset: FinitePoset
    up_sets: Tuple[FrozenSet[int], ...]

    @cached_property
    def up_set_lookup(self) -> Dict[FrozenSet[int], int]:
        return {u: i for i, u in enumerate(self.up_sets)}

    def index_of(self, up_set: Iterable[int]) -> int:
        key = frozenset(up_set)
        if key not in self.up_set_lookup:
            raise errors.ElementNotFound(f"{sorted(key)} is not an up-set of the poset")
        return self.up_set_lookup[key]


def _failure(group: models.AxiomGroup, H: FiniteHeytingAlgebra, mask: np.ndarray, detail: str) -> models.AxiomCheck:
    hit = utils.first_true(mask)
    if hit is None:
        return models.AxiomCheck(group=group, passed=True)
    return models.AxiomCheck(group=group, passed=False, witness=[H.name(x) for x in hit],
                             detail=f"{detail} fails at ({', '.join(H.name(x) for x in hit)})")


def validate(H: FiniteHeytingAlgebra) -> models.ValidationReport:
    """Check candidate tables against every Heyting algebra axiom group.

    Each group reports the first failing tuple in lexicographic order; a failure in one group never stops
    the others from being checked.

    Returns:
        ValidationReport with one check per axiom group and one violation per failed group.
    """
    n = H.n
    tables = [np.asarray(t) for t in (H.meet, H.join, H.impl)]
    if any(t.shape != (n, n) for t in tables) or np.asarray(H.leq).shape != (n, n):
        raise errors.AlgebraFormatError(f"tables of {H.describe()} must all be {n}x{n}")
    if any(((t < 0) | (t >= n)).any() for t in tables) or not (0 <= H.bot < n and 0 <= H.top < n):
        raise errors.AlgebraFormatError(f"table entries of {H.describe()} must be element indices")
    L, M, J, I = H.ops
    x, y, z = np.indices((n, n, n))

    order = ~L[x, x] | (L[x, y] & L[y, x] & (x != y)) | (L[x, y] & L[y, z] & ~L[x, z])
    lattice = (~L[M[x, y], x] | ~L[M[x, y], y] | (L[z, x] & L[z, y] & ~L[z, M[x, y]])
               | ~L[x, J[x, y]] | ~L[y, J[x, y]] | (L[x, z] & L[y, z] & ~L[J[x, y], z]))
    distributivity = M[x, J[y, z]] != J[M[x, y], M[x, z]]
    residuation = L[M[x, y], z] != L[x, I[y, z]]
    e = np.arange(n)
    bounds = ~L[H.bot, e] | ~L[e, H.top] | (I[e, e] != H.top) | (I[H.top, e] != e)

    checks = [
        _failure(models.AxiomGroup.ORDER, H, order, "partial order"),
        _failure(models.AxiomGroup.LATTICE, H, lattice, "meet/join as greatest lower/least upper bound"),
        _failure(models.AxiomGroup.DISTRIBUTIVITY, H, distributivity, "x & (y | z) = (x & y) | (x & z)"),
        _failure(models.AxiomGroup.RESIDUATION, H, residuation, "x & y <= z iff x <= y -> z"),
        _failure(models.AxiomGroup.BOUNDS, H, bounds, "bounds and x -> x = 1, 1 -> x = x"),
    ]
    violations = [models.Violation(code=errors.AlgebraValidationError.code, message=f"{c.group}: {c.detail}",
                                   witness={"group": str(c.group), "elements": c.witness})
                  for c in checks if not c.passed]
    return models.ValidationReport(algebra=H.describe(), size=n, checks=checks, violations=violations)


def _signature_lookup(rows: np.ndarray) -> Dict[bytes, int]:
    return {rows[i].tobytes(): i for i in range(len(rows))}


def _not_a_lattice(group: models.AxiomGroup, names: Sequence[str], witness: Tuple[int, ...], label: str, detail: str):
    check = models.AxiomCheck(group=group, passed=False, witness=[names[i] for i in witness],
                              detail=f"{detail} at ({', '.join(names[i] for i in witness)})")
    report = models.ValidationReport(
        algebra=label, size=len(names), checks=[check],
        violations=[models.Violation(code=errors.AlgebraValidationError.code, message=f"{group}: {check.detail}",
                                     witness={"group": str(group), "elements": check.witness})])
    raise errors.AlgebraValidationError(report.violations[0].message, report=report)


def from_order(leq, names: Optional[Sequence[str]] = None, label: str = "") -> FiniteHeytingAlgebra:
    """Derive meet, join and implication from an order table and validate the result.

    Raises:
        AlgebraValidationError: the order is not a Heyting algebra; the error carries the report.
    """
    L = np.asarray(leq, dtype=bool)
    n = len(L)
    names = list(names) if names is not None else [str(i) for i in range(n)]
    if L.shape != (n, n) or len(names) != n:
        raise errors.AlgebraFormatError(f"order table must be {len(names)}x{len(names)}")
    if n == 0:
        raise errors.AlgebraFormatError("an algebra needs at least one element")
    if not is_partial_order(L):
        report = validate_order_only(L, names, label)
        raise errors.AlgebraValidationError(report.violations[0].message, report=report)

    # join via up-set signatures, meet via down-set signatures
    ups, downs = _signature_lookup(L), _signature_lookup(np.ascontiguousarray(L.T))
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for x, y in itertools.product(range(n), repeat=2):
        above = (L[x] & L[y]).tobytes()
        below = (L[:, x] & L[:, y]).tobytes()
        if above not in ups:
            _not_a_lattice(models.AxiomGroup.LATTICE, names, (x, y), label, "no least upper bound")
        if below not in downs:
            _not_a_lattice(models.AxiomGroup.LATTICE, names, (x, y), label, "no greatest lower bound")
        join[x, y] = ups[above]
        meet[x, y] = downs[below]

    x, y, z = np.indices((n, n, n))
    hit = utils.first_true(meet[x, join[y, z]] != join[meet[x, y], meet[x, z]])
    if hit is not None:
        _not_a_lattice(models.AxiomGroup.DISTRIBUTIVITY, names, hit, label, "x & (y | z) = (x & y) | (x & z) fails")

    # impl(y, z) is the element whose down-set is {c : c & y <= z}
    impl = np.zeros((n, n), dtype=np.int64)
    for y, z in itertools.product(range(n), repeat=2):
        below = L[meet[:, y], z].tobytes()
        if below not in downs:
            _not_a_lattice(models.AxiomGroup.RESIDUATION, names, (y, z), label, "no relative pseudo-complement")
        impl[y, z] = downs[below]

    bot = int(np.argmax(L.sum(axis=1)))
    top = int(np.argmax(L.sum(axis=0)))
    return FiniteHeytingAlgebra.from_tables(L, meet, join, impl, bot, top, names=names, label=label)


def validate_order_only(L: np.ndarray, names: Sequence[str], label: str) -> models.ValidationReport:
    n = len(L)
    x, y, z = np.indices((n, n, n))
    mask = ~L[x, x] | (L[x, y] & L[y, x] & (x != y)) | (L[x, y] & L[y, z] & ~L[x, z])
    hit = utils.first_true(mask)
    witness = [names[i] for i in hit] if hit else []
    check = models.AxiomCheck(group=models.AxiomGroup.ORDER, passed=False, witness=witness,
                              detail=f"partial order fails at ({', '.join(witness)})")
    return models.ValidationReport(
        algebra=label, size=n, checks=[check],
        violations=[models.Violation(code=errors.AlgebraValidationError.code, message=f"order: {check.detail}",
                                     witness={"group": "order", "elements": witness})])


def _fraction_name(i: int, n: int) -> str:
    if n == 1:
        return "0"
    return str(Fraction(i, n - 1))


def chain(n: int) -> FiniteHeytingAlgebra:
    """The n-element chain 0 < 1/(n-1) < ... < 1; the 3-chain reads 0 < 1/2 < 1."""
    if n < 1:
        raise errors.DomainError(f"a chain needs at least one element, got {n}")
    i = np.arange(n)
    return from_order(i[:, None] <= i[None, :], names=[_fraction_name(k, n) for k in range(n)], label=f"chain-{n}")


def boolean(k: int) -> UpSetAlgebra:
    """The Boolean algebra with k atoms."""
    return from_poset(FinitePoset.antichain(k), label=f"boolean-{2 ** k}")


def _up_set_name(P: FinitePoset, u: FrozenSet[int]) -> str:
    return "{" + ",".join(P.label(p) for p in sorted(u)) + "}"


def from_poset(P: FinitePoset, label: str = "") -> UpSetAlgebra:
    """The Heyting algebra of up-sets of P.

    Meet is intersection, join is union and impl(U, V) is the complement of the down-closure of U - V.
    The empty poset gives the degenerate one-element algebra.
    """
    up_sets = P.up_sets()
    index = {u: i for i, u in enumerate(up_sets)}
    n = len(up_sets)
    everything = frozenset(range(P.points))
    order = P.order

    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    impl = np.zeros((n, n), dtype=np.int64)
    leq = np.zeros((n, n), dtype=bool)
    for (i, u), (j, v) in itertools.product(enumerate(up_sets), repeat=2):
        leq[i, j] = u <= v
        meet[i, j] = index[u & v]
        join[i, j] = index[u | v]
        down = {p for p in range(P.points) for q in u - v if order[p, q]}
        impl[i, j] = index[everything - down]

    algebra = UpSetAlgebra(
        names=tuple(_up_set_name(P, u) for u in up_sets),
        leq=_tuples(leq), meet=_tuples(meet), join=_tuples(join), impl=_tuples(impl),
        bot=index[frozenset()], top=index[everything],
        label=label or f"upsets({P.points} points)",
        poset=P, up_sets=tuple(up_sets),
    )
    if algebra.degenerate:
        logger.debug("Empty poset gives the degenerate algebra")
    return algebra


# Filters


class Filter(BaseModel):
    model_config = ConfigDict(frozen=True)

    algebra: FiniteHeytingAlgebra
    members: FrozenSet[int]
    # minimal members; a single entry means the filter is principal
    basis: Tuple[int, ...]

    @classmethod
    def of(cls, H: FiniteHeytingAlgebra, members: Iterable[int]) -> "Filter":
        members = frozenset(int(m) for m in members)
        return cls(algebra=H, members=members, basis=H.minimal(members))

    def __contains__(self, x: int) -> bool:
        return int(x) in self.members

    @property
    def least(self) -> Optional[int]:
        return self.basis[0] if len(self.basis) == 1 else None

    @property
    def is_principal(self) -> bool:
        return len(self.basis) == 1

    @property
    def is_proper(self) -> bool:
        return self.algebra.bot not in self.members

    def mask(self) -> np.ndarray:
        out = np.zeros(self.algebra.n, dtype=bool)
        out[list(self.members)] = True
        return out

    def violations(self) -> List[str]:
        """Broken filter invariants, empty for a genuine filter."""
        H = self.algebra
        out = []
        if H.top not in self.members:
            out.append("does not contain top")
        for x in sorted(self.members):
            above = H.up_set(x) - self.members
            if above:
                out.append(f"not up-closed: {H.name(x)} <= {H.name(min(above))}")
            for y in sorted(self.members):
                if int(H.ops.meet[x, y]) not in self.members:
                    out.append(f"not meet-closed: {H.name(x)} & {H.name(y)}")
        return out

    def names(self) -> List[str]:
        return [self.algebra.name(x) for x in sorted(self.members)]


def principal_filter(H: FiniteHeytingAlgebra, x: int) -> Filter:
    return Filter(algebra=H, members=H.up_set(x), basis=(x,))


def filter_generated(H: FiniteHeytingAlgebra, gens: Iterable[int]) -> Filter:
    """The least filter containing gens: the up-closure of the meet of gens (finite algebras)."""
    return principal_filter(H, H.meet_all(gens))


def quotient_by_filter(H: FiniteHeytingAlgebra, F: Filter, label: str = "") -> Tuple[FiniteHeytingAlgebra, "Homomorphism"]:
    """Quotient H by the congruence x ~ y iff (x -> y) & (y -> x) lies in F.

    Classes are numbered in order of their least member and named ``[rep]`` after it.

    Returns:
        The quotient algebra and the onto projection from H.
    """
    n = H.n
    inside = F.mask()
    related = inside[H.biimp(*np.indices((n, n)))]
    projection = [-1] * n
    reps = []
    for x in range(n):
        if projection[x] < 0:
            for y in np.flatnonzero(related[x]):
                projection[y] = len(reps)
            reps.append(x)
    proj = np.array(projection)
    rep = np.array(reps)
    L, M, J, I = H.ops
    Q = FiniteHeytingAlgebra.from_tables(
        leq=inside[I[rep[:, None], rep[None, :]]],
        meet=proj[M[rep[:, None], rep[None, :]]],
        join=proj[J[rep[:, None], rep[None, :]]],
        impl=proj[I[rep[:, None], rep[None, :]]],
        bot=proj[H.bot], top=proj[H.top],
        names=[f"[{H.name(r)}]" for r in reps],
        label=label or f"{H.describe()}/filter",
        check=False,
    )
    logger.debug("Quotient of %s by a filter of %d members has %d classes", H.describe(), len(F.members), Q.n)
    return Q, Homomorphism.verified(H, Q, tuple(int(p) for p in proj))


# Homomorphisms


def same_algebra(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra) -> bool:
    """Equal names and tables."""
    fields = ("names", "leq", "meet", "join", "impl", "bot", "top")
    return A is B or all(getattr(A, f) == getattr(B, f) for f in fields)


class Homomorphism(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: FiniteHeytingAlgebra
    target: FiniteHeytingAlgebra
    map: Tuple[int, ...]

    @classmethod
    def verified(cls, source: FiniteHeytingAlgebra, target: FiniteHeytingAlgebra, mapping: Sequence[int]) -> "Homomorphism":
        """Build a homomorphism, raising NotAHomomorphism when the map does not preserve the operations."""
        f = cls(source=source, target=target, map=tuple(int(v) for v in mapping))
        failures = f.check()
        if failures:
            raise errors.NotAHomomorphism(f"{source.describe()} -> {target.describe()}: {failures[0]}")
        return f

    @classmethod
    def identity(cls, H: FiniteHeytingAlgebra) -> "Homomorphism":
        return cls(source=H, target=H, map=tuple(H.elements))

    def __call__(self, x: int) -> int:
        return self.map[x]

    @cached_property
    def array(self) -> np.ndarray:
        return utils.readonly(np.array(self.map, dtype=np.int64))

    def check(self) -> List[str]:
        """Preservation failures, each naming its first witness; empty for a homomorphism."""
        S, T, f = self.source, self.target, self.array
        if len(f) != S.n or ((f < 0) | (f >= T.n)).any():
            return [f"map must send each of {S.n} elements into {T.n} elements"]
        out = []
        if f[S.bot] != T.bot:
            out.append("bottom not preserved")
        if f[S.top] != T.top:
            out.append("top not preserved")
        x, y = np.indices((S.n, S.n))
        for op in ("meet", "join", "impl"):
            bad = f[getattr(S.ops, op)] != getattr(T.ops, op)[f[x], f[y]]
            hit = utils.first_true(bad)
            if hit is not None:
                out.append(f"{op} not preserved at ({S.name(hit[0])}, {S.name(hit[1])})")
        return out

    @property
    def is_homomorphism(self) -> bool:
        return not self.check()

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_surjective(self) -> bool:
        return set(self.map) == set(self.target.elements)

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def then(self, g: "Homomorphism") -> "Homomorphism":
        """The composite g after self."""
        if not same_algebra(g.source, self.target):
            raise errors.ContractViolation("composed homomorphisms do not meet")
        return Homomorphism(source=self.source, target=g.target, map=tuple(g.map[v] for v in self.map))

    def inverse(self) -> "Homomorphism":
        if not self.is_bijective:
            raise errors.ContractViolation("only a bijective homomorphism has an inverse")
        inverse = [0] * len(self.map)
        for x, v in enumerate(self.map):
            inverse[v] = x
        return Homomorphism(source=self.target, target=self.source, map=tuple(inverse))

    def fibers(self) -> List[List[int]]:
        out = [[] for _ in self.target.elements]
        for x, v in enumerate(self.map):
            out[v].append(x)
        return out

    def image(self) -> FrozenSet[int]:
        return frozenset(self.map)

    def named(self) -> Dict[str, str]:
        return {self.source.name(x): self.target.name(v) for x, v in enumerate(self.map)}


def iter_homomorphisms(H: FiniteHeytingAlgebra, H2: FiniteHeytingAlgebra) -> Iterator[Homomorphism]:
    """Every homomorphism H -> H2, by brute force with the bounds fixed."""
    if H.degenerate and not H2.degenerate:
        return
    free = [x for x in H.elements if x not in (H.bot, H.top)]
    for values in itertools.product(H2.elements, repeat=len(free)):
        mapping = [0] * H.n
        mapping[H.bot] = H2.bot
        mapping[H.top] = H2.top
        for x, v in zip(free, values):
            mapping[x] = v
        f = Homomorphism(source=H, target=H2, map=tuple(mapping))
        if f.is_homomorphism:
            yield f


# Isomorphism search


def hasse_edges(H: FiniteHeytingAlgebra) -> List[Tuple[int, int]]:
    """Covering pairs (x, y) with y covering x."""
    return [(int(x), int(y)) for x, y in zip(*np.nonzero(cover_relation(np.asarray(H.ops.leq))))]


def _invariants(H: FiniteHeytingAlgebra) -> List[tuple]:
    L = H.ops.leq
    cover = cover_relation(np.asarray(L))
    height = [0] * H.n
    for x in sorted(H.elements, key=lambda e: int(L[:, e].sum())):
        below = np.flatnonzero(cover[:, x])
        height[x] = max((height[y] + 1 for y in below), default=0)
    return [(height[x], int(L[:, x].sum()), int(L[x, :].sum()), int(cover[:, x].sum()), int(cover[x, :].sum()))
            for x in H.elements]


def is_isomorphic(H1: FiniteHeytingAlgebra, H2: FiniteHeytingAlgebra) -> Optional[Homomorphism]:
    """Find an isomorphism H1 -> H2, or None.

    Elements are matched only against elements with the same height, up-set and down-set sizes and cover
    degrees, in order of those invariants; the search is deterministic.
    """
    if H1.n != H2.n:
        return None
    inv1, inv2 = _invariants(H1), _invariants(H2)
    if sorted(inv1) != sorted(inv2):
        return None
    n = H1.n
    order = sorted(range(n), key=lambda x: (inv1[x], x))
    candidates = {x: [y for y in range(n) if inv2[y] == inv1[x]] for x in range(n)}
    L1, L2 = H1.ops.leq.tolist(), H2.ops.leq.tolist()
    mapping = [-1] * n
    used = [False] * n

    def backtrack(k: int) -> bool:
        if k == n:
            return True
        x = order[k]
        for y in candidates[x]:
            if used[y]:
                continue
            if all(L1[u][x] == L2[mapping[u]][y] and L1[x][u] == L2[y][mapping[u]] for u in order[:k]):
                mapping[x], used[y] = y, True
                if backtrack(k + 1):
                    return True
                mapping[x], used[y] = -1, False
        return False

    if not backtrack(0):
        return None
    return Homomorphism.verified(H1, H2, mapping)


# Catalog


def enumerate_posets(max_points: int) -> List[FinitePoset]:
    """One poset per isomorphism class with 1..max_points points, smallest first.

    Every poset arises from a smaller one by adding a maximal point above one of its down-sets.
    """
    level = [FinitePoset(points=0, leq=())]
    out = []
    for k in range(1, max_points + 1):
        seen: Dict[str, List[Tuple[nx.DiGraph, FinitePoset]]] = {}
        reps = []
        for P in level:
            for below in P.down_sets():
                Q = P.extended(below)
                g = Q.graph()
                bucket = seen.setdefault(nx.weisfeiler_lehman_graph_hash(g), [])
                if any(nx.is_isomorphic(g, h) for h, _ in bucket):
                    continue
                bucket.append((g, Q))
                reps.append(Q)
        logger.debug("%d posets on %d points", len(reps), k)
        out.extend(reps)
        level = reps
    return out


def catalog(max_poset_points: int, max_chain: int) -> List[FiniteHeytingAlgebra]:
    """Up-set algebras of all posets up to max_poset_points points, then the chains up to max_chain not
    already present, each up to isomorphism."""
    algebras: List[FiniteHeytingAlgebra] = []
    for i, P in enumerate(enumerate_posets(max_poset_points)):
        algebras.append(from_poset(P, label=f"upsets-{P.points}pt-{i}"))
    for length in range(2, max_chain + 1):
        C = chain(length)
        if any(is_isomorphic(C, A) is not None for A in algebras):
            continue
        algebras.append(C)
    logger.debug("Catalog(%d, %d) has %d algebras", max_poset_points, max_chain, len(algebras))
    return algebras


# Generated subalgebras


class ElementOracle(ABC):
    """The operations of an ambient algebra over hashable element values."""

    @abstractmethod
    def meet(self, x, y):
        ...

    @abstractmethod
    def join(self, x, y):
        ...

    @abstractmethod
    def impl(self, x, y):
        ...

    @abstractmethod
    def bot(self):
        ...

    @abstractmethod
    def top(self):
        ...

    def name(self, x) -> str:
        return str(x)

    def operation_tables(self, elements: Sequence[Any], index: Dict[Any, int]) -> Tuple[np.ndarray, ...]:
        m = len(elements)
        tables = tuple(np.zeros((m, m), dtype=np.int64) for _ in range(3))
        for (i, x), (j, y) in itertools.product(enumerate(elements), repeat=2):
            tables[0][i, j] = index[self.meet(x, y)]
            tables[1][i, j] = index[self.join(x, y)]
            tables[2][i, j] = index[self.impl(x, y)]
        return tables


class AlgebraOracle(ElementOracle):
    def __init__(self, H: FiniteHeytingAlgebra):
        self.H = H
        self.L, self.M, self.J, self.I = H.ops

    def meet(self, x, y):
        return int(self.M[x, y])

    def join(self, x, y):
        return int(self.J[x, y])

    def impl(self, x, y):
        return int(self.I[x, y])

    def bot(self):
        return self.H.bot

    def top(self):
        return self.H.top

    def name(self, x) -> str:
        return self.H.name(x)


class PowerOracle(ElementOracle):
    """The power H^k with pointwise operations; elements are k-tuples of element indices."""

    def __init__(self, H: FiniteHeytingAlgebra, width: int):
        self.H = H
        self.width = width
        self.M, self.J, self.I = (op.tolist() for op in H.ops[1:])

    def meet(self, x, y):
        return tuple(self.M[a][b] for a, b in zip(x, y))

    def join(self, x, y):
        return tuple(self.J[a][b] for a, b in zip(x, y))

    def impl(self, x, y):
        return tuple(self.I[a][b] for a, b in zip(x, y))

    def bot(self):
        return (self.H.bot,) * self.width

    def top(self):
        return (self.H.top,) * self.width

    def constant(self, h: int) -> tuple:
        return (int(h),) * self.width

    def name(self, x) -> str:
        return "(" + ",".join(self.H.name(v) for v in x) + ")"

    def operation_tables(self, elements, index):
        values = np.array(elements, dtype=np.int64).reshape(len(elements), self.width)
        lookup = _signature_lookup(values)
        out = []
        for op in self.H.ops[1:]:
            result = op[values[:, None, :], values[None, :, :]].astype(np.int64)
            flat = result.reshape(-1, self.width)
            out.append(np.array([lookup[row.tobytes()] for row in flat], dtype=np.int64).reshape(len(elements), -1))
        return tuple(out)


class GeneratedSubalgebra(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    elements: Tuple[Any, ...]
    provenance: Tuple[Formula, ...]
    generators: Tuple[Any, ...]
    algebra: FiniteHeytingAlgebra

    @cached_property
    def element_index(self) -> Dict[Any, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index_of(self, element) -> int:
        if element not in self.element_index:
            raise errors.ElementNotFound(f"{element!r} is not in the generated subalgebra")
        return self.element_index[element]

    def __contains__(self, element) -> bool:
        return element in self.element_index


def generated_subalgebra(ambient: ElementOracle, generators: Sequence[Any], cap: int = DEFAULT_CAP,
                         label: str = "") -> GeneratedSubalgebra:
    """Close generators under meet, join, implication and the constants.

    Each element records the first formula found for it, with variable i standing for generators[i].

    Raises:
        CapExceeded: the closure has more than cap elements.
    """
    elements: List[Any] = []
    provenance: List[Formula] = []
    index: Dict[Any, int] = {}

    def add(element, formula: Formula):
        if element in index:
            return
        if len(elements) >= cap:
            raise errors.CapExceeded(f"closure {label or 'of generators'} exceeds {cap} elements", cap=cap)
        index[element] = len(elements)
        elements.append(element)
        provenance.append(formula)

    for i, g in enumerate(generators):
        add(g, Var(i))
    add(ambient.bot(), BOT)
    add(ambient.top(), TOP)
    i = 0
    while i < len(elements):
        x, fx = elements[i], provenance[i]
        for j in range(i + 1):
            y, fy = elements[j], provenance[j]
            add(ambient.meet(x, y), Meet(fx, fy))
            add(ambient.join(x, y), Join(fx, fy))
            add(ambient.impl(x, y), Impl(fx, fy))
            add(ambient.impl(y, x), Impl(fy, fx))
        i += 1
    logger.debug("Closure %s: %d generators, %d elements", label, len(generators), len(elements))

    meet, join, impl = ambient.operation_tables(elements, index)
    m = len(elements)
    algebra = FiniteHeytingAlgebra.from_tables(
        leq=meet == np.arange(m)[:, None],
        meet=meet, join=join, impl=impl,
        bot=index[ambient.bot()], top=index[ambient.top()],
        names=[ambient.name(e) for e in elements],
        label=label,
        check=False,
    )
    return GeneratedSubalgebra(elements=tuple(elements), provenance=tuple(provenance),
                               generators=tuple(generators), algebra=algebra)
