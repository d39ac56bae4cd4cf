"""The chain 0 < ... < 1/n < ... < 1/2 < 1 and piecewise maps over its dense-over-0 points.

Elements are stored by index: idx k is the element 1/k and idx INF is 0, so the order is the reverse of
the index order. The elements dense over 0 are the 1/n with n >= 1, and maps from them to the chain are
written as functions of n: finitely many pieces, each constant or a shift n -> 1/(n + c), the last piece
extending to infinity. Every map has one canonical list of pieces, so equal maps compare equal.
"""
import bisect
import itertools
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt, field_validator

from km_forge import errors, models
from km_forge.formulas import Formula, Impl, Join, Meet, Var, to_text

logger = logging.getLogger(__name__)

INF = float("inf")
# idx values of 0, 1, 1/2, 1/3, 1/5
DEFAULT_CONSTANTS = (INF, 1, 2, 3, 5)
# points spot-checked when comparing symbolic results with pointwise evaluation
DEFAULT_HORIZON = 1000

Index = Union[int, float]


def omega_name(idx: Index) -> str:
    if idx == INF:
        return "0"
    return "1" if idx == 1 else f"1/{int(idx)}"


def _check_index(idx: Index) -> Index:
    if idx != INF and (int(idx) != idx or idx < 1):
        raise errors.DomainError(f"chain index must be a positive integer or infinity, got {idx}")
    return idx if idx == INF else int(idx)


class OmegaElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    idx: Union[PositiveInt, float]

    @field_validator("idx")
    @classmethod
    def check_idx(cls, v):
        if isinstance(v, float) and v != INF:
            raise ValueError("a float index must be infinity")
        return v

    @classmethod
    def parse(cls, text: str) -> "OmegaElement":
        text = text.strip()
        if text == "0":
            return cls(idx=INF)
        if text == "1":
            return cls(idx=1)
        if text.startswith("1/") and text[2:].isdigit() and int(text[2:]) >= 1:
            return cls(idx=int(text[2:]))
        raise errors.DomainError(f"{text!r} is not an element of the chain")

    def __le__(self, other: "OmegaElement") -> bool:
        return self.idx >= other.idx

    def __str__(self) -> str:
        return omega_name(self.idx)


def idx_meet(x: Index, y: Index) -> Index:
    return max(x, y)


def idx_join(x: Index, y: Index) -> Index:
    return min(x, y)


def idx_impl(x: Index, y: Index) -> Index:
    return 1 if x >= y else y


def omega_meet(x: OmegaElement, y: OmegaElement) -> OmegaElement:
    return OmegaElement(idx=idx_meet(x.idx, y.idx))


def omega_join(x: OmegaElement, y: OmegaElement) -> OmegaElement:
    return OmegaElement(idx=idx_join(x.idx, y.idx))


def omega_impl(x: OmegaElement, y: OmegaElement) -> OmegaElement:
    return OmegaElement(idx=idx_impl(x.idx, y.idx))



class Piece(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: PositiveInt
    kind: models.PieceKind
    # idx for a constant piece, offset c for a shift piece
    value: Union[int, float]

    def at(self, n: int) -> Index:
        return self.value if self.kind == models.PieceKind.CONST else n + self.value

    def describe(self) -> str:
        if self.kind == models.PieceKind.CONST:
            return omega_name(self.value)
        if self.value == 0:
            return "1/n"
        return f"1/(n{self.value:+d})"


class PiecewiseMap(BaseModel):
    """A canonical piecewise map; build it with normalize, constant, shift or the pointwise operations."""
    model_config = ConfigDict(frozen=True)

    pieces: Tuple[Piece, ...]

    @property
    def tail(self) -> Piece:
        return self.pieces[-1]

    @property
    def starts(self) -> List[int]:
        return [p.start for p in self.pieces]

    def __call__(self, n: int) -> Index:
        return pw_apply(self, n)

    def __str__(self) -> str:
        return "; ".join(f"n>={p.start}: {p.describe()}" for p in self.pieces)


def _validate(pieces: Sequence[Piece]):
    if not pieces or pieces[0].start != 1:
        raise errors.DomainError("a piecewise map needs a first piece starting at n = 1")
    for p, q in zip(pieces, pieces[1:]):
        if q.start <= p.start:
            raise errors.DomainError(f"piece starts must ascend, got {p.start} then {q.start}")
    for p in pieces:
        if p.kind == models.PieceKind.SHIFT:
            if p.value != int(p.value):
                raise errors.DomainError(f"shift offset {p.value} is not an integer")
            if p.start + p.value < 1:
                raise errors.DomainError(f"shift by {int(p.value)} leaves the chain at n = {p.start}")
        else:
            _check_index(p.value)


def _same_form(p: Piece, q: Piece) -> bool:
    return p.kind == q.kind and p.value == q.value


def _locate(starts: Sequence[int], n: int) -> int:
    return bisect.bisect_right(starts, n) - 1


def _agree_until(pieces: Sequence[Piece], starts: Sequence[int], form: Piece, n: int, stop: int) -> int:
    """The first point in [n, stop) where the pieces leave form, or stop.

    A piece of another form meets form in at most one point, so the scan steps over whole pieces.
    """
    while n < stop:
        k = _locate(starts, n)
        if _same_form(pieces[k], form):
            n = starts[k + 1] if k + 1 < len(starts) else stop
        elif pieces[k].at(n) == form.at(n):
            n += 1
        else:
            return n
    return stop


def _agree_from(pieces: Sequence[Piece], starts: Sequence[int], form: Piece, n: int) -> int:
    """The least m such that the pieces follow form on [m, n)."""
    m = n - 1
    while m >= 1 and (form.kind == models.PieceKind.CONST or m + form.value >= 1):
        k = _locate(starts, m)
        if _same_form(pieces[k], form):
            m = starts[k] - 1
        elif pieces[k].at(m) == form.at(m):
            m -= 1
        else:
            break
    return m + 1


def normalize(pieces: Sequence[Piece]) -> PiecewiseMap:
    """The canonical form: the tail piece starts as early as possible and the values before it are
    re-encoded greedily as maximal runs, a shift wherever two consecutive values step by one.

    Raises:
        DomainError: malformed pieces, or a shift piece that reaches below n + c = 1.
    """
    pieces = list(pieces)
    _validate(pieces)
    starts = [p.start for p in pieces]
    tail = pieces[-1]
    start = _agree_from(pieces, starts, tail, tail.start)

    def value(n: int) -> Index:
        return pieces[_locate(starts, n)].at(n)

    canonical = []
    n = 1
    while n < start:
        v = value(n)
        if v != INF and n + 1 < start and value(n + 1) == v + 1:
            form = Piece(start=n, kind=models.PieceKind.SHIFT, value=int(v) - n)
        else:
            form = Piece(start=n, kind=models.PieceKind.CONST, value=v)
        canonical.append(form)
        n = _agree_until(pieces, starts, form, n, start)
    canonical.append(Piece(start=start, kind=tail.kind, value=tail.value))
    return PiecewiseMap(pieces=tuple(canonical))


def constant(idx: Index) -> PiecewiseMap:
    return PiecewiseMap(pieces=(Piece(start=1, kind=models.PieceKind.CONST, value=_check_index(idx)),))


def shift(c: int) -> PiecewiseMap:
    """n -> 1/(n + c) on every n >= 1.

    Raises:
        DomainError: c < 0.
    """
    return normalize([Piece(start=1, kind=models.PieceKind.SHIFT, value=c)])


IOTA = shift(0)
TOP_MAP = constant(1)
BOT_MAP = constant(INF)


def pw_apply(f: PiecewiseMap, n: int) -> Index:
    if n < 1:
        raise errors.DomainError(f"maps are defined on n >= 1, got {n}")
    return f.pieces[_locate(f.starts, n)].at(n)


def _cmp(x: Index, y: Index) -> int:
    return (x > y) - (x < y)


def _comparison_starts(x: Piece, y: Piece, lo: int, hi: Index) -> List[int]:
    """Points of [lo, hi) from which the order between the idx values of x and y stays fixed.

    Both pieces are n -> slope * n + value with slope 0 or 1, so their difference vanishes at one point
    at most.
    """
    out = [lo]
    if any(p.kind == models.PieceKind.CONST and p.value == INF for p in (x, y)):
        return out
    slope = (x.kind == models.PieceKind.SHIFT) - (y.kind == models.PieceKind.SHIFT)
    if slope:
        meet_at = slope * int(y.value - x.value)
        out += [n for n in (meet_at, meet_at + 1) if lo < n < hi]
    return out


# Where the idx order of x against y is fixed, the result follows one piece.
Choice = Callable[[int, Piece, Piece], Piece]


def _meet_piece(order: int, x: Piece, y: Piece) -> Piece:
    return x if order >= 0 else y


def _join_piece(order: int, x: Piece, y: Piece) -> Piece:
    return x if order <= 0 else y


def _impl_piece(order: int, x: Piece, y: Piece) -> Piece:
    return TOP_MAP.tail if order >= 0 else y


def _pointwise(choose: Choice, f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    """Refine the breakpoints of f and g by the points where the compared pieces cross."""
    breaks = sorted(set(f.starts) | set(g.starts))
    out = []
    for k, lo in enumerate(breaks):
        hi = breaks[k + 1] if k + 1 < len(breaks) else INF
        x, y = f.pieces[_locate(f.starts, lo)], g.pieces[_locate(g.starts, lo)]
        for n in _comparison_starts(x, y, lo, hi):
            form = choose(_cmp(x.at(n), y.at(n)), x, y)
            out.append(Piece(start=n, kind=form.kind, value=form.value))
    return normalize(out)


def pw_meet(f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    return _pointwise(_meet_piece, f, g)


def pw_join(f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    return _pointwise(_join_piece, f, g)


def pw_impl(f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    return _pointwise(_impl_piece, f, g)


PW_OPS = {"meet": pw_meet, "join": pw_join, "impl": pw_impl}


def pw_leq(f: PiecewiseMap, g: PiecewiseMap) -> bool:
    return pw_impl(f, g) == TOP_MAP


def pw_values(f: PiecewiseMap, horizon: int = DEFAULT_HORIZON) -> np.ndarray:
    """The idx values of f at n = 1 .. horizon, with 0 as inf."""
    n = np.arange(1, horizon + 1)
    out = np.empty(horizon, dtype=float)
    for p, end in zip(f.pieces, f.starts[1:] + [horizon + 1]):
        span = slice(p.start - 1, end - 1)
        out[span] = p.value if p.kind == models.PieceKind.CONST else n[span] + p.value
    return out


ARRAY_OPS: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "meet": np.maximum,
    "join": np.minimum,
    "impl": lambda x, y: np.where(x >= y, 1.0, y),
}


def pointwise_mismatches(operation: str, f: PiecewiseMap, g: PiecewiseMap,
                         horizon: int = DEFAULT_HORIZON) -> List[int]:
    """Points n <= horizon where the symbolic result of the operation disagrees with the chain operation."""
    result = PW_OPS[operation](f, g)
    expected = ARRAY_OPS[operation](pw_values(f, horizon), pw_values(g, horizon))
    return [int(n) + 1 for n in np.flatnonzero(pw_values(result, horizon) != expected)]


def soundness_violations(maps: Sequence[PiecewiseMap], horizon: int = DEFAULT_HORIZON) -> List[str]:
    """Every symbolic operation on every pair of maps, against the chain operation at each n <= horizon."""
    values = [pw_values(f, horizon) for f in maps]
    out = []
    for (f, fv), (g, gv) in itertools.product(zip(maps, values), repeat=2):
        for name, op in PW_OPS.items():
            wrong = np.flatnonzero(pw_values(op(f, g), horizon) != ARRAY_OPS[name](fv, gv))
            if len(wrong):
                out.append(f"{name} of {f} and {g} is wrong at n = {int(wrong[0]) + 1}")
    return out


def _split(f: PiecewiseMap) -> List[Piece]:
    """The same map with its first point of every piece cut off as an explicit constant."""
    out = []
    for p, end in zip(f.pieces, f.starts[1:] + [None]):
        out.append(Piece(start=p.start, kind=models.PieceKind.CONST, value=p.at(p.start)))
        if end is None or p.start + 1 < end:
            out.append(Piece(start=p.start + 1, kind=p.kind, value=p.value))
    return out


def canonical_form_violations(maps: Sequence[PiecewiseMap]) -> List[str]:
    """normalize must fix every map and bring a re-cut description of it back to the same pieces."""
    out = []
    for f in maps:
        if normalize(f.pieces) != f:
            out.append(f"normalize moves {f}")
        if normalize(_split(f)) != f:
            out.append(f"re-cut {f} normalizes differently")
    return out


def filter_membership_violations(pool: Sequence[Index]) -> List[str]:
    """iota -> d lies in the filter for every d dense over 0; no constant below 1 does."""
    out = []
    for c in pool:
        if c != INF and not f0_member(pw_impl(IOTA, constant(c)))[0]:
            out.append(f"iota -> {omega_name(c)} is outside the filter")
        if c != 1 and f0_member(constant(c))[0]:
            out.append(f"the constant {omega_name(c)} is inside the filter")
    return out


def dense_over_zero(x: Union[OmegaElement, PiecewiseMap]) -> bool:
    if isinstance(x, OmegaElement):
        return x.idx != INF
    return all(p.kind == models.PieceKind.SHIFT or p.value != INF for p in x.pieces)


def f0_member(f: PiecewiseMap) -> Tuple[bool, Optional[int]]:
    """Membership in the filter generated by the iota -> d with d dense over 0.

    Returns:
        Whether f is 1 from some m on and at least 1/m before it, and the least such m found.
    """
    if f.tail.kind != models.PieceKind.CONST or f.tail.value != 1 or not dense_over_zero(f):
        return False, None
    m = f.tail.start
    for p, q in zip(f.pieces, f.pieces[1:]):
        # shift pieces reach their largest idx at the end of their range
        m = max(m, int(p.at(q.start - 1)), int(p.at(p.start)))
    return True, m


def quotient_equiv(f: PiecewiseMap, g: PiecewiseMap) -> bool:
    return f0_member(pw_meet(pw_impl(f, g), pw_impl(g, f)))[0]


# Bounded sampling of H[iota]


class OmegaFragment(BaseModel):
    """Elements of H[iota] reached by terms up to a depth, each with the first term found for it.

    Variable 0 is iota and variable k + 1 the k-th constant of the pool.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    constants: Tuple[Index, ...]
    depth: int
    maps: Tuple[PiecewiseMap, ...]
    provenance: Tuple[Formula, ...]
    # maps[:levels[d]] are reached by depth d
    levels: Tuple[int, ...]


def enumerate_fragment(depth: int, constants: Sequence[Index] = DEFAULT_CONSTANTS) -> OmegaFragment:
    pool = tuple(dict.fromkeys(_check_index(c) for c in constants))
    maps: List[PiecewiseMap] = []
    provenance: List[Formula] = []
    seen = set()

    def add(f: PiecewiseMap, formula: Formula):
        if f not in seen:
            seen.add(f)
            maps.append(f)
            provenance.append(formula)

    add(IOTA, Var(0))
    for k, c in enumerate(pool):
        add(constant(c), Var(k + 1))
    levels = [len(maps)]
    previous = range(0, len(maps))
    for _ in range(depth):
        known = len(maps)
        for i in previous:
            for j in range(known):
                for connective, op in ((Meet, pw_meet), (Join, pw_join), (Impl, pw_impl)):
                    add(op(maps[i], maps[j]), connective(provenance[i], provenance[j]))
                    if j < previous.start or connective is Impl:
                        add(op(maps[j], maps[i]), connective(provenance[j], provenance[i]))
        previous = range(known, len(maps))
        levels.append(len(maps))
    logger.debug("H[iota] fragment at depth %d: %d maps from %d constants", depth, len(maps), len(pool))
    return OmegaFragment(constants=pool, depth=depth, maps=tuple(maps), provenance=tuple(provenance),
                         levels=tuple(levels))


def tail_kind_violations(maps: Sequence[PiecewiseMap]) -> List[str]:
    """Maps whose tail is neither constant nor iota itself."""
    return [str(f) for f in maps if f.tail.kind == models.PieceKind.SHIFT and f.tail.value != 0]


def quotient_congruence_violations(maps: Sequence[PiecewiseMap]) -> List[str]:
    """quotient_equiv must be reflexive, symmetric, transitive and compatible with the operations."""
    out = []
    k = len(maps)
    equiv = [[quotient_equiv(maps[i], maps[j]) for j in range(k)] for i in range(k)]
    for i in range(k):
        if not equiv[i][i]:
            out.append(f"not reflexive at {maps[i]}")
        for j in range(k):
            if equiv[i][j] != equiv[j][i]:
                out.append(f"not symmetric at {maps[i]} and {maps[j]}")
            if not equiv[i][j]:
                continue
            for m in range(k):
                if equiv[j][m] and not equiv[i][m]:
                    out.append(f"not transitive through {maps[j]}")
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j and equiv[i][j]]
    for i, i2 in pairs:
        for j in range(k):
            for name, op in PW_OPS.items():
                if not quotient_equiv(op(maps[i], maps[j]), op(maps[i2], maps[j])):
                    out.append(f"{name} with {maps[j]} separates {maps[i]} from {maps[i2]}")
                if not quotient_equiv(op(maps[j], maps[i]), op(maps[j], maps[i2])):
                    out.append(f"{name} of {maps[j]} separates {maps[i]} from {maps[i2]}")
    return out


def _group(name: str, instances: int, details: List[str]) -> models.CheckGroup:
    return models.CheckGroup(name=name, instances=instances, passed=not details, details=details[:20])


def verify_onestep_omega(depth: int = 2, extra_constants: Sequence[Index] = (),
                         congruence_depth: int = 1) -> models.OmegaVerifyReport:
    """Run the one-step checks on the H[iota] fragment reached by terms up to depth.

    Check groups: the dense filter over 0 has no least element, distinct constants stay apart in the
    quotient, [iota] lies below every dense class, and iota -> eta = iota -> eta(1). Tail kinds and the
    congruence property of the quotient relation are reported as two further groups; the congruence check
    runs on the maps of depth at most congruence_depth.

    Raises:
        DomainError: depth < 1 or a malformed constant.
    """
    if depth < 1:
        raise errors.DomainError(f"term depth must be at least 1, got {depth}")
    fragment = enumerate_fragment(depth, list(DEFAULT_CONSTANTS) + list(extra_constants))
    pool = fragment.constants
    finite = [c for c in pool if c != INF]
    horizon = max(finite + [depth]) + 2

    non_principal = []
    for m in range(1, horizon + 1):
        below = OmegaElement(idx=m + 1)
        if not (dense_over_zero(below) and below <= OmegaElement(idx=m) and below.idx != m):
            non_principal.append(f"1/{m} has no dense element strictly below")

    separated = []
    for i, c in enumerate(pool):
        for d in pool[i + 1:]:
            if quotient_equiv(constant(c), constant(d)):
                separated.append(f"{omega_name(c)} ~ {omega_name(d)}")

    dense = [f for f in fragment.maps if dense_over_zero(f)]
    least = [f"[iota] is not below [{f}]" for f in dense if not f0_member(pw_impl(IOTA, f))[0]]

    identity = [to_text(phi) for f, phi in zip(fragment.maps, fragment.provenance)
                if pw_impl(IOTA, f) != pw_impl(IOTA, constant(pw_apply(f, 1)))]

    congruence_maps = fragment.maps[:fragment.levels[min(congruence_depth, depth)]]
    checks = [
        _group("non-principal", horizon, non_principal),
        _group("constants-separated", len(pool) * (len(pool) - 1) // 2, separated),
        _group("iota-least", len(dense), least),
        _group("iota-identity", len(fragment.maps), identity),
        _group("tail-kinds", len(fragment.maps), tail_kind_violations(fragment.maps)),
        _group("congruence", len(congruence_maps) ** 2, quotient_congruence_violations(congruence_maps)),
    ]
    report = models.OmegaVerifyReport(
        bound=models.Bounds(depth=depth, horizon=horizon),
        constants=[omega_name(c) for c in pool],
        elements=len(fragment.maps),
        dense_elements=len(dense),
        checks=checks,
    )
    for group in checks:
        for detail in group.details:
            report.violations.append(models.Violation(code=errors.TheoremViolation.code,
                                                      message=f"{group.name}: {detail}"))
    return report


def remark_counterexample(n0: int) -> models.OmegaDemoReport:
    """Adjoin delta0 = 1/(n + n0) as if it were dense in H[iota] and show the constant 1/n0 collapses to 1.

    iota -> delta0 = delta0 <= 1/n0, so admitting iota -> delta0 as a generator puts the constant 1/n0 into
    the filter, identifying it with 1: the composite from the chain is no longer an embedding.

    Raises:
        DomainError: n0 < 1.
    """
    if n0 < 1:
        raise errors.DomainError(f"n0 must be at least 1, got {n0}")
    delta0 = shift(n0)
    implied = pw_impl(IOTA, delta0)
    bound = constant(n0)
    fixed = implied == delta0
    below = pw_leq(delta0, bound)
    report = models.OmegaDemoReport(
        n0=n0,
        delta0=str(delta0),
        iota_impl_delta0=str(implied),
        fixed_by_iota=fixed,
        below_constant=below,
        # the filter is up-closed and contains iota -> delta0
        constant_in_filter=pw_leq(implied, bound),
        collapsed_pair=(omega_name(n0), omega_name(1)),
    )
    if not (fixed and below and report.constant_in_filter):
        report.violations.append(models.Violation(code=errors.TheoremViolation.code,
                                                  message="iota -> delta0 = delta0 <= 1/n0 fails",
                                                  witness={"n0": n0}))
    return report
