"""Evaluating formulas in finite Heyting algebras, identity checks and bounded schema sweeps."""
import itertools
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from km_forge import errors, models, utils
from km_forge.algebra import FiniteHeytingAlgebra
from km_forge.formulas import (CONNECTIVES, Bot, Formula, Impl, Meet, Top, Var, atoms, biimp, enumerate_terms, to_text,
                               variable_name)

logger = logging.getLogger(__name__)

# distinct term functions kept by one sweep
DEFAULT_FUNCTION_CAP = 200_000
MAX_REPORTED = 20

Assignment = Union[Sequence, Dict[int, object], np.ndarray]


def evaluate(f: Formula, H: FiniteHeytingAlgebra, assignment: Assignment):
    """Value of f under the assignment variable index -> element.

    Assigned values may be numpy index arrays, in which case f is evaluated at every valuation at once.

    Raises:
        MissingVariable: f has a variable the assignment does not cover.
    """
    ops = H.ops
    memo: Dict[int, object] = {}

    def value(g: Formula):
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, Var):
            try:
                v = assignment[g.index]
            except (KeyError, IndexError):
                raise errors.MissingVariable(f"no value for {variable_name(g.index)} in {to_text(f)}")
        elif isinstance(g, Bot):
            v = H.bot
        elif isinstance(g, Top):
            v = H.top
        else:
            v = getattr(ops, g.operation)[value(g.left), value(g.right)]
        memo[key] = v
        return v

    result = value(f)
    return int(result) if np.ndim(result) == 0 else result


class Valuation(BaseModel):
    model_config = ConfigDict(frozen=True)

    algebra: FiniteHeytingAlgebra
    assignment: Tuple[int, ...]

    def evaluate(self, f: Formula) -> int:
        return evaluate(f, self.algebra, self.assignment)

    def named(self) -> Dict[str, str]:
        return {variable_name(i): self.algebra.name(v) for i, v in enumerate(self.assignment)}


def values_at_grid(f: Formula, H: FiniteHeytingAlgebra, grid: np.ndarray) -> np.ndarray:
    """f evaluated at every column of a valuation grid, as a flat array."""
    out = np.broadcast_to(np.asarray(evaluate(f, H, grid)), (grid.shape[1],))
    return np.ascontiguousarray(out, dtype=utils.table_dtype(H.n))


def holds_identity(H: FiniteHeytingAlgebra, lhs: Formula, rhs: Formula,
                   nvars: Optional[int] = None) -> models.IdentityResult:
    """Check lhs = rhs at every valuation, returning the first counterexample in enumeration order.

    Raises:
        ArityMismatch: nvars is given and smaller than the variables the two sides use.
    """
    arity = max(lhs.arity, rhs.arity)
    if nvars is not None and nvars < arity:
        raise errors.ArityMismatch(f"{to_text(lhs)} = {to_text(rhs)} uses {arity} variables, not {nvars}")
    k = arity if nvars is None else nvars
    grid = utils.valuation_grid(H.n, k)
    bad = np.flatnonzero(values_at_grid(lhs, H, grid) != values_at_grid(rhs, H, grid))
    result = models.IdentityResult(holds=len(bad) == 0, lhs=to_text(lhs), rhs=to_text(rhs))
    if len(bad):
        column = grid[:, bad[0]]
        result.counterexample = {variable_name(i): H.name(int(v)) for i, v in enumerate(column)}
    return result


# Term functions


class TermFunction(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    formula: Formula
    # one flat value table per swept algebra, indexed by valuation column
    tables: Tuple[np.ndarray, ...]


class TermFunctionSweep(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    nvars: int
    depth: int
    functions: List[TermFunction] = []
    # formula pairs agreeing on the first algebra and disagreeing on a later one
    collisions: List[Tuple[Formula, Formula]] = []
    collision_count: int = 0
    # the last depth added no new function, so every term function is present
    closed: bool = False


def enumerate_term_functions(algebras: Sequence[FiniteHeytingAlgebra], nvars: int, max_depth: int,
                             cap: int = DEFAULT_FUNCTION_CAP) -> TermFunctionSweep:
    """Term functions of all formulas up to max_depth, one per distinct function on algebras[0].

    A formula is kept the first time its function on the first algebra appears, in the order of
    ``enumerate_terms``; the formula recorded is therefore of least depth. Tables for the remaining
    algebras are carried along and a later formula that matches a kept one on the first algebra but not on
    some other algebra is recorded as a collision.

    Raises:
        CapExceeded: more than cap distinct functions.
    """
    grids = [utils.valuation_grid(A.n, nvars) for A in algebras]
    sweep = TermFunctionSweep(nvars=nvars, depth=max_depth)
    functions = sweep.functions
    seen: Dict[bytes, int] = {}

    def admit(make: Callable[[], Formula], tables: Sequence[np.ndarray]) -> bool:
        key = tables[0].tobytes()
        known = seen.get(key)
        if known is not None:
            if len(tables) > 1:
                other = functions[known].tables
                if any(not np.array_equal(t, o) for t, o in zip(tables[1:], other[1:])):
                    sweep.collision_count += 1
                    if len(sweep.collisions) < MAX_REPORTED:
                        sweep.collisions.append((functions[known].formula, make()))
            return False
        if len(functions) >= cap:
            raise errors.CapExceeded(f"more than {cap} term functions at depth {max_depth}", cap=cap)
        seen[key] = len(functions)
        functions.append(TermFunction(formula=make(), tables=tuple(np.ascontiguousarray(t) for t in tables)))
        return True

    for f in atoms(nvars):
        admit(lambda f=f: f, [values_at_grid(f, A, g) for A, g in zip(algebras, grids)])
    previous = range(0, len(functions))
    for depth in range(1, max_depth + 1):
        known = len(functions)
        stacked = [np.stack([fn.tables[a] for fn in functions[:known]]) for a in range(len(algebras))]
        for connective in CONNECTIVES:
            op_tables = [getattr(A.ops, connective.operation) for A in algebras]
            for i in previous:
                fi = functions[i]
                # commutative connectives need each unordered pair once
                right = i + 1 if connective is not Impl else known
                results = [op[fi.tables[a][None, :], stacked[a][:right]] for a, op in enumerate(op_tables)]
                for j in range(right):
                    admit(lambda j=j: connective(fi.formula, functions[j].formula), [r[j] for r in results])
                if connective is Impl:
                    older = previous.start
                    flipped = [op[stacked[a][:older], fi.tables[a][None, :]] for a, op in enumerate(op_tables)]
                    for j in range(older):
                        admit(lambda j=j: connective(functions[j].formula, fi.formula), [r[j] for r in flipped])
        previous = range(known, len(functions))
        logger.debug("Depth %d: %d term functions in %d variables", depth, len(functions), nvars)
    sweep.closed = len(previous) == 0
    return sweep


# Schemas


def _as_parameters(table: np.ndarray, n: int, nvars: int) -> np.ndarray:
    """A term function table reshaped to [value of p0, index of the remaining variables]."""
    return table.reshape(n, n ** (nvars - 1))


def _schema_triples(schema: models.SchemaId, H: FiniteHeytingAlgebra) -> Tuple[int, List[models.Violation]]:
    n = H.n
    L, M, J, I = H.ops
    x, h, a = np.indices((n, n, n))
    if schema == models.SchemaId.EQLEMMA:
        bad = I[x, I[I[h, a], h]] != I[I[I[x, h], a], I[x, h]]
        statement = "x -> ((h -> a) -> h) = ((x -> h) -> a) -> (x -> h)"
    else:
        u = I[x, h]
        dense = L[a, u] & (I[u, a] == a)
        bad = dense != L[x, I[I[h, a], h]]
        statement = "x -> h dense over a iff x <= (h -> a) -> h"
    violations = []
    for hit in np.argwhere(bad)[:MAX_REPORTED]:
        witness = dict(zip(("x", "h", "a"), (H.name(int(v)) for v in hit)))
        violations.append(models.Violation(code=errors.TheoremViolation.code, message=f"{statement} fails",
                                           witness=witness))
    return n ** 3, violations


def _function_violation(schema: models.SchemaId, H: FiniteHeytingAlgebra, fn: TermFunction, nvars: int,
                        dense: np.ndarray) -> Optional[models.Violation]:
    n = H.n
    L, M, J, I = H.ops
    T = _as_parameters(fn.tables[0], n, nvars)
    e = np.arange(n)
    params = np.arange(T.shape[1])
    if schema == models.SchemaId.MAINTOOL:
        # h & x = h & x' makes x' ~ h & x, so comparing against x' = h & x covers every pair
        A = M[e[:, None, None], T[None, :, :]]
        B = A[e[:, None, None], M[:, :, None], params[None, None, :]]
        hit = utils.first_true(A != B)
        if hit is None:
            return None
        h, x, p = hit
        witness = {"h": H.name(h), "x": H.name(x), "x'": H.name(int(M[h, x])), "parameters": int(p)}
        message = "h & x = h & x' but h & phi(x) != h & phi(x')"
    elif schema == models.SchemaId.CONGRUENCE:
        equal_args = H.biimp(e[:, None, None], e[None, :, None])
        equal_values = H.biimp(T[:, None, :], T[None, :, :])
        hit = utils.first_true(~L[equal_args, equal_values])
        if hit is None:
            return None
        x, y, p = hit
        witness = {"p": H.name(x), "p'": H.name(y), "parameters": int(p)}
        message = "(p <-> p') -> (phi(p) <-> phi(p')) is not 1"
    else:
        # phi(d) = 1 for every d dense over a, iff (h -> a) -> h <= phi(h) for every h
        at_top = T == H.top
        everywhere_dense = ~(dense[:, :, None] & ~at_top[None, :, :]).any(axis=1)
        bound = I[I[e[None, :], e[:, None]], e[None, :]]
        everywhere_bounded = L[bound[:, :, None], T[None, :, :]].all(axis=1)
        hit = utils.first_true(everywhere_dense != everywhere_bounded)
        if hit is None:
            return None
        a, p = hit
        witness = {"a": H.name(a), "parameters": int(p)}
        message = "phi = 1 on the elements dense over a disagrees with (h -> a) -> h <= phi(h)"
    witness["formula"] = to_text(fn.formula)
    return models.Violation(code=errors.TheoremViolation.code, message=f"{schema}: {message}", witness=witness)


def check_schema(schema_id: Union[models.SchemaId, str], H: FiniteHeytingAlgebra,
                 bounds: Optional[models.Bounds] = None,
                 sweep: Optional[TermFunctionSweep] = None) -> models.SchemaReport:
    """Check one schema exhaustively on H.

    eqlemma and eqD quantify over all element triples. maintool, congruence and factorization quantify
    over every term function of the formulas phi(p0, p1, ...) within the bounds and over all element
    tuples; a precomputed sweep of H may be passed in to share it between schemas.

    Returns:
        SchemaReport listing instance counts and violations; a violation means a bug, never an exception.
    """
    schema = models.SchemaId.new(schema_id)
    bounds = bounds or models.Bounds(depth=2, nvars=2)
    report = models.SchemaReport(schema_id=schema, algebra=H.describe())
    if schema in (models.SchemaId.EQLEMMA, models.SchemaId.EQD):
        report.bound = models.Bounds()
        report.instances, report.violations = _schema_triples(schema, H)
        return report

    nvars, depth = bounds.nvars or 1, bounds.depth or 0
    report.bound = models.Bounds(depth=depth, nvars=nvars)
    if sweep is None:
        sweep = enumerate_term_functions([H], nvars, depth)
    L, M, J, I = H.ops
    e = np.arange(H.n)
    dense = L[e[:, None], e[None, :]] & (I[e[None, :], e[:, None]] == e[:, None])
    per_function = {
        models.SchemaId.MAINTOOL: H.n ** (nvars + 2),
        models.SchemaId.CONGRUENCE: H.n ** (nvars + 1),
        models.SchemaId.FACTORIZATION: H.n ** (nvars + 1),
    }[schema]
    for fn in sweep.functions:
        violation = _function_violation(schema, H, fn, nvars, dense)
        if violation is not None and len(report.violations) < MAX_REPORTED:
            report.violations.append(violation)
    report.functions = len(sweep.functions)
    report.instances = per_function * len(sweep.functions)
    logger.debug("Schema %s on %s: %d functions, %d violations", schema, H.describe(), report.functions,
                 len(report.violations))
    return report


def monotonicity_violations(H: FiniteHeytingAlgebra, nvars: int = 1, depth: int = 1) -> List[str]:
    """Meet and join are monotone in both arguments and implication antitone on the left, checked on
    formulas op(f, g) built from term functions f <= f' of depth < 2 and every g."""
    sweep = enumerate_term_functions([H], nvars, depth)
    L = H.ops.leq
    tables = [fn.tables[0] for fn in sweep.functions]
    out = []
    for (i, f), (k, f2) in itertools.product(enumerate(tables), repeat=2):
        if i == k or not L[f, f2].all():
            continue
        for g in tables:
            for connective in CONNECTIVES:
                op = getattr(H.ops, connective.operation)
                if connective is Impl:
                    ok = L[op[f2, g], op[f, g]].all() and L[op[g, f], op[g, f2]].all()
                else:
                    ok = L[op[f, g], op[f2, g]].all() and L[op[g, f], op[g, f2]].all()
                if not ok and len(out) < MAX_REPORTED:
                    out.append(f"{connective.operation} with {to_text(sweep.functions[i].formula)} <= "
                               f"{to_text(sweep.functions[k].formula)}")
    return out
