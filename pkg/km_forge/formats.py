"""Algebra files and diagram export.

An algebra file is JSON in one of two forms: ``{"name", "elements", "leq"}`` with an order table over named
elements, or ``{"name", "poset": {"points", "leq", "labels"}}`` whose up-sets form the algebra. Operation
tables are always derived and validated, never read.
"""
import json
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pydantic
import pydot

from km_forge import errors, models
from km_forge.algebra import FiniteHeytingAlgebra, FinitePoset, from_order, from_poset, hasse_edges

logger = logging.getLogger(__name__)

# colour of the edges x -> Delta(x)
DELTA_COLOR = "blue"


def read_document(path: Union[str, Path]) -> models.AlgebraDocument:
    """Raises:
        AlgebraIOError: the file cannot be read.
        AlgebraFormatError: the file is not JSON or does not follow either form.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise errors.AlgebraIOError(f"cannot read {path}: {e.strerror or e}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise errors.AlgebraFormatError(f"{path} is not JSON: {e.msg} at line {e.lineno}")
    try:
        return models.AlgebraDocument.model_validate(data)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise errors.AlgebraFormatError(f"{path}: {location}: {first['msg']}")


def algebra_from_document(doc: models.AlgebraDocument, label: str = "") -> FiniteHeytingAlgebra:
    """Raises:
        AlgebraFormatError: tables of the wrong shape or duplicate element names.
        AlgebraValidationError: the order is not a Heyting algebra.
    """
    label = doc.name or label
    if doc.poset is not None:
        try:
            P = FinitePoset.from_relation(np.array(doc.poset.leq, dtype=bool).reshape(doc.poset.points, doc.poset.points),
                                          labels=doc.poset.labels or ())
        except ValueError as e:
            raise errors.AlgebraFormatError(f"poset: {e}")
        return from_poset(P, label=label)
    if len(set(doc.elements)) != len(doc.elements):
        raise errors.AlgebraFormatError("element names must be distinct")
    if len(doc.leq) != len(doc.elements) or any(len(row) != len(doc.elements) for row in doc.leq):
        raise errors.AlgebraFormatError(f"order table must be {len(doc.elements)}x{len(doc.elements)}")
    return from_order(np.array(doc.leq, dtype=bool), names=doc.elements, label=label)


def load_algebra(path: Union[str, Path]) -> FiniteHeytingAlgebra:
    """Read and validate an algebra file; the label defaults to the file stem."""
    algebra = algebra_from_document(read_document(path), label=Path(path).stem)
    logger.debug("Loaded %s from %s: %d elements", algebra.describe(), path, algebra.n)
    return algebra


def to_document(H: FiniteHeytingAlgebra) -> models.AlgebraDocument:
    """The order-table form of H."""
    return models.AlgebraDocument(name=H.label or None, elements=list(H.names), leq=H.ops.leq.tolist())


def save_algebra(H: FiniteHeytingAlgebra, path: Union[str, Path]):
    try:
        Path(path).write_text(to_document(H).model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
    except OSError as e:
        raise errors.AlgebraIOError(f"cannot write {path}: {e.strerror or e}")


def to_dot(H: FiniteHeytingAlgebra, delta: Optional[Sequence[int]] = None,
           highlight: Optional[Dict[int, str]] = None) -> str:
    """Hasse diagram of H, bottom up, with an edge x -> Delta(x) for every x where they differ.

    highlight maps elements to a fill colour.
    """
    graph = pydot.Dot(graph_type="digraph", rankdir="BT")
    graph.set_name(f'"{H.describe()}"')
    highlight = highlight or {}
    for x in H.elements:
        style = {"style": "filled", "fillcolor": highlight[x]} if x in highlight else {}
        graph.add_node(pydot.Node(str(x), label=f'"{H.name(x)}"', **style))
    for x, y in hasse_edges(H):
        graph.add_edge(pydot.Edge(str(x), str(y)))
    if delta is not None:
        for x, d in enumerate(delta):
            if d != x:
                graph.add_edge(pydot.Edge(str(x), str(d), color=DELTA_COLOR, style="dashed"))
    return graph.to_string()
