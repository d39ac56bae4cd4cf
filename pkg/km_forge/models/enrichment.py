from typing import Dict, List

from pydantic import BaseModel

from km_forge.models.base import Report


class ElementRecord(BaseModel):
    name: str
    # map values, one per index point
    values: List[str]
    provenance: str


class OneStepReport(Report):
    algebra: str = ""
    anchor: str = ""
    dense_index: List[str] = []
    iota: str = ""
    elements: List[ElementRecord] = []
    fa_basis: List[str] = []
    fa_members: List[str] = []
    classes: List[List[str]] = []
    delta_class: str = ""
    embedding: Dict[str, str] = {}
    collapses_to_base: bool = False


class FreeReport(Report):
    algebra: str = ""
    size: int = 0
    generator: str = ""
    elements: List[ElementRecord] = []


class KMReport(Report):
    algebra: str = ""
    rounds: int = 0
    steps: int = 0
    delta: Dict[str, str] = {}
    matches_least_dense: bool = True


class IsoCommuteReport(Report):
    algebra: str = ""
    first: str = ""
    second: str = ""
    forward: Dict[str, str] = {}
    fixes_base: bool = False
    deltas_match: bool = False
