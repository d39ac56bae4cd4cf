from typing import Dict, List, Optional

from pydantic import BaseModel

from km_forge.models.base import KMAxiom, Report


class DenseCharacterization(BaseModel):
    element: str
    dense: bool
    implication_below: bool
    join_form: bool
    join_witness: Optional[str] = None

    @property
    def agree(self) -> bool:
        return self.dense == self.implication_below == self.join_form


class DenseReport(Report):
    algebra: str = ""
    anchor: str = ""
    members: List[str] = []
    least: Optional[str] = None
    characterizations: List[DenseCharacterization] = []


class DeltaReport(Report):
    algebra: str = ""
    # element name -> name of its least dense element
    delta: Dict[str, str] = {}


class KMAxiomCheck(BaseModel):
    axiom: KMAxiom
    passed: bool
    witness: List[str] = []


class KMAxiomReport(Report):
    algebra: str = ""
    delta: Dict[str, str] = {}
    checks: List[KMAxiomCheck] = []
    matches_least_dense: bool = True


class DeltaTransport(BaseModel):
    element: str
    hypothesis: bool
    commutes: bool
