from typing import List, Optional

from pydantic import BaseModel, ConfigDict, NonNegativeInt, model_validator

from km_forge.models.base import AxiomGroup, Report


class AxiomCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: AxiomGroup
    passed: bool
    # element names of the first failing tuple, in enumeration order
    witness: List[str] = []
    detail: str = ""


class ValidationReport(Report):
    algebra: str = ""
    size: int = 0
    checks: List[AxiomCheck] = []


class PosetDocument(BaseModel):
    points: NonNegativeInt
    leq: List[List[bool]]
    labels: Optional[List[str]] = None


# An algebra file holds either an order table over named elements or a poset whose up-sets form the algebra.
# Operation tables are never read from input.
class AlgebraDocument(BaseModel):
    name: Optional[str] = None
    elements: Optional[List[str]] = None
    leq: Optional[List[List[bool]]] = None
    poset: Optional[PosetDocument] = None

    @model_validator(mode="after")
    def check_one_form(self) -> "AlgebraDocument":
        if self.poset is not None:
            if self.elements is not None or self.leq is not None:
                raise ValueError("use either 'poset' or 'elements'/'leq', not both")
        elif self.elements is None or self.leq is None:
            raise ValueError("need 'elements' and 'leq', or 'poset'")
        return self
