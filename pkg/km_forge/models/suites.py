try:
    from enum import StrEnum
except ImportError:
    from strenum import StrEnum
from typing import List

from pydantic import BaseModel

from km_forge.models.base import Bounds, Report, Violation


class SuiteName(StrEnum):
    AXIOMS = "axioms"
    STRUCTURE = "structure"
    TERMS = "terms"
    SCHEMAS = "schemas"
    DENSE = "dense"
    DELTA_IDENTITY = "delta-identity"
    KM = "km"
    TRANSPORT = "transport"
    WORKED_EXAMPLE = "worked-example"
    ONE_STEP = "one-step"
    FREE = "free"
    ISO = "iso"
    WITNESS = "witness"
    COMPLETION = "completion"
    VARIETY = "variety"
    OMEGA = "omega"
    DUALITY = "duality"
    COMPARE = "compare"
    OPEN_STATEMENT = "open-statement"


class SuiteResult(BaseModel):
    suite: SuiteName
    bound: Bounds = Bounds()
    instances: int = 0
    violations: List[Violation] = []
    # recorded observations that are not contract failures
    findings: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.violations


class VerifyAllReport(Report):
    bound: Bounds = Bounds()
    algebras: List[str] = []
    suites: List[SuiteResult] = []
