try:
    from enum import StrEnum
except ImportError:
    from strenum import StrEnum
from enum import IntEnum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict

from km_forge import utils

SCHEMA_VERSION = "km-forge/1"


class ExitCode(IntEnum):
    OK = 0
    INPUT_ERROR = 1
    CONTRACT_VIOLATION = 2
    CAP_EXCEEDED = 3


class OutputFormat(StrEnum):
    JSON = "json"
    DOT = "dot"
    TEXT = "text"


class AxiomGroup(StrEnum):
    ORDER = "order"
    LATTICE = "lattice"
    DISTRIBUTIVITY = "distributivity"
    RESIDUATION = "residuation"
    BOUNDS = "bounds"


class SchemaId(StrEnum):
    MAINTOOL = "maintool"
    EQLEMMA = "eqlemma"
    EQD = "eqD"
    CONGRUENCE = "congruence"
    FACTORIZATION = "factorization"

    @classmethod
    def new(cls, schema: Union["SchemaId", str]) -> "SchemaId":
        if isinstance(schema, cls):
            return schema
        return utils.str_to_enum(cls, schema)


class KMAxiom(StrEnum):
    INFLATIONARY = "x <= Dx"
    RETRACTIVE = "Dx -> x = x"
    BOUNDED = "Dx <= y | (y -> x)"


class TheoremPart(StrEnum):
    LEAST_DELTA_CLASS = "a"
    INJECTIVE = "b"
    DELTA_PRESERVED = "c"
    PARTOOL = "partool"
    FINDONE = "findone"
    IOTA_IDENTITY = "iota-identity"


class IndexKind(StrEnum):
    FINITE = "finite"
    PRODUCT = "product"


class PieceKind(StrEnum):
    CONST = "const"
    SHIFT = "shift"


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str = ""
    message: str = ""
    # element names or indices that exhibit the failure
    witness: Dict[str, Any] = {}


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    violations: List[Violation] = []

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)


class Bounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    cap: Optional[int] = None
    depth: Optional[int] = None
    nvars: Optional[int] = None
    poset_max: Optional[int] = None
    chain_max: Optional[int] = None
    # sample horizon for symbolic maps
    horizon: Optional[int] = None
