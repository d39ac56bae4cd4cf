from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from km_forge.models.base import Bounds, Report, SchemaId


class IdentityResult(BaseModel):
    holds: bool
    lhs: str = ""
    rhs: str = ""
    # variable name -> element name
    counterexample: Optional[Dict[str, str]] = None


class SchemaReport(Report):
    model_config = ConfigDict(populate_by_name=True)

    schema_id: SchemaId = Field(alias="schema")
    algebra: str = ""
    bound: Bounds = Bounds()
    instances: int = 0
    # distinct term functions checked, for the schemas quantifying over formulas
    functions: int = 0
