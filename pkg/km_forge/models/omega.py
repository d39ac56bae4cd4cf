from typing import List, Tuple

from pydantic import BaseModel

from km_forge.models.base import Bounds, Report


class CheckGroup(BaseModel):
    name: str
    instances: int = 0
    passed: bool = True
    details: List[str] = []


class OmegaVerifyReport(Report):
    bound: Bounds = Bounds()
    constants: List[str] = []
    elements: int = 0
    dense_elements: int = 0
    checks: List[CheckGroup] = []


class OmegaDemoReport(Report):
    n0: int
    delta0: str = ""
    iota_impl_delta0: str = ""
    fixed_by_iota: bool = False
    below_constant: bool = False
    constant_in_filter: bool = False
    collapsed_pair: Tuple[str, str] = ("", "")
