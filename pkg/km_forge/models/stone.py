from typing import Dict, List

from km_forge.models.base import Bounds, Report


class SpectrumReport(Report):
    algebra: str = ""
    # each prime filter as the names of its members
    primes: List[List[str]] = []
    order: List[List[bool]] = []
    # element name -> indices of the primes containing it
    sigma: Dict[str, List[int]] = {}


class SigmaPlusReport(Report):
    algebra: str = ""
    anchor: str = ""
    sigma_plus: List[int] = []
    is_up_set: bool = True
    equals_sigma_of_delta: bool = True


class CompareReport(Report):
    algebra: str = ""
    anchor: str = ""
    delta_subalgebra_size: int = 0
    well_defined: bool = False
    injective: bool = False
    surjective: bool = False
    mapping: Dict[str, str] = {}

    @property
    def agree(self) -> bool:
        return self.well_defined and self.injective and self.surjective


class OpenStatementReport(Report):
    algebra: str = ""
    anchor: str = ""
    bound: Bounds = Bounds()
    instances: int = 0
    # every term function of the up-set algebra was reached within the depth bound
    exhausted: bool = False
    counterexamples: List[Dict[str, str]] = []
