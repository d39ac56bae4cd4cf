from typing import List, Optional

from pydantic import BaseModel, ConfigDict, PositiveInt

from km_forge.models.base import Bounds, OutputFormat

DEFAULT_CAP = 4096


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    command: str
    inputs: List[str] = []
    cap: PositiveInt = DEFAULT_CAP
    depth: PositiveInt = 2
    nvars: PositiveInt = 2
    poset_max: PositiveInt = 3
    chain_max: PositiveInt = 4
    round_cap: PositiveInt = 8
    jobs: PositiveInt = 1
    output_format: OutputFormat = OutputFormat.JSON
    output: Optional[str] = None
    verbosity: int = 0

    @property
    def bounds(self) -> Bounds:
        return Bounds(cap=self.cap, depth=self.depth, nvars=self.nvars)
