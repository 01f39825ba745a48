from __future__ import annotations

from typing import Union, cast

import toml
from pydantic import BaseModel, ValidationError, validator


class Tolerances(BaseModel):
    # absolute floor of every float comparison
    atol: float = 1e-12
    # relative tolerance of equation residuals (float mode only)
    rtol: float = 1e-9
    # allowed spread between parameter estimates taken at different elements
    recovery: float = 1e-7
    # allowed relative deviation between an input pair and its rebuilt pair
    reconstruction: float = 1e-6

    class Config:
        allow_mutation = False

    @validator("atol", "rtol", "recovery", "reconstruction")
    def positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    def with_rtol(self, rtol: float) -> Tolerances:
        return Tolerances(
            atol=self.atol,
            rtol=rtol,
            recovery=self.recovery,
            reconstruction=self.reconstruction,
        )


DEFAULT_TOLERANCES = Tolerances()


class InvalidVersion(ValueError):
    pass


class V1(BaseModel):
    version: int
    tolerance: Tolerances = Tolerances()

    @validator("version", pre=True, always=True)
    def correct_version(cls, v: int) -> int:
        if v != 1:
            raise InvalidVersion("Version must be `1`")
        return v

    @classmethod
    def parse_toml(
        cls, content: str
    ) -> Union[V1, toml.TomlDecodeError, ValidationError]:
        try:
            return cls.parse_obj(cast(dict, toml.loads(content)))
        except (toml.TomlDecodeError, ValidationError) as e:
            return e
