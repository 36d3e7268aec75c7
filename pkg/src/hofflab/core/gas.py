from pydantic import Field, field_validator

from hofflab.utilities.types import FrozenModel


class GasParams(FrozenModel):
    """
    Physical constants of the heat-conducting ideal gas.

    The adiabatic exponent is derived, `gamma = R / cv + 1`, and never stored
    on its own.
    """

    mu: float = Field(description="Viscosity.")
    R: float = Field(default=1.0, description="Gas constant.")
    cv: float = Field(default=1.0, description="Specific heat at constant volume.")
    kappa: float = Field(default=0.0, description="Heat conductivity.")

    @field_validator("mu")
    @classmethod
    def _validate_mu(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("μ > 0")
        return v

    @field_validator("R")
    @classmethod
    def _validate_R(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("R > 0")
        return v

    @field_validator("cv")
    @classmethod
    def _validate_cv(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("cv > 0")
        return v

    @field_validator("kappa")
    @classmethod
    def _validate_kappa(cls, v: float) -> float:
        if not v >= 0:
            raise ValueError("κ ≥ 0")
        return v

    @property
    def gamma(self) -> float:
        return self.R / self.cv + 1.0

    def with_kappa(self, kappa: float) -> "GasParams":
        return GasParams(mu=self.mu, R=self.R, cv=self.cv, kappa=kappa)
