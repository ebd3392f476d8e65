from typing import Literal, Optional, get_args

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.config import settings

Command = Literal["analyze", "curve", "mc", "recursion", "invariants", "twopoint"]
CurveFamily = Literal["even", "odd", "torus", "elliptic", "p233"]
McFamily = Literal["A", "B", "C", "D", "Torus"]
OutputFormat = Literal["csv", "json"]


class RunConfig(BaseModel):
    """Parsed command line of one run, hashed into every artifact it writes."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    orders: tuple[int, ...] = Field(..., min_length=1)
    family: Optional[str] = None
    u: Optional[float] = Field(None, gt=0)
    u_grid: Optional[tuple[float, ...]] = None
    n: Optional[int] = Field(None, ge=2)
    warmup: Optional[int] = Field(None, ge=0)
    sweeps: Optional[int] = Field(None, ge=1)
    seed: int = Field(0, ge=0)
    bins: int = Field(100, ge=1)
    range: Optional[tuple[float, float]] = None
    chains: int = Field(1, ge=1)
    profile: Literal["desk", "paper"] = "desk"
    genus: Optional[int] = Field(None, ge=0)
    legs: int = Field(1, ge=1)
    grid: int = Field(201, ge=3)
    ks: Optional[tuple[int, ...]] = None
    m2: Optional[float] = None
    out: str = settings.OUTPUT_DIR
    formats: tuple[OutputFormat, ...] = ("csv", "json")

    @field_validator("u_grid")
    @classmethod
    def validate_u_grid(cls, v: Optional[tuple[float, ...]]) -> Optional[tuple[float, ...]]:
        """Every grid value must be positive."""
        if v is not None and (not v or any(u <= 0 for u in v)):
            raise ValueError("u grid values must be > 0")
        return v

    @model_validator(mode="after")
    def validate_family(self) -> "RunConfig":
        """The family flag means a curve family for `curve` and an ensemble for `mc`."""
        if self.family is None:
            return self
        allowed = get_args(CurveFamily) if self.command == "curve" else get_args(McFamily)
        if self.command not in ("curve", "mc") or self.family not in allowed:
            raise ValueError(f"family {self.family!r} is not valid for command {self.command!r}")
        return self

    @property
    def geometry(self) -> str:
        return " ".join(str(am) for am in self.orders)

    def resolved(self) -> "RunConfig":
        """Fill N, warm-up and sweeps from the profile where no flag set them."""
        profile = settings.profile(self.profile)
        return self.model_copy(
            update={
                "n": self.n if self.n is not None else profile["n"],
                "warmup": self.warmup if self.warmup is not None else profile["warmup"],
                "sweeps": self.sweeps if self.sweeps is not None else profile["sweeps"],
            }
        )

    def hash_payload(self) -> dict:
        """Everything that determines the outputs; the output directory does not."""
        return self.model_dump(mode="json", exclude={"out"})
