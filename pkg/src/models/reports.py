"""
Report models for algebraic data.

These are the serializable records returned by the algebra, sheet-dynamics
and invariants services.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field


class PositivityVerdict(BaseModel):
    """Outcome of a grid scan of the convexity symbol."""
    kind: Literal["PositiveOnGrid", "NegativeAt"]
    k: Optional[float] = None
    value: float
    samples: int

    @property
    def message(self) -> str:
        if self.kind == "PositiveOnGrid":
            return "numerically positive on grid"
        return f"negative at k={self.k:.6g}"


class RootSystemReport(BaseModel):
    """ADE identification of the reduced root system of a geometry."""
    rank: int
    type: str = Field(..., description="A_n, D_n, E6, E7, E8 or Infinite")
    root_count: Optional[int] = None
    weyl_order: Optional[int] = None
    minimal_orbit_order: Optional[int] = None
    affine: Optional[str] = Field(None, description="affine label such as A3-hat when chi = 0")
    chi: str
    coxeter_matches: Optional[bool] = None


class SlopeEntry(BaseModel):
    """One slope (n0, direction) of the Newton polygon with its cyclotomic polynomial."""
    n0: int
    direction: int
    multiplicity: int
    roots: list[int] = Field(..., description="exponents n1 mod a of the roots zeta_a^n1")
    polynomial: list[int] = Field(..., description="integer coefficients, highest degree first")


class BoundaryTerm(BaseModel):
    """Boundary monomial coefficient * c^c_power * x^x_power * y^y_power."""
    y_power: int
    x_power: int
    coefficient: int
    c_power: int


class NewtonScaffold(BaseModel):
    """Newton-polygon data fixed by the growth of an orbit."""
    slopes: list[SlopeEntry]
    deg_x: int
    deg_y: int
    minimal_x_power: int
    boundary: list[BoundaryTerm]
    tilde_power: int


class LogMode(BaseModel):
    k: int
    order: int


class SingularityLocus(BaseModel):
    """Singular values of kappa and u for the (2,2,p) family."""
    p: int
    kappa_star: float
    s_value: float
    u_values: list[complex]
    period: complex
    note: str = "u = 0 removed"


class MomentRequest(BaseModel):
    """One planar or higher-genus moment <Tr U^k>^(g) of a (2,2,p) curve."""
    p: int = Field(..., ge=2)
    u: float = Field(..., gt=0)
    k: int
    g: int = Field(0, ge=0)

    @property
    def parity(self) -> Literal["even", "odd"]:
        return "even" if self.p % 2 == 0 else "odd"


class MomentRow(BaseModel):
    """CSV row (p, u, g, k, value) of a moment table."""
    p: int
    u: float
    g: int
    k: int
    value: float


class BCDComparison(BaseModel):
    """BCD histogram at u against the A-series histogram at 2u."""
    family: str
    window: float
    l1_outside: float = Field(..., description="L1 distance restricted to |t| >= window")
    peak_mass: float = Field(..., description="N times the excess mass inside |t| < window")
    expected_mass: Optional[float] = None


class RunManifest(BaseModel):
    """Provenance record written next to every Monte Carlo histogram."""
    model: dict
    config: dict
    seeds: list[int]
    chains: int
    acceptance_rate: float
    wall_time: float
    config_hash: str
