import os

from dotenv import load_dotenv
from pydantic_settings import BaseSettings

load_dotenv()


class Config(BaseSettings):
    APP_NAME: str = "seifert-spectral"
    LOG_LEVEL: str = "INFO"
    JSON_LOGS: bool = True
    LOG_FILE: str | None = None

    # Concurrency
    SEIFERT_SPECTRAL_THREADS: int | None = None

    # Orbit and root-system enumeration
    ORBIT_CAP: int = 1_000_000
    ROOT_CLOSURE_CAP: int = 100_000
    SCAN_SAMPLES: int = 400

    # Numerics
    KAPPA_TOL: float = 1e-13
    QUAD_NODES: int = 200

    # Topological recursion
    CONTOUR_NODES: int = 512
    TRUNCATION_RETRIES: int = 2

    # Monte Carlo profiles
    DEFAULT_PROFILE: str = "desk"
    DESK_N: int = 100
    DESK_WARMUP: int = 1_000
    DESK_SWEEPS: int = 10_000
    PAPER_N: int = 200
    PAPER_WARMUP: int = 10_000
    PAPER_SWEEPS: int = 1_000_000

    # Output
    OUTPUT_DIR: str = "out"

    @property
    def max_workers(self):
        return self.SEIFERT_SPECTRAL_THREADS or os.cpu_count() or 1

    def profile(self, name: str | None = None) -> dict[str, int]:
        name = name or self.DEFAULT_PROFILE
        if name == "paper":
            return {"n": self.PAPER_N, "warmup": self.PAPER_WARMUP, "sweeps": self.PAPER_SWEEPS}
        if name == "desk":
            return {"n": self.DESK_N, "warmup": self.DESK_WARMUP, "sweeps": self.DESK_SWEEPS}
        raise ValueError(f"Unknown profile {name!r}")


settings = Config()
