"""
Command handlers.

Each handler takes a validated RunConfig and the run's ArtifactRepository,
writes its files and returns the fields of the one-line JSON summary.
"""

from __future__ import annotations

from typing import Callable

from src.core.exceptions import DomainError, NonIntegerGenusError
from src.core.logging import get_logger
from src.models.algebra import SeifertData
from src.models.run_config import RunConfig
from src.models.sampler import ChainConfig, ModelSpec
from src.repositories.artifact_repository import ArtifactRepository
from src.services.algebra_service import AlgebraService, make_seifert
from src.services.branch_tracking import default_grid
from src.services.elliptic_service import EllipticService
from src.services.invariants_service import InvariantsService
from src.services.newton_service import NewtonService
from src.services.p233_service import P233Service
from src.services.root_system_service import RootSystemService
from src.services.sheet_dynamics_service import SheetDynamicsService
from src.services.spectral_curve_service import SpectralCurveService
from src.services.toporec_service import ToporecService
from src.services.torus_curve_service import TorusCurveService
from src.services.two_point_service import TwoPointService
from src.tasks.chain_tasks import run_chains

logger = get_logger(__name__)

CONVEXITY_SCAN_K_MAX = 10.0

Handler = Callable[[RunConfig, ArtifactRepository], dict]


def _require_u(config: RunConfig) -> float:
    if config.u is None:
        raise DomainError(f"command {config.command!r} needs --u")
    return config.u


def _two_two_p(orders: tuple[int, ...]) -> int:
    """p of a (2,2,p) geometry."""
    if len(orders) != 3 or sorted(orders)[:2] != [2, 2]:
        raise DomainError(f"expected a (2,2,p) geometry, got {orders}")
    return sorted(orders)[2]


def _minimal_orbit(seifert: SeifertData, roots: RootSystemService):
    """Minimal orbit for chi > 0, the affine seed orbit for chi = 0, None otherwise."""
    if seifert.chi > 0:
        seed = roots.minimal_orbit_vector()
    elif seifert.chi == 0:
        seed = roots.dynamics.affine_seed()
    else:
        return None
    return roots.dynamics.enumerate_orbit(seed)


def cmd_analyze(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Root system, minimal orbit, skeleton, genus and Newton scaffold of a geometry."""
    seifert = make_seifert(config.orders)
    algebra = AlgebraService(seifert)
    roots = RootSystemService(seifert, algebra)
    report = roots.classify_root_system()
    result: dict = {
        "geometry": list(seifert.orders),
        "chi": seifert.chi,
        "a": seifert.a,
        "root_system": report,
        "convexity": algebra.positivity_scan(CONVEXITY_SCAN_K_MAX),
        "orbit": None,
    }
    orbit = _minimal_orbit(seifert, roots)
    if orbit is not None:
        dynamics: SheetDynamicsService = roots.dynamics
        entry: dict = {"size": orbit.size, "verdict": orbit.describe(), "members": [v.key() for v in orbit.members]}
        if orbit.is_finite:
            graph = dynamics.skeleton(orbit)
            repo.write_text("skeleton.txt", graph.to_edge_list())
            try:
                entry["genus"] = dynamics.orbit_genus(graph)
            except NonIntegerGenusError as e:
                logger.warning("genus_unavailable", error=str(e))
                entry["genus"] = None
            entry["complete"] = dynamics.completeness_check(orbit)
            try:
                entry["newton"] = NewtonService(dynamics).degree_data(orbit)
            except DomainError as e:
                logger.warning("newton_scaffold_unavailable", error=str(e))
                entry["newton"] = None
        result["orbit"] = entry
    if "json" in config.formats:
        repo.write_json("analyze.json", result)
    return {
        "type": report.type,
        "roots": report.root_count,
        "weyl_order": report.weyl_order,
        "d": report.minimal_orbit_order,
        "chi": str(seifert.chi),
        "affine": report.affine,
    }


def _infer_curve_family(orders: tuple[int, ...]) -> str:
    ordered = tuple(sorted(orders))
    if ordered == (2, 2, 2, 2):
        return "elliptic"
    if ordered == (2, 3, 3):
        return "p233"
    if len(ordered) == 2:
        return "torus"
    return "even" if _two_two_p(orders) % 2 == 0 else "odd"


def cmd_curve(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Equilibrium density of a geometry with a closed-form or solved spectral curve."""
    u = _require_u(config)
    family = config.family or _infer_curve_family(config.orders)
    details: dict = {"family": family, "u": u}
    if family in ("even", "odd"):
        service = SpectralCurveService()
        p = _two_two_p(config.orders)
        curve = service.curve_even(p, u) if family == "even" else service.curve_odd(p, u)
        density = service.density(curve, default_grid(service.edge(curve), config.grid))
        details["curve"] = curve.to_dict()
    elif family == "torus":
        if len(config.orders) != 2:
            raise DomainError(f"torus curves take (p, q), got {config.orders}")
        density = TorusCurveService(*config.orders, u).torus_curve()
    elif family == "elliptic":
        solution = EllipticService(u).elliptic_2222()
        density = solution.density
        details["curve"] = solution.to_dict()
    else:
        if config.m2 is None:
            raise DomainError("the (2,3,3) fit needs --m2")
        solution = P233Service(u).p233_fit(config.m2)
        density = solution.density
        details["curve"] = solution.to_dict()
    details.update(mass=density.mass, edge=density.edge, label=density.label)
    if "csv" in config.formats:
        repo.write_csv("density.csv", ["t", "rho"], density.rows())
    if "json" in config.formats:
        repo.write_json("curve.json", details)
    return {"family": family, "mass": density.mass, "edge": density.edge}


def _model_spec(config: RunConfig) -> ModelSpec:
    family = config.family or "A"
    if family == "Torus":
        if len(config.orders) != 2:
            raise DomainError(f"the torus model takes (p, q), got {config.orders}")
        return ModelSpec(family, _require_u(config), config.n, torus=tuple(config.orders))
    return ModelSpec(family, _require_u(config), config.n, orders=tuple(config.orders))


def cmd_mc(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Metropolis histogram of one ensemble, fanned out over --chains."""
    model = _model_spec(config)
    chain = ChainConfig(
        warmup=config.warmup,
        sweeps=config.sweeps,
        seed=config.seed,
        bins=config.bins,
        range=config.range,
        batches=min(20, config.sweeps),
    )
    histogram, manifest = run_chains(model, chain, config.chains)
    if "csv" in config.formats:
        repo.write_csv("histogram.csv", ["t", "rho", "stderr"], histogram.rows())
    if "json" in config.formats:
        repo.write_json("manifest.json", manifest)
    first = histogram.moment(1)
    return {
        "model": model.label,
        "acceptance": histogram.acceptance,
        "mass": histogram.mass,
        "moment_1": first.value,
        "moment_1_stderr": first.stderr,
    }


def cmd_recursion(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Correlator tables, moments and free-energy derivatives of a (2,2,p even) curve."""
    u = _require_u(config)
    p = _two_two_p(config.orders)
    genus = 1 if config.genus is None else config.genus
    service = ToporecService.for_curve(SpectralCurveService().curve_even(p, u))
    table = service.correlator_table(genus, config.legs)
    k = p // 2
    moments = [(g, k, service.moment(table, g, k)) for g in range(genus + 1)]
    free_energy = {g: service.free_energy_derivative(table, g) for g in range(1, genus + 1)}
    if "csv" in config.formats:
        repo.write_csv("moments.csv", ["g", "k", "re", "im"], [(g, k, m.real, m.imag) for g, k, m in moments])
    if "json" in config.formats:
        repo.write_json("correlators.json", {"table": table.to_dict(), "free_energy_derivative": free_energy})
    return {"p": p, "u": u, "genus": genus, "legs": config.legs, "order": table.order}


def _default_ks(p: int) -> list[int]:
    if p % 2 == 0:
        return [p // 2 * (2 * m + 1) for m in range(3)]
    return [2, 4, p]


def cmd_invariants(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Moment table over a u grid plus the singularity locus in the u-plane."""
    p = _two_two_p(config.orders)
    u_grid = config.u_grid or (_require_u(config),)
    genus = 0 if config.genus is None else config.genus
    ks = list(config.ks or _default_ks(p))
    service = InvariantsService()
    rows = service.moment_table(p, u_grid, genus, ks)
    if "csv" in config.formats:
        repo.write_csv("moments.csv", ["p", "u", "g", "k", "value"], [(r.p, r.u, r.g, r.k, r.value) for r in rows])
    if "json" in config.formats:
        repo.write_json(
            "invariants.json",
            {
                "rows": rows,
                "singularity_locus": service.singularity_locus(p),
                "gaussian_limit": {str(u): service.gaussian_limit(p, u) for u in u_grid},
            },
        )
    return {"p": p, "rows": len(rows), "genus": genus}


def cmd_twopoint(config: RunConfig, repo: ArtifactRepository) -> dict:
    """Residue vectors, and for finite orbits the singularity matrix with its sparse split."""
    seifert = make_seifert(config.orders)
    algebra = AlgebraService(seifert)
    service = TwoPointService(seifert, algebra)
    vectors = service.residue_vectors()
    result: dict = {"geometry": list(seifert.orders), "residue_vectors": vectors.to_dict()}
    orbit = _minimal_orbit(seifert, RootSystemService(seifert, algebra))
    if orbit is not None and orbit.is_finite:
        matrix = service.singularity_matrix(orbit, vectors)
        split = service.sparse_decompose(matrix)
        result["singularity_matrix"] = matrix.to_dict()
        result["sparse_decomposition"] = {"plain": split.plain.to_strings(), "sparse": split.sparse.to_dict()}
    if "json" in config.formats:
        repo.write_json("twopoint.json", result)
    return {"orders": len(vectors.vectors), "log_modes": len(vectors.log_modes), "orbit": orbit.size if orbit else None}


COMMANDS: dict[str, Handler] = {
    "analyze": cmd_analyze,
    "curve": cmd_curve,
    "mc": cmd_mc,
    "recursion": cmd_recursion,
    "invariants": cmd_invariants,
    "twopoint": cmd_twopoint,
}
