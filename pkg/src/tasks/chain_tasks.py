"""
Parallel Monte Carlo chains.

Logic Flow:
1. The root seed is split into one SeedSequence per chain
2. Chains run in a process pool capped by settings.max_workers
3. Histograms are merged in chain-index order
4. A manifest records model, config, seeds, acceptance and wall time
"""
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from src.core.config import settings
from src.core.logging import get_logger
from src.models.reports import RunManifest
from src.models.sampler import ChainConfig, Histogram, ModelSpec
from src.repositories.artifact_repository import config_hash
from src.services.mc_sampler_service import MonteCarloService, default_range

logger = get_logger(__name__)


def run_single_chain(model: ModelSpec, config: ChainConfig, seed: np.random.SeedSequence) -> Histogram:
    """Worker entry point; module level so the process pool can pickle it"""
    return MonteCarloService().run_chain(model, config, seed=seed)


def chain_seeds(seed: int, chains: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(chains)


def run_chains(model: ModelSpec, config: ChainConfig, chains: int = 1) -> tuple[Histogram, RunManifest]:
    """
    Run independent chains and merge their histograms.

    Every chain gets its own spawned seed, so the merged result depends only on
    (model, config, chains) and not on scheduling.
    """
    if chains > 1 and config.range is None:
        config = replace(config, range=default_range(model))
    seeds = chain_seeds(config.seed, chains)
    workers = min(chains, settings.max_workers)
    start = time.perf_counter()
    logger.info("chains_started", model=model.label, chains=chains, workers=workers)

    if workers <= 1:
        parts = [run_single_chain(model, config, s) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_single_chain, [model] * chains, [config] * chains, seeds))

    merged = Histogram.merge(parts)
    wall_time = time.perf_counter() - start
    manifest = RunManifest(
        model=model.to_dict(),
        config=config.to_dict(),
        seeds=[int(s.generate_state(1)[0]) for s in seeds],
        chains=chains,
        acceptance_rate=merged.acceptance,
        wall_time=wall_time,
        config_hash=config_hash({"model": model.to_dict(), "config": config.to_dict(), "chains": chains}),
    )
    logger.info("chains_finished", model=model.label, chains=chains, wall_time=wall_time)
    return merged, manifest
