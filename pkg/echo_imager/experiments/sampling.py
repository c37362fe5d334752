"""
Seeded multinomial sampling and replication over a worker pool.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from echo_imager import settings
from echo_imager.base.batching import Batcher
from echo_imager.base.exceptions import ConfigError
from echo_imager.experiments.records import TrialBatch


logger = logging.getLogger(__name__)


def generator(seed, algorithm=settings.RNG_ALGORITHM):
    """``numpy`` generator on the named bit generator; ``seed`` may be a ``SeedSequence``."""
    try:
        bit_generator = getattr(np.random, algorithm)
    except AttributeError:
        raise ConfigError(f'unknown bit generator {algorithm!r}', {'run.rng': [algorithm]})
    return np.random.Generator(bit_generator(seed))


def _entropy(seed):
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.entropy) if not seed.spawn_key else None
    return None if seed is None else int(seed)


def sample(dist, trials, seed, algorithm=settings.RNG_ALGORITHM):
    """Draw the outcome counts of ``trials`` independent repetitions of ``dist``."""
    if trials <= 0:
        raise ConfigError('the number of trials must be positive', {'run.trials': [str(trials)]})
    dist.validate()
    probabilities = np.clip(dist.probabilities, 0., None)
    counts = generator(seed, algorithm).multinomial(trials, probabilities / probabilities.sum())
    return TrialBatch({
        'labels': [str(outcome) for outcome in dist.outcomes],
        'counts': counts.tolist(),
        'trials': int(trials),
        'seed': _entropy(seed),
        'algorithm': algorithm,
    })


def spawn_seeds(seed, count):
    """One independent child seed per replication index."""
    return np.random.SeedSequence(seed).spawn(count)


def replicate(task, replications, seed, threads=settings.THREADS):
    """
    Run ``task(index, seed_sequence)`` for every replication index.

    Indices are split into one contiguous batch per worker. The results come
    back in index order, so they do not depend on ``threads``.
    """
    seeds = spawn_seeds(seed, replications)
    batcher = Batcher.for_workers(replications, threads)

    def run_batch(batch):
        return [task(index, seeds[index]) for index in batch]

    if threads <= 1 or len(batcher) <= 1:
        pages = [run_batch(batch) for batch in batcher]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pages = list(pool.map(run_batch, batcher))
    logger.debug('%d replications in %d batches on %d threads', replications, len(batcher), threads)
    return [result for page in pages for result in page]
