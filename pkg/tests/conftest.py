import os

import pytest

from cvpower.montecarlo import run_scenario, scenario_key

TEST_WORKERS = int(os.environ.get("CVPOWER_TEST_WORKERS", "1"))


@pytest.fixture(scope="session")
def scenario_cache():
    """Memoize scenario runs so criteria sharing a scenario pay once."""
    cache = {}

    def run(cfg, workers=TEST_WORKERS):
        key = (scenario_key(cfg), cfg.master_seed, cfg.repetitions, cfg.alpha, cfg.beta)
        if key not in cache:
            cache[key] = run_scenario(cfg, workers=workers)
        return cache[key]

    return run
