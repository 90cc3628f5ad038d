import numpy as np
import pytest

from abloc import BENCHMARK_AGENTS, generate_dataset, benchmark_config
from abloc.kernels import _numpy

try:
    from abloc.kernels import _numba
except ImportError:  # pragma: no cover
    _numba = None

BACKENDS = [pytest.param(_numpy, id="numpy")]
if _numba is not None:
    BACKENDS.append(pytest.param(_numba, id="numba"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def bench_agents():
    return list(BENCHMARK_AGENTS)


@pytest.fixture(scope="session")
def bench_cfg():
    return benchmark_config(seed=42)


@pytest.fixture(scope="session")
def bench_data(bench_cfg):
    return generate_dataset(bench_cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
