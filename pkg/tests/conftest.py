import pytest

from plaplab import (
    Exponential,
    ProblemSpec,
    lambda_star_estimate,
    make_grid,
    minimal_iterate,
)


@pytest.fixture(scope="session")
def grid2000():
    return make_grid(1e-8, 2000)


@pytest.fixture(scope="session")
def gelfand_disk_spec():
    return ProblemSpec(2.0, 2.0, Exponential(1.0))


@pytest.fixture(scope="session")
def minimal_disk_lam1(gelfand_disk_spec, grid2000):
    prof = minimal_iterate(gelfand_disk_spec, 1.0, grid2000)
    assert not isinstance(prof, tuple)
    return prof


@pytest.fixture(scope="session")
def continuation_disk(gelfand_disk_spec, grid2000):
    return lambda_star_estimate(gelfand_disk_spec, grid2000)


@pytest.fixture(scope="session")
def continuation_12_2(grid2000):
    spec = ProblemSpec(12.0, 2.0, Exponential(1.0))
    return lambda_star_estimate(spec, grid2000)


@pytest.fixture(scope="session")
def continuation_10_3(grid2000):
    spec = ProblemSpec(10.0, 3.0, Exponential(1.0))
    return lambda_star_estimate(spec, grid2000)
